//! Subcommand orchestration behind the `igusa` binary. Every command returns
//! its output as text plus an exit code, so it can be driven in-process.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};
use thiserror::Error;

pub use crate::mpoly::parse_polynomial;

use crate::euclid::{mu_nu_sums, orbit, EuclidError};
use crate::mpoly::{MpolyError, Polynomial};
use crate::newton::{NewtonError, NewtonPolyhedron};
use crate::noncrit::{check_noncritical, Mode, NonCritParams};
use crate::numeric::{rational_string, NumericError, PrimeSpec};
use crate::oracle::{count_mod, default_depth, measure_series, verify_theorem, OracleError, DEFAULT_BUDGET};
use crate::spf::{spf_evaluate, ResidueDomain, SpfError, DEFAULT_DEPTH_GUARD};
use crate::tsden::{self, TsdenError};

pub const SCHEMA: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Poles,
    Spf,
    Count,
    Verify,
    Phi,
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "analyze" => Command::Analyze,
            "poles" => Command::Poles,
            "spf" => Command::Spf,
            "count" => Command::Count,
            "verify" => Command::Verify,
            "phi" => Command::Phi,
            _ => return Err(CliError::Usage(format!("unknown command `{s}`"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Tsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DomainChoice {
    #[default]
    Full,
    Torus,
}

/// Inputs shared by all subcommands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisRequest {
    pub f_text: Option<String>,
    pub g_text: Option<String>,
    pub prime: u64,
    pub depth: usize,
    pub max_deg: Option<usize>,
    pub budget: u64,
    pub mode: Mode,
    pub format: Format,
    pub verbose: bool,
    pub domain: DomainChoice,
    pub c: Option<i64>,
    pub d: Option<i64>,
    pub c_tilde: i64,
    pub d_tilde: i64,
}

impl Default for AnalysisRequest {
    fn default() -> Self {
        AnalysisRequest {
            f_text: None,
            g_text: None,
            prime: 5,
            depth: 8,
            max_deg: None,
            budget: DEFAULT_BUDGET,
            mode: Mode::ExactSmall,
            format: Format::Json,
            verbose: false,
            domain: DomainChoice::Full,
            c: None,
            d: None,
            c_tilde: 1,
            d_tilde: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(#[from] MpolyError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Newton(#[from] NewtonError),
    #[error(transparent)]
    Tsden(#[from] TsdenError),
    #[error(transparent)]
    Spf(#[from] SpfError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Euclid(#[from] EuclidError),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Parse(_) => "parse",
            CliError::Numeric(_) => "numeric",
            CliError::Newton(_) => "newton",
            CliError::Tsden(_) => "denominator",
            CliError::Spf(_) => "spf",
            CliError::Oracle(_) => "oracle",
            CliError::Euclid(_) => "euclid",
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "schema": SCHEMA, "error": { "kind": self.kind(), "message": self.to_string() } })
    }
}

/// Text written to standard output and standard error, and the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl fmt::Display for CliOutput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.stdout)
    }
}

fn with_schema(mut v: Value) -> Value {
    if let Value::Object(map) = &mut v {
        map.insert("schema".into(), json!(SCHEMA));
    }
    v
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn required<'a>(text: &'a Option<String>, flag: &str) -> Result<&'a str, CliError> {
    text.as_deref().ok_or_else(|| CliError::Usage(format!("missing required flag {flag}")))
}

fn nonzero(text: &str) -> Result<Polynomial, CliError> {
    let f = parse_polynomial(text)?;
    if f.is_zero() {
        return Err(MpolyError::ZeroPolynomial.into());
    }
    Ok(f)
}

fn pair(req: &AnalysisRequest) -> Result<(Polynomial, Polynomial), CliError> {
    let f = nonzero(required(&req.f_text, "-f")?)?;
    let g = nonzero(required(&req.g_text, "-g")?)?;
    if let Some(v) = f.vars().iter().find(|v| g.vars().contains(v)) {
        return Err(CliError::Usage(format!("variable `{v}` occurs in both -f and -g")));
    }
    Ok((f, g))
}

fn describe(f: &Polynomial, req: &AnalysisRequest) -> Result<Value, CliError> {
    let poly = NewtonPolyhedron::build(f)?;
    let params = NonCritParams { reduction_prime: Some(PrimeSpec::new(req.prime)?), ..NonCritParams::default() };
    let report = check_noncritical(f, req.mode, &params)?;
    Ok(json!({
        "polynomial": f.to_string(),
        "polyhedron": poly.to_json(),
        "noncritical": report,
    }))
}

fn facet_tsv(label: &str, f: &Polynomial) -> Result<String, CliError> {
    let poly = NewtonPolyhedron::build(f)?;
    let mut out = String::new();
    for facet in poly.facets() {
        let normal: Vec<String> = facet.normal.iter().map(i64::to_string).collect();
        out.push_str(&format!("{label}\t{}\t{}\n", normal.join(","), facet.m_value));
    }
    Ok(out)
}

fn analyze(req: &AnalysisRequest) -> Result<String, CliError> {
    let f = nonzero(required(&req.f_text, "-f")?)?;
    let g = req.g_text.as_deref().map(nonzero).transpose()?;
    if req.format == Format::Tsv {
        let mut out = String::from("poly\tnormal\tm\n");
        out.push_str(&facet_tsv("f", &f)?);
        if let Some(g) = &g {
            out.push_str(&facet_tsv("g", g)?);
        }
        return Ok(out);
    }
    let mut v = json!({ "f": describe(&f, req)? });
    if g.is_some() {
        let (f, g) = pair(req)?;
        v["g"] = describe(&g, req)?;
        let den = tsden::denominator(&f, &g)?;
        v["denominator"] = den.to_json();
        v["denominator_text"] = json!(den.to_text());
    }
    Ok(pretty(&with_schema(v)))
}

fn poles(req: &AnalysisRequest) -> Result<String, CliError> {
    let (f, g) = pair(req)?;
    let den = tsden::denominator(&f, &g)?;
    let poles = den.candidate_poles().strings();
    if req.format == Format::Tsv {
        return Ok(poles.iter().map(|p| format!("{p}\n")).collect());
    }
    let mut v = json!({ "poles": poles, "denominator": den.to_text() });
    if let Some(w) = &den.warning {
        v["warning"] = json!(w);
    }
    Ok(pretty(&with_schema(v)))
}

fn spf(req: &AnalysisRequest) -> Result<String, CliError> {
    let f = nonzero(required(&req.f_text, "-f")?)?;
    let p = PrimeSpec::new(req.prime)?;
    let domain = match req.domain {
        DomainChoice::Full => ResidueDomain::full(f.nvars(), p),
        DomainChoice::Torus => ResidueDomain::unit_torus(f.nvars(), p),
    };
    let (z, trace) = spf_evaluate(&f, &domain, p, DEFAULT_DEPTH_GUARD)?;
    let series = z.expand(req.depth);
    if req.format == Format::Tsv {
        let mut out = String::from("m\tcoefficient\n");
        for (m, c) in series.strings().iter().enumerate() {
            out.push_str(&format!("{m}\t{c}\n"));
        }
        return Ok(out);
    }
    let mut v = json!({
        "zeta": z.to_json(),
        "series": series.strings(),
        "recursion_depth": trace.depth(),
    });
    if req.verbose {
        v["trace"] = serde_json::to_value(&trace).expect("trace serializes");
    }
    Ok(pretty(&with_schema(v)))
}

fn count(req: &AnalysisRequest) -> Result<String, CliError> {
    let f = nonzero(required(&req.f_text, "-f")?)?;
    let p = PrimeSpec::new(req.prime)?;
    let c = count_mod(&f, p, req.depth, None, req.budget)?;
    let series = measure_series(&c);
    let counts: Vec<String> = c.counts.iter().map(rational_string).collect();
    if req.format == Format::Tsv {
        let mut out = String::from("m\tN_m\tcoefficient\n");
        for (m, s) in series.strings().iter().enumerate() {
            let n = if m == 0 { "1".to_string() } else { counts[m - 1].clone() };
            out.push_str(&format!("{m}\t{n}\t{s}\n"));
        }
        return Ok(out);
    }
    let ints: Vec<Value> = counts.iter().map(|s| s.parse::<u64>().map_or(json!(s), |x| json!(x))).collect();
    Ok(pretty(&with_schema(json!({
        "polynomial": f.to_string(),
        "p": p.get(),
        "depth": req.depth,
        "counts": ints,
        "series": series.strings(),
        "truncated": c.truncated,
        "nodes": c.nodes,
        "tested": c.tested,
    }))))
}

fn verify(req: &AnalysisRequest) -> Result<(String, bool), CliError> {
    let (f, g) = pair(req)?;
    let p = PrimeSpec::new(req.prime)?;
    let max_deg = match req.max_deg {
        Some(k) => k,
        None => {
            let den = tsden::denominator(&f, &g)?;
            let factors: Vec<(u64, u64)> = den.factor_powers().iter().map(|&(a, b)| (a as u64, b as u64)).collect();
            let order = default_depth(&factors, 0);
            req.depth.saturating_sub(order).min(req.depth.saturating_sub(3))
        }
    };
    let report = verify_theorem(&f, &g, p, req.depth, max_deg, req.budget)?;
    let out = if req.format == Format::Tsv {
        let mut s = String::from("m\tcoefficient\tresidual\n");
        let skip = max_deg + 1;
        for (m, c) in report.series.strings().iter().enumerate() {
            let r = if m >= skip { rational_string(&report.residuals[m - skip]) } else { String::new() };
            s.push_str(&format!("{m}\t{c}\t{r}\n"));
        }
        s
    } else {
        pretty(&with_schema(report.to_json()))
    };
    Ok((out, report.success))
}

fn phi(req: &AnalysisRequest) -> Result<String, CliError> {
    let c = req.c.ok_or_else(|| CliError::Usage("missing required flag -c".into()))?;
    let d = req.d.ok_or_else(|| CliError::Usage("missing required flag -d".into()))?;
    let o = orbit(c, d)?;
    let sums = mu_nu_sums(&o, req.c_tilde, req.d_tilde);
    if req.format == Format::Tsv {
        return Ok(format!("{}\n{}", o.to_tsv(), sums.to_tsv()));
    }
    Ok(pretty(&with_schema(json!({ "orbit": o, "sums": sums }))))
}

/// Run one subcommand. Exit code 0 on success, 2 when `verify` finds a
/// nonzero residual, 1 on any error (rendered as JSON on standard error).
pub fn run(cmd: Command, req: &AnalysisRequest) -> CliOutput {
    let result = match cmd {
        Command::Analyze => analyze(req).map(|s| (s, true)),
        Command::Poles => poles(req).map(|s| (s, true)),
        Command::Spf => spf(req).map(|s| (s, true)),
        Command::Count => count(req).map(|s| (s, true)),
        Command::Verify => verify(req),
        Command::Phi => phi(req).map(|s| (s, true)),
    };
    match result {
        Ok((stdout, ok)) => CliOutput { code: if ok { 0 } else { 2 }, stdout, stderr: String::new() },
        Err(e) => CliOutput { code: 1, stdout: String::new(), stderr: pretty(&e.to_json()) },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn req(f: Option<&str>, g: Option<&str>) -> AnalysisRequest {
        AnalysisRequest {
            f_text: f.map(String::from),
            g_text: g.map(String::from),
            ..AnalysisRequest::default()
        }
    }

    fn parse(out: &CliOutput) -> Value {
        serde_json::from_str(&out.stdout).unwrap()
    }

    #[test]
    fn parse_examples() {
        let f = parse_polynomial("x^2 + y^3").unwrap();
        assert_eq!(f.num_terms(), 2);
        assert!(parse_polynomial("3x - 3x").unwrap().is_zero());
        let f = parse_polynomial("x1^2*x2 + 5").unwrap();
        assert_eq!(f.constant_term(), 5.into());
    }

    #[test]
    fn poles_command() {
        let out = run(Command::Poles, &req(Some("x^2"), Some("y^3")));
        assert_eq!(out.code, 0);
        let v = parse(&out);
        assert_eq!(v["poles"], json!(["-1", "-5/6"]));
        assert_eq!(v["schema"], json!(1));
    }

    #[test]
    fn phi_command() {
        let r = AnalysisRequest { c: Some(2), d: Some(3), ..AnalysisRequest::default() };
        let v = parse(&run(Command::Phi, &r));
        assert_eq!(v["orbit"]["period"], json!(4));
        let tsv = run(Command::Phi, &AnalysisRequest { format: Format::Tsv, ..r });
        assert!(tsv.stdout.starts_with("k\tc_k\td_k\n"));
    }

    #[test]
    fn errors_exit_one() {
        let out = run(Command::Poles, &req(Some("x^"), Some("y")));
        assert_eq!(out.code, 1);
        let v: Value = serde_json::from_str(&out.stderr).unwrap();
        assert_eq!(v["error"]["kind"], json!("parse"));
        assert_eq!(run(Command::Verify, &req(Some("x"), None)).code, 1);
        assert_eq!(run(Command::Poles, &req(Some("x"), Some("x^2"))).code, 1);
        assert_eq!(run(Command::Spf, &req(Some("x - x"), None)).code, 1);
    }

    #[test]
    fn count_and_spf_commands() {
        let v = parse(&run(Command::Count, &AnalysisRequest { depth: 2, ..req(Some("x^2"), None) }));
        assert_eq!(v["counts"], json!([1, 5]));
        let v = parse(&run(Command::Spf, &req(Some("x"), None)));
        assert_eq!(v["zeta"]["factors"], json!([{ "qpow": 1, "tpow": 1 }]));
        assert!(v.get("trace").is_none());
        let v = parse(&run(Command::Spf, &AnalysisRequest { verbose: true, ..req(Some("x^2 - 5"), None) }));
        assert_eq!(v["trace"]["children"][0]["e"], json!(1));
    }
}
