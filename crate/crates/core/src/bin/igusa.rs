use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use igusa::cli::{run, AnalysisRequest, Command, DomainChoice, Format};
use igusa::noncrit::Mode;

#[derive(Parser)]
#[command(name = "igusa", version, about = "Igusa zeta data of Thom-Sebastiani sums")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Newton polyhedra, non-criticality and the denominator.
    Analyze(Opts),
    /// Candidate poles of Z(f + g; s).
    Poles(Opts),
    /// Stationary phase evaluation of Z(f; s).
    Spf(Opts),
    /// Solution counts modulo p^m and the measure series.
    Count(Opts),
    /// Test the claimed denominator against counted series.
    Verify(Opts),
    /// Orbit of the subtractive map and its mu/nu sums.
    Phi(Opts),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Heuristic,
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainArg {
    Full,
    Torus,
}

#[derive(Args)]
struct Opts {
    #[arg(short = 'f')]
    f: Option<String>,
    #[arg(short = 'g')]
    g: Option<String>,
    #[arg(short = 'p', default_value_t = 5)]
    prime: u64,
    #[arg(long, default_value_t = 8)]
    depth: usize,
    #[arg(long)]
    max_deg: Option<usize>,
    #[arg(long, default_value_t = 100_000_000)]
    budget: u64,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "full")]
    domain: DomainArg,
    #[arg(long, conflicts_with = "tsv")]
    json: bool,
    #[arg(long)]
    tsv: bool,
    #[arg(short = 'v', long)]
    verbose: bool,
    #[arg(short = 'c')]
    c: Option<i64>,
    #[arg(short = 'd')]
    d: Option<i64>,
    #[arg(long, default_value_t = 1)]
    c_tilde: i64,
    #[arg(long, default_value_t = 1)]
    d_tilde: i64,
}

impl From<Opts> for AnalysisRequest {
    fn from(o: Opts) -> Self {
        AnalysisRequest {
            f_text: o.f,
            g_text: o.g,
            prime: o.prime,
            depth: o.depth,
            max_deg: o.max_deg,
            budget: o.budget,
            mode: match o.mode {
                ModeArg::Exact => Mode::ExactSmall,
                ModeArg::Heuristic => Mode::FiniteFieldHeuristic,
            },
            format: if o.tsv { Format::Tsv } else { Format::Json },
            verbose: o.verbose,
            domain: match o.domain {
                DomainArg::Full => DomainChoice::Full,
                DomainArg::Torus => DomainChoice::Torus,
            },
            c: o.c,
            d: o.d,
            c_tilde: o.c_tilde,
            d_tilde: o.d_tilde,
        }
    }
}

fn main() -> ExitCode {
    if let Some(n) = std::env::var("IGUSA_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().ok();
    }
    let (cmd, opts) = match Cli::parse().command {
        Cmd::Analyze(o) => (Command::Analyze, o),
        Cmd::Poles(o) => (Command::Poles, o),
        Cmd::Spf(o) => (Command::Spf, o),
        Cmd::Count(o) => (Command::Count, o),
        Cmd::Verify(o) => (Command::Verify, o),
        Cmd::Phi(o) => (Command::Phi, o),
    };
    let out = run(cmd, &opts.into());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
