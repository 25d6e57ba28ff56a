//! Newton polyhedra `Γ_f = conv(supp f) + R_+^n`: facets with primitive
//! normals, the face lattice, the cones `Δ_τ` and their simplicial
//! subdivisions.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{self, integer_row, rank};
use crate::mpoly::{Monomial, Polynomial};
use crate::numeric::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NewtonError {
    #[error("the zero polynomial has no Newton polyhedron")]
    ZeroPolynomial,
    #[error("polynomial does not vanish at the origin")]
    OriginInSupport,
    #[error("weight vectors must be nonnegative")]
    NegativeWeight,
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("the improper face has no normal cone")]
    ImproperFace,
    #[error("integer overflow in polyhedral computation")]
    Overflow,
    #[error("cone mixes strict and closed generators and is not simplicial")]
    MixedCone,
    #[error("cone is not pointed")]
    NotPointed,
    #[error("cone is not simplicial")]
    NotSimplicial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    #[serde(rename = "m")]
    pub m_value: i64,
    #[serde(skip)]
    pub meet_support: BTreeSet<Monomial>,
}

impl Facet {
    /// Coordinate sum `|a|` of the normal.
    pub fn abs(&self) -> i64 {
        self.normal.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub meet_support: BTreeSet<Monomial>,
    /// Coordinate directions `e_i` along which the face is unbounded.
    pub unbounded: Vec<usize>,
    pub containing_facets: Vec<usize>,
    pub dim: usize,
}

impl Face {
    pub fn is_improper(&self) -> bool {
        self.containing_facets.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolyhedron {
    ambient_dim: usize,
    support: BTreeSet<Monomial>,
    facets: Vec<Facet>,
    faces: Vec<Face>,
}

fn affine_dim(points: &[Vec<i64>], dirs: &[usize], n: usize) -> usize {
    let Some(base) = points.first() else {
        return 0;
    };
    let mut rows: Vec<Vec<i64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    for &i in dirs {
        let mut e = vec![0; n];
        e[i] = 1;
        rows.push(e);
    }
    rank(&rows)
}

fn dot128(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

/// Normalize a candidate normal: nonnegative, primitive, nonzero.
fn primitive_nonneg(v: &[i128]) -> Option<Result<Vec<i64>, NewtonError>> {
    if v.iter().all(|&x| x == 0) {
        return None;
    }
    let sign = if v.iter().any(|&x| x > 0) { 1 } else { -1 };
    if v.iter().any(|&x| x * sign < 0) {
        return None;
    }
    let g = v.iter().fold(0i128, |g, &x| num_integer::gcd(g, x));
    Some(
        v.iter()
            .map(|&x| (x * sign / g).to_i64().ok_or(NewtonError::Overflow))
            .collect(),
    )
}

impl NewtonPolyhedron {
    pub fn build(f: &Polynomial) -> Result<Self, NewtonError> {
        if f.is_zero() {
            return Err(NewtonError::ZeroPolynomial);
        }
        if !f.constant_term().is_zero() {
            return Err(NewtonError::OriginInSupport);
        }
        Self::from_support(f.nvars(), f.support())
    }

    /// Polyhedron of an arbitrary nonempty exponent set.
    pub fn from_support(n: usize, support: BTreeSet<Monomial>) -> Result<Self, NewtonError> {
        if support.is_empty() {
            return Err(NewtonError::ZeroPolynomial);
        }
        let pts: Vec<Vec<i64>> = support.iter().map(Monomial::as_i64).collect();
        let minimal: Vec<usize> = (0..pts.len())
            .filter(|&i| {
                !pts.iter().enumerate().any(|(j, q)| {
                    j != i && q.iter().zip(&pts[i]).all(|(a, b)| a <= b) && *q != pts[i]
                })
            })
            .collect();
        let candidates: Result<Vec<BTreeSet<Vec<i64>>>, NewtonError> = minimal
            .par_iter()
            .map(|&b| {
                let base = &pts[b];
                let mut dirs: Vec<Vec<i64>> = pts
                    .iter()
                    .filter(|p| *p != base)
                    .map(|p| p.iter().zip(base).map(|(x, y)| x - y).collect())
                    .collect();
                for i in 0..n {
                    let mut e = vec![0; n];
                    e[i] = 1;
                    dirs.push(e);
                }
                let mut found = BTreeSet::new();
                for combo in dirs.iter().cloned().combinations(n - 1) {
                    let c = linalg::cross_product(&combo, n).ok_or(NewtonError::Overflow)?;
                    if let Some(a) = primitive_nonneg(&c) {
                        found.insert(a?);
                    }
                }
                Ok(found)
            })
            .collect();
        let candidates: BTreeSet<Vec<i64>> = candidates?.into_iter().flatten().collect();

        let mut facets = Vec::new();
        for a in candidates {
            let vals: Vec<i128> = pts.iter().map(|p| dot128(&a, p)).collect();
            let m = *vals.iter().min().unwrap();
            let meet: Vec<Vec<i64>> = pts
                .iter()
                .zip(&vals)
                .filter(|(_, &v)| v == m)
                .map(|(p, _)| p.clone())
                .collect();
            let zeros: Vec<usize> = (0..n).filter(|&i| a[i] == 0).collect();
            if affine_dim(&meet, &zeros, n) + 1 == n {
                facets.push(Facet {
                    normal: a,
                    m_value: m.to_i64().ok_or(NewtonError::Overflow)?,
                    meet_support: meet.into_iter().map(|p| Monomial(p.iter().map(|&x| x as u32).collect())).collect(),
                });
            }
        }
        facets.sort_by(|x, y| x.abs().cmp(&y.abs()).then_with(|| y.normal.cmp(&x.normal)));

        let mut poly = NewtonPolyhedron { ambient_dim: n, support, facets, faces: Vec::new() };
        poly.faces = poly.enumerate_faces()?;
        Ok(poly)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn support(&self) -> &BTreeSet<Monomial> {
        &self.support
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// Faces other than `Γ_f` itself.
    pub fn proper_faces(&self) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(|f| !f.is_improper())
    }

    fn check_weight(&self, a: &[i64]) -> Result<(), NewtonError> {
        if a.len() != self.ambient_dim {
            return Err(NewtonError::DimensionMismatch { expected: self.ambient_dim, got: a.len() });
        }
        if a.iter().any(|&x| x < 0) {
            return Err(NewtonError::NegativeWeight);
        }
        Ok(())
    }

    /// `m_f(a) = min_{ω ∈ supp} a·ω`.
    pub fn m_of(&self, a: &[i64]) -> Result<i64, NewtonError> {
        self.check_weight(a)?;
        let m = self.support.iter().map(|w| dot128(a, &w.as_i64())).min().unwrap();
        m.to_i64().ok_or(NewtonError::Overflow)
    }

    /// The face `F(a)` as (meet support, unbounded directions, containing facets).
    fn face_of_weight(&self, a: &[i64]) -> Face {
        let n = self.ambient_dim;
        let vals: Vec<(Monomial, i128)> =
            self.support.iter().map(|w| (w.clone(), dot128(a, &w.as_i64()))).collect();
        let m = vals.iter().map(|(_, v)| *v).min().unwrap();
        let meet: BTreeSet<Monomial> = vals.into_iter().filter(|(_, v)| *v == m).map(|(w, _)| w).collect();
        let unbounded: Vec<usize> = (0..n).filter(|&i| a[i] == 0).collect();
        let containing: Vec<usize> = self
            .facets
            .iter()
            .enumerate()
            .filter(|(_, fc)| {
                unbounded.iter().all(|&i| fc.normal[i] == 0)
                    && meet.iter().all(|w| dot128(&fc.normal, &w.as_i64()) == fc.m_value as i128)
            })
            .map(|(j, _)| j)
            .collect();
        let pts: Vec<Vec<i64>> = meet.iter().map(Monomial::as_i64).collect();
        let dim = affine_dim(&pts, &unbounded, n);
        Face { meet_support: meet, unbounded, containing_facets: containing, dim }
    }

    fn enumerate_faces(&self) -> Result<Vec<Face>, NewtonError> {
        let n = self.ambient_dim;
        let mut seen: BTreeMap<Vec<usize>, Face> = BTreeMap::new();
        let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
        for j in 0..self.facets.len() {
            let face = self.face_of_weight(&self.facets[j].normal);
            if !seen.contains_key(&face.containing_facets) {
                queue.push_back(face.containing_facets.clone());
                seen.insert(face.containing_facets.clone(), face);
            }
        }
        while let Some(key) = queue.pop_front() {
            for j in 0..self.facets.len() {
                if key.contains(&j) {
                    continue;
                }
                let mut sum = vec![0i64; n];
                let mut msum: i128 = 0;
                for &i in key.iter().chain(std::iter::once(&j)) {
                    for (s, x) in sum.iter_mut().zip(&self.facets[i].normal) {
                        *s = s.checked_add(*x).ok_or(NewtonError::Overflow)?;
                    }
                    msum += self.facets[i].m_value as i128;
                }
                if self.m_of(&sum)? as i128 != msum {
                    continue;
                }
                let face = self.face_of_weight(&sum);
                if !seen.contains_key(&face.containing_facets) {
                    queue.push_back(face.containing_facets.clone());
                    seen.insert(face.containing_facets.clone(), face);
                }
            }
        }
        let improper = Face {
            meet_support: self.support.clone(),
            unbounded: (0..n).collect(),
            containing_facets: Vec::new(),
            dim: n,
        };
        let mut faces: Vec<Face> = seen.into_values().collect();
        faces.sort_by(|x, y| {
            y.dim
                .cmp(&x.dim)
                .then_with(|| x.containing_facets.cmp(&y.containing_facets))
        });
        faces.insert(0, improper);
        Ok(faces)
    }

    /// The face `F(a)` from the face list; `a = 0` yields the improper face.
    pub fn first_meet_locus(&self, a: &[i64]) -> Result<&Face, NewtonError> {
        self.check_weight(a)?;
        let key = self.face_of_weight(a).containing_facets;
        Ok(self
            .faces
            .iter()
            .find(|f| f.containing_facets == key)
            .expect("every F(a) is enumerated"))
    }

    /// `Δ_τ`: the strictly positive span of the normals of the facets
    /// containing `τ`.
    pub fn cone_of_face(&self, face: &Face) -> Result<Cone, NewtonError> {
        if face.is_improper() {
            return Err(NewtonError::ImproperFace);
        }
        Ok(Cone::open(
            self.ambient_dim,
            face.containing_facets.iter().map(|&j| self.facets[j].normal.clone()).collect(),
        ))
    }

    /// `Δ̄_τ`, the closure of [`Self::cone_of_face`].
    pub fn closed_cone_of_face(&self, face: &Face) -> Result<Cone, NewtonError> {
        Ok(self.cone_of_face(face)?.closure())
    }

    /// Half-open simplicial cells partitioning `R_+^n`: the zero cone and a
    /// subdivision of every `Δ_τ`.
    pub fn orthant_partition(&self) -> Result<Vec<Cone>, NewtonError> {
        let mut cells = vec![Cone::zero(self.ambient_dim)];
        for face in self.proper_faces() {
            cells.extend(decompose_simplicial(&self.cone_of_face(face)?)?);
        }
        Ok(cells)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let faces: Vec<serde_json::Value> = self
            .faces
            .iter()
            .map(|f| {
                serde_json::json!({
                    "support": f.meet_support.iter().collect::<Vec<_>>(),
                    "facets": f.containing_facets,
                    "dim": f.dim,
                })
            })
            .collect();
        serde_json::json!({ "facets": self.facets, "faces": faces })
    }
}

/// `Γ_f` with its facets and faces.
pub fn build_polyhedron(f: &Polynomial) -> Result<NewtonPolyhedron, NewtonError> {
    NewtonPolyhedron::build(f)
}

/// `f_τ`: the terms of `f` supported on the face.
pub fn face_polynomial(f: &Polynomial, face: &Face) -> Polynomial {
    f.restrict(&face.meet_support)
}

// ---------------------------------------------------------------------------
// Cones

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Cone {
    ambient: usize,
    generators: Vec<Vec<i64>>,
    /// `true`: coefficient `λ ≥ 0`; `false`: `λ > 0`.
    closed: Vec<bool>,
}

/// Position of a box of valuation vectors relative to a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Inside,
    Outside,
    Undecided,
}

/// Linear description of a simplicial cell: `eqs · v = 0`,
/// `strict · v > 0`, `weak · v ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellInequalities {
    pub eqs: Vec<Vec<BigInt>>,
    pub strict: Vec<Vec<BigInt>>,
    pub weak: Vec<Vec<BigInt>>,
}

fn row_range(row: &[BigInt], lo: &[u64], hi: &[Option<u64>]) -> (Option<BigInt>, Option<BigInt>) {
    let mut min = Some(BigInt::zero());
    let mut max = Some(BigInt::zero());
    for ((c, &l), h) in row.iter().zip(lo).zip(hi) {
        if c.is_zero() {
            continue;
        }
        let lo_v = BigInt::from(l) * c;
        let hi_v = h.map(|h| BigInt::from(h) * c);
        let (small, large) = if c.is_positive() { (Some(lo_v), hi_v) } else { (hi_v, Some(lo_v)) };
        min = match (min, small) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        max = match (max, large) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
    }
    (min, max)
}

impl CellInequalities {
    /// Classify the box `lo_i ≤ v_i ≤ hi_i` (`hi = None` means unbounded).
    pub fn classify(&self, lo: &[u64], hi: &[Option<u64>]) -> Membership {
        let mut undecided = false;
        for row in &self.eqs {
            match row_range(row, lo, hi) {
                (Some(a), Some(b)) if a.is_zero() && b.is_zero() => {}
                (Some(a), _) if a.is_positive() => return Membership::Outside,
                (_, Some(b)) if b.is_negative() => return Membership::Outside,
                _ => undecided = true,
            }
        }
        for row in &self.strict {
            match row_range(row, lo, hi) {
                (Some(a), _) if a.is_positive() => {}
                (_, Some(b)) if !b.is_positive() => return Membership::Outside,
                _ => undecided = true,
            }
        }
        for row in &self.weak {
            match row_range(row, lo, hi) {
                (Some(a), _) if !a.is_negative() => {}
                (_, Some(b)) if b.is_negative() => return Membership::Outside,
                _ => undecided = true,
            }
        }
        if undecided {
            Membership::Undecided
        } else {
            Membership::Inside
        }
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let hi: Vec<Option<u64>> = v.iter().map(|&x| Some(x)).collect();
        self.classify(v, &hi) == Membership::Inside
    }
}

impl Cone {
    pub fn new(ambient: usize, generators: Vec<Vec<i64>>, closed: Vec<bool>) -> Self {
        assert_eq!(generators.len(), closed.len());
        assert!(generators.iter().all(|g| g.len() == ambient && g.iter().any(|&x| x != 0)));
        Cone { ambient, generators, closed }
    }

    /// Strictly positive span.
    pub fn open(ambient: usize, generators: Vec<Vec<i64>>) -> Self {
        let k = generators.len();
        Cone::new(ambient, generators, vec![false; k])
    }

    /// Nonnegative span.
    pub fn closed(ambient: usize, generators: Vec<Vec<i64>>) -> Self {
        let k = generators.len();
        Cone::new(ambient, generators, vec![true; k])
    }

    /// The cone `{0}`.
    pub fn zero(ambient: usize) -> Self {
        Cone { ambient, generators: Vec::new(), closed: Vec::new() }
    }

    pub fn closure(&self) -> Self {
        Cone::closed(self.ambient, self.generators.clone())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn closed_flags(&self) -> &[bool] {
        &self.closed
    }

    pub fn dim(&self) -> usize {
        rank(&self.generators)
    }

    pub fn is_simplicial(&self) -> bool {
        self.dim() == self.generators.len()
    }

    /// Simplicial with generators extendable to a basis of `Z^n`, i.e. the
    /// maximal minors have gcd 1.
    pub fn is_simple(&self) -> bool {
        if !self.is_simplicial() {
            return false;
        }
        let k = self.generators.len();
        if k == 0 {
            return true;
        }
        let mut g: i128 = 0;
        for cols in (0..self.ambient).combinations(k) {
            let minor: Vec<Vec<i128>> = self
                .generators
                .iter()
                .map(|r| cols.iter().map(|&c| r[c] as i128).collect())
                .collect();
            match linalg::det_i128(minor) {
                Some(d) => g = num_integer::gcd(g, d),
                None => return false,
            }
        }
        g == 1
    }

    /// Inequality description of a simplicial cone.
    pub fn inequalities(&self) -> Result<CellInequalities, NewtonError> {
        if !self.is_simplicial() {
            return Err(NewtonError::NotSimplicial);
        }
        let n = self.ambient;
        let mut basis = self.generators.clone();
        for i in 0..n {
            if basis.len() == n {
                break;
            }
            let mut e = vec![0; n];
            e[i] = 1;
            let mut trial = basis.clone();
            trial.push(e);
            if rank(&trial) == trial.len() {
                basis = trial;
            }
        }
        // columns of M are basis vectors; rows of M^{-1} are coordinate functionals
        let m: Vec<Vec<Rational>> = (0..n)
            .map(|r| basis.iter().map(|b| Rational::from_integer(BigInt::from(b[r]))).collect())
            .collect();
        let inv = linalg::inverse(&m).expect("basis is invertible");
        let k = self.generators.len();
        let mut out = CellInequalities { eqs: Vec::new(), strict: Vec::new(), weak: Vec::new() };
        for (j, row) in inv.iter().enumerate() {
            let r = integer_row(row);
            if j >= k {
                out.eqs.push(r);
            } else if self.closed[j] {
                out.weak.push(r);
            } else {
                out.strict.push(r);
            }
        }
        Ok(out)
    }

    /// Exact membership of an integer vector.
    pub fn contains(&self, v: &[i64]) -> Result<bool, NewtonError> {
        if v.iter().any(|&x| x < 0) {
            // evaluate directly on rational coordinates
            return Ok(decompose_simplicial(self)?.iter().any(|c| c.contains_signed(v)));
        }
        let vu: Vec<u64> = v.iter().map(|&x| x as u64).collect();
        for cell in decompose_simplicial(self)? {
            if cell.inequalities()?.contains(&vu) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn contains_signed(&self, v: &[i64]) -> bool {
        let Some(mu) = coords_in_basis(&self.generators, v) else {
            return false;
        };
        mu.iter()
            .zip(&self.closed)
            .all(|(x, &c)| if c { !x.is_negative() } else { x.is_positive() })
    }
}

/// Coordinates of `v` in the linearly independent family `basis`, or `None`
/// if `v` is outside its span.
pub fn coords_in_basis(basis: &[Vec<i64>], v: &[i64]) -> Option<Vec<Rational>> {
    let n = v.len();
    let k = basis.len();
    let mut aug: Vec<Vec<Rational>> = (0..n)
        .map(|r| {
            let mut row: Vec<Rational> = basis.iter().map(|b| Rational::from_integer(BigInt::from(b[r]))).collect();
            row.push(Rational::from_integer(BigInt::from(v[r])));
            row
        })
        .collect();
    let piv = linalg::rref(&mut aug);
    if piv.contains(&k) {
        return None;
    }
    let mut out = vec![Rational::zero(); k];
    for (r, &c) in piv.iter().enumerate() {
        out[c] = aug[r][k].clone();
    }
    Some(out)
}

/// Placing triangulation of the generators, in input order.
fn placing_triangulation(gens: &[Vec<i64>]) -> Result<Vec<Vec<usize>>, NewtonError> {
    let mut cells: Vec<Vec<usize>> = Vec::new();
    let mut placed: Vec<Vec<i64>> = Vec::new();
    let mut dim = 0;
    for (k, g) in gens.iter().enumerate() {
        let mut trial = placed.clone();
        trial.push(g.clone());
        let r = rank(&trial);
        if r > dim {
            if cells.is_empty() {
                cells.push(vec![k]);
            } else {
                for c in cells.iter_mut() {
                    c.push(k);
                }
            }
            dim = r;
            placed = trial;
            continue;
        }
        placed = trial;
        let mut facet_count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for c in &cells {
            for j in 0..c.len() {
                let mut f = c.clone();
                f.remove(j);
                f.sort_unstable();
                *facet_count.entry(f).or_insert(0) += 1;
            }
        }
        let mut new_cells = Vec::new();
        for c in &cells {
            let basis: Vec<Vec<i64>> = c.iter().map(|&i| gens[i].clone()).collect();
            let mu = coords_in_basis(&basis, g).expect("generator in span");
            for (j, x) in mu.iter().enumerate() {
                if !x.is_negative() {
                    continue;
                }
                if c.len() == 1 {
                    return Err(NewtonError::NotPointed);
                }
                let mut f = c.clone();
                f.remove(j);
                let mut key = f.clone();
                key.sort_unstable();
                if facet_count[&key] == 1 {
                    f.push(k);
                    new_cells.push(f);
                }
            }
        }
        cells.extend(new_cells);
    }
    Ok(cells)
}

/// Partition a cone into half-open simplicial cones spanned by subsets of
/// its generators.
///
/// Shared walls are assigned with a reference point `w` in the relative
/// interior: a point of the open cone belongs to the unique cell containing
/// `x - εw` for small `ε > 0` (for a closed cone, `x + εw`).
pub fn decompose_simplicial(cone: &Cone) -> Result<Vec<Cone>, NewtonError> {
    if cone.is_simplicial() {
        return Ok(vec![cone.clone()]);
    }
    let open = cone.closed.iter().all(|&c| !c);
    let closed = cone.closed.iter().all(|&c| c);
    if !open && !closed {
        return Err(NewtonError::MixedCone);
    }
    let gens = &cone.generators;
    let cells = placing_triangulation(gens)?;
    for attempt in 0u64..1000 {
        let weights: Vec<i64> = (0..gens.len() as u64)
            .map(|i| (1 + (i * i * (2 * attempt + 3) + i * (attempt + 5)) % (97 + attempt)) as i64)
            .collect();
        let w: Vec<i64> = (0..cone.ambient)
            .map(|r| gens.iter().zip(&weights).map(|(g, c)| g[r] * c).sum())
            .collect();
        let mut out = Vec::with_capacity(cells.len());
        let mut generic = true;
        for c in &cells {
            let basis: Vec<Vec<i64>> = c.iter().map(|&i| gens[i].clone()).collect();
            let mu = coords_in_basis(&basis, &w).expect("reference point in span");
            if mu.iter().any(Zero::is_zero) {
                generic = false;
                break;
            }
            let flags: Vec<bool> = mu
                .iter()
                .map(|x| if open { x.is_negative() } else { x.is_positive() })
                .collect();
            out.push(Cone::new(cone.ambient, basis, flags));
        }
        if generic {
            return Ok(out);
        }
    }
    unreachable!("no generic reference point found")
}
