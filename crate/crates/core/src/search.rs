//! Exhaustive searches over sublattices of Z^n, with certificates.
//!
//! Candidate lattices are enumerated per determinant in a fixed order:
//! diagonal tuples ascending lexicographically, then below-diagonal entries
//! ascending lexicographically in row-major position order. Workers test
//! candidates of one determinant level in parallel, but the reported result
//! is always the first successful candidate in enumeration order, so any
//! thread count produces byte-identical certificates.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correspond::{covering_to_basis, packing_to_bh};
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, GroupElement};
use crate::lattice::Lattice;
use crate::matrix::IntMatrix;
use crate::rational::Rat;
use crate::shapes::{PointSet, ShapeKind, ShapeSpec};
use crate::snf::snf;
use crate::verify::{
    classify_arrangement, is_bh_set, is_generalized_basis, is_h_basis, ArrangementChecker,
    ArrangementClass,
};

/// Candidates are handed to the worker pool in fixed-size slices; slicing is
/// part of the deterministic iteration order.
const CHUNK: usize = 16 * 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Budget in point-reductions; every candidate lattice of a level is
    /// charged the full shape cardinality up front.
    pub budget: u64,
    /// Worker threads; 0 uses the ambient rayon pool.
    pub threads: usize,
}

pub const DEFAULT_SEARCH_BUDGET: u64 = 100_000_000;

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { budget: DEFAULT_SEARCH_BUDGET, threads: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertKind {
    Phi,
    PhiCyclic,
    Psi,
    Tiling,
}

/// A self-contained, re-verifiable witness for an extremal value or tiling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertKind,
    pub h: u32,
    pub n: usize,
    pub value: i128,
    pub shape: ShapeSpec,
    pub lattice: Lattice,
    pub group: AbelianGroup,
    pub set: Vec<GroupElement>,
    pub verified: bool,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }
}

/// Re-run the matching verifiers on a certificate from scratch.
pub fn verify_certificate(cert: &Certificate) -> Result<bool> {
    let det = cert.lattice.det()?;
    if det != cert.value || cert.group.order()? != cert.value || cert.shape.n() != cert.n {
        return Ok(false);
    }
    let arrangement = classify_arrangement(&cert.shape.points(), &cert.lattice)?;
    let lattice_ok = match cert.kind {
        CertKind::Phi | CertKind::PhiCyclic => arrangement.class.is_packing(),
        CertKind::Psi => arrangement.class.is_covering(),
        CertKind::Tiling => arrangement.class == ArrangementClass::Tiling,
    };
    if !lattice_ok {
        return Ok(false);
    }
    let set_ok = match cert.kind {
        CertKind::Phi => is_bh_set(&cert.group, &cert.set, cert.h)?.is_bh_set,
        CertKind::PhiCyclic => {
            cert.group.is_cyclic() && is_bh_set(&cert.group, &cert.set, cert.h)?.is_bh_set
        }
        CertKind::Psi => is_h_basis(&cert.group, &cert.set, cert.h)?.is_basis,
        CertKind::Tiling => match cert.shape.kind() {
            // A difference-body tiling is exactly an exact generalized basis.
            ShapeKind::DiffBody { r, t } => {
                is_generalized_basis(&cert.group, &cert.set, r, t)?.is_basis
            }
            _ => true,
        },
    };
    Ok(set_ok)
}

/// Determinant-`det` sublattices of Z^n in canonical form, in the fixed
/// enumeration order described in the module docs.
pub fn enumerate_hnf(n: usize, det: i128) -> HnfEnumerator {
    let diagonals = if det >= 1 && n >= 1 { diagonal_tuples(n, det) } else { Vec::new() };
    HnfEnumerator {
        n,
        diagonals,
        diag_idx: 0,
        offsets: Vec::new(),
        positions: (0..n).flat_map(|i| (0..i).map(move |j| (i, j))).collect(),
        fresh: true,
    }
}

/// Number of lattices `enumerate_hnf(n, det)` yields, saturating.
pub fn count_hnf(n: usize, det: i128) -> u128 {
    diagonal_tuples(n, det)
        .iter()
        .map(|diag| {
            let mut c: u128 = 1;
            for (j, &d) in diag.iter().enumerate() {
                for _ in 0..(n - 1 - j) {
                    c = c.saturating_mul(d as u128);
                }
            }
            c
        })
        .fold(0u128, u128::saturating_add)
}

fn divisors(m: i128) -> Vec<i128> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= m {
        if m % d == 0 {
            small.push(d);
            if d != m / d {
                large.push(m / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

fn diagonal_tuples(n: usize, m: i128) -> Vec<Vec<i128>> {
    if n == 1 {
        return vec![vec![m]];
    }
    let mut out = Vec::new();
    for d in divisors(m) {
        for rest in diagonal_tuples(n - 1, m / d) {
            let mut t = Vec::with_capacity(n);
            t.push(d);
            t.extend(rest);
            out.push(t);
        }
    }
    out
}

pub struct HnfEnumerator {
    n: usize,
    diagonals: Vec<Vec<i128>>,
    diag_idx: usize,
    offsets: Vec<i128>,
    positions: Vec<(usize, usize)>,
    fresh: bool,
}

impl HnfEnumerator {
    fn build(&self) -> Lattice {
        let diag = &self.diagonals[self.diag_idx];
        let mut m = IntMatrix::zero(self.n, self.n);
        for i in 0..self.n {
            m[(i, i)] = diag[i];
        }
        for (k, &(i, j)) in self.positions.iter().enumerate() {
            m[(i, j)] = self.offsets[k];
        }
        Lattice::from_canonical_hnf(m).expect("constructed matrix is canonical")
    }

    /// Advance the below-diagonal odometer (last position fastest); false
    /// when the current diagonal is exhausted.
    fn bump(&mut self) -> bool {
        let diag = &self.diagonals[self.diag_idx];
        for k in (0..self.positions.len()).rev() {
            self.offsets[k] += 1;
            if self.offsets[k] < diag[self.positions[k].1] {
                return true;
            }
            self.offsets[k] = 0;
        }
        false
    }
}

impl Iterator for HnfEnumerator {
    type Item = Lattice;

    fn next(&mut self) -> Option<Lattice> {
        if self.diag_idx >= self.diagonals.len() {
            return None;
        }
        if self.fresh {
            self.fresh = false;
            self.offsets = vec![0; self.positions.len()];
            return Some(self.build());
        }
        if self.bump() {
            return Some(self.build());
        }
        self.diag_idx += 1;
        if self.diag_idx >= self.diagonals.len() {
            return None;
        }
        self.offsets.fill(0);
        Some(self.build())
    }
}

fn run_in_pool<T: Send>(threads: usize, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    if threads == 0 {
        return f();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::UnsupportedParameters(format!("thread pool: {e}")))?;
    pool.install(f)
}

#[derive(Clone, Copy)]
enum CoverMode {
    Packing,
    Covering,
}

/// First lattice of determinant `det` (in enumeration order) that passes the
/// packing/covering test, optionally restricted to cyclic quotients.
fn scan_level(
    n: usize,
    det: i128,
    points: &PointSet,
    mode: CoverMode,
    cyclic_only: bool,
) -> Result<Option<Lattice>> {
    let mut iter = enumerate_hnf(n, det);
    loop {
        let chunk: Vec<Lattice> = iter.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            return Ok(None);
        }
        let hits: Vec<bool> = chunk
            .par_iter()
            .map_init(ArrangementChecker::new, |checker, lattice| -> Result<bool> {
                if cyclic_only {
                    let d = snf(lattice.basis())?.d;
                    if d.iter().filter(|&&x| x > 1).count() > 1 {
                        return Ok(false);
                    }
                }
                match mode {
                    CoverMode::Packing => checker.is_packing(points, lattice),
                    CoverMode::Covering => checker.is_covering(points, lattice),
                }
            })
            .collect::<Result<_>>()?;
        if let Some(i) = hits.iter().position(|&b| b) {
            return Ok(Some(chunk[i].clone()));
        }
    }
}

fn charge(spent: &mut u64, n: usize, det: i128, points: usize, budget: u64) -> Result<()> {
    let cost = count_hnf(n, det).saturating_mul(points as u128);
    let total = (*spent as u128).saturating_add(cost);
    if total > budget as u128 {
        return Err(Error::BudgetExceeded { budget, watermark: det });
    }
    *spent = total as u64;
    Ok(())
}

/// Least determinant floor implied by the exact packing densities of the
/// simplex in dimensions 1..3.
fn phi_floor(h: u32, n: usize) -> Result<i128> {
    let shape = ShapeSpec::simplex(n, h)?;
    let mut floor = shape.cardinality()?;
    let density = match n {
        1 => Some(Rat::one()),
        2 => Some(Rat::frac(2, 3)?),
        3 => Some(Rat::frac(18, 49)?),
        _ => None,
    };
    if let Some(delta) = density {
        let mut factorial = Rat::one();
        for i in 1..=n as i128 {
            factorial = &factorial * &Rat::int(i);
        }
        let bound = &Rat::int(h as i128).pow(n as u32) / &(&factorial * &delta);
        floor = floor.max(bound.ceil_i128()?);
    }
    Ok(floor.max(1))
}

fn certificate_from_packing(
    kind: CertKind,
    h: u32,
    shape: &ShapeSpec,
    lattice: Lattice,
) -> Result<Certificate> {
    let extracted = packing_to_bh(&lattice, h)?;
    let value = lattice.det()?;
    let verified = extracted.verdict.is_bh_set;
    Ok(Certificate {
        kind,
        h,
        n: shape.n(),
        value,
        shape: *shape,
        lattice,
        group: extracted.group,
        set: extracted.set,
        verified,
    })
}

/// Order of the smallest Abelian group containing a B_h set of cardinality
/// n+1, with witness. Scans determinants upward from the density floor.
pub fn search_phi(h: u32, n: usize, cyclic_only: bool, config: &SearchConfig) -> Result<Certificate> {
    if h == 0 || n == 0 {
        return Err(Error::UnsupportedParameters("h and n must be >= 1".into()));
    }
    let shape = ShapeSpec::simplex(n, h)?;
    let points = shape.points();
    let budget = config.budget;
    let threads = config.threads;
    run_in_pool(threads, move || {
        let mut spent = 0u64;
        let mut det = phi_floor(h, n)?;
        loop {
            charge(&mut spent, n, det, points.len(), budget)?;
            if let Some(lattice) = scan_level(n, det, &points, CoverMode::Packing, cyclic_only)? {
                let kind = if cyclic_only { CertKind::PhiCyclic } else { CertKind::Phi };
                return certificate_from_packing(kind, h, &shape, lattice);
            }
            det += 1;
        }
    })
}

/// Order of the largest Abelian group containing an h-basis of cardinality
/// n+1. Scans determinants downward from the simplex cardinality; the first
/// covering found is maximal by construction.
pub fn search_psi(h: u32, n: usize, config: &SearchConfig) -> Result<Certificate> {
    if h == 0 || n == 0 {
        return Err(Error::UnsupportedParameters("h and n must be >= 1".into()));
    }
    let shape = ShapeSpec::simplex(n, h)?;
    let points = shape.points();
    let budget = config.budget;
    let threads = config.threads;
    run_in_pool(threads, move || {
        let mut spent = 0u64;
        let mut det = shape.cardinality()?;
        while det >= 1 {
            charge(&mut spent, n, det, points.len(), budget)?;
            if let Some(lattice) = scan_level(n, det, &points, CoverMode::Covering, false)? {
                let extracted = covering_to_basis(&lattice, h)?;
                let value = lattice.det()?;
                let verified = extracted.verdict.is_basis;
                return Ok(Certificate {
                    kind: CertKind::Psi,
                    h,
                    n,
                    value,
                    shape,
                    lattice,
                    group: extracted.group,
                    set: extracted.set,
                    verified,
                });
            }
            det -= 1;
        }
        unreachable!("every shape containing the origin covers the determinant-1 lattice")
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum TilingSearch {
    Found { certificate: Box<Certificate> },
    /// Exhaustive: no lattice of the matching determinant tiles.
    NotFound { lattices_scanned: u64 },
}

/// Scan every lattice whose determinant equals the shape cardinality for a
/// perfect tiling.
pub fn search_tiling(spec: &ShapeSpec, config: &SearchConfig) -> Result<TilingSearch> {
    let points = spec.points();
    let det = points.len() as i128;
    let budget = config.budget;
    let threads = config.threads;
    let spec = *spec;
    run_in_pool(threads, move || {
        let mut spent = 0u64;
        charge(&mut spent, spec.n(), det, points.len(), budget)?;
        // A tiling is a packing of full determinant.
        match scan_level(spec.n(), det, &points, CoverMode::Packing, false)? {
            Some(lattice) => {
                let (group, proj) = crate::group::group_from_lattice(&lattice)?;
                let mut set = vec![group.zero()];
                for i in 0..lattice.n() {
                    let img = proj.image_of_basis(i).clone();
                    if !set.contains(&img) {
                        set.push(img);
                    }
                }
                let h = match spec.kind() {
                    ShapeKind::Simplex { h } => h,
                    ShapeKind::DiffBody { r, t } => r + t,
                    ShapeKind::CrossPolytope { r } => r,
                };
                let arrangement = classify_arrangement(&points, &lattice)?;
                let verified = arrangement.class == ArrangementClass::Tiling;
                let certificate = Certificate {
                    kind: CertKind::Tiling,
                    h,
                    n: spec.n(),
                    value: det,
                    shape: spec,
                    lattice,
                    group,
                    set,
                    verified,
                };
                Ok(TilingSearch::Found { certificate: Box::new(certificate) })
            }
            None => Ok(TilingSearch::NotFound { lattices_scanned: count_hnf(spec.n(), det) as u64 }),
        }
    })
}
