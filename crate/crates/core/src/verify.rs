//! Verifiers with explicit, independently checkable witnesses.
//!
//! Negative verdicts always carry a counterexample: a pair of coefficient
//! vectors with equal sums, an unreachable group element, two shape points
//! in one coset, or a coset no shape point hits.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{element_combine, AbelianGroup, GroupElement};
use crate::lattice::Lattice;
use crate::matrix::mul;
use crate::shapes::{binomial, PointSet, ShapeSpec};

/// Coefficient-vector enumeration cap for the set verifiers.
pub const DEFAULT_ENUM_BUDGET: u128 = 10_000_000;

/// Two distinct coefficient vectors with the same weighted sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BhWitness {
    pub alpha: Vec<i128>,
    pub beta: Vec<i128>,
    pub sum: GroupElement,
}

impl fmt::Display for BhWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "coefficients {:?} and {:?} both sum to {:?}", self.alpha, self.beta, self.sum.coords())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisWitness {
    pub unreachable: GroupElement,
}

impl fmt::Display for BasisWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "element {:?} is not a sum", self.unreachable.coords())
    }
}

/// Two shape points falling into the same coset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCollision {
    pub first: Vec<i128>,
    pub second: Vec<i128>,
    pub coset: Vec<i128>,
}

impl fmt::Display for PointCollision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "points {:?} and {:?} share coset {:?}", self.first, self.second, self.coset)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BhVerdict {
    pub is_bh_set: bool,
    pub witness: Option<BhWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisVerdict {
    pub is_basis: bool,
    pub witness: Option<BasisWitness>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArrangementClass {
    Tiling,
    PackingOnly,
    CoveringOnly,
    Neither,
}

impl ArrangementClass {
    pub fn is_packing(self) -> bool {
        matches!(self, ArrangementClass::Tiling | ArrangementClass::PackingOnly)
    }

    pub fn is_covering(self) -> bool {
        matches!(self, ArrangementClass::Tiling | ArrangementClass::CoveringOnly)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementVerdict {
    pub class: ArrangementClass,
    pub points: usize,
    pub distinct_cosets: i128,
    pub det: i128,
    pub collision: Option<PointCollision>,
    pub uncovered: Option<Vec<i128>>,
}

/// Translate a set so its first element is zero and split off the tail.
fn translate(group: &AbelianGroup, set: &[GroupElement]) -> Result<Vec<GroupElement>> {
    let base = &set[0];
    set[1..].iter().map(|e| group.sub(e, base)).collect()
}

fn check_set(group: &AbelianGroup, set: &[GroupElement], h: u32) -> Result<()> {
    if set.is_empty() || h == 0 {
        return Err(Error::UnsupportedParameters(
            "set must be nonempty and h >= 1".to_string(),
        ));
    }
    for e in set {
        if !group.contains(e) {
            return Err(Error::ElementNotInGroup {
                expected: group.rank(),
                got: e.coords().len(),
            });
        }
    }
    Ok(())
}

/// Number of nonnegative integer vectors of length `n` with sum at most `h`.
fn simplex_count(n: usize, h: u32) -> Result<u128> {
    Ok(binomial(h as i128 + n as i128, n as i128)? as u128)
}

/// Walk all coefficient vectors in `simplex(n, h)` in ascending
/// lexicographic order, maintaining the weighted sum incrementally. The
/// visitor returns `false` to stop early.
fn walk_simplex_coefficients(
    group: &AbelianGroup,
    elems: &[GroupElement],
    h: u32,
    visit: &mut impl FnMut(&[i128], &GroupElement) -> Result<bool>,
) -> Result<()> {
    let n = elems.len();
    let mut alpha = vec![0i128; n];
    fn rec(
        group: &AbelianGroup,
        elems: &[GroupElement],
        alpha: &mut Vec<i128>,
        i: usize,
        rem: i128,
        sum: GroupElement,
        visit: &mut impl FnMut(&[i128], &GroupElement) -> Result<bool>,
    ) -> Result<bool> {
        if i == elems.len() {
            return visit(alpha, &sum);
        }
        let mut s = sum;
        for v in 0..=rem {
            alpha[i] = v;
            if !rec(group, elems, alpha, i + 1, rem - v, s.clone(), visit)? {
                return Ok(false);
            }
            if v < rem {
                s = group.add(&s, &elems[i])?;
            }
        }
        alpha[i] = 0;
        Ok(true)
    }
    rec(group, elems, &mut alpha, 0, h as i128, group.zero(), visit)?;
    Ok(())
}

/// First-hit table over encoded group elements / coset indices. Dense when
/// the index space is small, hashed otherwise.
enum FirstHit {
    Dense(Vec<u64>),
    Sparse(HashMap<u128, u64>),
}

const DENSE_LIMIT: u128 = 1 << 26;
const EMPTY: u64 = u64::MAX;

impl FirstHit {
    fn new(space: u128) -> Self {
        if space <= DENSE_LIMIT {
            FirstHit::Dense(vec![EMPTY; space as usize])
        } else {
            FirstHit::Sparse(HashMap::new())
        }
    }

    /// Record `tag` at `idx`; returns the previous tag if one was present.
    fn insert(&mut self, idx: u128, tag: u64) -> Option<u64> {
        match self {
            FirstHit::Dense(v) => {
                let slot = &mut v[idx as usize];
                if *slot == EMPTY {
                    *slot = tag;
                    None
                } else {
                    Some(*slot)
                }
            }
            FirstHit::Sparse(m) => match m.entry(idx) {
                std::collections::hash_map::Entry::Occupied(e) => Some(*e.get()),
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(tag);
                    None
                }
            },
        }
    }

    fn contains(&self, idx: u128) -> bool {
        match self {
            FirstHit::Dense(v) => v[idx as usize] != EMPTY,
            FirstHit::Sparse(m) => m.contains_key(&idx),
        }
    }
}

/// Is `set` a B_h set: are all weighted sums with coefficients in
/// `simplex(n, h)` distinct?
///
/// The set is first translated by its first element (a translate of a B_h
/// set is again one). A negative verdict reports the lexicographically first
/// colliding coefficient pair.
pub fn is_bh_set(group: &AbelianGroup, set: &[GroupElement], h: u32) -> Result<BhVerdict> {
    is_bh_set_with_budget(group, set, h, DEFAULT_ENUM_BUDGET)
}

pub fn is_bh_set_with_budget(
    group: &AbelianGroup,
    set: &[GroupElement],
    h: u32,
    budget: u128,
) -> Result<BhVerdict> {
    check_set(group, set, h)?;
    let elems = translate(group, set)?;
    let n = elems.len();
    let count = simplex_count(n, h)?;
    if count > budget {
        return Err(Error::CardinalityOverflow { needed: count, budget });
    }

    let order = group.order()? as u128;
    let mut table = FirstHit::new(order);
    let mut rank: u64 = 0;
    let mut witness = None;
    walk_simplex_coefficients(group, &elems, h, &mut |alpha, sum| {
        let idx = group.encode(sum)?;
        if let Some(prev) = table.insert(idx, rank) {
            witness = Some(BhWitness {
                alpha: unrank_simplex_vector(n, h, prev),
                beta: alpha.to_vec(),
                sum: sum.clone(),
            });
            return Ok(false);
        }
        rank += 1;
        Ok(true)
    })?;
    Ok(BhVerdict { is_bh_set: witness.is_none(), witness })
}

/// Coefficient vector at position `rank` of the lexicographic enumeration of
/// `simplex(n, h)`.
fn unrank_simplex_vector(n: usize, h: u32, mut rank: u64) -> Vec<i128> {
    let mut alpha = vec![0i128; n];
    let mut rem = h as i128;
    for i in 0..n {
        let mut v = 0i128;
        loop {
            let block = binomial(rem - v + (n - i - 1) as i128, (n - i - 1) as i128)
                .expect("block count fits i128") as u64;
            if rank < block {
                break;
            }
            rank -= block;
            v += 1;
        }
        alpha[i] = v;
        rem -= v;
    }
    alpha
}

/// Independent cross-check route: enumerate the sums of exactly `h` not
/// necessarily distinct elements of `set` (no translation) and test them for
/// a duplicate.
pub fn is_bh_set_by_sums(group: &AbelianGroup, set: &[GroupElement], h: u32) -> Result<bool> {
    check_set(group, set, h)?;
    let n = set.len() - 1;
    let count = simplex_count(n, h)?;
    if count > DEFAULT_ENUM_BUDGET {
        return Err(Error::CardinalityOverflow { needed: count, budget: DEFAULT_ENUM_BUDGET });
    }
    let order = group.order()? as u128;
    let mut table = FirstHit::new(order);
    fn rec(
        group: &AbelianGroup,
        set: &[GroupElement],
        table: &mut FirstHit,
        lo: usize,
        left: u32,
        sum: GroupElement,
    ) -> Result<bool> {
        if left == 0 {
            let idx = group.encode(&sum)?;
            return Ok(table.insert(idx, 0).is_none());
        }
        for i in lo..set.len() {
            let next = group.add(&sum, &set[i])?;
            if !rec(group, set, table, i, left - 1, next)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
    rec(group, set, &mut table, 0, h, group.zero())
}

/// Is `set` an h-basis: does every group element arise as a weighted sum
/// with coefficients in `simplex(n, h)`?
pub fn is_h_basis(group: &AbelianGroup, set: &[GroupElement], h: u32) -> Result<BasisVerdict> {
    check_set(group, set, h)?;
    let elems = translate(group, set)?;
    let count = simplex_count(elems.len(), h)?;
    if count > DEFAULT_ENUM_BUDGET {
        return Err(Error::CardinalityOverflow { needed: count, budget: DEFAULT_ENUM_BUDGET });
    }
    let order = group.order()? as u128;
    let mut table = FirstHit::new(order);
    let mut reached: u128 = 0;
    walk_simplex_coefficients(group, &elems, h, &mut |_, sum| {
        if table.insert(group.encode(sum)?, 0).is_none() {
            reached += 1;
        }
        Ok(reached < order)
    })?;
    finish_basis_verdict(group, &table, reached, order)
}

/// Generalized basis check with coefficients ranging over the difference
/// body `diff(n, r, t)`; `t = 0` coincides with `is_h_basis(..., r)`.
pub fn is_generalized_basis(
    group: &AbelianGroup,
    set: &[GroupElement],
    r: u32,
    t: u32,
) -> Result<BasisVerdict> {
    check_set(group, set, r.max(t).max(1))?;
    let elems = translate(group, set)?;
    let n = elems.len();
    let order = group.order()? as u128;

    if n == 0 {
        // Only the empty coefficient vector: reachable set is {0}.
        return if order == 1 {
            Ok(BasisVerdict { is_basis: true, witness: None })
        } else {
            Ok(BasisVerdict {
                is_basis: false,
                witness: Some(BasisWitness { unreachable: group.decode(1) }),
            })
        };
    }

    let pairs = mul(
        binomial(r as i128 + n as i128, n as i128)?,
        binomial(t as i128 + n as i128, n as i128)?,
    )? as u128;
    if pairs > DEFAULT_ENUM_BUDGET {
        return Err(Error::CardinalityOverflow { needed: pairs, budget: DEFAULT_ENUM_BUDGET });
    }

    let body = ShapeSpec::diff_body(n, r, t)?.points();
    let mut table = FirstHit::new(order);
    let mut reached: u128 = 0;
    for alpha in body.points() {
        let sum = element_combine(group, alpha, &elems)?;
        if table.insert(group.encode(&sum)?, 0).is_none() {
            reached += 1;
            if reached == order {
                break;
            }
        }
    }
    finish_basis_verdict(group, &table, reached, order)
}

fn finish_basis_verdict(
    group: &AbelianGroup,
    table: &FirstHit,
    reached: u128,
    order: u128,
) -> Result<BasisVerdict> {
    if reached == order {
        return Ok(BasisVerdict { is_basis: true, witness: None });
    }
    let first_gap = (0..order).find(|&i| !table.contains(i)).expect("gap exists");
    Ok(BasisVerdict {
        is_basis: false,
        witness: Some(BasisWitness { unreachable: group.decode(first_gap) }),
    })
}

fn coset_index(rep: &[i128], lat: &Lattice) -> u128 {
    let mut idx: u128 = 0;
    for (i, &c) in rep.iter().enumerate() {
        idx = idx * lat.diagonal(i) as u128 + c as u128;
    }
    idx
}

fn coset_decode(mut idx: u128, lat: &Lattice) -> Vec<i128> {
    let n = lat.n();
    let mut rep = vec![0i128; n];
    for i in (0..n).rev() {
        let d = lat.diagonal(i) as u128;
        rep[i] = (idx % d) as i128;
        idx /= d;
    }
    rep
}

/// Classify the translates of `points` under `lat`: packing (all cosets
/// distinct), covering (all cosets hit), tiling (both), or neither.
pub fn classify_arrangement(points: &PointSet, lat: &Lattice) -> Result<ArrangementVerdict> {
    if points.n() != lat.n() {
        return Err(Error::DimensionMismatch { expected: lat.n(), got: points.n() });
    }
    let det = lat.det()?;
    let mut table = FirstHit::new(det as u128);
    let mut distinct: i128 = 0;
    let mut collision = None;
    for (i, p) in points.points().iter().enumerate() {
        let rep = lat.coset_reduce(p)?;
        let idx = coset_index(&rep, lat);
        match table.insert(idx, i as u64) {
            None => distinct += 1,
            Some(prev) => {
                if collision.is_none() {
                    collision = Some(PointCollision {
                        first: points.points()[prev as usize].clone(),
                        second: p.clone(),
                        coset: rep,
                    });
                }
            }
        }
    }
    let covering = distinct == det;
    let packing = collision.is_none();
    let class = match (packing, covering) {
        (true, true) => ArrangementClass::Tiling,
        (true, false) => ArrangementClass::PackingOnly,
        (false, true) => ArrangementClass::CoveringOnly,
        (false, false) => ArrangementClass::Neither,
    };
    let uncovered = if covering {
        None
    } else {
        let gap = (0..det as u128).find(|&i| !table.contains(i)).expect("gap exists");
        Some(coset_decode(gap, lat))
    };
    Ok(ArrangementVerdict {
        class,
        points: points.len(),
        distinct_cosets: distinct,
        det,
        collision,
        uncovered,
    })
}

/// Reusable scratch for the search hot loop: packing/covering checks with
/// early abort and no per-lattice allocation.
pub struct ArrangementChecker {
    stamp: Vec<u32>,
    generation: u32,
    rep: Vec<i128>,
}

impl Default for ArrangementChecker {
    fn default() -> Self {
        Self::new()
    }
}

impl ArrangementChecker {
    pub fn new() -> Self {
        ArrangementChecker { stamp: Vec::new(), generation: 0, rep: Vec::new() }
    }

    fn begin(&mut self, det: i128, n: usize) -> Result<()> {
        if det as u128 > DENSE_LIMIT {
            return Err(Error::UnsupportedParameters(format!(
                "determinant {det} exceeds the dense coset table limit"
            )));
        }
        let det = det as usize;
        if self.stamp.len() < det {
            self.stamp.resize(det, u32::MAX);
            self.generation = u32::MAX;
        }
        if self.generation == u32::MAX {
            self.stamp.fill(u32::MAX - 1);
            self.generation = 0;
        }
        self.generation += 1;
        self.rep.resize(n, 0);
        Ok(())
    }

    /// True iff all points land in pairwise distinct cosets.
    pub fn is_packing(&mut self, points: &PointSet, lat: &Lattice) -> Result<bool> {
        let det = lat.det()?;
        if (points.len() as i128) > det {
            return Ok(false);
        }
        self.begin(det, lat.n())?;
        for p in points.points() {
            self.rep.copy_from_slice(p);
            lat.coset_reduce_in_place(&mut self.rep)?;
            let idx = coset_index(&self.rep, lat) as usize;
            if self.stamp[idx] == self.generation {
                return Ok(false);
            }
            self.stamp[idx] = self.generation;
        }
        Ok(true)
    }

    /// True iff the points hit every coset.
    pub fn is_covering(&mut self, points: &PointSet, lat: &Lattice) -> Result<bool> {
        let det = lat.det()?;
        if (points.len() as i128) < det {
            return Ok(false);
        }
        self.begin(det, lat.n())?;
        let mut missing = det;
        for (i, p) in points.points().iter().enumerate() {
            self.rep.copy_from_slice(p);
            lat.coset_reduce_in_place(&mut self.rep)?;
            let idx = coset_index(&self.rep, lat) as usize;
            if self.stamp[idx] != self.generation {
                self.stamp[idx] = self.generation;
                missing -= 1;
                if missing == 0 {
                    return Ok(true);
                }
            }
            if missing > (points.len() - i - 1) as i128 {
                return Ok(false);
            }
        }
        Ok(false)
    }
}
