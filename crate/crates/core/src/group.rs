//! Finite Abelian groups in invariant-factor form.
//!
//! A group is the chain `Z_{d_1} x ... x Z_{d_k}` with `d_i | d_{i+1}` and
//! every `d_i >= 2`; the trivial group is the empty chain. Elements are
//! residue vectors reduced coordinatewise. Factors equal to 1 are never
//! stored, so group equality is plain vector comparison.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::matrix::{add, mul};
use crate::snf::snf;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    factors: Vec<i128>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    coords: Vec<i128>,
}

impl GroupElement {
    pub fn from_coords(coords: Vec<i128>) -> Self {
        GroupElement { coords }
    }

    pub fn coords(&self) -> &[i128] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl AbelianGroup {
    /// Build from an invariant-factor chain; factors of 1 are dropped.
    pub fn new(factors: Vec<i128>) -> Result<Self> {
        let factors: Vec<i128> = factors.into_iter().filter(|&d| d != 1).collect();
        for w in factors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::UnsupportedParameters(format!(
                    "invariant factors must form a divisibility chain, got {factors:?}"
                )));
            }
        }
        if factors.iter().any(|&d| d < 2) {
            return Err(Error::UnsupportedParameters(format!(
                "invariant factors must be >= 2, got {factors:?}"
            )));
        }
        Ok(AbelianGroup { factors })
    }

    pub fn trivial() -> Self {
        AbelianGroup { factors: vec![] }
    }

    pub fn cyclic(m: i128) -> Result<Self> {
        AbelianGroup::new(vec![m])
    }

    pub fn factors(&self) -> &[i128] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> Result<i128> {
        let mut o = 1i128;
        for &d in &self.factors {
            o = mul(o, d)?;
        }
        Ok(o)
    }

    /// True iff the group is generated by a single element (at most one
    /// invariant factor; the trivial group counts as cyclic).
    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement { coords: vec![0; self.factors.len()] }
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        e.coords.len() == self.factors.len()
            && e.coords.iter().zip(&self.factors).all(|(&c, &d)| 0 <= c && c < d)
    }

    /// Reduce arbitrary integer coordinates into canonical residues.
    pub fn reduce(&self, coords: &[i128]) -> Result<GroupElement> {
        if coords.len() != self.factors.len() {
            return Err(Error::ElementNotInGroup {
                expected: self.factors.len(),
                got: coords.len(),
            });
        }
        Ok(GroupElement {
            coords: coords.iter().zip(&self.factors).map(|(&c, &d)| c.rem_euclid(d)).collect(),
        })
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        element_combine(self, &[1, 1], &[a.clone(), b.clone()])
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        element_combine(self, &[1, -1], &[a.clone(), b.clone()])
    }

    /// Mixed-radix index of a canonical element; the injection into
    /// `[0, order)` used for hashing and bitmaps. Ascending index is
    /// lexicographic order on coordinates.
    pub fn encode(&self, e: &GroupElement) -> Result<u128> {
        if !self.contains(e) {
            return Err(Error::ElementNotInGroup {
                expected: self.factors.len(),
                got: e.coords.len(),
            });
        }
        let mut idx: u128 = 0;
        for (&c, &d) in e.coords.iter().zip(&self.factors) {
            idx = idx
                .checked_mul(d as u128)
                .and_then(|x| x.checked_add(c as u128))
                .ok_or(Error::Overflow)?;
        }
        Ok(idx)
    }

    pub fn decode(&self, mut idx: u128) -> GroupElement {
        let mut coords = vec![0i128; self.factors.len()];
        for (slot, &d) in coords.iter_mut().zip(&self.factors).rev() {
            *slot = (idx % d as u128) as i128;
            idx /= d as u128;
        }
        GroupElement { coords }
    }

    /// All elements in lexicographic coordinate order.
    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        let order = self.order()?;
        Ok((0..order as u128).map(|i| self.decode(i)).collect())
    }
}

/// `sum_i coeffs[i] * elems[i]` with coordinatewise modular reduction.
pub fn element_combine(
    group: &AbelianGroup,
    coeffs: &[i128],
    elems: &[GroupElement],
) -> Result<GroupElement> {
    if coeffs.len() != elems.len() {
        return Err(Error::GroupMismatch { coeffs: coeffs.len(), elems: elems.len() });
    }
    let k = group.factors.len();
    let mut acc = vec![0i128; k];
    for (c, e) in coeffs.iter().zip(elems) {
        if !group.contains(e) {
            return Err(Error::ElementNotInGroup { expected: k, got: e.coords.len() });
        }
        for j in 0..k {
            let d = group.factors[j];
            let t = mul(c.rem_euclid(d), e.coords[j])?;
            acc[j] = add(acc[j], t)?.rem_euclid(d);
        }
    }
    Ok(GroupElement { coords: acc })
}

/// The projection Z^n -> G induced by a full-rank sublattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupProjection {
    n: usize,
    group: AbelianGroup,
    images: Vec<GroupElement>,
}

impl GroupProjection {
    pub fn source_dim(&self) -> usize {
        self.n
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    /// Image of the i-th standard basis vector.
    pub fn image_of_basis(&self, i: usize) -> &GroupElement {
        &self.images[i]
    }

    pub fn project(&self, x: &[i128]) -> Result<GroupElement> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: x.len() });
        }
        element_combine(&self.group, x, &self.images)
    }
}

/// Quotient `Z^n / L` as an invariant-factor group, with the projection that
/// sends each standard basis vector to its coset.
pub fn group_from_lattice(lattice: &Lattice) -> Result<(AbelianGroup, GroupProjection)> {
    let n = lattice.n();
    let res = snf(lattice.basis())?;
    let group = AbelianGroup::new(res.d.clone())?;
    let kept: Vec<usize> = (0..n).filter(|&j| res.d[j] != 1).collect();
    let images = (0..n)
        .map(|i| {
            let coords: Vec<i128> =
                kept.iter().map(|&j| res.v[(i, j)].rem_euclid(res.d[j])).collect();
            GroupElement { coords }
        })
        .collect();
    Ok((group.clone(), GroupProjection { n, group, images }))
}

/// On-disk set format: `{"group": {"factors": [...]}, "elements": [[...]]}`.
/// Elements are reduced on load.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetFile {
    pub group: AbelianGroup,
    pub elements: Vec<Vec<i128>>,
}

impl SetFile {
    pub fn new(group: &AbelianGroup, elements: &[GroupElement]) -> Self {
        SetFile {
            group: group.clone(),
            elements: elements.iter().map(|e| e.coords.clone()).collect(),
        }
    }

    pub fn reduced_elements(&self) -> Result<Vec<GroupElement>> {
        self.elements.iter().map(|c| self.group.reduce(c)).collect()
    }
}
