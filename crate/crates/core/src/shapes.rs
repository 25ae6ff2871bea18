//! Discrete bodies: simplices, their difference bodies, and cross-polytopes.
//!
//! `simplex(n, h)` is the set of nonnegative integer vectors with coordinate
//! sum at most `h` (cardinality `C(h+n, n)`). `diff(n, r, t)` is the set of
//! differences `x - y` with `x` in `simplex(n, r)` and `y` in
//! `simplex(n, t)`. `cross(n, r)` is the l1-ball of radius `r`.
//!
//! Point sets are stored explicitly, deduplicated, in ascending
//! lexicographic order, so set equality and file output are deterministic.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::mul;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShapeKind {
    Simplex { h: u32 },
    DiffBody { r: u32, t: u32 },
    CrossPolytope { r: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ShapeSpec {
    n: usize,
    kind: ShapeKind,
}

impl ShapeSpec {
    pub fn new(n: usize, kind: ShapeKind) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidShapeSpec(format!("{kind:?}"), "n must be >= 1".into()));
        }
        Ok(ShapeSpec { n, kind })
    }

    pub fn simplex(n: usize, h: u32) -> Result<Self> {
        Self::new(n, ShapeKind::Simplex { h })
    }

    pub fn diff_body(n: usize, r: u32, t: u32) -> Result<Self> {
        Self::new(n, ShapeKind::DiffBody { r, t })
    }

    pub fn cross_polytope(n: usize, r: u32) -> Result<Self> {
        Self::new(n, ShapeKind::CrossPolytope { r })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> ShapeKind {
        self.kind
    }

    /// Every lattice point of the body.
    pub fn points(&self) -> PointSet {
        let points = match self.kind {
            ShapeKind::Simplex { h } => simplex_points(self.n, h),
            ShapeKind::DiffBody { r, t } => {
                let plus = simplex_points(self.n, r);
                let minus = simplex_points(self.n, t);
                let mut set = BTreeSet::new();
                for x in &plus {
                    for y in &minus {
                        set.insert(x.iter().zip(y).map(|(a, b)| a - b).collect::<Vec<_>>());
                    }
                }
                set.into_iter().collect()
            }
            ShapeKind::CrossPolytope { r } => {
                let mut out = Vec::new();
                let mut cur = vec![0i128; self.n];
                cross_rec(&mut out, &mut cur, 0, r as i128);
                out
            }
        };
        PointSet { n: self.n, points }
    }

    /// `|points()|`; closed form for simplices, enumeration otherwise.
    pub fn cardinality(&self) -> Result<i128> {
        match self.kind {
            ShapeKind::Simplex { h } => binomial(h as i128 + self.n as i128, self.n as i128),
            _ => Ok(self.points().len() as i128),
        }
    }
}

fn simplex_points(n: usize, h: u32) -> Vec<Vec<i128>> {
    let mut out = Vec::new();
    let mut cur = vec![0i128; n];
    simplex_rec(&mut out, &mut cur, 0, h as i128);
    out
}

fn simplex_rec(out: &mut Vec<Vec<i128>>, cur: &mut Vec<i128>, i: usize, rem: i128) {
    if i == cur.len() {
        out.push(cur.clone());
        return;
    }
    for v in 0..=rem {
        cur[i] = v;
        simplex_rec(out, cur, i + 1, rem - v);
    }
    cur[i] = 0;
}

fn cross_rec(out: &mut Vec<Vec<i128>>, cur: &mut Vec<i128>, i: usize, rem: i128) {
    if i == cur.len() {
        out.push(cur.clone());
        return;
    }
    for v in -rem..=rem {
        cur[i] = v;
        cross_rec(out, cur, i + 1, rem - v.abs());
    }
    cur[i] = 0;
}

pub(crate) fn binomial(a: i128, b: i128) -> Result<i128> {
    if b < 0 || b > a {
        return Ok(0);
    }
    let b = b.min(a - b);
    let mut acc = 1i128;
    for i in 1..=b {
        acc = mul(acc, a - b + i)?;
        debug_assert_eq!(acc % i, 0);
        acc /= i;
    }
    Ok(acc)
}

/// A finite subset of Z^n, deduplicated and lexicographically sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSet {
    n: usize,
    points: Vec<Vec<i128>>,
}

impl PointSet {
    pub fn from_points(n: usize, points: Vec<Vec<i128>>) -> Result<Self> {
        if points.iter().any(|p| p.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: 0 });
        }
        let set: BTreeSet<Vec<i128>> = points.into_iter().collect();
        Ok(PointSet { n, points: set.into_iter().collect() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<i128>] {
        &self.points
    }

    pub fn contains(&self, p: &[i128]) -> bool {
        self.points.binary_search_by(|q| q.as_slice().cmp(p)).is_ok()
    }
}

impl fmt::Display for ShapeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ShapeKind::Simplex { h } => write!(f, "simplex:n={},h={}", self.n, h),
            ShapeKind::DiffBody { r, t } => write!(f, "diff:n={},r={},t={}", self.n, r, t),
            ShapeKind::CrossPolytope { r } => write!(f, "cross:n={},r={}", self.n, r),
        }
    }
}

impl FromStr for ShapeSpec {
    type Err = Error;

    /// Grammar: `simplex:n=2,h=4` | `diff:n=2,r=3,t=2` | `cross:n=2,r=1`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidShapeSpec(s.to_string(), msg.to_string());
        let (head, rest) = s.split_once(':').ok_or_else(|| bad("missing ':'"))?;
        let mut fields = std::collections::BTreeMap::new();
        for part in rest.split(',') {
            let (k, v) = part.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            let v: i128 = v.trim().parse().map_err(|_| bad("value is not an integer"))?;
            if v < 0 {
                return Err(bad("parameters must be nonnegative"));
            }
            if fields.insert(k.trim().to_string(), v).is_some() {
                return Err(bad("duplicate key"));
            }
        }
        let get = |k: &str| fields.get(k).copied().ok_or_else(|| bad("missing parameter"));
        let expect_keys = |keys: &[&str]| -> Result<()> {
            if fields.len() != keys.len() || !keys.iter().all(|k| fields.contains_key(*k)) {
                return Err(bad("unexpected parameters"));
            }
            Ok(())
        };
        let n = get("n")? as usize;
        match head.trim() {
            "simplex" => {
                expect_keys(&["n", "h"])?;
                ShapeSpec::simplex(n, get("h")? as u32)
            }
            "diff" => {
                expect_keys(&["n", "r", "t"])?;
                ShapeSpec::diff_body(n, get("r")? as u32, get("t")? as u32)
            }
            "cross" => {
                expect_keys(&["n", "r"])?;
                ShapeSpec::cross_polytope(n, get("r")? as u32)
            }
            other => Err(bad(&format!("unknown shape kind {other:?}"))),
        }
    }
}

impl Serialize for ShapeSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ShapeSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_counts() {
        assert_eq!(ShapeSpec::simplex(2, 3).unwrap().points().len(), 10);
        assert_eq!(ShapeSpec::simplex(3, 2).unwrap().cardinality().unwrap(), 10);
        for n in 1..=6usize {
            for h in 0..=12u32 {
                let spec = ShapeSpec::simplex(n, h).unwrap();
                assert_eq!(spec.points().len() as i128, spec.cardinality().unwrap());
            }
        }
    }

    #[test]
    fn hexagon_points() {
        let p = ShapeSpec::diff_body(2, 1, 1).unwrap().points();
        assert_eq!(p.len(), 7);
        let expect: Vec<Vec<i128>> = vec![
            vec![-1, 0],
            vec![-1, 1],
            vec![0, -1],
            vec![0, 0],
            vec![0, 1],
            vec![1, -1],
            vec![1, 0],
        ];
        assert_eq!(p.points(), expect.as_slice());
    }

    #[test]
    fn diff_body_cardinalities() {
        assert_eq!(ShapeSpec::diff_body(3, 1, 1).unwrap().cardinality().unwrap(), 13);
        assert_eq!(ShapeSpec::diff_body(2, 2, 2).unwrap().cardinality().unwrap(), 19);
    }

    #[test]
    fn cross_polytope_counts() {
        assert_eq!(ShapeSpec::cross_polytope(2, 1).unwrap().points().len(), 5);
        assert_eq!(ShapeSpec::cross_polytope(3, 1).unwrap().points().len(), 7);
    }

    #[test]
    fn diff_of_zero_is_simplex() {
        for n in 1..=3usize {
            for h in 0..=4u32 {
                let d = ShapeSpec::diff_body(n, h, 0).unwrap().points();
                let s = ShapeSpec::simplex(n, h).unwrap().points();
                assert_eq!(d, s);
            }
        }
    }

    #[test]
    fn diff_body_central_symmetry() {
        for r in 1..=3u32 {
            let p = ShapeSpec::diff_body(2, r, r).unwrap().points();
            for pt in p.points() {
                let neg: Vec<i128> = pt.iter().map(|v| -v).collect();
                assert!(p.contains(&neg));
            }
        }
    }

    #[test]
    fn monotone_inclusion() {
        for h in 0..=4u32 {
            let small = ShapeSpec::simplex(2, h).unwrap().points();
            let large = ShapeSpec::simplex(2, h + 1).unwrap().points();
            for p in small.points() {
                assert!(large.contains(p));
            }
        }
        let small = ShapeSpec::diff_body(2, 1, 1).unwrap().points();
        let large = ShapeSpec::diff_body(2, 2, 1).unwrap().points();
        for p in small.points() {
            assert!(large.contains(p));
        }
    }

    #[test]
    fn spec_string_roundtrip() {
        for s in ["simplex:n=2,h=4", "diff:n=2,r=3,t=2", "cross:n=2,r=1"] {
            let spec: ShapeSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("simplex:n=0,h=4".parse::<ShapeSpec>().is_err());
        assert!("box:n=2,h=4".parse::<ShapeSpec>().is_err());
        assert!("simplex:n=2".parse::<ShapeSpec>().is_err());
        assert!("simplex:n=2,h=1,r=3".parse::<ShapeSpec>().is_err());
    }

    #[test]
    fn points_are_sorted_and_unique() {
        let p = ShapeSpec::diff_body(2, 2, 1).unwrap().points();
        let mut sorted = p.points().to_vec();
        sorted.sort();
        sorted.dedup();
        assert_eq!(p.points(), sorted.as_slice());
    }
}
