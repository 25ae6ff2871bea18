//! Full-rank sublattices of Z^n in canonical Hermite normal form.
//!
//! Convention: rows of the basis matrix are the generators, the form is
//! lower-triangular with strictly positive diagonal, and every entry below
//! the diagonal is reduced into `[0, pivot)` where the pivot is the diagonal
//! entry of its column. Two bases generate the same lattice iff they
//! canonicalize to the same matrix.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{div_floor, mul, sub, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    n: usize,
    hnf: IntMatrix,
}

/// Canonicalize a row-generator basis into Hermite normal form.
///
/// Fails with `NonSquare` for rectangular input and `SingularBasis` when the
/// rows are linearly dependent.
pub fn hnf(basis: &IntMatrix) -> Result<Lattice> {
    if !basis.is_square() {
        return Err(Error::NonSquare { rows: basis.rows(), cols: basis.cols() });
    }
    let n = basis.rows();
    let mut a = basis.clone();

    // Work columns right to left; rows 0..=j are still free, rows above j
    // are finished and already have zeros in columns > their own index.
    for j in (0..n).rev() {
        loop {
            let mut pivot: Option<usize> = None;
            for r in 0..=j {
                if a[(r, j)] != 0
                    && pivot.is_none_or(|p| a[(r, j)].unsigned_abs() < a[(p, j)].unsigned_abs())
                {
                    pivot = Some(r);
                }
            }
            let r = pivot.ok_or(Error::SingularBasis)?;
            if a[(r, j)] < 0 {
                a.negate_row(r);
            }
            let mut clean = true;
            for i in 0..=j {
                if i == r || a[(i, j)] == 0 {
                    continue;
                }
                let q = div_floor(a[(i, j)], a[(r, j)])?;
                a.add_row_multiple(i, r, -q)?;
                if a[(i, j)] != 0 {
                    clean = false;
                }
            }
            if clean {
                a.swap_rows(r, j);
                break;
            }
        }
    }

    // Reduce below-diagonal entries into [0, pivot). Descending column order
    // keeps already-reduced entries of the same row intact.
    for i in 1..n {
        for j in (0..i).rev() {
            let q = div_floor(a[(i, j)], a[(j, j)])?;
            if q != 0 {
                a.add_row_multiple(i, j, -q)?;
            }
        }
    }

    Ok(Lattice { n, hnf: a })
}

impl Lattice {
    /// Accept a matrix that is already in canonical form.
    pub fn from_canonical_hnf(m: IntMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NonSquare { rows: m.rows(), cols: m.cols() });
        }
        let n = m.rows();
        for i in 0..n {
            if m[(i, i)] <= 0 {
                return Err(Error::SingularBasis);
            }
            for j in 0..n {
                let ok = if j > i {
                    m[(i, j)] == 0
                } else if j < i {
                    0 <= m[(i, j)] && m[(i, j)] < m[(j, j)]
                } else {
                    true
                };
                if !ok {
                    return Err(Error::SingularBasis);
                }
            }
        }
        Ok(Lattice { n, hnf: m })
    }

    pub fn identity(n: usize) -> Self {
        Lattice { n, hnf: IntMatrix::identity(n) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.hnf
    }

    pub fn diagonal(&self, i: usize) -> i128 {
        self.hnf[(i, i)]
    }

    /// Index of the lattice in Z^n, i.e. the product of the diagonal.
    pub fn det(&self) -> Result<i128> {
        let mut d = 1i128;
        for i in 0..self.n {
            d = mul(d, self.hnf[(i, i)])?;
        }
        Ok(d)
    }

    /// Canonical coset representative of `x` modulo this lattice.
    ///
    /// Back-substitutes in coordinate order n..1, leaving `0 <= r_i < d_i`.
    pub fn coset_reduce(&self, x: &[i128]) -> Result<Vec<i128>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: x.len() });
        }
        let mut r = x.to_vec();
        self.coset_reduce_in_place(&mut r)?;
        Ok(r)
    }

    pub(crate) fn coset_reduce_in_place(&self, r: &mut [i128]) -> Result<()> {
        for i in (0..self.n).rev() {
            let q = div_floor(r[i], self.hnf[(i, i)])?;
            if q != 0 {
                for c in 0..=i {
                    r[c] = sub(r[c], mul(q, self.hnf[(i, c)])?)?;
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, x: &[i128]) -> Result<bool> {
        Ok(self.coset_reduce(x)?.iter().all(|&v| v == 0))
    }
}

impl Serialize for Lattice {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        LatticeFile { n: self.n, basis: self.hnf.to_rows() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Lattice {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let file = LatticeFile::deserialize(deserializer)?;
        if file.basis.len() != file.n || file.basis.iter().any(|r| r.len() != file.n) {
            return Err(D::Error::custom("basis must be an n x n matrix"));
        }
        let m = IntMatrix::from_rows(file.basis).map_err(D::Error::custom)?;
        hnf(&m).map_err(D::Error::custom)
    }
}

/// On-disk form: `{"n": 2, "basis": [[7,0],[4,1]]}`. Loading re-canonicalizes.
#[derive(Serialize, Deserialize)]
struct LatticeFile {
    n: usize,
    basis: Vec<Vec<i128>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(rows: Vec<Vec<i128>>) -> Lattice {
        hnf(&IntMatrix::from_rows(rows).unwrap()).unwrap()
    }

    #[test]
    fn hnf_identity() {
        assert_eq!(lat(vec![vec![1, 0], vec![0, 1]]).basis().to_rows(), vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn hnf_normalizes_off_diagonal() {
        // (-3,1) + (7,0) = (4,1), off-diagonal lands in [0,7).
        assert_eq!(lat(vec![vec![7, 0], vec![-3, 1]]).basis().to_rows(), vec![vec![7, 0], vec![4, 1]]);
    }

    #[test]
    fn hnf_already_reduced() {
        assert_eq!(lat(vec![vec![2, 0], vec![0, 3]]).basis().to_rows(), vec![vec![2, 0], vec![0, 3]]);
    }

    #[test]
    fn hnf_rejects_singular() {
        let m = IntMatrix::from_rows(vec![vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(hnf(&m), Err(Error::SingularBasis));
    }

    #[test]
    fn hnf_rejects_non_square() {
        let m = IntMatrix::from_rows(vec![vec![1, 1]]).unwrap();
        assert!(matches!(hnf(&m), Err(Error::NonSquare { .. })));
    }

    #[test]
    fn det_matches_diagonal_product() {
        let l = lat(vec![vec![7, 0], vec![-3, 1]]);
        assert_eq!(l.det().unwrap(), 7);
        let m = IntMatrix::from_rows(vec![vec![7, 0], vec![-3, 1]]).unwrap();
        assert_eq!(m.det().unwrap().abs(), 7);
    }

    #[test]
    fn coset_reduce_examples() {
        let l = lat(vec![vec![7, 0], vec![4, 1]]);
        assert_eq!(l.coset_reduce(&[-3, 1]).unwrap(), vec![0, 0]);
        assert_eq!(l.coset_reduce(&[8, 1]).unwrap(), vec![4, 0]);
        assert_eq!(l.coset_reduce(&[0, 0]).unwrap(), vec![0, 0]);
    }

    #[test]
    fn coset_reduce_is_idempotent_and_separates() {
        let l = lat(vec![vec![7, 0], vec![4, 1]]);
        for x in [[-3i128, 1], [8, 1], [5, -9], [100, 23]] {
            let r = l.coset_reduce(&x).unwrap();
            assert_eq!(l.coset_reduce(&r).unwrap(), r);
            let diff = [x[0] - r[0], x[1] - r[1]];
            assert!(l.contains(&diff).unwrap());
        }
    }

    #[test]
    fn coset_partition_counts() {
        // Every residue box [0,m)^2 with m = det hits each coset equally often.
        let l = lat(vec![vec![2, 0], vec![1, 2]]);
        let m = l.det().unwrap();
        let mut counts = std::collections::HashMap::new();
        for x in 0..m * m {
            for y in 0..m * m {
                let r = l.coset_reduce(&[x, y]).unwrap();
                *counts.entry(r).or_insert(0u64) += 1;
            }
        }
        assert_eq!(counts.len() as i128, m);
        let per = (m * m) * (m * m) / m;
        assert!(counts.values().all(|&c| c as i128 == per));
    }

    #[test]
    fn serde_roundtrip_canonicalizes() {
        let json = r#"{"n":2,"basis":[[7,0],[-3,1]]}"#;
        let l: Lattice = serde_json::from_str(json).unwrap();
        assert_eq!(l.basis().to_rows(), vec![vec![7, 0], vec![4, 1]]);
        assert_eq!(serde_json::to_string(&l).unwrap(), r#"{"n":2,"basis":[[7,0],[4,1]]}"#);
    }
}
