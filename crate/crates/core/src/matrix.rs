//! Exact integer matrices.
//!
//! Entries are `i128` and every arithmetic step is overflow-checked: an
//! operation either returns the exact result or fails with
//! [`Error::Overflow`]. Nothing ever wraps silently.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) fn add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(Error::Overflow)
}

pub(crate) fn sub(a: i128, b: i128) -> Result<i128> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

pub(crate) fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

/// Floor division (quotient rounding toward negative infinity).
pub(crate) fn div_floor(a: i128, b: i128) -> Result<i128> {
    if b == 0 {
        return Err(Error::Overflow);
    }
    let q = a.checked_div(b).ok_or(Error::Overflow)?;
    let r = a - q * b;
    if r != 0 && (r < 0) != (b < 0) {
        Ok(q - 1)
    } else {
        Ok(q)
    }
}

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i128>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i128>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch { expected: c, got: 0 });
        }
        Ok(IntMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[i128] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i128>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            self[(i, c)] = -self[(i, c)];
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for r in 0..self.rows {
            self[(r, j)] = -self[(r, j)];
        }
    }

    /// `row_i += k * row_j`
    pub fn add_row_multiple(&mut self, i: usize, j: usize, k: i128) -> Result<()> {
        debug_assert_ne!(i, j);
        for c in 0..self.cols {
            let t = mul(k, self[(j, c)])?;
            self[(i, c)] = add(self[(i, c)], t)?;
        }
        Ok(())
    }

    /// `col_i += k * col_j`
    pub fn add_col_multiple(&mut self, i: usize, j: usize, k: i128) -> Result<()> {
        debug_assert_ne!(i, j);
        for r in 0..self.rows {
            let t = mul(k, self[(r, j)])?;
            self[(r, i)] = add(self[(r, i)], t)?;
        }
        Ok(())
    }

    pub fn matmul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let t = mul(a, other[(k, j)])?;
                    out[(i, j)] = add(out[(i, j)], t)?;
                }
            }
        }
        Ok(out)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<i128> {
        if !self.is_square() {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut a = self.clone();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[(k, k)] == 0 {
                match (k + 1..n).find(|&i| a[(i, k)] != 0) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = sub(mul(a[(i, j)], a[(k, k)])?, mul(a[(i, k)], a[(k, j)])?)?;
                    // Bareiss: division by the previous pivot is exact.
                    debug_assert_eq!(num % prev, 0);
                    a[(i, j)] = num / prev;
                }
                a[(i, k)] = 0;
            }
            prev = a[(k, k)];
        }
        mul(sign, a[(n - 1, n - 1)])
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i128;
    fn index(&self, (r, c): (usize, usize)) -> &i128 {
        &self.entries[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut i128 {
        &mut self.entries[r * self.cols + c]
    }
}

impl std::fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{:?}", self.row(i))?;
        }
        Ok(())
    }
}
