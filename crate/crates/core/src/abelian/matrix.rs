//! Dense integer matrices with overflow-checked arithmetic.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Aborts with a diagnostic instead of wrapping.
#[cold]
#[inline(never)]
fn overflow(op: &str, a: i64, b: i64) -> ! {
    panic!("integer overflow in {op}({a}, {b}): invariant factors would be corrupted")
}

#[inline]
pub(crate) fn add(a: i64, b: i64) -> i64 {
    a.checked_add(b).unwrap_or_else(|| overflow("add", a, b))
}

#[inline]
pub(crate) fn mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).unwrap_or_else(|| overflow("mul", a, b))
}

#[inline]
pub(crate) fn neg(a: i64) -> i64 {
    a.checked_neg().unwrap_or_else(|| overflow("neg", a, 0))
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    i64::try_from(a).unwrap_or_else(|_| overflow("gcd", i64::MIN, 0))
}

/// Row-major integer matrix. Zero-sized shapes are allowed.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "ShapedRepr")]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct ShapedRepr {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

/// Accepts either `{"rows","cols","entries"}` or a nested `[[..], ..]` array.
#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixRepr {
    Shaped(ShapedRepr),
    Nested(Vec<Vec<i64>>),
}

impl From<IntMatrix> for ShapedRepr {
    fn from(m: IntMatrix) -> Self {
        ShapedRepr {
            rows: m.rows,
            cols: m.cols,
            entries: m.entries,
        }
    }
}

impl TryFrom<MatrixRepr> for IntMatrix {
    type Error = String;

    fn try_from(repr: MatrixRepr) -> Result<Self, String> {
        match repr {
            MatrixRepr::Shaped(s) => IntMatrix::new(s.rows, s.cols, s.entries),
            MatrixRepr::Nested(rows) => IntMatrix::from_rows(&rows),
        }
    }
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<i64>) -> Result<Self, String> {
        if entries.len() != rows * cols {
            return Err(format!(
                "matrix of shape {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                entries.len()
            ));
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, String> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(format!("row {i} has {} entries, expected {cols}", r.len()));
            }
            entries.extend_from_slice(r);
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<i64>]) -> Self {
        let mut m = IntMatrix::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column {j} has wrong length");
            for (i, &x) in c.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[i64]) -> Self {
        let mut m = IntMatrix::zeros(rows, cols);
        for (i, &d) in diag.iter().enumerate().take(rows.min(cols)) {
            m[(i, i)] = d;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.cols).map(|j| self.column(j))
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(
            self.cols, rhs.rows,
            "shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs[(k, j)];
                    if b != 0 {
                        out[(i, j)] = add(out[(i, j)], mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, x.len(), "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(0, |acc, (&a, &b)| add(acc, mul(a, b)))
            })
            .collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut out = IntMatrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)];
            }
        }
        out
    }

    /// Block-diagonal sum.
    pub fn block_diag(&self, other: &IntMatrix) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)];
            }
        }
        out
    }

    pub fn select_rows(&self, range: std::ops::Range<usize>) -> IntMatrix {
        let mut out = IntMatrix::zeros(range.len(), self.cols);
        for (k, i) in range.enumerate() {
            for j in 0..self.cols {
                out[(k, j)] = self[(i, j)];
            }
        }
        out
    }

    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows, cols.len());
        for (k, &j) in cols.iter().enumerate() {
            for i in 0..self.rows {
                out[(i, k)] = self[(i, j)];
            }
        }
        out
    }

    pub fn negated(&self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&x| neg(x)).collect(),
        }
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn determinant(&self) -> i64 {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> = self
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(i128::from).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[i][j]
                        .checked_mul(a[k][k])
                        .and_then(|x| x.checked_sub(a[i][k].checked_mul(a[k][j])?))
                        .expect("determinant overflow");
                    a[i][j] = num / prev;
                }
            }
            prev = a[k][k];
        }
        let det = sign * a[n - 1][n - 1];
        i64::try_from(det).expect("determinant overflow")
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;

    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "IntMatrix{}x{}{:?}",
            self.rows,
            self.cols,
            self.to_rows()
        )
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows == 0 || self.cols == 0 {
            return write!(f, "[] ({}x{})", self.rows, self.cols);
        }
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}
