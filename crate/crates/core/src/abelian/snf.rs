//! Smith normal form with tracked transforms and their inverses.
//!
//! Work happens in `i128` with checked arithmetic. Every row or column
//! operation is mirrored on its inverse, so `U⁻¹` and `V⁻¹` come out exactly
//! without a separate inversion step.

use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;

/// `U · A · V = D` with `U`, `V` unimodular and `D` diagonal, `d₁ | d₂ | …`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl SnfResult {
    /// Nonzero diagonal entries, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<i64> {
        (0..self.rank).map(|i| self.d[(i, i)]).collect()
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)])
            .collect()
    }

    /// Re-checks the certificate against the input matrix.
    pub fn verify(&self, a: &IntMatrix) -> Result<(), String> {
        let [u, v, u_inv, v_inv] = [&self.u, &self.v, &self.u_inv, &self.v_inv].map(Wide::from_int);
        // products are formed in i128 so large transforms still verify
        if u.mul(&Wide::from_int(a)).mul(&v) != Wide::from_int(&self.d) {
            return Err("U·A·V differs from D".into());
        }
        if u.mul(&u_inv) != Wide::identity(u.rows) {
            return Err("U·U⁻¹ is not the identity".into());
        }
        if v.mul(&v_inv) != Wide::identity(v.rows) {
            return Err("V·V⁻¹ is not the identity".into());
        }
        for i in 0..self.d.rows() {
            for j in 0..self.d.cols() {
                if i != j && self.d[(i, j)] != 0 {
                    return Err(format!("off-diagonal entry at ({i},{j})"));
                }
            }
        }
        let diag = self.diagonal();
        for (i, w) in diag.windows(2).enumerate() {
            let ok = if w[0] == 0 {
                w[1] == 0
            } else {
                w[1] % w[0] == 0
            };
            if !ok || w[0] < 0 {
                return Err(format!("divisibility chain broken at index {i}: {w:?}"));
            }
        }
        Ok(())
    }
}

/// Aborts with a diagnostic instead of wrapping.
#[cold]
#[inline(never)]
fn overflow(op: &str, a: i128, b: i128) -> ! {
    panic!("integer overflow in {op}({a}, {b}): invariant factors would be corrupted")
}

fn add(a: i128, b: i128) -> i128 {
    a.checked_add(b).unwrap_or_else(|| overflow("add", a, b))
}

fn mul(a: i128, b: i128) -> i128 {
    a.checked_mul(b).unwrap_or_else(|| overflow("mul", a, b))
}

fn sub(a: i128, b: i128) -> i128 {
    a.checked_sub(b).unwrap_or_else(|| overflow("sub", a, b))
}

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    // invariant: old_r = a·old_s + b·old_t
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, sub(old_r, mul(q, r)));
        (old_s, s) = (s, sub(old_s, mul(q, s)));
        (old_t, t) = (t, sub(old_t, mul(q, t)));
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Dense `i128` working matrix; shapes with a zero side keep their other side.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Wide {
    rows: usize,
    cols: usize,
    data: Vec<Vec<i128>>,
}

impl Wide {
    fn zeros(rows: usize, cols: usize) -> Self {
        Wide {
            rows,
            cols,
            data: vec![vec![0; cols]; rows],
        }
    }

    fn identity(n: usize) -> Self {
        let mut w = Wide::zeros(n, n);
        for i in 0..n {
            w.data[i][i] = 1;
        }
        w
    }

    fn from_int(a: &IntMatrix) -> Self {
        Wide {
            rows: a.rows(),
            cols: a.cols(),
            data: (0..a.rows())
                .map(|i| a.row(i).iter().map(|&x| i128::from(x)).collect())
                .collect(),
        }
    }

    fn to_int(&self) -> IntMatrix {
        let entries = self
            .data
            .iter()
            .flatten()
            .map(|&x| i64::try_from(x).unwrap_or_else(|_| overflow("narrow", x, 0)))
            .collect();
        IntMatrix::new(self.rows, self.cols, entries).expect("shape is consistent")
    }

    fn transpose(&self) -> Self {
        let mut t = Wide::zeros(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                t.data[j][i] = x;
            }
        }
        t
    }

    fn mul(&self, rhs: &Wide) -> Wide {
        let mut out = Wide::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i][k];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i][j] = add(out.data[i][j], mul(a, rhs.data[k][j]));
                }
            }
        }
        out
    }

    /// `row[dst] -= q · row[src]`
    fn sub_row(&mut self, dst: usize, src: usize, q: i128) {
        for j in 0..self.cols {
            let x = mul(q, self.data[src][j]);
            self.data[dst][j] = sub(self.data[dst][j], x);
        }
    }

    /// `col[dst] += q · col[src]`
    fn add_col(&mut self, dst: usize, src: usize, q: i128) {
        for row in &mut self.data {
            row[dst] = add(row[dst], mul(q, row[src]));
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for row in &mut self.data {
            row.swap(a, b);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.data[i] {
            *x = -*x;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for row in &mut self.data {
            row[j] = -row[j];
        }
    }

    fn reverse_rows(&mut self) {
        self.data.reverse();
    }

    fn reverse_cols(&mut self) {
        for row in &mut self.data {
            row.reverse();
        }
    }

    fn leading(&self, i: usize) -> usize {
        self.data[i]
            .iter()
            .position(|&x| x != 0)
            .unwrap_or(self.cols)
    }

    /// At most one nonzero entry in each row and each column.
    fn is_monomial(&self) -> bool {
        let rows_ok = self
            .data
            .iter()
            .all(|r| r.iter().filter(|&&x| x != 0).count() <= 1);
        let cols_ok = (0..self.cols).all(|j| self.data.iter().filter(|r| r[j] != 0).count() <= 1);
        rows_ok && cols_ok
    }
}

/// Row Hermite form by lattice basis reduction, which keeps the multipliers
/// small. Returns `(H, P, P⁻¹)` with `P · A = H`; nonzero rows come first with
/// strictly increasing leading columns and positive pivots, zero rows last.
struct Hermite {
    a: Wide,
    p: Wide,
    p_inv: Wide,
    /// Gram–Schmidt numerators of the rows of `p`, strictly lower part.
    lambda: Vec<Vec<i128>>,
    /// `d[i]` is the Gram determinant of the first `i` rows of `p`.
    d: Vec<i128>,
}

impl Hermite {
    fn new(a: Wide) -> Self {
        let m = a.rows;
        Hermite {
            a,
            p: Wide::identity(m),
            p_inv: Wide::identity(m),
            lambda: vec![vec![0; m]; m],
            d: vec![1; m + 1],
        }
    }

    fn row_op(&mut self, k: usize, i: usize, q: i128) {
        self.a.sub_row(k, i, q);
        self.p.sub_row(k, i, q);
        self.p_inv.add_col(i, k, q);
    }

    fn minus(&mut self, i: usize) {
        self.a.negate_row(i);
        self.p.negate_row(i);
        self.p_inv.negate_col(i);
        for j in 0..self.lambda.len() {
            self.lambda[i][j] = -self.lambda[i][j];
            self.lambda[j][i] = -self.lambda[j][i];
        }
    }

    fn reduce(&mut self, k: usize, i: usize) {
        let n = self.a.cols;
        let c = self.a.leading(i);
        if c < n && self.a.data[i][c] < 0 {
            self.minus(i);
        }
        let di = self.d[i + 1];
        let q = if c < n {
            self.a.data[k][c].div_euclid(self.a.data[i][c])
        } else if 2 * self.lambda[k][i].abs() > di {
            // nearest integer to λ/d
            add(mul(2, self.lambda[k][i]), di).div_euclid(mul(2, di))
        } else {
            0
        };
        if q != 0 {
            self.row_op(k, i, q);
            self.lambda[k][i] = sub(self.lambda[k][i], mul(q, di));
            for j in 0..i {
                self.lambda[k][j] = sub(self.lambda[k][j], mul(q, self.lambda[i][j]));
            }
        }
    }

    fn swap(&mut self, k: usize) {
        let m = self.a.rows;
        self.a.data.swap(k, k - 1);
        self.p.data.swap(k, k - 1);
        self.p_inv.swap_cols(k, k - 1);
        for j in 0..k - 1 {
            let t = self.lambda[k][j];
            self.lambda[k][j] = self.lambda[k - 1][j];
            self.lambda[k - 1][j] = t;
        }
        let lam = self.lambda[k][k - 1];
        let (d0, d1, d2) = (self.d[k - 1], self.d[k], self.d[k + 1]);
        for i in k + 1..m {
            let (li0, li1) = (self.lambda[i][k - 1], self.lambda[i][k]);
            let t = sub(mul(li0, d2), mul(li1, lam));
            self.lambda[i][k - 1] = add(mul(li0, lam), mul(li1, d0)) / d1;
            self.lambda[i][k] = t / d1;
        }
        self.d[k] = add(mul(d0, d2), mul(lam, lam)) / d1;
    }

    fn run(mut self) -> (Wide, Wide, Wide) {
        let (m, n) = (self.a.rows, self.a.cols);
        let mut k = 1;
        while k < m {
            self.reduce(k, k - 1);
            let c1 = self.a.leading(k - 1);
            let c2 = self.a.leading(k);
            let lovasz = || {
                // 4·(d_{k−1}·d_{k+1} + λ²) < 3·d_k²
                let lhs = mul(
                    4,
                    add(
                        mul(self.d[k - 1], self.d[k + 1]),
                        mul(self.lambda[k][k - 1], self.lambda[k][k - 1]),
                    ),
                );
                lhs < mul(3, mul(self.d[k], self.d[k]))
            };
            if (c1 < n && c1 <= c2) || (c1 == n && c2 == n && lovasz()) {
                self.swap(k);
                k = k.saturating_sub(1).max(1);
            } else {
                for i in (0..k - 1).rev() {
                    self.reduce(k, i);
                }
                k += 1;
            }
        }
        // pivots positive, entries in each pivot column reduced
        for i in 0..m {
            let c = self.a.leading(i);
            if c < n && self.a.data[i][c] < 0 {
                self.a.negate_row(i);
                self.p.negate_row(i);
                self.p_inv.negate_col(i);
            }
        }
        for i in (0..m).rev() {
            let c = self.a.leading(i);
            if c == n {
                continue;
            }
            for k in i + 1..m {
                let q = self.a.data[k][c].div_euclid(self.a.data[i][c]);
                if q != 0 {
                    self.row_op(k, i, q);
                }
            }
        }
        self.a.reverse_rows();
        self.p.reverse_rows();
        self.p_inv.reverse_cols();
        (self.a, self.p, self.p_inv)
    }
}

/// Computes the Smith normal form of `a`. Zero-dimensional inputs are fine.
///
/// Row and column Hermite forms alternate until the matrix is monomial, then
/// the diagonal is permuted into place and fixed up pairwise for divisibility.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let (m, n) = (a.rows(), a.cols());
    let mut w = Wide::from_int(a);
    let (mut u, mut u_inv) = (Wide::identity(m), Wide::identity(m));
    let (mut v, mut v_inv) = (Wide::identity(n), Wide::identity(n));
    loop {
        if w.is_monomial() {
            break;
        }
        let (h, p, p_inv) = Hermite::new(w).run();
        u = p.mul(&u);
        u_inv = u_inv.mul(&p_inv);
        w = h;
        if w.is_monomial() {
            break;
        }
        let (h, q, q_inv) = Hermite::new(w.transpose()).run();
        v = v.mul(&q.transpose());
        v_inv = q_inv.transpose().mul(&v_inv);
        w = h.transpose();
    }

    // permute the nonzero entries onto the diagonal
    let pivots: Vec<(usize, usize)> = (0..m)
        .filter_map(|i| w.data[i].iter().position(|&x| x != 0).map(|j| (i, j)))
        .collect();
    let rank = pivots.len();
    let fill = |used: Vec<usize>, len: usize| {
        let rest: Vec<usize> = (0..len).filter(|x| !used.contains(x)).collect();
        [used, rest].concat()
    };
    let row_order = fill(pivots.iter().map(|&(i, _)| i).collect(), m);
    let col_order = fill(pivots.iter().map(|&(_, j)| j).collect(), n);
    let mut diag: Vec<i128> = pivots.iter().map(|&(i, j)| w.data[i][j]).collect();
    u.data = row_order.iter().map(|&i| u.data[i].clone()).collect();
    u_inv.data = u_inv
        .data
        .iter()
        .map(|r| row_order.iter().map(|&i| r[i]).collect())
        .collect();
    v.data = v
        .data
        .iter()
        .map(|r| col_order.iter().map(|&j| r[j]).collect())
        .collect();
    v_inv.data = col_order.iter().map(|&j| v_inv.data[j].clone()).collect();
    for (i, x) in diag.iter_mut().enumerate() {
        if *x < 0 {
            *x = -*x;
            u.negate_row(i);
            u_inv.negate_col(i);
        }
    }

    for i in 0..rank {
        for j in i + 1..rank {
            let (a, b) = (diag[i], diag[j]);
            if b % a == 0 {
                continue;
            }
            let (g, x, y) = egcd(a, b);
            let (ag, bg) = (a / g, b / g);
            // rows ← [[x, y], [−b/g, a/g]], inverse [[a/g, −y], [b/g, x]]
            mix_rows(&mut u, i, j, [x, y, -bg, ag]);
            mix_cols(&mut u_inv, i, j, [ag, -y, bg, x]);
            // cols ← [[1, −y·b/g], [1, x·a/g]], inverse [[x·a/g, y·b/g], [−1, 1]]
            let (c, e) = (mul(-y, bg), mul(x, ag));
            mix_cols(&mut v, i, j, [1, c, 1, e]);
            mix_rows(&mut v_inv, i, j, [e, mul(y, bg), -1, 1]);
            diag[i] = g;
            diag[j] = mul(a / g, b);
        }
    }

    let mut d = Wide::zeros(m, n);
    for (i, &x) in diag.iter().enumerate() {
        d.data[i][i] = x;
    }
    SnfResult {
        u: u.to_int(),
        d: d.to_int(),
        v: v.to_int(),
        u_inv: u_inv.to_int(),
        v_inv: v_inv.to_int(),
        rank,
    }
}

/// Rows `i`, `j` ← `[[a, b], [c, d]]` applied on the left.
fn mix_rows(w: &mut Wide, i: usize, j: usize, [a, b, c, d]: [i128; 4]) {
    for k in 0..w.cols {
        let (x, y) = (w.data[i][k], w.data[j][k]);
        w.data[i][k] = add(mul(a, x), mul(b, y));
        w.data[j][k] = add(mul(c, x), mul(d, y));
    }
}

/// Columns `i`, `j` ← multiplied on the right by `[[a, b], [c, d]]`.
fn mix_cols(w: &mut Wide, i: usize, j: usize, [a, b, c, d]: [i128; 4]) {
    for row in &mut w.data {
        let (x, y) = (row[i], row[j]);
        row[i] = add(mul(a, x), mul(c, y));
        row[j] = add(mul(b, x), mul(d, y));
    }
}
