//! Reference computations that share no code with the library.
//!
//! Matrices are plain row vectors. Invariant factors come from determinantal
//! divisors (gcds of minors), finite quotients are enumerated by breadth-first
//! search over cosets, and homology of free complexes is read off from ranks
//! and the torsion of `coker f`.
#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

pub type Rows = Vec<Vec<i64>>;

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Laplace expansion along the first row.
pub fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => (0..n)
            .filter(|&j| m[0][j] != 0)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// gcd of all `k × k` minors (0 if all vanish).
pub fn minor_gcd(a: &Rows, k: usize) -> i128 {
    let (r, c) = (a.len(), a.first().map_or(0, Vec::len));
    let mut g = 0i128;
    for rows in combos(r, k) {
        for cols in combos(c, k) {
            let sub: Vec<Vec<i128>> = rows
                .iter()
                .map(|&i| cols.iter().map(|&j| a[i][j] as i128).collect())
                .collect();
            g = gcd(g, det(&sub));
            if g == 1 {
                return 1;
            }
        }
    }
    g
}

/// Rank and nonzero invariant factors `s_k = d_k / d_{k−1}`.
pub fn invariant_factors(a: &Rows) -> Vec<i64> {
    let (r, c) = (a.len(), a.first().map_or(0, Vec::len));
    let mut out = Vec::new();
    let mut prev = 1i128;
    for k in 1..=r.min(c) {
        let d = minor_gcd(a, k);
        if d == 0 {
            break;
        }
        out.push((d / prev) as i64);
        prev = d;
    }
    out
}

/// `ℤ^rows / im a` as `(free rank, torsion orders > 1)`.
pub fn cokernel(a: &Rows, rows: usize) -> (usize, Vec<i64>) {
    let f = invariant_factors(a);
    (rows - f.len(), f.into_iter().filter(|&d| d > 1).collect())
}

/// `ker g / im f` for `ℤ^a → ℤ^b → ℤ^c` with `g f = 0`.
pub fn homology(f: &Rows, g: &Rows, b: usize) -> (usize, Vec<i64>) {
    let rank_f = invariant_factors(f).len();
    let rank_g = invariant_factors(g).len();
    // ker g is saturated, so the torsion of ker g / im f is that of ℤ^b / im f
    let (_, torsion) = cokernel(f, b);
    (b - rank_g - rank_f, torsion)
}

fn adjugate(a: &Rows) -> Vec<Vec<i128>> {
    let n = a.len();
    let m: Vec<Vec<i128>> = a
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    if n == 1 {
        return vec![vec![1]];
    }
    let mut adj = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i128>> = (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != j).map(|c| m[r][c]).collect())
                .collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[j][i] = sign * det(&minor);
        }
    }
    adj
}

/// Enumerates `ℤⁿ / im a` for square nonsingular `a` with `|det a| ≤ limit`.
/// Returns the order and, for each divisor `m` of it, how many elements `m` kills.
pub fn enumerate_quotient(a: &Rows, limit: i128) -> Option<(u128, Vec<(i64, u128)>)> {
    let n = a.len();
    let m: Vec<Vec<i128>> = a
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let d = det(&m).abs();
    if d == 0 || d > limit {
        return None;
    }
    // x ↦ adj(a)·x mod |det| is injective on the quotient
    let adj = adjugate(a);
    let step: Vec<Vec<i128>> = (0..n)
        .map(|j| (0..n).map(|i| adj[i][j].rem_euclid(d)).collect())
        .collect();
    let start = vec![0i128; n];
    let mut seen: HashSet<Vec<i128>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for s in &step {
            let y: Vec<i128> = x.iter().zip(s).map(|(a, b)| (a + b) % d).collect();
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    let order = seen.len() as u128;
    let divisors: Vec<i64> = (1..=d as i64).filter(|k| d as i64 % k == 0).collect();
    let killed = divisors
        .into_iter()
        .map(|k| {
            let count = seen
                .iter()
                .filter(|x| x.iter().all(|&v| (v * k as i128) % d == 0))
                .count() as u128;
            (k, count)
        })
        .collect();
    Some((order, killed))
}

/// Number of elements of `⊕ ℤ/t` killed by `k`.
pub fn killed_in_torsion(torsion: &[i64], k: i64) -> u128 {
    torsion
        .iter()
        .map(|&t| gcd(t as i128, k as i128) as u128)
        .product()
}

pub fn mat_mul(a: &Rows, b: &Rows, inner: usize, cols: usize) -> Rows {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Unimodular `P` and its inverse from a list of elementary operations
/// `(i, j, c)`: add `c` times column `j` to column `i`.
pub fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> (Rows, Rows) {
    let mut p: Rows = (0..n)
        .map(|i| (0..n).map(|j| (i == j) as i64).collect())
        .collect();
    let mut q = p.clone();
    for &(i, j, c) in ops {
        if i == j || i >= n || j >= n {
            continue;
        }
        // P ← P·E with E = I + c·e_j e_iᵀ; P⁻¹ ← E⁻¹·P⁻¹
        for row in p.iter_mut() {
            row[i] += c * row[j];
        }
        for k in 0..n {
            q[j][k] -= c * q[i][k];
        }
    }
    (p, q)
}

/// Euclid on the first `upto` coordinates of a list of column vectors.
/// Returns an echelon basis for the part with nonzero head (pivot coordinates
/// strictly increasing) and the columns whose head was reduced to zero.
fn reduce_heads(mut cols: Vec<Vec<i128>>, upto: usize) -> (Vec<Vec<i128>>, Vec<Vec<i128>>) {
    let mut basis = Vec::new();
    for row in 0..upto {
        loop {
            let nz: Vec<usize> = (0..cols.len()).filter(|&i| cols[i][row] != 0).collect();
            let Some(&piv) = nz.iter().min_by_key(|&&i| cols[i][row].abs()) else {
                break;
            };
            if nz.len() == 1 {
                basis.push(cols.remove(piv));
                break;
            }
            let p = cols[piv].clone();
            for &o in &nz {
                if o != piv {
                    let q = cols[o][row] / p[row];
                    for (x, y) in cols[o].iter_mut().zip(&p) {
                        *x -= q * y;
                    }
                }
            }
        }
    }
    (basis, cols)
}

/// Coordinates of `v` in an echelon basis from [`reduce_heads`].
fn echelon_coords(basis: &[Vec<i128>], v: &[i128]) -> Vec<i128> {
    let mut v = v.to_vec();
    let mut out = Vec::with_capacity(basis.len());
    for b in basis {
        let row = b.iter().position(|&x| x != 0).unwrap();
        assert_eq!(v[row] % b[row], 0, "vector outside the lattice");
        let c = v[row] / b[row];
        for (x, y) in v.iter_mut().zip(b) {
            *x -= c * y;
        }
        out.push(c);
    }
    assert!(v.iter().all(|&x| x == 0), "vector outside the lattice");
    out
}

/// Relation columns of `ℤ^free ⊕ ⊕ ℤ/t` on its standard generators.
pub fn relations_of(free: usize, torsion: &[i64]) -> Vec<Vec<i128>> {
    let n = free + torsion.len();
    torsion
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            (0..n)
                .map(|r| if r == free + i { t as i128 } else { 0 })
                .collect()
        })
        .collect()
}

/// Kernel of a homomorphism `ℤ^a / R_A → ℤ^b / R_B` given by `f` (`b × a`),
/// as `(free rank, torsion)`. `R_A`, `R_B` are lists of relation columns.
pub fn hom_kernel(
    f: &Rows,
    a: usize,
    b: usize,
    ra: &[Vec<i128>],
    rb: &[Vec<i128>],
) -> (usize, Vec<i64>) {
    // {x : f x ∈ ⟨R_B⟩} is the projection of ker [f | −R_B]
    let mut cols: Vec<Vec<i128>> = (0..a)
        .map(|j| (0..b).map(|i| f[i][j] as i128).collect())
        .collect();
    cols.extend(rb.iter().map(|r| r.iter().map(|x| -x).collect()));
    let m = cols.len();
    let augmented: Vec<Vec<i128>> = cols
        .into_iter()
        .enumerate()
        .map(|(j, mut c)| {
            c.extend((0..m).map(|k| (k == j) as i128));
            c
        })
        .collect();
    let (_, kernel) = reduce_heads(augmented, b);
    let projected: Vec<Vec<i128>> = kernel.iter().map(|k| k[b..b + a].to_vec()).collect();
    let (basis, _) = reduce_heads(projected, a);
    let coords: Rows = {
        let cs: Vec<Vec<i128>> = ra.iter().map(|r| echelon_coords(&basis, r)).collect();
        (0..basis.len())
            .map(|i| cs.iter().map(|c| c[i] as i64).collect())
            .collect()
    };
    if coords.is_empty() || coords[0].is_empty() {
        return (basis.len(), Vec::new());
    }
    cokernel(&coords, basis.len())
}

/// Cokernel of the same homomorphism: `ℤ^b / (im f + R_B)`.
pub fn hom_cokernel(f: &Rows, a: usize, b: usize, rb: &[Vec<i128>]) -> (usize, Vec<i64>) {
    let mut m: Rows = (0..b).map(|i| (0..a).map(|j| f[i][j]).collect()).collect();
    for (i, row) in m.iter_mut().enumerate() {
        row.extend(rb.iter().map(|r| r[i] as i64));
    }
    if m.is_empty() || m[0].is_empty() {
        return (b, Vec::new());
    }
    cokernel(&m, b)
}
