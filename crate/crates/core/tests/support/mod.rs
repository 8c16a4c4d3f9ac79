//! Random first pages with a known answer.
//!
//! Each row `q` is a direct sum of tiny complexes whose homology is known in
//! closed form. Every cell then gets a random change of ambient basis, so the
//! library sees dense matrices while the expected `E²` is read off the pieces.
#![allow(dead_code)]

use std::collections::BTreeMap;

use mvss::abelian::{FgAbGroup, IntMatrix, Subquotient};
use mvss::pages::{Bidegree, Grading, Page};
use rand::Rng;

#[derive(Clone, Debug)]
enum Piece {
    /// `ℤ/n` alone at `p` (`n = 0` for ℤ).
    Lone { p: usize, n: i64 },
    /// `ℤ --×k--> ℤ` from `p` to `p − 1`.
    Arrow { p: usize, k: i64 },
    /// `ℤ --×1--> ℤ/n` from `p` to `p − 1`.
    Onto { p: usize, n: i64 },
    /// `ℤ/ab --×1--> ℤ/b` from `p` to `p − 1`.
    TorsionOnto { p: usize, a: i64, b: i64 },
    /// `ℤ/a --×b--> ℤ/ab` from `p` to `p − 1`.
    TorsionInto { p: usize, a: i64, b: i64 },
    /// `ℤ --×k--> ℤ` as a `dʳ` from `(p, q)` to `(p − r, q + r − 1)`.
    Higher { p: usize, r: usize, k: i64 },
}

impl Piece {
    /// `(p, q shift, order)` of each ambient coordinate; order 0 is free.
    fn coords(&self) -> Vec<(usize, usize, i64)> {
        if let Piece::Higher { p, r, .. } = *self {
            return vec![(p, 0, 0), (p - r, r - 1, 0)];
        }
        let flat = match *self {
            Piece::Lone { p, n } => vec![(p, n)],
            Piece::Arrow { p, .. } => vec![(p, 0), (p - 1, 0)],
            Piece::Onto { p, n } => vec![(p, 0), (p - 1, n)],
            Piece::TorsionOnto { p, a, b } => vec![(p, a * b), (p - 1, b)],
            Piece::TorsionInto { p, a, b } => vec![(p, a), (p - 1, a * b)],
            Piece::Higher { .. } => unreachable!(),
        };
        flat.into_iter().map(|(p, n)| (p, 0, n)).collect()
    }

    /// Page on which the piece's differential acts; 0 when it has none.
    fn length(&self) -> usize {
        match *self {
            Piece::Higher { r, .. } => r,
            Piece::Lone { .. } => 0,
            _ => 1,
        }
    }

    fn map(&self) -> i64 {
        match *self {
            Piece::Arrow { k, .. } | Piece::Higher { k, .. } => k,
            Piece::TorsionInto { b, .. } => b,
            _ => 1,
        }
    }

    /// `(p, q shift, order)` summands of `E²`; order 0 is ℤ.
    fn second_page(&self) -> Vec<(usize, usize, i64)> {
        match *self {
            Piece::Higher { .. } => self.coords(),
            _ => self.limit(),
        }
    }

    /// `(p, q shift, order)` summands of `E^∞`.
    fn limit(&self) -> Vec<(usize, usize, i64)> {
        if let Piece::Higher { p, r, k } = *self {
            return vec![(p - r, r - 1, k.abs())];
        }
        let flat = match *self {
            Piece::Lone { p, n } => vec![(p, n)],
            Piece::Arrow { p, k } => vec![(p - 1, k.abs())],
            Piece::Onto { p, .. } => vec![(p, 0)],
            Piece::TorsionOnto { p, a, .. } => vec![(p, a)],
            Piece::TorsionInto { p, b, .. } => vec![(p - 1, b)],
            Piece::Higher { .. } => unreachable!(),
        };
        flat.into_iter().map(|(p, n)| (p, 0, n)).collect()
    }
}

pub struct RandomPage {
    pub page: Page,
    pub cap: usize,
    pub grading: Grading,
    pub e1: BTreeMap<Bidegree, FgAbGroup>,
    pub e2: BTreeMap<Bidegree, FgAbGroup>,
    pub e_infinity: BTreeMap<Bidegree, FgAbGroup>,
    /// Page of the last nonzero differential, 0 if there is none.
    pub longest: usize,
}

fn random_piece(rng: &mut impl Rng, cap: usize, higher: bool) -> Piece {
    let p = rng.random_range(0..=cap);
    if higher && p >= 2 && rng.random_bool(0.3) {
        let r = rng.random_range(2..=p);
        let k = rng.random_range(1..=4i64) * if rng.random_bool(0.5) { 1 } else { -1 };
        return Piece::Higher { p, r, k };
    }
    let small = |rng: &mut dyn rand::RngCore| rng.random_range(2..=4i64);
    if p == 0 {
        let n = if rng.random_bool(0.6) { 0 } else { small(rng) };
        return Piece::Lone { p, n };
    }
    match rng.random_range(0..5) {
        0 => Piece::Lone {
            p,
            n: if rng.random_bool(0.6) { 0 } else { small(rng) },
        },
        1 => {
            let k = rng.random_range(1..=4i64) * if rng.random_bool(0.5) { 1 } else { -1 };
            Piece::Arrow { p, k }
        }
        2 => Piece::Onto { p, n: small(rng) },
        3 => Piece::TorsionOnto {
            p,
            a: small(rng),
            b: small(rng),
        },
        _ => Piece::TorsionInto {
            p,
            a: small(rng),
            b: small(rng),
        },
    }
}

/// A random unimodular `n × n` matrix and its inverse.
pub fn random_unimodular(rng: &mut impl Rng, n: usize, steps: usize) -> (IntMatrix, IntMatrix) {
    let mut p = IntMatrix::identity(n);
    let mut q = IntMatrix::identity(n);
    if n < 2 {
        if n == 1 && rng.random_bool(0.5) {
            p[(0, 0)] = -1;
            q[(0, 0)] = -1;
        }
        return (p, q);
    }
    for _ in 0..steps {
        let i = rng.random_range(0..n);
        let j = (i + rng.random_range(1..n)) % n;
        let c = rng.random_range(-2..=2i64);
        // P ← E·P, P⁻¹ ← P⁻¹·E⁻¹ with E = I + c·e_i e_jᵀ
        for k in 0..n {
            p[(i, k)] += c * p[(j, k)];
        }
        for k in 0..n {
            q[(k, j)] -= c * q[(k, i)];
        }
    }
    (p, q)
}

fn group_of(orders: &[i64]) -> FgAbGroup {
    let free = orders.iter().filter(|&&o| o == 0).count();
    let torsion: Vec<i64> = orders.iter().copied().filter(|&o| o > 1).collect();
    FgAbGroup::from_orders(free, &torsion)
}

/// Random valid first page with support cap `cap`; with `higher`, some
/// `dʳ` for `r ≥ 2` are injected as well.
pub fn random_page(rng: &mut impl Rng, cap: usize, grading: Grading, higher: bool) -> RandomPage {
    let rows = grading.period();
    // per cell: (orders of ambient coordinates, owning piece index and slot)
    let mut layout: BTreeMap<Bidegree, Vec<(usize, usize, i64)>> = BTreeMap::new();
    let mut pieces: Vec<(usize, Piece)> = Vec::new();
    let count = rng.random_range(0..=2 * (cap + 1));
    for _ in 0..count {
        let q = rng.random_range(0..rows);
        let piece = random_piece(rng, cap, higher);
        let idx = pieces.len();
        for (slot, (p, dq, n)) in piece.coords().into_iter().enumerate() {
            let at = Bidegree::new(p, (q + dq) % rows);
            layout.entry(at).or_default().push((idx, slot, n));
        }
        pieces.push((q, piece));
    }

    let mut cells = Vec::new();
    let mut bases = BTreeMap::new();
    let mut e1 = BTreeMap::new();
    for (&at, coords) in &layout {
        let n = coords.len();
        let (u, u_inv) = random_unimodular(rng, n, 3 * n);
        let rel_cols: Vec<Vec<i64>> = coords
            .iter()
            .enumerate()
            .filter(|(_, c)| c.2 != 0)
            .map(|(i, c)| (0..n).map(|r| if r == i { c.2 } else { 0 }).collect())
            .collect();
        let rel = u.mul(&IntMatrix::from_columns(n, &rel_cols));
        let sq = Subquotient::new(&IntMatrix::identity(n), &rel).unwrap();
        cells.push((at, sq));
        e1.insert(
            at,
            group_of(&coords.iter().map(|c| c.2).collect::<Vec<_>>()),
        );
        bases.insert(at, (u, u_inv));
    }

    // ambient matrices of every dʳ, keyed by (r, source)
    let mut maps: BTreeMap<(usize, Bidegree), IntMatrix> = BTreeMap::new();
    for (&from, src) in &layout {
        for (j, &(idx, slot, _)) in src.iter().enumerate() {
            let piece = &pieces[idx].1;
            if slot != 0 || matches!(piece, Piece::Lone { .. }) {
                continue;
            }
            let r = piece.length();
            let to = grading.target(from, r).unwrap();
            let dst = &layout[&to];
            let m = maps
                .entry((r, from))
                .or_insert_with(|| IntMatrix::zeros(dst.len(), src.len()));
            let i = dst
                .iter()
                .position(|&(k, s, _)| k == idx && s == 1)
                .unwrap();
            m[(i, j)] = piece.map();
        }
    }
    let mut d1 = Vec::new();
    let mut injected = Vec::new();
    for ((r, from), m) in maps {
        let to = grading.target(from, r).unwrap();
        let m = bases[&to].0.mul(&m).mul(&bases[&from].1);
        if r == 1 {
            d1.push((from, m));
        } else {
            injected.push((r, from, m));
        }
    }

    let collect = |f: &dyn Fn(&Piece) -> Vec<(usize, usize, i64)>| {
        let mut acc: BTreeMap<Bidegree, Vec<i64>> = BTreeMap::new();
        for (q, piece) in &pieces {
            for (p, dq, n) in f(piece) {
                acc.entry(Bidegree::new(p, (q + dq) % rows))
                    .or_default()
                    .push(n);
            }
        }
        acc.into_iter()
            .map(|(at, orders)| (at, group_of(&orders)))
            .filter(|(_, g)| !g.is_zero())
            .collect::<BTreeMap<_, _>>()
    };
    let e2 = collect(&Piece::second_page);
    let e_infinity = collect(&Piece::limit);
    let e1 = e1
        .into_iter()
        .filter(|(_, g): &(Bidegree, FgAbGroup)| !g.is_zero())
        .collect();
    let longest = pieces.iter().map(|(_, p)| p.length()).max().unwrap_or(0);

    let mut page = Page::first(grading, cap, cells, d1).unwrap();
    for (r, from, m) in injected {
        page = page.with_higher_differential(r, from, m);
    }
    RandomPage {
        page,
        cap,
        grading,
        e1,
        e2,
        e_infinity,
        longest,
    }
}
