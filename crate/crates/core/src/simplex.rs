//! Floating-point checks of the cake-piece geometry of the standard simplex.
//!
//! The cake piece `Δⁿ_J` is the part of `Δⁿ` where every coordinate indexed by
//! `J` is minimal. The affine pair `f`, `g` moves `Δⁿ` onto `Δⁿ_0` and back,
//! and `φ` reparametrises `Δⁿ × [1/(n+2), 1]` into `Δ^{n+1}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Membership tolerance.
pub const TAU: f64 = 1e-9;
/// Tolerance for identities that hold exactly in real arithmetic.
pub const EXACT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimplexError {
    #[error("not a point of the simplex: {0:?}")]
    NotInSimplex(Vec<f64>),
    #[error("dimension must be at least 1")]
    BadDimension,
}

/// Barycentric coordinates `x₀, …, x_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplexPoint {
    coords: Vec<f64>,
}

impl SimplexPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self, SimplexError> {
        let sum: f64 = coords.iter().sum();
        if coords.len() < 2 || (sum - 1.0).abs() > TAU || coords.iter().any(|&c| c < -TAU) {
            return Err(SimplexError::NotInSimplex(coords));
        }
        Ok(SimplexPoint { coords })
    }

    pub fn center(n: usize) -> Self {
        SimplexPoint {
            coords: vec![1.0 / (n + 1) as f64; n + 1],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    fn min(&self) -> f64 {
        self.coords.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn on_boundary(&self) -> bool {
        self.min() <= TAU
    }
}

/// True iff `x_j ≤ x_i + τ` for every `j ∈ J` and every `i`.
pub fn in_cake_piece(x: &SimplexPoint, set: &[usize]) -> bool {
    let m = x.min();
    set.iter().all(|&j| x.coords[j] <= m + TAU)
}

/// `f₀(x) = x₀/(n+1)`, `f_i(x) = x_i + x₀/(n+1)` and its inverse
/// `g₀(x) = (n+1)·x₀`, `g_i(x) = x_i − x₀`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CakeMaps {
    n: usize,
}

impl CakeMaps {
    pub fn new(n: usize) -> Result<Self, SimplexError> {
        if n == 0 {
            return Err(SimplexError::BadDimension);
        }
        Ok(CakeMaps { n })
    }

    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        let share = x[0] / (self.n + 1) as f64;
        std::iter::once(share)
            .chain(x[1..].iter().map(|&v| v + share))
            .collect()
    }

    pub fn inverse(&self, y: &[f64]) -> Vec<f64> {
        std::iter::once((self.n + 1) as f64 * y[0])
            .chain(y[1..].iter().map(|&v| v - y[0]))
            .collect()
    }
}

/// `φ(y, t) = (y₀ − t·y_min, …, y_n − t·y_min, (n+1)·t·y_min)`.
pub fn suspension_reparam(y: &SimplexPoint, t: f64) -> Vec<f64> {
    let n = y.dim();
    let shift = t * y.min();
    y.coords
        .iter()
        .map(|&v| v - shift)
        .chain(std::iter::once((n + 1) as f64 * shift))
        .collect()
}

/// Lower end `1/(n+2)` of the parameter interval of `φ`.
pub fn suspension_t_min(n: usize) -> f64 {
    1.0 / (n + 2) as f64
}

/// Uniform point of `Δⁿ`: normalised exponential draws.
pub fn sample_simplex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SimplexPoint {
    loop {
        let draws: Vec<f64> = (0..=n).map(|_| Exp1.sample(rng)).collect();
        let total: f64 = draws.iter().sum();
        if total > 0.0 {
            return SimplexPoint {
                coords: draws.into_iter().map(|d| d / total).collect(),
            };
        }
    }
}

/// Moves a point into `Δⁿ_J` by lowering the `J` coordinates to the minimum.
fn pinch<R: Rng + ?Sized>(n: usize, set: &[usize], rng: &mut R) -> SimplexPoint {
    let x = sample_simplex(n, rng);
    let m = x.min();
    let mut c = x.coords;
    for &j in set {
        c[j] = m;
    }
    let total: f64 = c.iter().sum();
    SimplexPoint {
        coords: c.into_iter().map(|v| v / total).collect(),
    }
}

fn random_subset<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let set: Vec<usize> = (0..=n).filter(|_| rng.random_bool(0.3)).collect();
    if set.is_empty() {
        vec![rng.random_range(0..=n)]
    } else {
        set
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub name: String,
    pub passed: bool,
    /// Largest deviation observed, for properties measured numerically.
    pub max_error: Option<f64>,
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplexReport {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub checks: Vec<PropertyCheck>,
}

impl SimplexReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

struct Tally {
    name: &'static str,
    max_error: Option<f64>,
    tolerance: f64,
    failures: usize,
}

impl Tally {
    fn measured(name: &'static str, tolerance: f64) -> Self {
        Tally {
            name,
            max_error: Some(0.0),
            tolerance,
            failures: 0,
        }
    }

    fn boolean(name: &'static str) -> Self {
        Tally {
            name,
            max_error: None,
            tolerance: 0.0,
            failures: 0,
        }
    }

    fn error(&mut self, e: f64) {
        let m = self.max_error.get_or_insert(0.0);
        *m = m.max(e);
        if e.is_nan() || e > self.tolerance {
            self.failures += 1;
        }
    }

    fn holds(&mut self, ok: bool) {
        if !ok {
            self.failures += 1;
        }
    }

    fn finish(self) -> PropertyCheck {
        PropertyCheck {
            name: self.name.into(),
            passed: self.failures == 0,
            max_error: self.max_error,
            failures: self.failures,
        }
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Samples `samples` points of `Δⁿ` with a seeded generator and checks every property.
pub fn verify(n: usize, samples: usize, seed: u64) -> Result<SimplexReport, SimplexError> {
    let maps = CakeMaps::new(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t_min = suspension_t_min(n);

    let mut inverse = Tally::measured("inverse_pair", EXACT_TOL);
    let mut lands = Tally::boolean("forward_lands_in_piece_0");
    let mut sums = Tally::measured("forward_preserves_sum", EXACT_TOL);
    let mut phi_sum = Tally::measured("phi_preserves_sum", EXACT_TOL);
    let mut phi_boundary = Tally::boolean("phi_collapses_boundary");
    let mut phi_piece = Tally::boolean("phi_avoids_last_piece_interior");
    let mut phi_equality = Tally::measured("phi_equality_at_t_min", EXACT_TOL);
    let mut pieces = Tally::boolean("cake_piece_intersections");

    let mut centers = Tally::boolean("center_in_every_piece");
    let center = SimplexPoint::center(n);
    let full: Vec<usize> = (0..=n).collect();
    centers.holds(in_cake_piece(&center, &full));
    for j in 0..=n {
        centers.holds(in_cake_piece(&center, &[j]));
    }

    for _ in 0..samples {
        let x = sample_simplex(n, &mut rng);
        let fx = maps.forward(x.coords());
        inverse.error(max_abs_diff(&maps.inverse(&fx), x.coords()));
        sums.error((fx.iter().sum::<f64>() - x.coords().iter().sum::<f64>()).abs());
        lands.holds(SimplexPoint::new(fx).is_ok_and(|p| in_cake_piece(&p, &[0])));

        let t = rng.random_range(t_min..=1.0);
        let y = suspension_reparam(&x, t);
        phi_sum.error((y.iter().sum::<f64>() - 1.0).abs());
        let last = y[n + 1];
        let others = y[..=n].iter().copied().fold(f64::INFINITY, f64::min);
        // strictly above the other coordinates once t > 1/(n+2) and y_min > 0
        phi_piece
            .holds(last >= others - TAU && (t - t_min <= TAU || x.min() <= TAU || last > others));
        let y_eq = suspension_reparam(&x, t_min);
        let others_eq = y_eq[..=n].iter().copied().fold(f64::INFINITY, f64::min);
        phi_equality.error((y_eq[n + 1] - others_eq).abs());

        let mut b = x.coords().to_vec();
        b[rng.random_range(0..=n)] = 0.0;
        let total: f64 = b.iter().sum();
        let boundary = SimplexPoint::new(b.into_iter().map(|v| v / total).collect())?;
        let yb = suspension_reparam(&boundary, t);
        phi_boundary.holds(SimplexPoint::new(yb).is_ok_and(|p| p.on_boundary()));

        let (ja, jb) = (random_subset(n, &mut rng), random_subset(n, &mut rng));
        let union: Vec<usize> = {
            let mut u: Vec<usize> = ja.iter().chain(&jb).copied().collect();
            u.sort_unstable();
            u.dedup();
            u
        };
        let meet: Vec<usize> = ja.iter().filter(|j| jb.contains(j)).copied().collect();
        let p = pinch(n, &union, &mut rng);
        let both = in_cake_piece(&p, &ja) && in_cake_piece(&p, &jb);
        pieces.holds(both && in_cake_piece(&p, &meet) && in_cake_piece(&p, &union));
        let q = sample_simplex(n, &mut rng);
        if in_cake_piece(&q, &ja) && in_cake_piece(&q, &jb) {
            pieces.holds(in_cake_piece(&q, &meet) && in_cake_piece(&q, &union));
        }
    }

    let mut only_center = Tally::boolean("full_piece_is_center");
    for _ in 0..samples.min(100) {
        let x = sample_simplex(n, &mut rng);
        let is_center = max_abs_diff(x.coords(), center.coords()) <= TAU;
        only_center.holds(in_cake_piece(&x, &full) == is_center);
    }

    let checks = [
        inverse,
        lands,
        sums,
        phi_sum,
        phi_boundary,
        phi_piece,
        phi_equality,
        pieces,
        centers,
        only_center,
    ]
    .into_iter()
    .map(Tally::finish)
    .collect();
    Ok(SimplexReport {
        n,
        samples,
        seed,
        checks,
    })
}
