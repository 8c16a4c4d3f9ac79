//! Browser bindings: builtin spectral runs, a planar excision grid and
//! simplex samples. Every export returns a JSON string
//! `{"ok": true, "value": …}` or `{"ok": false, "error": "…"}`.

use mvss::assembly::{assemble_target, build_mv_e1, subsets_of_size, FiltrationReport, Piece};
use mvss::coarse::{
    check_excision_many, Builtin, ExcisionParams, ExcisionReport, Metric, ProductSet,
};
use mvss::pages::{run_to_infinity, Grading};
use mvss::simplex::{sample_simplex, verify, CakeMaps, SimplexReport};
use num_rational::Rational64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use wasm_bindgen::prelude::*;

const MAX_GRID_HALF: u32 = 40;
const MAX_SAMPLES: u32 = 5000;

#[derive(Serialize)]
struct Reply<T: Serialize> {
    ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn reply<T: Serialize>(result: Result<T, String>) -> String {
    let r = match result {
        Ok(v) => Reply {
            ok: true,
            value: Some(v),
            error: None,
        },
        Err(e) => Reply {
            ok: false,
            value: None,
            error: Some(e),
        },
    };
    serde_json::to_string(&r).unwrap_or_else(|e| format!("{{\"ok\":false,\"error\":\"{e}\"}}"))
}

#[derive(Serialize)]
pub struct BuiltinRun {
    pub builtin: String,
    pub truncated: bool,
    pub e1: Vec<Piece>,
    pub target: FiltrationReport,
}

pub fn builtin_run(name: &str, period: u32, cap: Option<usize>) -> Result<BuiltinRun, String> {
    let builtin: Builtin = name
        .parse()
        .map_err(|e: mvss::coarse::CoarseError| e.to_string())?;
    let grading = Grading::new(period).map_err(|e| e.to_string())?;
    let cap = cap.unwrap_or(builtin.default_cap());
    let input = builtin
        .family()
        .truncate(cap, grading)
        .map_err(|e| e.to_string())?;
    let e1 = build_mv_e1(&input).map_err(|e| e.to_string())?;
    let cells = e1
        .page
        .nonzero_cells()
        .map(|(at, g)| Piece {
            p: at.p,
            q: at.q,
            group: g.clone(),
        })
        .collect();
    let run = run_to_infinity(e1.page).map_err(|e| e.to_string())?;
    Ok(BuiltinRun {
        builtin: builtin.to_string(),
        truncated: e1.mode == mvss::assembly::RunMode::Truncated,
        e1: cells,
        target: assemble_target(&run),
    })
}

/// Runs a builtin family; a negative `cap` picks the family's own.
#[wasm_bindgen]
pub fn run_builtin(name: &str, period: u32, cap: i32) -> String {
    reply(builtin_run(name, period, usize::try_from(cap).ok()))
}

#[derive(Serialize)]
pub struct GridPoint {
    pub x: i64,
    pub y: i64,
    /// Cover members within `R`.
    pub near: Vec<usize>,
    /// Some subfamily of `near` with two or more members is not within `S` of its intersection.
    pub violates: bool,
}

#[derive(Serialize)]
pub struct Grid {
    pub members: Vec<String>,
    pub half: u32,
    pub points: Vec<GridPoint>,
    pub subfamilies: Vec<ExcisionReport>,
}

fn metric_named(name: &str) -> Result<Metric, String> {
    match name {
        "d1" => Ok(Metric::D1),
        "dinf" => Ok(Metric::DInf),
        other => Err(format!("unknown metric {other:?}; use d1 or dinf")),
    }
}

pub fn grid(builtin: &str, metric: &str, radius: u32, s: u32, half: u32) -> Result<Grid, String> {
    let b: Builtin = builtin
        .parse()
        .map_err(|e: mvss::coarse::CoarseError| e.to_string())?;
    let spaces = b.blocky_cover().map_err(|e| e.to_string())?;
    if spaces[0].dim() != 2 {
        return Err(format!("{b} is not planar; the grid needs a cover of ℤ²"));
    }
    if half > MAX_GRID_HALF {
        return Err(format!("grid half-width is capped at {MAX_GRID_HALF}"));
    }
    let metric = metric_named(metric)?;
    let cover: Vec<ProductSet> = spaces.iter().map(ProductSet::from).collect();
    let subsets: Vec<Vec<usize>> = (2..=cover.len())
        .flat_map(|k| subsets_of_size(cover.len(), k))
        .collect();
    let intersections: Vec<ProductSet> = subsets
        .iter()
        .map(|set| {
            let members: Vec<&ProductSet> = set.iter().map(|&j| &cover[j]).collect();
            mvss::coarse::intersect_sets(&members).map_err(|e| e.to_string())
        })
        .collect::<Result<_, _>>()?;
    let r = Rational64::from_integer(radius as i64);
    let s_r = Rational64::from_integer(s as i64);
    let h = half as i64;
    let mut points = Vec::new();
    for y in (-h..=h).rev() {
        for x in -h..=h {
            let p = [x, y];
            let near: Vec<usize> = (0..cover.len())
                .filter(|&j| cover[j].within(&p, r, &metric))
                .collect();
            let violates = subsets.iter().zip(&intersections).any(|(set, target)| {
                set.iter().all(|j| near.contains(j)) && !target.within(&p, s_r, &metric)
            });
            points.push(GridPoint {
                x,
                y,
                near,
                violates,
            });
        }
    }
    let params = ExcisionParams {
        radius: radius as u64,
        s: s as u64,
        box_half: (s + half) as u64,
        metric,
    };
    let subfamilies = check_excision_many(&cover, &subsets, &params).map_err(|e| e.to_string())?;
    Ok(Grid {
        members: spaces.iter().map(|s| s.to_string()).collect(),
        half,
        points,
        subfamilies,
    })
}

/// Lattice points of `[−half, half]²` coloured by the excision condition.
#[wasm_bindgen]
pub fn excision_grid(builtin: &str, metric: &str, radius: u32, s: u32, half: u32) -> String {
    reply(grid(builtin, metric, radius, s, half))
}

#[derive(Serialize)]
pub struct Samples {
    /// Pairs `(x, f(x))` of barycentric coordinates.
    pub points: Vec<(Vec<f64>, Vec<f64>)>,
    pub report: SimplexReport,
}

pub fn samples(n: usize, count: u32, seed: u64) -> Result<Samples, String> {
    if count > MAX_SAMPLES {
        return Err(format!("at most {MAX_SAMPLES} samples"));
    }
    let maps = CakeMaps::new(n).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..count)
        .map(|_| {
            let x = sample_simplex(n, &mut rng);
            let y = maps.forward(x.coords());
            (x.coords().to_vec(), y)
        })
        .collect();
    let report = verify(n, count as usize, seed).map_err(|e| e.to_string())?;
    Ok(Samples { points, report })
}

/// Seeded samples of `Δⁿ` with their images under the cake map onto piece 0.
#[wasm_bindgen]
pub fn simplex_samples(n: u32, count: u32, seed: u32) -> String {
    reply(samples(n as usize, count, seed as u64))
}
