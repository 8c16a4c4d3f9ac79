use serde::{Deserialize, Serialize};

use super::blocky::BlockySpace;
use super::CoarseError;
use crate::abelian::FgAbGroup;
use crate::pages::{GradedGroup, Grading};

/// The two shapes in a cover of a wedge of rays.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WedgeKind {
    /// `Y₀ = X₀`, a single ray.
    BaseRay,
    /// `Y_β = X₀ ∪ X_β`, two rays glued at the base point, coarsely a line.
    DoubleRay,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WedgeCoverPiece {
    pub label: usize,
    pub kind: WedgeKind,
}

/// Number of rays in a wedge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WedgeSize {
    Finite(usize),
    Countable,
}

/// Pieces `Y_β` for `β < k`; a countable wedge is enumerated up to `prefix`.
pub fn wedge_cover(size: WedgeSize, prefix: usize) -> Result<Vec<WedgeCoverPiece>, CoarseError> {
    let count = match size {
        WedgeSize::Finite(0) => {
            return Err(CoarseError::Invalid(
                "a wedge needs at least one ray".into(),
            ))
        }
        WedgeSize::Finite(k) => k.min(prefix),
        WedgeSize::Countable => prefix,
    };
    Ok((0..count)
        .map(|label| WedgeCoverPiece {
            label,
            kind: if label == 0 {
                WedgeKind::BaseRay
            } else {
                WedgeKind::DoubleRay
            },
        })
        .collect())
}

/// Distinct pieces meet in the base ray.
pub fn wedge_intersection(pieces: &[WedgeCoverPiece]) -> Result<WedgeKind, CoarseError> {
    match pieces {
        [] => Err(CoarseError::Invalid("empty intersection".into())),
        [one] => Ok(one.kind),
        _ => Ok(WedgeKind::BaseRay),
    }
}

/// A space whose coarse K-theory can be looked up.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoarseSpace {
    Blocky(BlockySpace),
    Wedge(WedgeKind),
    /// A shape named outside the grammar.
    Other(String),
}

/// K-theory of a point: `ℤ, 0` over ℂ and `ℤ, ℤ/2, ℤ/2, 0, ℤ, 0, 0, 0` over ℝ.
pub fn point_k_theory(grading: Grading) -> GradedGroup {
    let z = FgAbGroup::z;
    let zero = FgAbGroup::zero;
    let two = || FgAbGroup::cyclic(2);
    match grading.period() {
        2 => GradedGroup::pair(z(), zero()),
        _ => GradedGroup::new(vec![z(), two(), two(), zero(), z(), zero(), zero(), zero()])
            .expect("period 8"),
    }
}

/// `K_s` of a space coarsely equivalent to ℤᵏ is `K_{s−k}` of a point.
fn lines_k_theory(k: usize, grading: Grading) -> GradedGroup {
    let pt = point_k_theory(grading);
    let groups = (0..grading.period() as i64)
        .map(|s| pt.degree(s - k as i64).clone())
        .collect();
    GradedGroup::new(groups).expect("valid period")
}

/// K-theory of the Roe algebra: zero for flasque spaces and shifted point data
/// for spaces coarsely equivalent to a lattice.
pub fn roe_k_theory(space: &CoarseSpace, grading: Grading) -> Result<GradedGroup, CoarseError> {
    match space {
        CoarseSpace::Blocky(b) => Ok(match b.classify().lines() {
            None => GradedGroup::zero(grading),
            Some(k) => lines_k_theory(k, grading),
        }),
        CoarseSpace::Wedge(WedgeKind::BaseRay) => Ok(GradedGroup::zero(grading)),
        CoarseSpace::Wedge(WedgeKind::DoubleRay) => Ok(lines_k_theory(1, grading)),
        CoarseSpace::Other(name) => Err(CoarseError::UnknownSpace(name.clone())),
    }
}
