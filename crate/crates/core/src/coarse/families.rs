use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::blocky::{block_decomposition, intersect, zinf_block_family, BlockySpace};
use super::ktheory::{roe_k_theory, wedge_cover, wedge_intersection, CoarseSpace, WedgeSize};
use super::CoarseError;
use crate::abelian::FgAbGroup;
use crate::assembly::{subsets_of_size, AssemblyError, CoverFamily, MvInput, RunMode};
use crate::pages::{GradedGroup, Grading};

fn lookup(space: CoarseSpace, grading: Grading) -> Result<GradedGroup, AssemblyError> {
    roe_k_theory(&space, grading).map_err(|e| AssemblyError::Invalid(e.to_string()))
}

/// First-page input for a finite cover by blocky sets, all of `ℤⁿ`'s subfamilies
/// included. Exact when every subfamily beyond the cap has zero K-theory.
pub fn blocky_mv_input(
    spaces: &[BlockySpace],
    cap: usize,
    grading: Grading,
) -> Result<MvInput, AssemblyError> {
    let n = spaces.len();
    let mut input = MvInput::finite(grading, (0..n).map(|j| format!("X{j}")).collect());
    input.cap = cap.min(n.saturating_sub(1));
    let mut beyond_zero = true;
    for size in 1..=n {
        for set in subsets_of_size(n, size) {
            let members: Vec<BlockySpace> = set.iter().map(|&j| spaces[j].clone()).collect();
            let meet = intersect(&members).map_err(|e| AssemblyError::Invalid(e.to_string()))?;
            let k = lookup(CoarseSpace::Blocky(meet), grading)?;
            if size > input.cap + 1 && !k.is_zero() {
                beyond_zero = false;
            }
            input.set(set, k);
        }
    }
    input.mode = if beyond_zero {
        RunMode::Exact
    } else {
        RunMode::Truncated
    };
    Ok(input)
}

/// The block cover of ℤⁿ; the cap bounds `|J| − 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockCover {
    pub n: usize,
}

impl CoverFamily for BlockCover {
    fn name(&self) -> String {
        format!("rn:{}", self.n)
    }

    fn truncate(&self, cap: usize, grading: Grading) -> Result<MvInput, AssemblyError> {
        let spaces =
            block_decomposition(self.n).map_err(|e| AssemblyError::Invalid(e.to_string()))?;
        blocky_mv_input(&spaces, cap, grading)
    }

    fn declared_limit(&self, grading: Grading) -> Option<GradedGroup> {
        let all = vec![super::Factor::Full; self.n];
        roe_k_theory(&CoarseSpace::Blocky(BlockySpace::new(all)), grading).ok()
    }
}

/// The first `m + 1` blocks of the cover of ℤ^∞; the cap bounds `|J| − 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZinfBlocks {
    pub m: usize,
}

impl CoverFamily for ZinfBlocks {
    fn name(&self) -> String {
        format!("zinf:{}", self.m)
    }

    fn truncate(&self, cap: usize, grading: Grading) -> Result<MvInput, AssemblyError> {
        let spaces =
            zinf_block_family(self.m).map_err(|e| AssemblyError::Invalid(e.to_string()))?;
        blocky_mv_input(&spaces, cap, grading)
    }

    fn declared_limit(&self, grading: Grading) -> Option<GradedGroup> {
        Some(GradedGroup::zero(grading))
    }
}

/// A wedge of rays covered by `Y₀` and the `Y_β`; the cap is the number of pieces enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WedgeFamily {
    pub size: WedgeSize,
}

impl CoverFamily for WedgeFamily {
    fn name(&self) -> String {
        match self.size {
            WedgeSize::Finite(k) => format!("wedge:{k}"),
            WedgeSize::Countable => "wedge:countable".into(),
        }
    }

    fn truncate(&self, cap: usize, grading: Grading) -> Result<MvInput, AssemblyError> {
        if cap == 0 {
            return Err(AssemblyError::Invalid(
                "a wedge truncation needs at least one piece".into(),
            ));
        }
        let pieces =
            wedge_cover(self.size, cap).map_err(|e| AssemblyError::Invalid(e.to_string()))?;
        let n = pieces.len();
        let mut input = MvInput::finite(grading, (0..n).map(|b| format!("Y{b}")).collect());
        for size in 1..=n {
            for set in subsets_of_size(n, size) {
                let members: Vec<_> = set.iter().map(|&j| pieces[j]).collect();
                let kind = wedge_intersection(&members)
                    .map_err(|e| AssemblyError::Invalid(e.to_string()))?;
                input.set(set, lookup(CoarseSpace::Wedge(kind), grading)?);
            }
        }
        input.mode = match self.size {
            WedgeSize::Finite(k) if cap >= k => RunMode::Exact,
            _ => RunMode::Truncated,
        };
        Ok(input)
    }

    fn declared_limit(&self, grading: Grading) -> Option<GradedGroup> {
        let line = lookup(CoarseSpace::Wedge(super::WedgeKind::DoubleRay), grading).ok()?;
        let mut groups = Vec::with_capacity(line.period());
        for g in line.groups() {
            groups.push(match self.size {
                _ if g.is_zero() => FgAbGroup::zero(),
                WedgeSize::Finite(k) => FgAbGroup::sum(std::iter::repeat_n(g, k - 1)),
                WedgeSize::Countable if g.is_free() => FgAbGroup::countable(),
                // a countable sum of torsion groups is not finitely generated
                WedgeSize::Countable => return None,
            });
        }
        GradedGroup::new(groups).ok()
    }
}

/// Built-in examples that run with no input files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Builtin {
    /// Euclidean space ℝⁿ via its block cover.
    Rn(usize),
    /// The ℤ^∞ blocks truncated to `m + 1` coordinates.
    Zinf(usize),
    Wedge(usize),
    /// A countable wedge enumerated up to the given cap by default.
    WedgeCountable(usize),
}

impl Builtin {
    pub fn family(self) -> Box<dyn CoverFamily> {
        match self {
            Builtin::Rn(n) => Box::new(BlockCover { n }),
            Builtin::Zinf(m) => Box::new(ZinfBlocks { m }),
            Builtin::Wedge(k) => Box::new(WedgeFamily {
                size: WedgeSize::Finite(k),
            }),
            Builtin::WedgeCountable(_) => Box::new(WedgeFamily {
                size: WedgeSize::Countable,
            }),
        }
    }

    pub fn default_cap(self) -> usize {
        match self {
            Builtin::Rn(n) | Builtin::Zinf(n) | Builtin::Wedge(n) | Builtin::WedgeCountable(n) => n,
        }
    }

    /// Blocky cover for excision checks, when the example has one.
    pub fn blocky_cover(self) -> Result<Vec<BlockySpace>, CoarseError> {
        match self {
            Builtin::Rn(n) => block_decomposition(n),
            Builtin::Zinf(m) => zinf_block_family(m),
            _ => Err(CoarseError::Invalid(format!(
                "{self} is not a blocky cover"
            ))),
        }
    }
}

impl FromStr for Builtin {
    type Err = CoarseError;

    fn from_str(s: &str) -> Result<Self, CoarseError> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| CoarseError::Invalid(format!("bad number {t:?} in builtin {s:?}")))
        };
        let positive = |t: &str| match num(t)? {
            0 => Err(CoarseError::Invalid(format!(
                "builtin {s:?} needs a positive size"
            ))),
            v => Ok(v),
        };
        match parts.as_slice() {
            ["rn", n] => Ok(Builtin::Rn(positive(n)?)),
            ["zinf", m] => Ok(Builtin::Zinf(positive(m)?)),
            ["wedge", "countable", c] => Ok(Builtin::WedgeCountable(positive(c)?)),
            ["wedge", k] => Ok(Builtin::Wedge(positive(k)?)),
            _ => Err(CoarseError::Invalid(format!(
                "unknown builtin {s:?}; expected rn:<n>, zinf:<m>, wedge:<k> or wedge:countable:<cap>"
            ))),
        }
    }
}

impl TryFrom<String> for Builtin {
    type Error = CoarseError;

    fn try_from(s: String) -> Result<Self, CoarseError> {
        s.parse()
    }
}

impl From<Builtin> for String {
    fn from(b: Builtin) -> String {
        b.to_string()
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Rn(n) => write!(f, "rn:{n}"),
            Builtin::Zinf(m) => write!(f, "zinf:{m}"),
            Builtin::Wedge(k) => write!(f, "wedge:{k}"),
            Builtin::WedgeCountable(c) => write!(f, "wedge:countable:{c}"),
        }
    }
}
