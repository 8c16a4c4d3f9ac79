use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::mv::{build_mv_e1, D1Status, MvInput, RunMode};
use super::target::{assemble_target, Assembled, FiltrationReport, Piece};
use super::AssemblyError;
use crate::abelian::FgAbGroup;
use crate::pages::{run_to_infinity, Bidegree, GradedGroup, Grading};

/// A cover that can be cut down to any finite cap.
pub trait CoverFamily {
    fn name(&self) -> String;

    fn truncate(&self, cap: usize, grading: Grading) -> Result<MvInput, AssemblyError>;

    /// The direct-limit answer, when the family knows it.
    fn declared_limit(&self, _grading: Grading) -> Option<GradedGroup> {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapEntry {
    pub cap: usize,
    pub mode: RunMode,
    pub d1_status: D1Status,
    /// Nonzero first-page cells.
    pub e1: Vec<Piece>,
    pub target: FiltrationReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellStability {
    pub p: usize,
    pub q: usize,
    /// First cap from which the cell no longer changes.
    pub stable_from: usize,
    pub values: Vec<FgAbGroup>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetStability {
    pub s: usize,
    pub stable_from: usize,
    pub values: Vec<Assembled>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub family: String,
    pub period: usize,
    pub caps: Vec<usize>,
    pub entries: Vec<CapEntry>,
    pub cells: Vec<CellStability>,
    pub targets: Vec<TargetStability>,
    /// Whether every sequence, once two consecutive caps agree, stays constant.
    pub monotone: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_limit: Option<GradedGroup>,
}

/// Runs the family at each cap (strictly increasing) and reports where the
/// first page and the assembled target stop changing.
pub fn truncation_sweep(
    family: &dyn CoverFamily,
    caps: &[usize],
    grading: Grading,
) -> Result<SweepReport, AssemblyError> {
    if caps.is_empty() || caps.windows(2).any(|w| w[0] >= w[1]) {
        return Err(AssemblyError::Invalid(
            "caps must be a nonempty strictly increasing list".into(),
        ));
    }
    let mut entries = Vec::with_capacity(caps.len());
    for &cap in caps {
        let input = family.truncate(cap, grading)?;
        let e1 = build_mv_e1(&input)?;
        let cells = e1
            .page
            .nonzero_cells()
            .map(|(at, g)| Piece {
                p: at.p,
                q: at.q,
                group: g.clone(),
            })
            .collect();
        let run = run_to_infinity(e1.page)?;
        entries.push(CapEntry {
            cap,
            mode: e1.mode,
            d1_status: e1.d1_status,
            e1: cells,
            target: assemble_target(&run),
        });
    }

    let mut monotone = true;
    let positions: BTreeSet<Bidegree> = entries
        .iter()
        .flat_map(|e| e.e1.iter().map(|c| Bidegree::new(c.p, c.q)))
        .collect();
    let cells = positions
        .into_iter()
        .map(|at| {
            let values: Vec<FgAbGroup> = entries
                .iter()
                .map(|e| {
                    e.e1.iter()
                        .find(|c| c.p == at.p && c.q == at.q)
                        .map_or_else(FgAbGroup::zero, |c| c.group.clone())
                })
                .collect();
            monotone &= settles_monotonically(&values);
            CellStability {
                p: at.p,
                q: at.q,
                stable_from: caps[stable_index(&values)],
                values,
            }
        })
        .collect();
    let targets = (0..grading.period())
        .map(|s| {
            let values: Vec<Assembled> = entries
                .iter()
                .map(|e| e.target.degrees[s].assembled.clone())
                .collect();
            monotone &= settles_monotonically(&values);
            TargetStability {
                s,
                stable_from: caps[stable_index(&values)],
                values,
            }
        })
        .collect();
    Ok(SweepReport {
        family: family.name(),
        period: grading.period(),
        caps: caps.to_vec(),
        entries,
        cells,
        targets,
        monotone,
        declared_limit: family.declared_limit(grading),
    })
}

/// Index of the first element of the constant tail.
fn stable_index<T: PartialEq>(values: &[T]) -> usize {
    let last = values.len() - 1;
    (0..=last)
        .rev()
        .take_while(|&i| values[i] == values[last])
        .last()
        .unwrap_or(last)
}

fn settles_monotonically<T: PartialEq>(values: &[T]) -> bool {
    match values.windows(2).position(|w| w[0] == w[1]) {
        Some(i) => values[i..].iter().all(|v| *v == values[i]),
        None => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::mv::subsets_of_size;

    /// One ideal with fixed K-theory, whatever the cap.
    struct Constant(GradedGroup);

    impl CoverFamily for Constant {
        fn name(&self) -> String {
            "constant".into()
        }

        fn truncate(&self, _cap: usize, grading: Grading) -> Result<MvInput, AssemblyError> {
            let mut input = MvInput::finite(grading, vec!["0".into()]);
            input.set(vec![0], self.0.clone());
            Ok(input)
        }
    }

    /// `c` sets with `K_0 = ℤ` each, every proper intersection zero: `E¹_{0,0} = ℤ^c`.
    struct Growing;

    impl CoverFamily for Growing {
        fn name(&self) -> String {
            "growing".into()
        }

        fn truncate(&self, cap: usize, grading: Grading) -> Result<MvInput, AssemblyError> {
            let n = cap.max(1);
            let mut input = MvInput::finite(grading, (0..n).map(|i| i.to_string()).collect());
            for k in 1..=n {
                for set in subsets_of_size(n, k) {
                    let g = if k == 1 {
                        FgAbGroup::z()
                    } else {
                        FgAbGroup::zero()
                    };
                    input.set(set, GradedGroup::pair(g, FgAbGroup::zero()));
                }
            }
            Ok(input)
        }
    }

    #[test]
    fn constant_family_stable_at_first_cap() {
        let family = Constant(GradedGroup::pair(FgAbGroup::z(), FgAbGroup::cyclic(2)));
        let report = truncation_sweep(&family, &[0, 1, 2], Grading::COMPLEX).unwrap();
        assert!(report.monotone);
        assert!(report.cells.iter().all(|c| c.stable_from == 0));
        assert!(report.targets.iter().all(|t| t.stable_from == 0));
        assert_eq!(
            report.entries[2].target.group(1),
            Some(&FgAbGroup::cyclic(2))
        );
    }

    #[test]
    fn growing_family_never_settles_inside_sweep() {
        let report = truncation_sweep(&Growing, &[1, 2, 3], Grading::COMPLEX).unwrap();
        let cell = &report.cells[0];
        assert_eq!((cell.p, cell.q, cell.stable_from), (0, 0, 3));
        assert_eq!(cell.values[2], FgAbGroup::free(3));
        assert!(report.monotone);
    }

    #[test]
    fn caps_must_increase() {
        assert!(truncation_sweep(&Growing, &[2, 1], Grading::COMPLEX).is_err());
        assert!(truncation_sweep(&Growing, &[], Grading::COMPLEX).is_err());
    }

    #[test]
    fn stability_helpers() {
        assert_eq!(stable_index(&[1, 2, 2, 2]), 1);
        assert_eq!(stable_index(&[1, 2, 3]), 2);
        assert_eq!(stable_index(&[5]), 0);
        assert!(settles_monotonically(&[1, 2, 2, 2]));
        assert!(!settles_monotonically(&[1, 1, 2]));
    }
}
