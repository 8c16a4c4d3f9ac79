use serde::{Deserialize, Serialize};

use crate::abelian::FgAbGroup;
use crate::pages::{Bidegree, GradedGroup, SpectralRun};

/// `E^∞_{p,q}`, the filtration quotient `F^p/F^{p−1}` of `K_{p+q}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub p: usize,
    pub q: usize,
    pub group: FgAbGroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Assembled {
    Group {
        group: FgAbGroup,
    },
    /// Some quotient above a nonzero subgroup has torsion; the nonzero
    /// pieces bottom-up.
    AmbiguousExtension {
        pieces: Vec<Piece>,
    },
}

impl Assembled {
    pub fn group(&self) -> Option<&FgAbGroup> {
        match self {
            Assembled::Group { group } => Some(group),
            Assembled::AmbiguousExtension { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub s: usize,
    /// `p = 0, …, cap`, bottom of the filtration first.
    pub pieces: Vec<Piece>,
    pub assembled: Assembled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationReport {
    pub period: usize,
    pub cap: usize,
    pub stabilized_at: usize,
    pub degrees: Vec<DegreeReport>,
}

impl FiltrationReport {
    pub fn is_ambiguous(&self) -> bool {
        self.degrees.iter().any(|d| d.assembled.group().is_none())
    }

    pub fn group(&self, s: usize) -> Option<&FgAbGroup> {
        self.degrees.get(s)?.assembled.group()
    }

    /// The assembled target, when every degree is determined.
    pub fn graded(&self) -> Option<GradedGroup> {
        let groups = self
            .degrees
            .iter()
            .map(|d| d.assembled.group().cloned())
            .collect::<Option<Vec<_>>>()?;
        GradedGroup::new(groups).ok()
    }
}

/// Reads off the diagonals of `E^∞` and solves the extension problems that
/// have a unique answer.
///
/// Climbing from `p = 0`, a nonzero quotient over a zero subgroup is taken as
/// is and a free quotient over anything splits; other steps are ambiguous.
pub fn assemble_target(run: &SpectralRun) -> FiltrationReport {
    let grading = run.grading();
    let period = grading.period();
    let cap = run.cap();
    let degrees = (0..period)
        .map(|s| {
            let pieces: Vec<Piece> = (0..=cap)
                .map(|p| {
                    let q = grading.wrap(s as i64 - p as i64);
                    Piece {
                        p,
                        q,
                        group: run.e_infinity_at(Bidegree::new(p, q)),
                    }
                })
                .collect();
            let mut acc = FgAbGroup::zero();
            let mut ambiguous = false;
            for piece in &pieces {
                let g = &piece.group;
                if g.is_zero() {
                    continue;
                }
                if acc.is_zero() {
                    acc = g.clone();
                } else if g.is_free() {
                    acc = acc.direct_sum(g);
                } else {
                    ambiguous = true;
                }
            }
            let assembled = if ambiguous {
                Assembled::AmbiguousExtension {
                    pieces: pieces
                        .iter()
                        .filter(|p| !p.group.is_zero())
                        .cloned()
                        .collect(),
                }
            } else {
                Assembled::Group { group: acc }
            };
            DegreeReport {
                s,
                pieces,
                assembled,
            }
        })
        .collect();
    FiltrationReport {
        period,
        cap,
        stabilized_at: run.stabilized_at,
        degrees,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pages::{run_to_infinity, Grading, Page};

    fn run(cap: usize, cells: Vec<(Bidegree, FgAbGroup)>) -> SpectralRun {
        run_to_infinity(Page::from_groups(Grading::COMPLEX, cap, cells, vec![]).unwrap()).unwrap()
    }

    #[test]
    fn single_column_at_n() {
        for n in 1..=4usize {
            let report = assemble_target(&run(n, vec![(Bidegree::new(n, 0), FgAbGroup::z())]));
            for s in 0..2 {
                let expected = if (s + 2 - n % 2) % 2 == 0 {
                    FgAbGroup::z()
                } else {
                    FgAbGroup::zero()
                };
                assert_eq!(report.group(s), Some(&expected), "n = {n}, s = {s}");
            }
        }
    }

    #[test]
    fn all_zero_run() {
        let report = assemble_target(&run(3, vec![]));
        assert_eq!(
            report.graded(),
            Some(GradedGroup::pair(FgAbGroup::zero(), FgAbGroup::zero()))
        );
    }

    #[test]
    fn free_quotient_splits() {
        // ℤ/2 at p = 0 and ℤ at p = 1 on the diagonal s = 0
        let report = assemble_target(&run(
            1,
            vec![
                (Bidegree::new(0, 0), FgAbGroup::cyclic(2)),
                (Bidegree::new(1, 1), FgAbGroup::z()),
            ],
        ));
        assert_eq!(report.group(0), Some(&FgAbGroup::new(1, vec![2]).unwrap()));
        assert!(!report.is_ambiguous());
    }

    #[test]
    fn torsion_quotient_is_ambiguous() {
        let report = assemble_target(&run(
            1,
            vec![
                (Bidegree::new(0, 0), FgAbGroup::z()),
                (Bidegree::new(1, 1), FgAbGroup::cyclic(2)),
            ],
        ));
        assert!(report.is_ambiguous());
        assert_eq!(
            report.degrees[0].assembled,
            Assembled::AmbiguousExtension {
                pieces: vec![
                    Piece {
                        p: 0,
                        q: 0,
                        group: FgAbGroup::z()
                    },
                    Piece {
                        p: 1,
                        q: 1,
                        group: FgAbGroup::cyclic(2)
                    },
                ]
            }
        );
        assert_eq!(report.group(1), Some(&FgAbGroup::zero()));
    }

    #[test]
    fn torsion_over_zero_is_determined() {
        let report = assemble_target(&run(2, vec![(Bidegree::new(2, 0), FgAbGroup::cyclic(4))]));
        assert_eq!(report.group(0), Some(&FgAbGroup::cyclic(4)));
    }
}
