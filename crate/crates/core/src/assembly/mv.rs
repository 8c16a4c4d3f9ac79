use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::AssemblyError;
use crate::abelian::{FgAbGroup, IntMatrix, Lattice, Subquotient};
use crate::pages::{Bidegree, DifferentialSpec, GradedGroup, Grading, Page};

/// Whether beyond-cap intersections are known to vanish.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunMode {
    /// Every `J` beyond the cap must be present and zero.
    #[default]
    Exact,
    /// Beyond-cap data is ignored; results hold only up to the cap.
    Truncated,
}

/// Provenance of the first-page differential.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum D1Status {
    Supplied,
    /// Every candidate `d¹` has a zero source or target.
    ForcedZero,
    /// Nonzero cells are adjacent and no `d¹` was given: differentials assumed zero.
    AssumedZero,
}

impl D1Status {
    pub fn warning(self) -> Option<&'static str> {
        match self {
            D1Status::AssumedZero => Some("differentials assumed zero"),
            _ => None,
        }
    }
}

/// A cover index as written in input files: an integer or a name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Int(i64),
    Text(String),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(i) => write!(f, "{i}"),
            Label::Text(s) => f.write_str(s),
        }
    }
}

/// Data for a cover `A = Σ_β I_β` truncated at `|J| ≤ cap + 1`.
///
/// Intersections are keyed by strictly increasing label indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MvInput {
    pub grading: Grading,
    pub labels: Vec<String>,
    pub cap: usize,
    pub mode: RunMode,
    pub intersections: BTreeMap<Vec<usize>, GradedGroup>,
    /// Matrices on the ambient coordinates laid out by [`MvE1::layout`].
    pub d1: Vec<(Bidegree, IntMatrix)>,
}

impl MvInput {
    /// Input with `cap = |labels| − 1`, exact mode and no `d¹`.
    pub fn finite(grading: Grading, labels: Vec<String>) -> Self {
        let cap = labels.len().saturating_sub(1);
        MvInput {
            grading,
            labels,
            cap,
            mode: RunMode::Exact,
            intersections: BTreeMap::new(),
            d1: Vec::new(),
        }
    }

    pub fn set(&mut self, indices: Vec<usize>, k: GradedGroup) {
        self.intersections.insert(indices, k);
    }

    fn names(&self, set: &[usize]) -> Vec<String> {
        set.iter()
            .map(|&i| {
                self.labels
                    .get(i)
                    .cloned()
                    .unwrap_or_else(|| format!("#{i}"))
            })
            .collect()
    }
}

/// External JSON form of [`MvInput`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MvInputSpec {
    pub labels: Vec<Label>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<u32>,
    #[serde(default)]
    pub mode: RunMode,
    pub intersections: Vec<IntersectionSpec>,
    #[serde(default)]
    pub d1: Vec<DifferentialSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntersectionSpec {
    #[serde(rename = "J")]
    pub set: Vec<Label>,
    /// Degrees absent from the map are zero.
    pub k: BTreeMap<u32, FgAbGroup>,
}

impl MvInputSpec {
    /// Resolves labels to indices. `period` overrides the file's own period.
    pub fn to_input(&self, period: Option<u32>) -> Result<MvInput, AssemblyError> {
        let grading = Grading::new(period.or(self.period).unwrap_or(2))?;
        let labels: Vec<String> = self.labels.iter().map(Label::to_string).collect();
        let mut index = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(AssemblyError::Invalid(format!("label {l} listed twice")));
            }
        }
        if labels.is_empty() {
            return Err(AssemblyError::Invalid("no labels".into()));
        }
        let mut input = MvInput::finite(grading, labels);
        if let Some(cap) = self.cap {
            input.cap = cap;
        }
        input.mode = self.mode;
        for entry in &self.intersections {
            let mut set = Vec::with_capacity(entry.set.len());
            for l in &entry.set {
                match index.get(&l.to_string()) {
                    Some(&i) => set.push(i),
                    None => return Err(AssemblyError::Invalid(format!("unknown label {l} in J"))),
                }
            }
            set.sort_unstable();
            let mut groups = vec![FgAbGroup::zero(); grading.period()];
            for (&s, g) in &entry.k {
                match groups.get_mut(s as usize) {
                    Some(slot) => *slot = g.clone(),
                    None => {
                        return Err(AssemblyError::Invalid(format!(
                            "degree {s} out of range for period {}",
                            grading.period()
                        )))
                    }
                }
            }
            let names = input.names(&set);
            if input
                .intersections
                .insert(set, GradedGroup::new(groups)?)
                .is_some()
            {
                return Err(AssemblyError::Invalid(format!(
                    "J = {names:?} listed twice"
                )));
            }
        }
        input.d1 = self.d1.iter().map(|d| (d.from, d.matrix.clone())).collect();
        Ok(input)
    }
}

/// One summand `K_q(⋂_{j∈J} I_j)` inside a first-page cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    #[serde(rename = "J")]
    pub set: Vec<String>,
    pub group: FgAbGroup,
    /// First ambient coordinate of this summand's generators.
    pub offset: usize,
}

/// A Mayer-Vietoris first page with its summand layout.
#[derive(Clone, Debug)]
pub struct MvE1 {
    pub page: Page,
    /// Nonzero summands per cell, lexicographic on sorted `J`.
    pub layout: BTreeMap<Bidegree, Vec<Summand>>,
    pub d1_status: D1Status,
    pub mode: RunMode,
}

/// All `k`-element subsets of `0..n`, lexicographic.
pub fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 || k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// `E¹_{p,q} = ⊕_{|J|=p+1} K_q(⋂_{j∈J} I_j)` for `0 ≤ p ≤ cap`.
pub fn build_mv_e1(input: &MvInput) -> Result<MvE1, AssemblyError> {
    let n = input.labels.len();
    let grading = input.grading;
    let period = grading.period();
    if n == 0 {
        return Err(AssemblyError::Invalid("no labels".into()));
    }
    if input.labels.iter().collect::<BTreeSet<_>>().len() != n {
        return Err(AssemblyError::Invalid("labels must be distinct".into()));
    }
    for (set, k) in &input.intersections {
        if set.is_empty() || set.windows(2).any(|w| w[0] >= w[1]) || set[set.len() - 1] >= n {
            return Err(AssemblyError::Invalid(format!(
                "intersection key {set:?} is not a nonempty increasing index set below {n}"
            )));
        }
        if k.period() != period {
            return Err(AssemblyError::Invalid(format!(
                "J = {:?} carries period-{} data in a period-{period} run",
                input.names(set),
                k.period()
            )));
        }
    }

    let top = input.cap.min(n - 1);
    let mut cells = Vec::new();
    let mut layout = BTreeMap::new();
    for p in 0..=top {
        let sets = subsets_of_size(n, p + 1);
        let mut data = Vec::with_capacity(sets.len());
        for set in &sets {
            match input.intersections.get(set) {
                Some(k) => data.push(k),
                None => return Err(AssemblyError::MissingIntersection(input.names(set))),
            }
        }
        for q in 0..period {
            let mut summands = Vec::new();
            let mut relations = Vec::new();
            let mut offset = 0;
            for (set, k) in sets.iter().zip(&data) {
                let g = k.degree(q as i64);
                if g.is_zero() {
                    continue;
                }
                relations.push(g.relations()?);
                summands.push(Summand {
                    set: input.names(set),
                    group: g.clone(),
                    offset,
                });
                offset += g.num_generators()?;
            }
            if summands.is_empty() {
                continue;
            }
            let at = Bidegree::new(p, q);
            let cell = if summands.len() == 1 {
                Subquotient::presentation(&summands[0].group)?
            } else {
                let rel = relations
                    .iter()
                    .skip(1)
                    .fold(relations[0].clone(), |acc, r| acc.block_diag(r));
                Subquotient::from_lattices(Lattice::full(offset), Lattice::from_generators(&rel))?
            };
            cells.push((at, cell));
            layout.insert(at, summands);
        }
    }

    if input.mode == RunMode::Exact {
        for size in input.cap + 2..=n {
            for set in subsets_of_size(n, size) {
                let vanishes = input
                    .intersections
                    .get(&set)
                    .is_some_and(GradedGroup::is_zero);
                if !vanishes {
                    return Err(AssemblyError::CapTooSmall {
                        cap: input.cap,
                        set: input.names(&set),
                    });
                }
            }
        }
    }

    let d1_status = if !input.d1.is_empty() {
        D1Status::Supplied
    } else if layout
        .keys()
        .any(|at| at.p >= 1 && layout.contains_key(&Bidegree::new(at.p - 1, at.q)))
    {
        D1Status::AssumedZero
    } else {
        D1Status::ForcedZero
    };
    let page = Page::first(grading, input.cap, cells, input.d1.clone())?;
    Ok(MvE1 {
        page,
        layout,
        d1_status,
        mode: input.mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pages::run_to_infinity;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn subsets_lexicographic() {
        assert_eq!(
            subsets_of_size(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(subsets_of_size(3, 3), vec![vec![0, 1, 2]]);
        assert!(subsets_of_size(2, 3).is_empty());
    }

    #[test]
    fn single_ideal_has_no_shift() {
        let k = GradedGroup::pair(FgAbGroup::new(1, vec![2]).unwrap(), FgAbGroup::cyclic(5));
        let mut input = MvInput::finite(Grading::COMPLEX, labels(1));
        input.set(vec![0], k.clone());
        let e1 = build_mv_e1(&input).unwrap();
        assert_eq!(e1.page.group(Bidegree::new(0, 0)), *k.degree(0));
        assert_eq!(e1.page.group(Bidegree::new(0, 1)), *k.degree(1));
        assert_eq!(e1.page.nonzero_cells().count(), 2);
        assert_eq!(e1.d1_status, D1Status::ForcedZero);
    }

    #[test]
    fn two_zero_ideals() {
        let mut input = MvInput::finite(Grading::COMPLEX, labels(2));
        for s in [vec![0], vec![1], vec![0, 1]] {
            input.set(s, GradedGroup::zero(Grading::COMPLEX));
        }
        assert_eq!(build_mv_e1(&input).unwrap().page.nonzero_cells().count(), 0);
    }

    #[test]
    fn summands_in_lexicographic_order() {
        let mut input = MvInput::finite(Grading::COMPLEX, labels(3));
        for s in subsets_of_size(3, 1)
            .into_iter()
            .chain(subsets_of_size(3, 3))
        {
            input.set(s, GradedGroup::zero(Grading::COMPLEX));
        }
        input.set(
            vec![0, 1],
            GradedGroup::pair(FgAbGroup::z(), FgAbGroup::zero()),
        );
        input.set(
            vec![0, 2],
            GradedGroup::pair(FgAbGroup::zero(), FgAbGroup::zero()),
        );
        input.set(
            vec![1, 2],
            GradedGroup::pair(FgAbGroup::cyclic(2), FgAbGroup::zero()),
        );
        let e1 = build_mv_e1(&input).unwrap();
        let cell = &e1.layout[&Bidegree::new(1, 0)];
        assert_eq!(cell.len(), 2);
        assert_eq!(
            (cell[0].set.clone(), cell[0].offset),
            (vec!["0".into(), "1".into()], 0)
        );
        assert_eq!(
            (cell[1].set.clone(), cell[1].offset),
            (vec!["1".into(), "2".into()], 1)
        );
        assert_eq!(
            e1.page.group(Bidegree::new(1, 0)),
            FgAbGroup::new(1, vec![2]).unwrap()
        );
    }

    #[test]
    fn missing_and_cap_errors() {
        let mut input = MvInput::finite(Grading::COMPLEX, labels(2));
        input.set(vec![0], GradedGroup::zero(Grading::COMPLEX));
        input.set(vec![1], GradedGroup::zero(Grading::COMPLEX));
        assert_eq!(
            build_mv_e1(&input).unwrap_err(),
            AssemblyError::MissingIntersection(vec!["0".into(), "1".into()])
        );
        input.cap = 0;
        assert!(matches!(
            build_mv_e1(&input),
            Err(AssemblyError::CapTooSmall { cap: 0, .. })
        ));
        input.set(
            vec![0, 1],
            GradedGroup::pair(FgAbGroup::z(), FgAbGroup::zero()),
        );
        assert!(matches!(
            build_mv_e1(&input),
            Err(AssemblyError::CapTooSmall { .. })
        ));
        input.mode = RunMode::Truncated;
        assert!(build_mv_e1(&input).is_ok());
        input.set(vec![0, 1], GradedGroup::zero(Grading::COMPLEX));
        input.mode = RunMode::Exact;
        assert!(build_mv_e1(&input).is_ok());
    }

    #[test]
    fn supplied_d1_on_two_sets() {
        // K_0(I_0) = K_0(I_1) = ℤ, K_0(I_0 ∩ I_1) = ℤ, d¹ = (1, −1)ᵀ into ℤ²
        let mut input = MvInput::finite(Grading::COMPLEX, labels(2));
        let z0 = GradedGroup::pair(FgAbGroup::z(), FgAbGroup::zero());
        input.set(vec![0], z0.clone());
        input.set(vec![1], z0.clone());
        input.set(vec![0, 1], z0);
        input.d1 = vec![(
            Bidegree::new(1, 0),
            IntMatrix::from_rows(&[[1], [-1]]).unwrap(),
        )];
        let e1 = build_mv_e1(&input).unwrap();
        assert_eq!(e1.d1_status, D1Status::Supplied);
        let run = run_to_infinity(e1.page).unwrap();
        assert_eq!(run.e_infinity_at(Bidegree::new(0, 0)), FgAbGroup::z());
        assert_eq!(run.e_infinity_at(Bidegree::new(1, 0)), FgAbGroup::zero());
    }

    #[test]
    fn json_spec_round_trip() {
        let text = r#"{"labels":[0,"b"],"intersections":[
            {"J":[0],"k":{"0":{"free_rank":1}}},
            {"J":["b"],"k":{"1":{"free_rank":0,"torsion":[3]}}},
            {"J":["b",0],"k":{}}]}"#;
        let spec: MvInputSpec = serde_json::from_str(text).unwrap();
        let input = spec.to_input(None).unwrap();
        assert_eq!(input.cap, 1);
        assert_eq!(input.labels, vec!["0".to_string(), "b".to_string()]);
        assert!(input.intersections[&vec![0, 1]].is_zero());
        let e1 = build_mv_e1(&input).unwrap();
        assert_eq!(e1.page.group(Bidegree::new(0, 1)), FgAbGroup::cyclic(3));
        let back: MvInputSpec =
            serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
    }
}
