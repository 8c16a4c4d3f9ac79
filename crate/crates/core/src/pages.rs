//! Bigraded spectral-sequence pages with Bott-periodic `q`.
//!
//! Cells live at `(p, q)` with `0 ≤ p ≤ cap` and `q` taken modulo the grading
//! period. A differential on page `r` maps `(p, q)` to `(p − r, q + r − 1)`.
//! Each cell remembers how it sits inside its first-page ancestor as a
//! subquotient `Z / B` of a free ambient lattice, which is what lets later
//! pages (and injected higher differentials) be computed on representatives.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::{
    homology_at, iso_class_equal, AbelianError, FgAbGroup, GroupHom, IntMatrix, Subquotient,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PageError {
    #[error("grading period must be 2 or 8, got {0}")]
    BadPeriod(u32),
    #[error("cell {0} lies outside the support 0 ≤ p ≤ {1}")]
    OutOfSupport(Bidegree, usize),
    #[error("cell {0} is listed twice")]
    DuplicateCell(Bidegree),
    #[error("differential at {at}: {reason}")]
    BadDifferential { at: Bidegree, reason: String },
    #[error("induced map ill-defined at {at}: {reason}")]
    InducedMapIllDefined { at: Bidegree, reason: String },
    #[error("page {r} is not valid: {}", .issues.first().map(|i| i.to_string()).unwrap_or_default())]
    Invalid { r: usize, issues: Vec<PageIssue> },
    #[error(transparent)]
    Abelian(#[from] AbelianError),
}

/// Grading period of `q`: 2 for complex K-theory, 8 for KO.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Grading(u32);

impl Grading {
    pub const COMPLEX: Grading = Grading(2);
    pub const REAL: Grading = Grading(8);

    pub fn new(period: u32) -> Result<Self, PageError> {
        match period {
            2 | 8 => Ok(Grading(period)),
            p => Err(PageError::BadPeriod(p)),
        }
    }

    pub fn period(self) -> usize {
        self.0 as usize
    }

    pub fn wrap(self, q: i64) -> usize {
        q.rem_euclid(self.0 as i64) as usize
    }

    /// Target of `dʳ` from `at`, or `None` when it leaves the half-plane.
    pub fn target(self, at: Bidegree, r: usize) -> Option<Bidegree> {
        let p = at.p.checked_sub(r)?;
        Some(Bidegree {
            p,
            q: self.wrap(at.q as i64 + r as i64 - 1),
        })
    }

    /// Source of the `dʳ` that lands in `at`.
    pub fn source(self, at: Bidegree, r: usize) -> Bidegree {
        Bidegree {
            p: at.p + r,
            q: self.wrap(at.q as i64 - r as i64 + 1),
        }
    }
}

impl TryFrom<u32> for Grading {
    type Error = PageError;

    fn try_from(p: u32) -> Result<Self, PageError> {
        Grading::new(p)
    }
}

impl From<Grading> for u32 {
    fn from(g: Grading) -> u32 {
        g.0
    }
}

impl Default for Grading {
    fn default() -> Self {
        Grading::COMPLEX
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct Bidegree {
    pub p: usize,
    pub q: usize,
}

impl Bidegree {
    pub fn new(p: usize, q: usize) -> Self {
        Bidegree { p, q }
    }
}

impl From<[usize; 2]> for Bidegree {
    fn from([p, q]: [usize; 2]) -> Self {
        Bidegree { p, q }
    }
}

impl From<Bidegree> for [usize; 2] {
    fn from(b: Bidegree) -> Self {
        [b.p, b.q]
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

/// A period-graded family `K_0, …, K_{period−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GradedGroup {
    groups: Vec<FgAbGroup>,
}

impl GradedGroup {
    pub fn new(groups: Vec<FgAbGroup>) -> Result<Self, PageError> {
        Grading::new(groups.len() as u32)?;
        Ok(GradedGroup { groups })
    }

    pub fn zero(grading: Grading) -> Self {
        GradedGroup {
            groups: vec![FgAbGroup::zero(); grading.period()],
        }
    }

    /// Complex (period 2) data `(K_0, K_1)`.
    pub fn pair(even: FgAbGroup, odd: FgAbGroup) -> Self {
        GradedGroup {
            groups: vec![even, odd],
        }
    }

    pub fn period(&self) -> usize {
        self.groups.len()
    }

    pub fn degree(&self, s: i64) -> &FgAbGroup {
        &self.groups[s.rem_euclid(self.groups.len() as i64) as usize]
    }

    pub fn groups(&self) -> &[FgAbGroup] {
        &self.groups
    }

    pub fn is_zero(&self) -> bool {
        self.groups.iter().all(FgAbGroup::is_zero)
    }

    /// Re-indexes periodic data over a longer period that it divides.
    pub fn regrade(&self, grading: Grading) -> Result<Self, PageError> {
        let period = grading.period();
        if period % self.period() != 0 {
            return Err(PageError::BadPeriod(period as u32));
        }
        Ok(GradedGroup {
            groups: (0..period).map(|s| self.degree(s as i64).clone()).collect(),
        })
    }

    pub fn direct_sum(&self, other: &GradedGroup) -> GradedGroup {
        assert_eq!(self.period(), other.period(), "period mismatch");
        GradedGroup {
            groups: self
                .groups
                .iter()
                .zip(&other.groups)
                .map(|(a, b)| a.direct_sum(b))
                .collect(),
        }
    }
}

impl fmt::Display for GradedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.groups.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A problem found by [`Page::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageIssue {
    pub at: Bidegree,
    pub problem: String,
}

impl fmt::Display for PageIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.at, self.problem)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageCheck {
    pub valid: bool,
    /// Ordered by bidegree; the first entry is the first failing cell.
    pub issues: Vec<PageIssue>,
}

/// Ambient-level maps for pages `r ≥ 2`, keyed by `(r, source)`.
type Injected = BTreeMap<(usize, Bidegree), IntMatrix>;

/// Page `Eʳ` of a half-plane spectral sequence.
#[derive(Clone, Debug)]
pub struct Page {
    r: usize,
    cap: usize,
    grading: Grading,
    /// Descendants of the first-page cells, including ones that died.
    cells: BTreeMap<Bidegree, Subquotient>,
    /// Nonzero differentials only, keyed by source.
    differentials: BTreeMap<Bidegree, GroupHom>,
    injected: Injected,
}

impl Page {
    /// First page from cells given as subquotients of free ambient lattices and
    /// `d¹` matrices acting on those ambient coordinates (target × source).
    pub fn first(
        grading: Grading,
        cap: usize,
        cells: Vec<(Bidegree, Subquotient)>,
        d1: Vec<(Bidegree, IntMatrix)>,
    ) -> Result<Page, PageError> {
        let mut map = BTreeMap::new();
        for (at, sq) in cells {
            if at.p > cap || at.q >= grading.period() {
                return Err(PageError::OutOfSupport(at, cap));
            }
            if map.insert(at, sq).is_some() {
                return Err(PageError::DuplicateCell(at));
            }
        }
        let mut page = Page {
            r: 1,
            cap,
            grading,
            cells: map,
            differentials: BTreeMap::new(),
            injected: BTreeMap::new(),
        };
        for (at, matrix) in d1 {
            if page.differentials.contains_key(&at) {
                return Err(PageError::BadDifferential {
                    at,
                    reason: "listed twice".into(),
                });
            }
            if let Some(hom) = page.induce(at, &matrix)? {
                page.differentials.insert(at, hom);
            }
        }
        Ok(page)
    }

    /// First page from plain groups; `d¹` matrices act on their generators.
    pub fn from_groups(
        grading: Grading,
        cap: usize,
        groups: Vec<(Bidegree, FgAbGroup)>,
        d1: Vec<(Bidegree, IntMatrix)>,
    ) -> Result<Page, PageError> {
        let cells = groups
            .into_iter()
            .map(|(at, g)| Ok((at, Subquotient::presentation(&g)?)))
            .collect::<Result<Vec<_>, PageError>>()?;
        Page::first(grading, cap, cells, d1)
    }

    /// Escape hatch: supplies `dʳ` for some `r ≥ 2` as an ambient matrix on the
    /// first-page representatives. It is induced on subquotients when page `r`
    /// is reached, and rejected there if it does not respect cycles and boundaries.
    pub fn with_higher_differential(
        mut self,
        r: usize,
        from: Bidegree,
        ambient: IntMatrix,
    ) -> Self {
        assert!(r >= 2, "d¹ is part of the first page");
        self.injected.insert((r, from), ambient);
        self
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn group(&self, at: Bidegree) -> FgAbGroup {
        self.cells
            .get(&at)
            .map_or_else(FgAbGroup::zero, |sq| sq.group().clone())
    }

    pub fn cell(&self, at: Bidegree) -> Option<&Subquotient> {
        self.cells.get(&at)
    }

    /// Nonzero cells in bidegree order.
    pub fn nonzero_cells(&self) -> impl Iterator<Item = (Bidegree, &FgAbGroup)> {
        self.cells
            .iter()
            .filter(|(_, sq)| !sq.group().is_zero())
            .map(|(&at, sq)| (at, sq.group()))
    }

    /// The differential leaving `at` (zero if none is stored).
    pub fn differential(&self, at: Bidegree) -> GroupHom {
        if let Some(d) = self.differentials.get(&at) {
            return d.clone();
        }
        let target = self
            .grading
            .target(at, self.r)
            .map_or_else(FgAbGroup::zero, |t| self.group(t));
        GroupHom::zero(self.group(at), target)
    }

    pub fn nonzero_differentials(&self) -> impl Iterator<Item = (Bidegree, &GroupHom)> {
        self.differentials.iter().map(|(&at, d)| (at, d))
    }

    pub fn has_zero_differentials(&self) -> bool {
        self.differentials.is_empty()
    }

    /// Same nonzero cells up to isomorphism and both with zero differentials.
    pub fn same_as(&self, other: &Page) -> bool {
        let a: Vec<_> = self.nonzero_cells().collect();
        let b: Vec<_> = other.nonzero_cells().collect();
        a.len() == b.len()
            && a.iter()
                .zip(&b)
                .all(|((x, g), (y, h))| x == y && iso_class_equal(g, h))
            && self.has_zero_differentials()
            && other.has_zero_differentials()
    }

    /// Turns an ambient-level matrix at `at` into a map between the current
    /// subquotient cells, checking that cycles go to cycles and boundaries to
    /// boundaries. Returns `None` for the zero map.
    fn induce(&self, at: Bidegree, ambient: &IntMatrix) -> Result<Option<GroupHom>, PageError> {
        let fail = |reason: String| PageError::InducedMapIllDefined { at, reason };
        let source = match self.cells.get(&at) {
            Some(sq) => sq,
            None if ambient.is_zero() => return Ok(None),
            None => return Err(fail("no cell at the source".into())),
        };
        let target_at = self.grading.target(at, self.r);
        let target = target_at.and_then(|t| self.cells.get(&t));
        let target_dim = target.map_or(0, Subquotient::ambient);
        if ambient.cols() != source.ambient() || ambient.rows() != target_dim {
            if ambient.is_zero() {
                return Ok(None);
            }
            return Err(PageError::BadDifferential {
                at,
                reason: format!(
                    "expected a {}x{} matrix, got {}x{}",
                    target_dim,
                    source.ambient(),
                    ambient.rows(),
                    ambient.cols()
                ),
            });
        }
        let Some(target) = target else {
            return Ok(None);
        };
        for z in source.cycles().basis().columns() {
            if target.project(&ambient.apply(&z)).is_none() {
                return Err(fail("a cycle is not sent to a cycle".into()));
            }
        }
        for b in source.boundaries().basis().columns() {
            let image = target
                .project(&ambient.apply(&b))
                .expect("boundaries are cycles");
            if image.iter().any(|&x| x != 0) {
                return Err(fail("a boundary is not sent to a boundary".into()));
            }
        }
        let cols: Vec<Vec<i64>> = source
            .lift()
            .columns()
            .map(|x| target.project(&ambient.apply(&x)).expect("checked above"))
            .collect();
        let matrix = IntMatrix::from_columns(target.group().num_generators()?, &cols);
        let hom = GroupHom::new(source.group().clone(), target.group().clone(), matrix)?;
        Ok((!hom.is_zero()).then_some(hom))
    }

    /// Bidegrees, support, source/target groups and `d ∘ d = 0`.
    pub fn validate(&self) -> PageCheck {
        let mut issues = Vec::new();
        for &at in self.cells.keys() {
            if at.p > self.cap || at.q >= self.grading.period() {
                issues.push(PageIssue {
                    at,
                    problem: format!("outside the support 0 ≤ p ≤ {}", self.cap),
                });
            }
        }
        for (&at, d) in &self.differentials {
            if d.source() != &self.group(at) {
                issues.push(PageIssue {
                    at,
                    problem: "differential source does not match the cell".into(),
                });
            }
            let Some(t) = self.grading.target(at, self.r) else {
                issues.push(PageIssue {
                    at,
                    problem: "nonzero differential leaves the half-plane".into(),
                });
                continue;
            };
            if d.target() != &self.group(t) {
                issues.push(PageIssue {
                    at,
                    problem: format!("differential target does not match the cell at {t}"),
                });
                continue;
            }
            if let Some(next) = self.differentials.get(&t) {
                match next.after(d) {
                    Ok(dd) if dd.is_zero() => {}
                    Ok(dd) => issues.push(PageIssue {
                        at,
                        problem: format!("d∘d ≠ 0 through {t}: composite matrix {}", dd.matrix()),
                    }),
                    Err(e) => issues.push(PageIssue {
                        at,
                        problem: e.to_string(),
                    }),
                }
            }
        }
        issues.sort_by_key(|i| i.at);
        PageCheck {
            valid: issues.is_empty(),
            issues,
        }
    }

    /// `Eʳ⁺¹ = H(Eʳ, dʳ)`, with `dʳ⁺¹` zero unless supplied through
    /// [`Page::with_higher_differential`].
    pub fn turn(&self) -> Result<Page, PageError> {
        let check = self.validate();
        if !check.valid {
            return Err(PageError::Invalid {
                r: self.r,
                issues: check.issues,
            });
        }
        let mut cells = BTreeMap::new();
        for (&at, sq) in &self.cells {
            let outgoing = self.differential(at);
            let src = self.grading.source(at, self.r);
            let incoming = if self.cells.contains_key(&src) {
                self.differential(src)
            } else {
                GroupHom::zero(FgAbGroup::zero(), sq.group().clone())
            };
            let h = homology_at(&incoming, &outgoing)?;
            // pull Z and B of the homology back into the first-page ambient
            let old_b = sq.boundaries().basis();
            let z = sq.lift().mul(h.cycles().basis()).hstack(old_b);
            let b = sq.lift().mul(h.boundaries().basis()).hstack(old_b);
            let next = Subquotient::new(&z, &b)?;
            debug_assert!(iso_class_equal(next.group(), h.group()));
            cells.insert(at, next);
        }
        let mut page = Page {
            r: self.r + 1,
            cap: self.cap,
            grading: self.grading,
            cells,
            differentials: BTreeMap::new(),
            injected: self.injected.clone(),
        };
        let due: Vec<(Bidegree, IntMatrix)> = self
            .injected
            .range((page.r, Bidegree::new(0, 0))..(page.r + 1, Bidegree::new(0, 0)))
            .map(|(&(_, at), m)| (at, m.clone()))
            .collect();
        for (at, m) in due {
            if let Some(hom) = page.induce(at, &m)? {
                page.differentials.insert(at, hom);
            }
        }
        let check = page.validate();
        if !check.valid {
            let first = check.issues[0].clone();
            return Err(PageError::InducedMapIllDefined {
                at: first.at,
                reason: first.problem,
            });
        }
        Ok(page)
    }
}

/// Record of a run from `E¹` until every differential has left the support.
#[derive(Clone, Debug)]
pub struct SpectralRun {
    pub pages: Vec<Page>,
    pub e_infinity: BTreeMap<Bidegree, FgAbGroup>,
    /// Smallest `r` from which all pages agree.
    pub stabilized_at: usize,
}

impl SpectralRun {
    pub fn cap(&self) -> usize {
        self.pages[0].cap
    }

    pub fn grading(&self) -> Grading {
        self.pages[0].grading
    }

    pub fn page(&self, r: usize) -> Option<&Page> {
        self.pages.get(r.checked_sub(1)?)
    }

    pub fn last(&self) -> &Page {
        self.pages.last().expect("a run has at least one page")
    }

    pub fn e_infinity_at(&self, at: Bidegree) -> FgAbGroup {
        self.e_infinity
            .get(&at)
            .cloned()
            .unwrap_or_else(FgAbGroup::zero)
    }
}

/// Turns pages until `r = cap + 2`; beyond that every `dʳ` exits the half-plane.
pub fn run_to_infinity(first: Page) -> Result<SpectralRun, PageError> {
    let stop = first.cap + 2;
    let mut pages = vec![first];
    while pages.last().unwrap().r < stop {
        let next = pages.last().unwrap().turn()?;
        pages.push(next);
    }
    let stabilized_at = pages
        .iter()
        .rposition(|p| !p.has_zero_differentials())
        .map_or(1, |i| pages[i].r + 1);
    let e_infinity = pages
        .last()
        .unwrap()
        .nonzero_cells()
        .map(|(at, g)| (at, g.clone()))
        .collect();
    Ok(SpectralRun {
        pages,
        e_infinity,
        stabilized_at,
    })
}

/// Has the run settled by page `expected_r`?
pub fn collapse_check(run: &SpectralRun, expected_r: usize) -> bool {
    run.stabilized_at <= expected_r
}

/// First-page input in the external JSON form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PageSpec {
    pub period: u32,
    pub cap: usize,
    #[serde(default)]
    pub cells: Vec<CellSpec>,
    #[serde(default)]
    pub d1: Vec<DifferentialSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellSpec {
    pub p: usize,
    pub q: usize,
    pub group: FgAbGroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DifferentialSpec {
    pub from: Bidegree,
    pub matrix: IntMatrix,
}

impl PageSpec {
    pub fn build(&self) -> Result<Page, PageError> {
        let grading = Grading::new(self.period)?;
        Page::from_groups(
            grading,
            self.cap,
            self.cells
                .iter()
                .map(|c| (Bidegree::new(c.p, c.q), c.group.clone()))
                .collect(),
            self.d1.iter().map(|d| (d.from, d.matrix.clone())).collect(),
        )
    }
}
