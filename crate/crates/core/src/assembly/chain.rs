use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::AssemblyError;
use crate::abelian::FgAbGroup;
use crate::pages::{Bidegree, DifferentialSpec, Grading, Page};

/// K-theory of the successive quotients of a chain of ideals `I_0 ⊆ … ⊆ I_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealChainInput {
    #[serde(default = "default_period")]
    pub period: u32,
    /// Index `n` of the last ideal; quotients vanish beyond it.
    pub length: usize,
    #[serde(default)]
    pub quotients: Vec<ChainQuotient>,
    /// When set, absent `(p, s)` entries are the zero group instead of an error.
    #[serde(default)]
    pub zero_elsewhere: bool,
    #[serde(default)]
    pub d1: Vec<DifferentialSpec>,
}

fn default_period() -> u32 {
    2
}

/// `K_s(I_p / I_{p−1})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainQuotient {
    pub p: usize,
    pub s: usize,
    pub group: FgAbGroup,
}

/// `E¹_{p,q} = K_{p+q}(I_p / I_{p−1})` for `0 ≤ p ≤ n`.
pub fn build_ideal_chain_e1(input: &IdealChainInput) -> Result<Page, AssemblyError> {
    let grading = Grading::new(input.period)?;
    let period = grading.period();
    let mut table = BTreeMap::new();
    for c in &input.quotients {
        if c.p > input.length || c.s >= period {
            return Err(AssemblyError::Invalid(format!(
                "quotient entry (p = {}, s = {}) outside 0 ≤ p ≤ {}, 0 ≤ s < {period}",
                c.p, c.s, input.length
            )));
        }
        if table.insert((c.p, c.s), c.group.clone()).is_some() {
            return Err(AssemblyError::Invalid(format!(
                "quotient entry (p = {}, s = {}) listed twice",
                c.p, c.s
            )));
        }
    }
    let mut cells = Vec::new();
    for p in 0..=input.length {
        for q in 0..period {
            let s = grading.wrap((p + q) as i64);
            let group = match table.get(&(p, s)) {
                Some(g) => g.clone(),
                None if input.zero_elsewhere => continue,
                None => return Err(AssemblyError::MissingCell { p, s }),
            };
            if !group.is_zero() {
                cells.push((Bidegree::new(p, q), group));
            }
        }
    }
    let d1 = input
        .d1
        .iter()
        .map(|d| (d.from, d.matrix.clone()))
        .collect();
    Ok(Page::from_groups(grading, input.length, cells, d1)?)
}
