//! Serializable command results. Every report re-parses into the same value.

use mvss::abelian::{FgAbGroup, IntMatrix};
use mvss::assembly::{D1Status, FiltrationReport, Piece, RunMode, Summand};
use mvss::coarse::{ExcisionReport, Metric};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputKind {
    Builtin,
    MayerVietoris,
    Page,
    IdealChain,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellLayout {
    pub p: usize,
    pub q: usize,
    pub summands: Vec<Summand>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub source: String,
    pub kind: InputKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<RunMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d1_status: Option<D1Status>,
    #[serde(default)]
    pub warnings: Vec<String>,
    /// Nonzero first-page cells.
    pub e1: Vec<Piece>,
    /// Summand order inside each Mayer-Vietoris cell.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub layout: Vec<CellLayout>,
    pub target: FiltrationReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfReport {
    pub matrix: IntMatrix,
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
    pub invariant_factors: Vec<i64>,
    /// `ℤ^rows / im A`.
    pub cokernel: FgAbGroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcisionSummary {
    pub cover: String,
    pub dim: usize,
    pub members: Vec<String>,
    pub metric: Metric,
    pub radius: u64,
    pub s: u64,
    pub box_half: u64,
    pub passed: bool,
    pub subfamilies: Vec<ExcisionReport>,
}
