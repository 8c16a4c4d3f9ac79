use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::{gcd, IntMatrix};
use super::snf::smith_normal_form;
use super::AbelianError;

/// Free rank of a group. `Countable` is a reporting-only sentinel for ⊕_ℕ ℤ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rank {
    Finite(usize),
    Countable,
}

impl Serialize for Rank {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Rank::Finite(r) => s.serialize_u64(*r as u64),
            Rank::Countable => s.serialize_str("countable"),
        }
    }
}

impl<'de> Deserialize<'de> for Rank {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(u64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Int(r) => Ok(Rank::Finite(r as usize)),
            Repr::Str(s) if s == "countable" => Ok(Rank::Countable),
            Repr::Str(s) => Err(serde::de::Error::custom(format!(
                "free_rank must be an integer or \"countable\", got {s:?}"
            ))),
        }
    }
}

/// A finitely generated abelian group `ℤ^r ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/d_k` in
/// invariant-factor form (`dᵢ ≥ 2`, `dᵢ | dᵢ₊₁`).
///
/// Generators are ordered free-first, then one per torsion factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupRepr")]
pub struct FgAbGroup {
    free_rank: Rank,
    torsion: Vec<i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupRepr {
    free_rank: Rank,
    #[serde(default)]
    torsion: Vec<i64>,
}

impl TryFrom<GroupRepr> for FgAbGroup {
    type Error = AbelianError;

    fn try_from(r: GroupRepr) -> Result<Self, AbelianError> {
        match r.free_rank {
            Rank::Finite(n) => FgAbGroup::new(n, r.torsion),
            Rank::Countable if r.torsion.is_empty() => Ok(FgAbGroup::countable()),
            Rank::Countable => Err(AbelianError::InfiniteRankArithmetic(
                "a countable-rank group cannot carry torsion".into(),
            )),
        }
    }
}

impl FgAbGroup {
    /// Validating constructor; `torsion` must already be an invariant-factor chain.
    pub fn new(free_rank: usize, torsion: Vec<i64>) -> Result<Self, AbelianError> {
        if let Some(&d) = torsion.iter().find(|&&d| d < 2) {
            return Err(AbelianError::NotNormalForm(format!(
                "torsion coefficient {d} must be at least 2"
            )));
        }
        if let Some(w) = torsion.windows(2).find(|w| w[1] % w[0] != 0) {
            return Err(AbelianError::NotNormalForm(format!(
                "{} does not divide {}",
                w[0], w[1]
            )));
        }
        Ok(FgAbGroup {
            free_rank: Rank::Finite(free_rank),
            torsion,
        })
    }

    /// `ℤ^free ⊕ ⊕ᵢ ℤ/orders[i]` for arbitrary orders, normalized.
    /// Orders of 0 count as free summands, ±1 as trivial ones.
    pub fn from_orders(free_rank: usize, orders: &[i64]) -> Self {
        let mut free = free_rank;
        let finite: Vec<i64> = orders
            .iter()
            .filter_map(|&d| match d.unsigned_abs() {
                0 => {
                    free += 1;
                    None
                }
                1 => None,
                _ => Some(d.abs()),
            })
            .collect();
        let n = finite.len();
        let snf = smith_normal_form(&IntMatrix::diagonal(n, n, &finite));
        let torsion = snf
            .invariant_factors()
            .into_iter()
            .filter(|&d| d > 1)
            .collect();
        FgAbGroup {
            free_rank: Rank::Finite(free),
            torsion,
        }
    }

    pub fn zero() -> Self {
        FgAbGroup {
            free_rank: Rank::Finite(0),
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup {
            free_rank: Rank::Finite(rank),
            torsion: Vec::new(),
        }
    }

    pub fn z() -> Self {
        Self::free(1)
    }

    /// `ℤ/n`; `cyclic(0)` is ℤ and `cyclic(1)` is trivial.
    pub fn cyclic(n: i64) -> Self {
        Self::from_orders(0, &[n])
    }

    pub fn countable() -> Self {
        FgAbGroup {
            free_rank: Rank::Countable,
            torsion: Vec::new(),
        }
    }

    pub fn free_rank(&self) -> Rank {
        self.free_rank
    }

    /// Free rank, or an error for the countable sentinel.
    pub fn finite_rank(&self) -> Result<usize, AbelianError> {
        match self.free_rank {
            Rank::Finite(r) => Ok(r),
            Rank::Countable => Err(AbelianError::InfiniteRankArithmetic(
                "the countable-rank sentinel has no finite generating set".into(),
            )),
        }
    }

    pub fn torsion(&self) -> &[i64] {
        &self.torsion
    }

    pub fn is_countable(&self) -> bool {
        self.free_rank == Rank::Countable
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == Rank::Finite(0) && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Number of generators in the standard presentation.
    pub fn num_generators(&self) -> Result<usize, AbelianError> {
        Ok(self.finite_rank()? + self.torsion.len())
    }

    /// Order of generator `i` (0 for free generators).
    pub fn generator_order(&self, i: usize) -> i64 {
        let r = match self.free_rank {
            Rank::Finite(r) => r,
            Rank::Countable => return 0,
        };
        if i < r {
            0
        } else {
            self.torsion[i - r]
        }
    }

    /// Diagonal relation matrix `diag(0,…,0,d₁,…,d_k)`.
    pub fn relations(&self) -> Result<IntMatrix, AbelianError> {
        let n = self.num_generators()?;
        let diag: Vec<i64> = (0..n).map(|i| self.generator_order(i)).collect();
        Ok(IntMatrix::diagonal(n, n, &diag))
    }

    /// Reduces a coordinate vector modulo the torsion orders.
    pub fn reduce(&self, x: &[i64]) -> Vec<i64> {
        x.iter()
            .enumerate()
            .map(|(i, &v)| match self.generator_order(i) {
                0 => v,
                d => v.rem_euclid(d),
            })
            .collect()
    }

    /// Order of the group, `None` if infinite.
    pub fn order(&self) -> Option<u128> {
        if self.free_rank != Rank::Finite(0) {
            return None;
        }
        self.torsion
            .iter()
            .try_fold(1u128, |acc, &d| acc.checked_mul(d as u128))
    }

    /// Normalized direct sum. Countable sentinels absorb free summands.
    pub fn direct_sum(&self, other: &FgAbGroup) -> FgAbGroup {
        if self.is_countable() || other.is_countable() {
            assert!(
                self.torsion.is_empty() && other.torsion.is_empty(),
                "countable-rank sums must be torsion-free"
            );
            return FgAbGroup::countable();
        }
        let free = self.finite_rank().unwrap() + other.finite_rank().unwrap();
        let orders: Vec<i64> = self.torsion.iter().chain(&other.torsion).copied().collect();
        FgAbGroup::from_orders(free, &orders)
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a FgAbGroup>>(groups: I) -> FgAbGroup {
        groups
            .into_iter()
            .fold(FgAbGroup::zero(), |acc, g| acc.direct_sum(g))
    }

    /// Number of elements of order dividing `k`; used by brute-force oracles.
    pub fn count_killed_by(&self, k: i64) -> Option<u128> {
        if self.free_rank != Rank::Finite(0) {
            return None;
        }
        Some(self.torsion.iter().map(|&d| gcd(d, k) as u128).product())
    }
}

/// Two groups are isomorphic iff their invariant-factor forms agree.
pub fn iso_class_equal(g: &FgAbGroup, h: &FgAbGroup) -> bool {
    g == h
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            Rank::Countable => parts.push("ℤ^∞".to_string()),
            Rank::Finite(0) => {}
            Rank::Finite(1) => parts.push("ℤ".to_string()),
            Rank::Finite(r) => parts.push(format!("ℤ^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("ℤ/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}
