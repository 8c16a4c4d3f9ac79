use std::fmt;

use serde::{Deserialize, Serialize};

use super::CoarseError;

/// A scale-closed constraint on one lattice coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Factor {
    Zero,
    NonNeg,
    NonPos,
    Full,
}

impl Factor {
    pub const ALL: [Factor; 4] = [Factor::Zero, Factor::NonNeg, Factor::NonPos, Factor::Full];

    pub fn meet(self, other: Factor) -> Factor {
        use Factor::*;
        match (self, other) {
            (Full, x) | (x, Full) => x,
            (x, y) if x == y => x,
            _ => Zero,
        }
    }

    pub fn is_half_ray(self) -> bool {
        matches!(self, Factor::NonNeg | Factor::NonPos)
    }

    pub fn allows(self, x: i64) -> bool {
        match self {
            Factor::Zero => x == 0,
            Factor::NonNeg => x >= 0,
            Factor::NonPos => x <= 0,
            Factor::Full => true,
        }
    }

    /// Lattice distance from `x` to the allowed values.
    pub fn distance(self, x: i64) -> u64 {
        if self.allows(x) {
            0
        } else {
            x.unsigned_abs()
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Factor::Zero => "0",
            Factor::NonNeg => "ℤ≥0",
            Factor::NonPos => "ℤ≤0",
            Factor::Full => "ℤ",
        })
    }
}

/// A product of per-coordinate factors in ℤⁿ; always contains the origin.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockySpace {
    pub factors: Vec<Factor>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    /// Has a half-ray factor, hence a shift to infinity.
    Flasque,
    PointLike,
    /// Coarsely equivalent to ℤᵏ, `k ≥ 1`.
    LineLike(usize),
}

impl Classification {
    /// Number of free directions, or `None` for flasque spaces.
    pub fn lines(self) -> Option<usize> {
        match self {
            Classification::Flasque => None,
            Classification::PointLike => Some(0),
            Classification::LineLike(k) => Some(k),
        }
    }
}

impl BlockySpace {
    pub fn new(factors: Vec<Factor>) -> Self {
        BlockySpace { factors }
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.dim() && self.factors.iter().zip(x).all(|(f, &v)| f.allows(v))
    }

    pub fn classify(&self) -> Classification {
        if self.factors.iter().any(|f| f.is_half_ray()) {
            return Classification::Flasque;
        }
        match self.factors.iter().filter(|&&f| f == Factor::Full).count() {
            0 => Classification::PointLike,
            k => Classification::LineLike(k),
        }
    }
}

impl fmt::Display for BlockySpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(" × "))
    }
}

/// Factorwise meet of equal-dimension spaces.
pub fn intersect(spaces: &[BlockySpace]) -> Result<BlockySpace, CoarseError> {
    let Some(first) = spaces.first() else {
        return Err(CoarseError::Invalid("empty intersection".into()));
    };
    let mut factors = first.factors.clone();
    for s in &spaces[1..] {
        if s.dim() != factors.len() {
            return Err(CoarseError::DimensionMismatch(factors.len(), s.dim()));
        }
        for (a, b) in factors.iter_mut().zip(&s.factors) {
            *a = a.meet(*b);
        }
    }
    Ok(BlockySpace { factors })
}

/// The `n + 1` overlapping blocks covering ℤⁿ:
/// `X_j = ℤ≥0^j × ℤ≤0 × ℤ^{n−j−1}` for `j < n` and `X_n = ℤ≥0^n`.
pub fn block_decomposition(n: usize) -> Result<Vec<BlockySpace>, CoarseError> {
    if n == 0 {
        return Err(CoarseError::Invalid(
            "block decomposition needs n ≥ 1".into(),
        ));
    }
    Ok((0..=n)
        .map(|j| {
            let factors = (0..n)
                .map(|i| match i.cmp(&j) {
                    std::cmp::Ordering::Less => Factor::NonNeg,
                    std::cmp::Ordering::Equal => Factor::NonPos,
                    std::cmp::Ordering::Greater => Factor::Full,
                })
                .collect();
            BlockySpace { factors }
        })
        .collect())
}

/// `X_j = ℤ≥0^j × ℤ≤0 × ℤ^∞` cut to the first `m + 1` coordinates, `j = 0, …, m`.
pub fn zinf_block_family(m: usize) -> Result<Vec<BlockySpace>, CoarseError> {
    if m == 0 {
        return Err(CoarseError::Invalid("ℤ^∞ prefix needs m ≥ 1".into()));
    }
    let mut spaces = block_decomposition(m + 1)?;
    spaces.truncate(m + 1);
    Ok(spaces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Factor::*;

    fn space(f: &[Factor]) -> BlockySpace {
        BlockySpace::new(f.to_vec())
    }

    #[test]
    fn meet_table() {
        assert_eq!(NonNeg.meet(NonPos), Zero);
        assert_eq!(Full.meet(NonPos), NonPos);
        assert_eq!(Zero.meet(Full), Zero);
        for a in Factor::ALL {
            for b in Factor::ALL {
                assert_eq!(a.meet(b), b.meet(a));
                for c in Factor::ALL {
                    assert_eq!(a.meet(b).meet(c), a.meet(b.meet(c)));
                }
            }
            assert_eq!(a.meet(a), a);
        }
    }

    #[test]
    fn intersections() {
        let x1 = space(&[NonNeg, NonPos]);
        let x2 = space(&[NonNeg, NonNeg]);
        assert_eq!(
            intersect(&[x1.clone(), x2]).unwrap(),
            space(&[NonNeg, Zero])
        );
        assert_eq!(intersect(std::slice::from_ref(&x1)).unwrap(), x1);
        assert_eq!(
            intersect(&[x1, space(&[Full])]),
            Err(CoarseError::DimensionMismatch(2, 1))
        );
    }

    #[test]
    fn classification() {
        assert_eq!(space(&[NonNeg, Full]).classify(), Classification::Flasque);
        assert_eq!(space(&[Zero, Zero]).classify(), Classification::PointLike);
        assert_eq!(
            space(&[Full, Zero, Full]).classify(),
            Classification::LineLike(2)
        );
    }

    #[test]
    fn blocks_in_low_dimension() {
        assert_eq!(
            block_decomposition(1).unwrap(),
            vec![space(&[NonPos]), space(&[NonNeg])]
        );
        assert_eq!(
            block_decomposition(2).unwrap(),
            vec![
                space(&[NonPos, Full]),
                space(&[NonNeg, NonPos]),
                space(&[NonNeg, NonNeg])
            ]
        );
        assert!(block_decomposition(0).is_err());
    }

    #[test]
    fn full_block_intersection_is_a_point() {
        for n in 1..=8 {
            let blocks = block_decomposition(n).unwrap();
            assert_eq!(
                intersect(&blocks).unwrap().classify(),
                Classification::PointLike
            );
            for skip in 0..=n {
                let mut rest = blocks.clone();
                rest.remove(skip);
                assert_eq!(
                    intersect(&rest).unwrap().classify(),
                    Classification::Flasque
                );
            }
        }
    }

    #[test]
    fn blocks_cover_the_box() {
        for n in 1..=3usize {
            let blocks = block_decomposition(n).unwrap();
            let side = 7i64;
            for idx in 0..side.pow(n as u32) {
                let x: Vec<i64> = (0..n)
                    .map(|i| (idx / side.pow(i as u32)) % side - 3)
                    .collect();
                assert!(blocks.iter().any(|b| b.contains(&x)), "{x:?}");
            }
        }
    }

    #[test]
    fn zinf_prefix() {
        let fam = zinf_block_family(2).unwrap();
        assert_eq!(fam[0], space(&[NonPos, Full, Full]));
        assert_eq!(intersect(&fam[..2]).unwrap(), space(&[Zero, NonPos, Full]));
        assert!(fam.iter().all(|x| x.classify() == Classification::Flasque));
        assert_eq!(fam.len(), 3);
    }

    #[test]
    fn serde_form() {
        let s: BlockySpace =
            serde_json::from_str(r#"{"factors":["nonneg","zero","full"]}"#).unwrap();
        assert_eq!(s, space(&[NonNeg, Zero, Full]));
        assert_eq!(
            serde_json::to_string(&space(&[NonPos])).unwrap(),
            r#"{"factors":["nonpos"]}"#
        );
    }
}
