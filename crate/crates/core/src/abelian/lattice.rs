//! Sublattices of ℤⁿ and subquotients `Z / B` of them.
//!
//! Every kernel, image, homology group and spectral-sequence cell in the
//! crate is represented as a pair of lattices `B ⊆ Z ⊆ ℤⁿ` in some free
//! ambient group, together with the invariant-factor form of `Z / B` and
//! maps in both directions between ambient vectors and quotient coordinates.

use serde::{Deserialize, Serialize};

use super::group::FgAbGroup;
use super::matrix::{mul, IntMatrix};
use super::snf::smith_normal_form;
use super::AbelianError;

/// A sublattice of ℤⁿ with a basis and an exact membership/coordinate solver.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    ambient: usize,
    /// `ambient × rank`, full column rank.
    basis: IntMatrix,
    /// Left transform from the SNF of the generators; `U·x` exposes coordinates.
    u: IntMatrix,
    diag: Vec<i64>,
}

impl Lattice {
    /// Lattice spanned by the columns of `generators` (an `n × k` matrix).
    pub fn from_generators(generators: &IntMatrix) -> Self {
        let n = generators.rows();
        let snf = smith_normal_form(generators);
        let diag = snf.invariant_factors();
        // columns of U⁻¹·D span the same lattice as the generators
        let cols: Vec<Vec<i64>> = diag
            .iter()
            .enumerate()
            .map(|(i, &d)| snf.u_inv.column(i).into_iter().map(|x| mul(x, d)).collect())
            .collect();
        Lattice {
            ambient: n,
            basis: IntMatrix::from_columns(n, &cols),
            u: snf.u,
            diag,
        }
    }

    pub fn full(n: usize) -> Self {
        Lattice {
            ambient: n,
            basis: IntMatrix::identity(n),
            u: IntMatrix::identity(n),
            diag: vec![1; n],
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Coordinates of `x` in [`Lattice::basis`], or `None` if `x` is not in the lattice.
    pub fn coordinates(&self, x: &[i64]) -> Option<Vec<i64>> {
        assert_eq!(x.len(), self.ambient, "ambient dimension mismatch");
        let y = self.u.apply(x);
        if y[self.rank()..].iter().any(|&v| v != 0) {
            return None;
        }
        self.diag
            .iter()
            .zip(&y)
            .map(|(&d, &v)| (v % d == 0).then_some(v / d))
            .collect()
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.coordinates(x).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.columns().all(|c| self.contains(&c))
    }
}

/// The subquotient `Z / B` for lattices `B ⊆ Z ⊆ ℤⁿ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subquotient {
    cycles: Lattice,
    boundaries: Lattice,
    group: FgAbGroup,
    /// `n × gens(group)`: ambient representatives of the quotient generators.
    lift: IntMatrix,
    /// `gens(group) × rank(Z)`: from Z-coordinates to quotient coordinates.
    project: IntMatrix,
}

impl Subquotient {
    /// Builds `⟨cycles⟩ / ⟨boundaries⟩`; both are `n × k` generator matrices.
    pub fn new(cycles: &IntMatrix, boundaries: &IntMatrix) -> Result<Self, AbelianError> {
        if cycles.rows() != boundaries.rows() {
            return Err(AbelianError::IncompatibleShapes(format!(
                "cycle generators live in ℤ^{} but boundary generators in ℤ^{}",
                cycles.rows(),
                boundaries.rows()
            )));
        }
        Self::from_lattices(
            Lattice::from_generators(cycles),
            Lattice::from_generators(boundaries),
        )
    }

    pub fn from_lattices(cycles: Lattice, boundaries: Lattice) -> Result<Self, AbelianError> {
        let z = cycles.rank();
        let mut coords = Vec::with_capacity(boundaries.rank());
        for b in boundaries.basis.columns() {
            match cycles.coordinates(&b) {
                Some(c) => coords.push(c),
                None => return Err(AbelianError::NotSubLattice),
            }
        }
        let c = IntMatrix::from_columns(z, &coords);
        let snf = smith_normal_form(&c);
        let diag: Vec<i64> = (0..z)
            .map(|i| if i < snf.rank { snf.d[(i, i)] } else { 0 })
            .collect();

        // free generators first, then torsion in divisibility order
        let free: Vec<usize> = (0..z).filter(|&i| diag[i] == 0).collect();
        let torsion: Vec<usize> = (0..z).filter(|&i| diag[i] > 1).collect();
        let order: Vec<usize> = free.iter().chain(&torsion).copied().collect();

        let group = FgAbGroup::new(free.len(), torsion.iter().map(|&i| diag[i]).collect())
            .expect("SNF diagonal satisfies the divisibility chain");
        let lift = cycles.basis.mul(&snf.u_inv.select_columns(&order));
        let mut project = IntMatrix::zeros(order.len(), z);
        for (k, &i) in order.iter().enumerate() {
            for j in 0..z {
                project[(k, j)] = snf.u[(i, j)];
            }
        }
        Ok(Subquotient {
            cycles,
            boundaries,
            group,
            lift,
            project,
        })
    }

    /// `ℤⁿ / ⟨relations⟩`.
    pub fn quotient_of_free(relations: &IntMatrix) -> Self {
        Self::from_lattices(
            Lattice::full(relations.rows()),
            Lattice::from_generators(relations),
        )
        .expect("every lattice is contained in ℤⁿ")
    }

    /// A group on its own standard generators: `ℤⁿ / relations`, identity lift.
    pub fn presentation(group: &FgAbGroup) -> Result<Self, AbelianError> {
        let rel = group.relations()?;
        let n = rel.rows();
        Ok(Subquotient {
            cycles: Lattice::full(n),
            boundaries: Lattice::from_generators(&rel),
            group: group.clone(),
            lift: IntMatrix::identity(n),
            project: IntMatrix::identity(n),
        })
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn ambient(&self) -> usize {
        self.cycles.ambient()
    }

    pub fn cycles(&self) -> &Lattice {
        &self.cycles
    }

    pub fn boundaries(&self) -> &Lattice {
        &self.boundaries
    }

    /// Ambient representatives of the quotient's generators (one per column).
    pub fn lift(&self) -> &IntMatrix {
        &self.lift
    }

    /// Class of an ambient vector in the quotient, reduced modulo torsion orders.
    /// `None` when the vector is not a cycle.
    pub fn project(&self, x: &[i64]) -> Option<Vec<i64>> {
        let c = self.cycles.coordinates(x)?;
        let y = self.project.apply(&c);
        Some(self.group.reduce(&y))
    }
}
