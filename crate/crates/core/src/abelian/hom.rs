use serde::{Deserialize, Serialize};

use super::group::FgAbGroup;
use super::lattice::{Lattice, Subquotient};
use super::matrix::{gcd, mul, IntMatrix};
use super::snf::smith_normal_form;
use super::AbelianError;

/// A homomorphism between groups in standard presentation, given by its action
/// on generators: column `j` is the image of source generator `j`.
///
/// Rows belonging to torsion generators of the target are kept reduced
/// modulo their order, so equality of homomorphisms is entrywise equality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "HomRepr")]
pub struct GroupHom {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMatrix,
}

#[derive(Deserialize)]
struct HomRepr {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMatrix,
}

impl TryFrom<HomRepr> for GroupHom {
    type Error = AbelianError;

    fn try_from(r: HomRepr) -> Result<Self, AbelianError> {
        GroupHom::new(r.source, r.target, r.matrix)
    }
}

impl GroupHom {
    /// Checks shapes and well-definedness: each torsion generator's order
    /// must send its image column into the target's relation lattice.
    pub fn new(
        source: FgAbGroup,
        target: FgAbGroup,
        matrix: IntMatrix,
    ) -> Result<Self, AbelianError> {
        if source.is_countable() || target.is_countable() {
            if matrix.is_zero() {
                return Ok(GroupHom {
                    source,
                    target,
                    matrix: IntMatrix::zeros(0, 0),
                });
            }
            return Err(AbelianError::InfiniteRankArithmetic(
                "only the zero map may touch a countable-rank group".into(),
            ));
        }
        let (ns, nt) = (source.num_generators()?, target.num_generators()?);
        if matrix.rows() != nt || matrix.cols() != ns {
            return Err(AbelianError::IncompatibleShapes(format!(
                "map {source} → {target} needs a {nt}x{ns} matrix, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        for j in 0..ns {
            let d = source.generator_order(j);
            if d == 0 {
                continue;
            }
            for i in 0..nt {
                let e = target.generator_order(i);
                let v = mul(d, matrix[(i, j)]);
                let ok = if e == 0 { v == 0 } else { v % e == 0 };
                if !ok {
                    return Err(AbelianError::IllDefined(format!(
                        "generator {j} of order {d} maps to entry {} in row {i} of {target}",
                        matrix[(i, j)]
                    )));
                }
            }
        }
        let mut matrix = matrix;
        for i in 0..nt {
            let e = target.generator_order(i);
            if e != 0 {
                for j in 0..ns {
                    matrix[(i, j)] = matrix[(i, j)].rem_euclid(e);
                }
            }
        }
        Ok(GroupHom {
            source,
            target,
            matrix,
        })
    }

    pub fn zero(source: FgAbGroup, target: FgAbGroup) -> Self {
        let shape = (
            target.num_generators().unwrap_or(0),
            source.num_generators().unwrap_or(0),
        );
        let shape = if source.is_countable() || target.is_countable() {
            (0, 0)
        } else {
            shape
        };
        GroupHom {
            source,
            target,
            matrix: IntMatrix::zeros(shape.0, shape.1),
        }
    }

    pub fn identity(group: FgAbGroup) -> Result<Self, AbelianError> {
        let n = group.num_generators()?;
        GroupHom::new(group.clone(), group, IntMatrix::identity(n))
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        self.target.reduce(&self.matrix.apply(x))
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &GroupHom) -> Result<GroupHom, AbelianError> {
        if first.target != self.source {
            return Err(AbelianError::IncompatibleShapes(format!(
                "cannot compose {} → {} after {} → {}",
                self.source, self.target, first.source, first.target
            )));
        }
        if self.is_countable_map() || first.is_countable_map() {
            return Ok(GroupHom::zero(first.source.clone(), self.target.clone()));
        }
        GroupHom::new(
            first.source.clone(),
            self.target.clone(),
            self.matrix.mul(&first.matrix),
        )
    }

    fn is_countable_map(&self) -> bool {
        self.source.is_countable() || self.target.is_countable()
    }

    /// Preimage in ℤ^{gens(source)} of the kernel; contains the source relations.
    pub fn kernel_lattice(&self) -> Result<Lattice, AbelianError> {
        let ns = self.source.num_generators()?;
        let nt = self.target.num_generators()?;
        // x ∈ ker  ⇔  M·x = R_T·y for some y  ⇔  (x, y) ∈ null([M | −R_T])
        let stacked = self.matrix.hstack(&self.target.relations()?.negated());
        let snf = smith_normal_form(&stacked);
        let null: Vec<Vec<i64>> = (snf.rank..ns + nt)
            .map(|j| snf.v.column(j)[..ns].to_vec())
            .collect();
        Ok(Lattice::from_generators(&IntMatrix::from_columns(
            ns, &null,
        )))
    }

    /// Generators of the image together with the target relations.
    fn image_generators(&self) -> Result<IntMatrix, AbelianError> {
        Ok(self.matrix.hstack(&self.target.relations()?))
    }

    pub fn kernel(&self) -> Result<Subquotient, AbelianError> {
        let k = self.kernel_lattice()?;
        Subquotient::from_lattices(k, Lattice::from_generators(&self.source.relations()?))
    }

    pub fn image(&self) -> Result<FgAbGroup, AbelianError> {
        let gens = self.matrix.hstack(&self.target.relations()?);
        let rel = self.target.relations()?;
        Ok(Subquotient::new(&gens, &rel)?.group().clone())
    }

    pub fn cokernel(&self) -> Result<Subquotient, AbelianError> {
        Ok(Subquotient::quotient_of_free(&self.image_generators()?))
    }
}

/// `ℤ^rows / column-lattice(A)` in invariant-factor form.
pub fn cokernel(a: &IntMatrix) -> FgAbGroup {
    let snf = smith_normal_form(a);
    let orders: Vec<i64> = snf.invariant_factors();
    FgAbGroup::from_orders(a.rows() - snf.rank, &orders)
}

/// `ker g / im f` as a subquotient of ℤ^{gens(f.target)}; its `lift` expresses
/// the homology generators in the middle group's generators.
pub fn homology_at(f: &GroupHom, g: &GroupHom) -> Result<Subquotient, AbelianError> {
    if f.target != g.source {
        return Err(AbelianError::IncompatibleShapes(format!(
            "f lands in {} but g starts at {}",
            f.target, g.source
        )));
    }
    if !g.after(f)?.is_zero() {
        return Err(AbelianError::CompositionNonzero);
    }
    let cycles = g.kernel_lattice()?;
    let boundaries = f.matrix.hstack(&f.target.relations()?);
    Subquotient::from_lattices(cycles, Lattice::from_generators(&boundaries))
}

/// Exactness of `A --f--> B --g--> C` at `B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exactness {
    pub exact: bool,
    /// `ker g / im f`; absent when `g ∘ f ≠ 0`.
    pub homology: Option<FgAbGroup>,
    /// Representative in B's generators of a nonzero homology class.
    pub witness: Option<Vec<i64>>,
}

/// `im f = ker g`? Unlike [`homology_at`] this does not require `g ∘ f = 0`:
/// when the composite is nonzero the sequence is not exact and a source
/// generator whose image escapes the kernel is the witness.
pub fn is_exact_at(f: &GroupHom, g: &GroupHom) -> Result<Exactness, AbelianError> {
    if f.target != g.source {
        return Err(AbelianError::IncompatibleShapes(format!(
            "f lands in {} but g starts at {}",
            f.target, g.source
        )));
    }
    let gf = g.after(f)?;
    if !gf.is_zero() {
        let j = (0..gf.matrix.cols())
            .find(|&j| gf.matrix.column(j).iter().any(|&x| x != 0))
            .expect("nonzero composite has a nonzero column");
        return Ok(Exactness {
            exact: false,
            homology: None,
            witness: Some(f.matrix.column(j)),
        });
    }
    let h = homology_at(f, g)?;
    let witness = (!h.group().is_zero()).then(|| h.lift().column(0));
    Ok(Exactness {
        exact: h.group().is_zero(),
        homology: Some(h.group().clone()),
        witness,
    })
}

/// Multiplication by `k` on a cyclic or free group, as a convenience for tests
/// and examples.
pub fn scalar(source: FgAbGroup, target: FgAbGroup, k: i64) -> Result<GroupHom, AbelianError> {
    let (ns, nt) = (source.num_generators()?, target.num_generators()?);
    let diag = vec![k; ns.min(nt)];
    GroupHom::new(source, target, IntMatrix::diagonal(nt, ns, &diag))
}

/// Order of the element with generator coordinates `x`; 0 if it has infinite order.
pub fn element_order(group: &FgAbGroup, x: &[i64]) -> i64 {
    let mut order = 1i64;
    for (i, &v) in x.iter().enumerate() {
        let d = group.generator_order(i);
        if d == 0 {
            if v != 0 {
                return 0;
            }
            continue;
        }
        let v = v.rem_euclid(d);
        if v != 0 {
            let o = d / gcd(d, v);
            order = mul(order / gcd(order, o), o);
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> FgAbGroup {
        FgAbGroup::z()
    }

    #[test]
    fn cokernel_examples() {
        let c = |rows: &[&[i64]]| cokernel(&IntMatrix::from_rows(rows).unwrap());
        assert_eq!(c(&[&[2, 0], &[0, 3]]), FgAbGroup::cyclic(6));
        assert_eq!(c(&[&[0]]), FgAbGroup::z());
        assert_eq!(c(&[&[1, 0], &[0, 4]]), FgAbGroup::cyclic(4));
    }

    #[test]
    fn homology_examples() {
        // 0: ℤ → ℤ, 0: ℤ → ℤ
        let f = GroupHom::zero(z(), z());
        let g = GroupHom::zero(z(), z());
        assert_eq!(homology_at(&f, &g).unwrap().group(), &z());

        // ×2: ℤ → ℤ, then ℤ → 0
        let f = scalar(z(), z(), 2).unwrap();
        let g = GroupHom::zero(z(), FgAbGroup::zero());
        assert_eq!(homology_at(&f, &g).unwrap().group(), &FgAbGroup::cyclic(2));

        // 0 → ℤ², diag(2,3)
        let z2 = FgAbGroup::free(2);
        let f = GroupHom::zero(FgAbGroup::zero(), z2.clone());
        let g = GroupHom::new(
            z2.clone(),
            z2,
            IntMatrix::from_rows(&[[2, 0], [0, 3]]).unwrap(),
        )
        .unwrap();
        assert!(homology_at(&f, &g).unwrap().group().is_zero());
    }

    #[test]
    fn composition_must_vanish() {
        let f = scalar(z(), z(), 1).unwrap();
        let g = scalar(z(), z(), 2).unwrap();
        assert_eq!(homology_at(&f, &g), Err(AbelianError::CompositionNonzero));
    }

    #[test]
    fn exactness_examples() {
        let zero_in = GroupHom::zero(FgAbGroup::zero(), z());
        let id = GroupHom::identity(z()).unwrap();
        // 0 → ℤ → ℤ is exact at the middle: ker(id) = 0 = im(0)
        assert!(is_exact_at(&zero_in, &id).unwrap().exact);

        let two = scalar(z(), z(), 2).unwrap();
        let to_zero = GroupHom::zero(z(), FgAbGroup::zero());
        let e = is_exact_at(&two, &to_zero).unwrap();
        assert!(!e.exact);
        assert_eq!(e.homology, Some(FgAbGroup::cyclic(2)));
        let w = e.witness.unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].rem_euclid(2), 1);

        let proj = GroupHom::new(
            z(),
            FgAbGroup::cyclic(2),
            IntMatrix::from_rows(&[[1]]).unwrap(),
        )
        .unwrap();
        assert!(is_exact_at(&two, &proj).unwrap().exact);
    }

    #[test]
    fn well_definedness() {
        // ℤ/2 → ℤ must be zero
        assert!(GroupHom::new(
            FgAbGroup::cyclic(2),
            z(),
            IntMatrix::from_rows(&[[1]]).unwrap()
        )
        .is_err());
        // ℤ/2 → ℤ/4, 1 ↦ 2 is fine; 1 ↦ 1 is not
        assert!(GroupHom::new(
            FgAbGroup::cyclic(2),
            FgAbGroup::cyclic(4),
            IntMatrix::from_rows(&[[2]]).unwrap()
        )
        .is_ok());
        assert!(GroupHom::new(
            FgAbGroup::cyclic(2),
            FgAbGroup::cyclic(4),
            IntMatrix::from_rows(&[[1]]).unwrap()
        )
        .is_err());
    }

    #[test]
    fn countable_only_zero() {
        let c = FgAbGroup::countable();
        assert!(GroupHom::zero(c.clone(), z()).is_zero());
        assert!(matches!(
            GroupHom::new(c, z(), IntMatrix::from_rows(&[[1]]).unwrap()),
            Err(AbelianError::InfiniteRankArithmetic(_))
        ));
    }

    #[test]
    fn orders_of_elements() {
        let g = FgAbGroup::new(0, vec![2, 6]).unwrap();
        assert_eq!(element_order(&g, &[1, 2]), 6);
        assert_eq!(element_order(&g, &[0, 3]), 2);
        assert_eq!(element_order(&FgAbGroup::z(), &[3]), 0);
    }

    #[test]
    fn kernel_and_image() {
        // ℤ → ℤ/4, 1 ↦ 2: kernel 2ℤ ≅ ℤ, image ℤ/2
        let h = GroupHom::new(
            z(),
            FgAbGroup::cyclic(4),
            IntMatrix::from_rows(&[[2]]).unwrap(),
        )
        .unwrap();
        assert_eq!(h.kernel().unwrap().group(), &z());
        assert_eq!(h.image().unwrap(), FgAbGroup::cyclic(2));
        assert_eq!(h.cokernel().unwrap().group(), &FgAbGroup::cyclic(2));
    }
}
