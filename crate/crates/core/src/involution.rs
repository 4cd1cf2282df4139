//! Involutions of a lattice and the cohomology of the group they generate.

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Lattice, Sublattice};
use crate::linalg::{
    integer_kernel, mod2_rank, smith_decomposition, solve_with, Inertia, IntMatrix,
    IntVector, SmithForm,
};

/// `(b, λ, dim H¹, dim H²)` of an involution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaloisInvariants {
    pub b: usize,
    pub lambda: usize,
    pub h1_dim: usize,
    pub h2_dim: usize,
}

/// An element of `H¹(G, L)` in the fixed basis of its involution.
pub type F2Vector = Vec<bool>;

/// The quotient `N / I` of a sublattice `N` by a full-rank submodule `I`
/// that contains `2N`, presented through the Smith form of the coordinate
/// matrix of `I` in the basis of `N`.
#[derive(Clone, Debug)]
struct TwoTorsionQuotient {
    form: SmithForm,
    // Positions whose elementary divisor is 2; these index the F₂-basis.
    even: Vec<usize>,
}

impl TwoTorsionQuotient {
    fn new(n: &Sublattice, image_gens: &IntMatrix, what: &str) -> Result<Self> {
        let m = n.rank();
        let mut cols = Vec::with_capacity(image_gens.rows());
        for g in image_gens.to_rows() {
            let c = n.coordinates(&g).ok_or_else(|| {
                Error::InternalInconsistency(format!("{what}: image vector outside the sublattice"))
            })?;
            cols.push(c);
        }
        let coords = IntMatrix::from_rows(cols, m).transpose();
        let form = smith_decomposition(&coords);
        let divs = form.divisors();
        if divs.len() != m {
            return Err(Error::InternalInconsistency(format!(
                "{what}: quotient is not finite"
            )));
        }
        let two = BigInt::from(2);
        let mut even = Vec::new();
        for (i, d) in divs.iter().enumerate() {
            if *d == two {
                even.push(i);
            } else if !d.is_one() {
                return Err(Error::InternalInconsistency(format!(
                    "{what}: elementary divisor {d} is not 1 or 2"
                )));
            }
        }
        Ok(TwoTorsionQuotient { form, even })
    }

    fn dim(&self) -> usize {
        self.even.len()
    }

    fn class(&self, coords: &[BigInt]) -> F2Vector {
        let w = self.form.u.mul_vec(coords);
        self.even.iter().map(|&i| w[i].is_odd()).collect()
    }
}

#[derive(Debug)]
struct Cohomology {
    invariants: GaloisInvariants,
    invariant: Sublattice,
    anti_invariant: Sublattice,
    h1: TwoTorsionQuotient,
    one_minus_sigma: SmithForm,
}

/// An isometric involution σ of a lattice, acting on column vectors: column
/// `j` of `matrix` is the image of the `j`-th basis vector.
#[derive(Clone, Debug)]
pub struct Involution {
    lattice: Arc<Lattice>,
    matrix: IntMatrix,
    cache: OnceLock<std::result::Result<Arc<Cohomology>, Error>>,
}

impl Involution {
    pub fn new(lattice: Arc<Lattice>, matrix: IntMatrix) -> Result<Self> {
        let n = lattice.rank();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: if matrix.rows() != n { matrix.rows() } else { matrix.cols() },
            });
        }
        if &matrix * &matrix != IntMatrix::identity(n) {
            return Err(Error::NotInvolution);
        }
        if matrix.transpose().congruence(lattice.gram()) != *lattice.gram() {
            return Err(Error::NotIsometry);
        }
        Ok(Involution {
            lattice,
            matrix,
            cache: OnceLock::new(),
        })
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn apply(&self, x: &[BigInt]) -> IntVector {
        self.matrix.mul_vec(x)
    }

    pub fn is_anti_invariant(&self, x: &[BigInt]) -> bool {
        x.len() == self.rank()
            && self.apply(x).iter().zip(x).all(|(a, b)| (a + b).is_zero())
    }

    /// `1 − σ` as a matrix.
    pub fn one_minus_sigma(&self) -> IntMatrix {
        IntMatrix::identity(self.rank()).sub(&self.matrix)
    }

    /// `1 + σ` as a matrix.
    pub fn one_plus_sigma(&self) -> IntMatrix {
        IntMatrix::identity(self.rank()).add(&self.matrix)
    }

    fn cohomology(&self) -> Result<&Cohomology> {
        self.cache
            .get_or_init(|| compute_cohomology(self).map(Arc::new))
            .as_ref()
            .map(|c| c.as_ref())
            .map_err(Clone::clone)
    }

    /// `L^G = ker(1 − σ)`.
    pub fn invariant_sublattice(&self) -> Sublattice {
        match self.cohomology() {
            Ok(c) => c.invariant.clone(),
            Err(_) => kernel_sublattice(&self.lattice, &self.one_minus_sigma()),
        }
    }

    /// `L(1)^G = ker(1 + σ)`.
    pub fn anti_invariant_sublattice(&self) -> Sublattice {
        match self.cohomology() {
            Ok(c) => c.anti_invariant.clone(),
            Err(_) => kernel_sublattice(&self.lattice, &self.one_plus_sigma()),
        }
    }

    /// `(b, λ, dim H¹, dim H²)`, with both cohomology groups computed as
    /// quotients and checked against `rank − b − λ` and `b − λ`.
    pub fn galois_invariants(&self) -> Result<GaloisInvariants> {
        self.cohomology().map(|c| c.invariants)
    }

    /// Rank 22 even unimodular lattice of signature (3, 19) with invariant
    /// form of signature `(1, b − 1)`.
    pub fn k3_admissible(&self) -> Result<bool> {
        if !self.lattice.is_k3() {
            return Err(Error::WrongAmbient);
        }
        let c = self.cohomology()?;
        let b = c.invariants.b;
        if b == 0 || c.invariant.inertia() != Inertia::new(1, b - 1, 0) {
            return Ok(false);
        }
        let anti = c.anti_invariant.inertia();
        if anti != Inertia::new(2, 20 - b, 0) {
            return Err(Error::InternalInconsistency(format!(
                "anti-invariant form has inertia {anti:?}, expected (2, {}, 0)",
                20 - b
            )));
        }
        Ok(true)
    }

    /// Fails with `NotAdmissible` unless [`Self::k3_admissible`] holds.
    pub fn require_admissible(&self) -> Result<GaloisInvariants> {
        if self.k3_admissible()? {
            self.galois_invariants()
        } else {
            Err(Error::NotAdmissible(format!(
                "{:?}",
                self.invariant_sublattice().inertia()
            )))
        }
    }

    /// Class of an anti-invariant vector in `H¹(G, L) = L(1)^G / (1 − σ)L`.
    pub fn r_map(&self, x: &[BigInt]) -> Result<F2Vector> {
        self.lattice.check_dim(x)?;
        if !self.is_anti_invariant(x) {
            return Err(Error::NotAntiInvariant);
        }
        let c = self.cohomology()?;
        let z = c
            .anti_invariant
            .coordinates(x)
            .ok_or_else(|| Error::InternalInconsistency("anti-invariant vector outside L(1)^G".into()))?;
        Ok(c.h1.class(&z))
    }

    /// Some `x` with `(1 − σ)x = l`, if `l ∈ (1 − σ)L`.
    pub fn one_minus_sigma_preimage(&self, l: &[BigInt]) -> Result<Option<IntVector>> {
        self.lattice.check_dim(l)?;
        let c = self.cohomology()?;
        Ok(solve_with(&c.one_minus_sigma, l))
    }
}

fn kernel_sublattice(lattice: &Arc<Lattice>, m: &IntMatrix) -> Sublattice {
    Sublattice::from_basis_unchecked(lattice.clone(), integer_kernel(m))
}

fn compute_cohomology(s: &Involution) -> Result<Cohomology> {
    let n = s.rank();
    let oms = s.one_minus_sigma();
    let ops = s.one_plus_sigma();
    let invariant = kernel_sublattice(&s.lattice, &oms);
    let anti_invariant = kernel_sublattice(&s.lattice, &ops);
    if invariant.rank() + anti_invariant.rank() != n {
        return Err(Error::InternalInconsistency(
            "invariant and anti-invariant ranks do not add up".into(),
        ));
    }
    let b = invariant.rank();
    let lambda = mod2_rank(&oms);

    // Images of the basis vectors are the columns, i.e. rows of the transpose.
    let h1 = TwoTorsionQuotient::new(&anti_invariant, &oms.transpose(), "H1")?;
    let h2 = TwoTorsionQuotient::new(&invariant, &ops.transpose(), "H2")?;

    if lambda > b || b + lambda > n {
        return Err(Error::InternalInconsistency(format!(
            "lambda = {lambda} exceeds min(b, rank - b) with b = {b}"
        )));
    }
    let h1_formula = n - b - lambda;
    let h2_formula = b - lambda;
    if h1.dim() != h1_formula || h2.dim() != h2_formula {
        return Err(Error::InternalInconsistency(format!(
            "direct H1/H2 dimensions ({}, {}) disagree with formulas ({h1_formula}, {h2_formula})",
            h1.dim(),
            h2.dim()
        )));
    }
    Ok(Cohomology {
        invariants: GaloisInvariants {
            b,
            lambda,
            h1_dim: h1.dim(),
            h2_dim: h2.dim(),
        },
        invariant,
        anti_invariant,
        h1,
        one_minus_sigma: smith_decomposition(&oms),
    })
}

/// Zero class test for [`F2Vector`]s.
pub fn is_zero_class(v: &[bool]) -> bool {
    v.iter().all(|x| !x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vector;

    fn on_u(rows: &[Vec<i64>]) -> Involution {
        let u = Arc::new(Lattice::standard("U").unwrap());
        Involution::new(u, IntMatrix::from_i64_rows(rows)).unwrap()
    }

    fn inv(b: usize, lambda: usize, h1: usize, h2: usize) -> GaloisInvariants {
        GaloisInvariants {
            b,
            lambda,
            h1_dim: h1,
            h2_dim: h2,
        }
    }

    #[test]
    fn rejects_non_involutions() {
        let u = Arc::new(Lattice::standard("U").unwrap());
        let m = IntMatrix::from_i64_rows(&[vec![1, 1], vec![0, 1]]);
        assert_eq!(Involution::new(u.clone(), m).unwrap_err(), Error::NotInvolution);
        // x ↦ x on first coordinate, −y on second squares to 1 but flips Q.
        let m = IntMatrix::from_i64_rows(&[vec![1, 0], vec![0, -1]]);
        assert_eq!(Involution::new(u, m).unwrap_err(), Error::NotIsometry);
    }

    #[test]
    fn sublattices_on_u() {
        let id = on_u(&[vec![1, 0], vec![0, 1]]);
        assert_eq!(id.invariant_sublattice().rank(), 2);
        assert_eq!(id.anti_invariant_sublattice().rank(), 0);
        let neg = on_u(&[vec![-1, 0], vec![0, -1]]);
        assert_eq!(neg.invariant_sublattice().rank(), 0);
        assert_eq!(neg.anti_invariant_sublattice().rank(), 2);
        let swap = on_u(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(swap.invariant_sublattice().restricted_gram(), IntMatrix::from_i64_rows(&[vec![2]]));
        assert_eq!(swap.anti_invariant_sublattice().restricted_gram(), IntMatrix::from_i64_rows(&[vec![-2]]));
    }

    #[test]
    fn invariants_on_small_lattices() {
        assert_eq!(on_u(&[vec![-1, 0], vec![0, -1]]).galois_invariants().unwrap(), inv(0, 0, 2, 0));
        assert_eq!(on_u(&[vec![1, 0], vec![0, 1]]).galois_invariants().unwrap(), inv(2, 0, 0, 2));
        let u = Lattice::standard("U").unwrap();
        let uu = Arc::new(u.direct_sum(&u));
        let exch = IntMatrix::from_i64_rows(&[
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
        ]);
        let s = Involution::new(uu, exch).unwrap();
        assert_eq!(s.galois_invariants().unwrap(), inv(2, 2, 0, 0));
    }

    #[test]
    fn r_map_on_negation() {
        let neg = on_u(&[vec![-1, 0], vec![0, -1]]);
        assert!(is_zero_class(&neg.r_map(&int_vector(&[2, 0])).unwrap()));
        assert!(!is_zero_class(&neg.r_map(&int_vector(&[1, 0])).unwrap()));
        assert!(is_zero_class(&neg.r_map(&int_vector(&[0, 0])).unwrap()));
        let id = on_u(&[vec![1, 0], vec![0, 1]]);
        assert_eq!(id.r_map(&int_vector(&[1, 0])), Err(Error::NotAntiInvariant));
    }

    #[test]
    fn admissibility_needs_k3() {
        let id = on_u(&[vec![1, 0], vec![0, 1]]);
        assert_eq!(id.k3_admissible(), Err(Error::WrongAmbient));
        let k3 = Arc::new(Lattice::standard("K3").unwrap());
        let s = Involution::new(k3.clone(), IntMatrix::identity(22)).unwrap();
        assert_eq!(s.k3_admissible(), Ok(false));
        let s = Involution::new(k3, IntMatrix::identity(22).neg()).unwrap();
        assert_eq!(s.k3_admissible(), Ok(false));
    }
}
