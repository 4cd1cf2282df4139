//! Integral lattices `(L, Q)` and the sublattice calculus on top of them.

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{
    dot, hermite_normal_form, inertia, integer_kernel, rational_rank, smith_decomposition,
    solve_with, F2Matrix, Inertia, IntMatrix, IntVector, SmithForm,
};

/// Gram matrix of the E8 root lattice (positive definite, even, unimodular).
const E8_GRAM: [[i64; 8]; 8] = [
    [2, -1, 0, 0, 0, 0, 0, 0],
    [-1, 2, -1, 0, 0, 0, 0, 0],
    [0, -1, 2, -1, 0, 0, 0, 0],
    [0, 0, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, -1],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, 0],
    [0, 0, 0, 0, -1, 0, 0, 2],
];

/// A free ℤ-module with a symmetric integer bilinear form, given by its Gram
/// matrix in the standard basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    gram: IntMatrix,
    label: Option<String>,
}

impl Lattice {
    pub fn new(gram: IntMatrix, label: Option<String>) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(Lattice { gram, label })
    }

    /// The named standard lattices: `U`, `E8(-1)`, `E8`, `<n>` and `K3`.
    pub fn standard(name: &str) -> Result<Self> {
        let name = name.trim();
        let lat = match name {
            "U" => Lattice::new(IntMatrix::from_i64_rows(&[vec![0, 1], vec![1, 0]]), None)?,
            "E8" | "E8(-1)" => {
                let rows: Vec<Vec<i64>> = E8_GRAM.iter().map(|r| r.to_vec()).collect();
                let e8 = IntMatrix::from_i64_rows(&rows);
                debug_assert!(e8.determinant().is_one());
                debug_assert_eq!(inertia(&e8), Inertia::new(8, 0, 0));
                let gram = if name == "E8" { e8 } else { e8.neg() };
                let lat = Lattice::new(gram, None)?;
                assert!(lat.is_even() && lat.is_unimodular(), "E8 gram is not even unimodular");
                lat
            }
            "K3" => {
                let u = Lattice::standard("U")?;
                let e8 = Lattice::standard("E8(-1)")?;
                let lat = u.direct_sum(&u).direct_sum(&u).direct_sum(&e8).direct_sum(&e8);
                debug_assert!(lat.is_k3());
                lat
            }
            _ => {
                let n: i64 = name
                    .strip_prefix('<')
                    .and_then(|s| s.strip_suffix('>'))
                    .and_then(|s| s.trim().parse().ok())
                    .filter(|&n| n != 0)
                    .ok_or_else(|| Error::UnknownLattice(name.to_string()))?;
                Lattice::new(IntMatrix::from_i64_rows(&[vec![n]]), None)?
            }
        };
        Ok(lat.with_label(name))
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn inner(&self, x: &[BigInt], y: &[BigInt]) -> Result<BigInt> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(dot(x, &self.gram.mul_vec(y)))
    }

    /// `x²`; panics on a dimension mismatch.
    pub fn norm(&self, x: &[BigInt]) -> BigInt {
        dot(x, &self.gram.mul_vec(x))
    }

    pub(crate) fn check_dim(&self, x: &[BigInt]) -> Result<()> {
        if x.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[(i, i)].is_even())
    }

    pub fn determinant(&self) -> BigInt {
        self.gram.determinant()
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().abs().is_one()
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.determinant().is_zero()
    }

    pub fn inertia(&self) -> Inertia {
        inertia(&self.gram)
    }

    /// Orthogonal direct sum (block-diagonal Gram matrix).
    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        let label = match (self.label(), other.label()) {
            (Some(a), Some(b)) => Some(format!("{a} + {b}")),
            _ => None,
        };
        Lattice {
            gram: IntMatrix::block_diagonal(&self.gram, &other.gram),
            label,
        }
    }

    /// Rank 22, even, unimodular, signature (3, 19).
    pub fn is_k3(&self) -> bool {
        self.rank() == 22
            && self.is_even()
            && self.is_unimodular()
            && self.inertia() == Inertia::new(3, 19, 0)
    }
}

/// A sublattice of an ambient lattice, stored as a basis whose rows are
/// ambient coordinates.
#[derive(Clone, Debug)]
pub struct Sublattice {
    ambient: Arc<Lattice>,
    basis: IntMatrix,
    // Smith form of basisᵀ, for membership and coordinates.
    coords: OnceLock<SmithForm>,
}

impl Sublattice {
    /// Wraps an explicit basis; rows must be independent over ℚ.
    pub fn new(ambient: Arc<Lattice>, basis: IntMatrix) -> Result<Self> {
        if basis.cols() != ambient.rank() {
            return Err(Error::DimensionMismatch {
                expected: ambient.rank(),
                got: basis.cols(),
            });
        }
        if rational_rank(&basis) != basis.rows() {
            return Err(Error::DependentBasis);
        }
        Ok(Self::from_basis_unchecked(ambient, basis))
    }

    pub(crate) fn from_basis_unchecked(ambient: Arc<Lattice>, basis: IntMatrix) -> Self {
        Sublattice {
            ambient,
            basis,
            coords: OnceLock::new(),
        }
    }

    /// The submodule generated by arbitrary (possibly dependent) vectors.
    pub fn span(ambient: Arc<Lattice>, generators: &IntMatrix) -> Result<Self> {
        if generators.cols() != ambient.rank() {
            return Err(Error::DimensionMismatch {
                expected: ambient.rank(),
                got: generators.cols(),
            });
        }
        let basis = hermite_normal_form(generators);
        Ok(Self::from_basis_unchecked(ambient, basis))
    }

    pub fn zero(ambient: Arc<Lattice>) -> Self {
        let n = ambient.rank();
        Self::from_basis_unchecked(ambient, IntMatrix::zeros(0, n))
    }

    pub fn whole(ambient: Arc<Lattice>) -> Self {
        let n = ambient.rank();
        Self::from_basis_unchecked(ambient, IntMatrix::identity(n))
    }

    pub fn ambient(&self) -> &Arc<Lattice> {
        &self.ambient
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn vectors(&self) -> Vec<IntVector> {
        self.basis.to_rows()
    }

    /// Gram matrix of the ambient form on the basis.
    pub fn restricted_gram(&self) -> IntMatrix {
        self.basis.congruence(self.ambient.gram())
    }

    /// The sublattice regarded as a lattice in its own right.
    pub fn as_lattice(&self) -> Lattice {
        Lattice {
            gram: self.restricted_gram(),
            label: None,
        }
    }

    pub fn inertia(&self) -> Inertia {
        inertia(&self.restricted_gram())
    }

    /// Smallest primitive sublattice containing `self`.
    pub fn saturation(&self) -> Sublattice {
        let s = smith_decomposition(&self.basis);
        let r = s.rank();
        let basis = hermite_normal_form(&s.v_inv.select_rows(0..r));
        Self::from_basis_unchecked(self.ambient.clone(), basis)
    }

    pub fn is_primitive(&self) -> bool {
        let s = smith_decomposition(&self.basis);
        s.divisors().iter().all(One::is_one)
    }

    /// `{x : Q(x, v) = 0 for all v in self}`, always primitive.
    pub fn orthogonal_complement(&self) -> Sublattice {
        let m = &self.basis * self.ambient.gram();
        Self::from_basis_unchecked(self.ambient.clone(), integer_kernel(&m))
    }

    fn coord_form(&self) -> &SmithForm {
        self.coords
            .get_or_init(|| smith_decomposition(&self.basis.transpose()))
    }

    /// Coefficients `c` with `x = Σ cᵢ bᵢ`, if `x` lies in the sublattice.
    pub fn coordinates(&self, x: &[BigInt]) -> Option<IntVector> {
        if x.len() != self.ambient.rank() {
            return None;
        }
        if self.rank() == 0 {
            return x.iter().all(Zero::is_zero).then(Vec::new);
        }
        solve_with(self.coord_form(), x)
    }

    pub fn contains_vector(&self, x: &[BigInt]) -> bool {
        self.coordinates(x).is_some()
    }

    pub fn contains(&self, other: &Sublattice) -> bool {
        other.basis.to_rows().iter().all(|v| self.contains_vector(v))
    }

    /// Equality as submodules, tested by mutual containment.
    pub fn same_module(&self, other: &Sublattice) -> bool {
        self.rank() == other.rank() && self.contains(other) && other.contains(self)
    }

    /// Both sublattices have the same image in `ambient / 2·ambient`.
    pub fn congruent_mod2(&self, other: &Sublattice) -> bool {
        let a = F2Matrix::reduce(&self.basis);
        let b = F2Matrix::reduce(&other.basis);
        let ra = a.rank();
        if ra != b.rank() {
            return false;
        }
        let both = F2Matrix::reduce(&self.basis.vstack(&other.basis));
        both.rank() == ra
    }

    /// Re-expresses a sublattice of `self.as_lattice()` (coordinates relative
    /// to this basis) in the ambient coordinates of `self`.
    pub fn embed(&self, inner: &Sublattice) -> Sublattice {
        assert_eq!(inner.ambient.rank(), self.rank(), "embed: rank mismatch");
        let basis = &inner.basis * &self.basis;
        Self::from_basis_unchecked(self.ambient.clone(), basis)
    }

    /// Maps a coordinate vector relative to this basis into ambient coordinates.
    pub fn embed_vector(&self, c: &[BigInt]) -> IntVector {
        self.basis.vec_mul(c)
    }
}
