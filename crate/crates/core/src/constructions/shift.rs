//! Modifications of a sublattice that keep it fixed modulo `2N` while
//! changing its restricted form.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{Lattice, Sublattice};
use crate::linalg::{
    clear_denominators, dot, inertia, integer_kernel, positive_vector, rational_inverse,
    rational_quadratic_value, unimodular_completion, vec_add, vec_scale, IntMatrix, IntVector,
};

/// One pass of [`nondegenerate_shift_traced`]: the radical had rank
/// `radical_rank`, and `gamma` was replaced by `gamma + 2 gamma_prime`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftStep {
    pub radical_rank: usize,
    pub gamma: IntVector,
    pub gamma_prime: IntVector,
}

#[derive(Clone, Debug)]
pub struct ShiftTrace {
    pub result: Sublattice,
    pub steps: Vec<ShiftStep>,
}

/// Replaces a primitive `M` by a primitive `M' ≡ M (mod 2N)` on which the
/// form is non-degenerate.
pub fn nondegenerate_shift(m: &Sublattice) -> Result<Sublattice> {
    nondegenerate_shift_traced(m).map(|t| t.result)
}

/// Radical rank of the restricted form.
pub fn radical_rank(m: &Sublattice) -> usize {
    integer_kernel(&m.restricted_gram()).rows()
}

pub fn nondegenerate_shift_traced(m: &Sublattice) -> Result<ShiftTrace> {
    let amb = m.ambient().clone();
    if !amb.is_nondegenerate() {
        return Err(Error::DegenerateAmbient);
    }
    if !m.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    let mut cur = m.clone();
    let mut steps = Vec::new();
    loop {
        let radical = integer_kernel(&cur.restricted_gram());
        let f = radical.rows();
        if f == 0 {
            break;
        }
        let complement = unimodular_completion(&radical).ok_or_else(|| {
            Error::InternalInconsistency("radical is not a direct summand".into())
        })?;
        let f_vecs = &radical * cur.basis();
        let h_vecs = &complement * cur.basis();
        let gamma = f_vecs.row_vec(0);
        let h = Sublattice::from_basis_unchecked(amb.clone(), h_vecs.clone());
        let gamma_prime = find_gamma_prime(&amb, &gamma, &h.orthogonal_complement())?;

        let shifted = vec_add(&gamma, &vec_scale(&gamma_prime, &BigInt::from(2)));
        let mut rows = h_vecs.to_rows();
        rows.push(shifted);
        rows.extend(f_vecs.to_rows().into_iter().skip(1));
        let next = Sublattice::from_basis_unchecked(amb.clone(), IntMatrix::from_rows(rows, amb.rank()))
            .saturation();
        if radical_rank(&next) >= f || next.rank() != cur.rank() {
            return Err(Error::InternalInconsistency(
                "non-degeneration step did not shrink the radical".into(),
            ));
        }
        steps.push(ShiftStep {
            radical_rank: f,
            gamma,
            gamma_prime,
        });
        cur = next;
    }
    Ok(ShiftTrace { result: cur, steps })
}

/// First `γ'` in `H⊥` with `(γ + 2γ')² ≠ 0`, scanning basis vectors `w`,
/// then `−w`, then `w_i ± w_j`. Since `γ² = 0`, `(γ + 2γ')² = 4(Q(γ, γ') + γ'²)`.
fn find_gamma_prime(amb: &Lattice, gamma: &[BigInt], h_perp: &Sublattice) -> Result<IntVector> {
    let value = |w: &[BigInt]| dot(gamma, &amb.gram().mul_vec(w)) + amb.norm(w);
    let basis = h_perp.vectors();
    for w in &basis {
        if !value(w).is_zero() {
            return Ok(w.clone());
        }
        let neg: IntVector = w.iter().map(|x| -x).collect();
        if !value(&neg).is_zero() {
            return Ok(neg);
        }
    }
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            for sign in [1i64, -1] {
                let w = vec_add(&basis[i], &vec_scale(&basis[j], &BigInt::from(sign)));
                if !value(&w).is_zero() {
                    return Ok(w);
                }
            }
        }
    }
    Err(Error::InternalInconsistency(
        "no vector of the complement separates the radical".into(),
    ))
}

/// Result of replacing a hyperbolic pair `⟨a, b⟩ ⊥ S` by `⟨α, β⟩ ⊥ S` with
/// `α = a + 2γ`, `β = b + 2γ`.
#[derive(Clone, Debug)]
pub struct HyperbolicShift {
    pub sublattice: Sublattice,
    pub alpha: IntVector,
    pub beta: IntVector,
}

pub fn hyperbolic_signature_shift(
    ambient: &Arc<Lattice>,
    a: &[BigInt],
    b: &[BigInt],
    rest: &[IntVector],
    gamma: &[BigInt],
) -> Result<HyperbolicShift> {
    for v in [a, b, gamma].into_iter().chain(rest.iter().map(Vec::as_slice)) {
        ambient.check_dim(v)?;
    }
    let q = |x: &[BigInt], y: &[BigInt]| dot(x, &ambient.gram().mul_vec(y));
    if !q(a, a).is_zero() || !q(b, b).is_zero() || q(a, b) != BigInt::from(1) {
        return Err(Error::InvalidShift("a, b do not form a hyperbolic pair".into()));
    }
    if rest.iter().any(|s| !q(a, s).is_zero() || !q(b, s).is_zero()) {
        return Err(Error::InvalidShift("the rest is not orthogonal to the pair".into()));
    }
    if !q(gamma, gamma).is_negative() {
        return Err(Error::InvalidShift("gamma must have negative square".into()));
    }
    let on_m = [a, b].into_iter().chain(rest.iter().map(Vec::as_slice));
    if on_m.into_iter().any(|v| !q(gamma, v).is_zero()) {
        return Err(Error::InvalidShift("gamma is not orthogonal to the sublattice".into()));
    }
    let two_gamma = vec_scale(gamma, &BigInt::from(2));
    let alpha = vec_add(a, &two_gamma);
    let beta = vec_add(b, &two_gamma);
    let mut rows = vec![alpha.clone(), beta.clone()];
    rows.extend(rest.iter().cloned());
    let span = Sublattice::new(ambient.clone(), IntMatrix::from_rows(rows, ambient.rank()))?;
    Ok(HyperbolicShift {
        sublattice: span.saturation(),
        alpha,
        beta,
    })
}

/// Lowers the positive index of a non-degenerate span by one through
/// `m_i ↦ m_i + 2 s c_i γ` with `γ ⊥ M`, `γ² < 0`. The new Gram matrix is
/// `G + 4 s² γ² c cᵀ`, which loses a positive direction once
/// `4 s² |γ²| cᵀ G⁻¹ c > 1`; `c` is a positive vector of `G⁻¹`.
pub(crate) fn rank_one_signature_shift(
    ambient: &Lattice,
    gens: &IntMatrix,
    gamma: &[BigInt],
) -> Result<IntMatrix> {
    let g = gens.congruence(ambient.gram());
    let gamma_sq = ambient.norm(gamma);
    if !gamma_sq.is_negative() {
        return Err(Error::InvalidShift("gamma must have negative square".into()));
    }
    let before = inertia(&g);
    if before.n_zero != 0 || before.n_pos == 0 {
        return Err(Error::InvalidShift(
            "rank-one shift needs a non-degenerate form with a positive direction".into(),
        ));
    }
    let inv = rational_inverse(&g).expect("non-degenerate");
    let lcm = inv
        .iter()
        .flatten()
        .fold(BigInt::from(1), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
    let scaled: Vec<IntVector> = inv
        .iter()
        .map(|row| row.iter().map(|x| (x * &lcm).to_integer()).collect())
        .collect();
    let scaled = IntMatrix::from_rows(scaled, g.rows());
    let c = positive_vector(&scaled).ok_or_else(|| {
        Error::InternalInconsistency("inverse form lost its positive direction".into())
    })?;
    let c = clear_denominators(
        &c.iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect::<Vec<_>>(),
    );
    let qc = rational_quadratic_value(&inv, &c);
    let bound = BigRational::from_integer(gamma_sq.abs() * BigInt::from(4)) * qc;
    let mut s = BigInt::from(1);
    while &bound * BigRational::from_integer(&s * &s) <= BigRational::from_integer(1.into()) {
        s *= 2;
    }
    let rows: Vec<IntVector> = gens
        .to_rows()
        .into_iter()
        .zip(&c)
        .map(|(m, ci)| vec_add(&m, &vec_scale(gamma, &(BigInt::from(2) * &s * ci))))
        .collect();
    let out = IntMatrix::from_rows(rows, gens.cols());
    let after = inertia(&out.congruence(ambient.gram()));
    if after.n_pos + 1 != before.n_pos || after.n_zero != 0 {
        return Err(Error::InternalInconsistency(format!(
            "rank-one shift produced inertia {after:?} from {before:?}"
        )));
    }
    Ok(out)
}
