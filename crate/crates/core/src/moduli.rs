//! Dimensions of the period domains of real K3 surfaces of a given type,
//! and of their strata by the rank of the algebraic cycle lattice.
//!
//! All dimensions are symbolic in `(b, λ, k, k₀)`. The period domain of an
//! admissible involution is an open subset of `P^{b−1}(ℝ) × S^{21−b}`; the
//! walls `{x : Q(x, e) = 0}` for roots `e ∈ L^G` are not modelled.

use num_bigint::BigInt;
use serde::Serialize;

use crate::constructions::{
    check_polarized_range, check_unpolarized_range, polarization_k0, witness_count_lower_bound,
};
use crate::error::{Error, Result};
use crate::involution::{GaloisInvariants, Involution};
use crate::json::JsonInt;

fn admissible(s: &Involution) -> Result<GaloisInvariants> {
    if !s.lattice().is_k3() {
        return Err(Error::WrongAmbient);
    }
    s.require_admissible()
}

/// `dim Ω(σ) = (b − 1) + (21 − b) = 20`.
pub fn dim_omega(s: &Involution) -> Result<usize> {
    let g = admissible(s)?;
    Ok((g.b - 1) + (22 - g.b - 1))
}

/// Outcome for one value of `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stratum {
    pub k: usize,
    pub dim: Option<usize>,
    pub in_range: bool,
    pub reason: String,
    /// Rank-`k` witnesses spanned by parts of one basis of a maximal
    /// witness; a lower bound for the number of witness sublattices.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_lower_bound: Option<JsonInt>,
}

fn stratum(k: usize, range: Result<()>, dim: impl FnOnce() -> usize) -> Result<Stratum> {
    match range {
        Ok(()) => Ok(Stratum {
            k,
            dim: Some(dim()),
            in_range: true,
            reason: "in range".into(),
            witness_lower_bound: None,
        }),
        Err(Error::RangeViolation { reason, .. }) => Ok(Stratum {
            k,
            dim: None,
            in_range: false,
            reason,
            witness_lower_bound: None,
        }),
        Err(e) => Err(e),
    }
}

/// `dim Ω^k(σ) = 20 − k` for `k ≤ t`, with `k < t` when `λ = 0`.
pub fn dim_omega_k(s: &Involution, k: usize) -> Result<Option<usize>> {
    Ok(unpolarized_stratum(&admissible(s)?, k)?.dim)
}

fn unpolarized_stratum(g: &GaloisInvariants, k: usize) -> Result<Stratum> {
    let mut st = stratum(k, check_unpolarized_range(g, k), || 20 - k)?;
    if st.in_range {
        let max_rank = if g.lambda == 0 { g.h1_dim - 1 } else { g.h1_dim };
        st.witness_lower_bound = Some(JsonInt(witness_count_lower_bound(max_rank, k)));
    }
    Ok(st)
}

/// `dim Ω_l(σ) = 19`.
pub fn dim_omega_l(s: &Involution, l: &[BigInt]) -> Result<usize> {
    admissible(s)?;
    polarization_k0(s, l)?;
    Ok(19)
}

/// `dim Ω_l^k(σ) = 19 + k₀ − k` for `k₀ ≤ k ≤ t`, with `k < t` when
/// `λ = 0` or `λ = 1, k₀ = 0`.
pub fn dim_omega_l_k(s: &Involution, l: &[BigInt], k: usize) -> Result<Option<usize>> {
    let g = admissible(s)?;
    let k0 = polarization_k0(s, l)?;
    Ok(polarized_stratum(&g, k0, k)?.dim)
}

fn polarized_stratum(g: &GaloisInvariants, k0: usize, k: usize) -> Result<Stratum> {
    stratum(k, check_polarized_range(g, k0, k), || 19 + k0 - k)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuliReport {
    pub dim_omega: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim_omega_l: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k0: Option<usize>,
    pub h1: usize,
    /// One entry for each `0 ≤ k ≤ h¹`.
    pub strata: Vec<Stratum>,
}

pub fn moduli_report(s: &Involution, l: Option<&[BigInt]>) -> Result<ModuliReport> {
    let g = admissible(s)?;
    let dim_omega = dim_omega(s)?;
    let t = g.h1_dim;
    match l {
        None => Ok(ModuliReport {
            dim_omega,
            dim_omega_l: None,
            k0: None,
            h1: t,
            strata: (0..=t)
                .map(|k| unpolarized_stratum(&g, k))
                .collect::<Result<_>>()?,
        }),
        Some(l) => {
            let k0 = polarization_k0(s, l)?;
            Ok(ModuliReport {
                dim_omega,
                dim_omega_l: Some(19),
                k0: Some(k0),
                h1: t,
                strata: (0..=t)
                    .map(|k| polarized_stratum(&g, k0, k))
                    .collect::<Result<_>>()?,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int_vector, IntVector};
    use crate::real_types::{catalog, catalog_entry};

    fn at(pairs: &[(usize, i64)]) -> IntVector {
        let mut v = vec![0i64; 22];
        for &(i, x) in pairs {
            v[i] = x;
        }
        int_vector(&v)
    }

    #[test]
    fn whole_domain_has_dimension_twenty() {
        for e in catalog() {
            assert_eq!(dim_omega(&e.involution()).unwrap(), 20, "{}", e.name);
        }
    }

    #[test]
    fn unpolarized_strata() {
        let m = catalog_entry("max_M").unwrap().involution();
        assert_eq!(dim_omega_k(&m, 0).unwrap(), Some(20));
        assert_eq!(dim_omega_k(&m, 19).unwrap(), Some(1));
        assert_eq!(dim_omega_k(&m, 20).unwrap(), None);
        let t = catalog_entry("two_tori_ambiguous").unwrap().involution();
        assert_eq!(dim_omega_k(&t, 4).unwrap(), Some(16));
        assert_eq!(dim_omega_k(&t, 5).unwrap(), None);
        let r = moduli_report(&t, None).unwrap();
        assert_eq!(r.strata.len(), 5);
        assert_eq!(r.strata[2].witness_lower_bound, Some(JsonInt(BigInt::from(6))));
    }

    #[test]
    fn polarized_strata() {
        let m = catalog_entry("max_M").unwrap().involution();
        let l = at(&[(2, 1), (3, 2)]);
        assert_eq!(dim_omega_l(&m, &l).unwrap(), 19);
        assert_eq!(dim_omega_l_k(&m, &l, 0).unwrap(), None);
        assert_eq!(dim_omega_l_k(&m, &l, 1).unwrap(), Some(19));
        assert_eq!(dim_omega_l_k(&m, &l, 19).unwrap(), Some(1));
        assert_eq!(dim_omega_l_k(&m, &l, 20).unwrap(), None);

        let s = catalog_entry("m_minus_one").unwrap().involution();
        let l0 = at(&[(0, 1), (1, -1), (2, 2), (3, 2)]);
        let r = moduli_report(&s, Some(&l0)).unwrap();
        assert_eq!(r.k0, Some(0));
        assert_eq!(r.strata[0].dim, Some(19));
        assert_eq!(r.strata[19].dim, Some(0));
        assert!(!r.strata[20].in_range);
        assert!(dim_omega_l(&m, &at(&[(2, 2)])).is_err());
    }
}
