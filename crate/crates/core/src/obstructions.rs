//! Contractibility of the real part of a polarized surface, the bound on
//! analytic cycle classes, and the quartic verdicts.
//!
//! A real surface in `P³(ℝ)` with hyperplane class `l` is contractible to
//! a point exactly when `l ∈ (1 − σ)L`. Three shortcut rules predict that
//! it is not; each is evaluated separately and must agree with the direct
//! membership test.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::constructions::polarization_k0;
use crate::error::{Error, Result};
use crate::involution::Involution;
use crate::json::{int, opt_int_vec};
use crate::linalg::{unimodular_completion, vec_content, vec_is_zero, IntMatrix, IntVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Contractible,
    NotContractible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Rule {
    /// `l²` is odd.
    #[serde(rename = "odd_degree")]
    OddDegree,
    /// `λ = 0` and `l` is not 2-divisible.
    #[serde(rename = "M_surface")]
    MSurface,
    /// `λ = 1`, `l² ≡ 0 (mod 4)` and `l` is not 2-divisible, on a unimodular lattice.
    #[serde(rename = "M1_mod4")]
    M1Mod4,
    #[serde(rename = "direct_test")]
    DirectTest,
}

/// The basis shape `(…, e, σe, f₁, …)` behind the `λ = 1` rule: `v = e − σe`
/// together with `2L(1)^G` spans `(1 − σ)L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisCheck {
    /// Index of the standard basis vector used as `e`.
    pub e: usize,
    #[serde(with = "int")]
    pub v_norm: BigInt,
    /// `det Q|L(1)^G ≡ v² · det Q|F (mod 4)` for a complement `F` of `v`.
    pub determinant_congruence: bool,
    pub v_norm_nonzero_mod4: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractibilityReport {
    #[serde(with = "int")]
    pub degree: BigInt,
    #[serde(with = "opt_int_vec")]
    pub membership: Option<IntVector>,
    pub verdict: Verdict,
    /// Shortcut rules that fired, followed by `direct_test`.
    pub fired_rules: Vec<Rule>,
    pub two_divisible: bool,
    /// `|det Q|L(1)^G|` for `λ = 1`.
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_int")]
    pub anti_invariant_determinant: Option<BigInt>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis_check: Option<BasisCheck>,
}

mod opt_int {
    use num_bigint::BigInt;
    use serde::{Serialize, Serializer};

    use crate::json::JsonInt;

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        v.clone().map(JsonInt).serialize(s)
    }
}

/// `l = 2x` for some integer vector `x`.
pub fn is_two_divisible(l: &[BigInt]) -> bool {
    l.iter().all(|x| x.is_even())
}

pub fn contractibility(s: &Involution, l: &[BigInt]) -> Result<ContractibilityReport> {
    if l.len() != s.rank() {
        return Err(Error::DimensionMismatch {
            expected: s.rank(),
            got: l.len(),
        });
    }
    if vec_is_zero(l) {
        return Err(Error::InvalidObstructionInput("l = 0".into()));
    }
    if !s.is_anti_invariant(l) {
        return Err(Error::NotAntiInvariant);
    }
    let g = s.galois_invariants()?;
    let lattice = s.lattice();
    let degree = lattice.norm(l);
    let two_divisible = is_two_divisible(l);
    let unimodular = lattice.is_unimodular();

    let mut fired = Vec::new();
    if degree.is_odd() {
        fired.push(Rule::OddDegree);
    }
    if g.lambda == 0 && !two_divisible {
        fired.push(Rule::MSurface);
    }

    let mut anti_invariant_determinant = None;
    let mut basis_check = None;
    if g.lambda == 1 {
        let det = s.anti_invariant_sublattice().restricted_gram().determinant().abs();
        if unimodular && det != BigInt::from(2) {
            return Err(Error::InternalInconsistency(format!(
                "lambda = 1 on a unimodular lattice but |det Q| on L(1)^G is {det}"
            )));
        }
        anti_invariant_determinant = Some(det);
        basis_check = lambda_one_basis(s)?;
        if let Some(c) = &basis_check {
            if !c.determinant_congruence || (unimodular && !c.v_norm_nonzero_mod4) {
                return Err(Error::InternalInconsistency(format!(
                    "lambda = 1 basis check failed: {c:?}"
                )));
            }
        }
        if unimodular && degree.mod_floor(&BigInt::from(4)).is_zero() && !two_divisible {
            fired.push(Rule::M1Mod4);
        }
    }

    let membership = s.one_minus_sigma_preimage(l)?;
    if let Some(x) = &membership {
        if s.one_minus_sigma().mul_vec(x) != l {
            return Err(Error::InternalInconsistency(
                "membership witness does not map to l".into(),
            ));
        }
        if let Some(rule) = fired.first() {
            return Err(Error::InternalInconsistency(format!(
                "rule {rule:?} predicts non-contractibility but l ∈ (1 − σ)L"
            )));
        }
    }
    fired.push(Rule::DirectTest);
    let verdict = if membership.is_some() {
        Verdict::Contractible
    } else {
        Verdict::NotContractible
    };
    Ok(ContractibilityReport {
        degree,
        membership,
        verdict,
        fired_rules: fired,
        two_divisible,
        anti_invariant_determinant,
        basis_check,
    })
}

/// Looks for a standard basis vector `e` with `v = (1 − σ)e` odd and
/// primitive; for `λ = 1` such a `v` and `2L(1)^G` span `(1 − σ)L`.
fn lambda_one_basis(s: &Involution) -> Result<Option<BasisCheck>> {
    let oms = s.one_minus_sigma();
    let n_lat = s.anti_invariant_sublattice();
    let four = BigInt::from(4);
    for e in 0..s.rank() {
        let v = oms.col_vec(e);
        if v.iter().all(|x| x.is_even()) || !vec_content(&v).is_one() {
            continue;
        }
        let c = n_lat.coordinates(&v).ok_or_else(|| {
            Error::InternalInconsistency("(1 − σ)e is not anti-invariant".into())
        })?;
        let Some(rest) = unimodular_completion(&IntMatrix::from_rows(vec![c], n_lat.rank())) else {
            continue;
        };
        let f_basis = &rest * n_lat.basis();
        let det_f = f_basis.congruence(s.lattice().gram()).determinant();
        let det_n = n_lat.restricted_gram().determinant();
        let v_norm = s.lattice().norm(&v);
        let congruence = (&det_n - &v_norm * &det_f).mod_floor(&four).is_zero();
        return Ok(Some(BasisCheck {
            e,
            v_norm_nonzero_mod4: !v_norm.mod_floor(&four).is_zero(),
            v_norm,
            determinant_congruence: congruence,
        }));
    }
    Ok(None)
}

/// Upper bound for `h¹_an(X(ℝ))` on a K3 surface with invariants `(b, λ)`
/// and geometric genus `p_g`, clamped to `[0, h¹]`.
pub fn han_upper_bound(b: usize, lambda: usize, p_g: usize) -> usize {
    let (b, lambda, p_g) = (b as i64, lambda as i64, p_g as i64);
    let h1 = (22 - b - lambda).max(0);
    let from_rank = (22 - b) - p_g;
    let from_defect = h1 - (p_g - lambda);
    from_rank.min(from_defect).clamp(0, h1) as usize
}

/// `k₀ = 0` if `r(l) = 0`, else `1`.
pub fn k_zero(s: &Involution, l: &[BigInt]) -> Result<usize> {
    polarization_k0(s, l)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuarticReport {
    pub k0: usize,
    pub contractibility: ContractibilityReport,
    /// For `λ = 1`: whether `k₀ = 1` as forced for smooth quartics.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_one_forces_k0: Option<bool>,
    /// For `λ = 1, k₀ = 0`: the strict bound `h¹_alg < h¹` would apply, a
    /// combination no smooth quartic realizes.
    pub inconsistent_input: bool,
}

pub fn quartic_verdicts(s: &Involution, l: &[BigInt]) -> Result<QuarticReport> {
    if l.len() != s.rank() {
        return Err(Error::DimensionMismatch {
            expected: s.rank(),
            got: l.len(),
        });
    }
    let d = s.lattice().norm(l);
    if d != BigInt::from(4) {
        return Err(Error::InvalidObstructionInput(format!("quartics need l² = 4, got {d}")));
    }
    let k0 = k_zero(s, l)?;
    let report = contractibility(s, l)?;
    if (k0 == 0) != (report.verdict == Verdict::Contractible) {
        return Err(Error::InternalInconsistency(format!(
            "k0 = {k0} but verdict is {:?}",
            report.verdict
        )));
    }
    let lambda = s.galois_invariants()?.lambda;
    let lambda_one_forces_k0 = (lambda == 1).then_some(k0 == 1);
    Ok(QuarticReport {
        k0,
        contractibility: report,
        lambda_one_forces_k0,
        inconsistent_input: lambda == 1 && k0 == 0,
    })
}

/// Everything the obstruction command reports for one `(σ, l)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    #[serde(flatten)]
    pub contractibility: ContractibilityReport,
    /// Present when `l` is a valid polarization.
    pub k0: Option<usize>,
    /// Present for admissible involutions of the K3 lattice.
    pub han_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quartic: Option<QuarticReport>,
}

pub fn obstruction_report(s: &Involution, l: &[BigInt]) -> Result<ObstructionReport> {
    let contractibility = contractibility(s, l)?;
    let k0 = match k_zero(s, l) {
        Ok(k0) => Some(k0),
        Err(Error::PolarizationInvalid(_)) => None,
        Err(e) => return Err(e),
    };
    let han_bound = if s.lattice().is_k3() && s.k3_admissible()? {
        let g = s.galois_invariants()?;
        Some(han_upper_bound(g.b, g.lambda, 1))
    } else {
        None
    };
    let quartic = if k0.is_some() && contractibility.degree == BigInt::from(4) {
        Some(quartic_verdicts(s, l)?)
    } else {
        None
    };
    Ok(ObstructionReport {
        contractibility,
        k0,
        han_bound,
        quartic,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::lattice::Lattice;
    use crate::linalg::int_vector;
    use crate::real_types::catalog_entry;

    fn entry(name: &str) -> Involution {
        catalog_entry(name).unwrap().involution()
    }

    fn at(pairs: &[(usize, i64)]) -> IntVector {
        let mut v = vec![0i64; 22];
        for &(i, x) in pairs {
            v[i] = x;
        }
        int_vector(&v)
    }

    fn quadric() -> Involution {
        let u = Arc::new(Lattice::standard("U").unwrap());
        Involution::new(u, IntMatrix::from_i64_rows(&[vec![0, -1], vec![-1, 0]])).unwrap()
    }

    #[test]
    fn two_divisibility() {
        assert!(is_two_divisible(&int_vector(&[2, 0])));
        assert!(!is_two_divisible(&int_vector(&[1, 1])));
        assert!(is_two_divisible(&int_vector(&[2, 4])));
    }

    #[test]
    fn quadric_is_contractible() {
        let s = quadric();
        let l = int_vector(&[1, 1]);
        let r = contractibility(&s, &l).unwrap();
        assert_eq!(r.degree, BigInt::from(2));
        assert_eq!(r.verdict, Verdict::Contractible);
        let x = r.membership.unwrap();
        assert_eq!(s.one_minus_sigma().mul_vec(&x), l);
        assert_eq!(r.fired_rules, vec![Rule::DirectTest]);
        assert_eq!(r.anti_invariant_determinant, Some(BigInt::from(2)));
        let c = r.basis_check.unwrap();
        assert_eq!(c.v_norm, BigInt::from(2));
        assert!(c.v_norm_nonzero_mod4 && c.determinant_congruence);
    }

    #[test]
    fn maximal_entry_is_never_contractible() {
        let s = entry("max_M");
        let l = at(&[(2, 1), (3, 2)]);
        let r = contractibility(&s, &l).unwrap();
        assert_eq!(r.verdict, Verdict::NotContractible);
        assert_eq!(r.fired_rules, vec![Rule::MSurface, Rule::DirectTest]);
        let q = quartic_verdicts(&s, &l).unwrap();
        assert_eq!(q.k0, 1);
        // 2l lies in (1 − σ)L = 2L(1)^G.
        let twice = at(&[(2, 2), (3, 4)]);
        assert_eq!(contractibility(&s, &twice).unwrap().verdict, Verdict::Contractible);
    }

    #[test]
    fn odd_degree_rule() {
        let lat = Arc::new(
            Lattice::standard("U").unwrap().direct_sum(&Lattice::standard("<1>").unwrap()),
        );
        let s = Involution::new(lat, IntMatrix::identity(3).neg()).unwrap();
        let l = int_vector(&[1, 1, 1]);
        let r = contractibility(&s, &l).unwrap();
        assert_eq!(r.degree, BigInt::from(3));
        assert_eq!(r.fired_rules, vec![Rule::OddDegree, Rule::MSurface, Rule::DirectTest]);
        assert_eq!(r.verdict, Verdict::NotContractible);
    }

    #[test]
    fn lambda_one_entry() {
        let s = entry("m_minus_one");
        assert_eq!(s.galois_invariants().unwrap().lambda, 1);
        let l = at(&[(2, 1), (3, 2)]);
        let q = quartic_verdicts(&s, &l).unwrap();
        assert_eq!(q.k0, 1);
        assert_eq!(q.lambda_one_forces_k0, Some(true));
        assert!(!q.inconsistent_input);
        assert!(q.contractibility.fired_rules.contains(&Rule::M1Mod4));
        assert_eq!(q.contractibility.anti_invariant_determinant, Some(BigInt::from(2)));

        // l = (1 − σ)(e1 + a2 + b2) has trivial class.
        let l0 = at(&[(0, 1), (1, -1), (2, 2), (3, 2)]);
        assert_eq!(k_zero(&s, &l0).unwrap(), 0);
        assert_eq!(contractibility(&s, &l0).unwrap().verdict, Verdict::Contractible);
        assert!(matches!(
            quartic_verdicts(&s, &l0),
            Err(Error::InvalidObstructionInput(_))
        ));
        assert!(matches!(
            k_zero(&s, &at(&[(2, 2), (3, 2)])),
            Err(Error::PolarizationInvalid(_))
        ));
    }

    #[test]
    fn sphere_quartic_is_contractible() {
        let s = entry("sphere");
        let l = at(&[(2, 1), (3, 1), (4, 1), (5, 1)]);
        let q = quartic_verdicts(&s, &l).unwrap();
        assert_eq!(q.k0, 0);
        assert_eq!(q.contractibility.verdict, Verdict::Contractible);
        let report = obstruction_report(&s, &l).unwrap();
        assert_eq!(report.han_bound, Some(0));
        assert_eq!(report.k0, Some(0));
    }

    #[test]
    fn bad_inputs() {
        let s = entry("max_M");
        assert_eq!(
            contractibility(&s, &at(&[(0, 1)])).unwrap_err(),
            Error::NotAntiInvariant
        );
        assert!(matches!(
            contractibility(&s, &at(&[])),
            Err(Error::InvalidObstructionInput(_))
        ));
    }

    #[test]
    fn cycle_bounds() {
        assert_eq!(han_upper_bound(2, 0, 1), 19);
        assert_eq!(han_upper_bound(11, 11, 1), 0);
        assert_eq!(han_upper_bound(10, 8, 1), 4);
        for (b, l) in crate::real_types::diagram_pairs() {
            let h1 = 22 - b - l;
            let bound = han_upper_bound(b, l, 1);
            assert!(bound <= h1);
            if l < 1 {
                assert!(bound < h1);
            }
        }
    }
}
