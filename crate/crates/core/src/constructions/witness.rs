//! Witness sublattices `M ⊂ L(1)^G` together with a positive vector
//! `y ∈ M⊥`, certifying deformations with prescribed cycle classes.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::decompose::{decompose_anti_invariant, AntiLattice};
use super::shift::{hyperbolic_signature_shift, nondegenerate_shift, rank_one_signature_shift};
use super::verify::{verify_certificate, CertificateChecks};
use crate::error::{Error, Result};
use crate::involution::{is_zero_class, GaloisInvariants, Involution};
use crate::lattice::Sublattice;
use crate::linalg::{
    inertia, positive_vector, unimodular_completion, vec_content, F2Span, IntMatrix, IntVector,
};

#[derive(Clone, Debug)]
pub struct WitnessCertificate {
    /// `M`, in the coordinates of `L`.
    pub m: Sublattice,
    /// A vector of `M⊥ ∩ L(1)^G` with `y² > 0`.
    pub y: IntVector,
    pub r_image_dim: usize,
    /// Polarization and its `k₀`, for polarized witnesses.
    pub polarization: Option<(IntVector, usize)>,
    pub checks: CertificateChecks,
}

/// Witness of rank `t = dim H¹(G, L)` with `r(M) = H¹(G, L)`.
pub fn witness_full(s: &Involution, search_bound: usize) -> Result<WitnessCertificate> {
    let g = s.require_admissible()?;
    if g.lambda == 0 {
        return Err(Error::MSurfaceExcluded);
    }
    build_witness(s, g.h1_dim, search_bound)
}

/// Witness of rank `k` with `dim r(M) = k`.
pub fn witness_rank_k(s: &Involution, k: usize, search_bound: usize) -> Result<WitnessCertificate> {
    let g = s.require_admissible()?;
    check_unpolarized_range(&g, k)?;
    build_witness(s, k, search_bound)
}

pub(crate) fn check_unpolarized_range(g: &GaloisInvariants, k: usize) -> Result<()> {
    let t = g.h1_dim;
    if g.lambda == 0 && k >= t {
        return Err(Error::RangeViolation {
            k,
            reason: format!("M-surfaces need k < h1 = {t}"),
        });
    }
    if k > t {
        return Err(Error::RangeViolation {
            k,
            reason: format!("k must not exceed h1 = {t}"),
        });
    }
    Ok(())
}

/// Checks the polarization conditions and returns `k₀`.
pub fn polarization_k0(s: &Involution, l: &[BigInt]) -> Result<usize> {
    if l.len() != s.rank() {
        return Err(Error::PolarizationInvalid(format!(
            "expected {} coordinates, got {}",
            s.rank(),
            l.len()
        )));
    }
    if !s.is_anti_invariant(l) {
        return Err(Error::PolarizationInvalid("l is not anti-invariant".into()));
    }
    if !vec_content(l).is_one() {
        return Err(Error::PolarizationInvalid("l is not primitive".into()));
    }
    if !s.lattice().norm(l).is_positive() {
        return Err(Error::PolarizationInvalid("l² must be positive".into()));
    }
    Ok(usize::from(!is_zero_class(&s.r_map(l)?)))
}

/// The admissible range `k₀ ≤ k ≤ t`, with strict upper bound for
/// M-surfaces and for `λ = 1, k₀ = 0`.
pub(crate) fn check_polarized_range(g: &GaloisInvariants, k0: usize, k: usize) -> Result<()> {
    let t = g.h1_dim;
    if k < k0 {
        return Err(Error::RangeViolation {
            k,
            reason: format!("k must be at least k0 = {k0}"),
        });
    }
    let strict = g.lambda == 0 || (g.lambda == 1 && k0 == 0);
    if strict && k >= t {
        return Err(Error::RangeViolation {
            k,
            reason: format!("k < h1 = {t} is required here (lambda = {}, k0 = {k0})", g.lambda),
        });
    }
    if k > t {
        return Err(Error::RangeViolation {
            k,
            reason: format!("k must not exceed h1 = {t}"),
        });
    }
    Ok(())
}

pub fn witness_polarized(
    s: &Involution,
    l: &[BigInt],
    k: usize,
    search_bound: usize,
) -> Result<WitnessCertificate> {
    let g = s.require_admissible()?;
    let k0 = polarization_k0(s, l)?;
    check_polarized_range(&g, k0, k)?;
    let ctx = AntiLattice::new(s);
    let lc = ctx
        .anti
        .coordinates(l)
        .ok_or_else(|| Error::InternalInconsistency("l outside L(1)^G".into()))?;
    let n = ctx.lattice.rank();

    let mut span = F2Span::new();
    let pool = if k == 0 {
        IntMatrix::zeros(0, n)
    } else if k0 == 1 {
        span.insert(&r_class(s, &ctx, &lc)?);
        let row = IntMatrix::from_rows(vec![lc.clone()], n);
        unimodular_completion(&row)
            .ok_or_else(|| Error::InternalInconsistency("l is not primitive in L(1)^G".into()))?
    } else {
        // Basis of L(1)^G listing the hyperbolic planes of a splitting first.
        let decomposition = decompose_anti_invariant(s, search_bound)?;
        let planes: Vec<IntVector> = decomposition
            .local_planes
            .iter()
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect();
        if planes.is_empty() {
            IntMatrix::identity(n)
        } else {
            let rows = IntMatrix::from_rows(planes, n);
            rows.vstack(ctx.sub(rows.clone()).orthogonal_complement().basis())
        }
    };
    let chosen = pick_independent(s, &ctx, &pool, &mut span, k - k0)?;

    let mut r_rows = if chosen.is_empty() {
        Vec::new()
    } else {
        let r = ctx.sub(IntMatrix::from_rows(chosen, n));
        nondegenerate_shift(&r)?.vectors()
    };
    // Push R to be negative definite one positive direction at a time.
    loop {
        if r_rows.is_empty() {
            break;
        }
        let gens = IntMatrix::from_rows(r_rows.clone(), n);
        let inr = inertia(&gens.congruence(ctx.lattice.gram()));
        if inr.n_zero != 0 {
            return Err(Error::InternalInconsistency("R became degenerate".into()));
        }
        if inr.n_pos == 0 {
            break;
        }
        let gamma = negative_vector(&ctx, &ctx.sub(gens.clone()))?;
        r_rows = rank_one_signature_shift(&ctx.lattice, &gens, &gamma)?.to_rows();
    }

    let mut gens = Vec::new();
    if k0 == 1 {
        gens.push(lc.clone());
    }
    gens.extend(r_rows);
    let m_local = ctx.sub(IntMatrix::from_rows(gens.clone(), n)).saturation();
    let mut with_l = gens;
    with_l.push(lc);
    let constraint = ctx.sub(IntMatrix::from_rows(with_l, n));
    finish(s, &ctx, m_local, &constraint, k, Some((l.to_vec(), k0)))
}

fn r_class(s: &Involution, ctx: &AntiLattice, c: &[BigInt]) -> Result<Vec<bool>> {
    s.r_map(&ctx.to_ambient(c))
}

/// Greedily takes rows of `pool` whose classes extend `span`.
fn pick_independent(
    s: &Involution,
    ctx: &AntiLattice,
    pool: &IntMatrix,
    span: &mut F2Span,
    count: usize,
) -> Result<Vec<IntVector>> {
    let mut out = Vec::new();
    for row in pool.to_rows() {
        if out.len() == count {
            break;
        }
        if span.insert(&r_class(s, ctx, &row)?) {
            out.push(row);
        }
    }
    if out.len() < count {
        return Err(Error::InternalInconsistency(
            "r does not reach the required rank".into(),
        ));
    }
    Ok(out)
}

/// A vector of negative square orthogonal to `m` (local coordinates).
fn negative_vector(ctx: &AntiLattice, m: &Sublattice) -> Result<IntVector> {
    let perp = m.orthogonal_complement();
    if let Some(v) = perp.vectors().into_iter().find(|v| ctx.lattice.norm(v).is_negative()) {
        return Ok(v);
    }
    let c = positive_vector(&perp.restricted_gram().neg()).ok_or_else(|| {
        Error::InternalInconsistency("no negative direction orthogonal to M".into())
    })?;
    Ok(perp.embed_vector(&c))
}

fn build_witness(s: &Involution, k: usize, search_bound: usize) -> Result<WitnessCertificate> {
    let ctx = AntiLattice::new(s);
    let n = ctx.lattice.rank();
    if k == 0 {
        let empty = ctx.sub(IntMatrix::zeros(0, n));
        return finish(s, &ctx, empty.clone(), &empty, 0, None);
    }
    let decomposition = decompose_anti_invariant(s, search_bound)?;

    // Whole planes first, as long as their classes stay independent.
    let mut span = F2Span::new();
    let mut planes = Vec::new();
    for (a, b) in &decomposition.local_planes {
        if 2 * (planes.len() + 1) > k {
            break;
        }
        let mut trial = span.clone();
        if trial.insert(&r_class(s, &ctx, a)?) && trial.insert(&r_class(s, &ctx, b)?) {
            span = trial;
            planes.push((a.clone(), b.clone()));
        }
    }
    let plane_rows: Vec<IntVector> = planes.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect();
    let pool = if plane_rows.is_empty() {
        ctx.sub(IntMatrix::identity(n))
    } else {
        ctx.sub(IntMatrix::from_rows(plane_rows, n)).orthogonal_complement()
    };
    let chosen = pick_independent(s, &ctx, &pool.basis().clone(), &mut span, k - 2 * planes.len())?;

    // Non-degenerate shift of the rest, inside the complement of the planes.
    let mut rest: Vec<IntVector> = Vec::new();
    if !chosen.is_empty() {
        let pool_lattice = std::sync::Arc::new(pool.as_lattice());
        let coords: Vec<IntVector> = chosen
            .iter()
            .map(|v| pool.coordinates(v).expect("chosen from the pool basis"))
            .collect();
        let inner = Sublattice::from_basis_unchecked(
            pool_lattice,
            IntMatrix::from_rows(coords, pool.rank()),
        );
        rest = nondegenerate_shift(&inner)?
            .vectors()
            .iter()
            .map(|c| pool.embed_vector(c))
            .collect();
    }

    // Lower the positive index to at most one.
    loop {
        let mut gens: Vec<IntVector> = planes.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect();
        gens.extend(rest.iter().cloned());
        let gens = IntMatrix::from_rows(gens, n);
        let inm = inertia(&gens.congruence(ctx.lattice.gram()));
        if inm.n_zero != 0 {
            return Err(Error::InternalInconsistency("witness form became degenerate".into()));
        }
        if inm.n_pos <= 1 {
            break;
        }
        let gamma = negative_vector(&ctx, &ctx.sub(gens.clone()))?;
        if let Some((a, b)) = planes.pop() {
            let mut others: Vec<IntVector> =
                planes.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect();
            others.extend(rest.iter().cloned());
            let shifted = hyperbolic_signature_shift(&ctx.lattice, &a, &b, &others, &gamma)?;
            rest.push(shifted.alpha);
            rest.push(shifted.beta);
        } else {
            rest = rank_one_signature_shift(&ctx.lattice, &gens, &gamma)?.to_rows();
        }
    }
    let mut gens: Vec<IntVector> = planes.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect();
    gens.extend(rest);
    let m_local = ctx.sub(IntMatrix::from_rows(gens, n)).saturation();
    finish(s, &ctx, m_local.clone(), &m_local, k, None)
}

/// Picks `y` in the complement of `constraint`, maps everything to `L`, and
/// runs the independent verifier.
fn finish(
    s: &Involution,
    ctx: &AntiLattice,
    m_local: Sublattice,
    constraint: &Sublattice,
    k: usize,
    polarization: Option<(IntVector, usize)>,
) -> Result<WitnessCertificate> {
    if m_local.rank() != k {
        return Err(Error::InternalInconsistency(format!(
            "witness has rank {} instead of {k}",
            m_local.rank()
        )));
    }
    let perp = constraint.orthogonal_complement();
    let c = positive_vector(&perp.restricted_gram()).ok_or_else(|| {
        Error::InternalInconsistency("no positive vector orthogonal to the witness".into())
    })?;
    let y = ctx.to_ambient(&perp.embed_vector(&c));
    let m = ctx.anti.embed(&m_local);

    let mut classes = F2Span::new();
    let mut r_image_dim = 0;
    for v in m.vectors() {
        if classes.insert(&s.r_map(&v)?) {
            r_image_dim += 1;
        }
    }
    let l = polarization.as_ref().map(|(l, _)| l.as_slice());
    let l_class = matches!(polarization, Some((_, 1)));
    let checks = verify_certificate(
        s.lattice().gram(),
        s.matrix(),
        m.basis(),
        &y,
        r_image_dim,
        l,
        l_class,
    );
    if !checks.passed() || r_image_dim != k {
        return Err(Error::InternalInconsistency(format!(
            "constructed witness failed verification: {checks:?}"
        )));
    }
    debug_assert!(!y.iter().all(Zero::is_zero));
    Ok(WitnessCertificate {
        m,
        y,
        r_image_dim,
        polarization,
        checks,
    })
}

/// Number of rank-`k` witnesses obtained as coordinate sub-bases of a
/// full-rank witness: `C(rank M, k)`. A lower bound on the witness count.
pub fn witness_count_lower_bound(full_rank: usize, k: usize) -> BigInt {
    if k > full_rank {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(full_rank - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vector;
    use crate::real_types::catalog_entry;

    fn entry(name: &str) -> Involution {
        catalog_entry(name).unwrap().involution()
    }

    #[test]
    fn sphere_has_empty_full_witness() {
        let w = witness_full(&entry("sphere"), 3).unwrap();
        assert_eq!(w.m.rank(), 0);
        assert!(w.checks.y_positive);
    }

    #[test]
    fn two_tori_full_witness() {
        let w = witness_full(&entry("two_tori_ambiguous"), 3).unwrap();
        assert_eq!(w.m.rank(), 4);
        assert_eq!(w.r_image_dim, 4);
        assert!(w.checks.passed());
    }

    #[test]
    fn maximal_entry_ranges() {
        let s = entry("max_M");
        assert_eq!(witness_full(&s, 3).unwrap_err(), Error::MSurfaceExcluded);
        let w = witness_rank_k(&s, 19, 3).unwrap();
        assert_eq!((w.m.rank(), w.r_image_dim), (19, 19));
        assert!(matches!(witness_rank_k(&s, 20, 3), Err(Error::RangeViolation { .. })));
        assert_eq!(witness_rank_k(&s, 0, 3).unwrap().m.rank(), 0);
        assert_eq!(witness_rank_k(&s, 2, 0).unwrap_err(), Error::SearchExhausted { bound: 0 });
    }

    #[test]
    fn polarized_on_maximal_entry() {
        let s = entry("max_M");
        // a₂ + 2b₂ in the second hyperbolic summand.
        let mut l = vec![0i64; 22];
        l[2] = 1;
        l[3] = 2;
        let l = int_vector(&l);
        assert_eq!(polarization_k0(&s, &l).unwrap(), 1);
        let w = witness_polarized(&s, &l, 1, 3).unwrap();
        assert_eq!(w.m.rank(), 1);
        assert_eq!(w.checks.l_class_in_image, Some(true));
        assert_eq!(w.checks.y_orthogonal_to_l, Some(true));
        assert!(matches!(witness_polarized(&s, &l, 0, 3), Err(Error::RangeViolation { .. })));
        assert!(matches!(witness_polarized(&s, &l, 20, 3), Err(Error::RangeViolation { .. })));
        let w = witness_polarized(&s, &l, 19, 3).unwrap();
        assert_eq!(w.r_image_dim, 19);
    }

    #[test]
    fn counts() {
        assert_eq!(witness_count_lower_bound(4, 2), BigInt::from(6));
        assert_eq!(witness_count_lower_bound(4, 0), BigInt::from(1));
        assert_eq!(witness_count_lower_bound(2, 3), BigInt::from(0));
    }
}
