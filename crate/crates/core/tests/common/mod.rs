#![allow(dead_code)]

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;

use k3real::blocks::{self, random_unimodular};
use k3real::involution::Involution;
use k3real::lattice::{Lattice, Sublattice};
use k3real::linalg::{int_vector, IntMatrix, IntVector};

/// A random non-degenerate lattice built from `U` and `<n>` summands and
/// mixed by a random unimodular change of basis.
pub struct RandomLattice {
    pub lattice: Lattice,
    /// The first basis vector of every `U` summand, mutually orthogonal and
    /// isotropic.
    pub isotropic: Vec<IntVector>,
}

/// At most `max_rank`, starting with `min_u` copies of `U`.
pub fn random_nondegenerate<R: Rng>(rng: &mut R, max_rank: usize, min_u: usize) -> RandomLattice {
    let mut lat = Lattice::new(IntMatrix::zeros(0, 0), None).unwrap();
    let mut u_starts = Vec::new();
    while lat.rank() < max_rank {
        let room = max_rank - lat.rank();
        let part = if room >= 2 && (u_starts.len() < min_u || rng.gen_bool(0.4)) {
            u_starts.push(lat.rank());
            Lattice::standard("U").unwrap()
        } else {
            let mut n = rng.gen_range(-6i64..=5);
            if n >= 0 {
                n += 1;
            }
            Lattice::standard(&format!("<{n}>")).unwrap()
        };
        lat = lat.direct_sum(&part);
        if lat.rank() >= 2 && u_starts.len() >= min_u && rng.gen_bool(0.3) {
            break;
        }
    }
    let n = lat.rank();
    let (p, p_inv) = random_unimodular(rng, n, 3 * n);
    let lattice = Lattice::new(p.transpose().congruence(lat.gram()), None).unwrap();
    let isotropic = u_starts
        .iter()
        .map(|&i| {
            let e: IntVector = (0..n).map(|j| BigInt::from(u8::from(i == j))).collect();
            p_inv.mul_vec(&e)
        })
        .collect();
    RandomLattice { lattice, isotropic }
}

pub fn random_vector<R: Rng>(rng: &mut R, n: usize, bound: i64) -> IntVector {
    (0..n).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect()
}

/// Saturation of the span of `k` random vectors; `None` if they span zero.
pub fn random_primitive<R: Rng>(rng: &mut R, lat: &Arc<Lattice>) -> Option<Sublattice> {
    let n = lat.rank();
    let k = rng.gen_range(1..=n);
    let rows: Vec<IntVector> = (0..k).map(|_| random_vector(rng, n, 3)).collect();
    let span = Sublattice::span(lat.clone(), &IntMatrix::from_rows(rows, n)).ok()?;
    (span.rank() > 0).then(|| span.saturation())
}

/// A primitive sublattice whose radical contains the given mutually
/// orthogonal isotropic vectors: their span plus random vectors of its
/// orthogonal complement, saturated.
pub fn random_degenerate<R: Rng>(
    rng: &mut R,
    lat: &Arc<Lattice>,
    isotropic: &[IntVector],
) -> Sublattice {
    let n = lat.rank();
    let iso = IntMatrix::from_rows(isotropic.to_vec(), n);
    let perp = Sublattice::span(lat.clone(), &iso).unwrap().orthogonal_complement();
    let mut rows = isotropic.to_vec();
    for _ in 0..rng.gen_range(0..=perp.rank()) {
        let c = random_vector(rng, perp.rank(), 2);
        rows.push(perp.embed_vector(&c));
    }
    Sublattice::span(lat.clone(), &IntMatrix::from_rows(rows, n))
        .unwrap()
        .saturation()
}

pub fn k3_vector(pairs: &[(usize, i64)]) -> IntVector {
    let mut v = vec![0i64; 22];
    for &(i, x) in pairs {
        v[i] = x;
    }
    int_vector(&v)
}

/// Random anti-invariant vectors with small sparse coordinates in a basis
/// of `L(1)^G`.
pub fn random_anti_invariant<R: Rng>(rng: &mut R, s: &Involution, support: usize) -> IntVector {
    let anti = s.anti_invariant_sublattice();
    let r = anti.rank();
    let mut c = vec![BigInt::zero(); r];
    for _ in 0..support.min(r) {
        c[rng.gen_range(0..r)] += rng.gen_range(-2i64..=2);
    }
    anti.embed_vector(&c)
}

pub fn block_involution<R: Rng>(rng: &mut R) -> (Vec<blocks::Block>, Involution) {
    blocks::random_involution(rng, 22).unwrap()
}
