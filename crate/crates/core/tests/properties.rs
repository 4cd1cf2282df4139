mod common;

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use k3real::blocks::{self, random_unimodular};
use k3real::constructions::{nondegenerate_shift_traced, witness_rank_k};
use k3real::json;
use k3real::lattice::Sublattice;
use k3real::linalg::{
    inertia, mod2_rank, rational_rank, smith_decomposition, solve_integer, IntMatrix, IntVector,
};
use k3real::moduli::dim_omega_k;
use k3real::real_types::{catalog, catalog_entry};

use common::{random_nondegenerate, random_primitive};

fn small_matrix(max_dim: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-9i64..=9, c), r)
            .prop_map(|rows| IntMatrix::from_i64_rows(&rows))
    })
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn smith_form_is_a_valid_factorization(m in small_matrix(5)) {
        let s = smith_decomposition(&m);
        prop_assert_eq!(&(&s.u * &m) * &s.v, s.d.clone());
        prop_assert!(s.u.determinant().abs() == BigInt::from(1));
        prop_assert!(s.v.determinant().abs() == BigInt::from(1));
        let divs = s.divisors();
        for w in divs.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
        prop_assert_eq!(divs.len(), rational_rank(&m));
        if let Some(first) = divs.first() {
            prop_assert_eq!(first.clone(), m.content());
        }
        prop_assert!(mod2_rank(&m) <= divs.len());
    }

    #[test]
    fn integer_solutions_are_found(m in small_matrix(4), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = common::random_vector(&mut rng, m.cols(), 4);
        let b = m.mul_vec(&x);
        let y = solve_integer(&m, &b);
        prop_assert!(y.is_some());
        prop_assert_eq!(m.mul_vec(&y.unwrap()), b);
    }

    #[test]
    fn inertia_is_a_congruence_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lat = random_nondegenerate(&mut rng, 8, 0).lattice;
        let n = lat.rank();
        let (p, _) = random_unimodular(&mut rng, n, 2 * n);
        let moved = p.transpose().congruence(lat.gram());
        let i = inertia(lat.gram());
        prop_assert_eq!(inertia(&moved), i);
        prop_assert_eq!(i.dim(), n);
        prop_assert!(i.is_nondegenerate());
    }

    #[test]
    fn saturation_and_complements(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lat = Arc::new(random_nondegenerate(&mut rng, 7, 0).lattice);
        let n = lat.rank();
        let rows: Vec<IntVector> = (0..1 + seed as usize % n)
            .map(|_| common::random_vector(&mut rng, n, 3).into_iter().map(|x| x * 2).collect())
            .collect();
        let span = Sublattice::span(lat.clone(), &IntMatrix::from_rows(rows, n)).unwrap();
        prop_assume!(span.rank() > 0);
        let sat = span.saturation();
        prop_assert!(sat.is_primitive());
        prop_assert!(sat.contains(&span));
        prop_assert!(sat.saturation().same_module(&sat));
        let perp = sat.orthogonal_complement();
        prop_assert!(perp.is_primitive());
        prop_assert_eq!(perp.rank() + sat.rank(), n);
        prop_assert!(perp.orthogonal_complement().same_module(&sat));
    }

    #[test]
    fn nondegenerate_sublattices_are_left_alone(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lat = Arc::new(random_nondegenerate(&mut rng, 8, 0).lattice);
        let m = random_primitive(&mut rng, &lat);
        prop_assume!(m.as_ref().is_some_and(|m| m.as_lattice().is_nondegenerate()));
        let m = m.unwrap();
        let t = nondegenerate_shift_traced(&m).unwrap();
        prop_assert!(t.steps.is_empty());
        prop_assert!(t.result.same_module(&m));
    }

    #[test]
    fn block_invariants_survive_conjugation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bl = blocks::random_blocks(&mut rng, 22);
        let s = blocks::build(&bl).unwrap();
        let n = s.rank();
        let (p, p_inv) = random_unimodular(&mut rng, n, 2 * n);
        let t = blocks::conjugate(&s, &p, &p_inv).unwrap();
        let g = s.galois_invariants().unwrap();
        prop_assert_eq!(t.galois_invariants().unwrap(), g);
        prop_assert_eq!((g.b, g.lambda), blocks::expected(&bl));
        prop_assert_eq!(g.h1_dim, n - g.b - g.lambda);
        prop_assert_eq!(g.h2_dim, g.b - g.lambda);
    }

    #[test]
    fn integer_vectors_round_trip_through_json(v in prop::collection::vec(any::<i64>(), 0..6), shift in 0u32..80) {
        let big: IntVector = v.iter().map(|&x| BigInt::from(x) << shift).collect();
        let text = serde_json::to_string(
            &big.iter().cloned().map(json::JsonInt).collect::<Vec<_>>(),
        ).unwrap();
        prop_assert_eq!(json::parse_vector(&text).unwrap(), big);
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn moduli_strata_drop_by_one(idx in 0usize..9, k in 0usize..22) {
        let cat = catalog();
        let s = cat[idx % cat.len()].involution();
        if let (Some(a), Some(b)) = (dim_omega_k(&s, k).unwrap(), dim_omega_k(&s, k + 1).unwrap()) {
            prop_assert_eq!(a - b, 1);
        }
    }

    #[test]
    fn witnesses_lie_in_defined_strata(k in 0usize..20) {
        let s = catalog_entry("max_M").unwrap().involution();
        let c = witness_rank_k(&s, k, 3).unwrap();
        prop_assert!(c.checks.passed());
        prop_assert!(dim_omega_k(&s, k).unwrap().is_some());
        let y_sq = s.lattice().norm(&c.y);
        prop_assert!(y_sq.is_positive());
    }
}
