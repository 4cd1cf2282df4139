//! Topology of the real locus of a real K3 surface from `(b, λ)`, and a
//! catalog of explicit admissible involutions of the K3 lattice.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::blocks::{self, Block};
use crate::error::{Error, Result};
use crate::involution::{GaloisInvariants, Involution};

/// Invariants of `X(ℝ)` for a nonempty real locus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealK3Invariants {
    pub num_components: usize,
    pub h1: usize,
    pub h_star: usize,
    pub chi: i64,
    pub m_defect: usize,
}

pub fn real_invariants(b: usize, lambda: usize) -> Result<RealK3Invariants> {
    if !(b + lambda).is_multiple_of(2) {
        return Err(Error::InvalidRealInvariants(format!(
            "b + lambda = {} is odd, so h1 would be odd",
            b + lambda
        )));
    }
    if lambda > b {
        return Err(Error::InvalidRealInvariants(format!(
            "lambda = {lambda} exceeds b = {b}"
        )));
    }
    if b + lambda > 22 {
        return Err(Error::InvalidRealInvariants(format!(
            "b + lambda = {} exceeds 22",
            b + lambda
        )));
    }
    let inv = RealK3Invariants {
        num_components: (2 + b - lambda) / 2,
        h1: 22 - b - lambda,
        h_star: 24 - 2 * lambda,
        chi: 2 * b as i64 - 20,
        m_defect: lambda,
    };
    debug_assert_eq!(inv.h_star, 2 * inv.num_components + inv.h1);
    debug_assert_eq!(inv.chi, 2 * inv.num_components as i64 - inv.h1 as i64);
    Ok(inv)
}

/// One candidate topology of `X(ℝ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TopologicalType {
    /// One orientable surface of genus `genus` and `spheres` extra spheres.
    Surface { genus: usize, spheres: usize },
    TwoTori,
    Empty,
}

impl TopologicalType {
    /// `(h*, χ)` of the described surface.
    pub fn betti_data(&self) -> (usize, i64) {
        match *self {
            TopologicalType::Surface { genus, spheres } => {
                let comps = 1 + spheres;
                (2 * comps + 2 * genus, 2 * comps as i64 - 2 * genus as i64)
            }
            TopologicalType::TwoTori => (8, 0),
            TopologicalType::Empty => (0, 0),
        }
    }
}

impl fmt::Display for TopologicalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            TopologicalType::Surface { genus: 0, spheres: 0 } => write!(f, "sphere"),
            TopologicalType::Surface { genus, spheres: 0 } => write!(f, "genus {genus}"),
            TopologicalType::Surface { genus, spheres } => {
                write!(f, "genus {genus} + {spheres} spheres")
            }
            TopologicalType::TwoTori => write!(f, "two tori"),
            TopologicalType::Empty => write!(f, "empty"),
        }
    }
}

pub fn topological_types(inv: &RealK3Invariants) -> Result<Vec<TopologicalType>> {
    if inv.num_components == 0 {
        if inv.h1 != 0 {
            return Err(Error::InvalidRealInvariants(
                "no components but h1 is nonzero".into(),
            ));
        }
        return Ok(vec![TopologicalType::Empty]);
    }
    if !inv.h1.is_multiple_of(2) {
        return Err(Error::InvalidRealInvariants(format!("h1 = {} is odd", inv.h1)));
    }
    let mut out = vec![TopologicalType::Surface {
        genus: inv.h1 / 2,
        spheres: inv.num_components - 1,
    }];
    if inv.num_components == 2 && inv.h1 == 4 {
        out.push(TopologicalType::TwoTori);
    }
    Ok(out)
}

/// Necessary conditions on `(b, λ)` for an admissible real K3 surface with
/// nonempty real part.
pub fn diagram_constraints(b: usize, lambda: usize) -> bool {
    (1..=20).contains(&b) && lambda <= b.min(22 - b) && (b + lambda).is_multiple_of(2)
}

/// All pairs passing [`diagram_constraints`], in lexicographic order.
pub fn diagram_pairs() -> Vec<(usize, usize)> {
    (1..=20)
        .flat_map(|b| (0..=22).map(move |l| (b, l)))
        .filter(|&(b, l)| diagram_constraints(b, l))
        .collect()
}

/// The number of cases in the published diagram of realizable pairs.
pub const PUBLISHED_CASE_COUNT: usize = 64;

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub blocks: Vec<Block>,
    pub expected: (usize, usize),
}

impl CatalogEntry {
    pub fn involution(&self) -> Involution {
        blocks::build(&self.blocks).expect("catalog entries are valid involutions")
    }

    /// Expected `(b, λ, dim H¹, dim H²)` on the rank-22 lattice.
    pub fn expected_invariants(&self) -> GaloisInvariants {
        let (b, lambda) = self.expected;
        GaloisInvariants {
            b,
            lambda,
            h1_dim: 22 - b - lambda,
            h2_dim: b - lambda,
        }
    }
}

/// Named admissible involutions on `U ⊕ U ⊕ U ⊕ E8(−1) ⊕ E8(−1)`.
pub fn catalog() -> Vec<CatalogEntry> {
    use Block::*;
    let entry = |name, blocks: Vec<Block>| {
        let expected = blocks::expected(&blocks);
        CatalogEntry {
            name,
            blocks,
            expected,
        }
    };
    vec![
        entry("max_M", vec![UIdentity, UNegate, UNegate, E8Negate, E8Negate]),
        entry("sphere", vec![USwap, UNegSwap, UNegSwap, E8Exchange]),
        entry("two_tori_ambiguous", vec![UIdentity, UNegate, UNegate, E8Exchange]),
        entry("m_minus_one", vec![USwap, UNegate, UNegate, E8Negate, E8Negate]),
        entry("half_e8", vec![UIdentity, UNegate, UNegate, E8Identity, E8Negate]),
        entry("full_e8", vec![UIdentity, UNegate, UNegate, E8Identity, E8Identity]),
        entry("two_swaps", vec![USwap, UNegSwap, UNegate, E8Negate, E8Negate]),
        entry("twelve_ten", vec![UIdentity, UNegSwap, UNegSwap, E8Exchange]),
        entry("seventeen_one", vec![USwap, UNegate, UNegate, E8Identity, E8Identity]),
    ]
}

pub fn catalog_entry(name: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_from_pairs() {
        let s = real_invariants(11, 11).unwrap();
        assert_eq!((s.num_components, s.h1, s.h_star, s.chi), (1, 0, 2, 2));
        let m = real_invariants(2, 0).unwrap();
        assert_eq!((m.num_components, m.h1, m.h_star, m.chi), (2, 20, 24, -16));
        let t = real_invariants(10, 8).unwrap();
        assert_eq!((t.num_components, t.h1, t.h_star, t.chi), (2, 4, 8, 0));
        assert!(real_invariants(5, 2).is_err());
        assert!(real_invariants(2, 4).is_err());
    }

    #[test]
    fn types() {
        let sphere = topological_types(&real_invariants(11, 11).unwrap()).unwrap();
        assert_eq!(sphere, vec![TopologicalType::Surface { genus: 0, spheres: 0 }]);
        let tt = topological_types(&real_invariants(10, 8).unwrap()).unwrap();
        assert_eq!(
            tt,
            vec![TopologicalType::Surface { genus: 2, spheres: 1 }, TopologicalType::TwoTori]
        );
        assert!(tt.iter().all(|t| t.betti_data() == (8, 0)));
        let m = topological_types(&real_invariants(2, 0).unwrap()).unwrap();
        assert_eq!(m, vec![TopologicalType::Surface { genus: 10, spheres: 1 }]);
        let empty = RealK3Invariants {
            num_components: 0,
            h1: 0,
            h_star: 0,
            chi: 0,
            m_defect: 12,
        };
        assert_eq!(topological_types(&empty).unwrap(), vec![TopologicalType::Empty]);
    }

    #[test]
    fn constraints() {
        assert!(diagram_constraints(11, 11));
        assert!(!diagram_constraints(5, 2));
        assert!(!diagram_constraints(21, 1));
        assert!(!diagram_constraints(0, 0));
        assert!(!diagram_constraints(12, 12));
        let pairs = diagram_pairs();
        assert_eq!(pairs.len(), 75);
    }

    #[test]
    fn catalog_is_admissible_and_matches() {
        let cat = catalog();
        assert!(cat.len() >= 6);
        for e in &cat {
            let s = e.involution();
            assert!(s.k3_admissible().unwrap(), "{}", e.name);
            assert_eq!(s.galois_invariants().unwrap(), e.expected_invariants(), "{}", e.name);
            assert!(diagram_constraints(e.expected.0, e.expected.1), "{}", e.name);
        }
        assert_eq!(catalog_entry("max_M").unwrap().expected, (2, 0));
        assert_eq!(catalog_entry("sphere").unwrap().expected, (11, 11));
        assert_eq!(catalog_entry("two_tori_ambiguous").unwrap().expected, (10, 8));
    }
}
