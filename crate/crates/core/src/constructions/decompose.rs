//! Bounded search for an orthogonal splitting of `L(1)^G` into hyperbolic
//! planes, `⟨2⟩` summands and a negative definite rest.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::involution::Involution;
use crate::lattice::{Lattice, Sublattice};
use crate::linalg::{dot, integer_kernel, solve_integer, vec_add, vec_scale, IntMatrix, IntVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompositionForm {
    /// `⟨a₁, b₁⟩ ⊥ ⟨a₂, b₂⟩ ⊥ S`
    TwoPlanes,
    /// `⟨2⟩ ⊥ ⟨a₁, b₁⟩ ⊥ S`
    TwoAndPlane,
    /// `⟨2⟩ ⊥ ⟨2⟩ ⊥ S`
    TwoTwos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperbolicPlane {
    pub a: IntVector,
    pub b: IntVector,
}

/// Arithmetic side conditions of the found pieces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RiderReport {
    /// Each `⟨2⟩` generator lies in `(1 − σ)L`.
    pub twos_in_image: Vec<bool>,
    /// Each plane meets `(1 − σ)L` only inside `2L`.
    pub planes_meet_image_in_2l: Vec<bool>,
}

impl RiderReport {
    pub fn all_hold(&self) -> bool {
        self.twos_in_image.iter().chain(&self.planes_meet_image_in_2l).all(|&x| x)
    }
}

/// `L(1)^G` regarded as a lattice of its own, with the embedding back into `L`.
#[derive(Clone, Debug)]
pub(crate) struct AntiLattice {
    pub anti: Sublattice,
    pub lattice: Arc<Lattice>,
}

impl AntiLattice {
    pub fn new(s: &Involution) -> Self {
        let anti = s.anti_invariant_sublattice();
        let lattice = Arc::new(anti.as_lattice());
        AntiLattice { anti, lattice }
    }

    pub fn to_ambient(&self, c: &[BigInt]) -> IntVector {
        self.anti.embed_vector(c)
    }

    pub fn sub(&self, rows: IntMatrix) -> Sublattice {
        Sublattice::from_basis_unchecked(self.lattice.clone(), rows)
    }
}

/// A splitting of `L(1)^G`; vectors are in the coordinates of `L`.
#[derive(Clone, Debug)]
pub struct AntiInvariantDecomposition {
    pub form: DecompositionForm,
    pub planes: Vec<HyperbolicPlane>,
    pub twos: Vec<IntVector>,
    pub rest: Sublattice,
    pub riders: RiderReport,
    /// Planes in the coordinates of the `L(1)^G` basis.
    pub(crate) local_planes: Vec<(IntVector, IntVector)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Piece {
    Plane,
    Two,
}

enum Found {
    Plane(IntVector, IntVector),
    Two(IntVector),
}

/// Per-level cap on candidates tried before backtracking.
const BRANCHING: usize = 8;

pub fn decompose_anti_invariant(s: &Involution, search_bound: usize) -> Result<AntiInvariantDecomposition> {
    s.require_admissible()?;
    let ctx = AntiLattice::new(s);
    let n = ctx.lattice.rank();
    let forms: [(DecompositionForm, &[Piece]); 4] = [
        (DecompositionForm::TwoPlanes, &[Piece::Plane, Piece::Plane]),
        (DecompositionForm::TwoAndPlane, &[Piece::Plane, Piece::Two]),
        (DecompositionForm::TwoAndPlane, &[Piece::Two, Piece::Plane]),
        (DecompositionForm::TwoTwos, &[Piece::Two, Piece::Two]),
    ];
    let search = Search {
        s,
        ctx: &ctx,
        bound: search_bound as i64,
    };
    for (form, pieces) in forms {
        let mut found = Vec::new();
        if let Some(rest) = search.descend(IntMatrix::identity(n), pieces, &mut found) {
            return finish(s, &ctx, form, found, rest);
        }
    }
    Err(Error::SearchExhausted { bound: search_bound })
}

fn finish(
    s: &Involution,
    ctx: &AntiLattice,
    form: DecompositionForm,
    found: Vec<Found>,
    rest: IntMatrix,
) -> Result<AntiInvariantDecomposition> {
    let mut planes = Vec::new();
    let mut local_planes = Vec::new();
    let mut twos = Vec::new();
    let mut all_rows = Vec::new();
    for f in found {
        match f {
            Found::Plane(a, b) => {
                all_rows.push(a.clone());
                all_rows.push(b.clone());
                planes.push(HyperbolicPlane {
                    a: ctx.to_ambient(&a),
                    b: ctx.to_ambient(&b),
                });
                local_planes.push((a, b));
            }
            Found::Two(v) => {
                all_rows.push(v.clone());
                twos.push(ctx.to_ambient(&v));
            }
        }
    }
    all_rows.extend(rest.to_rows());
    let n = ctx.lattice.rank();
    let total = IntMatrix::from_rows(all_rows, n);
    if total.rows() != n || !total.determinant().abs().is_one() {
        return Err(Error::InternalInconsistency(
            "decomposition pieces do not span L(1)^G".into(),
        ));
    }
    let riders = RiderReport {
        twos_in_image: twos
            .iter()
            .map(|v| in_image(s, v))
            .collect::<Result<_>>()?,
        planes_meet_image_in_2l: planes
            .iter()
            .map(|p| plane_rider(s, &p.a, &p.b))
            .collect::<Result<_>>()?,
    };
    if !riders.all_hold() {
        return Err(Error::InternalInconsistency("decomposition rider failed".into()));
    }
    Ok(AntiInvariantDecomposition {
        form,
        planes,
        twos,
        rest: ctx.anti.embed(&ctx.sub(rest)),
        riders,
        local_planes,
    })
}

fn in_image(s: &Involution, x: &[BigInt]) -> Result<bool> {
    Ok(s.one_minus_sigma_preimage(x)?.is_some())
}

/// `⟨a, b⟩ ∩ (1 − σ)L ⊂ 2L`: since `2L(1)^G ⊂ (1 − σ)L`, it suffices that
/// none of `a`, `b`, `a + b` lies in `(1 − σ)L`.
fn plane_rider(s: &Involution, a: &[BigInt], b: &[BigInt]) -> Result<bool> {
    for x in [a.to_vec(), b.to_vec(), vec_add(a, b)] {
        if in_image(s, &x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

struct Search<'a> {
    s: &'a Involution,
    ctx: &'a AntiLattice,
    bound: i64,
}

impl Search<'_> {
    /// Splits the pieces off `rest` (rows in local coordinates) in order and
    /// returns the final rest if it is negative definite.
    fn descend(&self, rest: IntMatrix, pieces: &[Piece], found: &mut Vec<Found>) -> Option<IntMatrix> {
        let Some((&piece, tail)) = pieces.split_first() else {
            let g = rest.congruence(self.ctx.lattice.gram());
            return crate::linalg::inertia(&g).is_negative_definite().then_some(rest);
        };
        let gram = rest.congruence(self.ctx.lattice.gram());
        let small = to_i128(&gram)?;
        let mut tried = 0;
        let mut result = None;
        enumerate(rest.rows(), self.bound, |c| {
            if tried >= BRANCHING {
                return true;
            }
            let norm = quad(&small, c);
            let hit = match piece {
                Piece::Plane if norm == 0 => self.plane_from(&rest, &small, c),
                Piece::Two if norm == 2 => self.two_from(&rest, &small, c),
                _ => None,
            };
            let Some(candidate) = hit else { return false };
            tried += 1;
            let (next, rows) = match &candidate {
                Found::Plane(a, b) => (self.complement(&rest, &[a, b]), 2),
                Found::Two(v) => (self.complement(&rest, &[v]), 1),
            };
            debug_assert_eq!(next.rows() + rows, rest.rows());
            found.push(candidate);
            if let Some(r) = self.descend(next, tail, found) {
                result = Some(r);
                return true;
            }
            found.pop();
            false
        });
        result
    }

    fn local_vector(&self, rest: &IntMatrix, c: &[i64]) -> IntVector {
        let c: IntVector = c.iter().map(|&x| BigInt::from(x)).collect();
        rest.vec_mul(&c)
    }

    fn plane_from(&self, rest: &IntMatrix, gram: &[Vec<i128>], c: &[i64]) -> Option<Found> {
        let content = c.iter().fold(0i64, |g, &x| g.gcd(&x));
        if content != 1 {
            return None;
        }
        let products: Vec<i128> = (0..gram.len())
            .map(|i| (0..c.len()).map(|j| gram[i][j] * c[j] as i128).sum())
            .collect();
        if products.iter().fold(0i128, |g, &x| g.gcd(&x)) != 1 {
            return None;
        }
        let row = IntMatrix::from_rows(vec![products.iter().map(|&x| BigInt::from(x)).collect()], c.len());
        let y = solve_integer(&row, &[BigInt::one()])?;
        let lat = &self.ctx.lattice;
        let a = self.local_vector(rest, c);
        let b0 = rest.vec_mul(&y);
        let half = lat.norm(&b0) / BigInt::from(2);
        let b = vec_add(&b0, &vec_scale(&a, &-half));
        debug_assert!(lat.norm(&b).is_zero());
        debug_assert!(dot(&a, &lat.gram().mul_vec(&b)).is_one());
        let (aa, bb) = (self.ctx.to_ambient(&a), self.ctx.to_ambient(&b));
        plane_rider(self.s, &aa, &bb).ok()?.then_some(Found::Plane(a, b))
    }

    fn two_from(&self, rest: &IntMatrix, gram: &[Vec<i128>], c: &[i64]) -> Option<Found> {
        // Splits off as a direct summand only if Q(v, rest) ⊂ 2Z.
        for row in gram {
            let p: i128 = row.iter().zip(c).map(|(g, &x)| g * x as i128).sum();
            if p % 2 != 0 {
                return None;
            }
        }
        let v = self.local_vector(rest, c);
        in_image(self.s, &self.ctx.to_ambient(&v))
            .ok()?
            .then_some(Found::Two(v))
    }

    /// Orthogonal complement of `pieces` inside the span of `rest`.
    fn complement(&self, rest: &IntMatrix, pieces: &[&IntVector]) -> IntMatrix {
        let g = self.ctx.lattice.gram();
        let rows: Vec<IntVector> = pieces
            .iter()
            .map(|p| rest.mul_vec(&g.mul_vec(p)))
            .collect();
        let k = integer_kernel(&IntMatrix::from_rows(rows, rest.rows()));
        &k * rest
    }
}

fn to_i128(m: &IntMatrix) -> Option<Vec<Vec<i128>>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| x.to_i128()).collect())
        .collect()
}

fn quad(g: &[Vec<i128>], c: &[i64]) -> i128 {
    let mut acc = 0i128;
    for (i, &ci) in c.iter().enumerate() {
        if ci == 0 {
            continue;
        }
        for (j, &cj) in c.iter().enumerate() {
            if cj != 0 {
                acc += g[i][j] * (ci as i128) * (cj as i128);
            }
        }
    }
    acc
}

/// Visits coefficient vectors of length `n` with one to three nonzero
/// entries bounded by `bound`, first nonzero entry positive, ordered by
/// support size, then support positions, then values. Stops when `visit`
/// returns true.
fn enumerate(n: usize, bound: i64, mut visit: impl FnMut(&[i64]) -> bool) {
    if bound <= 0 {
        return;
    }
    let values: Vec<i64> = (1..=bound).flat_map(|v| [v, -v]).collect();
    let mut c = vec![0i64; n];
    for size in 1..=3.min(n) {
        let mut support: Vec<usize> = (0..size).collect();
        loop {
            let mut idx = vec![0usize; size];
            'values: loop {
                if values[idx[0]] > 0 {
                    for (k, &p) in support.iter().enumerate() {
                        c[p] = values[idx[k]];
                    }
                    if visit(&c) {
                        return;
                    }
                }
                let mut k = size;
                loop {
                    if k == 0 {
                        break 'values;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < values.len() {
                        break;
                    }
                    idx[k] = 0;
                }
            }
            for &p in &support {
                c[p] = 0;
            }
            // Next combination of support positions.
            let mut i = size;
            let mut advanced = false;
            while i > 0 {
                i -= 1;
                if support[i] < n - size + i {
                    support[i] += 1;
                    for j in i + 1..size {
                        support[j] = support[j - 1] + 1;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real_types::catalog_entry;

    #[test]
    fn enumeration_order_and_count() {
        let mut seen = Vec::new();
        enumerate(3, 1, |c| {
            seen.push(c.to_vec());
            false
        });
        assert_eq!(seen[0], vec![1, 0, 0]);
        assert_eq!(seen[1], vec![0, 1, 0]);
        assert_eq!(seen[3], vec![1, 1, 0]);
        // 3 singles, 3·2 pairs, 4 triples (first entry positive).
        assert_eq!(seen.len(), 3 + 6 + 4);
        let mut none = 0;
        enumerate(3, 0, |_| {
            none += 1;
            false
        });
        assert_eq!(none, 0);
    }

    #[test]
    fn maximal_entry_splits_into_two_planes() {
        let s = catalog_entry("max_M").unwrap().involution();
        let d = decompose_anti_invariant(&s, 3).unwrap();
        assert_eq!(d.form, DecompositionForm::TwoPlanes);
        assert_eq!(d.rest.rank(), 16);
        assert!(d.rest.inertia().is_negative_definite());
        assert!(d.riders.all_hold());
    }

    #[test]
    fn sphere_entry_uses_norm_two_summands() {
        let s = catalog_entry("sphere").unwrap().involution();
        let d = decompose_anti_invariant(&s, 3).unwrap();
        assert!(d.riders.all_hold());
        assert_eq!(d.planes.len() * 2 + d.twos.len() + d.rest.rank(), 11);
    }

    #[test]
    fn zero_bound_exhausts() {
        let s = catalog_entry("max_M").unwrap().involution();
        assert_eq!(
            decompose_anti_invariant(&s, 0).unwrap_err(),
            Error::SearchExhausted { bound: 0 }
        );
    }
}
