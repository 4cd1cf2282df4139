//! Involutions assembled from small orthogonal blocks, and random
//! conjugates of them.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::involution::Involution;
use crate::lattice::Lattice;
use crate::linalg::IntMatrix;

/// One orthogonal summand together with the action of σ on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Block {
    /// σ = 1 on `U`.
    UIdentity,
    /// σ = −1 on `U`.
    UNegate,
    /// `a ↔ b` on `U`.
    USwap,
    /// `a ↦ −b`, `b ↦ −a` on `U`.
    UNegSwap,
    /// Exchange of the two summands of `U ⊕ U`.
    UExchange,
    /// `x ↦ −x'` exchange of `U ⊕ U`.
    UNegExchange,
    E8Identity,
    E8Negate,
    /// Exchange of the two summands of `E8(−1) ⊕ E8(−1)`.
    E8Exchange,
    E8NegExchange,
    /// σ = 1 on `<n>`.
    DiagIdentity(i64),
    /// σ = −1 on `<n>`.
    DiagNegate(i64),
    /// Exchange on `<n> ⊕ <n>`.
    DiagExchange(i64),
    DiagNegExchange(i64),
}

impl Block {
    pub fn lattice(&self) -> Lattice {
        use Block::*;
        let name = match self {
            UIdentity | UNegate | USwap | UNegSwap | UExchange | UNegExchange => "U".to_string(),
            E8Identity | E8Negate | E8Exchange | E8NegExchange => "E8(-1)".to_string(),
            DiagIdentity(n) | DiagNegate(n) | DiagExchange(n) | DiagNegExchange(n) => {
                format!("<{n}>")
            }
        };
        let base = Lattice::standard(&name).expect("block lattices are standard");
        if self.is_pair() {
            base.direct_sum(&base)
        } else {
            base
        }
    }

    fn is_pair(&self) -> bool {
        use Block::*;
        matches!(
            self,
            UExchange
                | UNegExchange
                | E8Exchange
                | E8NegExchange
                | DiagExchange(_)
                | DiagNegExchange(_)
        )
    }

    pub fn rank(&self) -> usize {
        use Block::*;
        match self {
            UIdentity | UNegate | USwap | UNegSwap => 2,
            UExchange | UNegExchange => 4,
            E8Identity | E8Negate => 8,
            E8Exchange | E8NegExchange => 16,
            DiagIdentity(_) | DiagNegate(_) => 1,
            DiagExchange(_) | DiagNegExchange(_) => 2,
        }
    }

    pub fn matrix(&self) -> IntMatrix {
        use Block::*;
        let n = self.rank();
        match self {
            UIdentity | E8Identity | DiagIdentity(_) => IntMatrix::identity(n),
            UNegate | E8Negate | DiagNegate(_) => IntMatrix::identity(n).neg(),
            USwap => IntMatrix::from_i64_rows(&[vec![0, 1], vec![1, 0]]),
            UNegSwap => IntMatrix::from_i64_rows(&[vec![0, -1], vec![-1, 0]]),
            _ => {
                let half = n / 2;
                let sign: i64 = if matches!(self, UNegExchange | E8NegExchange | DiagNegExchange(_)) {
                    -1
                } else {
                    1
                };
                let mut m = IntMatrix::zeros(n, n);
                for i in 0..half {
                    m[(i, i + half)] = BigInt::from(sign);
                    m[(i + half, i)] = BigInt::from(sign);
                }
                m
            }
        }
    }

    /// Contribution `(b, λ)` of this block; both are additive over sums.
    pub fn expected(&self) -> (usize, usize) {
        use Block::*;
        match self {
            UIdentity => (2, 0),
            UNegate | E8Negate | DiagNegate(_) => (0, 0),
            USwap | UNegSwap | DiagExchange(_) | DiagNegExchange(_) => (1, 1),
            UExchange | UNegExchange => (2, 2),
            E8Identity => (8, 0),
            E8Exchange | E8NegExchange => (8, 8),
            DiagIdentity(_) => (1, 0),
        }
    }
}

/// The orthogonal sum of the blocks with the block-diagonal involution.
pub fn build(blocks: &[Block]) -> Result<Involution> {
    let mut gram = IntMatrix::zeros(0, 0);
    let mut matrix = IntMatrix::zeros(0, 0);
    for b in blocks {
        gram = IntMatrix::block_diagonal(&gram, b.lattice().gram());
        matrix = IntMatrix::block_diagonal(&matrix, &b.matrix());
    }
    let mut lattice = Lattice::new(gram, None)?;
    if lattice.gram() == Lattice::standard("K3")?.gram() {
        lattice = lattice.with_label("K3");
    }
    Involution::new(Arc::new(lattice), matrix)
}

/// Expected `(b, λ)` of [`build`]`(blocks)`.
pub fn expected(blocks: &[Block]) -> (usize, usize) {
    blocks.iter().fold((0, 0), |(b, l), x| {
        let (db, dl) = x.expected();
        (b + db, l + dl)
    })
}

/// Changes basis by `p` (columns are the new basis vectors): the Gram matrix
/// becomes `pᵀ G p` and σ becomes `p⁻¹ σ p`.
pub fn conjugate(s: &Involution, p: &IntMatrix, p_inv: &IntMatrix) -> Result<Involution> {
    let gram = p.transpose().congruence(s.lattice().gram());
    let matrix = &(p_inv * s.matrix()) * p;
    Involution::new(Arc::new(Lattice::new(gram, None)?), matrix)
}

/// A random unimodular matrix and its inverse, built from `steps`
/// elementary column operations with multipliers ±1.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, steps: usize) -> (IntMatrix, IntMatrix) {
    let mut p = IntMatrix::identity(n);
    let mut p_inv = IntMatrix::identity(n);
    if n < 2 {
        return (p, p_inv);
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let k = BigInt::from(if rng.gen_bool(0.5) { 1 } else { -1 });
        // p ← p·E with E = 1 + k·e_j e_iᵀ (column i += k·column j).
        p.add_col_multiple(i, j, &k);
        p_inv.add_row_multiple(j, i, &-k);
    }
    (p, p_inv)
}

/// A random block list of total rank at most `max_rank` (at least one block).
pub fn random_blocks<R: Rng>(rng: &mut R, max_rank: usize) -> Vec<Block> {
    use Block::*;
    let mut out = Vec::new();
    let mut rank = 0;
    let target = rng.gen_range(1..=max_rank.max(1));
    loop {
        let n = [2i64, -2, 4, -4, 6][rng.gen_range(0..5)];
        let choice = match rng.gen_range(0..14) {
            0 => UIdentity,
            1 => UNegate,
            2 => USwap,
            3 => UNegSwap,
            4 => UExchange,
            5 => UNegExchange,
            6 => E8Identity,
            7 => E8Negate,
            8 => E8Exchange,
            9 => E8NegExchange,
            10 => DiagIdentity(n),
            11 => DiagNegate(n),
            12 => DiagExchange(n),
            _ => DiagNegExchange(n),
        };
        if rank + choice.rank() > max_rank {
            if out.is_empty() {
                continue;
            }
            break;
        }
        rank += choice.rank();
        out.push(choice);
        if rank >= target {
            break;
        }
    }
    out
}

/// A random block involution conjugated by a random unimodular change of
/// basis.
pub fn random_involution<R: Rng>(rng: &mut R, max_rank: usize) -> Result<(Vec<Block>, Involution)> {
    let blocks = random_blocks(rng, max_rank);
    let s = build(&blocks)?;
    let n = s.rank();
    let (p, p_inv) = random_unimodular(rng, n, 2 * n);
    Ok((blocks, conjugate(&s, &p, &p_inv)?))
}
