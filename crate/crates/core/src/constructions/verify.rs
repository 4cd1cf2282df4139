//! Stand-alone certificate checker. It works on raw integer rows and does
//! its own elimination so that a bug in the constructors cannot hide here.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateChecks {
    pub primitive: bool,
    pub anti_invariant: bool,
    pub orthogonal: bool,
    pub y_positive: bool,
    /// `dim r(M)` as recomputed here.
    pub r_image_dim: usize,
    /// `dim r(M) = rank M` and equals the claimed value.
    pub r_image_matches: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y_orthogonal_to_l: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_class_in_image: Option<bool>,
}

impl CertificateChecks {
    pub fn passed(&self) -> bool {
        self.primitive
            && self.anti_invariant
            && self.orthogonal
            && self.y_positive
            && self.r_image_matches
            && self.y_orthogonal_to_l != Some(false)
            && self.l_class_in_image != Some(false)
    }
}

type Rows = Vec<Vec<BigInt>>;

fn rows_of(m: &IntMatrix) -> Rows {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn bilinear(g: &Rows, x: &[BigInt], y: &[BigInt]) -> BigInt {
    let mut acc = BigInt::zero();
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            acc += xi * &g[i][j] * yj;
        }
    }
    acc
}

fn apply(m: &Rows, x: &[BigInt]) -> Vec<BigInt> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

/// Gcd of the maximal minors of `rows` equals one, by column operations
/// (which preserve that gcd) down to a lower-triangular block.
fn rows_primitive(rows: &Rows) -> bool {
    let mut a = rows.clone();
    let k = a.len();
    if k == 0 {
        return true;
    }
    let n = a[0].len();
    for i in 0..k {
        loop {
            let nonzero: Vec<usize> = (i..n).filter(|&j| !a[i][j].is_zero()).collect();
            if nonzero.is_empty() {
                return false;
            }
            let p = *nonzero
                .iter()
                .min_by(|&&x, &&y| a[i][x].abs().cmp(&a[i][y].abs()))
                .unwrap();
            for r in a.iter_mut() {
                r.swap(i, p);
            }
            if nonzero.len() == 1 {
                break;
            }
            for j in i + 1..n {
                if a[i][j].is_zero() {
                    continue;
                }
                let q = a[i][j].div_floor(&a[i][i]);
                for r in a.iter_mut() {
                    let d = &q * &r[i];
                    r[j] -= d;
                }
            }
        }
        if !a[i][i].abs().is_one() {
            return false;
        }
    }
    true
}

fn f2_rank(rows: &[Vec<BigInt>]) -> usize {
    let mut bits: Vec<Vec<bool>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x.is_odd()).collect())
        .collect();
    let n = bits.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..n {
        let Some(p) = (rank..bits.len()).find(|&i| bits[i][c]) else {
            continue;
        };
        bits.swap(rank, p);
        let pivot = bits[rank].clone();
        for (i, row) in bits.iter_mut().enumerate() {
            if i != rank && row[c] {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= *y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Checks a witness `(M, y)` for the involution `sigma` of the lattice with
/// Gram matrix `gram`. `M` has basis rows `m_basis`; `l` is the polarization,
/// if any, and `l_class` asks that `r(l) ∈ r(M)`.
pub fn verify_certificate(
    gram: &IntMatrix,
    sigma: &IntMatrix,
    m_basis: &IntMatrix,
    y: &[BigInt],
    claimed_r_dim: usize,
    l: Option<&[BigInt]>,
    l_class: bool,
) -> CertificateChecks {
    let g = rows_of(gram);
    let s = rows_of(sigma);
    let m = rows_of(m_basis);
    let n = g.len();

    let is_anti = |v: &[BigInt]| {
        v.len() == n && apply(&s, v).iter().zip(v).all(|(a, b)| (a + b).is_zero())
    };
    let anti_invariant = m.iter().all(|v| is_anti(v)) && is_anti(y);
    let orthogonal = m.iter().all(|v| bilinear(&g, v, y).is_zero());
    let y_positive = y.len() == n && bilinear(&g, y, y).is_positive();

    // Columns of 1 − σ span (1 − σ)L; r(M) ≅ (M + (1−σ)L + 2L) / ((1−σ)L + 2L).
    let image: Rows = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    let id = if i == j { BigInt::one() } else { BigInt::zero() };
                    id - &s[i][j]
                })
                .collect()
        })
        .collect();
    let lambda = f2_rank(&image);
    let mut with_m = m.clone();
    with_m.extend(image.iter().cloned());
    let span_m = f2_rank(&with_m);
    let r_image_dim = span_m - lambda;

    let y_orthogonal_to_l = l.map(|l| bilinear(&g, y, l).is_zero());
    let l_class_in_image = match (l, l_class) {
        (Some(l), true) => {
            let mut with_l = with_m.clone();
            with_l.push(l.to_vec());
            Some(f2_rank(&with_l) == span_m)
        }
        _ => None,
    };

    CertificateChecks {
        primitive: rows_primitive(&m),
        anti_invariant,
        orthogonal,
        y_positive,
        r_image_dim,
        r_image_matches: r_image_dim == m.len() && r_image_dim == claimed_r_dim,
        y_orthogonal_to_l,
        l_class_in_image,
    }
}
