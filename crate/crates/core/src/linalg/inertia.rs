//! Exact rational symmetric reduction: inertia, positive directions, inverses
//! and rational rank. No floating point is involved anywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::{IntMatrix, IntVector};

/// Counts of positive, negative and zero eigenvalues of a symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Inertia {
    pub n_pos: usize,
    pub n_neg: usize,
    pub n_zero: usize,
}

impl Inertia {
    pub const fn new(n_pos: usize, n_neg: usize, n_zero: usize) -> Self {
        Inertia {
            n_pos,
            n_neg,
            n_zero,
        }
    }

    pub fn dim(&self) -> usize {
        self.n_pos + self.n_neg + self.n_zero
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.n_zero == 0
    }

    pub fn is_negative_definite(&self) -> bool {
        self.n_pos == 0 && self.n_zero == 0
    }
}

type RatMatrix = Vec<Vec<BigRational>>;

fn to_rational(g: &IntMatrix) -> RatMatrix {
    (0..g.rows())
        .map(|i| {
            g.row(i)
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect()
}

/// Exact inertia of a symmetric integer matrix.
///
/// Symmetric Gaussian elimination over ℚ. A nonzero diagonal pivot is used
/// when one exists; otherwise a nonzero off-diagonal entry `a_ij` gives a
/// hyperbolic 2×2 pivot contributing one positive and one negative square,
/// and its Schur complement is taken.
pub fn inertia(g: &IntMatrix) -> Inertia {
    assert!(g.is_symmetric(), "inertia requires a symmetric matrix");
    let mut a = to_rational(g);
    let mut live: Vec<usize> = (0..g.rows()).collect();
    let mut out = Inertia::new(0, 0, 0);

    while !live.is_empty() {
        if let Some(pos) = live.iter().position(|&i| !a[i][i].is_zero()) {
            let p = live.swap_remove(pos);
            let piv = a[p][p].clone();
            if piv.is_positive() {
                out.n_pos += 1;
            } else {
                out.n_neg += 1;
            }
            for &i in &live {
                if a[i][p].is_zero() {
                    continue;
                }
                let f = &a[i][p] / &piv;
                for &j in &live {
                    let delta = &f * &a[p][j];
                    a[i][j] -= delta;
                }
            }
            continue;
        }
        let pair = live.iter().enumerate().find_map(|(x, &i)| {
            live[x + 1..]
                .iter()
                .position(|&j| !a[i][j].is_zero())
                .map(|y| (x, x + 1 + y))
        });
        let Some((x, y)) = pair else {
            out.n_zero += live.len();
            break;
        };
        let (p, q) = (live[x], live[y]);
        live.remove(y);
        live.remove(x);
        out.n_pos += 1;
        out.n_neg += 1;
        // Block [[0, c], [c, 0]] has inverse [[0, 1/c], [1/c, 0]].
        let c = a[p][q].clone();
        for &i in &live {
            for &j in &live {
                let delta = (&a[i][p] * &a[q][j] + &a[i][q] * &a[p][j]) / &c;
                a[i][j] -= delta;
            }
        }
    }
    out
}

/// Returns an integer vector `v` with `vᵀ g v > 0`, or `None` when the form
/// is negative semidefinite.
pub fn positive_vector(g: &IntMatrix) -> Option<IntVector> {
    assert!(g.is_symmetric());
    let n = g.rows();
    let mut a = to_rational(g);
    // Rows of `t` are the current basis vectors; a = t g tᵀ restricted to live.
    let mut t: RatMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    let mut live: Vec<usize> = (0..n).collect();
    loop {
        if let Some(&p) = live.iter().find(|&&i| a[i][i].is_positive()) {
            return Some(clear_denominators(&t[p]));
        }
        if let Some(pos) = live.iter().position(|&i| !a[i][i].is_zero()) {
            let p = live.swap_remove(pos);
            let piv = a[p][p].clone();
            for &i in &live {
                if a[i][p].is_zero() {
                    continue;
                }
                let f = &a[i][p] / &piv;
                let tp = t[p].clone();
                for (x, y) in t[i].iter_mut().zip(&tp) {
                    *x -= &f * y;
                }
                for &j in &live {
                    let delta = &f * &a[p][j];
                    a[i][j] -= delta;
                }
            }
            continue;
        }
        // All live diagonal entries vanish: v = e_i ± e_j has norm ±2a_ij.
        for (x, &i) in live.iter().enumerate() {
            for &j in &live[x + 1..] {
                if !a[i][j].is_zero() {
                    let sign = if a[i][j].is_positive() {
                        BigRational::one()
                    } else {
                        -BigRational::one()
                    };
                    let v: Vec<BigRational> =
                        t[i].iter().zip(&t[j]).map(|(x, y)| x + &sign * y).collect();
                    return Some(clear_denominators(&v));
                }
            }
        }
        return None;
    }
}

/// Scales a rational vector to a primitive integer vector in the same ray.
pub fn clear_denominators(v: &[BigRational]) -> IntVector {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

/// Rank over ℚ.
pub fn rational_rank(m: &IntMatrix) -> usize {
    let mut a = to_rational(m);
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[r][c];
            let (top, bottom) = a.split_at_mut(i);
            for (x, p) in bottom[0][c..].iter_mut().zip(&top[r][c..]) {
                *x -= &f * p;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Inverse over ℚ of a square integer matrix, or `None` if singular.
pub fn rational_inverse(m: &IntMatrix) -> Option<Vec<Vec<BigRational>>> {
    assert!(m.is_square());
    let n = m.rows();
    let mut a = to_rational(m);
    let mut inv: RatMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        inv.swap(c, p);
        let piv = a[c][c].clone();
        for j in 0..n {
            a[c][j] = &a[c][j] / &piv;
            inv[c][j] = &inv[c][j] / &piv;
        }
        for i in 0..n {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..n {
                let da = &f * &a[c][j];
                a[i][j] -= da;
                let di = &f * &inv[c][j];
                inv[i][j] -= di;
            }
        }
    }
    Some(inv)
}

/// `vᵀ a v` for a rational symmetric matrix and integer vector.
pub fn rational_quadratic_value(a: &[Vec<BigRational>], v: &[BigInt]) -> BigRational {
    let mut acc = BigRational::zero();
    for (i, vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        for (j, vj) in v.iter().enumerate() {
            if vj.is_zero() {
                continue;
            }
            acc += &a[i][j] * BigRational::from_integer(vi * vj);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::dot;

    #[test]
    fn hyperbolic_plane_and_zero() {
        let u = IntMatrix::from_i64_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(inertia(&u), Inertia::new(1, 1, 0));
        assert_eq!(inertia(&IntMatrix::zeros(2, 2)), Inertia::new(0, 0, 2));
        assert_eq!(inertia(&IntMatrix::zeros(0, 0)), Inertia::new(0, 0, 0));
    }

    #[test]
    fn degenerate_with_zero_diagonal() {
        // [[0,1,0],[1,0,0],[0,0,0]] ⊕ hyperbolic with a null direction.
        let g = IntMatrix::from_i64_rows(&[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
        // eigenvalues 2, -1, -1
        assert_eq!(inertia(&g), Inertia::new(1, 2, 0));
        let h = IntMatrix::from_i64_rows(&[vec![0, 2, 0], vec![2, 0, 0], vec![0, 0, 0]]);
        assert_eq!(inertia(&h), Inertia::new(1, 1, 1));
    }

    #[test]
    fn positive_vector_found_exactly() {
        let g = IntMatrix::from_i64_rows(&[vec![-2, 1], vec![1, -2]]);
        assert_eq!(positive_vector(&g), None);
        let u = IntMatrix::from_i64_rows(&[vec![0, 1], vec![1, 0]]);
        let v = positive_vector(&u).unwrap();
        assert!(dot(&v, &u.mul_vec(&v)) > BigInt::zero());
        let g = IntMatrix::from_i64_rows(&[vec![-2, 3], vec![3, -2]]);
        let v = positive_vector(&g).unwrap();
        assert!(dot(&v, &g.mul_vec(&v)) > BigInt::zero());
    }

    #[test]
    fn inverse_and_rank() {
        let g = IntMatrix::from_i64_rows(&[vec![2, 1], vec![1, 1]]);
        let inv = rational_inverse(&g).unwrap();
        assert_eq!(inv[0][0], BigRational::from_integer(1.into()));
        assert_eq!(inv[0][1], BigRational::from_integer((-1).into()));
        assert!(rational_inverse(&IntMatrix::zeros(2, 2)).is_none());
        assert_eq!(rational_rank(&IntMatrix::from_i64_rows(&[vec![1, 2], vec![2, 4]])), 1);
    }
}
