//! Smith and Hermite normal forms over the integers, and the integer-linear
//! solvers built on them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{IntMatrix, IntVector};

/// A Smith decomposition `u · m · v = d` together with the inverses of the
/// unimodular transforms.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    /// Nonzero elementary divisors, in order (each divides the next).
    pub fn divisors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.divisors().len()
    }
}

/// Computes `(u, d, v)` with `u`, `v` unimodular, `u·m·v = d` diagonal,
/// `d[i] | d[i+1]` and `d[i] ≥ 0`.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let s = smith_decomposition(m);
    (s.u, s.d, s.v)
}

/// Full Smith decomposition including inverse transforms.
pub fn smith_decomposition(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut u_inv = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);

    // Invariant: u · m · v = a, u·u_inv = 1, v·v_inv = 1.
    let row_add = |a: &mut IntMatrix, u: &mut IntMatrix, u_inv: &mut IntMatrix, dst, src, k: &BigInt| {
        a.add_row_multiple(dst, src, k);
        u.add_row_multiple(dst, src, k);
        u_inv.add_col_multiple(src, dst, &-k);
    };
    let col_add = |a: &mut IntMatrix, v: &mut IntMatrix, v_inv: &mut IntMatrix, dst, src, k: &BigInt| {
        a.add_col_multiple(dst, src, k);
        v.add_col_multiple(dst, src, k);
        v_inv.add_row_multiple(src, dst, &-k);
    };

    for t in 0..rows.min(cols) {
        // Smallest nonzero entry of the trailing block goes to the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[(i, j)].is_zero()
                    && best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        u_inv.swap_cols(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);
        v_inv.swap_rows(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = &a[(i, t)] / &a[(t, t)];
                row_add(&mut a, &mut u, &mut u_inv, i, t, &-q);
                if !a[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = &a[(t, j)] / &a[(t, t)];
                col_add(&mut a, &mut v, &mut v_inv, j, t, &-q);
                if !a[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // Move the smallest remainder in the pivot row/column into place.
                let mut best = (t, t);
                for i in t + 1..rows {
                    if !a[(i, t)].is_zero() && a[(i, t)].abs() < a[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !a[(t, j)].is_zero() && a[(t, j)].abs() < a[best].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    a.swap_rows(t, best.0);
                    u.swap_rows(t, best.0);
                    u_inv.swap_cols(t, best.0);
                } else if best.1 != t {
                    a.swap_cols(t, best.1);
                    v.swap_cols(t, best.1);
                    v_inv.swap_rows(t, best.1);
                }
                continue;
            }
            // Divisibility: the pivot must divide the whole trailing block.
            let mut offender = None;
            'outer: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !a[(i, j)].is_multiple_of(&a[(t, t)]) {
                        offender = Some(i);
                        break 'outer;
                    }
                }
            }
            match offender {
                Some(i) => row_add(&mut a, &mut u, &mut u_inv, t, i, &BigInt::one()),
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
    }

    SmithForm {
        u,
        d: a,
        v,
        u_inv,
        v_inv,
    }
}

/// Finds an integer `x` with `a·x = b`, if one exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<IntVector> {
    assert_eq!(a.rows(), b.len(), "dimension mismatch in solve_integer");
    let s = smith_decomposition(a);
    solve_with(&s, b)
}

pub(crate) fn solve_with(s: &SmithForm, b: &[BigInt]) -> Option<IntVector> {
    let c = s.u.mul_vec(b);
    let divs = s.divisors();
    let mut y = vec![BigInt::zero(); s.v.rows()];
    for (i, ci) in c.iter().enumerate() {
        match divs.get(i) {
            Some(di) => {
                let (q, r) = ci.div_rem(di);
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            }
            None => {
                if !ci.is_zero() {
                    return None;
                }
            }
        }
    }
    Some(s.v.mul_vec(&y))
}

/// Basis (as rows) of the integer kernel `{x : m·x = 0}`. The result is a
/// primitive sublattice of `Z^cols`, returned in Hermite normal form.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let s = smith_decomposition(m);
    let r = s.rank();
    let cols = m.cols();
    let rows: Vec<IntVector> = (r..cols).map(|j| s.v.col_vec(j)).collect();
    hermite_normal_form(&IntMatrix::from_rows(rows, cols))
}

/// Basis (as rows) of the integer row space of `m`, in Hermite normal form.
pub fn row_space_basis(m: &IntMatrix) -> IntMatrix {
    hermite_normal_form(m)
}

/// Row-style Hermite normal form with zero rows removed: pivots positive,
/// entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            // Smallest nonzero entry in column c among rows r..
            let mut best: Option<usize> = None;
            for i in r..rows {
                if !a[(i, c)].is_zero() && best.is_none_or(|b| a[(i, c)].abs() < a[(b, c)].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            a.swap_rows(r, b);
            let mut done = true;
            for i in r + 1..rows {
                if a[(i, c)].is_zero() {
                    continue;
                }
                let q = a[(i, c)].div_floor(&a[(r, c)]);
                a.add_row_multiple(i, r, &-q);
                if !a[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[(r, c)].is_zero() {
            continue;
        }
        if a[(r, c)].is_negative() {
            a.negate_row(r);
        }
        for i in 0..r {
            let q = a[(i, c)].div_floor(&a[(r, c)]);
            a.add_row_multiple(i, r, &-q);
        }
        r += 1;
    }
    a.select_rows(0..r)
}

/// Rows of `v⁻¹` that complete the row space of a primitive `basis` to a
/// basis of `Z^n`; returns `None` if `basis` is not primitive of full row
/// rank.
pub fn unimodular_completion(basis: &IntMatrix) -> Option<IntMatrix> {
    let s = smith_decomposition(basis);
    let divs = s.divisors();
    if divs.len() != basis.rows() || divs.iter().any(|d| !d.is_one()) {
        return None;
    }
    Some(s.v_inv.select_rows(basis.rows()..basis.cols()))
}
