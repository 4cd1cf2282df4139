//! Linear algebra over the two-element field.

use num_integer::Integer;

use super::matrix::IntMatrix;

/// Dense matrix over F₂, one `Vec<bool>` per row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2Matrix {
    cols: usize,
    rows: Vec<Vec<bool>>,
}

impl F2Matrix {
    pub fn reduce(m: &IntMatrix) -> Self {
        let rows = (0..m.rows())
            .map(|i| m.row(i).iter().map(Integer::is_odd).collect())
            .collect();
        F2Matrix {
            cols: m.cols(),
            rows,
        }
    }

    pub fn from_rows(rows: Vec<Vec<bool>>, cols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        F2Matrix { cols, rows }
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn row_reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..self.rows.len()).find(|&i| self.rows[i][c]) else {
                continue;
            };
            self.rows.swap(r, p);
            for i in 0..self.rows.len() {
                if i != r && self.rows[i][c] {
                    let (src, dst) = if i < r {
                        let (lo, hi) = self.rows.split_at_mut(r);
                        (&hi[0], &mut lo[i])
                    } else {
                        let (lo, hi) = self.rows.split_at_mut(i);
                        (&lo[r], &mut hi[0])
                    };
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d ^= *s;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        self.rows.truncate(r);
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().row_reduce().len()
    }
}

/// Rank of `m` reduced modulo 2.
pub fn mod2_rank(m: &IntMatrix) -> usize {
    F2Matrix::reduce(m).rank()
}

/// Incremental F₂ span used for greedy independence tests.
#[derive(Clone, Debug, Default)]
pub struct F2Span {
    // Each stored vector has a distinct leading coordinate.
    basis: Vec<(usize, Vec<bool>)>,
}

impl F2Span {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn reduce(&self, v: &[bool]) -> Vec<bool> {
        let mut w = v.to_vec();
        for (lead, b) in &self.basis {
            if w[*lead] {
                for (x, y) in w.iter_mut().zip(b) {
                    *x ^= *y;
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[bool]) -> bool {
        self.reduce(v).iter().all(|x| !x)
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &[bool]) -> bool {
        let w = self.reduce(v);
        match w.iter().position(|&x| x) {
            None => false,
            Some(lead) => {
                // Keep earlier vectors reduced with respect to the new lead.
                for (_, b) in self.basis.iter_mut() {
                    if b[lead] {
                        for (x, y) in b.iter_mut().zip(&w) {
                            *x ^= *y;
                        }
                    }
                }
                self.basis.push((lead, w));
                true
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn small_ranks() {
        let two = IntMatrix::identity(2).scale(&BigInt::from(2));
        assert_eq!(mod2_rank(&two), 0);
        assert_eq!(mod2_rank(&IntMatrix::identity(2)), 2);
        assert_eq!(mod2_rank(&IntMatrix::from_i64_rows(&[vec![1, 1], vec![1, 1]])), 1);
        assert_eq!(mod2_rank(&IntMatrix::from_i64_rows(&[vec![1, 3], vec![3, 1]])), 1);
    }

    #[test]
    fn span_insertion() {
        let mut s = F2Span::new();
        assert!(s.insert(&[true, true, false]));
        assert!(s.insert(&[false, true, true]));
        assert!(!s.insert(&[true, false, true]));
        assert!(s.contains(&[false, false, false]));
        assert_eq!(s.dim(), 2);
    }
}
