//! Exact Gaussian elimination over the rationals.

use num_traits::Zero;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<Rational>),
    Inconsistent,
    /// Consistent, but the columns are linearly dependent.
    Underdetermined,
}

/// Solves `a · x = b` for a dense `rows × cols` matrix.
pub fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Solution {
    let rows = a.len();
    assert_eq!(rows, b.len());
    let cols = a.first().map_or(0, Vec::len);
    let mut pivot_cols = Vec::with_capacity(cols);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        b.swap(r, p);
        let inv = a[r][c].recip();
        for k in c..cols {
            a[r][k] *= inv;
        }
        b[r] *= inv;
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c];
                for k in c..cols {
                    let delta = f * a[r][k];
                    a[i][k] -= delta;
                }
                let delta = f * b[r];
                b[i] -= delta;
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if b[r..].iter().any(|v| !v.is_zero()) {
        return Solution::Inconsistent;
    }
    if pivot_cols.len() < cols {
        return Solution::Underdetermined;
    }
    let mut x = vec![Rational::zero(); cols];
    for (row, &c) in pivot_cols.iter().enumerate() {
        x[c] = b[row];
    }
    Solution::Unique(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn int_matrix(m: &[&[i64]]) -> Vec<Vec<Rational>> {
        m.iter().map(|row| row.iter().map(|&v| r(v, 1)).collect()).collect()
    }

    #[test]
    fn unique_overdetermined_system() {
        // x + y = 1, x - y = 0, 2x = 1
        let a = int_matrix(&[&[1, 1], &[1, -1], &[2, 0]]);
        let b = vec![r(1, 1), r(0, 1), r(1, 1)];
        assert_eq!(solve(a, b), Solution::Unique(vec![r(1, 2), r(1, 2)]));
    }

    #[test]
    fn inconsistent_and_dependent() {
        let a = int_matrix(&[&[1, 1], &[2, 2]]);
        assert_eq!(solve(a.clone(), vec![r(1, 1), r(3, 1)]), Solution::Inconsistent);
        assert_eq!(solve(a, vec![r(1, 1), r(2, 1)]), Solution::Underdetermined);
    }

    #[test]
    fn no_unknowns() {
        let a = vec![vec![]; 2];
        assert_eq!(solve(a.clone(), vec![r(0, 1), r(0, 1)]), Solution::Unique(vec![]));
        assert_eq!(solve(a, vec![r(0, 1), r(1, 3)]), Solution::Inconsistent);
    }
}
