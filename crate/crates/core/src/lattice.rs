//! Integer linear systems via column Hermite-style reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub particular: Vec<BigInt>,
    /// Basis of the integer kernel of the matrix.
    pub kernel: Vec<Vec<BigInt>>,
}

fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    (e.gcd, e.x, e.y)
}

/// Solves `A x = b` over the integers, `A` given as `rows × cols`.
///
/// Column operations tracked in a unimodular `U` bring `A` to a lower
/// triangular `H = A U`; forward substitution on `H y = b` decides
/// solvability and `x = U y`.
pub fn solve(a: &[Vec<BigInt>], b: &[BigInt], cols: usize) -> Option<Solution> {
    let rows = a.len();
    let mut h: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| (0..cols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    // column j of h is h[..][j]; column j of u is u[..][j]
    let col_combine = |m: &mut Vec<Vec<BigInt>>, c: usize, j: usize, x: &BigInt, y: &BigInt, p: &BigInt, q: &BigInt| {
        // (col_c, col_j) <- (x col_c + y col_j, p col_c + q col_j)
        for row in m.iter_mut() {
            let vc = row[c].clone();
            let vj = row[j].clone();
            row[c] = x * &vc + y * &vj;
            row[j] = p * &vc + q * &vj;
        }
    };

    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut c = 0;
    for i in 0..rows {
        if c >= cols {
            break;
        }
        for j in c + 1..cols {
            if h[i][j].is_zero() {
                continue;
            }
            let a_ic = h[i][c].clone();
            let a_ij = h[i][j].clone();
            let (g, x, y) = ext_gcd(&a_ic, &a_ij);
            let p = -(&a_ij / &g);
            let q = &a_ic / &g;
            col_combine(&mut h, c, j, &x, &y, &p, &q);
            col_combine(&mut u, c, j, &x, &y, &p, &q);
        }
        if !h[i][c].is_zero() {
            if h[i][c].is_negative() {
                for row in h.iter_mut() {
                    row[c] = -&row[c];
                }
                for row in u.iter_mut() {
                    row[c] = -&row[c];
                }
            }
            pivots.push((i, c));
            c += 1;
        }
    }
    let rank = c;

    let mut y = vec![BigInt::zero(); cols];
    let mut next_pivot = 0;
    for i in 0..rows {
        let mut r = b[i].clone();
        for (col, yv) in y.iter().enumerate().take(rank) {
            if !yv.is_zero() {
                r -= &h[i][col] * yv;
            }
        }
        if next_pivot < pivots.len() && pivots[next_pivot].0 == i {
            let col = pivots[next_pivot].1;
            let (qt, rem) = r.div_rem(&h[i][col]);
            if !rem.is_zero() {
                return None;
            }
            y[col] = qt;
            next_pivot += 1;
        } else if !r.is_zero() {
            return None;
        }
    }
    let particular = (0..cols)
        .map(|row| (0..cols).fold(BigInt::zero(), |acc, k| acc + &u[row][k] * &y[k]))
        .collect();
    let kernel = (rank..cols).map(|k| (0..cols).map(|row| u[row][k].clone()).collect()).collect();
    Some(Solution { particular, kernel })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn apply(a: &[Vec<BigInt>], x: &[BigInt]) -> Vec<BigInt> {
        a.iter().map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
    }

    #[test]
    fn coprime_pair() {
        let a = m(&[&[2, 3]]);
        let s = solve(&a, &v(&[1]), 2).unwrap();
        assert_eq!(apply(&a, &s.particular), v(&[1]));
        assert_eq!(s.kernel.len(), 1);
        assert_eq!(apply(&a, &s.kernel[0]), v(&[0]));
    }

    #[test]
    fn unsolvable() {
        let a = m(&[&[2, 4]]);
        assert!(solve(&a, &v(&[3]), 2).is_none());
        let a = m(&[&[1], &[1]]);
        assert!(solve(&a, &v(&[1, 2]), 1).is_none());
    }

    #[test]
    fn square_independent() {
        let a = m(&[&[1, 0], &[1, 2]]);
        let s = solve(&a, &v(&[3, 5]), 2).unwrap();
        assert_eq!(s.particular, v(&[3, 1]));
        assert!(s.kernel.is_empty());
        assert!(solve(&a, &v(&[3, 4]), 2).is_none());
    }
}
