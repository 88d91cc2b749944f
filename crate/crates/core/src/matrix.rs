//! Dense exact elimination kernels shared by the lattice code.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Determinant by Bareiss fraction-free elimination with row pivoting.
pub fn bareiss_determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                // Exact by Sylvester's identity.
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Leading principal minors `D_1..D_n` of a square matrix.
///
/// Bareiss without pivoting produces them as successive pivots; if a pivot
/// vanishes the remaining minors are computed one at a time.
pub fn leading_principal_minors(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = m.len();
    let mut a = m.to_vec();
    let mut minors = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            break;
        }
        minors.push(a[k][k].clone());
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    for k in minors.len()..n {
        let sub: Vec<Vec<BigInt>> = m[..=k].iter().map(|r| r[..=k].to_vec()).collect();
        minors.push(bareiss_determinant(&sub));
    }
    minors
}

/// Diagonal of a form congruent to the symmetric matrix `m` over the
/// rationals (`P^T M P` diagonal for some invertible `P`).
pub fn congruence_diagonal(m: &[Vec<BigInt>]) -> Vec<BigRational> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                swap_symmetric(&mut a, j, k);
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // a[j][j] = 0 here, so the new a[k][k] = 2 a[k][j] != 0.
                add_symmetric(&mut a, j, k);
            } else {
                // Row k is zero beyond the diagonal: a zero eigenvalue.
                diag.push(BigRational::zero());
                continue;
            }
        }
        let pivot = a[k][k].clone();
        for i in (k + 1)..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for j in k..n {
                let d = &f * &a[k][j];
                a[i][j] -= d;
            }
        }
        // Column operations mirror the row operations.
        for j in (k + 1)..n {
            a[k][j] = BigRational::zero();
            a[j][k] = BigRational::zero();
        }
        diag.push(pivot);
    }
    diag
}

fn swap_symmetric(a: &mut [Vec<BigRational>], i: usize, j: usize) {
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// Row/column operation `e_dst += e_src`.
fn add_symmetric(a: &mut [Vec<BigRational>], src: usize, dst: usize) {
    for c in 0..a.len() {
        let v = a[src][c].clone();
        a[dst][c] += v;
    }
    for row in a.iter_mut() {
        let v = row[src].clone();
        row[dst] += v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    /// Cofactor expansion; exponential but independent of Bareiss.
    fn cofactor_det(m: &[Vec<BigInt>]) -> BigInt {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = BigInt::zero();
        for c in 0..n {
            let minor: Vec<Vec<BigInt>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != c)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let term = &m[0][c] * cofactor_det(&minor);
            if c % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn bareiss_matches_cofactor() {
        let cases = [
            vec![vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]],
            vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]],
            vec![vec![2, -1, 0, 0], vec![-1, 2, -1, 0], vec![0, -1, 2, -1], vec![0, 0, -1, 2]],
            vec![vec![1, 2], vec![2, 4]],
            vec![vec![0, 0], vec![0, 5]],
        ];
        for c in cases {
            let m = big(&c);
            assert_eq!(bareiss_determinant(&m), cofactor_det(&m), "{c:?}");
        }
    }

    #[test]
    fn minors_with_zero_pivot() {
        let m = big(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 3]]);
        assert_eq!(
            leading_principal_minors(&m),
            vec![BigInt::from(0), BigInt::from(-1), BigInt::from(-3)]
        );
    }

    #[test]
    fn congruence_diagonal_of_hyperbolic_plane() {
        let d = congruence_diagonal(&big(&[vec![0, 1], vec![1, 0]]));
        let pos = d.iter().filter(|x| **x > BigRational::zero()).count();
        let neg = d.iter().filter(|x| **x < BigRational::zero()).count();
        assert_eq!((pos, neg), (1, 1));
    }
}
