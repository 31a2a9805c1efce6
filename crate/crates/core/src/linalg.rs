//! Exact linear algebra over the integers and rationals.

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::num::{gcd_all, Scalar};

fn primitive_row<T: Scalar>(row: &mut [T]) {
    let g = gcd_all(row);
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x = x.clone() / g.clone();
        }
    }
}

/// Row echelon form by integer row operations. Returns the pivot column of
/// every nonzero row, in order.
pub fn echelon_pivots<T: Scalar>(mut rows: Vec<Vec<T>>) -> Vec<usize> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot = &head[r];
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let a = pivot[c].clone();
            let b = row[c].clone();
            for j in c..cols {
                row[j] = a.clone() * row[j].clone() - b.clone() * pivot[j].clone();
            }
            primitive_row(row);
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<T: Scalar>(rows: Vec<Vec<T>>) -> usize {
    echelon_pivots(rows).len()
}

/// Determinant of a square matrix (Bareiss fraction-free elimination).
pub fn determinant<T: Scalar>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    if n == 0 {
        return T::one();
    }
    let mut sign = T::one();
    let mut prev = T::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else { return T::zero() };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].clone() * m[k][k].clone() - m[i][k].clone() * m[k][j].clone();
                m[i][j] = v / prev.clone();
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// For `k-1` vectors in `R^k`, the vector of signed maximal minors. It is
/// orthogonal to every input vector and nonzero iff they are independent.
pub fn cofactor_normal<T: Scalar>(vectors: &[Vec<T>]) -> Vec<T> {
    let k = vectors.len() + 1;
    debug_assert!(vectors.iter().all(|v| v.len() == k));
    (0..k)
        .map(|j| {
            let minor: Vec<Vec<T>> = vectors
                .iter()
                .map(|v| v.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let d = determinant(minor);
            if j % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect()
}

/// Smith normal form with the left transform.
///
/// Returns `(d, u)` with `u` unimodular and `u · m · w = diag(d)` for some
/// unimodular `w`; the entries of `d` are positive and each divides the next.
/// Only the nonzero invariant factors are returned.
pub fn smith_left<T: Scalar>(m: &[Vec<T>]) -> (Vec<T>, Vec<Vec<T>>) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<T>> = m.to_vec();
    let mut u: Vec<Vec<T>> =
        (0..rows).map(|i| (0..rows).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect();
    let mut diag = Vec::new();

    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return (diag, u);
            };
            a.swap(t, pi);
            u.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            if a[t][t].is_negative() {
                for x in a[t].iter_mut().chain(u[t].iter_mut()) {
                    *x = -x.clone();
                }
            }
            let p = a[t][t].clone();

            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&p);
                for j in t..cols {
                    let v = a[i][j].clone() - q.clone() * a[t][j].clone();
                    a[i][j] = v;
                }
                for j in 0..rows {
                    let v = u[i][j].clone() - q.clone() * u[t][j].clone();
                    u[i][j] = v;
                }
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&p);
                for i in t..rows {
                    let v = a[i][j].clone() - q.clone() * a[i][t].clone();
                    a[i][j] = v;
                }
                dirty |= !a[t][j].is_zero();
            }
            if dirty {
                continue;
            }
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    for j in t..cols {
                        let v = a[t][j].clone() + a[i][j].clone();
                        a[t][j] = v;
                    }
                    for j in 0..rows {
                        let v = u[t][j].clone() + u[i][j].clone();
                        u[t][j] = v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].clone());
    }
    (diag, u)
}

/// Reduced row echelon form over the rationals; returns pivot columns.
pub fn rref<T: Scalar>(m: &mut [Vec<Ratio<T>>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = Ratio::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let v = m[i][j].clone() - f.clone() * m[r][j].clone();
                    m[i][j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn to_ratio<T: Scalar>(rows: &[Vec<T>]) -> Vec<Vec<Ratio<T>>> {
    rows.iter().map(|r| r.iter().map(|x| Ratio::from_integer(x.clone())).collect()).collect()
}

/// Basis of the rational null space of `rows` (each vector scaled to a
/// primitive integer vector).
pub fn kernel_basis<T: Scalar>(rows: &[Vec<T>], cols: usize) -> Vec<Vec<T>> {
    let mut m = to_ratio(rows);
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v: Vec<Ratio<T>> = vec![Ratio::zero(); cols];
            v[f] = Ratio::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            let lcm = v.iter().fold(T::one(), |acc, x| acc.lcm(x.denom()));
            let mut ints: Vec<T> = v.iter().map(|x| x.numer().clone() * (lcm.clone() / x.denom().clone())).collect();
            primitive_row(&mut ints);
            ints
        })
        .collect()
}

/// Solves `λ · basis = target` for `λ`, if a solution exists. The rows of
/// `basis` must be linearly independent.
pub fn solve_combination<T: Scalar>(basis: &[Vec<T>], target: &[T]) -> Option<Vec<Ratio<T>>> {
    let k = basis.len();
    let d = target.len();
    // transpose into d equations in k unknowns, augmented by the target
    let mut m: Vec<Vec<Ratio<T>>> = (0..d)
        .map(|j| {
            let mut row: Vec<Ratio<T>> = basis.iter().map(|b| Ratio::from_integer(b[j].clone())).collect();
            row.push(Ratio::from_integer(target[j].clone()));
            row
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.contains(&k) || pivots.len() < k {
        return None;
    }
    Some((0..k).map(|i| m[i][k].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn matmul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let inner = b.len();
        let cols = b.first().map_or(0, Vec::len);
        a.iter()
            .map(|r| (0..cols).map(|j| (0..inner).map(|k| &r[k] * &b[k][j]).sum()).collect())
            .collect()
    }

    #[test]
    fn rank_and_determinant() {
        assert_eq!(rank(mat(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]])), 2);
        assert_eq!(determinant(mat(&[&[2, 1], &[1, 2]])), BigInt::from(3));
        assert_eq!(determinant(mat(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(determinant(mat(&[&[1, 2], &[2, 4]])), BigInt::from(0));
    }

    #[test]
    fn cofactor_normal_is_orthogonal() {
        let vs = mat(&[&[1, 0, 2], &[0, 1, 3]]);
        let w = cofactor_normal(&vs);
        for v in &vs {
            assert_eq!(v.iter().zip(&w).map(|(a, b)| a * b).sum::<BigInt>(), BigInt::from(0));
        }
        assert!(w.iter().any(|x| *x != BigInt::from(0)));
    }

    #[test]
    fn smith_of_small_matrix() {
        let m = mat(&[&[2, 1], &[1, 2]]);
        let (d, u) = smith_left(&m);
        assert_eq!(d, vec![BigInt::from(1), BigInt::from(3)]);
        assert_eq!(determinant(u).abs(), BigInt::from(1));
    }

    #[test]
    fn kernel_of_single_row() {
        let k = kernel_basis(&mat(&[&[1, 1, -1]]), 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(&v[0] + &v[1] - &v[2], BigInt::from(0));
        }
    }

    #[test]
    fn solve_combination_recovers_coefficients() {
        let basis = mat(&[&[1, 0, 1], &[1, 2, 0]]);
        let lam = solve_combination(&basis, &mat(&[&[3, 4, 1]])[0]).unwrap();
        assert_eq!(lam, vec![Ratio::from_integer(BigInt::from(1)), Ratio::from_integer(BigInt::from(2))]);
        assert!(solve_combination(&basis, &mat(&[&[0, 0, 1]])[0]).is_none());
    }

    proptest! {
        #[test]
        fn smith_invariants(entries in prop::collection::vec(-6i64..7, 12)) {
            let m: Vec<Vec<BigInt>> = entries.chunks(4).map(|c| c.iter().map(|&x| BigInt::from(x)).collect()).collect();
            let (d, u) = smith_left(&m);
            prop_assert_eq!(determinant(u.clone()).abs(), BigInt::from(1));
            prop_assert_eq!(d.len(), rank(m.clone()));
            for w in d.windows(2) {
                prop_assert!((&w[1] % &w[0]) == BigInt::from(0));
            }
            // the rows of u·m generate the same lattice as those of diag(d)·w⁻¹,
            // so the gcd of the k×k minors of u·m equals the product of d
            let um = matmul(&u, &m);
            if d.len() == 3 {
                let mut g = BigInt::from(0);
                for skip in 0..4 {
                    let minor: Vec<Vec<BigInt>> = um.iter().map(|r| r.iter().enumerate()
                        .filter(|&(j, _)| j != skip).map(|(_, x)| x.clone()).collect()).collect();
                    g = num_integer::Integer::gcd(&g, &determinant(minor));
                }
                prop_assert_eq!(g, d.iter().product::<BigInt>());
            }
        }

        #[test]
        fn kernel_vectors_are_annihilated(entries in prop::collection::vec(-3i64..4, 10)) {
            let m: Vec<Vec<BigInt>> = entries.chunks(5).map(|c| c.iter().map(|&x| BigInt::from(x)).collect()).collect();
            let k = kernel_basis(&m, 5);
            prop_assert_eq!(k.len(), 5 - rank(m.clone()));
            for v in &k {
                for r in &m {
                    prop_assert_eq!(r.iter().zip(v).map(|(a, b)| a * b).sum::<BigInt>(), BigInt::from(0));
                }
            }
        }
    }
}
