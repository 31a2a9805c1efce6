//! Admissible extremal rays of `{x : Ax = 0, x >= 0}` by double description
//! with the quadrilateral filter.
//!
//! The cone is built one hyperplane at a time starting from the non-negative
//! orthant. A combination of two rays has support equal to the union of
//! their supports, so once a zero set fails the admissibility test every
//! ray built from it fails too; such pairs are dropped before the adjacency
//! test is ever run.

use std::cmp::Ordering;

use crate::cone::{Admissibility, DenseMatrix, IntVector, ZeroSet};
use crate::linalg::rank;
use crate::num::{dot, Scalar};
use crate::{Deadline, TimedOut};

/// Extremal rays, each the primitive integer vector on its ray, together
/// with their zero sets. Rays are kept in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RaySet<T: Ord> {
    rays: Vec<IntVector<T>>,
    zero_sets: Vec<ZeroSet>,
}

impl<T: Scalar> RaySet<T> {
    pub fn from_rays(rays: impl IntoIterator<Item = IntVector<T>>) -> Self {
        let mut rays: Vec<IntVector<T>> = rays.into_iter().map(|r| r.primitive()).collect();
        rays.sort();
        rays.dedup();
        let zero_sets = rays.iter().map(IntVector::zero_set).collect();
        RaySet { rays, zero_sets }
    }

    pub fn empty() -> Self {
        RaySet { rays: Vec::new(), zero_sets: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn rays(&self) -> &[IntVector<T>] {
        &self.rays
    }

    pub fn zero_sets(&self) -> &[ZeroSet] {
        &self.zero_sets
    }

    pub fn iter(&self) -> impl Iterator<Item = (&IntVector<T>, &ZeroSet)> {
        self.rays.iter().zip(&self.zero_sets)
    }

    /// Rays whose zero set contains `face`, i.e. the rays lying in that face.
    pub fn filter_face(&self, face: &ZeroSet) -> Self {
        let (rays, zero_sets) = self.iter().filter(|(_, z)| face.is_subset(z)).map(|(r, z)| (r.clone(), z.clone())).unzip();
        RaySet { rays, zero_sets }
    }
}

/// Row processing order: rows whose first nonzero entry comes later go
/// first; ties go to the lexicographically smaller support pattern, then to
/// the original index. Zero rows count as starting after the last column.
pub fn sort_rows_position<T: Scalar>(a: &DenseMatrix<T>) -> Vec<usize> {
    let supports: Vec<Vec<bool>> = a.rows().iter().map(|r| r.iter().map(|x| !x.is_zero()).collect()).collect();
    let first = |s: &Vec<bool>| s.iter().position(|&b| b).unwrap_or(s.len());
    let mut order: Vec<usize> = (0..a.row_count()).collect();
    order.sort_by(|&i, &j| {
        first(&supports[j])
            .cmp(&first(&supports[i]))
            .then_with(|| supports[i].cmp(&supports[j]))
            .then(i.cmp(&j))
    });
    order
}

struct Ray<T> {
    vector: IntVector<T>,
    zeros: ZeroSet,
}

/// Admissible extremal rays of `{x : Ax = 0, x >= 0}`.
pub fn enumerate_admissible_rays<T: Scalar>(a: &DenseMatrix<T>, admissibility: &Admissibility) -> RaySet<T> {
    enumerate_rays(a, Some(admissibility), &Deadline::none()).expect("no deadline set")
}

/// Double description over the rows of `a` in position order. With a
/// filter, only rays with admissible zero sets are generated; without one,
/// all extremal rays are returned.
pub fn enumerate_rays<T: Scalar>(
    a: &DenseMatrix<T>,
    filter: Option<&Admissibility>,
    deadline: &Deadline,
) -> Result<RaySet<T>, TimedOut> {
    let d = a.cols();
    let admissible = |z: &ZeroSet| filter.is_none_or(|f| f.is_admissible_zeroset(z));

    let mut rays: Vec<Ray<T>> = (0..d)
        .map(|k| {
            let vector = IntVector::unit(d, k);
            let zeros = vector.zero_set();
            Ray { vector, zeros }
        })
        .filter(|r| admissible(&r.zeros))
        .collect();

    let order = sort_rows_position(a);
    let mut processed: Vec<&[T]> = Vec::with_capacity(order.len());

    for &row_idx in &order {
        deadline.check()?;
        let h = a.row(row_idx);
        let values: Vec<T> = rays.iter().map(|r| dot(r.vector.coords(), h)).collect();
        if values.iter().all(|v| v.is_zero()) {
            processed.push(h);
            continue;
        }

        let mut next: Vec<Ray<T>> = Vec::new();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (i, v) in values.iter().enumerate() {
            match v.cmp(&T::zero()) {
                Ordering::Greater => pos.push(i),
                Ordering::Less => neg.push(i),
                Ordering::Equal => {}
            }
        }

        for &p in &pos {
            for &n in &neg {
                let joint = rays[p].zeros.intersection(&rays[n].zeros);
                if !admissible(&joint) || !adjacent(&rays, p, n, &joint, &processed) {
                    continue;
                }
                let vector = rays[n]
                    .vector
                    .scale(&values[p])
                    .sub(&rays[p].vector.scale(&values[n]))
                    .primitive();
                next.push(Ray { vector, zeros: joint });
            }
        }

        rays = std::mem::take(&mut rays)
            .into_iter()
            .zip(&values)
            .filter(|(_, v)| v.is_zero())
            .map(|(r, _)| r)
            .chain(next)
            .collect();
        processed.push(h);
    }

    Ok(RaySet::from_rays(rays.into_iter().map(|r| r.vector)))
}

/// Whether rays `p` and `n` span a 2-dimensional face of the cone cut out by
/// `processed`. Any third current ray inside the candidate face rules this
/// out quickly; the rank condition decides the rest.
fn adjacent<T: Scalar>(rays: &[Ray<T>], p: usize, n: usize, joint: &ZeroSet, processed: &[&[T]]) -> bool {
    let d = joint.len();
    let support: Vec<usize> = (0..d).filter(|&k| !joint.contains(k)).collect();
    if processed.len() + 2 < support.len() {
        return false;
    }
    if rays.iter().enumerate().any(|(i, r)| i != p && i != n && joint.is_subset(&r.zeros)) {
        return false;
    }
    let sub: Vec<Vec<T>> = processed.iter().map(|h| support.iter().map(|&k| h[k].clone()).collect()).collect();
    support.len() - rank(sub) == 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn v(xs: &[i64]) -> IntVector<BigInt> {
        IntVector::from_i64(xs)
    }

    #[test]
    fn position_order_examples() {
        let a = DenseMatrix::<BigInt>::from_i64(3, &[&[1, -1, 0], &[0, 1, -1]]).unwrap();
        assert_eq!(sort_rows_position(&a), vec![1, 0]);
        let a = DenseMatrix::<BigInt>::from_i64(3, &[&[1, 1, 0], &[2, -1, 0], &[1, 3, 0]]).unwrap();
        assert_eq!(sort_rows_position(&a), vec![0, 1, 2]);
        assert!(sort_rows_position(&DenseMatrix::<BigInt>::empty(3)).is_empty());
    }

    #[test]
    fn position_order_breaks_ties_by_support() {
        let a = DenseMatrix::<BigInt>::from_i64(4, &[&[1, 1, 0, 0], &[1, 0, 0, 1], &[0, 0, 0, 0]]).unwrap();
        assert_eq!(sort_rows_position(&a), vec![2, 1, 0]);
    }

    #[test]
    fn orthant_rays() {
        let rays = enumerate_admissible_rays(&DenseMatrix::<BigInt>::empty(7), &Admissibility::quadrilateral(1));
        assert_eq!(rays.len(), 7);
        assert!(rays.rays().iter().all(|r| r.coordinate_sum() == BigInt::from(1)));
    }

    #[test]
    fn single_row_cone() {
        let a = DenseMatrix::<BigInt>::from_i64(7, &[&[1, -1, 0, 0, 0, 0, 0]]).unwrap();
        let rays = enumerate_admissible_rays(&a, &Admissibility::quadrilateral(1));
        let mut expected = vec![v(&[1, 1, 0, 0, 0, 0, 0])];
        expected.extend((2..7).map(|k| IntVector::unit(7, k)));
        expected.sort();
        assert_eq!(rays.rays(), expected.as_slice());
    }

    #[test]
    fn inadmissible_kernel_ray_is_filtered() {
        // the only way to satisfy x4 = x5 with quads is the inadmissible ray e4 + e5
        let a = DenseMatrix::<BigInt>::from_i64(7, &[&[0, 0, 0, 0, 1, -1, 0]]).unwrap();
        let filtered = enumerate_admissible_rays(&a, &Admissibility::quadrilateral(1));
        let all = enumerate_rays(&a, None, &Deadline::none()).unwrap();
        let quad_pair = v(&[0, 0, 0, 0, 1, 1, 0]);
        assert!(all.rays().contains(&quad_pair));
        assert!(!filtered.rays().contains(&quad_pair));
        assert_eq!(filtered.len(), all.len() - 1);
    }

    #[test]
    fn two_dimensional_slice() {
        // x1 + x2 = x3 in R^3: rays (1,0,1), (0,1,1)
        let a = DenseMatrix::<BigInt>::from_i64(3, &[&[1, 1, -1]]).unwrap();
        let rays = enumerate_rays(&a, None, &Deadline::none()).unwrap();
        assert_eq!(rays.rays(), &[v(&[0, 1, 1]), v(&[1, 0, 1])]);
    }

    #[test]
    fn face_filter_selects_rays() {
        let rays = RaySet::from_rays((0..3).map(|k| IntVector::<BigInt>::unit(3, k)));
        let face = ZeroSet::from_indices(3, [2]);
        assert_eq!(rays.filter_face(&face).len(), 2);
        assert!(rays.filter_face(&ZeroSet::full(3)).is_empty());
    }
}
