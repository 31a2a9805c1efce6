//! Slow reference implementations used to check the production algorithms.
//!
//! Apart from [`brute_force_rays`], which reruns the double description
//! without the admissibility filter, everything here is an exhaustive search
//! over small boxes or coordinate subsets that shares no code with the
//! production engines. Inputs beyond fixed sizes are refused.

use num_traits::Signed;
use thiserror::Error;

use crate::cone::{Admissibility, BasisSet, DenseMatrix, IntVector, ZeroSet};
use crate::linalg::{kernel_basis, rank, solve_combination};
use crate::num::Scalar;
use crate::primal::SimplicialCone;
use crate::vertex_enum::RaySet;

/// Largest box the exhaustive searches will walk.
pub const BOX_LIMIT: u128 = 1_000_000;
/// Largest ambient dimension for the subset enumerations.
pub const SUBSET_DIM_LIMIT: usize = 21;
/// Largest ambient dimension for the face lattice (it walks all `2^d` zero sets).
pub const LATTICE_DIM_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("input too large for the oracle: {0}")]
    ScaleGuard(String),
    #[error("oracle precondition violated: {0}")]
    Precondition(String),
}

fn to_i64_rows<T: Scalar>(a: &DenseMatrix<T>) -> Result<Vec<Vec<i64>>, OracleError> {
    a.rows()
        .iter()
        .map(|r| r.iter().map(|x| x.to_i64()).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| OracleError::ScaleGuard("matrix entry exceeds i64".into()))
}

/// Whether the nonzero cone point `x` is irreducible: no integer `y` with
/// `0 <= y <= x`, `Ay = 0` and `y` different from `0` and `x`.
pub fn is_fundamental_oracle<T: Scalar>(a: &DenseMatrix<T>, x: &IntVector<T>) -> Result<bool, OracleError> {
    if x.len() != a.cols() {
        return Err(OracleError::Precondition(format!("vector has {} coordinates, matrix has {}", x.len(), a.cols())));
    }
    if !x.is_nonnegative() || x.is_zero() {
        return Err(OracleError::Precondition("vector must be nonnegative and nonzero".into()));
    }
    if !a.annihilates(x).expect("lengths checked") {
        return Err(OracleError::Precondition("vector does not satisfy Ax = 0".into()));
    }
    let rows = to_i64_rows(a)?;
    let xs: Vec<i64> = x
        .coords()
        .iter()
        .map(|c| c.to_i64())
        .collect::<Option<_>>()
        .ok_or_else(|| OracleError::ScaleGuard("coordinate exceeds i64".into()))?;
    let support: Vec<usize> = (0..xs.len()).filter(|&k| xs[k] > 0).collect();
    let volume = support.iter().try_fold(1u128, |acc, &k| acc.checked_mul(xs[k] as u128 + 1));
    match volume {
        Some(v) if v <= BOX_LIMIT => {}
        _ => return Err(OracleError::ScaleGuard(format!("box around x exceeds {BOX_LIMIT} points"))),
    }

    let mut y = vec![0i64; xs.len()];
    loop {
        // odometer over the support
        let mut pos = 0;
        loop {
            if pos == support.len() {
                return Ok(true);
            }
            let k = support[pos];
            y[k] += 1;
            if y[k] <= xs[k] {
                break;
            }
            y[k] = 0;
            pos += 1;
        }
        if y == xs {
            continue;
        }
        if rows.iter().all(|r| r.iter().zip(&y).map(|(c, v)| c * v).sum::<i64>() == 0) {
            return Ok(false);
        }
    }
}

/// All nonzero admissible integer points of `{Ax = 0, x >= 0}` with
/// coordinate sum at most `bound`, in lexicographic order.
pub fn admissible_kernel_points<T: Scalar>(
    a: &DenseMatrix<T>,
    adm: &Admissibility,
    bound: u32,
) -> Result<Vec<IntVector<T>>, OracleError> {
    let rows = to_i64_rows(a)?;
    let d = a.cols();
    if adm.dim() != d {
        return Err(OracleError::Precondition("admissibility dimension differs from matrix width".into()));
    }
    // visit columns so that rows close (and force values) as early as possible
    let order = closing_order(&rows, d);
    let permuted: Vec<Vec<i64>> = rows.iter().map(|r| order.iter().map(|&j| r[j]).collect()).collect();
    let all_groups = adm.group_of_coordinate();
    let groups: Vec<Option<usize>> = order.iter().map(|&j| all_groups[j]).collect();

    let mut search = KernelSearch::new(&permuted, d, groups);
    let mut x = vec![0i64; d];
    let mut residual = vec![0i64; rows.len()];
    let mut group_used = vec![false; search.group_count];
    search.walk(0, bound as i64, &mut x, &mut residual, &mut group_used);
    let mut found: Vec<IntVector<T>> = search
        .found
        .into_iter()
        .map(|p| {
            let mut coords = vec![T::zero(); d];
            for (&j, v) in order.iter().zip(p) {
                coords[j] = T::from_i64(v).expect("fits in the scalar type");
            }
            IntVector::new(coords)
        })
        .collect();
    found.sort();
    Ok(found)
}

/// Greedy column order: repeatedly take the column touching the most rows
/// that are already open, breaking ties by fewest newly opened rows.
fn closing_order(rows: &[Vec<i64>], d: usize) -> Vec<usize> {
    let mut open = vec![false; rows.len()];
    let mut left: Vec<usize> = (0..d).collect();
    let mut order = Vec::with_capacity(d);
    while !left.is_empty() {
        let score = |j: usize| {
            let touched = rows.iter().enumerate().filter(|(_, r)| r[j] != 0);
            let (old, new) = touched.fold((0, 0), |(o, n), (i, _)| if open[i] { (o + 1, n) } else { (o, n + 1) });
            (old, std::cmp::Reverse(new), std::cmp::Reverse(j))
        };
        let (pos, &best) = left.iter().enumerate().max_by_key(|(_, &j)| score(j)).expect("nonempty");
        left.remove(pos);
        for (i, r) in rows.iter().enumerate() {
            if r[best] != 0 {
                open[i] = true;
            }
        }
        order.push(best);
    }
    order
}

struct KernelSearch<'a> {
    rows: &'a [Vec<i64>],
    d: usize,
    groups: Vec<Option<usize>>,
    group_count: usize,
    /// `max(0, max_{c >= j} a_rc)` and `min(0, min_{c >= j} a_rc)` per row.
    pos_rest: Vec<Vec<i64>>,
    neg_rest: Vec<Vec<i64>>,
    /// Rows whose last nonzero column is `j`.
    closing: Vec<Vec<usize>>,
    found: Vec<Vec<i64>>,
}

impl<'a> KernelSearch<'a> {
    fn new(rows: &'a [Vec<i64>], d: usize, groups: Vec<Option<usize>>) -> Self {
        let group_count = groups.iter().flatten().max().map_or(0, |g| g + 1);
        let mut pos_rest = vec![vec![0; d + 1]; rows.len()];
        let mut neg_rest = vec![vec![0; d + 1]; rows.len()];
        let mut closing = vec![Vec::new(); d];
        for (r, row) in rows.iter().enumerate() {
            for j in (0..d).rev() {
                pos_rest[r][j] = pos_rest[r][j + 1].max(row[j]);
                neg_rest[r][j] = neg_rest[r][j + 1].min(row[j]);
            }
            if let Some(last) = (0..d).rev().find(|&j| row[j] != 0) {
                closing[last].push(r);
            }
        }
        KernelSearch { rows, d, groups, group_count, pos_rest, neg_rest, closing, found: Vec::new() }
    }

    /// Whether the residuals can still reach zero using columns `j..` with
    /// total weight at most `budget`.
    fn feasible(&self, j: usize, budget: i64, residual: &[i64]) -> bool {
        residual.iter().enumerate().all(|(r, &res)| {
            let need = -res;
            need >= self.neg_rest[r][j] * budget && need <= self.pos_rest[r][j] * budget
        })
    }

    fn walk(&mut self, j: usize, budget: i64, x: &mut Vec<i64>, residual: &mut Vec<i64>, group_used: &mut Vec<bool>) {
        if j == self.d {
            if x.iter().any(|&v| v != 0) {
                self.found.push(x.clone());
            }
            return;
        }
        let group = self.groups[j];
        let mut hi = budget;
        if group.is_some_and(|g| group_used[g]) {
            hi = 0;
        }
        // a row whose last column is j fixes the value here
        let mut forced: Option<i64> = None;
        for &r in &self.closing[j] {
            let c = self.rows[r][j];
            if residual[r] % c != 0 {
                return;
            }
            let v = -residual[r] / c;
            if v < 0 || forced.is_some_and(|f| f != v) {
                return;
            }
            forced = Some(v);
        }
        let (lo, hi) = match forced {
            Some(v) if v > hi => return,
            Some(v) => (v, v),
            None => (0, hi),
        };
        for v in lo..=hi {
            x[j] = v;
            for (r, row) in self.rows.iter().enumerate() {
                residual[r] += row[j] * v;
            }
            let claims = v > 0 && group.is_some();
            if claims {
                group_used[group.unwrap()] = true;
            }
            if self.feasible(j + 1, budget - v, residual) {
                self.walk(j + 1, budget - v, x, residual, group_used);
            }
            if claims {
                group_used[group.unwrap()] = false;
            }
            for (r, row) in self.rows.iter().enumerate() {
                residual[r] -= row[j] * v;
            }
        }
        x[j] = 0;
    }
}

/// Admissible Hilbert basis elements with coordinate sum at most `bound`.
///
/// A kernel point is kept when no other enumerated point lies below it
/// componentwise. Anything below a point has a smaller sum, so it was
/// enumerated too, and the result is exact up to `bound`.
pub fn brute_force_admissible_hilbert<T: Scalar>(
    a: &DenseMatrix<T>,
    adm: &Admissibility,
    bound: u32,
) -> Result<BasisSet<T>, OracleError> {
    let mut points = admissible_kernel_points(a, adm, bound)?;
    points.sort_by_key(|p| p.coordinate_sum());
    let mut kept: Vec<IntVector<T>> = Vec::new();
    for p in points {
        if !kept.iter().any(|k| k.le_componentwise(&p)) {
            kept.push(p);
        }
    }
    for p in &kept {
        assert!(is_fundamental_oracle(a, p)?, "minimal kernel point {p} is decomposable");
    }
    Ok(kept.into_iter().collect())
}

/// Largest coordinate-sum bound [`stable_admissible_hilbert`] will try.
pub const BOUND_LIMIT: u32 = 256;

/// Runs [`brute_force_admissible_hilbert`] with doubling bounds until one
/// doubling leaves the output unchanged. The first bound is the largest
/// coordinate sum of an admissible extremal ray (found by
/// [`support_enumeration_rays`]), since every such ray is itself a basis
/// element. Returns the basis and the final bound.
pub fn stable_admissible_hilbert<T: Scalar>(
    a: &DenseMatrix<T>,
    adm: &Admissibility,
) -> Result<(BasisSet<T>, u32), OracleError> {
    let rays = support_enumeration_rays(a, adm)?;
    let start = rays.rays().iter().filter_map(|r| r.coordinate_sum().to_u32()).max().unwrap_or(1).max(1);
    let mut bound = start;
    let mut basis = brute_force_admissible_hilbert(a, adm, bound)?;
    loop {
        if bound > BOUND_LIMIT / 2 {
            return Err(OracleError::ScaleGuard(format!("bound would exceed {BOUND_LIMIT}")));
        }
        let next = brute_force_admissible_hilbert(a, adm, bound * 2)?;
        bound *= 2;
        if next == basis {
            return Ok((basis, bound));
        }
        basis = next;
    }
}

/// Largest ambient dimension for [`brute_force_rays`].
pub const RAY_DIM_LIMIT: usize = 14;

/// Admissible extremal rays via the unfiltered double description followed
/// by an admissibility filter.
pub fn brute_force_rays<T: Scalar>(a: &DenseMatrix<T>, adm: &Admissibility) -> Result<RaySet<T>, OracleError> {
    if a.cols() > RAY_DIM_LIMIT {
        return Err(OracleError::ScaleGuard(format!("{} coordinates exceeds {RAY_DIM_LIMIT}", a.cols())));
    }
    let all = crate::vertex_enum::enumerate_rays(a, None, &crate::Deadline::none()).expect("no deadline set");
    Ok(RaySet::from_rays(all.rays().iter().filter(|r| adm.is_admissible_vector(r)).cloned()))
}

/// Admissible extremal rays by minimal support: a nonnegative kernel vector
/// spans an extremal ray exactly when the columns of `A` on its support have
/// a one-dimensional kernel.
pub fn support_enumeration_rays<T: Scalar>(a: &DenseMatrix<T>, adm: &Admissibility) -> Result<RaySet<T>, OracleError> {
    let d = a.cols();
    if d > SUBSET_DIM_LIMIT {
        return Err(OracleError::ScaleGuard(format!("{d} coordinates exceeds {SUBSET_DIM_LIMIT}")));
    }
    let rows = to_i64_rows(a)?;
    let columns: Vec<Vec<i128>> = (0..d).map(|j| rows.iter().map(|r| r[j] as i128).collect()).collect();
    let groups = adm.group_of_coordinate();
    let mut rays = Vec::new();
    let mut chosen = Vec::new();
    let mut echelon: Vec<(usize, Vec<i128>)> = Vec::new();
    let mut group_used = vec![false; groups.iter().flatten().max().map_or(0, |g| g + 1)];
    support_walk(0, &columns, &groups, &mut chosen, &mut echelon, &mut group_used, &mut |support: &[usize]| {
        let sub: Vec<Vec<T>> =
            rows.iter().map(|r| support.iter().map(|&j| T::from_i64(r[j]).unwrap()).collect()).collect();
        let kernel = kernel_basis(&sub, support.len());
        debug_assert_eq!(kernel.len(), 1);
        let v = &kernel[0];
        let sign = if v.iter().all(|c| c.is_positive()) {
            T::one()
        } else if v.iter().all(|c| c.is_negative()) {
            -T::one()
        } else {
            return;
        };
        let mut full = vec![T::zero(); d];
        for (&j, c) in support.iter().zip(v) {
            full[j] = c.clone() * sign.clone();
        }
        rays.push(IntVector::new(full));
    });
    Ok(RaySet::from_rays(rays))
}

/// Depth-first search over admissible supports whose column kernel has
/// dimension at most one, reporting those where it is exactly one.
fn support_walk(
    j: usize,
    columns: &[Vec<i128>],
    groups: &[Option<usize>],
    chosen: &mut Vec<usize>,
    echelon: &mut Vec<(usize, Vec<i128>)>,
    group_used: &mut Vec<bool>,
    report: &mut dyn FnMut(&[usize]),
) {
    if j == columns.len() {
        if chosen.len() == echelon.len() + 1 {
            report(chosen);
        }
        return;
    }
    support_walk(j + 1, columns, groups, chosen, echelon, group_used, report);

    if groups[j].is_some_and(|g| group_used[g]) {
        return;
    }
    let independent = reduce_column(&columns[j], echelon);
    let nullity = chosen.len() + 1 - echelon.len() - usize::from(independent.is_some());
    if nullity > 1 {
        return;
    }
    let pushed = independent.is_some();
    if let Some(entry) = independent {
        echelon.push(entry);
    }
    if let Some(g) = groups[j] {
        group_used[g] = true;
    }
    chosen.push(j);
    support_walk(j + 1, columns, groups, chosen, echelon, group_used, report);
    chosen.pop();
    if let Some(g) = groups[j] {
        group_used[g] = false;
    }
    if pushed {
        echelon.pop();
    }
}

/// Reduces `col` against the stored echelon vectors; returns the new
/// echelon entry if `col` is independent of them.
fn reduce_column(col: &[i128], echelon: &[(usize, Vec<i128>)]) -> Option<(usize, Vec<i128>)> {
    let mut c = col.to_vec();
    for (p, b) in echelon {
        if c[*p] != 0 {
            let (cp, bp) = (c[*p], b[*p]);
            for (x, y) in c.iter_mut().zip(b) {
                *x = *x * bp - *y * cp;
            }
            let g = c.iter().fold(0i128, |g, &x| num_integer::gcd(g, x));
            if g > 1 {
                c.iter_mut().for_each(|x| *x /= g);
            }
        }
    }
    let p = c.iter().position(|&x| x != 0)?;
    Some((p, c))
}

/// A face of the solution cone: its zero set and its dimension.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Face {
    pub zero_set: ZeroSet,
    pub dim: usize,
}

/// Every face of the cone, found by intersecting it with each coordinate
/// subspace `{x_i = 0 : i in Z}` for all `2^d` choices of `Z`. The zero set
/// of the face is the largest `Z'` with the same intersection, and its
/// dimension is the rank of the extremal rays it contains.
pub fn face_lattice<T: Scalar>(a: &DenseMatrix<T>) -> Result<Vec<Face>, OracleError> {
    let d = a.cols();
    if d > LATTICE_DIM_LIMIT {
        return Err(OracleError::ScaleGuard(format!("{d} coordinates exceeds {LATTICE_DIM_LIMIT}")));
    }
    let rays = support_enumeration_rays(a, &Admissibility::unconstrained(d))?;
    let mut faces = std::collections::BTreeSet::new();
    for mask in 0u32..(1 << d) {
        let z = ZeroSet::from_indices(d, (0..d).filter(|k| mask & (1 << k) != 0));
        let inside: Vec<&IntVector<T>> =
            rays.iter().filter(|(_, rz)| z.is_subset(rz)).map(|(r, _)| r).collect();
        let closure = rays
            .iter()
            .filter(|(_, rz)| z.is_subset(rz))
            .fold(ZeroSet::full(d), |acc, (_, rz)| acc.intersection(rz));
        let dim = rank(inside.iter().map(|r| r.coords().to_vec()).collect());
        faces.insert(Face { zero_set: closure, dim });
    }
    Ok(faces.into_iter().collect())
}

/// Integer points of the half-open parallelotope of `cone`, found by
/// scanning its bounding box and solving for the coefficients.
pub fn parallelotope_points_scan<T: Scalar>(cone: &SimplicialCone<T>) -> Result<Vec<IntVector<T>>, OracleError> {
    let gens: Vec<Vec<T>> = cone.generators().iter().map(|g| g.coords().to_vec()).collect();
    let Some(dim) = gens.first().map(Vec::len) else {
        return Ok(vec![IntVector::zeros(0)]);
    };
    let mut lo = vec![T::zero(); dim];
    let mut hi = vec![T::zero(); dim];
    for g in &gens {
        for k in 0..dim {
            if g[k].is_negative() {
                lo[k] = lo[k].clone() + g[k].clone();
            } else {
                hi[k] = hi[k].clone() + g[k].clone();
            }
        }
    }
    let volume = (0..dim).try_fold(1u128, |acc, k| {
        let w = (hi[k].clone() - lo[k].clone()).to_u128()? + 1;
        acc.checked_mul(w)
    });
    match volume {
        Some(v) if v <= BOX_LIMIT => {}
        _ => return Err(OracleError::ScaleGuard(format!("bounding box exceeds {BOX_LIMIT} points"))),
    }

    let mut points = Vec::new();
    let mut p = lo.clone();
    loop {
        if let Some(lambda) = solve_combination(&gens, &p) {
            let one = num_rational::Ratio::from_integer(T::one());
            if lambda.iter().all(|l| !l.is_negative() && l < &one) {
                points.push(IntVector::new(p.clone()));
            }
        }
        let mut k = 0;
        loop {
            if k == dim {
                points.sort();
                return Ok(points);
            }
            p[k] = p[k].clone() + T::one();
            if p[k] <= hi[k] {
                break;
            }
            p[k] = lo[k].clone();
            k += 1;
        }
    }
}
