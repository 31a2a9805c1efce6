//! Primal Hilbert basis computation from extremal rays, and the primal
//! enumeration of fundamental normal surfaces built on top of it.
//!
//! For a pointed cone given by its extremal rays: triangulate it into
//! simplicial subcones, collect the lattice points of the half-open
//! parallelotope of every subcone together with the rays themselves, and
//! discard every candidate that dominates another one componentwise.
//!
//! Fundamental normal surfaces are then the union of the Hilbert bases of
//! the maximal admissible faces of the solution cone.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::cone::{Admissibility, BasisSet, DenseMatrix, IntVector};
use crate::faces::{maximal_faces_traced, rays_in_face, MaximalFaceSet};
use crate::linalg::{cofactor_normal, echelon_pivots, rank, smith_left};
use crate::num::{dot, Scalar};
use crate::vertex_enum::{enumerate_rays, RaySet};
use crate::{Deadline, TimedOut};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrimalError {
    #[error("cone is not pointed: it contains a ray and its negative")]
    NotPointed,
    #[error("zero vector among generators")]
    ZeroVector,
    #[error("generators of a simplicial cone must be linearly independent")]
    Dependent,
    #[error(transparent)]
    TimedOut(#[from] TimedOut),
}

/// A cone whose generators are linearly independent primitive vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialCone<T> {
    generators: Vec<IntVector<T>>,
}

impl<T: Scalar> SimplicialCone<T> {
    pub fn new(generators: Vec<IntVector<T>>) -> Result<Self, PrimalError> {
        if generators.iter().any(IntVector::is_zero) {
            return Err(PrimalError::ZeroVector);
        }
        let generators: Vec<IntVector<T>> = generators.iter().map(IntVector::primitive).collect();
        if rank(generators.iter().map(|g| g.coords().to_vec()).collect()) != generators.len() {
            return Err(PrimalError::Dependent);
        }
        Ok(SimplicialCone { generators })
    }

    pub fn generators(&self) -> &[IntVector<T>] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    /// Index of the generator lattice in the integer points of its linear
    /// span; equals the number of lattice points in the parallelotope.
    pub fn lattice_index(&self) -> T {
        let (diag, _) = smith_left(&self.rows());
        diag.into_iter().fold(T::one(), |acc, d| acc * d)
    }

    fn rows(&self) -> Vec<Vec<T>> {
        self.generators.iter().map(|g| g.coords().to_vec()).collect()
    }
}

/// Result of the placing triangulation, in the projected coordinates.
struct Placement<T> {
    rays: Vec<IntVector<T>>,
    /// Coordinates kept by the projection; injective on the span of the rays.
    pivots: Vec<usize>,
    simplices: Vec<Vec<usize>>,
    /// Inward normals of the facets of the cone, one per facet.
    hull: Vec<Vec<T>>,
}

/// Placing triangulation: the first independent rays form a simplex, and
/// every later ray is coned over the boundary facets visible from it.
fn place<T: Scalar>(rays: &[IntVector<T>]) -> Result<Placement<T>, PrimalError> {
    if rays.iter().any(IntVector::is_zero) {
        return Err(PrimalError::ZeroVector);
    }
    let rays: Vec<IntVector<T>> = rays.iter().map(IntVector::primitive).collect();
    for (i, r) in rays.iter().enumerate() {
        let neg = r.scale(&(-T::one()));
        if rays[i + 1..].contains(&neg) {
            return Err(PrimalError::NotPointed);
        }
    }
    if rays.is_empty() {
        return Ok(Placement { rays, pivots: Vec::new(), simplices: Vec::new(), hull: Vec::new() });
    }

    let pivots = echelon_pivots(rays.iter().map(|r| r.coords().to_vec()).collect());
    let k = pivots.len();
    let proj: Vec<Vec<T>> = rays.iter().map(|r| pivots.iter().map(|&c| r[c].clone()).collect()).collect();
    if k == 1 {
        // every ray is the same ray after making it primitive
        return Ok(Placement { simplices: vec![vec![0]], hull: vec![proj[0].clone()], rays: vec![rays[0].clone()], pivots });
    }

    let mut initial: Vec<usize> = Vec::with_capacity(k);
    for i in 0..rays.len() {
        let mut trial: Vec<Vec<T>> = initial.iter().map(|&j| proj[j].clone()).collect();
        trial.push(proj[i].clone());
        if rank(trial) == initial.len() + 1 {
            initial.push(i);
            if initial.len() == k {
                break;
            }
        }
    }

    let mut simplices: Vec<Vec<usize>> = vec![initial.clone()];
    let mut normals: HashMap<Vec<usize>, Vec<T>> = HashMap::new();
    let mut inward_normal = |facet: &[usize], opposite: usize| -> Vec<T> {
        let normal = normals
            .entry(facet.to_vec())
            .or_insert_with(|| cofactor_normal(&facet.iter().map(|&j| proj[j].clone()).collect::<Vec<_>>()));
        let inward = dot(normal, &proj[opposite]);
        debug_assert!(!inward.is_zero(), "simplex is degenerate");
        if inward.is_negative() {
            normal.iter().map(|x| -x.clone()).collect()
        } else {
            normal.clone()
        }
    };

    for i in (0..rays.len()).filter(|i| !initial.contains(i)) {
        let mut added = Vec::new();
        for (facet, opposite) in boundary_facets(&simplices) {
            if dot(&inward_normal(&facet, opposite), &proj[i]).is_negative() {
                let mut s = facet;
                s.push(i);
                s.sort_unstable();
                added.push(s);
            }
        }
        simplices.extend(added);
    }

    // facets of the cone are the boundary facets of the triangulation,
    // merged where several share one hyperplane
    let mut hull: Vec<Vec<T>> = boundary_facets(&simplices)
        .into_iter()
        .map(|(facet, opposite)| IntVector::new(inward_normal(&facet, opposite)).primitive().into_inner())
        .collect();
    hull.sort();
    hull.dedup();
    Ok(Placement { rays, pivots, simplices, hull })
}

/// Facets lying in exactly one simplex, each with the opposite ray of that
/// simplex, in sorted order.
fn boundary_facets(simplices: &[Vec<usize>]) -> Vec<(Vec<usize>, usize)> {
    let mut facets: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();
    for s in simplices {
        for drop in 0..s.len() {
            let facet: Vec<usize> = s.iter().copied().filter(|&x| x != s[drop]).collect();
            facets.entry(facet).or_insert((0, s[drop])).0 += 1;
        }
    }
    let mut boundary: Vec<(Vec<usize>, usize)> =
        facets.into_iter().filter(|(_, (count, _))| *count == 1).map(|(f, (_, opp))| (f, opp)).collect();
    boundary.sort();
    boundary
}

/// Placing triangulation of the cone generated by `rays` into simplicial
/// cones spanned by subsets of the rays.
pub fn triangulate_cone<T: Scalar>(rays: &[IntVector<T>]) -> Result<Vec<SimplicialCone<T>>, PrimalError> {
    let placement = place(rays)?;
    placement
        .simplices
        .iter()
        .map(|s| SimplicialCone::new(s.iter().map(|&j| placement.rays[j].clone()).collect()))
        .collect()
}

/// Every integer point `Σ λ_i v_i` with `0 <= λ_i < 1`, origin included.
///
/// With `U · V · W = diag(d_1..d_k)` the Smith form of the generator matrix
/// `V`, the quotient of the saturated lattice by the generator lattice is
/// `⊕ Z/d_i`. The residue `a` (with `0 <= a_i < d_i`) has coordinates
/// `λ = (a_i / d_i)_i · U`, reduced mod 1.
pub fn parallelotope_points<T: Scalar>(cone: &SimplicialCone<T>) -> Vec<IntVector<T>> {
    let rows = cone.rows();
    let dim = rows.first().map_or(0, Vec::len);
    let (diag, u) = smith_left(&rows);
    let k = diag.len();
    if k == 0 {
        return vec![IntVector::zeros(dim)];
    }
    let top = diag[k - 1].clone();
    let scale: Vec<T> = diag.iter().map(|d| top.clone() / d.clone()).collect();

    let mut points = Vec::new();
    let mut residue: Vec<T> = vec![T::zero(); k];
    loop {
        // λ_j · top = Σ_i a_i (top / d_i) U_ij
        let mut point = vec![T::zero(); dim];
        for j in 0..k {
            let mut lam = T::zero();
            for i in 0..k {
                if !residue[i].is_zero() {
                    lam = lam + residue[i].clone() * scale[i].clone() * u[i][j].clone();
                }
            }
            let frac = lam.mod_floor(&top);
            if !frac.is_zero() {
                for (p, g) in point.iter_mut().zip(&rows[j]) {
                    *p = p.clone() + frac.clone() * g.clone();
                }
            }
        }
        for p in point.iter_mut() {
            debug_assert!(p.is_multiple_of(&top));
            *p = p.clone() / top.clone();
        }
        points.push(IntVector::new(point));

        // odometer over the residues
        let mut pos = 0;
        loop {
            if pos == k {
                return points;
            }
            residue[pos] = residue[pos].clone() + T::one();
            if residue[pos] < diag[pos] {
                break;
            }
            residue[pos] = T::zero();
            pos += 1;
        }
    }
}

/// Removes every candidate that dominates another candidate componentwise.
///
/// All candidates must lie in one cone of the form `{Ax = 0, x >= 0}`
/// intersected with coordinate hyperplanes; then `x - b >= 0` certifies
/// that `x - b` is in the cone too. Candidates are visited by increasing
/// coordinate sum, so one pass leaves only irreducible elements.
pub fn reduce_generators<T: Scalar>(
    candidates: impl IntoIterator<Item = IntVector<T>>,
) -> Result<BasisSet<T>, PrimalError> {
    let mut sorted: Vec<(T, IntVector<T>)> = candidates.into_iter().map(|v| (v.coordinate_sum(), v)).collect();
    if sorted.iter().any(|(_, v)| v.is_zero()) {
        return Err(PrimalError::ZeroVector);
    }
    sorted.sort();
    sorted.dedup_by(|a, b| a.1 == b.1);
    let mut kept: Vec<(IntVector<T>, crate::cone::ZeroSet)> = Vec::new();
    for (_, x) in sorted {
        let zx = x.zero_set();
        if !kept.iter().any(|(b, zb)| zx.is_subset(zb) && b.le_componentwise(&x)) {
            kept.push((x, zx));
        }
    }
    Ok(kept.into_iter().map(|(v, _)| v).collect())
}

/// Hilbert basis of the pointed cone generated by `rays`.
///
/// A candidate is dropped when subtracting an earlier one leaves a point on
/// the inner side of every facet. Candidates are visited by increasing
/// total facet value, which is positive on the cone apart from the origin.
pub fn hilbert_basis_simplicial_union<T: Scalar>(rays: &[IntVector<T>]) -> Result<BasisSet<T>, PrimalError> {
    let placement = place(rays)?;
    let mut candidates: Vec<IntVector<T>> = placement.rays.clone();
    for s in &placement.simplices {
        let cone = SimplicialCone::new(s.iter().map(|&j| placement.rays[j].clone()).collect())?;
        candidates.extend(parallelotope_points(&cone).into_iter().filter(|p| !p.is_zero()));
    }

    let values = |x: &IntVector<T>| -> Vec<T> {
        let p: Vec<T> = placement.pivots.iter().map(|&c| x[c].clone()).collect();
        placement.hull.iter().map(|n| dot(n, &p)).collect()
    };
    let mut graded: Vec<(T, Vec<T>, IntVector<T>)> = candidates
        .into_iter()
        .map(|x| {
            let v = values(&x);
            (v.iter().fold(T::zero(), |a, b| a + b.clone()), v, x)
        })
        .collect();
    graded.sort();
    graded.dedup_by(|a, b| a.2 == b.2);

    let mut kept: Vec<(Vec<T>, IntVector<T>)> = Vec::new();
    for (_, vx, x) in graded {
        let reducible = kept.iter().any(|(vb, _)| vx.iter().zip(vb).all(|(a, b)| a >= b));
        if !reducible {
            kept.push((vx, x));
        }
    }
    Ok(kept.into_iter().map(|(_, x)| x).collect())
}

/// Wall-clock time spent in each stage of the primal enumeration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StageTimings {
    pub vertex: Duration,
    pub faces: Duration,
    pub hilbert: Duration,
}

#[derive(Clone, Debug)]
pub struct PrimalOutcome<T: Ord> {
    pub basis: BasisSet<T>,
    pub vertices: RaySet<T>,
    pub faces: MaximalFaceSet,
    /// Layer (dimension) in which each maximal face was found.
    pub face_dims: Vec<usize>,
    pub timings: StageTimings,
}

/// Admissible Hilbert basis of `{Ax = 0, x >= 0}` by the primal method:
/// admissible extremal rays, then maximal admissible faces, then one Hilbert
/// basis per face.
pub fn fundamental_primal_cone<T: Scalar>(
    a: &DenseMatrix<T>,
    admissibility: &Admissibility,
    deadline: &Deadline,
) -> Result<PrimalOutcome<T>, PrimalError> {
    let start = Instant::now();
    let vertices = enumerate_rays(a, Some(admissibility), deadline)?;
    let vertex_done = Instant::now();

    let (faces, face_dims) = maximal_faces_traced(&vertices, admissibility, deadline, |_| {})?;
    let faces_done = Instant::now();

    let bases: Vec<Result<BasisSet<T>, PrimalError>> = faces
        .faces
        .par_iter()
        .map(|face| {
            deadline.check()?;
            hilbert_basis_simplicial_union(rays_in_face(&vertices, face).rays())
        })
        .collect();
    let mut basis = BasisSet::new();
    for b in bases {
        basis.extend(b?);
    }
    let hilbert_done = Instant::now();

    Ok(PrimalOutcome {
        basis,
        vertices,
        faces,
        face_dims,
        timings: StageTimings {
            vertex: vertex_done - start,
            faces: faces_done - vertex_done,
            hilbert: hilbert_done - faces_done,
        },
    })
}
