//! Maximal admissible faces of the solution cone, found from the zero sets
//! of the admissible extremal rays alone.
//!
//! Layer `k` holds the zero sets of the admissible `k`-dimensional faces.
//! Layer `k+1` is obtained by intersecting each member of layer `k` with
//! each ray zero set that it is not contained in, keeping admissible
//! results and then discarding any set that has a strict superset in the
//! same layer. A member of layer `k` that admits no such extension is a
//! maximal admissible face.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::cone::{Admissibility, ZeroSet};
use crate::num::Scalar;
use crate::vertex_enum::RaySet;
use crate::{Deadline, TimedOut};

/// One completed layer of the face enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceLayer {
    /// Layer index, equal to the dimension of the faces it holds.
    pub k: usize,
    /// Zero sets in sorted order, none a strict subset of another.
    pub sets: Vec<ZeroSet>,
}

/// Zero sets of the maximal admissible faces, in sorted order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MaximalFaceSet {
    pub faces: Vec<ZeroSet>,
}

impl MaximalFaceSet {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ZeroSet> {
        self.faces.iter()
    }

    /// One line per face: hex bitmask, then the layer (dimension) it was found in.
    pub fn debug_dump(&self, dims: &[usize]) -> String {
        self.faces.iter().zip(dims).map(|(z, d)| format!("{} {d}\n", z.to_hex())).collect()
    }
}

pub fn maximal_admissible_faces<T: Scalar>(rays: &RaySet<T>, admissibility: &Admissibility) -> MaximalFaceSet {
    maximal_faces_traced(rays, admissibility, &Deadline::none(), |_| {})
        .expect("no deadline set")
        .0
}

/// Runs the layer construction, handing every completed layer to `observe`
/// before it is discarded. Also returns the layer index of each output face.
pub fn maximal_faces_traced<T: Scalar>(
    rays: &RaySet<T>,
    admissibility: &Admissibility,
    deadline: &Deadline,
    mut observe: impl FnMut(&FaceLayer),
) -> Result<(MaximalFaceSet, Vec<usize>), TimedOut> {
    let mut base: Vec<ZeroSet> = rays.zero_sets().to_vec();
    base.sort();
    base.dedup();

    let mut output: Vec<(ZeroSet, usize)> = Vec::new();
    let mut layer = FaceLayer { k: 1, sets: base.clone() };

    while !layer.sets.is_empty() {
        deadline.check()?;
        observe(&layer);
        assert!(layer.k <= admissibility.dim().max(1), "face layers exceed the ambient dimension");

        // A join z∩v that is not a (k+1)-face strictly contains a (k+1)-face
        // between it and z, which is itself some z∩w. So the maximal sets of
        // the whole layer are exactly the union of the per-parent maxima.
        let expansions: Vec<Vec<ZeroSet>> = layer
            .sets
            .par_iter()
            .map(|z| {
                let joins = base
                    .iter()
                    .filter(|v| !z.is_subset(v))
                    .map(|v| z.intersection(v))
                    .filter(|joint| admissibility.is_admissible_zeroset(joint))
                    .collect();
                reduce_to_maximal(joins)
            })
            .collect();

        let mut next: HashSet<ZeroSet> = HashSet::new();
        for (z, grown) in layer.sets.iter().zip(expansions) {
            if grown.is_empty() {
                output.push((z.clone(), layer.k));
            }
            next.extend(grown);
        }
        let mut sets: Vec<ZeroSet> = next.into_iter().collect();
        sets.sort();
        debug_assert!(sets.len() > 2000 || reduce_to_maximal(sets.clone()) == sets);
        layer = FaceLayer { k: layer.k + 1, sets };
    }

    output.sort();
    let (faces, dims) = output.into_iter().unzip();
    Ok((MaximalFaceSet { faces }, dims))
}

/// Keeps the sets that have no strict superset in the collection, sorted.
pub fn reduce_to_maximal(mut sets: Vec<ZeroSet>) -> Vec<ZeroSet> {
    sets.sort();
    sets.dedup();
    // a strict superset has strictly more bits
    let counts: Vec<usize> = sets.iter().map(ZeroSet::count).collect();
    let keep: Vec<bool> = (0..sets.len())
        .into_par_iter()
        .map(|i| !(0..sets.len()).any(|j| counts[j] > counts[i] && sets[i].is_subset(&sets[j])))
        .collect();
    sets.into_iter().zip(keep).filter(|(_, k)| *k).map(|(s, _)| s).collect()
}

/// Rays of `rays` lying in the face with zero set `face`.
pub fn rays_in_face<T: Scalar>(rays: &RaySet<T>, face: &ZeroSet) -> RaySet<T> {
    rays.filter_face(face)
}
