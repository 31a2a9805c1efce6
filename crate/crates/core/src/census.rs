//! Seeded random triangulations for tests and benchmarks.
//!
//! Faces are paired uniformly at random, some are left as boundary, and
//! each pair gets a random permutation carrying one face onto the other.
//! A face is never glued to itself.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::triangulation::{Gluing, Perm4, Triangulation};

/// One generated triangulation with a stable name.
#[derive(Clone, Debug)]
pub struct CensusCase {
    pub name: String,
    pub triangulation: Triangulation,
}

/// A random triangulation with `tets` tetrahedra. Each face stays boundary
/// with probability `boundary` (before pairing).
pub fn random_triangulation<R: Rng>(tets: usize, boundary: f64, rng: &mut R) -> Triangulation {
    assert!(tets > 0, "a triangulation needs at least one tetrahedron");
    let mut faces: Vec<(usize, usize)> =
        (0..tets).flat_map(|t| (0..4).map(move |f| (t, f))).filter(|_| !rng.gen_bool(boundary)).collect();
    faces.shuffle(rng);
    if faces.len() % 2 == 1 {
        faces.pop();
    }

    let mut gluings = vec![[Gluing::Boundary; 4]; tets];
    for pair in faces.chunks(2) {
        let (t, f) = pair[0];
        let (u, g) = pair[1];
        let perm = random_perm_sending(f, g, rng);
        gluings[t][f] = Gluing::Glued { tet: u, face: g, perm };
        gluings[u][g] = Gluing::Glued { tet: t, face: f, perm: perm.inverse() };
    }
    Triangulation::new(gluings).expect("generated gluings are consistent")
}

fn random_perm_sending<R: Rng>(from: usize, to: usize, rng: &mut R) -> Perm4 {
    let mut rest_from: Vec<usize> = (0..4).filter(|&v| v != from).collect();
    let mut rest_to: Vec<usize> = (0..4).filter(|&v| v != to).collect();
    rest_from.sort_unstable();
    rest_to.shuffle(rng);
    let mut images = [0u8; 4];
    images[from] = to as u8;
    for (a, b) in rest_from.into_iter().zip(rest_to) {
        images[a] = b as u8;
    }
    Perm4::new(images).expect("a bijection by construction")
}

/// `count` triangulations with sizes cycling through `1..=max_tets`, all
/// determined by `seed`.
pub fn census(seed: u64, count: usize, max_tets: usize) -> Vec<CensusCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = 1 + i % max_tets;
            let boundary = [0.0, 0.25, 0.5][i % 3];
            CensusCase { name: format!("rand-{seed}-{i:03}-n{n}"), triangulation: random_triangulation(n, boundary, &mut rng) }
        })
        .collect()
}

/// Seed of the standard suite.
pub const SUITE_SEED: u64 = 2024;
/// Number of random cases in the standard suite.
pub const SUITE_SIZE: usize = 60;

/// The shipped fixtures followed by `SUITE_SIZE` random triangulations with
/// at most three tetrahedra.
pub fn standard_suite() -> Vec<CensusCase> {
    let fixed = [("figure-eight", crate::fixtures::FIGURE_EIGHT), ("orthant", crate::fixtures::ORTHANT)];
    let mut cases: Vec<CensusCase> = fixed
        .iter()
        .map(|(name, text)| CensusCase {
            name: name.to_string(),
            triangulation: crate::triangulation::parse_triangulation(text).expect("fixtures parse"),
        })
        .collect();
    cases.extend(census(SUITE_SEED, SUITE_SIZE, 3));
    cases
}
