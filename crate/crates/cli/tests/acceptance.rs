//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! hard criterion fails. Runs without the libtest harness so the lines are
//! always shown.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use normsurf::census::{standard_suite, CensusCase};
use normsurf::dual::{dual_hilbert_traced, fundamental_dual_cone, hilbert_basis_dual_unfiltered};
use normsurf::faces::maximal_faces_traced;
use normsurf::oracle::{
    admissible_kernel_points, brute_force_admissible_hilbert, face_lattice, is_fundamental_oracle,
    stable_admissible_hilbert, support_enumeration_rays,
};
use normsurf::primal::{fundamental_primal_cone, hilbert_basis_simplicial_union};
use normsurf::vertex_enum::enumerate_admissible_rays;
use normsurf::*;
use rayon::prelude::*;

const BIN: &str = env!("CARGO_BIN_EXE_normsurf");

/// Criterion 1: wall-clock limit for each algorithm on the orthant.
const ORTHANT_LIMIT: Duration = Duration::from_secs(1);
/// Criterion 1: oracle bound.
const ORTHANT_BOUND: u32 = 3;
/// Criterion 3: minimum number of random cases, and the suite time limit.
const MIN_RANDOM_CASES: usize = 50;
const SUITE_LIMIT: Duration = Duration::from_secs(600);
/// Criterion 4: coordinate-sum bound of the completeness search.
const COMPLETENESS_BOUND: u32 = 4;
/// Criterion 5: largest dimension checked against the face lattice.
const STRUCTURE_DIM: usize = 14;
/// Criterion 7: per-job timeout and the soft share of cases with n >= 2.
const BENCH_TIMEOUT_SECS: &str = "120";
const PRIMAL_FASTER_SHARE: f64 = 0.8;

enum Verdict {
    Pass(String),
    Warn(String),
    Fail(String),
}

fn pass(detail: impl Into<String>) -> Verdict {
    Verdict::Pass(detail.into())
}

fn fail(detail: impl Into<String>) -> Verdict {
    Verdict::Fail(detail.into())
}

fn setup(case: &CensusCase) -> (DenseMatrix, Admissibility) {
    let tri = &case.triangulation;
    (matching_matrix(tri).to_dense(), Admissibility::quadrilateral(tri.size()))
}

fn set(xs: &[&[i64]]) -> BasisSet {
    xs.iter().map(|x| NormalVector::from_i64(x)).collect()
}

fn orthant() -> Verdict {
    let tri = parse_triangulation(fixtures::ORTHANT).unwrap();
    let (a, adm) = (matching_matrix(&tri).to_dense(), Admissibility::quadrilateral(1));
    let expected = BasisSet::unit_vectors(7);

    let start = Instant::now();
    let primal = fundamental_primal_cone(&a, &adm, &Deadline::none()).unwrap().basis;
    let primal_time = start.elapsed();
    let start = Instant::now();
    let dual = fundamental_dual_cone(&a, &adm, &Deadline::none()).unwrap().basis;
    let dual_time = start.elapsed();
    let oracle = brute_force_admissible_hilbert(&a, &adm, ORTHANT_BOUND).unwrap();

    if primal != expected || dual != expected || oracle != expected {
        return fail(format!("sizes primal {} dual {} oracle {}", primal.len(), dual.len(), oracle.len()));
    }
    if primal_time >= ORTHANT_LIMIT || dual_time >= ORTHANT_LIMIT {
        return fail(format!("too slow: primal {primal_time:?} dual {dual_time:?}"));
    }
    pass(format!("7 unit vectors; primal {primal_time:.2?}, dual {dual_time:.2?}"))
}

fn classic_instances() -> Verdict {
    type Instance<'a> = (usize, &'a [&'a [i64]], &'a [&'a [i64]]);
    let kernels: [Instance; 3] = [
        (2, &[&[1, -1]], &[&[1, 1]]),
        (3, &[&[1, 1, -1]], &[&[1, 0, 1], &[0, 1, 1]]),
        (2, &[&[2, -3]], &[&[3, 2]]),
    ];
    for (cols, rows, expected) in kernels {
        let a = DenseMatrix::from_i64(cols, rows).unwrap();
        let expected = set(expected);
        let dual = hilbert_basis_dual_unfiltered(&a);
        let rays = support_enumeration_rays(&a, &Admissibility::unconstrained(cols)).unwrap();
        let primal = hilbert_basis_simplicial_union(rays.rays()).unwrap();
        if dual != expected || primal != expected {
            return fail(format!("{rows:?}: dual {dual:?}, primal {primal:?}"));
        }
    }
    let cone = hilbert_basis_simplicial_union(&[NormalVector::from_i64(&[1, 0]), NormalVector::from_i64(&[1, 2])]).unwrap();
    if cone != set(&[&[1, 0], &[1, 1], &[1, 2]]) {
        return fail(format!("cone <(1,0),(1,2)>: {cone:?}"));
    }
    pass("3 kernels by both methods, 1 planar cone")
}

fn three_way_agreement(suite: &[CensusCase]) -> Verdict {
    let random = suite.iter().filter(|c| c.name.starts_with("rand-")).count();
    if random < MIN_RANDOM_CASES || !suite.iter().any(|c| c.name == "figure-eight") {
        return fail(format!("suite has {random} random cases"));
    }
    let start = Instant::now();
    let mismatches: Vec<String> = suite
        .par_iter()
        .filter_map(|case| {
            let (a, adm) = setup(case);
            let (oracle, _) = stable_admissible_hilbert(&a, &adm).unwrap();
            let primal = fundamental_primal(&case.triangulation);
            let dual = fundamental_dual(&case.triangulation);
            (primal != oracle || dual != oracle).then(|| case.name.clone())
        })
        .collect();
    let elapsed = start.elapsed();
    if !mismatches.is_empty() {
        return fail(format!("disagreement on {mismatches:?}"));
    }
    if elapsed >= SUITE_LIMIT {
        return fail(format!("suite took {elapsed:.1?}"));
    }
    pass(format!("{} cases ({random} random), {elapsed:.1?}", suite.len()))
}

/// Whether `x` is a sum of elements of `basis` lying in the smallest face
/// that holds `x`.
fn in_semigroup(x: &NormalVector, basis: &[NormalVector]) -> bool {
    if x.is_zero() {
        return true;
    }
    let zx = x.zero_set();
    basis.iter().any(|b| zx.is_subset(&b.zero_set()) && b.le_componentwise(x) && in_semigroup(&x.sub(b), basis))
}

fn irreducible_and_complete(suite: &[CensusCase]) -> Verdict {
    let problems: Vec<String> = suite
        .par_iter()
        .filter_map(|case| {
            let (a, adm) = setup(case);
            let basis = fundamental_primal(&case.triangulation).to_vec();
            if let Some(x) = basis.iter().find(|x| !is_fundamental_oracle(&a, x).unwrap()) {
                return Some(format!("{}: {x} decomposes", case.name));
            }
            let points = admissible_kernel_points(&a, &adm, COMPLETENESS_BOUND).unwrap();
            points
                .iter()
                .find(|x| !in_semigroup(x, &basis))
                .map(|x| format!("{}: {x} not generated", case.name))
        })
        .collect();
    match problems.first() {
        Some(p) => fail(p.clone()),
        None => pass(format!("{} cases, kernel points up to sum {COMPLETENESS_BOUND}", suite.len())),
    }
}

fn structural_invariants(suite: &[CensusCase]) -> Verdict {
    let small: Vec<&CensusCase> = suite.iter().filter(|c| c.triangulation.dim() <= STRUCTURE_DIM).collect();
    let problems: Vec<String> = small
        .par_iter()
        .filter_map(|case| {
            let (a, adm) = setup(case);
            let lattice = face_lattice(&a).unwrap();
            let rays = support_enumeration_rays(&a, &Admissibility::unconstrained(a.cols())).unwrap();
            let ray_sets: Vec<BTreeSet<usize>> = lattice
                .iter()
                .map(|f| rays.zero_sets().iter().enumerate().filter(|(_, rz)| f.zero_set.is_subset(rz)).map(|(i, _)| i).collect())
                .collect();
            for (i, f) in lattice.iter().enumerate() {
                for (j, g) in lattice.iter().enumerate().skip(i) {
                    let needed: BTreeSet<usize> = ray_sets[i].union(&ray_sets[j]).copied().collect();
                    let join = lattice
                        .iter()
                        .zip(&ray_sets)
                        .filter(|(_, rs)| rs.is_superset(&needed))
                        .min_by_key(|(h, _)| h.dim)
                        .map(|(h, _)| h)
                        .unwrap();
                    if join.zero_set != f.zero_set.intersection(&g.zero_set) {
                        return Some(format!("{}: join of faces {i} and {j}", case.name));
                    }
                }
            }

            let admissible_rays = enumerate_admissible_rays(&a, &adm);
            let mut layers = Vec::new();
            maximal_faces_traced(&admissible_rays, &adm, &Deadline::none(), |l| layers.push(l.clone())).unwrap();
            for layer in &layers {
                let expected: BTreeSet<ZeroSet> = lattice
                    .iter()
                    .filter(|f| f.dim == layer.k && adm.is_admissible_zeroset(&f.zero_set))
                    .map(|f| f.zero_set.clone())
                    .collect();
                if layer.sets.iter().cloned().collect::<BTreeSet<_>>() != expected {
                    return Some(format!("{}: layer {}", case.name, layer.k));
                }
            }
            None
        })
        .collect();
    if let Some(p) = problems.first() {
        return fail(p.clone());
    }
    let missing = suite.par_iter().find_map_any(|case| {
        let basis = fundamental_primal(&case.triangulation);
        vertex_surfaces(&case.triangulation).rays().iter().find(|r| !basis.contains(r)).map(|r| format!("{}: {r}", case.name))
    });
    match missing {
        Some(m) => fail(format!("vertex not fundamental: {m}")),
        None => pass(format!("join and layers on {} cones with 7n <= {STRUCTURE_DIM}; vertices on {}", small.len(), suite.len())),
    }
}

fn dual_loop_invariant(suite: &[CensusCase]) -> Verdict {
    let problems: Vec<String> = suite
        .par_iter()
        .filter_map(|case| {
            let (a, adm) = setup(case);
            let mut snapshots = Vec::new();
            let out = dual_hilbert_traced(&a, Some(&adm), &Deadline::none(), |p, b| snapshots.push((p.step, b.clone())))
                .unwrap();
            snapshots.into_iter().find_map(|(step, basis)| {
                let unfiltered = hilbert_basis_dual_unfiltered(&a.permuted(&out.order[..step]));
                let admissible: BasisSet = unfiltered.iter().filter(|x| adm.is_admissible_vector(x)).cloned().collect();
                (basis != admissible).then(|| format!("{} after {step} rows", case.name))
            })
        })
        .collect();
    match problems.first() {
        Some(p) => fail(p.clone()),
        None => pass(format!("every row of {} cases", suite.len())),
    }
}

fn normsurf(args: &[&str]) -> std::process::Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn bench(dir: &Path) -> Verdict {
    let dir_arg = dir.to_str().unwrap();
    if !normsurf(&["generate", dir_arg]).status.success() {
        return fail("generate failed");
    }
    std::fs::write(dir.join("figure_eight.tri"), fixtures::FIGURE_EIGHT).unwrap();
    let out = normsurf(&["bench", "--algo", "primal,dual", "--timeout", BENCH_TIMEOUT_SECS, dir_arg]);
    if !out.status.success() {
        return fail(String::from_utf8_lossy(&out.stderr).into_owned());
    }

    // case -> algo -> (n, total_ms, completed)
    let mut runs: BTreeMap<String, BTreeMap<String, (usize, f64, bool)>> = BTreeMap::new();
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    for record in reader.records() {
        let r = record.unwrap();
        let entry = (r[1].parse().unwrap(), r[10].parse().unwrap(), &r[13] == "completed");
        runs.entry(r[0].to_string()).or_default().insert(r[11].to_string(), entry);
    }
    let mut unmatched = Vec::new();
    let (mut larger, mut primal_faster) = (0, 0);
    for (case, algos) in &runs {
        let (n, primal_ms, primal_done) = algos["primal"];
        let (_, dual_ms, dual_done) = algos["dual"];
        if dual_done && !primal_done {
            unmatched.push(case.clone());
        }
        if n >= 2 && primal_done && dual_done {
            larger += 1;
            primal_faster += usize::from(primal_ms <= dual_ms);
        }
    }
    if !unmatched.is_empty() {
        return fail(format!("primal did not complete {unmatched:?}"));
    }
    let share = primal_faster as f64 / larger.max(1) as f64;
    let detail = format!(
        "{} cases, primal completes all dual completes; primal <= dual on {primal_faster}/{larger} with n >= 2 ({:.0}%)",
        runs.len(),
        100.0 * share
    );
    if share < PRIMAL_FASTER_SHARE {
        Verdict::Warn(format!("{detail}, below {:.0}%", 100.0 * PRIMAL_FASTER_SHARE))
    } else {
        pass(detail)
    }
}

fn determinism(dir: &Path) -> Verdict {
    let mut checked = 0;
    let mut files: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    for path in files.iter().filter(|p| p.extension().is_some_and(|x| x == "tri")) {
        let file = path.to_str().unwrap();
        for algo in ["primal", "dual"] {
            let one = normsurf(&["fundamental", "--algo", algo, "--workers", "1", file]);
            let four = normsurf(&["fundamental", "--algo", algo, "--workers", "4", file]);
            if !one.status.success() || one.stdout != four.stdout {
                return fail(format!("{file} with {algo}"));
            }
            checked += 1;
        }
    }
    pass(format!("{checked} runs byte-identical with 1 and 4 workers"))
}

fn main() -> ExitCode {
    let suite = standard_suite();
    let dir = tempfile::tempdir().unwrap();

    type Check<'a> = Box<dyn FnOnce() -> Verdict + 'a>;
    let criteria: Vec<(&str, Check)> = vec![
        ("1 orthant baseline", Box::new(orthant)),
        ("2 classic Hilbert instances", Box::new(classic_instances)),
        ("3 three-way agreement", Box::new(|| three_way_agreement(&suite))),
        ("4 irreducibility and completeness", Box::new(|| irreducible_and_complete(&suite))),
        ("5 structural invariants", Box::new(|| structural_invariants(&suite))),
        ("6 dual loop invariant", Box::new(|| dual_loop_invariant(&suite))),
        ("7 bench over the generated suite", Box::new(|| bench(dir.path()))),
        ("8 determinism across worker counts", Box::new(|| determinism(dir.path()))),
    ];

    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            fail(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Verdict::Pass(d) => println!("PASS {name}: {d} [{secs:.1}s]"),
            Verdict::Warn(d) => println!("WARN {name}: {d} [{secs:.1}s]"),
            Verdict::Fail(d) => {
                failed += 1;
                println!("FAIL {name}: {d} [{secs:.1}s]");
            }
        }
    }
    println!("SKIP 9 crosscap computation: out of scope");
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
