//! Per-run statistics and the runners that fill them in.

use std::time::{Duration, Instant};

use normsurf::dual::{fundamental_dual_cone, DualError};
use normsurf::primal::{fundamental_primal_cone, PrimalError};
use normsurf::vertex_enum::enumerate_rays;
use normsurf::{matching_matrix, Admissibility, BasisSet, Deadline, DenseMatrix, RaySet, TimedOut, Triangulation};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Algo {
    Primal,
    Dual,
}

impl Algo {
    pub fn tag(self) -> &'static str {
        match self {
            Algo::Primal => "primal",
            Algo::Dual => "dual",
        }
    }
}

/// One run of one algorithm on one triangulation. Fields that do not apply
/// to the algorithm, or were not reached before a timeout, are empty.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct RunReport {
    pub case: String,
    pub n: usize,
    pub rows: usize,
    pub vertex_count: Option<usize>,
    pub max_faces: Option<usize>,
    pub fundamental_count: Option<usize>,
    pub vertex_ms: Option<f64>,
    pub faces_ms: Option<f64>,
    pub hilbert_ms: Option<f64>,
    pub dual_ms: Option<f64>,
    pub total_ms: f64,
    pub algo: String,
    pub peak_candidates: Option<usize>,
    pub status: Status,
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Completed,
    Timeout,
}

/// CSV header, in field order.
pub const CSV_COLUMNS: [&str; 14] = [
    "case",
    "n",
    "rows",
    "vertex_count",
    "max_faces",
    "fundamental_count",
    "vertex_ms",
    "faces_ms",
    "hilbert_ms",
    "dual_ms",
    "total_ms",
    "algo",
    "peak_candidates",
    "status",
];

/// Milliseconds, exact to the nanosecond.
fn ms(d: Duration) -> f64 {
    d.as_nanos() as f64 / 1e6
}

impl RunReport {
    fn blank(case: &str, tri: &Triangulation, rows: usize, algo: &str) -> Self {
        RunReport {
            case: case.to_string(),
            n: tri.size(),
            rows,
            vertex_count: None,
            max_faces: None,
            fundamental_count: None,
            vertex_ms: None,
            faces_ms: None,
            hilbert_ms: None,
            dual_ms: None,
            total_ms: 0.0,
            algo: algo.to_string(),
            peak_candidates: None,
            status: Status::Completed,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

fn problem(tri: &Triangulation) -> (DenseMatrix, Admissibility) {
    (matching_matrix(tri).to_dense(), Admissibility::quadrilateral(tri.size()))
}

pub fn run_vertex(case: &str, tri: &Triangulation, deadline: &Deadline) -> (Option<RaySet>, RunReport) {
    let (a, adm) = problem(tri);
    let mut report = RunReport::blank(case, tri, a.row_count(), "vertex");
    let start = Instant::now();
    let result = enumerate_rays(&a, Some(&adm), deadline);
    report.total_ms = ms(start.elapsed());
    match result {
        Ok(rays) => {
            report.vertex_ms = Some(report.total_ms);
            report.vertex_count = Some(rays.len());
            (Some(rays), report)
        }
        Err(TimedOut) => {
            report.status = Status::Timeout;
            (None, report)
        }
    }
}

pub fn run_fundamental(
    case: &str,
    tri: &Triangulation,
    algo: Algo,
    deadline: &Deadline,
) -> (Option<BasisSet>, RunReport) {
    let (a, adm) = problem(tri);
    let mut report = RunReport::blank(case, tri, a.row_count(), algo.tag());
    let start = Instant::now();
    let basis = match algo {
        Algo::Primal => {
            let result = fundamental_primal_cone(&a, &adm, deadline);
            report.total_ms = ms(start.elapsed());
            match result {
                Ok(out) => {
                    report.vertex_count = Some(out.vertices.len());
                    report.max_faces = Some(out.faces.len());
                    report.vertex_ms = Some(ms(out.timings.vertex));
                    report.faces_ms = Some(ms(out.timings.faces));
                    report.hilbert_ms = Some(ms(out.timings.hilbert));
                    Some(out.basis)
                }
                Err(PrimalError::TimedOut(_)) => None,
                Err(e) => panic!("primal method failed on a valid triangulation: {e}"),
            }
        }
        Algo::Dual => {
            let result = fundamental_dual_cone(&a, &adm, deadline);
            report.total_ms = ms(start.elapsed());
            match result {
                Ok(out) => {
                    report.dual_ms = Some(ms(out.elapsed));
                    report.peak_candidates = Some(out.peak);
                    Some(out.basis)
                }
                Err(DualError::TimedOut(_)) => None,
                Err(e) => panic!("dual method failed on a valid triangulation: {e}"),
            }
        }
    };
    match &basis {
        Some(b) => report.fundamental_count = Some(b.len()),
        None => report.status = Status::Timeout,
    }
    (basis, report)
}
