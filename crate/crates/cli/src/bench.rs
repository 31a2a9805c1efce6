//! Timed runs over a directory of triangulation files.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use normsurf::{parse_triangulation, Deadline, Triangulation, TriangulationError};
use rayon::prelude::*;

use crate::report::{run_fundamental, Algo, RunReport, CSV_COLUMNS};

pub struct BenchCase {
    pub name: String,
    pub triangulation: Triangulation,
}

#[derive(Debug)]
pub enum LoadError {
    Io(PathBuf, std::io::Error),
    Parse(PathBuf, TriangulationError),
}

impl std::fmt::Display for LoadError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LoadError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            LoadError::Parse(p, e) => write!(f, "{}: {e}", p.display()),
        }
    }
}

pub fn load_file(path: &Path) -> Result<Triangulation, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|e| LoadError::Io(path.to_path_buf(), e))?;
    parse_triangulation(&text).map_err(|e| LoadError::Parse(path.to_path_buf(), e))
}

/// Every `*.tri` file in `dir`, ordered by tetrahedron count, then name.
pub fn load_dir(dir: &Path) -> Result<Vec<BenchCase>, LoadError> {
    let entries = std::fs::read_dir(dir).map_err(|e| LoadError::Io(dir.to_path_buf(), e))?;
    let mut cases = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| LoadError::Io(dir.to_path_buf(), e))?.path();
        if path.extension().is_some_and(|x| x == "tri") {
            let name = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            cases.push(BenchCase { name, triangulation: load_file(&path)? });
        }
    }
    cases.sort_by(|a, b| (a.triangulation.size(), &a.name).cmp(&(b.triangulation.size(), &b.name)));
    Ok(cases)
}

/// Runs every case under every algorithm, `workers` jobs at a time. Each job
/// gets its own deadline when it starts. Rows come back in case order.
pub fn run(cases: &[BenchCase], algos: &[Algo], timeout: Duration, workers: usize) -> Vec<RunReport> {
    let jobs: Vec<(&BenchCase, Algo)> = cases.iter().flat_map(|c| algos.iter().map(move |&a| (c, a))).collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("thread pool");
    pool.install(|| {
        jobs.par_iter()
            .map(|(case, algo)| run_fundamental(&case.name, &case.triangulation, *algo, &Deadline::after(timeout)).1)
            .collect()
    })
}

pub fn write_csv(reports: &[RunReport], out: impl Write) -> csv::Result<()> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    writer.write_record(CSV_COLUMNS)?;
    for r in reports {
        writer.serialize(r)?;
    }
    writer.flush()?;
    Ok(())
}
