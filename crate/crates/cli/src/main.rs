mod bench;
mod report;

use std::collections::BTreeSet;
use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};
use normsurf::census::{census, SUITE_SEED, SUITE_SIZE};
use normsurf::oracle::{is_fundamental_oracle, stable_admissible_hilbert, OracleError};
use normsurf::{matching_matrix, Admissibility, Deadline, DenseMatrix, NormalVector, Triangulation};

use crate::report::{run_fundamental, run_vertex, Algo, RunReport};

#[derive(Parser)]
#[command(name = "normsurf", version, about = "Vertex and fundamental normal surfaces of a triangulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the vertex normal surfaces.
    Vertex {
        file: PathBuf,
        /// Write the run report here instead of standard error.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Print the fundamental normal surfaces.
    Fundamental {
        #[arg(long, value_enum)]
        algo: Algo,
        /// Worker threads (defaults to the number of CPUs).
        #[arg(long)]
        workers: Option<usize>,
        file: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Time the algorithms over every `.tri` file in a directory (CSV on standard output).
    Bench {
        #[arg(long, value_enum, value_delimiter = ',', required = true)]
        algo: Vec<Algo>,
        /// Per-run time limit in seconds.
        #[arg(long)]
        timeout: f64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        dir: PathBuf,
    },
    /// Check both algorithms against the brute-force oracle.
    Verify {
        file: PathBuf,
        /// Also compare against a stored listing of fundamental surfaces.
        #[arg(long)]
        golden: Option<PathBuf>,
    },
    /// Write seeded random triangulations to a directory.
    Generate {
        dir: PathBuf,
        #[arg(long, default_value_t = SUITE_SEED)]
        seed: u64,
        #[arg(long, default_value_t = SUITE_SIZE)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        max_tets: usize,
    },
}

/// Failure classes, one exit code each.
enum Failure {
    Usage(String),
    Input(String),
    Mismatch(String),
    ScaleGuard(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Input(_) => 2,
            Failure::Mismatch(_) => 3,
            Failure::ScaleGuard(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Mismatch(m) | Failure::ScaleGuard(m) => m,
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::ScaleGuard(_) => Failure::ScaleGuard(e.to_string()),
            OracleError::Precondition(_) => Failure::Mismatch(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Vertex { file, report } => {
            let tri = load(&file)?;
            let (rays, rep) = run_vertex(&case_name(&file), &tri, &Deadline::none());
            print_lines(rays.expect("no deadline set").rays())?;
            emit_report(&rep, report.as_deref())
        }
        Command::Fundamental { algo, workers, file, report } => {
            let tri = load(&file)?;
            let pool = thread_pool(workers)?;
            let (basis, rep) = pool.install(|| run_fundamental(&case_name(&file), &tri, algo, &Deadline::none()));
            print_lines(basis.expect("no deadline set").iter())?;
            emit_report(&rep, report.as_deref())
        }
        Command::Bench { algo, timeout, workers, dir } => {
            if !(timeout.is_finite() && timeout >= 0.0) {
                return Err(Failure::Usage(format!("invalid timeout {timeout}")));
            }
            if workers == 0 {
                return Err(Failure::Usage("--workers must be at least 1".into()));
            }
            let cases = bench::load_dir(&dir).map_err(|e| Failure::Input(e.to_string()))?;
            let reports = bench::run(&cases, &algo, Duration::from_secs_f64(timeout), workers);
            bench::write_csv(&reports, std::io::stdout().lock()).map_err(|e| Failure::Input(e.to_string()))
        }
        Command::Verify { file, golden } => verify(&file, golden.as_deref()),
        Command::Generate { dir, seed, count, max_tets } => {
            if max_tets == 0 {
                return Err(Failure::Usage("--max-tets must be at least 1".into()));
            }
            std::fs::create_dir_all(&dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
            for case in census(seed, count, max_tets) {
                let path = dir.join(format!("{}.tri", case.name));
                std::fs::write(&path, case.triangulation.to_text())
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            }
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<Triangulation, Failure> {
    bench::load_file(path).map_err(|e| Failure::Input(e.to_string()))
}

fn case_name(path: &Path) -> String {
    path.file_stem().unwrap_or_default().to_string_lossy().into_owned()
}

fn thread_pool(workers: Option<usize>) -> Result<rayon::ThreadPool, Failure> {
    if workers == Some(0) {
        return Err(Failure::Usage("--workers must be at least 1".into()));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = workers {
        builder = builder.num_threads(k);
    }
    builder.build().map_err(|e| Failure::Usage(e.to_string()))
}

fn print_lines<T: Display>(items: impl IntoIterator<Item = T>) -> Result<(), Failure> {
    let mut out = std::io::BufWriter::new(std::io::stdout().lock());
    for x in items {
        writeln!(out, "{x}").map_err(|e| Failure::Input(e.to_string()))?;
    }
    out.flush().map_err(|e| Failure::Input(e.to_string()))
}

fn emit_report(report: &RunReport, path: Option<&Path>) -> Result<(), Failure> {
    let line = report.to_json();
    match path {
        Some(p) => std::fs::write(p, format!("{line}\n")).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            eprintln!("{line}");
            Ok(())
        }
    }
}

/// Smallest vector in exactly one of the two sets, with the name of the set holding it.
fn first_difference<'a>(
    a: &'a BTreeSet<NormalVector>,
    b: &'a BTreeSet<NormalVector>,
    names: (&'a str, &'a str),
) -> Option<(&'a NormalVector, &'a str, &'a str)> {
    let only_a = a.difference(b).next().map(|x| (x, names.0, names.1));
    let only_b = b.difference(a).next().map(|x| (x, names.1, names.0));
    match (only_a, only_b) {
        (Some(x), Some(y)) => Some(if x.0 <= y.0 { x } else { y }),
        (x, y) => x.or(y),
    }
}

fn compare(a: &BTreeSet<NormalVector>, b: &BTreeSet<NormalVector>, names: (&str, &str)) -> Result<(), Failure> {
    match first_difference(a, b, names) {
        None => Ok(()),
        Some((x, has, lacks)) => Err(Failure::Mismatch(format!("{has} has {x}, {lacks} does not"))),
    }
}

fn read_listing(path: &Path, dim: usize) -> Result<BTreeSet<NormalVector>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let mut set = BTreeSet::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let coords: Result<Vec<i64>, _> = line.split_whitespace().map(str::parse).collect();
        match coords {
            Ok(c) if c.len() == dim => {
                set.insert(NormalVector::from_i64(&c));
            }
            _ => return Err(Failure::Input(format!("{}:{}: expected {dim} integers", path.display(), i + 1))),
        }
    }
    Ok(set)
}

fn verify(file: &Path, golden: Option<&Path>) -> Result<(), Failure> {
    let tri = load(file)?;
    let a: DenseMatrix = matching_matrix(&tri).to_dense();
    let adm = Admissibility::quadrilateral(tri.size());

    let (oracle, bound) = stable_admissible_hilbert(&a, &adm)?;
    let name = case_name(file);
    let primal = run_fundamental(&name, &tri, Algo::Primal, &Deadline::none()).0.expect("no deadline set");
    let dual = run_fundamental(&name, &tri, Algo::Dual, &Deadline::none()).0.expect("no deadline set");
    let as_set = |b: &normsurf::BasisSet| b.iter().cloned().collect::<BTreeSet<_>>();
    let (primal, dual, oracle) = (as_set(&primal), as_set(&dual), as_set(&oracle));

    compare(&primal, &dual, ("primal", "dual"))?;
    compare(&primal, &oracle, ("primal", "oracle"))?;
    for x in &primal {
        if !is_fundamental_oracle(&a, x)? {
            return Err(Failure::Mismatch(format!("{x} decomposes")));
        }
    }
    if let Some(path) = golden {
        compare(&primal, &read_listing(path, tri.dim())?, ("computed", "golden"))?;
    }
    println!("primal {} dual {} oracle {} (bound {bound})", primal.len(), dual.len(), oracle.len());
    println!("pass");
    Ok(())
}
