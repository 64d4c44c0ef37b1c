//! Command-line front end: eigensolves on Matrix Market inputs and the
//! experiment commands (basin rasters, angle sweeps, success-fraction
//! tables, band-gap tables). All heavy lifting lives in the library; this
//! binary only parses arguments and maps outcomes to exit codes.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use prqi::error::{Error, Result};
use prqi::harness::{self, SolverChoice};
use prqi::io::config::{parse_schedule, read_sturm_config, SturmRunConfig};
use prqi::matrices::MatrixSpec;
use prqi::solvers::{GammaSchedule, StoppingCriteria};
use prqi::sturm::InitialProfile;

#[derive(Parser)]
#[command(
    name = "prqi",
    about = "Hermitian eigensolvers with a complex-shifted Rayleigh quotient iteration",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Base seed for every random draw.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Residual tolerance override (each command has its own default).
    #[arg(long)]
    tol: Option<f64>,
    /// Iteration budget override.
    #[arg(long)]
    max_iters: Option<usize>,
    /// Shift schedule: residual, residual2, or constant:<v>.
    #[arg(long)]
    gamma: Option<String>,
    /// Output directory for CSV and image files.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

impl Common {
    fn schedule(&self, default: GammaSchedule) -> Result<GammaSchedule> {
        match &self.gamma {
            Some(s) => parse_schedule(s),
            None => Ok(default),
        }
    }

    fn stop(&self, default_tol: f64) -> StoppingCriteria {
        let mut stop = StoppingCriteria::new(self.tol.unwrap_or(default_tol));
        if let Some(m) = self.max_iters {
            stop.max_iters = m;
        }
        stop
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve one eigenproblem from Matrix Market files.
    Solve {
        /// Hermitian matrix (Matrix Market).
        matrix: PathBuf,
        /// Positive definite mass matrix for a generalized problem.
        #[arg(long)]
        mass: Option<PathBuf>,
        /// Initial vector file; omitted = seeded random Gaussian.
        #[arg(long)]
        x0: Option<PathBuf>,
        /// classic-rqi, prqi, prqi-full, or inverse-iteration.
        #[arg(long, default_value = "prqi")]
        solver: String,
        /// Fixed shift for inverse iteration.
        #[arg(long)]
        shift: Option<f64>,
        /// Apply one closing classic step to the real part (real matrices).
        #[arg(long)]
        finalize_real: bool,
        /// Write the per-iteration trace to this CSV file.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Basin-of-attraction raster on diag(-1, s, 1).
    Basin {
        /// Middle eigenvalue, |s| < 1.
        #[arg(long, default_value_t = 0.98)]
        s: f64,
        /// Lattice resolution of the barycentric simplex.
        #[arg(long, default_value_t = 400)]
        resolution: usize,
        /// classic-rqi or prqi.
        #[arg(long, default_value = "prqi")]
        solver: String,
        #[command(flatten)]
        common: Common,
    },
    /// Success against the initial angle to a random target eigenvector.
    Sweep {
        /// Matrix family: 121, wilkinson, laplace, or randsym.
        #[arg(long, default_value = "121")]
        kind: String,
        /// Family size parameter.
        #[arg(long, default_value_t = 50)]
        size: usize,
        /// Angle grid in degrees, start:stop:step.
        #[arg(long, default_value = "1:89:1")]
        angles: String,
        /// Fill density for randsym.
        #[arg(long, default_value_t = 0.25)]
        density: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Success fractions per initial-angle band over random starts.
    Table1 {
        /// Matrix family: 121, wilkinson, laplace, or randsym.
        #[arg(long, default_value = "121")]
        kind: String,
        /// Family size parameter.
        #[arg(long, default_value_t = 500)]
        size: usize,
        /// Random starts per angle band (at least 100).
        #[arg(long, default_value_t = 10000)]
        samples: usize,
        /// Target eigenvalue index (ascending, 0-based); omitted = seeded random.
        #[arg(long)]
        target: Option<usize>,
        /// Fill density for randsym.
        #[arg(long, default_value_t = 0.25)]
        density: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Band-gap eigenvalues from oscillating cutoff profiles.
    Sturm {
        /// Key-value run configuration file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Profile as n_osc:R; repeatable. Default: the eight standard rows.
        #[arg(long = "profile")]
        profiles: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
}

fn matrix_spec(kind: &str, size: usize, density: f64, seed: u64) -> Result<MatrixSpec> {
    match kind {
        "121" => Ok(MatrixSpec::OneTwoOne { n: size }),
        "wilkinson" => Ok(MatrixSpec::Wilkinson { n: size }),
        "laplace" => Ok(MatrixSpec::Laplace2D { m: size }),
        "randsym" => Ok(MatrixSpec::RandomSymmetric { n: size, density, seed }),
        other => Err(Error::invalid(format!(
            "unknown matrix kind {other:?}: expected 121, wilkinson, laplace, or randsym"
        ))),
    }
}

fn parse_angles(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::invalid(format!("angle grid {spec:?} must be start:stop:step")));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.parse::<f64>().map_err(|_| Error::invalid(format!("bad angle {p:?}"))))
        .collect::<Result<_>>()?;
    harness::angle_grid(nums[0], nums[1], nums[2])
}

fn parse_profile(spec: &str) -> Result<InitialProfile> {
    let (n, r) = spec
        .split_once(':')
        .ok_or_else(|| Error::invalid(format!("profile {spec:?} must be n_osc:R")))?;
    let n_osc: f64 =
        n.parse().map_err(|_| Error::invalid(format!("bad n_osc {n:?}")))?;
    let r_cut: f64 = r.parse().map_err(|_| Error::invalid(format!("bad R {r:?}")))?;
    Ok(InitialProfile::new(n_osc, r_cut))
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Solve { matrix, mass, x0, solver, shift, finalize_real, trace, common } => {
            harness::configure_threads(common.threads);
            let opts = harness::SolveOptions {
                matrix,
                mass,
                x0,
                solver: solver.parse::<SolverChoice>()?,
                schedule: common.schedule(GammaSchedule::ResidualNorm)?,
                stop: common.stop(1e-10),
                seed: common.seed,
                shift,
                finalize_real,
                trace_out: trace,
            };
            harness::cmd_solve(&opts)
        }
        Command::Basin { s, resolution, solver, common } => {
            harness::configure_threads(common.threads);
            let schedule = common.schedule(GammaSchedule::ResidualNorm)?;
            let stop = common.stop(1e-11);
            harness::cmd_basin(
                s,
                resolution,
                solver.parse::<SolverChoice>()?,
                &schedule,
                &stop,
                &common.out,
            )
        }
        Command::Sweep { kind, size, angles, density, common } => {
            harness::configure_threads(common.threads);
            let spec = matrix_spec(&kind, size, density, common.seed)?;
            let grid = parse_angles(&angles)?;
            let stop = common.stop(1e-15);
            harness::cmd_sweep(&spec, common.seed, &grid, &stop, &common.out)
        }
        Command::Table1 { kind, size, samples, target, density, common } => {
            harness::configure_threads(common.threads);
            let spec = matrix_spec(&kind, size, density, common.seed)?;
            let schedule = common.schedule(GammaSchedule::ResidualNormSquared)?;
            harness::cmd_table1(&spec, samples, common.seed, target, &schedule, &common.out)
        }
        Command::Sturm { config, profiles, common } => {
            harness::configure_threads(common.threads);
            let mut run: SturmRunConfig = match &config {
                Some(path) => read_sturm_config(path)?,
                None => SturmRunConfig::default(),
            };
            if let Some(tol) = common.tol {
                run.tol = tol;
            }
            if let Some(m) = common.max_iters {
                run.max_iters = m;
            }
            if let Some(g) = &common.gamma {
                run.schedule = parse_schedule(g)?;
            }
            let profile_list: Vec<InitialProfile> =
                profiles.iter().map(|p| parse_profile(p)).collect::<Result<_>>()?;
            harness::cmd_sturm(&run, &profile_list, &common.out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
