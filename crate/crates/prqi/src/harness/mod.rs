//! Experiment harness: basin-of-attraction rasters on diag(-1, s, 1),
//! angle sweeps, success-fraction tables over stratified random starts,
//! and the band-gap table. Every run is deterministic under a fixed seed:
//! sample streams are keyed by (band, sample) so results are independent
//! of thread count, and all file output is byte-stable.

use std::path::Path;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::io::config::SturmRunConfig;
use crate::io::csv::{fmt_float, CsvDocument};
use crate::io::ppm::{label_color, PpmImage};
use crate::linalg;
use crate::matrices::rng::stream_rng;
use crate::matrices::{
    decompose, generate, initial_vector_with_angle_rng, lattice_vector, simplex_lattice,
    MatrixSpec,
};
use crate::operator::GeneralizedPair;
use crate::solvers::{
    classic_rqi, classic_rqi_generalized, inverse_iteration, prqi, prqi_full, GammaSchedule,
    SolveOutcome, SolveStatus, StoppingCriteria,
};
use crate::sturm::{
    assemble, eigenvalue_index, sample_profile, solve_gap_eigenpair, GapReport, InitialProfile,
};

/// Solver selection shared by the solve command and the experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverChoice {
    ClassicRqi,
    Prqi,
    PrqiFull,
    InverseIteration,
}

impl SolverChoice {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolverChoice::ClassicRqi => "classic-rqi",
            SolverChoice::Prqi => "prqi",
            SolverChoice::PrqiFull => "prqi-full",
            SolverChoice::InverseIteration => "inverse-iteration",
        }
    }
}

impl std::str::FromStr for SolverChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classic-rqi" => Ok(SolverChoice::ClassicRqi),
            "prqi" => Ok(SolverChoice::Prqi),
            "prqi-full" => Ok(SolverChoice::PrqiFull),
            "inverse-iteration" => Ok(SolverChoice::InverseIteration),
            other => Err(Error::invalid(format!("unknown solver {other:?}"))),
        }
    }
}

/// Pin the global worker pool size; later calls are ignored.
pub fn configure_threads(threads: Option<usize>) {
    if let Some(n) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

// ---------------------------------------------------------------- basins

/// Per-cell outcome over the interior barycentric lattice of the simplex
/// {x1 + x2 + x3 = 1, xi > 0}: label 0 marks non-convergence, label k >= 1
/// the k-th eigenvalue in ascending order.
#[derive(Debug, Clone)]
pub struct BasinRaster {
    pub resolution: usize,
    pub points: Vec<(usize, usize, usize)>,
    pub labels: Vec<usize>,
    pub iters: Vec<usize>,
}

impl BasinRaster {
    fn cell_map(&self) -> std::collections::HashMap<(usize, usize), usize> {
        self.points
            .iter()
            .enumerate()
            .map(|(idx, &(i, j, _))| ((i, j), idx))
            .collect()
    }

    /// Fraction of cells with at least one of the four lattice neighbors
    /// carrying a different label.
    pub fn boundary_fraction(&self) -> f64 {
        let map = self.cell_map();
        let mut boundary = 0usize;
        for (idx, &(i, j, _)) in self.points.iter().enumerate() {
            let label = self.labels[idx];
            let neighbors =
                [(i.wrapping_sub(1), j), (i + 1, j), (i, j.wrapping_sub(1)), (i, j + 1)];
            if neighbors
                .iter()
                .filter_map(|key| map.get(key))
                .any(|&nidx| self.labels[nidx] != label)
            {
                boundary += 1;
            }
        }
        boundary as f64 / self.points.len() as f64
    }

    /// Number of 4-connected same-label regions (sentinel cells form
    /// regions of their own).
    pub fn connected_regions(&self) -> usize {
        let map = self.cell_map();
        let mut seen = vec![false; self.points.len()];
        let mut regions = 0usize;
        for start in 0..self.points.len() {
            if seen[start] {
                continue;
            }
            regions += 1;
            let label = self.labels[start];
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(idx) = stack.pop() {
                let (i, j, _) = self.points[idx];
                let neighbors =
                    [(i.wrapping_sub(1), j), (i + 1, j), (i, j.wrapping_sub(1)), (i, j + 1)];
                for key in neighbors {
                    if let Some(&nidx) = map.get(&key) {
                        if !seen[nidx] && self.labels[nidx] == label {
                            seen[nidx] = true;
                            stack.push(nidx);
                        }
                    }
                }
            }
        }
        regions
    }

    /// White canvas with the simplex drawn at x = i, y = resolution - j.
    pub fn to_image(&self) -> PpmImage {
        let size = self.resolution + 1;
        let mut img = PpmImage::new(size, size, label_color(None));
        for (idx, &(i, j, _)) in self.points.iter().enumerate() {
            img.set(i, self.resolution - j, label_color(Some(self.labels[idx])));
        }
        img
    }

    /// Rows (x1, x2, x3, label, iters) in lattice order.
    pub fn to_csv(&self) -> CsvDocument {
        let mut doc = CsvDocument::new();
        doc.row(&["x1", "x2", "x3", "label", "iters"]);
        let r = self.resolution as f64;
        for (idx, &(i, j, k)) in self.points.iter().enumerate() {
            doc.row(&[
                fmt_float(i as f64 / r),
                fmt_float(j as f64 / r),
                fmt_float(k as f64 / r),
                self.labels[idx].to_string(),
                self.iters[idx].to_string(),
            ]);
        }
        doc
    }
}

/// Run one solver from every interior lattice vector on diag(-1, s, 1) and
/// label each cell by the eigenvalue reached.
pub fn basin_raster(
    s: f64,
    resolution: usize,
    solver: SolverChoice,
    schedule: &GammaSchedule,
    stop: &StoppingCriteria,
) -> Result<BasinRaster> {
    if !matches!(solver, SolverChoice::ClassicRqi | SolverChoice::Prqi) {
        return Err(Error::invalid("basins support classic-rqi and prqi"));
    }
    let a = generate(&MatrixSpec::Diag3 { s })?;
    let eigenvalues = [-1.0, s, 1.0];
    let points = simplex_lattice(resolution);
    let results: Vec<(usize, usize)> = points
        .par_iter()
        .map(|&p| {
            let x0 = lattice_vector(p);
            let outcome = match solver {
                SolverChoice::ClassicRqi => classic_rqi(&a, &x0, stop),
                _ => prqi(&a, &x0, schedule, stop, true),
            };
            match outcome {
                Ok(o) if o.status.is_success() => {
                    let mu = o.eigenpair.value;
                    let label = eigenvalues
                        .iter()
                        .enumerate()
                        .min_by(|(_, a), (_, b)| {
                            (*a - mu).abs().partial_cmp(&(*b - mu).abs()).expect("finite")
                        })
                        .map(|(k, _)| k + 1)
                        .expect("nonempty");
                    (label, o.iterations)
                }
                Ok(o) => (0, o.iterations),
                Err(_) => (0, stop.max_iters),
            }
        })
        .collect();
    let (labels, iters) = results.into_iter().unzip();
    Ok(BasinRaster { resolution, points, labels, iters })
}

/// Stopping defaults for the basin study.
pub fn basin_stop() -> StoppingCriteria {
    StoppingCriteria::new(1e-11)
}

// ---------------------------------------------------------------- sweeps

/// One solver run at one initial angle.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub angle_deg: f64,
    pub solver: &'static str,
    pub value: f64,
    pub target_value: f64,
    pub success: bool,
    pub iterations: usize,
    pub seed: u64,
}

/// Uniform angle grid in degrees over [start, stop] with the given step.
pub fn angle_grid(start_deg: f64, stop_deg: f64, step_deg: f64) -> Result<Vec<f64>> {
    if !(start_deg > 0.0 && stop_deg < 90.0 && start_deg <= stop_deg && step_deg > 0.0) {
        return Err(Error::invalid(format!(
            "angle grid {start_deg}:{stop_deg}:{step_deg} must satisfy 0 < start <= stop < 90, step > 0"
        )));
    }
    let count = ((stop_deg - start_deg) / step_deg + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start_deg + i as f64 * step_deg).collect())
}

/// Stopping defaults for the angle-sweep study.
pub fn sweep_stop() -> StoppingCriteria {
    StoppingCriteria::new(1e-15)
}

/// For each angle, build a start at that angle to a seeded random target
/// eigenvector and run classic RQI and projected RQI (residual-norm
/// schedule). Success means the converged value sits within
/// 1e-8 (1 + |target|) of the target eigenvalue.
pub fn sweep(
    spec: &MatrixSpec,
    seed: u64,
    angles_deg: &[f64],
    stop: &StoppingCriteria,
) -> Result<Vec<SweepRecord>> {
    let a = generate(spec)?;
    let decomp = decompose(spec)?;
    let n = decomp.dim();
    let target = stream_rng(seed, u64::MAX).gen_range(0..n);
    let target_value = decomp.values[target];
    let schedule = GammaSchedule::ResidualNorm;

    let per_angle: Vec<Vec<SweepRecord>> = angles_deg
        .par_iter()
        .enumerate()
        .map(|(idx, &deg)| {
            let theta = deg.to_radians();
            let mut rng = stream_rng(seed, 1 + idx as u64);
            let x0 = initial_vector_with_angle_rng(&decomp, target, theta, &mut rng)?;
            let mut records = Vec::with_capacity(2);
            for (solver, outcome) in [
                ("classic-rqi", classic_rqi(&a, &x0, stop)),
                ("prqi", prqi(&a, &x0, &schedule, stop, false)),
            ] {
                let (value, iterations) = match outcome {
                    Ok(o) => (o.eigenpair.value, o.iterations),
                    Err(_) => (f64::NAN, stop.max_iters),
                };
                let success = (value - target_value).abs() <= 1e-8 * (1.0 + target_value.abs());
                records.push(SweepRecord {
                    angle_deg: deg,
                    solver,
                    value,
                    target_value,
                    success,
                    iterations,
                    seed,
                });
            }
            Ok(records)
        })
        .collect::<Result<_>>()?;
    Ok(per_angle.into_iter().flatten().collect())
}

/// CSV rows matching the SweepRecord fields.
pub fn sweep_csv(records: &[SweepRecord]) -> CsvDocument {
    let mut doc = CsvDocument::new();
    doc.row(&["angle_deg", "solver", "value", "target_value", "success", "iterations", "seed"]);
    for r in records {
        doc.row(&[
            fmt_float(r.angle_deg),
            r.solver.to_string(),
            fmt_float(r.value),
            fmt_float(r.target_value),
            r.success.to_string(),
            r.iterations.to_string(),
            r.seed.to_string(),
        ]);
    }
    doc
}

// ---------------------------------------------------------------- table 1

/// Angle bands in degrees, widest first, as reported in the success table.
pub const TABLE1_BANDS: [(f64, f64); 7] =
    [(80.0, 90.0), (70.0, 80.0), (60.0, 70.0), (50.0, 60.0), (40.0, 50.0), (30.0, 40.0), (0.0, 30.0)];

/// Aggregates for one angle band.
#[derive(Debug, Clone, PartialEq)]
pub struct Table1Band {
    pub lo_deg: f64,
    pub hi_deg: f64,
    pub classic_fraction: f64,
    pub prqi_fraction: f64,
    /// Fraction of starts whose initial Rayleigh quotient is strictly
    /// nearest the target eigenvalue.
    pub condition_fraction: f64,
    /// Mean schedule gamma at the initial iterate.
    pub mean_gamma0: f64,
}

#[derive(Debug, Clone)]
pub struct Table1Report {
    pub spec: MatrixSpec,
    pub target_index: usize,
    pub target_value: f64,
    pub samples_per_band: usize,
    pub bands: Vec<Table1Band>,
}

/// Stopping defaults for the success-fraction table.
pub fn table1_stop() -> StoppingCriteria {
    StoppingCriteria { tol: 1e-10, max_iters: 50, extra_iteration: false, scaled: false }
}

fn strictly_nearest(values: &[f64], target: usize, mu: f64) -> bool {
    let dt = (values[target] - mu).abs();
    values
        .iter()
        .enumerate()
        .all(|(k, &v)| k == target || (v - mu).abs() > dt)
}

/// Success-fraction table: per band, draw `samples_per_band` starts with
/// the angle uniform in the band (floored at 1e-4 rad) and a seeded
/// Gaussian complement direction, then run classic RQI and projected RQI.
/// A run succeeds when it converges and the target is the nearest
/// eigenvalue to the final Rayleigh quotient. Streams are keyed
/// (band << 32) | sample.
pub fn table1(
    spec: &MatrixSpec,
    samples_per_band: usize,
    seed: u64,
    target: Option<usize>,
    schedule: &GammaSchedule,
    stop: &StoppingCriteria,
) -> Result<Table1Report> {
    if samples_per_band == 0 {
        return Err(Error::invalid("samples_per_band must be positive"));
    }
    let a = generate(spec)?;
    let decomp = decompose(spec)?;
    let n = decomp.dim();
    let target_index = match target {
        Some(t) => {
            if t >= n {
                return Err(Error::invalid(format!("target index {t} out of range for n = {n}")));
            }
            t
        }
        None => stream_rng(seed, (TABLE1_BANDS.len() as u64) << 32).gen_range(0..n),
    };
    let target_value = decomp.values[target_index];

    struct Sample {
        classic_ok: bool,
        prqi_ok: bool,
        cond: bool,
        gamma0: f64,
    }

    let mut bands = Vec::with_capacity(TABLE1_BANDS.len());
    for (band_idx, &(lo_deg, hi_deg)) in TABLE1_BANDS.iter().enumerate() {
        let lo = lo_deg.to_radians().max(1e-4);
        let hi = hi_deg.to_radians();
        let samples: Vec<Sample> = (0..samples_per_band)
            .into_par_iter()
            .map(|s| {
                let mut rng = stream_rng(seed, ((band_idx as u64) << 32) | s as u64);
                let theta = lo + (hi - lo) * rng.gen::<f64>();
                let x0 = initial_vector_with_angle_rng(&decomp, target_index, theta, &mut rng)
                    .expect("band angles lie in (0, pi/2)");
                let mu0 = linalg::rayleigh_quotient(&a, &x0);
                let rn0 = linalg::norm(&linalg::residual(&a, &x0, mu0));
                let gamma0 = schedule.value(0, mu0, rn0, &x0);
                let cond = strictly_nearest(&decomp.values, target_index, mu0);
                let nearest_is_target = |outcome: crate::error::Result<SolveOutcome>| match outcome
                {
                    Ok(o) => {
                        o.status.is_success()
                            && decomp.nearest_index(o.eigenpair.value) == target_index
                    }
                    Err(_) => false,
                };
                let classic_ok = nearest_is_target(classic_rqi(&a, &x0, stop));
                let prqi_ok = nearest_is_target(prqi(&a, &x0, schedule, stop, false));
                Sample { classic_ok, prqi_ok, cond, gamma0 }
            })
            .collect();
        let count = samples.len() as f64;
        bands.push(Table1Band {
            lo_deg,
            hi_deg,
            classic_fraction: samples.iter().filter(|s| s.classic_ok).count() as f64 / count,
            prqi_fraction: samples.iter().filter(|s| s.prqi_ok).count() as f64 / count,
            condition_fraction: samples.iter().filter(|s| s.cond).count() as f64 / count,
            mean_gamma0: samples.iter().map(|s| s.gamma0).sum::<f64>() / count,
        });
    }
    Ok(Table1Report {
        spec: spec.clone(),
        target_index,
        target_value,
        samples_per_band,
        bands,
    })
}

pub fn table1_csv(report: &Table1Report) -> CsvDocument {
    let mut doc = CsvDocument::new();
    doc.row(&[
        "band_lo_deg",
        "band_hi_deg",
        "classic_fraction",
        "prqi_fraction",
        "condition_fraction",
        "mean_gamma0",
    ]);
    for b in &report.bands {
        doc.row(&[
            fmt_float(b.lo_deg),
            fmt_float(b.hi_deg),
            fmt_float(b.classic_fraction),
            fmt_float(b.prqi_fraction),
            fmt_float(b.condition_fraction),
            fmt_float(b.mean_gamma0),
        ]);
    }
    doc
}

// ---------------------------------------------------------------- band gap

/// The eight (n_osc, R) profiles of the band-gap table.
pub const TABLE2_PROFILES: [(f64, f64); 8] = [
    (1.5, 35.0),
    (2.0, 35.0),
    (2.5, 35.0),
    (3.0, 55.0),
    (3.5, 55.0),
    (4.0, 55.0),
    (4.5, 55.0),
    (5.0, 55.0),
];

/// One profile's results: the guarded projected solve and the unguarded
/// classic solve from the same start.
#[derive(Debug, Clone)]
pub struct SturmRow {
    pub n_osc: f64,
    pub r_cut: f64,
    pub prqi: GapReport,
    pub classic_value: f64,
    pub classic_index: usize,
    pub classic_iters: usize,
    pub classic_status: SolveStatus,
}

/// Run both solvers for each profile on the configured discretization.
pub fn sturm_table(run: &SturmRunConfig, profiles: &[InitialProfile]) -> Result<Vec<SturmRow>> {
    let pair = assemble(&run.config)?;
    let stop = run.stopping();
    let mut rows = Vec::with_capacity(profiles.len());
    for profile in profiles {
        let report =
            solve_gap_eigenpair(&run.config, profile, &run.schedule, &stop, run.guard())?;
        let f = sample_profile(&run.config, profile)?;
        let x0: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let classic = classic_rqi_generalized(&pair, &x0, &stop)?;
        let classic_value = classic.eigenpair.value;
        let classic_index = eigenvalue_index(&pair, classic_value - 1e-6)?;
        rows.push(SturmRow {
            n_osc: profile.n_osc,
            r_cut: profile.r_cut,
            prqi: report,
            classic_value,
            classic_index,
            classic_iters: classic.iterations,
            classic_status: classic.status,
        });
    }
    Ok(rows)
}

pub fn sturm_csv(rows: &[SturmRow]) -> CsvDocument {
    let mut doc = CsvDocument::new();
    doc.row(&[
        "n_osc",
        "R",
        "prqi_lambda",
        "prqi_index",
        "prqi_iters",
        "rqi_lambda",
        "rqi_index",
        "rqi_iters",
        "in_gap",
        "eta_final",
    ]);
    for r in rows {
        doc.row(&[
            fmt_float(r.n_osc),
            fmt_float(r.r_cut),
            fmt_float(r.prqi.outcome.eigenpair.value),
            r.prqi.index.to_string(),
            r.prqi.outcome.iterations.to_string(),
            fmt_float(r.classic_value),
            r.classic_index.to_string(),
            r.classic_iters.to_string(),
            r.prqi.in_gap.to_string(),
            r.prqi.eta_final.map(fmt_float).unwrap_or_default(),
        ]);
    }
    doc
}

// ---------------------------------------------------------------- commands

/// Inputs for the general-purpose solve command.
#[derive(Debug)]
pub struct SolveOptions {
    pub matrix: std::path::PathBuf,
    pub mass: Option<std::path::PathBuf>,
    pub x0: Option<std::path::PathBuf>,
    pub solver: SolverChoice,
    pub schedule: GammaSchedule,
    pub stop: StoppingCriteria,
    pub seed: u64,
    /// Fixed shift for inverse iteration.
    pub shift: Option<f64>,
    pub finalize_real: bool,
    pub trace_out: Option<std::path::PathBuf>,
}

fn trace_csv(outcome: &SolveOutcome) -> CsvDocument {
    let mut doc = CsvDocument::new();
    doc.row(&["k", "mu", "gamma", "res_norm", "angle"]);
    for t in &outcome.trace {
        doc.row(&[
            t.k.to_string(),
            fmt_float(t.mu),
            fmt_float(t.gamma),
            fmt_float(t.res_norm),
            t.angle.map(fmt_float).unwrap_or_default(),
        ]);
    }
    doc
}

fn exit_code(status: SolveStatus) -> i32 {
    match status {
        SolveStatus::Converged | SolveStatus::NearSingularConverged => 0,
        SolveStatus::MaxItersExceeded => 2,
        SolveStatus::GuardAborted => 3,
    }
}

fn print_outcome(outcome: &SolveOutcome) {
    println!("status      {}", outcome.status.as_str());
    println!("eigenvalue  {}", fmt_float(outcome.eigenpair.value));
    println!("residual    {}", fmt_float(outcome.final_residual_norm));
    println!("iterations  {}", outcome.iterations);
}

/// Solve one eigenproblem from files; returns the process exit code.
pub fn cmd_solve(opts: &SolveOptions) -> Result<i32> {
    let a = crate::io::matrix_market::read_operator(&opts.matrix)?;
    let n = a.dim();
    let x0 = match &opts.x0 {
        Some(path) => {
            let v = crate::io::matrix_market::read_vector(path)?;
            if v.len() != n {
                return Err(Error::invalid(format!(
                    "x0 length {} does not match matrix dimension {n}",
                    v.len()
                )));
            }
            v
        }
        None => {
            let mut rng = stream_rng(opts.seed, 0);
            crate::matrices::rng::gaussian_complex_vector(&mut rng, n)
        }
    };

    let outcome = match &opts.mass {
        None => match opts.solver {
            SolverChoice::ClassicRqi => classic_rqi(&a, &x0, &opts.stop)?,
            SolverChoice::Prqi => {
                prqi(&a, &x0, &opts.schedule, &opts.stop, opts.finalize_real)?
            }
            SolverChoice::PrqiFull => prqi_full(&a, &x0, &opts.schedule, &opts.stop)?,
            SolverChoice::InverseIteration => {
                let mu = opts.shift.ok_or_else(|| {
                    Error::invalid("inverse iteration needs --shift <mu>")
                })?;
                inverse_iteration(&a, mu, &x0, &opts.stop)?
            }
        },
        Some(mass_path) => {
            let m = crate::io::matrix_market::read_operator(mass_path)?;
            let pair = GeneralizedPair::new(a, m)?;
            match opts.solver {
                SolverChoice::ClassicRqi => classic_rqi_generalized(&pair, &x0, &opts.stop)?,
                SolverChoice::Prqi => crate::solvers::prqi_generalized(
                    &pair,
                    &x0,
                    &opts.schedule,
                    &opts.stop,
                    None,
                    opts.finalize_real,
                )?,
                other => {
                    return Err(Error::invalid(format!(
                        "{} does not support a mass matrix",
                        other.as_str()
                    )))
                }
            }
        }
    };

    print_outcome(&outcome);
    if let Some(path) = &opts.trace_out {
        trace_csv(&outcome).write(path)?;
    }
    Ok(exit_code(outcome.status))
}

/// Basin raster for one solver: writes the PPM and CSV into `out_dir` and
/// prints the boundary fraction and region count.
pub fn cmd_basin(
    s: f64,
    resolution: usize,
    solver: SolverChoice,
    schedule: &GammaSchedule,
    stop: &StoppingCriteria,
    out_dir: &Path,
) -> Result<i32> {
    std::fs::create_dir_all(out_dir)?;
    let raster = basin_raster(s, resolution, solver, schedule, stop)?;
    let stem = format!("basin-{}", solver.as_str());
    raster.to_image().write(&out_dir.join(format!("{stem}.ppm")))?;
    raster.to_csv().write(&out_dir.join(format!("{stem}.csv")))?;
    let counts: Vec<usize> =
        (0..=3).map(|l| raster.labels.iter().filter(|&&x| x == l).count()).collect();
    println!("solver             {}", solver.as_str());
    println!("cells              {}", raster.points.len());
    println!("labels (1,2,3)     {} {} {}", counts[1], counts[2], counts[3]);
    println!("sentinel           {}", counts[0]);
    println!("boundary fraction  {}", fmt_float(raster.boundary_fraction()));
    println!("regions            {}", raster.connected_regions());
    Ok(0)
}

/// Angle sweep; writes sweep.csv into `out_dir`.
pub fn cmd_sweep(
    spec: &MatrixSpec,
    seed: u64,
    angles_deg: &[f64],
    stop: &StoppingCriteria,
    out_dir: &Path,
) -> Result<i32> {
    std::fs::create_dir_all(out_dir)?;
    let records = sweep(spec, seed, angles_deg, stop)?;
    sweep_csv(&records).write(&out_dir.join("sweep.csv"))?;
    for solver in ["classic-rqi", "prqi"] {
        let (ok, total) = records
            .iter()
            .filter(|r| r.solver == solver)
            .fold((0usize, 0usize), |(ok, total), r| (ok + r.success as usize, total + 1));
        println!("{solver:<12} {ok}/{total} angles reached the target");
    }
    Ok(0)
}

/// Success-fraction table; writes table1.csv into `out_dir` and prints the
/// per-band fractions.
pub fn cmd_table1(
    spec: &MatrixSpec,
    samples_per_band: usize,
    seed: u64,
    target: Option<usize>,
    schedule: &GammaSchedule,
    out_dir: &Path,
) -> Result<i32> {
    if samples_per_band < 100 {
        return Err(Error::invalid("need at least 100 samples per band"));
    }
    std::fs::create_dir_all(out_dir)?;
    let report = table1(spec, samples_per_band, seed, target, schedule, &table1_stop())?;
    table1_csv(&report).write(&out_dir.join("table1.csv"))?;
    println!(
        "target index {} (eigenvalue {:.6}), {} samples per band",
        report.target_index, report.target_value, report.samples_per_band
    );
    println!("{:>10} {:>10} {:>10} {:>10} {:>10}", "band", "classic", "prqi", "cond", "gamma0");
    for b in &report.bands {
        println!(
            "{:>4}-{:<5} {:>9.2}% {:>9.2}% {:>9.2}% {:>10.4}",
            b.lo_deg,
            b.hi_deg,
            100.0 * b.classic_fraction,
            100.0 * b.prqi_fraction,
            100.0 * b.condition_fraction,
            b.mean_gamma0
        );
    }
    Ok(0)
}

/// Band-gap table; writes sturm.csv into `out_dir` and prints the rows.
pub fn cmd_sturm(
    run: &SturmRunConfig,
    profiles: &[InitialProfile],
    out_dir: &Path,
) -> Result<i32> {
    std::fs::create_dir_all(out_dir)?;
    let profile_list: Vec<InitialProfile> = if !profiles.is_empty() {
        profiles.to_vec()
    } else if let Some(p) = run.profile {
        vec![p]
    } else {
        TABLE2_PROFILES.iter().map(|&(n, r)| InitialProfile::new(n, r)).collect()
    };
    let rows = sturm_table(run, &profile_list)?;
    sturm_csv(&rows).write(&out_dir.join("sturm.csv"))?;
    println!("X = {}, h = {}, schedule = {:?}", run.config.x_max, run.config.h, run.schedule);
    println!(
        "{:>6} {:>5} {:>14} {:>6} {:>6} {:>14} {:>6} {:>6}  {:>6} {:>10}",
        "n_osc", "R", "prqi_lambda", "idx", "iters", "rqi_lambda", "idx", "iters", "in_gap", "eta"
    );
    for r in &rows {
        println!(
            "{:>6} {:>5} {:>14.8} {:>6} {:>6} {:>14.8} {:>6} {:>6}  {:>6} {:>10.6}",
            r.n_osc,
            r.r_cut,
            r.prqi.outcome.eigenpair.value,
            r.prqi.index,
            r.prqi.outcome.iterations,
            r.classic_value,
            r.classic_index,
            r.classic_iters,
            r.prqi.in_gap,
            r.prqi.eta_final.unwrap_or(f64::NAN)
        );
    }
    Ok(0)
}
