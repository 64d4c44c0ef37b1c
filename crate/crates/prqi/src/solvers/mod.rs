//! Iteration drivers: inverse iteration, classic Rayleigh quotient
//! iteration, the projected variant (full and simplified forms), their
//! generalized-problem versions, gamma schedules, stopping logic, the
//! tail-localization guard, and the empirical convergence-order estimate.
//!
//! All Rayleigh-quotient drivers share one engine so the loop semantics are
//! identical everywhere: per pass, evaluate mu and the residual at the
//! current iterate, record a trace row, check guard / firing / tolerance /
//! iteration budget in that order, then solve and normalize. With
//! `extra_iteration` the first pass at tolerance arms a flag and exactly one
//! more step runs unconditionally.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;
use crate::operator::{GeneralizedPair, HermitianOperator};

/// Pure custom gamma rule over (k, mu, ||r||, x).
pub type CustomRule = Box<dyn Fn(usize, f64, f64, &[Complex64]) -> f64 + Send + Sync>;

/// Rule for the imaginary shift gamma^(k).
pub enum GammaSchedule {
    /// gamma = ||r^(k)|| (the generalized residual A x - mu M x in
    /// generalized mode).
    ResidualNorm,
    /// gamma = ||r^(k)||^2.
    ResidualNormSquared,
    /// Fixed gamma0 > 0.
    Constant(f64),
    /// Arbitrary pure rule; must return finite nonnegative values.
    Custom(CustomRule),
}

impl GammaSchedule {
    pub fn value(&self, k: usize, mu: f64, res_norm: f64, x: &[Complex64]) -> f64 {
        let g = match self {
            GammaSchedule::ResidualNorm => res_norm,
            GammaSchedule::ResidualNormSquared => res_norm * res_norm,
            GammaSchedule::Constant(g0) => {
                assert!(*g0 > 0.0, "constant schedule needs gamma0 > 0, got {g0}");
                *g0
            }
            GammaSchedule::Custom(rule) => rule(k, mu, res_norm, x),
        };
        assert!(
            g.is_finite() && g >= 0.0,
            "gamma must be finite and nonnegative, got {g}"
        );
        g
    }
}

impl std::fmt::Debug for GammaSchedule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GammaSchedule::ResidualNorm => write!(f, "ResidualNorm"),
            GammaSchedule::ResidualNormSquared => write!(f, "ResidualNormSquared"),
            GammaSchedule::Constant(g) => write!(f, "Constant({g})"),
            GammaSchedule::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// Residual-based stopping control.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StoppingCriteria {
    /// Residual-norm threshold, > 0.
    pub tol: f64,
    /// Iteration budget, >= 1.
    pub max_iters: usize,
    /// Run exactly one more step after the criterion first fires.
    pub extra_iteration: bool,
    /// Compare against |mu^(k)| * tol instead of tol.
    pub scaled: bool,
}

impl StoppingCriteria {
    pub fn new(tol: f64) -> Self {
        StoppingCriteria { tol, ..Default::default() }
    }

    fn effective_tol(&self, mu: f64) -> f64 {
        if self.scaled {
            mu.abs() * self.tol
        } else {
            self.tol
        }
    }

    fn validate(&self) {
        assert!(self.tol > 0.0, "tol must be positive, got {}", self.tol);
        assert!(self.max_iters >= 1, "max_iters must be at least 1");
    }
}

impl Default for StoppingCriteria {
    fn default() -> Self {
        StoppingCriteria { tol: 1e-10, max_iters: 100, extra_iteration: true, scaled: false }
    }
}

/// Abort rule against mass leaking into the tail of the vector (spurious
/// modes localized at an artificial boundary).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalizationGuard {
    /// Entries at or beyond this index form the tail.
    pub tail_start_index: usize,
    /// Abort threshold eta* in (0, 1).
    pub threshold: f64,
}

/// Tail-mass fraction eta = ||x[tail..]|| / ||x||, in [0, 1].
pub fn eta(x: &[Complex64], guard: &LocalizationGuard) -> Result<f64> {
    assert!(
        guard.tail_start_index < x.len(),
        "tail start {} out of range for length {}",
        guard.tail_start_index,
        x.len()
    );
    assert!(
        guard.threshold > 0.0 && guard.threshold < 1.0,
        "guard threshold must lie in (0, 1)"
    );
    let full = linalg::norm(x);
    if full == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(linalg::norm(&x[guard.tail_start_index..]) / full)
}

/// Terminal state of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    MaxItersExceeded,
    GuardAborted,
    NearSingularConverged,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Converged => "converged",
            SolveStatus::MaxItersExceeded => "max-iters-exceeded",
            SolveStatus::GuardAborted => "guard-aborted",
            SolveStatus::NearSingularConverged => "near-singular-converged",
        }
    }

    /// Both convergence statuses count as success.
    pub fn is_success(&self) -> bool {
        matches!(self, SolveStatus::Converged | SolveStatus::NearSingularConverged)
    }
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<Complex64>,
}

/// One row per iterate, including k = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub k: usize,
    pub mu: f64,
    pub gamma: f64,
    pub res_norm: f64,
    /// Angle to the target eigenvector, when one was supplied for tracing.
    pub angle: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub eigenpair: EigenPair,
    pub iterations: usize,
    pub final_residual_norm: f64,
    pub trace: Vec<TraceRecord>,
}

/// Standard or generalized problem, seen through one interface.
enum Problem<'a> {
    Standard(&'a HermitianOperator),
    Generalized(&'a GeneralizedPair),
}

impl Problem<'_> {
    fn normalize(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        match self {
            Problem::Standard(_) => linalg::normalize(x),
            Problem::Generalized(p) => linalg::m_normalize(&p.m, x),
        }
    }

    fn mu(&self, x: &[Complex64]) -> f64 {
        match self {
            Problem::Standard(a) => linalg::rayleigh_quotient(a, x),
            Problem::Generalized(p) => linalg::generalized_rayleigh_quotient(p, x),
        }
    }

    fn residual(&self, x: &[Complex64], mu: f64) -> Vec<Complex64> {
        match self {
            Problem::Standard(a) => linalg::residual(a, x, mu),
            Problem::Generalized(p) => linalg::generalized_residual(p, x, mu),
        }
    }

    fn is_real(&self) -> bool {
        match self {
            Problem::Standard(a) => a.is_real(),
            Problem::Generalized(p) => p.a.is_real() && p.m.is_real(),
        }
    }

    /// One shifted solve with shift mu - i gamma. `full_projection` uses the
    /// dense rank-one-modified system instead of the plain imaginary shift
    /// (standard problem only).
    fn solve(
        &self,
        mu: f64,
        gamma: f64,
        x: &[Complex64],
        full_projection: bool,
    ) -> Result<Vec<Complex64>> {
        let sigma = Complex64::new(mu, -gamma);
        match self {
            Problem::Standard(a) => {
                if full_projection {
                    let n = a.dim();
                    let ig = Complex64::new(0.0, gamma);
                    let mut m = a.to_full();
                    for i in 0..n {
                        m[i * n + i] += ig - mu;
                        for j in 0..n {
                            m[i * n + j] -= ig * x[i] * x[j].conj();
                        }
                    }
                    crate::linalg::lu::solve_dense(n, m, x)
                } else {
                    a.solve_shifted(sigma, x)
                }
            }
            Problem::Generalized(p) => {
                let rhs = p.m.apply(x);
                p.solve_shifted(sigma, &rhs)
            }
        }
    }
}

/// Iteration-mode selector for the shared engine.
enum Mode<'a> {
    Classic,
    Prqi { schedule: &'a GammaSchedule, full_projection: bool },
}

struct EngineConfig<'a> {
    stop: &'a StoppingCriteria,
    guard: Option<&'a LocalizationGuard>,
    target: Option<&'a [Complex64]>,
    finalize_real: bool,
}

fn run_engine(
    problem: &Problem<'_>,
    mode: &Mode<'_>,
    x0: &[Complex64],
    cfg: &EngineConfig<'_>,
) -> Result<SolveOutcome> {
    cfg.stop.validate();
    let mut x = problem.normalize(x0)?;
    let mut trace: Vec<TraceRecord> = Vec::new();
    let mut iterations = 0usize;
    let mut fired = false;
    let mut mu;
    let mut rn;

    let status = loop {
        mu = problem.mu(&x);
        let r = problem.residual(&x, mu);
        rn = linalg::norm(&r);
        assert!(rn.is_finite(), "residual norm became non-finite at k = {iterations}");
        let gamma = match mode {
            Mode::Classic => 0.0,
            Mode::Prqi { schedule, .. } => schedule.value(iterations, mu, rn, &x),
        };
        trace.push(TraceRecord {
            k: iterations,
            mu,
            gamma,
            res_norm: rn,
            angle: cfg.target.map(|t| linalg::angle_to_target(&x, t)),
        });

        if let Some(g) = cfg.guard {
            if eta(&x, g)? > g.threshold {
                break SolveStatus::GuardAborted;
            }
        }
        if fired {
            break SolveStatus::Converged;
        }
        if rn <= cfg.stop.effective_tol(mu) {
            if !cfg.stop.extra_iteration {
                break SolveStatus::Converged;
            }
            fired = true;
        }
        if iterations >= cfg.stop.max_iters {
            break SolveStatus::MaxItersExceeded;
        }

        let full = matches!(mode, Mode::Prqi { full_projection: true, .. });
        match problem.solve(mu, gamma, &x, full) {
            Ok(z) => {
                x = problem.normalize(&z)?;
                iterations += 1;
            }
            Err(Error::NearSingular { direction }) => {
                // the shift reached an eigenvalue: success; refine by the
                // dominant direction of the nearly singular system if the
                // back-substitution produced a usable vector
                if let Some(d) = direction {
                    if let Ok(xd) = problem.normalize(&d) {
                        x = xd;
                    }
                }
                rn = linalg::norm(&problem.residual(&x, mu));
                break SolveStatus::NearSingularConverged;
            }
            Err(e) => return Err(e),
        }
    };

    if cfg.finalize_real && problem.is_real() {
        // one classic step on the normalized real part; excluded from the
        // iteration count and the trace
        let re: Vec<Complex64> = x.iter().map(|v| Complex64::new(v.re, 0.0)).collect();
        if let Ok(mut xr) = problem.normalize(&re) {
            let mur = problem.mu(&xr);
            match problem.solve(mur, 0.0, &xr, false) {
                Ok(z) => {
                    if let Ok(xn) = problem.normalize(&z) {
                        xr = xn;
                    }
                }
                Err(Error::NearSingular { direction }) => {
                    if let Some(d) = direction {
                        if let Ok(xn) = problem.normalize(&d) {
                            xr = xn;
                        }
                    }
                }
                Err(e) => return Err(e),
            }
            x = xr;
            mu = problem.mu(&x);
            rn = linalg::norm(&problem.residual(&x, mu));
        }
    }

    Ok(SolveOutcome {
        status,
        eigenpair: EigenPair { value: mu, vector: x },
        iterations,
        final_residual_norm: rn,
        trace,
    })
}

/// Fixed-shift inverse iteration. The residual criterion uses the fixed mu,
/// not the Rayleigh quotient. A near-singular first solve means the shift is
/// an eigenvalue and is reported as an error.
pub fn inverse_iteration(
    a: &HermitianOperator,
    mu: f64,
    x0: &[Complex64],
    stop: &StoppingCriteria,
) -> Result<SolveOutcome> {
    stop.validate();
    let mut x = linalg::normalize(x0)?;
    let mut trace = Vec::new();
    let mut iterations = 0usize;
    let mut fired = false;
    let mut rn;

    let status = loop {
        let r = linalg::residual(a, &x, mu);
        rn = linalg::norm(&r);
        trace.push(TraceRecord { k: iterations, mu, gamma: 0.0, res_norm: rn, angle: None });
        if fired {
            break SolveStatus::Converged;
        }
        if rn <= stop.effective_tol(mu) {
            if !stop.extra_iteration {
                break SolveStatus::Converged;
            }
            fired = true;
        }
        if iterations >= stop.max_iters {
            break SolveStatus::MaxItersExceeded;
        }
        match a.solve_shifted(Complex64::new(mu, 0.0), &x) {
            Ok(z) => {
                x = linalg::normalize(&z)?;
                iterations += 1;
            }
            Err(Error::NearSingular { .. }) if iterations == 0 => {
                return Err(Error::ShiftIsEigenvalue);
            }
            Err(Error::NearSingular { direction }) => {
                if let Some(d) = direction {
                    if let Ok(xd) = linalg::normalize(&d) {
                        x = xd;
                    }
                }
                rn = linalg::norm(&linalg::residual(a, &x, mu));
                break SolveStatus::NearSingularConverged;
            }
            Err(e) => return Err(e),
        }
    };

    Ok(SolveOutcome {
        status,
        eigenpair: EigenPair { value: mu, vector: x },
        iterations,
        final_residual_norm: rn,
        trace,
    })
}

/// Classic Rayleigh quotient iteration.
pub fn classic_rqi(
    a: &HermitianOperator,
    x0: &[Complex64],
    stop: &StoppingCriteria,
) -> Result<SolveOutcome> {
    classic_rqi_traced(a, x0, stop, None)
}

/// Classic RQI recording per-step angles to a target eigenvector.
pub fn classic_rqi_traced(
    a: &HermitianOperator,
    x0: &[Complex64],
    stop: &StoppingCriteria,
    target: Option<&[Complex64]>,
) -> Result<SolveOutcome> {
    run_engine(
        &Problem::Standard(a),
        &Mode::Classic,
        x0,
        &EngineConfig { stop, guard: None, target, finalize_real: false },
    )
}

/// Projected RQI, simplified form: one imaginary-shifted solve per step,
/// [A - (mu - i gamma) I] z = x.
pub fn prqi(
    a: &HermitianOperator,
    x0: &[Complex64],
    schedule: &GammaSchedule,
    stop: &StoppingCriteria,
    finalize_real: bool,
) -> Result<SolveOutcome> {
    prqi_traced(a, x0, schedule, stop, finalize_real, None)
}

/// Simplified projected RQI recording per-step angles to a target.
pub fn prqi_traced(
    a: &HermitianOperator,
    x0: &[Complex64],
    schedule: &GammaSchedule,
    stop: &StoppingCriteria,
    finalize_real: bool,
    target: Option<&[Complex64]>,
) -> Result<SolveOutcome> {
    run_engine(
        &Problem::Standard(a),
        &Mode::Prqi { schedule, full_projection: false },
        x0,
        &EngineConfig { stop, guard: None, target, finalize_real },
    )
}

/// Projected RQI, full form: solves the dense rank-one-modified system
/// [A - mu I + i gamma (I - x x*)] y = x. Reference implementation for the
/// equivalence with the simplified form.
pub fn prqi_full(
    a: &HermitianOperator,
    x0: &[Complex64],
    schedule: &GammaSchedule,
    stop: &StoppingCriteria,
) -> Result<SolveOutcome> {
    run_engine(
        &Problem::Standard(a),
        &Mode::Prqi { schedule, full_projection: true },
        x0,
        &EngineConfig { stop, guard: None, target: None, finalize_real: false },
    )
}

/// Classic RQI for the generalized problem A v = lambda M v: generalized
/// Rayleigh shift, right-hand side M x, M-normalization, stopping on
/// ||A x - mu M x||.
pub fn classic_rqi_generalized(
    p: &GeneralizedPair,
    x0: &[Complex64],
    stop: &StoppingCriteria,
) -> Result<SolveOutcome> {
    run_engine(
        &Problem::Generalized(p),
        &Mode::Classic,
        x0,
        &EngineConfig { stop, guard: None, target: None, finalize_real: false },
    )
}

/// Projected RQI for the generalized problem, with an optional localization
/// guard that aborts when the tail-mass fraction exceeds its threshold.
pub fn prqi_generalized(
    p: &GeneralizedPair,
    x0: &[Complex64],
    schedule: &GammaSchedule,
    stop: &StoppingCriteria,
    guard: Option<&LocalizationGuard>,
    finalize_real: bool,
) -> Result<SolveOutcome> {
    run_engine(
        &Problem::Generalized(p),
        &Mode::Prqi { schedule, full_projection: false },
        x0,
        &EngineConfig { stop, guard, target: None, finalize_real },
    )
}

/// Least-squares slope of log tan(theta_{k+1}) against log tan(theta_k)
/// over consecutive pairs where both tangents sit above the saturation
/// floor. Needs at least three angles above 10 * machine epsilon and two
/// usable pairs.
pub fn convergence_order_estimate(angles: &[f64]) -> Result<f64> {
    const SATURATION_FLOOR: f64 = 1e-14;
    let noise_floor = 10.0 * f64::EPSILON;
    let informative = angles.iter().filter(|&&t| t > noise_floor).count();
    if informative < 3 {
        return Err(Error::NotEstimable("fewer than 3 angles above the noise floor"));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for w in angles.windows(2) {
        let (t0, t1) = (w[0].tan(), w[1].tan());
        if t0 > SATURATION_FLOOR && t1 > SATURATION_FLOOR {
            xs.push(t0.ln());
            ys.push(t1.ln());
        }
    }
    if xs.len() < 2 {
        return Err(Error::NotEstimable("fewer than 2 consecutive unsaturated pairs"));
    }
    let n = xs.len() as f64;
    let xb = xs.iter().sum::<f64>() / n;
    let yb = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xb) * (y - yb)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - xb) * (x - xb)).sum();
    assert!(sxx > 0.0, "degenerate abscissa in order fit");
    Ok(sxy / sxx)
}
