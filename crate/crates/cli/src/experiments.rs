//! Long-run benchmark runs: error growth on the harmonic oscillator and
//! invariant drift on Volterra–Lotka, one CSV per run.

use std::f64::consts::{PI, TAU};
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use complex_splitting::coeffs;
use complex_splitting::engine::{integrate, RunConfig};
use complex_splitting::models::{self, HarmonicSystem, VolterraLotkaSystem};
use complex_splitting::{CompositionScheme, ProjectionPolicy, Trajectory};

use crate::growth::{self, GrowthReport};
use crate::CliError;

/// Methods compared in both experiments.
pub const BENCHMARK_METHODS: [&str; 4] = ["s23", "s34", "s76", "s7c6"];

/// Oscillator step giving 27 to 28 flow evaluations per period.
pub fn oscillator_step(method: &str) -> Result<f64, CliError> {
    match method.to_ascii_lowercase().as_str() {
        "s23" => Ok(PI / 7.0),
        "s34" => Ok(2.0 * PI / 9.0),
        "s76" | "s7c6" | "s7*6" => Ok(PI / 2.0),
        other => Err(CliError::Usage(format!(
            "no default oscillator step for `{other}`; pass --h (defaults exist for {})",
            BENCHMARK_METHODS.join(", ")
        ))),
    }
}

/// Evaluations of the basic symmetric step per period `2π`.
pub fn evaluations_per_period(scheme: &CompositionScheme, h: f64) -> f64 {
    TAU / h * scheme.stages() as f64
}

fn steps_for(horizon: f64, h: f64) -> usize {
    (horizon / h).round().max(1.0) as usize
}

#[derive(Debug, Clone)]
pub struct OscillatorConfig {
    pub methods: Vec<String>,
    pub periods: usize,
    /// Overrides the per-method default step.
    pub h: Option<f64>,
    pub observe_every: usize,
}

impl Default for OscillatorConfig {
    fn default() -> Self {
        OscillatorConfig {
            methods: BENCHMARK_METHODS.iter().map(|s| s.to_string()).collect(),
            periods: 1000,
            h: None,
            observe_every: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OscillatorRun {
    pub method: String,
    pub h: f64,
    pub evaluations_per_period: f64,
    pub trajectory: Trajectory,
    pub energy: GrowthReport,
    pub position: GrowthReport,
}

impl OscillatorRun {
    pub fn file_name(&self) -> String {
        format!("fig1_{}.csv", self.method)
    }
}

/// Runs each method from `(q, p) = (1, 1)` and records position and energy
/// errors of the real part of the state.
pub fn run_fig1(config: &OscillatorConfig) -> Result<Vec<OscillatorRun>, CliError> {
    let jobs = config
        .methods
        .iter()
        .map(|m| {
            let scheme = coeffs::by_name::<f64>(m)?;
            let h = match config.h {
                Some(h) => h,
                None => oscillator_step(m)?,
            };
            Ok((m.to_ascii_lowercase(), scheme, h))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    if config.periods == 0 {
        return Err(CliError::Usage(
            "horizon must be at least one period".into(),
        ));
    }
    let horizon = config.periods as f64 * TAU;
    std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|(name, scheme, h)| {
                scope.spawn(move || -> Result<OscillatorRun, CliError> {
                    let sys = HarmonicSystem;
                    let obs = models::harmonic_error_observables(1.0, 1.0);
                    let cfg = RunConfig::new(*h, steps_for(horizon, *h))
                        .policy(ProjectionPolicy::OutputOnly)
                        .observe_every(config.observe_every);
                    let trajectory = integrate(scheme, &sys, &[1.0, 1.0], cfg, &obs)?;
                    let energy =
                        growth::classify(&trajectory.series("energy_error").unwrap_or_default());
                    let position =
                        growth::classify(&trajectory.series("position_error").unwrap_or_default());
                    Ok(OscillatorRun {
                        method: name.clone(),
                        h: *h,
                        evaluations_per_period: evaluations_per_period(scheme, *h),
                        trajectory,
                        energy,
                        position,
                    })
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("experiment worker panicked"))
            .collect()
    })
}

/// Coarse `4mπ/210` or fine `mπ/210` step, `m` the stage count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepSize {
    Coarse,
    Fine,
}

impl StepSize {
    pub fn h(self, stages: usize) -> f64 {
        let m = stages as f64;
        match self {
            StepSize::Coarse => 4.0 * m * PI / 210.0,
            StepSize::Fine => m * PI / 210.0,
        }
    }
}

impl std::fmt::Display for StepSize {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StepSize::Coarse => "coarse",
            StepSize::Fine => "fine",
        })
    }
}

#[derive(Debug, Clone)]
pub struct InvariantConfig {
    pub methods: Vec<String>,
    pub periods: usize,
    pub policies: Vec<ProjectionPolicy>,
    pub observe_every: usize,
}

impl Default for InvariantConfig {
    fn default() -> Self {
        InvariantConfig {
            methods: BENCHMARK_METHODS.iter().map(|s| s.to_string()).collect(),
            periods: 100,
            policies: vec![ProjectionPolicy::Never, ProjectionPolicy::EachStep],
            observe_every: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct InvariantRun {
    pub method: String,
    pub declared_order: u32,
    pub step: StepSize,
    pub h: f64,
    pub policy: ProjectionPolicy,
    pub trajectory: Trajectory,
    /// Largest relative invariant error over the last period.
    pub final_error: f64,
}

impl InvariantRun {
    pub fn file_name(&self) -> String {
        format!("fig3_{}_{}_{}.csv", self.method, self.step, self.policy)
    }
}

/// Largest value over the final `window` of a series.
pub fn final_window_max(series: &[(f64, f64)], window: f64) -> f64 {
    let Some(&(t_end, _)) = series.last() else {
        return f64::NAN;
    };
    series
        .iter()
        .filter(|(t, _)| *t >= t_end - window)
        .map(|(_, e)| *e)
        .fold(0.0, f64::max)
}

/// Runs each method from `(u, v) = (2, 4)` at both step sizes and under each
/// projection policy, recording `|I − I0| / |I0|`.
pub fn run_fig3(config: &InvariantConfig) -> Result<Vec<InvariantRun>, CliError> {
    if config.periods == 0 {
        return Err(CliError::Usage(
            "horizon must be at least one period".into(),
        ));
    }
    let mut jobs = Vec::new();
    for m in &config.methods {
        let scheme = coeffs::by_name::<f64>(m)?;
        for step in [StepSize::Coarse, StepSize::Fine] {
            for policy in &config.policies {
                jobs.push((m.to_ascii_lowercase(), scheme.clone(), step, *policy));
            }
        }
    }
    let horizon = config.periods as f64 * TAU;
    std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|(name, scheme, step, policy)| {
                scope.spawn(move || -> Result<InvariantRun, CliError> {
                    let sys = VolterraLotkaSystem;
                    let obs = models::vl_error_observables(2.0, 4.0)?;
                    let h = step.h(scheme.stages());
                    let cfg = RunConfig::new(h, steps_for(horizon, h))
                        .policy(*policy)
                        .observe_every(config.observe_every);
                    let trajectory = integrate(scheme, &sys, &[2.0, 4.0], cfg, &obs)?;
                    let series = trajectory.series("invariant_error").unwrap_or_default();
                    Ok(InvariantRun {
                        method: name.clone(),
                        declared_order: scheme.declared_order(),
                        step: *step,
                        h,
                        policy: *policy,
                        final_error: final_window_max(&series, TAU),
                        trajectory,
                    })
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("experiment worker panicked"))
            .collect()
    })
}

/// Writes one CSV per run into `dir` and returns the paths.
pub fn write_runs<'a>(
    runs: impl IntoIterator<Item = (String, &'a Trajectory)>,
    dir: &Path,
) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for (name, trajectory) in runs {
        let path = dir.join(name);
        trajectory.write_csv(BufWriter::new(File::create(&path)?), false)?;
        paths.push(path);
    }
    Ok(paths)
}
