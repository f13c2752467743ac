use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process;

use clap::{Args, Parser, Subcommand, ValueEnum};
use complex_splitting::engine::{integrate, RunConfig};
use complex_splitting::{coeffs, export, linstab, models, order, ProjectionPolicy, Stability};

use complex_splitting_cli::convergence::{empirical_order, ConvergenceConfig, OrderEstimate};
use complex_splitting_cli::experiments::{self, InvariantConfig, OscillatorConfig};
use complex_splitting_cli::{CliError, ExitCode};

#[derive(Parser)]
#[command(
    name = "csplit",
    version,
    about = "Splitting methods with complex coefficients"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print coefficients as JSON.
    Coeffs {
        /// Catalog method; all methods when omitted.
        #[arg(long)]
        method: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the order-condition residuals of a method.
    Verify {
        #[arg(long)]
        method: String,
        #[arg(long, default_value_t = order::ORDER6_TOL)]
        tol: f64,
    },
    /// Classify linear stability on the harmonic oscillator over a step grid.
    Stability {
        #[arg(long)]
        method: String,
        #[arg(long, default_value_t = 0.05)]
        hmin: f64,
        #[arg(long, default_value_t = 3.0)]
        hmax: f64,
        #[arg(long, default_value_t = 60)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate a system and write the trajectory as CSV.
    Run(RunArgs),
    /// Long-run benchmark experiments.
    Experiment(ExperimentArgs),
    /// Estimate the convergence order by step halving.
    Order {
        #[arg(long)]
        method: String,
        #[arg(long, default_value = "harmonic")]
        system: String,
        #[command(flatten)]
        study: StudyArgs,
        /// CSV of step sizes and errors.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    method: String,
    #[arg(long, default_value = "harmonic")]
    system: String,
    #[arg(long)]
    h: f64,
    #[arg(long)]
    steps: usize,
    #[arg(long, value_enum, default_value_t = Project::Never)]
    project: Project,
    #[arg(long, default_value_t = 1)]
    observe_every: usize,
    /// Include the complex state columns.
    #[arg(long)]
    state: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(value_enum)]
    which: Experiment,
    /// Methods to include; the four benchmark methods when omitted.
    #[arg(long = "method")]
    methods: Vec<String>,
    #[arg(long)]
    horizon_periods: Option<usize>,
    /// Oscillator step overriding the per-method default (fig1).
    #[arg(long)]
    h: Option<f64>,
    #[arg(long, default_value_t = 1)]
    observe_every: usize,
    #[command(flatten)]
    study: StudyArgs,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct StudyArgs {
    /// Coarsest step; per-method default when omitted.
    #[arg(long)]
    h0: Option<f64>,
    #[arg(long)]
    levels: Option<usize>,
    /// Integration time of the study.
    #[arg(long)]
    horizon: Option<f64>,
}

impl StudyArgs {
    fn config(&self, method: &str, system: &str) -> Result<ConvergenceConfig, CliError> {
        let d = ConvergenceConfig::for_method(method, system)?;
        Ok(ConvergenceConfig {
            h0: self.h0.unwrap_or(d.h0),
            levels: self.levels.unwrap_or(d.levels),
            horizon: self.horizon.unwrap_or(d.horizon),
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Project {
    Never,
    Step,
    Output,
}

impl From<Project> for ProjectionPolicy {
    fn from(p: Project) -> Self {
        match p {
            Project::Never => ProjectionPolicy::Never,
            Project::Step => ProjectionPolicy::EachStep,
            Project::Output => ProjectionPolicy::OutputOnly,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Experiment {
    Fig1,
    Fig3,
    Converge,
}

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Highest checkable order not above the declared one.
fn required_level(declared: u32) -> u32 {
    [6, 3, 1].into_iter().find(|l| *l <= declared).unwrap_or(0)
}

fn verify(method: &str, tol: f64) -> Result<(), CliError> {
    let scheme = coeffs::by_name::<f64>(method)?;
    let report = order::order6_report(scheme.label(), scheme.alphas(), tol);
    println!("{}", export::report_to_json(&report));
    let need = required_level(scheme.declared_order());
    if report.passes_at < need {
        return Err(CliError::Verification(format!(
            "{} passes at order {} but declares order {}",
            scheme.label(),
            report.passes_at,
            scheme.declared_order()
        )));
    }
    Ok(())
}

fn stability(
    method: &str,
    hmin: f64,
    hmax: f64,
    samples: usize,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let scheme = coeffs::ab_from_alpha(&coeffs::by_name::<f64>(method)?);
    let rows = linstab::StabilityAnalysis::new(&scheme)?.sweep(hmin, hmax, samples)?;
    let mut w = sink(out)?;
    linstab::write_sweep_csv(&rows, &mut w)?;
    w.flush()?;
    let count = |s: Stability| rows.iter().filter(|v| v.stability == s).count();
    eprintln!(
        "{}: {} stable, {} weakly unstable, {} unstable of {}",
        scheme.label(),
        count(Stability::Stable),
        count(Stability::WeaklyUnstable),
        count(Stability::Unstable),
        rows.len()
    );
    Ok(())
}

fn run(args: &RunArgs) -> Result<(), CliError> {
    let scheme = coeffs::by_name::<f64>(&args.method)?;
    let sys = models::system_by_name::<f64>(&args.system)?;
    let state0 = models::default_initial_state::<f64>(sys.name())?;
    let obs = sys.observables();
    let cfg = RunConfig::new(args.h, args.steps)
        .policy(args.project.into())
        .observe_every(args.observe_every);
    let t = integrate(&scheme, sys.as_ref(), &state0, cfg, &obs)?;
    let mut w = sink(args.out.as_deref())?;
    t.write_csv(&mut w, args.state)?;
    w.flush()?;
    match t.divergence {
        Some(reason) => Err(CliError::Diverged(format!(
            "after {} steps: {reason}",
            t.steps_taken
        ))),
        None => Ok(()),
    }
}

fn write_study<W: Write>(est: &OrderEstimate, header: bool, mut w: W) -> io::Result<()> {
    if header {
        writeln!(w, "method,system,level,h,error,used")?;
    }
    for (k, (h, e)) in est.steps.iter().zip(&est.errors).enumerate() {
        writeln!(
            w,
            "{},{},{k},{h:.17e},{e:.17e},{}",
            est.method,
            est.system,
            u8::from(k < est.used_levels)
        )?;
    }
    Ok(())
}

fn report_study(est: &OrderEstimate) {
    eprintln!(
        "{} on {}: order {:.3} from {} of {} levels",
        est.method,
        est.system,
        est.order(),
        est.used_levels,
        est.errors.len()
    );
    if est.floor_detected {
        eprintln!("warning: roundoff floor reached; finer levels excluded from the fit");
    }
}

fn study(method: &str, system: &str, args: &StudyArgs, out: Option<&Path>) -> Result<(), CliError> {
    let scheme = coeffs::by_name::<f64>(method)?;
    let est = empirical_order(&scheme, system, args.config(method, system)?)?;
    println!("{:.6}", est.order());
    report_study(&est);
    if let Some(path) = out {
        write_study(&est, true, BufWriter::new(File::create(path)?))?;
    }
    Ok(())
}

fn experiment(args: &ExperimentArgs) -> Result<(), CliError> {
    let methods = if args.methods.is_empty() {
        experiments::BENCHMARK_METHODS
            .iter()
            .map(|s| s.to_string())
            .collect()
    } else {
        args.methods.clone()
    };
    match args.which {
        Experiment::Fig1 => {
            let mut cfg = OscillatorConfig {
                methods,
                h: args.h,
                observe_every: args.observe_every,
                ..Default::default()
            };
            if let Some(p) = args.horizon_periods {
                cfg.periods = p;
            }
            let runs = experiments::run_fig1(&cfg)?;
            experiments::write_runs(
                runs.iter().map(|r| (r.file_name(), &r.trajectory)),
                &args.out,
            )?;
            for r in &runs {
                println!(
                    "{}: h = {:.6}, {:.1} evaluations/period, energy {:?} (log slope {:.2e}/period, half ratio {:.3}), position {:?} (linear fit better: {}){}",
                    r.method,
                    r.h,
                    r.evaluations_per_period,
                    r.energy.kind,
                    r.energy.log_slope_per_period,
                    r.energy.half_max_ratio,
                    r.position.kind,
                    r.position.fits.is_some_and(|f| f.linear_wins()),
                    if r.trajectory.diverged() { ", diverged" } else { "" }
                );
            }
        }
        Experiment::Fig3 => {
            let mut cfg = InvariantConfig {
                methods,
                observe_every: args.observe_every,
                ..Default::default()
            };
            if let Some(p) = args.horizon_periods {
                cfg.periods = p;
            }
            let runs = experiments::run_fig3(&cfg)?;
            experiments::write_runs(
                runs.iter().map(|r| (r.file_name(), &r.trajectory)),
                &args.out,
            )?;
            for r in &runs {
                println!(
                    "{} {} {}: h = {:.6}, final invariant error {:.3e}",
                    r.method, r.step, r.policy, r.h, r.final_error
                );
            }
        }
        Experiment::Converge => {
            std::fs::create_dir_all(&args.out)?;
            for system in ["harmonic", "vl"] {
                let path = args.out.join(format!("converge_{system}.csv"));
                let mut w = BufWriter::new(File::create(&path)?);
                for (i, m) in methods.iter().enumerate() {
                    let scheme = coeffs::by_name::<f64>(m)?;
                    let est = empirical_order(&scheme, system, args.study.config(m, system)?)?;
                    write_study(&est, i == 0, &mut w)?;
                    println!("{} {}: order {:.3}", est.method, system, est.order());
                    if est.floor_detected {
                        eprintln!(
                            "warning: {} on {system} reached the roundoff floor",
                            est.method
                        );
                    }
                }
                w.flush()?;
            }
        }
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Coeffs { method, out } => {
            let schemes = match method {
                Some(m) => vec![coeffs::by_name::<f64>(&m)?],
                None => coeffs::catalog::<f64>(),
            };
            let mut w = sink(out.as_deref())?;
            writeln!(w, "{}", export::schemes_to_json(&schemes))?;
            w.flush()?;
            Ok(())
        }
        Command::Verify { method, tol } => verify(&method, tol),
        Command::Stability {
            method,
            hmin,
            hmax,
            samples,
            out,
        } => stability(&method, hmin, hmax, samples, out.as_deref()),
        Command::Run(args) => run(&args),
        Command::Experiment(args) => experiment(&args),
        Command::Order {
            method,
            system,
            study: s,
            out,
        } => study(&method, &system, &s, out.as_deref()),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = dispatch(cli) {
        eprintln!("error: {e}");
        process::exit(e.exit_code() as i32);
    }
    process::exit(ExitCode::Success as i32);
}
