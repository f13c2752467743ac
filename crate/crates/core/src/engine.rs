//! Stepping machinery for split systems: the symmetric second-order basic
//! step, composition and a/b stepping, projection policies and trajectory
//! recording.

use std::fmt;
use std::io::{self, Write};
use std::sync::Arc;

use num_complex::Complex;
use serde::Serialize;

use crate::coeffs::{CompositionScheme, TwoTermSplitScheme};
use crate::error::{Error, Result};
use crate::scalar::{re, Real};

/// Component magnitude beyond which a run is declared divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 1e12;

/// Why a single flow evaluation could not be carried out.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowFailure(pub String);

impl fmt::Display for FlowFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A vector field split into parts whose flows are known exactly, extended
/// to complex time.
///
/// Part indices are 0-based: part 0 is the one advanced by a full step in
/// the basic symmetric step (and by the `a` coefficients of a two-flow
/// scheme), part 1 takes the `b` coefficients.
pub trait SplitSystem<T: Real>: Send + Sync {
    fn name(&self) -> &str;

    fn dimension(&self) -> usize;

    fn parts(&self) -> usize;

    /// Advances `state` in place along the exact flow of `part` for the
    /// complex time `z`.
    fn flow(&self, part: usize, z: Complex<T>, state: &mut [Complex<T>])
        -> Result<(), FlowFailure>;

    /// Observables recorded by default.
    fn observables(&self) -> Vec<Observable<T>>;
}

type ObservableFn<T> = dyn Fn(T, &[Complex<T>]) -> Option<T> + Send + Sync;

/// A named real-valued measurement of `(t, state)`. `None` marks a value
/// that is undefined for that state (e.g. outside a logarithm's domain).
#[derive(Clone)]
pub struct Observable<T: Real> {
    name: String,
    eval: Arc<ObservableFn<T>>,
}

impl<T: Real> Observable<T> {
    pub fn new(
        name: impl Into<String>,
        eval: impl Fn(T, &[Complex<T>]) -> Option<T> + Send + Sync + 'static,
    ) -> Self {
        Observable {
            name: name.into(),
            eval: Arc::new(eval),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, t: T, state: &[Complex<T>]) -> Option<T> {
        (self.eval)(t, state)
    }
}

impl<T: Real> fmt::Debug for Observable<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Observable")
            .field("name", &self.name)
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProjectionPolicy {
    /// Carry the complex state untouched.
    Never,
    /// Drop imaginary parts after every step.
    EachStep,
    /// Carry the complex state, record only its real part.
    OutputOnly,
}

impl fmt::Display for ProjectionPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProjectionPolicy::Never => "never",
            ProjectionPolicy::EachStep => "step",
            ProjectionPolicy::OutputOnly => "output",
        })
    }
}

impl std::str::FromStr for ProjectionPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "never" => Ok(ProjectionPolicy::Never),
            "step" | "each-step" => Ok(ProjectionPolicy::EachStep),
            "output" | "output-only" => Ok(ProjectionPolicy::OutputOnly),
            _ => Err(Error::UnknownName {
                kind: "projection policy",
                name: s.to_string(),
                available: "never, step, output".into(),
            }),
        }
    }
}

fn apply_flow<T: Real>(
    system: &dyn SplitSystem<T>,
    part: usize,
    z: Complex<T>,
    state: &mut [Complex<T>],
) -> Result<()> {
    system.flow(part, z, state).map_err(|e| Error::Flow {
        part,
        step: 0,
        reason: e.0,
    })
}

/// Symmetric second-order step over all parts: half steps of parts
/// `m-1, …, 1`, a full step of part 0, then half steps of parts `1, …, m-1`.
pub fn strang_step<T: Real>(
    system: &dyn SplitSystem<T>,
    z: Complex<T>,
    state: &mut [Complex<T>],
) -> Result<()> {
    let m = system.parts();
    if m < 2 {
        return Err(Error::PartCount {
            expected: ">= 2".into(),
            actual: m,
        });
    }
    let half = z * T::lit(0.5);
    for part in (1..m).rev() {
        apply_flow(system, part, half, state)?;
    }
    apply_flow(system, 0, z, state)?;
    for part in 1..m {
        apply_flow(system, part, half, state)?;
    }
    Ok(())
}

/// One step of size `h` of a composition scheme: basic steps with fractions
/// `α_j h` in execution order.
pub fn composition_step<T: Real>(
    scheme: &CompositionScheme<T>,
    system: &dyn SplitSystem<T>,
    state: &mut [Complex<T>],
    h: T,
) -> Result<()> {
    for alpha in scheme.alphas() {
        strang_step(system, *alpha * h, state)?;
    }
    Ok(())
}

/// One step of size `h` of an a/b scheme on a two-part system:
/// `b_1` (part 1), `a_1` (part 0), `b_2`, …, `a_s`, `b_{s+1}`.
pub fn ab_step<T: Real>(
    scheme: &TwoTermSplitScheme<T>,
    system: &dyn SplitSystem<T>,
    state: &mut [Complex<T>],
    h: T,
) -> Result<()> {
    if system.parts() != 2 {
        return Err(Error::PartCount {
            expected: "2".into(),
            actual: system.parts(),
        });
    }
    let (a, b) = (scheme.a(), scheme.b());
    apply_flow(system, 1, b[0] * h, state)?;
    for (ai, bi) in a.iter().zip(&b[1..]) {
        apply_flow(system, 0, *ai * h, state)?;
        apply_flow(system, 1, *bi * h, state)?;
    }
    Ok(())
}

/// Anything that advances a split system by one step of size `h`.
pub trait Integrator<T: Real>: Send + Sync {
    fn label(&self) -> &str;

    fn step(&self, system: &dyn SplitSystem<T>, state: &mut [Complex<T>], h: T) -> Result<()>;
}

impl<T: Real> Integrator<T> for CompositionScheme<T> {
    fn label(&self) -> &str {
        CompositionScheme::label(self)
    }

    fn step(&self, system: &dyn SplitSystem<T>, state: &mut [Complex<T>], h: T) -> Result<()> {
        composition_step(self, system, state, h)
    }
}

impl<T: Real> Integrator<T> for TwoTermSplitScheme<T> {
    fn label(&self) -> &str {
        TwoTermSplitScheme::label(self)
    }

    fn step(&self, system: &dyn SplitSystem<T>, state: &mut [Complex<T>], h: T) -> Result<()> {
        ab_step(self, system, state, h)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRow<T: Real> {
    pub t: T,
    pub state: Vec<Complex<T>>,
    pub values: Vec<Option<T>>,
    pub diverged: bool,
}

/// Recorded output of [`integrate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T: Real> {
    pub label: String,
    pub h: T,
    pub policy: ProjectionPolicy,
    pub observable_names: Vec<String>,
    pub rows: Vec<TrajectoryRow<T>>,
    /// Set when the run stopped early; the last row is then the flagged one.
    pub divergence: Option<String>,
    pub steps_taken: usize,
}

impl<T: Real> Trajectory<T> {
    pub fn diverged(&self) -> bool {
        self.divergence.is_some()
    }

    /// Index of an observable column.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.observable_names.iter().position(|n| n == name)
    }

    /// `(t, value)` pairs of one observable, skipping undefined entries.
    pub fn series(&self, name: &str) -> Option<Vec<(T, T)>> {
        let col = self.column(name)?;
        Some(
            self.rows
                .iter()
                .filter_map(|r| r.values[col].map(|v| (r.t, v)))
                .collect(),
        )
    }

    pub fn last_state(&self) -> Option<&[Complex<T>]> {
        self.rows.last().map(|r| r.state.as_slice())
    }

    /// Writes `t,<observables>[,re_i,im_i…],diverged` with 17 significant
    /// digits.
    pub fn write_csv<W: Write>(&self, mut out: W, include_state: bool) -> io::Result<()> {
        let mut header = vec!["t".to_string()];
        header.extend(self.observable_names.iter().cloned());
        if include_state {
            let dim = self.rows.first().map_or(0, |r| r.state.len());
            for i in 0..dim {
                header.push(format!("re_{i}"));
                header.push(format!("im_{i}"));
            }
        }
        header.push("diverged".into());
        writeln!(out, "{}", header.join(","))?;
        for row in &self.rows {
            let mut fields = vec![fmt17(row.t)];
            fields.extend(
                row.values
                    .iter()
                    .map(|v| v.map_or_else(|| "NaN".into(), fmt17)),
            );
            if include_state {
                for z in &row.state {
                    fields.push(fmt17(z.re));
                    fields.push(fmt17(z.im));
                }
            }
            fields.push(u8::from(row.diverged).to_string());
            writeln!(out, "{}", fields.join(","))?;
        }
        Ok(())
    }
}

/// Scientific notation with 17 significant digits.
pub fn fmt17<T: Real>(x: T) -> String {
    format!("{:.16e}", x.as_f64())
}

/// Run parameters for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig<T: Real> {
    pub h: T,
    pub n_steps: usize,
    pub policy: ProjectionPolicy,
    pub observe_every: usize,
}

impl<T: Real> RunConfig<T> {
    pub fn new(h: T, n_steps: usize) -> Self {
        RunConfig {
            h,
            n_steps,
            policy: ProjectionPolicy::Never,
            observe_every: 1,
        }
    }

    pub fn policy(mut self, policy: ProjectionPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn observe_every(mut self, every: usize) -> Self {
        self.observe_every = every;
        self
    }
}

/// Integrates from a real initial state with a fixed step and records the
/// observables every `observe_every` steps (and at t = 0).
///
/// A component exceeding [`DIVERGENCE_THRESHOLD`] in magnitude, a non-finite
/// component or a failed flow evaluation stops the run; the partial
/// trajectory is returned with a final row flagged `diverged`.
pub fn integrate<T: Real>(
    integrator: &dyn Integrator<T>,
    system: &dyn SplitSystem<T>,
    state0: &[T],
    config: RunConfig<T>,
    observables: &[Observable<T>],
) -> Result<Trajectory<T>> {
    let RunConfig {
        h,
        n_steps,
        policy,
        observe_every,
    } = config;
    if !(h > T::zero()) || !h.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "step size must be positive, got {h}"
        )));
    }
    if n_steps == 0 {
        return Err(Error::InvalidArgument("n_steps must be >= 1".into()));
    }
    if observe_every == 0 {
        return Err(Error::InvalidArgument("observe_every must be >= 1".into()));
    }
    if state0.len() != system.dimension() {
        return Err(Error::Dimension {
            expected: system.dimension(),
            actual: state0.len(),
        });
    }

    let threshold = T::lit(DIVERGENCE_THRESHOLD);
    let mut state: Vec<Complex<T>> = state0.iter().map(|x| re(*x)).collect();
    let record = |t: T, state: &[Complex<T>], diverged: bool| {
        let recorded: Vec<Complex<T>> = match policy {
            ProjectionPolicy::OutputOnly => state.iter().map(|z| re(z.re)).collect(),
            _ => state.to_vec(),
        };
        TrajectoryRow {
            t,
            values: observables.iter().map(|o| o.eval(t, state)).collect(),
            state: recorded,
            diverged,
        }
    };

    let mut rows = Vec::with_capacity(n_steps / observe_every + 2);
    rows.push(record(T::zero(), &state, false));
    let mut divergence = None;
    let mut steps_taken = 0;
    for k in 1..=n_steps {
        let t = h * T::count(k);
        if let Err(e) = integrator.step(system, &mut state, h) {
            let e = match e {
                Error::Flow { part, reason, .. } => Error::Flow {
                    part,
                    step: k,
                    reason,
                },
                other => other,
            };
            divergence = Some(e.to_string());
            rows.push(record(t, &state, true));
            break;
        }
        steps_taken = k;
        if policy == ProjectionPolicy::EachStep {
            state.iter_mut().for_each(|z| z.im = T::zero());
        }
        if let Some(i) = state.iter().position(|z| !(z.norm() <= threshold)) {
            divergence = Some(format!(
                "component {i} reached |{}| at step {k} (t = {t})",
                state[i]
            ));
            rows.push(record(t, &state, true));
            break;
        }
        if k % observe_every == 0 {
            rows.push(record(t, &state, false));
        }
    }

    Ok(Trajectory {
        label: integrator.label().to_string(),
        h,
        policy,
        observable_names: observables.iter().map(|o| o.name().to_string()).collect(),
        rows,
        divergence,
        steps_taken,
    })
}

/// Largest deviation from the identity of each part's flow at `z = 0` over
/// the probe states.
pub fn flow_identity_defect<T: Real>(
    system: &dyn SplitSystem<T>,
    probes: &[Vec<Complex<T>>],
) -> Result<T> {
    let mut worst = T::zero();
    for part in 0..system.parts() {
        for probe in probes {
            let mut x = probe.clone();
            apply_flow(system, part, re(T::zero()), &mut x)?;
            worst = worst.max(max_diff(&x, probe));
        }
    }
    Ok(worst)
}

/// Largest deviation of `flow(z1, flow(z2, x))` from `flow(z1 + z2, x)` over
/// the parts and probe states.
pub fn flow_semigroup_defect<T: Real>(
    system: &dyn SplitSystem<T>,
    z1: Complex<T>,
    z2: Complex<T>,
    probes: &[Vec<Complex<T>>],
) -> Result<T> {
    let mut worst = T::zero();
    for part in 0..system.parts() {
        for probe in probes {
            let mut split = probe.clone();
            apply_flow(system, part, z2, &mut split)?;
            apply_flow(system, part, z1, &mut split)?;
            let mut joint = probe.clone();
            apply_flow(system, part, z1 + z2, &mut joint)?;
            worst = worst.max(max_diff(&split, &joint));
        }
    }
    Ok(worst)
}

/// Max-norm of the difference of two complex vectors.
pub fn max_diff<T: Real>(x: &[Complex<T>], y: &[Complex<T>]) -> T {
    x.iter()
        .zip(y)
        .fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{self, ab_from_alpha, Branch};
    use crate::models::{harmonic_reference, HarmonicSystem, VolterraLotkaSystem};

    type C = Complex<f64>;

    fn cv(xs: &[f64]) -> Vec<C> {
        xs.iter().map(|x| C::new(*x, 0.0)).collect()
    }

    #[test]
    fn strang_zero_step_is_identity() {
        let sys = HarmonicSystem;
        let mut x = vec![C::new(0.3, -0.2), C::new(1.1, 0.4)];
        let x0 = x.clone();
        strang_step(&sys, C::new(0.0, 0.0), &mut x).unwrap();
        assert_eq!(x, x0);
    }

    #[test]
    fn strang_matches_leapfrog_matrix() {
        // K = [[1 - h²/2, h], [-h + h³/4, 1 - h²/2]]
        let h = 0.3;
        let (q0, p0) = (0.7, -0.4);
        let mut x = cv(&[q0, p0]);
        strang_step(&HarmonicSystem, C::new(h, 0.0), &mut x).unwrap();
        let q = (1.0 - h * h / 2.0) * q0 + h * p0;
        let p = (-h + h * h * h / 4.0) * q0 + (1.0 - h * h / 2.0) * p0;
        assert!((x[0].re - q).abs() < 1e-15 && (x[1].re - p).abs() < 1e-15);
    }

    #[test]
    fn strang_step_is_time_symmetric() {
        let z = C::new(0.37, 0.11);
        for sys in [
            &HarmonicSystem as &dyn SplitSystem<f64>,
            &VolterraLotkaSystem,
        ] {
            let mut x = vec![C::new(1.3, 0.05), C::new(2.2, -0.1)];
            let x0 = x.clone();
            strang_step(sys, z, &mut x).unwrap();
            strang_step(sys, -z, &mut x).unwrap();
            assert!(max_diff(&x, &x0) < 1e-12, "{}", sys.name());
        }
    }

    #[test]
    fn strang_needs_two_parts() {
        struct OnePart;
        impl SplitSystem<f64> for OnePart {
            fn name(&self) -> &str {
                "one"
            }
            fn dimension(&self) -> usize {
                1
            }
            fn parts(&self) -> usize {
                1
            }
            fn flow(&self, _: usize, _: C, _: &mut [C]) -> Result<(), FlowFailure> {
                Ok(())
            }
            fn observables(&self) -> Vec<Observable<f64>> {
                vec![]
            }
        }
        let mut x = cv(&[1.0]);
        assert!(matches!(
            strang_step(&OnePart, C::new(0.1, 0.0), &mut x),
            Err(Error::PartCount { .. })
        ));
        let strang = coeffs::TwoTermSplitScheme::<f64>::strang();
        assert!(ab_step(&strang, &OnePart, &mut x, 0.1).is_err());
    }

    #[test]
    fn single_stage_composition_is_one_strang_step() {
        let lf = coeffs::CompositionScheme::<f64>::leapfrog();
        let mut x = cv(&[2.0, 4.0]);
        let mut y = x.clone();
        composition_step(&lf, &VolterraLotkaSystem, &mut x, 0.1).unwrap();
        strang_step(&VolterraLotkaSystem, C::new(0.1, 0.0), &mut y).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn strang_ab_equals_strang_step() {
        let strang = coeffs::TwoTermSplitScheme::<f64>::strang();
        let mut x = cv(&[2.0, 4.0]);
        let mut y = x.clone();
        ab_step(&strang, &VolterraLotkaSystem, &mut x, 0.05).unwrap();
        strang_step(&VolterraLotkaSystem, C::new(0.05, 0.0), &mut y).unwrap();
        assert!(max_diff(&x, &y) < 1e-15);
    }

    #[test]
    fn ab_form_equals_composition_form() {
        for scheme in coeffs::catalog::<f64>() {
            let ab = ab_from_alpha(&scheme);
            for sys in [
                &HarmonicSystem as &dyn SplitSystem<f64>,
                &VolterraLotkaSystem,
            ] {
                let mut x = cv(&[1.5, 2.5]);
                let mut y = x.clone();
                composition_step(&scheme, sys, &mut x, 0.2).unwrap();
                ab_step(&ab, sys, &mut y, 0.2).unwrap();
                assert!(
                    max_diff(&x, &y) < 1e-13,
                    "{} on {}",
                    scheme.label(),
                    sys.name()
                );
            }
        }
    }

    #[test]
    fn s23_one_period_energy() {
        let s23 = coeffs::third_order_two_term::<f64>(Branch::Plus);
        let h = std::f64::consts::PI / 7.0;
        let mut x = cv(&[1.0, 1.0]);
        for _ in 0..14 {
            composition_step(&s23, &HarmonicSystem, &mut x, h).unwrap();
        }
        let energy = 0.5 * (x[0].re * x[0].re + x[1].re * x[1].re);
        assert!((energy - 1.0).abs() < 1e-2);
    }

    #[test]
    fn integrate_rejects_bad_requests() {
        let s = coeffs::catalog::<f64>().remove(0);
        let sys = HarmonicSystem;
        assert!(integrate(&s, &sys, &[1.0, 1.0], RunConfig::new(0.1, 0), &[]).is_err());
        assert!(integrate(&s, &sys, &[1.0, 1.0], RunConfig::new(-0.1, 5), &[]).is_err());
        assert!(integrate(&s, &sys, &[1.0], RunConfig::new(0.1, 5), &[]).is_err());
        assert!(integrate(
            &s,
            &sys,
            &[1.0, 1.0],
            RunConfig::new(0.1, 5).observe_every(0),
            &[]
        )
        .is_err());
    }

    #[test]
    fn integrate_records_on_schedule() {
        let s = coeffs::catalog::<f64>().remove(0);
        let sys = HarmonicSystem;
        let traj = integrate(
            &s,
            &sys,
            &[1.0, 1.0],
            RunConfig::new(0.1, 10).observe_every(3),
            &sys.observables(),
        )
        .unwrap();
        let ts: Vec<f64> = traj.rows.iter().map(|r| r.t).collect();
        assert_eq!(ts.len(), 4);
        for (i, t) in ts.iter().enumerate() {
            assert!((t - 0.3 * i as f64).abs() < 1e-15);
        }
        assert!(!traj.diverged());
        assert_eq!(traj.steps_taken, 10);
    }

    #[test]
    fn projection_policies() {
        let s = coeffs::s76::<f64>();
        let sys = VolterraLotkaSystem;
        let run = |policy| {
            integrate(
                &s,
                &sys,
                &[2.0, 4.0],
                RunConfig::new(0.2, 20).policy(policy),
                &[],
            )
            .unwrap()
        };
        let never = run(ProjectionPolicy::Never);
        let each = run(ProjectionPolicy::EachStep);
        let output = run(ProjectionPolicy::OutputOnly);
        assert!(never.last_state().unwrap().iter().any(|z| z.im != 0.0));
        assert!(each
            .rows
            .iter()
            .all(|r| r.state.iter().all(|z| z.im == 0.0)));
        assert!(output
            .rows
            .iter()
            .all(|r| r.state.iter().all(|z| z.im == 0.0)));
        // output-only keeps the complex dynamics
        for (a, b) in never.rows.iter().zip(&output.rows) {
            for (x, y) in a.state.iter().zip(&b.state) {
                assert_eq!(x.re, y.re);
            }
        }
        assert_ne!(never.last_state(), each.last_state());
    }

    #[test]
    fn real_scheme_never_leaves_the_real_axis() {
        let tj = coeffs::fourth_order_three_term::<f64>(0).unwrap();
        let sys = VolterraLotkaSystem;
        let traj = integrate(&tj, &sys, &[2.0, 4.0], RunConfig::new(0.05, 200), &[]).unwrap();
        assert!(traj
            .rows
            .iter()
            .all(|r| r.state.iter().all(|z| z.im == 0.0)));
    }

    #[test]
    fn divergence_guard_trips_on_unstable_runs() {
        let s34 = coeffs::by_name::<f64>("s34").unwrap();
        let sys = HarmonicSystem;
        let traj = integrate(
            &s34,
            &sys,
            &[1.0, 1.0],
            RunConfig::new(2.0, 5000),
            &sys.observables(),
        )
        .unwrap();
        assert!(traj.diverged());
        let last = traj.rows.last().unwrap();
        assert!(last.diverged);
        assert!(traj.rows[..traj.rows.len() - 1].iter().all(|r| !r.diverged));
    }

    #[test]
    fn flow_failure_is_flagged_with_step() {
        let s = coeffs::CompositionScheme::<f64>::leapfrog();
        let sys = VolterraLotkaSystem;
        // u(v - 2) with v = 1000 blows the exponent past the guard
        let traj = integrate(&s, &sys, &[1.0, 1000.0], RunConfig::new(1.0, 3), &[]).unwrap();
        let msg = traj.divergence.unwrap();
        assert!(msg.contains("step 1"), "{msg}");
    }

    #[test]
    fn csv_layout() {
        let s = coeffs::catalog::<f64>().remove(0);
        let sys = HarmonicSystem;
        let traj = integrate(
            &s,
            &sys,
            &[1.0, 1.0],
            RunConfig::new(0.5, 2),
            &sys.observables(),
        )
        .unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf, true).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "t,q,p,energy,re_0,im_0,re_1,im_1,diverged"
        );
        let first: Vec<_> = lines.next().unwrap().split(',').collect();
        assert_eq!(first[0], "0.0000000000000000e0");
        assert_eq!(first[1], "1.0000000000000000e0");
        assert_eq!(*first.last().unwrap(), "0");
        assert_eq!(text.lines().count(), 4);
    }

    #[test]
    fn reference_agrees_with_tiny_steps() {
        let s = coeffs::s7c6::<f64>();
        let sys = HarmonicSystem;
        let traj = integrate(&s, &sys, &[1.0, 1.0], RunConfig::new(0.01, 100), &[]).unwrap();
        let (q, p) = harmonic_reference(1.0, (1.0, 1.0));
        let x = traj.last_state().unwrap();
        assert!((x[0] - q).norm() < 1e-12 && (x[1] - p).norm() < 1e-12);
    }
}
