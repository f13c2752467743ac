//! Step-halving convergence studies.

use complex_splitting::coeffs;
use complex_splitting::engine::{integrate, RunConfig};
use complex_splitting::models::{self, harmonic_reference};
use complex_splitting::{CompositionScheme, Integrator};

use crate::growth::fit_line;
use crate::CliError;

/// Errors below this are treated as roundoff.
pub const ROUNDOFF_FLOOR: f64 = 1e-13;

/// Reference runs for systems without a closed-form solution use the
/// sixth-order conjugate-symmetric method at this fraction of the finest step.
pub const REFERENCE_REFINEMENT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceConfig {
    /// Coarsest step; rounded so that it divides the horizon.
    pub h0: f64,
    pub levels: usize,
    pub horizon: f64,
}

impl ConvergenceConfig {
    /// Per-method defaults keeping every level between the asymptotic
    /// regime and the roundoff floor. Horizons avoid whole oscillator
    /// periods, over which the leading error term of S23 averages out.
    pub fn for_method(method: &str, system: &str) -> Result<Self, CliError> {
        let order = coeffs::by_name::<f64>(method)?.declared_order();
        let system = models::system_by_name::<f64>(system)?;
        let (h0, horizon) = match (system.name(), order) {
            ("harmonic", 0..=5) => (0.2, 1.0),
            ("harmonic", _) => (0.5, 5.0),
            (_, _) => (0.2, 1.0),
        };
        Ok(ConvergenceConfig {
            h0,
            levels: 4,
            horizon,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderEstimate {
    pub method: String,
    pub system: String,
    pub steps: Vec<f64>,
    pub errors: Vec<f64>,
    /// Number of leading levels kept for the fit.
    pub used_levels: usize,
    /// Least-squares slope of `log2(error)` against level.
    pub slope: f64,
    pub floor_detected: bool,
}

impl OrderEstimate {
    /// Observed order, `−slope`.
    pub fn order(&self) -> f64 {
        -self.slope
    }
}

fn endpoint_error(computed: &[complex_splitting::Complex64], reference: &[f64]) -> f64 {
    computed
        .iter()
        .zip(reference)
        .map(|(z, r)| (z - r).norm())
        .fold(0.0, f64::max)
}

fn final_state(
    integrator: &dyn Integrator<f64>,
    system: &str,
    state0: &[f64],
    h: f64,
    steps: usize,
) -> Result<Vec<complex_splitting::Complex64>, CliError> {
    let sys = models::system_by_name::<f64>(system)?;
    let cfg = RunConfig::new(h, steps).observe_every(steps);
    let t = integrate(integrator, sys.as_ref(), state0, cfg, &[])?;
    if let Some(reason) = &t.divergence {
        return Err(CliError::Diverged(reason.clone()));
    }
    Ok(t.last_state().expect("trajectory has rows").to_vec())
}

/// Integrates to a fixed horizon with steps `h0 / 2^k`, `k < levels`, and
/// fits `log2(error)` against `k`. Trailing levels whose error stops
/// decreasing or drops below [`ROUNDOFF_FLOOR`] are excluded.
pub fn empirical_order(
    scheme: &CompositionScheme,
    system: &str,
    config: ConvergenceConfig,
) -> Result<OrderEstimate, CliError> {
    if config.levels < 3 {
        return Err(CliError::Usage(format!(
            "need at least 3 levels, got {}",
            config.levels
        )));
    }
    if !(config.h0 > 0.0 && config.horizon > 0.0) {
        return Err(CliError::Usage("h0 and horizon must be positive".into()));
    }
    let sys = models::system_by_name::<f64>(system)?;
    let name = sys.name().to_string();
    let state0 = models::default_initial_state::<f64>(&name)?;
    let n0 = (config.horizon / config.h0).round().max(1.0) as usize;
    let counts: Vec<usize> = (0..config.levels).map(|k| n0 << k).collect();
    let steps: Vec<f64> = counts.iter().map(|n| config.horizon / *n as f64).collect();

    let reference: Vec<f64> = if name == "harmonic" {
        let (q, p) = harmonic_reference(config.horizon, (state0[0], state0[1]));
        vec![q, p]
    } else {
        let fine = coeffs::s7c6::<f64>();
        let n = counts[config.levels - 1] * REFERENCE_REFINEMENT;
        final_state(&fine, &name, &state0, config.horizon / n as f64, n)?
            .iter()
            .map(|z| z.re)
            .collect()
    };

    let mut errors = Vec::with_capacity(config.levels);
    for (h, n) in steps.iter().zip(&counts) {
        let x = final_state(scheme, &name, &state0, *h, *n)?;
        errors.push(endpoint_error(&x, &reference));
    }

    let mut used = 1;
    while used < errors.len() && errors[used] < errors[used - 1] && errors[used] >= ROUNDOFF_FLOOR {
        used += 1;
    }
    let floor_detected = used < errors.len();
    if used < 2 {
        return Err(CliError::Verification(format!(
            "errors {errors:?} do not decrease; no convergence to fit"
        )));
    }
    let levels: Vec<f64> = (0..used).map(|k| k as f64).collect();
    let logs: Vec<f64> = errors[..used].iter().map(|e| e.log2()).collect();
    let slope = fit_line(&levels, &logs)
        .expect("at least two distinct levels")
        .slope;
    Ok(OrderEstimate {
        method: scheme.label().to_string(),
        system: name,
        steps,
        errors,
        used_levels: used,
        slope,
        floor_detected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strang_is_second_order() {
        let lf = CompositionScheme::leapfrog();
        let cfg = ConvergenceConfig {
            h0: 0.1,
            levels: 4,
            horizon: 1.0,
        };
        let est = empirical_order(&lf, "harmonic", cfg).unwrap();
        assert!((est.order() - 2.0).abs() < 0.1, "{est:?}");
        assert_eq!(est.used_levels, 4);
        assert!(!est.floor_detected);
    }

    #[test]
    fn floor_levels_are_dropped() {
        let s = coeffs::s7c6::<f64>();
        let cfg = ConvergenceConfig {
            h0: 0.2,
            levels: 4,
            horizon: 1.0,
        };
        let est = empirical_order(&s, "harmonic", cfg).unwrap();
        assert!(est.floor_detected, "{est:?}");
        assert!(est.used_levels < 4);
        assert!((est.order() - 6.0).abs() < 0.3);
        let cfg = ConvergenceConfig { h0: 0.01, ..cfg };
        assert!(matches!(
            empirical_order(&s, "harmonic", cfg),
            Err(CliError::Verification(_))
        ));
    }

    #[test]
    fn whole_periods_hide_the_leading_s23_term() {
        let s = coeffs::by_name::<f64>("s23").unwrap();
        let at = |horizon| {
            let cfg = ConvergenceConfig {
                h0: 0.2,
                levels: 4,
                horizon,
            };
            empirical_order(&s, "harmonic", cfg).unwrap().order()
        };
        assert!((at(std::f64::consts::TAU) - 4.0).abs() < 0.1);
        assert!((at(1.0) - 3.0).abs() < 0.1);
    }

    #[test]
    fn defaults_recover_declared_orders() {
        for m in ["s23", "s34", "s44", "s76", "s7c6"] {
            let s = coeffs::by_name::<f64>(m).unwrap();
            for system in ["harmonic", "vl"] {
                let est = empirical_order(
                    &s,
                    system,
                    ConvergenceConfig::for_method(m, system).unwrap(),
                )
                .unwrap();
                let want = f64::from(s.declared_order());
                assert!(
                    (est.order() - want).abs() <= 0.3,
                    "{m} on {system}: {est:?}"
                );
            }
        }
    }

    #[test]
    fn rejects_bad_configs() {
        let s = coeffs::s7c6::<f64>();
        let cfg = ConvergenceConfig {
            h0: 0.1,
            levels: 2,
            horizon: 1.0,
        };
        assert!(matches!(
            empirical_order(&s, "harmonic", cfg),
            Err(CliError::Usage(_))
        ));
        let cfg = ConvergenceConfig { levels: 3, ..cfg };
        assert!(empirical_order(&s, "pendulum", cfg).is_err());
    }
}
