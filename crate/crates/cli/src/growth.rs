//! Classification of long-run error growth from sampled error series.

use std::f64::consts::TAU;

/// Log-slope per period above which growth counts as exponential.
pub const EXPONENTIAL_SLOPE_PER_PERIOD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthKind {
    Linear,
    Exponential,
}

impl std::fmt::Display for GrowthKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GrowthKind::Linear => "linear",
            GrowthKind::Exponential => "exponential",
        })
    }
}

/// Least-squares line `y = intercept + slope x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub intercept: f64,
    pub slope: f64,
    /// Residual sum of squares.
    pub rss: f64,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    Some(LineFit {
        intercept,
        slope,
        rss,
    })
}

/// Per-window maxima of a `(t, error)` series. Window `k` covers
/// `(k w, (k + 1) w]`, with `t = 0` in the first; each point is placed at
/// its window's right end.
pub fn envelope(series: &[(f64, f64)], width: f64) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut current: Option<(usize, f64)> = None;
    for &(t, e) in series {
        if !e.is_finite() {
            continue;
        }
        let k = ((t / width).ceil() as usize).saturating_sub(1);
        match current {
            Some((ck, m)) if ck == k => current = Some((k, m.max(e.abs()))),
            Some((ck, m)) => {
                out.push(((ck + 1) as f64 * width, m));
                current = Some((k, e.abs()));
            }
            None => current = Some((k, e.abs())),
        }
    }
    if let Some((k, m)) = current {
        out.push(((k + 1) as f64 * width, m));
    }
    out
}

/// Per-period envelope with the oscillator period `2π`.
pub fn period_envelope(series: &[(f64, f64)]) -> Vec<(f64, f64)> {
    envelope(series, TAU)
}

/// Slope of `ln|error|` against time in periods over the second half of the
/// samples (zero errors skipped).
pub fn log_slope_per_period(series: &[(f64, f64)]) -> Option<f64> {
    let half = &series[series.len() / 2..];
    let (xs, ys): (Vec<f64>, Vec<f64>) = half
        .iter()
        .filter(|(_, e)| *e > 0.0)
        .map(|(t, e)| (t / TAU, e.ln()))
        .unzip();
    fit_line(&xs, &ys).map(|f| f.slope)
}

/// Residuals of a straight-line fit and of an exponential fit (line through
/// `ln|error|`, mapped back) to the same samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitComparison {
    pub linear_rss: f64,
    pub exponential_rss: f64,
}

impl FitComparison {
    pub fn linear_wins(&self) -> bool {
        self.linear_rss < self.exponential_rss
    }
}

pub fn compare_fits(series: &[(f64, f64)]) -> Option<FitComparison> {
    let positive: Vec<(f64, f64)> = series.iter().copied().filter(|(_, e)| *e > 0.0).collect();
    let (ts, es): (Vec<f64>, Vec<f64>) = positive.iter().copied().unzip();
    let linear = fit_line(&ts, &es)?;
    let logs: Vec<f64> = es.iter().map(|e| e.ln()).collect();
    let exp = fit_line(&ts, &logs)?;
    let exponential_rss = ts
        .iter()
        .zip(&es)
        .map(|(t, e)| (e - (exp.intercept + exp.slope * t).exp()).powi(2))
        .sum();
    Some(FitComparison {
        linear_rss: linear.rss,
        exponential_rss,
    })
}

/// `max(second half) / max(first half)` of the error magnitudes.
pub fn half_max_ratio(series: &[(f64, f64)]) -> f64 {
    let max = |xs: &[(f64, f64)]| xs.iter().map(|(_, e)| e.abs()).fold(0.0, f64::max);
    let (first, second) = series.split_at(series.len() / 2);
    max(second) / max(first)
}

/// Growth diagnostics of one error series.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport {
    pub log_slope_per_period: f64,
    pub kind: GrowthKind,
    pub fits: Option<FitComparison>,
    pub half_max_ratio: f64,
}

/// Classifies the per-period envelope of an error series: exponential when
/// the second-half log-slope exceeds [`EXPONENTIAL_SLOPE_PER_PERIOD`],
/// linear otherwise.
pub fn classify(series: &[(f64, f64)]) -> GrowthReport {
    let env = period_envelope(series);
    let slope = log_slope_per_period(&env).unwrap_or(0.0);
    GrowthReport {
        log_slope_per_period: slope,
        kind: if slope > EXPONENTIAL_SLOPE_PER_PERIOD {
            GrowthKind::Exponential
        } else {
            GrowthKind::Linear
        },
        fits: compare_fits(&env),
        half_max_ratio: half_max_ratio(series),
    }
}
