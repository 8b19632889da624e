//! Diagnostics over runs: time reversal, invariant drift, oscillation period
//! and observed convergence order.

use crate::error::{Error, Result};

use super::config::{RunConfig, Scheme};
use super::run::{step, Trajectory, REFERENCE_SUBSTEPS};

fn max_distance(a: &[f64; 6], b: &[f64; 6]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Runs `n` steps with `+h`, then `n` with `−h`, and returns the max-norm
/// distance from the initial state.
pub fn reversal_test(config: &RunConfig, n: u64) -> Result<f64> {
    config.validate()?;
    let mut state = config.init;
    for _ in 0..n {
        state = step(config, state, config.h)?;
    }
    for _ in 0..n {
        state = step(config, state, -config.h)?;
    }
    Ok(max_distance(&state, &config.init))
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantDrift {
    pub name: &'static str,
    pub initial: f64,
    pub final_value: f64,
    pub min: f64,
    pub max: f64,
    /// `max |I(t) − I(0)|`
    pub max_abs_deviation: f64,
}

impl InvariantDrift {
    pub fn relative_deviation(&self) -> f64 {
        self.max_abs_deviation / self.initial.abs().max(f64::MIN_POSITIVE)
    }

    fn from_series(name: &'static str, series: &[f64]) -> Option<Self> {
        let (&initial, &final_value) = (series.first()?, series.last()?);
        let (mut min, mut max, mut dev) = (initial, initial, 0.0f64);
        for &v in series {
            min = min.min(v);
            max = max.max(v);
            dev = dev.max((v - initial).abs());
        }
        Some(Self {
            name,
            initial,
            final_value,
            min,
            max,
            max_abs_deviation: dev,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriftReport {
    pub entries: Vec<InvariantDrift>,
}

impl DriftReport {
    pub fn get(&self, name: &str) -> Option<&InvariantDrift> {
        self.entries.iter().find(|e| e.name == name)
    }
}

/// Per-invariant extrema and deviations. Columns left blank by the model
/// are omitted.
pub fn drift_report(traj: &Trajectory) -> Result<DriftReport> {
    if traj.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    let entries = traj.header()[8..]
        .iter()
        .filter_map(|name| {
            let series = traj.column(name)?;
            InvariantDrift::from_series(name, &series)
        })
        .collect();
    Ok(DriftReport { entries })
}

/// Count of sign changes between consecutive increments; a measure of
/// oscillation in a sampled series.
pub fn increment_sign_changes(series: &[f64]) -> usize {
    let signs: Vec<f64> = series
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|d| *d != 0.0)
        .map(f64::signum)
        .collect();
    signs.windows(2).filter(|s| s[0] != s[1]).count()
}

/// Dominant oscillation period from crossings of the series mean.
///
/// Crossing times are linearly interpolated; consecutive crossings are half a
/// period apart, so the estimate is `2·(t_last − t_first)/(count − 1)`.
pub fn estimate_period(series: &[f64], dt: f64) -> Result<f64> {
    if series.is_empty() {
        return Err(Error::TooFewCrossings { found: 0 });
    }
    let mean = series.iter().sum::<f64>() / series.len() as f64;
    let mut crossings = Vec::new();
    for (i, w) in series.windows(2).enumerate() {
        let (a, b) = (w[0] - mean, w[1] - mean);
        if (a < 0.0 && b >= 0.0) || (a >= 0.0 && b < 0.0) {
            let frac = a / (a - b);
            crossings.push((i as f64 + frac) * dt);
        }
    }
    if crossings.len() < 3 {
        return Err(Error::TooFewCrossings {
            found: crossings.len(),
        });
    }
    let span = crossings[crossings.len() - 1] - crossings[0];
    Ok(2.0 * span / (crossings.len() - 1) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub h: f64,
    pub steps: u64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub scheme: Scheme,
    pub t_end: f64,
    pub h_ref: f64,
    pub rows: Vec<ConvergenceRow>,
    /// `log(e_i/e_{i+1}) / log(h_i/h_{i+1})` for consecutive rows; the base-2
    /// log of the error ratio when h halves.
    pub orders: Vec<f64>,
}

fn steps_for(t_end: f64, h: f64) -> Result<u64> {
    let ratio = t_end / h;
    let n = ratio.round();
    if !(n >= 1.0) || (ratio - n).abs() > 1e-9 * n {
        return Err(Error::Config(format!("t_end = {t_end} is not an integer multiple of h = {h}")));
    }
    Ok(n as u64)
}

fn endpoint(config: &RunConfig, h: f64, steps: u64) -> Result<[f64; 6]> {
    let mut state = config.init;
    for _ in 0..steps {
        state = step(config, state, h)?;
    }
    Ok(state)
}

/// Endpoint errors at `t_end` against the fourth-order reference taken with
/// step `min(h_list)/20`. Runs execute on separate threads.
pub fn convergence_study(config: &RunConfig, h_list: &[f64], t_end: f64) -> Result<ConvergenceTable> {
    config.validate()?;
    if h_list.len() < 3 {
        return Err(Error::Config("convergence study needs at least 3 step sizes".into()));
    }
    if h_list.iter().any(|h| !(h.is_finite() && *h > 0.0)) || !(t_end > 0.0) {
        return Err(Error::Config("step sizes and t_end must be positive".into()));
    }
    let steps = h_list
        .iter()
        .map(|&h| steps_for(t_end, h))
        .collect::<Result<Vec<_>>>()?;

    // the reference scheme takes REFERENCE_SUBSTEPS substeps per step of h_min
    let h_min = h_list.iter().cloned().fold(f64::INFINITY, f64::min);
    let h_ref = h_min / REFERENCE_SUBSTEPS as f64;
    let mut reference_config = config.clone();
    reference_config.scheme = Scheme::Reference;
    reference_config.h = h_min;
    let ref_steps = steps_for(t_end, h_min)?;

    let (reference, results) = std::thread::scope(|scope| {
        let reference = scope.spawn(|| endpoint(&reference_config, h_min, ref_steps));
        let runs: Vec<_> = h_list
            .iter()
            .zip(&steps)
            .map(|(&h, &n)| {
                let mut c = config.clone();
                c.h = h;
                scope.spawn(move || endpoint(&c, h, n))
            })
            .collect();
        let results: Vec<_> = runs.into_iter().map(|r| r.join().expect("run thread panicked")).collect();
        (reference.join().expect("reference thread panicked"), results)
    });
    let reference = reference?;

    let mut rows = Vec::with_capacity(h_list.len());
    for ((&h, &n), end) in h_list.iter().zip(&steps).zip(results) {
        rows.push(ConvergenceRow {
            h,
            steps: n,
            error: max_distance(&end?, &reference),
        });
    }
    let orders = rows
        .windows(2)
        .map(|w| (w[0].error / w[1].error).ln() / (w[0].h / w[1].h).ln())
        .collect();
    Ok(ConvergenceTable {
        scheme: config.scheme,
        t_end,
        h_ref,
        rows,
        orders,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::run::{run, Sample};
    use crate::harness::config::Model;

    #[test]
    fn sinusoid_period() {
        let dt = 0.001;
        let series: Vec<f64> = (0..5500)
            .map(|i| (2.0 * std::f64::consts::PI * i as f64 * dt).sin())
            .collect();
        let p = estimate_period(&series, dt).unwrap();
        assert!((p - 1.0).abs() < 0.01, "{p}");
    }

    #[test]
    fn constant_series_has_no_period() {
        assert!(matches!(
            estimate_period(&[1.0; 100], 0.1),
            Err(Error::TooFewCrossings { found: 0 })
        ));
        assert!(estimate_period(&[], 0.1).is_err());
    }

    #[test]
    fn constant_drift_is_zero() {
        let traj = Trajectory {
            model: Model::Kowalevski,
            h: 0.1,
            samples: vec![
                Sample {
                    step: 0,
                    t: 0.0,
                    state: [0.0; 6],
                    invariants: [Some(1.0), Some(2.0), Some(3.0), Some(4.0)],
                };
                5
            ],
        };
        let r = drift_report(&traj).unwrap();
        assert_eq!(r.entries.len(), 4);
        for e in &r.entries {
            assert_eq!(e.max_abs_deviation, 0.0);
            assert!(e.min <= e.initial && e.initial <= e.max);
        }
        let empty = Trajectory { samples: vec![], ..traj };
        assert_eq!(drift_report(&empty), Err(Error::EmptyTrajectory));
    }

    #[test]
    fn drift_report_skips_blank_columns() {
        let c = RunConfig::euler(
            Scheme::Bs,
            crate::algebra::Vec3::new(1.0, 2.0, 3.0),
            crate::algebra::Vec3::new(1.0, 0.5, 0.2),
            crate::algebra::Vec3::new(0.0, 0.0, 1.0),
            0.01,
            20,
        );
        let r = drift_report(&run(&c).unwrap()).unwrap();
        let names: Vec<_> = r.entries.iter().map(|e| e.name).collect();
        assert_eq!(names, vec!["gamma_sq", "E"]);
    }

    #[test]
    fn zero_length_reversal() {
        let c = RunConfig::kowalevski(Scheme::BohlinA, 1.0, 1e-3, 10);
        assert_eq!(reversal_test(&c, 0).unwrap(), 0.0);
    }

    #[test]
    fn increment_sign_changes_counts_turns() {
        assert_eq!(increment_sign_changes(&[0.0, 1.0, 0.0, 1.0, 0.0]), 3);
        assert_eq!(increment_sign_changes(&[0.0, 1.0, 2.0, 3.0]), 0);
        assert_eq!(increment_sign_changes(&[1.0, 1.0, 1.0]), 0);
    }

    #[test]
    fn convergence_study_validates_inputs() {
        let c = RunConfig::kowalevski(Scheme::Hk, 1.0, 1e-3, 10);
        assert!(convergence_study(&c, &[0.1, 0.05], 1.0).is_err());
        assert!(convergence_study(&c, &[0.1, 0.05, 0.03], 1.0).is_err());
    }
}
