use std::io::{self, Write};

use crate::algebra::{cross, Vec3};
use crate::error::Result;
use crate::euler_lagrange::{
    bs_step_euler, lagrange_invariants, lagrange_step, symmetric_step_euler, LagrangeParams,
    LagrangeState,
};
use crate::hk::hk_step;
use crate::kowalevski::{bohlin_algorithm_step, gamma_step_bs, hybrid_step_with, HybridOptions};
use crate::models::{euler_poisson_rhs, invariants, BodyState, TopParams};

use super::config::{Model, Params, RunConfig, Scheme};

/// Substeps per step of the reference integrator.
pub const REFERENCE_SUBSTEPS: u32 = 20;

pub const BODY_HEADER: [&str; 12] = [
    "step", "t", "w1", "w2", "w3", "g1", "g2", "g3", "gamma_sq", "two_ell", "E", "k_sq",
];
pub const LAGRANGE_HEADER: [&str; 12] = [
    "step", "t", "m1", "m2", "m3", "a1", "a2", "a3", "a_sq", "m_dot_p", "m_dot_a", "E",
];

/// Advances a state vector by one step of the configured scheme.
///
/// The state is `(ω, γ)` for body-frame models and `(m, a)` for Lagrange.
/// `h` may be negative (used by the reversal test).
pub fn step(config: &RunConfig, state: [f64; 6], h: f64) -> Result<[f64; 6]> {
    match (config.model, config.params) {
        (Model::Lagrange, Params::Lagrange(lp)) => {
            let s = LagrangeState::from_array(state);
            let next = match config.scheme {
                Scheme::Reference => rk4(state, h, |y| lagrange_rhs(y, &lp)),
                _ => lagrange_step(&s, &lp, h)?.to_array(),
            };
            Ok(next)
        }
        _ => {
            let p = config.top_params().expect("body-frame model has top parameters");
            let s = BodyState::from_array(state);
            body_step(config, &s, &p, h).map(BodyState::to_array)
        }
    }
}

fn body_step(config: &RunConfig, s: &BodyState, p: &TopParams, h: f64) -> Result<BodyState> {
    match config.scheme {
        Scheme::Hk => hk_step(s, p, h),
        Scheme::Bs => {
            let m = bs_step_euler(p.momentum(s.omega), p, h, config.bs_next_omega)?;
            let omega = p.omega_from_momentum(m);
            let w = if config.bs_next_omega { omega } else { s.omega };
            Ok(BodyState::new(omega, gamma_step_bs(s.gamma, w, h)?))
        }
        Scheme::Symmetric => {
            let m = symmetric_step_euler(p.momentum(s.omega), p, h, config.symmetric_tol)?;
            let omega = p.omega_from_momentum(m);
            let gamma = gamma_step_bs(s.gamma, (omega + s.omega) * 0.5, h)?;
            Ok(BodyState::new(omega, gamma))
        }
        Scheme::BohlinA | Scheme::BohlinB | Scheme::BohlinC => {
            let kp = kowalevski_params(config);
            let method = config.scheme.gamma_method().expect("bohlin scheme");
            bohlin_algorithm_step(s, &kp, h, method, config.branch_rule)
        }
        Scheme::Hybrid => {
            let opts = HybridOptions {
                rule: config.branch_rule,
                refresh_omega3: config.refresh_omega3,
            };
            hybrid_step_with(s, &kowalevski_params(config), h, opts)
        }
        Scheme::Reference => Ok(BodyState::from_array(rk4(s.to_array(), h, |y| {
            body_rhs(y, p)
        }))),
    }
}

fn kowalevski_params(config: &RunConfig) -> crate::models::KowalevskiParams {
    match config.params {
        Params::Kowalevski(kp) => kp,
        _ => unreachable!("validated: bohlin and hybrid schemes require the Kowalevski model"),
    }
}

pub(crate) fn body_rhs(y: [f64; 6], p: &TopParams) -> [f64; 6] {
    let (dw, dg) = euler_poisson_rhs(&BodyState::from_array(y), p);
    [dw.x, dw.y, dw.z, dg.x, dg.y, dg.z]
}

/// Continuous inertial-frame Lagrange top: `ṁ = p × a`, `ȧ = m × a`.
pub(crate) fn lagrange_rhs(y: [f64; 6], lp: &LagrangeParams) -> [f64; 6] {
    let m = Vec3::new(y[0], y[1], y[2]);
    let a = Vec3::new(y[3], y[4], y[5]);
    let dm = cross(lp.p, a);
    let da = cross(m, a);
    [dm.x, dm.y, dm.z, da.x, da.y, da.z]
}

/// `REFERENCE_SUBSTEPS` classical Runge–Kutta substeps covering `h`.
pub(crate) fn rk4(y: [f64; 6], h: f64, f: impl Fn([f64; 6]) -> [f64; 6]) -> [f64; 6] {
    let dt = h / REFERENCE_SUBSTEPS as f64;
    let axpy = |y: &[f64; 6], k: &[f64; 6], s: f64| -> [f64; 6] { std::array::from_fn(|i| y[i] + s * k[i]) };
    let mut y = y;
    for _ in 0..REFERENCE_SUBSTEPS {
        let k1 = f(y);
        let k2 = f(axpy(&y, &k1, 0.5 * dt));
        let k3 = f(axpy(&y, &k2, 0.5 * dt));
        let k4 = f(axpy(&y, &k3, dt));
        y = std::array::from_fn(|i| y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    }
    y
}

/// One sampled row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub step: u64,
    pub t: f64,
    pub state: [f64; 6],
    /// Body frame: `gamma_sq, two_ell, E, k_sq`. Lagrange: `a_sq, m_dot_p, m_dot_a, E`.
    pub invariants: [Option<f64>; 4],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub model: Model,
    pub h: f64,
    pub samples: Vec<Sample>,
}

/// Invariant columns of one state under the given configuration.
pub fn sample_invariants(config: &RunConfig, state: [f64; 6]) -> [Option<f64>; 4] {
    match config.params {
        Params::Lagrange(lp) => {
            let inv = lagrange_invariants(&LagrangeState::from_array(state), &lp, config.h);
            [Some(inv.a_sq), Some(inv.m_dot_p), Some(inv.m_dot_a), Some(inv.energy)]
        }
        _ => {
            let p = config.top_params().expect("body-frame model");
            let inv = invariants(&BodyState::from_array(state), &p);
            [Some(inv.gamma_sq), inv.two_ell, Some(inv.energy), inv.k_sq]
        }
    }
}

/// Iterates the configured scheme, recording every `stride`-th state.
pub fn run(config: &RunConfig) -> Result<Trajectory> {
    config.validate()?;
    let sample = |step: u64, state: [f64; 6]| Sample {
        step,
        t: step as f64 * config.h,
        state,
        invariants: sample_invariants(config, state),
    };
    let mut samples = Vec::with_capacity((config.steps / config.stride + 1) as usize);
    let mut state = config.init;
    samples.push(sample(0, state));
    for n in 1..=config.steps {
        state = step(config, state, config.h)?;
        if n % config.stride == 0 {
            samples.push(sample(n, state));
        }
    }
    Ok(Trajectory {
        model: config.model,
        h: config.h,
        samples,
    })
}

/// Writes a value with 17 significant digits; `None` is an empty field.
fn write_value(w: &mut impl Write, v: Option<f64>) -> io::Result<()> {
    match v {
        Some(x) => write!(w, "{x:.16e}"),
        None => Ok(()),
    }
}

impl Trajectory {
    pub fn header(&self) -> &'static [&'static str; 12] {
        match self.model {
            Model::Lagrange => &LAGRANGE_HEADER,
            _ => &BODY_HEADER,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last_state(&self) -> Option<[f64; 6]> {
        self.samples.last().map(|s| s.state)
    }

    /// Values of a named column (`t`, a state column or an invariant).
    /// Blank invariant entries are skipped.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.header().iter().position(|c| *c == name)?;
        Some(
            self.samples
                .iter()
                .filter_map(|s| match idx {
                    0 => Some(s.step as f64),
                    1 => Some(s.t),
                    2..=7 => Some(s.state[idx - 2]),
                    _ => s.invariants[idx - 8],
                })
                .collect(),
        )
    }

    pub fn write_csv(&self, mut w: impl Write) -> io::Result<()> {
        writeln!(w, "{}", self.header().join(","))?;
        for s in &self.samples {
            write!(w, "{},", s.step)?;
            write_value(&mut w, Some(s.t))?;
            for v in s.state {
                w.write_all(b",")?;
                write_value(&mut w, Some(v))?;
            }
            for v in s.invariants {
                w.write_all(b",")?;
                write_value(&mut w, v)?;
            }
            w.write_all(b"\n")?;
        }
        w.flush()
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_steps_gives_initial_row() {
        let c = RunConfig::kowalevski(Scheme::Hk, 1.0, 1e-3, 0);
        let t = run(&c).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.samples[0].state, BodyState::yoshida().to_array());
        assert_eq!(t.samples[0].t, 0.0);
    }

    #[test]
    fn row_count_follows_stride() {
        let c = RunConfig::kowalevski(Scheme::BohlinA, 1.0, 1e-3, 25).with_stride(10);
        let t = run(&c).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.samples.iter().map(|s| s.step).collect::<Vec<_>>(), vec![0, 10, 20]);
        assert_eq!(t.samples[2].t, 20.0 * 1e-3);
    }

    #[test]
    fn csv_layout() {
        let c = RunConfig::kowalevski(Scheme::Hk, 1.0, 1e-3, 2);
        let csv = run(&c).unwrap().to_csv_string();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "step,t,w1,w2,w3,g1,g2,g3,gamma_sq,two_ell,E,k_sq");
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first.len(), 12);
        assert_eq!(first[0], "0");
        assert_eq!(first[2], "2.0000000000000000e0");
        assert_eq!(first[2].parse::<f64>().unwrap(), 2.0);
        assert!(!csv.contains('\r'));
        assert_eq!(csv.lines().count(), 4);
    }

    #[test]
    fn non_kowalevski_rows_leave_columns_blank() {
        let c = RunConfig::euler(
            Scheme::Hk,
            Vec3::new(1.0, 2.0, 3.0),
            Vec3::new(1.0, 0.5, 0.2),
            Vec3::new(0.0, 0.0, 1.0),
            0.01,
            1,
        );
        let csv = run(&c).unwrap().to_csv_string();
        let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(row[9], "");
        assert_eq!(row[11], "");
        assert!(!row[10].is_empty());
    }

    #[test]
    fn lagrange_header() {
        let c = RunConfig::lagrange(
            Scheme::Bs,
            Vec3::new(0.0, 0.0, 1.0),
            Vec3::new(0.0, 0.0, 1.0),
            Vec3::new(0.6, 0.0, 0.8),
            0.01,
            3,
        );
        let t = run(&c).unwrap();
        assert_eq!(t.header()[8], "a_sq");
        assert_eq!(t.column("a_sq").unwrap().len(), 4);
    }

    #[test]
    fn reference_step_is_accurate() {
        // exp of a rotation about e3 for γ̇ = γ×ω with frozen spin
        let c = RunConfig::euler(
            Scheme::Reference,
            Vec3::new(1.0, 1.0, 1.0),
            Vec3::new(0.0, 0.0, 1.0),
            Vec3::new(1.0, 0.0, 0.0),
            0.1,
            10,
        );
        let last = run(&c).unwrap().last_state().unwrap();
        assert!((last[3] - 1.0f64.cos()).abs() < 1e-11, "{last:?}");
        assert!((last[4] + 1.0f64.sin()).abs() < 1e-11);
    }
}
