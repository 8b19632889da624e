//! Norm-preserving schemes for the torque-free Euler top, and the explicit
//! two-stage solver for the Lagrange top in the inertial frame.

use crate::algebra::{cross, solve3, Mat3, Vec3};
use crate::error::{Error, Result};
use crate::hk::hk_step_euler;
use crate::models::TopParams;

/// Iteration cap for the implicit variants.
pub const MAX_ITERATIONS: usize = 100;

/// Default tolerance for [`symmetric_step_euler`].
pub const DEFAULT_TOL: f64 = 1e-13;

/// Solves `x' − x = (h/2)(x' + x) × v` for `x'`.
///
/// Rearranged as `(I + (h/2)[v]×)·x' = (I − (h/2)[v]×)·x`, a Cayley map, so
/// `|x'| = |x|` in exact arithmetic.
pub(crate) fn cayley_step(x: Vec3, v: Vec3, h: f64) -> Result<Vec3> {
    let k = Mat3::skew(v).scale(0.5 * h);
    let lhs = Mat3::IDENTITY.add(&k);
    let rhs = x + cross(x, v) * (0.5 * h);
    solve3(&lhs, rhs)
}

/// Bobenko–Suris type step `mⁿ⁺¹ − mⁿ = (h/2)(mⁿ⁺¹ + mⁿ) × ω`.
///
/// With `use_next_omega = false` the angular velocity is `ωⁿ` and the step is
/// a single 3x3 solve. With `true` it is `ωⁿ⁺¹`, found by fixed-point
/// iteration (tolerance [`DEFAULT_TOL`], at most [`MAX_ITERATIONS`]).
pub fn bs_step_euler(m: Vec3, p: &TopParams, h: f64, use_next_omega: bool) -> Result<Vec3> {
    let omega = p.omega_from_momentum(m);
    let mut next = cayley_step(m, omega, h)?;
    if !use_next_omega {
        return Ok(next);
    }
    let scale = m.max_abs().max(1.0);
    let mut change = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        let candidate = cayley_step(m, p.omega_from_momentum(next), h)?;
        change = (candidate - next).max_abs();
        next = candidate;
        if change <= DEFAULT_TOL * scale {
            return Ok(next);
        }
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITERATIONS,
        residual: change,
    })
}

/// Residual of `mⁿ⁺¹−mⁿ = (h/4)(mⁿ⁺¹+mⁿ)×(ωⁿ⁺¹+ωⁿ)` in the max norm.
pub fn symmetric_residual(m: Vec3, next: Vec3, p: &TopParams, h: f64) -> f64 {
    let w = p.omega_from_momentum(m) + p.omega_from_momentum(next);
    (next - m - cross(next + m, w) * (0.25 * h)).max_abs()
}

/// The time-symmetric scheme conserving both `|m|²` and `m·ω`.
///
/// Fixed-point iteration on `ωⁿ⁺¹`, seeded with the Hirota–Kimura step and
/// stopped once the defining relation holds to `tol · max(1, ‖m‖∞)`.
pub fn symmetric_step_euler(m: Vec3, p: &TopParams, h: f64, tol: f64) -> Result<Vec3> {
    if !(tol > 0.0) {
        return Err(Error::Config(format!("tolerance must be positive, got {tol}")));
    }
    let omega = p.omega_from_momentum(m);
    let seed = hk_step_euler(omega, p, h)?;
    let mut next = p.momentum(seed);
    let scale = m.max_abs().max(1.0);
    let mut residual = symmetric_residual(m, next, p, h);
    for _ in 0..MAX_ITERATIONS {
        if residual <= tol * scale {
            return Ok(next);
        }
        let mid = (omega + p.omega_from_momentum(next)) * 0.5;
        next = cayley_step(m, mid, h)?;
        residual = symmetric_residual(m, next, p, h);
    }
    if residual <= tol * scale {
        return Ok(next);
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITERATIONS,
        residual,
    })
}

/// Inertial-frame Lagrange top: angular momentum `m` and body axis `a`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LagrangeState {
    pub m: Vec3,
    pub a: Vec3,
}

impl LagrangeState {
    pub fn new(m: Vec3, a: Vec3) -> Self {
        Self { m, a }
    }

    pub fn to_array(self) -> [f64; 6] {
        [self.m.x, self.m.y, self.m.z, self.a.x, self.a.y, self.a.z]
    }

    pub fn from_array(v: [f64; 6]) -> Self {
        Self::new(Vec3::new(v[0], v[1], v[2]), Vec3::new(v[3], v[4], v[5]))
    }
}

/// The fixed vertical `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagrangeParams {
    pub p: Vec3,
}

impl Default for LagrangeParams {
    fn default() -> Self {
        Self {
            p: Vec3::new(0.0, 0.0, 1.0),
        }
    }
}

/// `mⁿ⁺¹ = mⁿ + h p×aⁿ`, then `aⁿ⁺¹ − aⁿ = (h/2) mⁿ⁺¹ × (aⁿ⁺¹ + aⁿ)`.
pub fn lagrange_step(s: &LagrangeState, lp: &LagrangeParams, h: f64) -> Result<LagrangeState> {
    let m = s.m + cross(lp.p, s.a) * h;
    // m×(a'+a) = −(a'+a)×m
    let a = cayley_step(s.a, -m, h)?;
    Ok(LagrangeState { m, a })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagrangeInvariants {
    pub a_sq: f64,
    pub m_dot_p: f64,
    pub m_dot_a: f64,
    /// `½|m|² + a·p + (h/2)(a×m)·p`
    pub energy: f64,
}

pub fn lagrange_invariants(s: &LagrangeState, lp: &LagrangeParams, h: f64) -> LagrangeInvariants {
    LagrangeInvariants {
        a_sq: s.a.norm_sq(),
        m_dot_p: s.m.dot(lp.p),
        m_dot_a: s.m.dot(s.a),
        energy: 0.5 * s.m.norm_sq() + s.a.dot(lp.p) + 0.5 * h * cross(s.a, s.m).dot(lp.p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn euler123() -> TopParams {
        TopParams::euler(1.0, 2.0, 3.0)
    }

    #[test]
    fn zero_step_leaves_momentum() {
        let m = Vec3::new(1.0, -0.5, 2.0);
        assert_eq!(bs_step_euler(m, &euler123(), 0.0, false).unwrap(), m);
        assert_eq!(symmetric_step_euler(m, &euler123(), 0.0, 1e-13).unwrap(), m);
    }

    #[test]
    fn spherical_top_leaves_momentum() {
        let p = TopParams::euler(2.0, 2.0, 2.0);
        let m = Vec3::new(1.0, -0.5, 2.0);
        for next in [
            bs_step_euler(m, &p, 0.1, false).unwrap(),
            bs_step_euler(m, &p, 0.1, true).unwrap(),
            symmetric_step_euler(m, &p, 0.1, 1e-13).unwrap(),
        ] {
            assert!((next - m).max_abs() <= 1e-15, "{next:?}");
        }
    }

    #[test]
    fn bs_preserves_norm() {
        let m = Vec3::new(1.0, 1.0, 1.0);
        for flag in [false, true] {
            let next = bs_step_euler(m, &euler123(), 0.1, flag).unwrap();
            assert!((next.norm_sq() - 3.0).abs() <= 1e-13);
        }
    }

    #[test]
    fn bs_is_not_time_reversible() {
        let p = euler123();
        let m = Vec3::new(1.0, 0.7, -0.4);
        let fwd = bs_step_euler(m, &p, 0.05, false).unwrap();
        let back = bs_step_euler(fwd, &p, -0.05, false).unwrap();
        assert!((back - m).max_abs() >= 1e-8);
    }

    #[test]
    fn symmetric_step_conserves_both_integrals_and_reverses() {
        let p = euler123();
        let m = Vec3::new(1.0, 1.0, 1.0);
        let tol = 1e-13;
        let next = symmetric_step_euler(m, &p, 0.05, tol).unwrap();
        assert!(symmetric_residual(m, next, &p, 0.05) <= tol);
        let e0 = m.dot(p.omega_from_momentum(m));
        let e1 = next.dot(p.omega_from_momentum(next));
        assert!((next.norm_sq() - m.norm_sq()).abs() <= 1e-12);
        assert!((e1 - e0).abs() <= 1e-12);
        let back = symmetric_step_euler(next, &p, -0.05, tol).unwrap();
        assert!((back - m).max_abs() <= 10.0 * tol);
    }

    #[test]
    fn symmetric_step_rejects_bad_tolerance() {
        let m = Vec3::new(1.0, 1.0, 1.0);
        assert!(matches!(
            symmetric_step_euler(m, &euler123(), 0.1, 0.0),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn symmetric_step_reports_non_convergence() {
        // a tolerance below roundoff can never be met
        let m = Vec3::new(1.0, 1.0, 1.0);
        let res = symmetric_step_euler(m, &euler123(), 0.1, 1e-30);
        assert!(matches!(res, Err(Error::NoConvergence { iterations: MAX_ITERATIONS, .. })));
    }

    #[test]
    fn sleeping_top_is_stationary() {
        let lp = LagrangeParams::default();
        let s = LagrangeState::new(Vec3::new(0.0, 0.0, 2.5), Vec3::new(0.0, 0.0, 1.0));
        for h in [0.0, 0.01, 0.3] {
            assert_eq!(lagrange_step(&s, &lp, h).unwrap(), s);
        }
        let inv = lagrange_invariants(&s, &lp, 0.01);
        assert_eq!((inv.a_sq, inv.m_dot_p, inv.m_dot_a, inv.energy), (1.0, 2.5, 2.5, 0.5 * 2.5 * 2.5 + 1.0));
    }

    #[test]
    fn lagrange_invariants_without_momentum() {
        let lp = LagrangeParams::default();
        let a = Vec3::new(0.6, 0.0, 0.8);
        let inv = lagrange_invariants(&LagrangeState::new(Vec3::ZERO, a), &lp, 0.1);
        assert_eq!((inv.a_sq, inv.m_dot_p, inv.m_dot_a), (a.norm_sq(), 0.0, 0.0));
        assert_eq!(inv.energy, a.dot(lp.p));
    }

    #[test]
    fn lagrange_step_conserves_discrete_integrals() {
        let lp = LagrangeParams::default();
        let a = Vec3::new(1.0, 0.0, 0.3);
        let mut s = LagrangeState::new(Vec3::new(0.0, 0.0, 1.0), a * (1.0 / a.norm()));
        let h = 0.01;
        let i0 = lagrange_invariants(&s, &lp, h);
        for _ in 0..1000 {
            s = lagrange_step(&s, &lp, h).unwrap();
        }
        let i1 = lagrange_invariants(&s, &lp, h);
        assert!((i1.a_sq - i0.a_sq).abs() <= 1e-13);
        assert!((i1.m_dot_p - i0.m_dot_p).abs() <= 1e-13);
        assert!((i1.m_dot_a - i0.m_dot_a).abs() <= 1e-13);
        assert!((i1.energy - i0.energy).abs() <= 1e-13);
    }
}
