//! Schemes for the Kowalevski top that keep `|γ|² = 1` and the Kowalevski
//! integral `k² = |ξ|²` exact.
//!
//! One step of the three-stage algorithm:
//!
//! 1. advance γ with one of the norm-preserving maps in [`GammaMethod`];
//! 2. advance ω₃ with the trapezoidal update [`omega3_update`];
//! 3. advance `ω = ω₁ + iω₂` from `ξⁿ⁺¹ = e^{−iχ} ξⁿ`, `χ = (h/2)(ω₃ⁿ⁺¹+ω₃ⁿ)`,
//!    by a complex square root ([`bohlin_step`]).
//!
//! [`hybrid_step`] replaces stages 1–2 with a Hirota–Kimura predictor and a
//! γ re-solve using the averaged angular velocity.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{rotation_matrix, Complex, Vec3};
use crate::error::{Error, Result};
use crate::euler_lagrange::cayley_step;
use crate::hk::hk_step;
use crate::models::{BodyState, KowalevskiParams};

/// Smallest admissible `1 + γ₃` for the stereographic chart.
pub const SOUTH_POLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GammaMethod {
    /// `γⁿ⁺¹ − γⁿ = (h/2)(γⁿ⁺¹ + γⁿ) × ωⁿ`
    BsA,
    /// Forward Euler on the stereographic coordinate `z`.
    StereoB,
    /// `γⁿ⁺¹ = R(hωⁿ) γⁿ`
    RotationC,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BranchRule {
    /// Flip the root when the sign of its argument differs from the
    /// predictor's. Arguments `0` and `π` count as positive.
    #[default]
    ArgSign,
    /// Take the root closest to the predictor.
    NearestPredictor,
}

impl fmt::Display for BranchRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BranchRule::ArgSign => "arg-sign",
            BranchRule::NearestPredictor => "nearest",
        })
    }
}

impl FromStr for BranchRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "arg-sign" => Ok(BranchRule::ArgSign),
            "nearest" => Ok(BranchRule::NearestPredictor),
            other => Err(Error::Config(format!("unknown branch rule `{other}`"))),
        }
    }
}

/// Stereographic coordinate `z = (γ₁ + iγ₂)/(1 + γ₃)` of a unit vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StereoPoint {
    pub z: Complex,
}

pub fn gamma_step_bs(gamma: Vec3, omega: Vec3, h: f64) -> Result<Vec3> {
    cayley_step(gamma, omega, h)
}

pub fn stereo_forward(gamma: Vec3) -> Result<StereoPoint> {
    let denominator = 1.0 + gamma.z;
    if !(denominator >= SOUTH_POLE_TOL) {
        return Err(Error::SouthPole { denominator });
    }
    Ok(StereoPoint {
        z: Complex::new(gamma.x, gamma.y) / denominator,
    })
}

/// Always lands on the unit sphere.
pub fn stereo_inverse(p: StereoPoint) -> Vec3 {
    let zz = p.z.norm_sqr();
    let d = 1.0 + zz;
    Vec3::new(2.0 * p.z.re / d, 2.0 * p.z.im / d, (1.0 - zz) / d)
}

/// `zⁿ⁺¹ = zⁿ + (ih/2)(ω − 2ω₃zⁿ − ω̄(zⁿ)²)` with `ω = ω₁ + iω₂` at step n.
pub fn gamma_step_stereo(gamma: Vec3, omega: Vec3, h: f64) -> Result<Vec3> {
    let z = stereo_forward(gamma)?.z;
    let w = Complex::new(omega.x, omega.y);
    let dz = Complex::new(0.0, 0.5) * (w - 2.0 * omega.z * z - w.conj() * z * z);
    let next = z + dz * h;
    if !(next.re.is_finite() && next.im.is_finite()) {
        return Err(Error::SouthPole { denominator: 0.0 });
    }
    Ok(stereo_inverse(StereoPoint { z: next }))
}

pub fn gamma_step_rotation(gamma: Vec3, omega: Vec3, h: f64) -> Vec3 {
    rotation_matrix(omega * h).mul_vec(gamma)
}

pub fn gamma_step(method: GammaMethod, gamma: Vec3, omega: Vec3, h: f64) -> Result<Vec3> {
    match method {
        GammaMethod::BsA => gamma_step_bs(gamma, omega, h),
        GammaMethod::StereoB => gamma_step_stereo(gamma, omega, h),
        GammaMethod::RotationC => Ok(gamma_step_rotation(gamma, omega, h)),
    }
}

/// `ω₃ⁿ⁺¹ = ω₃ⁿ − (h/2) c₀ (γ₂ⁿ⁺¹ + γ₂ⁿ)`
pub fn omega3_update(omega3: f64, gamma2_n: f64, gamma2_next: f64, h: f64, c0: f64) -> f64 {
    omega3 - 0.5 * h * c0 * (gamma2_next + gamma2_n)
}

fn arg_is_nonnegative(z: Complex) -> bool {
    // +0.0 folds a negative-zero imaginary part, so arguments 0 and π test positive
    (z.im + 0.0).atan2(z.re) >= 0.0
}

/// The explicit one-step predictor used only to pick the square-root branch.
pub fn branch_predictor(omega_n: Complex, gamma3_n: f64, omega3_n: f64, h: f64, c0: f64) -> Complex {
    omega_n - Complex::new(0.0, 0.5 * h) * (omega3_n * omega_n - c0 * gamma3_n)
}

/// Solves `w² = e^{−iχ}((ωⁿ)² − c₀γⁿ) + c₀γⁿ⁺¹` for `w = ω₁ⁿ⁺¹ + iω₂ⁿ⁺¹`.
#[allow(clippy::too_many_arguments)]
pub fn bohlin_step(
    omega_n: Complex,
    gamma_n: Complex,
    gamma_next: Complex,
    gamma3_n: f64,
    omega3_n: f64,
    omega3_next: f64,
    h: f64,
    c0: f64,
    rule: BranchRule,
) -> Complex {
    let chi = 0.5 * h * (omega3_next + omega3_n);
    let xi_n = omega_n * omega_n - c0 * gamma_n;
    let target = Complex::from_polar(1.0, -chi) * xi_n + c0 * gamma_next;
    let w = target.sqrt();
    if w == Complex::new(0.0, 0.0) {
        return w;
    }
    let predictor = branch_predictor(omega_n, gamma3_n, omega3_n, h, c0);
    let flip = match rule {
        BranchRule::ArgSign => arg_is_nonnegative(w) != arg_is_nonnegative(predictor),
        BranchRule::NearestPredictor => (-w - predictor).norm() < (w - predictor).norm(),
    };
    if flip {
        -w
    } else {
        w
    }
}

fn complex_xy(v: Vec3) -> Complex {
    Complex::new(v.x, v.y)
}

/// One step of the three-stage γ / ω₃ / Bohlin algorithm.
pub fn bohlin_algorithm_step(
    s: &BodyState,
    kp: &KowalevskiParams,
    h: f64,
    method: GammaMethod,
    rule: BranchRule,
) -> Result<BodyState> {
    let gamma = gamma_step(method, s.gamma, s.omega, h)?;
    let omega3 = omega3_update(s.omega.z, s.gamma.y, gamma.y, h, kp.c0);
    let w = bohlin_step(
        complex_xy(s.omega),
        complex_xy(s.gamma),
        complex_xy(gamma),
        s.gamma.z,
        s.omega.z,
        omega3,
        h,
        kp.c0,
        rule,
    );
    Ok(BodyState::new(Vec3::new(w.re, w.im, omega3), gamma))
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HybridOptions {
    pub rule: BranchRule,
    /// Recompute ω₃ⁿ⁺¹ with [`omega3_update`] from the re-solved γ instead of
    /// keeping the Hirota–Kimura value.
    pub refresh_omega3: bool,
}

/// Hirota–Kimura predictor, γ re-solved with the averaged angular velocity,
/// then (ω₁, ω₂) re-solved by [`bohlin_step`].
pub fn hybrid_step(s: &BodyState, kp: &KowalevskiParams, h: f64, rule: BranchRule) -> Result<BodyState> {
    hybrid_step_with(s, kp, h, HybridOptions { rule, refresh_omega3: false })
}

pub fn hybrid_step_with(
    s: &BodyState,
    kp: &KowalevskiParams,
    h: f64,
    opts: HybridOptions,
) -> Result<BodyState> {
    let predicted = hk_step(s, &kp.top(), h)?;
    // (h/4)(γ'+γ)×(ω*+ω) is the BS form with the mean angular velocity
    let mean_omega = (predicted.omega + s.omega) * 0.5;
    let gamma = gamma_step_bs(s.gamma, mean_omega, h)?;
    let omega3 = if opts.refresh_omega3 {
        omega3_update(s.omega.z, s.gamma.y, gamma.y, h, kp.c0)
    } else {
        predicted.omega.z
    };
    let w = bohlin_step(
        complex_xy(s.omega),
        complex_xy(s.gamma),
        complex_xy(gamma),
        s.gamma.z,
        s.omega.z,
        omega3,
        h,
        kp.c0,
        opts.rule,
    );
    Ok(BodyState::new(Vec3::new(w.re, w.im, omega3), gamma))
}
