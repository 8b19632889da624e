//! Hirota–Kimura (bilinear) discretization of the Euler–Poisson system.
//!
//! Every relation is linear in the new time level, so one step is a single
//! 6x6 linear solve. The unknown vector is ordered `(ω₁, ω₂, ω₃, γ₁, γ₂, γ₃)ⁿ⁺¹`.
//!
//! The γ₃ relation is the symmetric form
//! `γ₃ⁿ⁺¹−γ₃ⁿ = (h/2)(γ₁ⁿ⁺¹ω₂ⁿ + γ₁ⁿω₂ⁿ⁺¹ − γ₂ⁿ⁺¹ω₁ⁿ − γ₂ⁿω₁ⁿ⁺¹)`, the same
//! pattern as the γ₁ and γ₂ rows. With it the scheme is invariant under
//! `h → −h` together with `n ↔ n+1`.

use crate::algebra::{solve3, solve6, Mat3, Mat6, Vec3};
use crate::error::Result;
use crate::models::{BodyState, TopParams};

/// Diagnostics for one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HkStepReport {
    pub state_next: BodyState,
    /// `‖M‖∞ · ‖M⁻¹‖∞` of the assembled matrix.
    pub matrix_cond_estimate: f64,
    /// `‖M·x − b‖∞ / max(‖b‖∞, 1)`.
    pub residual: f64,
}

/// Builds the linear system `M·xⁿ⁺¹ = b` for one step of size `h`.
pub fn assemble(s: &BodyState, p: &TopParams, h: f64) -> (Mat6, [f64; 6]) {
    let (w, gm) = (s.omega, s.gamma);
    let (gx, gy, gz) = (p.g.x, p.g.y, p.g.z);
    let mut m = Mat6::identity();
    let a = &mut m.0;
    let hh = 0.5 * h;

    // ω rows
    let k1 = hh * (p.b - p.c) / p.a;
    let t1 = hh / p.a;
    a[0][1] -= k1 * w.z;
    a[0][2] -= k1 * w.y;
    a[0][4] -= t1 * gz;
    a[0][5] += t1 * gy;

    let k2 = hh * (p.c - p.a) / p.b;
    let t2 = hh / p.b;
    a[1][2] -= k2 * w.x;
    a[1][0] -= k2 * w.z;
    a[1][5] -= t2 * gx;
    a[1][3] += t2 * gz;

    let k3 = hh * (p.a - p.b) / p.c;
    let t3 = hh / p.c;
    a[2][0] -= k3 * w.y;
    a[2][1] -= k3 * w.x;
    a[2][3] -= t3 * gy;
    a[2][4] += t3 * gx;

    // γ rows: γ' − γ = (h/2)(γ'×ω + γ×ω')
    a[3][4] -= hh * w.z;
    a[3][5] += hh * w.y;
    a[3][2] -= hh * gm.y;
    a[3][1] += hh * gm.z;

    a[4][5] -= hh * w.x;
    a[4][3] += hh * w.z;
    a[4][0] -= hh * gm.z;
    a[4][2] += hh * gm.x;

    a[5][3] -= hh * w.y;
    a[5][4] += hh * w.x;
    a[5][1] -= hh * gm.x;
    a[5][0] += hh * gm.y;

    let b = [
        w.x + t1 * (gz * gm.y - gy * gm.z),
        w.y + t2 * (gx * gm.z - gz * gm.x),
        w.z + t3 * (gy * gm.x - gx * gm.y),
        gm.x,
        gm.y,
        gm.z,
    ];
    (m, b)
}

pub fn hk_step(s: &BodyState, p: &TopParams, h: f64) -> Result<BodyState> {
    let (m, b) = assemble(s, p, h);
    solve6(&m, &b).map(BodyState::from_array)
}

/// Same step as [`hk_step`], plus conditioning and residual of the solve.
pub fn hk_step_report(s: &BodyState, p: &TopParams, h: f64) -> Result<HkStepReport> {
    let (m, b) = assemble(s, p, h);
    let x = solve6(&m, &b)?;

    let mx = m.mul_vec(&x);
    let b_norm = b.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let residual = mx
        .iter()
        .zip(&b)
        .fold(0.0f64, |acc, (l, r)| acc.max((l - r).abs()))
        / b_norm.max(1.0);

    let row_sum = |rows: &[[f64; 6]; 6]| {
        rows.iter()
            .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    let mut inv = [[0.0; 6]; 6];
    for j in 0..6 {
        let mut e = [0.0; 6];
        e[j] = 1.0;
        let col = solve6(&m, &e)?;
        for i in 0..6 {
            inv[i][j] = col[i];
        }
    }

    Ok(HkStepReport {
        state_next: BodyState::from_array(x),
        matrix_cond_estimate: row_sum(&m.0) * row_sum(&inv),
        residual,
    })
}

/// The torque-free three-equation scheme on ω alone.
pub fn hk_step_euler(omega: Vec3, p: &TopParams, h: f64) -> Result<Vec3> {
    let hh = 0.5 * h;
    let k1 = hh * (p.b - p.c) / p.a;
    let k2 = hh * (p.c - p.a) / p.b;
    let k3 = hh * (p.a - p.b) / p.c;
    let w = omega;
    let m = Mat3([
        [1.0, -k1 * w.z, -k1 * w.y],
        [-k2 * w.z, 1.0, -k2 * w.x],
        [-k3 * w.y, -k3 * w.x, 1.0],
    ]);
    solve3(&m, omega)
}
