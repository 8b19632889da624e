//! Continuous-time Euler–Poisson equations and their conserved quantities.
//!
//! The body-frame state is `(ω, γ)`; angular momentum is `m = diag(A,B,C)·ω`
//! and `g = mg·(x₀, y₀, z₀)` is the gravity moment vector. The equations are
//!
//! ```text
//! ṁ = m × ω + γ × g,    γ̇ = γ × ω.
//! ```

use crate::algebra::{cross, Complex, Mat3, Vec3};

/// Moments of inertia and gravity moment vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub g: Vec3,
}

impl TopParams {
    pub fn new(a: f64, b: f64, c: f64, g: Vec3) -> Self {
        Self { a, b, c, g }
    }

    /// Torque-free (Euler) top.
    pub fn euler(a: f64, b: f64, c: f64) -> Self {
        Self::new(a, b, c, Vec3::ZERO)
    }

    /// The normalized Kowalevski top: `A = B = 2`, `C = 1`, `g = (c₀, 0, 0)`.
    pub fn kowalevski(c0: f64) -> Self {
        Self::new(2.0, 2.0, 1.0, Vec3::new(c0, 0.0, 0.0))
    }

    pub fn inertia(&self) -> Vec3 {
        Vec3::new(self.a, self.b, self.c)
    }

    pub fn momentum(&self, omega: Vec3) -> Vec3 {
        self.inertia().hadamard(omega)
    }

    pub fn omega_from_momentum(&self, m: Vec3) -> Vec3 {
        Vec3::new(m.x / self.a, m.y / self.b, m.z / self.c)
    }

    pub fn is_valid(&self) -> bool {
        self.a > 0.0 && self.b > 0.0 && self.c > 0.0 && self.g.is_finite()
    }

    /// Returns the reduced Kowalevski parameters when `A = B = 2C` and
    /// `y₀ = z₀ = 0`. The reduced constant is `c₀ = mg·x₀ / C`.
    pub fn as_kowalevski(&self) -> Option<KowalevskiParams> {
        let rel = |x: f64, y: f64| (x - y).abs() <= 1e-14 * x.abs().max(y.abs());
        if rel(self.a, self.b) && rel(self.a, 2.0 * self.c) && self.g.y == 0.0 && self.g.z == 0.0 {
            Some(KowalevskiParams { c0: self.g.x / self.c })
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BodyState {
    pub omega: Vec3,
    pub gamma: Vec3,
}

impl BodyState {
    pub fn new(omega: Vec3, gamma: Vec3) -> Self {
        Self { omega, gamma }
    }

    pub fn to_array(self) -> [f64; 6] {
        let (w, g) = (self.omega, self.gamma);
        [w.x, w.y, w.z, g.x, g.y, g.z]
    }

    pub fn from_array(v: [f64; 6]) -> Self {
        Self::new(Vec3::new(v[0], v[1], v[2]), Vec3::new(v[3], v[4], v[5]))
    }

    /// Max-norm distance over all six components.
    pub fn distance(&self, o: &BodyState) -> f64 {
        (self.omega - o.omega).max_abs().max((self.gamma - o.gamma).max_abs())
    }

    /// The standard Kowalevski test point: `ω = (2,0,0)`, `γ = (√(1−γ₃²), 0, γ₃)`
    /// with `γ₃ = 0.001`.
    pub fn yoshida() -> Self {
        let g3 = 0.001_f64;
        Self::new(
            Vec3::new(2.0, 0.0, 0.0),
            Vec3::new((1.0 - g3 * g3).sqrt(), 0.0, g3),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KowalevskiParams {
    pub c0: f64,
}

impl KowalevskiParams {
    pub fn new(c0: f64) -> Self {
        Self { c0 }
    }

    pub fn top(&self) -> TopParams {
        TopParams::kowalevski(self.c0)
    }
}

impl Default for KowalevskiParams {
    fn default() -> Self {
        Self { c0: 1.0 }
    }
}

/// Point evaluation of the conserved quantities.
///
/// `two_ell` and `k_sq` are present only for Kowalevski parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantSet {
    pub gamma_sq: f64,
    pub m_dot_gamma: f64,
    pub energy: f64,
    /// `|m|²`, the extra integral of the torque-free top.
    pub m_sq: f64,
    pub two_ell: Option<f64>,
    pub k_sq: Option<f64>,
}

/// Time derivatives `(ω̇, γ̇)`.
pub fn euler_poisson_rhs(s: &BodyState, p: &TopParams) -> (Vec3, Vec3) {
    let (w, g) = (s.omega, s.gamma);
    let (gx, gy, gz) = (p.g.x, p.g.y, p.g.z);
    let d_omega = Vec3::new(
        ((p.b - p.c) * w.y * w.z + (g.y * gz - g.z * gy)) / p.a,
        ((p.c - p.a) * w.z * w.x + (g.z * gx - g.x * gz)) / p.b,
        ((p.a - p.b) * w.x * w.y + (g.x * gy - g.y * gx)) / p.c,
    );
    let d_gamma = Vec3::new(
        g.y * w.z - g.z * w.y,
        g.z * w.x - g.x * w.z,
        g.x * w.y - g.y * w.x,
    );
    (d_omega, d_gamma)
}

pub fn invariants(s: &BodyState, p: &TopParams) -> InvariantSet {
    let m = p.momentum(s.omega);
    let kow = p.as_kowalevski().map(|kp| kowalevski_invariants(s, &kp));
    InvariantSet {
        gamma_sq: s.gamma.norm_sq(),
        m_dot_gamma: m.dot(s.gamma),
        energy: 0.5 * m.dot(s.omega) + p.g.dot(s.gamma),
        m_sq: m.norm_sq(),
        two_ell: kow.map(|k| k.two_ell),
        k_sq: kow.map(|k| k.k_sq),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KowalevskiInvariants {
    pub two_ell: f64,
    pub energy: f64,
    pub k_sq: f64,
}

/// `2ℓ = 2(ω₁γ₁+ω₂γ₂)+ω₃γ₃`, `E = ω₁²+ω₂²+½ω₃²+c₀γ₁`, `k² = |ω²−c₀γ|²`.
pub fn kowalevski_invariants(s: &BodyState, kp: &KowalevskiParams) -> KowalevskiInvariants {
    let (w, g) = (s.omega, s.gamma);
    KowalevskiInvariants {
        two_ell: 2.0 * (w.x * g.x + w.y * g.y) + w.z * g.z,
        energy: w.x * w.x + w.y * w.y + 0.5 * w.z * w.z + kp.c0 * g.x,
        k_sq: xi(s, kp).norm_sqr(),
    }
}

/// `ξ = (ω₁+iω₂)² − c₀(γ₁+iγ₂)`.
pub fn xi(s: &BodyState, kp: &KowalevskiParams) -> Complex {
    let w = Complex::new(s.omega.x, s.omega.y);
    let g = Complex::new(s.gamma.x, s.gamma.y);
    w * w - kp.c0 * g
}

/// Antisymmetric matrix with the layout `[[0, v₃, −v₂], [−v₃, 0, v₁], [v₂, −v₁, 0]]`,
/// so that `hat(v)·u = u × v`.
pub fn hat(v: Vec3) -> Mat3 {
    Mat3([[0.0, v.z, -v.y], [-v.z, 0.0, v.x], [v.y, -v.x, 0.0]])
}

/// Max-norm residual of the commutator identities `Ṁ = [Ω,M] + [G,Γ]` and
/// `Γ̇ = [Ω,Γ]`, with `Ṁ`, `Γ̇` taken from [`euler_poisson_rhs`].
pub fn matrix_form_residual(s: &BodyState, p: &TopParams) -> f64 {
    let (d_omega, d_gamma) = euler_poisson_rhs(s, p);
    let m = hat(p.momentum(s.omega));
    let omega = hat(s.omega);
    let gamma = hat(s.gamma);
    let g = hat(p.g);

    let m_dot = hat(p.momentum(d_omega));
    let gamma_dot = hat(d_gamma);

    let r1 = m_dot.sub(&omega.commutator(&m).add(&g.commutator(&gamma)));
    let r2 = gamma_dot.sub(&omega.commutator(&gamma));
    r1.max_abs().max(r2.max_abs())
}

/// Vector form of the right-hand side, `ṁ = m×ω + γ×g`, `γ̇ = γ×ω`.
/// Kept alongside the componentwise version for cross-checking.
pub fn euler_poisson_rhs_vector(s: &BodyState, p: &TopParams) -> (Vec3, Vec3) {
    let m = p.momentum(s.omega);
    let m_dot = cross(m, s.omega) + cross(s.gamma, p.g);
    (p.omega_from_momentum(m_dot), cross(s.gamma, s.omega))
}
