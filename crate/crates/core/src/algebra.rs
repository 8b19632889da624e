//! Small dense kernels: 3-vectors, 3x3 and 6x6 matrices, partial-pivot solves
//! and the axis-angle rotation matrix.

use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use crate::error::{Error, Result};

pub use num_complex::Complex64 as Complex;

/// Relative singularity threshold: a system is rejected when
/// `|det(a)| < SINGULAR_RTOL * ‖a‖∞^N`.
pub const SINGULAR_RTOL: f64 = 1e-14;

/// Below this angle `rotation_matrix` returns the identity.
pub const SMALL_ANGLE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        cross(self, o)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    /// Componentwise product, used for `diag(A,B,C)·ω`.
    pub fn hadamard(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x * o.x, self.y * o.y, self.z * o.z)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

pub fn cross(u: Vec3, v: Vec3) -> Vec3 {
    Vec3::new(
        u.y * v.z - u.z * v.y,
        u.z * v.x - u.x * v.z,
        u.x * v.y - u.y * v.x,
    )
}

/// Row-major 3x3 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub const IDENTITY: Mat3 = Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
    pub const ZERO: Mat3 = Mat3([[0.0; 3]; 3]);

    pub fn diag(d: Vec3) -> Mat3 {
        Mat3([[d.x, 0.0, 0.0], [0.0, d.y, 0.0], [0.0, 0.0, d.z]])
    }

    /// The cross-product matrix: `skew(u) · v = u × v`.
    pub fn skew(u: Vec3) -> Mat3 {
        Mat3([[0.0, -u.z, u.y], [u.z, 0.0, -u.x], [-u.y, u.x, 0.0]])
    }

    pub fn transpose(&self) -> Mat3 {
        let a = &self.0;
        Mat3(std::array::from_fn(|i| std::array::from_fn(|j| a[j][i])))
    }

    pub fn mul_vec(&self, v: Vec3) -> Vec3 {
        let a = &self.0;
        Vec3::new(
            a[0][0] * v.x + a[0][1] * v.y + a[0][2] * v.z,
            a[1][0] * v.x + a[1][1] * v.y + a[1][2] * v.z,
            a[2][0] * v.x + a[2][1] * v.y + a[2][2] * v.z,
        )
    }

    pub fn mul_mat(&self, o: &Mat3) -> Mat3 {
        let (a, b) = (&self.0, &o.0);
        Mat3(std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..3).map(|k| a[i][k] * b[k][j]).sum())
        }))
    }

    pub fn scale(&self, s: f64) -> Mat3 {
        Mat3(self.0.map(|row| row.map(|x| x * s)))
    }

    pub fn add(&self, o: &Mat3) -> Mat3 {
        Mat3(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j] + o.0[i][j])
        }))
    }

    pub fn sub(&self, o: &Mat3) -> Mat3 {
        self.add(&o.scale(-1.0))
    }

    /// Matrix commutator `[self, o] = self·o − o·self`.
    pub fn commutator(&self, o: &Mat3) -> Mat3 {
        self.mul_mat(o).sub(&o.mul_mat(self))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn det(&self) -> f64 {
        let a = &self.0;
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    }
}

/// Row-major 6x6 matrix; only used for the assembled Hirota–Kimura system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat6(pub [[f64; 6]; 6]);

impl Mat6 {
    pub fn identity() -> Mat6 {
        Mat6(std::array::from_fn(|i| {
            std::array::from_fn(|j| if i == j { 1.0 } else { 0.0 })
        }))
    }

    pub fn mul_vec(&self, v: &[f64; 6]) -> [f64; 6] {
        std::array::from_fn(|i| (0..6).map(|j| self.0[i][j] * v[j]).sum())
    }
}

fn inf_norm<const N: usize>(a: &[[f64; N]; N]) -> f64 {
    a.iter()
        .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Gaussian elimination with partial (row) pivoting.
fn solve_dense<const N: usize>(mut a: [[f64; N]; N], mut b: [f64; N]) -> Result<[f64; N]> {
    let scale = inf_norm(&a);
    let threshold = SINGULAR_RTOL * scale.powi(N as i32);
    let mut det = 1.0;

    for col in 0..N {
        let pivot = (col..N)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap_or(col);
        if pivot != col {
            a.swap(pivot, col);
            b.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col];
        det *= p;
        if p == 0.0 {
            break;
        }
        for row in col + 1..N {
            let f = a[row][col] / p;
            if f == 0.0 {
                continue;
            }
            for k in col..N {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }

    if !(det.abs() >= threshold) || scale == 0.0 {
        return Err(Error::Singular {
            dim: N,
            det,
            threshold,
        });
    }

    let mut x = [0.0; N];
    for row in (0..N).rev() {
        let tail: f64 = (row + 1..N).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Ok(x)
}

pub fn solve3(a: &Mat3, b: Vec3) -> Result<Vec3> {
    solve_dense(a.0, b.to_array()).map(Vec3::from_array)
}

pub fn solve6(a: &Mat6, b: &[f64; 6]) -> Result<[f64; 6]> {
    solve_dense(a.0, *b)
}

/// Rotation by the angle `|θ|` about `θ/|θ|`, with the entry layout
/// `R_ij = n_i n_j (1−c) + δ_ij c + ε_ijk n_k s`.
///
/// Applied to a body-frame vector it advances `γ̇ = γ × ω` by one step when
/// `θ = h·ω`.
pub fn rotation_matrix(theta: Vec3) -> Mat3 {
    let angle = theta.norm();
    if angle < SMALL_ANGLE {
        return Mat3::IDENTITY;
    }
    let n = theta * (1.0 / angle);
    let (s, c) = angle.sin_cos();
    let t = 1.0 - c;
    let (n1, n2, n3) = (n.x, n.y, n.z);
    Mat3([
        [n1 * n1 + (1.0 - n1 * n1) * c, n1 * n2 * t + n3 * s, n1 * n3 * t - n2 * s],
        [n2 * n1 * t - n3 * s, n2 * n2 + (1.0 - n2 * n2) * c, n2 * n3 * t + n1 * s],
        [n3 * n1 * t + n2 * s, n3 * n2 * t - n1 * s, n3 * n3 + (1.0 - n3 * n3) * c],
    ])
}
