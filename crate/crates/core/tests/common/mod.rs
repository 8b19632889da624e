//! Independent reference computations shared by the integration tests.
//! Nothing here calls the crate's solvers or assemblers.
#![allow(dead_code)]

use discrete_tops::models::euler_poisson_rhs;
use discrete_tops::{BodyState, TopParams, Vec3};
use rand::{rngs::StdRng, Rng};

/// Gaussian elimination with full pivoting on a dense copy.
pub fn full_pivot_solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a.iter().zip(b).map(|(row, &bi)| {
        let mut r = row.clone();
        r.push(bi);
        r
    }).collect();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let (mut pr, mut pc, mut best) = (k, k, -1.0);
        for i in k..n {
            for j in k..n {
                if m[i][j].abs() > best {
                    best = m[i][j].abs();
                    pr = i;
                    pc = j;
                }
            }
        }
        assert!(best > 0.0, "oracle matrix is singular");
        m.swap(k, pr);
        for row in m.iter_mut() {
            row.swap(k, pc);
        }
        perm.swap(k, pc);
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..=n {
                m[i][j] -= f * m[k][j];
            }
        }
    }
    let mut y = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| m[i][j] * y[j]).sum();
        y[i] = (m[i][n] - s) / m[i][i];
    }
    let mut x = vec![0.0; n];
    for (k, &col) in perm.iter().enumerate() {
        x[col] = y[k];
    }
    x
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

pub fn cramer3(a: [[f64; 3]; 3], b: [f64; 3]) -> [f64; 3] {
    let d = det3(a);
    let mut x = [0.0; 3];
    for (k, xk) in x.iter_mut().enumerate() {
        let mut ak = a;
        for i in 0..3 {
            ak[i][k] = b[i];
        }
        *xk = det3(ak) / d;
    }
    x
}

/// Solves `r(x) = 0` for a residual that is affine in `x` by probing it at the
/// origin and the unit vectors.
pub fn solve_affine(n: usize, r: impl Fn(&[f64]) -> Vec<f64>) -> Vec<f64> {
    let zero = vec![0.0; n];
    let r0 = r(&zero);
    let mut a = vec![vec![0.0; n]; n];
    for j in 0..n {
        let mut e = zero.clone();
        e[j] = 1.0;
        let rj = r(&e);
        for i in 0..n {
            a[i][j] = rj[i] - r0[i];
        }
    }
    let b: Vec<f64> = r0.iter().map(|v| -v).collect();
    full_pivot_solve(&a, &b)
}

pub fn to_state(x: &[f64]) -> BodyState {
    BodyState::new(Vec3::new(x[0], x[1], x[2]), Vec3::new(x[3], x[4], x[5]))
}

pub fn field(x: &[f64], p: &TopParams) -> Vec<f64> {
    let (dw, dg) = euler_poisson_rhs(&to_state(x), p);
    vec![dw.x, dw.y, dw.z, dg.x, dg.y, dg.z]
}

/// Bilinear (Kahan–Hirota–Kimura) residual `x' − x − h·f̃(x, x')`, with `f̃`
/// the polarization of the quadratic part plus the mean of the linear part.
/// Both are extracted from the vector field alone.
pub fn bilinear_residual(x: &[f64], next: &[f64], p: &TopParams, h: f64) -> Vec<f64> {
    let add = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| a + b).collect::<Vec<_>>();
    let neg = |u: &[f64]| u.iter().map(|a| -a).collect::<Vec<_>>();
    let f = |u: &[f64]| field(u, p);
    let (fs, fx, fy) = (f(&add(x, next)), f(x), f(next));
    let (fnx, fny) = (f(&neg(x)), f(&neg(next)));
    (0..6)
        .map(|i| {
            let quad = 0.5 * (fs[i] - fx[i] - fy[i]);
            let lin = 0.25 * (fx[i] - fnx[i] + fy[i] - fny[i]);
            next[i] - x[i] - h * (quad + lin)
        })
        .collect()
}

pub fn hk_oracle(s: &BodyState, p: &TopParams, h: f64) -> BodyState {
    let x = s.to_array();
    to_state(&solve_affine(6, |next| bilinear_residual(&x, next, p, h)))
}

/// Torque-free HK step on ω only, three unknowns.
pub fn hk_euler_oracle(omega: Vec3, p: &TopParams, h: f64) -> Vec3 {
    let x = [omega.x, omega.y, omega.z, 0.0, 0.0, 0.0];
    let free = TopParams::euler(p.a, p.b, p.c);
    let w = solve_affine(3, |next| {
        let full = [next[0], next[1], next[2], 0.0, 0.0, 0.0];
        bilinear_residual(&x, &full, &free, h)[..3].to_vec()
    });
    Vec3::new(w[0], w[1], w[2])
}

fn v3(x: &[f64]) -> Vec3 {
    Vec3::new(x[0], x[1], x[2])
}

/// `x' − x = (h/2)(x' + x) × v` solved by probing.
pub fn cayley_oracle(x: Vec3, v: Vec3, h: f64) -> Vec3 {
    v3(&solve_affine(3, |n| {
        let next = v3(n);
        (next - x - (next + x).cross(v) * (0.5 * h)).to_array().to_vec()
    }))
}

/// Newton iteration with a finite-difference Jacobian on the symmetric Euler
/// relation, started from `m`.
pub fn symmetric_oracle(m: Vec3, p: &TopParams, h: f64) -> Vec3 {
    let w = |v: Vec3| Vec3::new(v.x / p.a, v.y / p.b, v.z / p.c);
    let r = |n: Vec3| n - m - (n + m).cross(w(n) + w(m)) * (0.25 * h);
    let mut x = m;
    for _ in 0..50 {
        let r0 = r(x);
        if r0.max_abs() < 1e-16 {
            break;
        }
        let eps = 1e-7;
        let mut jac = vec![vec![0.0; 3]; 3];
        for j in 0..3 {
            let mut e = [0.0; 3];
            e[j] = eps;
            let rj = r(x + Vec3::from_array(e));
            for i in 0..3 {
                jac[i][j] = (rj[i] - r0[i]) / eps;
            }
        }
        let dx = full_pivot_solve(&jac, &r0.to_array());
        x = x - v3(&dx);
    }
    x
}

/// Classical RK4 on the Euler–Poisson field with `n` substeps.
pub fn rk4_flow(s: &BodyState, p: &TopParams, t: f64, n: usize) -> BodyState {
    let dt = t / n as f64;
    let mut y = s.to_array().to_vec();
    let axpy = |y: &[f64], k: &[f64], c: f64| y.iter().zip(k).map(|(a, b)| a + c * b).collect::<Vec<_>>();
    for _ in 0..n {
        let k1 = field(&y, p);
        let k2 = field(&axpy(&y, &k1, dt / 2.0), p);
        let k3 = field(&axpy(&y, &k2, dt / 2.0), p);
        let k4 = field(&axpy(&y, &k3, dt), p);
        for i in 0..6 {
            y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    to_state(&y)
}

pub fn random_vec(rng: &mut StdRng, r: f64) -> Vec3 {
    Vec3::new(rng.gen_range(-r..r), rng.gen_range(-r..r), rng.gen_range(-r..r))
}

pub fn random_unit(rng: &mut StdRng) -> Vec3 {
    loop {
        let v = random_vec(rng, 1.0);
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v * (1.0 / n);
        }
    }
}

pub fn random_params(rng: &mut StdRng) -> TopParams {
    TopParams::new(
        rng.gen_range(0.5..3.0),
        rng.gen_range(0.5..3.0),
        rng.gen_range(0.5..3.0),
        random_vec(rng, 1.0),
    )
}
