use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::algebra::Vec3;
use crate::error::{Error, Result};
use crate::euler_lagrange::{LagrangeParams, DEFAULT_TOL};
use crate::kowalevski::{BranchRule, GammaMethod};
use crate::models::{BodyState, KowalevskiParams, TopParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    Euler,
    Lagrange,
    Kowalevski,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Hk,
    Bs,
    Symmetric,
    BohlinA,
    BohlinB,
    BohlinC,
    Hybrid,
    /// Classical fourth-order Runge–Kutta with 20 substeps per step.
    Reference,
}

macro_rules! names {
    ($ty:ident { $($variant:ident => $name:literal),* $(,)? }) => {
        impl $ty {
            pub const ALL: &'static [$ty] = &[$($ty::$variant),*];

            pub fn name(self) -> &'static str {
                match self { $($ty::$variant => $name),* }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }

        impl FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok($ty::$variant),)*
                    other => Err(Error::Config(format!(
                        concat!("unknown ", stringify!($ty), " `{}`"), other
                    ))),
                }
            }
        }
    };
}

names!(Model {
    Euler => "euler",
    Lagrange => "lagrange",
    Kowalevski => "kowalevski",
    General => "general",
});

names!(Scheme {
    Hk => "hk",
    Bs => "bs",
    Symmetric => "symmetric",
    BohlinA => "bohlin-a",
    BohlinB => "bohlin-b",
    BohlinC => "bohlin-c",
    Hybrid => "hybrid",
    Reference => "reference",
});

impl Scheme {
    pub fn gamma_method(self) -> Option<GammaMethod> {
        match self {
            Scheme::BohlinA => Some(GammaMethod::BsA),
            Scheme::BohlinB => Some(GammaMethod::StereoB),
            Scheme::BohlinC => Some(GammaMethod::RotationC),
            _ => None,
        }
    }
}

impl Model {
    pub fn supports(self, scheme: Scheme) -> bool {
        use Scheme::*;
        match self {
            Model::Euler => matches!(scheme, Hk | Bs | Symmetric | Reference),
            Model::General => matches!(scheme, Hk | Reference),
            Model::Kowalevski => matches!(scheme, Hk | BohlinA | BohlinB | BohlinC | Hybrid | Reference),
            Model::Lagrange => matches!(scheme, Bs | Reference),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Params {
    Top(TopParams),
    Kowalevski(KowalevskiParams),
    Lagrange(LagrangeParams),
}

/// A declarative description of one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: Model,
    pub scheme: Scheme,
    pub h: f64,
    pub steps: u64,
    pub stride: u64,
    pub params: Params,
    /// `(ω, γ)` for body-frame models, `(m, a)` for the Lagrange model.
    pub init: [f64; 6],
    pub branch_rule: BranchRule,
    /// Fixed-point tolerance of the symmetric Euler scheme.
    pub symmetric_tol: f64,
    /// Use `ωⁿ⁺¹` in the Euler BS step.
    pub bs_next_omega: bool,
    /// Refresh ω₃ from the re-solved γ in the hybrid scheme.
    pub refresh_omega3: bool,
    pub out_path: Option<PathBuf>,
}

pub const DEFAULT_STRIDE: u64 = 10;

impl RunConfig {
    fn base(model: Model, scheme: Scheme, h: f64, steps: u64, params: Params, init: [f64; 6]) -> Self {
        Self {
            model,
            scheme,
            h,
            steps,
            stride: 1,
            params,
            init,
            branch_rule: BranchRule::ArgSign,
            symmetric_tol: DEFAULT_TOL,
            bs_next_omega: false,
            refresh_omega3: false,
            out_path: None,
        }
    }

    /// Kowalevski run with `c₀` and the Yoshida initial point.
    pub fn kowalevski(scheme: Scheme, c0: f64, h: f64, steps: u64) -> Self {
        Self::base(
            Model::Kowalevski,
            scheme,
            h,
            steps,
            Params::Kowalevski(KowalevskiParams::new(c0)),
            BodyState::yoshida().to_array(),
        )
    }

    pub fn euler(scheme: Scheme, inertia: Vec3, omega: Vec3, gamma: Vec3, h: f64, steps: u64) -> Self {
        Self::base(
            Model::Euler,
            scheme,
            h,
            steps,
            Params::Top(TopParams::euler(inertia.x, inertia.y, inertia.z)),
            BodyState::new(omega, gamma).to_array(),
        )
    }

    pub fn general(scheme: Scheme, params: TopParams, init: BodyState, h: f64, steps: u64) -> Self {
        Self::base(Model::General, scheme, h, steps, Params::Top(params), init.to_array())
    }

    pub fn lagrange(scheme: Scheme, p: Vec3, m: Vec3, a: Vec3, h: f64, steps: u64) -> Self {
        Self::base(
            Model::Lagrange,
            scheme,
            h,
            steps,
            Params::Lagrange(LagrangeParams { p }),
            [m.x, m.y, m.z, a.x, a.y, a.z],
        )
    }

    pub fn with_stride(mut self, stride: u64) -> Self {
        self.stride = stride;
        self
    }

    pub fn with_branch_rule(mut self, rule: BranchRule) -> Self {
        self.branch_rule = rule;
        self
    }

    /// Body-frame parameters for the model, if it has any.
    pub fn top_params(&self) -> Option<TopParams> {
        match self.params {
            Params::Top(p) => Some(p),
            Params::Kowalevski(kp) => Some(kp.top()),
            Params::Lagrange(_) => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if !self.model.supports(self.scheme) {
            return fail(format!("scheme `{}` is not available for model `{}`", self.scheme, self.model));
        }
        if !(self.h.is_finite() && self.h > 0.0) {
            return fail(format!("step size must be positive, got {}", self.h));
        }
        if self.stride == 0 {
            return fail("stride must be at least 1".into());
        }
        if self.init.iter().any(|v| !v.is_finite()) {
            return fail("initial state must be finite".into());
        }
        if !(self.symmetric_tol > 0.0) {
            return fail("symmetric tolerance must be positive".into());
        }
        match (self.model, &self.params) {
            (Model::Euler, Params::Top(p)) => {
                if !p.is_valid() {
                    return fail("moments of inertia must be positive".into());
                }
                if p.g != Vec3::ZERO {
                    return fail("the Euler top has no gravity term".into());
                }
            }
            (Model::General, Params::Top(p)) => {
                if !p.is_valid() {
                    return fail("moments of inertia must be positive".into());
                }
            }
            (Model::Kowalevski, Params::Kowalevski(kp)) => {
                if !kp.c0.is_finite() {
                    return fail("c0 must be finite".into());
                }
            }
            (Model::Lagrange, Params::Lagrange(lp)) => {
                if !lp.p.is_finite() {
                    return fail("vertical vector must be finite".into());
                }
            }
            (model, _) => return fail(format!("parameters do not match model `{model}`")),
        }
        Ok(())
    }
}
