//! The surfaces `F(u,v) = A(v) γ(u)` and the constants behind them.
//!
//! The sign of `B = (tau² + 1) cos²θ - 1` selects one of three families:
//!
//! * `B = 0`: `γ(u) = (1, -tau u/(1+tau²), tau u/(1+tau²), 0)`, a straight
//!   line in R^4_2, swept by a family commuting with `J1`;
//! * `B > 0`: `γ` winds around a torus with frequencies `α1 > α2 > 0`, swept by
//!   a commuting family;
//! * `B < 0`: `γ` mixes trigonometric and hyperbolic terms, swept by an
//!   anticommuting family.
//!
//! The closed forms of the structure functions `λ`, `φ`, `a`, `b` are kept
//! here as cross-checks for the numerical pipeline in [`crate::diffgeo`].

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isofam::{required_sign, IsometryFamily};
use crate::pseudolin::{dot22, Vec4};
use crate::sl2geo::Tau;

/// `|B|` below this collapses to the `B = 0` case.
pub const B_ZERO_TOL: f64 = 1e-12;

const ANGLE_EDGE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    #[serde(rename = "b0")]
    Zero,
    #[serde(rename = "bpos")]
    Positive,
    #[serde(rename = "bneg")]
    Negative,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::Zero => "b0",
            Case::Positive => "bpos",
            Case::Negative => "bneg",
        })
    }
}

impl std::str::FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "b0" => Ok(Case::Zero),
            "bpos" => Ok(Case::Positive),
            "bneg" => Ok(Case::Negative),
            other => Err(Error::InvalidInput(format!(
                "unknown case `{other}`, expected b0, bpos or bneg"
            ))),
        }
    }
}

/// Constants of the `B > 0` profile curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositiveConstants {
    pub alpha1: f64,
    pub alpha2: f64,
    pub g11: f64,
    pub g33: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub tau: f64,
    pub theta: f64,
    pub cos_theta: f64,
    pub sin_theta: f64,
    /// The discriminant `B`.
    pub b: f64,
    pub a_tilde: f64,
    pub b_tilde: f64,
    pub case: Case,
    pub positive: Option<PositiveConstants>,
    /// `sqrt(-B) cos θ`, only for `B < 0`.
    pub beta: Option<f64>,
}

/// Constants for `τ` and `θ`.
pub fn case_params(tau: f64, theta: f64) -> Result<ModelParams> {
    if !(theta.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "theta must be finite, got {theta}"
        )));
    }
    if theta.abs() <= ANGLE_EDGE_TOL {
        return Err(Error::NonIntegrable);
    }
    if (theta - FRAC_PI_2).abs() <= ANGLE_EDGE_TOL {
        return Err(Error::HopfCylinder);
    }
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(Error::InvalidInput(format!(
            "theta must lie in (0, pi/2), got {theta}"
        )));
    }
    build(tau, theta, theta.cos(), theta.sin())
}

impl ModelParams {
    /// Constants for `τ` and `cos θ`.
    pub fn from_cos(tau: f64, cos_theta: f64) -> Result<Self> {
        if !cos_theta.is_finite() {
            return Err(Error::InvalidInput(format!(
                "cos(theta) must be finite, got {cos_theta}"
            )));
        }
        if (cos_theta - 1.0).abs() <= ANGLE_EDGE_TOL {
            return Err(Error::NonIntegrable);
        }
        if cos_theta.abs() <= ANGLE_EDGE_TOL {
            return Err(Error::HopfCylinder);
        }
        if !(cos_theta > 0.0 && cos_theta < 1.0) {
            return Err(Error::InvalidInput(format!(
                "cos(theta) must lie in (0, 1), got {cos_theta}"
            )));
        }
        let sin_theta = (1.0 - cos_theta * cos_theta).sqrt();
        build(tau, cos_theta.acos(), cos_theta, sin_theta)
    }

    /// The `B = 0` angle, `cos θ = 1/sqrt(1 + τ²)`.
    pub fn b_zero(tau: f64) -> Result<Self> {
        let r = (1.0 + tau * tau).sqrt();
        build(tau, (1.0 / r).acos(), 1.0 / r, tau / r)
    }

    /// `D = ã b̃² - 3ã²`.
    pub fn d_const(&self) -> f64 {
        self.a_tilde * self.b_tilde * self.b_tilde - 3.0 * self.a_tilde * self.a_tilde
    }

    /// `E = (b̃² - 2ã) D - ã³`.
    pub fn e_const(&self) -> f64 {
        (self.b_tilde * self.b_tilde - 2.0 * self.a_tilde) * self.d_const() - self.a_tilde.powi(3)
    }

    /// `I = ã (b̃ - τ⁻¹ sin²θ)`.
    pub fn i_const(&self) -> f64 {
        self.a_tilde * (self.b_tilde - self.sin_theta * self.sin_theta / self.tau)
    }

    /// The constant Gauss curvature `-4(1 + τ²) cos²θ`.
    pub fn gauss_curvature(&self) -> f64 {
        -4.0 * (1.0 + self.tau * self.tau) * self.cos_theta * self.cos_theta
    }

    pub fn metric(&self) -> Tau {
        Tau::new(self.tau).expect("tau validated at construction")
    }

    /// The slope `φ_u = -2 τ⁻¹ B` of the normal's azimuth.
    pub fn phi_slope(&self) -> f64 {
        -2.0 * self.b / self.tau
    }
}

fn build(tau: f64, theta: f64, cos_theta: f64, sin_theta: f64) -> Result<ModelParams> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tau must be positive, got {tau}"
        )));
    }
    let raw_b = (tau * tau + 1.0) * cos_theta * cos_theta - 1.0;
    let (case, b) = if raw_b.abs() < B_ZERO_TOL {
        (Case::Zero, 0.0)
    } else if raw_b > 0.0 {
        (Case::Positive, raw_b)
    } else {
        (Case::Negative, raw_b)
    };
    let s2 = sin_theta * sin_theta;
    let mut params = ModelParams {
        tau,
        theta,
        cos_theta,
        sin_theta,
        b,
        a_tilde: -s2 * b / (tau * tau),
        b_tilde: -2.0 * b / tau,
        case,
        positive: None,
        beta: None,
    };
    match case {
        Case::Zero => {}
        Case::Positive => {
            let rb = b.sqrt();
            params.positive = Some(PositiveConstants {
                alpha1: (tau * rb * cos_theta + b) / tau,
                alpha2: (tau * rb * cos_theta - b) / tau,
                g11: (rb - tau * cos_theta) / (2.0 * rb),
                g33: (rb + tau * cos_theta) / (2.0 * rb),
            });
        }
        Case::Negative => params.beta = Some((-b).sqrt() * cos_theta),
    }
    Ok(params)
}

/// `d^k/du^k cos(ωu)` (or `sin(ωu)` when `sine`).
fn trig_derivative(sine: bool, omega: f64, u: f64, k: usize) -> f64 {
    let shift = k as f64 * FRAC_PI_2;
    let arg = omega * u + shift;
    omega.powi(k as i32) * if sine { arg.sin() } else { arg.cos() }
}

/// `d^k/du^k cosh(ωu)` (or `sinh(ωu)` when `sinh`).
fn hyperbolic_derivative(sinh: bool, omega: f64, u: f64, k: usize) -> f64 {
    let odd = k % 2 == 1;
    let x = omega * u;
    omega.powi(k as i32) * if sinh != odd { x.sinh() } else { x.cosh() }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `d^n/du^n [trig(pu) · hyp(qu)]` by the Leibniz rule.
fn product_derivative(sine: bool, p: f64, sinh: bool, q: f64, u: f64, n: usize) -> f64 {
    (0..=n)
        .map(|k| {
            binomial(n, k)
                * trig_derivative(sine, p, u, k)
                * hyperbolic_derivative(sinh, q, u, n - k)
        })
        .sum()
}

/// The profile curve of a case, with closed-form derivatives up to order 4.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileCurve {
    pub params: ModelParams,
}

pub const MAX_PROFILE_ORDER: usize = 4;

impl ProfileCurve {
    pub fn new(params: ModelParams) -> Self {
        ProfileCurve { params }
    }

    /// The `order`-th derivative of `γ` at `u`.
    pub fn gamma(&self, u: f64, order: usize) -> Result<Vec4> {
        if order > MAX_PROFILE_ORDER {
            return Err(Error::InvalidInput(format!(
                "profile derivatives are available up to order {MAX_PROFILE_ORDER}, got {order}"
            )));
        }
        let p = &self.params;
        let out = match p.case {
            Case::Zero => {
                let k = p.tau / (1.0 + p.tau * p.tau);
                match order {
                    0 => Vec4::new(1.0, -k * u, k * u, 0.0),
                    1 => Vec4::new(0.0, -k, k, 0.0),
                    _ => Vec4::zeros(),
                }
            }
            Case::Positive => {
                let c = p.positive.expect("B > 0 constants");
                let (r33, r11) = (c.g33.sqrt(), (-c.g11).sqrt());
                Vec4::new(
                    r33 * trig_derivative(false, c.alpha2, u, order),
                    -r33 * trig_derivative(true, c.alpha2, u, order),
                    r11 * trig_derivative(false, c.alpha1, u, order),
                    r11 * trig_derivative(true, c.alpha1, u, order),
                )
            }
            Case::Negative => {
                let beta = p.beta.expect("B < 0 constant");
                let half = p.b_tilde / 2.0;
                let k = 2.0 * beta / p.b_tilde;
                let m = p.sin_theta / (-p.b).sqrt();
                let d =
                    |sine: bool, sinh: bool| product_derivative(sine, half, sinh, beta, u, order);
                Vec4::new(
                    d(false, false) - k * d(true, true),
                    d(true, false) + k * d(false, true),
                    m * d(false, true),
                    m * d(true, true),
                )
            }
        };
        Ok(out)
    }
}

/// The rectangle `[u_min, u_max] × [v_min, v_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub u: (f64, f64),
    pub v: (f64, f64),
}

impl Domain {
    pub fn contains(&self, u: f64, v: f64) -> bool {
        u >= self.u.0 && u <= self.u.1 && v >= self.v.0 && v <= self.v.1
    }

    pub fn check(&self, u: f64, v: f64) -> Result<()> {
        if !(u >= self.u.0 && u <= self.u.1) {
            return Err(Error::Domain {
                what: "u",
                value: u,
                min: self.u.0,
                max: self.u.1,
            });
        }
        if !(v >= self.v.0 && v <= self.v.1) {
            return Err(Error::Domain {
                what: "v",
                value: v,
                min: self.v.0,
                max: self.v.1,
            });
        }
        Ok(())
    }

    /// Checks that the square stencil of half-width `reach` around `(u, v)`
    /// stays inside the rectangle.
    pub fn check_stencil(&self, u: f64, v: f64, reach: f64) -> Result<()> {
        self.check(u - reach, v - reach)?;
        self.check(u + reach, v + reach)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HelixSurface {
    pub params: ModelParams,
    pub family: IsometryFamily,
    pub profile: ProfileCurve,
    pub domain: Domain,
}

impl HelixSurface {
    pub fn new(params: ModelParams, family: IsometryFamily, u_range: (f64, f64)) -> Result<Self> {
        if family.case != params.case {
            return Err(Error::CaseMismatch {
                family: family.case.to_string(),
                params: params.case.to_string(),
            });
        }
        if family.sign != required_sign(params.case) {
            return Err(Error::InvalidInput(format!(
                "case {} requires a {:?} family, got {:?}",
                params.case,
                required_sign(params.case),
                family.sign
            )));
        }
        Self::new_unchecked(params, family, u_range)
    }

    /// Skips the case and sign checks; used for negative controls.
    pub fn new_unchecked(
        params: ModelParams,
        family: IsometryFamily,
        u_range: (f64, f64),
    ) -> Result<Self> {
        if !(u_range.0 < u_range.1) {
            return Err(Error::InvalidInput(format!(
                "empty u range [{}, {}]",
                u_range.0, u_range.1
            )));
        }
        let domain = Domain {
            u: u_range,
            v: family.domain(),
        };
        Ok(HelixSurface {
            params,
            profile: ProfileCurve::new(params),
            family,
            domain,
        })
    }

    pub fn eval(&self, u: f64, v: f64) -> Result<Vec4> {
        surface_eval(self, u, v)
    }

    pub fn partials(&self, u: f64, v: f64, order_u: usize, order_v: usize) -> Result<Vec4> {
        surface_partials(self, u, v, order_u, order_v)
    }
}

/// `F(u, v) = A(v) γ(u)`.
pub fn surface_eval(s: &HelixSurface, u: f64, v: f64) -> Result<Vec4> {
    surface_partials(s, u, v, 0, 0)
}

/// `∂_u^{order_u} ∂_v^{order_v} F`, `order_u ≤ 4`, `order_v ≤ 1`.
pub fn surface_partials(
    s: &HelixSurface,
    u: f64,
    v: f64,
    order_u: usize,
    order_v: usize,
) -> Result<Vec4> {
    s.domain.check(u, v)?;
    let g = s.profile.gamma(u, order_u)?;
    let a = match order_v {
        0 => s.family.matrix(v)?,
        1 => s.family.derivative(v)?,
        _ => {
            return Err(Error::InvalidInput(format!(
                "v-derivatives are available up to order 1, got {order_v}"
            )))
        }
    };
    Ok(a * g)
}

/// Closed-form `λ(u)` with the free function `η(v)` frozen to `eta`.
pub fn lambda_closed(params: &ModelParams, u: f64, eta: f64) -> Result<f64> {
    let c = params.cos_theta;
    match params.case {
        Case::Zero => {
            let d = u * c + eta;
            if d.abs() < 1e-10 {
                return Err(Error::Singularity { u });
            }
            Ok(1.0 / d)
        }
        Case::Positive => {
            let rb = params.b.sqrt();
            let arg = eta - 2.0 * c * rb * u;
            let r = (arg - FRAC_PI_2).rem_euclid(std::f64::consts::PI);
            if r < 1e-6 || std::f64::consts::PI - r < 1e-6 {
                return Err(Error::Singularity { u });
            }
            Ok(2.0 * rb * arg.tan())
        }
        Case::Negative => {
            let rb = (-params.b).sqrt();
            Ok(2.0 * rb * (eta + 2.0 * c * rb * u).tanh())
        }
    }
}

/// `∂λ/∂u` of [`lambda_closed`].
pub fn lambda_closed_derivative(params: &ModelParams, u: f64, eta: f64) -> Result<f64> {
    let c = params.cos_theta;
    let l = lambda_closed(params, u, eta)?;
    Ok(match params.case {
        Case::Zero => -c * l * l,
        Case::Positive => {
            let rb = params.b.sqrt();
            let t = l / (2.0 * rb);
            -4.0 * c * params.b * (1.0 + t * t)
        }
        Case::Negative => {
            let rb = (-params.b).sqrt();
            let t = l / (2.0 * rb);
            -4.0 * c * params.b * (1.0 - t * t)
        }
    })
}

/// `φ(u) = -2 τ⁻¹ B u + c`; for `B = 0` only the constant survives.
pub fn phi_closed(params: &ModelParams, u: f64, c: f64) -> f64 {
    params.phi_slope() * u + c
}

/// Closed-form `(a, b)` with `η(v)` frozen to `eta`.
pub fn ab_closed(params: &ModelParams, u: f64, eta: f64) -> (f64, f64) {
    let (c, tau) = (params.cos_theta, params.tau);
    match params.case {
        Case::Zero => (-tau * u * c * (u * c + 2.0 * eta), u * c + eta),
        Case::Positive => {
            let rb = params.b.sqrt();
            let arg = eta - 2.0 * c * rb * u;
            (tau / rb * arg.sin(), arg.cos())
        }
        Case::Negative => {
            let rb = (-params.b).sqrt();
            let arg = eta + 2.0 * c * rb * u;
            (-tau / rb * arg.sinh(), arg.cosh())
        }
    }
}

/// `u`-derivatives `(a_u, b_u)` of [`ab_closed`].
pub fn ab_closed_derivative(params: &ModelParams, u: f64, eta: f64) -> (f64, f64) {
    let (c, tau) = (params.cos_theta, params.tau);
    match params.case {
        Case::Zero => (-2.0 * tau * c * (u * c + eta), c),
        Case::Positive => {
            let rb = params.b.sqrt();
            let arg = eta - 2.0 * c * rb * u;
            (-2.0 * tau * c * arg.cos(), 2.0 * c * rb * arg.sin())
        }
        Case::Negative => {
            let rb = (-params.b).sqrt();
            let arg = eta + 2.0 * c * rb * u;
            (-2.0 * tau * c * arg.cosh(), 2.0 * c * rb * arg.sinh())
        }
    }
}

/// `|<γ(u), γ(u)> - 1|`.
pub fn profile_norm_defect(profile: &ProfileCurve, u: f64) -> Result<f64> {
    let g = profile.gamma(u, 0)?;
    Ok((dot22(&g, &g) - 1.0).abs())
}
