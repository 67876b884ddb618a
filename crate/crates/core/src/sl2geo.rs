//! Ambient geometry of `SL(2,R)` as the unit pseudo-sphere of R^4_2.
//!
//! With the identification `(z, w) = (x1 + i x2, x3 + i x4)` the vector fields
//! `X1 = (iz, iw)`, `X2 = (i w̄, i z̄)`, `X3 = (w̄, z̄)` are exactly
//! `J1 p`, `J2 p`, `J3 p`. The metric `g_tau` makes `E1 = -X1/tau`, `E2 = X2`,
//! `E3 = X3` orthonormal; `E1` is the unit Hopf (Killing) field.

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::pseudolin::{dot22, j1, j2, j3, Vec4};

/// Components of a tangent vector in the frame `E1, E2, E3`.
pub type FrameVec = Vector3<f64>;

/// Membership tolerance for `<p,p> = 1`.
pub const MANIFOLD_TOL: f64 = 1e-10;

/// Default tangency tolerance, relative to `|p|`.
pub const TANGENCY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sl2Point(Vec4);

impl Sl2Point {
    pub fn new(p: Vec4) -> Result<Self> {
        let norm = dot22(&p, &p);
        if !norm.is_finite() || (norm - 1.0).abs() > MANIFOLD_TOL {
            return Err(Error::OffManifold { norm });
        }
        Ok(Sl2Point(p))
    }

    pub fn identity() -> Self {
        Sl2Point(Vec4::new(1.0, 0.0, 0.0, 0.0))
    }

    pub fn coords(&self) -> &Vec4 {
        &self.0
    }

    /// Hopf field `X1 = J1 p`.
    pub fn hopf_field(&self) -> Vec4 {
        j1(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Tau(f64);

impl Tau {
    pub fn new(tau: f64) -> Result<Self> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::InvalidInput(format!(
                "tau must be positive, got {tau}"
            )));
        }
        Ok(Tau(tau))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

/// Values of the orthonormal frame at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub e1: Vec4,
    pub e2: Vec4,
    pub e3: Vec4,
}

impl Frame {
    pub fn vectors(&self) -> [Vec4; 3] {
        [self.e1, self.e2, self.e3]
    }

    /// `Σ xᵢ Eᵢ`.
    pub fn combine(&self, x: &FrameVec) -> Vec4 {
        self.e1 * x[0] + self.e2 * x[1] + self.e3 * x[2]
    }
}

pub fn frame(p: &Sl2Point, tau: Tau) -> Frame {
    let q = p.coords();
    Frame {
        e1: -j1(q) / tau.get(),
        e2: j2(q),
        e3: j3(q),
    }
}

/// `g_tau(X, Y) = -<X,Y> + (1 + tau^2) <X, J1 p> <Y, J1 p>`.
pub fn g_tau(p: &Sl2Point, x: &Vec4, y: &Vec4, tau: Tau) -> f64 {
    let h = p.hopf_field();
    let t = tau.get();
    -dot22(x, y) + (1.0 + t * t) * dot22(x, &h) * dot22(y, &h)
}

/// The covector `Y ↦ g_tau(X, Y)` written as a Euclidean row vector.
pub fn g_tau_row(p: &Sl2Point, x: &Vec4, tau: Tau) -> Vec4 {
    let h = p.hopf_field();
    let t = tau.get();
    let w = -x + h * ((1.0 + t * t) * dot22(x, &h));
    Vec4::new(w[0], w[1], -w[2], -w[3])
}

/// Hopf projection onto `H²(-4) ⊂ R³₁`: `½(2 z w̄, |z|² + |w|²)`.
pub fn hopf_project(p: &Sl2Point) -> [f64; 3] {
    let q = p.coords();
    let (zr, zi, wr, wi) = (q[0], q[1], q[2], q[3]);
    // z w̄ = (zr + i zi)(wr - i wi)
    let re = zr * wr + zi * wi;
    let im = zi * wr - zr * wi;
    let height = 0.5 * (zr * zr + zi * zi + wr * wr + wi * wi);
    [re, im, height]
}

/// Minkowski norm `x² + y² - z²` on R³₁.
pub fn minkowski_norm(x: &[f64; 3]) -> f64 {
    x[0] * x[0] + x[1] * x[1] - x[2] * x[2]
}

/// Rotation along the Hopf fiber, `exp(t J1) p`.
pub fn fiber_rotate(p: &Sl2Point, t: f64) -> Sl2Point {
    let q = p.coords();
    Sl2Point(q * t.cos() + j1(q) * t.sin())
}

/// Levi-Civita connection of `g_tau` in the frame: `table[i][j]` holds the
/// components of `∇_{E_i} E_j`.
pub fn connection_table(tau: Tau) -> [[FrameVec; 3]; 3] {
    let t = tau.get();
    let k = (2.0 + t * t) / t;
    let z = FrameVec::zeros();
    [
        [z, FrameVec::new(0.0, 0.0, -k), FrameVec::new(0.0, k, 0.0)],
        [FrameVec::new(0.0, 0.0, -t), z, FrameVec::new(t, 0.0, 0.0)],
        [FrameVec::new(0.0, t, 0.0), FrameVec::new(-t, 0.0, 0.0), z],
    ]
}

/// `∇_X Y` in frame components, where `dy` holds the derivatives `X(yᵢ)` of
/// the components of `Y` along `X`.
pub fn covariant_derivative(tau: Tau, x: &FrameVec, dy: &FrameVec, y: &FrameVec) -> FrameVec {
    let table = connection_table(tau);
    let mut out = *dy;
    for i in 0..3 {
        for j in 0..3 {
            out += table[i][j] * (x[i] * y[j]);
        }
    }
    out
}

/// `(g_tau(X,E1), g_tau(X,E2), g_tau(X,E3))` for `X` tangent at `p`.
pub fn frame_components(p: &Sl2Point, tau: Tau, x: &Vec4) -> Result<FrameVec> {
    frame_components_tol(p, tau, x, TANGENCY_TOL)
}

pub fn frame_components_tol(p: &Sl2Point, tau: Tau, x: &Vec4, tol: f64) -> Result<FrameVec> {
    let q = p.coords();
    let d = dot22(x, q);
    if d.abs() > tol * q.norm() * x.norm().max(1.0) {
        return Err(Error::NotTangent { dot: d });
    }
    Ok(frame_components_unchecked(p, tau, x))
}

pub(crate) fn frame_components_unchecked(p: &Sl2Point, tau: Tau, x: &Vec4) -> FrameVec {
    let f = frame(p, tau);
    FrameVec::new(
        g_tau(p, x, &f.e1, tau),
        g_tau(p, x, &f.e2, tau),
        g_tau(p, x, &f.e3, tau),
    )
}
