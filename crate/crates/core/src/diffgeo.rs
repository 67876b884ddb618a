//! Extrinsic geometry of a parametrized surface in `SL(2,R)_tau`, computed
//! numerically from the analytic partials of `F`.
//!
//! Derivatives of sampled quantities (the normal, the tangent frame, the
//! first fundamental form) use 5-point central stencils of step `h`.

use nalgebra::{Matrix2, SVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::helix::HelixSurface;
use crate::pseudolin::{lower, nullspace3, Vec4};
use crate::sl2geo::{
    covariant_derivative, frame, frame_components_unchecked, g_tau, g_tau_row, FrameVec, Sl2Point,
    Tau,
};

/// Default stencil step for the shape operator and curvature.
pub const DEFAULT_STEP: f64 = 1e-3;

/// `g_tau(n, n)` at or below this cannot be normalized.
pub const NULL_NORMAL_TOL: f64 = 1e-14;

/// `sin θ̂` below this makes `φ` undefined.
pub const ANGLE_DEGENERATE_TOL: f64 = 1e-6;

/// `|b|` below this makes `∂v` useless as a second direction.
pub const DECOMPOSITION_TOL: f64 = 1e-8;

/// Everything first-order known at one surface point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePointData {
    pub p: Sl2Point,
    pub fu: Vec4,
    pub fv: Vec4,
    pub n: Vec4,
    pub cos_theta: f64,
    pub sin_theta: f64,
    pub phi: f64,
    pub t: Vec4,
    pub jt: Vec4,
}

/// `g_tau`-unit normal from three linear conditions, oriented so that
/// `g_tau(E1, N) ≥ 0`.
pub fn unit_normal(p: &Sl2Point, fu: &Vec4, fv: &Vec4, tau: Tau) -> Result<Vec4> {
    unit_normal_from_rows(
        p,
        [
            lower(p.coords()),
            g_tau_row(p, fu, tau),
            g_tau_row(p, fv, tau),
        ],
        tau,
    )
}

fn unit_normal_from_rows(p: &Sl2Point, rows: [Vec4; 3], tau: Tau) -> Result<Vec4> {
    let n = nullspace3(&rows[0], &rows[1], &rows[2])?;
    let norm = g_tau(p, &n, &n, tau);
    if !(norm > NULL_NORMAL_TOL) {
        return Err(Error::NullNormal { norm });
    }
    let n = n / norm.sqrt();
    let e1 = frame(p, tau).e1;
    Ok(if g_tau(p, &e1, &n, tau) < 0.0 { -n } else { n })
}

/// Builds the point data from `F`, `F_u`, `F_v`.
pub fn point_data(p: Sl2Point, fu: Vec4, fv: Vec4, tau: Tau) -> Result<SurfacePointData> {
    let n = unit_normal(&p, &fu, &fv, tau)?;
    let c = frame_components_unchecked(&p, tau, &n);
    let sin_theta = c[1].hypot(c[2]);
    if sin_theta < ANGLE_DEGENERATE_TOL {
        return Err(Error::AngleDegenerate { sin_theta });
    }
    let phi = c[2].atan2(c[1]);
    let f = frame(&p, tau);
    let t = f.e1 - n * c[0];
    let jt = (f.e2 * phi.sin() - f.e3 * phi.cos()) * sin_theta;
    Ok(SurfacePointData {
        p,
        fu,
        fv,
        n,
        cos_theta: c[0],
        sin_theta,
        phi,
        t,
        jt,
    })
}

/// Point data of the surface at `(u, v)`.
pub fn surface_point(s: &HelixSurface, u: f64, v: f64) -> Result<SurfacePointData> {
    let p = Sl2Point::new(s.eval(u, v)?)?;
    point_data(
        p,
        s.partials(u, v, 1, 0)?,
        s.partials(u, v, 0, 1)?,
        s.params.metric(),
    )
}

/// `g_tau(E1, N)`, which is `cos θ` on a helix surface.
pub fn measured_angle(data: &SurfacePointData, tau: Tau) -> f64 {
    g_tau(&data.p, &frame(&data.p, tau).e1, &data.n, tau)
}

/// The azimuth `φ̂ = atan2(n3, n2)` of the normal in the `{E2, E3}` plane.
pub fn extract_phi(data: &SurfacePointData) -> Result<f64> {
    if data.sin_theta < ANGLE_DEGENERATE_TOL {
        return Err(Error::AngleDegenerate {
            sin_theta: data.sin_theta,
        });
    }
    Ok(data.phi)
}

/// `(T, JT)` with `T = E1 - cos θ̂ N` and `JT = sin θ̂ (sin φ̂ E2 - cos φ̂ E3)`.
pub fn tangent_frame(data: &SurfacePointData) -> (Vec4, Vec4) {
    (data.t, data.jt)
}

/// `(a, b)` with `F_v = a T + b JT`.
pub fn decompose_fv(data: &SurfacePointData, tau: Tau) -> (f64, f64) {
    let s2 = data.sin_theta * data.sin_theta;
    (
        g_tau(&data.p, &data.fv, &data.t, tau) / s2,
        g_tau(&data.p, &data.fv, &data.jt, tau) / s2,
    )
}

/// `‖a T + b JT - F_v‖_max`.
pub fn decomposition_residual(data: &SurfacePointData, tau: Tau) -> f64 {
    let (a, b) = decompose_fv(data, tau);
    (data.t * a + data.jt * b - data.fv).amax()
}

fn d1<const D: usize>(
    f: impl Fn(f64) -> Result<SVector<f64, D>>,
    x: f64,
    h: f64,
) -> Result<SVector<f64, D>> {
    Ok((f(x - 2.0 * h)? - f(x - h)? * 8.0 + f(x + h)? * 8.0 - f(x + 2.0 * h)?) / (12.0 * h))
}

fn d2<const D: usize>(
    f: impl Fn(f64) -> Result<SVector<f64, D>>,
    x: f64,
    h: f64,
) -> Result<SVector<f64, D>> {
    Ok(
        (-f(x - 2.0 * h)? + f(x - h)? * 16.0 - f(x)? * 30.0 + f(x + h)? * 16.0 - f(x + 2.0 * h)?)
            / (12.0 * h * h),
    )
}

fn scalar(x: f64) -> SVector<f64, 1> {
    SVector::<f64, 1>::new(x)
}

/// Directional derivatives along `T` and `JT` of a sampled vector field,
/// using `∂u = T` and `∂v = a T + b JT`.
struct Directions {
    center: SurfacePointData,
    a: f64,
    b: f64,
}

impl Directions {
    fn new(s: &HelixSurface, u: f64, v: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::InvalidInput(format!(
                "stencil step must be positive, got {h}"
            )));
        }
        s.domain.check_stencil(u, v, 2.0 * h)?;
        let center = surface_point(s, u, v)?;
        let (a, b) = decompose_fv(&center, s.params.metric());
        if b.abs() < DECOMPOSITION_TOL {
            return Err(Error::DegenerateDecomposition { b });
        }
        Ok(Directions { center, a, b })
    }

    fn along<const D: usize>(
        &self,
        f: impl Fn(f64, f64) -> Result<SVector<f64, D>>,
        u: f64,
        v: f64,
        h: f64,
    ) -> Result<(SVector<f64, D>, SVector<f64, D>)> {
        let du = d1(|x| f(x, v), u, h)?;
        let dv = d1(|y| f(u, y), v, h)?;
        Ok((du, (dv - du * self.a) / self.b))
    }
}

/// The shape operator `A = -∇_X N` in the basis `{T, JT}`, normalized by
/// `sin²θ̂`. On a helix surface this is `[[0, -tau], [-tau, λ]]`.
pub fn shape_operator(s: &HelixSurface, u: f64, v: f64, h: f64) -> Result<Matrix2<f64>> {
    let tau = s.params.metric();
    let dirs = Directions::new(s, u, v, h)?;
    let c = &dirs.center;
    let normal_components = |x: f64, y: f64| -> Result<FrameVec> {
        let d = surface_point(s, x, y)?;
        Ok(frame_components_unchecked(&d.p, tau, &d.n))
    };
    let (dn_t, dn_jt) = dirs.along(normal_components, u, v, h)?;
    let n0 = frame_components_unchecked(&c.p, tau, &c.n);
    let tc = frame_components_unchecked(&c.p, tau, &c.t);
    let jc = frame_components_unchecked(&c.p, tau, &c.jt);
    let a_t = -covariant_derivative(tau, &tc, &dn_t, &n0);
    let a_jt = -covariant_derivative(tau, &jc, &dn_jt, &n0);
    let s2 = c.sin_theta * c.sin_theta;
    Ok(Matrix2::new(a_t.dot(&tc), a_jt.dot(&tc), a_t.dot(&jc), a_jt.dot(&jc)) / s2)
}

/// The free entry `λ̂` of the shape operator.
pub fn extract_lambda(shape: &Matrix2<f64>) -> f64 {
    shape[(1, 1)]
}

/// `max` entrywise distance of the shape operator from `[[0,-tau],[-tau,λ̂]]`.
pub fn shape_form_residual(shape: &Matrix2<f64>, tau: f64) -> f64 {
    let expected = Matrix2::new(0.0, -tau, -tau, extract_lambda(shape));
    (shape - expected).amax()
}

/// Tangential parts of `∇_T T` and `∇_{JT} JT`, as coefficients on `(T, JT)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InducedConnection {
    pub nabla_t_t: (f64, f64),
    pub nabla_jt_jt: (f64, f64),
}

impl InducedConnection {
    /// Distance from `∇_T T = -2 tau cos θ JT` and `∇_{JT} JT = -λ cos θ T`.
    pub fn residual(&self, tau: f64, cos_theta: f64, lambda: f64) -> f64 {
        [
            self.nabla_t_t.0.abs(),
            (self.nabla_t_t.1 + 2.0 * tau * cos_theta).abs(),
            (self.nabla_jt_jt.0 + lambda * cos_theta).abs(),
            self.nabla_jt_jt.1.abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn induced_connection(s: &HelixSurface, u: f64, v: f64, h: f64) -> Result<InducedConnection> {
    let tau = s.params.metric();
    let dirs = Directions::new(s, u, v, h)?;
    let c = &dirs.center;
    let t_components = |x: f64, y: f64| -> Result<FrameVec> {
        let d = surface_point(s, x, y)?;
        Ok(frame_components_unchecked(&d.p, tau, &d.t))
    };
    let jt_components = |x: f64, y: f64| -> Result<FrameVec> {
        let d = surface_point(s, x, y)?;
        Ok(frame_components_unchecked(&d.p, tau, &d.jt))
    };
    let tc = frame_components_unchecked(&c.p, tau, &c.t);
    let jc = frame_components_unchecked(&c.p, tau, &c.jt);
    let (dt_t, _) = dirs.along(t_components, u, v, h)?;
    let (_, djt_jt) = dirs.along(jt_components, u, v, h)?;
    let tt = covariant_derivative(tau, &tc, &dt_t, &tc);
    let jj = covariant_derivative(tau, &jc, &djt_jt, &jc);
    let s2 = c.sin_theta * c.sin_theta;
    Ok(InducedConnection {
        nabla_t_t: (tt.dot(&tc) / s2, tt.dot(&jc) / s2),
        nabla_jt_jt: (jj.dot(&tc) / s2, jj.dot(&jc) / s2),
    })
}

/// Coefficients `(E, F, G)` of the first fundamental form at `(u, v)`.
pub fn first_fundamental_form(s: &HelixSurface, u: f64, v: f64) -> Result<(f64, f64, f64)> {
    let tau = s.params.metric();
    let p = Sl2Point::new(s.eval(u, v)?)?;
    let fu = s.partials(u, v, 1, 0)?;
    let fv = s.partials(u, v, 0, 1)?;
    Ok((
        g_tau(&p, &fu, &fu, tau),
        g_tau(&p, &fu, &fv, tau),
        g_tau(&p, &fv, &fv, tau),
    ))
}

/// Gauss curvature from the first fundamental form alone (Brioschi).
pub fn gauss_curvature(s: &HelixSurface, u: f64, v: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidInput(format!(
            "stencil step must be positive, got {h}"
        )));
    }
    s.domain.check_stencil(u, v, 2.0 * h)?;
    let fff = |x: f64, y: f64| -> Result<SVector<f64, 3>> {
        let (e, f, g) = first_fundamental_form(s, x, y)?;
        Ok(SVector::<f64, 3>::new(e, f, g))
    };
    let m = fff(u, v)?;
    let (e, f, g) = (m[0], m[1], m[2]);
    let du = d1(|x| fff(x, v), u, h)?;
    let dv = d1(|y| fff(u, y), v, h)?;
    let (e_u, f_u, g_u) = (du[0], du[1], du[2]);
    let (e_v, f_v, g_v) = (dv[0], dv[1], dv[2]);
    let e_vv = d2(|y| Ok(scalar(fff(u, y)?[0])), v, h)?[0];
    let g_uu = d2(|x| Ok(scalar(fff(x, v)?[2])), u, h)?[0];
    let f_uv = d1(|y| d1(|x| Ok(scalar(fff(x, y)?[1])), u, h), v, h)?[0];

    let m1 = nalgebra::Matrix3::new(
        -0.5 * e_vv + f_uv - 0.5 * g_uu,
        0.5 * e_u,
        f_u - 0.5 * e_v,
        f_v - 0.5 * g_u,
        e,
        f,
        0.5 * g_v,
        f,
        g,
    );
    let m2 = nalgebra::Matrix3::new(0.0, 0.5 * e_v, 0.5 * g_u, 0.5 * e_v, e, f, 0.5 * g_u, f, g);
    let w = e * g - f * f;
    Ok((m1.determinant() - m2.determinant()) / (w * w))
}

/// `φ̂` near `φ0`, shifted by multiples of `2π`.
fn unwrap_near(phi: f64, phi0: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    phi - tau * ((phi - phi0) / tau).round()
}

/// `∂φ̂/∂u` by a 5-point stencil.
pub fn phi_u(s: &HelixSurface, u: f64, v: f64, h: f64) -> Result<f64> {
    s.domain.check_stencil(u, v, 2.0 * h)?;
    let phi0 = extract_phi(&surface_point(s, u, v)?)?;
    let sample = |x: f64| -> Result<SVector<f64, 1>> {
        Ok(scalar(unwrap_near(
            extract_phi(&surface_point(s, x, v)?)?,
            phi0,
        )))
    };
    Ok(d1(sample, u, h)?[0])
}

/// Residuals of the structure-function ODEs at one point, each computed by
/// finite differences in `u` of numerically extracted quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StructureResiduals {
    pub lambda: f64,
    /// `λ̂_u + cos θ λ̂² + 4 B cos θ`.
    pub riccati: f64,
    /// `a_u + 2 tau b cos θ`.
    pub a_u: f64,
    /// `b_u - b λ̂ cos θ`.
    pub b_u: f64,
    /// `φ̂_u + 2 tau⁻¹ B`.
    pub phi_u: f64,
}

/// `λ̂`, `a`, `b` and `φ̂` are differentiated in `u` with an outer stencil of
/// step `h`; `λ̂` itself uses an inner stencil of the same step.
pub fn structure_residuals(s: &HelixSurface, u: f64, v: f64, h: f64) -> Result<StructureResiduals> {
    s.domain.check_stencil(u, v, 4.0 * h)?;
    let tau = s.params.metric();
    let c = s.params.cos_theta;
    let b_const = s.params.b;
    let lambda_at = |x: f64| -> Result<SVector<f64, 1>> {
        Ok(scalar(extract_lambda(&shape_operator(s, x, v, h)?)))
    };
    let ab_at = |x: f64| -> Result<SVector<f64, 2>> {
        let (a, b) = decompose_fv(&surface_point(s, x, v)?, tau);
        Ok(SVector::<f64, 2>::new(a, b))
    };
    let lambda = lambda_at(u)?[0];
    let lambda_u = d1(lambda_at, u, h)?[0];
    let ab = ab_at(u)?;
    let ab_u = d1(ab_at, u, h)?;
    Ok(StructureResiduals {
        lambda,
        riccati: lambda_u + c * lambda * lambda + 4.0 * b_const * c,
        a_u: ab_u[0] + 2.0 * s.params.tau * ab[1] * c,
        b_u: ab_u[1] - ab[1] * lambda * c,
        phi_u: phi_u(s, u, v, h)? - s.params.phi_slope(),
    })
}
