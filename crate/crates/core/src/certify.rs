//! Certification of a helix surface: residuals of every identity on a grid,
//! an independent ODE oracle for the position vector, and a JSON report.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diffgeo::{
    decomposition_residual, extract_lambda, gauss_curvature, induced_connection, measured_angle,
    shape_form_residual, shape_operator, structure_residuals, surface_point, DEFAULT_STEP,
};
use crate::error::{Error, Result};
use crate::helix::{Case, HelixSurface};
use crate::isofam::{admissibility_residual, required_sign};
use crate::pseudolin::{commutation_defects, dot22, j1, j2, j3, orthogonality_defect, Vec4};
use crate::sl2geo::{frame, g_tau, Sl2Point};

/// Steps per unit of `u` used by the report's oracle run.
pub const ORACLE_STEPS_PER_UNIT: f64 = 1e4;

/// The converse residuals `(r1, r2, r3)`:
/// `g(F_u,F_u) - sin²θ`, `g(E1,F_u) - sin²θ`, `g(F_v,E1) - g(F_u,F_v)`.
pub fn viceversa_residuals(s: &HelixSurface, u: f64, v: f64) -> Result<[f64; 3]> {
    let tau = s.params.metric();
    let p = Sl2Point::new(s.eval(u, v)?)?;
    let fu = s.partials(u, v, 1, 0)?;
    let fv = s.partials(u, v, 0, 1)?;
    let e1 = frame(&p, tau).e1;
    let s2 = s.params.sin_theta * s.params.sin_theta;
    Ok([
        g_tau(&p, &fu, &fu, tau) - s2,
        g_tau(&p, &e1, &fu, tau) - s2,
        g_tau(&p, &fv, &e1, tau) - g_tau(&p, &fu, &fv, tau),
    ])
}

/// `‖F_uuuu + (b̃² - 2ã) F_uu + ã² F‖_max` for `B ≠ 0`, `‖F_uu‖_max` for `B = 0`.
pub fn fourth_order_residual(s: &HelixSurface, u: f64, v: f64) -> Result<f64> {
    match s.params.case {
        Case::Zero => Ok(s.partials(u, v, 2, 0)?.amax()),
        _ => fourth_order_residual_with(s, u, v, s.params.a_tilde, s.params.b_tilde),
    }
}

/// The `B ≠ 0` residual with caller-supplied constants.
pub fn fourth_order_residual_with(
    s: &HelixSurface,
    u: f64,
    v: f64,
    a_tilde: f64,
    b_tilde: f64,
) -> Result<f64> {
    let f = s.partials(u, v, 0, 0)?;
    let fuu = s.partials(u, v, 2, 0)?;
    let fuuuu = s.partials(u, v, 4, 0)?;
    Ok((fuuuu + fuu * (b_tilde * b_tilde - 2.0 * a_tilde) + f * (a_tilde * a_tilde)).amax())
}

/// Names of the product relations, in report order.
pub const PRODUCT_RELATIONS: [&str; 16] = [
    "f_f",
    "fu_fu",
    "f_fu",
    "fu_fuu",
    "fuu_fuu",
    "f_fuu",
    "fu_fuuu",
    "fuu_fuuu",
    "f_fuuu",
    "fuuu_fuuu",
    "j1f_fu",
    "j1f_fuu",
    "fu_j1fuu",
    "j1fu_fuuu",
    "j1fu_fuu_plus_j1f_fuuu",
    "j1fuu_fuuu_plus_j1fu_fuuuu",
];

/// Signed residuals of the sixteen inner-product relations satisfied by `F`
/// and its `u`-derivatives, in the order of [`PRODUCT_RELATIONS`]. `None`
/// when `B = 0`, where the relations do not apply.
pub fn product_relations_residuals(s: &HelixSurface, u: f64, v: f64) -> Result<Option<[f64; 16]>> {
    let p = &s.params;
    if p.case == Case::Zero {
        return Ok(None);
    }
    let d = |k| s.partials(u, v, k, 0);
    let (f, f1, f2, f3, f4) = (d(0)?, d(1)?, d(2)?, d(3)?, d(4)?);
    let (a, dd, e, i) = (p.a_tilde, p.d_const(), p.e_const(), p.i_const());
    let ip = |x: &Vec4, y: &Vec4| dot22(x, y);
    Ok(Some([
        ip(&f, &f) - 1.0,
        ip(&f1, &f1) - a,
        ip(&f, &f1),
        ip(&f1, &f2),
        ip(&f2, &f2) - dd,
        ip(&f, &f2) + a,
        ip(&f1, &f3) + dd,
        ip(&f2, &f3),
        ip(&f, &f3),
        ip(&f3, &f3) - e,
        ip(&j1(&f), &f1) + p.sin_theta * p.sin_theta / p.tau,
        ip(&j1(&f), &f2),
        ip(&f1, &j1(&f2)) - i,
        ip(&j1(&f1), &f3),
        ip(&j1(&f1), &f2) + ip(&j1(&f), &f3),
        ip(&j1(&f2), &f3) + ip(&j1(&f1), &f4),
    ]))
}

/// `F_u = sinθ [sinθ (-J1 F / tau) - cosθ cos φ J2 F - cosθ sin φ J3 F]`.
fn oracle_rhs(tau: f64, sin_theta: f64, cos_theta: f64, phi: f64, f: &Vec4) -> Vec4 {
    let (sp, cp) = phi.sin_cos();
    (-j1(f) * (sin_theta / tau) - j2(f) * (cos_theta * cp) - j3(f) * (cos_theta * sp)) * sin_theta
}

/// RK4 integration of the first-order system for `F(·, v)` over `u_range`,
/// started from the closed form at `u_range.0`, with `φ(u) = slope (u - u0) + c`
/// and `c` read off the normal at the start. Returns the max-norm deviation
/// from the closed form over the step nodes.
pub fn ode_oracle_integrate(
    s: &HelixSurface,
    v: f64,
    u_range: (f64, f64),
    steps: usize,
) -> Result<f64> {
    ode_oracle_with_slope(s, v, u_range, steps, s.params.phi_slope())
}

/// [`ode_oracle_integrate`] with a caller-supplied `φ` slope.
pub fn ode_oracle_with_slope(
    s: &HelixSurface,
    v: f64,
    u_range: (f64, f64),
    steps: usize,
    slope: f64,
) -> Result<f64> {
    if steps < 100 {
        return Err(Error::InvalidInput(format!(
            "the oracle needs at least 100 steps, got {steps}"
        )));
    }
    let (u0, u1) = u_range;
    if !(u0 < u1) {
        return Err(Error::InvalidInput(format!(
            "empty oracle range [{u0}, {u1}]"
        )));
    }
    s.domain.check(u0, v)?;
    s.domain.check(u1, v)?;
    let c = surface_point(s, u0, v)?.phi;
    let p = &s.params;
    let rhs =
        |u: f64, f: &Vec4| oracle_rhs(p.tau, p.sin_theta, p.cos_theta, slope * (u - u0) + c, f);
    let h = (u1 - u0) / steps as f64;
    let mut f = s.eval(u0, v)?;
    let mut worst = 0.0_f64;
    for k in 0..steps {
        let u = u0 + h * k as f64;
        let k1 = rhs(u, &f);
        let k2 = rhs(u + 0.5 * h, &(f + k1 * (0.5 * h)));
        let k3 = rhs(u + 0.5 * h, &(f + k2 * (0.5 * h)));
        let k4 = rhs(u + h, &(f + k3 * h));
        f += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        let exact = s.eval(
            if k + 1 == steps {
                u1
            } else {
                u0 + h * (k + 1) as f64
            },
            v,
        )?;
        worst = worst.max((f - exact).amax());
    }
    Ok(worst)
}

/// Tolerances of every check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub family: f64,
    pub analytic: f64,
    pub fourth_order: f64,
    pub fourth_order_b0: f64,
    pub angle: f64,
    pub frame: f64,
    pub decomposition: f64,
    pub phi_slope: f64,
    pub shape: f64,
    pub shape_symmetry: f64,
    pub curvature: f64,
    pub oracle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            family: 1e-10,
            analytic: 1e-8,
            fourth_order: 1e-9,
            fourth_order_b0: 1e-12,
            angle: 1e-6,
            frame: 1e-7,
            decomposition: 1e-6,
            phi_slope: 1e-4,
            shape: 1e-3,
            shape_symmetry: 1e-4,
            curvature: 1e-2,
            oracle: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn scaled(&self, factor: f64) -> Self {
        Tolerances {
            family: self.family * factor,
            analytic: self.analytic * factor,
            fourth_order: self.fourth_order * factor,
            fourth_order_b0: self.fourth_order_b0 * factor,
            angle: self.angle * factor,
            frame: self.frame * factor,
            decomposition: self.decomposition * factor,
            phi_slope: self.phi_slope * factor,
            shape: self.shape * factor,
            shape_symmetry: self.shape_symmetry * factor,
            curvature: self.curvature * factor,
            oracle: self.oracle * factor,
        }
    }
}

/// The sampling grid of a report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportGrid {
    pub u_range: (f64, f64),
    pub v_range: (f64, f64),
    pub nu: usize,
    pub nv: usize,
}

impl ReportGrid {
    pub fn u(&self, i: usize) -> f64 {
        lerp(self.u_range, i, self.nu)
    }

    pub fn v(&self, j: usize) -> f64 {
        lerp(self.v_range, j, self.nv)
    }

    pub fn points(&self) -> Vec<(f64, f64)> {
        (0..self.nu)
            .flat_map(|i| (0..self.nv).map(move |j| (self.u(i), self.v(j))))
            .collect()
    }
}

fn lerp(r: (f64, f64), i: usize, n: usize) -> f64 {
    if n == 1 {
        return r.0;
    }
    r.0 + (r.1 - r.0) * i as f64 / (n - 1) as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Evaluated,
    NotApplicable,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub status: CheckStatus,
    /// `None` when the check errored.
    pub max_residual: Option<f64>,
    pub samples: usize,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CheckResult {
    fn from_samples(samples: &[Result<f64>], tolerance: f64) -> Self {
        let mut worst = 0.0_f64;
        for r in samples {
            match r {
                Ok(x) => {
                    let x = x.abs();
                    if x.is_nan() || x > worst {
                        worst = x;
                    }
                }
                Err(e) => {
                    return CheckResult {
                        status: CheckStatus::Error,
                        max_residual: None,
                        samples: samples.len(),
                        tolerance,
                        pass: false,
                        error: Some(e.to_string()),
                    }
                }
            }
        }
        CheckResult {
            status: CheckStatus::Evaluated,
            max_residual: Some(worst),
            samples: samples.len(),
            tolerance,
            pass: worst <= tolerance,
            error: None,
        }
    }

    fn not_applicable(tolerance: f64) -> Self {
        CheckResult {
            status: CheckStatus::NotApplicable,
            max_residual: Some(0.0),
            samples: 0,
            tolerance,
            pass: true,
            error: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub tau: f64,
    pub theta: f64,
    pub cos_theta: f64,
    pub b: f64,
    pub case: Case,
    pub family_digest: String,
    pub grid: ReportGrid,
    pub stencil_step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertReport {
    pub metadata: ReportMetadata,
    pub checks: BTreeMap<String, CheckResult>,
    pub pass: bool,
}

impl CertReport {
    pub fn failed(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|(_, c)| !c.pass)
            .map(|(k, _)| k.as_str())
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Per-point checks, in a fixed order.
const POINT_CHECKS: [&str; 17] = [
    "manifold",
    "angle",
    "tangent_frame",
    "decomposition",
    "viceversa.r1",
    "viceversa.r2",
    "viceversa.r3",
    "fourth_order",
    "shape.form",
    "shape.symmetry",
    "induced_connection",
    "structure.riccati",
    "structure.a_u",
    "structure.b_u",
    "structure.phi_u",
    "gauss_curvature",
    "gauss_equation",
];

fn point_tolerances(t: &Tolerances, case: Case) -> [f64; 17] {
    [
        t.family,
        t.angle,
        t.frame,
        t.decomposition,
        t.analytic,
        t.analytic,
        t.analytic,
        if case == Case::Zero {
            t.fourth_order_b0
        } else {
            t.fourth_order
        },
        t.shape,
        t.shape_symmetry,
        t.shape,
        t.shape,
        t.shape,
        t.shape,
        t.phi_slope,
        t.curvature,
        t.curvature,
    ]
}

fn split<const N: usize>(r: Result<[f64; N]>) -> [Result<f64>; N] {
    match r {
        Ok(a) => a.map(Ok),
        Err(e) => std::array::from_fn(|_| Err(e.clone())),
    }
}

fn point_residuals(s: &HelixSurface, u: f64, v: f64, h: f64) -> Vec<Result<f64>> {
    let tau = s.params.metric();
    let (t, c) = (s.params.tau, s.params.cos_theta);
    let mut out = Vec::with_capacity(POINT_CHECKS.len());
    out.push(s.eval(u, v).map(|f| dot22(&f, &f) - 1.0));
    let first = split(surface_point(s, u, v).map(|d| {
        let s2 = d.sin_theta * d.sin_theta;
        let frame_err = (g_tau(&d.p, &d.t, &d.t, tau) - s2)
            .abs()
            .max((g_tau(&d.p, &d.jt, &d.jt, tau) - s2).abs())
            .max(g_tau(&d.p, &d.t, &d.jt, tau).abs());
        [
            measured_angle(&d, tau) - c,
            frame_err,
            decomposition_residual(&d, tau),
        ]
    }));
    out.extend(first);
    out.extend(split(viceversa_residuals(s, u, v)));
    out.push(fourth_order_residual(s, u, v));
    let shape = shape_operator(s, u, v, h);
    out.extend(split(
        shape
            .as_ref()
            .map_err(Clone::clone)
            .map(|m| [shape_form_residual(m, t), m[(0, 1)] - m[(1, 0)]]),
    ));
    out.push(
        shape
            .as_ref()
            .map_err(Clone::clone)
            .and_then(|m| Ok(induced_connection(s, u, v, h)?.residual(t, c, extract_lambda(m)))),
    );
    out.extend(split(
        structure_residuals(s, u, v, h).map(|r| [r.riccati, r.a_u, r.b_u, r.phi_u]),
    ));
    let k = gauss_curvature(s, u, v, h);
    out.push(k.clone().map(|k| k - s.params.gauss_curvature()));
    out.push(k.and_then(|k| {
        let m = shape.map_err(|e| e.clone())?;
        Ok(k - (m.determinant() + t * t - 4.0 * (1.0 + t * t) * c * c))
    }));
    out
}

/// Runs every check over the grid. Hard errors of a check are recorded in
/// the report, never returned.
pub fn full_report(s: &HelixSurface, grid: ReportGrid, tol: &Tolerances) -> Result<CertReport> {
    if grid.nu < 5 || grid.nv < 5 {
        return Err(Error::InvalidInput(format!(
            "report grid must be at least 5x5, got {}x{}",
            grid.nu, grid.nv
        )));
    }
    let h = DEFAULT_STEP;
    let mut checks = BTreeMap::new();

    let vs: Vec<f64> = (0..grid.nv).map(|j| grid.v(j)).collect();
    let family = &s.family;
    let matrices: Vec<Result<_>> = vs.iter().map(|&v| family.matrix(v)).collect();
    let orth: Vec<Result<f64>> = matrices
        .iter()
        .map(|m| m.as_ref().map(orthogonality_defect).map_err(Clone::clone))
        .collect();
    let comm: Vec<Result<f64>> = matrices
        .iter()
        .map(|m| {
            m.as_ref().map_err(Clone::clone).map(|m| {
                let (c, a) = commutation_defects(m);
                if family.sign.value() > 0.0 {
                    c
                } else {
                    a
                }
            })
        })
        .collect();
    let sign_ok = [Ok(if family.sign == required_sign(s.params.case) {
        0.0
    } else {
        1.0
    })];
    let admissible: Vec<Result<f64>> = vs
        .iter()
        .map(|&v| admissibility_residual(family, v, &s.params))
        .collect();
    checks.insert(
        "family.orthogonality".into(),
        CheckResult::from_samples(&orth, tol.family),
    );
    checks.insert(
        "family.commutation".into(),
        CheckResult::from_samples(&comm, tol.family),
    );
    checks.insert(
        "family.case_sign".into(),
        CheckResult::from_samples(&sign_ok, 0.0),
    );
    checks.insert(
        "family.admissibility".into(),
        CheckResult::from_samples(&admissible, tol.analytic),
    );

    let points = grid.points();
    let per_point: Vec<Vec<Result<f64>>> = points
        .par_iter()
        .map(|&(u, v)| point_residuals(s, u, v, h))
        .collect();
    for (k, (name, t)) in POINT_CHECKS
        .iter()
        .zip(point_tolerances(tol, s.params.case))
        .enumerate()
    {
        let column: Vec<Result<f64>> = per_point.iter().map(|r| r[k].clone()).collect();
        checks.insert((*name).into(), CheckResult::from_samples(&column, t));
    }

    if s.params.case == Case::Zero {
        for name in PRODUCT_RELATIONS {
            checks.insert(
                format!("product.{name}"),
                CheckResult::not_applicable(tol.analytic),
            );
        }
    } else {
        let product: Vec<[Result<f64>; 16]> = points
            .par_iter()
            .map(|&(u, v)| split(product_relations_residuals(s, u, v).map(|r| r.expect("B != 0"))))
            .collect();
        for (k, name) in PRODUCT_RELATIONS.iter().enumerate() {
            let column: Vec<Result<f64>> = product.iter().map(|r| r[k].clone()).collect();
            checks.insert(
                format!("product.{name}"),
                CheckResult::from_samples(&column, tol.analytic),
            );
        }
    }

    let steps = ((grid.u_range.1 - grid.u_range.0) * ORACLE_STEPS_PER_UNIT)
        .ceil()
        .max(100.0) as usize;
    let oracle: Vec<Result<f64>> = vs
        .par_iter()
        .map(|&v| ode_oracle_integrate(s, v, grid.u_range, steps))
        .collect();
    checks.insert(
        "ode_oracle".into(),
        CheckResult::from_samples(&oracle, tol.oracle),
    );

    let pass = checks.values().all(|c| c.pass);
    Ok(CertReport {
        metadata: ReportMetadata {
            tau: s.params.tau,
            theta: s.params.theta,
            cos_theta: s.params.cos_theta,
            b: s.params.b,
            case: s.params.case,
            family_digest: family.digest(),
            grid,
            stencil_step: h,
        },
        checks,
        pass,
    })
}
