mod common;

use std::f64::consts::FRAC_PI_2;

use sl2helix::certify::{viceversa_residuals, CheckStatus};
use sl2helix::diffgeo::{
    extract_lambda, measured_angle, shape_operator, surface_point, DEFAULT_STEP,
};
use sl2helix::helix::ProfileCurve;
use sl2helix::isofam::{admissibility_residual, XiSpec};
use sl2helix::pseudolin::{orthogonality_defect, CommutationSign};
use sl2helix::sl2geo::frame_components;
use sl2helix::{full_report, HelixSurface, IsometryFamily, ReportGrid, Tolerances, XiFn};

use common::*;

fn angle_spread(s: &HelixSurface, points: &[(f64, f64)]) -> f64 {
    let tau = s.params.metric();
    let angles: Vec<f64> = points
        .iter()
        .map(|&(u, v)| measured_angle(&surface_point(s, u, v).unwrap(), tau))
        .collect();
    let max = angles.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = angles.iter().cloned().fold(f64::INFINITY, f64::min);
    max - min
}

#[test]
fn foreign_profile_fails_the_angle_check() {
    // the tau=3 profile swept by a tau=2 family, measured in g_2
    let mut s = surface(2.0, Some(0.8));
    s.profile = ProfileCurve::new(params(3.0, Some(0.6)));
    let d = surface_point(&s, 0.25, 0.5).unwrap();
    let off = (measured_angle(&d, s.params.metric()) - 0.8).abs();
    assert!(off > 1e-2, "angle off by {off}");
    let report = full_report(&s, grid(6, 6), &Tolerances::default()).unwrap();
    assert!(!report.checks["angle"].pass);

    let good = surface(2.0, Some(0.8));
    assert!(angle_spread(&good, &window_grid(6)) < 1e-12);
}

#[test]
fn mis_signed_family_is_orthogonal_but_rejected() {
    let good = surface(2.0, Some(0.8));
    let family = IsometryFamily::new_unchecked(
        good.family.spec.clone(),
        good.family.case,
        CommutationSign::Anticommuting,
    );
    assert!(orthogonality_defect(&family.matrix(0.5).unwrap()) < 1e-12);
    assert!(HelixSurface::new(good.params, family.clone(), padded_u()).is_err());

    let bad = HelixSurface::new_unchecked(good.params, family, padded_u()).unwrap();
    let report = full_report(&bad, grid(6, 6), &Tolerances::default()).unwrap();
    assert!(!report.pass);
    assert!(!report.checks["family.case_sign"].pass);
    assert!(report.checks["family.orthogonality"].pass);
    let failed = report.failed();
    assert!(
        failed.iter().any(|c| c.starts_with("viceversa")),
        "{failed:?}"
    );
}

fn grid(nu: usize, nv: usize) -> ReportGrid {
    ReportGrid {
        u_range: U_WINDOW,
        v_range: V_WINDOW,
        nu,
        nv,
    }
}

fn padded_u() -> (f64, f64) {
    sl2helix::cli::padded(U_DOMAIN)
}

fn constant_family(xi2: f64) -> IsometryFamily {
    let spec = XiSpec {
        xi: XiFn::Constant(0.3),
        xi1: xi1(),
        xi2: XiFn::Constant(xi2),
        xi3: XiFn::Constant(0.3),
        domain: sl2helix::cli::padded(V_WINDOW),
    };
    IsometryFamily::new(spec, sl2helix::Case::Zero).unwrap()
}

#[test]
fn equal_angle_family_fails_and_quarter_turn_passes() {
    let p = params(1.0, None);
    let points = window_grid(6);

    let equal = constant_family(0.3);
    assert!(admissibility_residual(&equal, 0.5, &p).unwrap().abs() > 1e-2);
    let s = HelixSurface::new(p, equal, padded_u()).unwrap();
    assert!(angle_spread(&s, &points) > 1e-3);
    let r3 = points
        .iter()
        .map(|&(u, v)| viceversa_residuals(&s, u, v).unwrap()[2].abs())
        .fold(0.0, f64::max);
    assert!(r3 > 1e-2);

    let quarter = constant_family(0.3 + FRAC_PI_2);
    assert!(quarter.max_admissibility_residual(&p, 50).unwrap() < 1e-12);
    let s = HelixSurface::new(p, quarter, padded_u()).unwrap();
    assert!(angle_spread(&s, &points) < 1e-12);
    let report = full_report(&s, grid(6, 6), &Tolerances::default()).unwrap();
    assert!(report.pass, "{:?}", report.failed());
}

#[test]
fn negative_case_lambda_approaches_its_bound() {
    let p = params(1.0, Some(0.5));
    let s = HelixSurface::new(p, family(&p), (0.0, 12.5)).unwrap();
    let bound = 2.0 * (-p.b).sqrt();
    let near = extract_lambda(&shape_operator(&s, 0.25, 0.5, DEFAULT_STEP).unwrap()).abs();
    assert!(near > bound + 0.5, "lambda {near} at u = 0.25");
    for v in [0.25, 0.5, 0.75] {
        let far = extract_lambda(&shape_operator(&s, 12.0, v, DEFAULT_STEP).unwrap()).abs();
        assert!(far <= bound + 1e-3, "lambda {far} at u = 12, v = {v}");
        assert!(far >= bound - 1e-3);
    }
}

#[test]
fn tangent_has_expected_frame_components() {
    // F_u = T = sinθ (sinθ E1 - cosθ cosφ E2 - cosθ sinφ E3)
    for s in all_surfaces() {
        let (st, ct) = (s.params.sin_theta, s.params.cos_theta);
        for &(u, v) in &window_grid(4) {
            let d = surface_point(&s, u, v).unwrap();
            let x = frame_components(&d.p, s.params.metric(), &d.fu).unwrap();
            let (c, sn) = (d.phi.cos(), d.phi.sin());
            let want = [st * st, -st * ct * c, -st * ct * sn];
            for k in 0..3 {
                assert!(
                    (x[k] - want[k]).abs() < 1e-10,
                    "{} component {k}",
                    label(&s)
                );
            }
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let s = surface(0.5, Some(0.7));
    let grid = grid(9, 7);
    let a = full_report(&s, grid, &Tolerances::default()).unwrap();
    let b = full_report(&s, grid, &Tolerances::default()).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert!(a.pass);
    assert_eq!(a.checks.len(), 38);
    assert!(a
        .checks
        .values()
        .all(|c| c.status == CheckStatus::Evaluated));

    let z = full_report(&surface(1.0, None), grid, &Tolerances::default()).unwrap();
    assert_eq!(z.checks["product.f_f"].status, CheckStatus::NotApplicable);
    assert!(z.pass);
}
