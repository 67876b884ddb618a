//! Acceptance criteria 1-10. Runs without the test harness so that every
//! criterion prints its PASS/FAIL line; exits nonzero if any fails.

#![allow(clippy::excessive_precision)]

mod common;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sl2helix::certify::{
    fourth_order_residual, ode_oracle_integrate, product_relations_residuals, viceversa_residuals,
    PRODUCT_RELATIONS,
};
use sl2helix::diffgeo::{
    extract_lambda, gauss_curvature, measured_angle, shape_form_residual, shape_operator,
    structure_residuals, surface_point, DEFAULT_STEP,
};
use sl2helix::isofam::{required_sign, HermiteTable, XiSpec};
use sl2helix::pseudolin::{j1_commutation_sign, orthogonality_defect};
use sl2helix::{solve_admissible, Case, HelixSurface, IsometryFamily, ModelParams, VGrid, XiFn};

use common::*;

const ANGLE_TOL: f64 = 1e-6;
const ANGLE_GRID: usize = 50;
const CURVATURE_TOL: f64 = 1e-2;
const CURVATURE_POINTS: usize = 5; // 5 x 5 = 25 points
const SHAPE_TOL: f64 = 1e-3;
const RICCATI_TOL: f64 = 1e-3;
const FOURTH_ORDER_TOL: f64 = 1e-9;
const FOURTH_ORDER_B0_TOL: f64 = 1e-12;
const PRODUCT_TOL: f64 = 1e-8;
const CONSTANT_TOL: f64 = 1e-12;
const CONVERSE_TOL: f64 = 1e-8;
const PERTURBATION: f64 = 1e-2;
const PERTURBED_R3_MIN: f64 = 1e-4;
const ORACLE_TOL: f64 = 1e-8;
const ORACLE_STEPS: usize = 10_000;
const ORDER_RANGE: (f64, f64) = (3.8, 4.2);
const ORDER_STEPS: (usize, usize) = (100, 200);
// a node of the sampled xi2 table; between nodes the fitted phi offset
// carries a ~1e-12 interpolation floor that flattens the order estimate
const ORDER_V: f64 = 0.5;
const ORACLE_B0_TOL: f64 = 1e-12;
const IDENTITY_TOL: f64 = 1e-12;
const FAMILY_SAMPLES: usize = 1000;
const FAMILY_TOL: f64 = 1e-10;
const STRUCTURE_TOL: f64 = 1e-3;

/// `(tau, cos θ, ã, b̃, D, E, I)` at 50 digits, rounded to double.
const CONSTANTS: [(f64, f64, f64, f64, f64, f64, f64); 6] = [
    (2.0, 0.8, -0.198, -2.2, -1.075932, -5.62581756, 0.47124),
    (
        3.0,
        0.6,
        -0.18488888888888888889,
        -1.7333333333333333333,
        -0.65804009876543209877,
        -2.2140533008504801097,
        0.35991703703703703704,
    ),
    (
        1.5,
        0.9,
        -0.13785555555555555556,
        -2.1766666666666666667,
        -0.7101552358024691358,
        -3.5578065713707640604,
        0.3175272962962962963,
    ),
    (1.0, 0.5, 0.375, 1.0, -0.046875, -0.064453125, 0.09375),
    (0.5, 0.7, 0.7905, 1.55, 0.0245055, -0.473844474375, 0.418965),
    (
        2.0,
        0.3,
        0.125125,
        0.55,
        -0.009118484375,
        -0.002435431044921875,
        0.011886875,
    ),
];

/// `(tau, cos θ, α1, α2, g11, g33)` at 50 digits, rounded to double.
const POSITIVE_CONSTANTS: [(f64, f64, f64, f64, f64, f64); 3] = [
    (
        2.0,
        0.8,
        2.2865917579353060718,
        0.086591757935306071794,
        -0.039359889970593668997,
        1.039359889970593669,
    ),
    (
        3.0,
        0.6,
        1.834137596462492625,
        0.10080426312915929162,
        -0.058156305651438052856,
        1.0581563056514380529,
    ),
    (
        1.5,
        0.9,
        2.2382572438595907184,
        0.061590577192924051698,
        -0.028295824131511815481,
        1.0282958241315118155,
    ),
];

/// Target curvatures `-4(1 + tau²) cos²θ`, in the order of `PARAMETER_SETS`.
const CURVATURES: [f64; 9] = [-4.0, -4.0, -4.0, -12.8, -14.4, -10.53, -2.0, -2.45, -1.8];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

fn worst_over<F>(surfaces: &[HelixSurface], points: &[(f64, f64)], f: F) -> (f64, String)
where
    F: Fn(&HelixSurface, f64, f64) -> f64,
{
    let mut worst = (0.0_f64, String::new());
    for s in surfaces {
        for &(u, v) in points {
            let r = f(s, u, v).abs();
            if r.is_nan() || r > worst.0 {
                worst = (r, format!("{} at ({u:.3}, {v:.3})", label(s)));
            }
        }
    }
    worst
}

fn criterion_1(surfaces: &[HelixSurface]) -> Outcome {
    let points = window_grid(ANGLE_GRID);
    let (worst, at) = worst_over(surfaces, &points, |s, u, v| {
        let d = surface_point(s, u, v).unwrap();
        measured_angle(&d, s.params.metric()) - s.params.cos_theta
    });
    outcome(
        worst <= ANGLE_TOL,
        format!("max |g(E1,N) - cos θ| = {worst:.2e} over 9 surfaces x {ANGLE_GRID}x{ANGLE_GRID} ({at}); tol {ANGLE_TOL:e}"),
    )
}

fn criterion_2(surfaces: &[HelixSurface]) -> Outcome {
    let points = window_grid(CURVATURE_POINTS);
    let mut worst = 0.0_f64;
    let mut pass = true;
    for (s, target) in surfaces.iter().zip(CURVATURES) {
        pass &= close(s.params.gauss_curvature(), target, 1e-12);
        for &(u, v) in &points {
            let k = gauss_curvature(s, u, v, DEFAULT_STEP).unwrap();
            let r = (k - target).abs();
            if r.is_nan() || r > worst {
                worst = r;
            }
        }
    }
    pass &= worst <= CURVATURE_TOL;
    outcome(
        pass,
        format!("max |K_brioschi - (-4(1+tau²)cos²θ)| = {worst:.2e} at 25 points per surface (target -12.8 for tau=2, cos=0.8); tol {CURVATURE_TOL:e}"),
    )
}

fn criterion_3(surfaces: &[HelixSurface]) -> Outcome {
    let points = window_grid(5);
    let (shape, at_s) = worst_over(surfaces, &points, |s, u, v| {
        shape_form_residual(
            &shape_operator(s, u, v, DEFAULT_STEP).unwrap(),
            s.params.tau,
        )
    });
    let (riccati, at_r) = worst_over(surfaces, &points, |s, u, v| {
        structure_residuals(s, u, v, DEFAULT_STEP).unwrap().riccati
    });
    outcome(
        shape <= SHAPE_TOL && riccati <= RICCATI_TOL,
        format!("shape entry error {shape:.2e} ({at_s}), Riccati {riccati:.2e} ({at_r}); tol {SHAPE_TOL:e}/{RICCATI_TOL:e}"),
    )
}

fn criterion_4(surfaces: &[HelixSurface]) -> Outcome {
    let points = window_grid(10);
    let mut pass = true;
    let mut worst = (0.0_f64, 0.0_f64);
    for s in surfaces {
        for &(u, v) in &points {
            let r = fourth_order_residual(s, u, v).unwrap();
            if s.params.case == Case::Zero {
                worst.1 = worst.1.max(r);
                pass &= r <= FOURTH_ORDER_B0_TOL;
            } else {
                worst.0 = worst.0.max(r);
                pass &= r <= FOURTH_ORDER_TOL;
            }
        }
    }
    outcome(
        pass,
        format!("B≠0 residual {:.2e} (tol {FOURTH_ORDER_TOL:e}), B=0 |F_uu| {:.2e} (tol {FOURTH_ORDER_B0_TOL:e})", worst.0, worst.1),
    )
}

fn criterion_5(surfaces: &[HelixSurface]) -> Outcome {
    let mut pass = true;
    let mut constant_err = 0.0_f64;
    for (tau, c, a, b, d, e, i) in CONSTANTS {
        let p = ModelParams::from_cos(tau, c).unwrap();
        for (got, want) in [
            (p.a_tilde, a),
            (p.b_tilde, b),
            (p.d_const(), d),
            (p.e_const(), e),
            (p.i_const(), i),
        ] {
            constant_err = constant_err.max((got - want).abs() / want.abs().max(1.0));
        }
    }
    pass &= constant_err <= CONSTANT_TOL;

    let points = window_grid(10);
    let mut worst = (0.0_f64, "");
    for s in surfaces.iter().filter(|s| s.params.case != Case::Zero) {
        for &(u, v) in &points {
            let r = product_relations_residuals(s, u, v).unwrap().unwrap();
            for (name, x) in PRODUCT_RELATIONS.iter().zip(r) {
                if x.is_nan() || x.abs() > worst.0 {
                    worst = (x.abs(), name);
                }
            }
        }
    }
    pass &= worst.0 <= PRODUCT_TOL;
    outcome(
        pass,
        format!(
            "16 relations: max residual {:.2e} ({}); constants vs 50-digit values {constant_err:.2e}; tol {PRODUCT_TOL:e}/{CONSTANT_TOL:e}",
            worst.0, worst.1
        ),
    )
}

/// The family with `ξ2'` shifted by `eps` everywhere.
fn perturb_xi2_slope(family: &IsometryFamily, eps: f64) -> IsometryFamily {
    let XiFn::Sampled(t) = &family.spec.xi2 else {
        panic!("solved families carry a sampled xi2")
    };
    let table = HermiteTable {
        start: t.start,
        step: t.step,
        values: t
            .values
            .iter()
            .enumerate()
            .map(|(k, y)| y + eps * t.step * k as f64)
            .collect(),
        slopes: t.slopes.iter().map(|m| m + eps).collect(),
    };
    let spec = XiSpec {
        xi2: XiFn::Sampled(table),
        ..family.spec.clone()
    };
    IsometryFamily::new(spec, family.case).unwrap()
}

fn criterion_6(surfaces: &[HelixSurface]) -> Outcome {
    let points = window_grid(10);
    let (worst, at) = worst_over(surfaces, &points, |s, u, v| {
        viceversa_residuals(s, u, v)
            .unwrap()
            .into_iter()
            .fold(0.0, |a: f64, x| a.max(x.abs()))
    });
    let mut weakest_control = f64::INFINITY;
    for s in surfaces {
        let bad = HelixSurface::new(
            s.params,
            perturb_xi2_slope(&s.family, PERTURBATION),
            (0.0, 1.0),
        )
        .unwrap();
        let r3 = points
            .iter()
            .map(|&(u, v)| viceversa_residuals(&bad, u, v).unwrap()[2].abs())
            .fold(0.0, f64::max);
        weakest_control = weakest_control.min(r3);
    }
    outcome(
        worst <= CONVERSE_TOL && weakest_control > PERTURBED_R3_MIN,
        format!("max |r1|,|r2|,|r3| = {worst:.2e} ({at}); with xi2' + {PERTURBATION:e}, smallest max|r3| = {weakest_control:.2e} (> {PERTURBED_R3_MIN:e})"),
    )
}

fn criterion_7(surfaces: &[HelixSurface]) -> Outcome {
    let mut pass = true;
    let mut worst = 0.0_f64;
    let mut orders = (f64::INFINITY, f64::NEG_INFINITY);
    let mut b0_err = 0.0_f64;
    for s in surfaces {
        for v in [0.0, 0.5, 1.0] {
            let e = ode_oracle_integrate(s, v, U_DOMAIN, ORACLE_STEPS).unwrap();
            worst = worst.max(e);
            if v != ORDER_V {
                continue;
            }
            let coarse = ode_oracle_integrate(s, v, U_DOMAIN, ORDER_STEPS.0).unwrap();
            let fine = ode_oracle_integrate(s, v, U_DOMAIN, ORDER_STEPS.1).unwrap();
            if s.params.case == Case::Zero {
                // RK4 is exact here: F is linear in u
                b0_err = b0_err.max(coarse).max(fine);
            } else {
                let order = (coarse / fine).log2();
                orders = (orders.0.min(order), orders.1.max(order));
            }
        }
    }
    pass &= worst <= ORACLE_TOL;
    pass &= orders.0 >= ORDER_RANGE.0 && orders.1 <= ORDER_RANGE.1;
    pass &= b0_err <= ORACLE_B0_TOL;
    outcome(
        pass,
        format!(
            "max |F_rk4 - F| = {worst:.2e} with {ORACLE_STEPS} steps on u in [0,1] (tol {ORACLE_TOL:e}); order {:.3}..{:.3} ({}/{} steps at v={ORDER_V}); B=0 error {b0_err:.1e}",
            orders.0, orders.1, ORDER_STEPS.0, ORDER_STEPS.1
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut worst = 0.0_f64;
    for (tau, c, a1, a2, g11, g33) in POSITIVE_CONSTANTS {
        let p = ModelParams::from_cos(tau, c).unwrap();
        let k = p.positive.unwrap();
        let (b, s2) = (p.b, p.sin_theta * p.sin_theta);
        for r in [
            k.g11 + k.g33 - 1.0,
            k.g11 * k.g33 + s2 / (4.0 * b),
            k.alpha1 * k.alpha2 - b * s2 / (tau * tau),
            k.alpha1 * k.alpha1 - k.alpha2 * k.alpha2 - 4.0 * b.powf(1.5) * c / tau,
            k.alpha1 - a1,
            k.alpha2 - a2,
            k.g11 - g11,
            k.g33 - g33,
        ] {
            worst = worst.max(r.abs());
        }
    }
    outcome(
        worst <= IDENTITY_TOL,
        format!(
            "max identity / 50-digit deviation {worst:.2e} over 3 B>0 sets; tol {IDENTITY_TOL:e}"
        ),
    )
}

fn random_family(rng: &mut ChaCha8Rng) -> Option<(ModelParams, IsometryFamily)> {
    let tau = rng.random_range(0.3..3.0);
    let p = if rng.random_bool(1.0 / 3.0) {
        ModelParams::b_zero(tau).ok()?
    } else {
        ModelParams::from_cos(tau, rng.random_range(0.05..0.95)).ok()?
    };
    let xi = XiFn::Constant(rng.random_range(-3.0..3.0));
    let xi1 = XiFn::Sinusoid {
        amplitude: rng.random_range(0.0..0.3),
        frequency: rng.random_range(0.5..2.0),
        phase: rng.random_range(-3.0..3.0),
        offset: rng.random_range(-0.5..0.5),
    };
    let xi3 = XiFn::Polynomial(vec![
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
    ]);
    let family = solve_admissible(
        &p,
        xi,
        xi1,
        xi3,
        rng.random_range(-3.0..3.0),
        VGrid::new(0.0, 1.0),
    )
    .ok()?;
    Some((p, family))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut samples, mut skipped) = (0usize, 0usize);
    let mut orth = 0.0_f64;
    let mut mis_signed = 0usize;
    while samples < FAMILY_SAMPLES {
        let Some((p, family)) = random_family(&mut rng) else {
            skipped += 1;
            continue;
        };
        let v = rng.random_range(0.0..1.0);
        let a = family.matrix(v).unwrap();
        orth = orth.max(orthogonality_defect(&a));
        if j1_commutation_sign(&a, FAMILY_TOL).ok() != Some(family.sign) {
            mis_signed += 1;
        }
        if family.sign != required_sign(p.case) {
            mis_signed += 1;
        }
        samples += 1;
    }
    outcome(
        orth <= FAMILY_TOL && mis_signed == 0,
        format!("{samples} random A(v): max O2(4) defect {orth:.2e}, {mis_signed} with the wrong J1 sign ({skipped} singular draws skipped); tol {FAMILY_TOL:e}"),
    )
}

fn criterion_10(surfaces: &[HelixSurface]) -> Outcome {
    let points = window_grid(5);
    let mut worst = [0.0_f64; 3];
    for s in surfaces {
        for &(u, v) in &points {
            let r = structure_residuals(s, u, v, DEFAULT_STEP).unwrap();
            for (w, x) in worst.iter_mut().zip([r.a_u, r.b_u, r.phi_u]) {
                if x.is_nan() || x.abs() > *w {
                    *w = x.abs();
                }
            }
        }
    }
    outcome(
        worst.iter().all(|w| *w <= STRUCTURE_TOL),
        format!(
            "|a_u + 2 tau b cos θ| {:.2e}, |b_u - b λ cos θ| {:.2e}, |φ_u + 2B/tau| {:.2e}; tol {STRUCTURE_TOL:e}",
            worst[0], worst[1], worst[2]
        ),
    )
}

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() {
    let start = Instant::now();
    let surfaces = all_surfaces();
    // the lambda extraction must be finite on every certified point
    for s in &surfaces {
        let m = shape_operator(s, 0.25, 0.5, DEFAULT_STEP).unwrap();
        assert!(extract_lambda(&m).is_finite());
    }

    let criteria: Vec<(&str, Criterion)> = vec![
        ("angle constancy", Box::new(|| criterion_1(&surfaces))),
        ("Gauss curvature", Box::new(|| criterion_2(&surfaces))),
        (
            "shape operator and Riccati",
            Box::new(|| criterion_3(&surfaces)),
        ),
        ("fourth-order ODE", Box::new(|| criterion_4(&surfaces))),
        ("product relations", Box::new(|| criterion_5(&surfaces))),
        ("converse conditions", Box::new(|| criterion_6(&surfaces))),
        ("ODE oracle", Box::new(|| criterion_7(&surfaces))),
        ("B>0 constant identities", Box::new(criterion_8)),
        ("family validity", Box::new(criterion_9)),
        (
            "structure-function system",
            Box::new(|| criterion_10(&surfaces)),
        ),
    ];

    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<28} {}  {} [{:.1}s]",
            k + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} of {} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
