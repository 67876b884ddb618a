#![allow(dead_code)]

use sl2helix::cli::{default_xi2_init, padded};
use sl2helix::{solve_admissible, Case, HelixSurface, IsometryFamily, ModelParams, VGrid, XiFn};

/// Certified sampling window. Surfaces are built on a padded `u ∈ [0, 1]`.
pub const U_WINDOW: (f64, f64) = (0.0, 0.5);
pub const V_WINDOW: (f64, f64) = (0.0, 1.0);
pub const U_DOMAIN: (f64, f64) = (0.0, 1.0);

/// `(tau, cos θ)`; `None` means the `B = 0` angle.
pub const PARAMETER_SETS: [(f64, Option<f64>); 9] = [
    (0.5, None),
    (1.0, None),
    (2.0, None),
    (2.0, Some(0.8)),
    (3.0, Some(0.6)),
    (1.5, Some(0.9)),
    (1.0, Some(0.5)),
    (0.5, Some(0.7)),
    (2.0, Some(0.3)),
];

pub fn params(tau: f64, cos_theta: Option<f64>) -> ModelParams {
    match cos_theta {
        Some(c) => ModelParams::from_cos(tau, c).unwrap(),
        None => ModelParams::b_zero(tau).unwrap(),
    }
}

pub fn xi1() -> XiFn {
    XiFn::Sinusoid {
        amplitude: 0.15,
        frequency: 1.0,
        phase: 0.0,
        offset: 0.2,
    }
}

pub fn family(p: &ModelParams) -> IsometryFamily {
    let v = padded(V_WINDOW);
    solve_admissible(
        p,
        XiFn::Constant(0.3),
        xi1(),
        XiFn::Polynomial(vec![0.0, 0.2]),
        default_xi2_init(p.case),
        VGrid::new(v.0, v.1),
    )
    .unwrap()
}

pub fn surface(tau: f64, cos_theta: Option<f64>) -> HelixSurface {
    let p = params(tau, cos_theta);
    HelixSurface::new(p, family(&p), padded(U_DOMAIN)).unwrap()
}

pub fn all_surfaces() -> Vec<HelixSurface> {
    PARAMETER_SETS.iter().map(|&(t, c)| surface(t, c)).collect()
}

pub fn label(s: &HelixSurface) -> String {
    format!(
        "tau={} cos={:.4} {}",
        s.params.tau, s.params.cos_theta, s.params.case
    )
}

/// `n x n` evenly spaced points of the certified window, edges included.
pub fn window_grid(n: usize) -> Vec<(f64, f64)> {
    let at = |r: (f64, f64), k: usize| r.0 + (r.1 - r.0) * k as f64 / (n - 1) as f64;
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (at(U_WINDOW, i), at(V_WINDOW, j))))
        .collect()
}

pub fn case_of(s: &HelixSurface) -> Case {
    s.params.case
}
