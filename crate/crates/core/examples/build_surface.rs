//! Builds a helix surface and samples its geometry at a few points.

use sl2helix::cli::{Command, JobConfig};
use sl2helix::diffgeo::{
    extract_lambda, gauss_curvature, measured_angle, shape_operator, surface_point, DEFAULT_STEP,
};

fn main() -> sl2helix::Result<()> {
    let mut job = JobConfig::new(Command::Generate, 2.0);
    job.cos_theta = Some(0.8);
    let s = job.surface()?;
    let tau = s.params.metric();
    println!(
        "{} surface, expected K = {}",
        s.params.case,
        s.params.gauss_curvature()
    );
    for (u, v) in [(0.0, 0.0), (0.25, 0.5), (0.5, 1.0)] {
        let d = surface_point(&s, u, v)?;
        let lambda = extract_lambda(&shape_operator(&s, u, v, DEFAULT_STEP)?);
        println!(
            "  F({u}, {v}) = {:.6?}\n    cos θ = {:.12}  φ = {:+.6}  λ = {:+.6}  K = {:.6}",
            d.p.coords().as_slice(),
            measured_angle(&d, tau),
            d.phi,
            lambda,
            gauss_curvature(&s, u, v, DEFAULT_STEP)?
        );
    }
    Ok(())
}
