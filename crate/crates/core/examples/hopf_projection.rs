//! Projects a B < 0 surface to the hyperbolic plane and checks that every
//! image lies on `x² + y² - z² = -1/4`.

use sl2helix::cli::{Command, JobConfig};
use sl2helix::sl2geo::{hopf_project, minkowski_norm, Sl2Point};

fn main() -> sl2helix::Result<()> {
    let mut job = JobConfig::new(Command::HopfProject, 1.0);
    job.cos_theta = Some(0.5);
    let s = job.surface()?;
    let mut worst = 0.0_f64;
    for (u, v) in job.report_grid().points() {
        let q = hopf_project(&Sl2Point::new(s.eval(u, v)?)?);
        worst = worst.max((minkowski_norm(&q) + 0.25).abs());
        if v == 0.0 {
            println!("u = {u:.3}: ({:+.6}, {:+.6}, {:.6})", q[0], q[1], q[2]);
        }
    }
    println!("max |x² + y² - z² + 1/4| = {worst:.1e}");
    Ok(())
}
