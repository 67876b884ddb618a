//! Integrates the tangent ODE with RK4 from the surface's own initial point
//! and compares with the closed-form surface, at several step counts.

use sl2helix::certify::ode_oracle_integrate;
use sl2helix::cli::{Command, JobConfig};

fn main() -> sl2helix::Result<()> {
    let mut job = JobConfig::new(Command::Certify, 2.0);
    job.cos_theta = Some(0.8);
    job.u_range = (0.0, 1.0);
    let s = job.surface()?;
    let mut previous: Option<f64> = None;
    for steps in [100, 200, 400, 800] {
        let e = ode_oracle_integrate(&s, 0.5, (0.0, 1.0), steps)?;
        match previous {
            Some(p) => println!(
                "{steps:>5} steps: error {e:.3e}, order {:.3}",
                (p / e).log2()
            ),
            None => println!("{steps:>5} steps: error {e:.3e}"),
        }
        previous = Some(e);
    }
    Ok(())
}
