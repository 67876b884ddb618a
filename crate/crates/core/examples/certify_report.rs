//! Certifies the default patch for each case and prints the report summary.

use sl2helix::cli::{Command, JobConfig};
use sl2helix::{full_report, Tolerances};

fn main() -> sl2helix::Result<()> {
    for (tau, c) in [(1.0, None), (2.0, Some(0.8)), (1.0, Some(0.5))] {
        let mut job = JobConfig::new(Command::Certify, tau);
        job.cos_theta = c;
        if c.is_none() {
            job.case = Some(sl2helix::Case::Zero);
        }
        job.grid = (30, 30);
        let report = full_report(&job.surface()?, job.report_grid(), &Tolerances::default())?;
        println!("tau = {tau}, cos θ = {:?}: pass = {}", c, report.pass);
        for (name, check) in &report.checks {
            if let Some(r) = check.max_residual {
                println!("  {name:<40} {r:.2e} / {:.0e}", check.tolerance);
            }
        }
    }
    Ok(())
}
