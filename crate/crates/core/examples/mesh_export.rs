//! Writes an OBJ mesh (Hopf-projected vertices) and the per-vertex CSV.
//!
//! cargo run --example mesh_export -- /tmp/helix.obj

use std::path::PathBuf;

use sl2helix::cli::{run_job, Command, JobConfig, Outcome};

fn main() -> sl2helix::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("helix.obj"));
    let mut job = JobConfig::new(Command::Generate, 3.0);
    job.cos_theta = Some(0.6);
    job.grid = (40, 40);
    job.out = Some(out);
    if let Outcome::Written(paths) = run_job(&job)? {
        for p in paths {
            println!("wrote {}", p.display());
        }
    }
    Ok(())
}
