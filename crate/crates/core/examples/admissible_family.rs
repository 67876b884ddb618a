//! Solves the admissibility constraint for `ξ2` and shows that the result
//! keeps the family inside the right isometry subgroup.

use sl2helix::isofam::{admissibility_residual, VGrid};
use sl2helix::pseudolin::{commutation_defects, orthogonality_defect};
use sl2helix::{solve_admissible, ModelParams, XiFn};

fn main() -> sl2helix::Result<()> {
    for (tau, c) in [(2.0, 0.8), (1.0, 0.5)] {
        let p = ModelParams::from_cos(tau, c)?;
        let family = solve_admissible(
            &p,
            XiFn::Constant(0.3),
            XiFn::parse("sin:0.15,1,0,0.2")?,
            XiFn::parse("poly:0,0.2")?,
            0.1,
            VGrid::new(0.0, 1.0),
        )?;
        println!(
            "case {} ({:?}), digest {}",
            p.case,
            family.sign,
            &family.digest()[..16]
        );
        for v in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let a = family.matrix(v)?;
            let (commute, anti) = commutation_defects(&a);
            println!(
                "  v = {v:.2}  xi2 = {:+.6}  orthogonality {:.1e}  [A,J1] {:.1e}  {{A,J1}} {:.1e}  constraint {:.1e}",
                family.spec.xi2.value(v),
                orthogonality_defect(&a),
                commute,
                anti,
                admissibility_residual(&family, v, &p)?
            );
        }
    }
    Ok(())
}
