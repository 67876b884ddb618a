//! Prints the case constants for a few `(tau, cos θ)` pairs.
//!
//! cargo run --example constants

use sl2helix::{Case, ModelParams};

fn main() -> sl2helix::Result<()> {
    for (tau, c) in [(2.0, 0.8), (1.0, 0.5), (0.5, 0.7)] {
        let p = ModelParams::from_cos(tau, c)?;
        println!("tau = {tau}, cos θ = {c}: case {}, B = {:.6}", p.case, p.b);
        println!("  ã = {:.10}  b̃ = {:.10}", p.a_tilde, p.b_tilde);
        println!(
            "  D = {:.10}  E = {:.10}  I = {:.10}",
            p.d_const(),
            p.e_const(),
            p.i_const()
        );
        println!("  K = {:.6}", p.gauss_curvature());
        match p.case {
            Case::Positive => {
                let k = p.positive.unwrap();
                println!(
                    "  α1 = {:.10}  α2 = {:.10}  g11 = {:.10}  g33 = {:.10}",
                    k.alpha1, k.alpha2, k.g11, k.g33
                );
            }
            Case::Negative => println!("  β = {:.10}", p.beta.unwrap()),
            Case::Zero => {}
        }
    }
    let z = ModelParams::b_zero(1.0)?;
    println!("B = 0 at tau = 1: cos θ = {:.10}", z.cos_theta);
    Ok(())
}
