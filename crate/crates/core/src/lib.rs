//! Constant-angle (helix) surfaces in `SL(2,R)` with the metric family `g_tau`.
//!
//! `SL(2,R)` is realized as the unit pseudo-sphere `{<p,p> = 1}` of R^4_2, and
//! every helix surface is of the form `F(u,v) = A(v) γ(u)` with `γ` an explicit
//! profile curve and `A(v)` a one-parameter family of isometries. The crate
//! builds these surfaces for the three signs of `B = (tau² + 1) cos²θ - 1` and
//! certifies them numerically.
//!
//! * [`pseudolin`]: R^4_2, the structures `J1, J2, J3`, `O2(4)` tests
//! * [`sl2geo`]: the left-invariant geometry of `g_tau` and the Hopf map
//! * [`isofam`]: the families `A(v)` and their admissibility constraints
//! * [`helix`]: profile curves and the surface evaluator
//! * [`diffgeo`]: normal, angle, shape operator, curvature
//! * [`certify`]: grid certification and the ODE oracle
//! * [`cli`]: the `sl2helix` command

// `!(x < y)` is used on purpose so that NaN inputs are rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certify;
pub mod cli;
pub mod diffgeo;
pub mod error;
pub mod helix;
pub mod isofam;
pub mod pseudolin;
pub mod sl2geo;

pub use certify::{full_report, CertReport, ReportGrid, Tolerances};
pub use error::{Error, Result};
pub use helix::{case_params, Case, HelixSurface, ModelParams};
pub use isofam::{solve_admissible, IsometryFamily, VGrid, XiFn, XiSpec};
