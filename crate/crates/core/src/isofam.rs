//! One-parameter families `A(v)` in `U1(2)` built from four scalar functions.
//!
//! The first row is
//! `r1 = (cosh ξ1 cos ξ2, -cosh ξ1 sin ξ2, sinh ξ1 cos ξ3, -sinh ξ1 sin ξ3)`,
//! then `r2 = ±J1 r1`, `r3 = cos ξ J2 r1 + sin ξ J3 r1` and
//! `r4 = ∓cos ξ J3 r1 ± sin ξ J2 r1`, where the sign is `+` for families
//! commuting with `J1` and `-` for anticommuting ones.
//!
//! A family produces a helix surface only if the functions satisfy the
//! admissibility constraint of its case. Every case constraint is linear in
//! `ξ2'`, so [`solve_admissible`] turns it into an initial-value problem for
//! `ξ2` and integrates it with fixed-step RK4.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::helix::{Case, ModelParams};
use crate::pseudolin::{j1, j2, j3, CommutationSign, Mat4, Vec4};

/// Minimum magnitude of the `ξ2'` coefficient accepted by [`solve_admissible`].
pub const SINGULAR_COEFFICIENT: f64 = 1e-8;

/// Default number of RK4 steps across the `v` domain.
pub const DEFAULT_SOLVE_STEPS: usize = 1000;

/// Piecewise cubic Hermite interpolant on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HermiteTable {
    pub start: f64,
    pub step: f64,
    pub values: Vec<f64>,
    pub slopes: Vec<f64>,
}

impl HermiteTable {
    pub fn end(&self) -> f64 {
        self.start + self.step * (self.values.len() - 1) as f64
    }

    fn locate(&self, v: f64) -> (usize, f64) {
        let last = self.values.len() - 2;
        let x = (v - self.start) / self.step;
        let i = (x.floor().max(0.0) as usize).min(last);
        (i, x - i as f64)
    }

    pub fn value(&self, v: f64) -> f64 {
        let (i, t) = self.locate(v);
        let h = self.step;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * m1
    }

    pub fn derivative(&self, v: f64) -> f64 {
        let (i, t) = self.locate(v);
        let h = self.step;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let t2 = t * t;
        ((6.0 * t2 - 6.0 * t) * y0
            + (3.0 * t2 - 4.0 * t + 1.0) * m0
            + (-6.0 * t2 + 6.0 * t) * y1
            + (3.0 * t2 - 2.0 * t) * m1)
            / h
    }
}

/// A scalar function of `v` with an analytic first derivative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XiFn {
    Constant(f64),
    /// Coefficients in increasing degree.
    Polynomial(Vec<f64>),
    /// `amplitude * sin(frequency * v + phase) + offset`.
    Sinusoid {
        amplitude: f64,
        frequency: f64,
        phase: f64,
        offset: f64,
    },
    Sampled(HermiteTable),
}

impl XiFn {
    pub fn value(&self, v: f64) -> f64 {
        match self {
            XiFn::Constant(c) => *c,
            XiFn::Polynomial(c) => c.iter().rev().fold(0.0, |acc, a| acc * v + a),
            XiFn::Sinusoid {
                amplitude,
                frequency,
                phase,
                offset,
            } => amplitude * (frequency * v + phase).sin() + offset,
            XiFn::Sampled(t) => t.value(v),
        }
    }

    pub fn derivative(&self, v: f64) -> f64 {
        match self {
            XiFn::Constant(_) => 0.0,
            XiFn::Polynomial(c) => c
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(0.0, |acc, (k, a)| acc * v + k as f64 * a),
            XiFn::Sinusoid {
                amplitude,
                frequency,
                phase,
                ..
            } => amplitude * frequency * (frequency * v + phase).cos(),
            XiFn::Sampled(t) => t.derivative(v),
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            XiFn::Constant(_) => true,
            XiFn::Polynomial(c) => c.iter().skip(1).all(|a| *a == 0.0),
            XiFn::Sinusoid {
                amplitude,
                frequency,
                ..
            } => *amplitude == 0.0 || *frequency == 0.0,
            XiFn::Sampled(t) => t.slopes.iter().all(|s| *s == 0.0),
        }
    }

    /// Parses `c`, `const:c`, `poly:c0,c1,...` or `sin:amp,freq,phase,offset`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |msg: String| Error::InvalidInput(format!("xi spec `{s}`: {msg}"));
        let numbers = |body: &str| -> Result<Vec<f64>> {
            body.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<f64>()
                        .map_err(|e| bad(format!("`{}`: {e}", x.trim())))
                })
                .collect()
        };
        let Some((kind, body)) = s.split_once(':') else {
            return s
                .parse::<f64>()
                .map(XiFn::Constant)
                .map_err(|e| bad(e.to_string()));
        };
        match kind.trim() {
            "const" => {
                let v = numbers(body)?;
                match v.as_slice() {
                    [c] => Ok(XiFn::Constant(*c)),
                    _ => Err(bad("const takes one number".into())),
                }
            }
            "poly" => Ok(XiFn::Polynomial(numbers(body)?)),
            "sin" => match numbers(body)?.as_slice() {
                [a, b, c, d] => Ok(XiFn::Sinusoid {
                    amplitude: *a,
                    frequency: *b,
                    phase: *c,
                    offset: *d,
                }),
                _ => Err(bad("sin takes amplitude,frequency,phase,offset".into())),
            },
            other => Err(bad(format!("unknown kind `{other}`"))),
        }
    }
}

impl std::fmt::Display for XiFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            XiFn::Constant(c) => write!(f, "const:{c}"),
            XiFn::Polynomial(c) => {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                write!(f, "poly:{}", parts.join(","))
            }
            XiFn::Sinusoid {
                amplitude,
                frequency,
                phase,
                offset,
            } => write!(f, "sin:{amplitude},{frequency},{phase},{offset}"),
            XiFn::Sampled(t) => write!(
                f,
                "sampled[{} nodes on {}..{}]",
                t.values.len(),
                t.start,
                t.end()
            ),
        }
    }
}

/// The four functions `ξ, ξ1, ξ2, ξ3` on `[v_min, v_max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XiSpec {
    pub xi: XiFn,
    pub xi1: XiFn,
    pub xi2: XiFn,
    pub xi3: XiFn,
    pub domain: (f64, f64),
}

/// Values and first derivatives of the four functions at one `v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiJet {
    pub xi: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub xi3: f64,
    pub dxi: f64,
    pub dxi1: f64,
    pub dxi2: f64,
    pub dxi3: f64,
}

impl XiSpec {
    pub fn contains(&self, v: f64) -> bool {
        v >= self.domain.0 && v <= self.domain.1
    }

    pub fn check_domain(&self, v: f64) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::Domain {
                what: "v",
                value: v,
                min: self.domain.0,
                max: self.domain.1,
            })
        }
    }

    pub fn jet(&self, v: f64) -> XiJet {
        XiJet {
            xi: self.xi.value(v),
            xi1: self.xi1.value(v),
            xi2: self.xi2.value(v),
            xi3: self.xi3.value(v),
            dxi: self.xi.derivative(v),
            dxi1: self.xi1.derivative(v),
            dxi2: self.xi2.derivative(v),
            dxi3: self.xi3.derivative(v),
        }
    }

    fn validate(&self) -> Result<()> {
        let (a, b) = self.domain;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidInput(format!("empty v domain [{a}, {b}]")));
        }
        for (name, f) in [
            ("xi", &self.xi),
            ("xi1", &self.xi1),
            ("xi2", &self.xi2),
            ("xi3", &self.xi3),
        ] {
            for k in 0..=16 {
                let v = a + (b - a) * k as f64 / 16.0;
                if !(f.value(v).is_finite() && f.derivative(v).is_finite()) {
                    return Err(Error::InvalidInput(format!(
                        "{name} is not finite at v = {v}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A one-parameter family of isometries tagged with its classification case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsometryFamily {
    pub spec: XiSpec,
    pub sign: CommutationSign,
    pub case: Case,
}

/// The commutation sign each case requires.
pub fn required_sign(case: Case) -> CommutationSign {
    match case {
        Case::Zero | Case::Positive => CommutationSign::Commuting,
        Case::Negative => CommutationSign::Anticommuting,
    }
}

impl IsometryFamily {
    /// Checks the structural requirements of the case: the commutation sign,
    /// and a constant `ξ` when `B ≠ 0`. Admissibility is checked separately by
    /// [`IsometryFamily::check_admissible`].
    pub fn new(spec: XiSpec, case: Case) -> Result<Self> {
        spec.validate()?;
        if case != Case::Zero && !spec.xi.is_constant() {
            return Err(Error::InvalidInput(format!(
                "case {case} requires a constant xi, got {}",
                spec.xi
            )));
        }
        Ok(IsometryFamily {
            spec,
            sign: required_sign(case),
            case,
        })
    }

    /// No validation at all; used to build negative controls such as a
    /// family with the wrong commutation sign.
    pub fn new_unchecked(spec: XiSpec, case: Case, sign: CommutationSign) -> Self {
        IsometryFamily { spec, sign, case }
    }

    /// The identity family `A(v) = I` on `domain`. Only admissible together
    /// with a surface that does not depend on `v`; used in tests.
    pub fn identity(case: Case, domain: (f64, f64)) -> Self {
        // ξ = π/2 with everything else zero gives rows (e1; ±e2; e3; ±e4)
        let sign = required_sign(case);
        let spec = XiSpec {
            xi: XiFn::Constant(std::f64::consts::FRAC_PI_2),
            xi1: XiFn::Constant(0.0),
            xi2: XiFn::Constant(0.0),
            xi3: XiFn::Constant(0.0),
            domain,
        };
        IsometryFamily { spec, sign, case }
    }

    pub fn domain(&self) -> (f64, f64) {
        self.spec.domain
    }

    pub fn matrix(&self, v: f64) -> Result<Mat4> {
        build_a(self, v)
    }

    /// `dA/dv`, from the analytic derivatives of the four functions.
    pub fn derivative(&self, v: f64) -> Result<Mat4> {
        self.spec.check_domain(v)?;
        let j = self.spec.jet(v);
        let s = self.sign.value();
        let (r1, d1) = first_row_with_derivative(&j);
        let (cx, sx) = (j.xi.cos(), j.xi.sin());
        let dr2 = j1(&d1) * s;
        let dr3 = j2(&d1) * cx + j3(&d1) * sx + (j3(&r1) * cx - j2(&r1) * sx) * j.dxi;
        let dr4 = (-j3(&d1) * cx + j2(&d1) * sx + (j3(&r1) * sx + j2(&r1) * cx) * j.dxi) * s;
        Ok(Mat4::from_rows(&[
            d1.transpose(),
            dr2.transpose(),
            dr3.transpose(),
            dr4.transpose(),
        ]))
    }

    /// Maximum |admissibility residual| over `n + 1` evenly spaced nodes.
    pub fn max_admissibility_residual(&self, params: &ModelParams, n: usize) -> Result<f64> {
        let (a, b) = self.domain();
        let mut worst = 0.0_f64;
        for k in 0..=n {
            let v = a + (b - a) * k as f64 / n as f64;
            worst = worst.max(admissibility_residual(self, v, params)?.abs());
        }
        Ok(worst)
    }

    pub fn check_admissible(&self, params: &ModelParams, tol: f64) -> Result<f64> {
        let worst = self.max_admissibility_residual(params, 200)?;
        if worst > tol {
            return Err(Error::InvalidInput(format!(
                "family violates the {} admissibility constraint (max residual {worst:e})",
                self.case
            )));
        }
        Ok(worst)
    }

    /// A short stable digest of the family, for report metadata.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let json = serde_json::to_vec(self).expect("family serializes");
        hex::encode(&Sha256::digest(&json)[..8])
    }
}

fn first_row(j: &XiJet) -> Vec4 {
    let (ch, sh) = (j.xi1.cosh(), j.xi1.sinh());
    Vec4::new(
        ch * j.xi2.cos(),
        -ch * j.xi2.sin(),
        sh * j.xi3.cos(),
        -sh * j.xi3.sin(),
    )
}

fn first_row_with_derivative(j: &XiJet) -> (Vec4, Vec4) {
    let (ch, sh) = (j.xi1.cosh(), j.xi1.sinh());
    let (c2, s2) = (j.xi2.cos(), j.xi2.sin());
    let (c3, s3) = (j.xi3.cos(), j.xi3.sin());
    let r = Vec4::new(ch * c2, -ch * s2, sh * c3, -sh * s3);
    let d = Vec4::new(
        sh * c2 * j.dxi1 - ch * s2 * j.dxi2,
        -sh * s2 * j.dxi1 - ch * c2 * j.dxi2,
        ch * c3 * j.dxi1 - sh * s3 * j.dxi3,
        -ch * s3 * j.dxi1 - sh * c3 * j.dxi3,
    );
    (r, d)
}

/// Assembles `A(v)` row by row.
pub fn build_a(family: &IsometryFamily, v: f64) -> Result<Mat4> {
    family.spec.check_domain(v)?;
    Ok(assemble(&family.spec.jet(v), family.sign))
}

fn assemble(j: &XiJet, sign: CommutationSign) -> Mat4 {
    let s = sign.value();
    let r1 = first_row(j);
    let (cx, sx) = (j.xi.cos(), j.xi.sin());
    let r2 = j1(&r1) * s;
    let r3 = j2(&r1) * cx + j3(&r1) * sx;
    let r4 = (-j3(&r1) * cx + j2(&r1) * sx) * s;
    Mat4::from_rows(&[
        r1.transpose(),
        r2.transpose(),
        r3.transpose(),
        r4.transpose(),
    ])
}

/// The constraint at one `v`, split as `coefficient * ξ2' + rest`.
fn constraint_terms(case: Case, params: &ModelParams, j: &XiJet) -> (f64, f64) {
    let (ch, sh) = (j.xi1.cosh(), j.xi1.sinh());
    let sh2x = (2.0 * j.xi1).sinh();
    let delta = j.xi2 - j.xi3;
    let (cd, sd) = (delta.cos(), delta.sin());
    match case {
        Case::Zero => {
            // (ξ2' + ξ3' - ξ') sinΔ sinh 2ξ1 - 2(ξ' - ξ3') sinh²ξ1
            //   + 2(ξ1' cosΔ + ξ2' cosh²ξ1)
            let coefficient = sd * sh2x + 2.0 * ch * ch;
            let rest =
                (j.dxi3 - j.dxi) * sd * sh2x - 2.0 * (j.dxi - j.dxi3) * sh * sh + 2.0 * j.dxi1 * cd;
            (coefficient, rest)
        }
        Case::Positive => (ch * ch, sh * sh * j.dxi3),
        Case::Negative => {
            let (st, ct, tau) = (params.sin_theta, params.cos_theta, params.tau);
            let coefficient = st * sd * sh2x - 2.0 * tau * ct * ch * ch;
            let rest =
                st * (2.0 * cd * j.dxi1 + j.dxi3 * sd * sh2x) - 2.0 * tau * ct * sh * sh * j.dxi3;
            (coefficient, rest)
        }
    }
}

/// Left-hand side of the case's admissibility constraint at `v`.
pub fn admissibility_residual(
    family: &IsometryFamily,
    v: f64,
    params: &ModelParams,
) -> Result<f64> {
    if family.case != params.case {
        return Err(Error::CaseMismatch {
            family: family.case.to_string(),
            params: params.case.to_string(),
        });
    }
    family.spec.check_domain(v)?;
    let j = family.spec.jet(v);
    let (coefficient, rest) = constraint_terms(family.case, params, &j);
    Ok(coefficient * j.dxi2 + rest)
}

/// Uniform grid on `[start, end]` with `steps` intervals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VGrid {
    pub start: f64,
    pub end: f64,
    pub steps: usize,
}

impl VGrid {
    pub fn new(start: f64, end: f64) -> Self {
        VGrid {
            start,
            end,
            steps: DEFAULT_SOLVE_STEPS,
        }
    }

    pub fn step(&self) -> f64 {
        (self.end - self.start) / self.steps as f64
    }
}

/// Solves the case's constraint for `ξ2` with `ξ2(grid.start) = xi2_init`.
pub fn solve_admissible(
    params: &ModelParams,
    xi: XiFn,
    xi1: XiFn,
    xi3: XiFn,
    xi2_init: f64,
    grid: VGrid,
) -> Result<IsometryFamily> {
    let case = params.case;
    if !(grid.start < grid.end) || grid.steps < 2 {
        return Err(Error::InvalidInput(format!(
            "bad solve grid [{}, {}] with {} steps",
            grid.start, grid.end, grid.steps
        )));
    }
    if case != Case::Zero && !xi.is_constant() {
        return Err(Error::InvalidInput(format!(
            "case {case} requires a constant xi, got {xi}"
        )));
    }

    let slope = |v: f64, xi2: f64| -> Result<f64> {
        let j = XiJet {
            xi: xi.value(v),
            xi1: xi1.value(v),
            xi2,
            xi3: xi3.value(v),
            dxi: xi.derivative(v),
            dxi1: xi1.derivative(v),
            dxi2: 0.0,
            dxi3: xi3.derivative(v),
        };
        let (coefficient, rest) = constraint_terms(case, params, &j);
        if !(coefficient.abs() >= SINGULAR_COEFFICIENT) {
            return Err(Error::SingularConstraint { v, coefficient });
        }
        Ok(-rest / coefficient)
    };

    let h = grid.step();
    let mut values = Vec::with_capacity(grid.steps + 1);
    let mut slopes = Vec::with_capacity(grid.steps + 1);
    let mut y = xi2_init;
    for k in 0..=grid.steps {
        let v = grid.start + h * k as f64;
        let k1 = slope(v, y)?;
        values.push(y);
        slopes.push(k1);
        if k == grid.steps {
            break;
        }
        let k2 = slope(v + 0.5 * h, y + 0.5 * h * k1)?;
        let k3 = slope(v + 0.5 * h, y + 0.5 * h * k2)?;
        let k4 = slope(v + h, y + h * k3)?;
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    let xi2 = XiFn::Sampled(HermiteTable {
        start: grid.start,
        step: h,
        values,
        slopes,
    });
    IsometryFamily::new(
        XiSpec {
            xi,
            xi1,
            xi2,
            xi3,
            domain: (grid.start, grid.end),
        },
        case,
    )
}
