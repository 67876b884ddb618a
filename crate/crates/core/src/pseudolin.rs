//! Linear algebra of the pseudo-Euclidean space R^4_2.
//!
//! The inner product has signature (+,+,-,-). Besides the inner product this
//! module carries the complex structure `J1` and the two product structures
//! `J2`, `J3`, membership tests for the indefinite orthogonal group `O2(4)`
//! and its `J1`-compatible subgroup `U1(2)`, and a small nullspace solver used
//! to find surface normals.

use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec4 = Vector4<f64>;
pub type Mat4 = Matrix4<f64>;

/// Relative pivot threshold used by [`nullspace3`].
pub const NULLSPACE_PIVOT_TOL: f64 = 1e-10;

/// `diag(1, 1, -1, -1)`.
pub fn epsilon() -> Mat4 {
    Mat4::from_diagonal(&Vec4::new(1.0, 1.0, -1.0, -1.0))
}

/// Inner product of signature (2,2).
#[inline]
pub fn dot22(v: &Vec4, w: &Vec4) -> f64 {
    v[0] * w[0] + v[1] * w[1] - v[2] * w[2] - v[3] * w[3]
}

/// Lowers the index of `v`, so that `dot22(v, w) == lower(v).dot(w)`.
#[inline]
pub fn lower(v: &Vec4) -> Vec4 {
    Vec4::new(v[0], v[1], -v[2], -v[3])
}

/// The structure `J_k` as a matrix, `k` in `{1, 2, 3}`.
pub fn j_matrix(k: usize) -> Result<Mat4> {
    #[rustfmt::skip]
    let m = match k {
        1 => Mat4::new(
            0.0, -1.0, 0.0,  0.0,
            1.0,  0.0, 0.0,  0.0,
            0.0,  0.0, 0.0, -1.0,
            0.0,  0.0, 1.0,  0.0,
        ),
        2 => Mat4::new(
            0.0, 0.0, 0.0, 1.0,
            0.0, 0.0, 1.0, 0.0,
            0.0, 1.0, 0.0, 0.0,
            1.0, 0.0, 0.0, 0.0,
        ),
        3 => Mat4::new(
            0.0,  0.0, 1.0,  0.0,
            0.0,  0.0, 0.0, -1.0,
            1.0,  0.0, 0.0,  0.0,
            0.0, -1.0, 0.0,  0.0,
        ),
        _ => return Err(Error::InvalidInput(format!("J index must be 1, 2 or 3, got {k}"))),
    };
    Ok(m)
}

/// `J_k v`, `k` in `{1, 2, 3}`.
pub fn apply_j(k: usize, v: &Vec4) -> Result<Vec4> {
    match k {
        1 => Ok(j1(v)),
        2 => Ok(j2(v)),
        3 => Ok(j3(v)),
        _ => Err(Error::InvalidInput(format!(
            "J index must be 1, 2 or 3, got {k}"
        ))),
    }
}

#[inline]
pub fn j1(v: &Vec4) -> Vec4 {
    Vec4::new(-v[1], v[0], -v[3], v[2])
}

#[inline]
pub fn j2(v: &Vec4) -> Vec4 {
    Vec4::new(v[3], v[2], v[1], v[0])
}

#[inline]
pub fn j3(v: &Vec4) -> Vec4 {
    Vec4::new(v[2], -v[3], v[0], -v[1])
}

fn max_abs(m: &Mat4) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// `‖Mᵗ ε M − ε‖_max`.
pub fn orthogonality_defect(m: &Mat4) -> f64 {
    let e = epsilon();
    max_abs(&(m.transpose() * e * m - e))
}

/// True iff `M` preserves the (2,2) inner product to within `tol` (max-norm).
pub fn is_indefinite_orthogonal(m: &Mat4, tol: f64) -> bool {
    orthogonality_defect(m) <= tol
}

/// Whether an element of `U1(2)` commutes or anticommutes with `J1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommutationSign {
    Commuting,
    Anticommuting,
}

impl CommutationSign {
    pub fn value(self) -> f64 {
        match self {
            CommutationSign::Commuting => 1.0,
            CommutationSign::Anticommuting => -1.0,
        }
    }
}

/// Returns the pair (`‖MJ₁ − J₁M‖_max`, `‖MJ₁ + J₁M‖_max`).
pub fn commutation_defects(m: &Mat4) -> (f64, f64) {
    let j = j_matrix(1).expect("J1 exists");
    let mj = m * j;
    let jm = j * m;
    (max_abs(&(mj - jm)), max_abs(&(mj + jm)))
}

pub fn j1_commutation_sign(m: &Mat4, tol: f64) -> Result<CommutationSign> {
    let (commute, anticommute) = commutation_defects(m);
    if commute <= tol {
        Ok(CommutationSign::Commuting)
    } else if anticommute <= tol {
        Ok(CommutationSign::Anticommuting)
    } else {
        Err(Error::NotInU12)
    }
}

/// A nonzero vector annihilated by the three rows, by Gaussian elimination
/// with pivoting over rows and unused columns. The result is not normalized.
pub fn nullspace3(c1: &Vec4, c2: &Vec4, c3: &Vec4) -> Result<Vec4> {
    let mut rows = [*c1, *c2, *c3];
    let scale = rows
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0_f64, |acc, x| acc.max(x.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::DegenerateTangentPlane { pivot: 0.0 });
    }
    let threshold = NULLSPACE_PIVOT_TOL * scale;

    let mut used = [false; 4];
    let mut pivot_cols = [0usize; 3];
    for r in 0..3 {
        // full search over the unused columns of the remaining rows
        let mut best = (r, 0usize, 0.0_f64);
        for (i, row) in rows.iter().enumerate().skip(r) {
            for (c, &is_used) in used.iter().enumerate() {
                if !is_used && row[c].abs() > best.2 {
                    best = (i, c, row[c].abs());
                }
            }
        }
        let (pr, pc, pv) = best;
        if pv <= threshold {
            return Err(Error::DegenerateTangentPlane { pivot: pv });
        }
        rows.swap(r, pr);
        used[pc] = true;
        pivot_cols[r] = pc;
        let pivot_row = rows[r] / rows[r][pc];
        rows[r] = pivot_row;
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r {
                let f = row[pc];
                *row -= pivot_row * f;
            }
        }
    }

    let free = (0..4).find(|c| !used[*c]).expect("one free column");
    let mut n = Vec4::zeros();
    n[free] = 1.0;
    for r in 0..3 {
        n[pivot_cols[r]] = -rows[r][free];
    }
    Ok(n)
}
