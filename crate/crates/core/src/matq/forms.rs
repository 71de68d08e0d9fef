use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gfq::Field;

use super::Mat;

/// The bilinear forms defining the classical groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Form {
    /// `[[0, J_n], [-J_n, 0]]` on `F^{2n}`.
    Symplectic,
    /// `J_{2n+1}`, odd characteristic only.
    OrthogonalOdd,
    /// `J_{2n}`, with the quadratic form `Σ x_i x_{2n+1-i}` when `p = 2`.
    OrthogonalEven,
}

/// The antidiagonal identity `J_m`.
pub fn antidiag(field: &Arc<Field>, m: usize) -> Mat {
    let mut j = Mat::zero(field, m);
    for i in 0..m {
        j.set(i, m - 1 - i, field.one());
    }
    j
}

/// Gram matrix of `form` in dimension `dim`.
pub fn gram(form: Form, field: &Arc<Field>, dim: usize) -> Mat {
    match form {
        Form::Symplectic => {
            assert!(dim.is_multiple_of(2), "symplectic forms live in even dimension");
            let n = dim / 2;
            let j = antidiag(field, n);
            Mat::from_blocks(&[
                vec![Mat::zero(field, n), j.clone()],
                vec![j.neg(), Mat::zero(field, n)],
            ])
        }
        Form::OrthogonalOdd | Form::OrthogonalEven => antidiag(field, dim),
    }
}

/// `φ(A) = J · ᵗA⁻¹ · J`.
pub fn phi(a: &Mat) -> Result<Mat> {
    let j = antidiag(a.field(), a.n());
    Ok(j.mul(&a.inv()?.transpose()).mul(&j))
}

/// Whether `a` lies in the group of `form`: preserves the Gram matrix, has
/// determinant 1 for the orthogonal groups, and in characteristic 2 for even
/// dimension also kills the diagonals of `ᵗC J A` and `ᵗB J D`.
pub fn form_membership(a: &Mat, form: Form) -> bool {
    if !a.is_square() {
        return false;
    }
    let field = a.field();
    let dim = a.n();
    let p = field.characteristic();
    match form {
        Form::Symplectic if !dim.is_multiple_of(2) => return false,
        Form::OrthogonalOdd if dim.is_multiple_of(2) || p == 2 => return false,
        Form::OrthogonalEven if !dim.is_multiple_of(2) => return false,
        _ => {}
    }
    let g = gram(form, field, dim);
    if a.transpose().mul(&g).mul(a) != g {
        return false;
    }
    if form == Form::Symplectic {
        return true;
    }
    if a.det() != field.one() {
        return false;
    }
    if form == Form::OrthogonalEven && p == 2 {
        let n = dim / 2;
        let j = antidiag(field, n);
        let (ba, bb) = (a.block(0, 0, n, n), a.block(0, n, n, n));
        let (bc, bd) = (a.block(n, 0, n, n), a.block(n, n, n, n));
        let x = bc.transpose().mul(&j).mul(&ba);
        let y = bb.transpose().mul(&j).mul(&bd);
        if (0..n).any(|i| x.get(i, i) != 0 || y.get(i, i) != 0) {
            return false;
        }
    }
    true
}
