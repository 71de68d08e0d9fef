//! Generating sets built from root elements, and membership in Ω.

use std::sync::Arc;

use crate::gfq::Field;
use crate::matq::{antidiag, Form, Mat};

use super::{embed_j, Family, GroupCtx};

/// An F_p-basis of the field: the powers of its generator.
fn fp_basis(f: &Field) -> Vec<u32> {
    let m = f.degree() as usize;
    (0..m)
        .map(|k| {
            let mut c = vec![0; m];
            c[k] = 1;
            f.from_coeffs(&c).expect("unit vector")
        })
        .collect()
}

fn elementary(f: &Arc<Field>, n: usize, i: usize, j: usize, b: u32) -> Mat {
    let mut m = Mat::identity(f, n);
    m.set(i, j, b);
    m
}

/// Generators of the matrix group (before any quotient):
/// - SL: `I + b E_{i,i±1}`;
/// - GL: those plus `diag(ω, 1, ..., 1)` for a primitive `ω`;
/// - Sp: the Levi root elements `j(I + b E_{i,i±1})` plus the long-root
///   transvections `I + b E_{m-1,m}`, `I + b E_{m,m-1}`;
/// - Ω in odd dimension: Levi root elements plus the short-root elements
///   on the middle three coordinates;
/// - Ω in even dimension: Levi root elements plus the Siegel elements
///   `[[I, B], [0, I]]`, `[[I, 0], [B, I]]` with `B = b(E_{1,m-1} - E_{0,m-2})`;
/// - SO: Ω plus `j(diag(ν, 1, ...))` with `ν` a non-square (odd q) or the
///   reflection in `e_{m-1} + e_m` (q even).
///
/// Here `b` runs over an F_p-basis of F_q.
pub(super) fn generators(ctx: &GroupCtx) -> Vec<Mat> {
    let f = ctx.field();
    let n = ctx.n();
    let basis = fp_basis(f);
    let mut gens = Vec::new();
    match ctx.family() {
        Family::GL | Family::SL => {
            for i in 0..n.saturating_sub(1) {
                for &b in &basis {
                    gens.push(elementary(f, n, i, i + 1, b));
                    gens.push(elementary(f, n, i + 1, i, b));
                }
            }
            if ctx.family() == Family::GL && f.order() > 2 {
                let mut d = vec![f.one(); n];
                d[0] = f.primitive_element();
                gens.push(Mat::diag(f, &d));
            }
        }
        Family::Sp => {
            let m = n / 2;
            levi(f, m, Form::Symplectic, &basis, &mut gens);
            for &b in &basis {
                gens.push(elementary(f, n, m - 1, m, b));
                gens.push(elementary(f, n, m, m - 1, b));
            }
        }
        Family::SO if n % 2 == 1 => {
            let m = n / 2;
            levi(f, m, Form::OrthogonalOdd, &basis, &mut gens);
            let half = f.inv(f.from_int(2)).expect("odd characteristic");
            for &b in &basis {
                let c = f.neg(f.mul(half, f.mul(b, b)));
                let mut x = Mat::identity(f, n);
                x.set(m - 1, m, b);
                x.set(m, m + 1, f.neg(b));
                x.set(m - 1, m + 1, c);
                gens.push(x.clone());
                gens.push(x.transpose());
            }
            if !ctx.is_derived_only() {
                let mut d = vec![f.one(); m];
                d[0] = f.primitive_element();
                gens.push(embed_j(&Mat::diag(f, &d), Form::OrthogonalOdd).expect("invertible"));
            }
        }
        Family::SO => {
            let m = n / 2;
            levi(f, m, Form::OrthogonalEven, &basis, &mut gens);
            for &b in &basis {
                let mut blk = Mat::zero(f, m);
                blk.set(1, m - 1, b);
                blk.set(0, m - 2, f.neg(b));
                let id = Mat::identity(f, m);
                let z = Mat::zero(f, m);
                gens.push(Mat::from_blocks(&[vec![id.clone(), blk.clone()], vec![z.clone(), id.clone()]]));
                gens.push(Mat::from_blocks(&[vec![id.clone(), z], vec![blk, id]]));
            }
            if !ctx.is_derived_only() {
                if f.characteristic() == 2 {
                    let mut v = vec![0; n];
                    v[m - 1] = f.one();
                    v[m] = f.one();
                    let jv = antidiag(f, n).apply(&v);
                    gens.push(Mat::from_fn(f, n, |i, j| {
                        let d = if i == j { f.one() } else { 0 };
                        f.add(d, f.mul(v[i], jv[j]))
                    }));
                } else {
                    let mut d = vec![f.one(); m];
                    d[0] = f.primitive_element();
                    gens.push(embed_j(&Mat::diag(f, &d), Form::OrthogonalEven).expect("invertible"));
                }
            }
        }
    }
    gens
}

/// Root elements of the Levi factor `j(GL_m)`.
fn levi(f: &Arc<Field>, m: usize, form: Form, basis: &[u32], gens: &mut Vec<Mat>) {
    for i in 0..m.saturating_sub(1) {
        for &b in basis {
            gens.push(embed_j(&elementary(f, m, i, i + 1, b), form).expect("unipotent"));
            gens.push(embed_j(&elementary(f, m, i + 1, i, b), form).expect("unipotent"));
        }
    }
}

/// Membership of an orthogonal matrix (for the form `J`) in Ω. In odd
/// characteristic this tests whether the spinor norm, the determinant of
/// the Wall form `(u, v) ↦ B(u, y)` on `W = im(1 - x)` with `v = (1 - x) y`,
/// is a square. In characteristic 2 it tests whether `rank(1 - x)` is even.
pub(super) fn in_omega(x: &Mat) -> bool {
    let f = x.field();
    let n = x.n();
    let one_minus = Mat::identity(f, n).sub(x);
    if f.characteristic() == 2 {
        return one_minus.rank().is_multiple_of(2);
    }
    let cols = pivot_columns(&one_minus);
    if cols.is_empty() {
        return true;
    }
    let g = antidiag(f, n);
    let k = cols.len();
    let mut wall = Mat::zero(f, k);
    for (a, &ca) in cols.iter().enumerate() {
        let gw = g.apply(&one_minus.col(ca));
        for (b, &cb) in cols.iter().enumerate() {
            wall.set(a, b, gw[cb]);
        }
    }
    f.is_square(wall.det())
}

/// Indices of a maximal set of linearly independent columns, chosen
/// greedily from the left.
fn pivot_columns(m: &Mat) -> Vec<usize> {
    let f = m.field();
    let rows = m.rows();
    let mut basis: Vec<(usize, Vec<u32>)> = Vec::new();
    let mut out = Vec::new();
    for c in 0..m.cols() {
        let mut v = m.col(c);
        for (piv, b) in &basis {
            if v[*piv] != 0 {
                let t = v[*piv];
                for i in 0..rows {
                    v[i] = f.sub(v[i], f.mul(t, b[i]));
                }
            }
        }
        if let Some(piv) = (0..rows).find(|&i| v[i] != 0) {
            let inv = f.inv(v[piv]).expect("nonzero");
            for e in v.iter_mut() {
                *e = f.mul(*e, inv);
            }
            basis.push((piv, v));
            out.push(c);
        }
    }
    out
}
