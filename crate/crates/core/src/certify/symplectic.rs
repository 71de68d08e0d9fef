//! Recipes for Sp_2n(q): regular elements of the Coxeter torus, products of
//! cuspidal blocks, and the Levi case `diag(λ, y, λ⁻¹)` of Sp_4.

use std::sync::Arc;

use crate::detect::{orbit_with_conjugators, type_c_subgroup_check, Certificate, Kind, Member, PAIR_CLOSURE_CAP};
use crate::gfq::{Field, Poly};
use crate::grp::{Family, GroupCtx};
use crate::matq::{charpoly, is_regular, poly_is_irreducible, Mat};
use crate::{Error, Result};

use super::{coxeter_subgroup, find_conjugator, finish, pair_certificate, refuse, subgroup_certificate, Applicability, Recipe};

fn require_sp(ctx: &GroupCtx) -> Result<usize> {
    if ctx.family() != Family::Sp {
        return refuse("the recipe needs Sp_2n(q)");
    }
    Ok(ctx.n() / 2)
}

/// Type C certificate for a regular `x` with `x^(q^n+1) = 1`, through the
/// subgroup SL_2(q^n) whose torus of order `q^n + 1` contains a conjugate
/// `x'` of `x`, with `s = x'^q`.
pub fn coxeter_certificate(ctx: &GroupCtx, x: &Mat) -> Result<Certificate> {
    let n = require_sp(ctx)?;
    let f = ctx.field().clone();
    let q = ctx.q();
    if !ctx.contains(x) {
        return Err(Error::NotMember(ctx.name()));
    }
    if !is_regular(x) {
        return refuse("x is not regular");
    }
    let qn = q.pow(n as u32);
    if !x.pow(qn as i64 + 1)?.is_identity() {
        return refuse(format!("the order of x does not divide q^n + 1 = {}", qn + 1));
    }
    let cox = coxeter_subgroup(&f, n)?;
    let target = charpoly(x);
    let hits: Vec<u64> = (0..cox.torus_order).filter(|&k| charpoly(&cox.torus_element(k)) == target).collect();
    let Some(&k0) = hits.first() else {
        return Err(Error::Refused("x is not conjugate into the constructed torus".into()));
    };
    let x1 = cox.torus_element(k0);
    let h_classes = (0..cox.torus_order).filter(|&k| cox.small_trace(k) == cox.small_trace(k0)).count();
    let minus_outside = f.characteristic() == 2 || charpoly(&x.neg()) != target;
    if ctx.is_projective() && !minus_outside {
        return refuse("−x lies in the class of x");
    }
    let s = x1.pow(q as i64)?;
    let mut cert = type_c_subgroup_check(
        ctx,
        x,
        &cox.gens,
        &Member::matrix(x1.clone(), None),
        &Member::matrix(s, None),
        PAIR_CLOSURE_CAP,
    )?;
    if ctx.is_projective() {
        cert.checks.insert("projection_injective".into(), true);
    }
    cert.search_bound = "explicit construction".into();
    let mut app = Applicability::default();
    for (k, v) in &cert.applicability {
        app.note(k, v);
    }
    app.note("torus_order", cox.torus_order)
        .note("class_meets_torus", hits.len())
        .note("h_orbit_meets_torus", h_classes)
        .note("minus_x_outside_class", minus_outside)
        .note("trace_form_lambda", cox.lambda)
        .note("orbit_sizes", format!("{:?}", cert.witness.orbit_sizes));
    finish(cert, Recipe::Coxeter, app)
}

/// Embeds blocks `x_j ∈ Sp_2d_j(q)` block-diagonally in Sp_2n(q): block `j`
/// acts on coordinates `o_j..o_j+d_j` and their mirror images.
pub fn embed_blocks(field: &Arc<Field>, blocks: &[Mat]) -> Result<Mat> {
    if blocks.iter().any(|b| b.n() % 2 != 0) {
        return Err(Error::Dimension("symplectic blocks have even size".into()));
    }
    let n: usize = blocks.iter().map(|b| b.n() / 2).sum();
    let big = 2 * n;
    let mut out = Mat::zero(field, big);
    let mut offset = 0;
    for b in blocks {
        let d = b.n() / 2;
        let place = |a: usize| if a < d { offset + a } else { big - offset - 2 * d + a };
        for a in 0..2 * d {
            for c in 0..2 * d {
                out.set(place(a), place(c), b.get(a, c));
            }
        }
        offset += d;
    }
    Ok(out)
}

/// Type C certificate for `x = (x_1, ..., x_t)` with `t ≥ 2` cuspidal
/// blocks: `H = <r_out, s_out> × SL_2(q^{d_k})`, where the pivot block
/// differs between `r` and `s` (`x_i` against `x_i^q`) and block `k`
/// runs through an SL_2(q^{d_k})-orbit.
pub fn cuspidal_product_certificate(ctx: &GroupCtx, blocks: &[Mat]) -> Result<Certificate> {
    let n = require_sp(ctx)?;
    let f = ctx.field().clone();
    let q = ctx.q() as i64;
    if blocks.len() < 2 {
        return refuse("a single cuspidal block: use the coxeter recipe");
    }
    if blocks.iter().map(|b| b.n() / 2).sum::<usize>() != n {
        return Err(Error::Dimension("block sizes do not add up to n".into()));
    }
    for (j, b) in blocks.iter().enumerate() {
        if !GroupCtx::sp(b.n(), &f)?.contains(b) {
            return Err(Error::NotMember(format!("block {j} in Sp_{}", b.n())));
        }
        if b.as_scalar().is_some() {
            return refuse(format!("block {j} is central"));
        }
        if b.pow(q)? == *b {
            return refuse(format!("block {j} satisfies x^q = x: x would lie in a non-cuspidal torus"));
        }
    }
    let twisted: Vec<Mat> = blocks.iter().map(|b| b.pow(q)).collect::<Result<_>>()?;
    let flips: Vec<bool> = blocks.iter().zip(&twisted).map(|(b, t)| *b == t.neg()).collect();
    if ctx.is_projective() && blocks.len() == 2 && flips.iter().all(|&v| v) {
        return refuse("both blocks satisfy x_i = −x_i^q: then |x| divides 4");
    }
    let x = embed_blocks(&f, blocks)?;
    let pivot = if ctx.is_projective() { flips.iter().position(|&v| !v).unwrap_or(0) } else { 0 };
    let k = if pivot == 0 { 1 } else { 0 };
    let dk = blocks[k].n() / 2;
    let cox = coxeter_subgroup(&f, dk)?;
    let target = charpoly(&blocks[k]);
    let kk = (0..cox.torus_order)
        .find(|&e| charpoly(&cox.torus_element(e)) == target)
        .ok_or_else(|| Error::Refused(format!("block {k} is not conjugate into the Coxeter torus of Sp_{}", 2 * dk)))?;
    let xk = cox.torus_element(kk);

    let with = |i_block: Option<&Mat>, k_block: &Mat| -> Result<Mat> {
        let mut bs = blocks.to_vec();
        if let Some(b) = i_block {
            bs[pivot] = b.clone();
        }
        bs[k] = k_block.clone();
        embed_blocks(&f, &bs)
    };
    let id_k = Mat::identity(&f, 2 * dk);
    let r = with(None, &xk)?;
    let r_out = with(None, &id_k)?;
    let s_out = with(Some(&twisted[pivot]), &id_k)?;
    let small = GroupCtx::sp(2 * dk, &f)?;
    let orbit = orbit_with_conjugators(&small, &cox.gens, &xk, PAIR_CLOSURE_CAP)?;
    let mut s = None;
    for (y, _) in &orbit {
        let cand = with(Some(&twisted[pivot]), y)?;
        if !ctx.commute(&r, &cand) {
            s = Some(cand);
            break;
        }
    }
    let s = s.ok_or_else(|| Error::Verification("no element of the block orbit moves r".into()))?;
    let embed_k = |h: &Mat| {
        let mut bs: Vec<Mat> = blocks.iter().map(|b| Mat::identity(&f, b.n())).collect();
        bs[k] = h.clone();
        embed_blocks(&f, &bs)
    };
    let mut gens = vec![r_out, s_out];
    for h in &cox.gens {
        gens.push(embed_k(h)?);
    }
    let mut app = Applicability::default();
    app.note("blocks", blocks.len())
        .note("pivot_block", pivot)
        .note("orbit_block", k)
        .note("pivot_twist_differs", true)
        .note("pivot_not_minus_twist", !flips[pivot]);
    let cert = subgroup_certificate(ctx, &x, &gens, Member::matrix(r, None), Member::matrix(s, None), PAIR_CLOSURE_CAP);
    finish(cert, Recipe::Cuspidal, app)
}

/// The first `(λ, z)` in canonical order with `λ ≠ 0` and `X² − zX + 1`
/// irreducible over `F_q`.
pub fn sp4_levi_parameters(field: &Arc<Field>) -> Option<(u32, u32)> {
    let z = field.elements().find(|&z| levi_poly_irreducible(field, z))?;
    Some((field.one(), z))
}

fn levi_poly_irreducible(f: &Field, z: u32) -> bool {
    poly_is_irreducible(&Poly::new(vec![f.one(), f.neg(z), f.one()]), f)
}

/// Certificate for `x = diag(λ, y, λ⁻¹)` in Sp_4(q) with `y` of trace `z`
/// irreducible in SL_2(q): `r` a unipotent conjugate of `x`, `s = diag(λ⁻¹,
/// y⁻¹, λ)`; type C when `p = 2`, type D otherwise.
pub fn sp4_levi_certificate(ctx: &GroupCtx, lambda: u32, z: u32) -> Result<Certificate> {
    let n = require_sp(ctx)?;
    if n != 2 {
        return Err(Error::Dimension("the Levi recipe lives in Sp_4".into()));
    }
    let f = ctx.field().clone();
    if lambda == 0 {
        return Err(Error::Invalid("λ must be non-zero".into()));
    }
    if !levi_poly_irreducible(&f, z) {
        return refuse(format!("X² − {z}X + 1 is reducible"));
    }
    let li = f.inv(lambda)?;
    let one = f.one();
    let y = Mat::from_rows(&f, &[vec![0, one], vec![f.neg(one), z]])?;
    let x = Mat::block_diag(&[Mat::scalar(&f, 1, lambda), y.clone(), Mat::scalar(&f, 1, li)]);
    if ctx.is_central(&x) {
        return refuse("x is central");
    }
    let g1 = [one, f.neg(one)]
        .into_iter()
        .map(|c| {
            let mut g = Mat::identity(&f, 4);
            g.set(0, 1, one);
            g.set(2, 3, c);
            g
        })
        .find(|g| ctx.contains(g))
        .ok_or_else(|| Error::Verification("no unipotent conjugator in Sp_4".into()))?;
    let y_inv = y.inv()?;
    let m = find_conjugator(&y, &y_inv, |m| m.det() == one)?
        .ok_or_else(|| Error::Verification("y is not SL_2-conjugate to y⁻¹".into()))?;
    let g2 = [one, f.neg(one)]
        .into_iter()
        .map(|c| {
            let mut g = Mat::zero(&f, 4);
            g.set(0, 3, c);
            g.set(3, 0, f.neg(c));
            g.put(1, 1, &m);
            g
        })
        .find(|g| ctx.contains(g))
        .ok_or_else(|| Error::Verification("no Weyl flip in Sp_4".into()))?;
    let r = Member::matrix(g1.mul(&x).mul(&g1.inv()?), Some(g1));
    let s = Member::matrix(g2.mul(&x).mul(&g2.inv()?), Some(g2));
    let kind = if f.characteristic() == 2 { Kind::TypeC } else { Kind::TypeD };
    let mut app = Applicability::default();
    app.note("lambda", lambda).note("z", z).note("quadratic_irreducible", true);
    finish(pair_certificate(ctx, &x, kind, r, s), Recipe::Sp4Levi, app)
}
