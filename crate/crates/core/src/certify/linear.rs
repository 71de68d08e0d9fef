//! Irreducible classes of PSL_n(q) with `n = c d` composite, through the
//! subgroup SL_c(q^d) viewed over `F_q`.

use num_prime::nt_funcs::{factorize64, is_prime64};

use crate::detect::{orbit_with_conjugators, Certificate, Member, PAIR_CLOSURE_CAP};
use crate::grp::{Family, GroupCtx};
use crate::matq::{charpoly, poly_is_irreducible, Mat};
use crate::{Error, Result};

use super::{finish, first_verified, refuse, subgroup_certificate, Applicability, Recipe};

/// Type C certificate for an irreducible class of SL_n(q) or PSL_n(q) with
/// `n = c d`, `c` prime, `d ≥ 2`. When `x` is omitted the first irreducible
/// power of a Singer cycle with determinant 1 is used.
pub fn psl_composite_certificate(ctx: &GroupCtx, c: usize, x: Option<&Mat>) -> Result<Certificate> {
    if ctx.family() != Family::SL {
        return refuse("the composite recipe needs SL_n(q) or PSL_n(q)");
    }
    let n = ctx.n();
    let f = ctx.field().clone();
    if c < 2 || !n.is_multiple_of(c) || !is_prime64(c as u64) {
        return refuse(format!("c = {c} is not a prime divisor of n = {n}"));
    }
    if n / c < 2 {
        return refuse("n / c must be at least 2");
    }
    let ext_n = f.extension(n as u32)?;
    let singer = ext_n.regular_representation(ext_n.primitive_element());
    let order = ext_n.order() as i64 - 1;
    let x = match x {
        Some(x) => {
            if !ctx.linear().contains(x) {
                return Err(Error::NotMember(ctx.linear().name()));
            }
            if !poly_is_irreducible(&charpoly(x), &f) {
                return refuse("x is reducible: its characteristic polynomial has a proper factor");
            }
            x.clone()
        }
        None => (1..order)
            .map(|k| singer.pow(k).expect("invertible"))
            .find(|t| t.det() == f.one() && poly_is_irreducible(&charpoly(t), &f) && !ctx.is_central(t))
            .ok_or_else(|| Error::Refused("no irreducible element of determinant 1 in the Singer torus".into()))?,
    };
    let mut primes = vec![c];
    primes.extend(factorize64(n as u64).into_keys().map(|p| p as usize).filter(|&p| p != c && n / p >= 2));
    first_verified(primes, |c| attempt(ctx, &x, c))
}

fn attempt(ctx: &GroupCtx, x: &Mat, c: usize) -> Result<Certificate> {
    let f = ctx.field().clone();
    let n = ctx.n();
    let d = n / c;
    let ext_d = f.extension(d as u32)?;
    let ext_n = ext_d.extension(c as u32)?;
    let torus = ext_n.regular_representation(ext_n.primitive_element()).restrict_scalars();
    let target = charpoly(x);
    let order = ext_n.order() as i64 - 1;
    let x1 = (0..order)
        .map(|k| torus.pow(k).expect("invertible"))
        .find(|t| charpoly(t) == target)
        .ok_or_else(|| Error::Verification("x is not conjugate into the Singer torus".into()))?;
    let m1: Vec<Mat> = GroupCtx::sl(c, &ext_d)?.generators().iter().map(|g| g.restrict_scalars()).collect();
    let xq = x1.pow(ctx.q() as i64)?;
    let orbit = orbit_with_conjugators(ctx, &m1, &xq, PAIR_CLOSURE_CAP)?;
    let s = orbit
        .into_iter()
        .map(|(y, _)| y)
        .find(|y| !ctx.commute(&x1, y) && !ctx.linear().commute(&x1, y))
        .ok_or_else(|| Error::Verification("every M₁-conjugate of x^q commutes with x".into()))?;
    let mut gens = vec![x1.clone(), s.clone()];
    gens.extend(m1);
    let mut app = Applicability::default();
    app.note("c", c).note("d", d).note("x_irreducible", true).note("subgroup", format!("SL_{c}(q^{d})"));
    let cert = subgroup_certificate(ctx, x, &gens, Member::matrix(x1, None), Member::matrix(s, None), PAIR_CLOSURE_CAP);
    finish(cert, Recipe::PslComposite, app)
}
