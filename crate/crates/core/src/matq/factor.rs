use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gfq::{Field, Poly};

use super::{charpoly, Mat};

/// Irreducibility over `f`: no common factor with `X^{q^i} - X` for any
/// `i ≤ deg/2`.
pub fn poly_is_irreducible(g: &Poly, f: &Field) -> bool {
    let Some(n) = g.degree() else {
        return false;
    };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let q = f.order() as u64;
    let x = Poly::x(f);
    let mut h = x.rem(g, f);
    for _ in 1..=n / 2 {
        h = h.powmod(q, g, f);
        if !g.gcd(&h.sub(&x, f), f).is_one(f) {
            return false;
        }
    }
    true
}

/// Squarefree test through `gcd(g, g')`; a vanishing derivative makes a
/// nonconstant `g` a `p`-th power.
pub fn is_squarefree(g: &Poly, f: &Field) -> bool {
    if g.deg() == 0 {
        return true;
    }
    g.gcd(&g.derivative(f), f).is_one(f)
}

/// Factors a monic polynomial into monic irreducibles, with multiplicity.
///
/// Runs squarefree decomposition, then distinct-degree splitting, and finally
/// separates equal-degree products by enumerating roots in the explicit
/// extension field. Output is sorted by degree, then by coefficients.
pub fn poly_factor(g: &Poly, field: &Arc<Field>) -> Result<Vec<Poly>> {
    let f = &**field;
    if g.degree().is_none_or(|d| d == 0) {
        return Err(Error::Precondition("factorization needs degree ≥ 1".into()));
    }
    let g = g.monic(f);
    let mut out = Vec::new();
    for (part, mult) in squarefree_decomposition(&g, f) {
        for (prod, d) in distinct_degree(&part, f) {
            for fac in equal_degree(&prod, d, field)? {
                for _ in 0..mult {
                    out.push(fac.clone());
                }
            }
        }
    }
    out.sort_by(|a, b| {
        a.deg()
            .cmp(&b.deg())
            .then_with(|| a.coeffs().iter().cmp(b.coeffs().iter()))
    });
    Ok(out)
}

fn squarefree_decomposition(g: &Poly, f: &Field) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let p = f.characteristic() as usize;
    let mut c = g.gcd(&g.derivative(f), f);
    let mut w = g.divrem(&c, f).0;
    let mut i = 1;
    while !w.is_one(f) {
        let y = w.gcd(&c, f);
        let fac = w.divrem(&y, f).0;
        if !fac.is_one(f) {
            out.push((fac, i));
        }
        w = y;
        c = c.divrem(&w, f).0;
        i += 1;
    }
    if !c.is_one(f) {
        // c is a p-th power
        let root_exp = (f.order() / f.characteristic()) as u64;
        let root = Poly::new(
            c.coeffs()
                .iter()
                .step_by(p)
                .map(|&a| f.pow(a, root_exp))
                .collect(),
        );
        for (fac, m) in squarefree_decomposition(&root, f) {
            out.push((fac, m * p));
        }
    }
    out
}

fn distinct_degree(g: &Poly, f: &Field) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let q = f.order() as u64;
    let x = Poly::x(f);
    let mut rest = g.clone();
    let mut h = x.rem(&rest, f);
    let mut d = 0;
    while rest.deg() >= 2 * (d + 1) {
        d += 1;
        h = h.powmod(q, &rest, f);
        let common = rest.gcd(&h.sub(&x, f), f);
        if !common.is_one(f) {
            rest = rest.divrem(&common, f).0;
            h = h.rem(&rest, f);
            out.push((common, d));
        }
    }
    if rest.deg() > 0 {
        let dd = rest.deg();
        out.push((rest, dd));
    }
    out
}

fn equal_degree(g: &Poly, d: usize, field: &Arc<Field>) -> Result<Vec<Poly>> {
    let f = &**field;
    if g.deg() == d {
        return Ok(vec![g.clone()]);
    }
    let ext = field.extension(d as u32)?;
    let lifted = Poly::new(g.coeffs().iter().map(|&c| ext.embed_base(c)).collect());
    let q = f.order() as u64;
    let mut used = std::collections::HashSet::new();
    let mut out = Vec::new();
    for z in ext.elements() {
        if used.contains(&z) || lifted.eval(z, &ext) != 0 {
            continue;
        }
        let mut prod = Poly::one(&ext);
        let mut r = z;
        for _ in 0..d {
            used.insert(r);
            prod = prod.mul(&Poly::linear(&ext, r), &ext);
            r = ext.pow(r, q);
        }
        let coeffs = prod
            .coeffs()
            .iter()
            .map(|&c| ext.restrict_to_base(c).expect("Frobenius-stable product"))
            .collect();
        out.push(Poly::new(coeffs));
        if out.len() * d == g.deg() {
            break;
        }
    }
    Ok(out)
}

/// A root of an irreducible characteristic polynomial together with its
/// Frobenius orbit, all inside the explicitly constructed extension.
#[derive(Clone, Debug)]
pub struct EigenOrbit {
    pub extension: Arc<Field>,
    pub root: u32,
    pub orbit: Vec<u32>,
}

/// The smallest root (canonical order) of the irreducible characteristic
/// polynomial of `a`, and its orbit `ζ, ζ^q, ..., ζ^{q^{n-1}}`.
pub fn eigenvalue_orbit(a: &Mat) -> Result<EigenOrbit> {
    let field = a.field();
    let p = charpoly(a);
    if !poly_is_irreducible(&p, field) {
        return Err(Error::Reducible);
    }
    let n = p.deg();
    let ext = field.extension(n as u32)?;
    let lifted = Poly::new(p.coeffs().iter().map(|&c| ext.embed_base(c)).collect());
    let root = ext
        .elements()
        .find(|&z| lifted.eval(z, &ext) == 0)
        .expect("irreducible polynomial splits in its degree extension");
    let q = field.order() as u64;
    let mut orbit = Vec::with_capacity(n);
    let mut r = root;
    for _ in 0..n {
        orbit.push(r);
        r = ext.pow(r, q);
    }
    Ok(EigenOrbit {
        extension: ext,
        root,
        orbit,
    })
}
