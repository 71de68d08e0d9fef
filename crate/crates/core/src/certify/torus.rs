//! Linear-algebra building blocks: intertwiners, trace forms, symplectic
//! bases, and the embedding of SL_2(q^n) in Sp_2n(q) by restriction of
//! scalars.

use std::sync::Arc;

use crate::gfq::Field;
use crate::grp::GroupCtx;
use crate::matq::{gram, Form, Mat};
use crate::{Error, Result};

/// Largest solution space scanned by [`find_conjugator`].
const CONJUGATOR_SCAN: u64 = 1 << 22;

/// First invertible `g` (in the fixed scan order of the solution space)
/// with `g a = b g` and `accept(g)`.
pub fn find_conjugator(a: &Mat, b: &Mat, accept: impl Fn(&Mat) -> bool) -> Result<Option<Mat>> {
    let f = a.field().clone();
    let n = a.n();
    // unknowns g_{kl} at k*n + l; equation (i, j) of g a - b g = 0
    let mut sys = Mat::zeros(&f, n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for k in 0..n {
                let ga = sys.get(row, i * n + k);
                sys.set(row, i * n + k, f.add(ga, a.get(k, j)));
                let bg = sys.get(row, k * n + j);
                sys.set(row, k * n + j, f.sub(bg, b.get(i, k)));
            }
        }
    }
    let basis = sys.kernel();
    let q = f.order() as u64;
    let total = q.checked_pow(basis.len() as u32).filter(|&t| t <= CONJUGATOR_SCAN);
    let Some(total) = total else {
        return Err(Error::bound("conjugator scan", CONJUGATOR_SCAN as usize, usize::MAX));
    };
    let elems: Vec<u32> = f.elements().collect();
    for idx in 1..total {
        let mut coeff = vec![0u32; n * n];
        let mut rest = idx;
        for v in &basis {
            let c = elems[(rest % q) as usize];
            rest /= q;
            if c == 0 {
                continue;
            }
            for (slot, &e) in coeff.iter_mut().zip(v) {
                *slot = f.add(*slot, f.mul(c, e));
            }
        }
        let g = Mat::from_fn(&f, n, |i, j| coeff[i * n + j]);
        if g.det() != 0 && accept(&g) {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

/// `Tr_{ext/base}(a)`.
pub(crate) fn trace_to_base(ext: &Field, a: u32) -> u32 {
    let base = ext.base().expect("trace needs an extension");
    let q0 = base.order() as u64;
    let mut t = 0;
    for k in 0..ext.relative_degree() {
        t = ext.add(t, ext.frobenius(a, q0, k));
    }
    ext.restrict_to_base(t).expect("traces lie in the base field")
}

/// `u^T g v`.
fn pairing(g: &Mat, u: &[u32], v: &[u32]) -> u32 {
    let f = g.field();
    u.iter().zip(g.apply(v)).fold(0, |acc, (&a, b)| f.add(acc, f.mul(a, b)))
}

/// `P` with `P^T g P` the standard symplectic Gram matrix, by symplectic
/// Gram–Schmidt on the coordinate basis.
pub(crate) fn symplectic_basis(g: &Mat) -> Result<Mat> {
    let f = g.field().clone();
    let dim = g.n();
    let n = dim / 2;
    let mut rest: Vec<Vec<u32>> = (0..dim)
        .map(|i| {
            let mut e = vec![0; dim];
            e[i] = f.one();
            e
        })
        .collect();
    let mut cols = vec![Vec::new(); dim];
    for i in 0..n {
        let u = rest.remove(0);
        let k = rest
            .iter()
            .position(|v| pairing(g, &u, v) != 0)
            .ok_or_else(|| Error::Verification("trace form is degenerate".into()))?;
        let v = rest.remove(k);
        let c = f.inv(pairing(g, &u, &v))?;
        let v: Vec<u32> = v.iter().map(|&a| f.mul(a, c)).collect();
        for w in rest.iter_mut() {
            let (bwv, bwu) = (pairing(g, w, &v), pairing(g, w, &u));
            for t in 0..dim {
                w[t] = f.add(f.sub(w[t], f.mul(bwv, u[t])), f.mul(bwu, v[t]));
            }
        }
        cols[i] = u;
        cols[dim - 1 - i] = v;
    }
    let p = Mat::from_fn(&f, dim, |r, c| cols[c][r]);
    if p.transpose().mul(g).mul(&p) != gram(Form::Symplectic, &f, dim) {
        return Err(Error::Verification("symplectic Gram–Schmidt failed".into()));
    }
    Ok(p)
}

/// SL_2(q^n) inside Sp_2n(q), with its non-split torus of order `q^n + 1`.
#[derive(Clone, Debug)]
pub struct CoxeterSubgroup {
    /// `F_{q^n}`; equal to `F_q` when `n = 1`.
    pub ext: Arc<Field>,
    /// Generators of the image of SL_2(q^n).
    pub gens: Vec<Mat>,
    /// A generator of the torus, as a 2×2 matrix over `ext`.
    pub torus_small: Mat,
    /// `q^n + 1`.
    pub torus_order: u64,
    /// Change of basis from the trace-form coordinates to the standard ones.
    pub basis: Mat,
    /// The scalar `λ` of the trace form `Tr(λ ω(u, v))`.
    pub lambda: u32,
    /// Whether `image` restricts scalars (false when `n = 1`).
    pub restricted: bool,
}

impl CoxeterSubgroup {
    /// Image in Sp_2n(q) of a 2×2 matrix over `ext`.
    pub fn image(&self, m: &Mat) -> Mat {
        let big = if self.restricted { m.restrict_scalars() } else { m.clone() };
        self.basis.inv().expect("basis change is invertible").mul(&big).mul(&self.basis)
    }

    /// The `k`-th power of the torus generator, in Sp_2n(q).
    pub fn torus_element(&self, k: u64) -> Mat {
        self.image(&self.torus_small.pow(k as i64).expect("torus elements are invertible"))
    }

    /// Trace over `ext` of the `k`-th torus power: equal traces mean
    /// conjugate in SL_2(q^n).
    pub fn small_trace(&self, k: u64) -> u32 {
        self.torus_small.pow(k as i64).expect("invertible").trace()
    }
}

/// Builds SL_2(q^n) ↪ Sp_2n(q): `F_{q^n}^2` viewed over `F_q` with the form
/// `Tr(λ det(u, v))` for the smallest admissible `λ`, brought to the
/// standard Gram matrix by a symplectic Gram–Schmidt.
pub fn coxeter_subgroup(field: &Arc<Field>, n: usize) -> Result<CoxeterSubgroup> {
    let q = field.order() as u64;
    let ext = if n == 1 { field.clone() } else { field.extension(n as u32)? };
    let quad = ext.extension(2)?;
    let qn = ext.order() as u64;
    // ξ = γ^(q^n - 1) has order q^n + 1
    let xi = quad.pow(quad.primitive_element(), qn - 1);
    let torus_small = quad.regular_representation(xi);
    let sl2 = GroupCtx::sl(2, &ext)?;
    if n == 1 {
        let basis = Mat::identity(field, 2);
        return Ok(CoxeterSubgroup {
            ext,
            gens: sl2.generators().to_vec(),
            torus_small,
            torus_order: q + 1,
            basis,
            lambda: field.one(),
            restricted: false,
        });
    }
    // coordinates: index i*n + a stands for Y^a e_i
    let y = ext.base_generator();
    let dim = 2 * n;
    let powers: Vec<u32> = (0..n).map(|a| ext.pow(y, a as u64)).collect();
    let mut chosen = None;
    for lambda in ext.elements().filter(|&l| l != 0) {
        let g = Mat::from_fn(field, dim, |r, c| {
            let (i, a) = (r / n, r % n);
            let (j, b) = (c / n, c % n);
            let w = match (i, j) {
                (0, 1) => ext.one(),
                (1, 0) => ext.neg(ext.one()),
                _ => 0,
            };
            trace_to_base(&ext, ext.mul(lambda, ext.mul(w, ext.mul(powers[a], powers[b]))))
        });
        if g.det() != 0 {
            chosen = Some((lambda, g));
            break;
        }
    }
    let (lambda, g) = chosen.ok_or_else(|| Error::Verification("no non-degenerate trace form".into()))?;
    let basis = symplectic_basis(&g)?;
    let mut out = CoxeterSubgroup { ext, gens: vec![], torus_small, torus_order: qn + 1, basis, lambda, restricted: true };
    out.gens = sl2.generators().iter().map(|h| out.image(h)).collect();
    let sp = GroupCtx::sp(dim, field)?;
    if !out.gens.iter().all(|h| sp.contains(h)) || !sp.contains(&out.torus_element(1)) {
        return Err(Error::Verification("restricted SL_2 does not preserve the standard form".into()));
    }
    Ok(out)
}
