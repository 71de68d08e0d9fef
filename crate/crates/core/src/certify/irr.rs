//! Classes of `j(A)` for `A` irreducible in GL_n(q), inside Sp_2n, SO_2n and
//! SO_2n+1, and the mixed-block classes of SO_6 and SO_8.

use crate::detect::{type_d_pair_search, Certificate, ClassRack, Kind, Member, SearchOpts};
use crate::gfq::Poly;
use crate::grp::{class_bound, conj_class, embed_j, Family, GroupCtx};
use crate::matq::{antidiag, charpoly, is_squarefree, poly_is_irreducible, Form, Mat};
use crate::{Error, Result};

use super::{
    finish, first_verified, group_conjugator, lifted_conjugator, pair_certificate, refuse, Applicability, Recipe,
};

fn form_of(ctx: &GroupCtx) -> Result<Form> {
    match ctx.family() {
        Family::Sp | Family::SO => Ok(ctx.form().expect("form groups")),
        _ => refuse("the recipe needs Sp or SO"),
    }
}

/// `[[I, Y], [0, I]]`, with the middle coordinate untouched in odd dimension.
fn siegel(ctx: &GroupCtx, y: &Mat) -> Mat {
    let big = ctx.n();
    let n = y.n();
    let mut u = Mat::identity(ctx.field(), big);
    u.put(0, big - n, y);
    u
}

/// Unipotent elements `[[I, Y], [0, I]]` of the group: `Y = J` first, then
/// `J K` for the all-ones skew `K`, then `E_ij + c E_{j'i'}`.
fn siegel_candidates(ctx: &GroupCtx, n: usize) -> Vec<(String, Mat)> {
    let f = ctx.field();
    let j = antidiag(f, n);
    let mut ys = vec![("J".to_string(), j.clone())];
    let skew = Mat::from_fn(f, n, |a, b| match a.cmp(&b) {
        std::cmp::Ordering::Less => f.one(),
        std::cmp::Ordering::Greater => f.neg(f.one()),
        std::cmp::Ordering::Equal => 0,
    });
    ys.push(("J·K".to_string(), j.mul(&skew)));
    for a in 0..n {
        for b in 0..n {
            for (label, c) in [("", 0), ("+", f.one()), ("-", f.neg(f.one()))] {
                let mut y = Mat::zero(f, n);
                y.set(a, b, f.one());
                if c != 0 {
                    let (pa, pb) = (n - 1 - b, n - 1 - a);
                    y.set(pa, pb, f.add(y.get(pa, pb), c));
                }
                ys.push((format!("E{a}{b}{label}"), y));
            }
        }
    }
    let mut out: Vec<(String, Mat)> = Vec::new();
    for (label, y) in ys {
        if y.is_zero() {
            continue;
        }
        let u = siegel(ctx, &y);
        if ctx.contains(&u) && !out.iter().any(|(_, v)| *v == u) {
            out.push((label, u));
        }
    }
    out
}

fn conjugate(g: &Mat, x: &Mat) -> Result<Mat> {
    Ok(g.mul(x).mul(&g.inv()?))
}

fn need<T>(x: Option<T>, what: &str) -> Result<T> {
    x.ok_or_else(|| Error::Verification(format!("no conjugator in the group for {what}")))
}

/// Certificate for the class of `j(A)`, `A` irreducible in GL_n(q): the
/// regular recipe when `j(A)` is regular, the `s_{a,b}` recipe for
/// `p_A = X² + 1` in Sp_4 with `q ≡ 3 mod 4`, and otherwise the pair
/// `U ▷ j(A)`, `j(A⁻¹)`.
pub fn irr_k_certificate(ctx: &GroupCtx, a: &Mat) -> Result<Certificate> {
    let form = form_of(ctx)?;
    let f = ctx.field().clone();
    let n = a.n();
    let big = ctx.n();
    let expected = if form == Form::OrthogonalOdd { 2 * n + 1 } else { 2 * n };
    if !a.field().same_as(&f) || big != expected {
        return Err(Error::Dimension(format!("A is {n}×{n} but the group acts on dimension {big}")));
    }
    if n < 2 {
        return refuse("A must have size at least 2");
    }
    if a.det() == 0 {
        return Err(Error::Singular);
    }
    let cp = charpoly(a);
    if !poly_is_irreducible(&cp, &f) {
        return refuse("A is reducible");
    }
    if ctx.family() == Family::SO && form == Form::OrthogonalEven && n < 3 {
        return refuse("SO_2n needs n ≥ 3");
    }
    let ja = embed_j(a, form)?;
    let regular = is_squarefree(&charpoly(&ja), &f);
    let r0 = Member::matrix(ja.clone(), Some(Mat::identity(&f, big)));
    let mut app = Applicability::default();
    app.note("charpoly_irreducible", true).note("j_regular", regular);

    if regular {
        let aq = a.pow(ctx.q() as i64)?;
        let jg = need(lifted_conjugator(ctx, a, &aq)?, "A ↦ A^q")?;
        let jaq = embed_j(&aq, form)?;
        let cands = siegel_candidates(ctx, n);
        return first_verified(cands, |(label, u)| {
            let s = conjugate(&u, &jaq)?;
            if s.block(0, big - n, n, n).is_zero() {
                return refuse("u ▷ j(A^q) is block diagonal");
            }
            let mut app = Applicability::default();
            app.note("charpoly_irreducible", true).note("j_regular", true).note("unipotent", &label);
            let s = Member::matrix(s, Some(u.mul(&jg)));
            finish(pair_certificate(ctx, &ja, Kind::TypeC, r0.clone(), s), Recipe::IrrK, app)
        });
    }

    let minus_one = f.neg(f.one());
    let x2_plus_1 = Poly::new(vec![f.one(), 0, f.one()]);
    if ctx.family() == Family::Sp && n == 2 && ctx.q() % 4 == 3 && cp == x2_plus_1 {
        let (sa, sb) = f
            .elements()
            .flat_map(|x| f.elements().map(move |y| (x, y)))
            .find(|&(x, y)| f.add(f.mul(x, x), f.mul(y, y)) == minus_one)
            .expect("a² + b² = −1 is solvable over every finite field");
        let s_ab = Mat::from_rows(&f, &[vec![sa, sb], vec![sb, f.neg(sa)]])?;
        let jg = need(lifted_conjugator(ctx, a, &s_ab)?, "A ↦ s_{a,b}")?;
        let u = siegel(ctx, &Mat::identity(&f, 2));
        let r = Member::matrix(conjugate(&u, &ja)?, Some(u));
        let s = Member::matrix(embed_j(&s_ab, form)?, Some(jg));
        app.note("exception", "Sp_4, q ≡ 3 mod 4, p_A = X² + 1").note("a_b", format!("({sa}, {sb})"));
        return finish(pair_certificate(ctx, &ja, Kind::TypeD, r, s), Recipe::IrrK, app);
    }

    if ctx.family() == Family::SO && n < 3 {
        return refuse("the non-regular case in SO needs n ≥ 3");
    }
    let a_inv = a.inv()?;
    let jg = need(lifted_conjugator(ctx, a, &a_inv)?, "A ↦ A⁻¹")?;
    let s = Member::matrix(embed_j(&a_inv, form)?, Some(jg));
    let kind = if f.characteristic() == 2 { Kind::TypeC } else { Kind::TypeD };
    first_verified(siegel_candidates(ctx, n), |(label, u)| {
        let r = Member::matrix(conjugate(&u, &ja)?, Some(u));
        let mut app = Applicability::default();
        app.note("charpoly_irreducible", true).note("j_regular", false).note("unipotent", &label);
        finish(pair_certificate(ctx, &ja, kind, r, s.clone()), Recipe::IrrK, app)
    })
}

/// Second block of a mixed SO class.
#[derive(Clone, Debug)]
pub enum SoSecond {
    /// `j(diag(A₁, c))` in SO_6.
    Scalar(u32),
    /// `j(diag(A₁, A₂))` in SO_8.
    Block(Mat),
}

/// Certificate for `j(diag(A₁, c))` in SO_6(q) or `j(diag(A₁, A₂))` in
/// SO_8(q), with `A₁`, `A₂` irreducible 2×2 blocks.
pub fn so_mixed_certificate(ctx: &GroupCtx, a1: &Mat, second: SoSecond) -> Result<Certificate> {
    if ctx.family() != Family::SO {
        return refuse("the mixed recipe needs SO or Ω");
    }
    let f = ctx.field().clone();
    if f.characteristic() == 2 {
        return refuse("the mixed recipe needs odd q");
    }
    let irreducible = |m: &Mat| m.n() == 2 && m.det() != 0 && poly_is_irreducible(&charpoly(m), &f);
    if !irreducible(a1) {
        return refuse("A₁ must be an irreducible 2×2 block");
    }
    let form = Form::OrthogonalEven;
    match second {
        SoSecond::Scalar(c) => {
            if ctx.n() != 6 {
                return Err(Error::Dimension("the scalar case lives in SO_6".into()));
            }
            if c == 0 {
                return refuse("c must be non-zero");
            }
            let d0 = Mat::block_diag(&[a1.clone(), Mat::scalar(&f, 1, c)]);
            let mut t = Mat::block_diag(&[a1.inv()?, Mat::scalar(&f, 1, c)]);
            t.set(0, 2, f.one());
            let rep = embed_j(&d0, form)?;
            let s_mat = embed_j(&t, form)?;
            let g = match lifted_conjugator(ctx, &d0, &t)? {
                Some(g) => Some(g),
                None => group_conjugator(ctx, &rep, &s_mat),
            };
            let g = need(g, "j(diag(A₁, c)) ↦ s")?;
            let c_squared_minus_one = f.mul(c, c) == f.neg(f.one());
            let kind = if c_squared_minus_one { Kind::TypeC } else { Kind::TypeD };
            let mut app = Applicability::default();
            app.note("case", "SO_6, scalar block").note("c_squared_is_minus_one", c_squared_minus_one);
            let r = Member::matrix(rep.clone(), Some(Mat::identity(&f, 6)));
            let s = Member::matrix(s_mat, Some(g));
            finish(pair_certificate(ctx, &rep, kind, r, s), Recipe::SoMixed, app)
        }
        SoSecond::Block(a2) => {
            if ctx.n() != 8 {
                return Err(Error::Dimension("the two-block case lives in SO_8".into()));
            }
            if !irreducible(&a2) {
                return refuse("A₂ must be an irreducible 2×2 block");
            }
            if charpoly(a1) == charpoly(&a2) {
                return equal_blocks(ctx, a1);
            }
            let d0 = Mat::block_diag(&[a1.clone(), a2.clone()]);
            let rep = embed_j(&d0, form)?;
            let (a1i, a2i) = (a1.inv()?, a2.inv()?);
            let configs = [
                (a1.clone(), a2.clone()),
                (a2.clone(), a1.clone()),
                (a1i.clone(), a2.clone()),
                (a1.clone(), a2i.clone()),
                (a2i, a1.clone()),
                (a2.clone(), a1i),
            ];
            let id2 = Mat::identity(&f, 2);
            let u = Mat::from_blocks(&[vec![id2.clone(), id2.clone()], vec![Mat::zero(&f, 2), id2]]);
            let ju = embed_j(&u, form)?;
            first_verified(configs.into_iter().enumerate(), |(k, (b1, b2))| {
                let d = Mat::block_diag(&[b1.clone(), b2.clone()]);
                let e = Mat::block_diag(&[b1.inv()?, b2]);
                let (Some(gd), Some(ge)) = (lifted_conjugator(ctx, &d0, &d)?, lifted_conjugator(ctx, &d0, &e)?) else {
                    return refuse("configuration not in the class");
                };
                let r = Member::matrix(conjugate(&ju, &embed_j(&d, form)?)?, Some(ju.mul(&gd)));
                let s = Member::matrix(embed_j(&e, form)?, Some(ge));
                let mut app = Applicability::default();
                app.note("case", "SO_8, two blocks").note("configuration", k);
                finish(pair_certificate(ctx, &rep, Kind::TypeD, r, s), Recipe::SoMixed, app)
            })
        }
    }
}

/// `A₁ ~ A₂`: the class of `diag(A₁, A₁)` in PSL_4(q) by a type D pair search.
fn equal_blocks(ctx: &GroupCtx, a1: &Mat) -> Result<Certificate> {
    let f = ctx.field();
    let psl4 = GroupCtx::sl(4, f)?.projective();
    let mut x = Mat::block_diag(&[a1.clone(), a1.clone()]);
    if !psl4.contains(&x) {
        // rescale into SL_4 when det A₁ = −1
        let Some(root) = f.elements().find(|&z| z != 0 && f.pow(z, 4) == f.inv(x.det()).unwrap_or(0)) else {
            return refuse("diag(A₁, A₁) has no scalar multiple in SL_4(q)");
        };
        x = x.scale(root);
    }
    let class = conj_class(&psl4, &x, class_bound())?;
    let t = ClassRack::from_class(&class);
    let cert = type_d_pair_search(&t, &SearchOpts::default());
    if cert.kind != Kind::TypeD {
        return Err(Error::Verification("no type D pair in the PSL_4 class of diag(A₁, A₁)".into()));
    }
    let mut app = Applicability::default();
    app.note("case", "SO_8, equal blocks").note("routed_to", psl4.name());
    finish(cert, Recipe::SoMixed, app)
}
