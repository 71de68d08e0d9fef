//! Classes meeting the split diagonal torus of Sp and SO: the subrack
//! `x U_α ⊔ s_α(x) U_α` for a simple root `α` moving `x`.

use crate::detect::{Certificate, Member};
use crate::grp::{Family, GroupCtx};
use crate::matq::Mat;
use crate::Result;

use super::{finish, refuse, subrack_certificate, Applicability, Recipe};

/// A root subgroup `t ↦ exp(t X)` for a nilpotent `X` with `X³ = 0`.
struct RootGroup {
    x: Mat,
    square: Option<Mat>,
}

impl RootGroup {
    fn new(x: Mat) -> Self {
        let sq = x.mul(&x);
        RootGroup { x, square: (!sq.is_zero()).then_some(sq) }
    }

    fn at(&self, t: u32) -> Mat {
        let f = self.x.field();
        let mut m = Mat::identity(f, self.x.n()).add(&self.x.scale(t));
        if let Some(sq) = &self.square {
            let half = f.inv(f.from_int(2)).expect("X² ≠ 0 only in odd characteristic");
            m = m.add(&sq.scale(f.mul(half, f.mul(t, t))));
        }
        m
    }
}

/// `E_{a,b} + c E_{b',a'}` with `k' = N − 1 − k`, or `E_{a,b}` when `b = a'`,
/// for the sign `c` that puts the root group inside the group.
fn root_group(ctx: &GroupCtx, a: usize, b: usize) -> Option<RootGroup> {
    let f = ctx.field();
    let big = ctx.n();
    let prime = |k: usize| big - 1 - k;
    let signs = if b == prime(a) { vec![0] } else { vec![f.one(), f.neg(f.one())] };
    signs.into_iter().find_map(|c| {
        let mut x = Mat::zero(f, big);
        x.set(a, b, f.one());
        if c != 0 {
            x.set(prime(b), prime(a), c);
        }
        let g = RootGroup::new(x);
        let ok = f.elements().filter(|&t| t != 0).all(|t| ctx.contains(&g.at(t)));
        ok.then_some(g)
    })
}

/// The simple roots in the order tried: the Levi roots `(i, i+1)`, then the
/// last simple root of the type.
fn simple_roots(ctx: &GroupCtx) -> Vec<(usize, usize)> {
    let n = ctx.n() / 2;
    let mut out: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    match (ctx.family(), ctx.n() % 2) {
        (Family::Sp, _) | (Family::SO, 1) => out.push((n - 1, n)),
        _ => out.push((n - 2, n)),
    }
    out
}

/// Torus coordinates `t_1, ..., t_n` of a diagonal element of the torus.
fn torus_coords(ctx: &GroupCtx, x: &Mat) -> Option<Vec<u32>> {
    let f = ctx.field();
    let big = ctx.n();
    let diagonal = (0..big).all(|i| (0..big).all(|j| i == j || x.get(i, j) == 0));
    if !diagonal || !ctx.contains_ambient(x) {
        return None;
    }
    let ok = (0..big).all(|i| f.mul(x.get(i, i), x.get(big - 1 - i, big - 1 - i)) == f.one());
    ok.then(|| (0..big / 2).map(|i| x.get(i, i)).collect())
}

/// The special situation: Sp_4 with `x = ±j(diag(1, −1))`, or odd SO with
/// `x = diag(−I, 1, −I)` (for odd rank only when `q ≡ 1 mod 4`).
fn special_situation(ctx: &GroupCtx, t: &[u32]) -> bool {
    let f = ctx.field();
    if f.characteristic() == 2 {
        return false;
    }
    let one = f.one();
    let minus = f.neg(one);
    match (ctx.family(), ctx.n()) {
        (Family::Sp, 4) => t[1] == f.neg(t[0]) && f.mul(t[0], t[0]) == one,
        (Family::SO, big) if big % 2 == 1 => {
            let rank = big / 2;
            t.iter().all(|&v| v == minus) && (rank % 2 == 0 || ctx.q() % 4 == 1)
        }
        _ => false,
    }
}

/// Type C certificate for a non-central diagonal element `x` of the split
/// torus of Sp or SO, through the two fibres `U_α ▷ x` and `U_α ▷ s_α(x)`.
pub fn split_certificate(ctx: &GroupCtx, x: &Mat) -> Result<Certificate> {
    if !matches!(ctx.family(), Family::Sp | Family::SO) {
        return refuse("split recipe needs Sp or SO");
    }
    if ctx.q() == 2 {
        return refuse("q = 2: the split torus is trivial");
    }
    let Some(t) = torus_coords(ctx, x) else {
        return refuse("x is not an element of the split diagonal torus");
    };
    if ctx.is_central(x) {
        return refuse("x is central");
    }
    if special_situation(ctx, &t) {
        return match ctx.q() {
            3 | 5 | 7 => refuse(format!("special situation with q = {} in {{3, 5, 7}}", ctx.q())),
            q => refuse(format!(
                "special situation with q = {q}: the two root fibres collapse under the centre; \
                 use the PGL_2(q) involution class (A6 model when q = 9)"
            )),
        };
    }
    let f = ctx.field().clone();
    let big = ctx.n();
    let mut roots = simple_roots(ctx);
    // the first Levi root with t_i ≠ t_{i+1} goes first
    if let Some(i) = (0..t.len() - 1).find(|&i| t[i] != t[i + 1]) {
        roots.retain(|&r| r != (i, i + 1));
        roots.insert(0, (i, i + 1));
    }
    let units: Vec<u32> = f.elements().filter(|&v| v != 0).collect();
    for (a, b) in roots {
        let (Some(up), Some(down)) = (root_group(ctx, a, b), root_group(ctx, b, a)) else { continue };
        let moved = ctx.conj(&up.at(f.one()), x);
        if moved == ctx.canonicalize(x) {
            continue;
        }
        let reflection = units.iter().find_map(|&c| {
            let n = up.at(f.one()).mul(&down.at(c)).mul(&up.at(f.one()));
            if !ctx.contains(&n) {
                return None;
            }
            let y = n.mul(x).mul(&n.inv().ok()?);
            let diagonal = (0..big).all(|i| (0..big).all(|j| i == j || y.get(i, j) == 0));
            (diagonal && y != *x).then_some(n)
        });
        let Some(n) = reflection else { continue };
        let nx = n.mul(x).mul(&n.inv()?);
        let mut members = Vec::new();
        for base in [Mat::identity(&f, big), n.clone()] {
            for c in f.elements() {
                let g = up.at(c).mul(&base);
                members.push(Member::matrix(ctx.conj(&g, x), Some(g)));
            }
        }
        let q = f.order() as usize;
        let s = members[q..]
            .iter()
            .find(|m| !ctx.commute(m.matrix.as_ref().unwrap(), x))
            .cloned();
        let Some(s) = s else { continue };
        let mut app = Applicability::default();
        app.note("root", format!("({a}, {b})"))
            .note("torus_coordinates", format!("{t:?}"))
            .note("reflected", format!("{:?}", (0..big / 2).map(|i| nx.get(i, i)).collect::<Vec<_>>()))
            .note("special_situation", false);
        let r = Member::matrix(ctx.canonicalize(x), Some(Mat::identity(&f, big)));
        let cert = subrack_certificate(ctx, x, r, s, members, [q, q]);
        return finish(cert, Recipe::Split, app);
    }
    refuse("no simple root moves x")
}
