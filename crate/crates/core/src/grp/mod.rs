//! Finite classical groups GL, SL, Sp, SO (and Ω, and projective quotients)
//! as explicit matrix groups, with conjugacy-class enumeration by orbit BFS.
//!
//! Elements are plain [`Mat`] values. In a projective context every element
//! is kept in canonical form: the scalar multiple by a central scalar whose
//! row-major entry sequence is smallest.

pub mod perm;
mod root;

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Pow;
use serde::{Deserialize, Serialize};

use crate::gfq::{Field, FieldSpec};
use crate::matq::{charpoly, form_membership, is_semisimple, phi, poly_is_irreducible, Form, Mat};
use crate::{Error, Result};

/// Default cap on the size of an enumerated conjugacy class.
pub const CLASS_BOUND: usize = 5_000_000;
/// Default cap on the size of an enumerated group.
pub const GROUP_BOUND: usize = 1_000_000;

/// Class-enumeration bound, overridable through `COLLAPSE_LAB_MEM_LIMIT`.
pub fn class_bound() -> usize {
    std::env::var("COLLAPSE_LAB_MEM_LIMIT")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(CLASS_BOUND)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    GL,
    SL,
    Sp,
    SO,
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gl" => Ok(Family::GL),
            "sl" => Ok(Family::SL),
            "sp" => Ok(Family::Sp),
            "so" => Ok(Family::SO),
            _ => Err(Error::Invalid(format!("unknown family {s:?}"))),
        }
    }
}

/// Serialized form of a group context.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupHeader {
    pub family: Family,
    pub n: usize,
    pub field: FieldSpec,
    pub projective: bool,
    #[serde(default)]
    pub derived_only: bool,
}

#[derive(Clone)]
pub struct GroupCtx {
    family: Family,
    n: usize,
    field: Arc<Field>,
    projective: bool,
    derived_only: bool,
    /// Scalars `ζ` with `ζI` in the group, sorted.
    center: Vec<u32>,
    gens: Arc<Vec<Mat>>,
    gen_inv: Arc<Vec<Mat>>,
}

impl fmt::Debug for GroupCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl GroupCtx {
    pub fn new(family: Family, n: usize, field: &Arc<Field>, projective: bool, derived_only: bool) -> Result<Self> {
        let p = field.characteristic();
        if n == 0 {
            return Err(Error::Unsupported("matrix size must be positive".into()));
        }
        match family {
            Family::Sp if !n.is_multiple_of(2) => {
                return Err(Error::Unsupported(format!("Sp needs even size, got {n}")))
            }
            Family::SO if n % 2 == 1 && p == 2 => {
                return Err(Error::Unsupported("SO in odd dimension needs odd q".into()))
            }
            Family::SO if n < 3 => {
                return Err(Error::Unsupported(format!("SO needs size at least 3, got {n}")))
            }
            _ => {}
        }
        if derived_only && family != Family::SO {
            return Err(Error::Unsupported("the derived-subgroup flag applies to SO only".into()));
        }
        let mut ctx = GroupCtx {
            family,
            n,
            field: field.clone(),
            projective,
            derived_only,
            center: Vec::new(),
            gens: Arc::new(Vec::new()),
            gen_inv: Arc::new(Vec::new()),
        };
        ctx.center = ctx.compute_center();
        let gens: Vec<Mat> = root::generators(&ctx).into_iter().map(|g| ctx.canonicalize(&g)).collect();
        let inv = gens.iter().map(|g| ctx.canonicalize(&g.inv().expect("generators are invertible"))).collect();
        ctx.gens = Arc::new(gens);
        ctx.gen_inv = Arc::new(inv);
        Ok(ctx)
    }

    pub fn gl(n: usize, field: &Arc<Field>) -> Result<Self> {
        Self::new(Family::GL, n, field, false, false)
    }

    pub fn sl(n: usize, field: &Arc<Field>) -> Result<Self> {
        Self::new(Family::SL, n, field, false, false)
    }

    pub fn sp(n: usize, field: &Arc<Field>) -> Result<Self> {
        Self::new(Family::Sp, n, field, false, false)
    }

    pub fn so(n: usize, field: &Arc<Field>) -> Result<Self> {
        Self::new(Family::SO, n, field, false, false)
    }

    pub fn omega(n: usize, field: &Arc<Field>) -> Result<Self> {
        Self::new(Family::SO, n, field, false, true)
    }

    /// The same group modulo its scalar center.
    pub fn projective(&self) -> Self {
        Self::new(self.family, self.n, &self.field, true, self.derived_only).expect("already validated")
    }

    /// The same group without the quotient.
    pub fn linear(&self) -> Self {
        Self::new(self.family, self.n, &self.field, false, self.derived_only).expect("already validated")
    }

    pub fn from_header(h: &GroupHeader) -> Result<Self> {
        Self::new(h.family, h.n, &h.field.build()?, h.projective, h.derived_only)
    }

    pub fn header(&self) -> GroupHeader {
        GroupHeader {
            family: self.family,
            n: self.n,
            field: self.field.spec().clone(),
            projective: self.projective,
            derived_only: self.derived_only,
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.order() as u64
    }

    pub fn is_projective(&self) -> bool {
        self.projective
    }

    pub fn is_derived_only(&self) -> bool {
        self.derived_only
    }

    pub fn name(&self) -> String {
        let base = match (self.family, self.derived_only) {
            (Family::GL, _) => "GL",
            (Family::SL, _) => "SL",
            (Family::Sp, _) => "Sp",
            (Family::SO, false) => "SO",
            (Family::SO, true) => "Omega",
        };
        let prefix = if self.projective { "P" } else { "" };
        format!("{prefix}{base}_{}({})", self.n, self.q())
    }

    /// The invariant form, if any.
    pub fn form(&self) -> Option<Form> {
        match self.family {
            Family::GL | Family::SL => None,
            Family::Sp => Some(Form::Symplectic),
            Family::SO if self.n % 2 == 1 => Some(Form::OrthogonalOdd),
            Family::SO => Some(Form::OrthogonalEven),
        }
    }

    /// The identity, in canonical form.
    pub fn identity(&self) -> Mat {
        self.canonicalize(&Mat::identity(&self.field, self.n))
    }

    /// Closed-form order of the group (after the quotient, if projective).
    pub fn order(&self) -> BigUint {
        let q = BigUint::from(self.q());
        let qp = |e: usize| -> BigUint { Pow::pow(q.clone(), e) };
        let n = self.n;
        let linear = match self.family {
            Family::GL | Family::SL => {
                let mut o = qp(n * (n - 1) / 2);
                for i in 1..=n {
                    o *= qp(i) - 1u32;
                }
                if self.family == Family::SL {
                    o /= q.clone() - 1u32;
                }
                o
            }
            Family::Sp => sp_order(&q, n / 2),
            Family::SO if n % 2 == 1 => sp_order(&q, n / 2),
            Family::SO => {
                let m = n / 2;
                let mut o = qp(m * (m - 1)) * (qp(m) - 1u32);
                for i in 1..m {
                    o *= qp(2 * i) - 1u32;
                }
                if self.field.characteristic() == 2 {
                    o *= 2u32;
                }
                o
            }
        };
        let linear = if self.derived_only { linear / 2u32 } else { linear };
        if self.projective {
            linear / BigUint::from(self.center.len())
        } else {
            linear
        }
    }

    /// Central scalars `ζ` with `ζI` in the group.
    pub fn center(&self) -> &[u32] {
        &self.center
    }

    fn compute_center(&self) -> Vec<u32> {
        let f = &self.field;
        let mut out: Vec<u32> = f
            .elements()
            .filter(|&z| z != 0)
            .filter(|&z| match self.family {
                Family::GL => true,
                Family::SL => f.pow(z, self.n as u64) == f.one(),
                Family::Sp => f.mul(z, z) == f.one(),
                Family::SO => {
                    f.mul(z, z) == f.one()
                        && f.pow(z, self.n as u64) == f.one()
                        && (!self.derived_only || root::in_omega(&Mat::scalar(f, self.n, z)))
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Membership in the matrix group (before any quotient).
    pub fn contains(&self, x: &Mat) -> bool {
        if x.rows() != self.n || x.cols() != self.n || !x.field().same_as(&self.field) {
            return false;
        }
        let ok = match self.family {
            Family::GL => x.det() != 0,
            Family::SL => x.det() == self.field.one(),
            Family::Sp | Family::SO => form_membership(x, self.form().expect("form groups")),
        };
        ok && (!self.derived_only || root::in_omega(x))
    }

    /// Membership in SO when the context is Ω; elements of SO outside Ω
    /// still have well-defined Ω-orbits.
    pub fn contains_ambient(&self, x: &Mat) -> bool {
        if self.derived_only {
            x.rows() == self.n && x.field().same_as(&self.field) && form_membership(x, self.form().unwrap())
        } else {
            self.contains(x)
        }
    }

    /// Canonical coset representative (identity map when not projective).
    pub fn canonicalize(&self, x: &Mat) -> Mat {
        if !self.projective || self.center.len() == 1 {
            return x.clone();
        }
        self.center.iter().map(|&z| x.scale(z)).min().expect("center contains 1")
    }

    /// Checked canonicalization of an arbitrary matrix.
    pub fn element(&self, x: &Mat) -> Result<Mat> {
        if !self.contains_ambient(x) {
            return Err(Error::NotMember(self.name()));
        }
        Ok(self.canonicalize(x))
    }

    pub fn mul(&self, a: &Mat, b: &Mat) -> Mat {
        self.canonicalize(&a.mul(b))
    }

    pub fn inv(&self, a: &Mat) -> Mat {
        self.canonicalize(&a.inv().expect("group elements are invertible"))
    }

    /// `g x g⁻¹` in canonical form.
    pub fn conj(&self, g: &Mat, x: &Mat) -> Mat {
        self.canonicalize(&g.mul(x).mul(&g.inv().expect("group elements are invertible")))
    }

    pub fn generators(&self) -> &[Mat] {
        &self.gens
    }

    /// Whether two elements commute in the (possibly projective) group.
    pub fn commute(&self, a: &Mat, b: &Mat) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_central(&self, x: &Mat) -> bool {
        match x.as_scalar() {
            Some(z) => !self.projective || self.center.contains(&z) || self.canonicalize(x).is_identity(),
            None => false,
        }
    }

    /// Order of `x` in the group (modulo the center when projective).
    pub fn element_order(&self, x: &Mat) -> Result<u64> {
        let id = self.identity();
        let mut y = self.canonicalize(x);
        for k in 1..=GROUP_BOUND as u64 {
            if y == id {
                return Ok(k);
            }
            y = self.mul(&y, x);
        }
        Err(Error::bound("element order", GROUP_BOUND, GROUP_BOUND))
    }
}

fn sp_order(q: &BigUint, m: usize) -> BigUint {
    let mut o: BigUint = Pow::pow(q.clone(), m * m);
    for i in 1..=m {
        o *= Pow::pow(q.clone(), 2 * i) - 1u32;
    }
    o
}

/// Whether `x` lies in Ω = [SO, SO]: spinor norm a square (odd q) or even
/// Dickson invariant (q even).
pub fn in_omega(x: &Mat) -> bool {
    root::in_omega(x)
}

/// A conjugacy class (orbit of the group acting by conjugation), sorted
/// in canonical order.
#[derive(Clone)]
pub struct ConjClass {
    ctx: GroupCtx,
    rep: Mat,
    elements: Vec<Mat>,
    index: HashMap<Vec<u8>, u32>,
    /// BFS tree: for each element, its parent and the generator applied.
    parent: Vec<(u32, u32)>,
}

impl fmt::Debug for ConjClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "class of size {} in {}", self.elements.len(), self.ctx.name())
    }
}

/// Orbit of `x` under conjugation by the group generators, by BFS.
pub fn conj_class(ctx: &GroupCtx, x: &Mat, bound: usize) -> Result<ConjClass> {
    let x = ctx.element(x)?;
    let mut found: HashMap<Vec<u8>, u32> = HashMap::new();
    let mut order: Vec<Mat> = vec![x.clone()];
    let mut parent = vec![(u32::MAX, u32::MAX)];
    found.insert(x.pack(), 0);
    let mut queue = VecDeque::from([0u32]);
    while let Some(i) = queue.pop_front() {
        let y = order[i as usize].clone();
        for (k, (g, gi)) in ctx.gens.iter().zip(ctx.gen_inv.iter()).enumerate() {
            let z = ctx.canonicalize(&g.mul(&y).mul(gi));
            let key = z.pack();
            if found.contains_key(&key) {
                continue;
            }
            if order.len() >= bound {
                return Err(Error::bound(format!("conjugacy class in {}", ctx.name()), bound, order.len() + 1));
            }
            let id = order.len() as u32;
            found.insert(key, id);
            order.push(z);
            parent.push((i, k as u32));
            queue.push_back(id);
        }
    }
    // re-index in canonical order
    let mut perm: Vec<u32> = (0..order.len() as u32).collect();
    perm.sort_by(|&a, &b| order[a as usize].cmp(&order[b as usize]));
    let mut rank = vec![0u32; perm.len()];
    for (new, &old) in perm.iter().enumerate() {
        rank[old as usize] = new as u32;
    }
    let elements: Vec<Mat> = perm.iter().map(|&o| order[o as usize].clone()).collect();
    let parent = perm
        .iter()
        .map(|&o| {
            let (p, g) = parent[o as usize];
            if p == u32::MAX { (u32::MAX, g) } else { (rank[p as usize], g) }
        })
        .collect();
    let index = elements.iter().enumerate().map(|(i, m)| (m.pack(), i as u32)).collect();
    Ok(ConjClass { ctx: ctx.clone(), rep: x, elements, index, parent })
}

impl ConjClass {
    pub fn ctx(&self) -> &GroupCtx {
        &self.ctx
    }

    pub fn representative(&self) -> &Mat {
        &self.rep
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Mat] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> &Mat {
        &self.elements[i]
    }

    /// Index of `x` (already canonical) in the sorted element list.
    pub fn index_of(&self, x: &Mat) -> Option<usize> {
        self.index.get(&x.pack()).map(|&i| i as usize)
    }

    pub fn contains(&self, x: &Mat) -> bool {
        self.index_of(&self.ctx.canonicalize(x)).is_some()
    }

    /// A group element `g` with `g ▷ rep = elements[i]`.
    pub fn conjugator(&self, i: usize) -> Mat {
        let mut g = self.ctx.identity();
        let mut j = i;
        while self.parent[j].0 != u32::MAX {
            let (p, k) = self.parent[j];
            g = g.mul(&self.ctx.gens[k as usize]);
            j = p as usize;
        }
        // walked from the element back to the root, so g = g_k1 g_k2 ... in
        // the right order already
        self.ctx.canonicalize(&g)
    }

    /// One JSON object per line, one line per element.
    pub fn to_json_lines(&self) -> String {
        let mut s = String::new();
        for m in &self.elements {
            s.push_str(&serde_json::to_string(m).expect("matrices serialize"));
            s.push('\n');
        }
        s
    }
}

/// All elements of the group, sorted canonically.
pub fn enumerate_group(ctx: &GroupCtx, bound: usize) -> Result<Vec<Mat>> {
    subgroup_closure(ctx, ctx.generators(), bound)
}

/// The subgroup generated by `gens`, sorted canonically.
pub fn subgroup_closure(ctx: &GroupCtx, gens: &[Mat], bound: usize) -> Result<Vec<Mat>> {
    let id = ctx.identity();
    let gens: Vec<Mat> = gens.iter().map(|g| ctx.canonicalize(g)).collect();
    let mut seen: HashMap<Vec<u8>, ()> = HashMap::new();
    seen.insert(id.pack(), ());
    let mut all = vec![id];
    let mut head = 0;
    while head < all.len() {
        let y = all[head].clone();
        head += 1;
        for g in &gens {
            let z = ctx.mul(&y, g);
            if seen.insert(z.pack(), ()).is_none() {
                if all.len() >= bound {
                    return Err(Error::bound(format!("subgroup of {}", ctx.name()), bound, all.len() + 1));
                }
                all.push(z);
            }
        }
    }
    all.sort();
    Ok(all)
}

/// Elements of `group` commuting with `x` (in the quotient, if projective).
pub fn centralizer(ctx: &GroupCtx, x: &Mat, group: &[Mat]) -> Vec<Mat> {
    let x = ctx.canonicalize(x);
    group.iter().filter(|g| ctx.commute(g, &x)).cloned().collect()
}

/// Partition of an enumerated group into conjugacy classes, ordered by
/// their smallest element.
pub fn conjugacy_classes(ctx: &GroupCtx, group: &[Mat]) -> Result<Vec<ConjClass>> {
    let mut done: HashMap<Vec<u8>, ()> = HashMap::with_capacity(group.len());
    let mut out = Vec::new();
    for g in group {
        if done.contains_key(&g.pack()) {
            continue;
        }
        let c = conj_class(ctx, g, group.len())?;
        for e in c.elements() {
            done.insert(e.pack(), ());
        }
        out.push(c);
    }
    Ok(out)
}

/// `j(A)`: `diag(A, φ(A))` for the symplectic and even orthogonal forms,
/// `diag(A, 1, φ(A))` for the odd orthogonal form.
pub fn embed_j(a: &Mat, target: Form) -> Result<Mat> {
    let pa = phi(a)?;
    Ok(match target {
        Form::Symplectic | Form::OrthogonalEven => Mat::block_diag(&[a.clone(), pa]),
        Form::OrthogonalOdd => Mat::block_diag(&[a.clone(), Mat::identity(a.field(), 1), pa]),
    })
}

/// Data of the smallest Frobenius twist of `x` landing in `Z·x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistData {
    /// Smallest `j >= 1` with `x^(q^j) = λ x` for a scalar `λ`.
    pub j: u32,
    pub lambda: u32,
    pub irreducible: bool,
}

/// Twist data for a semisimple element of SL_n(q) (the given lift).
///
/// For irreducible `x` with `λ != 1` the relations `j | n`, `λ` a primitive
/// `(n/j)`-th root of unity and `charpoly ∈ F_q[X^(n/j)]` are checked, and
/// for `n >= 3` also `j != 1`; a failure is reported as a verification error.
pub fn twist_data(ctx: &GroupCtx, x: &Mat) -> Result<TwistData> {
    if ctx.family() != Family::SL || !ctx.linear().contains(x) {
        return Err(Error::Precondition("twist data needs an element of SL_n(q)".into()));
    }
    if !is_semisimple(x) {
        return Err(Error::Precondition("twist data needs a semisimple element".into()));
    }
    let f = ctx.field();
    let n = ctx.n() as u32;
    let q = ctx.q() as i64;
    let cp = charpoly(x);
    let irreducible = poly_is_irreducible(&cp, f);
    let mut y = x.clone();
    for j in 1..=n {
        y = y.pow(q)?;
        let Some(lambda) = scalar_ratio(&y, x) else { continue };
        let data = TwistData { j, lambda, irreducible };
        if irreducible && lambda != f.one() {
            let a = (n / j) as u64;
            let primitive = f.pow(lambda, a) == f.one() && (1..a).all(|c| f.pow(lambda, c) != f.one());
            let in_x_power = cp.coeffs().iter().enumerate().all(|(h, &c)| c == 0 || (h as u64).is_multiple_of(a));
            if !n.is_multiple_of(j) || !primitive || !in_x_power || (n >= 3 && j == 1) {
                return Err(Error::Verification(format!("twist relations fail: {data:?}")));
            }
        }
        return Ok(data);
    }
    Err(Error::Verification("x^(q^n) is not a scalar multiple of x".into()))
}

/// `λ` with `a = λ b`, if it exists.
pub fn scalar_ratio(a: &Mat, b: &Mat) -> Option<u32> {
    let f = a.field();
    let (i, &bv) = b.entries().iter().enumerate().find(|(_, &v)| v != 0)?;
    let lambda = f.div(a.entries()[i], bv).ok()?;
    (b.scale(lambda) == *a).then_some(lambda)
}

/// Whether `x^e` lies in `class`; with `up_to_center`, whether some central
/// multiple of it does.
pub fn power_in_class(class: &ConjClass, x: &Mat, e: i64, up_to_center: bool) -> Result<bool> {
    let ctx = class.ctx();
    let y = x.pow(e)?;
    if up_to_center {
        Ok(ctx.center().iter().any(|&z| class.contains(&y.scale(z))))
    } else {
        Ok(class.contains(&y))
    }
}

/// `−x ∈ class(x)`.
pub fn minus_in_class(class: &ConjClass, x: &Mat) -> bool {
    class.contains(&x.neg())
}

/// `|G| = |class| · |C_G(x)|` on an enumerated group.
pub fn orbit_stabilizer_holds(ctx: &GroupCtx, x: &Mat, group: &[Mat]) -> Result<bool> {
    let class = conj_class(ctx, x, group.len())?;
    Ok(class.len() * centralizer(ctx, x, group).len() == group.len()
        && BigUint::from(group.len()) == ctx.order())
}

#[cfg(test)]
mod tests;
