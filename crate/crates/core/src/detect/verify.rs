//! Independent re-verification of certificates.
//!
//! Membership in the class is checked through the stored conjugators when
//! present. Without one, semisimple elements of GL, SL and Sp are compared
//! by characteristic polynomial (their semisimple classes are determined by
//! it); anything else falls back to enumerating the class.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use super::space::{is_closed, orbit, GroupSpace, RackSpace, Space};
use super::{rerun, size_condition, Certificate, ClassRack, Kind, Member, Method, Property, SearchOpts};
use crate::grp::{class_bound, conj_class, subgroup_closure, Family, GroupCtx};
use crate::matq::{charpoly, is_semisimple, Mat};
use crate::rack::FiniteRack;
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub ok: bool,
    /// Every check recomputed from the witness.
    pub checks: BTreeMap<String, bool>,
    /// Claimed checks that were missing or disagreed.
    pub mismatches: Vec<String>,
}

/// Whether `m` lies in the class of `rep`.
pub(crate) fn member_in_class(ctx: &GroupCtx, rep: &Mat, m: &Member) -> Result<bool> {
    let x = m.matrix.as_ref().ok_or_else(|| Error::Invalid("member needs a matrix".into()))?;
    if !ctx.contains_ambient(x) {
        return Ok(false);
    }
    let x = ctx.canonicalize(x);
    if let Some(g) = &m.conjugator {
        return Ok(ctx.contains(g) && ctx.conj(g, rep) == x);
    }
    let charpoly_decides = matches!(ctx.family(), Family::GL | Family::SL | Family::Sp) && !ctx.is_derived_only();
    if charpoly_decides && is_semisimple(rep) && is_semisimple(&x) {
        let target = charpoly(rep);
        let scalars: Vec<u32> = if ctx.is_projective() { ctx.center().to_vec() } else { vec![ctx.field().one()] };
        return Ok(scalars.iter().any(|&z| charpoly(&x.scale(z)) == target));
    }
    Ok(conj_class(ctx, rep, class_bound())?.contains(&x))
}

enum World {
    Group { ctx: GroupCtx, rep: Mat },
    Rack(FiniteRack),
}

fn world(cert: &Certificate) -> Result<World> {
    let w = &cert.witness;
    match (&w.group, &w.class_rep, &w.rack) {
        (Some(h), Some(rep), None) => {
            let ctx = GroupCtx::from_header(h)?;
            let rep = ctx.element(rep)?;
            Ok(World::Group { ctx, rep })
        }
        (None, None, Some(r)) => {
            let rack = FiniteRack::from_json(r)?;
            if !rack.is_rack() {
                return Err(Error::Verification("the embedded table is not a rack".into()));
            }
            Ok(World::Rack(rack))
        }
        _ => Err(Error::Invalid("a witness needs either a group and class_rep or a rack table".into())),
    }
}

/// Recomputes every check of `cert` and compares with the claimed ones.
pub fn verify_certificate(cert: &Certificate) -> Result<VerifyReport> {
    let checks = match world(cert)? {
        World::Group { ctx, rep } => {
            let resolve = |m: &Member| -> Result<(Mat, bool)> {
                let x = m.matrix.as_ref().ok_or_else(|| Error::Invalid("member needs a matrix".into()))?;
                Ok((ctx.canonicalize(x), member_in_class(&ctx, &rep, m)?))
            };
            let sp = GroupSpace(&ctx);
            let mut c = recompute(cert, &sp, &resolve, &|| {
                let class = conj_class(&ctx, &rep, class_bound())?;
                Ok(ClassRack::from_class(&class))
            })?;
            if let Some(ok) = c.get_mut("members_in_class") {
                // memberships of conjugators themselves
                *ok &= all_members(cert).iter().all(|m| m.conjugator.as_ref().is_none_or(|g| ctx.contains(g)));
            }
            if cert.witness.method == Method::Subgroup && cert.kind == Kind::TypeC {
                subgroup_checks(cert, &ctx, &resolve, &mut c)?;
            }
            if cert.checks.contains_key("projection_injective") {
                let raw: Vec<&Mat> = all_members(cert).iter().filter_map(|m| m.matrix.as_ref()).collect();
                let canon: HashSet<Vec<u8>> = raw.iter().map(|x| ctx.canonicalize(x).pack()).collect();
                let distinct_raw: HashSet<Vec<u8>> = raw.iter().map(|x| x.pack()).collect();
                c.insert("projection_injective".into(), canon.len() == distinct_raw.len());
            }
            c
        }
        World::Rack(rack) => {
            let resolve = |m: &Member| -> Result<(usize, bool)> {
                let i = m.index.ok_or_else(|| Error::Invalid("member needs an index".into()))? as usize;
                Ok((i, i < rack.size()))
            };
            let sp = RackSpace(&rack);
            recompute(cert, &sp, &resolve, &|| Ok(ClassRack::from_rack(rack.clone())))?
        }
    };
    let mut mismatches = Vec::new();
    for (k, &v) in &cert.checks {
        match checks.get(k) {
            Some(&got) if got == v => {}
            Some(&got) => mismatches.push(format!("{k}: claimed {v}, recomputed {got}")),
            None => mismatches.push(format!("{k}: claimed but not recomputable")),
        }
    }
    let ok = mismatches.is_empty() && checks.values().all(|&v| v);
    Ok(VerifyReport { ok, checks, mismatches })
}

fn all_members(cert: &Certificate) -> Vec<&Member> {
    let w = &cert.witness;
    w.r.iter().chain(w.s.iter()).chain(w.quadruple.iter()).chain(w.subrack.iter()).collect()
}

fn recompute<S: Space>(
    cert: &Certificate,
    sp: &S,
    resolve: &dyn Fn(&Member) -> Result<(S::E, bool)>,
    target: &dyn Fn() -> Result<ClassRack>,
) -> Result<BTreeMap<String, bool>> {
    let w = &cert.witness;
    let cap = w.params.max_closure;
    let mut c = BTreeMap::new();
    let get = |m: &Option<Member>, name: &str| -> Result<(S::E, bool)> {
        resolve(m.as_ref().ok_or_else(|| Error::Invalid(format!("witness lacks {name}")))?)
    };
    match cert.kind {
        Kind::TypeD => {
            let (r, ir) = get(&w.r, "r")?;
            let (s, is) = get(&w.s, "s")?;
            c.insert("members_in_class".into(), ir && is);
            let orb = orbit(sp, &[r.clone(), s.clone()], &r, cap)?;
            c.insert("distinct_orbits".into(), orb.binary_search(&s).is_err());
            let rs = sp.act(&r, &s);
            c.insert("rs_squared_ne_sr_squared".into(), sp.act(&r, &sp.act(&s, &rs)) != s);
        }
        Kind::TypeC if w.method == Method::Pair => {
            let (r, ir) = get(&w.r, "r")?;
            let (s, is) = get(&w.s, "s")?;
            c.insert("members_in_class".into(), ir && is);
            c.insert("rs_ne_sr".into(), sp.act(&r, &s) != s);
            let gens = [r.clone(), s.clone()];
            let or = orbit(sp, &gens, &r, cap)?;
            let os = orbit(sp, &gens, &s, cap)?;
            c.insert("distinct_orbits".into(), or.binary_search(&s).is_err());
            c.insert("size_condition".into(), size_condition(or.len(), os.len()));
        }
        Kind::TypeC if matches!(w.method, Method::Subrack | Method::Seeded | Method::ExhaustiveSubracks) => {
            let (r, ir) = get(&w.r, "r")?;
            let (s, is) = get(&w.s, "s")?;
            let mut y = Vec::with_capacity(w.subrack.len());
            let mut all_in = ir && is;
            for m in &w.subrack {
                let (e, ok) = resolve(m)?;
                all_in &= ok;
                y.push(e);
            }
            y.sort();
            let before = y.len();
            y.dedup();
            c.insert("members_in_class".into(), all_in && before == y.len());
            c.insert("subrack_closed".into(), is_closed(sp, &y));
            c.insert("r_s_in_subrack".into(), y.binary_search(&r).is_ok() && y.binary_search(&s).is_ok());
            let or = orbit(sp, &y, &r, cap)?;
            let os = orbit(sp, &y, &s, cap)?;
            let disjoint = or.iter().all(|e| os.binary_search(e).is_err());
            c.insert("two_inner_orbits".into(), disjoint && or.len() + os.len() == y.len());
            c.insert("rs_ne_sr".into(), sp.act(&r, &s) != s);
            c.insert("size_condition".into(), size_condition(or.len(), os.len()));
        }
        Kind::TypeC if w.method == Method::Subgroup => {
            // handled with the group operations in `subgroup_checks`
        }
        Kind::TypeF => {
            let mut q = Vec::new();
            let mut all_in = true;
            for m in &w.quadruple {
                let (e, ok) = resolve(m)?;
                all_in &= ok;
                q.push(e);
            }
            if q.len() != 4 {
                return Err(Error::Invalid("a type F witness lists four elements".into()));
            }
            c.insert("members_in_class".into(), all_in);
            let nc = (0..4).all(|a| (a + 1..4).all(|b| sp.act(&q[a], &q[b]) != q[b]));
            c.insert("pairwise_noncommuting".into(), nc);
            let mut distinct = true;
            for a in 0..3 {
                let o = orbit(sp, &q, &q[a], cap)?;
                distinct &= q[a + 1..].iter().all(|e| o.binary_search(e).is_err());
            }
            c.insert("distinct_orbits".into(), distinct);
        }
        Kind::Abelian => {
            let t = target()?;
            c.insert("class_abelian".into(), t.is_abelian());
        }
        Kind::NegativeExhaustive | Kind::NegativeBounded => {
            let t = target()?;
            let again = rerun(&t, w.property, w.method, &SearchOpts::from_params(&w.params))?;
            c.insert("search_rerun_agrees".into(), again.kind == cert.kind);
        }
        Kind::TypeC => return Err(Error::Invalid(format!("type C by {:?} is not checkable", w.method))),
    }
    if w.property != expected_property(cert.kind).unwrap_or(w.property) {
        c.insert("property_matches_kind".into(), false);
    }
    Ok(c)
}

fn expected_property(kind: Kind) -> Option<Property> {
    match kind {
        Kind::TypeC => Some(Property::C),
        Kind::TypeD => Some(Property::D),
        Kind::TypeF => Some(Property::F),
        Kind::Abelian => Some(Property::Abelian),
        _ => None,
    }
}

fn subgroup_checks(
    cert: &Certificate,
    ctx: &GroupCtx,
    resolve: &dyn Fn(&Member) -> Result<(Mat, bool)>,
    c: &mut BTreeMap<String, bool>,
) -> Result<()> {
    let w = &cert.witness;
    let cap = w.params.max_closure;
    let (r, ir) = resolve(w.r.as_ref().ok_or_else(|| Error::Invalid("witness lacks r".into()))?)?;
    let (s, is) = resolve(w.s.as_ref().ok_or_else(|| Error::Invalid("witness lacks s".into()))?)?;
    c.insert("members_in_class".into(), ir && is);
    let gens: Vec<Mat> = w.subgroup_gens.iter().map(|g| ctx.canonicalize(g)).collect();
    let gens_ok = gens.iter().all(|g| ctx.contains(g));
    let h = subgroup_closure(ctx, &gens, cap)?;
    c.insert("r_s_in_subgroup".into(), gens_ok && h.binary_search(&r).is_ok() && h.binary_search(&s).is_ok());
    c.insert("rs_ne_sr".into(), !ctx.commute(&r, &s));
    let sp = GroupSpace(ctx);
    let or = orbit(&sp, &gens, &r, cap)?;
    let os = orbit(&sp, &gens, &s, cap)?;
    c.insert("distinct_orbits".into(), or.binary_search(&s).is_err());
    let k = subgroup_closure(ctx, &[or.clone(), os.clone()].concat(), cap)?;
    c.insert("subgroup_generated_by_orbits".into(), k.len() == h.len());
    c.insert("size_condition".into(), size_condition(or.len(), os.len()));
    Ok(())
}
