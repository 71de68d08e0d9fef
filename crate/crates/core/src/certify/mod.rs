//! Constructive certificates: explicit subracks, pairs and subgroups built
//! from the structure of the class, each re-verified by
//! [`verify_certificate`] before it is returned.
//!
//! A recipe either returns a certificate whose every check was recomputed
//! independently, or refuses with [`Error::Refused`] naming the hypothesis
//! that fails. Nothing falls back silently to a generic search.

mod irr;
mod linear;
mod split;
mod symplectic;
mod torus;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::detect::{
    verify_certificate, Certificate, Kind, Member, Method, Property, SearchOpts, Witness, PAIR_CLOSURE_CAP,
};
use crate::grp::{embed_j, GroupCtx};
use crate::matq::Mat;
use crate::{Error, Result};

pub use irr::{irr_k_certificate, so_mixed_certificate, SoSecond};
pub use linear::psl_composite_certificate;
pub use split::split_certificate;
pub use symplectic::{
    coxeter_certificate, cuspidal_product_certificate, embed_blocks, sp4_levi_certificate, sp4_levi_parameters,
};
pub use torus::{coxeter_subgroup, find_conjugator, CoxeterSubgroup};

/// The constructions available through [`crate::certify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Recipe {
    Split,
    IrrK,
    Coxeter,
    Cuspidal,
    Sp4Levi,
    PslComposite,
    SoMixed,
}

impl Recipe {
    pub const ALL: [Recipe; 7] = [
        Recipe::Split,
        Recipe::IrrK,
        Recipe::Coxeter,
        Recipe::Cuspidal,
        Recipe::Sp4Levi,
        Recipe::PslComposite,
        Recipe::SoMixed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Recipe::Split => "split",
            Recipe::IrrK => "irrk",
            Recipe::Coxeter => "coxeter",
            Recipe::Cuspidal => "cuspidal",
            Recipe::Sp4Levi => "sp4levi",
            Recipe::PslComposite => "pslcomposite",
            Recipe::SoMixed => "somixed",
        }
    }
}

impl std::str::FromStr for Recipe {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Recipe::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Invalid(format!("unknown recipe {s:?}")))
    }
}

impl std::fmt::Display for Recipe {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Why a recipe applies: named facts, each rendered as a string.
#[derive(Default)]
pub(crate) struct Applicability(BTreeMap<String, String>);

impl Applicability {
    pub(crate) fn note(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.0.insert(key.to_string(), value.to_string());
        self
    }
}

pub(crate) fn refuse<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Refused(msg.into()))
}

fn witness(ctx: &GroupCtx, rep: &Mat, property: Property, method: Method, max_closure: usize) -> Witness {
    Witness {
        property,
        method,
        group: Some(ctx.header()),
        class_rep: Some(ctx.canonicalize(rep)),
        rack: None,
        r: None,
        s: None,
        quadruple: vec![],
        subrack: vec![],
        subgroup_gens: vec![],
        orbit_sizes: vec![],
        params: SearchOpts { max_closure, ..Default::default() }.params(),
    }
}

fn skeleton(ctx: &GroupCtx, kind: Kind, w: Witness) -> Certificate {
    let mut checks = BTreeMap::new();
    if ctx.is_projective() {
        checks.insert("projection_injective".to_string(), true);
    }
    Certificate {
        kind,
        witness: w,
        checks,
        search_bound: "explicit construction".into(),
        recipe: None,
        applicability: BTreeMap::new(),
    }
}

fn canon_member(ctx: &GroupCtx, m: Member) -> Member {
    Member { matrix: m.matrix.map(|x| ctx.canonicalize(&x)), ..m }
}

/// A pair `r, s` claimed to witness type C (`H = <r, s>`) or type D.
pub(crate) fn pair_certificate(ctx: &GroupCtx, rep: &Mat, kind: Kind, r: Member, s: Member) -> Certificate {
    let property = if kind == Kind::TypeD { Property::D } else { Property::C };
    let mut w = witness(ctx, rep, property, Method::Pair, PAIR_CLOSURE_CAP);
    w.r = Some(canon_member(ctx, r));
    w.s = Some(canon_member(ctx, s));
    skeleton(ctx, kind, w)
}

/// A type C subrack `Y = R ⊔ S` listed element by element.
pub(crate) fn subrack_certificate(ctx: &GroupCtx, rep: &Mat, r: Member, s: Member, members: Vec<Member>, sizes: [usize; 2]) -> Certificate {
    let mut w = witness(ctx, rep, Property::C, Method::Subrack, PAIR_CLOSURE_CAP);
    w.r = Some(canon_member(ctx, r));
    w.s = Some(canon_member(ctx, s));
    w.subrack = members.into_iter().map(|m| canon_member(ctx, m)).collect();
    w.orbit_sizes = sizes.to_vec();
    skeleton(ctx, Kind::TypeC, w)
}

/// A subgroup `H` with `r, s ∈ H` meeting the four conditions: `rs ≠ sr`,
/// distinct `H`-orbits, `H` generated by the two orbits, and the size
/// condition on the orbits.
pub(crate) fn subgroup_certificate(ctx: &GroupCtx, rep: &Mat, gens: &[Mat], r: Member, s: Member, max_closure: usize) -> Certificate {
    let mut w = witness(ctx, rep, Property::C, Method::Subgroup, max_closure);
    w.r = Some(canon_member(ctx, r));
    w.s = Some(canon_member(ctx, s));
    w.subgroup_gens = gens.iter().map(|g| ctx.canonicalize(g)).collect();
    skeleton(ctx, Kind::TypeC, w)
}

/// Stamps the recipe, recomputes every check independently and refuses to
/// return a certificate that does not re-verify.
pub(crate) fn finish(mut cert: Certificate, recipe: Recipe, app: Applicability) -> Result<Certificate> {
    cert.recipe = Some(recipe.name().to_string());
    cert.applicability = app.0;
    let report = verify_certificate(&cert)?;
    if !report.ok {
        let failed: Vec<&String> = report.checks.iter().filter(|(_, &v)| !v).map(|(k, _)| k).collect();
        return Err(Error::Verification(format!(
            "{recipe} certificate does not re-verify: failed {failed:?}, mismatches {:?}",
            report.mismatches
        )));
    }
    cert.checks = report.checks;
    Ok(cert)
}

/// `j(g)` for the first `g` with `g a g⁻¹ = b` and `j(g)` in the group.
pub(crate) fn lifted_conjugator(ctx: &GroupCtx, a: &Mat, b: &Mat) -> Result<Option<Mat>> {
    let form = ctx.form().ok_or_else(|| Error::Precondition("j needs a form group".into()))?;
    let accept = |g: &Mat| embed_j(g, form).is_ok_and(|jg| ctx.contains(&jg));
    Ok(match find_conjugator(a, b, accept)? {
        Some(g) => Some(embed_j(&g, form)?),
        None => None,
    })
}

/// A conjugator in the group from `a` to `b`, solved in the full matrix
/// space; `None` when there is none or the solution space is too large.
pub(crate) fn group_conjugator(ctx: &GroupCtx, a: &Mat, b: &Mat) -> Option<Mat> {
    find_conjugator(a, b, |g| ctx.contains(g)).ok().flatten()
}

/// The first candidate whose certificate re-verifies; the last error
/// otherwise.
pub(crate) fn first_verified<T>(
    candidates: impl IntoIterator<Item = T>,
    mut build: impl FnMut(T) -> Result<Certificate>,
) -> Result<Certificate> {
    let mut last = Error::Verification("no candidate construction".into());
    for c in candidates {
        match build(c) {
            Ok(cert) => return Ok(cert),
            Err(e @ (Error::Verification(_) | Error::Refused(_) | Error::BoundExceeded { .. })) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}
