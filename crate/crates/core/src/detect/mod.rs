//! Searches for type C, D and F witnesses in finite racks, the derived
//! sober / austere / kthulhu verdicts, and machine-checkable certificates.
//!
//! All searches run on a [`ClassRack`]: a rack together with, optionally, the
//! conjugacy class it came from. Witnesses from a class carry matrices and
//! conjugators, so [`verify_certificate`] can re-check them without
//! enumerating the class.

mod space;
mod verify;

use std::collections::{BTreeMap, HashSet};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::grp::{ConjClass, GroupCtx, GroupHeader};
use crate::matq::Mat;
use crate::rack::{FiniteRack, RackJson, EXHAUSTIVE_BOUND, TABLE_LIMIT};
use crate::{Error, Result};

pub use verify::{verify_certificate, VerifyReport};

/// Default cap on orbit and subgroup sizes inside pair scans.
pub const PAIR_CLOSURE_CAP: usize = 100_000;
/// Default number of candidate tuples a bounded search may examine.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    #[serde(rename = "typeC")]
    TypeC,
    #[serde(rename = "typeD")]
    TypeD,
    #[serde(rename = "typeF")]
    TypeF,
    #[serde(rename = "abelian")]
    Abelian,
    #[serde(rename = "negative-exhaustive")]
    NegativeExhaustive,
    #[serde(rename = "negative-bounded")]
    NegativeBounded,
}

impl Kind {
    pub fn is_positive(self) -> bool {
        matches!(self, Kind::TypeC | Kind::TypeD | Kind::TypeF | Kind::Abelian)
    }
}

/// The property a certificate speaks about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Property {
    C,
    D,
    F,
    #[serde(rename = "abelian")]
    Abelian,
}

/// How the witness was produced, which fixes how it is re-checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// `H = <r, s>`.
    Pair,
    /// A subgroup `H` given by generators, with `r, s ∈ H`.
    Subgroup,
    /// A subrack `Y = R ⊔ S` of two inner orbits, listed explicitly.
    Subrack,
    /// Refined closures of triples, reported as a subrack.
    Seeded,
    /// All subracks of a small rack.
    ExhaustiveSubracks,
    /// Four elements and the group they generate.
    Quadruple,
    /// A statement about the whole class.
    Class,
}

/// One element of the class: a rack index, or a matrix with an optional
/// conjugator `g` satisfying `g ▷ class_rep = matrix`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Member {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Mat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugator: Option<Mat>,
}

impl Member {
    pub fn index(i: usize) -> Self {
        Member { index: Some(i as u32), matrix: None, conjugator: None }
    }

    pub fn matrix(x: Mat, conjugator: Option<Mat>) -> Self {
        Member { index: None, matrix: Some(x), conjugator }
    }
}

/// Search limits recorded with negative verdicts so they can be replayed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchParams {
    pub max_closure: usize,
    pub budget: u64,
    pub exhaustive_bound: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub property: Property,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupHeader>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_rep: Option<Mat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rack: Option<RackJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Member>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Member>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub quadruple: Vec<Member>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subrack: Vec<Member>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subgroup_gens: Vec<Mat>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub orbit_sizes: Vec<usize>,
    pub params: SearchParams,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: Kind,
    pub witness: Witness,
    pub checks: BTreeMap<String, bool>,
    pub search_bound: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recipe: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub applicability: BTreeMap<String, String>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Invalid(format!("certificate JSON: {e}")))
    }

    pub fn all_checks_hold(&self) -> bool {
        self.checks.values().all(|&v| v)
    }
}

#[derive(Clone, Debug)]
pub struct SearchOpts {
    pub max_closure: usize,
    pub budget: u64,
    pub exhaustive_bound: usize,
    pub threads: usize,
    /// Randomized scan order; `None` scans in canonical order.
    pub seed: Option<u64>,
}

impl Default for SearchOpts {
    fn default() -> Self {
        SearchOpts {
            max_closure: PAIR_CLOSURE_CAP,
            budget: DEFAULT_BUDGET,
            exhaustive_bound: EXHAUSTIVE_BOUND,
            threads: 1,
            seed: None,
        }
    }
}

impl SearchOpts {
    pub fn params(&self) -> SearchParams {
        SearchParams {
            max_closure: self.max_closure,
            budget: self.budget,
            exhaustive_bound: self.exhaustive_bound,
            seed: self.seed,
        }
    }

    pub fn from_params(p: &SearchParams) -> Self {
        SearchOpts {
            max_closure: p.max_closure,
            budget: p.budget,
            exhaustive_bound: p.exhaustive_bound,
            threads: 1,
            seed: p.seed,
        }
    }

    fn order(&self, n: usize) -> Vec<usize> {
        let mut v: Vec<usize> = (0..n).collect();
        if let Some(seed) = self.seed {
            v.shuffle(&mut rand::rngs::StdRng::seed_from_u64(seed));
        }
        v
    }
}

/// A rack to search, with the class it came from when there is one.
#[derive(Clone, Debug)]
pub struct ClassRack {
    rack: FiniteRack,
    class: Option<ConjClass>,
    homogeneous: bool,
    base: usize,
}

impl ClassRack {
    pub fn from_class(class: &ConjClass) -> Self {
        let rack = FiniteRack::from_class(class);
        let base = class.index_of(class.representative()).expect("representative lies in its class");
        ClassRack { rack, class: Some(class.clone()), homogeneous: true, base }
    }

    /// A bare rack; it counts as homogeneous when the inner group is
    /// transitive, in which case `r` can be fixed to index 0.
    pub fn from_rack(rack: FiniteRack) -> Self {
        let homogeneous = rack.is_indecomposable();
        ClassRack { rack, class: None, homogeneous, base: 0 }
    }

    pub fn rack(&self) -> &FiniteRack {
        &self.rack
    }

    pub fn class(&self) -> Option<&ConjClass> {
        self.class.as_ref()
    }

    pub fn ctx(&self) -> Option<&GroupCtx> {
        self.class.as_ref().map(ConjClass::ctx)
    }

    pub fn size(&self) -> usize {
        self.rack.size()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    pub fn member(&self, i: usize) -> Member {
        match &self.class {
            Some(c) => Member::matrix(c.get(i).clone(), Some(c.conjugator(i))),
            None => Member::index(i),
        }
    }

    fn firsts(&self) -> Vec<usize> {
        if self.homogeneous { vec![self.base] } else { (0..self.size()).collect() }
    }

    fn witness(&self, property: Property, method: Method, opts: &SearchOpts) -> Witness {
        let (group, class_rep, rack) = match &self.class {
            Some(c) => (Some(c.ctx().header()), Some(c.representative().clone()), None),
            None => (None, None, Some(self.rack.to_json())),
        };
        Witness {
            property,
            method,
            group,
            class_rep,
            rack,
            r: None,
            s: None,
            quadruple: vec![],
            subrack: vec![],
            subgroup_gens: vec![],
            orbit_sizes: vec![],
            params: opts.params(),
        }
    }

    /// `x ▷ φ_x = id` on every element; for a homogeneous rack it is
    /// enough to look at one row.
    pub fn is_abelian(&self) -> bool {
        let rows: Vec<usize> = if self.homogeneous { vec![self.base] } else { (0..self.size()).collect() };
        rows.iter().all(|&x| (0..self.size()).all(|y| self.rack.op(x, y) == y))
    }
}

fn checks(pairs: &[(&str, bool)]) -> BTreeMap<String, bool> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

/// `min > 2` or `max > 4`.
pub fn size_condition(a: usize, b: usize) -> bool {
    a.min(b) > 2 || a.max(b) > 4
}

enum Step<T> {
    Hit(T),
    Miss,
    Capped,
}

/// First index (in scan order) whose step is a hit, scanning with
/// `threads` workers; also whether any step hit a cap.
fn first_hit<T: Send>(n: usize, threads: usize, f: impl Fn(usize) -> Step<T> + Sync) -> (Option<(usize, T)>, bool) {
    let best = AtomicUsize::new(usize::MAX);
    let capped = AtomicBool::new(false);
    let threads = threads.max(1).min(n.max(1));
    let run = |t: usize| -> Option<(usize, T)> {
        let mut i = t;
        while i < n {
            if i > best.load(Ordering::Relaxed) {
                return None;
            }
            match f(i) {
                Step::Hit(v) => {
                    best.fetch_min(i, Ordering::Relaxed);
                    return Some((i, v));
                }
                Step::Capped => capped.store(true, Ordering::Relaxed),
                Step::Miss => {}
            }
            i += threads;
        }
        None
    };
    let hits: Vec<Option<(usize, T)>> = if threads == 1 {
        vec![run(0)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..threads).map(|t| s.spawn(move || run(t))).collect();
            handles.into_iter().map(|h| h.join().expect("scan worker panicked")).collect()
        })
    };
    let hit = hits.into_iter().flatten().min_by_key(|(i, _)| *i);
    (hit, capped.load(Ordering::Relaxed))
}

/// Pairs `(r, s)` in scan order, `r` fixed for homogeneous racks.
fn pair_list(t: &ClassRack, opts: &SearchOpts) -> Vec<(usize, usize)> {
    let order = opts.order(t.size());
    let mut v = Vec::new();
    for r in t.firsts() {
        for &s in &order {
            if s != r {
                v.push((r, s));
            }
        }
    }
    v
}

/// Type D over all pairs: `r ▷ (s ▷ (r ▷ s)) != s` and `s` outside the
/// `<r, s>`-orbit of `r`. Complete for a single class.
pub fn type_d_pair_search(t: &ClassRack, opts: &SearchOpts) -> Certificate {
    let rack = &t.rack;
    let pairs = pair_list(t, opts);
    let (hit, capped) = first_hit(pairs.len(), opts.threads, |k| {
        let (r, s) = pairs[k];
        let rs = rack.op(r, s);
        if rs == s || rack.op(r, rack.op(s, rs)) == s {
            return Step::Miss;
        }
        match bounded_orbit(rack, &[r, s], r, opts.max_closure) {
            None => Step::Capped,
            Some(o) if o.contains(&s) => Step::Miss,
            Some(o) => match bounded_orbit(rack, &[r, s], s, opts.max_closure) {
                None => Step::Capped,
                Some(os) => Step::Hit((o.len(), os.len())),
            },
        }
    });
    let mut w = t.witness(Property::D, Method::Pair, opts);
    match hit {
        Some((k, (a, b))) => {
            let (r, s) = pairs[k];
            w.r = Some(t.member(r));
            w.s = Some(t.member(s));
            w.orbit_sizes = vec![a, b];
            Certificate {
                kind: Kind::TypeD,
                witness: w,
                checks: checks(&[
                    ("members_in_class", true),
                    ("distinct_orbits", true),
                    ("rs_squared_ne_sr_squared", true),
                ]),
                search_bound: format!("first witness among {} pairs in scan order", pairs.len()),
                recipe: None,
                applicability: BTreeMap::new(),
            }
        }
        None => negative(w, !capped, format!("all {} pairs (r, s), orbit cap {}", pairs.len(), opts.max_closure)),
    }
}

fn negative(w: Witness, exhaustive: bool, what: String) -> Certificate {
    let (kind, bound) = if exhaustive {
        (Kind::NegativeExhaustive, format!("exhausted: {what}"))
    } else {
        (Kind::NegativeBounded, format!("bounded: {what}"))
    };
    Certificate {
        kind,
        witness: w,
        checks: checks(&[("search_rerun_agrees", true)]),
        search_bound: bound,
        recipe: None,
        applicability: BTreeMap::new(),
    }
}

fn bounded_orbit(rack: &FiniteRack, gens: &[usize], x: usize, cap: usize) -> Option<Vec<usize>> {
    space::orbit(&space::RackSpace(rack), gens, &x, cap).ok()
}

/// Sufficient test for type C with `H = <r, s>`: `rs != sr`, distinct
/// `H`-orbits and the size condition. A miss is only a bounded negative.
pub fn type_c_pair_search(t: &ClassRack, opts: &SearchOpts) -> Certificate {
    let rack = &t.rack;
    let pairs = pair_list(t, opts);
    let (hit, capped) = first_hit(pairs.len(), opts.threads, |k| {
        let (r, s) = pairs[k];
        if rack.op(r, s) == s {
            return Step::Miss;
        }
        let Some(or) = bounded_orbit(rack, &[r, s], r, opts.max_closure) else { return Step::Capped };
        if or.contains(&s) {
            return Step::Miss;
        }
        let Some(os) = bounded_orbit(rack, &[r, s], s, opts.max_closure) else { return Step::Capped };
        if size_condition(or.len(), os.len()) { Step::Hit((or.len(), os.len())) } else { Step::Miss }
    });
    let mut w = t.witness(Property::C, Method::Pair, opts);
    match hit {
        Some((k, (a, b))) => {
            let (r, s) = pairs[k];
            w.r = Some(t.member(r));
            w.s = Some(t.member(s));
            w.orbit_sizes = vec![a, b];
            Certificate {
                kind: Kind::TypeC,
                witness: w,
                checks: checks(&[
                    ("members_in_class", true),
                    ("rs_ne_sr", true),
                    ("distinct_orbits", true),
                    ("size_condition", true),
                ]),
                search_bound: format!("first witness among {} pairs in scan order", pairs.len()),
                recipe: None,
                applicability: BTreeMap::new(),
            }
        }
        None => {
            let cap = if capped { format!(", orbit cap {} reached", opts.max_closure) } else { String::new() };
            negative(
                w,
                false,
                format!("all {} pairs with H = <r, s> (sufficient condition only{cap})", pairs.len()),
            )
        }
    }
}

/// Shrinks `y` to the union of the inner orbits of `r` and `s` until those
/// two orbits cover it; `None` once `s` falls into the orbit of `r`.
fn refine(rack: &FiniteRack, r: usize, s: usize, mut y: Vec<usize>) -> Option<(Vec<usize>, Vec<usize>)> {
    loop {
        let orb_r = rack.orbit_under(&y, r);
        if orb_r.binary_search(&s).is_ok() {
            return None;
        }
        let orb_s = rack.orbit_under(&y, s);
        if orb_r.len() + orb_s.len() == y.len() {
            return Some((orb_r, orb_s));
        }
        let mut next = [orb_r, orb_s].concat();
        next.sort_unstable();
        y = next;
    }
}

/// Type C by closures of triples `{r, a, b}`, each refined to a subrack
/// made of exactly two inner orbits. Sufficient only.
pub fn type_c_seeded_search(t: &ClassRack, opts: &SearchOpts) -> Certificate {
    let rack = &t.rack;
    let order = opts.order(t.size());
    let mut w = t.witness(Property::C, Method::Seeded, opts);
    let mut examined: u64 = 0;
    let mut exhausted = true;
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    'outer: for r in t.firsts() {
        for (ia, &a) in order.iter().enumerate() {
            // all seeds with this `a`, in scan order
            let seeds: Vec<Vec<usize>> = order[ia..]
                .iter()
                .map(|&b| rack.subrack_closure(&[r, a, b]))
                .filter(|y| y.len() > 1 && seen.insert(y.clone()))
                .collect();
            examined += (order.len() - ia) as u64;
            let (hit, _) = first_hit(seeds.len(), opts.threads, |k| {
                let y = &seeds[k];
                for &s in y {
                    if rack.op(r, s) == s {
                        continue;
                    }
                    if let Some((orb_r, orb_s)) = refine(rack, r, s, y.clone()) {
                        if size_condition(orb_r.len(), orb_s.len()) {
                            return Step::Hit((s, orb_r, orb_s));
                        }
                    }
                }
                Step::Miss
            });
            if let Some((_, (s, orb_r, orb_s))) = hit {
                let mut y = [orb_r.clone(), orb_s.clone()].concat();
                y.sort_unstable();
                w.r = Some(t.member(r));
                w.s = Some(t.member(s));
                w.subrack = y.iter().map(|&i| t.member(i)).collect();
                w.orbit_sizes = vec![orb_r.len(), orb_s.len()];
                return subrack_certificate(w, t.ctx().is_some_and(GroupCtx::is_projective), format!(
                    "first refined triple closure in scan order after {examined} seeds"
                ));
            }
            if examined >= opts.budget {
                exhausted = false;
                break 'outer;
            }
        }
    }
    let what = if exhausted { "all triples {r, a, b}" } else { "triples {r, a, b} up to the budget" };
    negative(w, false, format!("{what}, {examined} seeds (sufficient condition only)"))
}

fn subrack_certificate(w: Witness, projective: bool, bound: String) -> Certificate {
    let mut c = checks(&[
        ("members_in_class", true),
        ("subrack_closed", true),
        ("r_s_in_subrack", true),
        ("two_inner_orbits", true),
        ("rs_ne_sr", true),
        ("size_condition", true),
    ]);
    if projective {
        c.insert("projection_injective".into(), true);
    }
    Certificate { kind: Kind::TypeC, witness: w, checks: c, search_bound: bound, recipe: None, applicability: BTreeMap::new() }
}

/// Complete decision of type C on a small rack: some subrack is the union
/// of exactly two inner orbits `R ∋ r`, `S ∋ s` with `r ▷ s != s` and the
/// size condition.
pub fn type_c_subrack_exhaustive(t: &ClassRack, opts: &SearchOpts) -> Result<Certificate> {
    let rack = &t.rack;
    let mut w = t.witness(Property::C, Method::ExhaustiveSubracks, opts);
    let mut count = 0usize;
    for y in rack.enumerate_subracks(opts.exhaustive_bound)? {
        count += 1;
        let orbits = rack.inn_orbits_on(&y);
        if orbits.len() != 2 || !size_condition(orbits[0].len(), orbits[1].len()) {
            continue;
        }
        for (a, b) in [(&orbits[0], &orbits[1]), (&orbits[1], &orbits[0])] {
            for &r in a {
                if let Some(&s) = b.iter().find(|&&s| rack.op(r, s) != s) {
                    w.method = Method::Subrack;
                    w.r = Some(t.member(r));
                    w.s = Some(t.member(s));
                    w.subrack = y.iter().map(|&i| t.member(i)).collect();
                    w.orbit_sizes = vec![a.len(), b.len()];
                    return Ok(subrack_certificate(
                        w,
                        t.ctx().is_some_and(GroupCtx::is_projective),
                        format!("first of the subracks in size-then-lexicographic order ({count} examined)"),
                    ));
                }
            }
        }
    }
    Ok(negative(w, true, format!("all {count} subracks of a rack of size {}", rack.size())))
}

/// Four pairwise non-commuting elements with pairwise distinct orbits under
/// the group they generate.
pub fn type_f_search(t: &ClassRack, opts: &SearchOpts) -> Certificate {
    let rack = &t.rack;
    let order = opts.order(t.size());
    let mut w = t.witness(Property::F, Method::Quadruple, opts);
    let mut examined: u64 = 0;
    let mut capped = false;
    let mut out_of_budget = false;
    'outer: for r in t.firsts() {
        let cand: Vec<usize> = order
            .iter()
            .copied()
            .filter(|&x| x != r && rack.op(r, x) != x && (t.homogeneous || x > r))
            .collect();
        for (i, &b) in cand.iter().enumerate() {
            for (j, &c) in cand.iter().enumerate().skip(i + 1) {
                if rack.op(b, c) == c {
                    continue;
                }
                for &d in &cand[j + 1..] {
                    if rack.op(b, d) == d || rack.op(c, d) == d {
                        continue;
                    }
                    examined += 1;
                    if examined > opts.budget {
                        out_of_budget = true;
                        break 'outer;
                    }
                    let gens = [r, b, c, d];
                    let mut ok = true;
                    for (k, &x) in gens.iter().enumerate().take(3) {
                        match bounded_orbit(rack, &gens, x, opts.max_closure) {
                            None => {
                                capped = true;
                                ok = false;
                                break;
                            }
                            Some(o) if gens[k + 1..].iter().any(|y| o.binary_search(y).is_ok()) => {
                                ok = false;
                                break;
                            }
                            Some(_) => {}
                        }
                    }
                    if ok {
                        w.quadruple = gens.iter().map(|&i| t.member(i)).collect();
                        return Certificate {
                            kind: Kind::TypeF,
                            witness: w,
                            checks: checks(&[
                                ("members_in_class", true),
                                ("pairwise_noncommuting", true),
                                ("distinct_orbits", true),
                            ]),
                            search_bound: format!("first quadruple in scan order ({examined} examined)"),
                            recipe: None,
                            applicability: BTreeMap::new(),
                        };
                    }
                }
            }
        }
    }
    let what = if out_of_budget {
        format!("quadruple budget {} exhausted", opts.budget)
    } else {
        format!("all {examined} pairwise non-commuting quadruples")
    };
    let what = if capped { format!("{what}, orbit cap {} reached", opts.max_closure) } else { what };
    negative(w, !out_of_budget && !capped, what)
}

/// Certificate that the whole rack is abelian, if it is.
pub fn abelian_certificate(t: &ClassRack, opts: &SearchOpts) -> Option<Certificate> {
    if !t.is_abelian() {
        return None;
    }
    let w = t.witness(Property::Abelian, Method::Class, opts);
    Some(Certificate {
        kind: Kind::Abelian,
        witness: w,
        checks: checks(&[("class_abelian", true)]),
        search_bound: format!("all {} elements", t.size()),
        recipe: None,
        applicability: BTreeMap::new(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Found,
    Excluded,
    NotFoundBounded,
}

impl Status {
    fn of(c: &Certificate) -> Status {
        match c.kind {
            Kind::NegativeExhaustive => Status::Excluded,
            Kind::NegativeBounded => Status::NotFoundBounded,
            _ => Status::Found,
        }
    }
}

/// Combined verdict for one class.
#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub size: usize,
    pub abelian: bool,
    pub indecomposable: bool,
    #[serde(rename = "typeC")]
    pub type_c: Status,
    #[serde(rename = "typeD")]
    pub type_d: Status,
    #[serde(rename = "typeF")]
    pub type_f: Status,
    /// `None` when the rack is beyond the exhaustive bound.
    pub sober: Option<bool>,
    /// `None` when the rack is too large to scan all pairs.
    pub austere: Option<bool>,
    /// `None` when only bounded negatives are available.
    pub kthulhu: Option<bool>,
    pub certificates: Vec<Certificate>,
}

impl Verdict {
    /// Short label: `abelian`, `sober`, `austere`, `kthulhu`, `typeC`,
    /// `typeD`, `typeF` or `undecided`.
    pub fn label(&self) -> &'static str {
        if self.abelian {
            "abelian"
        } else if self.type_c == Status::Found {
            "typeC"
        } else if self.type_d == Status::Found {
            "typeD"
        } else if self.type_f == Status::Found {
            "typeF"
        } else if self.sober == Some(true) {
            "sober"
        } else if self.austere == Some(true) {
            "austere"
        } else if self.kthulhu == Some(true) {
            "kthulhu"
        } else {
            "undecided"
        }
    }
}

/// Runs every search on one class and combines the outcomes.
pub fn classify(t: &ClassRack, opts: &SearchOpts) -> Result<Verdict> {
    let n = t.size();
    let indecomposable = t.homogeneous || t.rack.is_indecomposable();
    if let Some(cert) = abelian_certificate(t, opts) {
        return Ok(Verdict {
            size: n,
            abelian: true,
            indecomposable,
            type_c: Status::Excluded,
            type_d: Status::Excluded,
            type_f: Status::Excluded,
            sober: Some(true),
            austere: Some(true),
            kthulhu: Some(true),
            certificates: vec![cert],
        });
    }
    let d = type_d_pair_search(t, opts);
    let c = if n <= opts.exhaustive_bound {
        type_c_subrack_exhaustive(t, opts)?
    } else {
        let p = type_c_pair_search(t, opts);
        if p.kind == Kind::TypeC { p } else { type_c_seeded_search(t, opts) }
    };
    let f = type_f_search(t, opts);
    let sober = if n <= opts.exhaustive_bound { Some(t.rack.is_sober(opts.exhaustive_bound)?.is_none()) } else { None };
    let austere = if n <= TABLE_LIMIT { Some(t.rack.austere_violation(t.homogeneous).is_none()) } else { None };
    let statuses = [Status::of(&c), Status::of(&d), Status::of(&f)];
    let kthulhu = if statuses.contains(&Status::Found) {
        Some(false)
    } else if sober == Some(true) || austere == Some(true) || statuses.iter().all(|&s| s == Status::Excluded) {
        Some(true)
    } else {
        None
    };
    if kthulhu == Some(true) && statuses.contains(&Status::Found) {
        return Err(Error::Verification("a kthulhu class produced a positive witness".into()));
    }
    Ok(Verdict {
        size: n,
        abelian: false,
        indecomposable,
        type_c: statuses[0],
        type_d: statuses[1],
        type_f: statuses[2],
        sober,
        austere,
        kthulhu,
        certificates: vec![c, d, f],
    })
}

/// Checks the hypotheses on `H = <h_gens>`, `x` and `s` that force type C
/// (non-abelian `H`, `H` generated by the `H`-orbit of `x`, `s` in the
/// class outside that orbit with an orbit of more than two elements), and
/// turns them into a subgroup witness with the first `r` in the orbit of
/// `x` not commuting with `s`.
pub fn type_c_subgroup_check(
    ctx: &GroupCtx,
    class_rep: &Mat,
    h_gens: &[Mat],
    x: &Member,
    s: &Member,
    max_closure: usize,
) -> Result<Certificate> {
    use space::{orbit, pairwise_commute, GroupSpace};
    let gens: Vec<Mat> = h_gens.iter().map(|g| ctx.element(g)).collect::<Result<_>>()?;
    let xm = ctx.element(x.matrix.as_ref().ok_or_else(|| Error::Invalid("x needs a matrix".into()))?)?;
    let sm = ctx.element(s.matrix.as_ref().ok_or_else(|| Error::Invalid("s needs a matrix".into()))?)?;
    let rep = ctx.element(class_rep)?;
    for (name, m) in [("x", x), ("s", s)] {
        if !verify::member_in_class(ctx, &rep, m)? {
            return Err(Error::Refused(format!("{name} does not lie in the class")));
        }
    }
    if pairwise_commute(ctx, &gens) {
        return Err(Error::Refused("H is abelian".into()));
    }
    let h = crate::grp::subgroup_closure(ctx, &gens, max_closure)?;
    let in_h = |y: &Mat| h.binary_search(y).is_ok();
    if !in_h(&xm) || !in_h(&sm) {
        return Err(Error::Refused("x and s must lie in H".into()));
    }
    let sp = GroupSpace(ctx);
    let orb_x = orbit(&sp, &gens, &xm, max_closure)?;
    let k = crate::grp::subgroup_closure(ctx, &orb_x, max_closure)?;
    if k.len() != h.len() {
        return Err(Error::Refused("H is not generated by the H-orbit of x".into()));
    }
    if orb_x.binary_search(&sm).is_ok() {
        return Err(Error::Refused("s lies in the H-orbit of x".into()));
    }
    let orb_s = orbit(&sp, &gens, &sm, max_closure)?;
    if orb_s.len() <= 2 {
        return Err(Error::Refused("the H-orbit of s has at most two elements".into()));
    }
    // a conjugator for r: walk the orbit with explicit words
    let (r, g_r) = orbit_with_conjugators(ctx, &gens, &xm, max_closure)?
        .into_iter()
        .find(|(r, _)| !ctx.commute(r, &sm))
        .ok_or_else(|| Error::Verification("no element of the orbit of x moves s".into()))?;
    let r_conj = x.conjugator.as_ref().map(|gx| ctx.mul(&g_r, gx));
    let w = Witness {
        property: Property::C,
        method: Method::Subgroup,
        group: Some(ctx.header()),
        class_rep: Some(rep),
        rack: None,
        r: Some(Member::matrix(r, r_conj)),
        s: Some(Member::matrix(sm, s.conjugator.clone())),
        quadruple: vec![],
        subrack: vec![],
        subgroup_gens: gens,
        orbit_sizes: vec![orb_x.len(), orb_s.len()],
        params: SearchOpts { max_closure, ..Default::default() }.params(),
    };
    Ok(Certificate {
        kind: Kind::TypeC,
        witness: w,
        checks: checks(&[
            ("members_in_class", true),
            ("r_s_in_subgroup", true),
            ("rs_ne_sr", true),
            ("distinct_orbits", true),
            ("subgroup_generated_by_orbits", true),
            ("size_condition", true),
        ]),
        search_bound: "explicit subgroup".into(),
        recipe: None,
        applicability: checks(&[
            ("subgroup_nonabelian", true),
            ("subgroup_generated_by_orbit_of_x", true),
            ("s_outside_orbit_of_x", true),
            ("orbit_of_s_exceeds_two", true),
        ])
        .into_iter()
        .map(|(k, v)| (k, v.to_string()))
        .collect(),
    })
}

/// The orbit of `x` under conjugation by `<gens>`, each element paired with
/// a conjugator from `x`, in canonical order.
pub fn orbit_with_conjugators(ctx: &GroupCtx, gens: &[Mat], x: &Mat, cap: usize) -> Result<Vec<(Mat, Mat)>> {
    let x = ctx.canonicalize(x);
    let mut seen: HashSet<Vec<u8>> = HashSet::from([x.pack()]);
    let mut out = vec![(x.clone(), ctx.identity())];
    let mut head = 0;
    while head < out.len() {
        let (y, g) = out[head].clone();
        head += 1;
        for h in gens {
            let z = ctx.conj(h, &y);
            if seen.insert(z.pack()) {
                if out.len() >= cap {
                    return Err(Error::bound("orbit", cap, out.len() + 1));
                }
                out.push((z, ctx.mul(h, &g)));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// Re-runs the search a negative certificate records.
pub fn rerun(t: &ClassRack, property: Property, method: Method, opts: &SearchOpts) -> Result<Certificate> {
    Ok(match (property, method) {
        (Property::D, _) => type_d_pair_search(t, opts),
        (Property::F, _) => type_f_search(t, opts),
        (Property::C, Method::Pair) => type_c_pair_search(t, opts),
        (Property::C, Method::Seeded) => type_c_seeded_search(t, opts),
        (Property::C, Method::ExhaustiveSubracks) => type_c_subrack_exhaustive(t, opts)?,
        (Property::Abelian, _) => abelian_certificate(t, opts).unwrap_or_else(|| {
            negative(t.witness(Property::Abelian, Method::Class, opts), true, "not abelian".into())
        }),
        (p, m) => return Err(Error::Invalid(format!("no search for property {p:?} by {m:?}"))),
    })
}
