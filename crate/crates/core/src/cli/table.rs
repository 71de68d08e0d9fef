//! Small-parameter rows of the PSL_2 table and of the kthulhu table,
//! recomputed by the detectors.

use serde::Serialize;

use crate::detect::{classify, ClassRack, SearchOpts, Verdict};
use crate::gfq::make_field;
use crate::grp::{class_bound, conj_class, conjugacy_classes, enumerate_group, ConjClass, GroupCtx, GROUP_BOUND};
use crate::matq::{charpoly, is_semisimple, poly_is_irreducible, Mat};
use crate::numtheory::prime_power;
use crate::Result;

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub group: String,
    pub q: u64,
    /// `unipotent`, `split` or `irreducible`, plus the element order.
    pub class: String,
    /// Cycle-type label through the small isomorphisms, when known.
    pub label: String,
    pub order: u64,
    pub size: usize,
    pub verdict: String,
    pub expected: String,
    /// `agrees`, `disagrees`, `bounded` (no witness, no exhaustive proof),
    /// `open` or `out-of-scope`.
    pub status: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Expect {
    Abelian,
    Sober,
    Kthulhu,
    Collapses,
}

impl Expect {
    fn name(self) -> &'static str {
        match self {
            Expect::Abelian => "abelian",
            Expect::Sober => "sober",
            Expect::Kthulhu => "kthulhu",
            Expect::Collapses => "collapses",
        }
    }

    fn judge(self, v: &Verdict) -> &'static str {
        let positive = matches!(v.label(), "typeC" | "typeD" | "typeF");
        let holds = match self {
            Expect::Abelian => v.abelian,
            Expect::Sober => v.sober == Some(true),
            Expect::Kthulhu => v.kthulhu == Some(true),
            Expect::Collapses => positive,
        };
        let refuted = match self {
            Expect::Abelian => !v.abelian && v.sober.is_some(),
            Expect::Sober => v.sober == Some(false),
            Expect::Kthulhu => positive,
            Expect::Collapses => v.kthulhu == Some(true),
        };
        if holds {
            "agrees"
        } else if refuted {
            "disagrees"
        } else {
            "bounded"
        }
    }
}

fn is_square_q(q: u64) -> bool {
    prime_power(q).is_some_and(|(_, m)| m % 2 == 0)
}

/// `unipotent`, `split` or `irreducible` for an element of (P)SL_2 or a
/// general class; `mixed` when semisimple with a reducible characteristic
/// polynomial of more than one factor type, `other` otherwise.
fn class_kind(ctx: &GroupCtx, x: &Mat) -> &'static str {
    let f = ctx.field();
    let n = x.n();
    let scalars: Vec<u32> = if ctx.is_projective() { ctx.center().to_vec() } else { vec![f.one()] };
    let unipotent = scalars.iter().any(|&z| {
        let y = x.scale(z);
        y.sub(&Mat::identity(f, n)).pow(n as i64).map(|m| m.is_zero()).unwrap_or(false)
    });
    if unipotent {
        "unipotent"
    } else if !is_semisimple(x) {
        "other"
    } else if poly_is_irreducible(&charpoly(x), f) {
        "irreducible"
    } else {
        "split"
    }
}

fn psl2_label(q: u64, order: u64, kind: &str) -> &'static str {
    match (q, order, kind) {
        (2, 3, _) => "(3)",
        (2, 2, _) => "(2)",
        (3, 2, _) => "(2^2)",
        (3, 3, _) => "(3)",
        (4, 5, _) => "(5)",
        (4, 3, _) => "(3)",
        (4, 2, _) => "(2^2)",
        (5, 2, _) => "(1,2^2)",
        (5, 3, _) => "(3)",
        (5, 5, _) => "(5)",
        (9, 2, _) => "(1^2,2^2)",
        (9, 4, _) => "(2,4)",
        (9, 5, _) => "(1,5)",
        _ => "",
    }
}

fn expected_psl2(q: u64, order: u64, kind: &str) -> Expect {
    let even = q.is_multiple_of(2);
    match kind {
        _ if (q, order) == (2, 3) || (q, order) == (3, 2) => Expect::Abelian,
        "unipotent" if even || !is_square_q(q) => Expect::Kthulhu,
        "split" if q == 5 && order == 2 => Expect::Sober,
        "irreducible" if order > 3 => Expect::Sober,
        "irreducible" if order == 3 && even && !is_square_q(q) => Expect::Sober,
        _ => Expect::Collapses,
    }
}

fn row(ctx: &GroupCtx, class: &ConjClass, label: &str, expect: Expect, opts: &SearchOpts) -> Result<TableRow> {
    let rep = class.representative();
    let order = ctx.element_order(rep)?;
    let kind = class_kind(ctx, rep);
    let v = classify(&ClassRack::from_class(class), opts)?;
    Ok(TableRow {
        group: ctx.name(),
        q: ctx.q(),
        class: format!("{kind}, order {order}"),
        label: label.to_string(),
        order,
        size: class.len(),
        verdict: v.label().to_string(),
        expected: expect.name().to_string(),
        status: expect.judge(&v).to_string(),
    })
}

fn prime_powers(qmax: u64) -> impl Iterator<Item = u64> {
    (2..=qmax).filter(|&q| prime_power(q).is_some())
}

fn group(family_n: (&str, usize), q: u64) -> Result<GroupCtx> {
    let (p, m) = prime_power(q).ok_or_else(|| crate::Error::Invalid(format!("{q} is not a prime power")))?;
    let f = make_field(p, m)?;
    let ctx = match family_n.0 {
        "sl" => GroupCtx::sl(family_n.1, &f)?,
        _ => GroupCtx::sp(family_n.1, &f)?,
    };
    Ok(ctx.projective())
}

/// Every non-trivial class of PSL_2(q), `q ≤ qmax`, with the verdict the
/// tables predict and the one the detectors reach.
pub fn psl2_small(qmax: u64, opts: &SearchOpts) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for q in prime_powers(qmax) {
        let ctx = group(("sl", 2), q)?;
        let g = enumerate_group(&ctx, GROUP_BOUND)?;
        for class in conjugacy_classes(&ctx, &g)? {
            if class.len() == 1 {
                continue;
            }
            let rep = class.representative();
            let order = ctx.element_order(rep)?;
            let kind = class_kind(&ctx, rep);
            rows.push(row(&ctx, &class, psl2_label(q, order, kind), expected_psl2(q, order, kind), opts)?);
        }
    }
    Ok(rows)
}

fn placeholder(group: &str, q: u64, class: &str, status: &str) -> TableRow {
    TableRow {
        group: group.to_string(),
        q,
        class: class.to_string(),
        label: String::new(),
        order: 0,
        size: 0,
        verdict: String::new(),
        expected: Expect::Kthulhu.name().to_string(),
        status: status.to_string(),
    }
}

fn ints(ctx: &GroupCtx, rows: &[&[i64]]) -> Mat {
    Mat::from_ints(ctx.field(), rows)
}

/// Small instances of every kthulhu row for PSL_n(q) and PSp_2n(q), with
/// rows beyond desk scale marked `out-of-scope` and the PSp_4(7) split
/// involutions marked `open`.
pub fn kthulhu(qmax: u64, opts: &SearchOpts) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    let k = Expect::Kthulhu;
    let by_rep = |ctx: &GroupCtx, x: &Mat, label: &str, rows: &mut Vec<TableRow>| -> Result<()> {
        let class = conj_class(ctx, x, class_bound())?;
        rows.push(row(ctx, &class, label, k, opts)?);
        Ok(())
    };
    for q in prime_powers(qmax) {
        let ctx = group(("sl", 2), q)?;
        let even = q % 2 == 0;
        if even || !is_square_q(q) {
            let f = ctx.field().clone();
            let nonsquare = f.elements().find(|&a| a != 0 && !f.is_square(a)).unwrap_or(f.one());
            let mut reps = vec![1];
            if !even {
                reps.push(nonsquare);
            }
            for b in reps {
                let mut x = Mat::identity(&f, 2);
                x.set(0, 1, b);
                by_rep(&ctx, &x, "(2)", &mut rows)?;
            }
        }
        if q == 5 {
            by_rep(&ctx, &ints(&ctx, &[&[2, 0], &[0, 3]]), "involution", &mut rows)?;
        }
        let g = enumerate_group(&ctx, GROUP_BOUND)?;
        for class in conjugacy_classes(&ctx, &g)? {
            let rep = class.representative();
            if class.len() == 1 || class_kind(&ctx, rep) != "irreducible" {
                continue;
            }
            let order = ctx.element_order(rep)?;
            if order > 3 || (order == 3 && even && !is_square_q(q)) {
                rows.push(row(&ctx, &class, &format!("irreducible, |x| = {order}"), k, opts)?);
            }
        }
    }
    let psl3_2 = group(("sl", 3), 2)?;
    by_rep(&psl3_2, &ints(&psl3_2, &[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]]), "(3)", &mut rows)?;
    for q in prime_powers(qmax.min(3)) {
        let ctx = group(("sl", 3), q)?;
        let g = enumerate_group(&ctx, GROUP_BOUND)?;
        for class in conjugacy_classes(&ctx, &g)? {
            if class_kind(&ctx, class.representative()) == "irreducible" {
                rows.push(row(&ctx, &class, "irreducible", k, opts)?);
            }
        }
    }
    rows.push(placeholder("PSL_n(q), n ≥ 5 prime", 0, "irreducible", "out-of-scope"));
    if qmax >= 2 {
        let sp = group(("sp", 4), 2)?;
        by_rep(&sp, &ints(&sp, &[&[1, 0, 0, 1], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]), "W(1)+V(2)", &mut rows)?;
        by_rep(&sp, &ints(&sp, &[&[1, 0, 1, 0], &[0, 1, 0, 1], &[0, 0, 1, 0], &[0, 0, 0, 1]]), "W(2)", &mut rows)?;
    }
    for q in prime_powers(qmax.min(5)).filter(|&q| q % 2 == 1 && !is_square_q(q)) {
        let sp = group(("sp", 4), q)?;
        let f = sp.field().clone();
        let nonsquare = f.elements().find(|&a| a != 0 && !f.is_square(a)).expect("odd q has non-squares");
        for b in [f.one(), nonsquare] {
            let mut x = Mat::identity(&f, 4);
            x.set(0, 3, b);
            by_rep(&sp, &x, "(1^2,2)", &mut rows)?;
        }
    }
    for q in [3, 5].into_iter().filter(|&q| q <= qmax) {
        let sp = group(("sp", 4), q)?;
        by_rep(&sp, &ints(&sp, &[&[1, 0, 0, 0], &[0, -1, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, 1]]), "split involution", &mut rows)?;
    }
    rows.push(placeholder("PSp_4(7)", 7, "split involution", "open"));
    rows.push(placeholder("PSp_2n(q), n ≥ 3", 0, "unipotent rows", "out-of-scope"));
    Ok(rows)
}
