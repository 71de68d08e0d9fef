//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use collapse_lab::certify::{
    coxeter_certificate, coxeter_subgroup, cuspidal_product_certificate, irr_k_certificate, psl_composite_certificate,
    so_mixed_certificate, sp4_levi_certificate, sp4_levi_parameters, split_certificate, SoSecond,
};
use collapse_lab::detect::{
    classify, type_c_pair_search, type_d_pair_search, type_f_search, verify_certificate, Certificate, ClassRack, Kind,
    SearchOpts, Status,
};
use collapse_lab::gfq::{make_field, Field, Poly};
use collapse_lab::grp::perm::{alternating, centralizer_in, class_in, symmetric, Perm};
use collapse_lab::grp::{centralizer, conj_class, conjugacy_classes, embed_j, enumerate_group, ConjClass, GroupCtx};
use collapse_lab::matq::{charpoly, companion, is_semisimple, phi, poly_is_irreducible, Form, Mat};
use collapse_lab::numtheory::{gcd_identities, ppd_element_check, prime_power, xn_eps_irreducible, xn_eps_irreducible_direct};
use collapse_lab::rack::FiniteRack;
use collapse_lab::weyl::{
    all_signed_perms, c_lambda, coxeter_b, cuspidal_representatives, is_cuspidal, partitions, torus_order,
    torus_order_type_a, SignedPerm,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn field(p: u64, m: u32) -> Arc<Field> {
    make_field(p, m).unwrap()
}

fn field_q(q: u64) -> Arc<Field> {
    let (p, m) = prime_power(q).unwrap();
    field(p, m)
}

fn comp(f: &Arc<Field>, coeffs: &[i64]) -> Mat {
    companion(&Poly::new(coeffs.iter().map(|&a| f.from_i64(a)).collect()), f).unwrap()
}

fn diag(f: &Arc<Field>, d: &[i64]) -> Mat {
    Mat::diag(f, &d.iter().map(|&a| f.from_i64(a)).collect::<Vec<_>>())
}

fn prime_powers(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&q| prime_power(q).is_some()).collect()
}

/// Exact integer determinant by fraction-free elimination.
fn bareiss(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// `det(c·I − M)` for an integer matrix `M`.
fn char_value(m: &[Vec<i64>], c: i128) -> i128 {
    let n = m.len();
    bareiss((0..n).map(|i| (0..n).map(|j| if i == j { c } else { 0 } - m[i][j] as i128).collect()).collect())
}

fn signed_oracle(w: &SignedPerm, q: u64) -> BigUint {
    BigUint::from(char_value(&w.reflection_matrix(), q as i128).unsigned_abs())
}

struct Psl2Class {
    order: u64,
    irreducible: bool,
    semisimple: bool,
    class: ConjClass,
}

fn psl2_classes(q: u64) -> Vec<Psl2Class> {
    let f = field_q(q);
    let ctx = GroupCtx::sl(2, &f).unwrap().projective();
    let g = enumerate_group(&ctx, 1 << 20).unwrap();
    conjugacy_classes(&ctx, &g)
        .unwrap()
        .into_iter()
        .filter(|c| c.len() > 1)
        .map(|class| {
            let rep = class.representative().clone();
            Psl2Class {
                order: ctx.element_order(&rep).unwrap(),
                irreducible: poly_is_irreducible(&charpoly(&rep), &f),
                semisimple: is_semisimple(&rep),
                class,
            }
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let opts = SearchOpts::default();
    let verdict = |c: &Psl2Class| classify(&ClassRack::from_class(&c.class), &opts).unwrap();
    let mut notes = Vec::new();

    let c2: Vec<_> = psl2_classes(2).into_iter().filter(|c| c.order == 3).collect();
    ensure!(c2.len() == 1 && verdict(&c2[0]).abelian, "PSL_2(2) class (3) is not abelian");
    let c3: Vec<_> = psl2_classes(3).into_iter().filter(|c| c.order == 2).collect();
    ensure!(c3.len() == 1 && verdict(&c3[0]).abelian, "PSL_2(3) class (2^2) is not abelian");

    let q4 = psl2_classes(4);
    let fives: Vec<_> = q4.iter().filter(|c| c.order == 5).collect();
    ensure!(fives.len() == 2, "PSL_2(4) has {} classes of order 5", fives.len());
    for c in &fives {
        let v = verdict(c);
        ensure!(c.class.len() == 12 && v.sober == Some(true), "PSL_2(4) class (5): size {}, sober {:?}", c.class.len(), v.sober);
    }
    let threes: Vec<_> = q4.iter().filter(|c| c.order == 3).collect();
    ensure!(threes.len() == 1 && !threes[0].irreducible, "PSL_2(4) order-3 class is not a single split class");
    ensure!(verdict(threes[0]).type_c == Status::Found, "PSL_2(4) class (3) is not type C");
    notes.push("PSL_2(4): (5) sober x2, (3) typeC".to_string());

    let q5 = psl2_classes(5);
    let inv: Vec<_> = q5.iter().filter(|c| c.order == 2).collect();
    ensure!(inv.len() == 1 && inv[0].class.len() == 15, "PSL_2(5) involution class is not a single class of 15");
    ensure!(verdict(inv[0]).sober == Some(true), "PSL_2(5) class (1,2^2) is not sober");
    let irr: Vec<_> = q5.iter().filter(|c| c.irreducible).collect();
    ensure!(!irr.is_empty(), "PSL_2(5) has no irreducible class");
    for c in &irr {
        ensure!(verdict(c).type_c == Status::Found, "PSL_2(5) irreducible class of order {} is not type C", c.order);
    }
    notes.push(format!("PSL_2(5): (1,2^2) sober, {} irreducible class typeC", irr.len()));

    let q9: Vec<_> = psl2_classes(9).into_iter().filter(|c| c.order == 2).collect();
    ensure!(q9.len() == 1 && q9[0].class.len() == 45, "PSL_2(9) involutions are not a single class of 45");
    ensure!(q9[0].semisimple && verdict(&q9[0]).type_c == Status::Found, "PSL_2(9) class (1^2,2^2) is not type C");
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!("{}; PSL_2(9) (1^2,2^2) typeC", notes.join("; ")))
}

fn criterion_2() -> Outcome {
    let a6 = alternating(6);
    let h = centralizer_in(&a6, &Perm::from_cycles(6, &[&[5, 6]]));
    let class = class_in(&a6, &Perm::from_cycles(6, &[&[1, 2], &[3, 4]]));
    let h_set: BTreeSet<&Perm> = h.iter().collect();
    let meet: Vec<Perm> = class.iter().filter(|x| h_set.contains(x)).cloned().collect();
    let mut orbit_sizes: Vec<usize> = Vec::new();
    let mut seen: BTreeSet<Perm> = BTreeSet::new();
    for x in &meet {
        if seen.contains(x) {
            continue;
        }
        let orbit: BTreeSet<Perm> = h.iter().map(|g| x.conj_by(g)).collect();
        orbit_sizes.push(orbit.len());
        seen.extend(orbit);
    }
    orbit_sizes.sort_unstable();
    let detail = format!("|H| = {}, |O ∩ H| = {}, H-orbits {:?}", h.len(), meet.len(), orbit_sizes);
    ensure!(h.len() == 24, "{detail}");
    ensure!(meet.len() == 12 && orbit_sizes == [6, 6], "expected 12 elements in two orbits of 6; found {detail}");
    Ok(detail)
}

fn criterion_3() -> Outcome {
    let s5 = symmetric(5);
    let class = class_in(&s5, &Perm::from_cycles(5, &[&[1, 2, 3, 4, 5]]));
    ensure!(class.len() == 24, "class of 5-cycles has {} elements", class.len());
    let rack = FiniteRack::from_perms(&class).map_err(|e| e.to_string())?;
    let mut sizes: Vec<usize> = rack.inn_orbits().iter().map(Vec::len).collect();
    sizes.sort_unstable();
    // (n − 1)!/2 = 12
    ensure!(sizes == [12, 12], "inner orbits {sizes:?}");
    let t = ClassRack::from_rack(rack);
    let cert = type_c_pair_search(&t, &SearchOpts::default());
    ensure!(cert.kind == Kind::TypeC, "pair search returned {:?}", cert.kind);
    let report = verify_certificate(&cert).map_err(|e| e.to_string())?;
    ensure!(report.ok, "witness does not re-verify: {:?}", report.mismatches);
    Ok(format!("inner orbits {sizes:?}, pair witness with orbit sizes {:?}", cert.witness.orbit_sizes))
}

fn criterion_4() -> Outcome {
    let mut checked = 0;
    for n in [2u32, 3] {
        for q in [2u64, 3, 4, 5] {
            let f = field_q(q);
            let ext = f.extension(n).unwrap();
            let order = ext.order() as u64 - 1;
            let torus: Vec<Mat> = (0..order)
                .map(|k| ext.regular_representation(ext.pow(ext.primitive_element(), k)))
                .collect();
            let gl = GroupCtx::gl(n as usize, &f).unwrap();
            // exact class enumeration where the class fits in memory
            let enumerate = !(n == 3 && q == 5);
            for y in torus.iter().filter(|t| poly_is_irreducible(&charpoly(t), &f)) {
                let meet: BTreeSet<Vec<u32>> = if enumerate {
                    let class = conj_class(&gl, y, 5_000_000).map_err(|e| e.to_string())?;
                    torus.iter().filter(|t| class.contains(t)).map(|t| t.entries().to_vec()).collect()
                } else {
                    let cp = charpoly(y);
                    torus.iter().filter(|t| charpoly(t) == cp).map(|t| t.entries().to_vec()).collect()
                };
                let frob: BTreeSet<Vec<u32>> =
                    (0..n).map(|i| y.pow(q.pow(i) as i64).unwrap().entries().to_vec()).collect();
                ensure!(meet.len() == n as usize, "GL_{n}({q}): class meets the torus in {} elements", meet.len());
                ensure!(meet == frob, "GL_{n}({q}): class ∩ torus differs from the Frobenius orbit");
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} irreducible elements; GL_3(5) classes identified by characteristic polynomial"))
}

fn criterion_5() -> Outcome {
    let mut semisimple_classes = 0;
    let mut coxeter_classes = 0;
    let groups: Vec<GroupCtx> = vec![
        GroupCtx::sl(2, &field(3, 1)).unwrap(),
        GroupCtx::sl(2, &field(5, 1)).unwrap(),
        GroupCtx::sp(4, &field(3, 1)).unwrap(),
    ];
    for ctx in &groups {
        let q = ctx.q() as i64;
        let g = enumerate_group(ctx, 1 << 20).map_err(|e| e.to_string())?;
        for class in conjugacy_classes(ctx, &g).map_err(|e| e.to_string())? {
            let x = class.representative();
            if !is_semisimple(x) {
                continue;
            }
            semisimple_classes += 1;
            ensure!(class.contains(&x.pow(q).unwrap()), "{}: x^q leaves the class of {x:?}", ctx.name());
            let coxeter = ctx.family() == collapse_lab::grp::Family::Sp
                && poly_is_irreducible(&charpoly(x), ctx.field())
                && x.pow(q * q + 1).unwrap().is_identity();
            if coxeter {
                coxeter_classes += 1;
                ensure!(!class.contains(&x.neg()), "{}: −x lies in the Coxeter class of {x:?}", ctx.name());
            }
        }
    }
    ensure!(coxeter_classes > 0, "no Coxeter class found in Sp_4(3)");
    Ok(format!("{semisimple_classes} semisimple classes closed under x ↦ x^q; {coxeter_classes} Coxeter classes with −x outside"))
}

fn criterion_6() -> Outcome {
    let qs = [2u64, 3, 4, 5, 7, 8, 9];
    let mut count = 0;
    for n in 1..=6usize {
        let cycle: Vec<usize> = (1..n).chain(std::iter::once(0)).collect();
        let perm_matrix: Vec<Vec<i64>> =
            (0..n).map(|i| (0..n).map(|j| i64::from(cycle[j] == i)).collect()).collect();
        for &q in &qs {
            let closed_a = BigUint::from(q).pow(n as u32) - 1u32;
            let oracle_a = BigUint::from(char_value(&perm_matrix, q as i128).unsigned_abs());
            let got_a = torus_order_type_a(&cycle, q).map_err(|e| e.to_string())?;
            ensure!(got_a == closed_a && oracle_a == closed_a, "GL_{n}({q}) Coxeter torus: {got_a} vs {closed_a}");
            let cox = coxeter_b(n);
            let closed_b = BigUint::from(q).pow(n as u32) + 1u32;
            let got_b = torus_order(&cox, q);
            ensure!(got_b == closed_b && signed_oracle(&cox, q) == closed_b, "Sp_{}({q}) Coxeter torus: {got_b}", 2 * n);
            count += 2;
        }
    }
    for n in 1..=8usize {
        for lambda in partitions(n) {
            let w = c_lambda(&lambda);
            for &q in &qs {
                let closed: BigUint =
                    lambda.parts().iter().map(|&d| BigUint::from(q).pow(d as u32) + 1u32).product();
                let got = torus_order(&w, q);
                ensure!(got == closed, "λ = {lambda}, q = {q}: {got} vs {closed}");
                ensure!(signed_oracle(&w, q) == closed, "λ = {lambda}, q = {q}: determinant oracle disagrees");
                count += 1;
            }
        }
    }
    Ok(format!("{count} torus orders match closed forms and the determinant oracle"))
}

fn criterion_7() -> Outcome {
    let known = [1usize, 2, 3, 5, 7, 11, 15, 22];
    for n in 1..=8usize {
        let reps = cuspidal_representatives(n);
        ensure!(reps.len() == known[n - 1], "n = {n}: {} cuspidal representatives", reps.len());
        ensure!(partitions(n).len() == known[n - 1], "n = {n}: {} partitions", partitions(n).len());
        for (lambda, w) in &reps {
            ensure!(char_value(&w.reflection_matrix(), 1) != 0, "c_{lambda} has a fixed vector");
        }
    }
    let mut non_cuspidal = 0;
    for n in 1..=4usize {
        let all = all_signed_perms(n);
        let expected: usize = (1..=n).product::<usize>() << n;
        ensure!(all.len() == expected, "|W(B_{n})| = {}", all.len());
        for w in &all {
            let fixed = char_value(&w.reflection_matrix(), 1) == 0;
            if !is_cuspidal(w) {
                non_cuspidal += 1;
                ensure!(fixed, "non-cuspidal {:?} has no fixed vector", w.images());
            } else {
                ensure!(!fixed, "cuspidal {:?} has a fixed vector", w.images());
            }
        }
    }
    Ok(format!("p(5) = {}, p(8) = {}; {non_cuspidal} non-cuspidal elements of W(B_n), n ≤ 4, all with fixed vectors", known[4], known[7]))
}

fn reverify(label: &str, c: &Certificate) -> Result<(), String> {
    let report = verify_certificate(c).map_err(|e| format!("{label}: {e}"))?;
    ensure!(report.ok, "{label}: {:?}", report.mismatches);
    let round = Certificate::from_json(&c.to_json()).map_err(|e| format!("{label}: {e}"))?;
    ensure!(round == *c, "{label}: JSON round trip changed the certificate");
    Ok(())
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut per_recipe: BTreeMap<&str, usize> = BTreeMap::new();
    let mut record = |recipe: &'static str, label: &str, c: collapse_lab::Result<Certificate>| -> Result<Certificate, String> {
        let c = c.map_err(|e| format!("{label}: {e}"))?;
        reverify(label, &c)?;
        *per_recipe.entry(recipe).or_default() += 1;
        Ok(c)
    };
    let f2 = field(2, 1);
    let f3 = field(3, 1);
    let f4 = field(2, 2);
    let f5 = field(5, 1);

    record("split", "split PSp_4(5)", split_certificate(&GroupCtx::sp(4, &f5).unwrap().projective(), &diag(&f5, &[2, 1, 1, 3])))?;
    record("split", "split SO_7(3)", split_certificate(&GroupCtx::so(7, &f3).unwrap(), &diag(&f3, &[2, 1, 1, 1, 1, 1, 2])))?;

    let psp4_3 = GroupCtx::sp(4, &f3).unwrap().projective();
    record("irrk", "irrk PSp_4(3) regular", irr_k_certificate(&psp4_3, &comp(&f3, &[2, 1, 1])))?;
    let exception = record("irrk", "irrk PSp_4(3) X²+1", irr_k_certificate(&psp4_3, &comp(&f3, &[1, 0, 1])))?;
    record("irrk", "irrk Ω_6(2) cubic", irr_k_certificate(&GroupCtx::omega(6, &f2).unwrap(), &comp(&f2, &[1, 1, 0, 1])))?;

    for (f, ctx) in [(&f2, GroupCtx::sp(4, &f2).unwrap()), (&f3, psp4_3.clone())] {
        let cox = coxeter_subgroup(f, 2).unwrap();
        let sp = GroupCtx::sp(4, f).unwrap();
        let g = sp.generators().iter().fold(Mat::identity(f, 4), |acc, h| acc.mul(h));
        let x = g.mul(&cox.torus_element(1)).mul(&g.inv().unwrap());
        record("coxeter", &format!("coxeter {}", ctx.name()), coxeter_certificate(&ctx, &x))?;
    }

    let cox3 = coxeter_subgroup(&f3, 2).unwrap();
    record(
        "cuspidal",
        "cuspidal PSp_8(3)",
        cuspidal_product_certificate(&GroupCtx::sp(8, &f3).unwrap().projective(), &[cox3.torus_element(1), cox3.torus_element(2)]),
    )?;
    let y = comp(&f5, &[1, -1, 1]);
    record(
        "cuspidal",
        "cuspidal PSp_6(5)",
        cuspidal_product_certificate(&GroupCtx::sp(6, &f5).unwrap().projective(), &[y.clone(), y.clone(), y]),
    )?;

    record("sp4levi", "sp4levi PSp_4(5)", sp4_levi_certificate(&GroupCtx::sp(4, &f5).unwrap().projective(), 2, 1))?;
    record("sp4levi", "sp4levi Sp_4(2)", sp4_levi_certificate(&GroupCtx::sp(4, &f2).unwrap(), 1, 1))?;
    let (lambda, z) = sp4_levi_parameters(&f4).ok_or("no Levi parameters over F_4")?;
    record("sp4levi", "sp4levi Sp_4(4)", sp4_levi_certificate(&GroupCtx::sp(4, &f4).unwrap(), lambda, z))?;

    for f in [&f2, &f3] {
        let ctx = GroupCtx::sl(4, f).unwrap().projective();
        record("pslcomposite", &format!("pslcomposite {}", ctx.name()), psl_composite_certificate(&ctx, 2, None))?;
    }

    record(
        "somixed",
        "somixed PΩ_6(3)",
        so_mixed_certificate(&GroupCtx::omega(6, &f3).unwrap().projective(), &comp(&f3, &[1, 0, 1]), SoSecond::Scalar(1)),
    )?;
    record(
        "somixed",
        "somixed PΩ_6(5)",
        so_mixed_certificate(&GroupCtx::omega(6, &f5).unwrap().projective(), &comp(&f5, &[2, 0, 1]), SoSecond::Scalar(2)),
    )?;
    record(
        "somixed",
        "somixed PΩ_8(3)",
        so_mixed_certificate(
            &GroupCtx::omega(8, &f3).unwrap().projective(),
            &comp(&f3, &[1, 0, 1]),
            SoSecond::Block(comp(&f3, &[2, 1, 1])),
        ),
    )?;

    ensure!(per_recipe.len() == 7 && per_recipe.values().all(|&k| k >= 2), "instances per recipe: {per_recipe:?}");

    // (rs)² ≠ (sr)² in PSp_4(3) for the X² + 1 exception, by direct products
    ensure!(exception.kind == Kind::TypeD, "X² + 1 exception gave {:?}", exception.kind);
    let r = exception.witness.r.as_ref().and_then(|m| m.matrix.clone()).ok_or("exception witness lacks r")?;
    let s = exception.witness.s.as_ref().and_then(|m| m.matrix.clone()).ok_or("exception witness lacks s")?;
    let rs = r.mul(&s);
    let sr = s.mul(&r);
    let (rs2, sr2) = (psp4_3.canonicalize(&rs.mul(&rs)), psp4_3.canonicalize(&sr.mul(&sr)));
    ensure!(rs2 != sr2, "(rs)² = (sr)² in PSp_4(3)");
    ensure!(psp4_3.contains(&r) && psp4_3.contains(&s), "r or s outside Sp_4(3)");

    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(600), "took {elapsed:?}");
    Ok(format!("{per_recipe:?}; (rs)² ≠ (sr)² in PSp_4(3)"))
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let f3 = field(3, 1);
    let ctx = GroupCtx::sp(4, &f3).unwrap().projective();
    let class = conj_class(&ctx, &diag(&f3, &[1, -1, -1, 1]), 1 << 20).map_err(|e| e.to_string())?;
    let t = ClassRack::from_class(&class);
    let opts = SearchOpts::default();
    let d = type_d_pair_search(&t, &opts);
    ensure!(d.kind == Kind::NegativeExhaustive, "type D search: {:?} ({})", d.kind, d.search_bound);
    let f = type_f_search(&t, &opts);
    ensure!(f.kind == Kind::NegativeExhaustive, "type F search: {:?} ({})", f.kind, f.search_bound);
    let austere = t.rack().austere_violation(t.is_homogeneous());
    ensure!(austere.is_none(), "2-generated subrack {austere:?} is neither abelian nor indecomposable");
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(1800), "took {elapsed:?}");
    Ok(format!("class of {} elements: D and F exhausted, austere", class.len()))
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let mut gcd = 0;
    for n in [3u64, 5, 7, 11, 13] {
        for q in prime_powers(2, 64) {
            let ids = gcd_identities(n, q).map_err(|e| e.to_string())?;
            ensure!(ids.all_hold(), "gcd identities fail at n = {n}, q = {q}: {ids:?}");
            gcd += 1;
        }
    }
    let mut grid = 0;
    for n in 2..=8u32 {
        for q in prime_powers(2, 16) {
            for eps in [1i8, -1] {
                let direct = xn_eps_irreducible_direct(n, eps, q).map_err(|e| e.to_string())?;
                ensure!(xn_eps_irreducible(n, eps, q) == direct, "X^{n} + ({eps}) over F_{q}: closed form disagrees");
                grid += 1;
            }
        }
    }
    let mut ppd = 0;
    for q in [2u64, 3, 4] {
        let f = field_q(q);
        let ctx = GroupCtx::sl(3, &f).unwrap();
        for x in enumerate_group(&ctx, 1 << 20).map_err(|e| e.to_string())? {
            if poly_is_irreducible(&charpoly(&x), &f) {
                let order = BigUint::from(ctx.element_order(&x).unwrap());
                ensure!(ppd_element_check(&order, q, 3).unwrap(), "SL_3({q}): element of order {order} has no ppd");
                ppd += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!("{gcd} gcd cases, {grid} irreducibility cases, {ppd} irreducible elements of SL_3(2,3,4)"))
}

fn random_invertible(f: &Arc<Field>, n: usize, rng: &mut StdRng) -> Mat {
    loop {
        let rows: Vec<Vec<u32>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..f.order())).collect()).collect();
        let m = Mat::from_rows(f, &rows).unwrap();
        if m.det() != 0 {
            return m;
        }
    }
}

fn random_element(ctx: &GroupCtx, rng: &mut StdRng) -> Mat {
    let gens = ctx.generators();
    (0..12).fold(ctx.identity(), |acc, _| acc.mul(&gens[rng.gen_range(0..gens.len())]))
}

fn criterion_11() -> Outcome {
    let mut racks = 0;
    let mut classes = 0;
    let mut groups: Vec<GroupCtx> = [2u64, 3, 4, 5, 7, 8, 9]
        .iter()
        .map(|&q| GroupCtx::sl(2, &field_q(q)).unwrap().projective())
        .collect();
    groups.push(GroupCtx::sl(3, &field(2, 1)).unwrap());
    groups.push(GroupCtx::sp(4, &field(2, 1)).unwrap());
    groups.push(GroupCtx::sl(2, &field(3, 1)).unwrap());
    for ctx in &groups {
        let g = enumerate_group(ctx, 1 << 20).map_err(|e| e.to_string())?;
        for class in conjugacy_classes(ctx, &g).map_err(|e| e.to_string())? {
            let c = centralizer(ctx, class.representative(), &g);
            ensure!(class.len() * c.len() == g.len(), "{}: |class| · |C| ≠ |G|", ctx.name());
            classes += 1;
            let rack = FiniteRack::from_class(&class);
            rack.check_rack_axioms().map_err(|v| format!("{}: {v:?}", ctx.name()))?;
            racks += 1;
        }
    }
    for perms in [class_in(&symmetric(5), &Perm::from_cycles(5, &[&[1, 2, 3, 4, 5]])), class_in(&alternating(6), &Perm::from_cycles(6, &[&[1, 2], &[3, 4]]))] {
        FiniteRack::from_perms(&perms).map_err(|e| e.to_string())?.check_rack_axioms().map_err(|v| format!("{v:?}"))?;
        racks += 1;
    }

    let mut rng = StdRng::seed_from_u64(0x5eed);
    let samples = 1000;
    let mut morphisms = 0;
    for (p, m, n) in [(3u64, 1u32, 2usize), (2, 2, 2), (2, 1, 3), (5, 1, 3)] {
        let f = field(p, m);
        let sp = GroupCtx::sp(2 * n, &f).unwrap();
        let so_even = GroupCtx::so(2 * n, &f).unwrap();
        let so_odd = (p != 2).then(|| GroupCtx::so(2 * n + 1, &f).unwrap());
        for _ in 0..samples {
            let a = random_invertible(&f, n, &mut rng);
            let b = random_invertible(&f, n, &mut rng);
            let ab = a.mul(&b);
            ensure!(phi(&ab).unwrap() == phi(&a).unwrap().mul(&phi(&b).unwrap()), "φ is not multiplicative over F_{}", f.order());
            for (form, ctx) in [(Form::Symplectic, Some(&sp)), (Form::OrthogonalEven, Some(&so_even)), (Form::OrthogonalOdd, so_odd.as_ref())] {
                let Some(ctx) = ctx else { continue };
                let (ja, jb, jab) = (embed_j(&a, form).unwrap(), embed_j(&b, form).unwrap(), embed_j(&ab, form).unwrap());
                ensure!(ctx.contains(&ja), "j(A) ∉ {}", ctx.name());
                ensure!(jab == ja.mul(&jb), "j is not multiplicative into {}", ctx.name());
            }
            morphisms += 1;
        }
    }

    let mut canon = 0;
    let projective = [
        GroupCtx::sp(4, &field(3, 1)).unwrap().projective(),
        GroupCtx::sl(2, &field(3, 2)).unwrap().projective(),
        GroupCtx::sl(3, &field(2, 2)).unwrap().projective(),
        GroupCtx::omega(6, &field(3, 1)).unwrap().projective(),
    ];
    for ctx in &projective {
        for _ in 0..samples {
            let a = random_element(ctx, &mut rng);
            let b = random_element(ctx, &mut rng);
            let ca = ctx.canonicalize(&a);
            ensure!(ctx.canonicalize(&ca) == ca, "{}: canonicalization is not idempotent", ctx.name());
            for &z in ctx.center() {
                ensure!(ctx.canonicalize(&a.scale(z)) == ca, "{}: z·a has a different canonical form", ctx.name());
            }
            ensure!(ctx.canonicalize(&ca.mul(&b)) == ctx.canonicalize(&a.mul(&b)), "{}: products disagree on cosets", ctx.name());
            ensure!(ctx.mul(&a, &b) == ctx.canonicalize(&a.mul(&b)), "{}: group product is not canonical", ctx.name());
            canon += 1;
        }
    }
    Ok(format!(
        "{racks} racks satisfy the axioms, {classes} classes satisfy orbit–stabilizer, {morphisms} φ/j samples, {canon} canonicalization samples"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("PSL_2 small-q verdicts", criterion_1),
        ("(1^2,2^2) in the A6 model meets the S4 centralizer in 12 elements, two orbits of 6", criterion_2),
        ("S5 5-cycles: two inner orbits of 12 and a type C pair", criterion_3),
        ("irreducible classes meet the Coxeter torus of GL_n(q) in n elements", criterion_4),
        ("x^q stays in semisimple classes; −x leaves Coxeter classes of Sp_4(3)", criterion_5),
        ("torus orders against closed forms and determinants", criterion_6),
        ("cuspidal classes of W(B_n)", criterion_7),
        ("certificate soundness sweep over all recipes", criterion_8),
        ("PSp_4(3) split involutions: exhaustive D/F negatives, austere", criterion_9),
        ("arithmetic suite", criterion_10),
        ("property suites", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2}: {name} [{secs:.1}s] {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2}: {name} [{secs:.1}s] {why}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
