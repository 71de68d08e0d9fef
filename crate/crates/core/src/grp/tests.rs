use num_bigint::BigUint;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::perm::{self, Perm};
use super::*;
use crate::gfq::make_field;
use crate::matq::{companion, minpoly, poly_is_irreducible};
use crate::gfq::Poly;

fn fq(p: u64, m: u32) -> Arc<Field> {
    make_field(p, m).unwrap()
}

fn random_element(ctx: &GroupCtx, rng: &mut StdRng, steps: usize) -> Mat {
    let gens = ctx.generators();
    let mut x = ctx.identity();
    for _ in 0..steps {
        x = ctx.mul(&x, &gens[rng.gen_range(0..gens.len())]);
    }
    x
}

#[test]
fn order_examples() {
    assert_eq!(GroupCtx::sl(2, &fq(2, 1)).unwrap().order(), BigUint::from(6u32));
    assert_eq!(GroupCtx::sp(4, &fq(3, 1)).unwrap().order(), BigUint::from(51840u32));
    for (p, m) in [(2, 1), (3, 1), (2, 2), (5, 1), (3, 2)] {
        let f = fq(p, m);
        assert_eq!(GroupCtx::gl(1, &f).unwrap().order(), BigUint::from(f.order() - 1));
    }
}

#[test]
fn generators_reach_the_order_formula() {
    let cases: Vec<(GroupCtx, usize)> = vec![
        (GroupCtx::sl(2, &fq(2, 1)).unwrap(), 6),
        (GroupCtx::sl(2, &fq(3, 1)).unwrap(), 24),
        (GroupCtx::sl(2, &fq(2, 2)).unwrap(), 60),
        (GroupCtx::sl(2, &fq(5, 1)).unwrap(), 120),
        (GroupCtx::sl(2, &fq(3, 2)).unwrap(), 720),
        (GroupCtx::sl(3, &fq(2, 1)).unwrap(), 168),
        (GroupCtx::sl(3, &fq(3, 1)).unwrap(), 5616),
        (GroupCtx::gl(2, &fq(3, 1)).unwrap(), 48),
        (GroupCtx::gl(1, &fq(5, 1)).unwrap(), 4),
        (GroupCtx::gl(3, &fq(2, 1)).unwrap(), 168),
        (GroupCtx::sp(2, &fq(3, 1)).unwrap(), 24),
        (GroupCtx::sp(2, &fq(2, 2)).unwrap(), 60),
        (GroupCtx::sp(4, &fq(2, 1)).unwrap(), 720),
        (GroupCtx::sp(4, &fq(3, 1)).unwrap(), 51840),
        (GroupCtx::so(3, &fq(3, 1)).unwrap(), 24),
        (GroupCtx::omega(3, &fq(3, 1)).unwrap(), 12),
        (GroupCtx::so(3, &fq(5, 1)).unwrap(), 120),
        (GroupCtx::omega(3, &fq(5, 1)).unwrap(), 60),
        (GroupCtx::so(4, &fq(3, 1)).unwrap(), 576),
        (GroupCtx::omega(4, &fq(3, 1)).unwrap(), 288),
        (GroupCtx::so(4, &fq(2, 1)).unwrap(), 72),
        (GroupCtx::omega(4, &fq(2, 1)).unwrap(), 36),
        (GroupCtx::so(5, &fq(3, 1)).unwrap(), 51840),
        (GroupCtx::omega(5, &fq(3, 1)).unwrap(), 25920),
        (GroupCtx::omega(6, &fq(2, 1)).unwrap(), 20160),
        (GroupCtx::so(6, &fq(2, 1)).unwrap(), 40320),
        (GroupCtx::sl(2, &fq(3, 1)).unwrap().projective(), 12),
        (GroupCtx::sl(2, &fq(5, 1)).unwrap().projective(), 60),
        (GroupCtx::sl(3, &fq(2, 2)).unwrap().projective(), 20160),
        (GroupCtx::sp(4, &fq(3, 1)).unwrap().projective(), 25920),
        (GroupCtx::omega(4, &fq(3, 1)).unwrap().projective(), 144),
        (GroupCtx::omega(5, &fq(3, 1)).unwrap().projective(), 25920),
    ];
    for (ctx, want) in cases {
        assert_eq!(ctx.order(), BigUint::from(want), "{}", ctx.name());
        let g = enumerate_group(&ctx, GROUP_BOUND).unwrap();
        assert_eq!(g.len(), want, "{}", ctx.name());
        assert!(ctx.generators().iter().all(|x| ctx.contains(x)), "{}", ctx.name());
    }
}

#[test]
fn omega_membership_matches_enumeration() {
    for (n, p) in [(3usize, 3u64), (3, 5), (4, 3), (5, 3), (4, 2), (6, 2), (4, 5)] {
        let f = fq(p, 1);
        let so = GroupCtx::so(n, &f).unwrap();
        let omega = GroupCtx::omega(n, &f).unwrap();
        let all = enumerate_group(&so, GROUP_BOUND).unwrap();
        let inside: Vec<Mat> = all.iter().filter(|x| in_omega(x)).cloned().collect();
        let closure = enumerate_group(&omega, GROUP_BOUND).unwrap();
        assert_eq!(inside, closure, "SO_{n}({p})");
        assert_eq!(2 * inside.len(), all.len());
    }
}

#[test]
fn center_examples() {
    assert_eq!(GroupCtx::sl(3, &fq(2, 2)).unwrap().center().len(), 3);
    assert_eq!(GroupCtx::sp(4, &fq(3, 1)).unwrap().center(), &[1, 2]);
    assert_eq!(GroupCtx::sl(2, &fq(2, 1)).unwrap().center(), &[1]);
    assert_eq!(GroupCtx::so(5, &fq(3, 1)).unwrap().center(), &[1]);
    // -I lies in Ω_4(q) iff q^2 = 1 mod 4, always for odd q
    assert_eq!(GroupCtx::omega(4, &fq(3, 1)).unwrap().center(), &[1, 2]);
    // and in Ω_6(q) iff q^3 = 1 mod 4
    assert_eq!(GroupCtx::omega(6, &fq(3, 1)).unwrap().center(), &[1]);
    assert_eq!(GroupCtx::omega(6, &fq(5, 1)).unwrap().center(), &[1, 4]);
}

#[test]
fn canonical_forms() {
    let f = fq(3, 1);
    let psp = GroupCtx::sp(4, &f).unwrap().projective();
    let id = Mat::identity(&f, 4);
    assert_eq!(psp.canonicalize(&id.neg()), psp.canonicalize(&id));
    let mut rng = StdRng::seed_from_u64(5);
    let f4 = fq(2, 2);
    let psl = GroupCtx::sl(3, &f4).unwrap().projective();
    let sl = psl.linear();
    for _ in 0..1000 {
        let x = random_element(&sl, &mut rng, 30);
        let c = psl.canonicalize(&x);
        assert_eq!(psl.canonicalize(&c), c);
        for &z in psl.center() {
            assert_eq!(psl.canonicalize(&x.scale(z)), c);
        }
        let y = random_element(&sl, &mut rng, 30);
        let same_coset = psl.center().iter().any(|&z| y.scale(z) == x);
        assert_eq!(same_coset, psl.canonicalize(&y) == c);
    }
}

#[test]
fn class_examples() {
    let f = fq(3, 1);
    let sl = GroupCtx::sl(2, &f).unwrap();
    let u = Mat::from_ints(&f, &[&[1, 1], &[0, 1]]);
    let c = conj_class(&sl, &u, 100).unwrap();
    assert_eq!(c.len(), 4);
    for i in 0..c.len() {
        assert_eq!(sl.conj(&c.conjugator(i), &u), *c.get(i));
    }
    assert_eq!(conj_class(&sl, &Mat::identity(&f, 2).neg(), 100).unwrap().len(), 1);
    let err = conj_class(&sl, &u, 3).unwrap_err();
    assert!(matches!(err, Error::BoundExceeded { bound: 3, .. }));
    assert!(conj_class(&sl, &Mat::diag(&f, &[2, 1]), 10).is_err());
}

/// An element of Sp_4(3) of order 5; its centralizer is the Coxeter torus.
fn coxeter_sp4_3(group: &[Mat], ctx: &GroupCtx) -> Mat {
    group
        .iter()
        .find(|x| ctx.element_order(x).unwrap() == 5)
        .cloned()
        .unwrap()
}

#[test]
fn coxeter_torus_meets_the_class_in_four_points() {
    let f = fq(3, 1);
    let sp = GroupCtx::sp(4, &f).unwrap();
    let group = enumerate_group(&sp, GROUP_BOUND).unwrap();
    let x = coxeter_sp4_3(&group, &sp);
    assert!(poly_is_irreducible(&charpoly(&x), &f));
    let torus = centralizer(&sp, &x, &group);
    assert_eq!(torus.len(), 10);
    let class = conj_class(&sp, &x, CLASS_BOUND).unwrap();
    let meet: Vec<&Mat> = torus.iter().filter(|t| class.contains(t)).collect();
    assert_eq!(meet.len(), 4);
    let powers: Vec<Mat> = [1, 3, -1, -3].iter().map(|&e| x.pow(e).unwrap()).collect();
    assert!(meet.iter().all(|t| powers.contains(t)));
    assert!(!minus_in_class(&class, &x));
    assert!(power_in_class(&class, &x, 3, false).unwrap());
    assert_eq!(class.len() * torus.len(), group.len());
}

#[test]
fn centralizer_examples() {
    let f = fq(3, 1);
    let sl = GroupCtx::sl(2, &f).unwrap();
    let group = enumerate_group(&sl, GROUP_BOUND).unwrap();
    assert_eq!(centralizer(&sl, &sl.identity(), &group).len(), 24);
    let c = companion(&Poly::new(vec![1, 0, 1]), &f).unwrap();
    // cyclic of order q + 1
    assert_eq!(centralizer(&sl, &c, &group).len(), 4);
    for x in &group {
        assert!(orbit_stabilizer_holds(&sl, x, &group).unwrap());
    }
}

#[test]
fn orbit_stabilizer_on_all_classes() {
    let ctxs = [
        GroupCtx::sl(2, &fq(3, 1)).unwrap(),
        GroupCtx::sl(2, &fq(5, 1)).unwrap(),
        GroupCtx::sl(2, &fq(5, 1)).unwrap().projective(),
        GroupCtx::sp(4, &fq(2, 1)).unwrap(),
        GroupCtx::sl(3, &fq(2, 1)).unwrap(),
        GroupCtx::omega(5, &fq(3, 1)).unwrap(),
    ];
    for ctx in &ctxs {
        let group = enumerate_group(ctx, GROUP_BOUND).unwrap();
        let classes = conjugacy_classes(ctx, &group).unwrap();
        assert_eq!(classes.iter().map(ConjClass::len).sum::<usize>(), group.len());
        for c in &classes {
            let cent = centralizer(ctx, c.representative(), &group);
            assert_eq!(c.len() * cent.len(), group.len(), "{}", ctx.name());
        }
    }
}

#[test]
fn projective_classes_are_images() {
    for ctx in [
        GroupCtx::sl(2, &fq(3, 1)).unwrap(),
        GroupCtx::sl(2, &fq(5, 1)).unwrap(),
        GroupCtx::sp(4, &fq(3, 1)).unwrap(),
    ] {
        let pctx = ctx.projective();
        let group = enumerate_group(&ctx, GROUP_BOUND).unwrap();
        let mut seen: std::collections::HashSet<Vec<u8>> = Default::default();
        for c in conjugacy_classes(&ctx, &group).unwrap() {
            if !seen.insert(c.representative().pack()) {
                continue;
            }
            let pc = conj_class(&pctx, c.representative(), CLASS_BOUND).unwrap();
            let mut image: Vec<Mat> = c.elements().iter().map(|x| pctx.canonicalize(x)).collect();
            image.sort();
            image.dedup();
            assert_eq!(image, pc.elements(), "{}", pctx.name());
        }
    }
}

#[test]
fn semisimple_classes_of_sp4_3_are_determined_by_charpoly() {
    let sp = GroupCtx::sp(4, &fq(3, 1)).unwrap();
    let group = enumerate_group(&sp, GROUP_BOUND).unwrap();
    let classes = conjugacy_classes(&sp, &group).unwrap();
    let mut polys = std::collections::HashSet::new();
    for c in classes.iter().filter(|c| is_semisimple(c.representative())) {
        assert!(polys.insert(charpoly(c.representative())), "two semisimple classes share a charpoly");
    }
    assert_eq!(classes.len(), 34);
}

#[test]
fn embed_j_examples() {
    let f = fq(5, 1);
    assert!(embed_j(&Mat::identity(&f, 2), Form::Symplectic).unwrap().is_identity());
    assert!(embed_j(&Mat::identity(&f, 2), Form::OrthogonalOdd).unwrap().is_identity());
    let d = Mat::diag(&f, &[1, 4]);
    assert_eq!(embed_j(&d, Form::Symplectic).unwrap(), Mat::diag(&f, &[1, 4, 4, 1]));
    let mut rng = StdRng::seed_from_u64(3);
    for (p, m) in [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2)] {
        let f = fq(p, m);
        let gl = GroupCtx::gl(3, &f).unwrap();
        for _ in 0..1000 {
            let a = random_element(&gl, &mut rng, 12);
            let b = random_element(&gl, &mut rng, 12);
            for form in [Form::Symplectic, Form::OrthogonalEven, Form::OrthogonalOdd] {
                if form == Form::OrthogonalOdd && p == 2 {
                    continue;
                }
                let ja = embed_j(&a, form).unwrap();
                assert!(form_membership(&ja, form));
                assert_eq!(ja.mul(&embed_j(&b, form).unwrap()), embed_j(&a.mul(&b), form).unwrap());
            }
        }
    }
}

#[test]
fn restriction_of_scalars() {
    let f2 = fq(2, 1);
    let f4 = fq(2, 2);
    assert!(Mat::identity(&f4, 2).restrict_scalars().is_identity());
    let gl = GroupCtx::gl(2, &f4).unwrap();
    let mut rng = StdRng::seed_from_u64(9);
    for _ in 0..200 {
        let a = random_element(&gl, &mut rng, 10);
        let b = random_element(&gl, &mut rng, 10);
        assert_eq!(a.mul(&b).restrict_scalars(), a.restrict_scalars().mul(&b.restrict_scalars()));
        // det over the base is the norm of the det over the extension
        let d = a.det();
        let norm = f4.mul(d, f4.frobenius(d, 2, 1));
        assert_eq!(f4.embed_base(a.restrict_scalars().det()), norm);
    }
    let sl2_4 = GroupCtx::sl(2, &f4).unwrap();
    let sl4_2 = GroupCtx::sl(4, &f2).unwrap();
    let images: Vec<Mat> = sl2_4.generators().iter().map(Mat::restrict_scalars).collect();
    assert!(images.iter().all(|x| sl4_2.contains(x)));
    assert_eq!(subgroup_closure(&sl4_2, &images, GROUP_BOUND).unwrap().len(), 60);
}

#[test]
fn restricted_coxeter_torus_is_cyclic() {
    for (p, c, d) in [(2u64, 2u32, 2u32), (3, 2, 2), (2, 3, 2), (2, 2, 3)] {
        let base = fq(p, 1);
        let ext = base.extension(d).unwrap();
        let top = ext.extension(c).unwrap();
        // minimal polynomial over GF(q^d) of a generator of GF(q^{cd})^*
        let g = top.primitive_element();
        let qd = ext.order() as u64;
        let mut poly = Poly::one(&top);
        let mut r = g;
        for _ in 0..c {
            poly = poly.mul(&Poly::linear(&top, r), &top);
            r = top.pow(r, qd);
        }
        assert_eq!(r, g);
        let mp = Poly::new(poly.coeffs().iter().map(|&a| top.restrict_to_base(a).unwrap()).collect());
        let comp = companion(&mp, &ext).unwrap();
        assert_eq!(minpoly(&comp).deg(), c as usize);
        let gl = GroupCtx::gl((c * d) as usize, &base).unwrap();
        let x = comp.restrict_scalars();
        let want = p.pow(c * d) - 1;
        assert_eq!(gl.element_order(&x).unwrap(), want);
        assert_eq!(subgroup_closure(&gl, &[x], GROUP_BOUND).unwrap().len() as u64, want);
    }
}

#[test]
fn twist_examples() {
    let f5 = fq(5, 1);
    let sl = GroupCtx::sl(2, &f5).unwrap();
    let t = twist_data(&sl, &Mat::diag(&f5, &[2, 3])).unwrap();
    assert_eq!((t.j, t.lambda), (1, 1));
    let f3 = fq(3, 1);
    let sl3 = GroupCtx::sl(2, &f3).unwrap();
    let c = companion(&Poly::new(vec![1, 0, 1]), &f3).unwrap();
    assert_eq!(c.pow(3).unwrap(), c.neg());
    let t = twist_data(&sl3, &c).unwrap();
    assert_eq!((t.j, t.lambda), (1, 2));
    assert!(twist_data(&sl3, &Mat::from_ints(&f3, &[&[1, 1], &[0, 1]])).is_err());
}

#[test]
fn twist_relations_on_irreducible_elements() {
    for (n, p, m) in [(3usize, 2u64, 1u32), (3, 2, 2), (3, 7, 1), (2, 5, 1), (2, 3, 1), (4, 3, 1)] {
        let f = fq(p, m);
        let sl = GroupCtx::sl(n, &f).unwrap();
        let group = enumerate_group(&sl, 2_000_000).unwrap_or_default();
        if group.is_empty() {
            continue;
        }
        let mut seen = 0;
        for c in conjugacy_classes(&sl, &group).unwrap() {
            let x = c.representative();
            if !is_semisimple(x) || !poly_is_irreducible(&charpoly(x), &f) {
                continue;
            }
            let t = twist_data(&sl, x).unwrap();
            if n >= 3 {
                assert_ne!(t.j, 1);
            }
            seen += 1;
        }
        assert!(seen > 0);
    }
}

#[test]
fn powers_in_classes() {
    let f5 = fq(5, 1);
    let sl = GroupCtx::sl(2, &f5).unwrap();
    let group = enumerate_group(&sl, GROUP_BOUND).unwrap();
    for c in conjugacy_classes(&sl, &group).unwrap() {
        let x = c.representative();
        if is_semisimple(x) {
            assert!(power_in_class(&c, x, 5, false).unwrap());
        }
        if sl.is_central(x) {
            assert!(power_in_class(&c, x, 1, false).unwrap());
        }
    }
}

#[test]
fn permutation_models() {
    assert_eq!(perm::symmetric(5).len(), 120);
    assert_eq!(perm::alternating(6).len(), 360);
    let a6 = perm::alternating(6);
    let x = Perm::from_cycles(6, &[&[1, 2], &[3, 4]]);
    assert_eq!(perm::class_in(&a6, &x).len(), 45);
    let t = Perm::from_cycles(6, &[&[5, 6]]);
    assert_eq!(perm::centralizer_in(&a6, &t).len(), 24);
    assert_eq!(Perm::from_cycles(5, &[&[1, 2, 3, 4, 5]]).order(), 5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugation_preserves_membership(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        for ctx in [
            GroupCtx::sp(4, &fq(3, 1)).unwrap(),
            GroupCtx::omega(5, &fq(3, 1)).unwrap(),
            GroupCtx::so(6, &fq(2, 1)).unwrap(),
        ] {
            let x = random_element(&ctx, &mut rng, 20);
            let g = random_element(&ctx, &mut rng, 20);
            prop_assert!(ctx.contains(&x));
            prop_assert!(ctx.contains(&ctx.conj(&g, &x)));
        }
    }
}
