use num_bigint::BigInt;
use num_rational::BigRational;

use super::*;
use crate::commensurations::catalog::{abelian_catalog, free_catalog, kernel_a2};
use crate::freewords::{Alphabet, IntVector, Word};
use crate::group::Subgroup;
use crate::matrix::{rational, RationalMatrix};

fn f2() -> GroupTag {
    GroupTag::Free(2)
}

fn w(s: &str) -> Word {
    Alphabet::new(2).unwrap().parse_word(s).unwrap()
}

fn e(s: &str) -> Element {
    Element::Word(w(s))
}

fn int(x: i64) -> Element {
    Element::Vector(IntVector::from_i64s(&[x]))
}

fn named(name: &str) -> Commensuration {
    free_catalog().into_iter().find(|(n, _)| *n == name).unwrap().1
}

fn times2() -> Commensuration {
    Commensuration::from_matrix(RationalMatrix::parse_rows(&["2"], 1, 1).unwrap()).unwrap()
}

fn transvection_on_ker_a2() -> Commensuration {
    named("a->ab").restrict(&Subgroup::Graph(kernel_a2())).unwrap()
}

#[test]
fn evaluate_examples() {
    let id = BaseleafMap::new(Commensuration::identity(f2()));
    for g in f2().ball(3) {
        assert_eq!(id.evaluate(&g).unwrap(), g);
    }
    assert_eq!(BaseleafMap::new(times2()).evaluate(&int(5)).unwrap(), int(10));

    let phi = named("rotate basis of ker_a2");
    let h = phi.domain();
    let m = BaseleafMap::new(phi.clone());
    // nearest points by exhaustive search in a ball around the input
    for g in f2().ball(2) {
        let mut best: Option<(u64, Element)> = None;
        for y in f2().ball(3) {
            let cand = g.mul(&y);
            if h.contains(&cand).unwrap() {
                let key = (y.length(), cand);
                if best.as_ref().map_or(true, |b| key < *b) {
                    best = Some(key);
                }
            }
        }
        let nearest = best.unwrap().1;
        assert_eq!(m.evaluate(&g).unwrap(), phi.apply(&nearest).unwrap(), "{g}");
        if h.contains(&g).unwrap() {
            assert_eq!(m.evaluate(&g).unwrap(), phi.apply(&g).unwrap());
        }
    }
    // golden values; ab is equidistant from aba and abA, and aba wins the order
    assert_eq!(m.evaluate(&e("a")).unwrap().to_string(), "1");
    assert_eq!(m.evaluate(&e("ab")).unwrap().to_string(), "babA");
    assert_eq!(phi.apply(&e("aba")).unwrap().to_string(), "babA");
}

fn certified_by_pairs(m: &BaseleafMap, radius: usize, est: &QiEstimate) -> bool {
    let ball = f2().ball(radius);
    let images: Vec<Element> = ball.iter().map(|g| m.evaluate(g).unwrap()).collect();
    for i in 0..ball.len() {
        for j in 0..ball.len() {
            let d = BigRational::from(BigInt::from(ball[i].distance(&ball[j])));
            let di = BigRational::from(BigInt::from(images[i].distance(&images[j])));
            if di > &est.l * &d + &est.c || &d / &est.l - &est.c > di {
                return false;
            }
        }
    }
    true
}

#[test]
fn qi_constants_for_linear_maps() {
    let id = BaseleafMap::new(Commensuration::identity(f2()));
    for r in 0..=5 {
        let q = qi_estimate(&id, r).unwrap();
        assert_eq!((q.l.clone(), q.c.clone()), (rational(1, 1), rational(0, 1)));
    }
    let x2 = BaseleafMap::new(times2());
    for r in 1..=20 {
        let q = qi_estimate(&x2, r).unwrap();
        assert_eq!((q.l, q.c), (rational(2, 1), rational(0, 1)));
    }
    let half = abelian_catalog().into_iter().find(|(n, _)| *n == "x1/2").unwrap().1;
    let q = qi_estimate(&BaseleafMap::new(half), 20).unwrap();
    // x ↦ (nearest even number, ties downward) / 2, checked over [-20, 20]
    let img = |x: i64| (x - x.rem_euclid(2)) / 2;
    let (mut best, mut c) = ((1i64, 1i64), BigRational::from(BigInt::from(0)));
    for x in -20i64..=20 {
        for y in -20i64..=20 {
            let (d, di) = ((x - y).abs(), (img(x) - img(y)).abs());
            if d > 0 && di > 0 && d * best.1 > best.0 * di {
                best = (d, di);
            }
        }
    }
    let l = rational(best.0, best.1);
    for x in -20i64..=20 {
        for y in -20i64..=20 {
            let (d, di) = (rational((x - y).abs(), 1), rational((img(x) - img(y)).abs(), 1));
            c = c.max(&di - &l * &d).max(&d / &l - &di);
        }
    }
    assert_eq!((q.l, q.c), (l, c));
}

#[test]
fn qi_constants_on_index_two_domain_are_certified() {
    let m = BaseleafMap::new(transvection_on_ker_a2());
    let est = qi_estimate(&m, 6).unwrap();
    assert!(certified_by_pairs(&m, 6, &est), "{est}");
    // tightness: shaving C breaks the certificate
    assert!(est.c > rational(0, 1));
    let mut loose = est.clone();
    loose.c -= rational(1, 1000);
    assert!(!certified_by_pairs(&m, 6, &loose));
    let mut prev = rational(1, 1);
    for r in 1..=6 {
        let q = qi_estimate(&m, r).unwrap();
        assert!(q.l >= prev);
        prev = q.l;
    }
    assert!(matches!(qi_estimate(&m, 11), Err(Error::ResourceCap(_))));
}

#[test]
fn composition_law_on_catalog_pairs() {
    let cat = free_catalog();
    for (n1, phi) in cat.iter().step_by(3) {
        for (n2, psi) in cat.iter().step_by(4) {
            let check = composition_check(phi, psi, 3).unwrap();
            assert!(check.holds(), "{n1} ∘ {n2}: {} > {}", check.composite_c, check.bound);
        }
    }
}

#[test]
fn bounded_distance_examples() {
    let swap = BaseleafMap::new(named("swap"));
    assert_eq!(bounded_distance(&swap, &swap, 5).unwrap().bound(), 0);

    let restricted = BaseleafMap::new(named("swap|ker_a2"));
    let prof = bounded_distance(&swap, &restricted, 8).unwrap();
    assert!(prof.stable_between(6), "{prof}");

    let id = BaseleafMap::new(Commensuration::identity(f2()));
    let prof = bounded_distance(&swap, &id, 8).unwrap();
    assert!(prof.grows(2), "{prof}");
    // d(b^n, a^n) = 2n
    for r in 0..=8 {
        assert!(prof.profile[r] >= 2 * r as u64);
    }
    assert!(prof.to_string().starts_with("growing"));
}

#[test]
fn factorization_examples() {
    let id = factorization_check(&Commensuration::identity(f2()), 2, 5).unwrap();
    assert!(id.passed(), "{id}");
    assert_eq!(id.checked, f2().ball(5).len());

    let t = factorization_check(&transvection_on_ker_a2(), 2, 5).unwrap();
    assert!(t.passed(), "{t}");
    let expected = f2().ball(5).iter().filter(|g| {
        let a: i64 = g.as_word().unwrap().letters().iter().filter(|l| l.index() == 0).map(|l| if l.is_inverse() { -1 } else { 1 }).sum();
        a % 2 == 0
    }).count();
    assert_eq!(t.checked, expected);

    let z = factorization_check(&times2(), 4, 12).unwrap();
    assert!(z.passed(), "{z}");
    assert_eq!(z.checked, 25);

    for (name, phi) in free_catalog() {
        let r = factorization_check(&phi, 2, 4).unwrap();
        assert!(r.passed(), "{name}: {r}");
    }
}

#[test]
fn fixed_point_examples() {
    let p = fixed_point(&w("ab"), Sign::Attracting).unwrap();
    assert_eq!(p.to_string(), "u=1 c=ab");
    let p = fixed_point(&w("Aba"), Sign::Attracting).unwrap();
    assert_eq!(p.to_string(), "u=A c=b");
    let p = fixed_point(&w("a"), Sign::Repelling).unwrap();
    assert_eq!(p.to_string(), "u=1 c=A");
    assert!(matches!(fixed_point(&Word::identity(), Sign::Attracting), Err(Error::Identity(_))));
    // powers and conjugates of the period normalize
    assert_eq!(fixed_point(&w("abab"), Sign::Attracting).unwrap(), fixed_point(&w("ab"), Sign::Attracting).unwrap());
    assert_eq!(BoundaryPoint::new(w("ab"), w("ab")).unwrap().to_string(), "u=1 c=ab");
    assert_eq!(BoundaryPoint::new(w("b"), w("ab")).unwrap().to_string(), "u=1 c=ba");
    assert!(BoundaryPoint::new(w("A"), w("ab")).is_err());
    let parsed = BoundaryPoint::parse("u=A c=b", Alphabet::new(2).unwrap()).unwrap();
    assert_eq!(parsed, fixed_point(&w("Aba"), Sign::Attracting).unwrap());
}

#[test]
fn fixed_points_match_iteration() {
    let alpha = Alphabet::new(2).unwrap();
    for g in alpha.ball(4).into_iter().filter(|g| !g.is_identity()) {
        let plus = fixed_point(&g, Sign::Attracting).unwrap();
        let minus = fixed_point(&g, Sign::Repelling).unwrap();
        let prefix = |x: &Word| Word::from_letters(x.letters()[..20].iter().copied());
        assert_eq!(prefix(&g.pow(30)), plus.expansion(20), "{g}");
        assert_eq!(prefix(&g.pow(-30)), minus.expansion(20), "{g}");
        for x in alpha.ball(3) {
            assert_eq!(prefix(&g.pow(30).mul(&x)), plus.expansion(20), "{g} {x}");
        }
    }
}

#[test]
fn boundary_action_examples() {
    let b_plus = fixed_point(&w("b"), Sign::Attracting).unwrap();
    let id = Commensuration::identity(f2());
    assert_eq!(boundary_action(&id, &b_plus).unwrap(), b_plus);
    let inner_a = Commensuration::inner(f2(), &e("a")).unwrap();
    let moved = boundary_action(&inner_a, &b_plus).unwrap();
    assert_eq!(moved.to_string(), "u=a c=b");
    let iterate = w("abA").pow(30);
    assert_eq!(Word::from_letters(iterate.letters()[..20].iter().copied()), moved.expansion(20));
    let bare = BoundaryPoint::new(Word::identity(), w("b")).unwrap();
    assert!(matches!(boundary_action(&id, &bare), Err(Error::Precondition(_))));
}

#[test]
fn boundary_action_is_equivariant_and_separates() {
    let cat = free_catalog();
    let alpha = Alphabet::new(2).unwrap();
    let points: Vec<BoundaryPoint> = alpha
        .ball(2)
        .into_iter()
        .filter(|g| !g.is_identity())
        .map(|g| fixed_point(&g, Sign::Attracting).unwrap())
        .collect();
    for (_, phi) in &cat {
        for (_, psi) in &cat {
            let comp = phi.compose(psi).unwrap();
            for p in &points {
                let lhs = boundary_action(&comp, p).unwrap();
                let rhs = boundary_action(phi, &boundary_action(psi, p).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
    let probes: Vec<BoundaryPoint> = alpha
        .ball(4)
        .into_iter()
        .filter(|g| !g.is_identity())
        .map(|g| fixed_point(&g, Sign::Attracting).unwrap())
        .collect();
    for i in 0..cat.len() {
        for j in i + 1..cat.len() {
            let same = cat[i].1.equivalent(&cat[j].1).unwrap();
            let separated = probes.iter().any(|p| {
                boundary_action(&cat[i].1, p).unwrap() != boundary_action(&cat[j].1, p).unwrap()
            });
            assert_eq!(separated, !same, "{} vs {}", cat[i].0, cat[j].0);
        }
    }
}
