use super::*;
use crate::commensurations::catalog;
use crate::freewords::IntVector;
use crate::group::Element;
use crate::matrix::RationalMatrix;
use num_bigint::BigInt;

fn sys(tag: GroupTag, n: usize) -> Arc<TruncatedSystem> {
    Arc::new(TruncatedSystem::build(tag, n).unwrap())
}

fn times(p: &str) -> Commensuration {
    Commensuration::from_matrix(RationalMatrix::parse_rows(&[p], 1, 1).unwrap()).unwrap()
}

#[test]
fn build_examples() {
    let z = sys(GroupTag::Abelian(1), 3);
    assert_eq!(z.objects().len(), 3);
    assert_eq!(z.proper_bonds(), vec![(0, 1), (0, 2)]);
    assert_eq!(z.flagged(), &[(1, 2)]);
    let f = sys(GroupTag::Free(2), 2);
    assert_eq!(f.objects().len(), 4);
    assert_eq!(f.proper_bonds(), vec![(0, 1), (0, 2), (0, 3)]);
    let z2 = sys(GroupTag::Abelian(2), 1);
    assert_eq!(z2.bonds(), &[(0, 0)]);
}

#[test]
fn zeta_of_doubling() {
    let z = sys(GroupTag::Abelian(1), 2);
    let m = zeta(&times("2"), z.clone()).unwrap();
    // at Z: source Z, map x2; at 2Z: source Z as well
    for c in m.components() {
        assert!(c.source.is_whole());
        assert_eq!(c.source_object, Some(0));
        assert_eq!(
            c.map.apply(&Element::Vector(IntVector::from_i64s(&[1]))).unwrap(),
            Element::Vector(IntVector::from_i64s(&[2]))
        );
    }
    assert!(reconstruct(&m).unwrap().equivalent(&times("2")).unwrap());
    let half = zeta(&times("1/2"), sys(GroupTag::Abelian(1), 3)).unwrap();
    // 1/2 at 3Z: source is 6Z, beyond depth 3
    assert_eq!(half.materialized().len(), 2);
    let six = Subgroup::Lattice(crate::lattices::Lattice::scalar(1, &BigInt::from(6)));
    assert!(half.materialized().contains(&&six));
}

#[test]
fn zeta_identity_is_identity() {
    for (tag, n) in [(GroupTag::Abelian(1), 4), (GroupTag::Free(2), 3)] {
        let s = sys(tag, n);
        let z = zeta(&Commensuration::identity(tag), s.clone()).unwrap();
        assert_eq!(z, SystemMorphism::identity(s).unwrap());
    }
}

#[test]
fn zeta_round_trip_and_functoriality_free() {
    let s = sys(GroupTag::Free(2), 2);
    let cat = catalog::free_catalog();
    let zs: Vec<_> = cat.iter().map(|(_, c)| zeta(c, s.clone()).unwrap()).collect();
    for ((name, c), z) in cat.iter().zip(&zs) {
        assert!(reconstruct(z).unwrap().equivalent(c).unwrap(), "{name}");
    }
    for (i, (_, a)) in cat.iter().enumerate().step_by(3) {
        for (j, (_, b)) in cat.iter().enumerate().step_by(2) {
            let lhs = zeta(&a.compose(b).unwrap(), s.clone()).unwrap();
            let rhs = zs[i].compose(&zs[j]).unwrap();
            assert!(lhs.equivalent(&rhs).unwrap(), "{i} {j}");
            assert_eq!(zs[i].equivalent(&zs[j]).unwrap(), a.equivalent(b).unwrap());
        }
    }
}

#[test]
fn inner_components_land_in_conjugates() {
    let s = sys(GroupTag::Free(2), 2);
    let a = crate::freewords::Alphabet::new(2).unwrap().parse_word("a").unwrap();
    let phi = Commensuration::inner(GroupTag::Free(2), &Element::Word(a)).unwrap();
    let m = zeta(&phi, s.clone()).unwrap();
    for c in m.components() {
        // oracle: fold the conjugated basis of the source
        let img = phi.image(&c.source).unwrap();
        assert_eq!(c.map.codomain(), img);
        assert!(img.is_subgroup_of(&s.objects()[c.target]).unwrap());
    }
}

#[test]
fn cofinal_examples() {
    let z6 = sys(GroupTag::Abelian(1), 6);
    let even = |g: &Subgroup| g.index().unwrap() % 2 == 0;
    let r = cofinal_restrict(z6.clone(), even).unwrap();
    assert_eq!(r.subsystem.objects().len(), 3);
    let there_and_back = r.restriction.compose(&r.inverse).unwrap();
    assert!(there_and_back
        .equivalent(&SystemMorphism::identity(r.subsystem.clone()).unwrap())
        .unwrap());
    let back_and_there = r.inverse.compose(&r.restriction).unwrap();
    assert!(back_and_there.equivalent(&SystemMorphism::identity(z6.clone()).unwrap()).unwrap());

    let all = cofinal_restrict(z6.clone(), |_| true).unwrap();
    assert_eq!(*all.subsystem, *z6);
    assert_eq!(all.restriction, SystemMorphism::identity(z6).unwrap());

    let z4 = sys(GroupTag::Abelian(1), 4);
    let err = cofinal_restrict(z4, |g| g.index().unwrap() == 3).unwrap_err();
    match err {
        Error::NotCofinal(msg) => assert!(msg.contains("object 1"), "{msg}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn dumps_round_trip() {
    let s = sys(GroupTag::Free(2), 2);
    assert_eq!(parse_system(&format_system(&s)).unwrap(), *s);
    for (_, c) in catalog::free_catalog().iter().take(5) {
        let m = zeta(c, s.clone()).unwrap();
        assert_eq!(parse_morphism(&format_morphism(&m)).unwrap(), m);
    }
    let z = sys(GroupTag::Abelian(2), 2);
    let m = zeta(&catalog::abelian_catalog()[4].1, z).unwrap();
    assert_eq!(parse_morphism(&format_morphism(&m)).unwrap(), m);
    let r = cofinal_restrict(sys(GroupTag::Abelian(1), 6), |g| g.index().unwrap() % 2 == 0).unwrap();
    assert_eq!(parse_morphism(&format_morphism(&r.inverse)).unwrap(), r.inverse);
}
