use super::*;
use proptest::prelude::*;

fn f(k: usize) -> Alphabet {
    Alphabet::new(k).unwrap()
}

fn words(k: usize, ws: &[&str]) -> Vec<Word> {
    ws.iter().map(|s| f(k).parse_word(s).unwrap()).collect()
}

fn sub(k: usize, ws: &[&str]) -> SubgroupGraph {
    SubgroupGraph::from_generators(f(k), &words(k, ws)).unwrap()
}

fn exponent_sum(w: &Word, gen: usize) -> i64 {
    w.letters()
        .iter()
        .filter(|l| l.index() == gen)
        .map(|l| if l.is_inverse() { -1 } else { 1 })
        .sum()
}

#[test]
fn whole_group() {
    let g = sub(2, &["a", "b"]);
    assert_eq!(g, SubgroupGraph::whole(2));
    assert_eq!(g.index().unwrap(), 1);
}

#[test]
fn index_two_kernel() {
    let g = sub(2, &["aa", "b", "abA"]);
    assert_eq!(g.index().unwrap(), 2);
    assert_eq!(g.permutations().unwrap(), vec![vec![1, 0], vec![0, 1]]);
    assert!(!g.contains(&words(2, &["ab"])[0]));
    assert!(g.contains(&words(2, &["aa"])[0]));
    // coset oracle: a-exponent parity
    for w in f(2).ball(5) {
        assert_eq!(g.contains(&w), exponent_sum(&w, 0) % 2 == 0, "{w}");
    }
}

#[test]
fn rank_one_subgroup_has_infinite_index() {
    let r = SubgroupGraph::from_generators(f(2), &words(2, &["aa"]));
    assert!(matches!(r, Err(Error::InfiniteIndex(_))));
    let g = SubgroupGraph::fold(f(2), &words(2, &["aa"])).unwrap();
    assert!(!g.is_complete());
    assert_eq!(g.vertex_count(), 2);
    assert!(g.contains(&words(2, &["AAAA"])[0]));
    assert!(!g.contains(&words(2, &["b"])[0]));
}

#[test]
fn alphabet_mismatch() {
    let c = f(3).parse_word("c").unwrap();
    assert!(matches!(
        SubgroupGraph::fold(f(2), &[c]),
        Err(Error::AlphabetMismatch(_))
    ));
}

#[test]
fn intersections() {
    let ka = sub(2, &["aa", "b", "abA"]);
    let kb = sub(2, &["bb", "a", "baB"]);
    let both = ka.intersect(&kb).unwrap();
    assert_eq!(both.index().unwrap(), 4);
    for w in f(2).ball(5) {
        let expect = exponent_sum(&w, 0) % 2 == 0 && exponent_sum(&w, 1) % 2 == 0;
        assert_eq!(both.contains(&w), expect);
    }
    assert_eq!(ka.intersect(&ka).unwrap(), ka);
    assert_eq!(SubgroupGraph::whole(2).intersect(&ka).unwrap(), ka);
    assert!(both.is_subgroup_of(&ka).unwrap());
    assert!(!ka.is_subgroup_of(&kb).unwrap());
}

#[test]
fn basis_sizes() {
    assert_eq!(SubgroupGraph::whole(2).basis().len(), 2);
    let ka = sub(2, &["aa", "b", "abA"]);
    assert_eq!(ka.basis().len(), 3);
    let kb = sub(2, &["bb", "a", "baB"]);
    let both = ka.intersect(&kb).unwrap();
    assert_eq!(both.basis().len(), 5);
    assert_eq!(both.basis().len(), both.expected_basis_len().unwrap());
}

#[test]
fn basis_refolds_to_same_graph() {
    for g in enumerate_subgroups(2, 4).unwrap() {
        assert_eq!(g.basis().len(), g.expected_basis_len().unwrap());
        let again = SubgroupGraph::from_generators(f(2), g.basis()).unwrap();
        assert_eq!(again, g);
    }
}

#[test]
fn express_inverts_basis_expansion() {
    let g = sub(2, &["aa", "b", "abA"]).intersect(&sub(2, &["bb", "a", "baB"])).unwrap();
    for w in f(2).ball(6) {
        match g.express(&w) {
            Some(e) => {
                assert!(g.contains(&w));
                assert_eq!(e.substitute(g.basis()), w);
            }
            None => assert!(!g.contains(&w)),
        }
    }
}

#[test]
fn enumeration_counts() {
    let all = enumerate_subgroups(2, 2).unwrap();
    assert_eq!(all.len(), 4);
    let all = enumerate_subgroups(2, 3).unwrap();
    let counts = index_counts(&all);
    assert_eq!(counts.into_iter().collect::<Vec<_>>(), vec![(1, 1), (2, 3), (3, 13)]);
    assert_eq!(enumerate_subgroups(1, 4).unwrap().len(), 4);
}

#[test]
fn enumeration_matches_transitive_tuple_count() {
    // subgroups of index m <-> transitive actions on m points / (m-1)! relabelings
    assert_eq!(count_transitive_tuples(2, 3).unwrap(), 26);
    for k in 1..=2 {
        let counts = index_counts(&enumerate_subgroups(k, 4).unwrap());
        for m in 1..=4usize {
            let fact: u64 = (1..m as u64).product();
            let expect = count_transitive_tuples(k, m).unwrap() / fact;
            assert_eq!(counts[&m] as u64, expect, "k={k} m={m}");
        }
    }
}

#[test]
fn kernels() {
    assert_eq!(profinite_kernel(2, 1).unwrap(), SubgroupGraph::whole(2));
    let k2 = profinite_kernel(2, 2).unwrap();
    // kernel of F_2 -> (Z/2)^2
    assert_eq!(k2.index().unwrap(), 4);
    let index_two: Vec<_> = enumerate_subgroups(2, 2)
        .unwrap()
        .into_iter()
        .filter(|g| g.vertex_count() == 2)
        .collect();
    assert_eq!(index_two.len(), 3);
    for w in f(2).ball(5) {
        assert_eq!(k2.contains(&w), index_two.iter().all(|g| g.contains(&w)));
    }
    let k1 = profinite_kernel(1, 3).unwrap();
    assert_eq!(k1.index().unwrap(), 6);
    assert!(k1.contains(&f(1).parse_word("aaaaaa").unwrap()));
    assert!(!k1.contains(&f(1).parse_word("aaa").unwrap()));
}

#[test]
fn permutation_constructor_errors() {
    assert!(SubgroupGraph::from_permutations(2, &[vec![0, 1], vec![0, 1]]).is_err());
    assert!(SubgroupGraph::from_permutations(1, &[vec![0, 0]]).is_err());
    assert!(SubgroupGraph::from_permutations(2, &[vec![1, 0]]).is_err());
}

#[test]
fn tagged_fold_expresses_in_generators() {
    let gens = words(2, &["aab", "bab", "ABa"]);
    let folded = fold::fold_words(2, &gens);
    assert!(folded.kernel.is_empty());
    for w in f(2).ball(5) {
        if !folded.graph.contains(&w) {
            continue;
        }
        // product of tags along the path is a preimage of w
        let mut v = 0;
        let mut pre = Word::identity();
        for &l in w.letters() {
            pre = pre.mul(folded.tags[l.label()][v].as_ref().unwrap());
            v = folded.graph.target(v, l).unwrap();
        }
        assert_eq!(pre.substitute(&gens), w);
    }
}

#[test]
fn tagged_fold_detects_kernel() {
    // a, b, ab: the third generator is redundant
    let folded = fold::fold_words(2, &words(2, &["a", "b", "ab"]));
    assert!(!folded.kernel.is_empty());
    for k in &folded.kernel {
        assert!(!k.is_identity());
        assert!(k.substitute(&words(2, &["a", "b", "ab"])).is_identity());
    }
}

fn arb_gens() -> impl Strategy<Value = Vec<Word>> {
    prop::collection::vec(
        prop::collection::vec(0usize..4, 1..6)
            .prop_map(|ls| Word::from_letters(ls.into_iter().map(Letter::from_label))),
        1..5,
    )
}

proptest! {
    #[test]
    fn folding_is_order_independent(gens in arb_gens(), rot in 0usize..5) {
        let g1 = SubgroupGraph::fold(f(2), &gens).unwrap();
        let mut perm = gens.clone();
        perm.rotate_left(rot % gens.len());
        perm.reverse();
        let g2 = SubgroupGraph::fold(f(2), &perm).unwrap();
        prop_assert_eq!(&g1, &g2);
        for w in &gens {
            prop_assert!(g1.contains(w));
        }
    }

    #[test]
    fn tags_always_give_preimages(gens in arb_gens()) {
        let folded = fold::fold_words(2, &gens);
        for k in &folded.kernel {
            prop_assert!(k.substitute(&gens).is_identity());
        }
        for b in folded.graph.basis() {
            let mut v = 0;
            let mut pre = Word::identity();
            for &l in b.letters() {
                pre = pre.mul(folded.tags[l.label()][v].as_ref().unwrap());
                v = folded.graph.target(v, l).unwrap();
            }
            prop_assert_eq!(&pre.substitute(&gens), b);
        }
    }

    #[test]
    fn intersection_index_bound(i in 0usize..17, j in 0usize..17) {
        let all = enumerate_subgroups(2, 3).unwrap();
        let (a, b) = (&all[i], &all[j]);
        let c = a.intersect(b).unwrap();
        prop_assert!(c.index().unwrap() <= a.index().unwrap() * b.index().unwrap());
        prop_assert!(c.is_subgroup_of(a).unwrap() && c.is_subgroup_of(b).unwrap());
    }
}
