//! Fixed desk-scale catalogs of commensurations used by tests, the
//! acceptance suite and `selftest`.

use rand::Rng;

use super::{Commensuration, FreeComm};
use crate::freewords::{Alphabet, Word};
use crate::matrix::{rational, RationalMatrix};
use crate::stallings::SubgroupGraph;

fn w(s: &str) -> Word {
    Alphabet::new(2).expect("rank 2").parse_word(s).expect("catalog word")
}

fn sub(gens: &[&str]) -> SubgroupGraph {
    let words: Vec<Word> = gens.iter().map(|s| w(s)).collect();
    SubgroupGraph::from_generators(Alphabet::new(2).expect("rank 2"), &words)
        .expect("catalog subgroup")
}

fn endo(a: &str, b: &str) -> FreeComm {
    FreeComm::from_endomorphism(SubgroupGraph::whole(2), &[w(a), w(b)]).expect("automorphism")
}

/// Kernel of the a-exponent mod 2.
pub fn kernel_a2() -> SubgroupGraph {
    sub(&["aa", "b", "abA"])
}

/// Kernel of the b-exponent mod 2.
pub fn kernel_b2() -> SubgroupGraph {
    sub(&["bb", "a", "baB"])
}

/// Kernel of the a-exponent mod 3.
pub fn kernel_a3() -> SubgroupGraph {
    sub(&["aaa", "b", "abA", "aabAA"])
}

/// Named F_2 commensurations; every domain has index at most 4.
pub fn free_catalog() -> Vec<(&'static str, Commensuration)> {
    let ka = kernel_a2();
    let kb = kernel_b2();
    let ka3 = kernel_a3();
    let k4 = ka.intersect(&kb).expect("intersection");

    let rotated = {
        let mut b = ka.basis().to_vec();
        b.rotate_left(1);
        b
    };
    let rotated3 = {
        let mut b = ka3.basis().to_vec();
        b.swap(0, 1);
        b
    };
    let items: Vec<(&'static str, FreeComm)> = vec![
        ("identity", FreeComm::identity(2)),
        ("swap", endo("b", "a")),
        ("a->ab", endo("ab", "b")),
        ("a->A", endo("A", "b")),
        ("a->b,b->A", endo("b", "A")),
        ("inner(a)", FreeComm::inner(2, &w("a")).expect("inner")),
        ("inner(b)", FreeComm::inner(2, &w("b")).expect("inner")),
        ("inner(ab)", FreeComm::inner(2, &w("ab")).expect("inner")),
        ("swap|ker_a2", endo("b", "a").restrict(&ka).expect("restriction")),
        ("a->ab|ker2x2", endo("ab", "b").restrict(&k4).expect("restriction")),
        ("inner(a)|ker_a3", FreeComm::inner(2, &w("a")).expect("inner").restrict(&ka3).expect("restriction")),
        ("rotate basis of ker_a2", FreeComm::new(ka.clone(), rotated).expect("basis permutation")),
        ("swap basis of ker_a3", FreeComm::new(ka3, rotated3).expect("basis permutation")),
        ("ker_a2 -> ker_b2", FreeComm::new(ka, kb.basis().to_vec()).expect("basis bijection")),
    ];
    items
        .into_iter()
        .map(|(n, c)| (n, Commensuration::Free(c)))
        .collect()
}

/// Named Z^n commensurations.
pub fn abelian_catalog() -> Vec<(&'static str, Commensuration)> {
    let m = |rows: &[&str]| {
        RationalMatrix::parse_rows(rows, rows.len(), 1).expect("catalog matrix")
    };
    vec![
        ("x2", m(&["2"])),
        ("x1/2", m(&["1/2"])),
        ("x-3/2", m(&["-3/2"])),
        ("swap", m(&["0 1", "1 0"])),
        ("shear/2", m(&["1 1/2", "0 1"])),
        ("diag(2,1/3)", m(&["2 0", "0 1/3"])),
        ("rot3", m(&["0 0 1", "1 0 0", "0 1 0"])),
    ]
    .into_iter()
    .map(|(n, mat)| (n, Commensuration::from_matrix(mat).expect("nonsingular")))
    .collect()
}

/// A random nonsingular `n × n` matrix with entries `p/q`, `p ∈ -2..=2`, `q ∈ {1,2,3}`.
pub fn random_matrix<R: Rng>(rng: &mut R, n: usize) -> RationalMatrix {
    loop {
        let rows = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| rational(rng.gen_range(-2..=2), rng.gen_range(1..=3)))
                    .collect()
            })
            .collect();
        let m = RationalMatrix::new(rows).expect("square");
        if !num_traits::Zero::is_zero(&m.det()) {
            return m;
        }
    }
}
