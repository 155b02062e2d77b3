//! The two ambient group families, with elements and finite-index subgroups
//! behind one interface.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::freewords::{Alphabet, IntVector, Word};
use crate::lattices::{self, Lattice};
use crate::stallings::{self, SubgroupGraph};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum GroupTag {
    /// Z^n
    Abelian(usize),
    /// F_k
    Free(usize),
}

impl GroupTag {
    pub fn parse(letter: &str, n: &str) -> Result<GroupTag> {
        let n: usize = n
            .parse()
            .map_err(|_| Error::Precondition(format!("bad rank {n:?}")))?;
        match letter {
            "Z" if n >= 1 => Ok(GroupTag::Abelian(n)),
            "F" => {
                Alphabet::new(n)?;
                Ok(GroupTag::Free(n))
            }
            _ => Err(Error::Precondition(format!(
                "unknown group {letter} {n}: expected Z <n> or F <k>"
            ))),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            GroupTag::Abelian(n) | GroupTag::Free(n) => *n,
        }
    }

    pub fn check_same(&self, other: &GroupTag) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GroupMismatch(format!("{self} vs {other}")))
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            GroupTag::Abelian(n) => Element::Vector(IntVector::zero(*n)),
            GroupTag::Free(_) => Element::Word(Word::identity()),
        }
    }

    pub fn parse_element(&self, text: &str) -> Result<Element> {
        match self {
            GroupTag::Abelian(n) => Ok(Element::Vector(IntVector::parse(text, *n)?)),
            GroupTag::Free(k) => Ok(Element::Word(Alphabet::new(*k)?.parse_word(text)?)),
        }
    }

    /// All elements of word length at most `radius` (l1 norm for Z^n), sorted.
    pub fn ball(&self, radius: usize) -> Vec<Element> {
        match self {
            GroupTag::Free(k) => Alphabet::new(*k)
                .expect("valid rank")
                .ball(radius)
                .into_iter()
                .map(Element::Word)
                .collect(),
            GroupTag::Abelian(n) => {
                let r = radius as i64;
                let mut out: Vec<Vec<i64>> = vec![vec![]];
                for _ in 0..*n {
                    out = out
                        .into_iter()
                        .flat_map(|v| {
                            (-r..=r).map(move |x| {
                                let mut v = v.clone();
                                v.push(x);
                                v
                            })
                        })
                        .collect();
                }
                let mut els: Vec<Element> = out
                    .into_iter()
                    .filter(|v| v.iter().map(|x| x.abs()).sum::<i64>() <= r)
                    .map(|v| Element::Vector(IntVector::from_i64s(&v)))
                    .collect();
                els.sort();
                els
            }
        }
    }

    /// The free generators (unit vectors for Z^n).
    pub fn generators(&self) -> Vec<Element> {
        match self {
            GroupTag::Abelian(n) => (0..*n).map(|i| Element::Vector(IntVector::unit(*n, i))).collect(),
            GroupTag::Free(k) => Alphabet::new(*k)
                .expect("valid rank")
                .generators()
                .into_iter()
                .map(Element::Word)
                .collect(),
        }
    }

    /// Elements of length exactly `radius`, sorted.
    pub fn sphere(&self, radius: usize) -> Vec<Element> {
        self.ball(radius)
            .into_iter()
            .filter(|e| e.length() == radius as u64)
            .collect()
    }

    pub fn whole(&self) -> Subgroup {
        match self {
            GroupTag::Abelian(n) => Subgroup::Lattice(Lattice::whole(*n)),
            GroupTag::Free(k) => Subgroup::Graph(SubgroupGraph::whole(*k)),
        }
    }

    /// All subgroups of index at most `max_index`, in canonical order.
    pub fn enumerate(&self, max_index: usize) -> Result<Vec<Subgroup>> {
        Ok(match self {
            GroupTag::Abelian(n) => lattices::enumerate_lattices(*n, max_index as u64)?
                .into_iter()
                .map(Subgroup::Lattice)
                .collect(),
            GroupTag::Free(k) => stallings::enumerate_subgroups(*k, max_index)?
                .into_iter()
                .map(Subgroup::Graph)
                .collect(),
        })
    }

    /// `G_{<= N}`.
    pub fn profinite_kernel(&self, max_index: usize) -> Result<Subgroup> {
        Ok(match self {
            GroupTag::Abelian(n) => {
                Subgroup::Lattice(lattices::profinite_kernel(*n, max_index as u64)?)
            }
            GroupTag::Free(k) => Subgroup::Graph(stallings::profinite_kernel(*k, max_index)?),
        })
    }
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupTag::Abelian(n) => write!(f, "Z {n}"),
            GroupTag::Free(k) => write!(f, "F {k}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Element {
    Vector(IntVector),
    Word(Word),
}

impl Element {
    pub fn as_word(&self) -> Option<&Word> {
        match self {
            Element::Word(w) => Some(w),
            Element::Vector(_) => None,
        }
    }

    pub fn as_vector(&self) -> Option<&IntVector> {
        match self {
            Element::Vector(v) => Some(v),
            Element::Word(_) => None,
        }
    }

    pub fn mul(&self, other: &Element) -> Element {
        match (self, other) {
            (Element::Vector(a), Element::Vector(b)) => Element::Vector(a.add(b)),
            (Element::Word(a), Element::Word(b)) => Element::Word(a.mul(b)),
            _ => panic!("multiplying elements of different group families"),
        }
    }

    pub fn inverse(&self) -> Element {
        match self {
            Element::Vector(a) => Element::Vector(a.neg()),
            Element::Word(w) => Element::Word(w.inverse()),
        }
    }

    pub fn pow(&self, m: i64) -> Element {
        match self {
            Element::Vector(a) => Element::Vector(a.scale(&BigInt::from(m))),
            Element::Word(w) => Element::Word(w.pow(m)),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Element::Vector(a) => a.is_zero(),
            Element::Word(w) => w.is_identity(),
        }
    }

    /// Word length (l1 norm in Z^n).
    pub fn length(&self) -> u64 {
        match self {
            Element::Vector(a) => a.l1_norm().to_u64().unwrap_or(u64::MAX),
            Element::Word(w) => w.len() as u64,
        }
    }

    /// Word-metric distance `|self⁻¹ other|`.
    pub fn distance(&self, other: &Element) -> u64 {
        match (self, other) {
            (Element::Word(a), Element::Word(b)) => a.distance(b) as u64,
            _ => self.inverse().mul(other).length(),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Vector(v) => write!(f, "{v}"),
            Element::Word(w) => write!(f, "{w}"),
        }
    }
}

/// Identifies a right coset `H·g`: the reduced vector for lattices, the
/// graph vertex for free groups.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum CosetKey {
    Vector(IntVector),
    Vertex(usize),
}

impl fmt::Display for CosetKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CosetKey::Vector(v) => write!(f, "{v}"),
            CosetKey::Vertex(x) => write!(f, "{}", x + 1),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Subgroup {
    Lattice(Lattice),
    Graph(SubgroupGraph),
}

impl Subgroup {
    pub fn tag(&self) -> GroupTag {
        match self {
            Subgroup::Lattice(l) => GroupTag::Abelian(l.dim()),
            Subgroup::Graph(g) => GroupTag::Free(g.rank()),
        }
    }

    pub fn index(&self) -> Result<u64> {
        match self {
            Subgroup::Lattice(l) => Ok(l.index_u64()),
            Subgroup::Graph(g) => Ok(g.index()? as u64),
        }
    }

    pub fn index_big(&self) -> Result<BigInt> {
        match self {
            Subgroup::Lattice(l) => Ok(l.index()),
            Subgroup::Graph(g) => Ok(BigInt::from(g.index()?)),
        }
    }

    pub fn is_whole(&self) -> bool {
        self.index_big().map(|i| i.is_one()).unwrap_or(false)
    }

    pub fn as_lattice(&self) -> Option<&Lattice> {
        match self {
            Subgroup::Lattice(l) => Some(l),
            Subgroup::Graph(_) => None,
        }
    }

    pub fn as_graph(&self) -> Option<&SubgroupGraph> {
        match self {
            Subgroup::Graph(g) => Some(g),
            Subgroup::Lattice(_) => None,
        }
    }

    pub fn contains(&self, x: &Element) -> Result<bool> {
        match (self, x) {
            (Subgroup::Lattice(l), Element::Vector(v)) => l.contains(v),
            (Subgroup::Graph(g), Element::Word(w)) => Ok(g.contains(w)),
            _ => Err(Error::GroupMismatch(format!("{x} is not an element of {}", self.tag()))),
        }
    }

    pub fn intersect(&self, other: &Subgroup) -> Result<Subgroup> {
        match (self, other) {
            (Subgroup::Lattice(a), Subgroup::Lattice(b)) => Ok(Subgroup::Lattice(a.intersect(b)?)),
            (Subgroup::Graph(a), Subgroup::Graph(b)) => Ok(Subgroup::Graph(a.intersect(b)?)),
            _ => Err(Error::GroupMismatch(format!("{} vs {}", self.tag(), other.tag()))),
        }
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> Result<bool> {
        match (self, other) {
            (Subgroup::Lattice(a), Subgroup::Lattice(b)) => a.is_subgroup_of(b),
            (Subgroup::Graph(a), Subgroup::Graph(b)) => a.is_subgroup_of(b),
            _ => Err(Error::GroupMismatch(format!("{} vs {}", self.tag(), other.tag()))),
        }
    }

    /// Free basis: HNF columns for lattices, Schreier basis for graphs.
    pub fn basis(&self) -> Vec<Element> {
        match self {
            Subgroup::Lattice(l) => l.columns().into_iter().map(Element::Vector).collect(),
            Subgroup::Graph(g) => g.basis().iter().cloned().map(Element::Word).collect(),
        }
    }

    pub fn coset_key(&self, x: &Element) -> Result<CosetKey> {
        match (self, x) {
            (Subgroup::Lattice(l), Element::Vector(v)) => Ok(CosetKey::Vector(l.reduce(v))),
            (Subgroup::Graph(g), Element::Word(w)) => g
                .coset_of(w)
                .map(CosetKey::Vertex)
                .ok_or_else(|| Error::InfiniteIndex("coset trace left an incomplete graph".into())),
            _ => Err(Error::GroupMismatch(format!("{x} is not an element of {}", self.tag()))),
        }
    }

    /// A nearest element of the subgroup to `g` in the word metric (l1 for
    /// Z^n), the least in element order among all nearest ones.
    pub fn closest_point(&self, g: &Element) -> Result<Element> {
        match (self, g) {
            (Subgroup::Lattice(l), Element::Vector(v)) => {
                let tag = GroupTag::Abelian(l.dim());
                for r in 0.. {
                    let mut hits: Vec<Element> = tag
                        .sphere(r)
                        .into_iter()
                        .map(|y| Element::Vector(v.add(y.as_vector().expect("vector"))))
                        .filter(|h| l.contains(h.as_vector().expect("vector")).unwrap_or(false))
                        .collect();
                    if !hits.is_empty() {
                        hits.sort();
                        return Ok(hits.swap_remove(0));
                    }
                }
                unreachable!("a finite-index lattice meets every large sphere")
            }
            (Subgroup::Graph(gr), Element::Word(w)) => {
                gr.require_complete()?;
                let start = gr.coset_of(w).expect("complete graph");
                let dist = gr.distances_to_base();
                let mut best: Option<Word> = None;
                let mut stack: Vec<(usize, Word)> = vec![(start, w.clone())];
                while let Some((v, h)) = stack.pop() {
                    if v == 0 {
                        if best.as_ref().map_or(true, |b| h < *b) {
                            best = Some(h);
                        }
                        continue;
                    }
                    for l in gr.alphabet().letters() {
                        let u = gr.target(v, l).expect("complete graph");
                        if dist[u] + 1 == dist[v] {
                            stack.push((u, h.mul(&Word::letter(l))));
                        }
                    }
                }
                Ok(Element::Word(best.expect("base is reachable")))
            }
            _ => Err(Error::GroupMismatch(format!("{g} is not an element of {}", self.tag()))),
        }
    }

    /// One canonical representative per right coset.
    pub fn coset_representatives(&self) -> Result<Vec<Element>> {
        match self {
            Subgroup::Lattice(l) => Ok(l
                .coset_representatives()
                .into_iter()
                .map(Element::Vector)
                .collect()),
            Subgroup::Graph(g) => {
                g.require_complete()?;
                Ok((0..g.vertex_count())
                    .map(|v| Element::Word(g.tree_word(v).clone()))
                    .collect())
            }
        }
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subgroup::Lattice(l) => write!(f, "{l}"),
            Subgroup::Graph(g) => write!(f, "{g}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_parse() {
        assert_eq!(GroupTag::parse("Z", "2").unwrap(), GroupTag::Abelian(2));
        assert_eq!(GroupTag::parse("F", "3").unwrap(), GroupTag::Free(3));
        assert!(GroupTag::parse("F", "27").is_err());
        assert!(GroupTag::parse("Q", "1").is_err());
        assert!(GroupTag::parse("Z", "0").is_err());
    }

    #[test]
    fn balls() {
        assert_eq!(GroupTag::Abelian(1).ball(3).len(), 7);
        assert_eq!(GroupTag::Abelian(2).ball(2).len(), 13);
        assert_eq!(GroupTag::Free(2).ball(2).len(), 17);
    }

    #[test]
    fn cosets_are_distinct() {
        for tag in [GroupTag::Abelian(2), GroupTag::Free(2)] {
            for h in tag.enumerate(3).unwrap() {
                let reps = h.coset_representatives().unwrap();
                assert_eq!(reps.len() as u64, h.index().unwrap());
                let keys: std::collections::HashSet<_> =
                    reps.iter().map(|r| h.coset_key(r).unwrap()).collect();
                assert_eq!(keys.len(), reps.len());
            }
        }
    }

    #[test]
    fn closest_point_matches_brute_force() {
        for tag in [GroupTag::Free(2), GroupTag::Abelian(2)] {
            let big = tag.ball(6);
            for h in tag.enumerate(3).unwrap() {
                for g in tag.ball(3) {
                    let best = big
                        .iter()
                        .filter(|x| h.contains(x).unwrap())
                        .min_by(|x, y| g.distance(x).cmp(&g.distance(y)).then_with(|| x.cmp(y)))
                        .unwrap();
                    assert_eq!(&h.closest_point(&g).unwrap(), best, "{h} {g}");
                }
            }
        }
    }
}
