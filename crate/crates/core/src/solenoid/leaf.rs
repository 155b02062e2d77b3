//! Points of the universal covers: the Cayley tree of F_k with unit edges,
//! and R^n for Z^n.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::real::ExactReal;
use crate::error::{Error, Result};
use crate::freewords::{Alphabet, Letter, Word};
use crate::group::Element;
use crate::matrix::parse_rational;

/// A vertex `w` of the tree, or the point at distance `t ∈ (0, 1/2]` from
/// `w` along the edge labeled `l`. The stored endpoint is the nearer one;
/// at a midpoint it is the smaller `(vertex, letter)` pair.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct TreePoint {
    vertex: Word,
    edge: Option<(Letter, BigRational)>,
}

impl TreePoint {
    pub fn vertex(w: Word) -> TreePoint {
        TreePoint { vertex: w, edge: None }
    }

    /// The point at distance `t ∈ [0, 1]` from `w` towards `w·l`.
    pub fn on_edge(w: Word, l: Letter, t: BigRational) -> TreePoint {
        assert!(!t.is_negative() && t <= BigRational::one(), "edge parameter outside [0,1]");
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        if t.is_zero() {
            return TreePoint::vertex(w);
        }
        if t.is_one() {
            return TreePoint::vertex(w.mul(&Word::letter(l)));
        }
        let far = w.mul(&Word::letter(l));
        let flip = t > half || (t == half && (&far, l.inverse()) < (&w, l));
        if flip {
            TreePoint {
                vertex: far,
                edge: Some((l.inverse(), BigRational::one() - t)),
            }
        } else {
            TreePoint {
                vertex: w,
                edge: Some((l, t)),
            }
        }
    }

    pub fn base_vertex(&self) -> &Word {
        &self.vertex
    }

    pub fn edge(&self) -> Option<&(Letter, BigRational)> {
        self.edge.as_ref()
    }

    /// `g · p`.
    pub fn translate(&self, g: &Word) -> TreePoint {
        let w = g.mul(&self.vertex);
        match &self.edge {
            None => TreePoint::vertex(w),
            Some((l, t)) => TreePoint::on_edge(w, *l, t.clone()),
        }
    }

    fn ends(&self) -> Vec<(Word, BigRational)> {
        match &self.edge {
            None => vec![(self.vertex.clone(), BigRational::zero())],
            Some((l, t)) => vec![
                (self.vertex.clone(), t.clone()),
                (self.vertex.mul(&Word::letter(*l)), BigRational::one() - t),
            ],
        }
    }

    pub fn distance(&self, other: &TreePoint) -> BigRational {
        if let (Some((l1, t1)), Some((l2, t2))) = (&self.edge, &other.edge) {
            let far1 = self.vertex.mul(&Word::letter(*l1));
            if self.vertex == other.vertex && l1 == l2 {
                return (t1 - t2).abs();
            }
            if far1 == other.vertex && *l2 == l1.inverse() {
                return (t1 - (BigRational::one() - t2)).abs();
            }
        }
        let mut best: Option<BigRational> = None;
        for (a, da) in self.ends() {
            for (b, db) in other.ends() {
                let d = &da + &db + BigRational::from(BigInt::from(a.distance(&b)));
                if best.as_ref().map_or(true, |x| d < *x) {
                    best = Some(d);
                }
            }
        }
        best.expect("nonempty ends")
    }

    pub fn distance_to_base(&self) -> BigRational {
        self.distance(&TreePoint::vertex(Word::identity()))
    }

    /// Image in the rose: `None` for the vertex, else (generator, parameter
    /// along the positively oriented loop).
    pub fn project(&self) -> Option<(usize, BigRational)> {
        self.edge.as_ref().map(|(l, t)| {
            if l.is_inverse() {
                (l.index(), BigRational::one() - t)
            } else {
                (l.index(), t.clone())
            }
        })
    }
}

impl fmt::Display for TreePoint {
    /// `w` for a vertex, `w:l@t` for an edge point.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.edge {
            None => write!(f, "{}", self.vertex),
            Some((l, t)) => write!(f, "{}:{}@{}", self.vertex, Word::letter(*l), t),
        }
    }
}

/// A point of the universal cover.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Leaf {
    Tree(TreePoint),
    Flat(Vec<BigRational>),
}

impl Leaf {
    /// The vertex or lattice point of a group element.
    pub fn of_element(g: &Element) -> Leaf {
        match g {
            Element::Word(w) => Leaf::Tree(TreePoint::vertex(w.clone())),
            Element::Vector(v) => Leaf::Flat(v.0.iter().map(|x| BigRational::from(x.clone())).collect()),
        }
    }

    pub fn translate(&self, g: &Element) -> Leaf {
        match (self, g) {
            (Leaf::Tree(p), Element::Word(w)) => Leaf::Tree(p.translate(w)),
            (Leaf::Flat(x), Element::Vector(v)) => Leaf::Flat(
                x.iter()
                    .zip(&v.0)
                    .map(|(a, b)| a + BigRational::from(b.clone()))
                    .collect(),
            ),
            _ => panic!("leaf and element from different group families"),
        }
    }

    /// Tree metric with unit edges, Euclidean metric on R^n.
    pub fn distance(&self, other: &Leaf) -> ExactReal {
        match (self, other) {
            (Leaf::Tree(a), Leaf::Tree(b)) => ExactReal::rational(a.distance(b)),
            (Leaf::Flat(a), Leaf::Flat(b)) => ExactReal::sqrt(
                a.iter()
                    .zip(b)
                    .map(|(x, y)| (x - y) * (x - y))
                    .fold(BigRational::zero(), |s, t| s + t),
            ),
            _ => panic!("leaves from different group families"),
        }
    }

    /// Upper bound on the distance to the base point, as a float.
    pub fn radius_f64(&self) -> f64 {
        match self {
            Leaf::Tree(p) => ExactReal::rational(p.distance_to_base()).to_f64(),
            Leaf::Flat(x) => {
                let zero = vec![BigRational::zero(); x.len()];
                self.distance(&Leaf::Flat(zero)).to_f64()
            }
        }
    }

    /// The group element `h` and leaf `h⁻¹ x` with `h⁻¹ x` nearest the base.
    /// Ties (midpoints, half-integer coordinates) go to the smaller letter
    /// or to the coordinate `+1/2`.
    pub(crate) fn recenter(&self) -> (Element, Leaf) {
        match self {
            Leaf::Tree(p) => {
                let w = p.vertex.clone();
                let moved = p.translate(&w.inverse());
                if let Some((l, t)) = &moved.edge {
                    let half = BigRational::new(BigInt::one(), BigInt::from(2));
                    if *t == half && l.inverse() < *l {
                        let w2 = w.mul(&Word::letter(*l));
                        let alt = TreePoint {
                            vertex: Word::identity(),
                            edge: Some((l.inverse(), half)),
                        };
                        return (Element::Word(w2), Leaf::Tree(alt));
                    }
                }
                (Element::Word(w), Leaf::Tree(moved))
            }
            Leaf::Flat(x) => {
                let half = BigRational::new(BigInt::one(), BigInt::from(2));
                let shift: Vec<BigInt> = x.iter().map(|c| (c - &half).ceil().to_integer()).collect();
                let rest = x
                    .iter()
                    .zip(&shift)
                    .map(|(c, s)| c - BigRational::from(s.clone()))
                    .collect();
                (
                    Element::Vector(crate::freewords::IntVector(shift)),
                    Leaf::Flat(rest),
                )
            }
        }
    }

    pub fn parse(text: &str, alphabet_or_dim: LeafKind) -> Result<Leaf> {
        let bad = || Error::Precondition(format!("bad leaf {text:?}"));
        match alphabet_or_dim {
            LeafKind::Tree(alphabet) => match text.split_once(':') {
                None => Ok(Leaf::Tree(TreePoint::vertex(alphabet.parse_word(text)?))),
                Some((w, rest)) => {
                    let (l, t) = rest.split_once('@').ok_or_else(bad)?;
                    let lw = alphabet.parse_word(l)?;
                    if lw.len() != 1 {
                        return Err(bad());
                    }
                    let t = parse_rational(t).ok_or_else(bad)?;
                    if t.is_negative() || t > BigRational::one() {
                        return Err(bad());
                    }
                    Ok(Leaf::Tree(TreePoint::on_edge(alphabet.parse_word(w)?, lw.letters()[0], t)))
                }
            },
            LeafKind::Flat(n) => {
                let inner = text
                    .trim()
                    .strip_prefix('(')
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(bad)?;
                let xs = inner
                    .split(',')
                    .map(|s| parse_rational(s.trim()).ok_or_else(bad))
                    .collect::<Result<Vec<_>>>()?;
                if xs.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, found: xs.len() });
                }
                Ok(Leaf::Flat(xs))
            }
        }
    }
}

/// Which universal cover a leaf lives in, for parsing.
#[derive(Clone, Copy, Debug)]
pub enum LeafKind {
    Tree(Alphabet),
    Flat(usize),
}

impl fmt::Display for Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Leaf::Tree(p) => write!(f, "{p}"),
            Leaf::Flat(x) => {
                let cells: Vec<String> = x.iter().map(|c| c.to_string()).collect();
                write!(f, "({})", cells.join(","))
            }
        }
    }
}

