//! Commensurations: isomorphisms between finite-index subgroups of Z^n or
//! F_k, composed after restriction and compared on the intersection of
//! their domains.

mod abelian;
pub mod catalog;
mod free;

use std::fmt;

pub use abelian::AbelianComm;
pub use free::FreeComm;

use crate::error::{Error, Result};
use crate::group::{Element, GroupTag, Subgroup};
use crate::matrix::RationalMatrix;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Commensuration {
    Abelian(AbelianComm),
    Free(FreeComm),
}

fn mismatch(a: GroupTag, b: GroupTag) -> Error {
    Error::GroupMismatch(format!("{a} vs {b}"))
}

impl Commensuration {
    pub fn identity(tag: GroupTag) -> Commensuration {
        match tag {
            GroupTag::Abelian(n) => Commensuration::Abelian(AbelianComm::identity(n)),
            GroupTag::Free(k) => Commensuration::Free(FreeComm::identity(k)),
        }
    }

    /// Conjugation by `g`; the identity on Z^n.
    pub fn inner(tag: GroupTag, g: &Element) -> Result<Commensuration> {
        match (tag, g) {
            (GroupTag::Abelian(n), Element::Vector(v)) if v.dim() == n => Ok(Self::identity(tag)),
            (GroupTag::Free(k), Element::Word(w)) => Ok(Commensuration::Free(FreeComm::inner(k, w)?)),
            _ => Err(Error::GroupMismatch(format!("{g} is not an element of {tag}"))),
        }
    }

    pub fn from_matrix(m: RationalMatrix) -> Result<Commensuration> {
        Ok(Commensuration::Abelian(AbelianComm::from_matrix(m)?))
    }

    pub fn tag(&self) -> GroupTag {
        match self {
            Commensuration::Abelian(a) => GroupTag::Abelian(a.dim()),
            Commensuration::Free(f) => GroupTag::Free(f.rank()),
        }
    }

    pub fn domain(&self) -> Subgroup {
        match self {
            Commensuration::Abelian(a) => Subgroup::Lattice(a.domain().clone()),
            Commensuration::Free(f) => Subgroup::Graph(f.domain().clone()),
        }
    }

    pub fn codomain(&self) -> Subgroup {
        match self {
            Commensuration::Abelian(a) => Subgroup::Lattice(a.codomain().clone()),
            Commensuration::Free(f) => Subgroup::Graph(f.codomain().clone()),
        }
    }

    /// Domain basis paired with its images.
    pub fn table(&self) -> Vec<(Element, Element)> {
        match self {
            Commensuration::Abelian(a) => a
                .domain()
                .columns()
                .into_iter()
                .map(|c| {
                    let img = a.apply(&c).expect("basis lies in domain");
                    (Element::Vector(c), Element::Vector(img))
                })
                .collect(),
            Commensuration::Free(f) => f
                .domain()
                .basis()
                .iter()
                .zip(f.images())
                .map(|(b, i)| (Element::Word(b.clone()), Element::Word(i.clone())))
                .collect(),
        }
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        match (self, x) {
            (Commensuration::Abelian(a), Element::Vector(v)) => Ok(Element::Vector(a.apply(v)?)),
            (Commensuration::Free(f), Element::Word(w)) => Ok(Element::Word(f.apply(w)?)),
            _ => Err(Error::GroupMismatch(format!("{x} is not an element of {}", self.tag()))),
        }
    }

    /// `{ h ∈ domain : φ(h) ∈ l }`.
    pub fn preimage(&self, l: &Subgroup) -> Result<Subgroup> {
        match (self, l) {
            (Commensuration::Abelian(a), Subgroup::Lattice(l)) => Ok(Subgroup::Lattice(a.preimage(l)?)),
            (Commensuration::Free(f), Subgroup::Graph(g)) => Ok(Subgroup::Graph(f.preimage(g)?)),
            _ => Err(mismatch(self.tag(), l.tag())),
        }
    }

    /// `φ(l)` for `l ≤ domain`.
    pub fn image(&self, l: &Subgroup) -> Result<Subgroup> {
        match (self, l) {
            (Commensuration::Abelian(a), Subgroup::Lattice(l)) => Ok(Subgroup::Lattice(a.image(l)?)),
            (Commensuration::Free(f), Subgroup::Graph(g)) => Ok(Subgroup::Graph(f.image(g)?)),
            _ => Err(mismatch(self.tag(), l.tag())),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Commensuration) -> Result<Commensuration> {
        match (self, other) {
            (Commensuration::Abelian(a), Commensuration::Abelian(b)) if a.dim() == b.dim() => {
                Ok(Commensuration::Abelian(a.compose(b)?))
            }
            (Commensuration::Free(a), Commensuration::Free(b)) => Ok(Commensuration::Free(a.compose(b)?)),
            _ => Err(mismatch(self.tag(), other.tag())),
        }
    }

    pub fn invert(&self) -> Result<Commensuration> {
        match self {
            Commensuration::Abelian(a) => Ok(Commensuration::Abelian(a.invert()?)),
            Commensuration::Free(f) => Ok(Commensuration::Free(f.invert()?)),
        }
    }

    pub fn restrict(&self, sub: &Subgroup) -> Result<Commensuration> {
        match (self, sub) {
            (Commensuration::Abelian(a), Subgroup::Lattice(l)) => Ok(Commensuration::Abelian(a.restrict(l)?)),
            (Commensuration::Free(f), Subgroup::Graph(g)) => Ok(Commensuration::Free(f.restrict(g)?)),
            _ => Err(mismatch(self.tag(), sub.tag())),
        }
    }

    pub fn equivalent(&self, other: &Commensuration) -> Result<bool> {
        match (self, other) {
            (Commensuration::Abelian(a), Commensuration::Abelian(b)) if a.dim() == b.dim() => a.equivalent(b),
            (Commensuration::Free(a), Commensuration::Free(b)) if a.rank() == b.rank() => a.equivalent(b),
            _ => Err(mismatch(self.tag(), other.tag())),
        }
    }

    /// The unique rational matrix extending a commensuration of Z^n.
    pub fn to_matrix(&self) -> Result<RationalMatrix> {
        match self {
            Commensuration::Abelian(a) => Ok(a.matrix().clone()),
            Commensuration::Free(f) => Err(Error::GroupMismatch(format!(
                "F {} has no matrix realization",
                f.rank()
            ))),
        }
    }
}

impl fmt::Display for Commensuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::format_commensuration(self))
    }
}
