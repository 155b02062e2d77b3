//! Eventually periodic boundary points of F_k and the action of
//! commensurations on attracting fixed points.

use std::fmt;

use crate::commensurations::Commensuration;
use crate::error::{Error, Result};
use crate::freewords::{Alphabet, Word};
use crate::group::{Element, GroupTag};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Attracting,
    Repelling,
}

/// The infinite reduced word `u c c c ...`, stored with the shortest `u`
/// and a primitive `c`. Points built by [`fixed_point`] remember an
/// element `g` with `g⁺` equal to the point.
#[derive(Clone, Debug)]
pub struct BoundaryPoint {
    prefix: Word,
    period: Word,
    source: Option<Word>,
}

impl PartialEq for BoundaryPoint {
    fn eq(&self, other: &Self) -> bool {
        self.prefix == other.prefix && self.period == other.period
    }
}

impl Eq for BoundaryPoint {}

impl BoundaryPoint {
    pub fn new(prefix: Word, period: Word) -> Result<BoundaryPoint> {
        if period.is_identity() {
            return Err(Error::Precondition("boundary period must be nonempty".into()));
        }
        if !period.is_cyclically_reduced() || prefix.mul(&period).len() != prefix.len() + period.len() {
            return Err(Error::Precondition(format!("{prefix} ({period})^∞ is not reduced")));
        }
        let (mut c, _) = period.primitive_root()?;
        let mut u = prefix;
        while let (Some(&x), Some(&y)) = (u.letters().last(), c.letters().last()) {
            if x != y {
                break;
            }
            let n = u.len();
            u = Word::from_letters(u.letters()[..n - 1].iter().copied());
            let mut rot = vec![y];
            rot.extend_from_slice(&c.letters()[..c.len() - 1]);
            c = Word::from_letters(rot);
        }
        Ok(BoundaryPoint {
            prefix: u,
            period: c,
            source: None,
        })
    }

    pub fn prefix(&self) -> &Word {
        &self.prefix
    }

    pub fn period(&self) -> &Word {
        &self.period
    }

    /// An element whose attracting fixed point is this point, if known.
    pub fn source(&self) -> Option<&Word> {
        self.source.as_ref()
    }

    /// The first `n` letters of the infinite word.
    pub fn expansion(&self, n: usize) -> Word {
        let letters = self
            .prefix
            .letters()
            .iter()
            .chain(self.period.letters().iter().cycle())
            .take(n)
            .copied();
        Word::from_letters(letters)
    }

    /// Parses `u=<word> c=<word>`.
    pub fn parse(text: &str, alphabet: Alphabet) -> Result<BoundaryPoint> {
        let bad = || Error::Precondition(format!("bad boundary point {text:?}, expected `u=<word> c=<word>`"));
        let mut u = None;
        let mut c = None;
        for tok in text.split_whitespace() {
            match tok.split_once('=') {
                Some(("u", w)) => u = Some(alphabet.parse_word(w)?),
                Some(("c", w)) => c = Some(alphabet.parse_word(w)?),
                _ => return Err(bad()),
            }
        }
        BoundaryPoint::new(u.ok_or_else(bad)?, c.ok_or_else(bad)?)
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u={} c={}", self.prefix, self.period)
    }
}

/// `g⁺` or `g⁻` for `g ≠ 1`, from `g = u c u⁻¹` with `c` cyclically reduced.
pub fn fixed_point(g: &Word, sign: Sign) -> Result<BoundaryPoint> {
    if g.is_identity() {
        return Err(Error::Identity("boundary fixed points (it is elliptic)"));
    }
    let (u, c) = g.cyclic_decompose()?;
    let (c, source) = match sign {
        Sign::Attracting => (c, g.clone()),
        Sign::Repelling => (c.inverse(), g.inverse()),
    };
    let mut p = BoundaryPoint::new(u, c)?;
    p.source = Some(source);
    Ok(p)
}

/// `(φ(g^m))⁺` for the least `m ≥ 1` with `g^m` in the domain, where `g`
/// is the element recorded in `p`. The answer is checked against `2m`.
pub fn boundary_action(phi: &Commensuration, p: &BoundaryPoint) -> Result<BoundaryPoint> {
    if !matches!(phi.tag(), GroupTag::Free(_)) {
        return Err(Error::GroupMismatch("the boundary action is defined for free groups".into()));
    }
    let g = p
        .source()
        .ok_or_else(|| Error::Precondition(format!("boundary point {p} carries no defining element")))?;
    let domain = phi.domain();
    let bound = domain.index()?;
    let image = |m: u64| -> Result<Word> {
        let x = phi.apply(&Element::Word(g.pow(m as i64)))?;
        Ok(x.as_word().expect("free group element").clone())
    };
    let m = (1..=bound)
        .find(|&m| domain.contains(&Element::Word(g.pow(m as i64))).unwrap_or(false))
        .expect("some power of length at most the index lies in the domain");
    let once = fixed_point(&image(m)?, Sign::Attracting)?;
    let twice = fixed_point(&image(2 * m)?, Sign::Attracting)?;
    if once != twice {
        return Err(Error::Precondition(format!("fixed point of φ(g^m) depends on m: {once} vs {twice}")));
    }
    Ok(once)
}
