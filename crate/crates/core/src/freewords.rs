//! Reduced words in free groups and integer vectors for Z^n.
//!
//! Letters are written with the first `k` lowercase ASCII letters for the
//! free generators and the matching uppercase letter for the inverse. The
//! identity is written `1` in files; the empty string parses to it too.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{parse_err, Error, Result};

/// A generator or inverse generator. Internally `+(i+1)` for generator `i`
/// and `-(i+1)` for its inverse, so ranks beyond 26 are representable for
/// internal computations (e.g. words over a subgroup basis).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Letter(i32);

impl Letter {
    pub fn generator(index: usize) -> Letter {
        Letter(index as i32 + 1)
    }

    pub fn inverse_of_generator(index: usize) -> Letter {
        Letter(-(index as i32 + 1))
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    /// Zero-based generator index.
    pub fn index(self) -> usize {
        (self.0.unsigned_abs() - 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    /// Position in the letter order `a < A < b < B < ...`; also used as the
    /// edge-label slot in graphs (`0..2k`).
    pub fn label(self) -> usize {
        2 * self.index() + usize::from(self.is_inverse())
    }

    pub fn from_label(label: usize) -> Letter {
        if label % 2 == 0 {
            Letter::generator(label / 2)
        } else {
            Letter::inverse_of_generator(label / 2)
        }
    }

    pub fn to_char(self) -> Option<char> {
        let i = self.index();
        if i >= 26 {
            return None;
        }
        let c = (b'a' + i as u8) as char;
        Some(if self.is_inverse() {
            c.to_ascii_uppercase()
        } else {
            c
        })
    }

    pub fn from_char(ch: char) -> Option<Letter> {
        if ch.is_ascii_lowercase() {
            Some(Letter::generator((ch as u8 - b'a') as usize))
        } else if ch.is_ascii_uppercase() {
            Some(Letter::inverse_of_generator((ch as u8 - b'A') as usize))
        } else {
            None
        }
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.label().cmp(&other.label())
    }
}

/// A freely reduced word. Ordered shortlex (length first, then letters in
/// the order `a < A < b < B < ...`), which is the "word order" used for all
/// tie-breaking in the crate.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Word {
        Word(vec![l])
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of free generators needed to spell this word.
    pub fn support_rank(&self) -> usize {
        self.0.iter().map(|l| l.index() + 1).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &Word) -> Word {
        let common = self
            .0
            .iter()
            .rev()
            .zip(other.0.iter())
            .take_while(|(x, y)| **x == y.inverse())
            .count();
        let mut out = Vec::with_capacity(self.len() + other.len() - 2 * common);
        out.extend_from_slice(&self.0[..self.len() - common]);
        out.extend_from_slice(&other.0[common..]);
        Word(out)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn pow(&self, exponent: i64) -> Word {
        let base = if exponent < 0 {
            self.inverse()
        } else {
            self.clone()
        };
        let mut out = Word::identity();
        for _ in 0..exponent.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `g · self · g⁻¹`.
    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.mul(self).mul(&g.inverse())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(f), Some(l)) => self.len() == 1 || *f != l.inverse(),
            _ => true,
        }
    }

    /// Writes `self = u · c · u⁻¹` with `c` cyclically reduced and `u` maximal.
    pub fn cyclic_decompose(&self) -> Result<(Word, Word)> {
        if self.is_identity() {
            return Err(Error::Identity("cyclic decomposition"));
        }
        let n = self.len();
        let mut strip = 0;
        while 2 * strip + 1 < n && self.0[strip] == self.0[n - 1 - strip].inverse() {
            strip += 1;
        }
        let u = Word(self.0[..strip].to_vec());
        let c = Word(self.0[strip..n - strip].to_vec());
        Ok((u, c))
    }

    /// Returns `(r, m)` with `self = r^m`, `m` maximal and `r` not a proper power.
    pub fn primitive_root(&self) -> Result<(Word, usize)> {
        let (u, c) = self.cyclic_decompose()?;
        let (root, m) = periodic_root(c.letters());
        Ok((Word(root.to_vec()).conjugate_by(&u), m))
    }

    /// Substitutes `images[i]` for generator `i`.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Word::identity();
        for l in &self.0 {
            let img = &images[l.index()];
            if l.is_inverse() {
                out = out.mul(&img.inverse());
            } else {
                out = out.mul(img);
            }
        }
        out
    }

    /// Length of `self⁻¹ · other`: the word-metric distance.
    pub fn distance(&self, other: &Word) -> usize {
        let common = self
            .0
            .iter()
            .zip(other.0.iter())
            .take_while(|(x, y)| x == y)
            .count();
        self.len() + other.len() - 2 * common
    }
}

/// Smallest period of a cyclically reduced sequence that tiles it exactly.
fn periodic_root(c: &[Letter]) -> (&[Letter], usize) {
    let n = c.len();
    for p in 1..=n {
        if n % p == 0 && (p..n).all(|i| c[i] == c[i - p]) {
            return (&c[..p], n / p);
        }
    }
    (c, 1)
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for l in &self.0 {
            match l.to_char() {
                Some(c) => write!(f, "{c}")?,
                None if l.is_inverse() => write!(f, "[G{}]", l.index() + 1)?,
                None => write!(f, "[g{}]", l.index() + 1)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// The generating set of F_k.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Alphabet {
    rank: usize,
}

impl Alphabet {
    pub fn new(rank: usize) -> Result<Alphabet> {
        if (1..=26).contains(&rank) {
            Ok(Alphabet { rank })
        } else {
            Err(Error::InvalidRank(rank))
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// All `2k` letters in letter order.
    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..2 * self.rank).map(Letter::from_label)
    }

    pub fn generators(&self) -> Vec<Word> {
        (0..self.rank)
            .map(|i| Word::letter(Letter::generator(i)))
            .collect()
    }

    pub fn contains(&self, w: &Word) -> bool {
        w.support_rank() <= self.rank
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text == "1" {
            return Ok(Word::identity());
        }
        let mut letters = Vec::with_capacity(text.len());
        for ch in text.chars() {
            match Letter::from_char(ch) {
                Some(l) if l.index() < self.rank => letters.push(l),
                _ => {
                    return Err(Error::BadLetter {
                        ch,
                        rank: self.rank,
                    })
                }
            }
        }
        Ok(Word::from_letters(letters))
    }

    pub fn concat(&self, u: &Word, v: &Word) -> Result<Word> {
        for w in [u, v] {
            if !self.contains(w) {
                return Err(Error::AlphabetMismatch(format!(
                    "{w} uses letters outside F_{}",
                    self.rank
                )));
            }
        }
        Ok(u.mul(v))
    }

    /// All reduced words of length `<= radius`, shortlex sorted.
    pub fn ball(&self, radius: usize) -> Vec<Word> {
        let mut out = vec![Word::identity()];
        let mut frontier = vec![Word::identity()];
        for _ in 0..radius {
            let mut next = Vec::new();
            for w in &frontier {
                for l in self.letters() {
                    if w.0.last() != Some(&l.inverse()) {
                        let mut v = w.0.clone();
                        v.push(l);
                        next.push(Word(v));
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out.sort();
        out
    }
}

/// An element of Z^n.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct IntVector(pub Vec<BigInt>);

impl IntVector {
    pub fn zero(n: usize) -> IntVector {
        IntVector(vec![BigInt::zero(); n])
    }

    pub fn from_i64s(entries: &[i64]) -> IntVector {
        IntVector(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn unit(n: usize, i: usize) -> IntVector {
        let mut v = IntVector::zero(n);
        v.0[i] = BigInt::from(1);
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn add(&self, other: &IntVector) -> IntVector {
        IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &IntVector) -> IntVector {
        IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> IntVector {
        IntVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, c: &BigInt) -> IntVector {
        IntVector(self.0.iter().map(|a| a * c).collect())
    }

    /// Word length in Z^n with the standard generators.
    pub fn l1_norm(&self) -> BigInt {
        self.0.iter().map(|a| a.abs()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|a| a.is_zero())
    }

    pub fn parse(text: &str, n: usize) -> Result<IntVector> {
        let t = text.trim();
        let t = t
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .unwrap_or(t);
        let entries: Vec<BigInt> = t
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<BigInt>()
                    .map_err(|_| parse_err(0, format!("bad integer {s:?}")))
            })
            .collect::<Result<_>>()?;
        if entries.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: entries.len(),
            });
        }
        Ok(IntVector(entries))
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f2() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    fn w(s: &str) -> Word {
        f2().parse_word(s).unwrap()
    }

    // Independent oracle: rescan the whole string, removing the first
    // adjacent inverse pair, until nothing changes.
    fn naive_reduce(s: &str) -> String {
        let mut chars: Vec<char> = s.chars().collect();
        loop {
            let pos = chars.windows(2).position(|p| {
                p[0] != p[1] && p[0].to_ascii_lowercase() == p[1].to_ascii_lowercase()
            });
            match pos {
                Some(i) => {
                    chars.drain(i..i + 2);
                }
                None => break,
            }
        }
        if chars.is_empty() {
            "1".into()
        } else {
            chars.into_iter().collect()
        }
    }

    #[test]
    fn parse_examples() {
        assert_eq!(w("ab").to_string(), "ab");
        assert!(w("aA").is_identity());
        assert_eq!(naive_reduce("abBA"), "1");
        assert!(w("abBA").is_identity());
        assert!(w("1").is_identity());
        assert!(w("").is_identity());
    }

    #[test]
    fn parse_rejects() {
        assert!(matches!(
            f2().parse_word("abc"),
            Err(Error::BadLetter { ch: 'c', .. })
        ));
        assert!(f2().parse_word("a-b").is_err());
        assert_eq!(Alphabet::new(0), Err(Error::InvalidRank(0)));
        assert_eq!(Alphabet::new(27), Err(Error::InvalidRank(27)));
    }

    #[test]
    fn concat_examples() {
        let a = f2();
        assert!(a.concat(&w("ab"), &w("BA")).unwrap().is_identity());
        assert_eq!(a.concat(&w("a"), &w("b")).unwrap(), w("ab"));
        assert_eq!(naive_reduce("abAaba"), "abba");
        assert_eq!(a.concat(&w("abA"), &w("aba")).unwrap().to_string(), "abba");
        let c = Alphabet::new(3).unwrap().parse_word("c").unwrap();
        assert!(matches!(a.concat(&w("a"), &c), Err(Error::AlphabetMismatch(_))));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(w("ab").inverse().to_string(), "BA");
        assert!(Word::identity().inverse().is_identity());
        assert_eq!(w("aBa").inverse().to_string(), "AbA");
    }

    #[test]
    fn cyclic_decompose_examples() {
        let (u, c) = w("Aba").cyclic_decompose().unwrap();
        assert_eq!((u.to_string(), c.to_string()), ("A".into(), "b".into()));
        let (u, c) = w("ab").cyclic_decompose().unwrap();
        assert_eq!((u.to_string(), c.to_string()), ("1".into(), "ab".into()));
        let (u, c) = w("Bab").cyclic_decompose().unwrap();
        assert_eq!((u.to_string(), c.to_string()), ("B".into(), "a".into()));
        assert_eq!(
            Word::identity().cyclic_decompose(),
            Err(Error::Identity("cyclic decomposition"))
        );
    }

    #[test]
    fn primitive_root_examples() {
        assert_eq!(w("abab").primitive_root().unwrap(), (w("ab"), 2));
        assert_eq!(w("a").primitive_root().unwrap(), (w("a"), 1));
        assert_eq!(w("aabaab").primitive_root().unwrap(), (w("aab"), 2));
        // conjugated power: (B ab b)^2 = B abab b
        assert_eq!(w("Bababb").primitive_root().unwrap(), (w("Babb"), 2));
        assert!(Word::identity().primitive_root().is_err());
    }

    // Brute force: every (r, m) with r in a ball and r^m = w.
    #[test]
    fn primitive_root_matches_brute_force() {
        let ball = f2().ball(4);
        for g in ball.iter().filter(|g| !g.is_identity()) {
            let (r, m) = g.primitive_root().unwrap();
            let best = (1..=g.len())
                .rev()
                .find(|&m| ball.iter().any(|r| !r.is_identity() && r.pow(m as i64) == *g))
                .unwrap();
            assert_eq!(m, best, "{g}");
            assert_eq!(r.pow(m as i64), *g);
        }
    }

    #[test]
    fn ball_sizes() {
        // 1 + 2k(2k-1)^{r-1} growth
        let sizes: Vec<usize> = (0..5).map(|r| f2().ball(r).len()).collect();
        assert_eq!(sizes, vec![1, 5, 17, 53, 161]);
    }

    #[test]
    fn intvector_parse() {
        let v = IntVector::parse("(2,-3)", 2).unwrap();
        assert_eq!(v, IntVector::from_i64s(&[2, -3]));
        assert_eq!(v.to_string(), "(2,-3)");
        assert!(IntVector::parse("1 2 3", 2).is_err());
    }

    fn arb_word(max: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec(0usize..4, 0..max)
            .prop_map(|ls| Word::from_letters(ls.into_iter().map(Letter::from_label)))
    }

    proptest! {
        #[test]
        fn associativity_and_inverse(u in arb_word(10), v in arb_word(10), x in arb_word(10)) {
            prop_assert_eq!(u.mul(&v).mul(&x), u.mul(&v.mul(&x)));
            prop_assert!(u.mul(&u.inverse()).is_identity());
        }

        #[test]
        fn reduction_matches_naive(s in "[abAB]{0,16}") {
            prop_assert_eq!(f2().parse_word(&s).unwrap().to_string(), naive_reduce(&s));
        }

        #[test]
        fn round_trip(u in arb_word(16)) {
            prop_assert_eq!(f2().parse_word(&u.to_string()).unwrap(), u);
        }

        #[test]
        fn root_is_primitive(u in arb_word(8)) {
            prop_assume!(!u.is_identity());
            let (r, m) = u.primitive_root().unwrap();
            prop_assert_eq!(r.pow(m as i64), u.clone());
            prop_assert_eq!(r.primitive_root().unwrap().1, 1);
        }

        #[test]
        fn unique_roots(u in arb_word(7), v in arb_word(7), m in 2i64..4) {
            prop_assume!(u != v);
            prop_assert_ne!(u.pow(m), v.pow(m));
        }
    }
}
