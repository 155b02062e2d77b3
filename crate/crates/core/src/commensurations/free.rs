//! Partial automorphisms of F_k stored on the Schreier basis of the domain.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::freewords::{Letter, Word};
use crate::limits;
use crate::stallings::fold::fold_words;
use crate::stallings::SubgroupGraph;

/// `domain.basis()[i] ↦ images[i]`, an isomorphism onto `codomain`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FreeComm {
    domain: SubgroupGraph,
    codomain: SubgroupGraph,
    images: Vec<Word>,
}

impl FreeComm {
    pub fn new(domain: SubgroupGraph, images: Vec<Word>) -> Result<FreeComm> {
        domain.require_complete()?;
        let k = domain.rank();
        if images.len() != domain.basis().len() {
            return Err(Error::DimensionMismatch {
                expected: domain.basis().len(),
                found: images.len(),
            });
        }
        let alphabet = domain.alphabet();
        if let Some(bad) = images.iter().find(|w| !alphabet.contains(w)) {
            return Err(Error::AlphabetMismatch(format!("{bad} is not a word of F_{k}")));
        }
        let folded = fold_words(k, &images);
        if !folded.graph.is_complete() {
            return Err(Error::InfiniteIndex(format!(
                "images generate an infinite-index subgroup (folded graph has {} vertices)",
                folded.graph.vertex_count()
            )));
        }
        let image_rank = folded.graph.basis().len();
        if image_rank != images.len() || !folded.kernel.is_empty() {
            return Err(Error::NotIsomorphism(format!(
                "domain has rank {} but the images generate a subgroup of rank {image_rank}",
                images.len()
            )));
        }
        Ok(FreeComm {
            domain,
            codomain: folded.graph,
            images,
        })
    }

    /// Restriction to `domain` of the endomorphism `x_i ↦ gen_images[i]` of F_k.
    pub fn from_endomorphism(domain: SubgroupGraph, gen_images: &[Word]) -> Result<FreeComm> {
        if gen_images.len() != domain.rank() {
            return Err(Error::DimensionMismatch {
                expected: domain.rank(),
                found: gen_images.len(),
            });
        }
        let images = domain.basis().iter().map(|b| b.substitute(gen_images)).collect();
        FreeComm::new(domain, images)
    }

    pub fn identity(k: usize) -> FreeComm {
        let whole = SubgroupGraph::whole(k);
        let images = whole.basis().to_vec();
        FreeComm::new(whole, images).expect("identity")
    }

    /// Conjugation `x ↦ g x g⁻¹` on all of F_k.
    pub fn inner(k: usize, g: &Word) -> Result<FreeComm> {
        let whole = SubgroupGraph::whole(k);
        let images: Vec<Word> = whole.basis().iter().map(|b| b.conjugate_by(g)).collect();
        FreeComm::new(whole, images)
    }

    pub fn rank(&self) -> usize {
        self.domain.rank()
    }

    pub fn domain(&self) -> &SubgroupGraph {
        &self.domain
    }

    pub fn codomain(&self) -> &SubgroupGraph {
        &self.codomain
    }

    /// Images of `domain().basis()`, in order.
    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        let e = self
            .domain
            .express(w)
            .ok_or_else(|| Error::Precondition(format!("{w} is not in the domain")))?;
        Ok(e.substitute(&self.images))
    }

    /// `{ h ∈ domain : φ(h) ∈ l }`, built as the based component of the
    /// graph whose vertices pair a domain coset with an `l` coset: crossing
    /// a Schreier edge of the domain moves the `l` coordinate by the image
    /// of that basis element, tree edges leave it fixed.
    pub fn preimage(&self, l: &SubgroupGraph) -> Result<SubgroupGraph> {
        l.require_complete()?;
        let k = self.rank();
        let inv_images: Vec<Word> = self.images.iter().map(|w| w.inverse()).collect();
        let mut id: HashMap<(usize, usize), u32> = HashMap::from([((0, 0), 0)]);
        let mut pairs = vec![(0usize, 0usize)];
        let mut targets: Vec<Vec<Option<u32>>> = vec![Vec::new(); 2 * k];
        let mut head = 0;
        while head < pairs.len() {
            let (v, c) = pairs[head];
            head += 1;
            for (label, t) in targets.iter_mut().enumerate() {
                let letter = Letter::from_label(label);
                let v2 = self.domain.target(v, letter).expect("complete domain");
                let step = if letter.is_inverse() {
                    self.domain
                        .edge_basis_index(v2, letter.index())
                        .map(|b| &inv_images[b])
                } else {
                    self.domain
                        .edge_basis_index(v, letter.index())
                        .map(|b| &self.images[b])
                };
                let c2 = match step {
                    Some(w) => l.trace(c, w).expect("complete target"),
                    None => c,
                };
                let next = pairs.len() as u32;
                let n = *id.entry((v2, c2)).or_insert_with(|| {
                    pairs.push((v2, c2));
                    next
                });
                t.push(Some(n));
            }
            limits::check(pairs.len() as u64, || {
                format!("pullback graph exceeded {} vertices", pairs.len())
            })?;
        }
        Ok(SubgroupGraph::canonicalize(k, targets).0)
    }

    /// `φ(l)` for `l ≤ domain`.
    pub fn image(&self, l: &SubgroupGraph) -> Result<SubgroupGraph> {
        if !l.is_subgroup_of(&self.domain)? {
            return Err(Error::NotSubgroup(format!("{l} is not inside the domain")));
        }
        let imgs: Vec<Word> = l
            .basis()
            .iter()
            .map(|b| self.apply(b))
            .collect::<Result<_>>()?;
        SubgroupGraph::from_generators(self.domain.alphabet(), &imgs)
    }

    /// `self ∘ other` on `other⁻¹(other.codomain ∩ self.domain)`.
    pub fn compose(&self, other: &FreeComm) -> Result<FreeComm> {
        if self.rank() != other.rank() {
            return Err(Error::GroupMismatch(format!(
                "F {} vs F {}",
                self.rank(),
                other.rank()
            )));
        }
        let meet = other.codomain.intersect(&self.domain)?;
        let domain = other.preimage(&meet)?;
        let images = domain
            .basis()
            .iter()
            .map(|b| self.apply(&other.apply(b)?))
            .collect::<Result<Vec<_>>>()?;
        FreeComm::new(domain, images)
    }

    /// The inverse `K → H`: tagged folding of the images recovers, for each
    /// basis word of `K`, a word in the images, hence in the domain basis.
    pub fn invert(&self) -> Result<FreeComm> {
        let folded = fold_words(self.rank(), &self.images);
        let domain_basis = self.domain.basis();
        let images = self
            .codomain
            .basis()
            .iter()
            .map(|y| {
                let mut v = 0;
                let mut pre = Word::identity();
                for &l in y.letters() {
                    pre = pre.mul(folded.tags[l.label()][v].as_ref().expect("complete"));
                    v = folded.graph.target(v, l).expect("complete");
                }
                pre.substitute(domain_basis)
            })
            .collect();
        FreeComm::new(self.codomain.clone(), images)
    }

    pub fn restrict(&self, sub: &SubgroupGraph) -> Result<FreeComm> {
        sub.require_complete()?;
        if !sub.is_subgroup_of(&self.domain)? {
            return Err(Error::NotSubgroup(format!(
                "{sub} is not a subgroup of the domain {}",
                self.domain
            )));
        }
        let images = sub
            .basis()
            .iter()
            .map(|b| self.apply(b))
            .collect::<Result<Vec<_>>>()?;
        FreeComm::new(sub.clone(), images)
    }

    /// Agreement on a basis of the intersection of the domains.
    pub fn equivalent(&self, other: &FreeComm) -> Result<bool> {
        let meet = self.domain.intersect(&other.domain)?;
        for b in meet.basis() {
            if self.apply(b)? != other.apply(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freewords::Alphabet;

    fn f2() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    fn w(s: &str) -> Word {
        f2().parse_word(s).unwrap()
    }

    fn sub(ws: &[&str]) -> SubgroupGraph {
        let words: Vec<Word> = ws.iter().map(|s| w(s)).collect();
        SubgroupGraph::from_generators(f2(), &words).unwrap()
    }

    fn endo(a: &str, b: &str) -> FreeComm {
        FreeComm::from_endomorphism(SubgroupGraph::whole(2), &[w(a), w(b)]).unwrap()
    }

    #[test]
    fn swap_squares_to_identity() {
        let swap = endo("b", "a");
        let sq = swap.compose(&swap).unwrap();
        assert!(sq.equivalent(&FreeComm::identity(2)).unwrap());
        assert!(!swap.equivalent(&FreeComm::identity(2)).unwrap());
    }

    #[test]
    fn inner_conjugates() {
        let c = FreeComm::inner(2, &w("ab")).unwrap();
        assert_eq!(c.apply(&w("a")).unwrap(), w("ab").mul(&w("a")).mul(&w("BA")));
        assert!(FreeComm::inner(2, &Word::identity())
            .unwrap()
            .equivalent(&FreeComm::identity(2))
            .unwrap());
    }

    #[test]
    fn restriction_round_trip() {
        let ka = sub(&["aa", "b", "abA"]);
        let phi = endo("ab", "b").restrict(&ka).unwrap();
        assert_eq!(phi.codomain().index().unwrap(), 2);
        let inv = phi.invert().unwrap();
        assert_eq!(inv.domain(), phi.codomain());
        assert_eq!(inv.codomain(), phi.domain());
        for b in phi.domain().basis() {
            assert_eq!(&inv.apply(&phi.apply(b).unwrap()).unwrap(), b);
        }
        assert!(phi.compose(&inv).unwrap().equivalent(&FreeComm::identity(2)).unwrap());
        assert!(inv.compose(&phi).unwrap().equivalent(&FreeComm::identity(2)).unwrap());
        assert!(phi.equivalent(&endo("ab", "b")).unwrap());
    }

    #[test]
    fn rejects_non_isomorphisms() {
        let whole = SubgroupGraph::whole(2);
        assert!(matches!(
            FreeComm::from_endomorphism(whole.clone(), &[w("a"), w("a")]),
            Err(Error::InfiniteIndex(_)) | Err(Error::NotIsomorphism(_))
        ));
        assert!(matches!(
            FreeComm::from_endomorphism(whole.clone(), &[w("aa"), w("b")]),
            Err(Error::InfiniteIndex(_))
        ));
        // ab, b generate F_2 but a -> a, b -> 1 is not injective
        assert!(FreeComm::from_endomorphism(whole, &[w("a"), Word::identity()]).is_err());
        let ka = sub(&["aa", "b", "abA"]);
        assert!(matches!(
            endo("b", "a").restrict(&SubgroupGraph::whole(2)).unwrap().restrict(&ka).map(|_| ()),
            Ok(())
        ));
        assert!(matches!(
            FreeComm::identity(2).restrict(&ka).unwrap().restrict(&SubgroupGraph::whole(2)),
            Err(Error::NotSubgroup(_))
        ));
    }

    #[test]
    fn preimage_matches_membership() {
        let ka = sub(&["aa", "b", "abA"]);
        let kb = sub(&["bb", "a", "baB"]);
        let phi = endo("ab", "b").restrict(&ka).unwrap();
        let pre = phi.preimage(&kb).unwrap();
        for g in f2().ball(6) {
            let expect = ka.contains(&g) && kb.contains(&phi.apply(&g).unwrap());
            assert_eq!(pre.contains(&g), expect, "{g}");
        }
    }

    #[test]
    fn partial_maps_between_kernels() {
        let ka = sub(&["aa", "b", "abA"]);
        let kb = sub(&["bb", "a", "baB"]);
        // a basis permutation of ka that does not extend to F_2
        let perm: Vec<Word> = {
            let mut b = ka.basis().to_vec();
            b.swap(0, 1);
            b
        };
        let p = FreeComm::new(ka.clone(), perm).unwrap();
        assert_eq!(p.codomain(), &ka);
        let swap = endo("b", "a").restrict(&ka).unwrap();
        assert_eq!(swap.codomain(), &kb);
        let back = swap.invert().unwrap();
        assert!(back.compose(&swap).unwrap().equivalent(&FreeComm::identity(2)).unwrap());
    }
}
