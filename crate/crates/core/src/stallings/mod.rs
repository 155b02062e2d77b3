//! Subgroups of F_k as based, folded, edge-labeled graphs (Stallings graphs).
//!
//! A graph is stored as one partial target table per letter label (`a, A,
//! b, B, ...`). Graphs are always kept in canonical form: vertices are
//! numbered by breadth-first search from the base exploring labels in letter
//! order, so two graphs are equal iff they represent the same subgroup.
//! Complete graphs (every generator acts as a permutation) are exactly the
//! finite-index subgroups, with index equal to the vertex count.

mod enumerate;
pub(crate) mod fold;

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::freewords::{Alphabet, Letter, Word};
use crate::limits;

pub use enumerate::{
    count_transitive_tuples, enumerate_subgroups, index_counts, profinite_kernel,
};

/// Spanning-tree data for the Schreier basis of a graph.
#[derive(Debug)]
struct Schreier {
    tree_words: Vec<Word>,
    /// `edge_basis[gen][v]`: basis index of the edge leaving `v` along `gen`, if not a tree edge.
    edge_basis: Vec<Vec<Option<usize>>>,
    basis: Vec<Word>,
}

pub struct SubgroupGraph {
    rank: usize,
    targets: Vec<Vec<Option<u32>>>,
    schreier: OnceLock<Arc<Schreier>>,
}

impl Clone for SubgroupGraph {
    fn clone(&self) -> Self {
        SubgroupGraph {
            rank: self.rank,
            targets: self.targets.clone(),
            schreier: self.schreier.clone(),
        }
    }
}

impl PartialEq for SubgroupGraph {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.targets == other.targets
    }
}

impl Eq for SubgroupGraph {}

impl Hash for SubgroupGraph {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rank.hash(state);
        self.targets.hash(state);
    }
}

impl PartialOrd for SubgroupGraph {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SubgroupGraph {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank
            .cmp(&other.rank)
            .then_with(|| self.vertex_count().cmp(&other.vertex_count()))
            .then_with(|| self.targets.cmp(&other.targets))
    }
}

impl fmt::Debug for SubgroupGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubgroupGraph({self})")
    }
}

impl SubgroupGraph {
    /// Relabels by BFS from vertex 0 and drops unreachable vertices. Returns
    /// the canonical graph and, for each new vertex, its old index.
    pub(crate) fn canonicalize(
        rank: usize,
        targets: Vec<Vec<Option<u32>>>,
    ) -> (SubgroupGraph, Vec<usize>) {
        let m = targets.first().map_or(1, |t| t.len()).max(1);
        let mut new_of = vec![u32::MAX; m];
        let mut order = vec![0usize];
        new_of[0] = 0;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for t in &targets {
                if let Some(w) = t[v] {
                    if new_of[w as usize] == u32::MAX {
                        new_of[w as usize] = order.len() as u32;
                        order.push(w as usize);
                    }
                }
            }
        }
        let canon = targets
            .iter()
            .map(|t| {
                order
                    .iter()
                    .map(|&old| t[old].map(|w| new_of[w as usize]))
                    .collect()
            })
            .collect();
        (
            SubgroupGraph {
                rank,
                targets: canon,
                schreier: OnceLock::new(),
            },
            order,
        )
    }

    /// The rose: the whole group F_k.
    pub fn whole(rank: usize) -> SubgroupGraph {
        SubgroupGraph {
            rank,
            targets: vec![vec![Some(0)]; 2 * rank],
            schreier: OnceLock::new(),
        }
    }

    /// Folded graph of the subgroup generated by `words`; may be incomplete.
    pub fn fold(alphabet: Alphabet, words: &[Word]) -> Result<SubgroupGraph> {
        for w in words {
            if !alphabet.contains(w) {
                return Err(Error::AlphabetMismatch(format!(
                    "{w} is not a word of F_{}",
                    alphabet.rank()
                )));
            }
        }
        Ok(fold::fold_words(alphabet.rank(), words).graph)
    }

    /// The finite-index subgroup generated by `words`, or an infinite-index error.
    pub fn from_generators(alphabet: Alphabet, words: &[Word]) -> Result<SubgroupGraph> {
        let g = Self::fold(alphabet, words)?;
        if g.is_complete() {
            Ok(g)
        } else {
            Err(Error::InfiniteIndex(format!(
                "folded graph of <{}> has {} vertices but is not a covering of the rose",
                words.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(", "),
                g.vertex_count()
            )))
        }
    }

    /// The subgroup whose coset action is given by one permutation of
    /// `0..m` per generator (the base is point 0). The action must be transitive.
    pub fn from_permutations(rank: usize, perms: &[Vec<u32>]) -> Result<SubgroupGraph> {
        if perms.len() != rank {
            return Err(Error::DimensionMismatch {
                expected: rank,
                found: perms.len(),
            });
        }
        let m = perms.first().map_or(1, |p| p.len());
        let mut targets = vec![vec![None; m]; 2 * rank];
        for (i, p) in perms.iter().enumerate() {
            let mut seen = vec![false; m];
            if p.len() != m {
                return Err(Error::Precondition("permutations of unequal size".into()));
            }
            for (v, &w) in p.iter().enumerate() {
                if w as usize >= m || seen[w as usize] {
                    return Err(Error::Precondition(format!(
                        "generator {i} does not act as a permutation of 1..{m}"
                    )));
                }
                seen[w as usize] = true;
                targets[2 * i][v] = Some(w);
                targets[2 * i + 1][w as usize] = Some(v as u32);
            }
        }
        let (g, order) = Self::canonicalize(rank, targets);
        if order.len() != m {
            return Err(Error::Precondition(
                "permutation action is not transitive".into(),
            ));
        }
        Ok(g)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::new(self.rank).expect("graph rank within 1..=26")
    }

    pub fn vertex_count(&self) -> usize {
        self.targets.first().map_or(1, |t| t.len())
    }

    pub fn is_complete(&self) -> bool {
        self.targets.iter().all(|t| t.iter().all(|x| x.is_some()))
    }

    pub fn index(&self) -> Result<usize> {
        if self.is_complete() {
            Ok(self.vertex_count())
        } else {
            Err(Error::InfiniteIndex(
                "graph is not complete, subgroup has infinite index".into(),
            ))
        }
    }

    pub(crate) fn require_complete(&self) -> Result<()> {
        self.index().map(|_| ())
    }

    pub fn target(&self, v: usize, l: Letter) -> Option<usize> {
        self.targets
            .get(l.label())
            .and_then(|t| t[v])
            .map(|w| w as usize)
    }

    /// Permutation of each generator (only for complete graphs).
    pub fn permutations(&self) -> Option<Vec<Vec<u32>>> {
        (0..self.rank)
            .map(|i| self.targets[2 * i].iter().copied().collect::<Option<Vec<u32>>>())
            .collect()
    }

    pub fn targets(&self) -> &[Vec<Option<u32>>] {
        &self.targets
    }

    pub fn trace(&self, start: usize, w: &Word) -> Option<usize> {
        w.letters()
            .iter()
            .try_fold(start, |v, &l| self.target(v, l))
    }

    /// Vertex reached by reading `w` from the base: the right coset `H·w`.
    pub fn coset_of(&self, w: &Word) -> Option<usize> {
        self.trace(0, w)
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.trace(0, w) == Some(0)
    }

    /// Fiber product: the based component of the product graph.
    pub fn intersect(&self, other: &SubgroupGraph) -> Result<SubgroupGraph> {
        if self.rank != other.rank {
            return Err(Error::AlphabetMismatch(format!(
                "intersecting subgroups of F_{} and F_{}",
                self.rank, other.rank
            )));
        }
        let mut id: HashMap<(u32, u32), u32> = HashMap::new();
        let mut pairs = vec![(0u32, 0u32)];
        id.insert((0, 0), 0);
        let mut targets: Vec<Vec<Option<u32>>> = vec![Vec::new(); 2 * self.rank];
        let mut head = 0;
        while head < pairs.len() {
            let (x, y) = pairs[head];
            head += 1;
            for (l, t) in targets.iter_mut().enumerate() {
                let nx = self.targets[l][x as usize];
                let ny = other.targets[l][y as usize];
                let entry = match (nx, ny) {
                    (Some(a), Some(b)) => {
                        let next = pairs.len() as u32;
                        let v = *id.entry((a, b)).or_insert_with(|| {
                            pairs.push((a, b));
                            next
                        });
                        Some(v)
                    }
                    _ => None,
                };
                t.push(entry);
            }
            limits::check(pairs.len() as u64, || {
                format!("fiber product exceeded {} vertices", pairs.len())
            })?;
        }
        Ok(Self::canonicalize(self.rank, targets).0)
    }

    /// `self ≤ other`: every generator of `self` reads a loop in `other`.
    pub fn is_subgroup_of(&self, other: &SubgroupGraph) -> Result<bool> {
        if self.rank != other.rank {
            return Err(Error::AlphabetMismatch(format!(
                "comparing subgroups of F_{} and F_{}",
                self.rank, other.rank
            )));
        }
        Ok(self.basis().iter().all(|w| other.contains(w)))
    }

    fn schreier(&self) -> &Arc<Schreier> {
        self.schreier.get_or_init(|| {
            let m = self.vertex_count();
            let mut tree_words = vec![None; m];
            let mut tree_edge = vec![vec![false; m]; self.rank];
            tree_words[0] = Some(Word::identity());
            let mut queue = VecDeque::from([0usize]);
            while let Some(v) = queue.pop_front() {
                for l in 0..2 * self.rank {
                    if let Some(w) = self.targets[l][v] {
                        let w = w as usize;
                        if tree_words[w].is_none() {
                            let letter = Letter::from_label(l);
                            let word = tree_words[v].as_ref().unwrap().mul(&Word::letter(letter));
                            tree_words[w] = Some(word);
                            // record the tree edge in its positive direction
                            let src = if letter.is_inverse() { w } else { v };
                            tree_edge[letter.index()][src] = true;
                            queue.push_back(w);
                        }
                    }
                }
            }
            let tree_words: Vec<Word> = tree_words.into_iter().map(|w| w.unwrap()).collect();
            let mut edge_basis = vec![vec![None; m]; self.rank];
            let mut basis = Vec::new();
            for v in 0..m {
                for g in 0..self.rank {
                    if let Some(w) = self.targets[2 * g][v] {
                        if !tree_edge[g][v] {
                            let word = tree_words[v]
                                .mul(&Word::letter(Letter::generator(g)))
                                .mul(&tree_words[w as usize].inverse());
                            edge_basis[g][v] = Some(basis.len());
                            basis.push(word);
                        }
                    }
                }
            }
            Arc::new(Schreier {
                tree_words,
                edge_basis,
                basis,
            })
        })
    }

    /// Schreier free basis from the canonical BFS spanning tree, ordered by
    /// (vertex, generator) of the defining non-tree edge.
    pub fn basis(&self) -> &[Word] {
        &self.schreier().basis
    }

    /// The BFS tree path from the base to `v` (a canonical coset representative).
    pub fn tree_word(&self, v: usize) -> &Word {
        &self.schreier().tree_words[v]
    }

    /// Writes an element of the subgroup as a word in the Schreier basis
    /// (generator `i` of the result stands for `basis()[i]`). `None` if `w`
    /// is not in the subgroup.
    pub fn express(&self, w: &Word) -> Option<Word> {
        let s = self.schreier();
        let mut v = 0usize;
        let mut out = Vec::new();
        for &l in w.letters() {
            let next = self.target(v, l)?;
            let (src, positive) = if l.is_inverse() { (next, false) } else { (v, true) };
            if let Some(b) = s.edge_basis[l.index()][src] {
                out.push(if positive {
                    Letter::generator(b)
                } else {
                    Letter::inverse_of_generator(b)
                });
            }
            v = next;
        }
        (v == 0).then(|| Word::from_letters(out))
    }

    /// Basis index of the edge leaving `v` along generator `gen`, or `None`
    /// for a tree edge.
    pub(crate) fn edge_basis_index(&self, v: usize, gen: usize) -> Option<usize> {
        self.schreier().edge_basis[gen][v]
    }

    /// Graph distance from every vertex to the base.
    pub fn distances_to_base(&self) -> Vec<usize> {
        let m = self.vertex_count();
        let mut dist = vec![usize::MAX; m];
        dist[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for t in &self.targets {
                if let Some(w) = t[v] {
                    if dist[w as usize] == usize::MAX {
                        dist[w as usize] = dist[v] + 1;
                        queue.push_back(w as usize);
                    }
                }
            }
        }
        dist
    }

    /// Nielsen–Schreier rank `m(k-1)+1` for a complete graph.
    pub fn expected_basis_len(&self) -> Result<usize> {
        Ok(self.index()? * (self.rank - 1) + 1)
    }

    /// Single-line form `F <k> graph <m> a=.. b=..` with 1-based targets and
    /// `-` for missing edges.
    pub fn to_line(&self) -> String {
        let mut s = format!("F {} graph {}", self.rank, self.vertex_count());
        for g in 0..self.rank {
            let c = Letter::generator(g).to_char().unwrap_or('?');
            let entries: Vec<String> = self.targets[2 * g]
                .iter()
                .map(|t| t.map_or("-".to_string(), |w| (w + 1).to_string()))
                .collect();
            s.push_str(&format!(" {c}={}", entries.join(",")));
        }
        s
    }
}

impl fmt::Display for SubgroupGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_line())
    }
}

#[cfg(test)]
mod tests;
