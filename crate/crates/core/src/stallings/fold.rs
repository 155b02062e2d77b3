//! Stallings folding with preimage tags.
//!
//! Each edge carries a tag in the free group on the input generators
//! (`e_1 .. e_r`). The invariant maintained through every fold is: reading
//! a closed path at the base vertex, the product of the tags is an element
//! of F(e_1..e_r) mapping to the word spelled by the path. When two edges
//! are folded their tags are reconciled by re-tagging the star of the
//! vertex that disappears (never the base, which would conjugate loops).
//! A fold between parallel edges with different tags exposes a nontrivial
//! kernel of `e_i ↦ w_i`.

use crate::freewords::{Letter, Word};

use super::SubgroupGraph;

#[derive(Clone, Debug)]
struct Edge {
    src: usize,
    dst: usize,
    gen: usize,
    tag: Word,
    alive: bool,
}

/// Outcome of a tagged fold.
pub(crate) struct Folded {
    pub graph: SubgroupGraph,
    /// `tags[label][v]`: tag read when leaving canonical vertex `v` along `label`.
    pub tags: Vec<Vec<Option<Word>>>,
    /// Kernel elements detected while folding (nonempty iff `e_i ↦ w_i` is not injective).
    pub kernel: Vec<Word>,
}

pub(crate) fn fold_words(rank: usize, words: &[Word]) -> Folded {
    let mut edges: Vec<Edge> = Vec::new();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new()];
    let mut alive_vertex = vec![true];
    let mut kernel = Vec::new();

    for (i, w) in words.iter().enumerate() {
        if w.is_identity() {
            kernel.push(Word::letter(Letter::generator(i)));
            continue;
        }
        let letters = w.letters();
        let mut prev = 0usize;
        for (j, l) in letters.iter().enumerate() {
            let next = if j + 1 == letters.len() {
                0
            } else {
                incident.push(Vec::new());
                alive_vertex.push(true);
                incident.len() - 1
            };
            let tag = if j == 0 {
                Word::letter(Letter::generator(i))
            } else {
                Word::identity()
            };
            // store every edge along its positive generator direction
            let (src, dst, tag) = if l.is_inverse() {
                (next, prev, tag.inverse())
            } else {
                (prev, next, tag)
            };
            let id = edges.len();
            edges.push(Edge {
                src,
                dst,
                gen: l.index(),
                tag,
                alive: true,
            });
            incident[src].push(id);
            if dst != src {
                incident[dst].push(id);
            }
            prev = next;
        }
    }

    let mut stack: Vec<usize> = (0..incident.len()).collect();
    while let Some(u) = stack.pop() {
        if !alive_vertex[u] {
            continue;
        }
        // oriented half-edges leaving u: (label, edge, other end, oriented tag)
        let mut seen: Vec<Option<(usize, usize, Word)>> = vec![None; 2 * rank];
        let mut conflict = None;
        incident[u].retain(|&e| edges[e].alive);
        incident[u].sort_unstable();
        incident[u].dedup();
        'scan: for &e in &incident[u] {
            let ed = &edges[e];
            let mut halves = Vec::with_capacity(2);
            if ed.src == u {
                halves.push((2 * ed.gen, ed.dst, ed.tag.clone()));
            }
            if ed.dst == u {
                halves.push((2 * ed.gen + 1, ed.src, ed.tag.inverse()));
            }
            for (label, other, tag) in halves {
                match &seen[label] {
                    None => seen[label] = Some((e, other, tag)),
                    Some((e1, v, t1)) => {
                        conflict = Some((*e1, *v, t1.clone(), e, other, tag));
                        break 'scan;
                    }
                }
            }
        }
        let Some((e1, v, t1, e2, w, t2)) = conflict else {
            continue;
        };
        if v == w {
            if t1 != t2 {
                kernel.push(t1.mul(&t2.inverse()));
            }
            edges[e2].alive = false;
            stack.push(u);
            stack.push(v);
            continue;
        }
        // eliminate a non-base endpoint, re-tagging its star
        let (gone, keep, z, dead_edge) = if w != 0 {
            (w, v, t2.inverse().mul(&t1), e2)
        } else {
            (v, w, t1.inverse().mul(&t2), e1)
        };
        edges[dead_edge].alive = false;
        let star = std::mem::take(&mut incident[gone]);
        let zi = z.inverse();
        for &e in &star {
            let ed = &mut edges[e];
            if !ed.alive {
                continue;
            }
            if ed.src == gone {
                ed.tag = zi.mul(&ed.tag);
                ed.src = keep;
            }
            if ed.dst == gone {
                ed.tag = ed.tag.mul(&z);
                ed.dst = keep;
            }
            incident[keep].push(e);
        }
        alive_vertex[gone] = false;
        stack.push(keep);
        stack.push(u);
        // endpoints of moved edges may now see new conflicts
        for &e in &star {
            if edges[e].alive {
                stack.push(edges[e].src);
                stack.push(edges[e].dst);
            }
        }
    }

    // assemble the raw graph over surviving vertices, then canonicalize
    let alive: Vec<usize> = (0..incident.len()).filter(|&v| alive_vertex[v]).collect();
    let mut pos = vec![usize::MAX; incident.len()];
    for (i, &v) in alive.iter().enumerate() {
        pos[v] = i;
    }
    let m = alive.len();
    let mut targets = vec![vec![None; m]; 2 * rank];
    let mut tags = vec![vec![None; m]; 2 * rank];
    for ed in edges.iter().filter(|e| e.alive) {
        let (s, d) = (pos[ed.src], pos[ed.dst]);
        targets[2 * ed.gen][s] = Some(d as u32);
        tags[2 * ed.gen][s] = Some(ed.tag.clone());
        targets[2 * ed.gen + 1][d] = Some(s as u32);
        tags[2 * ed.gen + 1][d] = Some(ed.tag.inverse());
    }
    let (graph, order) = SubgroupGraph::canonicalize(rank, targets);
    let mut canon_tags = vec![vec![None; graph.vertex_count()]; 2 * rank];
    for (new, &old) in order.iter().enumerate() {
        for l in 0..2 * rank {
            canon_tags[l][new] = tags[l][old].take();
        }
    }
    Folded {
        graph,
        tags: canon_tags,
        kernel,
    }
}
