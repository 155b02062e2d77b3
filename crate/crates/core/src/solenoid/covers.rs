//! Finite covers of the rose (and of the torus), covering maps between
//! them, and lifts of commensurations through covers.

use std::collections::HashMap;

use crate::commensurations::Commensuration;
use crate::error::{Error, Result};
use crate::group::{CosetKey, Element, GroupTag, Subgroup};

/// The cover `X_H`: one vertex per right coset `H·g`, one edge per vertex
/// and generator.
#[derive(Clone, Debug)]
pub struct CoverGraph {
    subgroup: Subgroup,
    reps: Vec<Element>,
    keys: HashMap<CosetKey, usize>,
}

impl PartialEq for CoverGraph {
    fn eq(&self, other: &Self) -> bool {
        self.subgroup == other.subgroup
    }
}

impl CoverGraph {
    pub fn new(subgroup: Subgroup) -> Result<CoverGraph> {
        let reps = subgroup.coset_representatives()?;
        let keys = reps
            .iter()
            .enumerate()
            .map(|(i, r)| Ok((subgroup.coset_key(r)?, i)))
            .collect::<Result<HashMap<_, _>>>()?;
        Ok(CoverGraph {
            subgroup,
            reps,
            keys,
        })
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn tag(&self) -> GroupTag {
        self.subgroup.tag()
    }

    pub fn sheets(&self) -> usize {
        self.reps.len()
    }

    /// Canonical representative of the coset at vertex `v`.
    pub fn rep(&self, v: usize) -> &Element {
        &self.reps[v]
    }

    pub fn vertex_of(&self, g: &Element) -> usize {
        let key = self.subgroup.coset_key(g).expect("element of the ambient group");
        self.keys[&key]
    }

    /// End of the path `x` read from vertex `v`.
    pub fn act(&self, v: usize, x: &Element) -> usize {
        self.vertex_of(&self.reps[v].mul(x))
    }

    /// `targets[v][i]`: end of the edge leaving `v` along generator `i`.
    pub fn edge_table(&self) -> Vec<Vec<usize>> {
        let gens = self.tag().generators();
        (0..self.sheets())
            .map(|v| gens.iter().map(|x| self.act(v, x)).collect())
            .collect()
    }
}

pub fn cover_of(h: &Subgroup) -> Result<CoverGraph> {
    CoverGraph::new(h.clone())
}

/// The covering projection `X_H → X_K` for `H ≤ K`.
#[derive(Clone, Debug)]
pub struct CoveringMap {
    source: CoverGraph,
    target: CoverGraph,
    vertex_map: Vec<usize>,
}

impl CoveringMap {
    pub fn source(&self) -> &CoverGraph {
        &self.source
    }

    pub fn target(&self) -> &CoverGraph {
        &self.target
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    /// `self ∘ inner` for `inner: X_H → X_K` and `self: X_K → X_L`.
    pub fn compose(&self, inner: &CoveringMap) -> Result<CoveringMap> {
        if inner.target != self.source {
            return Err(Error::Precondition("covering maps are not composable".into()));
        }
        Ok(CoveringMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            vertex_map: inner.vertex_map.iter().map(|&v| self.vertex_map[v]).collect(),
        })
    }
}

pub fn covering_map(h: &Subgroup, k: &Subgroup) -> Result<CoveringMap> {
    if !h.is_subgroup_of(k)? {
        return Err(Error::NotSubgroup(format!("{h} is not contained in {k}")));
    }
    let source = CoverGraph::new(h.clone())?;
    let target = CoverGraph::new(k.clone())?;
    let vertex_map: Vec<usize> = (0..source.sheets())
        .map(|v| target.vertex_of(source.rep(v)))
        .collect();
    let (es, et) = (source.edge_table(), target.edge_table());
    for (v, row) in es.iter().enumerate() {
        for (i, &w) in row.iter().enumerate() {
            assert_eq!(vertex_map[w], et[vertex_map[v]][i], "covering map preserves labels");
        }
    }
    Ok(CoveringMap {
        source,
        target,
        vertex_map,
    })
}

/// A lift `X_H → X_K` of the map of bases induced by a commensuration `φ`
/// with `H ≤ dom φ` and `φ(H) ≤ K`.
///
/// Writing `D = dom φ`, each vertex of `X_D` with coset representative
/// `t_v` gets the offset `c(v) = φ(p_v)` where `p_v` is the closest point of
/// `D` to `t_v`. The edge `v --x--> v'` of `X_D` is sent to the path
/// `c(v)⁻¹ φ(t_v x t_v'⁻¹) c(v')`, and a vertex `H·s` of `X_H` over `v` goes
/// to `K·φ(s t_v⁻¹) c(v)`. When `D` is the whole group this is the usual
/// lift of the graph map `x ↦ φ(x)` of the rose.
#[derive(Clone, Debug)]
pub struct Lift {
    phi: Commensuration,
    domain_cover: CoverGraph,
    source: CoverGraph,
    target: CoverGraph,
    offsets: Vec<Element>,
    /// `edge_paths[v][i]` for the edge of `X_D` leaving `v` along generator `i`.
    edge_paths: Vec<Vec<Element>>,
    vertex_map: Vec<usize>,
}

pub fn lift_through_covers(phi: &Commensuration, h: &Subgroup, k: &Subgroup) -> Result<Lift> {
    let d = phi.domain();
    if !h.is_subgroup_of(&d)? {
        return Err(Error::NotSubgroup(format!("{h} is not inside the domain {d}")));
    }
    for b in h.basis() {
        let img = phi.apply(&b)?;
        if !k.contains(&img)? {
            return Err(Error::NoLift(format!(
                "basis element {b} maps to {img}, which is not in {k}"
            )));
        }
    }
    let domain_cover = CoverGraph::new(d.clone())?;
    let source = CoverGraph::new(h.clone())?;
    let target = CoverGraph::new(k.clone())?;
    let gens = phi.tag().generators();
    let offsets = (0..domain_cover.sheets())
        .map(|v| phi.apply(&d.closest_point(domain_cover.rep(v))?))
        .collect::<Result<Vec<_>>>()?;
    let edge_paths = (0..domain_cover.sheets())
        .map(|v| {
            gens.iter()
                .map(|x| {
                    let v2 = domain_cover.act(v, x);
                    let loop_elt = domain_cover
                        .rep(v)
                        .mul(x)
                        .mul(&domain_cover.rep(v2).inverse());
                    Ok(offsets[v]
                        .inverse()
                        .mul(&phi.apply(&loop_elt)?)
                        .mul(&offsets[v2]))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let vertex_map = (0..source.sheets())
        .map(|u| {
            let s = source.rep(u);
            let v = domain_cover.vertex_of(s);
            let inside = s.mul(&domain_cover.rep(v).inverse());
            Ok(target.vertex_of(&phi.apply(&inside)?.mul(&offsets[v])))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Lift {
        phi: phi.clone(),
        domain_cover,
        source,
        target,
        offsets,
        edge_paths,
        vertex_map,
    })
}

impl Lift {
    pub fn commensuration(&self) -> &Commensuration {
        &self.phi
    }

    pub fn source(&self) -> &CoverGraph {
        &self.source
    }

    pub fn target(&self) -> &CoverGraph {
        &self.target
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    /// Offsets `c(v)` for the vertices of `X_D`.
    pub fn offsets(&self) -> &[Element] {
        &self.offsets
    }

    /// Image path of the edge of `X_D` leaving `v` along generator `i`.
    pub fn edge_path(&self, v: usize, i: usize) -> &Element {
        &self.edge_paths[v][i]
    }

    /// Image of the edge path of `g` from the base, read in the universal
    /// cover of the target: the product of the edge images along the way.
    pub fn path_image(&self, g: &Element) -> Element {
        let tag = self.phi.tag();
        let mut v = 0usize;
        let mut acc = tag.identity();
        for (i, positive) in steps(g) {
            let x = &tag.generators()[i];
            if positive {
                acc = acc.mul(&self.edge_paths[v][i]);
                v = self.domain_cover.act(v, x);
            } else {
                v = self.domain_cover.act(v, &x.inverse());
                acc = acc.mul(&self.edge_paths[v][i].inverse());
            }
        }
        self.offsets[0].mul(&acc)
    }

    /// Propagates the lift from the basepoint along a spanning tree of
    /// `X_H` (breadth-first, generators in the given order) and checks that
    /// it agrees with the closed-form vertex map on every vertex and edge.
    /// Since a label-equivariant lift is determined by its value along a
    /// spanning tree, agreement for two different trees shows uniqueness.
    pub fn verify_unique(&self) -> Result<()> {
        let gens = self.phi.tag().generators();
        let edges = self.source.edge_table();
        let over: Vec<usize> = (0..self.source.sheets())
            .map(|u| self.domain_cover.vertex_of(self.source.rep(u)))
            .collect();
        let mut back_edges = vec![vec![0usize; gens.len()]; edges.len()];
        for (u, row) in edges.iter().enumerate() {
            for (i, &u2) in row.iter().enumerate() {
                back_edges[u2][i] = u;
            }
        }
        let base = self.target.vertex_of(&self.phi.tag().identity());
        if self.vertex_map[0] != base {
            return Err(Error::NoLift("the lift does not preserve the basepoint".into()));
        }
        for order in [
            (0..gens.len()).collect::<Vec<_>>(),
            (0..gens.len()).rev().collect::<Vec<_>>(),
        ] {
            let mut image = vec![usize::MAX; self.source.sheets()];
            image[0] = base;
            let mut queue = std::collections::VecDeque::from([0usize]);
            while let Some(u) = queue.pop_front() {
                for &i in &order {
                    let u2 = edges[u][i];
                    if image[u2] == usize::MAX {
                        image[u2] = self.target.act(image[u], &self.edge_paths[over[u]][i]);
                        queue.push_back(u2);
                    }
                }
                for &i in &order {
                    let u0 = back_edges[u][i];
                    if image[u0] == usize::MAX {
                        let back = self.edge_paths[over[u0]][i].inverse();
                        image[u0] = self.target.act(image[u], &back);
                        queue.push_back(u0);
                    }
                }
            }
            if image != self.vertex_map {
                return Err(Error::NoLift("two spanning-tree lifts disagree".into()));
            }
        }
        for (u, row) in edges.iter().enumerate() {
            for (i, &u2) in row.iter().enumerate() {
                let end = self.target.act(self.vertex_map[u], &self.edge_paths[over[u]][i]);
                if end != self.vertex_map[u2] {
                    return Err(Error::NoLift(format!(
                        "edge {} --{}--> {} does not map to a path between the image vertices",
                        u + 1,
                        gens[i],
                        u2 + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The letters of `g` as (generator, positive) steps; unit steps for vectors.
pub(crate) fn steps(g: &Element) -> Vec<(usize, bool)> {
    match g {
        Element::Word(w) => w.letters().iter().map(|l| (l.index(), !l.is_inverse())).collect(),
        Element::Vector(v) => {
            let mut out = Vec::new();
            for (i, x) in v.0.iter().enumerate() {
                let n: i64 = num_traits::ToPrimitive::to_i64(x).expect("small vector");
                out.extend(std::iter::repeat((i, n > 0)).take(n.unsigned_abs() as usize));
            }
            out
        }
    }
}
