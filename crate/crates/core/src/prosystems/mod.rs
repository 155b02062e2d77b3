//! Truncated inverse systems of finite-index subgroups and their morphisms.
//!
//! Objects are the subgroups of index at most `N`, ordered by reverse
//! inclusion. A morphism assigns to each target object `G_μ` a source
//! subgroup and a commensuration from it into `G_μ`; morphisms are kept
//! strictly commuting with the inclusions.

mod dump;

use std::collections::HashMap;
use std::sync::Arc;

pub use dump::{format_morphism, format_system, parse_morphism, parse_system};

use crate::commensurations::Commensuration;
use crate::error::{Error, Result};
use crate::group::{GroupTag, Subgroup};

#[derive(Clone, Debug)]
pub struct TruncatedSystem {
    tag: GroupTag,
    depth: usize,
    objects: Vec<Subgroup>,
    index_of: HashMap<Subgroup, usize>,
    bonds: Vec<(usize, usize)>,
    flagged: Vec<(usize, usize)>,
}

impl PartialEq for TruncatedSystem {
    fn eq(&self, other: &Self) -> bool {
        self.tag == other.tag && self.depth == other.depth && self.objects == other.objects
    }
}

impl Eq for TruncatedSystem {}

impl TruncatedSystem {
    /// All subgroups of index at most `depth`.
    pub fn build(tag: GroupTag, depth: usize) -> Result<TruncatedSystem> {
        if depth == 0 {
            return Err(Error::Precondition("depth must be at least 1".into()));
        }
        Self::from_objects(tag, depth, tag.enumerate(depth)?)
    }

    /// A system on a chosen family of objects (kept in the given order).
    /// Bond `(i, j)` records the inclusion `G_j ⊆ G_i`, reflexive pairs
    /// included; flagged pairs have a meet of index above `depth`.
    pub fn from_objects(tag: GroupTag, depth: usize, objects: Vec<Subgroup>) -> Result<TruncatedSystem> {
        let mut index_of = HashMap::new();
        for (i, o) in objects.iter().enumerate() {
            tag.check_same(&o.tag())?;
            if index_of.insert(o.clone(), i).is_some() {
                return Err(Error::Precondition(format!("object {o} listed twice")));
            }
        }
        let mut bonds = Vec::new();
        let mut flagged = Vec::new();
        for (i, a) in objects.iter().enumerate() {
            for (j, b) in objects.iter().enumerate() {
                if b.is_subgroup_of(a)? {
                    bonds.push((i, j));
                }
                if i < j && a.intersect(b)?.index()? > depth as u64 {
                    flagged.push((i, j));
                }
            }
        }
        Ok(TruncatedSystem {
            tag,
            depth,
            objects,
            index_of,
            bonds,
            flagged,
        })
    }

    pub fn tag(&self) -> GroupTag {
        self.tag
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn objects(&self) -> &[Subgroup] {
        &self.objects
    }

    pub fn position(&self, s: &Subgroup) -> Option<usize> {
        self.index_of.get(s).copied()
    }

    /// All bonds `(i, j)` meaning `G_j ⊆ G_i`, including `i = j`.
    pub fn bonds(&self) -> &[(usize, usize)] {
        &self.bonds
    }

    pub fn proper_bonds(&self) -> Vec<(usize, usize)> {
        self.bonds.iter().copied().filter(|(i, j)| i != j).collect()
    }

    /// Pairs whose intersection lies beyond the truncation depth.
    pub fn flagged(&self) -> &[(usize, usize)] {
        &self.flagged
    }

    /// Deepest object containing `s` (largest index, first in order on ties).
    fn deepest_containing(&self, s: &Subgroup) -> Result<Option<usize>> {
        let mut best: Option<(u64, usize)> = None;
        for (i, o) in self.objects.iter().enumerate() {
            if s.is_subgroup_of(o)? {
                let idx = o.index()?;
                if best.map_or(true, |(b, _)| idx > b) {
                    best = Some((idx, i));
                }
            }
        }
        Ok(best.map(|(_, i)| i))
    }
}

/// The component of a morphism at one target object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub target: usize,
    pub source: Subgroup,
    /// Position of `source` among the source system's objects, if it is one.
    pub source_object: Option<usize>,
    /// `source → image ⊆ G_target`.
    pub map: Commensuration,
}

#[derive(Clone, Debug)]
pub struct SystemMorphism {
    source: Arc<TruncatedSystem>,
    target: Arc<TruncatedSystem>,
    components: Vec<Component>,
}

impl PartialEq for SystemMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.components == other.components
    }
}

impl SystemMorphism {
    /// Assembles and validates a morphism from one component per target object.
    pub fn new(
        source: Arc<TruncatedSystem>,
        target: Arc<TruncatedSystem>,
        components: Vec<Component>,
    ) -> Result<SystemMorphism> {
        source.tag.check_same(&target.tag)?;
        if components.len() != target.objects.len() {
            return Err(Error::DimensionMismatch {
                expected: target.objects.len(),
                found: components.len(),
            });
        }
        for (mu, c) in components.iter().enumerate() {
            if c.target != mu || c.map.domain() != c.source {
                return Err(Error::Precondition(format!("component {mu} is malformed")));
            }
            if c.source_object != source.position(&c.source) {
                return Err(Error::Precondition(format!(
                    "component {mu} has a wrong source object index"
                )));
            }
            if !c.map.codomain().is_subgroup_of(&target.objects[mu])? {
                return Err(Error::Precondition(format!(
                    "component {mu} does not land in object {mu}"
                )));
            }
        }
        let m = SystemMorphism {
            source,
            target,
            components,
        };
        m.check_commutes()?;
        Ok(m)
    }

    pub fn source(&self) -> &Arc<TruncatedSystem> {
        &self.source
    }

    pub fn target(&self) -> &Arc<TruncatedSystem> {
        &self.target
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// Sources that are not objects of the source system (materialized beyond depth).
    pub fn materialized(&self) -> Vec<&Subgroup> {
        self.components
            .iter()
            .filter(|c| c.source_object.is_none())
            .map(|c| &c.source)
            .collect()
    }

    /// Strict commutation with every bond `G_j ⊆ G_i` of the target:
    /// `source_j ⊆ source_i` and `f_i` agrees with `f_j` on a basis of `source_j`.
    pub fn check_commutes(&self) -> Result<()> {
        for &(i, j) in self.target.bonds() {
            if i == j {
                continue;
            }
            let (ci, cj) = (&self.components[i], &self.components[j]);
            if !cj.source.is_subgroup_of(&ci.source)? {
                return Err(Error::Precondition(format!(
                    "bond {i} {j}: source of component {j} is not inside source of component {i}"
                )));
            }
            for b in cj.source.basis() {
                if ci.map.apply(&b)? != cj.map.apply(&b)? {
                    return Err(Error::Precondition(format!(
                        "bond {i} {j}: components disagree on {b}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn identity(system: Arc<TruncatedSystem>) -> Result<SystemMorphism> {
        let id = Commensuration::identity(system.tag);
        let components = system
            .objects
            .iter()
            .enumerate()
            .map(|(mu, o)| {
                Ok(Component {
                    target: mu,
                    source: o.clone(),
                    source_object: Some(mu),
                    map: id.restrict(o)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        SystemMorphism::new(system.clone(), system, components)
    }

    /// `self ∘ other`, chasing index functions. A source of `self` that is
    /// not an object of the middle system is handled through the deepest
    /// middle object containing it.
    pub fn compose(&self, other: &SystemMorphism) -> Result<SystemMorphism> {
        if *other.target != *self.source {
            return Err(Error::Precondition("morphisms are not composable".into()));
        }
        let components = self
            .components
            .iter()
            .map(|c| {
                let j = match c.source_object {
                    Some(j) => j,
                    None => self.source.deepest_containing(&c.source)?.ok_or_else(|| {
                        Error::Precondition(format!("no object contains {}", c.source))
                    })?,
                };
                let map = c.map.compose(&other.components[j].map)?;
                let source = map.domain();
                Ok(Component {
                    target: c.target,
                    source_object: other.source.position(&source),
                    source,
                    map,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        SystemMorphism::new(other.source.clone(), self.target.clone(), components)
    }

    /// Componentwise agreement on the intersection of the two sources.
    pub fn equivalent(&self, other: &SystemMorphism) -> Result<bool> {
        if *self.target != *other.target || *self.source != *other.source {
            return Ok(false);
        }
        for (a, b) in self.components.iter().zip(&other.components) {
            if !a.map.equivalent(&b.map)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `ζ(φ)`: at each object `G_λ`, `φ` restricted to `φ⁻¹(G_λ ∩ K)`.
pub fn zeta(phi: &Commensuration, system: Arc<TruncatedSystem>) -> Result<SystemMorphism> {
    system.tag.check_same(&phi.tag())?;
    let k = phi.codomain();
    let components = system
        .objects
        .iter()
        .enumerate()
        .map(|(mu, o)| {
            let source = phi.preimage(&o.intersect(&k)?)?;
            Ok(Component {
                target: mu,
                source_object: system.position(&source),
                map: phi.restrict(&source)?,
                source,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    SystemMorphism::new(system.clone(), system, components)
}

/// The commensuration carried by the component at the whole group.
pub fn reconstruct(m: &SystemMorphism) -> Result<Commensuration> {
    let top = m
        .target
        .objects
        .iter()
        .position(|o| o.is_whole())
        .ok_or_else(|| Error::NotProAutomorphism("the system has no top object".into()))?;
    let c = &m.components[top];
    c.map.codomain().index().map_err(|e| {
        Error::NotProAutomorphism(format!("top component image is not of finite index: {e}"))
    })?;
    Ok(c.map.clone())
}

/// Outcome of restricting to a cofinal family of objects.
#[derive(Clone, Debug)]
pub struct CofinalRestriction {
    pub subsystem: Arc<TruncatedSystem>,
    /// `X → X^M`: each selected object maps identically to itself.
    pub restriction: SystemMorphism,
    /// `X^M → X`: each object receives the inclusion of a selected object or
    /// of its meet with one.
    pub inverse: SystemMorphism,
}

/// Restricts to the objects satisfying `keep`. An object is covered when a
/// selected object lies inside it, or when its meet with a selected object
/// (possibly beyond depth) itself satisfies `keep`.
pub fn cofinal_restrict(
    system: Arc<TruncatedSystem>,
    keep: impl Fn(&Subgroup) -> bool,
) -> Result<CofinalRestriction> {
    let selected: Vec<usize> = (0..system.objects.len())
        .filter(|&i| keep(&system.objects[i]))
        .collect();
    let mut cover: Vec<Subgroup> = Vec::with_capacity(system.objects.len());
    for (i, o) in system.objects.iter().enumerate() {
        let mut inside = None;
        for &s in &selected {
            if system.objects[s].is_subgroup_of(o)? {
                inside = Some(system.objects[s].clone());
                break;
            }
        }
        if inside.is_none() {
            for &s in &selected {
                let meet = system.objects[s].intersect(o)?;
                if keep(&meet) {
                    inside = Some(meet);
                    break;
                }
            }
        }
        match inside {
            Some(c) => cover.push(c),
            None => {
                return Err(Error::NotCofinal(format!(
                    "object {i} ({o}) contains no selected subgroup"
                )))
            }
        }
    }
    let sub = Arc::new(TruncatedSystem::from_objects(
        system.tag,
        system.depth,
        selected.iter().map(|&i| system.objects[i].clone()).collect(),
    )?);
    let id = Commensuration::identity(system.tag);
    let restriction = SystemMorphism::new(
        system.clone(),
        sub.clone(),
        sub.objects
            .iter()
            .enumerate()
            .map(|(mu, o)| {
                Ok(Component {
                    target: mu,
                    source: o.clone(),
                    source_object: system.position(o),
                    map: id.restrict(o)?,
                })
            })
            .collect::<Result<Vec<_>>>()?,
    );
    // Straighten the inverse: the source at each object is the meet of the
    // covers of all objects containing it, so sources shrink along bonds.
    let mut sources = cover.clone();
    for &(i, j) in system.bonds() {
        if i != j {
            sources[j] = sources[j].intersect(&cover[i])?;
        }
    }
    let inverse = SystemMorphism::new(
        sub.clone(),
        system.clone(),
        sources
            .into_iter()
            .enumerate()
            .map(|(mu, s)| {
                Ok(Component {
                    target: mu,
                    source_object: sub.position(&s),
                    map: id.restrict(&s)?,
                    source: s,
                })
            })
            .collect::<Result<Vec<_>>>()?,
    );
    Ok(CofinalRestriction {
        subsystem: sub,
        restriction: restriction?,
        inverse: inverse?,
    })
}

#[cfg(test)]
mod tests;
