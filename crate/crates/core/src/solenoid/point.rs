//! The depth-N suspension model `G/K_N ×_G X̃` and its metrics.

use std::fmt;
use std::sync::Arc;

use super::covers::CoverGraph;
use super::kernels::KernelChain;
use super::leaf::{Leaf, LeafKind};
use super::real::ExactReal;
use crate::error::{Error, Result};
use crate::freewords::Alphabet;
use crate::group::{CosetKey, Element, GroupTag};
use crate::prosystems::TruncatedSystem;

/// A point `[γ, x]` in canonical form: `x` is the representative nearest
/// the base and `γ` is the canonical representative of its class mod `K_N`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct SolenoidPoint {
    pub gamma: Element,
    pub leaf: Leaf,
}

/// Everything needed to compute in the depth-`N` model.
#[derive(Clone, Debug)]
pub struct DepthModel {
    system: Arc<TruncatedSystem>,
    chain: KernelChain,
    sheets: CoverGraph,
}

impl DepthModel {
    pub fn build(tag: GroupTag, depth: usize) -> Result<DepthModel> {
        Self::from_system(Arc::new(TruncatedSystem::build(tag, depth)?))
    }

    pub fn from_system(system: Arc<TruncatedSystem>) -> Result<DepthModel> {
        let chain = KernelChain::from_system(&system)?;
        let sheets = CoverGraph::new(chain.deepest().clone())?;
        Ok(DepthModel {
            system,
            chain,
            sheets,
        })
    }

    pub fn tag(&self) -> GroupTag {
        self.system.tag()
    }

    pub fn depth(&self) -> usize {
        self.system.depth()
    }

    pub fn system(&self) -> &Arc<TruncatedSystem> {
        &self.system
    }

    pub fn chain(&self) -> &KernelChain {
        &self.chain
    }

    /// The finite cover `X_{K_N}`, one sheet per element of `G/K_N`.
    pub fn sheet_cover(&self) -> &CoverGraph {
        &self.sheets
    }

    pub fn sheet_count(&self) -> usize {
        self.sheets.sheets()
    }

    /// Canonical representative of `g K_N`.
    pub fn reduce(&self, g: &Element) -> Element {
        self.sheets.rep(self.sheets.vertex_of(g)).clone()
    }

    /// The class of `[γ, x]` in canonical form. The group acts by
    /// `h · [γ, x] = [γ h⁻¹, h x]`.
    pub fn point(&self, gamma: &Element, leaf: &Leaf) -> SolenoidPoint {
        let (h, rest) = leaf.recenter();
        SolenoidPoint {
            gamma: self.reduce(&gamma.mul(&h)),
            leaf: rest,
        }
    }

    /// Image of the universal-cover vertex `g` under the baseleaf map.
    pub fn baseleaf(&self, g: &Element) -> SolenoidPoint {
        self.point(&self.tag().identity(), &Leaf::of_element(g))
    }

    /// Baseleaf images of the vertices along the edge path of `g`.
    pub fn baseleaf_path(&self, g: &Element) -> Vec<SolenoidPoint> {
        prefixes(g).iter().map(|p| self.baseleaf(p)).collect()
    }

    /// The compatible coset family `G_λ γ`, one key per object.
    pub fn cosets(&self, p: &SolenoidPoint) -> Vec<CosetKey> {
        self.system
            .objects()
            .iter()
            .map(|o| o.coset_key(&p.gamma).expect("same group"))
            .collect()
    }

    pub fn d_pro(&self, g: &Element, h: &Element) -> ExactReal {
        self.chain.d_pro(g, h).expect("same group")
    }

    /// Product metric `max(d_pro, d_leaf)` on representatives.
    pub fn d_inf(&self, a: (&Element, &Leaf), b: (&Element, &Leaf)) -> ExactReal {
        self.d_pro(a.0, b.0).max(a.1.distance(b.1))
    }

    /// `σ(p, q) = min_h d_∞([γ_p, x_p], [γ_q h⁻¹, h x_q])` with the optimal
    /// `h` (least in element order among optimal ones). Candidates are
    /// scanned by length; `d(x_p, h x_q) ≥ |h|_2 - |x_p| - |x_q|` bounds
    /// the scan.
    pub fn sigma(&self, p: &SolenoidPoint, q: &SolenoidPoint) -> (ExactReal, Element) {
        let tag = self.tag();
        let slack = p.leaf.radius_f64() + q.leaf.radius_f64();
        let scale = match tag {
            GroupTag::Free(_) => 1.0,
            GroupTag::Abelian(n) => (n as f64).sqrt(),
        };
        let value = |h: &Element| {
            let g2 = q.gamma.mul(&h.inverse());
            self.d_inf((&p.gamma, &p.leaf), (&g2, &q.leaf.translate(h)))
        };
        let mut best_h = tag.identity();
        let mut best = value(&best_h);
        for r in 1.. {
            let lower = r as f64 / scale - slack;
            if lower > best.to_f64() + 1e-9 {
                break;
            }
            for h in tag.sphere(r) {
                let v = value(&h);
                if v < best || (v == best && h < best_h) {
                    best = v;
                    best_h = h;
                }
            }
        }
        (best, best_h)
    }

    /// Every canonical point whose leaf sits at a grid point of spacing
    /// `1/steps` within the star of the base vertex.
    pub fn grid_points(&self, steps: u32) -> Vec<SolenoidPoint> {
        let mut out = std::collections::BTreeSet::new();
        for v in 0..self.sheets.sheets() {
            let gamma = self.sheets.rep(v);
            for leaf in star_grid(self.tag(), steps) {
                out.insert(self.point(gamma, &leaf));
            }
        }
        out.into_iter().collect()
    }

    pub fn format_point(&self, p: &SolenoidPoint) -> String {
        let cosets: Vec<String> = self.cosets(p).iter().map(|c| c.to_string()).collect();
        format!(
            "solpoint N={} gamma={} cosets=[{}] leaf={}",
            self.depth(),
            p.gamma,
            cosets.join(","),
            p.leaf
        )
    }

    /// Parses `solpoint N=.. gamma=.. [cosets=[..]] leaf=..`; the coset
    /// list, when present, must match `gamma`.
    pub fn parse_point(&self, text: &str) -> Result<SolenoidPoint> {
        let bad = |m: &str| Error::Precondition(format!("bad solpoint ({m}): {text:?}"));
        let mut fields = std::collections::HashMap::new();
        let mut toks = text.split_whitespace();
        if toks.next() != Some("solpoint") {
            return Err(bad("missing `solpoint`"));
        }
        for t in toks {
            let (k, v) = t.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            fields.insert(k, v);
        }
        if fields.get("N").and_then(|n| n.parse::<usize>().ok()) != Some(self.depth()) {
            return Err(bad("depth does not match the model"));
        }
        let tag = self.tag();
        let gamma = tag.parse_element(fields.get("gamma").ok_or_else(|| bad("missing gamma"))?)?;
        let kind = match tag {
            GroupTag::Free(k) => LeafKind::Tree(Alphabet::new(k)?),
            GroupTag::Abelian(n) => LeafKind::Flat(n),
        };
        let leaf = Leaf::parse(fields.get("leaf").ok_or_else(|| bad("missing leaf"))?, kind)?;
        let p = self.point(&gamma, &leaf);
        if let Some(c) = fields.get("cosets") {
            let listed = self.format_point(&p);
            if !listed.contains(&format!("cosets={c} ")) {
                return Err(bad("coset family does not match gamma"));
            }
        }
        Ok(p)
    }
}

impl fmt::Display for SolenoidPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.gamma, self.leaf)
    }
}

/// `1, g_1, g_1 g_2, ..., g` along the letters (unit steps) of `g`.
pub(crate) fn prefixes(g: &Element) -> Vec<Element> {
    match g {
        Element::Word(w) => (0..=w.len())
            .map(|i| Element::Word(crate::freewords::Word::from_letters(w.letters()[..i].iter().copied())))
            .collect(),
        Element::Vector(_) => {
            let tag = GroupTag::Abelian(g.as_vector().map_or(0, |v| v.dim()));
            let gens = tag.generators();
            let mut cur = tag.identity();
            let mut out = vec![cur.clone()];
            for (i, pos) in super::covers::steps(g) {
                let x = if pos { gens[i].clone() } else { gens[i].inverse() };
                cur = cur.mul(&x);
                out.push(cur.clone());
            }
            out
        }
    }
}

/// Grid points of spacing `1/steps` on the edges at the base vertex.
pub(crate) fn star_grid(tag: GroupTag, steps: u32) -> Vec<Leaf> {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    let mut out = vec![Leaf::of_element(&tag.identity())];
    match tag {
        GroupTag::Free(k) => {
            for l in Alphabet::new(k).expect("valid rank").letters() {
                for j in 1..=steps / 2 {
                    let t = BigRational::new(BigInt::from(j), BigInt::from(steps));
                    out.push(Leaf::Tree(super::leaf::TreePoint::on_edge(
                        crate::freewords::Word::identity(),
                        l,
                        t,
                    )));
                }
            }
        }
        GroupTag::Abelian(n) => {
            let half = (steps / 2) as i64;
            let mut pts: Vec<Vec<i64>> = vec![vec![]];
            for _ in 0..n {
                pts = pts
                    .into_iter()
                    .flat_map(|p| {
                        (-half + 1..=half).map(move |x| {
                            let mut p = p.clone();
                            p.push(x);
                            p
                        })
                    })
                    .collect();
            }
            out = pts
                .into_iter()
                .map(|p| {
                    Leaf::Flat(
                        p.into_iter()
                            .map(|x| BigRational::new(BigInt::from(x), BigInt::from(steps)))
                            .collect(),
                    )
                })
                .collect();
        }
    }
    out
}
