//! Injectivity radius of the unit bases and the product structure of small
//! σ-balls in the depth-N model.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use super::leaf::Leaf;
use super::point::{star_grid, DepthModel, SolenoidPoint};
use super::real::ExactReal;
use crate::error::{Error, Result};
use crate::group::{Element, GroupTag};

/// Grid resolution used to sample the model: points at spacing `1/80`.
pub const GRID_STEPS: u32 = 80;

/// Injectivity radius of the unit rose or unit flat torus.
pub fn injectivity_radius(_tag: GroupTag) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

/// Image of a universal-cover point in the base, as a hashable key.
fn project(leaf: &Leaf) -> (Option<usize>, Vec<BigRational>) {
    match leaf {
        Leaf::Tree(p) => match p.project() {
            None => (None, vec![]),
            Some((i, s)) => (Some(i), vec![s]),
        },
        Leaf::Flat(x) => (
            None,
            x.iter().map(|c| c - BigRational::from(c.floor().to_integer())).collect(),
        ),
    }
}

/// Grid points (spacing `1/steps`) within distance `< r` of `center`.
fn grid_ball(tag: GroupTag, center: &Leaf, r: &BigRational, steps: u32) -> Vec<Leaf> {
    let reach = center.radius_f64() + r.to_f64().unwrap_or(0.0);
    let bound = ExactReal::rational(r.clone());
    let mut out = BTreeSet::new();
    for h in tag.ball(reach.ceil() as usize + 1) {
        for leaf in star_grid(tag, steps) {
            let y = leaf.translate(&h);
            if y.distance(center) < bound {
                out.insert(y);
            }
        }
    }
    out.into_iter().collect()
}

/// Checks on a grid of spacing `1/steps` that every open `r`-ball of the
/// universal cover, centered at a sampled point, projects injectively.
pub fn embeds(tag: GroupTag, r: &BigRational, steps: u32) -> bool {
    star_grid(tag, steps / 4).iter().all(|c| {
        let ball = grid_ball(tag, c, r, steps);
        let images: BTreeSet<_> = ball.iter().map(project).collect();
        images.len() == ball.len()
    })
}

/// One path component of a σ-ball.
#[derive(Clone, Debug)]
pub struct BallComponent {
    /// Profinite coordinate of the component relative to the center's leaf.
    pub coordinate: Element,
    pub d_pro: ExactReal,
    pub points: Vec<SolenoidPoint>,
    /// `leaves[i]` is the leaf-ball point matched with `points[i]`.
    pub leaves: Vec<Leaf>,
}

#[derive(Clone, Debug)]
pub struct BallReport {
    pub depth: usize,
    pub epsilon: BigRational,
    pub components: Vec<BallComponent>,
    /// Classes of `G/K_N` at profinite distance `< ε` from the center.
    pub expected_components: usize,
    pub leaf_ball_size: usize,
    /// Every component matched the leaf ball isometrically.
    pub isometric: bool,
    /// At depth 1 the profinite pseudometric vanishes identically.
    pub degenerate: bool,
}

impl BallReport {
    pub fn passed(&self) -> bool {
        self.isometric && self.components.len() == self.expected_components
    }
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    parent[i] = r;
    r
}

/// Decomposes the `ε`-ball about `p` into path components on the sampling
/// grid and certifies each against the leaf ball. `p` must be a grid point.
pub fn ball_structure(model: &DepthModel, p: &SolenoidPoint, epsilon: &BigRational) -> Result<BallReport> {
    let tag = model.tag();
    let inj = injectivity_radius(tag);
    if !epsilon.is_positive() || epsilon * BigInt::from(4) >= inj {
        return Err(Error::Precondition(format!(
            "ball radius {epsilon} must satisfy 0 < 4ε < injectivity radius {inj}"
        )));
    }
    let eps = ExactReal::rational(epsilon.clone());
    let step = ExactReal::rational(BigRational::new(BigInt::one(), BigInt::from(GRID_STEPS)));

    let mut inside = Vec::new();
    for q in model.grid_points(GRID_STEPS) {
        let (s, h) = model.sigma(p, &q);
        if s < eps {
            inside.push((q, h));
        }
    }

    // grid neighbours sit at σ-distance exactly one step
    let mut parent: Vec<usize> = (0..inside.len()).collect();
    for i in 0..inside.len() {
        for j in i + 1..inside.len() {
            if model.sigma(&inside[i].0, &inside[j].0).0 <= step {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..inside.len() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }

    let leaf_ball: BTreeSet<Leaf> = grid_ball(tag, &p.leaf, epsilon, GRID_STEPS).into_iter().collect();
    let mut isometric = true;
    let mut components = Vec::new();
    for members in groups.values() {
        let mut coords = BTreeSet::new();
        let mut points = Vec::new();
        let mut leaves = Vec::new();
        for &i in members {
            let (q, h) = &inside[i];
            coords.insert(model.reduce(&q.gamma.mul(&h.inverse())));
            points.push(q.clone());
            leaves.push(q.leaf.translate(h));
        }
        let distinct: BTreeSet<&Leaf> = leaves.iter().collect();
        isometric &= coords.len() == 1 && distinct.len() == leaves.len() && distinct.into_iter().eq(leaf_ball.iter());
        for a in 0..points.len() {
            for b in a + 1..points.len() {
                isometric &= model.sigma(&points[a], &points[b]).0 == leaves[a].distance(&leaves[b]);
            }
        }
        let coordinate = coords.into_iter().next().expect("nonempty component");
        components.push(BallComponent {
            d_pro: model.d_pro(&p.gamma, &coordinate),
            coordinate,
            points,
            leaves,
        });
    }
    let sheets = model.sheet_cover();
    let expected_components = (0..sheets.sheets())
        .filter(|&v| model.d_pro(&p.gamma, sheets.rep(v)) < eps)
        .count();
    Ok(BallReport {
        depth: model.depth(),
        epsilon: epsilon.clone(),
        components,
        expected_components,
        leaf_ball_size: leaf_ball.len(),
        isometric,
        degenerate: model.depth() == 1,
    })
}
