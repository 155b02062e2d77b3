//! Commensurations as quasi-isometries of the Cayley graph, bounded
//! distance between them, agreement with lifts through covers, and the
//! action on fixed points of the free-group boundary.

mod boundary;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

pub use boundary::{boundary_action, fixed_point, BoundaryPoint, Sign};

use crate::commensurations::Commensuration;
use crate::error::{Error, Result};
use crate::group::{Element, GroupTag};
use crate::limits;
use crate::solenoid::{lift_through_covers, DepthModel};

/// Largest free-group ball radius accepted by the ball scans; balls in
/// Z^n are limited by the work cap alone.
pub const MAX_RADIUS: usize = 10;

/// `g ↦ φ(p(g))` with `p` the closest-point projection to the domain.
#[derive(Clone, Debug)]
pub struct BaseleafMap {
    phi: Commensuration,
}

impl BaseleafMap {
    pub fn new(phi: Commensuration) -> BaseleafMap {
        BaseleafMap { phi }
    }

    pub fn commensuration(&self) -> &Commensuration {
        &self.phi
    }

    pub fn tag(&self) -> GroupTag {
        self.phi.tag()
    }

    pub fn evaluate(&self, g: &Element) -> Result<Element> {
        self.phi.apply(&self.phi.domain().closest_point(g)?)
    }
}

fn guard(tag: GroupTag, radius: usize, pairs: bool) -> Result<Vec<Element>> {
    if matches!(tag, GroupTag::Free(_)) && radius > MAX_RADIUS {
        return Err(Error::ResourceCap(format!("radius {radius} exceeds {MAX_RADIUS}")));
    }
    let ball = tag.ball(radius);
    let n = ball.len() as u64;
    limits::check(if pairs { n * n / 2 } else { n }, || {
        format!("ball of radius {radius} in {tag} has {n} points")
    })?;
    Ok(ball)
}

/// Constants `(L, C)` with `d/L - C ≤ d' ≤ L·d + C` on a finite point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QiEstimate {
    pub radius: usize,
    pub points: usize,
    pub l: BigRational,
    pub c: BigRational,
    /// Least `C` with `d' ≤ L·d + C` on every pair.
    pub c_upper: BigRational,
    /// Least `C` with `d/L - C ≤ d'` on every pair.
    pub c_lower: BigRational,
}

impl QiEstimate {
    pub fn certifies(&self, d: u64, d_image: u64) -> bool {
        let (d, di) = (BigRational::from(BigInt::from(d)), BigRational::from(BigInt::from(d_image)));
        di <= &self.l * &d + &self.c && &d / &self.l - &self.c <= di
    }
}

impl fmt::Display for QiEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dec = |q: &BigRational| q.to_f64().unwrap_or(f64::NAN);
        write!(
            f,
            "qi R={} points={} L={} ({:.4}) C={} ({:.4}) upper={} lower={}",
            self.radius,
            self.points,
            self.l,
            dec(&self.l),
            self.c,
            dec(&self.c),
            self.c_upper,
            self.c_lower
        )
    }
}

/// `L` is the largest distortion `max(d'/d, d/d')` over pairs with both
/// distances positive; `C` is then the least additive constant.
pub fn qi_constants(pairs: &[(u64, u64)]) -> (BigRational, BigRational, BigRational) {
    let (mut p, mut q) = (1u64, 1u64);
    for &(d, di) in pairs {
        if d == 0 || di == 0 {
            continue;
        }
        let (a, b) = if di > d { (di, d) } else { (d, di) };
        if (a as u128) * (q as u128) > (p as u128) * (b as u128) {
            (p, q) = (a, b);
        }
    }
    let l = BigRational::new(BigInt::from(p), BigInt::from(q));
    let c = tight_constants(pairs, &l);
    (l, c.0, c.1)
}

/// Least `(C_upper, C_lower)` for a given `L`.
pub fn tight_constants(pairs: &[(u64, u64)], l: &BigRational) -> (BigRational, BigRational) {
    let (p, q) = (l.numer().clone(), l.denom().clone());
    let (mut up, mut low) = (BigInt::zero(), BigInt::zero());
    for &(d, di) in pairs {
        let (d, di) = (BigInt::from(d), BigInt::from(di));
        up = up.max(&q * &di - &p * &d);
        low = low.max(&q * &d - &p * &di);
    }
    (BigRational::new(up, q), BigRational::new(low, p))
}

/// Distances `(d(x, y), d(f x, f y))` over all pairs of `points`.
pub fn distance_pairs(m: &BaseleafMap, points: &[Element]) -> Result<Vec<(u64, u64)>> {
    let images = points.iter().map(|g| m.evaluate(g)).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity(points.len() * points.len() / 2);
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            out.push((points[i].distance(&points[j]), images[i].distance(&images[j])));
        }
    }
    Ok(out)
}

pub fn qi_estimate_on(m: &BaseleafMap, points: &[Element], radius: usize) -> Result<QiEstimate> {
    let pairs = distance_pairs(m, points)?;
    let (l, c_upper, c_lower) = qi_constants(&pairs);
    Ok(QiEstimate {
        radius,
        points: points.len(),
        c: c_upper.clone().max(c_lower.clone()),
        l,
        c_upper,
        c_lower,
    })
}

/// Empirical constants over every pair in the ball of radius `R`.
pub fn qi_estimate(m: &BaseleafMap, radius: usize) -> Result<QiEstimate> {
    let ball = guard(m.tag(), radius, true)?;
    qi_estimate_on(m, &ball, radius)
}

/// Outcome of checking the composition law for quasi-isometry constants.
#[derive(Clone, Debug)]
pub struct CompositionCheck {
    pub outer: QiEstimate,
    pub inner: QiEstimate,
    /// `max d(m_{φ∘ψ}(g), m_φ(m_ψ(g)))` over the ball.
    pub defect: u64,
    /// Least `C` for the composite at `L = L_φ·L_ψ`.
    pub composite_c: BigRational,
    /// `L_φ·C_ψ + C_φ + 2·defect`.
    pub bound: BigRational,
}

impl CompositionCheck {
    pub fn holds(&self) -> bool {
        self.composite_c <= self.bound
    }
}

/// Compares the constants of `m_{φ∘ψ}` at `L_φ L_ψ` with those predicted
/// from `ψ` on the ball and `φ` on the image of the ball under `m_ψ`.
pub fn composition_check(phi: &Commensuration, psi: &Commensuration, radius: usize) -> Result<CompositionCheck> {
    let ball = guard(phi.tag(), radius, true)?;
    let (mphi, mpsi) = (BaseleafMap::new(phi.clone()), BaseleafMap::new(psi.clone()));
    let comp = BaseleafMap::new(phi.compose(psi)?);
    let inner = qi_estimate_on(&mpsi, &ball, radius)?;
    let moved = ball.iter().map(|g| mpsi.evaluate(g)).collect::<Result<Vec<_>>>()?;
    let outer = qi_estimate_on(&mphi, &moved, radius)?;
    let mut defect = 0;
    for (g, h) in ball.iter().zip(&moved) {
        defect = defect.max(comp.evaluate(g)?.distance(&mphi.evaluate(h)?));
    }
    let l = &outer.l * &inner.l;
    let (up, low) = tight_constants(&distance_pairs(&comp, &ball)?, &l);
    let bound = &outer.l * &inner.c + &outer.c + BigRational::from(BigInt::from(2 * defect));
    Ok(CompositionCheck {
        outer,
        inner,
        defect,
        composite_c: up.max(low),
        bound,
    })
}

/// `profile[r] = max_{|g| ≤ r} d(m1(g), m2(g))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceProfile {
    pub profile: Vec<u64>,
}

impl DistanceProfile {
    pub fn radius(&self) -> usize {
        self.profile.len() - 1
    }

    pub fn bound(&self) -> u64 {
        *self.profile.last().expect("radius 0 is always present")
    }

    /// Least radius from which the profile is constant up to the end.
    pub fn stable_from(&self) -> usize {
        let b = self.bound();
        self.profile.iter().position(|&x| x == b).expect("bound occurs")
    }

    /// Constant on `[from, radius]`.
    pub fn stable_between(&self, from: usize) -> bool {
        self.stable_from() <= from
    }

    /// Strictly increased over the last `span` radii.
    pub fn grows(&self, span: usize) -> bool {
        let r = self.radius();
        r >= span && self.profile[r] > self.profile[r - span]
    }
}

impl fmt::Display for DistanceProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.profile.iter().map(|x| x.to_string()).collect();
        if self.stable_from() < self.radius() {
            write!(f, "bounded {} from R={} profile {}", self.bound(), self.stable_from(), cells.join(" "))
        } else {
            write!(f, "growing profile {}", cells.join(" "))
        }
    }
}

pub fn bounded_distance(m1: &BaseleafMap, m2: &BaseleafMap, radius: usize) -> Result<DistanceProfile> {
    m1.tag().check_same(&m2.tag())?;
    let ball = guard(m1.tag(), radius, false)?;
    let mut profile = vec![0u64; radius + 1];
    for g in &ball {
        let d = m1.evaluate(g)?.distance(&m2.evaluate(g)?);
        let r = g.length() as usize;
        profile[r] = profile[r].max(d);
    }
    for r in 1..=radius {
        profile[r] = profile[r].max(profile[r - 1]);
    }
    Ok(DistanceProfile { profile })
}

/// Result of comparing the depth-N lift of `φ` with its baseleaf map.
#[derive(Clone, Debug)]
pub struct FactorReport {
    pub depth: usize,
    pub radius: usize,
    /// Domain points of the ball that were compared.
    pub checked: usize,
    pub mismatches: Vec<String>,
}

impl FactorReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.checked > 0
    }
}

impl fmt::Display for FactorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "factor N={} R={} checked={} mismatches={}",
            self.depth,
            self.radius,
            self.checked,
            self.mismatches.len()
        )?;
        for m in &self.mismatches {
            write!(f, "\n  {m}")?;
        }
        Ok(())
    }
}

/// Lifts `φ` to `X_H → X_{K_N}` with `H = φ⁻¹(K_N)` and checks, for every
/// domain point `g` of the ball, that the lifted edge path of `g` ends at
/// the baseleaf image `m_φ(g)` and that its sheet in the depth-N model
/// is the one the lift assigns to `H·g`.
pub fn factorization_check(phi: &Commensuration, depth: usize, radius: usize) -> Result<FactorReport> {
    let tag = phi.tag();
    let ball = guard(tag, radius, false)?;
    let model = DepthModel::build(tag, depth)?;
    let k = model.chain().deepest().clone();
    let h = phi.preimage(&k.intersect(&phi.codomain())?)?;
    let lift = lift_through_covers(phi, &h, &k)?;
    lift.verify_unique()?;
    let m = BaseleafMap::new(phi.clone());
    let domain = phi.domain();
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for g in &ball {
        if !domain.contains(g)? {
            continue;
        }
        checked += 1;
        let direct = m.evaluate(g)?;
        let lifted = lift.path_image(g);
        if lifted != direct {
            mismatches.push(format!("{g}: lift gives {lifted}, baseleaf map gives {direct}"));
            continue;
        }
        let sheet = lift.target().rep(lift.vertex_map()[lift.source().vertex_of(g)]);
        let gamma = model.baseleaf(&direct).gamma;
        if *sheet != gamma {
            mismatches.push(format!("{g}: lift lands on sheet {sheet}, baseleaf on {gamma}"));
        }
    }
    Ok(FactorReport {
        depth,
        radius,
        checked,
        mismatches,
    })
}

#[cfg(test)]
mod tests;
