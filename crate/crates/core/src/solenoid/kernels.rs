//! The chain `G = G_{≤1} ⊇ G_{≤2} ⊇ ... ⊇ G_{≤N}` and the profinite metric.

use super::real::ExactReal;
use crate::error::Result;
use crate::group::{Element, GroupTag, Subgroup};
use crate::prosystems::TruncatedSystem;

#[derive(Clone, Debug)]
pub struct KernelChain {
    tag: GroupTag,
    /// `kernels[n - 1] = G_{≤n}`.
    kernels: Vec<Subgroup>,
}

impl KernelChain {
    pub fn from_system(system: &TruncatedSystem) -> Result<KernelChain> {
        let tag = system.tag();
        let mut kernels = Vec::with_capacity(system.depth());
        let mut k = tag.whole();
        for n in 1..=system.depth() {
            for o in system.objects() {
                if o.index()? == n as u64 {
                    k = k.intersect(o)?;
                }
            }
            kernels.push(k.clone());
        }
        Ok(KernelChain { tag, kernels })
    }

    pub fn build(tag: GroupTag, depth: usize) -> Result<KernelChain> {
        Self::from_system(&TruncatedSystem::build(tag, depth)?)
    }

    pub fn tag(&self) -> GroupTag {
        self.tag
    }

    pub fn depth(&self) -> usize {
        self.kernels.len()
    }

    /// `G_{≤n}` for `1 ≤ n ≤ depth`.
    pub fn kernel(&self, n: usize) -> &Subgroup {
        &self.kernels[n - 1]
    }

    pub fn deepest(&self) -> &Subgroup {
        self.kernels.last().expect("depth at least 1")
    }

    /// Largest `n ≤ depth` with `x ∈ G_{≤n}`.
    pub fn level(&self, x: &Element) -> Result<usize> {
        for n in (1..=self.depth()).rev() {
            if self.kernel(n).contains(x)? {
                return Ok(n);
            }
        }
        unreachable!("G_{{≤1}} is the whole group")
    }

    /// `exp(-max{n : g h⁻¹ ∈ G_{≤n}})`, truncated to `0` once `g h⁻¹ ∈ G_{≤N}`.
    pub fn d_pro(&self, g: &Element, h: &Element) -> Result<ExactReal> {
        let n = self.level(&g.mul(&h.inverse()))?;
        Ok(if n == self.depth() {
            ExactReal::Zero
        } else {
            ExactReal::ExpNeg(n as u32)
        })
    }
}
