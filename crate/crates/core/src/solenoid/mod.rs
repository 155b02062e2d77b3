//! Covers of the rose and the torus, lifts through covers, and the
//! truncated suspension model with its metrics.

mod ball;
mod covers;
mod kernels;
mod leaf;
mod point;
mod real;

pub use ball::{ball_structure, embeds, injectivity_radius, BallComponent, BallReport, GRID_STEPS};
pub use covers::{cover_of, covering_map, lift_through_covers, CoverGraph, CoveringMap, Lift};
pub use kernels::KernelChain;
pub use leaf::{Leaf, LeafKind, TreePoint};
pub use point::{DepthModel, SolenoidPoint};
pub use real::ExactReal;
