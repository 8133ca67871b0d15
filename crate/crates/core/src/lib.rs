//! Computational toolkit for (weakly) non-separable and weakly k-impassable
//! families of positive homothets of convex polytopes.
//!
//! The crate is `no_std` with `alloc`. All floating point predicates are
//! thresholded through an explicit [`ToleranceContext`].
//!
//! Layout:
//! - [`lp`], [`polytope`]: the geometric kernel (dense simplex solver,
//!   dual-representation polytopes, containment, polarity, genericization,
//!   measures).
//! - [`separability`]: NS / WNS deciders and the sampled k-WIP probe.
//! - [`covering`]: minimal covering homothets and the summand test.
//! - [`asymmetry`]: Minkowski measure of asymmetry.
//! - [`lattice`]: lattice arrangements, covering radius, tightness,
//!   dual-lattice criterion and weak covering minima experiments.
//! - [`cubes`]: integer WNS families of unit squares/cubes.
//! - [`stability`]: ball-family circumradius and the bent-chain experiment.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod asymmetry;
pub mod covering;
pub mod cubes;
mod error;
pub mod lattice;
pub mod linalg;
pub mod lp;
pub mod polytope;
pub mod random;
pub mod separability;
pub mod stability;
mod tol;

pub use error::{Error, Result};
pub use tol::ToleranceContext;

pub use asymmetry::AsymmetryResult;
pub use covering::CoverResult;
pub use cubes::IntegerCubeFamily;
pub use lattice::{Lattice, LatticeArrangement};
pub use lp::{LinearProgram, LpSolution, LpStatus, Relation};
pub use polytope::{Facet, MeasureKind, Polytope};
pub use separability::{HomotheticFamily, Interval};
pub use stability::BallFamily;
