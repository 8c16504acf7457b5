//! Depth-1 QAOA optimisation landscapes of decision problems, evaluated
//! exactly per instance and approximated from the Hamming-distance structure
//! of the solution space.
//!
//! A decision problem enters only through its target space `T`, the set of
//! basis states that encode solutions. For a single QAOA layer the expected
//! probability of measuring a solution is
//!
//! ```text
//! F1(beta, gamma) = 2^-n * sum_{k in T} |c_k(beta, gamma)|^2
//! ```
//!
//! where each `c_k` depends on `T` only through the distance profile of `k`
//! (how many targets sit at each Hamming distance from it). Averaging those
//! profiles over an ensemble of instances yields a [`StructuralSummary`],
//! which is enough to approximate the expected landscape of the whole problem
//! in `O(n^2)` per point and to pick one set of angles for every instance.
//!
//! Module map:
//! - [`space`]: bitstrings, target spaces and distance profiles.
//! - [`problems`]: seeded generators for the five problem families.
//! - [`structure`]: per-instance statistics and ensemble aggregation.
//! - [`landscape`]: closed form, statevector oracle, approximation, grids.
//! - [`analytic`]: closed-form summary of uniformly sampled target spaces.
//! - [`optimize`]: deterministic multistart angle optimisation.
//! - [`experiments`]: landscape and success-probability comparisons.
//! - [`io`]: JSON, CSV and run configuration formats.

pub mod analytic;
pub mod error;
pub mod experiments;
pub mod io;
pub mod landscape;
pub mod optimize;
pub mod problems;
pub mod space;
pub mod structure;

pub use error::{Error, Result};
pub use landscape::ComplexValue;
pub use space::{AngleGrid, Angles, BitString, DistanceProfile, TargetSpace};
pub use structure::{InstanceStats, StructuralSummary};
