//! Whitney decompositions, their λ-refinements, the expanded cover, the
//! partition of unity, the mollifier and the smooth approximant built on them.

mod approx;
mod decompose;
pub mod mollifier;
mod pou;
mod refine;

pub use approx::{smooth_approximant, Approximator, SmoothApproximant};
pub use decompose::{whitney_decompose, WhitneyCube, WhitneyDecomposition, WhitneyReport};
pub use mollifier::{convolve, convolve_at, local_average, mollifier_eval};
pub use pou::{partition_of_unity, GradientScan, PartitionOfUnity, PuTerm};
pub use refine::{
    expanded_cover, refine_lambda, refinement_level, ExpandedCover, RefinedCell,
    RefinedDecomposition, EXPANSION,
};
