//! Distance-weighted fractional Sobolev norms on planar grid domains.
//!
//! The crate discretizes bounded planar domains on uniform node grids and
//! provides
//!
//! * weighted `L^p` and `W^{1,p}` norms with powers of the distance to the boundary,
//! * the restricted fractional seminorm (inner integral over `|x-y| < τ·d(x)`)
//!   and the full seminorm weighted by `δ(x,y) = min(d(x), d(y))`,
//! * Whitney decompositions, their refinements, a smooth partition of unity and
//!   mollified local averages that assemble into a smooth approximant,
//! * the real-interpolation K-functional and the resulting interpolation norm,
//! * a verification harness and the `fracnorm` command-line tool.

pub mod domain;
pub mod error;
pub mod harness;
pub mod kfunctional;
pub mod norms;
pub mod quadrature;
pub mod whitney;

pub use error::{Error, Result};
