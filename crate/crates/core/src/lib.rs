//! Generalized calculus carried through pairs of strictly monotone mappings.
//!
//! A frame `(g, h)` transports a real function `f` to `φ = h ∘ f ∘ g⁻¹`;
//! arithmetic, derivatives, integrals, means and convexity are all computed
//! in the image space and mapped back.

pub mod arith;
pub mod convexity;
pub mod differential;
pub mod error;
pub mod exprparse;
pub mod integral;
pub mod means;
pub mod mappings;
pub mod numerics;
pub mod plotgen;
pub mod realfn;

pub use error::{Error, ErrorCategory, Result};
pub use mappings::{catalog, compose, dvi_function, h_scaleshift, v_scaleshift, Direction, Frame2D, Mapping};
pub use numerics::{Endpoint, Interval, QuadConfig};
pub use realfn::RealFn;
