//! Bohr-Sommerfeld quantization (with sign) and formal geometric
//! quantization of toric and b-toric manifolds.
//!
//! Two independent routes compute the same virtual T-module:
//!
//! - **Bohr-Sommerfeld**: locate each leaf by root-finding on the moment
//!   profile and confirm it by integrating parallel transport around the
//!   orbit ([`quantize::bs_quantization`], [`quantize::holonomy`]).
//! - **Formal**: count integer points of the moment image exactly, weighting
//!   each surface component by its orientation sign
//!   ([`quantize::formal_gq`]).
//!
//! [`quantize::compare`] runs both and reports any weight where they differ.
//! The [`oracle`] module holds brute-force references used by the tests.
//!
//! ```
//! use bsq_core::{BManifold, BSurface, ManifoldVariant, Tolerance};
//! use bsq_core::quantize::{bs_quantization, stabilized_dimension};
//!
//! let sphere = BManifold::new(ManifoldVariant::Surface(BSurface::canonical_sphere()), None)?;
//! let tol = Tolerance::default();
//! assert_eq!(bs_quantization(&sphere, 5, false, tol)?.dimension(), 12);
//! assert_eq!(stabilized_dimension(&sphere, tol)?, 0);
//! # Ok::<(), bsq_core::Error>(())
//! ```

pub mod bmanifold;
pub mod bsurface;
pub mod error;
pub mod format;
pub mod manifest;
pub mod oracle;
pub mod plot;
pub mod polytope;
pub mod quantize;
pub mod report;

pub use bmanifold::{BManifold, ManifoldSpec, ManifoldVariant, SignedWeight};
pub use bsurface::{BSLeaf, BSurface, CriticalCircle, SurfaceKind, SurfaceSpec, Tolerance};
pub use error::{Error, Result};
pub use manifest::{Manifest, ManifestOptions};
pub use oracle::OracleConfig;
pub use polytope::{DelzantReport, HalfSpace, LatticePoint, Rational, RationalPolytope};
pub use quantize::{
    compare, formal_gq, holonomy, stabilized_dimension, CompareOptions, Dimension,
    EquivalenceReport, HolonomyResult, VirtualTModule, Window,
};
