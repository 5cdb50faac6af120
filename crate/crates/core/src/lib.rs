//! Centro-affine Țițeica invariant `K/d⁴` of surfaces.
//!
//! The crate computes Gaussian curvature, the distance from the origin to
//! the tangent plane, and the four oriented volumes of a surface patch at a
//! point, using exact second-order forward-mode derivatives ([`jet`]). On top
//! of that it checks how `K/d⁴` scales under centro-affine maps
//! ([`centroaffine`]), classifies surfaces on which it is constant
//! ([`classify`]), and verifies pullback equivalences between models of the
//! hyperbolic plane ([`metrics`]).
//!
//! `no_std`; needs `alloc`.

#![no_std]
// `!(x > eps)` is deliberate throughout: NaN must fail the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod centroaffine;
pub mod classify;
pub mod error;
pub mod fdcheck;
pub mod invariants;
pub mod jet;
pub mod linalg;
pub mod metrics;
pub mod surfaces;

pub use error::{Error, Result};
pub use jet::{Axis, Jet2, JetError, Scalar};
pub use surfaces::{AmbientForm, DomainBox, SurfaceDef, SurfaceJet};
