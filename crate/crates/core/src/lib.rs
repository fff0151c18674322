//! Equivariant Lagrangian mean curvature flow in CP², reduced to the planar
//! profile curve, with neck-to-neck surgery.
//!
//! The profile curve γ lifts to a Lagrangian torus of Clifford type (one
//! point-symmetric curve around the origin) or Chekanov type (a pair of
//! curves swapped by w ↦ −w). Everything here acts on γ.

pub mod cg_diagnostics;
pub mod cp2_core;
pub mod curvature_flow;
pub mod error;
pub mod minimal_family;
pub mod numerics;
pub mod scenario;
pub mod surgery;

pub use cp2_core::{
    ConeSpec, MaslovData, PlanarPoint, ProfileCurve, RegionSpec, Segment, SymmetryClass,
};
pub use curvature_flow::{FlowConfig, FlowEvent, FlowEventKind, FlowState, SingularityReport};
pub use error::{Error, Result};
pub use minimal_family::{ClosureSolution, MinimalProfile};
pub use surgery::{NeckSpec, SurgeryRecord};

/// Kähler constant of CP² in the Cieliebak–Goldstein identity.
pub const KAPPA: f64 = 6.0;

/// Maslov-4 disc area of a monotone Clifford-type torus.
pub const CLIFFORD_TARGET: f64 = 2.0 * std::f64::consts::PI / 3.0;

/// Maslov-2 disc area of a monotone Chekanov-type torus.
pub const CHEKANOV_TARGET: f64 = std::f64::consts::PI / 3.0;
