//! Extremal k-packings on compact non-orientable hyperbolic surfaces.
//!
//! The crate builds and certifies the combinatorial surfaces carrying
//! extremal packings (unions of `k` regular `N`-gons with angle `2π/3`),
//! relates them to subgroups of extended `(2, 3, N)` triangle groups and
//! realizes them numerically in the Poincaré disk.

pub mod catalog;
pub mod complex;
pub mod covers;
pub mod feasibility;
pub mod grafting;
pub mod hyper_geom;
pub mod tri_group;

pub use complex::{
    ComplexError, Corner, ExtremalityFailure, ExtremalityReport, Label, PolygonComplex,
    SurfaceInvariants, VertexCycle,
};
pub use feasibility::PackingSpec;
