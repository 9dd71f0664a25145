//! Finite spherical buildings and the homology of their top cycles, support
//! lattices with reconstruction of the building from homological data, and
//! the metric side: model spaces of constant curvature, comparison triangles,
//! and the two ℝ-trees `T₁ = (−1,1)×ℝ`, `T₂ = ℝ×ℝ` with their retraction,
//! fiber ultrametric and dimension covers.
//!
//! Everything is a pure function of its inputs; no module keeps interior
//! mutable state beyond lazily materialized, write-once caches.

pub mod acceptance;
pub mod building;
pub mod catk;
pub mod check;
pub mod coxeter;
pub mod json;
pub mod lattice;
pub mod rtree;
pub mod simplicial;

pub use check::Check;
pub use building::{Apartment, BuildingError, SphericalBuilding};
pub use catk::{CatkError, ComparisonTriangle, Kappa, ModelPoint};
pub use coxeter::{CoxeterComplexData, CoxeterDiagram, CoxeterError, CoxeterGroup, GroupElement};
pub use lattice::{LatticeError, SupportLattice};
pub use rtree::{RTree, TreeError, TreePoint};
pub use simplicial::{Chain, HomologyGroup, IntegerMatrix, Simplex, SimplicialComplex, SimplicialError};
