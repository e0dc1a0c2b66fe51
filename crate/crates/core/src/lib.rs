//! Exact verification workbench for geometric transversal statements:
//! rational and complex-rational linear algebra, matroid oracles,
//! independence-complex homology, certificate-carrying linear programming,
//! dependency-pullback hypothesis checks and k-flat transversal search.

pub mod complexes;
pub mod geometry;
pub mod hypothesis;
pub mod lp;
pub mod matrix;
pub mod matroid;
pub mod scalar;
pub mod transversal;
