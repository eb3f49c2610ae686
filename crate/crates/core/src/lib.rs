//! Spectral dynamics of pencils of operators from self-similar groups.
//!
//! The dihedral pencil z0 I + z1 a + z2 t is studied through the rational map
//! F on P^2, the Grigorchuk pencil through its restriction G to a 5-dimensional
//! slice. The crate classifies points into Julia/Fatou pieces, tracks
//! indeterminacy, and checks the dynamics against finite-level Koopman
//! representations.

pub mod classification;
pub mod dihedral;
pub mod error;
pub mod exact;
pub mod fixed_points;
pub mod geometry;
pub mod grigorchuk;
pub mod indeterminacy;
pub mod koopman;
pub mod poly;
pub mod render;
pub mod spectrum;
pub mod symeig;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{
    fs_distance, normalize, Affine3, Affine5, AffinePoint, ComplexScalar, Coords, ExtendedComplex,
    HomogeneousPoint, Point2, Point4,
};
