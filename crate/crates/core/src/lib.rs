//! Construction, correction, and stability certification of multilayer
//! Allen-Cahn solutions on the hyperbolic plane.
//!
//! The pipeline: solve the one-dimensional layer ODE (`profile`), place
//! disjoint geodesics and label the complementary regions (`geometry`,
//! `gluing`), blend pulled-back layers into an approximate solution with a
//! partition of unity (`gluing`), then correct it to a genuine solution of
//! -Lap u + f(u) = 0 on a conformal disk grid and certify spectral stability
//! (`pdesolve`).

pub mod config;
pub mod error;
pub mod geometry;
pub mod gluing;
pub mod pdesolve;
pub mod potential;
pub mod profile;
pub mod sampling;

pub use error::{Error, Result};
