//! Deformations of dg Lie algebra morphisms, Cartan homotopies and period maps
//! over Artin rings, with exact rational arithmetic throughout.

pub mod artin;
pub mod cartan;
pub mod cli;
pub mod cone;
pub mod error;
pub mod dgla;
pub mod endo;
pub mod graded;
pub mod io;
pub mod lie;
pub mod linalg;
pub mod models;
pub mod period;
pub mod report;
pub mod samples;
pub mod scalar;

pub use artin::{ArtinAlgebra, ArtinElement};
pub use error::{Error, Result};
pub use scalar::Q;
