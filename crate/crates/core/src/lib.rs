//! Single-query hidden subgroup problem laboratory.
//!
//! Finite groups as Cayley tables, their irreducible representations and
//! Fourier transform, subgroup states produced by one equal-superposition
//! oracle query, and measurements that try to tell the states apart.

pub mod discrimination;
pub mod error;
pub mod group;
pub mod io;
pub mod linalg;
pub mod model;
pub mod rep;
pub mod verify;

pub use error::{HspError, Result};
