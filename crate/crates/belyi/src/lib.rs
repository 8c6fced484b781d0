//! Core combinatorics (build in progress).
pub mod dessin;
pub mod enumerate;
pub mod ansatz;
pub mod error;
pub mod bigc;
pub mod catalog;
pub mod group;
pub mod linalg;
pub mod lll;
pub mod modular;
pub mod numfield;
pub mod recognize;
pub mod series;
pub mod verify;
pub mod perm;
pub mod pipeline;

pub use dessin::{Dessin, Passport};
pub use error::{Error, Result};
pub use perm::Permutation;
