//! Character theory of fusion categories from fusion-ring data.
//!
//! The crate computes class functions, central elements and the Fourier
//! transform between them, the Wedderburn decomposition of the class function
//! algebra with its conjugacy class sums, and the correspondence between fusion
//! subcategories and unitary subalgebras of the adjoint algebra. Finite groups
//! provide `Rep(G)` and `Vec_G` inputs together with a classical oracle.

pub mod char_theory;
pub mod error;
pub mod fusion_ring;
pub mod groups;
pub mod linalg;
pub mod report;
pub mod subalg;
pub mod verify;
pub mod wedderburn;

#[cfg(test)]
mod test_rings;

pub use error::{Error, Result};
