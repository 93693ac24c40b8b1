//! Affine fusion rings at fixed level: weights, S-matrices, Kac-Walton
//! fusion, fusion-symmetries and isomorphisms.

pub mod characters;
pub mod error;
pub mod fusion;
pub mod isomorphism;
pub mod liealg;
pub mod perm;
pub mod ring;
pub mod search;
pub mod symmetries;
pub mod verify;
pub mod weights;

pub use error::{FusionError, Result};
