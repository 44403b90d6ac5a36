//! Exact engine for affine Weyl alcove reduction, Verlinde fusion rings,
//! Kirillov–Reshetikhin restrictions and the cluster algebras whose
//! variables they certify.

pub mod cartan;
pub mod cluster;
pub mod data;
pub mod error;
pub mod fusion;
pub mod repring;
pub mod verifier;
pub mod weyl;

pub use cartan::{CartanDatum, CartanType, Family};
pub use error::{Error, Result};
