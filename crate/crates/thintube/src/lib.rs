//! Effective one-dimensional Schrödinger operators for thin Dirichlet tubes
//! with varying cross-section around a closed curve, together with a direct
//! discretization of the full tube for verification.
//!
//! The crate is organized as a set of strategy registries: cross-section
//! families (`fiber`), reference-domain shapes (`fiber::reference`), and
//! experiment modes (`harness`) are all trait objects registered by name and
//! selected at runtime from a JSON config.

pub mod error;
pub mod geometry;
pub mod linalg;
pub mod profile;

pub mod effective;
pub mod fiber;
pub mod harness;
pub mod tube;

pub use error::{Error, Result};
