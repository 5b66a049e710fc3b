//! Information-theoretic generalization-error bounds for learning algorithms
//! whose training data lives on a finite alphabet.
//!
//! The crate is organised bottom-up:
//!
//! - [`types`]: method-of-types primitives (count vectors, enumeration, dataset
//!   distance, multinomial type probabilities).
//! - [`divergence`]: exact KL divergence and the mixture variational bounds.
//! - [`covering`]: grid covers of the count lattice with certified radii.
//! - [`privacy`]: KL-stability of ε-DP / μ-GDP algorithms and finite test mechanisms.
//! - [`bounds`]: closed-form bound catalog with regime tracking.
//! - [`oracle`]: brute-force mutual information and generalization error, used to
//!   turn every bound into an assertable check.
//!
//! All information quantities are in nats.

pub mod bounds;
pub mod covering;
pub mod divergence;
mod error;
pub mod oracle;
pub mod privacy;
mod reduce;
pub mod types;

pub use error::{Error, Result};
