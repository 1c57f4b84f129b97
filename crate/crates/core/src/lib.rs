//! Single-error-correcting transmission over discrete memoryless channels
//! with noiseless feedback.
//!
//! The crate is `no_std` (it only needs `alloc`) and purely combinatorial:
//!
//! * [`channel`]: error graphs, words, nonadaptive codes, clouds and free points.
//! * [`search`]: F-optimal single-asymmetric-error codes, Hamming codes and
//!   exact constant-weight code sizes.
//! * [`bounds`]: the weight-distribution integer program bounding free points.
//! * [`strategy`]: executable feedback strategies (one-feedback assembly from a
//!   code family, the weight-class optimizers, the double-and-delete lift and the
//!   complete-feedback count).
//! * [`games`]: exact dynamic-programming oracles for the one-lie and half-lie
//!   search games.
//! * [`verify`]: exhaustive single-error adversary for strategies.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bitset;
pub mod bounds;
pub mod channel;
pub mod clique;
pub mod constant_weight;
pub mod games;
pub mod math;
pub mod search;
pub mod strategy;
pub mod verify;

pub use bounds::{BoundProblem, WeightDistribution};
pub use channel::{ErrorGraph, NonadaptiveCode, Word};
pub use strategy::{CodeFamily, FeedbackStrategy};
