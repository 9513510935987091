//! Minimum excitation design and direct data-driven property identification
//! for discrete-time linear systems `x⁺ = A·x + B·u`.
//!
//! Everything is exact over the rationals except eigenvalue-based tests, which
//! go through [`numerics::spectral_radius`] and [`numerics::pbh_full_rank`].

#![no_std]

extern crate alloc;

pub mod adversary;
pub mod harness;
pub mod identify;
pub mod numerics;
pub mod properties;
pub mod richness;
