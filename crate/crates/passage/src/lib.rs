//! Distributions of the first level-crossing time of a compound renewal
//! process net of linear drift.
//!
//! The crate computes `P{τ(u,c) ≤ t}`, the probability that the jump
//! process minus drift `c·s` crosses level `u` by horizon `t`, through
//! several routes that cross-validate each other:
//!
//! * [`exact`]: closed-form Type I/II/III expressions when inter-renewal
//!   times and jumps are exponential; the ground truth for everything else.
//! * [`classic`]: the normal approximation (on both sides of the critical
//!   rate) and the moment-matched diffusion approximation.
//! * [`ig`]: the inverse-Gaussian kernel family: conditional kernel, its
//!   integral form, t = ∞ limits, the critical-rate closed forms, the
//!   unconditional convolution, and the Teugels-type large-t expansion.
//! * [`walk`]: the random walk with random displacements: position law,
//!   hitting-time densities, and the decomposition that re-derives Type II.
//! * [`mc`]: an event-driven Monte Carlo oracle for arbitrary laws with
//!   reproducible, scheduling-independent parallel streams.
//! * [`capital`]: inversion of `P{τ(u,c) ≤ t} = α` for the level `u`.

pub mod bessel;
pub mod capital;
pub mod classic;
pub mod error;
pub mod exact;
pub mod ig;
pub mod law;
pub mod mc;
pub mod quad;
pub mod special;
pub mod walk;

pub use capital::{solve_u, CapitalModel, CapitalQuery};
pub use classic::{DiffusionParams, MomentConstants};
pub use error::{Error, Result};
pub use exact::{ExpModel, FirstPassageQuery};
pub use ig::{RenewalMoments, TeugelsConstants};
pub use law::LawSpec;
pub use mc::EstimateCi;
pub use special::{DefectiveIgParams, IgParams};
pub use walk::WalkParams;
