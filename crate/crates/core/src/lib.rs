//! Event-driven polygonal front tracking for the 1-D isentropic p-system
//! in Lagrangian coordinates,
//!
//! ```text
//! v_t - u_x = 0,    u_t + p(v)_x = 0,    p(v) = K v^(-gamma),
//! ```
//!
//! together with the structural checkers that machine-verify the scheme's
//! invariants on every run (wave-character preservation through crossings,
//! per-diamond geometry inequalities, monotonicity of the boundary
//! functional `a(t)`, and the linear-in-time specific-volume bound), plus a
//! closed-form oracle for the interaction of two centered rarefaction waves.
//!
//! The crate is `no_std`-compatible (`alloc` required); disable the default
//! `std` feature to use it in that mode. Float math falls back to `libm`.
//!
//! Layout:
//! - [`state`]: gas parameters and lattice states `(u, v) = (i/n, v_j)`.
//! - [`grid`]: the volume lattice `{v_k}` and polygonal pressure.
//! - [`riemann`]: the lattice Riemann solver and jump slope formulas.
//! - [`tracker`]: initial-data sampling and the event-driven front loop.
//! - [`character`]: rarefactive/compressive edge classification, districts.
//! - [`functional`]: `a(t)`, diamond inequalities, volume bound, life span.
//! - [`exact`]: hypergeometric/Legendre closed forms for the two-rarefaction
//!   interaction and its density decay curve.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod character;
pub mod exact;
mod fmath;
pub mod functional;
pub mod grid;
pub mod riemann;
pub mod special;
pub mod state;
pub mod tracker;

pub use grid::PressureGrid;
pub use state::{GasParams, StandardState};
pub use tracker::Trace;
