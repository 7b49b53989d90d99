//! Numerics for two-qubit quantum discord and the interferometric
//! zero-visibility protocol.
//!
//! Everything in this crate is a pure function of its inputs (and an explicit
//! [`RandomSeed`] where sampling is involved). The crate is `no_std` and only
//! needs `alloc`; file formats, CSV output and the command line live in the
//! `discordlab` crate.
//!
//! Basis order for every 4×4 matrix is `(↑↑, ↑↓, ↓↑, ↓↓)` with subsystem A as
//! the slow (left) index. All entropies are in bits.

#![no_std]
// Float math comes from `num_traits::Float` (libm). When std is linked
// (tests, std dependents) its inherent f64 methods shadow the trait, hence
// the `allow(unused_imports)` on those imports.

extern crate alloc;

pub mod discord;
mod error;
pub mod optimize;
pub mod protocol;
pub mod qmat;
mod rng;
pub mod shots;
pub mod states;
pub mod tol;

pub use error::{Error, Result};
pub use rng::RandomSeed;
