//! Steady states and currents of boundary-driven XXZ/XXX spin-1/2 chains
//! under Lindblad dynamics, dense and exact up to 6 sites.
//!
//! The usual path through the crate: build a [`model::ChainModel`] and a
//! [`drive::DriveSpec`], solve with [`lindblad::steady_state`], then read
//! currents off with [`observables::measure`]. The [`experiments`] module
//! wraps the standard studies (bath inversion, closed-form benchmarks,
//! parity scans, the symmetry suite); [`config`] and [`report`] give them
//! a JSON-config frontend used by the `lindblad-chain` binary.

pub mod config;
pub mod drive;
pub mod error;
pub mod experiments;
pub mod lindblad;
pub mod model;
pub mod observables;
pub mod pauli;
pub mod report;
pub mod symmetry;

pub use error::{Error, Result};
