//! Geometric simulation of a twisting ribbon.
//!
//! The base curve is held by its curvature and torsion on an arclength grid.
//! A twist field `psi(sigma, u)` evolves by the characteristic initial-value
//! problem of the ribbon twist equation (sine-Gordon for constant width),
//! every evolution slice is rebuilt into a 3D curve, and a run stops once two
//! non-adjacent nodes come into contact.
//!
//! - [`curve`]: Frenet integration, shape estimation, indicatrix arclength,
//!   self-contact.
//! - [`ribbon`]: width profiles, the `nu` vector, and the algebraic links
//!   between `psi`, `k` and `v`.
//! - [`evolution`]: characteristic solver, direct frame evolution, shape
//!   trajectories and time reparameterization.
//! - [`soliton`]: closed-form antikinks, fitting and piecewise matching.
//! - [`io`], [`pipeline`], [`validation`]: config files, output formats,
//!   run orchestration and the self-check report.

pub mod curve;
pub mod error;
pub mod evolution;
pub mod io;
mod numeric;
pub mod pipeline;
pub mod ribbon;
pub mod soliton;
pub mod validation;

pub use error::{Error, Result};
