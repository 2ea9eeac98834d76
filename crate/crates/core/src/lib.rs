//! Exact polar chains on curves and planes.
//!
//! The crate is organised bottom-up: [`arith`] supplies exact rational and
//! number-field arithmetic, [`curves`] models the projective line and odd
//! hyperelliptic curves, [`complex`] builds polar chains and their homology,
//! [`surface`] and [`link`] handle plane arrangements and linking numbers in
//! three-space, and [`stokes`] is a floating-point quadrature oracle.

pub mod arith;
pub mod complex;
pub mod curves;
pub mod error;
pub mod link;
pub mod reproduce;
pub mod stokes;
pub mod surface;

pub use error::{PolarError, Result};
