//! Symbolic pipeline that turns a parametric rational ODE model into a
//! locally IO-identifiable reparametrization of the same shape, then certifies
//! input-output equivalence numerically.
//!
//! Layering, bottom up:
//! * [`poly`] / [`ratfun`] — exact sparse arithmetic over big rationals;
//! * [`groebner`] — monomial orders, Buchberger, saturation, elimination;
//! * [`model`] — the `.ode` text format and validated in-memory models;
//! * [`lie`] — Lie derivatives, Jacobian, randomized rank certificates;
//! * [`ioeq`] — input-output equations and the identifiable field;
//! * [`specialize`] — the specialization system and its solutions;
//! * [`transform`] — state transformations and dimension reduction;
//! * [`verify`] — fixed-step numeric cross-validation;
//! * [`pipeline`] — orchestration and machine-readable reports.

pub mod error;
pub mod exec;
pub mod groebner;
pub mod ioeq;
pub mod lie;
pub mod model;
pub mod modp;
pub mod pipeline;
pub mod poly;
pub mod ratfun;
pub mod specialize;
pub mod transform;
pub mod vars;
pub mod verify;

pub use error::{Error, ParseError, Result};
