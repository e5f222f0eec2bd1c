//! Analysis of two-party secure computation of randomized functions.
//!
//! Alice holds `X`, Bob holds `Y`, and Bob must output `Z ~ p(z|x,y)` such that
//! neither party learns more about the other's data than its own input (and,
//! for Bob, output) already reveals. This crate decides whether a problem
//! `(p_XY, p_Z|XY)` admits such a protocol, builds the characteristic graphs
//! that govern communication cost, computes the optimal rates, synthesizes
//! one-message protocols and audits them exactly.

#![allow(clippy::needless_range_loop)]

pub mod blockcoding;
pub mod catalog;
pub mod characterize;
mod error;
pub mod graphs;
pub mod probmodel;
pub mod protocols;
pub mod random;
pub mod rates;

pub use error::{Error, Result};
pub use graphs::{Coloring, Graph, IndependentSet, Which};
pub use probmodel::{JointPMF, ProblemSpec, Rational, ValidatedProblem};
pub use protocols::{AuditReport, OneShotProtocol, PrefixCode};
pub use rates::{IndependentSetChannel, RateReport};
