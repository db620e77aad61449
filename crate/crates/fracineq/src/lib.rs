//! Numerical verification toolkit for fractional-integral
//! Hermite-Hadamard type inequalities under h-preinvexity hypotheses.
//!
//! The crate layers as follows:
//!
//! - [`specfun`]: gamma, log-gamma, beta and incomplete beta.
//! - [`quad`]: adaptive Gauss-Kronrod quadrature, including weighted
//!   rules for endpoint power singularities.
//! - [`fracint`]: left and right Riemann-Liouville operators.
//! - [`funclasses`]: h-classes, invexity maps, test-function families
//!   and the empirical h-preinvexity certifier.
//! - [`catalog`]: the exact derivative identities, the six generic
//!   bounds, and the printed corollary constants with their
//!   independent kernel-integral oracles.
//! - [`harness`]: deterministic scenario generation, batch
//!   verification, constant audits and counterexample search.
//! - [`cli`]: argument parsing, report emission, exit-code policy.

// `!(x > 0.0)` style checks are deliberate: they reject NaN along with
// out-of-domain values, which `x <= 0.0` would silently let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod cli;
pub mod error;
pub mod fracint;
pub mod funclasses;
pub mod harness;
pub mod quad;
pub mod specfun;

pub use catalog::{BoundReport, CertPolicy, CorollaryId, InequalityId};
pub use error::{Error, Result};
pub use funclasses::{EtaKind, Family, FunctionSpec, HClass, InvexityMap, Scenario};
pub use harness::{AuditReport, Classification, RunSummary};
pub use quad::{QuadConfig, QuadResult};
