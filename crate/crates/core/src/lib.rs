//! Discrete power-law tail analysis for count data.
//!
//! The crate fits a discrete power law above a KS-selected cutoff, attaches
//! bootstrap standard errors, runs a semi-parametric goodness-of-fit test and
//! compares the power law against six alternative tail families with
//! likelihood-ratio tests. [`pipeline`] strings the stages together per field
//! and renders the reports.

// Guards are written as `!(x > lo)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod gof;
pub mod models;
pub mod optim;
pub mod pipeline;
pub mod plfit;
pub mod seeds;
pub mod select;
pub mod specfun;

pub use error::{Error, Result};
