//! Recovering optimal vertex solutions of linear programs from approximate
//! interior solutions.
//!
//! Two crossover families are provided:
//!
//! - **network crossover** ([`colgen`], [`netflow`]): flow ratios rank the
//!   columns of a minimum-cost-flow or general LP; column generation with a
//!   big-M start identifies a nearby basis and re-optimizes it, and for
//!   transport problems a maximum-ratio spanning tree plus a push phase gives
//!   a basis directly;
//! - **perturbation crossover** ([`perturb`]): the optimal partition is
//!   estimated from an interior primal–dual pair and a randomly perturbed
//!   problem on the estimated face is solved, which has a unique optimal
//!   vertex almost surely.
//!
//! Supporting pieces: a bounded revised simplex ([`simplex`]), a
//! predictor–corrector interior-point method ([`ipm`]), Sinkhorn iterations
//! ([`approx`]), generators and file formats ([`instances`]) and the
//! benchmark/pipeline layer used by the command-line tool ([`pipeline`]).

// `!(x >= 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod approx;
pub mod colgen;
pub mod error;
pub mod instances;
pub mod ipm;
pub mod linalg;
pub mod model;
pub mod netflow;
pub mod perturb;
pub mod pipeline;
pub mod simplex;

pub use error::{Error, Result};
pub use model::{Arc, McfProblem, OtProblem, ShiftMap, StandardLp, WbMeasure, WbProblem};
pub use simplex::{BasisState, Limits, SimplexResult, SimplexStatus, VarStatus};
