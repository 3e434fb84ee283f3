//! Nabla discrete fractional calculus on the unit grid.
//!
//! The crate is `no_std` (it needs `alloc`) and holds the numerical core:
//!
//! * [`kernel`]: rising factorials, Grünwald–Letnikov weight sequences,
//!   integer backward differences and summation-by-parts residuals.
//! * [`signal`]: [`SampledSignal`], a scalar or vector sequence on
//!   `a - h, …, a + len - 1`.
//! * [`operators`]: Grünwald–Letnikov, Riemann–Liouville and Caputo nabla
//!   differences, the Riemann–Liouville/Caputo bridge, modified-base,
//!   fixed-memory and variable-order variants.
//! * [`lyapunov`]: gap evaluators for the fractional Lyapunov inequalities,
//!   Young's inequality, SPD factorization and a seeded randomized suite.
//! * [`simulator`]: implicit stepping of `C∇^α x(k) = f(x(k))`.
//! * [`optimizer`]: fractional-order gradient descent built on the simulator.
//!
//! File formats, plotting and the command line live in the `nabla-fc` crate.
#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is used deliberately so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod kernel;
pub mod linalg;
pub mod lyapunov;
mod math;
pub mod operators;
pub mod optimizer;
pub mod signal;
pub mod simulator;

pub use error::{Error, Result};
pub use kernel::{WeightKind, WeightTable};
pub use linalg::Matrix;
pub use operators::{DefinitionKind, Operator, VariableOrder};
pub use signal::{GridIndex, SampledSignal};
