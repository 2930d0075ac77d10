//! Joint quasiprobability distributions for pairwise-prescribed marginals,
//! exact feasibility of a proper joint distribution, and the Bell
//! inequalities of the spin singlet.
//!
//! * [`exactla`]: exact rational rank, kernels, pseudoinverse.
//! * [`singlet`]: quantum pair tables for three measurement axes.
//! * [`quasi`]: the three-observable family `x0 + t·xh` and its classification.
//! * [`bellcheck`]: correlation-form inequalities and the three-way equivalence.
//! * [`marginal`]: general finite marginal problems and the exact simplex.
//! * [`cli`]: report generation behind the `bellquasi` binary.

pub mod bellcheck;
pub mod cli;
pub mod error;
pub mod exactla;
pub mod marginal;
pub mod quasi;
pub mod scalar;
pub mod singlet;

pub use error::{Error, Result};
pub use exactla::{RatMatrix, RatVector, Rational};
pub use quasi::{Classification, QuasiFamily, Status};
pub use scalar::Scalar;
pub use singlet::{BellMarginals, CorrelationTriple, Direction};
