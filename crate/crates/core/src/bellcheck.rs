//! Correlation-form feasibility tests for the singlet Bell problem.
//!
//! With singlet-symmetric pair tables the non-negativity of `x0 + t·xh`
//! reduces to eight linear inequalities in `⟨AB⟩, ⟨AC⟩, ⟨BC⟩` and the
//! kernel parameter, and those reduce further to
//!
//! ```text
//! 1 + ⟨AB⟩ ≥ |⟨AC⟩ − ⟨BC⟩|
//! 1 − ⟨AB⟩ ≥ |⟨AC⟩ + ⟨BC⟩|
//! ```

use serde::Serialize;

use crate::exactla::{RatVector, Rational};
use crate::marginal;
use crate::quasi::{self, Status};
use crate::scalar::Scalar;
use crate::singlet::{BellMarginals, CorrelationTriple};

/// The eight values `8·(x0 + t·xh)` with `c = 8t`, one per joint outcome in
/// `+++ … −−−` order. All are non-negative iff the joint table at that
/// parameter is a probability distribution.
pub fn eight_inequalities<T: Scalar>(corr: &CorrelationTriple<T>, c: &T) -> [T; 8] {
    let p = BellMarginals::from_correlations(corr).p_vector;
    let x0 = quasi::pinv_times(&p);
    let eight = T::from_i64(8);
    std::array::from_fn(|i| eight.clone() * x0[i].clone() + T::from_i64(quasi::XH[i]) * c.clone())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BellVerdict<T> {
    /// `1 + ⟨AB⟩`
    pub ineq1_lhs: T,
    /// `|⟨AC⟩ − ⟨BC⟩|`
    pub ineq1_rhs: T,
    /// `1 − ⟨AB⟩`
    pub ineq2_lhs: T,
    /// `|⟨AC⟩ + ⟨BC⟩|`
    pub ineq2_rhs: T,
    pub satisfied: bool,
    /// Smallest `lhs − rhs`; negative means violation.
    pub margin: T,
}

pub fn bell_pair<T: Scalar>(corr: &CorrelationTriple<T>, eps: f64) -> BellVerdict<T> {
    let one = T::one();
    let ineq1_lhs = one.clone() + corr.ab.clone();
    let ineq1_rhs = (corr.ac.clone() - corr.bc.clone()).abs();
    let ineq2_lhs = one - corr.ab.clone();
    let ineq2_rhs = (corr.ac.clone() + corr.bc.clone()).abs();
    let margin = T::min_of(
        ineq1_lhs.clone() - ineq1_rhs.clone(),
        ineq2_lhs.clone() - ineq2_rhs.clone(),
    );
    let satisfied = margin >= -T::from_f64(eps);
    BellVerdict {
        ineq1_lhs,
        ineq1_rhs,
        ineq2_lhs,
        ineq2_rhs,
        satisfied,
        margin,
    }
}

/// Verdicts of the three independent deciders on one correlation triple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Equivalence {
    pub bell_satisfied: bool,
    pub interval_nonempty: bool,
    pub lp_feasible: bool,
}

impl Equivalence {
    pub fn agree(&self) -> bool {
        self.bell_satisfied == self.interval_nonempty && self.interval_nonempty == self.lp_feasible
    }
}

/// Runs the reduced Bell inequalities, the kernel-interval test and the
/// exact simplex on the same exact triple.
pub fn equivalence_verdicts(corr: &CorrelationTriple<Rational>, eps: f64) -> Equivalence {
    let bell_satisfied = bell_pair(corr, eps).satisfied;
    let p = BellMarginals::from_correlations(corr).p_vector;
    let interval_nonempty = quasi::solve_family(&p, eps)
        .map(|f| f.has_proper_member(eps))
        .unwrap_or(false);
    let lp = marginal::lp_feasible(quasi::bell_matrix(), &RatVector(p.to_vec()));
    Equivalence {
        bell_satisfied,
        interval_nonempty,
        lp_feasible: lp.status == Status::Proper,
    }
}

/// `true` iff all three deciders agree.
pub fn equivalence_check(corr: &CorrelationTriple<Rational>, eps: f64) -> bool {
    equivalence_verdicts(corr, eps).agree()
}
