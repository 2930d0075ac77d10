//! Finite marginal problems: given prescribed distributions over subsets of
//! observables, is there a joint distribution that has all of them as
//! marginals?
//!
//! The equality part is a linear system over the joint table. When it is
//! solvable its solutions are quasiprobabilities; an exact phase-one simplex
//! decides whether one of them is also non-negative.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactla::{self, int, RatMatrix, RatVector, Rational};
use crate::quasi::Status;
use crate::scalar::Scalar;

pub const DEFAULT_JOINT_CAP: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observable {
    pub name: String,
    pub cardinality: usize,
}

impl Observable {
    pub fn new(name: impl Into<String>, cardinality: usize) -> Self {
        Observable {
            name: name.into(),
            cardinality,
        }
    }
}

/// A prescribed table over `over` (indices into the observable list), stored
/// row-major with the first listed observable varying slowest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarginalConstraint {
    pub over: Vec<usize>,
    pub table: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarginalProblem {
    observables: Vec<Observable>,
    constraints: Vec<MarginalConstraint>,
    cap: u128,
}

impl MarginalProblem {
    pub fn new(observables: Vec<Observable>, constraints: Vec<MarginalConstraint>) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidProblem(msg));
        if observables.is_empty() {
            return invalid("no observables".into());
        }
        let mut names = HashSet::new();
        for o in &observables {
            if o.cardinality < 2 {
                return invalid(format!(
                    "observable {:?} has cardinality {} < 2",
                    o.name, o.cardinality
                ));
            }
            if !names.insert(o.name.as_str()) {
                return invalid(format!("duplicate observable name {:?}", o.name));
            }
        }
        for (k, c) in constraints.iter().enumerate() {
            if c.over.is_empty() {
                return invalid(format!("marginal {k} is over no observables"));
            }
            let mut seen = HashSet::new();
            for &i in &c.over {
                if i >= observables.len() {
                    return invalid(format!("marginal {k} refers to observable index {i}"));
                }
                if !seen.insert(i) {
                    return invalid(format!(
                        "marginal {k} lists observable {:?} twice",
                        observables[i].name
                    ));
                }
            }
            let len: usize = c.over.iter().map(|&i| observables[i].cardinality).product();
            if c.table.len() != len {
                return invalid(format!(
                    "marginal {k} has {} entries, expected {len}",
                    c.table.len()
                ));
            }
            if c.table.iter().any(Signed::is_negative) {
                return invalid(format!("marginal {k} has a negative entry"));
            }
            let sum: Rational = c.table.iter().sum();
            if !sum.is_one() {
                return invalid(format!("marginal {k} sums to {sum}, not 1"));
            }
        }
        Ok(MarginalProblem {
            observables,
            constraints,
            cap: DEFAULT_JOINT_CAP,
        })
    }

    pub fn with_cap(mut self, cap: u128) -> Self {
        self.cap = cap;
        self
    }

    pub fn observables(&self) -> &[Observable] {
        &self.observables
    }

    pub fn constraints(&self) -> &[MarginalConstraint] {
        &self.constraints
    }

    pub fn cardinalities(&self) -> Vec<usize> {
        self.observables.iter().map(|o| o.cardinality).collect()
    }

    pub fn joint_size(&self) -> u128 {
        self.observables
            .iter()
            .map(|o| o.cardinality as u128)
            .product()
    }
}

/// Outcome of each observable at a joint index (first observable slowest).
fn decode(mut idx: usize, cards: &[usize]) -> Vec<usize> {
    let mut out = vec![0; cards.len()];
    for (k, &c) in cards.iter().enumerate().rev() {
        out[k] = idx % c;
        idx /= c;
    }
    out
}

/// Cell index of a joint outcome in a table over `over`.
fn cell(outcome: &[usize], over: &[usize], cards: &[usize]) -> usize {
    over.iter().fold(0, |acc, &i| acc * cards[i] + outcome[i])
}

/// Sums a joint table down to the observables in `over`.
pub fn marginalize<T: Scalar>(joint: &[T], cards: &[usize], over: &[usize]) -> Vec<T> {
    let len: usize = over.iter().map(|&i| cards[i]).product();
    let mut out = vec![T::zero(); len];
    for (idx, v) in joint.iter().enumerate() {
        let c = cell(&decode(idx, cards), over, cards);
        out[c] = out[c].clone() + v.clone();
    }
    out
}

/// Product of independent single-observable distributions, first table
/// varying slowest.
pub fn product_distribution<T: Scalar>(singles: &[Vec<T>]) -> Vec<T> {
    singles.iter().fold(vec![T::one()], |acc, table| {
        acc.iter()
            .flat_map(|a| table.iter().map(move |b| a.clone() * b.clone()))
            .collect()
    })
}

/// Linear system `A x = b` over the joint table: one row per prescribed
/// cell plus a final normalization row.
///
/// With `drop_redundant`, the last cell of every table is omitted; it is
/// implied by the other cells and normalization.
pub fn build_constraint_system(
    prob: &MarginalProblem,
    drop_redundant: bool,
) -> Result<(RatMatrix, RatVector)> {
    let count = prob.joint_size();
    if count > prob.cap {
        return Err(Error::SizeCap {
            count,
            cap: prob.cap,
        });
    }
    let n = count as usize;
    let cards = prob.cardinalities();
    let outcomes: Vec<Vec<usize>> = (0..n).map(|i| decode(i, &cards)).collect();

    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs = Vec::new();
    for c in &prob.constraints {
        let cells = if drop_redundant {
            c.table.len() - 1
        } else {
            c.table.len()
        };
        let first = rows.len();
        rows.extend((0..cells).map(|_| vec![int(0); n]));
        for (j, o) in outcomes.iter().enumerate() {
            let k = cell(o, &c.over, &cards);
            if k < cells {
                rows[first + k][j] = int(1);
            }
        }
        rhs.extend(c.table[..cells].iter().cloned());
    }
    rows.push(vec![int(1); n]);
    rhs.push(int(1));

    let m = rows.len();
    let mat = RatMatrix::from_vec(m, n, rows.into_iter().flatten().collect())?;
    Ok((mat, RatVector(rhs)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityResult {
    pub status: Status,
    /// Non-negative joint table, present iff `status` is `Proper`.
    pub witness: Option<Vec<Rational>>,
    /// Dimension of the kernel of the constraint matrix.
    pub homogeneous_dim: usize,
}

/// Decides whether `{x : mat·x = rhs, x ≥ 0}` is nonempty, exactly.
pub fn lp_feasible(mat: &RatMatrix, rhs: &RatVector) -> FeasibilityResult {
    assert_eq!(mat.rows(), rhs.len(), "rhs length differs from row count");
    let homogeneous_dim = mat.cols() - exactla::rank(mat);
    let consistent = exactla::solve_consistent(mat, rhs)
        .expect("lengths checked")
        .is_some();
    if !consistent {
        return FeasibilityResult {
            status: Status::Inconsistent,
            witness: None,
            homogeneous_dim,
        };
    }
    let witness = phase_one(mat, rhs);
    FeasibilityResult {
        status: if witness.is_some() {
            Status::Proper
        } else {
            Status::QuasiOnly
        },
        witness,
        homogeneous_dim,
    }
}

/// Phase-one simplex with Bland's rule on a dense tableau. Returns a basic
/// feasible solution, or `None` when the artificial objective stays positive.
fn phase_one(mat: &RatMatrix, rhs: &RatVector) -> Option<Vec<Rational>> {
    let (m, n) = (mat.rows(), mat.cols());
    let width = n + m + 1;
    // rows 0..m: constraints, row m: reduced costs; last column: rhs
    let mut tab = vec![vec![int(0); width]; m + 1];
    for i in 0..m {
        let flip = rhs[i].is_negative();
        for j in 0..n {
            let v = mat[(i, j)].clone();
            tab[i][j] = if flip { -v } else { v };
        }
        tab[i][n + i] = int(1);
        tab[i][width - 1] = if flip {
            -rhs[i].clone()
        } else {
            rhs[i].clone()
        };
    }
    for j in (0..n).chain(std::iter::once(width - 1)) {
        let s: Rational = (0..m).map(|i| tab[i][j].clone()).sum();
        tab[m][j] = -s;
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    while let Some(enter) = (0..n + m).find(|&j| tab[m][j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if !tab[i][enter].is_positive() {
                continue;
            }
            let ratio = &tab[i][width - 1] / &tab[i][enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // phase one is bounded below by zero, so a pivot row always exists
        let (row, _) = leave.expect("phase-one objective is bounded");
        pivot(&mut tab, row, enter);
        basis[row] = enter;
    }

    if !tab[m][width - 1].is_zero() {
        return None;
    }
    let mut x = vec![int(0); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            x[b] = tab[i][width - 1].clone();
        }
    }
    Some(x)
}

fn pivot(tab: &mut [Vec<Rational>], row: usize, col: usize) {
    let inv = tab[row][col].recip();
    for v in tab[row].iter_mut() {
        *v *= &inv;
    }
    let pivot_row = tab[row].clone();
    for (i, r) in tab.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let f = r[col].clone();
        for (v, p) in r.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *v -= &f * p;
            }
        }
    }
}

/// Builds the constraint system (redundant rows kept) and runs the exact
/// feasibility test.
pub fn solve_problem(prob: &MarginalProblem) -> Result<FeasibilityResult> {
    let (mat, rhs) = build_constraint_system(prob, false)?;
    Ok(lp_feasible(&mat, &rhs))
}

/// Parses `"p/q"` fractions and plain decimals such as `"-0.125"` or
/// `"2.5e-3"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let err = || Error::ParseRational(s.to_string());
    let t = s.trim();
    if let Some((num, den)) = t.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| err())?;
        let den: BigInt = den.trim().parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(num, den));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(err());
    }
    let all: BigInt = format!("{int_part}{frac_part}")
        .parse()
        .map_err(|_| err())?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        Rational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}
