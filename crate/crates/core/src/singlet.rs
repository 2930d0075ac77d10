//! Pairwise outcome distributions of the spin singlet.
//!
//! Alice measures `A = α·σ` on particle 1, Bob measures `B = β·σ` or
//! `C = γ·σ` on particle 2, and the counterfactual `B₁ = β·σ` on particle 1
//! is tied to `B₂` by `B₂ = −B₁`. The `BC` table produced here is always the
//! distribution of `(B₂, C₂)`, which is why it is built with a sign flip
//! relative to the measured `⟨B₁C₂⟩` correlation.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MIN_NORM: f64 = 1e-9;

/// Unit measurement axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Direction {
    x: f64,
    y: f64,
    z: f64,
}

impl Direction {
    /// Normalizes `(x, y, z)`. Vectors shorter than 1e-9 are rejected.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::NonFiniteDirection);
        }
        let norm = (x * x + y * y + z * z).sqrt();
        if norm < MIN_NORM {
            return Err(Error::ZeroDirection(norm));
        }
        Ok(Direction {
            x: x / norm,
            y: y / norm,
            z: z / norm,
        })
    }

    /// Axis in the x–z plane at `degrees` from +z towards +x.
    pub fn coplanar(degrees: f64) -> Self {
        let (s, c) = degrees.to_radians().sin_cos();
        Direction { x: s, y: 0.0, z: c }
    }

    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }
}

/// `⟨AB⟩`, `⟨AC⟩`, `⟨B₁C₂⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationTriple<T> {
    pub ab: T,
    pub ac: T,
    pub bc: T,
}

impl<T: Scalar> CorrelationTriple<T> {
    pub fn new(ab: T, ac: T, bc: T) -> Self {
        CorrelationTriple { ab, ac, bc }
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> CorrelationTriple<U> {
        CorrelationTriple {
            ab: f(&self.ab),
            ac: f(&self.ac),
            bc: f(&self.bc),
        }
    }

    pub fn in_range(&self, eps: f64) -> bool {
        let lim = T::one() + T::from_f64(eps);
        [&self.ab, &self.ac, &self.bc]
            .into_iter()
            .all(|c| c.abs() <= lim)
    }
}

impl CorrelationTriple<f64> {
    pub fn from_directions(alpha: &Direction, beta: &Direction, gamma: &Direction) -> Self {
        CorrelationTriple {
            ab: correlation(alpha, beta),
            ac: correlation(alpha, gamma),
            bc: correlation(beta, gamma),
        }
    }
}

/// 2×2 joint table; index 0 is outcome `+1`, index 1 is `−1`.
pub type PairTable<T> = [[T; 2]; 2];

/// Sign of outcome index: 0 → +1, 1 → −1.
pub(crate) fn outcome_sign(i: usize) -> i64 {
    if i == 0 {
        1
    } else {
        -1
    }
}

/// Singlet expectation `⟨(u·σ₁)(v·σ₂)⟩ = −u·v`.
pub fn correlation(u: &Direction, v: &Direction) -> f64 {
    (-u.dot(v)).clamp(-1.0, 1.0)
}

/// Table of a pair with correlation `corr`:
/// entry `(a, b)` is `(1 + ab·corr)/4`, or `(1 − ab·corr)/4` with `flip`.
pub fn pair_table<T: Scalar>(corr: &T, flip: bool) -> PairTable<T> {
    let quarter = T::from_f64(0.25);
    let entry = |a: usize, b: usize| {
        let mut s = outcome_sign(a) * outcome_sign(b);
        if flip {
            s = -s;
        }
        (T::one() + T::from_i64(s) * corr.clone()) * quarter.clone()
    };
    [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
}

/// The three prescribed pair tables and the right-hand side `p` of the
/// constraint system.
#[derive(Clone, Debug, PartialEq)]
pub struct BellMarginals<T> {
    pub pab: PairTable<T>,
    pub pac: PairTable<T>,
    /// Distribution of `(B₂, C₂)`.
    pub pbc: PairTable<T>,
    /// `(BC++, BC+−, BC−+, AC++, AC+−, AC−+, AB++, AB+−, AB−+, 1)`
    pub p_vector: [T; 10],
}

impl<T: Scalar> BellMarginals<T> {
    pub fn from_correlations(corr: &CorrelationTriple<T>) -> Self {
        let pab = pair_table(&corr.ab, false);
        let pac = pair_table(&corr.ac, false);
        let pbc = pair_table(&corr.bc, true);
        let p_vector = pack_p_vector(&pab, &pac, &pbc);
        BellMarginals {
            pab,
            pac,
            pbc,
            p_vector,
        }
    }
}

/// Packs three pair tables into the 10-entry marginal vector, dropping
/// each `(−,−)` cell.
pub fn pack_p_vector<T: Scalar>(
    pab: &PairTable<T>,
    pac: &PairTable<T>,
    pbc: &PairTable<T>,
) -> [T; 10] {
    [
        pbc[0][0].clone(),
        pbc[0][1].clone(),
        pbc[1][0].clone(),
        pac[0][0].clone(),
        pac[0][1].clone(),
        pac[1][0].clone(),
        pab[0][0].clone(),
        pab[0][1].clone(),
        pab[1][0].clone(),
        T::one(),
    ]
}

pub fn bell_marginals(
    alpha: &Direction,
    beta: &Direction,
    gamma: &Direction,
) -> BellMarginals<f64> {
    BellMarginals::from_correlations(&CorrelationTriple::from_directions(alpha, beta, gamma))
}
