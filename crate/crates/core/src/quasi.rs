//! Joint quasiprobabilities for the three-observable Bell problem.
//!
//! The unknown is the joint table `x` of `(A₁, B₂, C₂)`, indexed
//! `+++, ++−, +−+, +−−, −++, −+−, −−+, −−−`. It must reproduce the three
//! prescribed pair tables, which gives `M x = p` with the fixed 10×8
//! matrix `M` of rank 7. Every solution has the form `x0 + t·xh` where
//! `x0 = M⁺p` and `xh` spans the kernel; a proper probability exists iff
//! some `t` makes all eight entries non-negative.

use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::exactla::{self, RatMatrix, RatVector};
use crate::scalar::Scalar;
use crate::singlet::PairTable;

pub const DEFAULT_EPS: f64 = 1e-10;

/// Kernel direction of `M`.
pub const XH: [i64; 8] = [-1, 1, 1, -1, 1, -1, -1, 1];

const M_ROWS: [[i64; 8]; 10] = [
    [1, 0, 0, 0, 1, 0, 0, 0],
    [0, 1, 0, 0, 0, 1, 0, 0],
    [0, 0, 1, 0, 0, 0, 1, 0],
    [1, 0, 1, 0, 0, 0, 0, 0],
    [0, 1, 0, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 1, 0],
    [1, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 1, 0, 0],
    [1, 1, 1, 1, 1, 1, 1, 1],
];

/// The fixed 10×8 constraint matrix: three `BC` rows, three `AC` rows,
/// three `AB` rows and the normalization row.
pub fn build_matrix() -> RatMatrix {
    let rows: Vec<&[i64]> = M_ROWS.iter().map(|r| r.as_slice()).collect();
    RatMatrix::from_int_rows(&rows)
}

pub(crate) struct BellSystem {
    pub matrix: RatMatrix,
    pub pinv: RatMatrix,
    pub pinv_f64: Vec<f64>,
    pub left_null: Vec<RatVector>,
}

pub(crate) fn system() -> &'static BellSystem {
    static SYSTEM: OnceLock<BellSystem> = OnceLock::new();
    SYSTEM.get_or_init(|| {
        let matrix = build_matrix();
        let pinv = exactla::pseudoinverse(&matrix);
        let pinv_f64 = pinv.entries().iter().map(f64::from_rational).collect();
        let left_null = exactla::left_null_space(&matrix);
        BellSystem {
            matrix,
            pinv,
            pinv_f64,
            left_null,
        }
    })
}

/// Shared copy of [`build_matrix`].
pub fn bell_matrix() -> &'static RatMatrix {
    &system().matrix
}

/// `M⁺`, computed once.
pub fn bell_pseudoinverse() -> &'static RatMatrix {
    &system().pinv
}

/// Which of the three outcomes a marginal vector admits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Status {
    /// The equality constraints have no solution at all.
    Inconsistent,
    /// Solutions exist but every one has a negative entry.
    QuasiOnly,
    /// A non-negative joint distribution exists.
    Proper,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Inconsistent => "Inconsistent",
            Status::QuasiOnly => "QuasiOnly",
            Status::Proper => "Proper",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Consistency<T> {
    /// `(BC++ + BC+−) − (AB++ + AB−+)`, `(AC++ + AC+−) − (AB++ + AB+−)`,
    /// `(BC++ + BC−+) − (AC++ + AC−+)`.
    pub residuals: [T; 3],
    pub consistent: bool,
}

/// Evaluates the three consistency equations the pair tables must satisfy
/// for `M x = p` to be solvable.
pub fn check_consistency<T: Scalar>(p: &[T; 10], eps: f64) -> Consistency<T> {
    let s = |i: usize, j: usize| p[i].clone() + p[j].clone();
    let residuals = [s(0, 1) - s(6, 8), s(3, 4) - s(6, 7), s(0, 2) - s(3, 5)];
    let tol = T::from_f64(eps);
    let consistent = residuals.iter().all(|r| r.abs() <= tol);
    Consistency {
        residuals,
        consistent,
    }
}

/// Same decision as [`check_consistency`], computed as orthogonality of `p`
/// to the left null space of `M`.
pub fn consistent_by_left_null_space<T: Scalar>(p: &[T; 10], eps: f64) -> bool {
    let tol = T::from_f64(eps);
    system().left_null.iter().all(|v| {
        let dot = v.0.iter().zip(p).fold(T::zero(), |acc, (a, b)| {
            acc + T::from_rational(a) * b.clone()
        });
        dot.abs() <= tol
    })
}

/// `M x`.
pub fn marginal_vector<T: Scalar>(x: &[T; 8]) -> [T; 10] {
    std::array::from_fn(|i| {
        M_ROWS[i]
            .iter()
            .zip(x)
            .filter(|(&m, _)| m != 0)
            .fold(T::zero(), |acc, (_, v)| acc + v.clone())
    })
}

/// `x = x0 + t·xh`, restricted to the interval where it is non-negative.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiFamily<T> {
    pub x0: [T; 8],
    pub xh: [i64; 8],
    pub t_lo: T,
    pub t_hi: T,
}

impl<T: Scalar> QuasiFamily<T> {
    pub fn point(&self, t: &T) -> [T; 8] {
        std::array::from_fn(|i| self.x0[i].clone() + T::from_i64(self.xh[i]) * t.clone())
    }

    /// The non-negativity interval is nonempty up to `eps`.
    pub fn has_proper_member(&self, eps: f64) -> bool {
        self.t_lo <= self.t_hi.clone() + T::from_f64(eps)
    }

    /// Parameter closest to 0 inside `[t_lo, t_hi]`.
    pub fn preferred_parameter(&self) -> T {
        let zero = T::zero();
        let clipped = T::min_of(zero, self.t_hi.clone());
        T::max_of(clipped, self.t_lo.clone())
    }
}

/// The marginals fail the consistency equations; carries the residuals.
#[derive(Clone, Debug, PartialEq)]
pub struct Inconsistent<T>(pub [T; 3]);

impl<T: Scalar> fmt::Display for Inconsistent<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "inconsistent marginals (residuals {:e}, {:e}, {:e})",
            self.0[0].to_f64(),
            self.0[1].to_f64(),
            self.0[2].to_f64()
        )
    }
}

pub fn pinv_times<T: Scalar>(p: &[T; 10]) -> [T; 8] {
    let sys = system();
    let pinv = T::select_entries(sys.pinv.entries(), &sys.pinv_f64);
    std::array::from_fn(|i| {
        (0..10).fold(T::zero(), |acc, j| {
            acc + pinv[i * 10 + j].clone() * p[j].clone()
        })
    })
}

/// Pseudoinverse solution plus the feasible interval of the kernel
/// parameter.
pub fn solve_family<T: Scalar>(p: &[T; 10], eps: f64) -> Result<QuasiFamily<T>, Inconsistent<T>> {
    debug_assert!(
        (p[9].to_f64() - 1.0).abs() < 1e-12,
        "normalization entry must be 1"
    );
    let consistency = check_consistency(p, eps);
    if !consistency.consistent {
        return Err(Inconsistent(consistency.residuals));
    }
    let x0 = pinv_times(p);
    let mut t_lo: Option<T> = None;
    let mut t_hi: Option<T> = None;
    for (x, &h) in x0.iter().zip(XH.iter()) {
        if h > 0 {
            let bound = -x.clone();
            t_lo = Some(match t_lo {
                Some(cur) => T::max_of(cur, bound),
                None => bound,
            });
        } else {
            let bound = x.clone();
            t_hi = Some(match t_hi {
                Some(cur) => T::min_of(cur, bound),
                None => bound,
            });
        }
    }
    Ok(QuasiFamily {
        x0,
        xh: XH,
        t_lo: t_lo.expect("xh has positive entries"),
        t_hi: t_hi.expect("xh has negative entries"),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification<T> {
    pub tag: Status,
    /// A valid joint distribution, present iff `tag` is `Proper`.
    pub witness: Option<[T; 8]>,
    pub family: Option<QuasiFamily<T>>,
    pub consistency: Consistency<T>,
}

/// Decides whether `p` admits no joint table, only quasiprobabilities, or a
/// proper joint distribution. The witness uses `t = 0` when that point is
/// non-negative, otherwise the nearest end of the interval.
pub fn classify<T: Scalar>(p: &[T; 10], eps: f64) -> Classification<T> {
    let consistency = check_consistency(p, eps);
    match solve_family(p, eps) {
        Err(_) => Classification {
            tag: Status::Inconsistent,
            witness: None,
            family: None,
            consistency,
        },
        Ok(family) => {
            let (tag, witness) = if family.has_proper_member(eps) {
                (
                    Status::Proper,
                    Some(family.point(&family.preferred_parameter())),
                )
            } else {
                (Status::QuasiOnly, None)
            };
            Classification {
                tag,
                witness,
                family: Some(family),
                consistency,
            }
        }
    }
}

/// All three pair tables implied by a joint table, `(−,−)` cells included.
#[derive(Clone, Debug, PartialEq)]
pub struct PairMarginals<T> {
    pub ab: PairTable<T>,
    pub ac: PairTable<T>,
    /// Over `(B₂, C₂)`.
    pub bc: PairTable<T>,
}

pub fn reconstruct_marginals<T: Scalar>(x: &[T; 8]) -> PairMarginals<T> {
    let mut ab: PairTable<T> = std::array::from_fn(|_| std::array::from_fn(|_| T::zero()));
    let mut ac = ab.clone();
    let mut bc = ab.clone();
    for (idx, v) in x.iter().enumerate() {
        let (a, b, c) = (idx >> 2, (idx >> 1) & 1, idx & 1);
        ab[a][b] = ab[a][b].clone() + v.clone();
        ac[a][c] = ac[a][c].clone() + v.clone();
        bc[b][c] = bc[b][c].clone() + v.clone();
    }
    PairMarginals { ab, ac, bc }
}
