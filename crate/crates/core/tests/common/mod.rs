//! Independent oracles for the integration suites. Nothing here calls the
//! code paths it is used to check.

#![allow(dead_code)]

use bellquasi::exactla::{RatMatrix, Rational};
use bellquasi::Direction;
use num_bigint::BigInt;
use num_complex::Complex64;
use rand::Rng;

type C2 = [[Complex64; 2]; 2];
type C4 = [[Complex64; 4]; 4];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn spin_along(u: [f64; 3]) -> C2 {
    // u·σ with the usual Pauli matrices
    [
        [c(u[2], 0.0), c(u[0], -u[1])],
        [c(u[0], u[1]), c(-u[2], 0.0)],
    ]
}

/// `(1 + a·u·σ)/2`
fn projector(u: [f64; 3], a: f64) -> C2 {
    let s = spin_along(u);
    let mut p = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let id = if i == j { 1.0 } else { 0.0 };
            p[i][j] = (c(id, 0.0) + s[i][j] * a) * 0.5;
        }
    }
    p
}

fn kron(x: &C2, y: &C2) -> C4 {
    let mut k = [[c(0.0, 0.0); 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for p in 0..2 {
                for q in 0..2 {
                    k[2 * i + p][2 * j + q] = x[i][j] * y[p][q];
                }
            }
        }
    }
    k
}

/// `(|01⟩ − |10⟩)/√2` in the basis `|00⟩, |01⟩, |10⟩, |11⟩`.
fn singlet_state() -> [Complex64; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [c(0.0, 0.0), c(h, 0.0), c(-h, 0.0), c(0.0, 0.0)]
}

fn expectation(op: &C4) -> f64 {
    let psi = singlet_state();
    let mut acc = c(0.0, 0.0);
    for i in 0..4 {
        for j in 0..4 {
            acc += psi[i].conj() * op[i][j] * psi[j];
        }
    }
    acc.re
}

/// `⟨ψ₋| π_a(u) ⊗ π_b(v) |ψ₋⟩`, outcome index 0 = `+1`.
pub fn quantum_pair_table(u: &Direction, v: &Direction) -> [[f64; 2]; 2] {
    let sign = |i: usize| if i == 0 { 1.0 } else { -1.0 };
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            expectation(&kron(
                &projector(u.components(), sign(a)),
                &projector(v.components(), sign(b)),
            ))
        })
    })
}

/// `⟨ψ₋| (u·σ) ⊗ (v·σ) |ψ₋⟩`
pub fn quantum_correlation(u: &Direction, v: &Direction) -> f64 {
    expectation(&kron(
        &spin_along(u.components()),
        &spin_along(v.components()),
    ))
}

/// Uniform on the sphere (Archimedes: uniform z, uniform azimuth).
pub fn random_direction<R: Rng>(rng: &mut R) -> Direction {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).max(0.0).sqrt();
    Direction::new(r * phi.cos(), r * phi.sin(), z).expect("unit vector")
}

pub fn random_rational<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    Rational::new(
        BigInt::from(rng.gen_range(-bound..=bound)),
        BigInt::from(rng.gen_range(1..=bound)),
    )
}

/// Random matrix with entries `p/q`, `|p|, q ≤ 10`. Some rows are zeroed or
/// duplicated so rank-deficient cases are common.
pub fn random_small_matrix<R: Rng>(rng: &mut R) -> RatMatrix {
    let rows = rng.gen_range(1..=6);
    let cols = rng.gen_range(1..=6);
    let mut data: Vec<Rational> = (0..rows * cols).map(|_| random_rational(rng, 10)).collect();
    for i in 1..rows {
        match rng.gen_range(0..4) {
            0 => {
                let src = rng.gen_range(0..i);
                for j in 0..cols {
                    data[i * cols + j] = data[src * cols + j].clone();
                }
            }
            1 => {
                for j in 0..cols {
                    data[i * cols + j] = Rational::from_integer(0.into());
                }
            }
            _ => {}
        }
    }
    RatMatrix::from_vec(rows, cols, data).unwrap()
}

/// Random distribution over `n` outcomes with small integer weights (zeros
/// allowed, not all zero).
pub fn random_distribution<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    loop {
        let w: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=9)).collect();
        let total: i64 = w.iter().sum();
        if total > 0 {
            return w
                .into_iter()
                .map(|x| Rational::new(BigInt::from(x), BigInt::from(total)))
                .collect();
        }
    }
}

/// Dense sweep of the one-parameter family: true iff every sampled `t` has
/// a component below `-tol`.
pub fn every_t_has_negative(
    x0: &[f64; 8],
    xh: &[i64; 8],
    t_min: f64,
    t_max: f64,
    points: usize,
    tol: f64,
) -> bool {
    (0..points).all(|k| {
        let t = t_min + (t_max - t_min) * k as f64 / (points - 1) as f64;
        x0.iter().zip(xh).any(|(x, h)| x + *h as f64 * t < -tol)
    })
}
