mod common;

use bellquasi::bellcheck;
use bellquasi::exactla::{self, int, rat, RatMatrix, RatVector, Rational};
use bellquasi::marginal::{self, MarginalConstraint, MarginalProblem, Observable};
use bellquasi::quasi::{self, Status, DEFAULT_EPS, XH};
use bellquasi::scalar::Scalar;
use bellquasi::singlet::{pair_table, BellMarginals, CorrelationTriple};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{random_distribution, random_small_matrix};

fn sized_matrix(r: usize, c: usize) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec((-6i64..=6, 1i64..=4), r * c).prop_map(move |cells| {
        let data = cells.into_iter().map(|(p, q)| rat(p, q)).collect();
        RatMatrix::from_vec(r, c, data).unwrap()
    })
}

fn matrix() -> impl Strategy<Value = RatMatrix> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| sized_matrix(r, c))
}

fn square_matrix() -> impl Strategy<Value = RatMatrix> {
    (1usize..=5).prop_flat_map(|n| sized_matrix(n, n))
}

/// Either a structured matrix or one drawn by the shared generator, which
/// duplicates and zeroes rows.
fn any_matrix() -> impl Strategy<Value = RatMatrix> {
    prop_oneof![
        matrix(),
        any::<u64>().prop_map(|s| random_small_matrix(&mut ChaCha8Rng::seed_from_u64(s))),
    ]
}

fn correlation() -> impl Strategy<Value = Rational> {
    (-1000i64..=1000).prop_map(|n| rat(n, 1000))
}

fn triple() -> impl Strategy<Value = CorrelationTriple<Rational>> {
    (correlation(), correlation(), correlation())
        .prop_map(|(a, b, c)| CorrelationTriple::new(a, b, c))
}

fn p_of(corr: &CorrelationTriple<Rational>) -> [Rational; 10] {
    BellMarginals::from_correlations(corr).p_vector
}

/// Arbitrary entries in [0, 1] with the last fixed to 1; usually inconsistent.
fn raw_p() -> impl Strategy<Value = [Rational; 10]> {
    prop::collection::vec(0i64..=8, 9)
        .prop_map(|v| std::array::from_fn(|i| if i == 9 { int(1) } else { rat(v[i], 8) }))
}

/// Random marginal problem: up to four observables, random subsets.
fn random_problem(seed: u64, from_joint: bool) -> MarginalProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=4);
    let cards: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=3)).collect();
    let joint = random_distribution(&mut rng, cards.iter().product());
    let mut constraints = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let mut over: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        if over.is_empty() {
            over.push(rng.gen_range(0..n));
        }
        if constraints
            .iter()
            .any(|c: &MarginalConstraint| c.over == over)
        {
            continue;
        }
        let table = if from_joint {
            marginal::marginalize(&joint, &cards, &over)
        } else {
            random_distribution(&mut rng, over.iter().map(|&i| cards[i]).product())
        };
        constraints.push(MarginalConstraint { over, table });
    }
    let observables = cards
        .iter()
        .enumerate()
        .map(|(i, &c)| Observable::new(format!("O{i}"), c))
        .collect();
    MarginalProblem::new(observables, constraints).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_nullity(m in any_matrix()) {
        let kernel = exactla::null_space(&m);
        prop_assert_eq!(exactla::rank(&m) + kernel.len(), m.cols());
        for v in &kernel {
            prop_assert!(m.mul_vec(v).is_zero());
        }
    }

    #[test]
    fn left_kernel_annihilates(m in any_matrix()) {
        let left = exactla::left_null_space(&m);
        prop_assert_eq!(left.len(), m.rows() - exactla::rank(&m));
        for v in &left {
            prop_assert!(m.transpose().mul_vec(v).is_zero());
        }
    }

    #[test]
    fn penrose_identities(m in any_matrix()) {
        let p = exactla::pseudoinverse(&m);
        prop_assert_eq!(p.rows(), m.cols());
        prop_assert_eq!(p.cols(), m.rows());
        let mp = m.mul(&p);
        let pm = p.mul(&m);
        prop_assert_eq!(&mp.mul(&m), &m);
        prop_assert_eq!(&pm.mul(&p), &p);
        prop_assert_eq!(&mp.transpose(), &mp);
        prop_assert_eq!(&pm.transpose(), &pm);
    }

    #[test]
    fn inverse_matches_pseudoinverse_when_invertible(m in square_matrix()) {
        let inv = exactla::inverse(&m);
        prop_assert_eq!(inv.is_some(), exactla::rank(&m) == m.rows());
        if let Some(inv) = inv {
            prop_assert_eq!(m.mul(&inv), RatMatrix::identity(m.rows()));
            prop_assert_eq!(inv, exactla::pseudoinverse(&m));
        }
    }

    #[test]
    fn solve_consistent_roundtrip(m in any_matrix(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = RatVector((0..m.cols()).map(|_| common::random_rational(&mut rng, 5)).collect());
        let b = m.mul_vec(&x);
        let y = exactla::solve_consistent(&m, &b).unwrap().expect("b is in the range");
        prop_assert_eq!(m.mul_vec(&y), b);
    }

    #[test]
    fn product_marginal_roundtrip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cards: Vec<usize> = (0..rng.gen_range(1..=4)).map(|_| rng.gen_range(2..=4)).collect();
        let singles: Vec<Vec<Rational>> = cards.iter().map(|&c| random_distribution(&mut rng, c)).collect();
        let joint = marginal::product_distribution(&singles);
        prop_assert_eq!(joint.len(), cards.iter().product::<usize>());
        prop_assert_eq!(joint.iter().cloned().sum::<Rational>(), int(1));
        for (i, t) in singles.iter().enumerate() {
            prop_assert_eq!(&marginal::marginalize(&joint, &cards, &[i]), t);
        }
    }

    #[test]
    fn lp_witness_is_valid(seed in any::<u64>(), from_joint in any::<bool>()) {
        let prob = random_problem(seed, from_joint);
        let (mat, rhs) = marginal::build_constraint_system(&prob, false).unwrap();
        let res = marginal::lp_feasible(&mat, &rhs);
        if from_joint {
            prop_assert_eq!(res.status, Status::Proper);
        }
        match (&res.status, &res.witness) {
            (Status::Proper, Some(w)) => {
                prop_assert!(w.iter().all(|x| *x >= int(0)));
                prop_assert_eq!(mat.mul_vec(&RatVector(w.clone())), rhs);
            }
            (Status::Proper, None) => prop_assert!(false, "proper without witness"),
            (_, w) => prop_assert!(w.is_none()),
        }
    }

    #[test]
    fn redundant_rows_do_not_change_verdict(seed in any::<u64>(), from_joint in any::<bool>()) {
        let prob = random_problem(seed, from_joint);
        let (full, full_rhs) = marginal::build_constraint_system(&prob, false).unwrap();
        let (reduced, reduced_rhs) = marginal::build_constraint_system(&prob, true).unwrap();
        let a = marginal::lp_feasible(&full, &full_rhs);
        let b = marginal::lp_feasible(&reduced, &reduced_rhs);
        // dropped cells are only implied when each table sums to 1, which
        // validation guarantees
        prop_assert_eq!(a.status, b.status);
        prop_assert_eq!(exactla::rank(&full), exactla::rank(&reduced));
    }

    #[test]
    fn consistency_equations_match_left_kernel(p in raw_p()) {
        let direct = quasi::check_consistency(&p, 0.0).consistent;
        let via_kernel = quasi::consistent_by_left_null_space(&p, 0.0);
        prop_assert_eq!(direct, via_kernel);
        let solvable = exactla::solve_consistent(quasi::bell_matrix(), &RatVector(p.to_vec())).unwrap().is_some();
        prop_assert_eq!(direct, solvable);
    }

    #[test]
    fn family_reproduces_marginals(corr in triple(), num in -64i64..=64) {
        let p = p_of(&corr);
        let family = quasi::solve_family(&p, 0.0).expect("singlet-form marginals are consistent");
        let t = rat(num, 64);
        prop_assert_eq!(quasi::marginal_vector(&family.point(&t)), p);
        let dot: Rational = family.x0.iter().zip(XH).map(|(x, h)| x * int(h)).sum();
        prop_assert_eq!(dot, int(0));
        // eight inequalities are 8·point(c / 8)
        let c = rat(num, 8);
        let eight = bellcheck::eight_inequalities(&corr, &c);
        let point = family.point(&rat(num, 64));
        for i in 0..8 {
            prop_assert_eq!(&eight[i], &(int(8) * point[i].clone()));
        }
    }

    #[test]
    fn interval_endpoints_are_tight(corr in triple()) {
        let family = quasi::solve_family(&p_of(&corr), 0.0).unwrap();
        if family.has_proper_member(0.0) {
            for t in [&family.t_lo, &family.t_hi] {
                let x = family.point(t);
                prop_assert!(x.iter().all(|v| *v >= int(0)));
                prop_assert!(x.iter().any(|v| *v == int(0)));
            }
        }
    }

    #[test]
    fn bell_margin_symmetries(corr in triple()) {
        let m = |ab: &Rational, ac: &Rational, bc: &Rational| {
            bellcheck::bell_pair(&CorrelationTriple::new(ab.clone(), ac.clone(), bc.clone()), 0.0).margin
        };
        let base = m(&corr.ab, &corr.ac, &corr.bc);
        prop_assert_eq!(&base, &m(&corr.ab, &corr.bc, &corr.ac));
        prop_assert_eq!(&base, &m(&corr.ab, &-corr.ac.clone(), &-corr.bc.clone()));
        prop_assert_eq!(&base, &m(&-corr.ab.clone(), &corr.ac, &-corr.bc.clone()));
    }

    #[test]
    fn witness_reconstructs_every_pair_table(corr in triple()) {
        let class = quasi::classify(&p_of(&corr), 0.0);
        if let Some(w) = class.witness {
            prop_assert!(w.iter().all(|v| *v >= int(0)));
            let pm = quasi::reconstruct_marginals(&w);
            prop_assert_eq!(pm.ab, pair_table(&corr.ab, false));
            prop_assert_eq!(pm.ac, pair_table(&corr.ac, false));
            prop_assert_eq!(pm.bc, pair_table(&corr.bc, true));
        }
    }

    #[test]
    fn float_and_exact_classification_agree(corr in triple()) {
        let exact = quasi::classify(&p_of(&corr), 0.0);
        let float = quasi::classify(&BellMarginals::from_correlations(&corr.map(Scalar::to_f64)).p_vector, DEFAULT_EPS);
        let margin = bellcheck::bell_pair(&corr, 0.0).margin;
        // away from the boundary the tolerance cannot change the verdict
        if margin.abs() > rat(1, 1_000_000) {
            prop_assert_eq!(exact.tag, float.tag);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn lp_agrees_with_interval_and_bell(corr in triple()) {
        let v = bellcheck::equivalence_verdicts(&corr, 0.0);
        prop_assert!(v.agree(), "{:?} at {:?}", v, corr);
    }
}
