//! Python bindings for the `bellquasi` crate.

use bellquasi::bellcheck;
use bellquasi::cli::{self, PaperFixtures};
use bellquasi::exactla::{self, Rational};
use bellquasi::marginal;
use bellquasi::quasi::{self, Classification, QuasiFamily, DEFAULT_EPS};
use bellquasi::scalar::Scalar;
use bellquasi::singlet::{self, BellMarginals, CorrelationTriple};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fractions(v: &[Rational]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn parse_fraction(s: &str) -> PyResult<Rational> {
    marginal::parse_rational(s).map_err(value_error)
}

fn parse_p<T>(p: Vec<T>) -> PyResult<[T; 10]> {
    let n = p.len();
    p.try_into()
        .map_err(|_| value_error(format!("marginal vector must have 10 entries, got {n}")))
}

fn exact_triple(ab: &str, ac: &str, bc: &str) -> PyResult<CorrelationTriple<Rational>> {
    Ok(CorrelationTriple::new(
        parse_fraction(ab)?,
        parse_fraction(ac)?,
        parse_fraction(bc)?,
    ))
}

/// Unit measurement axis.
#[pyclass(name = "Direction", frozen)]
#[derive(Clone)]
struct PyDirection(singlet::Direction);

#[pymethods]
impl PyDirection {
    #[new]
    fn new(x: f64, y: f64, z: f64) -> PyResult<Self> {
        singlet::Direction::new(x, y, z)
            .map(Self)
            .map_err(value_error)
    }

    /// Axis in the x-z plane at `degrees` from +z.
    #[staticmethod]
    fn coplanar(degrees: f64) -> Self {
        Self(singlet::Direction::coplanar(degrees))
    }

    fn components(&self) -> (f64, f64, f64) {
        let [x, y, z] = self.0.components();
        (x, y, z)
    }

    fn __repr__(&self) -> String {
        let [x, y, z] = self.0.components();
        format!("Direction({x}, {y}, {z})")
    }
}

/// Singlet correlation `-u·v`.
#[pyfunction]
fn correlation(u: &PyDirection, v: &PyDirection) -> f64 {
    singlet::correlation(&u.0, &v.0)
}

/// The 10-entry marginal vector for three singlet axes.
#[pyfunction]
fn bell_marginals(alpha: &PyDirection, beta: &PyDirection, gamma: &PyDirection) -> Vec<f64> {
    singlet::bell_marginals(&alpha.0, &beta.0, &gamma.0)
        .p_vector
        .to_vec()
}

/// The 10-entry marginal vector for given correlations.
#[pyfunction]
fn marginals_from_correlations(ab: f64, ac: f64, bc: f64) -> Vec<f64> {
    BellMarginals::from_correlations(&CorrelationTriple::new(ab, ac, bc))
        .p_vector
        .to_vec()
}

fn family_dict<'py, T, U>(
    py: Python<'py>,
    f: &QuasiFamily<T>,
    conv: impl Fn(&T) -> U,
) -> PyResult<Bound<'py, PyDict>>
where
    U: IntoPyObject<'py>,
    T: Scalar,
{
    let d = PyDict::new(py);
    d.set_item("x0", f.x0.iter().map(&conv).collect::<Vec<_>>())?;
    d.set_item("xh", f.xh.to_vec())?;
    d.set_item("t_lo", conv(&f.t_lo))?;
    d.set_item("t_hi", conv(&f.t_hi))?;
    Ok(d)
}

fn classification_dict<'py, T, U>(
    py: Python<'py>,
    c: &Classification<T>,
    conv: impl Fn(&T) -> U,
) -> PyResult<Bound<'py, PyDict>>
where
    U: IntoPyObject<'py>,
    T: Scalar,
{
    let d = PyDict::new(py);
    d.set_item("status", c.tag.to_string())?;
    d.set_item("consistent", c.consistency.consistent)?;
    d.set_item(
        "residuals",
        c.consistency
            .residuals
            .iter()
            .map(&conv)
            .collect::<Vec<_>>(),
    )?;
    d.set_item(
        "witness",
        c.witness
            .as_ref()
            .map(|w| w.iter().map(&conv).collect::<Vec<_>>()),
    )?;
    let family = match &c.family {
        Some(f) => Some(family_dict(py, f, &conv)?),
        None => None,
    };
    d.set_item("family", family)?;
    Ok(d)
}

/// Classifies a float marginal vector as `Inconsistent`, `QuasiOnly` or `Proper`.
#[pyfunction]
#[pyo3(signature = (p, eps = DEFAULT_EPS))]
fn classify(py: Python<'_>, p: Vec<f64>, eps: f64) -> PyResult<Bound<'_, PyDict>> {
    let p = parse_p(p)?;
    classification_dict(py, &quasi::classify(&p, eps), |x| *x)
}

/// Exact classification; entries are fraction strings such as `"3/8"`.
#[pyfunction]
fn classify_exact(py: Python<'_>, p: Vec<String>) -> PyResult<Bound<'_, PyDict>> {
    let p = parse_p(
        p.iter()
            .map(|s| parse_fraction(s))
            .collect::<PyResult<Vec<_>>>()?,
    )?;
    classification_dict(py, &quasi::classify(&p, 0.0), |x| x.to_string())
}

/// Family `x0 + t·xh` and its non-negativity interval; raises `ValueError`
/// on inconsistent marginals.
#[pyfunction]
#[pyo3(signature = (p, eps = DEFAULT_EPS))]
fn solve_family(py: Python<'_>, p: Vec<f64>, eps: f64) -> PyResult<Bound<'_, PyDict>> {
    let p = parse_p(p)?;
    let f = quasi::solve_family(&p, eps).map_err(value_error)?;
    family_dict(py, &f, |x| *x)
}

#[pyfunction]
#[pyo3(signature = (ab, ac, bc, eps = DEFAULT_EPS))]
fn bell_pair(py: Python<'_>, ab: f64, ac: f64, bc: f64, eps: f64) -> PyResult<Bound<'_, PyDict>> {
    let v = bellcheck::bell_pair(&CorrelationTriple::new(ab, ac, bc), eps);
    let d = PyDict::new(py);
    d.set_item("ineq1_lhs", v.ineq1_lhs)?;
    d.set_item("ineq1_rhs", v.ineq1_rhs)?;
    d.set_item("ineq2_lhs", v.ineq2_lhs)?;
    d.set_item("ineq2_rhs", v.ineq2_rhs)?;
    d.set_item("satisfied", v.satisfied)?;
    d.set_item("margin", v.margin)?;
    Ok(d)
}

/// The eight values `8·(x0 + (c/8)·xh)`.
#[pyfunction]
fn eight_inequalities(ab: f64, ac: f64, bc: f64, c: f64) -> Vec<f64> {
    bellcheck::eight_inequalities(&CorrelationTriple::new(ab, ac, bc), &c).to_vec()
}

/// Verdicts of the Bell inequalities, the interval test and the exact
/// simplex on an exact correlation triple.
#[pyfunction]
fn equivalence<'py>(py: Python<'py>, ab: &str, ac: &str, bc: &str) -> PyResult<Bound<'py, PyDict>> {
    let v = bellcheck::equivalence_verdicts(&exact_triple(ab, ac, bc)?, 0.0);
    let d = PyDict::new(py);
    d.set_item("bell_satisfied", v.bell_satisfied)?;
    d.set_item("interval_nonempty", v.interval_nonempty)?;
    d.set_item("lp_feasible", v.lp_feasible)?;
    d.set_item("agree", v.agree())?;
    Ok(d)
}

#[pyfunction]
fn bell_matrix() -> Vec<Vec<String>> {
    let m = quasi::bell_matrix();
    (0..m.rows()).map(|i| fractions(m.row(i))).collect()
}

#[pyfunction]
fn bell_matrix_rank() -> usize {
    exactla::rank(quasi::bell_matrix())
}

/// Exact pseudoinverse of the 10×8 matrix as fraction strings.
#[pyfunction]
fn bell_pseudoinverse() -> Vec<Vec<String>> {
    let p = quasi::bell_pseudoinverse();
    (0..p.rows()).map(|i| fractions(p.row(i))).collect()
}

/// Solves a marginal problem given as a JSON document.
#[pyfunction]
fn solve_problem<'py>(py: Python<'py>, document: &str) -> PyResult<Bound<'py, PyDict>> {
    let prob = cli::parse_problem_document(document).map_err(value_error)?;
    let res = marginal::solve_problem(&prob).map_err(value_error)?;
    let d = PyDict::new(py);
    d.set_item("status", res.status.to_string())?;
    d.set_item("homogeneous_dim", res.homogeneous_dim)?;
    d.set_item("witness", res.witness.as_deref().map(fractions))?;
    Ok(d)
}

/// Recomputes the fixed system and compares it with the reference values.
#[pyfunction]
fn paper_check(py: Python<'_>) -> PyResult<Vec<Bound<'_, PyDict>>> {
    cli::paper_check(&PaperFixtures::printed())
        .into_iter()
        .map(|it| {
            let d = PyDict::new(py);
            d.set_item("name", it.name)?;
            d.set_item("passed", it.passed)?;
            d.set_item("detail", it.detail)?;
            d.set_item("mismatches", it.mismatches.len())?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
fn bellquasi_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDirection>()?;
    m.add("DEFAULT_EPS", DEFAULT_EPS)?;
    m.add_function(wrap_pyfunction!(correlation, m)?)?;
    m.add_function(wrap_pyfunction!(bell_marginals, m)?)?;
    m.add_function(wrap_pyfunction!(marginals_from_correlations, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(classify_exact, m)?)?;
    m.add_function(wrap_pyfunction!(solve_family, m)?)?;
    m.add_function(wrap_pyfunction!(bell_pair, m)?)?;
    m.add_function(wrap_pyfunction!(eight_inequalities, m)?)?;
    m.add_function(wrap_pyfunction!(equivalence, m)?)?;
    m.add_function(wrap_pyfunction!(bell_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(bell_matrix_rank, m)?)?;
    m.add_function(wrap_pyfunction!(bell_pseudoinverse, m)?)?;
    m.add_function(wrap_pyfunction!(solve_problem, m)?)?;
    m.add_function(wrap_pyfunction!(paper_check, m)?)?;
    Ok(())
}
