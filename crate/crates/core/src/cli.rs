//! Command implementations behind the `bellquasi` binary.
//!
//! Each command returns a [`Report`] holding the human-readable text, the
//! JSON form and the process exit code, so the binary is a thin shell
//! around these functions.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::bellcheck::{self, BellVerdict};
use crate::exactla::{self, RatMatrix, RatVector, Rational};
use crate::marginal::{self, MarginalConstraint, MarginalProblem, Observable};
use crate::quasi::{self, Status};
use crate::scalar::{rationalize, Scalar, RATIONALIZE_DENOMINATOR};
use crate::singlet::{BellMarginals, CorrelationTriple, Direction, PairTable};

pub mod exit {
    pub const OK: i32 = 0;
    /// Check failures and I/O errors.
    pub const FAILURE: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const QUASI_ONLY: i32 = 3;
    pub const INCONSISTENT: i32 = 4;
}

pub fn status_exit_code(status: Status) -> i32 {
    match status {
        Status::Proper => exit::OK,
        Status::QuasiOnly => exit::QUASI_ONLY,
        Status::Inconsistent => exit::INCONSISTENT,
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub text: String,
    pub json: Value,
    pub exit_code: i32,
}

impl Report {
    pub fn usage(msg: impl Into<String>) -> Self {
        let msg = msg.into();
        Report {
            json: json!({ "error": msg }),
            text: format!("error: {msg}\n"),
            exit_code: exit::USAGE,
        }
    }

    pub fn failure(msg: impl Into<String>) -> Self {
        let msg = msg.into();
        Report {
            json: json!({ "error": msg }),
            text: format!("error: {msg}\n"),
            exit_code: exit::FAILURE,
        }
    }
}

/// Formats with 12 significant digits in fixed notation.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v.is_finite() {
            "0".into()
        } else {
            v.to_string()
        };
    }
    // exponent after rounding to 12 digits, so 0.99999999999999 counts as 1
    let sci = format!("{v:.11e}");
    let magnitude: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    let decimals = (11 - magnitude).max(0) as usize;
    let s = format!("{v:.decimals$}");
    // a value that rounds to zero at this precision prints without a sign
    if s.trim_start_matches('-')
        .chars()
        .all(|c| c == '0' || c == '.')
    {
        return s.trim_start_matches('-').to_string();
    }
    s
}

/// Number rendering shared by the text and JSON reports.
pub trait Render: Scalar {
    fn text(&self) -> String;
    fn json(&self) -> Value;
}

impl Render for f64 {
    fn text(&self) -> String {
        fmt_sig(*self)
    }
    fn json(&self) -> Value {
        json!(self)
    }
}

impl Render for Rational {
    fn text(&self) -> String {
        self.to_string()
    }
    fn json(&self) -> Value {
        Value::String(self.to_string())
    }
}

fn json_list<T: Render>(xs: &[T]) -> Value {
    Value::Array(xs.iter().map(Render::json).collect())
}

fn text_list<T: Render>(xs: &[T]) -> String {
    let parts: Vec<String> = xs.iter().map(Render::text).collect();
    format!("[{}]", parts.join(", "))
}

fn json_table<T: Render>(t: &PairTable<T>) -> Value {
    json!({
        "++": t[0][0].json(), "+-": t[0][1].json(),
        "-+": t[1][0].json(), "--": t[1][1].json(),
    })
}

fn text_table<T: Render>(t: &PairTable<T>) -> String {
    format!(
        "++ {}  +- {}  -+ {}  -- {}",
        t[0][0].text(),
        t[0][1].text(),
        t[1][0].text(),
        t[1][1].text()
    )
}

// ---------------------------------------------------------------- singlet

/// Parses `"x,y,z"`.
pub fn parse_vector(s: &str) -> Result<Direction, String> {
    let parts = parse_floats(s, 3)?;
    Direction::new(parts[0], parts[1], parts[2]).map_err(|e| format!("{s:?}: {e}"))
}

/// Parses `"a,b,c"` angles in degrees.
pub fn parse_angles(s: &str) -> Result<[f64; 3], String> {
    let v = parse_floats(s, 3)?;
    Ok([v[0], v[1], v[2]])
}

fn parse_floats(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let vals: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| format!("{s:?} is not a comma-separated list of numbers"))?;
    if vals.len() != n || vals.iter().any(|v| !v.is_finite()) {
        return Err(format!("{s:?} must contain exactly {n} finite numbers"));
    }
    Ok(vals)
}

/// How the three axes were given on the command line.
#[derive(Clone, Debug)]
pub enum Axes {
    Angles([f64; 3]),
    Vectors(String, String, String),
}

#[derive(Clone, Debug)]
pub struct SingletArgs {
    pub axes: Axes,
    pub eps: f64,
    pub exact: bool,
}

pub fn cmd_singlet(args: &SingletArgs) -> Report {
    let dirs: Result<[Direction; 3], String> = match &args.axes {
        Axes::Angles(a) => Ok(a.map(Direction::coplanar)),
        Axes::Vectors(a, b, c) => (|| Ok([parse_vector(a)?, parse_vector(b)?, parse_vector(c)?]))(),
    };
    let dirs: [Direction; 3] = match dirs {
        Ok(d) => d,
        Err(e) => return Report::usage(e),
    };
    let corr = CorrelationTriple::from_directions(&dirs[0], &dirs[1], &dirs[2]);
    let mut report = if args.exact {
        let exact = corr.map(|c| rationalize(*c, RATIONALIZE_DENOMINATOR));
        singlet_report(&exact, args.eps, "exact")
    } else {
        singlet_report(&corr, args.eps, "float")
    };
    let axes: Vec<Value> = dirs.iter().map(|d| json!(d.components())).collect();
    report.json["axes"] = Value::Array(axes);
    report
}

/// Full analysis of one correlation triple.
pub fn singlet_report<T: Render>(corr: &CorrelationTriple<T>, eps: f64, mode: &str) -> Report {
    let marg = BellMarginals::from_correlations(corr);
    let class = quasi::classify(&marg.p_vector, eps);
    let verdict = bellcheck::bell_pair(corr, eps);

    let mut text = String::new();
    let _ = writeln!(text, "mode: {mode}");
    let _ = writeln!(
        text,
        "correlations: <AB> = {}  <AC> = {}  <BC> = {}",
        corr.ab.text(),
        corr.ac.text(),
        corr.bc.text()
    );
    let _ = writeln!(text, "P(A,B):   {}", text_table(&marg.pab));
    let _ = writeln!(text, "P(A,C):   {}", text_table(&marg.pac));
    let _ = writeln!(text, "P(B2,C2): {}", text_table(&marg.pbc));
    let _ = writeln!(
        text,
        "consistency residuals: {} ({})",
        text_list(&class.consistency.residuals),
        if class.consistency.consistent {
            "pass"
        } else {
            "fail"
        }
    );
    let mut family_json = Value::Null;
    if let Some(f) = &class.family {
        let _ = writeln!(text, "x0: {}", text_list(&f.x0));
        let _ = writeln!(text, "xh: {:?}", f.xh);
        let _ = writeln!(text, "t interval: [{}, {}]", f.t_lo.text(), f.t_hi.text());
        family_json = json!({
            "x0": json_list(&f.x0),
            "xh": f.xh,
            "t_lo": f.t_lo.json(),
            "t_hi": f.t_hi.json(),
        });
    }
    let _ = writeln!(text, "classification: {}", class.tag);
    if let Some(w) = &class.witness {
        let _ = writeln!(text, "witness: {}", text_list(w));
    }
    let _ = writeln!(text, "{}", bell_text(&verdict));

    let json = json!({
        "mode": mode,
        "correlations": { "ab": corr.ab.json(), "ac": corr.ac.json(), "bc": corr.bc.json() },
        "tables": {
            "ab": json_table(&marg.pab),
            "ac": json_table(&marg.pac),
            "bc": json_table(&marg.pbc),
        },
        "p_vector": json_list(&marg.p_vector),
        "consistency": {
            "residuals": json_list(&class.consistency.residuals),
            "consistent": class.consistency.consistent,
        },
        "family": family_json,
        "classification": class.tag,
        "witness": class.witness.as_ref().map(|w| json_list(w)),
        "bell": bell_json(&verdict),
    });
    Report {
        text,
        json,
        exit_code: status_exit_code(class.tag),
    }
}

fn bell_text<T: Render>(v: &BellVerdict<T>) -> String {
    format!(
        "bell: 1+<AB> = {} vs |<AC>-<BC>| = {}; 1-<AB> = {} vs |<AC>+<BC>| = {}; margin = {}; satisfied = {}",
        v.ineq1_lhs.text(),
        v.ineq1_rhs.text(),
        v.ineq2_lhs.text(),
        v.ineq2_rhs.text(),
        v.margin.text(),
        v.satisfied
    )
}

fn bell_json<T: Render>(v: &BellVerdict<T>) -> Value {
    json!({
        "ineq1_lhs": v.ineq1_lhs.json(),
        "ineq1_rhs": v.ineq1_rhs.json(),
        "ineq2_lhs": v.ineq2_lhs.json(),
        "ineq2_rhs": v.ineq2_rhs.json(),
        "satisfied": v.satisfied,
        "margin": v.margin.json(),
    })
}

// ------------------------------------------------------------------- scan

/// Half-open angle range in degrees, `start:end:step`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleRange {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl AngleRange {
    /// Accepts `start:end:step` or a single angle.
    pub fn parse(s: &str) -> Result<Self, String> {
        let vals: Vec<f64> = s
            .split(':')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| format!("{s:?} is not start:end:step"))?;
        let r = match vals[..] {
            [v] => AngleRange {
                start: v,
                end: v + 1.0,
                step: 1.0,
            },
            [start, end, step] => AngleRange { start, end, step },
            _ => return Err(format!("{s:?} is not start:end:step")),
        };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(format!("step must be positive, got {}", self.step));
        }
        if !(0.0..360.0).contains(&self.start)
            || self.end > 360.0 + self.step
            || self.end <= self.start
        {
            return Err(format!(
                "range {}:{} must satisfy 0 <= start < end with start in [0, 360)",
                self.start, self.end
            ));
        }
        Ok(())
    }

    /// Grid points below `end` (and below 360).
    pub fn values(&self) -> Vec<f64> {
        let limit = self.end.min(360.0);
        (0u64..)
            .map(|k| self.start + k as f64 * self.step)
            .take_while(|v| *v < limit - 1e-9)
            .collect()
    }
}

impl Default for AngleRange {
    fn default() -> Self {
        AngleRange {
            start: 0.0,
            end: 360.0,
            step: 1.0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScanSpec {
    pub theta_ab: AngleRange,
    pub theta_ac: AngleRange,
    pub eps: f64,
    pub out: Option<PathBuf>,
}

pub const SCAN_HEADER: &str = "theta_ab,theta_ac,corr_ab,corr_ac,corr_bc,margin,classification";

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub theta_ab: f64,
    pub theta_ac: f64,
    pub corr: CorrelationTriple<f64>,
    pub margin: f64,
    pub classification: Status,
}

impl ScanRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            fmt_sig(self.theta_ab),
            fmt_sig(self.theta_ac),
            fmt_sig(self.corr.ab),
            fmt_sig(self.corr.ac),
            fmt_sig(self.corr.bc),
            fmt_sig(self.margin),
            self.classification
        )
    }
}

/// Coplanar axes: `α` at 0°, `β` at `theta_ab`, `γ` at `theta_ac`.
pub fn scan_point(theta_ab: f64, theta_ac: f64, eps: f64) -> ScanRow {
    let alpha = Direction::coplanar(0.0);
    let corr = CorrelationTriple::from_directions(
        &alpha,
        &Direction::coplanar(theta_ab),
        &Direction::coplanar(theta_ac),
    );
    let p = BellMarginals::from_correlations(&corr).p_vector;
    let classification = quasi::classify(&p, eps).tag;
    let margin = bellcheck::bell_pair(&corr, eps).margin;
    ScanRow {
        theta_ab,
        theta_ac,
        corr,
        margin,
        classification,
    }
}

/// Grid rows, `theta_ab` outer and `theta_ac` inner, evaluated in parallel.
pub fn scan_rows(spec: &ScanSpec) -> Vec<ScanRow> {
    let ab = spec.theta_ab.values();
    let ac = spec.theta_ac.values();
    let points: Vec<(f64, f64)> = ab
        .iter()
        .flat_map(|&a| ac.iter().map(move |&c| (a, c)))
        .collect();
    points
        .par_iter()
        .map(|&(a, c)| scan_point(a, c, spec.eps))
        .collect()
}

pub fn write_scan_csv<W: Write>(rows: &[ScanRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "{SCAN_HEADER}")?;
    for r in rows {
        writeln!(w, "{}", r.csv())?;
    }
    w.flush()
}

/// Writes the CSV to `spec.out`, or returns it as the report text when no
/// path is given.
pub fn cmd_scan(spec: &ScanSpec) -> Report {
    if let Err(e) = spec.theta_ab.validate().and(spec.theta_ac.validate()) {
        return Report::usage(e);
    }
    let rows = scan_rows(spec);
    let violations = rows
        .iter()
        .filter(|r| r.classification == Status::QuasiOnly)
        .count();
    let summary = json!({ "rows": rows.len(), "quasi_only": violations });
    match &spec.out {
        None => {
            let mut buf = Vec::new();
            write_scan_csv(&rows, &mut buf).expect("writing to memory");
            Report {
                text: String::from_utf8(buf).expect("ascii csv"),
                json: summary,
                exit_code: exit::OK,
            }
        }
        Some(path) => {
            let res = std::fs::File::create(path)
                .and_then(|f| write_scan_csv(&rows, std::io::BufWriter::new(f)));
            match res {
                Ok(()) => Report {
                    text: format!(
                        "wrote {} rows ({} QuasiOnly) to {}\n",
                        rows.len(),
                        violations,
                        path.display()
                    ),
                    json: summary,
                    exit_code: exit::OK,
                },
                Err(e) => Report::failure(format!("{}: {e}", path.display())),
            }
        }
    }
}

// ------------------------------------------------------------------ solve

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemDocument {
    schema: u32,
    observables: Vec<ObservableEntry>,
    marginals: Vec<MarginalEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObservableEntry {
    name: String,
    cardinality: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MarginalEntry {
    over: Vec<String>,
    table: Vec<String>,
}

pub const PROBLEM_SCHEMA_VERSION: u32 = 1;

/// Parses and validates a problem document.
pub fn parse_problem_document(text: &str) -> Result<MarginalProblem, String> {
    let doc: ProblemDocument = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if doc.schema != PROBLEM_SCHEMA_VERSION {
        return Err(format!(
            "unsupported schema {}, expected {PROBLEM_SCHEMA_VERSION}",
            doc.schema
        ));
    }
    let index: HashMap<&str, usize> = doc
        .observables
        .iter()
        .enumerate()
        .map(|(i, o)| (o.name.as_str(), i))
        .collect();
    let mut constraints = Vec::with_capacity(doc.marginals.len());
    for (k, m) in doc.marginals.iter().enumerate() {
        let over = m
            .over
            .iter()
            .map(|n| {
                index
                    .get(n.as_str())
                    .copied()
                    .ok_or_else(|| format!("marginal {k} refers to unknown observable {n:?}"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let table = m
            .table
            .iter()
            .map(|s| marginal::parse_rational(s).map_err(|e| format!("marginal {k}: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        constraints.push(MarginalConstraint { over, table });
    }
    let observables = doc
        .observables
        .into_iter()
        .map(|o| Observable::new(o.name, o.cardinality))
        .collect();
    MarginalProblem::new(observables, constraints).map_err(|e| e.to_string())
}

pub fn cmd_solve(document: &str) -> Report {
    let prob = match parse_problem_document(document) {
        Ok(p) => p,
        Err(e) => return Report::usage(format!("schema violation: {e}")),
    };
    let res = match marginal::solve_problem(&prob) {
        Ok(r) => r,
        Err(e) => return Report::usage(e.to_string()),
    };
    let mut text = format!(
        "status: {}\nhomogeneous dimension: {}\n",
        res.status, res.homogeneous_dim
    );
    if let Some(w) = &res.witness {
        let _ = writeln!(text, "witness: {}", text_list(w));
    }
    let names: Vec<&str> = prob.observables().iter().map(|o| o.name.as_str()).collect();
    let json = json!({
        "status": res.status,
        "homogeneous_dim": res.homogeneous_dim,
        "observables": names,
        "witness": res.witness.as_ref().map(|w| json_list(w)),
    });
    Report {
        text,
        json,
        exit_code: status_exit_code(res.status),
    }
}

// ------------------------------------------------------------ paper-check

/// Reference values for the fixed Bell system, as printed.
#[derive(Clone, Debug)]
pub struct PaperFixtures {
    pub rank: usize,
    pub kernel: Vec<RatVector>,
    pub left_kernel: Vec<RatVector>,
    pub pinv: RatMatrix,
}

const PRINTED_PINV: [[&str; 10]; 8] = [
    [
        "1/4", "-1/8", "-1/8", "1/4", "-1/8", "-1/8", "1/4", "-1/8", "-1/8", "1/8",
    ],
    [
        "-1/20", "13/40", "1/8", "-1/20", "13/40", "1/8", "7/20", "-3/40", "-3/40", "-1/8",
    ],
    [
        "-1/20", "1/8", "13/40", "7/20", "-3/40", "-3/40", "-1/20", "13/40", "1/8", "-1/8",
    ],
    [
        "1/20", "-9/40", "-9/40", "-3/20", "3/8", "-1/40", "-3/20", "3/8", "-1/40", "1/8",
    ],
    [
        "7/20", "-3/40", "-3/40", "-1/20", "1/8", "13/40", "-1/20", "1/8", "13/40", "-1/8",
    ],
    [
        "-3/20", "3/8", "-1/40", "1/20", "-9/40", "-9/40", "-3/20", "-1/40", "3/8", "1/8",
    ],
    [
        "-3/20", "-1/40", "3/8", "-3/20", "-1/40", "3/8", "1/20", "-9/40", "-9/40", "1/8",
    ],
    [
        "-1/4", "-3/8", "-3/8", "-1/4", "-3/8", "-3/8", "-1/4", "-3/8", "-3/8", "7/8",
    ],
];

impl PaperFixtures {
    pub fn printed() -> Self {
        let pinv = PRINTED_PINV
            .iter()
            .flatten()
            .map(|s| marginal::parse_rational(s).expect("fixture fraction"))
            .collect();
        PaperFixtures {
            rank: 7,
            kernel: vec![RatVector::from_ints(&quasi::XH)],
            left_kernel: vec![
                RatVector::from_ints(&[-1, -1, 0, 0, 0, 0, 1, 0, 1, 0]),
                RatVector::from_ints(&[0, 0, 0, -1, -1, 0, 1, 1, 0, 0]),
                RatVector::from_ints(&[-1, 0, -1, 1, 0, 1, 0, 0, 0, 0]),
            ],
            pinv: RatMatrix::from_vec(8, 10, pinv).expect("8x10 fixture"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckItem {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    /// `(row, col, expected, computed)`, 1-based.
    pub mismatches: Vec<(usize, usize, Rational, Rational)>,
}

/// Recomputes rank, kernel, left kernel and pseudoinverse of the fixed
/// matrix from scratch and compares against `fixtures`.
pub fn paper_check(fixtures: &PaperFixtures) -> Vec<CheckItem> {
    let m = quasi::build_matrix();
    let rank = exactla::rank(&m);
    let kernel = exactla::null_space(&m);
    let left = exactla::left_null_space(&m);
    let pinv = exactla::pseudoinverse(&m);

    let mut mismatches = Vec::new();
    if (pinv.rows(), pinv.cols()) == (fixtures.pinv.rows(), fixtures.pinv.cols()) {
        for i in 0..pinv.rows() {
            for j in 0..pinv.cols() {
                if pinv[(i, j)] != fixtures.pinv[(i, j)] {
                    mismatches.push((
                        i + 1,
                        j + 1,
                        fixtures.pinv[(i, j)].clone(),
                        pinv[(i, j)].clone(),
                    ));
                }
            }
        }
    }
    let shape_ok = (pinv.rows(), pinv.cols()) == (fixtures.pinv.rows(), fixtures.pinv.cols());
    let kernel_ok = exactla::same_span(&kernel, &fixtures.kernel);
    let left_ok = exactla::same_span(&left, &fixtures.left_kernel);

    vec![
        CheckItem {
            name: "rank",
            passed: rank == fixtures.rank,
            detail: format!("computed {rank}, expected {}", fixtures.rank),
            mismatches: vec![],
        },
        CheckItem {
            name: "null space",
            passed: kernel_ok,
            detail: format!(
                "computed basis {}",
                kernel
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            ),
            mismatches: vec![],
        },
        CheckItem {
            name: "left null space",
            passed: left_ok,
            detail: format!("computed dimension {}", left.len()),
            mismatches: vec![],
        },
        CheckItem {
            name: "pseudoinverse",
            passed: shape_ok && mismatches.is_empty(),
            detail: format!(
                "{} of {} entries match",
                pinv.entries().len() - mismatches.len(),
                pinv.entries().len()
            ),
            mismatches,
        },
    ]
}

pub fn cmd_paper_check(fixtures: &PaperFixtures) -> Report {
    let items = paper_check(fixtures);
    let passed = items.iter().filter(|i| i.passed).count();
    let mut text = String::new();
    for it in &items {
        let _ = writeln!(
            text,
            "[{}] {}: {}",
            if it.passed { "pass" } else { "FAIL" },
            it.name,
            it.detail
        );
        for (r, c, want, got) in &it.mismatches {
            let _ = writeln!(
                text,
                "    mismatch at ({r},{c}): expected {want}, computed {got}"
            );
        }
    }
    let _ = writeln!(text, "{passed}/{} checks passed", items.len());
    let json = json!({
        "passed": passed,
        "total": items.len(),
        "items": items.iter().map(|it| json!({
            "name": it.name,
            "passed": it.passed,
            "detail": it.detail,
            "mismatches": it.mismatches.iter().map(|(r, c, want, got)| json!({
                "row": r, "col": c, "expected": want.to_string(), "computed": got.to_string(),
            })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    });
    Report {
        text,
        json,
        exit_code: if passed == items.len() {
            exit::OK
        } else {
            exit::FAILURE
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig_digit_formatting() {
        assert_eq!(fmt_sig(-0.5), "-0.500000000000");
        assert_eq!(fmt_sig(60.0), "60.0000000000");
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(-0.0), "0");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_sig(-1e-17), "-0.0000000000000000100000000000");
        assert_eq!(fmt_sig(123456789012345.0), "123456789012345");
        assert_eq!(fmt_sig(0.9999999999999999), "1.00000000000");
        assert_eq!(fmt_sig(-0.09999999999999999), "-0.100000000000");
    }

    #[test]
    fn angle_range_parsing() {
        let r = AngleRange::parse("0:360:1").unwrap();
        assert_eq!(r.values().len(), 360);
        assert_eq!(AngleRange::parse("60").unwrap().values(), vec![60.0]);
        assert_eq!(
            AngleRange::parse("0:1:0.25").unwrap().values(),
            vec![0.0, 0.25, 0.5, 0.75]
        );
        assert!(AngleRange::parse("0:360:0").is_err());
        assert!(AngleRange::parse("370:380:1").is_err());
        assert!(AngleRange::parse("10:5:1").is_err());
        assert!(AngleRange::parse("a:b:c").is_err());
        assert!(AngleRange::parse("1:2").is_err());
    }

    #[test]
    fn vector_parsing() {
        assert!(parse_vector("1,0,0").is_ok());
        assert!(parse_vector("0,0,0").is_err());
        assert!(parse_vector("1,0").is_err());
        assert!(parse_vector("1,x,0").is_err());
        assert_eq!(parse_angles("0, 60 ,120").unwrap(), [0.0, 60.0, 120.0]);
    }

    #[test]
    fn scan_point_canonical_violation() {
        let row = scan_point(60.0, 120.0, quasi::DEFAULT_EPS);
        assert!((row.margin + 0.5).abs() < 1e-12);
        assert_eq!(row.classification, Status::QuasiOnly);
        assert!(row.csv().starts_with("60.0000000000,120.000000000,-0.500000000000,0.500000000000,-0.500000000000,-0.500000000000,QuasiOnly"));
    }

    #[test]
    fn problem_document_errors() {
        assert!(parse_problem_document("{").is_err());
        let wrong_schema = r#"{"schema": 2, "observables": [], "marginals": []}"#;
        assert!(parse_problem_document(wrong_schema)
            .unwrap_err()
            .contains("schema"));
        let unknown = r#"{"schema": 1, "observables": [{"name": "A", "cardinality": 2}],
            "marginals": [{"over": ["Z"], "table": ["1/2", "1/2"]}]}"#;
        assert!(parse_problem_document(unknown)
            .unwrap_err()
            .contains("unknown observable"));
        let bad_len = r#"{"schema": 1, "observables": [{"name": "A", "cardinality": 2}],
            "marginals": [{"over": ["A"], "table": ["1"]}]}"#;
        assert!(parse_problem_document(bad_len).is_err());
        let dup = r#"{"schema": 1, "observables": [{"name": "A", "cardinality": 2},
            {"name": "A", "cardinality": 2}], "marginals": []}"#;
        assert!(parse_problem_document(dup).is_err());
    }

    #[test]
    fn paper_check_passes_on_printed_fixtures() {
        let items = paper_check(&PaperFixtures::printed());
        assert_eq!(items.len(), 4);
        assert!(items.iter().all(|i| i.passed), "{items:?}");
    }
}
