//! Python bindings.
//!
//! Rationals are accepted as `str` (`"1/3"`, `"0.902"`), `int` or
//! `fractions.Fraction`, and returned as `fractions.Fraction`. Floats are
//! rejected so no binary rounding reaches the exact core.

use galois_duel::beta::{self, BetaExpansion};
use galois_duel::duel::{self, DuelParams, FiringSequence};
use galois_duel::numerics::{self, ExactRational, IntPoly};
use galois_duel::sign::{render_word, Alphabet};
use galois_duel::simulate::{self, SimConfig};
use galois_duel::thresholds;
use galois_duel::thue_morse::{self, TMSequence};
use galois_duel::Error;
use num_bigint::BigInt;
use pyo3::exceptions::{PyIndexError, PyTypeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyFloat, PyString};

/// `(round, P(A), P(B), shooter)` with the probabilities as `Fraction`s.
type TableTuple<'py> = (usize, Bound<'py, PyAny>, Bound<'py, PyAny>, char);

fn to_py_err(err: Error) -> PyErr {
    match err {
        Error::IndexOutOfRange { .. } => PyIndexError::new_err(err.to_string()),
        _ => PyValueError::new_err(err.to_string()),
    }
}

fn rational_arg(obj: &Bound<'_, PyAny>) -> PyResult<ExactRational> {
    if let Ok(text) = obj.cast::<PyString>() {
        return numerics::parse_rational(text.to_str()?).map_err(to_py_err);
    }
    if obj.is_instance_of::<PyFloat>() {
        return Err(PyTypeError::new_err("floats are inexact; pass a str, int or Fraction"));
    }
    let numer: BigInt = obj.getattr("numerator")?.extract()?;
    let denom: BigInt = obj.getattr("denominator")?.extract()?;
    if denom == BigInt::from(0) {
        return Err(PyValueError::new_err("zero denominator"));
    }
    Ok(ExactRational::new(numer, denom))
}

fn fraction<'py>(py: Python<'py>, value: &ExactRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((value.numer().clone(), value.denom().clone()))
}

fn alphabet_arg(name: &str) -> PyResult<Alphabet> {
    match name {
        "AB" => Ok(Alphabet::Letters),
        "pm1" => Ok(Alphabet::PlusMinus),
        "01" => Ok(Alphabet::BinaryAliceZero),
        "10" => Ok(Alphabet::Binary),
        other => Err(PyValueError::new_err(format!(
            "unknown alphabet {other:?}; expected AB, pm1, 01 or 10"
        ))),
    }
}

fn params_arg(p: Option<&Bound<'_, PyAny>>, q: Option<&Bound<'_, PyAny>>) -> PyResult<DuelParams> {
    match (p, q) {
        (Some(p), None) => DuelParams::from_p(rational_arg(p)?).map_err(to_py_err),
        (None, Some(q)) => DuelParams::from_q(rational_arg(q)?).map_err(to_py_err),
        _ => Err(PyValueError::new_err("pass exactly one of p or q")),
    }
}

/// A growing firing sequence with exact win probabilities.
#[pyclass(name = "Duel", module = "galois_duel")]
pub struct PyDuel {
    inner: FiringSequence,
}

#[pymethods]
impl PyDuel {
    #[new]
    #[pyo3(signature = (p = None, q = None))]
    fn new(p: Option<&Bound<'_, PyAny>>, q: Option<&Bound<'_, PyAny>>) -> PyResult<Self> {
        Ok(PyDuel { inner: duel::new_duel(params_arg(p, q)?) })
    }

    /// Plays one more round and returns its shooter, "A" or "B".
    fn extend(&mut self) -> char {
        self.inner.extend().letter()
    }

    /// Extends until the sequence has `rounds` rounds.
    fn extend_to(&mut self, rounds: usize) {
        while self.inner.len() < rounds {
            self.inner.extend();
        }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn signs(&self) -> Vec<i32> {
        self.inner.signs().iter().map(|s| s.value()).collect()
    }

    #[pyo3(signature = (alphabet = "AB"))]
    fn sequence(&self, alphabet: &str) -> PyResult<String> {
        Ok(render_word(self.inner.signs(), alphabet_arg(alphabet)?))
    }

    /// Rows `(round, P(A), P(B), shooter)`.
    fn table<'py>(&self, py: Python<'py>) -> PyResult<Vec<TableTuple<'py>>> {
        self.inner
            .table()
            .iter()
            .map(|r| Ok((r.round, fraction(py, &r.p_a)?, fraction(py, &r.p_b)?, r.shooter.letter())))
            .collect()
    }

    /// Coefficients of `f_n`, constant term first.
    fn f_polynomial(&self, n: usize) -> PyResult<Vec<i32>> {
        let poly = self.inner.f_polynomial(n).map_err(to_py_err)?;
        Ok(poly.coeffs().iter().map(|s| s.value()).collect())
    }

    fn agreement_length(&self) -> usize {
        thue_morse::agreement_length(&self.inner)
    }

    fn p<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, self.inner.params().p())
    }

    fn q<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, self.inner.params().q())
    }

    fn __repr__(&self) -> String {
        format!(
            "Duel(q={}, sequence='{}')",
            numerics::format_rational(self.inner.params().q()),
            render_word(self.inner.signs(), Alphabet::Letters)
        )
    }
}

#[pyfunction]
#[pyo3(signature = (rounds, p = None, q = None))]
fn probability_table<'py>(
    py: Python<'py>,
    rounds: usize,
    p: Option<&Bound<'py, PyAny>>,
    q: Option<&Bound<'py, PyAny>>,
) -> PyResult<Vec<TableTuple<'py>>> {
    let rows = duel::probability_table(params_arg(p, q)?, rounds).map_err(to_py_err)?;
    rows.iter()
        .map(|r| Ok((r.round, fraction(py, &r.p_a)?, fraction(py, &r.p_b)?, r.shooter.letter())))
        .collect()
}

#[pyfunction]
#[pyo3(signature = (q, rounds, alphabet = "AB"))]
fn firing_sequence(q: &Bound<'_, PyAny>, rounds: usize, alphabet: &str) -> PyResult<String> {
    let params = DuelParams::from_q(rational_arg(q)?).map_err(to_py_err)?;
    Ok(render_word(duel::generate(params, rounds.max(1)).signs(), alphabet_arg(alphabet)?))
}

#[pyfunction]
fn tm_term(n: u64) -> i32 {
    thue_morse::tm_term(n).value()
}

#[pyfunction]
#[pyo3(signature = (length, alphabet = "AB"))]
fn tm_prefix(length: usize, alphabet: &str) -> PyResult<String> {
    Ok(render_word(TMSequence::new(length).terms(), alphabet_arg(alphabet)?))
}

#[pyfunction]
fn balanced_prefix_sum(m: u64) -> i64 {
    thue_morse::balanced_prefix_sum(m)
}

/// `(agreement_length, first_mismatch or None)`.
#[pyfunction]
fn compare(q: &Bound<'_, PyAny>, window: usize) -> PyResult<(usize, Option<usize>)> {
    let params = DuelParams::from_q(rational_arg(q)?).map_err(to_py_err)?;
    let cmp = thue_morse::compare(params, window);
    Ok((cmp.agreement_length, cmp.first_mismatch))
}

/// `(|sum_{i<N} t_i q^i|, N)`.
#[pyfunction]
fn tm_generating_magnitude<'py>(
    py: Python<'py>,
    q: &Bound<'py, PyAny>,
    tail_bound: &Bound<'py, PyAny>,
) -> PyResult<(Bound<'py, PyAny>, usize)> {
    let m = thue_morse::tm_generating_magnitude(&rational_arg(q)?, &rational_arg(tail_bound)?).map_err(to_py_err)?;
    Ok((fraction(py, &m.value)?, m.terms))
}

/// Isolating intervals `(lo, hi)` for the roots of the integer polynomial
/// `coeffs` (constant term first) in the open window `(lo, hi)`.
#[pyfunction]
fn isolate_roots<'py>(
    py: Python<'py>,
    coeffs: Vec<BigInt>,
    lo: &Bound<'py, PyAny>,
    hi: &Bound<'py, PyAny>,
    width: &Bound<'py, PyAny>,
) -> PyResult<Vec<(Bound<'py, PyAny>, Bound<'py, PyAny>)>> {
    let poly = IntPoly::new(coeffs);
    let roots = numerics::isolate_roots(&poly, &rational_arg(lo)?, &rational_arg(hi)?, &rational_arg(width)?)
        .map_err(to_py_err)?;
    roots
        .iter()
        .map(|r| Ok((fraction(py, &r.lo)?, fraction(py, &r.hi)?)))
        .collect()
}

/// Quotient coefficients, or `None` when the division leaves a remainder.
#[pyfunction]
fn exact_divide(dividend: Vec<BigInt>, divisor: Vec<BigInt>) -> Option<Vec<BigInt>> {
    numerics::exact_divide(&IntPoly::new(dividend), &IntPoly::new(divisor)).map(|q| q.coeffs().to_vec())
}

#[pyfunction]
#[pyo3(signature = (max_n, width = None))]
fn alpha_sequence<'py>(
    py: Python<'py>,
    max_n: usize,
    width: Option<&Bound<'py, PyAny>>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let width = match width {
        Some(w) => rational_arg(w)?,
        None => numerics::isolate::dyadic_width(40),
    };
    let records = thresholds::alpha_sequence(max_n, &width).map_err(to_py_err)?;
    let report = thresholds::conjecture_report(&records);
    records
        .iter()
        .zip(&report.rows)
        .map(|(rec, row)| {
            let d = PyDict::new(py);
            d.set_item("k", row.k)?;
            d.set_item("n", rec.n)?;
            d.set_item("lo", fraction(py, &rec.root.lo)?)?;
            d.set_item("hi", fraction(py, &rec.root.hi)?)?;
            d.set_item("scaled_gap", row.scaled_gap)?;
            d.set_item("non_monotone", row.non_monotone)?;
            d.set_item("switching", row.switching)?;
            Ok(d)
        })
        .collect()
}

#[pyfunction]
#[pyo3(signature = (max_n, width = None))]
fn conjecture_report_csv(max_n: usize, width: Option<&Bound<'_, PyAny>>) -> PyResult<String> {
    let width = match width {
        Some(w) => rational_arg(w)?,
        None => numerics::isolate::dyadic_width(40),
    };
    let records = thresholds::alpha_sequence(max_n, &width).map_err(to_py_err)?;
    Ok(thresholds::report_csv(&thresholds::conjecture_report(&records)))
}

fn expansion_dict<'py>(py: Python<'py>, exp: &BetaExpansion) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("base", fraction(py, &exp.base)?)?;
    d.set_item("x", fraction(py, &exp.x)?)?;
    d.set_item("integer_digits", exp.integer_digits.clone())?;
    d.set_item("digits", exp.fractional_digits.clone())?;
    d.set_item("remainder", fraction(py, &exp.remainder)?)?;
    d.set_item("rendered", exp.render())?;
    Ok(d)
}

#[pyfunction]
fn greedy_expansion<'py>(
    py: Python<'py>,
    x: &Bound<'py, PyAny>,
    base: &Bound<'py, PyAny>,
    digits: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let exp = beta::greedy_expansion(&rational_arg(x)?, &rational_arg(base)?, digits).map_err(to_py_err)?;
    expansion_dict(py, &exp)
}

#[pyfunction]
fn duel_expansion(py: Python<'_>, n: u64, digits: usize) -> PyResult<Bound<'_, PyDict>> {
    let exp = beta::duel_expansion(n, digits).map_err(to_py_err)?;
    expansion_dict(py, &exp)
}

/// First violating prefix length, or `None` when every prefix is valid.
#[pyfunction]
fn validate_expansion(x: &Bound<'_, PyAny>, base: &Bound<'_, PyAny>, digits: Vec<u32>) -> PyResult<Option<usize>> {
    let x = rational_arg(x)?;
    let exp = BetaExpansion::from_digits(x.clone(), rational_arg(base)?, Vec::new(), digits).map_err(to_py_err)?;
    Ok(beta::validate_expansion(&x, &exp).first_violation)
}

/// `(gap_A, gap_B, bound)`.
#[pyfunction]
fn half_limit_check<'py>(
    py: Python<'py>,
    p: &Bound<'py, PyAny>,
    rounds: usize,
) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>, Bound<'py, PyAny>)> {
    let params = DuelParams::from_p(rational_arg(p)?).map_err(to_py_err)?;
    let h = beta::half_limit_check(&params, rounds);
    Ok((fraction(py, &h.gap_a)?, fraction(py, &h.gap_b)?, fraction(py, &h.bound)?))
}

#[pyfunction]
#[pyo3(signature = (p, max_rounds, trials, seed = 0))]
fn run_sim<'py>(
    py: Python<'py>,
    p: &Bound<'py, PyAny>,
    max_rounds: usize,
    trials: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let params = DuelParams::from_p(rational_arg(p)?).map_err(to_py_err)?;
    let config = SimConfig::new(params, max_rounds, trials, seed).map_err(to_py_err)?;
    let r = py.detach(|| simulate::run_sim(&config));
    let d = PyDict::new(py);
    d.set_item("alice_wins", r.alice_wins)?;
    d.set_item("bob_wins", r.bob_wins)?;
    d.set_item("no_decision", r.no_decision)?;
    d.set_item("analytic_pA", fraction(py, &r.analytic_pa)?)?;
    d.set_item("analytic_pB", fraction(py, &r.analytic_pb)?)?;
    d.set_item("analytic_no_decision", fraction(py, &r.analytic_no_decision)?)?;
    d.set_item("z_scores", r.z_scores().to_vec())?;
    Ok(d)
}

#[pymodule]
#[pyo3(name = "galois_duel")]
fn py_galois_duel(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDuel>()?;
    m.add_function(wrap_pyfunction!(probability_table, m)?)?;
    m.add_function(wrap_pyfunction!(firing_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(tm_term, m)?)?;
    m.add_function(wrap_pyfunction!(tm_prefix, m)?)?;
    m.add_function(wrap_pyfunction!(balanced_prefix_sum, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(tm_generating_magnitude, m)?)?;
    m.add_function(wrap_pyfunction!(isolate_roots, m)?)?;
    m.add_function(wrap_pyfunction!(exact_divide, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(conjecture_report_csv, m)?)?;
    m.add_function(wrap_pyfunction!(greedy_expansion, m)?)?;
    m.add_function(wrap_pyfunction!(duel_expansion, m)?)?;
    m.add_function(wrap_pyfunction!(validate_expansion, m)?)?;
    m.add_function(wrap_pyfunction!(half_limit_check, m)?)?;
    m.add_function(wrap_pyfunction!(run_sim, m)?)?;
    Ok(())
}
