//! Python bindings. Integers cross as Python `int`, rationals as
//! `fractions.Fraction`; structured results come back as plain dicts.

use latgate::catalog::{catalog_get, standard_ids};
use latgate::charvec;
use latgate::enumerate::{self, EnumQuery};
use latgate::json::{gram_to_value, parse_gram};
use latgate::manifold;
use latgate::report::{self, AnalyzeOptions, InputEcho};
use latgate::selftest::{run_selftest, SelftestOptions};
use latgate::{GramMatrix, ManifoldDescriptor};
use num_bigint::BigInt;
use num_rational::BigRational;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py_json<'py, T: serde::Serialize + ?Sized>(py: Python<'py>, x: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(x).map_err(value_error)?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Integral symmetric bilinear form given by its Gram matrix.
#[pyclass(name = "Gram", module = "latgate", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyGram {
    inner: GramMatrix,
}

#[pymethods]
impl PyGram {
    #[new]
    fn new(rows: Vec<Vec<BigInt>>) -> PyResult<Self> {
        GramMatrix::new(rows).map(|inner| PyGram { inner }).map_err(value_error)
    }

    /// Parses `{"rank": n, "gram": [[...], ...]}`.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        parse_gram(text).map(|inner| PyGram { inner }).map_err(value_error)
    }

    /// Built-in lattice such as `E8`, `Zn:8`, `D12plus` or `E8+Z1`.
    #[staticmethod]
    fn catalog(id: &str) -> PyResult<Self> {
        catalog_get(id).map(|e| PyGram { inner: e.gram }).map_err(value_error)
    }

    fn to_json(&self) -> String {
        gram_to_value(&self.inner).to_string()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn rows(&self) -> Vec<Vec<BigInt>> {
        self.inner.rows()
    }

    fn determinant(&self) -> BigInt {
        self.inner.determinant()
    }

    fn is_unimodular(&self) -> bool {
        self.inner.is_unimodular()
    }

    fn parity(&self) -> String {
        self.inner.parity().to_string()
    }

    fn definiteness(&self) -> String {
        self.inner.definiteness().to_string()
    }

    /// `None` for degenerate forms.
    fn signature(&self) -> Option<i64> {
        self.inner.signature().ok()
    }

    fn inner_product(&self, u: Vec<BigInt>, v: Vec<BigInt>) -> PyResult<BigInt> {
        self.check_len(&u)?;
        self.check_len(&v)?;
        Ok(self.inner.inner(&u, &v))
    }

    fn norm(&self, v: Vec<BigInt>) -> PyResult<BigInt> {
        self.check_len(&v)?;
        Ok(self.inner.norm(&v))
    }

    fn negate(&self) -> Self {
        PyGram { inner: self.inner.negate() }
    }

    fn direct_sum(&self, other: &PyGram) -> Self {
        PyGram { inner: self.inner.direct_sum(&other.inner) }
    }

    /// Gram matrix in the basis given by the rows of `u`.
    fn basis_change(&self, u: Vec<Vec<BigInt>>) -> PyResult<Self> {
        self.inner
            .basis_change(&u)
            .map(|inner| PyGram { inner })
            .map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!("Gram(rank={}, det={})", self.inner.rank(), self.inner.determinant())
    }
}

impl PyGram {
    fn check_len(&self, v: &[BigInt]) -> PyResult<()> {
        if v.len() == self.inner.rank() {
            Ok(())
        } else {
            Err(value_error(format!("expected {} coordinates, got {}", self.inner.rank(), v.len())))
        }
    }
}

#[pyfunction]
fn catalog_ids() -> Vec<String> {
    standard_ids()
}

/// Lexicographically least minimal characteristic vector of a positive
/// definite form.
#[pyfunction]
fn min_char_vector<'py>(py: Python<'py>, g: &PyGram) -> PyResult<Bound<'py, PyAny>> {
    let r = charvec::min_char_vector(&g.inner).map_err(value_error)?;
    let d = pyo3::types::PyDict::new(py);
    d.set_item("minimizer", r.minimizer.0)?;
    d.set_item("m", r.norm_m)?;
    d.set_item("k", r.k)?;
    d.set_item("count_minimizers", r.count_minimizers)?;
    d.set_item("base", r.base.0)?;
    Ok(d.into_any())
}

/// `"Identity"` or `"HasShortCharVector"`.
#[pyfunction]
fn elkies_verdict(g: &PyGram) -> PyResult<String> {
    let v = charvec::elkies_verdict(&g.inner).map_err(value_error)?;
    Ok(format!("{:?}", v.label()))
}

#[pyfunction]
fn count_unit_vectors(g: &PyGram) -> PyResult<u64> {
    charvec::count_unit_vectors(&g.inner).map_err(value_error)
}

/// Every `(u, Q(u + shift))` with `Q(u + shift) <= radius`, sorted by `u`.
#[pyfunction]
fn enumerate_coset(
    g: &PyGram,
    shift: Vec<BigRational>,
    radius: BigRational,
) -> PyResult<Vec<(Vec<BigInt>, BigRational)>> {
    let q = EnumQuery::new(g.inner.clone(), shift, radius).map_err(value_error)?;
    let r = enumerate::enumerate_coset(&q).map_err(value_error)?;
    Ok(r.vectors.into_iter().map(|v| v.0).zip(r.norms).collect())
}

/// Moduli-space verdict for a manifold with intersection form `g`.
#[pyfunction]
#[pyo3(signature = (g, b1 = 0))]
fn donaldson_verdict<'py>(py: Python<'py>, g: &PyGram, b1: u64) -> PyResult<Bound<'py, PyAny>> {
    let m = ManifoldDescriptor::new(b1, g.inner.clone());
    let r = manifold::donaldson_verdict(&m).map_err(value_error)?;
    to_py_json(py, &r)
}

/// `max(0, 4 p - 2 s_min)`.
#[pyfunction]
fn weitzenbock_bound(s_min: BigRational, p: BigRational) -> PyResult<BigRational> {
    manifold::weitzenbock_bound(&s_min, &p).map_err(value_error)
}

#[pyfunction]
fn sw_boundary_number(k: i64) -> PyResult<u8> {
    manifold::sw_boundary_number(k).map(|s| s.value).map_err(value_error)
}

/// Full analysis report as a dict, identical to `latgate analyze --json`.
#[pyfunction]
#[pyo3(signature = (g, oracle = false, stats = false))]
fn analyze<'py>(py: Python<'py>, g: &PyGram, oracle: bool, stats: bool) -> PyResult<Bound<'py, PyAny>> {
    let input = InputEcho {
        source: "python".into(),
        form_id: None,
        b1: None,
        negated: false,
        form: g.inner.clone(),
    };
    let opts = AnalyzeOptions {
        oracle,
        stats,
        ..Default::default()
    };
    let r = py.detach(|| report::analyze(input, &opts));
    py.import("json")?.call_method1("loads", (r.to_json(),))
}

/// Runs the invariant suite; returns `(name, passed, detail)` rows.
#[pyfunction]
#[pyo3(signature = (max_rank = 8))]
fn selftest(py: Python<'_>, max_rank: usize) -> Vec<(String, bool, String)> {
    let opts = SelftestOptions {
        max_rank,
        ..Default::default()
    };
    py.detach(|| run_selftest(&opts))
        .into_iter()
        .map(|r| (r.name, r.passed, r.detail))
        .collect()
}

#[pymodule]
#[pyo3(name = "latgate")]
fn latgate_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGram>()?;
    m.add_function(wrap_pyfunction!(catalog_ids, m)?)?;
    m.add_function(wrap_pyfunction!(min_char_vector, m)?)?;
    m.add_function(wrap_pyfunction!(elkies_verdict, m)?)?;
    m.add_function(wrap_pyfunction!(count_unit_vectors, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_coset, m)?)?;
    m.add_function(wrap_pyfunction!(donaldson_verdict, m)?)?;
    m.add_function(wrap_pyfunction!(weitzenbock_bound, m)?)?;
    m.add_function(wrap_pyfunction!(sw_boundary_number, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    Ok(())
}
