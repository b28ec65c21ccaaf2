//! Python bindings: `import polarizability`.
//!
//! Records and reports cross the boundary as plain dicts built from the same
//! JSON the CLI prints, so both front ends agree field for field.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyAny;
use serde::Serialize;

use polarizability_core as core;
use polarizability_core::intkernel::PrimePower;
use polarizability_core::weilpoly;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn prime_power(q: i128) -> PyResult<PrimePower> {
    PrimePower::new(q).map_err(value_error)
}

fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(value_error)?;
    py.import("json")?.call_method1("loads", (text,))
}

/// The isogeny class with Weil polynomial `x^4 + a x^3 + b x^2 + a q x + q^2`.
#[pyclass(frozen, eq, hash, skip_from_py_object, module = "polarizability")]
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct SurfaceClass {
    inner: weilpoly::SurfaceClass,
}

#[pymethods]
impl SurfaceClass {
    #[new]
    fn new(q: i128, a: i128, b: i128) -> PyResult<Self> {
        Ok(Self {
            inner: weilpoly::SurfaceClass::new(prime_power(q)?, a, b),
        })
    }

    #[getter]
    fn q(&self) -> i128 {
        self.inner.q()
    }

    #[getter]
    fn p(&self) -> i128 {
        self.inner.p()
    }

    #[getter]
    fn m(&self) -> u32 {
        self.inner.qp().m()
    }

    #[getter]
    fn a(&self) -> i128 {
        self.inner.a()
    }

    #[getter]
    fn b(&self) -> i128 {
        self.inner.b()
    }

    fn coefficients(&self) -> [i128; 5] {
        self.inner.coefficients()
    }

    fn is_valid(&self) -> bool {
        weilpoly::on_circle_valid(&self.inner)
    }

    fn newton_type(&self) -> PyResult<&'static str> {
        weilpoly::newton_type(&self.inner)
            .map(|n| n.as_str())
            .map_err(value_error)
    }

    fn shape(&self) -> PyResult<&'static str> {
        weilpoly::factor_shape(&self.inner)
            .map(|s| s.as_str())
            .map_err(value_error)
    }

    /// Verdict of the closed-form criterion.
    fn principally_polarizable(&self) -> PyResult<bool> {
        core::criteria::main_criterion(&self.inner).map_err(value_error)
    }

    fn cm_decision(&self) -> PyResult<&'static str> {
        core::cmquartic::cm_decision(&self.inner)
            .map(|d| d.as_str())
            .map_err(value_error)
    }

    /// The full decision record as a dict.
    fn decide<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &core::criteria::decide(&self.inner))
    }

    fn __repr__(&self) -> String {
        format!(
            "SurfaceClass(q={}, a={}, b={})",
            self.q(),
            self.a(),
            self.b()
        )
    }
}

/// Decision record for `(q, a, b)` as a dict.
#[pyfunction]
fn decide(py: Python<'_>, q: i128, a: i128, b: i128) -> PyResult<Bound<'_, PyAny>> {
    SurfaceClass::new(q, a, b)?.decide(py)
}

#[pyfunction]
fn main_criterion(q: i128, a: i128, b: i128) -> PyResult<bool> {
    SurfaceClass::new(q, a, b)?.principally_polarizable()
}

#[pyfunction]
fn trace_zero_criterion(a_e: i128, q: i128) -> PyResult<bool> {
    core::criteria::trace_zero_criterion(a_e, prime_power(q)?).map_err(value_error)
}

/// All valid `(a, b)` over `F_q` in enumeration order.
#[pyfunction]
fn valid_classes(q: i128) -> PyResult<Vec<(i128, i128)>> {
    let classes = core::census::enumerate_valid(prime_power(q)?);
    Ok(classes.iter().map(|s| (s.a(), s.b())).collect())
}

/// Census report for `q` as a dict; `generated_at` is left as `None`.
#[pyfunction]
fn census(py: Python<'_>, q: i128) -> PyResult<Bound<'_, PyAny>> {
    let qp = prime_power(q)?;
    let report = py.detach(|| core::census::census_report(qp));
    to_py(py, &report)
}

/// Artin-symbol trace for `(0, -q)`.
#[pyfunction]
fn artin(py: Python<'_>, q: i128) -> PyResult<Bound<'_, PyAny>> {
    let s = weilpoly::SurfaceClass::new(prime_power(q)?, 0, -q);
    let o = core::criteria::artin_decision(&s).map_err(value_error)?;
    let d = pyo3::types::PyDict::new(py);
    d.set_item("field", o.field.to_string())?;
    d.set_item("d0", o.field.d0())?;
    d.set_item("delta", o.delta.to_string())?;
    d.set_item("ideal", o.ideal.to_string())?;
    d.set_item("splitting", o.splitting.as_str())?;
    d.set_item("psi", o.psi)?;
    d.set_item("principally_polarizable", o.principally_polarizable)?;
    Ok(d.into_any())
}

/// Summary of the degree-9 polarization checks.
#[pyfunction]
fn tzmodel(py: Python<'_>, q: i128) -> PyResult<Bound<'_, PyAny>> {
    let s = core::tzmodel::tz_summary(q).map_err(value_error)?;
    let out = to_py(py, &s)?;
    out.set_item("all_pass", s.all_pass())?;
    Ok(out)
}

#[pyfunction]
#[pyo3(signature = (qmax, jobs = 1))]
fn cross_check(py: Python<'_>, qmax: i128, jobs: usize) -> PyResult<Bound<'_, PyAny>> {
    let report = py
        .detach(|| core::criteria::cross_check(qmax, jobs))
        .map_err(value_error)?;
    to_py(py, &report)
}

/// `[(p, e), ...]` with the sign of `n` dropped.
#[pyfunction]
fn factorize(n: i128) -> PyResult<Vec<(i128, u32)>> {
    Ok(core::intkernel::factorize(n)
        .map_err(value_error)?
        .factors()
        .to_vec())
}

#[pyfunction]
fn kronecker(a: i128, n: i128) -> PyResult<i8> {
    core::intkernel::kronecker_symbol(a, n).map_err(value_error)
}

#[pymodule]
fn polarizability(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<SurfaceClass>()?;
    m.add_function(wrap_pyfunction!(decide, m)?)?;
    m.add_function(wrap_pyfunction!(main_criterion, m)?)?;
    m.add_function(wrap_pyfunction!(trace_zero_criterion, m)?)?;
    m.add_function(wrap_pyfunction!(valid_classes, m)?)?;
    m.add_function(wrap_pyfunction!(census, m)?)?;
    m.add_function(wrap_pyfunction!(artin, m)?)?;
    m.add_function(wrap_pyfunction!(tzmodel, m)?)?;
    m.add_function(wrap_pyfunction!(cross_check, m)?)?;
    m.add_function(wrap_pyfunction!(factorize, m)?)?;
    m.add_function(wrap_pyfunction!(kronecker, m)?)?;
    Ok(())
}
