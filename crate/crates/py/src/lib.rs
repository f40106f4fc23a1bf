//! Python bindings. Structured results cross the boundary as plain Python
//! dicts and lists (built from the same JSON the CLI prints).

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyAny;

use quadcap::capitulation::{self, DEFAULT_BOUND, DEFAULT_BUDGET};
use quadcap::claims::{self, ClaimConfig, ClaimId};
use quadcap::{classgroup, cyclotomic, splitting};

fn err(e: quadcap::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py(py: Python<'_>, value: &serde_json::Value) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

/// `Q(√d)`.
#[pyclass(name = "QuadraticField", frozen)]
struct PyField {
    inner: quadcap::QuadraticField,
}

#[pymethods]
impl PyField {
    #[new]
    fn new(d: i64) -> PyResult<Self> {
        Ok(PyField {
            inner: quadcap::QuadraticField::new(d).map_err(err)?,
        })
    }

    #[getter]
    fn d(&self) -> i64 {
        self.inner.d()
    }

    #[getter]
    fn discriminant(&self) -> i64 {
        self.inner.discriminant()
    }

    fn is_real(&self) -> bool {
        self.inner.is_real()
    }

    /// Parse an element such as `1+w` or `1/2-3/2s`.
    fn element(&self, text: &str) -> PyResult<PyElement> {
        Ok(PyElement {
            inner: quadcap::FieldElement::parse(self.inner, text).map_err(err)?,
        })
    }

    /// The ideal generated by the given elements.
    fn ideal(&self, gens: Vec<String>) -> PyResult<PyIdeal> {
        let elems = gens
            .iter()
            .map(|g| quadcap::FieldElement::parse(self.inner, g))
            .collect::<quadcap::Result<Vec<_>>>()
            .map_err(err)?;
        Ok(PyIdeal {
            inner: quadcap::FractionalIdeal::from_generators(self.inner, &elems).map_err(err)?,
        })
    }

    fn unit_ideal(&self) -> PyIdeal {
        PyIdeal {
            inner: quadcap::FractionalIdeal::unit(self.inner),
        }
    }

    fn ramified_primes(&self) -> Vec<i64> {
        splitting::ramified_set(self.inner)
    }

    fn class_number(&self) -> u64 {
        classgroup::class_number(self.inner)
    }

    /// `{d, D, h, divisors, reps, minkowski}` plus the structure string.
    fn class_group(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let cl = classgroup::class_group(self.inner);
        let mut v = cl.to_json();
        v["structure"] = serde_json::json!(cl.structure());
        to_py(py, &v)
    }

    fn nonufd_witness(&self, py: Python<'_>) -> PyResult<Option<Py<PyAny>>> {
        splitting::nonufd_witness(self.inner)
            .map(|w| to_py(py, &w.to_json()))
            .transpose()
    }

    fn __repr__(&self) -> String {
        format!("QuadraticField({})", self.inner.d())
    }
}

#[pyclass(name = "FieldElement", frozen)]
struct PyElement {
    inner: quadcap::FieldElement,
}

#[pymethods]
impl PyElement {
    /// Norm as a `"p/q"` string.
    fn norm(&self) -> String {
        self.inner.norm().to_string()
    }

    fn trace(&self) -> String {
        self.inner.trace().to_string()
    }

    fn conjugate(&self) -> PyElement {
        PyElement {
            inner: self.inner.conjugate(),
        }
    }

    fn is_irreducible(&self) -> PyResult<bool> {
        quadcap::quadfield::is_irreducible(&self.inner).map_err(err)
    }

    fn __mul__(&self, other: &PyElement) -> PyResult<PyElement> {
        Ok(PyElement {
            inner: self.inner.checked_mul(&other.inner).map_err(err)?,
        })
    }

    fn __add__(&self, other: &PyElement) -> PyResult<PyElement> {
        Ok(PyElement {
            inner: self.inner.checked_add(&other.inner).map_err(err)?,
        })
    }

    fn __sub__(&self, other: &PyElement) -> PyResult<PyElement> {
        Ok(PyElement {
            inner: self.inner.checked_sub(&other.inner).map_err(err)?,
        })
    }

    fn __truediv__(&self, other: &PyElement) -> PyResult<PyElement> {
        Ok(PyElement {
            inner: self.inner.checked_div(&other.inner).map_err(err)?,
        })
    }

    fn __eq__(&self, other: &PyElement) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("FieldElement({})", self.inner)
    }
}

#[pyclass(name = "FractionalIdeal", frozen)]
struct PyIdeal {
    inner: quadcap::FractionalIdeal,
}

#[pymethods]
impl PyIdeal {
    fn __mul__(&self, other: &PyIdeal) -> PyResult<PyIdeal> {
        Ok(PyIdeal {
            inner: self.inner.mul(&other.inner).map_err(err)?,
        })
    }

    fn __pow__(&self, e: i64, _modulo: Option<i64>) -> PyIdeal {
        PyIdeal {
            inner: self.inner.pow_signed(e),
        }
    }

    fn __eq__(&self, other: &PyIdeal) -> bool {
        self.inner == other.inner
    }

    fn dual(&self) -> PyIdeal {
        PyIdeal {
            inner: self.inner.dual(),
        }
    }

    fn conjugate(&self) -> PyIdeal {
        PyIdeal {
            inner: self.inner.galois_conjugate(),
        }
    }

    fn norm(&self) -> String {
        self.inner.norm().to_string()
    }

    fn is_unit(&self) -> bool {
        self.inner.is_unit_ideal()
    }

    /// A generator as a string, or `None` if the ideal is not principal.
    fn principal_generator(&self) -> Option<String> {
        self.inner.is_principal().map(|g| g.to_string())
    }

    fn class_order(&self) -> PyResult<u64> {
        self.inner.class_order().map_err(err)
    }

    /// Capitulation certificate `{d, ideal, n, alpha, gamma, verified, status}`.
    #[pyo3(signature = (bound = DEFAULT_BOUND, budget = DEFAULT_BUDGET))]
    fn capitulate(&self, py: Python<'_>, bound: u64, budget: u64) -> PyResult<Py<PyAny>> {
        let cert = capitulation::capitulate(&self.inner, bound, budget).map_err(err)?;
        to_py(py, &cert.to_json())
    }

    fn to_json(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &self.inner.to_json())
    }

    fn generators(&self) -> String {
        self.inner.generators_text()
    }

    fn __str__(&self) -> String {
        self.inner.to_text()
    }

    fn __repr__(&self) -> String {
        format!("FractionalIdeal({})", self.inner.to_text())
    }
}

/// `{p, coeffs, den, verified}` for the Gauss sum of an odd prime.
#[pyfunction]
fn gauss_sum(py: Python<'_>, p: i64) -> PyResult<Py<PyAny>> {
    let g = cyclotomic::gauss_sum(p).map_err(err)?;
    let verified = cyclotomic::verify_gauss_square(p).map_err(err)?;
    let mut v = g.to_json();
    v["p"] = serde_json::json!(p);
    v["verified"] = serde_json::json!(verified);
    to_py(py, &v)
}

/// `{d, n, coeffs, den, verified}` with `w² = d` in `Z[ζₙ]`.
#[pyfunction]
fn sqrt_embed(py: Python<'_>, d: i64) -> PyResult<Py<PyAny>> {
    let (n, w) = cyclotomic::embed_sqrt(d).map_err(err)?;
    to_py(py, &cyclotomic::sqrt_witness_json(d, n, &w))
}

/// The claim report for the given fields (default list when omitted).
#[pyfunction]
#[pyo3(signature = (fields = None, only = None))]
fn run_claims(py: Python<'_>, fields: Option<Vec<i64>>, only: Option<Vec<String>>) -> PyResult<Py<PyAny>> {
    let mut cfg = fields.map_or_else(ClaimConfig::default_fields, ClaimConfig::new);
    if let Some(ids) = only {
        let parsed = ids
            .iter()
            .map(|s| ClaimId::parse(s).ok_or_else(|| PyValueError::new_err(format!("unknown claim `{s}`"))))
            .collect::<PyResult<Vec<_>>>()?;
        cfg.claims = Some(parsed);
    }
    let report = py.detach(|| claims::run_claims(&cfg)).map_err(err)?;
    let value = serde_json::to_value(&report).map_err(|e| PyValueError::new_err(e.to_string()))?;
    to_py(py, &value)
}

#[pymodule(name = "quadcap")]
fn quadcap_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyElement>()?;
    m.add_class::<PyIdeal>()?;
    m.add_function(wrap_pyfunction!(gauss_sum, m)?)?;
    m.add_function(wrap_pyfunction!(sqrt_embed, m)?)?;
    m.add_function(wrap_pyfunction!(run_claims, m)?)?;
    Ok(())
}
