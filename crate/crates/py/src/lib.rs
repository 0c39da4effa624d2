//! Python bindings for `linkgrowth`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use linkgrowth::alexander::{alexander_report, higher_alexander_univariate};
use linkgrowth::covers::{self, HomologyMethod, HomologySummary};
use linkgrowth::growth::{self, FamilySpec};
use linkgrowth::lattices::{self, QuotientGroup};
use linkgrowth::laurent::LaurentPoly;
use linkgrowth::linkio::{self, WirtingerPresentation};
use linkgrowth::mahler::{self, MahlerOptions, DEFAULT_SEED, DEFAULT_TOL};

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_err(e: impl ToString) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

/// A Laurent polynomial with integer coefficients in `u1, ..., ud`.
#[pyclass(name = "Polynomial", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyPolynomial(LaurentPoly);

#[pymethods]
impl PyPolynomial {
    #[new]
    #[pyo3(signature = (text, dim=None))]
    fn new(text: &str, dim: Option<usize>) -> PyResult<Self> {
        let p = match dim {
            Some(d) => LaurentPoly::parse_with_dim(text, d),
            None => text.parse(),
        };
        p.map(PyPolynomial).map_err(value_err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn normalize(&self) -> Self {
        PyPolynomial(self.0.normalize())
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Value at a point of `(C^*)^d`.
    fn __call__(&self, point: Vec<num_complex::Complex64>) -> PyResult<num_complex::Complex64> {
        self.0.eval(&point).map_err(value_err)
    }

    fn __mul__(&self, other: &PyPolynomial) -> PyResult<Self> {
        self.0.checked_mul(&other.0).map(PyPolynomial).map_err(value_err)
    }

    fn __add__(&self, other: &PyPolynomial) -> PyResult<Self> {
        self.0.checked_add(&other.0).map(PyPolynomial).map_err(value_err)
    }

    fn __sub__(&self, other: &PyPolynomial) -> PyResult<Self> {
        self.0.checked_sub(&other.0).map(PyPolynomial).map_err(value_err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Polynomial({:?}, dim={})", self.0.to_string(), self.0.dim())
    }
}

/// A full-rank sublattice of `Z^d`.
#[pyclass(name = "Lattice", frozen, from_py_object)]
#[derive(Clone)]
struct PyLattice(lattices::Lattice);

#[pymethods]
impl PyLattice {
    /// Parses "cyclic:7", "diag:3,2", "scaled:4,2" or "cols:2,1;-1,2".
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        spec.parse().map(PyLattice).map_err(value_err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn index(&self) -> u64 {
        self.0.index()
    }

    fn columns(&self) -> Vec<Vec<i64>> {
        self.0.columns().to_vec()
    }

    fn shortest_vector(&self) -> PyResult<f64> {
        lattices::shortest_vector(&self.0).map_err(value_err)
    }

    /// Invariant factors of `Z^d / L`.
    fn quotient(&self) -> PyResult<Vec<u64>> {
        Ok(QuotientGroup::new(&self.0).map_err(value_err)?.invariant_factors().to_vec())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Lattice({:?})", self.0.to_string())
    }
}

/// A link diagram together with its Wirtinger presentation.
#[pyclass(name = "Link", frozen)]
struct PyLink {
    name: String,
    diagram: linkio::LinkDiagram,
    pres: WirtingerPresentation,
}

fn summary_dict<'py>(py: Python<'py>, s: &HomologySummary) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("betti", s.betti)?;
    d.set_item("invariant_factors", s.invariant_factors.clone())?;
    d.set_item("torsion_order", s.torsion_order.clone())?;
    d.set_item("lattice", &s.lattice)?;
    d.set_item("index", s.index)?;
    d.set_item("shortest_vector", s.shortest_vector)?;
    d.set_item("sfix_dim", s.sfix_dim)?;
    Ok(d)
}

fn method_of(name: &str) -> PyResult<HomologyMethod> {
    match name {
        "direct" => Ok(HomologyMethod::Direct),
        "relative" => Ok(HomologyMethod::Relative),
        _ => Err(value_err(format!("method must be 'direct' or 'relative', not {name:?}"))),
    }
}

impl PyLink {
    fn build(name: String, diagram: linkio::LinkDiagram) -> PyResult<Self> {
        let pres = linkio::wirtinger(&diagram).map_err(value_err)?;
        Ok(PyLink { name, diagram, pres })
    }
}

#[pymethods]
impl PyLink {
    /// A built-in link by name or alias.
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        let diagram = linkio::builtin_link(name).map_err(value_err)?;
        Self::build(name.to_string(), diagram)
    }

    /// A link from PD text such as "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]".
    #[staticmethod]
    fn from_pd(text: &str) -> PyResult<Self> {
        let diagram = linkio::parse_pd(text).and_then(|pd| pd.to_diagram()).map_err(value_err)?;
        Self::build("pd".to_string(), diagram)
    }

    /// The closure of a braid word on `strands` strands (generators are
    /// 1-based, negative for inverses).
    #[staticmethod]
    fn from_braid(strands: usize, word: Vec<i32>) -> PyResult<Self> {
        let pd = linkio::PdCode::from_braid(strands, &word).map_err(value_err)?;
        Self::build("braid".to_string(), pd.to_diagram().map_err(value_err)?)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Self::build("json".to_string(), linkio::LinkDiagram::from_json(text).map_err(value_err)?)
    }

    fn to_json(&self) -> String {
        self.diagram.to_json()
    }

    #[getter]
    fn name(&self) -> &str {
        &self.name
    }

    #[getter]
    fn components(&self) -> usize {
        self.pres.num_components
    }

    #[getter]
    fn crossings(&self) -> usize {
        self.diagram.num_crossings()
    }

    fn alexander(&self) -> PyResult<PyPolynomial> {
        Ok(PyPolynomial(alexander_report(&self.pres).map_err(runtime_err)?.delta))
    }

    /// `Δ_i` of a knot.
    fn higher_alexander(&self, i: usize) -> PyResult<PyPolynomial> {
        if i == 0 {
            return Err(value_err("Alexander polynomials are indexed from 1"));
        }
        higher_alexander_univariate(&self.pres, i).map(PyPolynomial).map_err(runtime_err)
    }

    #[pyo3(signature = (lattice, method="relative"))]
    fn cover<'py>(&self, py: Python<'py>, lattice: &PyLattice, method: &str) -> PyResult<Bound<'py, PyDict>> {
        let s = covers::homology(&self.pres, &lattice.0, method_of(method)?).map_err(runtime_err)?;
        summary_dict(py, &s)
    }

    fn sigma_prime_rank(&self, lattice: &PyLattice) -> PyResult<u64> {
        covers::sigma_prime_rank(&self.pres, &lattice.0).map_err(runtime_err)
    }

    /// Growth series over "cyclic:R", "diag:N" or "list:...". Returns a dict
    /// with `records`, `failures` and, when `tail` is given, `rate`.
    #[pyo3(signature = (family, tail=None, method="relative", tol=DEFAULT_TOL, seed=DEFAULT_SEED))]
    fn growth<'py>(
        &self,
        py: Python<'py>,
        family: &str,
        tail: Option<usize>,
        method: &str,
        tol: f64,
        seed: u64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let fam: FamilySpec = family.parse().map_err(value_err)?;
        let hm = method_of(method)?;
        let run = py.detach(|| growth::run_family(&self.pres, &fam, hm)).map_err(runtime_err)?;
        let records = pyo3::types::PyList::empty(py);
        for r in &run.records {
            let d = PyDict::new(py);
            d.set_item("lattice", &r.lattice)?;
            d.set_item("m", r.m)?;
            d.set_item("min_vec", r.min_vec)?;
            d.set_item("torsion_order", r.b.clone())?;
            d.set_item("betti", r.betti)?;
            d.set_item("normalized_log", r.normalized_log)?;
            records.append(d)?;
        }
        let failures: Vec<(String, String)> =
            run.failures.iter().map(|f| (f.lattice.clone(), f.error.clone())).collect();
        let out = PyDict::new(py);
        out.set_item("records", records)?;
        out.set_item("failures", failures)?;
        if let Some(t) = tail {
            let cmp = growth::comparison(&self.pres, &MahlerOptions { tol, seed }).map_err(runtime_err)?;
            let rate = growth::estimate_rate(&run.records, t, cmp.log_mahler).map_err(value_err)?;
            let d = PyDict::new(py);
            d.set_item("last", rate.last)?;
            d.set_item("tail_max", rate.tail_max)?;
            d.set_item("reference_log_m", rate.reference_log_m)?;
            d.set_item("abs_gap", rate.abs_gap)?;
            out.set_item("rate", d)?;
        }
        Ok(out)
    }

    fn __repr__(&self) -> String {
        format!("Link({:?}, components={}, crossings={})", self.name, self.components(), self.crossings())
    }
}

/// Mahler measure; returns a dict with `value`, `log_value`, `method`,
/// `error_bound` and `converged`.
#[pyfunction]
#[pyo3(signature = (poly, tol=DEFAULT_TOL, seed=DEFAULT_SEED))]
fn mahler_measure<'py>(py: Python<'py>, poly: &PyPolynomial, tol: f64, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let r = py.detach(|| mahler::mahler(&poly.0, &MahlerOptions { tol, seed })).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("value", r.value)?;
    d.set_item("log_value", r.log_value)?;
    d.set_item("method", r.method.as_str())?;
    d.set_item("error_bound", r.error_bound)?;
    d.set_item("converged", r.diagnostics.converged)?;
    Ok(d)
}

/// Names, aliases and component counts of the built-in links.
#[pyfunction]
fn table() -> Vec<(String, Vec<String>, usize, String)> {
    linkio::table()
        .iter()
        .map(|e| {
            (
                e.name.to_string(),
                e.aliases.iter().map(|a| a.to_string()).collect(),
                e.components,
                e.known_delta.to_string(),
            )
        })
        .collect()
}

#[pymodule(name = "linkgrowth")]
fn linkgrowth_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolynomial>()?;
    m.add_class::<PyLattice>()?;
    m.add_class::<PyLink>()?;
    m.add_function(wrap_pyfunction!(mahler_measure, m)?)?;
    m.add_function(wrap_pyfunction!(table, m)?)?;
    Ok(())
}
