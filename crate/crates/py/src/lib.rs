//! Python bindings. Line indices are 0-based, as in the Rust library.

use milfib_core::arrangement::{
    build_lattice, named_arrangement, Arrangement as CoreArrangement, IncidenceLattice, InputFile,
};
use milfib_core::fixtures::run_suite;
use milfib_core::milnor::{full_spectrum, grf_dims};
use milfib_core::realize::{incidence_from_lattice, search_realizations, DEFAULT_KERNEL_CAP};
use milfib_core::report::{analyze, to_canonical_json, AnalysisOptions, LatticeSummary};
use milfib_core::resonance::{
    alpha_components, aomoto_h1, check_condition_02, net_detect, search_i_for_02, weights_from_k_i,
    DEFAULT_SEARCH_CAP,
};
use milfib_core::Error;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

pyo3::create_exception!(milfib, ConsistencyError, PyRuntimeError);

fn to_py(e: Error) -> PyErr {
    if e.is_invariant_violation() {
        ConsistencyError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

/// Converts any serializable value into plain Python objects through JSON.
fn to_object<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

/// A line arrangement in ℙ² together with its intersection lattice.
#[pyclass(module = "milfib", frozen)]
struct Arrangement {
    arr: CoreArrangement,
    lat: IncidenceLattice,
}

impl Arrangement {
    fn wrap(arr: CoreArrangement) -> PyResult<Self> {
        let lat = build_lattice(&arr).map_err(to_py)?;
        Ok(Self { arr, lat })
    }

    fn d(&self) -> usize {
        self.arr.degree()
    }
}

#[pymethods]
impl Arrangement {
    /// One of the built-in arrangements: braid, pappus-dual, ex-3-1-iii, ceva3, hesse.
    #[staticmethod]
    fn named(name: &str) -> PyResult<Self> {
        Self::wrap(named_arrangement(name).map_err(to_py)?)
    }

    /// Parses an input file in either the plane or the hyperplane format.
    #[staticmethod]
    #[pyo3(signature = (text, seed = 0))]
    fn from_json(text: &str, seed: u64) -> PyResult<Self> {
        let (arr, _) = InputFile::parse(text)
            .and_then(|f| f.into_arrangement(seed))
            .map_err(to_py)?;
        Self::wrap(arr)
    }

    #[getter]
    fn name(&self) -> &str {
        self.arr.name()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.d()
    }

    fn lattice(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_object(py, &LatticeSummary::new(&self.lat))
    }

    /// The eigen table for k = 1, ..., d-1.
    fn spectrum(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_object(py, &full_spectrum(&self.arr, &self.lat).map_err(to_py)?)
    }

    /// (grf0, grf1) at λ = exp(2πik/d).
    fn grf(&self, k: usize) -> PyResult<(usize, usize)> {
        grf_dims(&self.arr, &self.lat, k).map_err(to_py)
    }

    fn b1(&self, k: usize) -> PyResult<usize> {
        let (a, b) = self.grf(k)?;
        Ok(a + b)
    }

    /// Aomoto H¹ for the residues determined by (k, subset).
    #[pyo3(signature = (k, subset, distinguished = None))]
    fn aomoto_h1(
        &self,
        k: usize,
        subset: Vec<usize>,
        distinguished: Option<usize>,
    ) -> PyResult<usize> {
        let w = weights_from_k_i(self.d(), k, &subset).map_err(to_py)?;
        aomoto_h1(
            &self.arr,
            &self.lat,
            &w,
            distinguished.unwrap_or(self.d() - 1),
        )
        .map_err(to_py)
    }

    #[pyo3(signature = (k, subset, distinguished = None))]
    fn alpha_components(
        &self,
        k: usize,
        subset: Vec<usize>,
        distinguished: Option<usize>,
    ) -> PyResult<Vec<Vec<usize>>> {
        let w = weights_from_k_i(self.d(), k, &subset).map_err(to_py)?;
        alpha_components(&self.lat, &w, distinguished.unwrap_or(self.d() - 1)).map_err(to_py)
    }

    /// Verdict of the residue condition for a subset of size k.
    fn check_residue(&self, py: Python<'_>, k: usize, subset: Vec<usize>) -> PyResult<Py<PyAny>> {
        to_object(
            py,
            &check_condition_02(&self.lat, self.d(), k, &subset).map_err(to_py)?,
        )
    }

    /// First subset of size k satisfying the residue condition, with its branch.
    #[pyo3(signature = (k, cap = DEFAULT_SEARCH_CAP))]
    fn search_residue(&self, py: Python<'_>, k: usize, cap: usize) -> PyResult<Py<PyAny>> {
        to_object(
            py,
            &search_i_for_02(&self.lat, self.d(), k, cap).map_err(to_py)?,
        )
    }

    /// All m-nets, each as a list of block labels per line.
    #[pyo3(signature = (m, cap = DEFAULT_SEARCH_CAP))]
    fn nets(&self, m: usize, cap: usize) -> PyResult<Vec<Vec<usize>>> {
        let nets = net_detect(&self.lat, m, cap).map_err(to_py)?;
        Ok(nets.iter().map(|phi| phi.labels().to_vec()).collect())
    }

    /// Full analysis document as Python objects.
    fn analyze(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_object(
            py,
            &analyze(&self.arr, &self.lat, &AnalysisOptions::default()).map_err(to_py)?,
        )
    }

    /// Full analysis document as canonical JSON text.
    fn analyze_json(&self) -> PyResult<String> {
        let doc = analyze(&self.arr, &self.lat, &AnalysisOptions::default()).map_err(to_py)?;
        to_canonical_json(&doc).map_err(to_py)
    }

    /// Kernel vectors of the triple-point incidence matrix over ℤ/n₁ (× ℤ/n₂).
    #[pyo3(signature = (moduli, cap = DEFAULT_KERNEL_CAP))]
    fn realize(&self, py: Python<'_>, moduli: Vec<u64>, cap: usize) -> PyResult<Py<PyAny>> {
        let sys = incidence_from_lattice(&self.lat).map_err(to_py)?;
        to_object(py, &search_realizations(&sys, &moduli, cap).map_err(to_py)?)
    }

    fn __repr__(&self) -> String {
        format!(
            "Arrangement(name={:?}, degree={})",
            self.arr.name(),
            self.d()
        )
    }
}

/// Runs the built-in regression fixtures and returns their outcomes.
#[pyfunction]
#[pyo3(signature = (only = Vec::new()))]
fn examples(py: Python<'_>, only: Vec<String>) -> PyResult<Py<PyAny>> {
    to_object(py, &run_suite(&only, &[]).map_err(to_py)?)
}

#[pymodule]
fn milfib(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Arrangement>()?;
    m.add_function(wrap_pyfunction!(examples, m)?)?;
    m.add("ConsistencyError", m.py().get_type::<ConsistencyError>())?;
    Ok(())
}
