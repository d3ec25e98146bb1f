//! Python bindings exposing the main types and operations: solution
//! verification, retraction analysis, k-permutability, and enumeration.
//!
//! Everything crosses the boundary as plain Python data (lists, dicts,
//! tuples); the `Solution` class wraps the Rust value and all methods are
//! pure.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use ybe_core::enumeration;
use ybe_core::error::Error;
use ybe_core::files::{to_json_string, InputFile, SolutionFile};
use ybe_core::partition::Partition;
use ybe_core::permutational::{
    self, is_k_permutational_with, KPermOptions, KPermResult, DEFAULT_MONOID_CAP,
};
use ybe_core::retraction;
use ybe_core::solution::{samples, Solution as CoreSolution};

fn to_py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A solution candidate `(X, σ, τ)` with `sigma[x][y] = σ_x(y)` and
/// `tau[x][y] = τ_y(x)`.
#[pyclass(name = "Solution", frozen)]
struct PySolution {
    inner: CoreSolution,
}

fn classes_to_py(py: Python<'_>, p: &Partition) -> PyResult<Py<PyList>> {
    let list = PyList::new(py, p.classes())?;
    Ok(list.unbind())
}

fn witness_to_py(
    py: Python<'_>,
    w: &permutational::KPermWitness,
    op_names: &[String],
) -> PyResult<Py<PyDict>> {
    let dict = PyDict::new(py);
    let levels: Vec<(String, Vec<usize>)> = w
        .spec
        .levels
        .iter()
        .map(|l| (op_names[l.op].clone(), l.word.image().to_vec()))
        .collect();
    dict.set_item("levels", levels)?;
    dict.set_item("args", w.args.clone())?;
    dict.set_item("y", w.y)?;
    dict.set_item("z", w.z)?;
    dict.set_item("omega_y", w.omega_y)?;
    dict.set_item("omega_z", w.omega_z)?;
    Ok(dict.unbind())
}

#[pymethods]
impl PySolution {
    #[new]
    #[pyo3(signature = (sigma, tau, labels=None))]
    fn new(
        sigma: Vec<Vec<usize>>,
        tau: Vec<Vec<usize>>,
        labels: Option<Vec<String>>,
    ) -> PyResult<Self> {
        let mut s = CoreSolution::from_rows(&sigma, &tau).map_err(to_py_err)?;
        if let Some(labels) = labels {
            s = s.with_labels(labels).map_err(to_py_err)?;
        }
        Ok(PySolution { inner: s })
    }

    /// Parse a solution from its JSON file format.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        match InputFile::parse(text).map_err(to_py_err)? {
            InputFile::Solution(f) => Ok(PySolution {
                inner: f.to_solution().map_err(to_py_err)?,
            }),
            InputFile::Algebra(_) => Err(PyValueError::new_err(
                "expected a solution file with sigma/tau tables",
            )),
        }
    }

    fn to_json(&self) -> String {
        to_json_string(&SolutionFile::from_solution(&self.inner))
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn labels(&self) -> Option<Vec<String>> {
        self.inner.labels().map(|l| l.to_vec())
    }

    fn sigma_rows(&self) -> Vec<Vec<usize>> {
        self.inner.sigma_rows()
    }

    fn tau_rows(&self) -> Vec<Vec<usize>> {
        self.inner.tau_rows()
    }

    /// `r(x, y) = (σ_x(y), τ_y(x))`.
    fn r(&self, x: usize, y: usize) -> PyResult<(usize, usize)> {
        if x >= self.inner.n() || y >= self.inner.n() {
            return Err(PyValueError::new_err("element out of range"));
        }
        Ok(self.inner.r(x, y))
    }

    fn check_braid(&self) -> bool {
        self.inner.check_braid()
    }

    /// The three componentwise identities `(sigma law, cross law, tau law)`.
    fn check_braid_identities(&self) -> (bool, bool, bool) {
        let c = self.inner.check_braid_identities();
        (c.sigma_law, c.cross_law, c.tau_law)
    }

    fn classify<'py>(&self, py: Python<'py>) -> PyResult<Py<PyDict>> {
        let c = self.inner.classify();
        let dict = PyDict::new(py);
        dict.set_item("left_nondegenerate", c.left_nondegenerate)?;
        dict.set_item("right_nondegenerate", c.right_nondegenerate)?;
        dict.set_item("bijective", c.bijective)?;
        dict.set_item("involutive", c.involutive)?;
        dict.set_item("degenerate", c.degenerate)?;
        Ok(dict.unbind())
    }

    /// Classes of the coinciding-maps equivalence `~`.
    fn sim(&self, py: Python<'_>) -> PyResult<Py<PyList>> {
        classes_to_py(py, &retraction::sim(&self.inner.as_algebra()))
    }

    /// Classes of the maximal congruence below `~`, plus the refinement
    /// round count.
    fn max_congruence(&self, py: Python<'_>) -> PyResult<(Py<PyList>, usize)> {
        let (approx, trace) =
            retraction::max_congruence_below_sim(&self.inner.as_algebra()).map_err(to_py_err)?;
        Ok((classes_to_py(py, &approx)?, trace.rounds()))
    }

    /// Class counts of every refinement step, fixpoint witness included.
    fn refinement_class_counts(&self) -> PyResult<Vec<usize>> {
        let (_, trace) =
            retraction::max_congruence_below_sim(&self.inner.as_algebra()).map_err(to_py_err)?;
        Ok(trace.steps().iter().map(|p| p.class_count()).collect())
    }

    fn retract_tower_sizes(&self) -> PyResult<Vec<usize>> {
        let tower =
            retraction::retract_tower(&self.inner.as_algebra(), None).map_err(to_py_err)?;
        Ok(tower.sizes())
    }

    /// The multipermutation level, or `None` when the tower stabilizes above
    /// one element.
    fn multipermutation_level(&self) -> PyResult<Option<usize>> {
        let mpl =
            retraction::multipermutation_level(&self.inner.as_algebra()).map_err(to_py_err)?;
        Ok(mpl.level())
    }

    fn is_irretractable(&self) -> PyResult<bool> {
        let (approx, _) =
            retraction::max_congruence_below_sim(&self.inner.as_algebra()).map_err(to_py_err)?;
        Ok(self.inner.n() >= 2 && approx.is_identity())
    }

    /// Decide k-permutability. Returns `(holds, witness)` where the witness
    /// is `None` or a dict with levels, args, the two starts and their tower
    /// values.
    #[pyo3(signature = (k, no_words=false, monoid_cap=DEFAULT_MONOID_CAP))]
    fn is_k_permutational(
        &self,
        py: Python<'_>,
        k: usize,
        no_words: bool,
        monoid_cap: usize,
    ) -> PyResult<(bool, Option<Py<PyDict>>)> {
        let algebra = self.inner.as_algebra();
        let outcome = is_k_permutational_with(
            &algebra,
            k,
            monoid_cap,
            KPermOptions {
                words: !no_words,
                quantify_outer_word: false,
            },
        )
        .map_err(to_py_err)?;
        let op_names: Vec<String> = algebra.ops().iter().map(|o| o.name().to_string()).collect();
        match outcome {
            KPermResult::Holds => Ok((true, None)),
            KPermResult::Fails(w) => Ok((false, Some(witness_to_py(py, &w, &op_names)?))),
        }
    }

    /// The four level-2 map equations; true iff the level is at most 2.
    fn mpl2_equations_hold(&self) -> PyResult<bool> {
        permutational::mpl2_equations_hold(&self.inner).map_err(to_py_err)
    }

    /// Size of the monoid generated by all curried maps.
    #[pyo3(signature = (monoid_cap=DEFAULT_MONOID_CAP))]
    fn monoid_size(&self, monoid_cap: usize) -> PyResult<usize> {
        let a = self.inner.as_algebra();
        let m = permutational::monoid_closure(a.n(), &permutational::sigma_generators(&a), monoid_cap)
            .map_err(to_py_err)?;
        Ok(m.len())
    }

    /// Quotient by explicit classes, or by the maximal congruence below `~`
    /// when none are given.
    #[pyo3(signature = (classes=None))]
    fn quotient(&self, classes: Option<Vec<Vec<usize>>>) -> PyResult<PySolution> {
        let algebra = self.inner.as_algebra();
        let p = match classes {
            Some(c) => Partition::from_classes(self.inner.n(), &c).map_err(to_py_err)?,
            None => {
                retraction::max_congruence_below_sim(&algebra)
                    .map_err(to_py_err)?
                    .0
            }
        };
        let q = algebra.quotient(&p).map_err(to_py_err)?;
        let inner = CoreSolution::from_rows(&q.op(0).rows(), &q.op(1).rows()).map_err(to_py_err)?;
        Ok(PySolution { inner })
    }

    fn __repr__(&self) -> String {
        format!(
            "Solution(n={}, sigma={:?}, tau={:?})",
            self.inner.n(),
            self.inner.sigma_rows(),
            self.inner.tau_rows()
        )
    }

    fn __eq__(&self, other: &PySolution) -> bool {
        self.inner.sigma_rows() == other.inner.sigma_rows()
            && self.inner.tau_rows() == other.inner.tau_rows()
    }
}

/// The 5-element degenerate sample whose coinciding-maps equivalence is not
/// a congruence (multipermutation level 2).
#[pyfunction]
fn retractable5() -> PySolution {
    PySolution {
        inner: samples::retractable5(),
    }
}

/// The irretractable family on `{0, .., n}` (needs `n > 2`).
#[pyfunction]
fn irretractable(n: usize) -> PyResult<PySolution> {
    Ok(PySolution {
        inner: samples::irretractable(n).map_err(to_py_err)?,
    })
}

/// The chain-with-twin family (needs `N ≥ 3`).
#[pyfunction]
fn chain_with_twin(n: usize) -> PyResult<PySolution> {
    Ok(PySolution {
        inner: samples::chain_with_twin(n).map_err(to_py_err)?,
    })
}

/// The projection (swap) solution.
#[pyfunction]
fn projection(n: usize) -> PyResult<PySolution> {
    Ok(PySolution {
        inner: samples::projection(n).map_err(to_py_err)?,
    })
}

/// Every solution on a carrier of size `n` (exhaustive for `n ≤ 4`),
/// optionally one canonical representative per isomorphism class.
#[pyfunction]
#[pyo3(signature = (n, up_to_iso=false))]
fn enumerate_solutions(n: usize, up_to_iso: bool) -> PyResult<Vec<PySolution>> {
    Ok(enumeration::enumerate_solutions(n, up_to_iso)
        .map_err(to_py_err)?
        .into_iter()
        .map(|inner| PySolution { inner })
        .collect())
}

/// Exhaustive census statistics as a dict.
#[pyfunction]
fn census(py: Python<'_>, n: usize) -> PyResult<Py<PyDict>> {
    let report = enumeration::census(n).map_err(to_py_err)?;
    let dict = PyDict::new(py);
    dict.set_item("n", report.n)?;
    dict.set_item("total_pairs_examined", report.total_pairs_examined)?;
    dict.set_item("solutions_found", report.solutions_found)?;
    dict.set_item("solutions_up_to_iso", report.solutions_up_to_iso)?;
    let preds = PyDict::new(py);
    for (name, count) in &report.predicate_counts {
        preds.set_item(name, count)?;
    }
    dict.set_item("predicate_counts", preds)?;
    Ok(dict.unbind())
}

/// `count` distinct solutions drawn by seeded randomized backtracking.
#[pyfunction]
#[pyo3(signature = (n, count, seed=0))]
fn sample_solutions(n: usize, count: usize, seed: u64) -> PyResult<Vec<PySolution>> {
    Ok(enumeration::sample_solutions(n, count, seed)
        .map_err(to_py_err)?
        .into_iter()
        .map(|inner| PySolution { inner })
        .collect())
}

#[pymodule]
fn ybe_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("DEFAULT_MONOID_CAP", DEFAULT_MONOID_CAP)?;
    m.add_class::<PySolution>()?;
    m.add_function(wrap_pyfunction!(retractable5, m)?)?;
    m.add_function(wrap_pyfunction!(irretractable, m)?)?;
    m.add_function(wrap_pyfunction!(chain_with_twin, m)?)?;
    m.add_function(wrap_pyfunction!(projection, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_solutions, m)?)?;
    m.add_function(wrap_pyfunction!(census, m)?)?;
    m.add_function(wrap_pyfunction!(sample_solutions, m)?)?;
    Ok(())
}
