//! Python bindings for `surfact`.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use surfact::action::{ActionDescriptor, CharFunction};
use surfact::classify::{self, WeakSearch, DEFAULT_AUT_BUDGET};
use surfact::matmod::MatZ;
use surfact::residue::Modulus;
use surfact::symform::{AlternatingForm, QTuple};
use surfact::{cli, oracle};

create_exception!(surfact_py, SurfactError, PyValueError);

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    SurfactError::new_err(e.to_string())
}

fn modulus(p: u64, k: u32) -> PyResult<Modulus> {
    Modulus::new(p, k).map_err(err)
}

fn matrix(rows: &[Vec<i64>], md: Modulus) -> PyResult<MatZ> {
    MatZ::from_rows(rows, md).map_err(err)
}

fn form(p: u64, k: u32, gram: Vec<Vec<i64>>) -> PyResult<AlternatingForm> {
    AlternatingForm::new(matrix(&gram, modulus(p, k)?)?).map_err(err)
}

/// A group action on a closed oriented surface, described by monodromy.
#[pyclass(name = "Action", module = "surfact_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyAction {
    inner: ActionDescriptor,
}

#[pymethods]
impl PyAction {
    #[new]
    #[pyo3(signature = (p, k, m, quotient_genus, theta, branches = None))]
    fn new(
        p: u64,
        k: u32,
        m: usize,
        quotient_genus: usize,
        theta: Vec<Vec<i64>>,
        branches: Option<Vec<(Vec<i64>, u64)>>,
    ) -> PyResult<Self> {
        let md = modulus(p, k)?;
        let theta = if theta.is_empty() {
            MatZ::zeros(m, 2 * quotient_genus, md)
        } else {
            matrix(&theta, md)?
        };
        let l = CharFunction::from_pairs(
            branches
                .unwrap_or_default()
                .into_iter()
                .map(|(h, c)| (h.iter().map(|&x| md.reduce(x)).collect(), c)),
        );
        let inner = ActionDescriptor::new(md, m, quotient_genus, theta, l)
            .and_then(ActionDescriptor::validate)
            .map_err(err)?;
        Ok(PyAction { inner })
    }

    /// Parses an action file (JSON text).
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let file: cli::ActionFile = serde_json::from_str(text).map_err(err)?;
        let inner = file.to_descriptor().map_err(err)?.validate().map_err(err)?;
        Ok(PyAction { inner })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&cli::ActionFile::from_descriptor(&self.inner)).expect("serializable")
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.modulus().p()
    }

    #[getter]
    fn k(&self) -> u32 {
        self.inner.modulus().k()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn quotient_genus(&self) -> usize {
        self.inner.genus()
    }

    #[getter]
    fn theta(&self) -> Vec<Vec<u64>> {
        self.inner.theta().to_rows()
    }

    #[getter]
    fn branches(&self) -> Vec<(Vec<u64>, u64)> {
        self.inner
            .branches()
            .iter()
            .map(|(h, c)| (h.clone(), c))
            .collect()
    }

    fn is_free(&self) -> bool {
        self.inner.is_free()
    }

    fn covering_genus(&self) -> PyResult<u128> {
        self.inner.covering_genus().map_err(err)
    }

    fn induced_form(&self) -> PyResult<Vec<Vec<u64>>> {
        Ok(self.inner.induced_form().map_err(err)?.gram().to_rows())
    }

    fn q(&self) -> PyResult<Vec<u32>> {
        Ok(self.inner.induced_form().map_err(err)?.q_invariant().0)
    }

    fn __repr__(&self) -> String {
        format!(
            "Action(p={}, k={}, m={}, quotient_genus={}, theta={:?}, branches={:?})",
            self.p(),
            self.k(),
            self.m(),
            self.quotient_genus(),
            self.theta(),
            self.branches()
        )
    }
}

/// q-invariant of an alternating Gram matrix over Z/p^k.
#[pyfunction]
fn q_invariant(p: u64, k: u32, gram: Vec<Vec<i64>>) -> PyResult<Vec<u32>> {
    Ok(form(p, k, gram)?.q_invariant().0)
}

/// q computed from kernels and reduction mod p.
#[pyfunction]
fn q_by_definition(p: u64, k: u32, gram: Vec<Vec<i64>>) -> PyResult<Vec<u32>> {
    Ok(oracle::q_by_definition(&form(p, k, gram)?).0)
}

/// Returns (pair_exponents, radical_rank, change_of_basis).
#[pyfunction]
fn normal_form(p: u64, k: u32, gram: Vec<Vec<i64>>) -> PyResult<(Vec<u32>, usize, Vec<Vec<u64>>)> {
    let nf = form(p, k, gram)?.normal_form();
    Ok((
        nf.pair_exponents,
        nf.radical_rank,
        nf.change_of_basis.to_rows(),
    ))
}

type Verdict = (bool, Option<Vec<Vec<u64>>>, Option<String>);

fn verdict(v: classify::EquivalenceVerdict) -> Verdict {
    (
        v.equivalent,
        v.witness.map(|w| w.to_rows()),
        v.reason.map(|r| r.to_string()),
    )
}

/// Returns (equivalent, witness, reason).
#[pyfunction]
fn strong_equivalent(a: &PyAction, b: &PyAction) -> PyResult<Verdict> {
    Ok(verdict(
        classify::strong_equivalent(&a.inner, &b.inner).map_err(err)?,
    ))
}

/// Returns (equivalent, witness, reason).
#[pyfunction]
#[pyo3(signature = (a, b, budget = DEFAULT_AUT_BUDGET))]
fn weak_equivalent(a: &PyAction, b: &PyAction, budget: u128) -> PyResult<Verdict> {
    let search = WeakSearch {
        budget,
        ..WeakSearch::default()
    };
    Ok(verdict(
        classify::weak_equivalent_with(&a.inner, &b.inner, search).map_err(err)?,
    ))
}

/// Free action at quotient genus `genus` whose induced form is `gram`.
#[pyfunction]
fn realize(p: u64, k: u32, gram: Vec<Vec<i64>>, genus: usize) -> PyResult<PyAction> {
    let inner = classify::realize(&form(p, k, gram)?, genus).map_err(err)?;
    Ok(PyAction { inner })
}

#[pyfunction]
fn realize_q(q: Vec<u32>, m: usize, p: u64, k: u32, genus: usize) -> PyResult<PyAction> {
    let inner = classify::realize_q(&QTuple(q), m, modulus(p, k)?, genus).map_err(err)?;
    Ok(PyAction { inner })
}

#[pyfunction]
fn min_covering_genus(q: Vec<u32>, p: u64, k: u32, m: usize) -> PyResult<u128> {
    classify::min_covering_genus(&QTuple(q), modulus(p, k)?, m).map_err(err)
}

#[pyfunction]
fn enumerate_weak_classes(
    p: u64,
    k: u32,
    m: usize,
    covering_genus: u128,
) -> PyResult<Vec<Vec<u32>>> {
    Ok(
        classify::enumerate_weak_classes(modulus(p, k)?, m, covering_genus)
            .into_iter()
            .map(|q| q.0)
            .collect(),
    )
}

/// Covering genus from group order, quotient genus and (element order, count) pairs.
#[pyfunction]
#[pyo3(signature = (n, g, branches = Vec::new()))]
fn riemann_hurwitz(n: u128, g: usize, branches: Vec<(u64, u64)>) -> PyResult<u128> {
    surfact::action::riemann_hurwitz(n, g, branches).map_err(err)
}

#[pymodule]
fn surfact_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SurfactError", m.py().get_type::<SurfactError>())?;
    m.add_class::<PyAction>()?;
    m.add_function(wrap_pyfunction!(q_invariant, m)?)?;
    m.add_function(wrap_pyfunction!(q_by_definition, m)?)?;
    m.add_function(wrap_pyfunction!(normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(strong_equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(weak_equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(realize, m)?)?;
    m.add_function(wrap_pyfunction!(realize_q, m)?)?;
    m.add_function(wrap_pyfunction!(min_covering_genus, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_weak_classes, m)?)?;
    m.add_function(wrap_pyfunction!(riemann_hurwitz, m)?)?;
    Ok(())
}
