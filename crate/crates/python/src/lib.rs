//! Python bindings.
//!
//! Exact values cross the boundary as `fractions.Fraction`. Rational
//! arguments accept a `Fraction`, an `int` or a `"p/q"` string.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use pargreedy_core::adversarial::{self, WitnessInstance};
use pargreedy_core::bounds::{self, BoundsReport, RatioBounds};
use pargreedy_core::graphmetrics;
use pargreedy_core::greedy::{self, GreedyOutcome, TiePolicy};
use pargreedy_core::io;
use pargreedy_core::objective::{self, AgentSpace, SetFunction};
use pargreedy_core::rational;
use pargreedy_core::structure::{self, InformationGraph, IterationAssignment};
use pargreedy_core::suites;
use pargreedy_core::{Error, Limits, Rational};

create_exception!(
    pargreedy,
    CapacityError,
    PyRuntimeError,
    "An exact search exceeded its size limit."
);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Capacity { .. } => CapacityError::new_err(e.to_string()),
        Error::UndefinedRatio => PyZeroDivisionError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for pargreedy_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn fraction<'py>(py: Python<'py>, value: Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((*value.numer(), *value.denom()))
}

fn to_rational(value: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if let Ok(text) = value.extract::<String>() {
        return rational::parse(&text).py();
    }
    let numer: i64 = value.getattr("numerator")?.extract()?;
    let denom: i64 = value.getattr("denominator")?.extract()?;
    if denom == 0 {
        return Err(PyZeroDivisionError::new_err("zero denominator"));
    }
    Ok(Rational::new(numer, denom))
}

fn bounds_dict<'py>(py: Python<'py>, b: &RatioBounds) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("upper", fraction(py, b.upper)?)?;
    d.set_item("lower", fraction(py, b.lower)?)?;
    match b.refined_upper {
        Some(r) => d.set_item("refined_upper", fraction(py, r)?)?,
        None => d.set_item("refined_upper", py.None())?,
    }
    d.set_item("source", b.source.as_str())?;
    Ok(d)
}

/// An information graph on agents `1..=n`.
#[pyclass(name = "Graph", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyGraph {
    inner: InformationGraph,
}

impl From<InformationGraph> for PyGraph {
    fn from(inner: InformationGraph) -> Self {
        PyGraph { inner }
    }
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges=Vec::new()))]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(InformationGraph::new(n, edges).py()?.into())
    }

    #[staticmethod]
    fn optimal(n: usize, q: usize) -> PyResult<Self> {
        Ok(structure::optimal_graph(n, q).py()?.into())
    }

    #[staticmethod]
    fn turan(n: usize, r: usize) -> PyResult<Self> {
        Ok(structure::turan_graph(n, r).py()?.into())
    }

    #[staticmethod]
    fn complement_turan(n: usize, r: usize) -> PyResult<Self> {
        Ok(structure::complement_turan(n, r).py()?.into())
    }

    #[staticmethod]
    fn edgeless(n: usize) -> Self {
        InformationGraph::edgeless(n).into()
    }

    #[staticmethod]
    fn complete(n: usize) -> Self {
        InformationGraph::complete(n).into()
    }

    #[staticmethod]
    fn path(n: usize) -> Self {
        InformationGraph::path(n).into()
    }

    /// Star with `leaves` leaves; the centre is the last vertex.
    #[staticmethod]
    fn star(leaves: usize) -> Self {
        InformationGraph::star(leaves).into()
    }

    /// Graph induced by an iteration assignment `levels` (one entry per agent).
    #[staticmethod]
    #[pyo3(signature = (levels, q=None))]
    fn induced(levels: Vec<usize>, q: Option<usize>) -> PyResult<Self> {
        let q = q.unwrap_or_else(|| levels.iter().copied().max().unwrap_or(1));
        Ok(structure::induced_graph(&IterationAssignment::new(q, levels))
            .py()?
            .into())
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(io::parse_graph(text).py()?.into())
    }

    fn to_json(&self) -> String {
        io::to_json(&io::graph_to_doc(&self.inner))
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().to_vec()
    }

    fn in_neighbors(&self, i: usize) -> PyResult<Vec<usize>> {
        if i == 0 || i > self.inner.n() {
            return Err(PyValueError::new_err(format!(
                "vertex {i} is outside 1..={}",
                self.inner.n()
            )));
        }
        Ok(self.inner.in_neighbors(i).to_vec())
    }

    fn complement(&self) -> Self {
        self.inner.complement().into()
    }

    fn independence_number(&self) -> PyResult<usize> {
        Ok(graphmetrics::independence_number(&self.inner).py()?.value)
    }

    fn clique_number(&self) -> PyResult<usize> {
        Ok(graphmetrics::clique_number(&self.inner).py()?.value)
    }

    fn clique_cover_number(&self) -> PyResult<usize> {
        Ok(graphmetrics::clique_cover_number(&self.inner).py()?.value)
    }

    fn pseudo_independence_number(&self, p: usize) -> PyResult<usize> {
        Ok(graphmetrics::pseudo_independence_number(&self.inner, p).py()?.value)
    }

    fn has_sibling_condition(&self) -> PyResult<bool> {
        Ok(graphmetrics::has_sibling_condition(&self.inner).py()?.is_some())
    }

    fn has_p_sibling(&self, p: usize) -> PyResult<bool> {
        Ok(graphmetrics::has_p_sibling(&self.inner, p).py()?.is_some())
    }

    /// Earliest iteration of every agent.
    fn schedule(&self) -> Vec<usize> {
        structure::earliest_schedule(&self.inner).assignment.levels().to_vec()
    }

    fn is_feasible(&self, q: usize) -> bool {
        structure::is_feasible(&self.inner, q)
    }

    fn ratio_bounds<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        bounds_dict(py, &bounds::graph_ratio_bounds(&self.inner).py()?)
    }

    fn curvature_bounds<'py>(&self, py: Python<'py>, lam: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyDict>> {
        bounds_dict(
            py,
            &bounds::curvature_graph_bounds(&self.inner, to_rational(lam)?).py()?,
        )
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, edges={:?})", self.inner.n(), self.inner.edges())
    }
}

/// An objective with its per-agent decision sets and optional annotations.
#[pyclass(name = "Instance", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyInstance {
    f: SetFunction,
    x: AgentSpace,
    graph: Option<InformationGraph>,
    predicted_ratio: Option<Rational>,
    bound_ref: Option<String>,
}

impl From<WitnessInstance> for PyInstance {
    fn from(w: WitnessInstance) -> Self {
        PyInstance {
            f: w.f,
            x: w.x,
            graph: Some(w.g),
            predicted_ratio: Some(w.predicted_ratio),
            bound_ref: Some(w.bound_ref.as_str().to_string()),
        }
    }
}

fn parse_policy(name: &str) -> PyResult<TiePolicy> {
    name.parse().py()
}

fn outcome_dict<'py>(py: Python<'py>, f: &SetFunction, o: &GreedyOutcome) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    let profile: Vec<Option<String>> = o.profile.iter().map(|e| e.map(|e| f.ground()[e].clone())).collect();
    d.set_item("profile", profile)?;
    d.set_item("value", fraction(py, o.value)?)?;
    let marginals = o
        .per_agent_marginal
        .iter()
        .map(|&m| fraction(py, m))
        .collect::<PyResult<Vec<_>>>()?;
    d.set_item("per_agent_marginal", marginals)?;
    d.set_item("schedule", o.schedule.assignment.levels().to_vec())?;
    d.set_item("resolutions_explored", o.resolutions_explored)?;
    Ok(d)
}

impl PyInstance {
    fn graph_or(&self, graph: Option<&PyGraph>) -> PyResult<InformationGraph> {
        graph
            .map(|g| g.inner.clone())
            .or_else(|| self.graph.clone())
            .ok_or_else(|| PyValueError::new_err("no graph given and none embedded in the instance"))
    }

    fn set_of(&self, ids: Vec<String>) -> PyResult<pargreedy_core::ElementSet> {
        self.f.element_set(&ids).py()
    }
}

#[pymethods]
impl PyInstance {
    /// Weighted cover: `targets` maps target ids to weights, `covers` maps
    /// each element to the targets it covers, `agents` lists each agent's
    /// decisions.
    #[staticmethod]
    #[pyo3(signature = (targets, covers, agents, graph=None))]
    fn cover(
        targets: Vec<(String, Bound<'_, PyAny>)>,
        covers: Vec<(String, Vec<String>)>,
        agents: Vec<Vec<String>>,
        graph: Option<PyGraph>,
    ) -> PyResult<Self> {
        let targets = targets
            .into_iter()
            .map(|(id, w)| Ok((id, to_rational(&w)?)))
            .collect::<PyResult<Vec<_>>>()?;
        let (ground, lists): (Vec<String>, Vec<Vec<String>>) = covers.into_iter().unzip();
        let f = SetFunction::cover(ground, targets, lists).py()?;
        let x = AgentSpace::new(&f, &agents).py()?;
        Ok(PyInstance {
            f,
            x,
            graph: graph.map(|g| g.inner),
            predicted_ratio: None,
            bound_ref: None,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let i = io::parse_instance(text).py()?;
        Ok(PyInstance {
            f: i.f,
            x: i.x,
            graph: i.graph,
            predicted_ratio: i.predicted_ratio,
            bound_ref: i.bound_ref,
        })
    }

    fn to_json(&self) -> String {
        let doc = io::InstanceDoc {
            graph: self.graph.as_ref().map(io::graph_to_doc),
            predicted_ratio: self.predicted_ratio.map(Into::into),
            bound_ref: self.bound_ref.clone(),
            ..io::instance_to_doc(&self.f, &self.x)
        };
        io::to_json(&doc)
    }

    #[getter]
    fn ground(&self) -> Vec<String> {
        self.f.ground().to_vec()
    }

    #[getter]
    fn agents(&self) -> Vec<Vec<String>> {
        (0..self.x.n())
            .map(|i| {
                self.x
                    .decisions(i)
                    .iter()
                    .map(|&e| self.f.ground()[e].clone())
                    .collect()
            })
            .collect()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.f.kind().as_str()
    }

    #[getter]
    fn graph(&self) -> Option<PyGraph> {
        self.graph.clone().map(Into::into)
    }

    #[getter]
    fn predicted_ratio<'py>(&self, py: Python<'py>) -> PyResult<Option<Bound<'py, PyAny>>> {
        self.predicted_ratio.map(|r| fraction(py, r)).transpose()
    }

    #[getter]
    fn bound_ref(&self) -> Option<String> {
        self.bound_ref.clone()
    }

    fn value<'py>(&self, py: Python<'py>, ids: Vec<String>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, self.f.evaluate(self.set_of(ids)?))
    }

    fn marginal<'py>(&self, py: Python<'py>, add: Vec<String>, base: Vec<String>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, self.f.marginal(self.set_of(add)?, self.set_of(base)?))
    }

    /// Normalization, monotonicity and submodularity by exhaustive scan.
    fn properties<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let report = objective::check_properties(&self.f).py()?;
        let d = PyDict::new(py);
        d.set_item("normalized", report.normalized)?;
        d.set_item("monotone", report.monotone)?;
        d.set_item("submodular", report.submodular)?;
        match report.curvature {
            Some(c) => d.set_item("curvature", fraction(py, c)?)?,
            None => d.set_item("curvature", py.None())?,
        }
        let violations: Vec<String> = report.counterexamples.iter().map(|v| format!("{v:?}")).collect();
        d.set_item("counterexamples", violations)?;
        Ok(d)
    }

    fn total_curvature<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, objective::total_curvature(&self.f).py()?)
    }

    /// Greedy outcomes under `policy` (`first`, `last`, `worst`, `best` or
    /// `all`).
    #[pyo3(signature = (graph=None, policy="worst"))]
    fn greedy<'py>(&self, py: Python<'py>, graph: Option<&PyGraph>, policy: &str) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let g = self.graph_or(graph)?;
        let policy = parse_policy(policy)?;
        let outcomes = py.detach(|| greedy::run_greedy(&self.f, &self.x, &g, policy)).py()?;
        outcomes.iter().map(|o| outcome_dict(py, &self.f, o)).collect()
    }

    /// Round-by-round greedy for an iteration assignment.
    #[pyo3(signature = (levels, q=None, policy="worst"))]
    fn parallel_greedy<'py>(
        &self,
        py: Python<'py>,
        levels: Vec<usize>,
        q: Option<usize>,
        policy: &str,
    ) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let q = q.unwrap_or_else(|| levels.iter().copied().max().unwrap_or(1));
        let p = IterationAssignment::new(q, levels);
        let policy = parse_policy(policy)?;
        let outcomes = py
            .detach(|| greedy::parallel_greedy(&self.f, &self.x, &p, policy))
            .py()?;
        outcomes.iter().map(|o| outcome_dict(py, &self.f, o)).collect()
    }

    fn optimum<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let opt = py.detach(|| greedy::brute_force_optimum(&self.f, &self.x)).py()?;
        let d = PyDict::new(py);
        let profile: Vec<Option<String>> = opt
            .profile
            .iter()
            .map(|e| e.map(|e| self.f.ground()[e].clone()))
            .collect();
        d.set_item("profile", profile)?;
        d.set_item("value", fraction(py, opt.value)?)?;
        Ok(d)
    }

    /// Worst-case greedy value over the optimum.
    #[pyo3(signature = (graph=None))]
    fn empirical_ratio<'py>(&self, py: Python<'py>, graph: Option<&PyGraph>) -> PyResult<Bound<'py, PyAny>> {
        let g = self.graph_or(graph)?;
        let r = py.detach(|| greedy::empirical_ratio(&self.f, &self.x, &g)).py()?;
        fraction(py, r)
    }

    /// Term-by-term check of `f(opt) ≤ r·f(sol)` on the optimal graph.
    fn check_chain<'py>(&self, py: Python<'py>, q: usize) -> PyResult<Bound<'py, PyDict>> {
        let report = py.detach(|| bounds::check_chain(&self.f, &self.x, q)).py()?;
        let d = PyDict::new(py);
        let lines = report
            .lines
            .iter()
            .map(|l| fraction(py, l.0))
            .collect::<PyResult<Vec<_>>>()?;
        d.set_item("lines", lines)?;
        d.set_item("steps", report.steps.iter().map(|s| s.holds).collect::<Vec<_>>())?;
        d.set_item("holds", report.holds())?;
        d.set_item("end_to_end", report.end_to_end())?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(kind={:?}, ground={}, agents={})",
            self.f.kind().as_str(),
            self.f.len(),
            self.x.n()
        )
    }
}

#[pyfunction]
fn rho<'py>(py: Python<'py>, n: usize, q: usize) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, bounds::rho(n, q).py()?)
}

#[pyfunction]
fn min_edges_bound(n: usize, k: usize) -> PyResult<u64> {
    bounds::min_edges_bound(n, k).py()
}

#[pyfunction]
fn curvature_eta_bounds<'py>(
    py: Python<'py>,
    n: usize,
    q: usize,
    lam: &Bound<'py, PyAny>,
) -> PyResult<Bound<'py, PyDict>> {
    bounds_dict(py, &bounds::curvature_eta_bounds(n, q, to_rational(lam)?).py()?)
}

/// Iteration of every agent in an optimal assignment.
#[pyfunction]
fn optimal_assignment(n: usize, q: usize) -> PyResult<Vec<usize>> {
    Ok(structure::optimal_assignment(n, q).py()?.levels().to_vec())
}

#[pyfunction]
fn curvature_witness(graph: &PyGraph, lam: &Bound<'_, PyAny>) -> PyResult<PyInstance> {
    Ok(adversarial::curvature_witness(&graph.inner, to_rational(lam)?)
        .py()?
        .into())
}

#[pyfunction]
fn p_additive_witness(graph: &PyGraph, p: usize) -> PyResult<PyInstance> {
    Ok(adversarial::p_additive_witness(&graph.inner, p).py()?.into())
}

#[pyfunction]
fn sequential_half_witness() -> PyInstance {
    adversarial::sequential_half_witness().into()
}

fn report_dict<'py>(py: Python<'py>, report: &BoundsReport) -> PyResult<Bound<'py, PyDict>> {
    let opt = |v: Option<Rational>| -> PyResult<Bound<'py, PyAny>> {
        match v {
            Some(r) => fraction(py, r),
            None => Ok(py.None().into_bound(py)),
        }
    };
    let rows = report
        .rows
        .iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("id", &r.id)?;
            d.set_item("graph", &r.graph_id)?;
            d.set_item("empirical", opt(r.empirical)?)?;
            d.set_item("curvature", opt(r.curvature)?)?;
            d.set_item("lower", opt(r.lower)?)?;
            d.set_item("upper", opt(r.upper)?)?;
            d.set_item("refined_upper", opt(r.refined_upper)?)?;
            d.set_item("predicted", opt(r.predicted)?)?;
            d.set_item("verdict", r.verdict.as_str())?;
            d.set_item("reason", r.reason.clone())?;
            Ok(d)
        })
        .collect::<PyResult<Vec<_>>>()?;
    let d = PyDict::new(py);
    d.set_item("rows", rows)?;
    d.set_item("failures", report.summary.failures)?;
    d.set_item("errors", report.summary.errors)?;
    d.set_item("capacity_errors", report.summary.capacity_errors)?;
    d.set_item("witness_equalities", report.summary.witness_equalities)?;
    Ok(d)
}

/// Certifies every adversarial witness with `α ≤ alpha_max`.
#[pyfunction]
#[pyo3(signature = (alpha_max=4, lambdas=None))]
fn certify_witnesses<'py>(
    py: Python<'py>,
    alpha_max: usize,
    lambdas: Option<Vec<Bound<'py, PyAny>>>,
) -> PyResult<Bound<'py, PyDict>> {
    let lambdas = match lambdas {
        Some(values) => values.iter().map(to_rational).collect::<PyResult<Vec<_>>>()?,
        None => ["0", "1/4", "1/2", "3/4", "1"]
            .iter()
            .map(|s| rational::parse(s).py())
            .collect::<PyResult<Vec<_>>>()?,
    };
    let suite = suites::witness_suite(alpha_max, &lambdas).py()?;
    let report = py.detach(|| bounds::certify_with(&suite, &Limits::default()));
    report_dict(py, &report)
}

/// Certifies `count` seeded random cover instances.
#[pyfunction]
#[pyo3(signature = (seed, count=200, n_max=6))]
fn certify_random<'py>(py: Python<'py>, seed: u64, count: usize, n_max: usize) -> PyResult<Bound<'py, PyDict>> {
    let suite = suites::random_suite(seed, count, n_max).py()?;
    let report = py.detach(|| bounds::certify(&suite));
    report_dict(py, &report)
}

#[pymodule]
fn pargreedy(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyInstance>()?;
    m.add("CapacityError", m.py().get_type::<CapacityError>())?;
    m.add_function(wrap_pyfunction!(rho, m)?)?;
    m.add_function(wrap_pyfunction!(min_edges_bound, m)?)?;
    m.add_function(wrap_pyfunction!(curvature_eta_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_assignment, m)?)?;
    m.add_function(wrap_pyfunction!(curvature_witness, m)?)?;
    m.add_function(wrap_pyfunction!(p_additive_witness, m)?)?;
    m.add_function(wrap_pyfunction!(sequential_half_witness, m)?)?;
    m.add_function(wrap_pyfunction!(certify_witnesses, m)?)?;
    m.add_function(wrap_pyfunction!(certify_random, m)?)?;
    Ok(())
}
