//! Python module `pyms2path`: structures, distances and trajectories.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ms2path::optimize::enumerate_simple_cycles;
use ms2path::trajectory::{render_json, render_text, TextHeader};
use ms2path::{EdgeRelation, Error, Move, Ms2Options, SecondaryStructure, StructurePair, DEFAULT_THETA};

create_exception!(pyms2path, ResourceLimitExceeded, PyRuntimeError, "Cycle cap or search budget exhausted.");

fn to_py(e: Error) -> PyErr {
    match e {
        Error::CycleCapExceeded { .. } | Error::BudgetExceeded { .. } => ResourceLimitExceeded::new_err(e.to_string()),
        Error::Cyclic => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// A secondary structure over positions 1..=len.
#[pyclass(name = "Structure", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyStructure {
    inner: SecondaryStructure,
}

#[pymethods]
impl PyStructure {
    #[new]
    #[pyo3(signature = (dot_bracket, theta = DEFAULT_THETA, allow_pk = false))]
    fn new(dot_bracket: &str, theta: usize, allow_pk: bool) -> PyResult<Self> {
        let inner = SecondaryStructure::parse_dot_bracket(dot_bracket, theta, allow_pk).map_err(to_py)?;
        Ok(PyStructure { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (length, pairs, theta = DEFAULT_THETA, allow_pk = false))]
    fn from_pairs(length: usize, pairs: Vec<(usize, usize)>, theta: usize, allow_pk: bool) -> PyResult<Self> {
        let pairs = pairs.into_iter().map(|(i, j)| ms2path::BasePair::new(i, j));
        let inner = SecondaryStructure::new(length, pairs, theta, allow_pk).map_err(to_py)?;
        Ok(PyStructure { inner })
    }

    fn pairs(&self) -> Vec<(usize, usize)> {
        self.inner.pairs().map(|p| (p.i, p.j)).collect()
    }

    fn partner(&self, i: usize) -> Option<usize> {
        self.inner.partner(i)
    }

    fn dot_bracket(&self) -> PyResult<String> {
        self.inner.to_dot_bracket().map_err(to_py)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        match self.inner.to_dot_bracket() {
            Ok(db) => format!("Structure('{db}')"),
            Err(_) => format!("Structure(len={}, pairs={})", self.inner.len(), self.inner.num_pairs()),
        }
    }
}

/// A move sequence starting at a fixed structure.
#[pyclass(name = "Trajectory", frozen)]
struct PyTrajectory {
    inner: ms2path::Trajectory,
}

type MoveTuple = (&'static str, (usize, usize), Option<(usize, usize)>);

fn move_tuple(mv: &Move) -> MoveTuple {
    match mv {
        Move::Add(p) => ("add", (p.i, p.j), None),
        Move::Remove(p) => ("remove", (p.i, p.j), None),
        Move::Shift { from, to } => ("shift", (from.i, from.j), Some((to.i, to.j))),
    }
}

#[pymethods]
impl PyTrajectory {
    #[getter]
    fn distance(&self) -> usize {
        self.inner.distance()
    }

    /// `(removals, additions, shifts)`.
    #[getter]
    fn counts(&self) -> (usize, usize, usize) {
        let c = self.inner.counts();
        (c.removals, c.additions, c.shifts)
    }

    /// Moves as `(kind, pair, target)`; `target` is set for shifts only.
    fn moves(&self) -> Vec<MoveTuple> {
        self.inner.moves.iter().map(move_tuple).collect()
    }

    /// Dot-bracket of every intermediate, the start included.
    fn structures(&self) -> PyResult<Vec<String>> {
        let states = self.inner.replay().map_err(to_py)?;
        states.iter().map(|s| s.to_dot_bracket().map_err(to_py)).collect()
    }

    #[pyo3(signature = (target, sequence = None))]
    fn to_text(&self, target: &PyStructure, sequence: Option<String>) -> PyResult<String> {
        render_text(&self.inner, &target.inner, &TextHeader { sequence, graph: None }).map_err(to_py)
    }

    fn to_json(&self, target: &PyStructure) -> PyResult<String> {
        render_json(&self.inner, &target.inner, None).map_err(to_py)
    }

    fn verify(&self, target: &PyStructure) -> bool {
        let initial = &self.inner.initial;
        ms2path::verify_trajectory(initial, &target.inner, &self.inner, self.inner.allow_pk).is_ok()
    }

    fn __len__(&self) -> usize {
        self.inner.distance()
    }

    fn __repr__(&self) -> String {
        let (r, a, k) = self.counts();
        format!("Trajectory(distance={}, removals={r}, additions={a}, shifts={k})", self.inner.distance())
    }
}

fn relation(name: &str) -> PyResult<EdgeRelation> {
    match name {
        "strict" => Ok(EdgeRelation::Strict),
        "unfiltered" => Ok(EdgeRelation::Unfiltered),
        other => Err(PyValueError::new_err(format!("unknown relation '{other}'"))),
    }
}

fn options(locality: Option<usize>, max_cycles: Option<usize>, edge_relation: &str) -> PyResult<Ms2Options> {
    let base = Ms2Options::default();
    Ok(Ms2Options {
        locality,
        max_cycles: max_cycles.unwrap_or(base.max_cycles),
        relation: relation(edge_relation)?,
        ..base
    })
}

#[pyfunction]
fn base_pair_distance(s: &PyStructure, t: &PyStructure) -> PyResult<usize> {
    ms2path::base_pair_distance(&s.inner, &t.inner).map_err(to_py)
}

#[pyfunction]
fn hamming_distance(s: &PyStructure, t: &PyStructure) -> PyResult<usize> {
    ms2path::hamming_distance(&s.inner, &t.inner).map_err(to_py)
}

/// Shortest length when intermediates may contain crossing pairs.
#[pyfunction]
fn pk_distance(s: &PyStructure, t: &PyStructure) -> PyResult<usize> {
    ms2path::pk_ms2_distance(&s.inner, &t.inner).map_err(to_py)
}

#[pyfunction]
fn pk_trajectory(s: &PyStructure, t: &PyStructure) -> PyResult<PyTrajectory> {
    let inner = ms2path::pk_ms2_trajectory(&s.inner, &t.inner).map_err(to_py)?;
    Ok(PyTrajectory { inner })
}

macro_rules! nested_method {
    ($name:ident, $call:path, $doc:literal) => {
        #[doc = $doc]
        #[pyfunction]
        #[pyo3(signature = (s, t, locality = None, max_cycles = None, relation = "strict"))]
        fn $name(
            py: Python<'_>,
            s: &PyStructure,
            t: &PyStructure,
            locality: Option<usize>,
            max_cycles: Option<usize>,
            relation: &str,
        ) -> PyResult<PyTrajectory> {
            let opts = options(locality, max_cycles, relation)?;
            let (s, t) = (s.inner.clone(), t.inner.clone());
            let inner = py.detach(move || $call(&s, &t, &opts)).map_err(to_py)?;
            Ok(PyTrajectory { inner })
        }
    };
}

nested_method!(exact, ms2path::ms2_exact, "Minimum-length trajectory through nested intermediates.");
nested_method!(near_optimal, ms2path::ms2_near_optimal, "Class-by-class trajectory; never longer than removing and adding.");
nested_method!(greedy, ms2path::ms2_greedy, "Trajectory from greedy cycle breaking.");
nested_method!(branch_and_bound, ms2path::ms2_branch_and_bound, "Best-first search; for short sequences only.");

/// Node, edge, cycle and closed 2-cycle counts of the conflict digraph.
#[pyfunction]
#[pyo3(signature = (s, t, relation = "strict", max_cycles = None))]
fn graph_stats<'py>(
    py: Python<'py>,
    s: &PyStructure,
    t: &PyStructure,
    relation: &str,
    max_cycles: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let rel = self::relation(relation)?;
    let g = ms2path::build_conflict_digraph_with(&s.inner, &t.inner, rel, None).map_err(to_py)?;
    let cap = max_cycles.unwrap_or(Ms2Options::default().max_cycles);
    let cycles = enumerate_simple_cycles(g.adjacency(), cap).complete(cap).map_err(to_py)?;
    let closed = ms2path::detect_closed_2cycles(&s.inner, &t.inner).map_err(to_py)?;
    let out = PyDict::new(py);
    out.set_item("nodes", g.len())?;
    out.set_item("edges", g.edge_count())?;
    out.set_item("cycles", cycles.len())?;
    out.set_item("closed_two_cycles", closed.len())?;
    Ok(out)
}

/// Shift nodes `(x, y, z)`: `t` pairs `x` with `y`, `s` pairs `y` with `z`.
#[pyfunction]
fn shift_nodes(s: &PyStructure, t: &PyStructure) -> PyResult<Vec<(usize, usize, usize)>> {
    let g = ms2path::build_conflict_digraph(&s.inner, &t.inner).map_err(to_py)?;
    Ok(g.nodes().iter().map(|v| (v.x, v.y, v.z)).collect())
}

/// Alternating paths and cycles of the differing positions as `(walk, type)`.
#[pyfunction]
fn equivalence_classes(s: &PyStructure, t: &PyStructure) -> PyResult<Vec<(Vec<usize>, u8)>> {
    let part = ms2path::partition_positions(&s.inner, &t.inner).map_err(to_py)?;
    let classes = ms2path::equivalence_classes(&s.inner, &t.inner, &part.a_union_b0()).map_err(to_py)?;
    Ok(classes.into_iter().map(|c| (c.walk, c.path_type.number())).collect())
}

/// Parses a structure-pair file body into `(header, sequence, s, t)`.
#[pyfunction]
#[pyo3(signature = (text, theta = DEFAULT_THETA))]
fn parse_pair_file(
    text: &str,
    theta: usize,
) -> PyResult<(Option<String>, Option<String>, PyStructure, PyStructure)> {
    let pair = StructurePair::parse(text, theta).map_err(to_py)?;
    Ok((
        pair.header,
        pair.sequence.map(|s| s.to_string()),
        PyStructure { inner: pair.s },
        PyStructure { inner: pair.t },
    ))
}

#[pymodule]
fn pyms2path(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyStructure>()?;
    m.add_class::<PyTrajectory>()?;
    m.add("ResourceLimitExceeded", m.py().get_type::<ResourceLimitExceeded>())?;
    m.add("DEFAULT_THETA", DEFAULT_THETA)?;
    m.add_function(wrap_pyfunction!(base_pair_distance, m)?)?;
    m.add_function(wrap_pyfunction!(hamming_distance, m)?)?;
    m.add_function(wrap_pyfunction!(pk_distance, m)?)?;
    m.add_function(wrap_pyfunction!(pk_trajectory, m)?)?;
    m.add_function(wrap_pyfunction!(exact, m)?)?;
    m.add_function(wrap_pyfunction!(near_optimal, m)?)?;
    m.add_function(wrap_pyfunction!(greedy, m)?)?;
    m.add_function(wrap_pyfunction!(branch_and_bound, m)?)?;
    m.add_function(wrap_pyfunction!(graph_stats, m)?)?;
    m.add_function(wrap_pyfunction!(shift_nodes, m)?)?;
    m.add_function(wrap_pyfunction!(equivalence_classes, m)?)?;
    m.add_function(wrap_pyfunction!(parse_pair_file, m)?)?;
    Ok(())
}
