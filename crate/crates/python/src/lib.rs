//! Python bindings for `ptmtopo_core`.

use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ptmtopo_core::env::{build_env as core_build_env, invariant_delta, parse_rational};
use ptmtopo_core::its::{self, ObservationEnv};
use ptmtopo_core::machine::{self as m, InputSpace, Policy, PtMachine};
use ptmtopo_core::path::{h1_class, EdgePath, Loop};
use ptmtopo_core::topo::{self, Filtration, SimplicialComplex};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn policy(name: &str, seed: Option<u64>) -> PyResult<Policy> {
    match (name, seed) {
        ("deterministic", None) => Ok(Policy::Deterministic),
        ("lex-first", None) => Ok(Policy::LexFirst),
        ("seeded", Some(s)) => Ok(Policy::Seeded(s)),
        ("seeded", None) => Err(err("policy 'seeded' needs a seed")),
        _ => Err(err(format!("unknown policy {name:?} (or seed given without 'seeded')"))),
    }
}

#[pyclass(frozen, module = "ptmtopo")]
struct Machine {
    inner: PtMachine,
}

#[pymethods]
impl Machine {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Machine {
            inner: PtMachine::parse(text).map_err(err)?,
        })
    }

    /// `(w_in, w_out)` pairs; divergence is reported as `"!"`.
    #[pyo3(signature = (inputs, fuel = 1000, policy = "deterministic", seed = None))]
    fn run_stream(
        &self,
        inputs: Vec<String>,
        fuel: usize,
        policy: &str,
        seed: Option<u64>,
    ) -> PyResult<Vec<(String, String)>> {
        let stream = m::run_stream(&self.inner, &inputs, fuel, self::policy(policy, seed)?)
            .map_err(err)?;
        Ok(stream
            .pairs()
            .into_iter()
            .map(|(i, o)| (i, o.to_string()))
            .collect())
    }

    /// `(w_out, w_after)` of every outcome, with `"!"` for divergence.
    #[pyo3(signature = (work, input, fuel = 1000))]
    fn macrostep(&self, work: &str, input: &str, fuel: usize) -> PyResult<Vec<(String, String)>> {
        let ms = m::macrostep(&self.inner, work, input, fuel).map_err(err)?;
        Ok(ms
            .records
            .iter()
            .map(|r| (r.w_out().to_string(), r.w_after().to_string()))
            .collect())
    }

    #[pyo3(signature = (symbols, bound, depth, fuel = 1000))]
    fn extract_its(&self, symbols: &str, bound: usize, depth: usize, fuel: usize) -> PyResult<Its> {
        let space = InputSpace::new(symbols.chars(), bound);
        Ok(Its {
            inner: its::extract_its(&self.inner, &space, depth, fuel).map_err(err)?,
        })
    }
}

#[pyclass(frozen, module = "ptmtopo")]
struct Its {
    inner: its::Its,
}

#[pymethods]
impl Its {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Its {
            inner: its::Its::parse(text).map_err(err)?,
        })
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn num_states(&self) -> usize {
        self.inner.states().len()
    }

    /// The state bijection as `(state, image)` pairs, or `None`.
    fn iso(&self, other: &Its) -> Option<Vec<(String, String)>> {
        its::iso_check(&self.inner, &other.inner).map(|f| {
            f.into_iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect()
        })
    }

    fn bisimilar(&self, other: &Its) -> bool {
        its::bisim_check(&self.inner, &other.inner).is_some()
    }

    /// A distinguishing formula, or `None` when bisimilar.
    fn bisim_witness(&self, other: &Its) -> Option<String> {
        its::bisim_witness(&self.inner, &other.inner).map(|f| f.to_string())
    }

    fn stream_equiv(&self, other: &Its, depth: usize) -> PyResult<bool> {
        its::stream_equiv(&self.inner, &other.inner, depth).map_err(err)
    }

    fn separating_trace(&self, other: &Its, depth: usize) -> PyResult<Option<String>> {
        Ok(its::separating_trace(&self.inner, &other.inner, depth)
            .map_err(err)?
            .map(|t| its::render_trace(&t)))
    }
}

/// Partition of `systems` (as index lists) by a built-in environment.
#[pyfunction]
#[pyo3(signature = (systems, env = "tm", depth = None))]
fn classify(systems: Vec<PyRef<'_, Its>>, env: &str, depth: Option<usize>) -> PyResult<Vec<Vec<usize>>> {
    let env = match (env, depth) {
        ("tm", None) => ObservationEnv::tm_style(),
        ("stream", Some(d)) => ObservationEnv::stream_style(d).map_err(err)?,
        _ => return Err(err("env is 'tm', or 'stream' with a depth")),
    };
    let list: Vec<its::Its> = systems.iter().map(|s| s.inner.clone()).collect();
    its::env_classify(&list, &env).map_err(err)
}

#[pyclass(frozen, module = "ptmtopo")]
struct Complex {
    inner: Arc<SimplicialComplex>,
}

#[pymethods]
impl Complex {
    /// Face closure of the given vertex lists.
    #[new]
    fn new(generators: Vec<Vec<usize>>) -> PyResult<Self> {
        Ok(Complex {
            inner: Arc::new(SimplicialComplex::face_closure(generators).map_err(err)?),
        })
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Complex {
            inner: Arc::new(SimplicialComplex::parse(text).map_err(err)?),
        })
    }

    fn counts(&self) -> Vec<usize> {
        (0..=self.inner.dim().unwrap_or(0))
            .map(|k| self.inner.count(k))
            .collect()
    }

    fn betti(&self, maxdim: usize) -> Vec<usize> {
        topo::betti(&self.inner, maxdim).0
    }

    fn euler_characteristic(&self) -> i64 {
        topo::euler_characteristic(&self.inner)
    }

    fn genus(&self) -> Option<usize> {
        topo::genus(&self.inner)
    }

    /// `(coords, is_null)` of a closed vertex path.
    fn classify_loop(&self, vertices: Vec<usize>) -> PyResult<(Vec<u32>, bool)> {
        let path = EdgePath::new(self.inner.clone(), vertices).map_err(err)?;
        let class = h1_class(&Loop::new(path).map_err(err)?).map_err(err)?;
        let null = class.is_zero();
        Ok((class.coords.into_iter().map(u32::from).collect(), null))
    }
}

/// `(dim, birth, death)` intervals, with `None` for open bars.
#[pyfunction]
fn persistence(filtration: &str, maxdim: usize) -> PyResult<Vec<(usize, f64, Option<f64>)>> {
    let f = Filtration::parse(filtration).map_err(err)?;
    Ok(topo::persistence(&f, maxdim)
        .intervals
        .iter()
        .map(|i| (i.dim, i.birth, i.death))
        .collect())
}

/// Per snapshot `(time, n_points, betti)`, then the delta rows.
#[pyfunction]
#[pyo3(signature = (machine, inputs, eps, maxdim = 2, fuel = 1000, policy = "deterministic", seed = None))]
#[allow(clippy::type_complexity, clippy::too_many_arguments)]
fn build_env(
    machine: &Machine,
    inputs: Vec<String>,
    eps: &str,
    maxdim: usize,
    fuel: usize,
    policy: &str,
    seed: Option<u64>,
) -> PyResult<(Vec<(usize, usize, Vec<usize>)>, Vec<String>)> {
    let eps = parse_rational(eps).ok_or_else(|| err(format!("bad eps {eps:?}")))?;
    let trace = core_build_env(&machine.inner, &inputs, eps, maxdim, fuel, self::policy(policy, seed)?)
        .map_err(err)?;
    let snaps = trace
        .snapshots
        .iter()
        .map(|s| (s.time, s.points.len(), s.betti.0.clone()))
        .collect();
    let deltas = invariant_delta(&trace).iter().map(|d| d.render()).collect();
    Ok((snaps, deltas))
}

#[pymodule]
fn ptmtopo(module: &Bound<'_, PyModule>) -> PyResult<()> {
    module.add_class::<Machine>()?;
    module.add_class::<Its>()?;
    module.add_class::<Complex>()?;
    module.add_function(wrap_pyfunction!(classify, module)?)?;
    module.add_function(wrap_pyfunction!(persistence, module)?)?;
    module.add_function(wrap_pyfunction!(build_env, module)?)?;
    Ok(())
}
