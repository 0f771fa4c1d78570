//! Python bindings. Subsets cross the boundary as lists of element indices.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use vcgroups::experiments::records_to_csv_string;
use vcgroups::residues::{power_residues_digraph, residue_rows};
use vcgroups::{
    ExperimentRecord, FamilyKind, FiniteGroup, GroupFamily, Model, SearchOptions, SeededRng,
    Subset, TranslateFamily, VcError,
};

create_exception!(pyvcgroups, VcGroupsError, PyException);

fn err(e: VcError) -> PyErr {
    VcGroupsError::new_err(e.to_string())
}

fn subset(n: usize, elems: Vec<usize>) -> PyResult<Subset> {
    Subset::from_indices(n, elems).map_err(err)
}

/// A finite group on elements `0..order`.
#[pyclass(name = "Group", module = "pyvcgroups", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyGroup {
    inner: FiniteGroup,
}

#[pymethods]
impl PyGroup {
    #[staticmethod]
    fn cyclic(n: usize) -> PyResult<Self> {
        FiniteGroup::cyclic(n).map(|inner| PyGroup { inner }).map_err(err)
    }

    #[staticmethod]
    fn dihedral(n: usize) -> PyResult<Self> {
        FiniteGroup::dihedral(n).map(|inner| PyGroup { inner }).map_err(err)
    }

    /// Parses `C12`, `D5`, `C3xC4` and similar.
    #[staticmethod]
    fn parse(descriptor: &str) -> PyResult<Self> {
        FiniteGroup::from_descriptor(descriptor)
            .map(|inner| PyGroup { inner })
            .map_err(err)
    }

    /// Validates a multiplication table `table[a][b] = a * b`.
    #[staticmethod]
    fn from_table(table: Vec<Vec<usize>>) -> PyResult<Self> {
        FiniteGroup::from_cayley_table(&table)
            .map(|inner| PyGroup { inner })
            .map_err(err)
    }

    fn direct_product(&self, other: &PyGroup) -> PyResult<Self> {
        FiniteGroup::direct_product(&self.inner, &other.inner)
            .map(|inner| PyGroup { inner })
            .map_err(err)
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn identity(&self) -> usize {
        self.inner.identity()
    }

    #[getter]
    fn descriptor(&self) -> String {
        self.inner.descriptor().to_string()
    }

    fn mul(&self, a: usize, b: usize) -> PyResult<usize> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.inner.mul(a, b))
    }

    fn inv(&self, a: usize) -> PyResult<usize> {
        self.check(a)?;
        Ok(self.inner.inv(a))
    }

    fn is_abelian(&self) -> bool {
        self.inner.is_abelian()
    }

    fn __len__(&self) -> usize {
        self.inner.order()
    }

    fn __repr__(&self) -> String {
        format!("Group({:?})", self.inner.descriptor())
    }
}

impl PyGroup {
    fn check(&self, a: usize) -> PyResult<()> {
        if a < self.inner.order() {
            Ok(())
        } else {
            Err(VcGroupsError::new_err(format!(
                "element {a} outside group of order {}",
                self.inner.order()
            )))
        }
    }
}

fn family_of(g: &FiniteGroup, a: &Subset, kind: &str) -> PyResult<TranslateFamily> {
    match kind {
        "translates" => TranslateFamily::left_translates(g, a).map_err(err),
        "sisask" => vcgroups::sisask_family(g, a).map_err(err),
        "sum-graph" => vcgroups::cayley_sum_graph(g, a)
            .map(|d| vcgroups::neighborhood_family(&d))
            .map_err(err),
        "closed" => vcgroups::cayley_digraph(g, a)
            .map(|d| vcgroups::closed_neighborhood_family(&d))
            .map_err(err),
        _ => Err(VcGroupsError::new_err(format!("unknown family {kind:?}"))),
    }
}

fn options(node_budget: Option<u64>, time_limit: Option<f64>) -> SearchOptions {
    SearchOptions {
        node_budget,
        time_limit: time_limit.map(|s| std::time::Duration::from_secs_f64(s.max(0.0))),
        ..Default::default()
    }
}

/// Exact VC-dimension of a family built from `elems`.
///
/// `family` is one of `translates`, `sisask`, `sum-graph`, `closed`.
#[pyfunction]
#[pyo3(signature = (group, elems, family = "translates", node_budget = None, time_limit = None))]
fn vc_dim(
    py: Python<'_>,
    group: &PyGroup,
    elems: Vec<usize>,
    family: &str,
    node_budget: Option<u64>,
    time_limit: Option<f64>,
) -> PyResult<usize> {
    let g = &group.inner;
    let f = family_of(g, &subset(g.order(), elems)?, family)?;
    py.detach(|| vcgroups::vc_dim_with(&f, options(node_budget, time_limit)))
        .map(|o| o.dimension)
        .map_err(err)
}

/// VC-dimension of an explicit list of member sets over `0..universe`.
#[pyfunction]
fn vc_dim_of_sets(universe: usize, members: Vec<Vec<usize>>) -> PyResult<usize> {
    let members = members
        .into_iter()
        .map(|m| subset(universe, m))
        .collect::<PyResult<Vec<_>>>()?;
    let f = TranslateFamily::explicit(universe, members, FamilyKind::ExplicitList).map_err(err)?;
    vcgroups::vc_dim(&f).map_err(err)
}

/// Exhaustive VC-dimension of the translate family (order at most 24).
#[pyfunction]
fn vc_dim_naive(group: &PyGroup, elems: Vec<usize>) -> PyResult<usize> {
    let g = &group.inner;
    let f = TranslateFamily::left_translates(g, &subset(g.order(), elems)?).map_err(err)?;
    vcgroups::vc_dim_naive(&f).map_err(err)
}

#[pyfunction]
fn is_shattered(group: &PyGroup, elems: Vec<usize>, probe: Vec<usize>) -> PyResult<bool> {
    let g = &group.inner;
    let f = TranslateFamily::left_translates(g, &subset(g.order(), elems)?).map_err(err)?;
    vcgroups::is_shattered(&f, &subset(g.order(), probe)?).map_err(err)
}

/// Bernoulli subset drawn from the generator seeded with `seed`.
#[pyfunction]
fn sample_subset(group: &PyGroup, p: f64, seed: u64) -> PyResult<Vec<usize>> {
    vcgroups::bernoulli_subset(&group.inner, p, &mut SeededRng::new(seed))
        .map(|s| s.to_vec())
        .map_err(err)
}

#[pyfunction]
fn to_hex(group: &PyGroup, elems: Vec<usize>) -> PyResult<String> {
    Ok(subset(group.inner.order(), elems)?.to_hex())
}

#[pyfunction]
fn from_hex(group: &PyGroup, hex: &str) -> PyResult<Vec<usize>> {
    Subset::from_hex(group.inner.order(), hex)
        .map(|s| s.to_vec())
        .map_err(err)
}

/// Representatives of the greedy disjoint left translates of `u`.
#[pyfunction]
fn greedy_disjoint_translates(group: &PyGroup, u: Vec<usize>) -> PyResult<Vec<usize>> {
    let g = &group.inner;
    vcgroups::greedy_disjoint_translates(g, &subset(g.order(), u)?)
        .map(|p| p.reps)
        .map_err(err)
}

/// Representatives `t` of a greedy cover by right translates `S t`.
#[pyfunction]
fn greedy_cover(group: &PyGroup, s: Vec<usize>) -> PyResult<Vec<usize>> {
    let g = &group.inner;
    vcgroups::greedy_cover(g, &subset(g.order(), s)?)
        .map(|c| c.reps)
        .map_err(err)
}

/// `(S, T)` with `S` the packing of `u` and `S T = G`.
#[pyfunction]
fn abelian_cover_shortcut(group: &PyGroup, u: Vec<usize>) -> PyResult<(Vec<usize>, Vec<usize>)> {
    let g = &group.inner;
    vcgroups::abelian_cover_shortcut(g, &subset(g.order(), u)?)
        .map(|c| (c.base.to_vec(), c.reps))
        .map_err(err)
}

#[pyfunction]
fn is_prime(n: u64) -> bool {
    vcgroups::is_prime(n)
}

#[pyfunction]
fn power_residues(n: u64, r: u64) -> PyResult<Vec<usize>> {
    vcgroups::power_residues(n, r)
        .map(|s| s.members.to_vec())
        .map_err(err)
}

/// Out-neighborhoods of the Paley digraph on `Z/nZ`.
#[pyfunction]
fn paley_digraph(n: u64) -> PyResult<Vec<Vec<usize>>> {
    let d = power_residues_digraph(n, 2).map_err(err)?;
    Ok((0..d.vertex_count())
        .map(|v| d.out_neighborhood(v).to_vec())
        .collect())
}

fn record_dict<'py>(py: Python<'py>, r: &ExperimentRecord) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("model", r.model.as_str())?;
    d.set_item("group", &r.group)?;
    d.set_item("N", r.n)?;
    d.set_item("p", r.p)?;
    d.set_item("r", r.r)?;
    d.set_item("seed", r.seed)?;
    d.set_item("trial", r.trial)?;
    match &r.vcdim {
        Ok(v) => d.set_item("vcdim", v)?,
        Err(code) => d.set_item("vcdim", format!("error:{code}"))?,
    }
    d.set_item("log_r_N", r.log_r_n)?;
    d.set_item("band", r.band)?;
    d.set_item("in_band", r.in_band)?;
    Ok(d)
}

fn records_list<'py>(py: Python<'py>, records: &[ExperimentRecord]) -> PyResult<Vec<Bound<'py, PyDict>>> {
    records.iter().map(|r| record_dict(py, r)).collect()
}

/// Power-residue experiment rows, one dict per prime.
#[pyfunction]
#[pyo3(signature = (primes, r, require_congruence = false, node_budget = None))]
fn residue_experiment<'py>(
    py: Python<'py>,
    primes: Vec<u64>,
    r: u64,
    require_congruence: bool,
    node_budget: Option<u64>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let recs = py
        .detach(|| vcgroups::residue_experiment(&primes, r, require_congruence, options(node_budget, None)))
        .map_err(err)?;
    records_list(py, &residue_rows(&recs))
}

fn parse_lln(family: &str, model: &str) -> PyResult<(GroupFamily, Model)> {
    Ok((family.parse().map_err(err)?, model.parse().map_err(err)?))
}

/// Monte Carlo run; one dict per trial, sorted by order and trial.
#[pyfunction]
#[pyo3(signature = (family, sizes, p, trials = 100, seed = 0, model = "bernoulli", node_budget = None, time_limit = None))]
#[allow(clippy::too_many_arguments)]
fn run_lln<'py>(
    py: Python<'py>,
    family: &str,
    sizes: Vec<usize>,
    p: f64,
    trials: u64,
    seed: u64,
    model: &str,
    node_budget: Option<u64>,
    time_limit: Option<f64>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let (fam, model) = parse_lln(family, model)?;
    let recs = py
        .detach(|| vcgroups::run_lln(fam, &sizes, p, trials, seed, model, options(node_budget, time_limit)))
        .map_err(err)?;
    records_list(py, &recs)
}

/// Same run as [`run_lln`], returned as the CSV text the command line writes.
#[pyfunction]
#[pyo3(signature = (family, sizes, p, trials = 100, seed = 0, model = "bernoulli"))]
fn run_lln_csv(
    py: Python<'_>,
    family: &str,
    sizes: Vec<usize>,
    p: f64,
    trials: u64,
    seed: u64,
    model: &str,
) -> PyResult<String> {
    let (fam, model) = parse_lln(family, model)?;
    py.detach(|| vcgroups::run_lln(fam, &sizes, p, trials, seed, model, SearchOptions::default()))
        .map(|recs| records_to_csv_string(&recs))
        .map_err(err)
}

/// Estimate of `Pr[K is not cut out of U]` with its packing bound.
#[pyfunction]
#[pyo3(signature = (group, u, k, p, trials = 100, seed = 0))]
fn cutout_probability<'py>(
    py: Python<'py>,
    group: &PyGroup,
    u: Vec<usize>,
    k: Vec<usize>,
    p: f64,
    trials: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let g = &group.inner;
    let (u, k) = (subset(g.order(), u)?, subset(g.order(), k)?);
    let est = py
        .detach(|| vcgroups::cutout_probability(g, &u, &k, p, trials, seed))
        .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("trials", est.trials)?;
    d.set_item("failures", est.failures)?;
    d.set_item("probability", est.probability)?;
    d.set_item("std_error", est.std_error)?;
    d.set_item("packing", est.packing)?;
    d.set_item("bound", est.bound)?;
    Ok(d)
}

#[pymodule]
fn pyvcgroups(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("VcGroupsError", m.py().get_type::<VcGroupsError>())?;
    m.add_class::<PyGroup>()?;
    m.add_function(wrap_pyfunction!(vc_dim, m)?)?;
    m.add_function(wrap_pyfunction!(vc_dim_of_sets, m)?)?;
    m.add_function(wrap_pyfunction!(vc_dim_naive, m)?)?;
    m.add_function(wrap_pyfunction!(is_shattered, m)?)?;
    m.add_function(wrap_pyfunction!(sample_subset, m)?)?;
    m.add_function(wrap_pyfunction!(to_hex, m)?)?;
    m.add_function(wrap_pyfunction!(from_hex, m)?)?;
    m.add_function(wrap_pyfunction!(greedy_disjoint_translates, m)?)?;
    m.add_function(wrap_pyfunction!(greedy_cover, m)?)?;
    m.add_function(wrap_pyfunction!(abelian_cover_shortcut, m)?)?;
    m.add_function(wrap_pyfunction!(is_prime, m)?)?;
    m.add_function(wrap_pyfunction!(power_residues, m)?)?;
    m.add_function(wrap_pyfunction!(paley_digraph, m)?)?;
    m.add_function(wrap_pyfunction!(residue_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(run_lln, m)?)?;
    m.add_function(wrap_pyfunction!(run_lln_csv, m)?)?;
    m.add_function(wrap_pyfunction!(cutout_probability, m)?)?;
    Ok(())
}
