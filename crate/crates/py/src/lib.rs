//! Python bindings for the patperm library: trees, the six bijections, the
//! samplers, and the lazily grown size-biased tree.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use patperm::biject;
use patperm::experiment;
use patperm::extnat::ExtendedNat;
use patperm::metric;
use patperm::pattern::{self, Pattern};
use patperm::sampler::{self, GwDraw};
use patperm::spine;
use patperm::tree::OrderedTree;
use patperm::vertex::Vertex;
use patperm::SeededRng;

fn err(e: patperm::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_pattern(s: &str) -> PyResult<Pattern> {
    s.parse::<Pattern>().map_err(err)
}

fn vertex_from(path: Vec<u32>) -> PyResult<Vertex> {
    Vertex::new(path).map_err(err)
}

fn extnat_to_py(py: Python<'_>, v: ExtendedNat) -> PyResult<Py<PyAny>> {
    match v {
        ExtendedNat::Finite(x) => Ok(x.into_pyobject(py)?.into_any().unbind()),
        ExtendedNat::Infinite => Ok(f64::INFINITY.into_pyobject(py)?.into_any().unbind()),
    }
}

/// A finite rooted ordered tree.
#[pyclass(name = "Tree", from_py_object)]
#[derive(Clone)]
struct PyTree(OrderedTree);

#[pymethods]
impl PyTree {
    /// Builds a tree from a list of vertex paths (lists of child indices).
    #[new]
    fn new(vertices: Vec<Vec<u32>>) -> PyResult<Self> {
        let vs = vertices
            .into_iter()
            .map(vertex_from)
            .collect::<PyResult<Vec<_>>>()?;
        Ok(PyTree(OrderedTree::from_vertex_set(vs).map_err(err)?))
    }

    #[staticmethod]
    fn singleton() -> Self {
        PyTree(OrderedTree::singleton())
    }

    /// Parses the children-array JSON form, e.g. "[[],[]]".
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyTree(OrderedTree::from_json_str(text).map_err(err)?))
    }

    #[staticmethod]
    fn from_preorder_degrees(degrees: Vec<u32>) -> PyResult<Self> {
        Ok(PyTree(
            OrderedTree::from_preorder_degrees(&degrees).map_err(err)?,
        ))
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __eq__(&self, other: &PyTree) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("Tree({})", self.0.to_json_string())
    }

    fn to_json(&self) -> String {
        self.0.to_json_string()
    }

    fn preorder_degrees(&self) -> Vec<u32> {
        self.0.preorder_degrees()
    }

    /// Vertices in lexicographic order, as lists of child indices.
    fn vertices(&self) -> Vec<Vec<u32>> {
        self.0
            .vertex_order()
            .iter()
            .map(|v| v.path().to_vec())
            .collect()
    }

    fn leaves(&self) -> Vec<Vec<u32>> {
        self.0.leaves().iter().map(|v| v.path().to_vec()).collect()
    }

    /// Child count of the vertex, or -1 if it is not in the tree.
    fn degree(&self, path: Vec<u32>) -> PyResult<i64> {
        Ok(self.0.degree(&vertex_from(path)?))
    }

    fn contains(&self, path: Vec<u32>) -> PyResult<bool> {
        Ok(self.0.contains(&vertex_from(path)?))
    }

    fn height(&self) -> usize {
        self.0.height()
    }

    fn count_at_height(&self, k: usize) -> usize {
        self.0.count_at_height(k)
    }

    fn fringe(&self, path: Vec<u32>) -> PyResult<PyTree> {
        Ok(PyTree(self.0.fringe(&vertex_from(path)?).map_err(err)?))
    }

    fn truncate(&self, m: usize) -> PyTree {
        PyTree(self.0.truncate(m))
    }

    fn attach(&self, leaf: Vec<u32>, subtrees: Vec<PyTree>) -> PyResult<PyTree> {
        let subs: Vec<OrderedTree> = subtrees.into_iter().map(|t| t.0).collect();
        Ok(PyTree(
            self.0.attach(&vertex_from(leaf)?, &subs).map_err(err)?,
        ))
    }

    /// Numeric view of the local distance to another tree.
    fn local_distance(&self, other: &PyTree) -> f64 {
        metric::local_distance(&self.0, &other.0).to_f64()
    }
}

/// A permutation in one-line notation.
#[pyclass(name = "Permutation", from_py_object)]
#[derive(Clone)]
struct PyPermutation(patperm::Permutation);

#[pymethods]
impl PyPermutation {
    #[new]
    fn new(values: Vec<u32>) -> PyResult<Self> {
        Ok(PyPermutation(
            patperm::Permutation::new(values).map_err(err)?,
        ))
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __eq__(&self, other: &PyPermutation) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("Permutation({:?})", self.0.values())
    }

    fn values(&self) -> Vec<u32> {
        self.0.values().to_vec()
    }

    fn complement(&self) -> PyPermutation {
        PyPermutation(self.0.complement())
    }
}

/// A lazily grown size-biased Geometric(1/2) Galton-Watson tree.
#[pyclass(name = "SpineTree")]
struct PySpineTree(spine::SpineTree);

#[pymethods]
impl PySpineTree {
    #[new]
    fn new(seed: u64) -> Self {
        PySpineTree(spine::SpineTree::geometric_half(seed))
    }

    fn realized_height(&self) -> usize {
        self.0.realized_height()
    }

    fn extend(&mut self) -> PyResult<()> {
        self.0.extend().map_err(err)
    }

    fn truncate(&mut self, m: usize) -> PyResult<PyTree> {
        Ok(PyTree(self.0.truncate_spine(m).map_err(err)?))
    }

    fn v_sequence(&mut self, j: usize) -> PyResult<Vec<Vec<u32>>> {
        Ok(self
            .0
            .v_sequence(j)
            .map_err(err)?
            .iter()
            .map(|v| v.path().to_vec())
            .collect())
    }

    fn w_sequence(&mut self, j: usize) -> PyResult<Vec<Vec<u32>>> {
        Ok(self
            .0
            .w_sequence(j)
            .map_err(err)?
            .iter()
            .map(|v| v.path().to_vec())
            .collect())
    }

    /// The limit bijection value at position k; infinity comes back as
    /// float('inf').
    fn phi(&mut self, py: Python<'_>, sigma: &str, k: usize) -> PyResult<Py<PyAny>> {
        let sigma = parse_pattern(sigma)?;
        let v = self.0.phi(sigma, k).map_err(err)?;
        extnat_to_py(py, v)
    }

    fn phi_321(&mut self, k: usize) -> PyResult<u64> {
        self.0.phi_321(k).map_err(err)
    }

    fn stability_horizon(&mut self, sigma: &str, k: usize) -> PyResult<usize> {
        let sigma = parse_pattern(sigma)?;
        self.0.stability_horizon(sigma, k).map_err(err)
    }

    fn step_offspring(&mut self, h: usize) -> PyResult<u32> {
        Ok(self.0.step(h).map_err(err)?.offspring())
    }

    fn step_spine_index(&mut self, h: usize) -> PyResult<u32> {
        Ok(self.0.step(h).map_err(err)?.spine_index())
    }

    fn side_trees(&mut self, h: usize) -> PyResult<Vec<PyTree>> {
        Ok(self
            .0
            .step(h)
            .map_err(err)?
            .side_trees()
            .into_iter()
            .map(PyTree)
            .collect())
    }
}

/// Lexicographic comparison of two vertex paths: -1, 0, or 1.
#[pyfunction]
fn lex_compare(a: Vec<u32>, b: Vec<u32>) -> PyResult<i32> {
    let (a, b) = (vertex_from(a)?, vertex_from(b)?);
    Ok(match patperm::lex_compare(&a, &b) {
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => 1,
    })
}

/// Whether the vertex paths form a valid tree.
#[pyfunction]
fn validate_tree(vertices: Vec<Vec<u32>>) -> PyResult<bool> {
    let mut vs = Vec::with_capacity(vertices.len());
    for path in vertices {
        match Vertex::new(path) {
            Ok(v) => vs.push(v),
            Err(_) => return Ok(false),
        }
    }
    Ok(OrderedTree::is_valid_vertex_set(vs))
}

/// Whether the permutation contains the length-3 pattern.
#[pyfunction]
fn contains(values: Vec<u32>, sigma: &str) -> PyResult<bool> {
    let pi = patperm::Permutation::new(values).map_err(err)?;
    Ok(pattern::contains(&pi, parse_pattern(sigma)?))
}

/// All permutations of [n] avoiding the pattern, as value lists.
#[pyfunction]
fn avoiders(n: usize, sigma: &str) -> PyResult<Vec<Vec<u32>>> {
    Ok(pattern::enumerate_avoiders(n, parse_pattern(sigma)?)
        .map_err(err)?
        .into_iter()
        .map(|p| p.values().to_vec())
        .collect())
}

/// 1-based indices of the left-to-right maxima.
#[pyfunction]
fn ltr_maxima(values: Vec<u32>) -> PyResult<Vec<usize>> {
    let pi = patperm::Permutation::new(values).map_err(err)?;
    Ok(pattern::ltr_maxima_indices(&pi))
}

#[pyfunction]
fn catalan(n: usize) -> u64 {
    pattern::catalan(n)
}

/// The bijection image of a tree with at least two vertices.
#[pyfunction]
fn phi(sigma: &str, tree: &PyTree) -> PyResult<PyPermutation> {
    Ok(PyPermutation(
        biject::phi(parse_pattern(sigma)?, &tree.0).map_err(err)?,
    ))
}

/// Leaf statistics (ranks, heights) of a tree with at least two vertices.
#[pyfunction]
fn leaf_stats(tree: &PyTree) -> PyResult<(Vec<u64>, Vec<u64>)> {
    let stats = biject::leaf_stats(&tree.0).map_err(err)?;
    Ok((stats.s, stats.p))
}

/// The unique tree mapping to a 321-avoiding permutation.
#[pyfunction]
fn inverse_phi_321(perm: &PyPermutation) -> PyResult<PyTree> {
    Ok(PyTree(biject::inverse_phi_321(&perm.0).map_err(err)?))
}

/// A uniform random plane tree with the given number of vertices.
#[pyfunction]
fn sample_uniform_tree(size: usize, seed: u64) -> PyResult<PyTree> {
    if size == 0 {
        return Err(PyValueError::new_err("size must be at least 1"));
    }
    let mut rng = SeededRng::new(seed);
    Ok(PyTree(sampler::sample_uniform_tree(size, &mut rng)))
}

/// An unconditioned Geometric(1/2) Galton-Watson draw, or None if the tree
/// would exceed the vertex cap.
#[pyfunction]
#[pyo3(signature = (seed, cap = 1_000_000))]
fn sample_gw(seed: u64, cap: usize) -> Option<PyTree> {
    let xi = patperm::OffspringDistribution::geometric_half();
    let mut rng = SeededRng::new(seed);
    match sampler::sample_gw(&xi, &mut rng, cap) {
        GwDraw::Tree(t) => Some(PyTree(t)),
        GwDraw::Overflow => None,
    }
}

/// All plane trees with the given number of vertices (at most 12).
#[pyfunction]
fn enumerate_trees(size: usize) -> PyResult<Vec<PyTree>> {
    Ok(sampler::enumerate_trees(size)
        .map_err(err)?
        .into_iter()
        .map(PyTree)
        .collect())
}

/// JSON text of the empirical law of the first k image values at length n.
#[pyfunction]
fn sample_prefix_law(
    sigma: &str,
    n: usize,
    count: u64,
    k: usize,
    bucket_cap: u64,
    seed: u64,
) -> PyResult<String> {
    let law = experiment::sample_prefix_law(parse_pattern(sigma)?, n, count, k, bucket_cap, seed)
        .map_err(err)?;
    serde_json::to_string(&law).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// JSON text of the empirical limit law plus the dropped-sample count.
#[pyfunction]
fn limit_prefix_law(
    sigma: &str,
    count: u64,
    k: usize,
    bucket_cap: u64,
    seed: u64,
) -> PyResult<(String, u64)> {
    let (laws, errors) =
        experiment::limit_prefix_laws(&[parse_pattern(sigma)?], count, k, bucket_cap, seed)
            .map_err(err)?;
    let text =
        serde_json::to_string(&laws[0]).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok((text, errors))
}

/// JSON record {seed, sigma, k, values} of one limit window; infinity
/// encodes as "inf".
#[pyfunction]
fn prefix_record(seed: u64, sigma: &str, k: usize) -> PyResult<String> {
    let record = spine::prefix_record(seed, parse_pattern(sigma)?, k).map_err(err)?;
    serde_json::to_string(&record).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn patperm_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTree>()?;
    m.add_class::<PyPermutation>()?;
    m.add_class::<PySpineTree>()?;
    m.add_function(wrap_pyfunction!(lex_compare, m)?)?;
    m.add_function(wrap_pyfunction!(validate_tree, m)?)?;
    m.add_function(wrap_pyfunction!(contains, m)?)?;
    m.add_function(wrap_pyfunction!(avoiders, m)?)?;
    m.add_function(wrap_pyfunction!(ltr_maxima, m)?)?;
    m.add_function(wrap_pyfunction!(catalan, m)?)?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(leaf_stats, m)?)?;
    m.add_function(wrap_pyfunction!(inverse_phi_321, m)?)?;
    m.add_function(wrap_pyfunction!(sample_uniform_tree, m)?)?;
    m.add_function(wrap_pyfunction!(sample_gw, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_trees, m)?)?;
    m.add_function(wrap_pyfunction!(sample_prefix_law, m)?)?;
    m.add_function(wrap_pyfunction!(limit_prefix_law, m)?)?;
    m.add_function(wrap_pyfunction!(prefix_record, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
