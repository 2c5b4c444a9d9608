//! Python bindings: exposes the matrix types, the rule checks, the
//! enumeration pipeline, the brute-force oracle and the constraint
//! annotator as an extension module named `vortex_diagrams`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use vortex_diagrams::annotate::emit_constraints;
use vortex_diagrams::matrix::{BinarySymmetricMatrix, Permutation, ZWMatrix};
use vortex_diagrams::oracle;
use vortex_diagrams::pipeline::{run_pipeline, PipelineOptions};
use vortex_diagrams::render;
use vortex_diagrams::rules::{apply_all, RuleId};

fn value_err(e: vortex_diagrams::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// One color of a two-colored diagram: a binary symmetric matrix with
/// circles on the diagonal and strokes off it.
#[pyclass(name = "Matrix", frozen)]
#[derive(Clone)]
struct PyMatrix {
    inner: BinarySymmetricMatrix,
}

#[pymethods]
impl PyMatrix {
    /// Build from the vertex count, a 0/1 diagonal list, and a list of
    /// 1-based stroke pairs.
    #[new]
    #[pyo3(signature = (n, diag, strokes))]
    fn new(n: usize, diag: Vec<u8>, strokes: Vec<(u8, u8)>) -> PyResult<Self> {
        let doc = render::MatrixDoc { diag, strokes };
        if doc.diag.len() != n {
            return Err(PyValueError::new_err(format!(
                "diagonal has {} entries for n={n}",
                doc.diag.len()
            )));
        }
        Ok(Self {
            inner: doc.to_matrix().map_err(value_err)?,
        })
    }

    /// Parse the bit-string encoding `d_1..d_n s_(1,2)..s_(n-1,n)`.
    #[staticmethod]
    fn from_encoding(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: BinarySymmetricMatrix::from_encoding(text).map_err(value_err)?,
        })
    }

    /// Parse the compact literal, e.g. `M(n=5; d=00011; s=12,45)`.
    #[staticmethod]
    fn from_literal(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: BinarySymmetricMatrix::parse_literal(text).map_err(value_err)?,
        })
    }

    fn n(&self) -> usize {
        self.inner.n()
    }

    fn trace(&self) -> u32 {
        self.inner.trace()
    }

    fn column_sums(&self) -> Vec<u32> {
        self.inner.column_sums()
    }

    /// Connected components as sorted vertex lists (1-based).
    fn components(&self) -> Vec<Vec<usize>> {
        self.inner
            .components()
            .blocks()
            .iter()
            .map(|b| b.iter().map(|&v| v as usize).collect())
            .collect()
    }

    fn circled_vertices(&self) -> Vec<usize> {
        self.inner
            .circled_vertices()
            .into_iter()
            .map(|v| v as usize)
            .collect()
    }

    fn strokes(&self) -> Vec<(u8, u8)> {
        self.inner.stroke_pairs()
    }

    fn encoding(&self) -> String {
        self.inner.encoding()
    }

    /// Relabel vertices: vertex i maps to images[i-1] (1-based).
    fn permute(&self, images: Vec<u8>) -> PyResult<Self> {
        let sigma = Permutation::from_images(&images).map_err(value_err)?;
        Ok(Self {
            inner: self.inner.permute(&sigma).map_err(value_err)?,
        })
    }

    /// The canonical orbit representative and its key.
    fn canonical(&self) -> (Self, String) {
        let (m, key) = self.inner.canonical();
        (Self { inner: m }, key.as_str().to_owned())
    }

    fn __repr__(&self) -> String {
        format!("Matrix({})", self.inner.encoding())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.inner.hash(&mut h);
        h.finish()
    }
}

/// A candidate two-colored diagram: the pair (z-matrix | w-matrix).
#[pyclass(name = "Diagram", frozen)]
#[derive(Clone)]
struct PyDiagram {
    inner: ZWMatrix,
}

fn constraint_dict<'py>(
    py: Python<'py>,
    c: &vortex_diagrams::annotate::Constraint,
) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("pattern", c.pattern.as_str())?;
    d.set_item("color", c.color.as_str())?;
    let vertices: Vec<usize> = c.vertices.iter().map(|&v| v as usize).collect();
    d.set_item("vertices", vertices)?;
    d.set_item(
        "kind",
        match c.kind {
            vortex_diagrams::annotate::ConstraintKind::EqualsZero => "eq0",
            vortex_diagrams::annotate::ConstraintKind::Nonzero => "ne0",
        },
    )?;
    d.set_item(
        "branch",
        match c.branch {
            vortex_diagrams::annotate::LambdaBranch::Any => "any",
            vortex_diagrams::annotate::LambdaBranch::Real => "real",
            vortex_diagrams::annotate::LambdaBranch::Imaginary => "imag",
        },
    )?;
    let terms: Vec<(i64, Vec<usize>)> = c
        .poly
        .terms()
        .map(|(coeff, exps)| (coeff, exps.iter().map(|&e| e as usize).collect()))
        .collect();
    d.set_item("poly", terms)?;
    d.set_item("text", c.poly.to_string())?;
    Ok(d)
}

#[pymethods]
impl PyDiagram {
    #[new]
    fn new(z: &PyMatrix, w: &PyMatrix) -> PyResult<Self> {
        Ok(Self {
            inner: ZWMatrix::new(z.inner, w.inner).map_err(value_err)?,
        })
    }

    /// Parse the pair encoding `N=<n>;A=<enc>;B=<enc>`.
    #[staticmethod]
    fn from_encoding(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: ZWMatrix::from_encoding(text).map_err(value_err)?,
        })
    }

    fn n(&self) -> usize {
        self.inner.n()
    }

    fn z(&self) -> PyMatrix {
        PyMatrix {
            inner: *self.inner.z(),
        }
    }

    fn w(&self) -> PyMatrix {
        PyMatrix {
            inner: *self.inner.w(),
        }
    }

    fn encoding(&self) -> String {
        self.inner.encoding()
    }

    /// Edges as `(i, j, kind)` with kind one of "z", "w", "zw".
    fn classify_edges(&self) -> Vec<(u8, u8, &'static str)> {
        self.inner
            .classify_edges()
            .into_iter()
            .map(|(i, j, k)| {
                let kind = match k {
                    vortex_diagrams::matrix::EdgeKind::Z => "z",
                    vortex_diagrams::matrix::EdgeKind::W => "w",
                    vortex_diagrams::matrix::EdgeKind::Zw => "zw",
                };
                (i, j, kind)
            })
            .collect()
    }

    #[pyo3(signature = (swap_colors = false))]
    fn canonical(&self, swap_colors: bool) -> (Self, String) {
        let (p, key) = self.inner.canonical(swap_colors);
        (Self { inner: p }, key.as_str().to_owned())
    }

    fn permute(&self, images: Vec<u8>) -> PyResult<Self> {
        let sigma = Permutation::from_images(&images).map_err(value_err)?;
        Ok(Self {
            inner: self.inner.permute(&sigma).map_err(value_err)?,
        })
    }

    /// All eleven rule verdicts as `(rule, passed, witness)` tuples.
    fn rule_verdicts(&self) -> Vec<(String, bool, Option<String>)> {
        apply_all(&self.inner, &RuleId::ALL)
            .into_iter()
            .map(|v| (v.rule.as_str().to_owned(), v.passed, v.witness))
            .collect()
    }

    fn passes_rules(&self) -> bool {
        vortex_diagrams::rules::passes_all(&self.inner, &RuleId::ALL)
    }

    /// Vorticity constraints forced by the diagram's sub-patterns, as
    /// dicts mirroring the JSON interface.
    fn constraints<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        let out = PyList::empty(py);
        for c in emit_constraints(&self.inner) {
            out.append(constraint_dict(py, &c)?)?;
        }
        Ok(out)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&render::DiagramDoc::from_pair(&self.inner, true))
            .expect("serializable")
    }

    fn to_dot(&self) -> String {
        render::render_dot(&self.inner, "d0")
    }

    fn __repr__(&self) -> String {
        format!("Diagram({})", self.inner.encoding())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.inner.hash(&mut h);
        h.finish()
    }
}

fn stats_dict<'py>(
    py: Python<'py>,
    stats: &vortex_diagrams::pipeline::StageStats,
) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("n", stats.n)?;
    d.set_item("initial", stats.initial.clone())?;
    d.set_item("filtered", stats.filtered.clone())?;
    d.set_item("t_sets", stats.t_sets.clone())?;
    d.set_item("u_sets", stats.u_sets.clone())?;
    d.set_item("final_count", stats.final_count)?;
    Ok(d)
}

/// Run the staged enumeration; returns `(diagrams, stats)`.
#[pyfunction]
#[pyo3(signature = (n, dedupe_swap = true, jobs = None))]
fn enumerate_diagrams<'py>(
    py: Python<'py>,
    n: usize,
    dedupe_swap: bool,
    jobs: Option<usize>,
) -> PyResult<(Vec<PyDiagram>, Bound<'py, PyDict>)> {
    let set = py
        .allow_threads(|| run_pipeline(n, &PipelineOptions { dedupe_swap, jobs }))
        .map_err(value_err)?;
    let stats = stats_dict(py, set.stats.as_ref().expect("pipeline emits stats"))?;
    let diagrams = set
        .diagrams
        .into_iter()
        .map(|p| PyDiagram { inner: p })
        .collect();
    Ok((diagrams, stats))
}

/// Unstaged brute-force enumeration over every pair; n <= 4.
#[pyfunction]
#[pyo3(signature = (n, dedupe_swap = true))]
fn brute_force(py: Python<'_>, n: usize, dedupe_swap: bool) -> PyResult<Vec<PyDiagram>> {
    let set = py
        .allow_threads(|| oracle::brute_force_pipeline(n, dedupe_swap))
        .map_err(value_err)?;
    Ok(set
        .diagrams
        .into_iter()
        .map(|p| PyDiagram { inner: p })
        .collect())
}

/// The full permutation orbit of a matrix.
#[pyfunction]
fn orbit(m: &PyMatrix) -> Vec<PyMatrix> {
    oracle::orbit_expand(&m.inner)
        .into_iter()
        .map(|inner| PyMatrix { inner })
        .collect()
}

#[pymodule]
#[pyo3(name = "vortex_diagrams")]
fn bindings(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyMatrix>()?;
    m.add_class::<PyDiagram>()?;
    m.add_function(wrap_pyfunction!(enumerate_diagrams, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force, m)?)?;
    m.add_function(wrap_pyfunction!(orbit, m)?)?;
    Ok(())
}
