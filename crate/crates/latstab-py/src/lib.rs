//! Python bindings. Rationals cross the boundary as strings in the same
//! `p/q` form the JSON lattice files use; vectors and tensor coefficients
//! are plain Python ints.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use latstab::multilinear as multi;
use latstab::rat::{format_rat, parse_rat, rat};
use latstab::stability as stab;
use latstab::{
    LatError, LatVec, Lattice, RankRecord, Rat, RatMatrix, SlopeExpr, StabilityVerdict,
    TensorElement, VerdictKind,
};
use num_traits::ToPrimitive;

fn lat_err(e: LatError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn entry_to_rat(v: &Bound<'_, PyAny>) -> PyResult<Rat> {
    if let Ok(i) = v.extract::<i64>() {
        return Ok(rat(i));
    }
    let s: String = v.extract().map_err(|_| {
        PyValueError::new_err("gram entries must be ints or strings like \"3/4\"")
    })?;
    parse_rat(&s).map_err(lat_err)
}

fn vec_from_py(coords: Vec<i64>) -> LatVec {
    LatVec::from_i64(&coords)
}

fn vec_to_py(v: &LatVec) -> PyResult<Vec<i64>> {
    v.coords()
        .iter()
        .map(|c| {
            c.to_i64()
                .ok_or_else(|| PyValueError::new_err("coordinate does not fit in an i64"))
        })
        .collect()
}

fn vecs_to_py(vs: &[LatVec]) -> PyResult<Vec<Vec<i64>>> {
    vs.iter().map(vec_to_py).collect()
}

fn slope_dict<'py>(py: Python<'py>, s: &SlopeExpr) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new_bound(py);
    d.set_item("covol_sq", format_rat(&s.covol_sq))?;
    d.set_item("rank", s.rank)?;
    d.set_item("approx", s.approx())?;
    Ok(d)
}

fn rank_record_dict<'py>(py: Python<'py>, r: &RankRecord) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new_bound(py);
    d.set_item("rank", r.rank)?;
    d.set_item("covol_sq", format_rat(&r.covol_sq))?;
    d.set_item("certified", r.certified)?;
    d.set_item("search_bound", r.search_bound.as_ref().map(format_rat))?;
    d.set_item("gens", vecs_to_py(&r.gens)?)?;
    Ok(d)
}

fn verdict_str(kind: &VerdictKind) -> &'static str {
    match kind {
        VerdictKind::Semistable => "semistable",
        VerdictKind::Unstable => "unstable",
        VerdictKind::UnknownWithinBound => "unknown_within_bound",
    }
}

fn verdict_dict<'py>(py: Python<'py>, v: &StabilityVerdict) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new_bound(py);
    d.set_item("verdict", verdict_str(&v.kind))?;
    d.set_item("certified", v.certified)?;
    d.set_item("mu_max", slope_dict(py, &v.mu_max)?)?;
    d.set_item("witness_rank", v.witness_rank)?;
    d.set_item("witness", vecs_to_py(&v.witness)?)?;
    d.set_item("search_bound", v.search_bound.as_ref().map(format_rat))?;
    let per_rank: Vec<Bound<'py, PyDict>> = v
        .per_rank
        .iter()
        .map(|r| rank_record_dict(py, r))
        .collect::<PyResult<_>>()?;
    d.set_item("per_rank", per_rank)?;
    Ok(d)
}

/// A full-rank lattice given by the Gram matrix of a fixed basis.
#[pyclass(name = "Lattice", frozen)]
struct PyLattice {
    inner: Lattice,
}

#[pymethods]
impl PyLattice {
    #[new]
    fn new(gram: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Self> {
        let n = gram.len();
        if n == 0 || gram.iter().any(|row| row.len() != n) {
            return Err(PyValueError::new_err("gram must be a nonempty square matrix"));
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in &gram {
            for e in row {
                entries.push(entry_to_rat(e)?);
            }
        }
        let m = RatMatrix::new(n, n, entries).map_err(lat_err)?;
        Ok(PyLattice {
            inner: Lattice::from_gram(m).map_err(lat_err)?,
        })
    }

    /// Z^n with the dot product.
    #[staticmethod]
    fn standard(n: usize) -> PyResult<Self> {
        if n == 0 {
            return Err(PyValueError::new_err("rank must be at least 1"));
        }
        Ok(PyLattice {
            inner: Lattice::standard(n),
        })
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    fn gram(&self) -> Vec<Vec<String>> {
        let g = self.inner.gram();
        (0..g.rows())
            .map(|i| (0..g.cols()).map(|j| format_rat(g.at(i, j))).collect())
            .collect()
    }

    fn covol_sq(&self) -> String {
        format_rat(&self.inner.covol_sq())
    }

    fn slope<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        slope_dict(py, &self.inner.slope())
    }

    fn inner(&self, u: Vec<i64>, v: Vec<i64>) -> PyResult<String> {
        self.inner
            .inner(&vec_from_py(u), &vec_from_py(v))
            .map(|x| format_rat(&x))
            .map_err(lat_err)
    }

    fn norm_sq(&self, v: Vec<i64>) -> PyResult<String> {
        self.inner
            .norm_sq(&vec_from_py(v))
            .map(|x| format_rat(&x))
            .map_err(lat_err)
    }

    fn dual(&self) -> PyLattice {
        PyLattice {
            inner: self.inner.dual(),
        }
    }

    fn tensor(&self, other: &PyLattice) -> PyLattice {
        PyLattice {
            inner: multi::tensor_lattice(&self.inner, &other.inner),
        }
    }

    /// Basis of the smallest saturated sublattice containing the given
    /// vectors.
    fn saturate(&self, gens: Vec<Vec<i64>>) -> PyResult<Vec<Vec<i64>>> {
        let vs: Vec<LatVec> = gens.into_iter().map(vec_from_py).collect();
        let sat = self.inner.saturate(&vs).map_err(lat_err)?;
        vecs_to_py(&sat)
    }

    /// Squared covolume of the span of the given vectors.
    fn wedge_gram(&self, vs: Vec<Vec<i64>>) -> PyResult<String> {
        let vs: Vec<LatVec> = vs.into_iter().map(vec_from_py).collect();
        multi::wedge_gram(&self.inner, &vs)
            .map(|x| format_rat(&x))
            .map_err(lat_err)
    }

    /// Smallest squared covolume over saturated rank-r sublattices, with a
    /// certification flag.
    fn min_covol<'py>(&self, py: Python<'py>, r: usize) -> PyResult<Bound<'py, PyDict>> {
        let mc = stab::min_covol_sublattice(&self.inner, r).map_err(lat_err)?;
        let d = PyDict::new_bound(py);
        d.set_item("rank", mc.rank)?;
        d.set_item("covol_sq", format_rat(&mc.covol_sq))?;
        d.set_item("certified", mc.certified)?;
        d.set_item("search_bound", mc.search_bound.as_ref().map(format_rat))?;
        d.set_item("gens", vecs_to_py(&mc.gens)?)?;
        Ok(d)
    }

    fn mu_max<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let mm = stab::mu_max(&self.inner).map_err(lat_err)?;
        let d = PyDict::new_bound(py);
        d.set_item("slope", slope_dict(py, &mm.slope)?)?;
        d.set_item("witness_rank", mm.witness_rank)?;
        d.set_item("witness", vecs_to_py(&mm.witness)?)?;
        d.set_item("certified", mm.certified)?;
        let per_rank: Vec<Bound<'py, PyDict>> = mm
            .per_rank
            .iter()
            .map(|r| rank_record_dict(py, r))
            .collect::<PyResult<_>>()?;
        d.set_item("per_rank", per_rank)?;
        Ok(d)
    }

    fn is_semistable<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let v = stab::is_semistable(&self.inner).map_err(lat_err)?;
        verdict_dict(py, &v)
    }

    /// One Lagrange step of beta against alpha; returns the new vector and
    /// the integer multiple that was subtracted.
    fn reduce_pair(&self, alpha: Vec<i64>, beta: Vec<i64>) -> PyResult<(Vec<i64>, i64)> {
        let (b, k) = stab::reduce_rank2(&self.inner, &vec_from_py(alpha), &vec_from_py(beta))
            .map_err(lat_err)?;
        let k = k
            .to_i64()
            .ok_or_else(|| PyValueError::new_err("step does not fit in an i64"))?;
        Ok((vec_to_py(&b)?, k))
    }

    /// Size-reduces c against the plane of a and b; returns the reduced
    /// triple and the squared component lengths of the new third vector.
    fn reduce_triple<'py>(
        &self,
        py: Python<'py>,
        a: Vec<i64>,
        b: Vec<i64>,
        c: Vec<i64>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let t = stab::reduce_rank3(
            &self.inner,
            &vec_from_py(a),
            &vec_from_py(b),
            &vec_from_py(c),
        )
        .map_err(lat_err)?;
        let d = PyDict::new_bound(py);
        d.set_item("a", vec_to_py(&t.a)?)?;
        d.set_item("b", vec_to_py(&t.b)?)?;
        d.set_item("c", vec_to_py(&t.c)?)?;
        d.set_item("x_sq", format_rat(&t.x_sq))?;
        d.set_item("y_sq", format_rat(&t.y_sq))?;
        d.set_item("z_sq", format_rat(&t.z_sq))?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "Lattice(rank={}, covol_sq={})",
            self.inner.rank(),
            format_rat(&self.inner.covol_sq())
        )
    }
}

/// An element of a tensor product, stored as its integer coefficient
/// matrix against the product basis.
#[pyclass(name = "TensorElement", frozen)]
struct PyTensorElement {
    inner: TensorElement,
}

#[pymethods]
impl PyTensorElement {
    #[new]
    fn new(coeffs: Vec<Vec<i64>>) -> PyResult<Self> {
        if coeffs.is_empty() || coeffs[0].is_empty() {
            return Err(PyValueError::new_err("coefficient matrix must be nonempty"));
        }
        let cols = coeffs[0].len();
        if coeffs.iter().any(|row| row.len() != cols) {
            return Err(PyValueError::new_err("coefficient rows must have equal length"));
        }
        let rows: Vec<&[i64]> = coeffs.iter().map(|r| r.as_slice()).collect();
        Ok(PyTensorElement {
            inner: TensorElement::from_i64(&rows),
        })
    }

    /// The pure tensor u (x) w.
    #[staticmethod]
    fn outer(u: Vec<i64>, w: Vec<i64>) -> PyTensorElement {
        PyTensorElement {
            inner: TensorElement::outer(&vec_from_py(u), &vec_from_py(w)),
        }
    }

    fn coeffs(&self) -> PyResult<Vec<Vec<i64>>> {
        let c = self.inner.coeffs();
        (0..c.rows())
            .map(|i| {
                (0..c.cols())
                    .map(|j| {
                        c.at(i, j).to_i64().ok_or_else(|| {
                            PyValueError::new_err("coefficient does not fit in an i64")
                        })
                    })
                    .collect()
            })
            .collect()
    }

    #[getter]
    fn rows(&self) -> usize {
        self.inner.rows()
    }

    #[getter]
    fn cols(&self) -> usize {
        self.inner.cols()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn add(&self, other: &PyTensorElement) -> PyResult<PyTensorElement> {
        Ok(PyTensorElement {
            inner: self.inner.add(&other.inner).map_err(lat_err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("TensorElement({}x{})", self.inner.rows(), self.inner.cols())
    }
}

fn collect_elements(elements: &[Py<PyTensorElement>]) -> Vec<TensorElement> {
    elements.iter().map(|e| e.get().inner.clone()).collect()
}

/// Slope comparison for the saturation of the given elements inside
/// l (x) m: reports the sublattice data and whether its slope stays at or
/// below the total slope.
#[pyfunction]
fn check_theorem<'py>(
    py: Python<'py>,
    l: &PyLattice,
    m: &PyLattice,
    elements: Vec<Py<PyTensorElement>>,
) -> PyResult<Bound<'py, PyDict>> {
    let elems = collect_elements(&elements);
    let chk = stab::check_theorem(&l.inner, &m.inner, &elems).map_err(lat_err)?;
    let d = PyDict::new_bound(py);
    d.set_item("holds", chk.holds)?;
    d.set_item("sub_rank", chk.sub_rank)?;
    d.set_item("sub_covol_sq", format_rat(&chk.sub_covol_sq))?;
    d.set_item("sub_slope", slope_dict(py, &chk.sub_slope)?)?;
    d.set_item("total_slope", slope_dict(py, &chk.total_slope)?)?;
    d.set_item("gens", vecs_to_py(&chk.gens)?)?;
    Ok(d)
}

/// Replaces a saturated sublattice of l (x) m by its orthogonal complement
/// and checks the covolume bookkeeping between the two.
#[pyfunction]
fn corank_reduce<'py>(
    py: Python<'py>,
    l: &PyLattice,
    m: &PyLattice,
    elements: Vec<Py<PyTensorElement>>,
) -> PyResult<Bound<'py, PyDict>> {
    let elems = collect_elements(&elements);
    let cr = stab::corank_reduce(&l.inner, &m.inner, &elems).map_err(lat_err)?;
    let d = PyDict::new_bound(py);
    d.set_item("identity_holds", cr.identity_holds)?;
    d.set_item("sub_rank", cr.sub_rank)?;
    d.set_item("sub_gens", vecs_to_py(&cr.sub_gens)?)?;
    d.set_item("complement_gens", vecs_to_py(&cr.complement_gens)?)?;
    d.set_item("covol_sq_sub", format_rat(&cr.covol_sq_sub))?;
    d.set_item("covol_sq_total", format_rat(&cr.covol_sq_total))?;
    d.set_item("covol_sq_complement", format_rat(&cr.covol_sq_complement))?;
    Ok(d)
}

/// Certifies semistability of both factors and of their tensor product.
/// Factor ranks must fit one of the supported patterns (2,2), (2,3), (3,2).
#[pyfunction]
fn check_corollary<'py>(
    py: Python<'py>,
    l: &PyLattice,
    m: &PyLattice,
) -> PyResult<Bound<'py, PyDict>> {
    let c = stab::check_corollary(&l.inner, &m.inner).map_err(lat_err)?;
    let d = PyDict::new_bound(py);
    d.set_item("holds", c.holds)?;
    d.set_item("certified", c.certified)?;
    d.set_item("left", verdict_dict(py, &c.left)?)?;
    d.set_item("right", verdict_dict(py, &c.right)?)?;
    d.set_item("tensor", verdict_dict(py, &c.tensor)?)?;
    Ok(d)
}

/// Inner product of two tensor elements under the product metric.
#[pyfunction]
fn tensor_inner(
    l: &PyLattice,
    m: &PyLattice,
    a: &PyTensorElement,
    b: &PyTensorElement,
) -> PyResult<String> {
    multi::tensor_inner(&l.inner, &m.inner, &a.inner, &b.inner)
        .map(|x| format_rat(&x))
        .map_err(lat_err)
}

#[pymodule]
fn latstab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLattice>()?;
    m.add_class::<PyTensorElement>()?;
    m.add_function(wrap_pyfunction!(check_theorem, m)?)?;
    m.add_function(wrap_pyfunction!(corank_reduce, m)?)?;
    m.add_function(wrap_pyfunction!(check_corollary, m)?)?;
    m.add_function(wrap_pyfunction!(tensor_inner, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
