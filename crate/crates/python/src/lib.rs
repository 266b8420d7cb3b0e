//! Python bindings. Matrices cross the boundary as lists of rows of
//! integers, each integer the index of a field element.

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

use covermetric::analysis;
use covermetric::channel::{sample_error as draw_error, ErrorModel};
use covermetric::cover;
use covermetric::prange::{self, brute_force_decode};
use covermetric::{DecodeStatus, DecodingInstance, EnumCap, Error, Field, FieldElement, Mat, Seed};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io(io) => PyOSError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn field(q: u64) -> PyResult<Field> {
    Field::from_order(q).map_err(py_err)
}

fn to_mat(f: &Field, rows: &[Vec<u32>]) -> PyResult<Mat> {
    Mat::from_rows(f, rows).map_err(py_err)
}

fn from_mat(a: &Mat) -> Vec<Vec<u32>> {
    a.to_rows()
}

fn model(kind: &str, t: usize) -> PyResult<ErrorModel> {
    match kind {
        "simple" => Ok(ErrorModel::simple(t)),
        "general" => Ok(ErrorModel::general(t)),
        other => Err(PyValueError::new_err(format!("unknown error model {other:?}"))),
    }
}

/// Cover weight of a matrix with the rows and columns of one minimal cover.
#[pyfunction]
#[pyo3(signature = (matrix, q = 2))]
fn cover_weight(matrix: Vec<Vec<u32>>, q: u64) -> PyResult<(usize, Vec<usize>, Vec<usize>)> {
    let a = to_mat(&field(q)?, &matrix)?;
    let mc = cover::cover_weight(&a);
    Ok((mc.weight, mc.cover.rows().to_vec(), mc.cover.cols().to_vec()))
}

#[pyfunction]
#[pyo3(signature = (matrix, q = 2))]
fn is_unique_minimal_cover(matrix: Vec<Vec<u32>>, q: u64) -> PyResult<bool> {
    Ok(cover::is_unique_minimal_cover(&to_mat(&field(q)?, &matrix)?))
}

#[pyfunction]
#[pyo3(signature = (a, b, q = 2))]
fn cover_distance(a: Vec<Vec<u32>>, b: Vec<Vec<u32>>, q: u64) -> PyResult<usize> {
    let f = field(q)?;
    cover::cover_distance(&to_mat(&f, &a)?, &to_mat(&f, &b)?).map_err(py_err)
}

#[pyfunction]
fn sphere_size(q: u64, m: usize, n: usize, w: usize) -> PyResult<u64> {
    cover::sphere_size_exact(&field(q)?, m, n, w, EnumCap::default()).map_err(py_err)
}

#[pyfunction]
fn ball_size(q: u64, m: usize, n: usize, w: usize) -> PyResult<u64> {
    cover::ball_size_exact(&field(q)?, m, n, w, EnumCap::default()).map_err(py_err)
}

/// Error matrix of cover weight `t` from the simple or general model.
#[pyfunction]
#[pyo3(signature = (q, m, n, t, model = "simple", seed = 0))]
fn sample_error(q: u64, m: usize, n: usize, t: usize, model: &str, seed: u64) -> PyResult<Vec<Vec<u32>>> {
    let f = field(q)?;
    let e = draw_error(&f, m, n, &self::model(model, t)?, &mut Seed(seed).rng(), EnumCap::default())
        .map_err(py_err)?;
    Ok(from_mat(&e))
}

#[pyfunction]
fn optimal_split(m: usize, n: usize, k: usize) -> PyResult<(usize, usize)> {
    let s = prange::optimal_split(m, n, k).map_err(py_err)?;
    Ok((s.erased_rows, s.erased_cols))
}

/// Exact per-iteration success probability as a `fractions.Fraction`.
#[pyfunction]
fn success_probability(py: Python<'_>, m: usize, n: usize, k: usize, t: usize) -> PyResult<Py<PyAny>> {
    let sp = analysis::prange_success_probability(m, n, k, t, None).map_err(py_err)?;
    let fraction = py.import("fractions")?.getattr("Fraction")?;
    Ok(fraction
        .call1((sp.p_success.numer().clone(), sp.p_success.denom().clone()))?
        .unbind())
}

#[pyfunction]
fn entropy_q(q: u64, p: f64) -> PyResult<f64> {
    analysis::entropy_q(q, p).map_err(py_err)
}

#[pyfunction]
fn entropy_q_inverse(q: u64, y: f64) -> PyResult<f64> {
    analysis::entropy_q_inverse(q, y).map_err(py_err)
}

#[pyfunction]
fn c_cover(rate: f64, tau: f64) -> PyResult<f64> {
    analysis::c_cover(rate, tau).map_err(py_err)
}

#[pyfunction]
fn c_cover_gv(rate: f64) -> PyResult<f64> {
    analysis::c_cover_gv(rate).map_err(py_err)
}

/// A `k`-dimensional space of `m x n` matrices over GF(q).
#[pyclass(name = "MatrixCode", module = "covermetric", frozen)]
struct PyMatrixCode {
    inner: covermetric::MatrixCode,
}

#[pymethods]
impl PyMatrixCode {
    #[new]
    fn new(q: u64, generators: Vec<Vec<Vec<u32>>>) -> PyResult<Self> {
        let f = field(q)?;
        let gens = generators.iter().map(|g| to_mat(&f, g)).collect::<PyResult<Vec<_>>>()?;
        let (m, n) = gens
            .first()
            .map(Mat::shape)
            .ok_or_else(|| PyValueError::new_err("at least one generator is required"))?;
        let inner = covermetric::MatrixCode::new(&f, m, n, gens).map_err(py_err)?;
        Ok(PyMatrixCode { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (q, m, n, k, seed = 0))]
    fn random(q: u64, m: usize, n: usize, k: usize, seed: u64) -> PyResult<Self> {
        let inner = covermetric::MatrixCode::random(&field(q)?, m, n, k, &mut Seed(seed).rng()).map_err(py_err)?;
        Ok(PyMatrixCode { inner })
    }

    #[getter]
    fn q(&self) -> usize {
        self.inner.field().order()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    fn generators(&self) -> Vec<Vec<Vec<u32>>> {
        self.inner.generators().iter().map(from_mat).collect()
    }

    fn encode(&self, message: Vec<u16>) -> PyResult<Vec<Vec<u32>>> {
        let u: Vec<FieldElement> = message.into_iter().map(FieldElement).collect();
        Ok(from_mat(&self.inner.encode(&u).map_err(py_err)?))
    }

    fn contains(&self, matrix: Vec<Vec<u32>>) -> PyResult<bool> {
        Ok(self.inner.contains(&to_mat(self.inner.field(), &matrix)?))
    }

    fn min_distance(&self) -> PyResult<usize> {
        cover::min_distance(&self.inner, EnumCap::default()).map_err(py_err)
    }

    /// Prange-style decoding of `received` within cover distance `t`.
    #[pyo3(signature = (received, t, max_iterations = None, seed = 0))]
    fn decode(&self, received: Vec<Vec<u32>>, t: usize, max_iterations: Option<u64>, seed: u64) -> PyResult<DecodeResult> {
        let r = to_mat(self.inner.field(), &received)?;
        let inst = DecodingInstance::new(self.inner.clone(), r, t).map_err(py_err)?;
        let out = prange::prange_decode(&inst, max_iterations, Seed(seed)).map_err(py_err)?;
        Ok(DecodeResult {
            found: out.status == DecodeStatus::Found,
            codeword: out.codeword.as_ref().map(from_mat),
            iterations: out.iterations_used,
            residual_weight: out.residual_weight,
        })
    }

    /// Every codeword within cover distance `t`, by exhaustive encoding.
    fn brute_force_decode(&self, received: Vec<Vec<u32>>, t: usize) -> PyResult<Vec<Vec<Vec<u32>>>> {
        let r = to_mat(self.inner.field(), &received)?;
        let inst = DecodingInstance::new(self.inner.clone(), r, t).map_err(py_err)?;
        Ok(brute_force_decode(&inst, EnumCap::default())
            .map_err(py_err)?
            .iter()
            .map(from_mat)
            .collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "MatrixCode(q={}, m={}, n={}, k={})",
            self.q(),
            self.inner.m(),
            self.inner.n(),
            self.inner.k()
        )
    }
}

#[pyclass(module = "covermetric", frozen, get_all)]
struct DecodeResult {
    found: bool,
    codeword: Option<Vec<Vec<u32>>>,
    iterations: u64,
    residual_weight: Option<usize>,
}

#[pymethods]
impl DecodeResult {
    fn __repr__(&self) -> String {
        format!(
            "DecodeResult(found={}, iterations={}, residual_weight={:?})",
            self.found, self.iterations, self.residual_weight
        )
    }
}

#[pymodule]
#[pyo3(name = "covermetric")]
fn covermetric_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMatrixCode>()?;
    m.add_class::<DecodeResult>()?;
    m.add_function(wrap_pyfunction!(cover_weight, m)?)?;
    m.add_function(wrap_pyfunction!(is_unique_minimal_cover, m)?)?;
    m.add_function(wrap_pyfunction!(cover_distance, m)?)?;
    m.add_function(wrap_pyfunction!(sphere_size, m)?)?;
    m.add_function(wrap_pyfunction!(ball_size, m)?)?;
    m.add_function(wrap_pyfunction!(sample_error, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_split, m)?)?;
    m.add_function(wrap_pyfunction!(success_probability, m)?)?;
    m.add_function(wrap_pyfunction!(entropy_q, m)?)?;
    m.add_function(wrap_pyfunction!(entropy_q_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(c_cover, m)?)?;
    m.add_function(wrap_pyfunction!(c_cover_gv, m)?)?;
    Ok(())
}
