//! Python extension module exposing the main types and operations: field
//! contexts, matrices with absolute-order queries, Singer intervals, and
//! the closed-form counting functions they are checked against.

use absgl::absorder;
use absgl::gf::Fq;
use absgl::matfq::{self, Matrix};
use absgl::qseries::{self, Composition};
use absgl::singer::{self, IntervalModel, IntervalOptions};
use absgl::symoracle::{self, CycleType};
use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyType;
use std::collections::BTreeMap;

fn err(e: absgl::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// The finite field F_q, q = p^e, with its deterministic modulus and
/// primitive element.
#[pyclass(frozen, name = "FieldContext")]
struct PyField {
    inner: Fq,
}

#[pymethods]
impl PyField {
    #[new]
    fn new(p: u64, e: u32) -> PyResult<Self> {
        Ok(PyField { inner: Fq::new(p, e).map_err(err)? })
    }

    /// Parse a field name, "p" or "p^e".
    #[classmethod]
    fn parse(_cls: &Bound<'_, PyType>, name: &str) -> PyResult<Self> {
        Ok(PyField { inner: Fq::parse(name).map_err(err)? })
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.p()
    }

    #[getter]
    fn e(&self) -> u32 {
        self.inner.e()
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.q()
    }

    /// Modulus polynomial coefficients over F_p, constant term first.
    #[getter]
    fn modulus(&self) -> Vec<u64> {
        self.inner.modulus().to_vec()
    }

    /// Encoding of a fixed multiplicative generator of F_q.
    #[getter]
    fn generator(&self) -> u64 {
        self.inner.generator().0
    }

    fn name(&self) -> String {
        self.inner.name()
    }

    /// Multiplicative order of the element with the given encoding.
    fn element_order(&self, value: u64) -> PyResult<u64> {
        self.inner
            .element_order(self.inner.elem(value))
            .map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("FieldContext({})", self.inner.name())
    }
}

/// A square matrix over F_q. The field travels with the matrix, so
/// absolute-order queries are methods.
#[pyclass(frozen, name = "Matrix", from_py_object)]
#[derive(Clone)]
struct PyMatrix {
    fq: Fq,
    inner: Matrix,
}

impl PyMatrix {
    fn wrap(&self, inner: Matrix) -> PyMatrix {
        PyMatrix { fq: self.fq.clone(), inner }
    }

    fn check_same_field(&self, other: &PyMatrix) -> PyResult<()> {
        if self.fq != other.fq || self.inner.n() != other.inner.n() {
            return Err(PyValueError::new_err(
                "matrices live over different fields or sizes",
            ));
        }
        Ok(())
    }
}

#[pymethods]
impl PyMatrix {
    /// Parse the row;row;... format over the given field.
    #[new]
    fn new(field: &PyField, text: &str) -> PyResult<Self> {
        let inner = Matrix::parse(&field.inner, text).map_err(err)?;
        Ok(PyMatrix { fq: field.inner.clone(), inner })
    }

    #[classmethod]
    fn identity(_cls: &Bound<'_, PyType>, field: &PyField, n: usize) -> PyMatrix {
        PyMatrix { fq: field.inner.clone(), inner: Matrix::identity(&field.inner, n) }
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    /// Entries row by row, as integer encodings.
    fn entries(&self) -> Vec<Vec<u64>> {
        (0..self.inner.n())
            .map(|i| self.inner.row(i).iter().map(|e| e.0).collect())
            .collect()
    }

    fn mul(&self, other: &PyMatrix) -> PyResult<PyMatrix> {
        self.check_same_field(other)?;
        Ok(self.wrap(self.inner.mul(&other.inner, &self.fq)))
    }

    fn inverse(&self) -> PyResult<PyMatrix> {
        Ok(self.wrap(self.inner.inverse(&self.fq).map_err(err)?))
    }

    fn pow(&self, k: u64) -> PyMatrix {
        self.wrap(self.inner.pow(k, &self.fq))
    }

    fn rank(&self) -> usize {
        self.inner.rank(&self.fq)
    }

    fn is_invertible(&self) -> bool {
        self.inner.is_invertible(&self.fq)
    }

    fn is_identity(&self) -> bool {
        self.inner.is_identity()
    }

    /// Characteristic polynomial, coefficients as encodings, constant first.
    fn char_poly(&self) -> Vec<u64> {
        self.inner
            .char_poly(&self.fq)
            .coeffs()
            .iter()
            .map(|c| c.0)
            .collect()
    }

    /// Minimum number of reflections multiplying to this element; equals
    /// the codimension of the fixed space.
    fn reflection_length(&self) -> usize {
        absorder::reflection_length(&self.inner, &self.fq)
    }

    fn is_reflection(&self) -> bool {
        absorder::is_reflection(&self.inner, &self.fq)
    }

    fn is_regular_elliptic(&self) -> bool {
        singer::is_regular_elliptic(&self.inner, &self.fq)
    }

    /// Dimension of the fixed space ker(g - I).
    fn fixed_space_dim(&self) -> usize {
        matfq::fixed_space(&self.inner, &self.fq).dim()
    }

    /// Echelon basis of the fixed space, as rows of encodings.
    fn fixed_space_basis(&self) -> Vec<Vec<u64>> {
        matfq::fixed_space(&self.inner, &self.fq)
            .basis()
            .iter()
            .map(|row| row.iter().map(|e| e.0).collect())
            .collect()
    }

    /// The absolute order test self <= other.
    fn leq(&self, other: &PyMatrix) -> PyResult<bool> {
        self.check_same_field(other)?;
        Ok(absorder::abs_leq(&self.inner, &other.inner, &self.fq))
    }

    /// A minimal reflection factorization, as a list of matrices whose
    /// ordered product is this element.
    fn reduced_word(&self) -> Vec<PyMatrix> {
        absorder::reduced_word(&self.inner, &self.fq)
            .factors()
            .iter()
            .map(|t| self.wrap(t.clone()))
            .collect()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Matrix({:?}, {})", self.fq.name(), self.inner)
    }

    fn __eq__(&self, other: &PyMatrix) -> bool {
        self.fq == other.fq && self.inner == other.inner
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.inner.hash(&mut h);
        h.finish()
    }
}

/// The absolute order interval from the identity to a fixed-space-free top.
#[pyclass(frozen, name = "Interval")]
struct PyInterval {
    model: IntervalModel,
}

#[pymethods]
impl PyInterval {
    /// Build the interval below `top`, enumerating and filtering the group.
    #[new]
    #[pyo3(signature = (top, max_group_order = 10_000_000, threads = 1))]
    fn new(top: &PyMatrix, max_group_order: u64, threads: usize) -> PyResult<Self> {
        let opts = IntervalOptions { max_group_order, threads };
        let model = singer::build_interval_with(&top.inner, &top.fq, opts).map_err(err)?;
        Ok(PyInterval { model })
    }

    fn size(&self) -> usize {
        self.model.size()
    }

    fn rank_sizes(&self) -> Vec<usize> {
        self.model.rank_sizes()
    }

    fn top(&self) -> PyMatrix {
        PyMatrix { fq: self.model.field().clone(), inner: self.model.top().clone() }
    }

    /// Number of chains with the given rank jumps.
    fn flag(&self, alpha: Vec<usize>) -> PyResult<u64> {
        let alpha = Composition::new(alpha).map_err(err)?;
        self.model.flag_f(&alpha).map_err(err)
    }

    /// Number of maximal chains, (q^n - 1)^(n-1) for regular elliptic tops.
    fn maximal_chains(&self) -> u64 {
        let alpha = Composition::new(vec![1; self.model.n()]).expect("positive parts");
        self.model.flag_f(&alpha).expect("composition of n")
    }

    /// Mobius value mu(e, top) by poset recursion.
    fn mobius(&self) -> i64 {
        self.model.mobius()
    }

    /// |det| of the 0/1 incidence matrix between ranks 1 and n-1.
    fn incidence_det_abs(&self) -> BigInt {
        BigInt::from(singer::incidence_det_abs(&self.model))
    }

    /// The interval as a JSON string: elements by rank and cover pairs.
    fn export_json(&self) -> String {
        serde_json::to_string(&self.model.export()).expect("serializable")
    }

    fn __repr__(&self) -> String {
        format!(
            "Interval(n={}, q={}, size={})",
            self.model.n(),
            self.model.field().name(),
            self.model.size()
        )
    }
}

/// The deterministic Singer cycle of GL_n(F_q): companion matrix of the
/// first primitive degree-n polynomial.
#[pyfunction]
fn singer_cycle(field: &PyField, n: usize) -> PyResult<PyMatrix> {
    let inner = singer::singer_cycle(n, &field.inner).map_err(err)?;
    Ok(PyMatrix { fq: field.inner.clone(), inner })
}

/// Number of elements of GL_n(F_q) at rank k of the absolute order.
#[pyfunction]
fn rank_size(n: u64, k: u64, q: u64) -> BigInt {
    qseries::rank_size(n, k, q)
}

/// q^epsilon(alpha) * (q^n - 1)^(m - 1), the chain count below a regular
/// elliptic element with rank jumps alpha.
#[pyfunction]
fn flag_formula(alpha: Vec<usize>, q: u64) -> PyResult<BigInt> {
    let alpha = Composition::new(alpha).map_err(err)?;
    Ok(qseries::flag_formula(&alpha, q))
}

/// The alternating-sum Mobius value of a regular elliptic interval.
#[pyfunction]
fn mobius_formula(n: u64, q: u64) -> BigInt {
    qseries::mobius_formula(n, q)
}

/// Gaussian binomial coefficient.
#[pyfunction]
fn q_binomial(n: i64, k: i64, q: u64) -> BigInt {
    qseries::q_binomial(n, k, q)
}

/// |GL_n(F_q)|.
#[pyfunction]
fn gl_order(n: usize, q: u64) -> BigInt {
    BigInt::from(matfq::gl_order(n, q))
}

/// Number of k-subspaces U with dim(U ∩ cU) = d under a regular elliptic c.
#[pyfunction]
fn chen_tseng_g(n: u64, k: u64, d: u64, q: u64) -> PyResult<BigInt> {
    qseries::chen_tseng_g(n, k, d, q).map_err(err)
}

/// Number of common complements of two k-subspaces meeting in dimension d.
#[pyfunction]
fn co_complement_f(n: u64, k: u64, d: u64, q: u64) -> PyResult<BigInt> {
    qseries::co_complement_f(n, k, d, q).map_err(err)
}

/// The character polynomial P_k as {exponent: "num/den"}.
#[pyfunction]
fn pk_poly(n: u64, k: u64, q: u64) -> PyResult<BTreeMap<i64, String>> {
    Ok(qseries::pk_poly(n, k, q).map_err(err)?.to_json_map())
}

/// Brute-force count of additive factorizations of an n-cycle with the
/// given cycle types, together with the closed-form value.
#[pyfunction]
fn count_cactus(n: usize, types: Vec<Vec<usize>>) -> PyResult<(u64, BigInt)> {
    let list: Vec<CycleType> = types.into_iter().map(CycleType::new).collect();
    let count = symoracle::count_cactus(n, &list).map_err(err)?;
    let formula = symoracle::cactus_formula(n, &list);
    Ok((count, formula))
}

#[pymodule]
fn absgl_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyMatrix>()?;
    m.add_class::<PyInterval>()?;
    m.add_function(wrap_pyfunction!(singer_cycle, m)?)?;
    m.add_function(wrap_pyfunction!(rank_size, m)?)?;
    m.add_function(wrap_pyfunction!(flag_formula, m)?)?;
    m.add_function(wrap_pyfunction!(mobius_formula, m)?)?;
    m.add_function(wrap_pyfunction!(q_binomial, m)?)?;
    m.add_function(wrap_pyfunction!(gl_order, m)?)?;
    m.add_function(wrap_pyfunction!(chen_tseng_g, m)?)?;
    m.add_function(wrap_pyfunction!(co_complement_f, m)?)?;
    m.add_function(wrap_pyfunction!(pk_poly, m)?)?;
    m.add_function(wrap_pyfunction!(count_cactus, m)?)?;
    Ok(())
}
