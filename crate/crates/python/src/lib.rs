//! Python bindings for `lintaut`.
//!
//! Functions that take a formula accept either a `Formula` or its text.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use lintaut::balanced;
use lintaut::counts::{enumerate_count, CountTable, Sequence};
use lintaut::formula_gen::{self, Formulas};
use lintaut::ljt::{self, GenTaut};
use lintaut::term_gen::{self, Enumerator, Terms, TypedTerms};

#[pyclass(name = "Formula", module = "lintaut_py", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyFormula(lintaut::Formula);

#[pymethods]
impl PyFormula {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        lintaut::Formula::parse(text)
            .map(PyFormula)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Formula('{}')", self.0)
    }

    /// Number of `-o` nodes.
    #[getter]
    fn size(&self) -> usize {
        self.0.size()
    }

    #[getter]
    fn leaf_count(&self) -> usize {
        self.0.leaf_count()
    }

    fn is_balanced(&self) -> bool {
        self.0.is_balanced()
    }

    fn relabel_canonical(&self) -> Self {
        PyFormula(self.0.relabel_canonical())
    }

    /// `{atom: (positive, negative)}` occurrence counts.
    fn polarity_profile<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for (atom, c) in self.0.polarity_profile() {
            d.set_item(atom, (c.positive, c.negative))?;
        }
        Ok(d)
    }

    fn to_tree_latex(&self) -> String {
        self.0.to_tree_latex()
    }
}

#[pyclass(name = "Term", module = "lintaut_py", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyTerm(lintaut::Term);

fn open_term<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pymethods]
impl PyTerm {
    /// Parse the `l(x0,a(x0,x1))` notation.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        lintaut::Term::parse(text).map(PyTerm).map_err(open_term)
    }

    /// Parse de Bruijn postfix such as `"0 1 @ ^ ^"`.
    #[staticmethod]
    fn from_postfix(text: &str) -> PyResult<Self> {
        lintaut::Term::from_postfix_str(text).map(PyTerm).map_err(open_term)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Term('{}')", self.0)
    }

    /// Lambda nodes plus application nodes.
    #[getter]
    fn size(&self) -> usize {
        self.0.size()
    }

    #[getter]
    fn lambda_count(&self) -> usize {
        self.0.lambda_count()
    }

    #[getter]
    fn app_count(&self) -> usize {
        self.0.app_count()
    }

    fn is_closed(&self) -> bool {
        self.0.is_closed()
    }

    fn is_linear(&self) -> PyResult<bool> {
        self.0.is_linear().map_err(open_term)
    }

    fn is_affine(&self) -> PyResult<bool> {
        self.0.is_affine().map_err(open_term)
    }

    fn is_normal(&self) -> bool {
        self.0.is_normal()
    }

    fn skeleton(&self) -> String {
        self.0.skeleton().to_string()
    }

    fn to_postfix(&self) -> PyResult<String> {
        self.0.to_postfix_string().map_err(open_term)
    }

    fn to_lambda_notation(&self) -> String {
        self.0.to_lambda_notation()
    }

    fn to_tree_latex(&self) -> String {
        self.0.to_tree_latex()
    }

    /// Principal type, or `None` when the term is not simply typable.
    fn principal_type(&self) -> PyResult<Option<PyFormula>> {
        term_gen::infer_principal_type(&self.0)
            .map(|t| t.map(PyFormula))
            .map_err(open_term)
    }

    /// Whether `formula` is an instance of the term's principal type.
    fn has_type(&self, formula: &Bound<'_, PyAny>) -> PyResult<bool> {
        term_gen::has_type(&self.0, &formula_arg(formula)?).map_err(open_term)
    }
}

#[pyclass(name = "BalanceReport", module = "lintaut_py", frozen, get_all)]
struct PyBalanceReport {
    balanced: bool,
    pair_count: usize,
    n: usize,
}

#[pymethods]
impl PyBalanceReport {
    fn __repr__(&self) -> String {
        format!(
            "BalanceReport(balanced={}, pair_count={}, n={})",
            if self.balanced { "True" } else { "False" },
            self.pair_count,
            self.n
        )
    }
}

fn formula_arg(obj: &Bound<'_, PyAny>) -> PyResult<lintaut::Formula> {
    if let Ok(f) = obj.cast::<PyFormula>() {
        return Ok(f.get().0.clone());
    }
    let text: String = obj.extract()?;
    lintaut::Formula::parse(&text).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn sequence_arg(name: &str) -> PyResult<Sequence> {
    name.parse().map_err(PyValueError::new_err)
}

/// Proof term from the committed-choice LJT prover, possibly non-linear.
#[pyfunction]
fn prove_ipc(formula: &Bound<'_, PyAny>) -> PyResult<Option<PyTerm>> {
    Ok(ljt::prove_ipc(&formula_arg(formula)?).map(PyTerm))
}

/// The LJT proof if it is linear.
#[pyfunction]
fn prove_lin(formula: &Bound<'_, PyAny>) -> PyResult<Option<PyTerm>> {
    Ok(ljt::prove_lin(&formula_arg(formula)?).map(PyTerm))
}

/// The normal linear proof of a balanced formula.
#[pyfunction]
fn prove_balanced(formula: &Bound<'_, PyAny>) -> PyResult<Option<PyTerm>> {
    Ok(balanced::prove_balanced(&formula_arg(formula)?).map(PyTerm))
}

#[pyfunction]
fn analyze_balance(formula: &Bound<'_, PyAny>) -> PyResult<PyBalanceReport> {
    let r = balanced::analyze_balance(&formula_arg(formula)?);
    Ok(PyBalanceReport {
        balanced: r.balanced,
        pair_count: r.pair_count,
        n: r.n,
    })
}

#[pyclass(module = "lintaut_py")]
struct FormulaIter(Formulas);

#[pymethods]
impl FormulaIter {
    fn __iter__(slf: PyRef<'_, Self>) -> PyRef<'_, Self> {
        slf
    }

    fn __next__(mut slf: PyRefMut<'_, Self>) -> Option<PyFormula> {
        slf.0.next().map(PyFormula)
    }
}

#[pyclass(module = "lintaut_py")]
struct TermIter(Terms);

#[pymethods]
impl TermIter {
    fn __iter__(slf: PyRef<'_, Self>) -> PyRef<'_, Self> {
        slf
    }

    fn __next__(mut slf: PyRefMut<'_, Self>) -> Option<PyTerm> {
        slf.0.next().map(PyTerm)
    }
}

#[pyclass(module = "lintaut_py")]
struct TypedTermIter(TypedTerms);

#[pymethods]
impl TypedTermIter {
    fn __iter__(slf: PyRef<'_, Self>) -> PyRef<'_, Self> {
        slf
    }

    fn __next__(mut slf: PyRefMut<'_, Self>) -> Option<(PyTerm, PyFormula)> {
        slf.0.next().map(|(t, f)| (PyTerm(t), PyFormula(f)))
    }
}

#[pyclass(module = "lintaut_py")]
struct TautIter(GenTaut);

#[pymethods]
impl TautIter {
    fn __iter__(slf: PyRef<'_, Self>) -> PyRef<'_, Self> {
        slf
    }

    fn __next__(mut slf: PyRefMut<'_, Self>) -> Option<(PyFormula, PyTerm)> {
        slf.0.next().map(|(f, t)| (PyFormula(f), PyTerm(t)))
    }
}

/// Every canonically labeled formula with `n` implications.
#[pyfunction]
fn gen_formulas(n: usize) -> FormulaIter {
    FormulaIter(formula_gen::gen_formulas(n))
}

/// `(formula, term)` for every formula of size `n` with a linear LJT proof.
#[pyfunction]
fn gen_taut(n: usize) -> TautIter {
    TautIter(ljt::gen_taut(n))
}

/// Closed terms of one family (`almost-linear`, `linear`, `affine`, `nf`)
/// with `n` applications.
#[pyfunction]
fn terms(family: &str, n: usize) -> PyResult<TermIter> {
    let family = match sequence_arg(family)?.term_family() {
        Some(f) if f != term_gen::Family::Skeletons && f != term_gen::Family::TypedNormalForms => f,
        _ => return Err(PyValueError::new_err(format!("'{family}' is not a term family"))),
    };
    Ok(TermIter(Terms::from(Enumerator::new(family, n))))
}

/// `(term, principal type)` for every linear normal form with `n`
/// applications.
#[pyfunction]
fn typed_normal_forms(n: usize) -> TypedTermIter {
    TypedTermIter(term_gen::typed_normal_forms(n))
}

/// Count one family at one size by enumeration.
#[pyfunction]
fn count(py: Python<'_>, family: &str, size: usize) -> PyResult<u64> {
    let seq = sequence_arg(family)?;
    Ok(py.detach(|| enumerate_count(seq, size)))
}

/// The regression value for a family and size, if tabulated.
#[pyfunction]
fn expected_count(family: &str, size: usize) -> PyResult<Option<u64>> {
    Ok(CountTable::default().lookup(sequence_arg(family)?, size).map(|e| e.count))
}

/// Catalan(n) * Bell(n + 1), without enumeration.
#[pyfunction]
fn count_formulas(n: usize) -> PyResult<num_bigint::BigUint> {
    formula_gen::count_formulas(n).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn lintaut_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFormula>()?;
    m.add_class::<PyTerm>()?;
    m.add_class::<PyBalanceReport>()?;
    m.add_function(wrap_pyfunction!(prove_ipc, m)?)?;
    m.add_function(wrap_pyfunction!(prove_lin, m)?)?;
    m.add_function(wrap_pyfunction!(prove_balanced, m)?)?;
    m.add_function(wrap_pyfunction!(analyze_balance, m)?)?;
    m.add_function(wrap_pyfunction!(gen_formulas, m)?)?;
    m.add_function(wrap_pyfunction!(gen_taut, m)?)?;
    m.add_function(wrap_pyfunction!(terms, m)?)?;
    m.add_function(wrap_pyfunction!(typed_normal_forms, m)?)?;
    m.add_function(wrap_pyfunction!(count, m)?)?;
    m.add_function(wrap_pyfunction!(expected_count, m)?)?;
    m.add_function(wrap_pyfunction!(count_formulas, m)?)?;
    Ok(())
}
