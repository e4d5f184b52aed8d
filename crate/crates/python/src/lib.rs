//! Python bindings: forms, presentations, rewrite systems and verification.
//!
//! Scalars cross the boundary as rational literal strings (`"-3/7"`) and
//! polynomials in canonical syntax (`"u[1,2]*s[2,1] - 1"`).

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use hopfw::hopf::{self, CheckItem, ProbeVerdict, Report};
use hopfw::rewrite::CompletionOptions;
use hopfw::{io, Matrix, MultilinearForm, NcPoly, Scalar, Strategy, Truncation};

fn value_error(e: hopfw::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn scalar(text: &str) -> PyResult<Scalar> {
    text.parse().map_err(value_error)
}

fn poly(text: &str) -> PyResult<NcPoly> {
    text.parse().map_err(value_error)
}

fn rows(m: &Matrix) -> Vec<Vec<String>> {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|c| c.to_string()).collect())
        .collect()
}

fn strategy(name: &str) -> PyResult<Strategy> {
    Strategy::from_name(name).ok_or_else(|| {
        PyValueError::new_err(format!(
            "unknown strategy {name:?}; use sugar, word or escalate"
        ))
    })
}

fn truncation(name: &str) -> PyResult<Truncation> {
    match name {
        "sugar" => Ok(Truncation::Sugar),
        "word" => Ok(Truncation::Word),
        _ => Err(PyValueError::new_err(format!(
            "unknown truncation {name:?}; use sugar or word"
        ))),
    }
}

/// `(name, verdict, instances, degree, detail)` per check.
type CheckRow = (String, String, usize, usize, String);

fn check_row(item: &CheckItem) -> CheckRow {
    (
        item.name.clone(),
        item.verdict.label().to_string(),
        item.instances,
        item.degree,
        item.detail.clone(),
    )
}

fn report_rows(report: &Report) -> Vec<CheckRow> {
    report.items.iter().map(check_row).collect()
}

/// A multilinear form with exact rational components.
#[pyclass(name = "Form", frozen, from_py_object)]
#[derive(Clone)]
struct PyForm {
    inner: MultilinearForm,
}

#[pymethods]
impl PyForm {
    /// Parse a JSON form file.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyForm {
            inner: io::parse_form(text).map_err(value_error)?,
        })
    }

    /// Build a form from `(index tuple, rational literal)` pairs with
    /// 1-based indices.
    #[new]
    fn new(dim: usize, arity: usize, entries: Vec<(Vec<usize>, String)>) -> PyResult<Self> {
        let entries = entries
            .into_iter()
            .map(|(idx, c)| Ok((idx, scalar(&c)?)))
            .collect::<PyResult<Vec<_>>>()?;
        Ok(PyForm {
            inner: MultilinearForm::from_entries(dim, arity, entries).map_err(value_error)?,
        })
    }

    #[staticmethod]
    fn signature(m: usize) -> PyResult<Self> {
        Ok(PyForm {
            inner: MultilinearForm::signature(m, m).map_err(value_error)?,
        })
    }

    #[staticmethod]
    fn orthogonal(n: usize, m: usize) -> PyResult<Self> {
        Ok(PyForm {
            inner: MultilinearForm::orthogonal(n, m).map_err(value_error)?,
        })
    }

    #[staticmethod]
    fn symplectic2() -> Self {
        PyForm {
            inner: MultilinearForm::symplectic2(),
        }
    }

    #[staticmethod]
    fn cyclic2() -> Self {
        PyForm {
            inner: MultilinearForm::cyclic2(),
        }
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn arity(&self) -> usize {
        self.inner.arity()
    }

    /// Nonzero components as `(index tuple, rational literal)` pairs.
    fn entries(&self) -> Vec<(Vec<usize>, String)> {
        self.inner
            .entries()
            .map(|(idx, c)| (idx.to_vec(), c.to_string()))
            .collect()
    }

    fn to_json(&self) -> String {
        io::write_form(&self.inner)
    }

    fn scale(&self, c: &str) -> PyResult<Self> {
        Ok(PyForm {
            inner: self.inner.scale(&scalar(c)?),
        })
    }

    /// Whether `self` lies in the polar affine space of `w`.
    fn is_polar_of(&self, w: &PyForm) -> bool {
        self.inner.is_polar_of(&w.inner)
    }

    /// The polar affine space as `(particular, kernel basis)`, or `None`.
    fn polar(&self) -> Option<(PyForm, Vec<PyForm>)> {
        let sol = self.inner.polar()?;
        let wrap = |inner| PyForm { inner };
        Some((
            wrap(sol.particular),
            sol.kernel_basis.into_iter().map(wrap).collect(),
        ))
    }

    /// Nondegeneracy, twisting element, preregularity and polar dimension.
    fn analyze<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let report = self.inner.analyze();
        let out = PyDict::new(py);
        out.set_item("nondegenerate", report.nondegenerate)?;
        out.set_item("condition_i_prime", self.inner.check_condition_i_prime())?;
        out.set_item("twisting_element", report.q.as_ref().map(rows))?;
        out.set_item("preregular", report.preregular)?;
        out.set_item("polar_dimension", self.inner.polar().map(|p| p.dimension()))?;
        Ok(out)
    }

    fn __eq__(&self, other: &PyForm) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "Form(dim={}, arity={}, nonzero={})",
            self.inner.dim(),
            self.inner.arity(),
            self.inner.nnz()
        )
    }
}

/// A finitely presented algebra, optionally with its Hopf structure.
#[pyclass(name = "Presentation", frozen)]
struct PyPresentation {
    inner: hopfw::Presentation,
}

#[pymethods]
impl PyPresentation {
    /// Build one of `bw`, `hb`, `hw`, `hww` from a form, or `ahmn` from `m`, `n`.
    #[staticmethod]
    #[pyo3(signature = (algebra, form=None, polar=None, m=None, n=None))]
    fn build(
        algebra: &str,
        form: Option<&PyForm>,
        polar: Option<&PyForm>,
        m: Option<usize>,
        n: Option<usize>,
    ) -> PyResult<Self> {
        let need_form = || {
            form.map(|f| &f.inner)
                .ok_or_else(|| PyValueError::new_err(format!("{algebra} needs a form")))
        };
        let inner = match algebra {
            "bw" => hopf::build_bw(need_form()?),
            "hb" => hopf::build_hb(need_form()?),
            "hw" => hopf::build_hw(need_form()?),
            "hww" => {
                let polar =
                    polar.ok_or_else(|| PyValueError::new_err("hww needs a polar element"))?;
                hopf::build_hww(need_form()?, &polar.inner)
            }
            "ahmn" => match (m, n) {
                (Some(m), Some(n)) => hopf::build_ahmn(m, n),
                _ => return Err(PyValueError::new_err("ahmn needs m and n")),
            },
            _ => {
                return Err(PyValueError::new_err(format!(
                    "unknown algebra {algebra:?}; use bw, hb, hw, hww or ahmn"
                )))
            }
        }
        .map_err(value_error)?;
        Ok(PyPresentation { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyPresentation {
            inner: io::parse_presentation(text).map_err(value_error)?,
        })
    }

    fn to_json(&self) -> String {
        io::write_presentation(&self.inner)
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn generators(&self) -> Vec<String> {
        self.inner.alphabet.iter().map(|g| g.to_string()).collect()
    }

    #[getter]
    fn relations(&self) -> Vec<String> {
        self.inner.relations.iter().map(|r| r.to_string()).collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Presentation({}, {} generators, {} relations)",
            self.inner.name,
            self.inner.alphabet.len(),
            self.inner.relations.len()
        )
    }
}

/// A rewrite system completed through a degree bound.
#[pyclass(name = "RewriteSystem", frozen)]
struct PyRewriteSystem {
    inner: hopfw::RewriteSystem,
}

#[pymethods]
impl PyRewriteSystem {
    #[staticmethod]
    #[pyo3(signature = (presentation, degree, truncation="sugar"))]
    fn complete(presentation: &PyPresentation, degree: usize, truncation: &str) -> PyResult<Self> {
        let options = CompletionOptions {
            truncation: self::truncation(truncation)?,
            ..CompletionOptions::default()
        };
        let p = &presentation.inner;
        Ok(PyRewriteSystem {
            inner: hopfw::RewriteSystem::complete_with(&p.alphabet, &p.relations, degree, &options)
                .map_err(value_error)?,
        })
    }

    #[staticmethod]
    fn from_dump(text: &str) -> PyResult<Self> {
        Ok(PyRewriteSystem {
            inner: hopfw::RewriteSystem::parse_dump(text).map_err(value_error)?,
        })
    }

    fn dump(&self) -> String {
        self.inner.dump()
    }

    /// Normal form modulo the whole ideal when saturated, at the degree
    /// bound otherwise.
    fn normal_form(&self, p: &str) -> PyResult<String> {
        let p = poly(p)?;
        let nf = if self.inner.is_saturated() {
            self.inner.saturated_normal_form(&p)
        } else {
            self.inner.normal_form(&p)
        };
        Ok(nf.map_err(value_error)?.to_string())
    }

    /// Membership in the degree-truncated ideal.
    fn ideal_member(&self, p: &str) -> PyResult<bool> {
        self.inner.ideal_member(&poly(p)?).map_err(value_error)
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.complete_through()
    }

    #[getter]
    fn saturated(&self) -> bool {
        self.inner.is_saturated()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// Identity and axiom checks against a presentation at a fixed degree.
#[pyclass(name = "Verifier", frozen)]
struct PyVerifier {
    inner: hopfw::Verifier,
}

#[pymethods]
impl PyVerifier {
    #[new]
    #[pyo3(signature = (presentation, degree, strategy="escalate"))]
    fn new(presentation: &PyPresentation, degree: usize, strategy: &str) -> PyResult<Self> {
        Ok(PyVerifier {
            inner: hopfw::Verifier::with_strategy(
                presentation.inner.clone(),
                degree,
                self::strategy(strategy)?,
            )
            .map_err(value_error)?,
        })
    }

    /// Each polynomial must vanish in the algebra.
    fn check_zero(&self, name: &str, polys: Vec<String>) -> PyResult<CheckRow> {
        let polys = polys
            .iter()
            .map(|p| poly(p))
            .collect::<PyResult<Vec<_>>>()?;
        Ok(check_row(&self.inner.check_zero(name, &polys)))
    }

    fn axioms(&self) -> PyResult<Vec<CheckRow>> {
        Ok(report_rows(&self.inner.axioms().map_err(value_error)?))
    }

    /// The derived identities of the universal algebra across the samples.
    fn universal_suite(&self, polars: Vec<PyForm>) -> PyResult<Vec<CheckRow>> {
        let polars: Vec<MultilinearForm> = polars.into_iter().map(|p| p.inner).collect();
        Ok(report_rows(
            &hopf::universal_suite(&self.inner, &polars).map_err(value_error)?,
        ))
    }

    fn normal_form(&self, p: &str) -> PyResult<String> {
        Ok(self
            .inner
            .best_normal_form(&poly(p)?)
            .map_err(value_error)?
            .to_string())
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }
}

/// Both homomorphisms between the orthogonal universal algebra and the
/// reflection presentation, plus the power identities for the antipode.
#[pyfunction]
#[pyo3(signature = (n, m, degree, strategy="escalate"))]
fn reflection_isomorphism(
    n: usize,
    m: usize,
    degree: usize,
    strategy: &str,
) -> PyResult<Vec<CheckRow>> {
    let report = hopf::reflection_isomorphism(n, m, degree, self::strategy(strategy)?)
        .map_err(value_error)?;
    Ok(report_rows(&report))
}

/// Both homomorphisms between the universal and bilinear algebras of a
/// bilinear form, plus both composites.
#[pyfunction]
#[pyo3(signature = (form, degree, strategy="escalate"))]
fn bilinear_identification(
    form: &PyForm,
    degree: usize,
    strategy: &str,
) -> PyResult<Vec<CheckRow>> {
    let report = hopf::bilinear_identification(&form.inner, degree, self::strategy(strategy)?)
        .map_err(value_error)?;
    Ok(report_rows(&report))
}

/// `(separates, certified, verdict text)` for the noninjectivity probe.
#[pyfunction]
fn noninjectivity_probe(
    form: &PyForm,
    polar: &PyForm,
    degree: usize,
) -> PyResult<(bool, bool, String)> {
    let probe =
        hopf::noninjectivity_probe(&form.inner, &polar.inner, degree).map_err(value_error)?;
    let certified = matches!(probe.verdict, ProbeVerdict::NoninjectiveCertified { .. });
    Ok((
        probe.witness.separates(),
        certified,
        probe.verdict.to_string(),
    ))
}

/// The polar multiple `(−1)^(m−1)/(m−1)!` of the signature form.
#[pyfunction]
fn signature_polar_scale(m: usize) -> String {
    MultilinearForm::signature_polar_scale(m).to_string()
}

#[pymodule]
fn hopfw_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyForm>()?;
    m.add_class::<PyPresentation>()?;
    m.add_class::<PyRewriteSystem>()?;
    m.add_class::<PyVerifier>()?;
    m.add_function(wrap_pyfunction!(reflection_isomorphism, m)?)?;
    m.add_function(wrap_pyfunction!(bilinear_identification, m)?)?;
    m.add_function(wrap_pyfunction!(noninjectivity_probe, m)?)?;
    m.add_function(wrap_pyfunction!(signature_polar_scale, m)?)?;
    Ok(())
}
