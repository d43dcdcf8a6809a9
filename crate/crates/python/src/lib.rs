use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use sharpdom::cli::{self, CommandLine};
use sharpdom::literal::{self, parse_domain, parse_exact_real, parse_expr, DomainSpec, IdealLiteral};
use sharpdom::valuation::{Completeness, Topology};
use sharpdom::{IdealArithmetic, QuadraticDomain, ValuationDomain, ValueGroup};

fn py_err(e: sharpdom::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// The order Z[sqrt d].
#[pyclass(name = "QuadraticOrder", frozen)]
struct PyQuadraticOrder {
    domain: QuadraticDomain,
}

#[pymethods]
impl PyQuadraticOrder {
    #[new]
    fn new(d: i64) -> PyResult<Self> {
        Ok(PyQuadraticOrder {
            domain: QuadraticDomain::with_d(d).map_err(py_err)?,
        })
    }

    fn ideal(&self, literal: &str) -> PyResult<PyQuadIdeal> {
        let ideal = self.domain.parse_ideal(literal).map_err(py_err)?;
        Ok(PyQuadIdeal { ideal })
    }

    fn unit(&self) -> PyQuadIdeal {
        PyQuadIdeal {
            ideal: self.domain.unit(),
        }
    }

    fn is_maximal(&self) -> bool {
        self.domain.order.is_maximal()
    }

    /// Integral ideals of norm at most `bound`.
    fn ideals(&self, bound: u64) -> PyResult<Vec<PyQuadIdeal>> {
        let all = self.domain.universe(bound).map_err(py_err)?;
        Ok(all.into_iter().map(|ideal| PyQuadIdeal { ideal }).collect())
    }

    fn __repr__(&self) -> String {
        format!("QuadraticOrder({})", self.domain.order.d())
    }
}

/// A fractional ideal of a quadratic order, in canonical form.
#[pyclass(name = "QuadIdeal", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyQuadIdeal {
    ideal: sharpdom::QuadIdeal,
}

impl PyQuadIdeal {
    fn same_order(&self, other: &PyQuadIdeal) -> PyResult<()> {
        if self.ideal.order() == other.ideal.order() {
            Ok(())
        } else {
            Err(PyValueError::new_err("ideals belong to different orders"))
        }
    }

    fn wrap(ideal: sharpdom::QuadIdeal) -> Self {
        PyQuadIdeal { ideal }
    }
}

#[pymethods]
impl PyQuadIdeal {
    fn __mul__(&self, other: &PyQuadIdeal) -> PyResult<Self> {
        self.same_order(other)?;
        Ok(Self::wrap(self.ideal.mul(&other.ideal)))
    }

    /// Fractional colon `self : other`.
    fn colon(&self, other: &PyQuadIdeal) -> PyResult<Self> {
        self.same_order(other)?;
        Ok(Self::wrap(self.ideal.colon(&other.ideal)))
    }

    fn __add__(&self, other: &PyQuadIdeal) -> PyResult<Self> {
        self.same_order(other)?;
        Ok(Self::wrap(self.ideal.add(&other.ideal)))
    }

    fn intersect(&self, other: &PyQuadIdeal) -> PyResult<Self> {
        self.same_order(other)?;
        Ok(Self::wrap(self.ideal.intersect(&other.ideal)))
    }

    /// `other ⊆ self`.
    fn contains(&self, other: &PyQuadIdeal) -> PyResult<bool> {
        self.same_order(other)?;
        Ok(self.ideal.contains(&other.ideal))
    }

    fn inverse(&self) -> Self {
        Self::wrap(self.ideal.inverse())
    }

    fn v_closure(&self) -> Self {
        Self::wrap(self.ideal.v_closure())
    }

    fn is_invertible(&self) -> bool {
        self.ideal.is_invertible()
    }

    /// Norm as a string, e.g. `"2"` or `"1/4"`.
    fn norm(&self) -> String {
        self.ideal.norm().to_string()
    }

    fn __str__(&self) -> String {
        self.ideal.to_string()
    }

    fn __repr__(&self) -> String {
        format!("QuadIdeal({:?}, d={})", self.ideal.to_string(), self.ideal.order().d())
    }
}

/// A valuation domain given by generators of its value group.
#[pyclass(name = "ValuationDomain", frozen)]
struct PyValuationDomain {
    domain: ValuationDomain,
}

#[pymethods]
impl PyValuationDomain {
    #[new]
    fn new(generators: Vec<String>) -> PyResult<Self> {
        let gens = generators
            .iter()
            .map(|g| parse_exact_real(g))
            .collect::<Result<Vec<_>, _>>()
            .map_err(py_err)?;
        let group = ValueGroup::new(gens).map_err(py_err)?;
        Ok(PyValuationDomain {
            domain: ValuationDomain::new(group),
        })
    }

    /// Parse `cut(<real>, weak|strict)`.
    fn cut(&self, literal: &str) -> PyResult<PyCut> {
        let cut = self.domain.parse_ideal(literal).map_err(py_err)?;
        Ok(PyCut { cut })
    }

    fn mul(&self, a: &PyCut, b: &PyCut) -> PyCut {
        PyCut {
            cut: self.domain.mul(&a.cut, &b.cut),
        }
    }

    fn colon(&self, a: &PyCut, b: &PyCut) -> PyCut {
        PyCut {
            cut: self.domain.colon(&a.cut, &b.cut),
        }
    }

    fn v_closure(&self, a: &PyCut) -> PyCut {
        PyCut {
            cut: self.domain.v_closure(&a.cut),
        }
    }

    fn is_invertible(&self, a: &PyCut) -> bool {
        self.domain.is_invertible(&a.cut)
    }

    /// `(rank, topology, completeness, predicted_sharp)`.
    fn diagnose(&self) -> (usize, &'static str, &'static str, bool) {
        let d = self.domain.group.diagnose();
        let topology = match d.topology {
            Topology::Discrete => "discrete",
            Topology::Dense => "dense",
        };
        let completeness = match d.completeness {
            Completeness::Complete => "complete",
            Completeness::Incomplete => "incomplete",
        };
        (d.rank, topology, completeness, d.predicted_sharp)
    }

    fn __repr__(&self) -> String {
        format!("ValuationDomain({})", self.domain.group)
    }
}

/// A cut ideal `{g >= γ}` (weak) or `{g > γ}` (strict).
#[pyclass(name = "Cut", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyCut {
    cut: sharpdom::CutIdeal,
}

#[pymethods]
impl PyCut {
    #[getter]
    fn gamma(&self) -> String {
        self.cut.gamma().to_string()
    }

    #[getter]
    fn kind(&self) -> String {
        self.cut.kind().to_string()
    }

    fn __str__(&self) -> String {
        self.cut.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Cut({:?})", self.cut.to_string())
    }
}

/// Run a `sharpcheck` subcommand with `--json` and return
/// `(exit_code, json_text)`.
fn run_json(args: Vec<String>) -> PyResult<(i32, String)> {
    let mut argv = vec!["sharpcheck".to_string()];
    argv.extend(args);
    argv.push("--json".into());
    let cmd: CommandLine = cli::parse(argv).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let outcome = cli::run(&cmd).map_err(py_err)?;
    Ok((outcome.code, outcome.stdout))
}

fn with_budget(mut args: Vec<String>, budget: Option<u64>) -> Vec<String> {
    if let Some(b) = budget {
        args.push("--budget".into());
        args.push(b.to_string());
    }
    args
}

/// Evaluate an ideal expression; returns the canonical literal.
#[pyfunction]
fn eval(domain: &str, expr: &str) -> PyResult<String> {
    fn on<D: IdealLiteral>(d: &D, expr: &str) -> PyResult<String> {
        let e = parse_expr(d, expr).map_err(py_err)?;
        Ok(literal::eval(d, &e).to_string())
    }
    match parse_domain(domain).map_err(py_err)? {
        DomainSpec::Quad(order) => on(&QuadraticDomain::new(order), expr),
        DomainSpec::Val(group) => on(&ValuationDomain::new(group), expr),
    }
}

/// Report JSON of the colon criterion on one pair.
#[pyfunction]
fn check_pair(domain: &str, i: &str, h: &str) -> PyResult<String> {
    Ok(run_json(vec!["check-pair".into(), domain.into(), i.into(), h.into()])?.1)
}

/// Report JSON of the brute-force factorization search.
#[pyfunction]
fn check_def(domain: &str, i: &str, a: &str, b: &str) -> PyResult<String> {
    Ok(run_json(vec!["check-def".into(), domain.into(), i.into(), a.into(), b.into()])?.1)
}

/// Bundle JSON of the sweep reports.
#[pyfunction]
#[pyo3(signature = (domain, budget=None))]
fn sweep(domain: &str, budget: Option<u64>) -> PyResult<String> {
    Ok(run_json(with_budget(vec!["sweep".into(), domain.into()], budget))?.1)
}

#[pyfunction]
fn diagnose(domain: &str) -> PyResult<String> {
    Ok(run_json(vec!["diagnose".into(), domain.into()])?.1)
}

#[pymodule]
fn pysharpdom(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyQuadraticOrder>()?;
    m.add_class::<PyQuadIdeal>()?;
    m.add_class::<PyValuationDomain>()?;
    m.add_class::<PyCut>()?;
    m.add_function(wrap_pyfunction!(eval, m)?)?;
    m.add_function(wrap_pyfunction!(check_pair, m)?)?;
    m.add_function(wrap_pyfunction!(check_def, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(diagnose, m)?)?;
    Ok(())
}
