//! Python bindings: propositions, types, terms, proofs and values, with
//! checking, extraction, evaluation and the soundness harness.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use mrx::harness::{self, SoundnessConfig};
use mrx::kernel::{self, check_value, enumerate, normalise, Binders, Env, Evaluator};
use mrx::logic::{self, Checker, DEFAULT_NAT_BOUND};
use mrx::prop::{self, element};
use mrx::realisability::{self, Variant as CoreVariant};
use mrx::surface::{self, PropDisplay};

fn invalid(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn failed(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn variant(name: &str) -> PyResult<CoreVariant> {
    name.parse()
        .map_err(|_| invalid(format!("unknown variant `{name}`")))
}

/// A small type of the underlying type theory.
#[pyclass(frozen, eq, from_py_object, module = "mrx")]
#[derive(Clone, PartialEq)]
pub struct Ty(kernel::Ty);

#[pymethods]
impl Ty {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Ty> {
        surface::parse_ty(text).map(Ty).map_err(invalid)
    }

    /// Listing form, `Nat × (Nat × Unit)`.
    fn listing(&self) -> String {
        surface::print_listing_ty(&self.0)
    }

    /// Elements with `Nat` truncated at `nat_bound`.
    #[pyo3(signature = (nat_bound = DEFAULT_NAT_BOUND))]
    fn elements(&self, nat_bound: u64) -> PyResult<Vec<Value>> {
        let all = enumerate(&self.0, nat_bound).map_err(failed)?;
        Ok(all.values.into_iter().map(Value).collect())
    }

    #[pyo3(signature = (nat_bound = DEFAULT_NAT_BOUND))]
    fn inhabitant(&self, nat_bound: u64) -> PyResult<Option<Value>> {
        let found = realisability::decide_inhabited(&self.0, nat_bound).map_err(failed)?;
        Ok(found.map(Value))
    }

    fn __contains__(&self, v: &Value) -> bool {
        check_value(&v.0, &self.0)
    }

    fn __str__(&self) -> String {
        surface::print_ty(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("Ty({})", self.listing())
    }
}

/// A closed canonical value.
#[pyclass(frozen, eq, from_py_object, module = "mrx")]
#[derive(Clone, PartialEq)]
pub struct Value(kernel::Value);

#[pymethods]
impl Value {
    fn as_int(&self) -> Option<u64> {
        self.0.as_nat()
    }

    fn term(&self) -> Term {
        Term(kernel::Term::quote(&self.0))
    }

    fn __str__(&self) -> String {
        surface::print_value(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("Value({})", surface::print_value(&self.0))
    }
}

/// A term, written as an S-expression or a listing.
#[pyclass(frozen, eq, from_py_object, module = "mrx")]
#[derive(Clone, PartialEq)]
pub struct Term(kernel::Term);

#[pymethods]
impl Term {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Term> {
        surface::parse_term(text).map(Term).map_err(invalid)
    }

    /// Parse the listing syntax, `λs.<s; e>`.
    #[staticmethod]
    fn parse_listing(text: &str) -> PyResult<Term> {
        surface::parse_program(text).map(Term).map_err(invalid)
    }

    fn listing(&self) -> String {
        surface::print_program(&self.0)
    }

    fn eval(&self) -> PyResult<Value> {
        self.run().map(|(v, _)| v)
    }

    /// Value and number of evaluation steps.
    fn eval_counted(&self) -> PyResult<(Value, u64)> {
        self.run()
    }

    /// Apply a closed function term to arguments.
    fn __call__(&self, args: Vec<Term>) -> PyResult<Value> {
        let t = args
            .into_iter()
            .fold(self.0.clone(), |f, a| kernel::Term::app(f, a.0));
        Term(t).eval()
    }

    fn normalise(&self, ty: &Ty) -> PyResult<Term> {
        normalise(&self.0, &ty.0).map(Term).map_err(failed)
    }

    fn count_rec(&self) -> usize {
        self.0.count_rec()
    }

    fn __str__(&self) -> String {
        surface::print_term(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("Term({})", self.listing())
    }
}

impl Term {
    fn run(&self) -> PyResult<(Value, u64)> {
        if !self.0.is_closed() {
            return Err(invalid("the term has free variables"));
        }
        let mut ev = Evaluator::new();
        let v = ev.eval(&self.0, &Env::new()).map_err(failed)?;
        Ok((Value(v), ev.steps()))
    }
}

/// A proposition of the many-sorted logic.
#[pyclass(frozen, eq, from_py_object, module = "mrx")]
#[derive(Clone, PartialEq)]
pub struct Prop(prop::Prop);

#[pymethods]
impl Prop {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Prop> {
        surface::parse_prop(text).map(Prop).map_err(invalid)
    }

    /// Propositions-as-types translation.
    fn tp(&self) -> Ty {
        Ty(prop::tp(&self.0))
    }

    fn cr(&self) -> Ty {
        Ty(prop::cr(&self.0))
    }

    fn cr_prime(&self) -> Ty {
        Ty(prop::cr_prime(&self.0))
    }

    fn element(&self) -> Value {
        Value(element(&self.0))
    }

    /// Realisability type of this proposition at a realiser.
    #[pyo3(signature = (realiser, variant = "mr"))]
    fn mr_type(&self, realiser: &Value, variant: &str) -> PyResult<Ty> {
        let ty = realisability::mr_type_for(&self.0, &realiser.0, self::variant(variant)?)
            .map_err(failed)?;
        Ok(Ty(ty))
    }

    /// Unicode rendering, `∀s:Nat. ∃x:Nat. Holds(x = s)`.
    fn display(&self) -> String {
        PropDisplay::default().prop(&self.0)
    }

    fn __str__(&self) -> String {
        surface::print_prop(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("Prop({})", self.display())
    }
}

/// A proof tree of the sequent calculus.
#[pyclass(frozen, eq, from_py_object, module = "mrx")]
#[derive(Clone, PartialEq)]
pub struct Proof(logic::Proof);

#[pymethods]
impl Proof {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Proof> {
        surface::parse_proof(text).map(Proof).map_err(invalid)
    }

    /// The proved sequent as `(antecedent, succedent)`.
    #[pyo3(signature = (nat_bound = DEFAULT_NAT_BOUND))]
    fn check(&self, nat_bound: u64) -> PyResult<(Prop, Prop)> {
        let s = Checker::new(nat_bound).check(&self.0).map_err(failed)?;
        Ok((Prop(s.antecedent), Prop(s.succedent)))
    }

    #[pyo3(signature = (variant = "mr", nat_bound = DEFAULT_NAT_BOUND))]
    fn extract(&self, variant: &str, nat_bound: u64) -> PyResult<Extraction> {
        let v = self::variant(variant)?;
        let res = logic::extract_checked(&self.0, v, &Checker::new(nat_bound)).map_err(failed)?;
        Ok(Extraction(res))
    }

    fn __str__(&self) -> String {
        surface::print_proof(&self.0)
    }
}

/// The realiser extracted from a checked proof.
#[pyclass(frozen, module = "mrx")]
pub struct Extraction(logic::ExtractionResult);

#[pymethods]
impl Extraction {
    #[getter]
    fn antecedent(&self) -> Prop {
        Prop(self.0.sequent.antecedent.clone())
    }

    #[getter]
    fn succedent(&self) -> Prop {
        Prop(self.0.sequent.succedent.clone())
    }

    #[getter]
    fn variant(&self) -> &'static str {
        self.0.variant.as_str()
    }

    /// The realiser in normal form.
    fn realiser(&self) -> PyResult<Term> {
        let ty = self.0.variant.crude(&self.0.sequent.as_implication());
        normalise(&self.0.program, &ty).map(Term).map_err(failed)
    }

    /// Brute-force check of the realisability predicate.
    #[pyo3(signature = (nat_bound = DEFAULT_NAT_BOUND))]
    fn verify(&self, nat_bound: u64) -> PyResult<bool> {
        Ok(self.0.verify(nat_bound).map_err(failed)?.passes())
    }
}

/// Check every proof of a source text; returns `(name, sequent)` pairs.
#[pyfunction]
#[pyo3(signature = (text, nat_bound = DEFAULT_NAT_BOUND))]
fn check_source(text: &str, nat_bound: u64) -> PyResult<Vec<(String, String)>> {
    let file = surface::parse(text).map_err(invalid)?;
    let checker = Checker::new(nat_bound);
    let display = PropDisplay::new(&file.defs);
    file.proofs()
        .map(|(name, proof, _, _)| {
            let s = checker
                .check(proof)
                .map_err(|e| failed(format!("{name}: {e}")))?;
            Ok((name.to_string(), display.sequent(&s)))
        })
        .collect()
}

/// Extract every directive of a source text. Each result has `goal`,
/// `sequent`, `realiser` and, for `∀∃` goals, `program`.
#[pyfunction]
#[pyo3(signature = (text, variant = "mr", nat_bound = DEFAULT_NAT_BOUND))]
fn extract_source<'py>(
    py: Python<'py>,
    text: &str,
    variant: &str,
    nat_bound: u64,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let file = surface::parse(text).map_err(invalid)?;
    let display = PropDisplay::new(&file.defs);
    let done = mrx::cli::extract_file(&file, self::variant(variant)?, nat_bound)
        .map_err(|(_, e)| failed(e))?;
    done.into_iter()
        .map(|x| {
            let d = PyDict::new(py);
            d.set_item("goal", &x.goal)?;
            d.set_item("sequent", display.sequent(&x.sequent))?;
            d.set_item("realiser", Term(x.realiser))?;
            if let Some((p, _, _)) = x.program {
                d.set_item("program", Term(p))?;
            }
            Ok(d)
        })
        .collect()
}

/// Run the brute-force soundness harness and return its report.
#[pyfunction]
#[pyo3(signature = (variant = "mr", depth = 3, domain_size = 2, nat_bound = DEFAULT_NAT_BOUND, seed = 0, propositions = 600))]
fn soundness<'py>(
    py: Python<'py>,
    variant: &str,
    depth: usize,
    domain_size: u32,
    nat_bound: u64,
    seed: u64,
    propositions: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let config = SoundnessConfig {
        variant: self::variant(variant)?,
        depth,
        domain_size,
        nat_bound,
        seed,
        propositions,
        ..SoundnessConfig::default()
    };
    let report = py.detach(|| harness::soundness(&config));
    py.import("json")?
        .call_method1("loads", (report.to_json(),))
}

#[pymodule]
#[pyo3(name = "mrx")]
fn mrx_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Ty>()?;
    m.add_class::<Value>()?;
    m.add_class::<Term>()?;
    m.add_class::<Prop>()?;
    m.add_class::<Proof>()?;
    m.add_class::<Extraction>()?;
    m.add_function(wrap_pyfunction!(check_source, m)?)?;
    m.add_function(wrap_pyfunction!(extract_source, m)?)?;
    m.add_function(wrap_pyfunction!(soundness, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variants_parse() {
        assert_eq!(variant("mrp").unwrap(), CoreVariant::MrPrime);
        assert!(variant("nope").is_err());
    }

    #[test]
    fn terms_evaluate() {
        let t = Term::parse_listing("rec (λz.Nat) 3 zero (λx.λy.succ y)").unwrap();
        let (v, steps) = t.eval_counted().unwrap();
        assert_eq!(v.as_int(), Some(3));
        assert!(steps > 0);
    }

    #[test]
    fn identity_extracts() {
        let p = Proof::parse("(id (atom unit))").unwrap();
        let x = p.extract("mr", DEFAULT_NAT_BOUND).unwrap();
        assert_eq!(x.realiser().unwrap().listing(), "λs.s");
        assert!(x.verify(DEFAULT_NAT_BOUND).unwrap());
    }
}
