//! Realisers for proofs: the crude program, its truth component and the
//! realisability witness built along the soundness argument.

use std::sync::Arc;

use crate::kernel::enumerate::{check_value_bounded, enumerate, CheckReport, KernelError};
use crate::kernel::eval::{EvalError, Evaluator};
use crate::kernel::syntax::{Binders, Term, Ty};
use crate::kernel::value::{Env, Value};
use crate::prop::{element_term, tp, Prop};
use crate::realisability::{correct_unchecked, decide_inhabited, mr_type_for, Variant};

use super::check::{conclusion, Checker};
use super::proof::{Proof, Sequent};
use super::LogicError;

/// What a proof is translated into.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// A function `tp(A) → tp(B)`.
    Truth,
    /// A realiser `crude(A) → crude(B)`.
    Crude(Variant),
}

/// Translate `p : A ⊢ B` into a term of type `A → B` under the chosen
/// reading. The term is open in the variables bound around `p`.
pub fn translate(p: &Proof, mode: Mode) -> Result<Term, LogicError> {
    use Term as T;
    let v = T::Var;
    let sub = |q: &Proof| translate(q, mode);
    let prime = mode == Mode::Crude(Variant::MrPrime);
    let tag = |t: Term| if prime { T::inr(t) } else { t };
    Ok(match p {
        Proof::Identity(_) => T::lam(v(0)),
        Proof::Cut(l, r) => T::lam(T::app(sub(r)?.shift(1), T::app(sub(l)?.shift(1), v(0)))),
        Proof::InhabitedAtom { witness, .. } => match mode {
            Mode::Truth => T::lam(witness.shift(1)),
            Mode::Crude(_) => T::lam(T::Elt),
        },
        Proof::AndElimL(..) => T::lam(T::fst(v(0))),
        Proof::AndElimR(..) => T::lam(T::snd(v(0))),
        Proof::AndIntro(l, r) => T::lam(T::pair(
            T::app(sub(l)?.shift(1), v(0)),
            T::app(sub(r)?.shift(1), v(0)),
        )),
        Proof::WeakAbsurd(_) => match mode {
            Mode::Truth => T::lam(T::absurd(v(0))),
            Mode::Crude(_) => T::lam(T::Elt),
        },
        Proof::OrIntroL(..) => T::lam(T::inl(v(0))),
        Proof::OrIntroR(..) => T::lam(T::inr(v(0))),
        Proof::OrElim(l, r) => T::lam(T::case(
            v(0),
            T::app(sub(l)?.shift(2), v(0)),
            T::app(sub(r)?.shift(2), v(0)),
        )),
        Proof::ImpIntro(q) => T::lam(T::lam(T::app(sub(q)?.shift(2), T::pair(v(1), v(0))))),
        Proof::ImpElim(q) => T::lam(T::app(T::app(sub(q)?.shift(1), T::fst(v(0))), T::snd(v(0)))),
        Proof::ForallIntro { body, .. } => {
            T::lam(T::lam(T::app(sub(body)?.shift_from(1, 1), v(1))))
        }
        Proof::ForallElim { premise, term } => {
            T::lam(T::app(T::app(sub(premise)?.shift(1), v(0)), term.shift(1)))
        }
        Proof::ExistsElim { body, .. } => {
            let b = sub(body)?.map_free(&|i| if i == 0 { T::fst(v(0)) } else { v(i) });
            let open = T::app(b, T::snd(v(0)));
            if prime {
                let fallback = element_term(&conclusion(body)?.succedent);
                T::lam(T::case(v(0), fallback, open.shift_from(1, 1)))
            } else {
                T::lam(open)
            }
        }
        Proof::ExistsInv { premise, term } => T::lam(T::app(
            sub(premise)?.shift(1),
            tag(T::pair(term.shift(1), v(0))),
        )),
        Proof::ExistsIntro { term, .. } => T::lam(tag(T::pair(term.shift(1), v(0)))),
        Proof::FullAbsurd(a) => match mode {
            Mode::Truth => T::lam(T::absurd(v(0))),
            Mode::Crude(Variant::MrPrime) => T::lam(element_term(a)),
            Mode::Crude(_) => return Err(LogicError::UsesFullAbsurd),
        },
        Proof::Induction(family) => {
            let motive = match mode {
                Mode::Truth => tp(family),
                Mode::Crude(variant) => variant.crude(family),
            };
            let step = T::app(T::app(T::snd(v(3)), v(1)), v(0));
            T::lam(T::lam(T::rec(
                motive.shift_from(1, 2),
                v(0),
                T::fst(v(1)),
                step,
            )))
        }
        Proof::Choice {
            family, default, ..
        } => {
            let at = if prime {
                let Some(b0) = default else {
                    return Err(LogicError::MissingDefault);
                };
                let fallback = T::pair(b0.shift(3), element_term(family));
                T::case(T::app(v(1), v(0)), fallback, v(0))
            } else {
                T::app(v(1), v(0))
            };
            T::lam(tag(T::pair(T::lam(T::fst(at.clone())), T::lam(T::snd(at)))))
        }
        Proof::TrivialTransfer {
            prefix, evidence, ..
        } => match mode {
            Mode::Truth => T::lam(evidence.shift(1)),
            Mode::Crude(_) => T::lam(T::lams(prefix.len() + 1, T::Elt)),
        },
    })
}

fn native_err(e: impl ToString) -> EvalError {
    EvalError::Native(e.to_string())
}

/// Builds realisability witnesses by following the soundness argument rule
/// by rule.
#[derive(Clone, Copy)]
struct Builder {
    variant: Variant,
}

impl Builder {
    fn value(
        &self,
        p: &Proof,
        mode: Mode,
        rho: &Env,
        ev: &mut Evaluator,
    ) -> Result<Value, EvalError> {
        let t = translate(p, mode).map_err(native_err)?;
        ev.eval(&t, rho)
    }

    fn realiser(&self, p: &Proof, rho: &Env, ev: &mut Evaluator) -> Result<Value, EvalError> {
        self.value(p, Mode::Crude(self.variant), rho, ev)
    }

    fn correctness(&self, s: &Prop, rho: &Env, r: &Value, w: &Value) -> Result<Value, EvalError> {
        let closed = s.close_with(&rho.to_vec());
        correct_unchecked(&closed, r, w, self.variant).map_err(native_err)
    }

    /// Given `s` realising the antecedent of `p` with witness `m`, a witness
    /// that the realiser of `p` applied to `s` realises the succedent.
    fn transform(
        self,
        p: &Arc<Proof>,
        rho: &Env,
        s: Value,
        m: Value,
        ev: &mut Evaluator,
    ) -> Result<Value, EvalError> {
        let pair_parts = |v: &Value| -> Result<(Value, Value), EvalError> {
            match v {
                Value::Pair(x, y) => Ok(((**x).clone(), (**y).clone())),
                v => Err(EvalError::StuckTerm(format!(
                    "expected a pair, found {v:?}"
                ))),
            }
        };
        Ok(match &**p {
            Proof::Identity(_)
            | Proof::OrIntroL(..)
            | Proof::OrIntroR(..)
            | Proof::ExistsIntro { .. }
            | Proof::Choice { .. } => m,
            Proof::Cut(l, r) => {
                let m1 = self.transform(l, rho, s.clone(), m, ev)?;
                let f = self.realiser(l, rho, ev)?;
                let s1 = ev.apply(&f, s)?;
                self.transform(r, rho, s1, m1, ev)?
            }
            Proof::InhabitedAtom { witness, .. } => ev.eval(witness, rho)?,
            Proof::AndElimL(..) => pair_parts(&m)?.0,
            Proof::AndElimR(..) => pair_parts(&m)?.1,
            Proof::AndIntro(l, r) => Value::pair(
                self.transform(l, rho, s.clone(), m.clone(), ev)?,
                self.transform(r, rho, s, m, ev)?,
            ),
            Proof::WeakAbsurd(_) | Proof::FullAbsurd(_) => return Err(EvalError::EmptyElimination),
            Proof::OrElim(l, r) => match s {
                Value::Inl(x) => self.transform(l, rho, (*x).clone(), m, ev)?,
                Value::Inr(y) => self.transform(r, rho, (*y).clone(), m, ev)?,
                v => return Err(EvalError::StuckTerm(format!("case on {v:?}"))),
            },
            Proof::ImpIntro(q) => {
                let Prop::And(a, _) = conclusion(q).map_err(native_err)?.antecedent else {
                    return Err(native_err("malformed implication introduction"));
                };
                let truth = self.value(q, Mode::Truth, rho, ev)?;
                let this = self;
                let rho = rho.clone();
                let first = {
                    let (rho, s, m) = (rho.clone(), s.clone(), m.clone());
                    Value::native("imp-i.truth", move |ev, y| {
                        let x = this.correctness(&a, &rho, &s, &m)?;
                        ev.apply(&truth, Value::pair(x, y))
                    })
                };
                let q = q.clone();
                let second = Value::native("imp-i.witness", move |_, b| {
                    let (q, rho, s, m) = (q.clone(), rho.clone(), s.clone(), m.clone());
                    Ok(Value::native("imp-i.witness", move |ev, n| {
                        let pair = Value::pair(s.clone(), b.clone());
                        this.transform(&q, &rho, pair, Value::pair(m.clone(), n), ev)
                    }))
                });
                Value::pair(first, second)
            }
            Proof::ImpElim(q) => {
                let (a, b) = pair_parts(&s)?;
                let (ma, mb) = pair_parts(&m)?;
                let w = self.transform(q, rho, a, ma, ev)?;
                let g = pair_parts(&w)?.1;
                ev.apply2(&g, b, mb)?
            }
            Proof::ForallIntro { body, .. } => {
                let (this, body, rho) = (self, body.clone(), rho.clone());
                Value::native("forall-i", move |ev, x| {
                    this.transform(&body, &rho.push(x), s.clone(), m.clone(), ev)
                })
            }
            Proof::ForallElim { premise, term } => {
                let w = self.transform(premise, rho, s, m, ev)?;
                let t = ev.eval(term, rho)?;
                ev.apply(&w, t)?
            }
            Proof::ExistsElim { body, .. } => {
                let payload = match (self.variant, s) {
                    (Variant::MrPrime, Value::Inl(_)) => return Err(EvalError::EmptyElimination),
                    (Variant::MrPrime, Value::Inr(p)) => (*p).clone(),
                    (_, s) => s,
                };
                let (x, y) = pair_parts(&payload)?;
                self.transform(body, &rho.push(x), y, m, ev)?
            }
            Proof::ExistsInv { premise, term } => {
                let t = ev.eval(term, rho)?;
                let s1 = match self.variant {
                    Variant::MrPrime => Value::inr(Value::pair(t, s)),
                    _ => Value::pair(t, s),
                };
                self.transform(premise, rho, s1, m, ev)?
            }
            Proof::Induction(_) => {
                let (s0, sf) = pair_parts(&s)?;
                let (m0, mf) = pair_parts(&m)?;
                Value::native("induction", move |ev, n| {
                    let n = n
                        .as_nat()
                        .ok_or_else(|| EvalError::StuckTerm(format!("induction at {n:?}")))?;
                    let (mut r, mut w) = (s0.clone(), m0.clone());
                    for i in 0..n {
                        let step = ev.apply(&mf, Value::Nat(i))?;
                        let g = pair_parts(&step)?.1;
                        w = ev.apply2(&g, r.clone(), w)?;
                        r = ev.apply2(&sf, Value::Nat(i), r)?;
                    }
                    Ok(w)
                })
            }
            Proof::TrivialTransfer {
                prefix,
                hypothesis,
                evidence,
                ..
            } => {
                let ev_v = ev.eval(evidence, rho)?;
                transfer_witness(
                    self,
                    prefix.len(),
                    Arc::new(hypothesis.clone()),
                    ev_v,
                    rho.clone(),
                )
            }
        })
    }
}

/// Witness for `∀x̄ (Q → P)` at the trivial realiser, with `n` binders to go.
fn transfer_witness(b: Builder, n: usize, q: Arc<Prop>, f: Value, env: Env) -> Value {
    if n == 0 {
        let g = f.clone();
        let inner = Value::native("transfer", move |_, r| {
            let (q, g, env) = (q.clone(), g.clone(), env.clone());
            Ok(Value::native("transfer", move |ev, mq| {
                let truth = b.correctness(&q, &env, &r, &mq)?;
                ev.apply(&g, truth)
            }))
        });
        return Value::pair(f, inner);
    }
    Value::native("transfer", move |ev, x| {
        let fx = ev.apply(&f, x.clone())?;
        Ok(transfer_witness(b, n - 1, q.clone(), fx, env.push(x)))
    })
}

/// A checked proof together with its realiser and witness.
#[derive(Clone, Debug)]
pub struct ExtractionResult {
    pub sequent: Sequent,
    pub variant: Variant,
    /// Closed term of the crude type of `A → B`.
    pub program: Term,
    /// Closed term of type `tp(A) → tp(B)`.
    pub truth: Term,
    pub realiser: Value,
    /// Element of the realisability type of `A → B` at `realiser`.
    pub witness_builder: Value,
    pub proof: Arc<Proof>,
}

/// Outcome of checking an extraction against the realisability predicate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verification {
    /// Whether the realisability type is inhabited, when decidable.
    pub decided: Option<bool>,
    /// Whether the constructed witness is an element of it.
    pub witness: CheckReport,
}

impl Verification {
    pub fn passes(&self) -> bool {
        self.decided != Some(false) && self.witness.valid
    }
}

pub fn extract(p: &Proof) -> Result<ExtractionResult, LogicError> {
    extract_with(p, Variant::Mr)
}

pub fn extract_prime(p: &Proof) -> Result<ExtractionResult, LogicError> {
    extract_with(p, Variant::MrPrime)
}

pub fn extract_with(p: &Proof, variant: Variant) -> Result<ExtractionResult, LogicError> {
    extract_checked(p, variant, &Checker::default())
}

pub fn extract_checked(
    p: &Proof,
    variant: Variant,
    checker: &Checker,
) -> Result<ExtractionResult, LogicError> {
    let sequent = checker.check(p)?;
    if variant != Variant::MrPrime && p.uses_full_absurd() {
        return Err(LogicError::UsesFullAbsurd);
    }
    let program = translate(p, Mode::Crude(variant))?;
    let truth = translate(p, Mode::Truth)?;
    let mut ev = Evaluator::new();
    let realiser = ev.eval(&program, &Env::new())?;
    let truth_value = ev.eval(&truth, &Env::new())?;
    let proof = Arc::new(p.clone());
    let builder = Builder { variant };
    let root = proof.clone();
    let transformer = Value::native("witness", move |_, s| {
        let root = root.clone();
        Ok(Value::native("witness", move |ev, m| {
            builder.transform(&root, &Env::new(), s.clone(), m, ev)
        }))
    });
    Ok(ExtractionResult {
        sequent,
        variant,
        program,
        truth,
        realiser,
        witness_builder: Value::pair(truth_value, transformer),
        proof,
    })
}

impl ExtractionResult {
    /// The realisability type of `A → B` at the extracted realiser.
    pub fn witness_type(&self) -> Result<Ty, LogicError> {
        Ok(mr_type_for(
            &self.sequent.as_implication(),
            &self.realiser,
            self.variant,
        )?)
    }

    /// Brute-force check: decide the realisability type and check the
    /// constructed witness against it.
    pub fn verify(&self, nat_bound: u64) -> Result<Verification, LogicError> {
        let ty = self.witness_type()?;
        let decided = match decide_inhabited(&ty, nat_bound) {
            Ok(found) => Some(found.is_some()),
            Err(KernelError::NotEnumerable(_)) | Err(KernelError::TooLarge) => None,
            Err(e) => return Err(e.into()),
        };
        let witness = check_value_bounded(&self.witness_builder, &ty, Some(nat_bound));
        Ok(Verification { decided, witness })
    }

    /// The witness for the succedent given an assumption realising the
    /// antecedent.
    pub fn witness_at(&self, assumption: &Assumption) -> Result<Value, LogicError> {
        let g = self
            .witness_builder
            .snd()
            .ok_or_else(|| LogicError::WrongShape("witness builder".into()))?;
        Ok(Evaluator::new().apply2(g, assumption.realiser.clone(), assumption.witness.clone())?)
    }

    /// Check the succedent's witness under an assumption, at `Nat` points up
    /// to `nat_bound`.
    pub fn verify_at(
        &self,
        assumption: &Assumption,
        nat_bound: u64,
    ) -> Result<CheckReport, LogicError> {
        let r = Evaluator::new().apply(&self.realiser, assumption.realiser.clone())?;
        let ty = mr_type_for(&self.sequent.succedent, &r, self.variant)?;
        let w = self.witness_at(assumption)?;
        Ok(check_value_bounded(&w, &ty, Some(nat_bound)))
    }
}

/// A realiser of a closed proposition together with its realisability
/// witness.
#[derive(Clone, Debug)]
pub struct Assumption {
    pub prop: Prop,
    pub variant: Variant,
    pub term: Term,
    pub realiser: Value,
    pub witness: Value,
}

impl Assumption {
    pub fn verify(&self, nat_bound: u64) -> Result<CheckReport, LogicError> {
        let ty = mr_type_for(&self.prop, &self.realiser, self.variant)?;
        Ok(check_value_bounded(&self.witness, &ty, Some(nat_bound)))
    }
}

/// The trivial realiser of a true proposition built from atoms with `∧`,
/// `→` and `∀`, with a witness obtained from its truth.
pub fn trivial_assumption(
    s: &Prop,
    truth: &Value,
    variant: Variant,
) -> Result<Assumption, LogicError> {
    if !s.is_closed() {
        return Err(LogicError::WrongShape("open assumption".into()));
    }
    no_content(s)?;
    let term = element_term(s);
    let realiser = Evaluator::new().eval(&term, &Env::new())?;
    let witness = trivial_witness(s, truth.clone(), variant)?;
    Ok(Assumption {
        prop: s.clone(),
        variant,
        term,
        realiser,
        witness,
    })
}

fn no_content(s: &Prop) -> Result<(), LogicError> {
    match s {
        Prop::Atom(_) => Ok(()),
        Prop::And(a, b) => no_content(a).and(no_content(b)),
        Prop::Implies(_, b) => no_content(b),
        Prop::Forall(_, p) => no_content(p),
        Prop::Absurd | Prop::Or(..) | Prop::Exists(..) => Err(LogicError::WrongShape(
            "assumption has computational content".into(),
        )),
    }
}

fn trivial_witness(s: &Prop, truth: Value, variant: Variant) -> Result<Value, EvalError> {
    let parts = |v: &Value| match v {
        Value::Pair(x, y) => Ok(((**x).clone(), (**y).clone())),
        v => Err(EvalError::StuckTerm(format!(
            "expected a pair, found {v:?}"
        ))),
    };
    Ok(match s {
        Prop::Atom(_) => truth,
        Prop::And(a, b) => {
            let (x, y) = parts(&truth)?;
            Value::pair(
                trivial_witness(a, x, variant)?,
                trivial_witness(b, y, variant)?,
            )
        }
        Prop::Forall(_, p) => {
            let p = p.clone();
            Value::native("assumption", move |ev, x| {
                let tx = ev.apply(&truth, x.clone())?;
                trivial_witness(&p.instantiate_value(&x), tx, variant)
            })
        }
        Prop::Implies(a, b) => {
            let (a, b, f) = (a.clone(), b.clone(), truth.clone());
            let inner = Value::native("assumption", move |_, r| {
                let (a, b, f) = (a.clone(), b.clone(), f.clone());
                Ok(Value::native("assumption", move |ev, m| {
                    let x = correct_unchecked(&a, &r, &m, variant).map_err(native_err)?;
                    let y = ev.apply(&f, x)?;
                    trivial_witness(&b, y, variant)
                }))
            });
            Value::pair(truth, inner)
        }
        _ => return Err(native_err("assumption has computational content")),
    })
}

/// A program extracted from a proof of `∀x:A ∃y:B P(x, y)`.
#[derive(Clone, Debug)]
pub struct AeExtraction {
    pub domain: Ty,
    pub codomain: Ty,
    /// Binds `x` (index 1) and `y` (index 0).
    pub family: Prop,
    /// Closed term of type `A → B`: the first projection of the realiser
    /// applied to the assumption.
    pub program: Term,
    pub function: Value,
    pub points: Vec<AePoint>,
    /// Set when the domain was truncated.
    pub partial: bool,
}

#[derive(Clone, Debug)]
pub struct AePoint {
    pub input: Value,
    pub output: Value,
    /// Element of `tp(P(x, f x))`.
    pub truth: Value,
    pub valid: bool,
}

impl AeExtraction {
    pub fn all_valid(&self) -> bool {
        self.points.iter().all(|p| p.valid)
    }
}

/// Split `∀x:A ∃y:B P(x, y)` into its parts; `B` must not depend on `x`.
pub fn ae_shape(s: &Prop) -> Result<(Ty, Ty, Prop), LogicError> {
    let wrong = || LogicError::WrongShape("expected a proposition ∀x ∃y P(x, y)".into());
    let Prop::Forall(a, body) = s else {
        return Err(wrong());
    };
    let Prop::Exists(b, p) = &**body else {
        return Err(wrong());
    };
    let b = b.strengthen().ok_or_else(wrong)?;
    Ok(((**a).clone(), b, (**p).clone()))
}

/// Extract the function `x ↦ f(nc, x).1` and check its specification at
/// every enumerable point of the domain.
pub fn ae_extract(
    res: &ExtractionResult,
    assumption: &Assumption,
    nat_bound: u64,
) -> Result<AeExtraction, LogicError> {
    let (domain, codomain, family) = ae_shape(&res.sequent.succedent)?;
    if assumption.prop != res.sequent.antecedent || assumption.variant != res.variant {
        return Err(LogicError::WrongShape(
            "assumption does not match the antecedent".into(),
        ));
    }
    let applied = Term::app(
        Term::app(res.program.shift(1), assumption.term.clone()),
        Term::Var(0),
    );
    let program = match res.variant {
        Variant::MrPrime => Term::lam(Term::case(
            applied,
            Term::absurd(Term::Var(0)),
            Term::fst(Term::Var(0)),
        )),
        _ => Term::lam(Term::fst(applied)),
    };
    let mut ev = Evaluator::new();
    let function = ev.eval(&program, &Env::new())?;
    let inl = |e: EvalError| match e {
        EvalError::EmptyElimination if res.variant == Variant::MrPrime => {
            LogicError::InlBranchReached
        }
        e => e.into(),
    };
    let r = ev.apply(&res.realiser, assumption.realiser.clone())?;
    let w = res.witness_at(assumption)?;
    let exists = match &res.sequent.succedent {
        Prop::Forall(_, body) => (**body).clone(),
        _ => unreachable!("shape checked above"),
    };
    let enumeration = enumerate(&domain, nat_bound)?;
    let mut points = Vec::with_capacity(enumeration.values.len());
    for x in enumeration.values {
        let y = ev.apply(&function, x.clone()).map_err(inl)?;
        let rx = ev.apply(&r, x.clone())?;
        let wx = ev.apply(&w, x.clone())?;
        let ex = exists.instantiate_value(&x);
        let truth = correct_unchecked(&ex, &rx, &wx, res.variant)?;
        let t = truth
            .snd()
            .cloned()
            .ok_or_else(|| LogicError::WrongShape("existential truth".into()))?;
        let spec = tp(&family.instantiate_value(&y).instantiate_value(&x));
        let valid =
            truth.fst() == Some(&y) && check_value_bounded(&t, &spec, Some(nat_bound)).valid;
        points.push(AePoint {
            input: x,
            output: y,
            truth: t,
            valid,
        });
    }
    Ok(AeExtraction {
        domain,
        codomain,
        family,
        program,
        function,
        points,
        partial: enumeration.partial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::check::check;
    use crate::logic::lemmas::{
        choice_realiser, derive_full_absurd, induction_realiser, trivial_realiser,
    };

    fn yes() -> Prop {
        Prop::holds(Term::Bool(true))
    }

    fn eq_fin(x: Term, y: Term) -> Prop {
        Prop::holds(Term::eq(x, y))
    }

    fn passes(p: &Proof, variant: Variant) -> bool {
        let res = extract_with(p, variant).unwrap();
        let v = res.verify(4).unwrap();
        v.passes() && v.decided == Some(true)
    }

    #[test]
    fn identity_realiser() {
        let res = extract(&Proof::Identity(yes())).unwrap();
        assert_eq!(res.program, Term::lam(Term::Var(0)));
        assert!(res.verify(4).unwrap().passes());
    }

    #[test]
    fn projections_and_pairs() {
        let p = Proof::AndElimL(yes(), yes());
        assert_eq!(
            extract(&p).unwrap().program,
            Term::lam(Term::fst(Term::Var(0)))
        );
        assert!(passes(&p, Variant::Mr));
        let q = Proof::and_intro(
            Proof::AndElimR(yes(), Prop::Absurd),
            Proof::AndElimL(yes(), Prop::Absurd),
        );
        assert!(passes(&q, Variant::Mr));
        assert!(passes(&q, Variant::MrPrime));
    }

    #[test]
    fn implication_rules() {
        let swap = Proof::and_intro(
            Proof::AndElimR(yes(), Prop::Absurd),
            Proof::AndElimL(yes(), Prop::Absurd),
        );
        let curried = Proof::imp_intro(swap);
        assert!(passes(&curried, Variant::Mr));
        let uncurried = Proof::imp_elim(curried);
        assert!(passes(&uncurried, Variant::Mr));
        assert!(passes(&uncurried, Variant::MrPrime));
    }

    #[test]
    fn disjunction_rules() {
        let a = Prop::or(yes(), Prop::Absurd);
        let p = Proof::or_elim(
            Proof::OrIntroR(Prop::Absurd, yes()),
            Proof::cut(
                Proof::WeakAbsurd(Ty::holds(Term::Bool(true))),
                Proof::OrIntroR(Prop::Absurd, yes()),
            ),
        );
        assert_eq!(
            check(&p),
            Ok(Sequent::new(a, Prop::or(Prop::Absurd, yes())))
        );
        assert!(passes(&p, Variant::Mr));
    }

    #[test]
    fn quantifier_rules() {
        let fam = eq_fin(Term::Var(0), Term::Var(0));
        let all = Proof::forall_intro(
            Ty::Fin(3),
            Proof::InhabitedAtom {
                antecedent: yes(),
                ty: Ty::holds(Term::eq(Term::Var(0), Term::Var(0))),
                witness: Term::Elt,
            },
        );
        assert!(passes(&all, Variant::Mr));
        let inst = Proof::forall_elim(all, Term::Fin(2));
        assert!(passes(&inst, Variant::Mr));
        let intro = Proof::exists_intro(Ty::Fin(3), fam.clone(), Term::Fin(1));
        assert!(passes(&intro, Variant::Mr));
        assert!(passes(&intro, Variant::MrPrime));
        let elim = Proof::exists_elim(
            Ty::Fin(3),
            Proof::exists_intro(Ty::Fin(3), fam.shift_from(1, 1), Term::Var(0)),
        );
        assert!(passes(&elim, Variant::Mr));
        assert!(passes(&elim, Variant::MrPrime));
        let inv = Proof::exists_inv(Proof::Identity(Prop::exists(Ty::Fin(3), fam)), Term::Fin(0));
        assert!(passes(&inv, Variant::Mr));
        assert!(passes(&inv, Variant::MrPrime));
    }

    #[test]
    fn exists_intro_prime_program() {
        let p = Proof::exists_intro(Ty::Fin(2), yes(), Term::Fin(1));
        let res = extract_prime(&p).unwrap();
        assert_eq!(
            res.program,
            Term::lam(Term::inr(Term::pair(Term::Fin(1), Term::Var(0))))
        );
    }

    #[test]
    fn full_absurd() {
        let a = Prop::exists(Ty::Empty, yes());
        let p = Proof::FullAbsurd(a.clone());
        assert_eq!(extract(&p).unwrap_err(), LogicError::UsesFullAbsurd);
        let res = extract_prime(&p).unwrap();
        assert_eq!(res.program, Term::lam(element_term(&a)));
        assert!(res.verify(3).unwrap().passes());
    }

    #[test]
    fn derived_absurdity_is_weak() {
        let a = Prop::and(
            Prop::forall(
                Ty::Fin(2),
                Prop::exists(Ty::Fin(2), eq_fin(Term::Var(0), Term::Var(1))),
            ),
            Prop::implies(yes(), Prop::or(Prop::Absurd, yes())),
        );
        let p = derive_full_absurd(&a).unwrap();
        assert!(!p.uses_full_absurd());
        assert_eq!(check(&p).unwrap(), Sequent::new(Prop::Absurd, a));
        assert!(passes(&p, Variant::Mr));
        let bad = Prop::exists(Ty::Empty, yes());
        assert_eq!(
            derive_full_absurd(&bad).unwrap_err(),
            LogicError::EmptyDomainQuantifier
        );
    }

    #[test]
    fn ae_extract_identity() {
        // forall x : Fin 3. exists y : Fin 3. x = y
        let fam = eq_fin(Term::Var(1), Term::Var(0));
        let body = Proof::cut(
            Proof::InhabitedAtom {
                antecedent: yes(),
                ty: Ty::holds(Term::eq(Term::Var(0), Term::Var(0))),
                witness: Term::Elt,
            },
            Proof::exists_intro(Ty::Fin(3), fam.clone(), Term::Var(0)),
        );
        let p = Proof::forall_intro(Ty::Fin(3), body);
        for variant in [Variant::Mr, Variant::MrPrime] {
            let res = extract_with(&p, variant).unwrap();
            let nc = trivial_assumption(&yes(), &Value::Elt, variant).unwrap();
            let ae = ae_extract(&res, &nc, 4).unwrap();
            assert!(ae.all_valid());
            for pt in &ae.points {
                assert_eq!(pt.input, pt.output);
            }
        }
    }

    #[test]
    fn ae_extract_empty_domain() {
        let body = Proof::cut(
            Proof::InhabitedAtom {
                antecedent: yes(),
                ty: Ty::Unit,
                witness: Term::Elt,
            },
            Proof::exists_intro(Ty::Unit, Prop::atom(Ty::Unit), Term::Elt),
        );
        let p = Proof::forall_intro(Ty::Empty, body);
        let res = extract(&p).unwrap();
        let nc = trivial_assumption(&yes(), &Value::Elt, Variant::Mr).unwrap();
        let ae = ae_extract(&res, &nc, 4).unwrap();
        assert!(ae.points.is_empty());
        assert!(ae.all_valid());
    }

    #[test]
    fn induction_lemma() {
        let fam = Prop::holds(Term::le(Term::Var(0), Term::Var(0)));
        for variant in [Variant::Mr, Variant::MrPrime] {
            let res = induction_realiser(&fam, variant).unwrap();
            let v = res.verify(6).unwrap();
            assert!(v.witness.valid);
        }
    }

    #[test]
    fn choice_lemma() {
        let fam = eq_fin(Term::Var(1), Term::Var(0));
        let res = choice_realiser(&Ty::Fin(2), &Ty::Fin(2), &fam, None, Variant::Mr).unwrap();
        assert!(res.verify(2).unwrap().passes());
        assert_eq!(
            choice_realiser(&Ty::Fin(2), &Ty::Fin(2), &fam, None, Variant::MrPrime).unwrap_err(),
            LogicError::MissingDefault
        );
        let b0 = Value::Fin(1);
        let res =
            choice_realiser(&Ty::Fin(2), &Ty::Fin(2), &fam, Some(&b0), Variant::MrPrime).unwrap();
        assert!(res.verify(2).unwrap().passes());
        // r(x) = inl e for every x: the default is chosen.
        let r = crate::kernel::eval::closure(Term::inl(Term::Elt));
        let out = Evaluator::new().apply(&res.realiser, r).unwrap();
        let Value::Inr(payload) = out else {
            panic!("expected inr")
        };
        let g = payload.fst().unwrap();
        assert_eq!(Evaluator::new().apply(g, Value::Fin(0)).unwrap(), b0);
    }

    #[test]
    fn transfer_lemma() {
        let ev = crate::kernel::eval::closure(Term::lam(Term::Elt));
        let res = trivial_realiser(&[Ty::Fin(2)], &yes(), &yes(), &ev, Variant::Mr).unwrap();
        assert!(res.verify(2).unwrap().passes());
        let applied = Term::app(res.program.clone(), Term::Elt);
        let nf = crate::kernel::nbe::normalise(&applied, &crate::prop::cr(&res.sequent.succedent))
            .unwrap();
        assert_eq!(nf, Term::lams(2, Term::Elt));
        assert_eq!(
            trivial_realiser(&[], &yes(), &Prop::or(yes(), yes()), &ev, Variant::Mr).unwrap_err(),
            LogicError::NotAtomicConclusion
        );
    }
}
