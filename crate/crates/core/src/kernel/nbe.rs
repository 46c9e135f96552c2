//! Normalisation by evaluation.
//!
//! Terms are evaluated into a semantic domain with neutral values for free
//! variables, then read back type-directed. Functions are η-expanded to
//! lambdas; neutral pairs and units are left alone, so an identity stays
//! `λs.s` and a recursion is not duplicated into both projections. Where the
//! type of a neutral cannot be recovered the read-back falls back to the
//! untyped one.

use std::rc::Rc;
use std::sync::Arc;

use thiserror::Error;

use super::syntax::{Binders, Term, Ty};
use super::value::{Env, Value};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NormaliseError {
    #[error("cannot normalise: {0}")]
    NonNormalisable(String),
}

type Result<T> = std::result::Result<T, NormaliseError>;

fn fail<T>(msg: impl Into<String>) -> Result<T> {
    Err(NormaliseError::NonNormalisable(msg.into()))
}

#[derive(Clone)]
enum Sem {
    Lam(SEnv, Arc<Term>),
    Pair(Rc<Sem>, Rc<Sem>),
    Inl(Rc<Sem>),
    Inr(Rc<Sem>),
    Elt,
    Nat(u64),
    /// Successor of a non-literal numeral.
    Succ(Rc<Sem>),
    Fin(u32),
    Bool(bool),
    Ne(Rc<Ne>),
}

enum Ne {
    /// De Bruijn level.
    Var(usize),
    App(Rc<Ne>, Sem),
    Fst(Rc<Ne>),
    Snd(Rc<Ne>),
    Case(Rc<Ne>, SEnv, Arc<Term>, Arc<Term>),
    Rec {
        motive: Arc<Ty>,
        env: SEnv,
        scrutinee: Sem,
        base: Sem,
        step: Arc<Term>,
    },
    Binary(BinOp, Sem, Sem),
    Not(Sem),
    Absurd(Rc<Ne>),
}

#[derive(Clone, Copy)]
enum BinOp {
    Add,
    Eq,
    Le,
    And,
    Or,
}

/// Semantic environment, innermost binding last.
#[derive(Clone, Default)]
struct SEnv(Rc<Vec<Sem>>);

impl SEnv {
    fn push(&self, v: Sem) -> SEnv {
        let mut vs = (*self.0).clone();
        vs.push(v);
        SEnv(Rc::new(vs))
    }

    fn get(&self, index: usize) -> Option<&Sem> {
        let n = self.0.len();
        if index < n {
            self.0.get(n - 1 - index)
        } else {
            None
        }
    }
}

/// A type closed over a semantic environment.
#[derive(Clone)]
struct TyC {
    ty: Arc<Ty>,
    env: SEnv,
}

impl TyC {
    fn new(ty: &Ty, env: &SEnv) -> TyC {
        TyC {
            ty: Arc::new(ty.clone()),
            env: env.clone(),
        }
    }
}

fn ne(n: Ne) -> Sem {
    Sem::Ne(Rc::new(n))
}

fn eval(t: &Term, env: &SEnv) -> Result<Sem> {
    use Term::*;
    Ok(match t {
        Var(i) => match env.get(*i) {
            Some(v) => v.clone(),
            None => return fail(format!("open term (variable #{i})")),
        },
        Lam(b) => Sem::Lam(env.clone(), b.clone()),
        App(f, x) => apply(eval(f, env)?, eval(x, env)?)?,
        Pair(x, y) => Sem::Pair(Rc::new(eval(x, env)?), Rc::new(eval(y, env)?)),
        Fst(x) => fst(eval(x, env)?)?,
        Snd(x) => snd(eval(x, env)?)?,
        Inl(x) => Sem::Inl(Rc::new(eval(x, env)?)),
        Inr(x) => Sem::Inr(Rc::new(eval(x, env)?)),
        Case(s, l, r) => match eval(s, env)? {
            Sem::Inl(v) => eval(l, &env.push((*v).clone()))?,
            Sem::Inr(v) => eval(r, &env.push((*v).clone()))?,
            Sem::Ne(n) => ne(Ne::Case(n, env.clone(), l.clone(), r.clone())),
            _ => return fail("case on a non-sum"),
        },
        Elt => Sem::Elt,
        Nat(n) => Sem::Nat(*n),
        Succ(x) => match eval(x, env)? {
            Sem::Nat(n) => Sem::Nat(n + 1),
            v @ (Sem::Ne(_) | Sem::Succ(_)) => Sem::Succ(Rc::new(v)),
            _ => return fail("succ of a non-number"),
        },
        Add(x, y) => match (eval(x, env)?, eval(y, env)?) {
            (Sem::Nat(a), Sem::Nat(b)) => Sem::Nat(a + b),
            (a, Sem::Nat(0)) => a,
            (a, b) => ne(Ne::Binary(BinOp::Add, a, b)),
        },
        Rec {
            motive,
            scrutinee,
            base,
            step,
        } => {
            let s = eval(scrutinee, env)?;
            let b = eval(base, env)?;
            rec(motive, env, s, b, step)?
        }
        Fin(i) => Sem::Fin(*i),
        Bool(b) => Sem::Bool(*b),
        Eq(x, y) => binary(BinOp::Eq, eval(x, env)?, eval(y, env)?)?,
        Le(x, y) => binary(BinOp::Le, eval(x, env)?, eval(y, env)?)?,
        And(x, y) => binary(BinOp::And, eval(x, env)?, eval(y, env)?)?,
        Or(x, y) => binary(BinOp::Or, eval(x, env)?, eval(y, env)?)?,
        Not(x) => match eval(x, env)? {
            Sem::Bool(b) => Sem::Bool(!b),
            v => ne(Ne::Not(v)),
        },
        Absurd(x) => match eval(x, env)? {
            Sem::Ne(n) => ne(Ne::Absurd(n)),
            _ => return fail("absurdity eliminator applied to a value"),
        },
        Val(v) => reflect(v)?,
    })
}

fn reflect(v: &Value) -> Result<Sem> {
    Ok(match v {
        Value::Elt => Sem::Elt,
        Value::Nat(n) => Sem::Nat(*n),
        Value::Fin(i) => Sem::Fin(*i),
        Value::Bool(b) => Sem::Bool(*b),
        Value::Pair(x, y) => Sem::Pair(Rc::new(reflect(x)?), Rc::new(reflect(y)?)),
        Value::Inl(x) => Sem::Inl(Rc::new(reflect(x)?)),
        Value::Inr(x) => Sem::Inr(Rc::new(reflect(x)?)),
        Value::Closure(env, body) => Sem::Lam(reflect_env(env)?, body.clone()),
        Value::Graph(_) | Value::Native(_) => return fail("function without a syntactic body"),
    })
}

fn reflect_env(env: &Env) -> Result<SEnv> {
    let mut vs = env.to_vec();
    vs.reverse();
    let sems = vs.iter().map(reflect).collect::<Result<Vec<_>>>()?;
    Ok(SEnv(Rc::new(sems)))
}

fn literal_eq(a: &Sem, b: &Sem) -> Option<bool> {
    match (a, b) {
        (Sem::Nat(x), Sem::Nat(y)) => Some(x == y),
        (Sem::Fin(x), Sem::Fin(y)) => Some(x == y),
        (Sem::Bool(x), Sem::Bool(y)) => Some(x == y),
        (Sem::Elt, Sem::Elt) => Some(true),
        _ => None,
    }
}

fn binary(op: BinOp, a: Sem, b: Sem) -> Result<Sem> {
    let folded = match (op, &a, &b) {
        (BinOp::Eq, x, y) => literal_eq(x, y),
        (BinOp::Le, Sem::Nat(x), Sem::Nat(y)) => Some(x <= y),
        (BinOp::Le, Sem::Fin(x), Sem::Fin(y)) => Some(x <= y),
        (BinOp::And, Sem::Bool(x), Sem::Bool(y)) => Some(*x && *y),
        (BinOp::Or, Sem::Bool(x), Sem::Bool(y)) => Some(*x || *y),
        _ => None,
    };
    Ok(match folded {
        Some(r) => Sem::Bool(r),
        None => ne(Ne::Binary(op, a, b)),
    })
}

fn apply(f: Sem, x: Sem) -> Result<Sem> {
    match f {
        Sem::Lam(env, body) => eval(&body, &env.push(x)),
        Sem::Ne(n) => Ok(ne(Ne::App(n, x))),
        _ => fail("application of a non-function"),
    }
}

fn fst(p: Sem) -> Result<Sem> {
    match p {
        Sem::Pair(x, _) => Ok((*x).clone()),
        Sem::Ne(n) => Ok(ne(Ne::Fst(n))),
        _ => fail("projection from a non-pair"),
    }
}

fn snd(p: Sem) -> Result<Sem> {
    match p {
        Sem::Pair(_, y) => Ok((*y).clone()),
        Sem::Ne(n) => Ok(ne(Ne::Snd(n))),
        _ => fail("projection from a non-pair"),
    }
}

fn rec(motive: &Arc<Ty>, env: &SEnv, scrutinee: Sem, base: Sem, step: &Arc<Term>) -> Result<Sem> {
    match scrutinee {
        Sem::Nat(n) => {
            let mut acc = base;
            for i in 0..n {
                acc = eval(step, &env.push(Sem::Nat(i)).push(acc))?;
            }
            Ok(acc)
        }
        Sem::Succ(pred) => {
            let inner = rec(motive, env, (*pred).clone(), base, step)?;
            eval(step, &env.push((*pred).clone()).push(inner))
        }
        s @ Sem::Ne(_) => Ok(ne(Ne::Rec {
            motive: motive.clone(),
            env: env.clone(),
            scrutinee: s,
            base,
            step: step.clone(),
        })),
        _ => fail("recursion on a non-number"),
    }
}

/// Read-back state: the types of the fresh variables, by level.
struct Ctx {
    types: Vec<Option<TyC>>,
}

impl Ctx {
    fn level(&self) -> usize {
        self.types.len()
    }

    fn fresh(&mut self, ty: Option<TyC>) -> Sem {
        let lvl = self.types.len();
        self.types.push(ty);
        ne(Ne::Var(lvl))
    }

    fn pop(&mut self, n: usize) {
        let len = self.types.len();
        self.types.truncate(len - n);
    }
}

fn quote(ctx: &mut Ctx, v: &Sem, ty: &TyC) -> Result<Term> {
    if let Sem::Ne(n) = v {
        if !matches!(ty.ty.as_ref(), Ty::Fun(..) | Ty::Pi(..)) {
            return Ok(quote_ne(ctx, n, Some(ty))?.0);
        }
    }
    match ty.ty.as_ref() {
        Ty::Unit => Ok(Term::Elt),
        Ty::Fun(d, c) | Ty::Pi(d, c) => {
            let x = ctx.fresh(Some(TyC::new(d, &ty.env)));
            let cod = match ty.ty.as_ref() {
                Ty::Pi(..) => TyC::new(c, &ty.env.push(x.clone())),
                _ => TyC::new(c, &ty.env),
            };
            let body = apply(v.clone(), x).and_then(|b| quote(ctx, &b, &cod));
            ctx.pop(1);
            Ok(Term::lam(body?))
        }
        Ty::Prod(d, c) | Ty::Sigma(d, c) => {
            let p1 = fst(v.clone())?;
            let p2 = snd(v.clone())?;
            let second = match ty.ty.as_ref() {
                Ty::Sigma(..) => TyC::new(c, &ty.env.push(p1.clone())),
                _ => TyC::new(c, &ty.env),
            };
            let t1 = quote(ctx, &p1, &TyC::new(d, &ty.env))?;
            let t2 = quote(ctx, &p2, &second)?;
            Ok(Term::pair(t1, t2))
        }
        Ty::Sum(l, r) => match v {
            Sem::Inl(x) => Ok(Term::inl(quote(ctx, x, &TyC::new(l, &ty.env))?)),
            Sem::Inr(x) => Ok(Term::inr(quote(ctx, x, &TyC::new(r, &ty.env))?)),
            Sem::Ne(n) => Ok(quote_ne(ctx, n, Some(ty))?.0),
            _ => fail("non-injection at a sum type"),
        },
        Ty::Nat => match v {
            Sem::Succ(x) => Ok(Term::succ(quote(ctx, x, ty)?)),
            Sem::Ne(n) => Ok(quote_ne(ctx, n, Some(ty))?.0),
            _ => quote_untyped(ctx, v),
        },
        _ => match v {
            Sem::Ne(n) => Ok(quote_ne(ctx, n, Some(ty))?.0),
            _ => quote_untyped(ctx, v),
        },
    }
}

fn quote_untyped(ctx: &mut Ctx, v: &Sem) -> Result<Term> {
    Ok(match v {
        Sem::Lam(..) => {
            let x = ctx.fresh(None);
            let body = apply(v.clone(), x).and_then(|b| quote_untyped(ctx, &b));
            ctx.pop(1);
            Term::lam(body?)
        }
        Sem::Pair(x, y) => Term::pair(quote_untyped(ctx, x)?, quote_untyped(ctx, y)?),
        Sem::Inl(x) => Term::inl(quote_untyped(ctx, x)?),
        Sem::Inr(x) => Term::inr(quote_untyped(ctx, x)?),
        Sem::Elt => Term::Elt,
        Sem::Nat(n) => Term::Nat(*n),
        Sem::Succ(x) => Term::succ(quote_untyped(ctx, x)?),
        Sem::Fin(i) => Term::Fin(*i),
        Sem::Bool(b) => Term::Bool(*b),
        Sem::Ne(n) => quote_ne(ctx, n, None)?.0,
    })
}

fn quote_maybe(ctx: &mut Ctx, v: &Sem, ty: Option<&TyC>) -> Result<Term> {
    match ty {
        Some(ty) => quote(ctx, v, ty),
        None => quote_untyped(ctx, v),
    }
}

/// Read back a neutral, returning its type when it can be recovered.
fn quote_ne(ctx: &mut Ctx, n: &Ne, expected: Option<&TyC>) -> Result<(Term, Option<TyC>)> {
    match n {
        Ne::Var(lvl) => {
            let idx = ctx.level() - lvl - 1;
            Ok((Term::Var(idx), ctx.types[*lvl].clone()))
        }
        Ne::App(f, x) => {
            let (tf, fty) = quote_ne(ctx, f, None)?;
            let (dom, cod) = match fty.as_ref().map(|t| (t.ty.as_ref(), t)) {
                Some((Ty::Fun(d, c), t)) => (Some(TyC::new(d, &t.env)), Some(TyC::new(c, &t.env))),
                Some((Ty::Pi(d, c), t)) => (
                    Some(TyC::new(d, &t.env)),
                    Some(TyC::new(c, &t.env.push(x.clone()))),
                ),
                _ => (None, None),
            };
            let tx = quote_maybe(ctx, x, dom.as_ref())?;
            Ok((Term::app(tf, tx), cod))
        }
        Ne::Fst(p) => {
            let (tp, pty) = quote_ne(ctx, p, None)?;
            let ty = match pty.as_ref().map(|t| (t.ty.as_ref(), t)) {
                Some((Ty::Prod(d, _) | Ty::Sigma(d, _), t)) => Some(TyC::new(d, &t.env)),
                _ => None,
            };
            Ok((Term::fst(tp), ty))
        }
        Ne::Snd(p) => {
            let (tp, pty) = quote_ne(ctx, p, None)?;
            let ty = match pty.as_ref().map(|t| (t.ty.as_ref(), t)) {
                Some((Ty::Prod(_, c), t)) => Some(TyC::new(c, &t.env)),
                Some((Ty::Sigma(_, c), t)) => {
                    Some(TyC::new(c, &t.env.push(ne(Ne::Fst(p.clone())))))
                }
                _ => None,
            };
            Ok((Term::snd(tp), ty))
        }
        Ne::Case(s, env, l, r) => {
            let (ts, sty) = quote_ne(ctx, s, None)?;
            let (lty, rty) = match sty.as_ref().map(|t| (t.ty.as_ref(), t)) {
                Some((Ty::Sum(a, b), t)) => (Some(TyC::new(a, &t.env)), Some(TyC::new(b, &t.env))),
                _ => (None, None),
            };
            let mut branch = |body: &Arc<Term>, bty: Option<TyC>| -> Result<Term> {
                let x = ctx.fresh(bty);
                let out = eval(body, &env.push(x)).and_then(|v| quote_maybe(ctx, &v, expected));
                ctx.pop(1);
                out
            };
            let tl = branch(l, lty)?;
            let tr = branch(r, rty)?;
            Ok((Term::case(ts, tl, tr), expected.cloned()))
        }
        Ne::Rec {
            motive,
            env,
            scrutinee,
            base,
            step,
        } => {
            let nat = TyC::new(&Ty::Nat, &SEnv::default());
            let ts = quote(ctx, scrutinee, &nat)?;
            let tb = quote(
                ctx,
                base,
                &TyC {
                    ty: motive.clone(),
                    env: env.push(Sem::Nat(0)),
                },
            )?;
            let k = ctx.fresh(Some(nat.clone()));
            let acc_ty = TyC {
                ty: motive.clone(),
                env: env.push(k.clone()),
            };
            let acc = ctx.fresh(Some(acc_ty));
            let out_ty = TyC {
                ty: motive.clone(),
                env: env.push(Sem::Succ(Rc::new(k.clone()))),
            };
            let body = eval(step, &env.push(k).push(acc)).and_then(|v| quote(ctx, &v, &out_ty));
            ctx.pop(2);
            let body = body?;
            let tm = quote_ty(ctx, motive, env)?;
            let result_ty = TyC {
                ty: motive.clone(),
                env: env.push(scrutinee.clone()),
            };
            Ok((Term::rec(tm, ts, tb, body), Some(result_ty)))
        }
        Ne::Binary(op, x, y) => {
            let tx = quote_untyped(ctx, x)?;
            let ty = quote_untyped(ctx, y)?;
            let (t, rty) = match op {
                BinOp::Add => (Term::add(tx, ty), Ty::Nat),
                BinOp::Eq => (Term::eq(tx, ty), Ty::Bool),
                BinOp::Le => (Term::le(tx, ty), Ty::Bool),
                BinOp::And => (Term::And(Arc::new(tx), Arc::new(ty)), Ty::Bool),
                BinOp::Or => (Term::Or(Arc::new(tx), Arc::new(ty)), Ty::Bool),
            };
            Ok((t, Some(TyC::new(&rty, &SEnv::default()))))
        }
        Ne::Not(x) => Ok((
            Term::Not(Arc::new(quote_untyped(ctx, x)?)),
            Some(TyC::new(&Ty::Bool, &SEnv::default())),
        )),
        Ne::Absurd(x) => {
            let (t, _) = quote_ne(ctx, x, None)?;
            Ok((Term::absurd(t), expected.cloned()))
        }
    }
}

/// Read back a type under a binder (the motive of a recursion).
fn quote_ty(ctx: &mut Ctx, ty: &Ty, env: &SEnv) -> Result<Ty> {
    let z = ctx.fresh(Some(TyC::new(&Ty::Nat, &SEnv::default())));
    let out = quote_ty_in(ctx, ty, &env.push(z));
    ctx.pop(1);
    out
}

fn quote_ty_in(ctx: &mut Ctx, ty: &Ty, env: &SEnv) -> Result<Ty> {
    let bind = |ctx: &mut Ctx, d: &Ty, c: &Ty| -> Result<(Ty, Ty)> {
        let qd = quote_ty_in(ctx, d, env)?;
        let x = ctx.fresh(Some(TyC::new(d, env)));
        let qc = quote_ty_in(ctx, c, &env.push(x));
        ctx.pop(1);
        Ok((qd, qc?))
    };
    Ok(match ty {
        Ty::Empty | Ty::Unit | Ty::Nat | Ty::Bool | Ty::Fin(_) => ty.clone(),
        Ty::Sum(x, y) => Ty::sum(quote_ty_in(ctx, x, env)?, quote_ty_in(ctx, y, env)?),
        Ty::Prod(x, y) => Ty::prod(quote_ty_in(ctx, x, env)?, quote_ty_in(ctx, y, env)?),
        Ty::Fun(x, y) => Ty::fun(quote_ty_in(ctx, x, env)?, quote_ty_in(ctx, y, env)?),
        Ty::Pi(d, c) => {
            let (d, c) = bind(ctx, d, c)?;
            Ty::pi(d, c)
        }
        Ty::Sigma(d, c) => {
            let (d, c) = bind(ctx, d, c)?;
            Ty::sigma(d, c)
        }
        Ty::Holds(c) => {
            let v = eval(c, env)?;
            Ty::holds(quote_untyped(ctx, &v)?)
        }
        Ty::Mr { .. } => return fail("realisability type inside a program"),
    })
}

/// β-normal, η-long form of a closed term at the given closed type.
pub fn normalise(t: &Term, ty: &Ty) -> Result<Term> {
    if !t.is_closed() {
        return fail("open term");
    }
    if !ty.is_closed() {
        return fail("open type");
    }
    let env = SEnv::default();
    let v = eval(t, &env)?;
    let mut ctx = Ctx { types: Vec::new() };
    quote(&mut ctx, &v, &TyC::new(ty, &env))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_reduces_under_lambda() {
        let t = Term::lam(Term::app(Term::lam(Term::Var(0)), Term::Var(0)));
        let n = normalise(&t, &Ty::fun(Ty::Nat, Ty::Nat)).unwrap();
        assert_eq!(n, Term::lam(Term::Var(0)));
    }

    #[test]
    fn projection_reduction() {
        let t = Term::fst(Term::pair(Term::Elt, Term::Elt));
        assert_eq!(normalise(&t, &Ty::Unit).unwrap(), Term::Elt);
        let id = Term::lam(Term::Var(0));
        assert_eq!(normalise(&id, &Ty::fun(Ty::Unit, Ty::Unit)).unwrap(), id);
    }

    #[test]
    fn only_functions_are_eta_expanded() {
        let id = Term::lam(Term::Var(0));
        let ty = Ty::fun(Ty::prod(Ty::Nat, Ty::Nat), Ty::prod(Ty::Nat, Ty::Nat));
        assert_eq!(normalise(&id, &ty).unwrap(), id);
        let ty = Ty::fun(Ty::fun(Ty::Nat, Ty::Nat), Ty::fun(Ty::Nat, Ty::Nat));
        assert_eq!(
            normalise(&id, &ty).unwrap(),
            Term::lams(2, Term::app(Term::Var(1), Term::Var(0)))
        );
    }

    #[test]
    fn recursion_on_variable_stays_neutral() {
        let t = Term::lam(Term::rec(
            Ty::Nat,
            Term::Var(0),
            Term::Nat(0),
            Term::succ(Term::Var(0)),
        ));
        let n = normalise(&t, &Ty::fun(Ty::Nat, Ty::Nat)).unwrap();
        assert_eq!(n.count_rec(), 1);
        assert_eq!(normalise(&n, &Ty::fun(Ty::Nat, Ty::Nat)).unwrap(), n);
    }

    #[test]
    fn open_terms_are_rejected() {
        assert!(normalise(&Term::Var(0), &Ty::Nat).is_err());
    }
}
