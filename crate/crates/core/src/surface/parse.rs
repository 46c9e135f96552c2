//! Parser from S-expressions to types, terms, propositions, proofs and
//! source files.

use std::collections::HashMap;

use crate::kernel::enumerate::check_value;
use crate::kernel::eval::eval;
use crate::kernel::syntax::{Binders, Term, Ty};
use crate::kernel::value::Env;
use crate::logic::{Proof, Sequent};
use crate::prop::Prop;
use crate::realisability::Variant;

use super::sexp::{read_all, read_one, Pos, Sexp};
use super::SurfaceError;

type Result<T> = std::result::Result<T, SurfaceError>;

/// Words that cannot be used as names.
pub const KEYWORDS: &[&str] = &[
    "e", "elt", "zero", "true", "false", "succ", "lam", "app", "pair", "fst", "snd", "inl", "inr",
    "case", "rec", "idx", "not", "absurd", "empty", "unit", "nat", "bool", "fin", "sum", "prod",
    "fun", "pi", "sigma", "holds", "mr", "mrp", "bot", "atom", "and", "or", "imp", "forall",
    "exists", "use", "val",
];

#[derive(Clone, Debug, PartialEq)]
pub struct PropDef {
    pub params: Vec<String>,
    /// Open in the parameters; the last parameter is index 0.
    pub body: Prop,
}

impl PropDef {
    pub fn instantiate(&self, args: &[Term]) -> Prop {
        let n = args.len();
        self.body.map_free(&|i| {
            if i < n {
                args[n - 1 - i].clone()
            } else {
                Term::Var(i - n)
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Decl {
    Type {
        name: String,
        ty: Ty,
    },
    Term {
        name: String,
        ty: Ty,
        term: Term,
    },
    Prop {
        name: String,
        def: PropDef,
    },
    Proof {
        name: String,
        expected: Option<Sequent>,
        proof: Proof,
        pos: Pos,
    },
    Extract {
        goal: String,
        proof: String,
        /// Truth evidence for the antecedent, used to build the trivial
        /// realiser that the program is applied to.
        assume: Option<Term>,
        pos: Pos,
    },
}

/// Named declarations visible to later declarations.
#[derive(Clone, Debug, Default)]
pub struct Definitions {
    pub types: HashMap<String, Ty>,
    pub terms: HashMap<String, (Ty, Term)>,
    pub props: HashMap<String, PropDef>,
    pub proofs: HashMap<String, Proof>,
    /// Declaration order of proposition definitions.
    pub prop_order: Vec<String>,
}

impl Definitions {
    fn is_defined(&self, name: &str) -> bool {
        self.types.contains_key(name)
            || self.terms.contains_key(name)
            || self.props.contains_key(name)
            || self.proofs.contains_key(name)
    }
}

#[derive(Clone, Debug, Default)]
pub struct SourceFile {
    pub decls: Vec<Decl>,
    pub defs: Definitions,
}

impl SourceFile {
    pub fn proofs(&self) -> impl Iterator<Item = (&str, &Proof, Option<&Sequent>, Pos)> {
        self.decls.iter().filter_map(|d| match d {
            Decl::Proof {
                name,
                expected,
                proof,
                pos,
            } => Some((name.as_str(), proof, expected.as_ref(), *pos)),
            _ => None,
        })
    }

    pub fn extractions(&self) -> impl Iterator<Item = (&str, &str, Option<&Term>, Pos)> {
        self.decls.iter().filter_map(|d| match d {
            Decl::Extract {
                goal,
                proof,
                assume,
                pos,
            } => Some((goal.as_str(), proof.as_str(), assume.as_ref(), *pos)),
            _ => None,
        })
    }
}

/// Parse a whole source file.
pub fn parse(text: &str) -> Result<SourceFile> {
    let mut file = SourceFile::default();
    for s in read_all(text)? {
        let decl = Parser::new(&file.defs).decl(&s)?;
        register(&mut file.defs, &decl);
        file.decls.push(decl);
    }
    Ok(file)
}

fn register(defs: &mut Definitions, decl: &Decl) {
    match decl {
        Decl::Type { name, ty } => {
            defs.types.insert(name.clone(), ty.clone());
        }
        Decl::Term { name, ty, term } => {
            defs.terms.insert(name.clone(), (ty.clone(), term.clone()));
        }
        Decl::Prop { name, def } => {
            defs.props.insert(name.clone(), def.clone());
            defs.prop_order.push(name.clone());
        }
        Decl::Proof { name, proof, .. } => {
            defs.proofs.insert(name.clone(), proof.clone());
        }
        Decl::Extract { .. } => {}
    }
}

pub fn parse_ty(text: &str) -> Result<Ty> {
    Parser::new(&Definitions::default()).ty(&read_one(text)?)
}

pub fn parse_term(text: &str) -> Result<Term> {
    Parser::new(&Definitions::default()).term(&read_one(text)?)
}

pub fn parse_prop(text: &str) -> Result<Prop> {
    Parser::new(&Definitions::default()).prop(&read_one(text)?)
}

pub fn parse_proof(text: &str) -> Result<Proof> {
    Parser::new(&Definitions::default()).proof(&read_one(text)?)
}

/// Parse against earlier definitions.
pub fn parse_prop_with(defs: &Definitions, text: &str) -> Result<Prop> {
    Parser::new(defs).prop(&read_one(text)?)
}

pub fn parse_term_with(defs: &Definitions, text: &str) -> Result<Term> {
    Parser::new(defs).term(&read_one(text)?)
}

pub struct Parser<'d> {
    defs: &'d Definitions,
    /// Bound names, innermost last.
    scope: Vec<String>,
}

fn expected<T>(s: &Sexp, what: &str) -> Result<T> {
    Err(SurfaceError::syntax(s.pos(), what))
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '\'' | '?' | '!'))
}

fn nat_literal(s: &str) -> Option<u64> {
    if s.chars().all(|c| c.is_ascii_digit()) {
        s.parse().ok()
    } else {
        None
    }
}

impl<'d> Parser<'d> {
    pub fn new(defs: &'d Definitions) -> Parser<'d> {
        Parser {
            defs,
            scope: Vec::new(),
        }
    }

    fn name(&self, s: &Sexp) -> Result<String> {
        match s.as_atom() {
            Some(a) if is_identifier(a) && !KEYWORDS.contains(&a) => Ok(a.to_string()),
            _ => expected(s, "a name"),
        }
    }

    fn fresh_name(&self, s: &Sexp) -> Result<String> {
        let name = self.name(s)?;
        if self.defs.is_defined(&name) {
            return Err(SurfaceError::DuplicateName { pos: s.pos(), name });
        }
        Ok(name)
    }

    fn with_binder<T>(
        &mut self,
        name: String,
        f: impl FnOnce(&mut Self) -> Result<T>,
    ) -> Result<T> {
        self.scope.push(name);
        let out = f(self);
        self.scope.pop();
        out
    }

    /// `(lam x BODY)`
    fn binder<'s>(&self, s: &'s Sexp) -> Result<(String, &'s Sexp)> {
        match s {
            Sexp::List(items, _) if items.len() == 3 && items[0].as_atom() == Some("lam") => {
                Ok((self.name(&items[1])?, &items[2]))
            }
            _ => expected(s, "a binder `(lam x ...)`"),
        }
    }

    fn lookup(&self, name: &str) -> Option<usize> {
        self.scope.iter().rev().position(|n| n == name)
    }

    fn arity(&self, s: &Sexp, items: &[Sexp], n: usize) -> Result<()> {
        if items.len() == n + 1 {
            Ok(())
        } else {
            let head = items[0].as_atom().unwrap_or("form");
            expected(s, &format!("`{head}` with {n} argument(s)"))
        }
    }

    pub fn decl(&mut self, s: &Sexp) -> Result<Decl> {
        let Sexp::List(items, pos) = s else {
            return expected(s, "a declaration");
        };
        let head = items.first().and_then(Sexp::as_atom).unwrap_or("");
        match (head, items.len()) {
            ("deftype", 3) => Ok(Decl::Type {
                name: self.fresh_name(&items[1])?,
                ty: self.ty(&items[2])?,
            }),
            ("defterm", 4) => {
                let name = self.fresh_name(&items[1])?;
                let ty = self.ty(&items[2])?;
                let term = self.term(&items[3])?;
                let ok = term.is_closed()
                    && ty.is_closed()
                    && eval(&term, &Env::new()).is_ok_and(|v| check_value(&v, &ty));
                if !ok {
                    return Err(SurfaceError::Invalid {
                        pos: items[3].pos(),
                        reason: format!("`{name}` is not a closed element of its type"),
                    });
                }
                Ok(Decl::Term { name, ty, term })
            }
            ("defprop", 3) | ("defprop", 4) => {
                let name = self.fresh_name(&items[1])?;
                let params = if items.len() == 4 {
                    match &items[2] {
                        Sexp::List(ps, _) => ps
                            .iter()
                            .map(|p| self.name(p))
                            .collect::<Result<Vec<_>>>()?,
                        other => return expected(other, "a parameter list"),
                    }
                } else {
                    Vec::new()
                };
                let saved = std::mem::replace(&mut self.scope, params.clone());
                let body = self.prop(items.last().expect("length checked"));
                self.scope = saved;
                Ok(Decl::Prop {
                    name,
                    def: PropDef {
                        params,
                        body: body?,
                    },
                })
            }
            ("proof", 3) | ("proof", 5) => {
                let name = self.fresh_name(&items[1])?;
                let expected = if items.len() == 5 {
                    Some(Sequent::new(self.prop(&items[2])?, self.prop(&items[3])?))
                } else {
                    None
                };
                let proof = self.proof(items.last().expect("length checked"))?;
                Ok(Decl::Proof {
                    name,
                    expected,
                    proof,
                    pos: *pos,
                })
            }
            ("extract", 3) | ("extract", 4) => {
                let goal = self.fresh_name(&items[1])?;
                let proof = self.name(&items[2])?;
                if !self.defs.proofs.contains_key(&proof) {
                    return Err(SurfaceError::UnboundName {
                        pos: items[2].pos(),
                        name: proof,
                    });
                }
                let assume = match items.get(3) {
                    None => None,
                    Some(Sexp::List(a, _)) if a.len() == 2 && a[0].as_atom() == Some("assume") => {
                        Some(self.term(&a[1])?)
                    }
                    Some(other) => return expected(other, "`(assume TERM)`"),
                };
                Ok(Decl::Extract {
                    goal,
                    proof,
                    assume,
                    pos: *pos,
                })
            }
            _ => expected(
                s,
                "a declaration (deftype, defterm, defprop, proof or extract)",
            ),
        }
    }

    pub fn ty(&mut self, s: &Sexp) -> Result<Ty> {
        match s {
            Sexp::Atom(a, pos) => match a.as_str() {
                "empty" => Ok(Ty::Empty),
                "unit" => Ok(Ty::Unit),
                "nat" => Ok(Ty::Nat),
                "bool" => Ok(Ty::Bool),
                name => match self.defs.types.get(name) {
                    Some(t) => Ok(t.clone()),
                    None if is_identifier(name) => Err(SurfaceError::UnboundName {
                        pos: *pos,
                        name: name.to_string(),
                    }),
                    None => expected(s, "a type"),
                },
            },
            Sexp::List(items, _) => {
                let head = items.first().and_then(Sexp::as_atom).unwrap_or("");
                match head {
                    "fin" => {
                        self.arity(s, items, 1)?;
                        match items[1].as_atom().and_then(nat_literal) {
                            Some(n) if n <= u32::MAX as u64 => Ok(Ty::Fin(n as u32)),
                            _ => expected(&items[1], "a size"),
                        }
                    }
                    "sum" | "prod" | "fun" => {
                        self.arity(s, items, 2)?;
                        let (x, y) = (self.ty(&items[1])?, self.ty(&items[2])?);
                        Ok(match head {
                            "sum" => Ty::sum(x, y),
                            "prod" => Ty::prod(x, y),
                            _ => Ty::fun(x, y),
                        })
                    }
                    "pi" | "sigma" => {
                        self.arity(s, items, 2)?;
                        let dom = self.ty(&items[1])?;
                        let (x, body) = self.binder(&items[2])?;
                        let cod = self.with_binder(x, |p| p.ty(body))?;
                        Ok(if head == "pi" {
                            Ty::pi(dom, cod)
                        } else {
                            Ty::sigma(dom, cod)
                        })
                    }
                    "holds" => {
                        self.arity(s, items, 1)?;
                        Ok(Ty::holds(self.term(&items[1])?))
                    }
                    "mr" | "mrp" => {
                        self.arity(s, items, 2)?;
                        let prop = self.prop(&items[1])?;
                        let realiser = self.term(&items[2])?;
                        Ok(Ty::Mr {
                            prop: prop.into(),
                            realiser: realiser.into(),
                            variant: if head == "mr" {
                                Variant::Mr
                            } else {
                                Variant::MrPrime
                            },
                        })
                    }
                    _ => expected(s, "a type"),
                }
            }
        }
    }

    pub fn term(&mut self, s: &Sexp) -> Result<Term> {
        match s {
            Sexp::Atom(a, pos) => {
                if let Some(n) = nat_literal(a) {
                    return Ok(Term::Nat(n));
                }
                if let Some(i) = a.strip_prefix('#').and_then(nat_literal) {
                    return match u32::try_from(i) {
                        Ok(i) => Ok(Term::Fin(i)),
                        Err(_) => expected(s, "a finite index"),
                    };
                }
                match a.as_str() {
                    "e" | "elt" => Ok(Term::Elt),
                    "zero" => Ok(Term::Nat(0)),
                    "true" => Ok(Term::Bool(true)),
                    "false" => Ok(Term::Bool(false)),
                    name if is_identifier(name) => {
                        if let Some(i) = self.lookup(name) {
                            Ok(Term::Var(i))
                        } else if let Some((_, t)) = self.defs.terms.get(name) {
                            Ok(t.clone())
                        } else {
                            Err(SurfaceError::UnboundName {
                                pos: *pos,
                                name: name.to_string(),
                            })
                        }
                    }
                    _ => expected(s, "a term"),
                }
            }
            Sexp::List(items, _) => {
                let Some(head) = items.first().and_then(Sexp::as_atom) else {
                    return expected(s, "a term");
                };
                let unary = |p: &mut Self, f: fn(Term) -> Term| -> Result<Term> {
                    p.arity(s, items, 1)?;
                    Ok(f(p.term(&items[1])?))
                };
                let binary = |p: &mut Self, f: fn(Term, Term) -> Term| -> Result<Term> {
                    p.arity(s, items, 2)?;
                    Ok(f(p.term(&items[1])?, p.term(&items[2])?))
                };
                match head {
                    "succ" => unary(self, Term::succ),
                    "fst" => unary(self, Term::fst),
                    "snd" => unary(self, Term::snd),
                    "inl" => unary(self, Term::inl),
                    "inr" => unary(self, Term::inr),
                    "not" => unary(self, |t| Term::Not(t.into())),
                    "absurd" => unary(self, Term::absurd),
                    "pair" => binary(self, Term::pair),
                    "+" => binary(self, Term::add),
                    "=" => binary(self, Term::eq),
                    "<=" => binary(self, Term::le),
                    "&&" => binary(self, |x, y| Term::And(x.into(), y.into())),
                    "||" => binary(self, |x, y| Term::Or(x.into(), y.into())),
                    "lam" => {
                        let (x, body) = self.binder(s)?;
                        Ok(Term::lam(self.with_binder(x, |p| p.term(body))?))
                    }
                    "app" => {
                        if items.len() < 3 {
                            return expected(s, "`app` with a function and arguments");
                        }
                        let mut f = self.term(&items[1])?;
                        for a in &items[2..] {
                            f = Term::app(f, self.term(a)?);
                        }
                        Ok(f)
                    }
                    "case" => {
                        self.arity(s, items, 3)?;
                        let scrutinee = self.term(&items[1])?;
                        let l = self.branch(&items[2])?;
                        let r = self.branch(&items[3])?;
                        Ok(Term::case(scrutinee, l, r))
                    }
                    "rec" => {
                        self.arity(s, items, 4)?;
                        let (z, motive) = self.binder(&items[1])?;
                        let motive = self.with_binder(z, |p| p.ty(motive))?;
                        let scrutinee = self.term(&items[2])?;
                        let base = self.term(&items[3])?;
                        let (k, inner) = self.binder(&items[4])?;
                        let (acc, step) = self.binder(inner)?;
                        let step = self.with_binder(k, |p| p.with_binder(acc, |p| p.term(step)))?;
                        Ok(Term::rec(motive, scrutinee, base, step))
                    }
                    "idx" => {
                        self.arity(s, items, 1)?;
                        match items[1].as_atom().and_then(nat_literal) {
                            Some(i) => Ok(Term::Var(i as usize)),
                            None => expected(&items[1], "an index"),
                        }
                    }
                    name if self.defs.terms.contains_key(name) && self.lookup(name).is_none() => {
                        let mut f = self.defs.terms[name].1.clone();
                        for a in &items[1..] {
                            f = Term::app(f, self.term(a)?);
                        }
                        Ok(f)
                    }
                    name if self.lookup(name).is_some() => {
                        let mut f = Term::Var(self.lookup(name).expect("bound"));
                        for a in &items[1..] {
                            f = Term::app(f, self.term(a)?);
                        }
                        Ok(f)
                    }
                    name if is_identifier(name) && !KEYWORDS.contains(&name) => {
                        Err(SurfaceError::UnboundName {
                            pos: items[0].pos(),
                            name: name.to_string(),
                        })
                    }
                    _ => expected(s, "a term"),
                }
            }
        }
    }

    /// `(x BODY)` in a case expression.
    fn branch(&mut self, s: &Sexp) -> Result<Term> {
        match s {
            Sexp::List(items, _) if items.len() == 2 => {
                let x = self.name(&items[0])?;
                self.with_binder(x, |p| p.term(&items[1]))
            }
            _ => expected(s, "a case branch `(x TERM)`"),
        }
    }

    pub fn prop(&mut self, s: &Sexp) -> Result<Prop> {
        match s {
            Sexp::Atom(a, pos) => match a.as_str() {
                "bot" => Ok(Prop::Absurd),
                name => match self.defs.props.get(name) {
                    Some(def) if def.params.is_empty() => Ok(def.body.clone()),
                    Some(_) => expected(s, &format!("arguments for `{name}`")),
                    None if is_identifier(name) => Err(SurfaceError::UnboundName {
                        pos: *pos,
                        name: name.to_string(),
                    }),
                    None => expected(s, "a proposition"),
                },
            },
            Sexp::List(items, _) => {
                let Some(head) = items.first().and_then(Sexp::as_atom) else {
                    return expected(s, "a proposition");
                };
                match head {
                    "atom" => {
                        self.arity(s, items, 1)?;
                        Ok(Prop::atom(self.ty(&items[1])?))
                    }
                    "and" | "or" | "imp" => {
                        self.arity(s, items, 2)?;
                        let (a, b) = (self.prop(&items[1])?, self.prop(&items[2])?);
                        Ok(match head {
                            "and" => Prop::and(a, b),
                            "or" => Prop::or(a, b),
                            _ => Prop::implies(a, b),
                        })
                    }
                    "forall" | "exists" => {
                        self.arity(s, items, 2)?;
                        let dom = self.ty(&items[1])?;
                        let (x, body) = self.binder(&items[2])?;
                        let body = self.with_binder(x, |p| p.prop(body))?;
                        Ok(if head == "forall" {
                            Prop::forall(dom, body)
                        } else {
                            Prop::exists(dom, body)
                        })
                    }
                    name => match self.defs.props.get(name) {
                        Some(def) => {
                            if def.params.len() != items.len() - 1 {
                                return expected(
                                    s,
                                    &format!("`{name}` with {} argument(s)", def.params.len()),
                                );
                            }
                            let args = items[1..]
                                .iter()
                                .map(|a| self.term(a))
                                .collect::<Result<Vec<_>>>()?;
                            Ok(def.instantiate(&args))
                        }
                        None if is_identifier(name) && !KEYWORDS.contains(&name) => {
                            Err(SurfaceError::UnboundName {
                                pos: items[0].pos(),
                                name: name.to_string(),
                            })
                        }
                        None => expected(s, "a proposition"),
                    },
                }
            }
        }
    }

    fn sub(&mut self, s: &Sexp) -> Result<std::sync::Arc<Proof>> {
        Ok(std::sync::Arc::new(self.proof(s)?))
    }

    pub fn proof(&mut self, s: &Sexp) -> Result<Proof> {
        let Sexp::List(items, _) = s else {
            return expected(s, "a proof");
        };
        let Some(head) = items.first().and_then(Sexp::as_atom) else {
            return expected(s, "a proof");
        };
        let two_props = |p: &mut Self| -> Result<(Prop, Prop)> {
            p.arity(s, items, 2)?;
            Ok((p.prop(&items[1])?, p.prop(&items[2])?))
        };
        Ok(match head {
            "id" => {
                self.arity(s, items, 1)?;
                Proof::Identity(self.prop(&items[1])?)
            }
            "cut" | "and-i" | "or-e" => {
                self.arity(s, items, 2)?;
                let (p, q) = (self.sub(&items[1])?, self.sub(&items[2])?);
                match head {
                    "cut" => Proof::Cut(p, q),
                    "and-i" => Proof::AndIntro(p, q),
                    _ => Proof::OrElim(p, q),
                }
            }
            "inhabited" => {
                self.arity(s, items, 3)?;
                Proof::InhabitedAtom {
                    antecedent: self.prop(&items[1])?,
                    ty: self.ty(&items[2])?,
                    witness: self.term(&items[3])?,
                }
            }
            "and-l" => {
                let (a, b) = two_props(self)?;
                Proof::AndElimL(a, b)
            }
            "and-r" => {
                let (a, b) = two_props(self)?;
                Proof::AndElimR(a, b)
            }
            "or-l" => {
                let (a, b) = two_props(self)?;
                Proof::OrIntroL(a, b)
            }
            "or-r" => {
                let (a, b) = two_props(self)?;
                Proof::OrIntroR(a, b)
            }
            "weak-absurd" => {
                self.arity(s, items, 1)?;
                Proof::WeakAbsurd(self.ty(&items[1])?)
            }
            "full-absurd" => {
                self.arity(s, items, 1)?;
                Proof::FullAbsurd(self.prop(&items[1])?)
            }
            "imp-i" | "imp-e" => {
                self.arity(s, items, 1)?;
                let p = self.sub(&items[1])?;
                if head == "imp-i" {
                    Proof::ImpIntro(p)
                } else {
                    Proof::ImpElim(p)
                }
            }
            "forall-i" | "exists-e" => {
                self.arity(s, items, 2)?;
                let domain = self.ty(&items[1])?;
                let (x, body) = self.binder(&items[2])?;
                let body = std::sync::Arc::new(self.with_binder(x, |p| p.proof(body))?);
                if head == "forall-i" {
                    Proof::ForallIntro { domain, body }
                } else {
                    Proof::ExistsElim { domain, body }
                }
            }
            "forall-e" | "exists-inv" => {
                self.arity(s, items, 2)?;
                let premise = self.sub(&items[1])?;
                let term = self.term(&items[2])?;
                if head == "forall-e" {
                    Proof::ForallElim { premise, term }
                } else {
                    Proof::ExistsInv { premise, term }
                }
            }
            "exists-i" => {
                self.arity(s, items, 3)?;
                let domain = self.ty(&items[1])?;
                let (x, body) = self.binder(&items[2])?;
                let family = self.with_binder(x, |p| p.prop(body))?;
                Proof::ExistsIntro {
                    domain,
                    family,
                    term: self.term(&items[3])?,
                }
            }
            "induction" => {
                self.arity(s, items, 1)?;
                let (x, body) = self.binder(&items[1])?;
                Proof::Induction(self.with_binder(x, |p| p.prop(body))?)
            }
            "choice" => {
                if items.len() != 4 && items.len() != 5 {
                    return expected(s, "`choice` with 3 or 4 arguments");
                }
                let domain = self.ty(&items[1])?;
                let codomain = self.ty(&items[2])?;
                let (x, inner) = self.binder(&items[3])?;
                let (y, body) = self.binder(inner)?;
                let family = self.with_binder(x, |p| p.with_binder(y, |p| p.prop(body)))?;
                let default = match items.get(4) {
                    Some(b) => Some(self.term(b)?),
                    None => None,
                };
                Proof::Choice {
                    domain,
                    codomain,
                    family,
                    default,
                }
            }
            "transfer" => {
                self.arity(s, items, 5)?;
                let antecedent = self.prop(&items[1])?;
                let Sexp::List(binders, _) = &items[2] else {
                    return expected(&items[2], "a binder list `((x T) ...)`");
                };
                let depth = self.scope.len();
                let mut prefix = Vec::new();
                let result = (|| {
                    for b in binders {
                        match b {
                            Sexp::List(xt, _) if xt.len() == 2 => {
                                let x = self.name(&xt[0])?;
                                prefix.push(self.ty(&xt[1])?);
                                self.scope.push(x);
                            }
                            _ => return expected(b, "a binder `(x T)`"),
                        }
                    }
                    Ok((self.prop(&items[3])?, self.prop(&items[4])?))
                })();
                self.scope.truncate(depth);
                let (hypothesis, conclusion) = result?;
                Proof::TrivialTransfer {
                    antecedent,
                    prefix,
                    hypothesis,
                    conclusion,
                    evidence: self.term(&items[5])?,
                }
            }
            "use" => {
                self.arity(s, items, 1)?;
                let name = self.name(&items[1])?;
                match self.defs.proofs.get(&name) {
                    Some(p) => p.clone(),
                    None => {
                        return Err(SurfaceError::UnboundName {
                            pos: items[1].pos(),
                            name,
                        })
                    }
                }
            }
            _ => return expected(&items[0], "a proof rule"),
        })
    }
}
