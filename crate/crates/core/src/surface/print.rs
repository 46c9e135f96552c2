//! S-expression printer. Its output parses back to the same syntax tree.

use crate::kernel::syntax::{Term, Ty};
use crate::logic::Proof;
use crate::prop::Prop;
use crate::realisability::Variant;

/// Name of the variable bound at binder depth `level`.
pub(crate) fn binder_name(level: usize) -> String {
    const BASE: [&str; 8] = ["s", "x", "y", "z", "u", "v", "w", "k"];
    let b = BASE[level % BASE.len()];
    if level < BASE.len() {
        b.to_string()
    } else {
        format!("{b}{}", level / BASE.len())
    }
}

pub fn print_ty(t: &Ty) -> String {
    let mut p = Printer::default();
    p.ty(t)
}

pub fn print_term(t: &Term) -> String {
    let mut p = Printer::default();
    p.term(t)
}

pub fn print_prop(s: &Prop) -> String {
    let mut p = Printer::default();
    p.prop(s)
}

pub fn print_proof(proof: &Proof) -> String {
    let mut p = Printer::default();
    p.proof(proof)
}

#[derive(Default)]
struct Printer {
    depth: usize,
}

impl Printer {
    fn bind<T>(&mut self, n: usize, f: impl FnOnce(&mut Self) -> T) -> T {
        self.depth += n;
        let out = f(self);
        self.depth -= n;
        out
    }

    fn lam_ty(&mut self, body: &Ty) -> String {
        let x = binder_name(self.depth);
        let b = self.bind(1, |p| p.ty(body));
        format!("(lam {x} {b})")
    }

    fn lam_prop(&mut self, body: &Prop) -> String {
        let x = binder_name(self.depth);
        let b = self.bind(1, |p| p.prop(body));
        format!("(lam {x} {b})")
    }

    fn ty(&mut self, t: &Ty) -> String {
        match t {
            Ty::Empty => "empty".into(),
            Ty::Unit => "unit".into(),
            Ty::Nat => "nat".into(),
            Ty::Bool => "bool".into(),
            Ty::Fin(n) => format!("(fin {n})"),
            Ty::Sum(x, y) => format!("(sum {} {})", self.ty(x), self.ty(y)),
            Ty::Prod(x, y) => format!("(prod {} {})", self.ty(x), self.ty(y)),
            Ty::Fun(x, y) => format!("(fun {} {})", self.ty(x), self.ty(y)),
            Ty::Pi(d, c) => format!("(pi {} {})", self.ty(d), self.lam_ty(c)),
            Ty::Sigma(d, c) => format!("(sigma {} {})", self.ty(d), self.lam_ty(c)),
            Ty::Holds(c) => format!("(holds {})", self.term(c)),
            Ty::Mr {
                prop,
                realiser,
                variant,
            } => {
                let head = match variant {
                    Variant::MrPrime => "mrp",
                    _ => "mr",
                };
                format!("({head} {} {})", self.prop(prop), self.term(realiser))
            }
        }
    }

    fn term(&mut self, t: &Term) -> String {
        use Term::*;
        match t {
            Var(i) if *i < self.depth => binder_name(self.depth - 1 - i),
            Var(i) => format!("(idx {i})"),
            Lam(b) => {
                let x = binder_name(self.depth);
                let b = self.bind(1, |p| p.term(b));
                format!("(lam {x} {b})")
            }
            App(..) => {
                let mut args = Vec::new();
                let mut f = t;
                while let App(g, a) = f {
                    args.push(a);
                    f = g;
                }
                let mut out = format!("(app {}", self.term(f));
                for a in args.iter().rev() {
                    out.push(' ');
                    out.push_str(&self.term(a));
                }
                out.push(')');
                out
            }
            Pair(x, y) => format!("(pair {} {})", self.term(x), self.term(y)),
            Fst(x) => format!("(fst {})", self.term(x)),
            Snd(x) => format!("(snd {})", self.term(x)),
            Inl(x) => format!("(inl {})", self.term(x)),
            Inr(x) => format!("(inr {})", self.term(x)),
            Case(s, l, r) => {
                let s = self.term(s);
                let x = binder_name(self.depth);
                let l = self.bind(1, |p| p.term(l));
                let r = self.bind(1, |p| p.term(r));
                format!("(case {s} ({x} {l}) ({x} {r}))")
            }
            Elt => "e".into(),
            Nat(n) => n.to_string(),
            Succ(x) => format!("(succ {})", self.term(x)),
            Add(x, y) => format!("(+ {} {})", self.term(x), self.term(y)),
            Rec {
                motive,
                scrutinee,
                base,
                step,
            } => {
                let m = self.lam_ty(motive);
                let s = self.term(scrutinee);
                let b = self.term(base);
                let k = binder_name(self.depth);
                let acc = binder_name(self.depth + 1);
                let st = self.bind(2, |p| p.term(step));
                format!("(rec {m} {s} {b} (lam {k} (lam {acc} {st})))")
            }
            Fin(i) => format!("#{i}"),
            Bool(b) => b.to_string(),
            Eq(x, y) => format!("(= {} {})", self.term(x), self.term(y)),
            Le(x, y) => format!("(<= {} {})", self.term(x), self.term(y)),
            Not(x) => format!("(not {})", self.term(x)),
            And(x, y) => format!("(&& {} {})", self.term(x), self.term(y)),
            Or(x, y) => format!("(|| {} {})", self.term(x), self.term(y)),
            Absurd(x) => format!("(absurd {})", self.term(x)),
            Val(v) => format!("(val {v:?})"),
        }
    }

    fn prop(&mut self, s: &Prop) -> String {
        match s {
            Prop::Atom(t) => format!("(atom {})", self.ty(t)),
            Prop::Absurd => "bot".into(),
            Prop::And(a, b) => format!("(and {} {})", self.prop(a), self.prop(b)),
            Prop::Or(a, b) => format!("(or {} {})", self.prop(a), self.prop(b)),
            Prop::Implies(a, b) => format!("(imp {} {})", self.prop(a), self.prop(b)),
            Prop::Forall(d, p) => format!("(forall {} {})", self.ty(d), self.lam_prop(p)),
            Prop::Exists(d, p) => format!("(exists {} {})", self.ty(d), self.lam_prop(p)),
        }
    }

    fn proof(&mut self, proof: &Proof) -> String {
        let two = |p: &mut Self, head: &str, a: &Prop, b: &Prop| {
            format!("({head} {} {})", p.prop(a), p.prop(b))
        };
        match proof {
            Proof::Identity(a) => format!("(id {})", self.prop(a)),
            Proof::Cut(p, q) => format!("(cut {} {})", self.proof(p), self.proof(q)),
            Proof::InhabitedAtom {
                antecedent,
                ty,
                witness,
            } => format!(
                "(inhabited {} {} {})",
                self.prop(antecedent),
                self.ty(ty),
                self.term(witness)
            ),
            Proof::AndElimL(a, b) => two(self, "and-l", a, b),
            Proof::AndElimR(a, b) => two(self, "and-r", a, b),
            Proof::AndIntro(p, q) => format!("(and-i {} {})", self.proof(p), self.proof(q)),
            Proof::WeakAbsurd(t) => format!("(weak-absurd {})", self.ty(t)),
            Proof::OrIntroL(a, b) => two(self, "or-l", a, b),
            Proof::OrIntroR(a, b) => two(self, "or-r", a, b),
            Proof::OrElim(p, q) => format!("(or-e {} {})", self.proof(p), self.proof(q)),
            Proof::ImpIntro(p) => format!("(imp-i {})", self.proof(p)),
            Proof::ImpElim(p) => format!("(imp-e {})", self.proof(p)),
            Proof::ForallIntro { domain, body } | Proof::ExistsElim { domain, body } => {
                let head = proof.rule_name();
                let d = self.ty(domain);
                let x = binder_name(self.depth);
                let b = self.bind(1, |p| p.proof(body));
                format!("({head} {d} (lam {x} {b}))")
            }
            Proof::ForallElim { premise, term } | Proof::ExistsInv { premise, term } => {
                format!(
                    "({} {} {})",
                    proof.rule_name(),
                    self.proof(premise),
                    self.term(term)
                )
            }
            Proof::ExistsIntro {
                domain,
                family,
                term,
            } => format!(
                "(exists-i {} {} {})",
                self.ty(domain),
                self.lam_prop(family),
                self.term(term)
            ),
            Proof::FullAbsurd(a) => format!("(full-absurd {})", self.prop(a)),
            Proof::Induction(family) => format!("(induction {})", self.lam_prop(family)),
            Proof::Choice {
                domain,
                codomain,
                family,
                default,
            } => {
                let d = self.ty(domain);
                let c = self.ty(codomain);
                let x = binder_name(self.depth);
                let y = binder_name(self.depth + 1);
                let f = self.bind(2, |p| p.prop(family));
                let b0 = match default {
                    Some(t) => format!(" {}", self.term(t)),
                    None => String::new(),
                };
                format!("(choice {d} {c} (lam {x} (lam {y} {f})){b0})")
            }
            Proof::TrivialTransfer {
                antecedent,
                prefix,
                hypothesis,
                conclusion,
                evidence,
            } => {
                let a = self.prop(antecedent);
                let ev = self.term(evidence);
                let mut binders = Vec::new();
                let start = self.depth;
                for ty in prefix {
                    binders.push(format!("({} {})", binder_name(self.depth), self.ty(ty)));
                    self.depth += 1;
                }
                let q = self.prop(hypothesis);
                let c = self.prop(conclusion);
                self.depth = start;
                format!("(transfer {a} ({}) {q} {c} {ev})", binders.join(" "))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parse::{parse_proof, parse_prop, parse_term};

    #[test]
    fn simple_prints() {
        assert_eq!(print_prop(&Prop::Absurd), "bot");
        let t = Term::lam(Term::pair(Term::Var(0), Term::Var(1)));
        assert_eq!(print_term(&t), "(lam s (pair s (idx 1)))");
    }

    #[test]
    fn round_trips() {
        for src in [
            "(forall (fin 2) (lam s (exists nat (lam x (atom (holds (<= s x)))))))",
            "(imp bot (or (atom unit) (atom (sigma nat (lam s (holds (= s 3)))))))",
        ] {
            let p = parse_prop(src).unwrap();
            assert_eq!(print_prop(&p), src);
        }
        let t = "(rec (lam s (prod nat nat)) 5 (pair 0 1) (lam s (lam x (pair (snd x) (+ (fst x) (snd x))))))";
        assert_eq!(print_term(&parse_term(t).unwrap()), t);
        let p = "(transfer bot ((s nat) (x (fin 3))) (atom unit) (atom (holds (<= x s))) (lam s (lam x (lam y e))))";
        assert_eq!(print_proof(&parse_proof(p).unwrap()), p);
    }
}
