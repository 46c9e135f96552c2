//! Seeded generators of random syntax, shared by the round-trip tests.
//!
//! Everything generated is well scoped: a term under `scope` binders only
//! mentions `Var(i)` with `i < scope`.

#![allow(dead_code)]

use mrx::kernel::syntax::{Term, Ty};
use mrx::logic::Proof;
use mrx::prop::Prop;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct SyntaxGen {
    rng: ChaCha8Rng,
}

impl SyntaxGen {
    pub fn new(seed: u64) -> SyntaxGen {
        SyntaxGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn leaf(&mut self, depth: usize) -> bool {
        depth == 0 || self.rng.gen_bool(0.3)
    }

    pub fn ty(&mut self, depth: usize, scope: usize) -> Ty {
        if self.leaf(depth) {
            return match self.rng.gen_range(0..6) {
                0 => Ty::Empty,
                1 => Ty::Unit,
                2 => Ty::Nat,
                3 => Ty::Bool,
                4 => Ty::Fin(self.rng.gen_range(1..5)),
                _ => Ty::holds(self.term(1, scope)),
            };
        }
        let d = depth - 1;
        match self.rng.gen_range(0..5) {
            0 => Ty::sum(self.ty(d, scope), self.ty(d, scope)),
            1 => Ty::prod(self.ty(d, scope), self.ty(d, scope)),
            2 => Ty::fun(self.ty(d, scope), self.ty(d, scope)),
            3 => Ty::pi(self.ty(d, scope), self.ty(d, scope + 1)),
            _ => Ty::sigma(self.ty(d, scope), self.ty(d, scope + 1)),
        }
    }

    pub fn term(&mut self, depth: usize, scope: usize) -> Term {
        if self.leaf(depth) {
            let pick = self.rng.gen_range(0..6);
            return match pick {
                0 if scope > 0 => Term::Var(self.rng.gen_range(0..scope)),
                1 => Term::Nat(self.rng.gen_range(0..12)),
                2 => Term::Fin(self.rng.gen_range(0..4)),
                3 => Term::Bool(self.rng.gen_bool(0.5)),
                _ => Term::Elt,
            };
        }
        let d = depth - 1;
        let sub = |g: &mut SyntaxGen, extra: usize| g.term(d, scope + extra);
        match self.rng.gen_range(0..17) {
            0 => Term::lam(sub(self, 1)),
            1 => Term::app(sub(self, 0), sub(self, 0)),
            2 => Term::pair(sub(self, 0), sub(self, 0)),
            3 => Term::fst(sub(self, 0)),
            4 => Term::snd(sub(self, 0)),
            5 => Term::inl(sub(self, 0)),
            6 => Term::inr(sub(self, 0)),
            7 => Term::case(sub(self, 0), sub(self, 1), sub(self, 1)),
            8 => Term::succ(sub(self, 0)),
            9 => Term::add(sub(self, 0), sub(self, 0)),
            10 => Term::eq(sub(self, 0), sub(self, 0)),
            11 => Term::le(sub(self, 0), sub(self, 0)),
            12 => Term::And(sub(self, 0).into(), sub(self, 0).into()),
            13 => Term::Or(sub(self, 0).into(), sub(self, 0).into()),
            14 => Term::Not(sub(self, 0).into()),
            15 => Term::absurd(sub(self, 0)),
            _ => {
                let motive = self.ty(d.min(2), scope + 1);
                Term::rec(motive, sub(self, 0), sub(self, 0), sub(self, 2))
            }
        }
    }

    pub fn prop(&mut self, depth: usize, scope: usize) -> Prop {
        if self.leaf(depth) {
            return match self.rng.gen_range(0..3) {
                0 => Prop::Absurd,
                1 => Prop::atom(self.ty(1, scope)),
                _ => Prop::holds(self.term(2, scope)),
            };
        }
        let d = depth - 1;
        match self.rng.gen_range(0..5) {
            0 => Prop::and(self.prop(d, scope), self.prop(d, scope)),
            1 => Prop::or(self.prop(d, scope), self.prop(d, scope)),
            2 => Prop::implies(self.prop(d, scope), self.prop(d, scope)),
            3 => Prop::forall(self.ty(1, scope), self.prop(d, scope + 1)),
            _ => Prop::exists(self.ty(1, scope), self.prop(d, scope + 1)),
        }
    }

    /// A random proof tree. It is well scoped but need not check.
    pub fn proof(&mut self, depth: usize, scope: usize) -> Proof {
        if self.leaf(depth) {
            let p = self.prop(2, scope);
            let q = self.prop(2, scope);
            return match self.rng.gen_range(0..12) {
                0 => Proof::Identity(p),
                1 => Proof::InhabitedAtom {
                    antecedent: p,
                    ty: self.ty(1, scope),
                    witness: self.term(2, scope),
                },
                2 => Proof::AndElimL(p, q),
                3 => Proof::AndElimR(p, q),
                4 => Proof::WeakAbsurd(self.ty(1, scope)),
                5 => Proof::OrIntroL(p, q),
                6 => Proof::OrIntroR(p, q),
                7 => Proof::exists_intro(
                    self.ty(1, scope),
                    self.prop(2, scope + 1),
                    self.term(2, scope),
                ),
                8 => Proof::FullAbsurd(p),
                9 => Proof::Induction(self.prop(2, scope + 1)),
                10 => Proof::Choice {
                    domain: self.ty(1, scope),
                    codomain: self.ty(1, scope),
                    family: self.prop(2, scope + 2),
                    default: self.rng.gen_bool(0.5).then(|| self.term(1, scope)),
                },
                _ => {
                    let width = self.rng.gen_range(0..3);
                    let prefix = (0..width).map(|j| self.ty(1, scope + j)).collect();
                    Proof::TrivialTransfer {
                        antecedent: p,
                        prefix,
                        hypothesis: self.prop(2, scope + width),
                        conclusion: Prop::atom(self.ty(1, scope + width)),
                        evidence: self.term(2, scope),
                    }
                }
            };
        }
        let d = depth - 1;
        match self.rng.gen_range(0..9) {
            0 => Proof::cut(self.proof(d, scope), self.proof(d, scope)),
            1 => Proof::and_intro(self.proof(d, scope), self.proof(d, scope)),
            2 => Proof::or_elim(self.proof(d, scope), self.proof(d, scope)),
            3 => Proof::imp_intro(self.proof(d, scope)),
            4 => Proof::imp_elim(self.proof(d, scope)),
            5 => Proof::forall_intro(self.ty(1, scope), self.proof(d, scope + 1)),
            6 => Proof::forall_elim(self.proof(d, scope), self.term(2, scope)),
            7 => Proof::exists_elim(self.ty(1, scope), self.proof(d, scope + 1)),
            _ => Proof::exists_inv(self.proof(d, scope), self.term(2, scope)),
        }
    }

    /// A random closed program of the listing syntax.
    pub fn program(&mut self, depth: usize) -> Term {
        let body = self.term(depth, 1);
        if self.rng.gen_bool(0.8) {
            Term::lam(body)
        } else {
            self.term(depth, 0)
        }
    }

    pub fn choose<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        items.choose(&mut self.rng).expect("non-empty")
    }
}
