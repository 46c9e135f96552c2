//! Program listings: `λs.s`, `<a; b>`, `q.2.1`, `case t of {...}`, `rec`,
//! `zero`, `succ zero`, `e`. Listings parse back to the same term.

use crate::kernel::syntax::{Term, Ty};
use crate::kernel::value::Value;

use super::print::binder_name;
use super::sexp::Pos;
use super::SurfaceError;

type Result<T> = std::result::Result<T, SurfaceError>;

const RESERVED: &[&str] = &[
    "e", "zero", "succ", "inl", "inr", "case", "of", "rec", "not", "absurd", "true", "false",
    "Nat", "Unit", "Empty", "Bool", "Fin", "Holds",
];

// Term precedence levels.
const OPEN: u8 = 0;
const OR: u8 = 1;
const AND: u8 = 2;
const CMP: u8 = 3;
const ADD: u8 = 4;
const APP: u8 = 5;
const POSTFIX: u8 = 6;
const ATOM: u8 = 7;

/// Render a program in listing style.
pub fn print_program(t: &Term) -> String {
    Listing::at(0).term(t, OPEN)
}

/// Render a value for output, numerals as digits: `<0; <1; e>>`.
pub fn print_value(v: &Value) -> String {
    Listing {
        depth: 0,
        digits: true,
    }
    .term(&Term::quote(v), OPEN)
}

/// Render a type in listing style.
pub fn print_listing_ty(t: &Ty) -> String {
    Listing::at(0).ty(t, 0)
}

pub(crate) struct Listing {
    depth: usize,
    digits: bool,
}

fn paren(s: String, own: u8, need: u8) -> String {
    if own < need {
        format!("({s})")
    } else {
        s
    }
}

impl Listing {
    /// A printer for syntax living under `depth` binders.
    pub(crate) fn at(depth: usize) -> Listing {
        Listing {
            depth,
            digits: false,
        }
    }

    pub(crate) fn show_ty(&mut self, t: &Ty) -> String {
        self.ty(t, 0)
    }

    pub(crate) fn show_term(&mut self, t: &Term) -> String {
        self.term(t, OPEN)
    }

    fn bound<T>(&mut self, n: usize, f: impl FnOnce(&mut Self) -> T) -> T {
        self.depth += n;
        let out = f(self);
        self.depth -= n;
        out
    }

    fn term(&mut self, t: &Term, need: u8) -> String {
        use Term::*;
        let (s, own) = match t {
            Var(i) if *i < self.depth => (binder_name(self.depth - 1 - i), ATOM),
            Var(i) => (format!("?{}", i - self.depth), ATOM),
            Lam(b) => {
                let x = binder_name(self.depth);
                let b = self.bound(1, |p| p.term(b, OPEN));
                (format!("λ{x}.{b}"), OPEN)
            }
            Case(s, l, r) => {
                let s = self.term(s, OPEN);
                let x = binder_name(self.depth);
                let l = self.bound(1, |p| p.term(l, OPEN));
                let r = self.bound(1, |p| p.term(r, OPEN));
                (
                    format!("case {s} of {{inl {x} -> {l}; inr {x} -> {r}}}"),
                    OPEN,
                )
            }
            Or(x, y) => (format!("{} || {}", self.term(x, OR), self.term(y, AND)), OR),
            And(x, y) => (
                format!("{} && {}", self.term(x, AND), self.term(y, CMP)),
                AND,
            ),
            Eq(x, y) => (
                format!("{} = {}", self.term(x, ADD), self.term(y, ADD)),
                CMP,
            ),
            Le(x, y) => (
                format!("{} <= {}", self.term(x, ADD), self.term(y, ADD)),
                CMP,
            ),
            Add(x, y) => (
                format!("{} + {}", self.term(x, ADD), self.term(y, APP)),
                ADD,
            ),
            App(f, x) => (
                format!("{} {}", self.term(f, APP), self.term(x, POSTFIX)),
                APP,
            ),
            Succ(x) => {
                let arg = match &**x {
                    Nat(_) => format!("({})", self.term(x, OPEN)),
                    _ => self.term(x, POSTFIX),
                };
                (format!("succ {arg}"), APP)
            }
            Inl(x) => (format!("inl {}", self.term(x, POSTFIX)), APP),
            Inr(x) => (format!("inr {}", self.term(x, POSTFIX)), APP),
            Not(x) => (format!("not {}", self.term(x, POSTFIX)), APP),
            Absurd(x) => (format!("absurd {}", self.term(x, POSTFIX)), APP),
            Rec {
                motive,
                scrutinee,
                base,
                step,
            } => {
                let z = binder_name(self.depth);
                let m = self.bound(1, |p| p.ty(motive, 0));
                let n = self.term(scrutinee, POSTFIX);
                let b = self.term(base, POSTFIX);
                let k = binder_name(self.depth);
                let a = binder_name(self.depth + 1);
                let s = self.bound(2, |p| p.term(step, OPEN));
                (format!("rec (λ{z}.{m}) {n} {b} (λ{k}.λ{a}.{s})"), APP)
            }
            Fst(x) => (format!("{}.1", self.term(x, POSTFIX)), POSTFIX),
            Snd(x) => (format!("{}.2", self.term(x, POSTFIX)), POSTFIX),
            Pair(x, y) => (
                format!("<{}; {}>", self.term(x, OPEN), self.term(y, OPEN)),
                ATOM,
            ),
            Elt => ("e".into(), ATOM),
            Nat(n) if self.digits => (n.to_string(), ATOM),
            Nat(0) => ("zero".into(), ATOM),
            Nat(1) => ("succ zero".into(), APP),
            Nat(n) => (n.to_string(), ATOM),
            Fin(i) => (format!("#{i}"), ATOM),
            Bool(b) => (b.to_string(), ATOM),
            Val(v) => (format!("⟪{v:?}⟫"), ATOM),
        };
        paren(s, own, need)
    }

    fn ty(&mut self, t: &Ty, need: u8) -> String {
        let (s, own) = match t {
            Ty::Empty => ("Empty".into(), 3),
            Ty::Unit => ("Unit".into(), 3),
            Ty::Nat => ("Nat".into(), 3),
            Ty::Bool => ("Bool".into(), 3),
            Ty::Fin(n) => (format!("Fin {n}"), 3),
            Ty::Holds(c) => (format!("Holds({})", self.term(c, OPEN)), 3),
            Ty::Prod(x, y) => (format!("{} × {}", self.ty(x, 3), self.ty(y, 2)), 2),
            Ty::Sum(x, y) => (format!("{} + {}", self.ty(x, 2), self.ty(y, 1)), 1),
            Ty::Fun(x, y) => (format!("{} → {}", self.ty(x, 1), self.ty(y, 0)), 0),
            Ty::Pi(d, c) | Ty::Sigma(d, c) => {
                let q = if matches!(t, Ty::Pi(..)) { "Π" } else { "Σ" };
                let d = self.ty(d, 1);
                let x = binder_name(self.depth);
                let c = self.bound(1, |p| p.ty(c, 0));
                (format!("{q} {x}:{d}. {c}"), 0)
            }
            Ty::Mr { .. } => (format!("⟪{}⟫", super::print::print_ty(t)), 3),
        };
        paren(s, own, need)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Lam,
    Dot,
    LParen,
    RParen,
    LAngle,
    RAngle,
    Semi,
    LBrace,
    RBrace,
    Plus,
    Eq,
    Le,
    AndAnd,
    OrOr,
    Arrow,
    Times,
    Colon,
    Pi,
    Sigma,
    Num(u64),
    FinLit(u32),
    Free(usize),
    Ident(String),
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    let mut pos = Pos { line: 1, col: 1 };
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let advance = |pos: &mut Pos, c: char| {
        if c == '\n' {
            pos.line += 1;
            pos.col = 1;
        } else {
            pos.col += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let start = pos;
        if c.is_whitespace() {
            advance(&mut pos, c);
            i += 1;
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let (tok, len) = match (c, two.as_str()) {
            (_, "<=") => (Tok::Le, 2),
            (_, "&&") => (Tok::AndAnd, 2),
            (_, "||") => (Tok::OrOr, 2),
            (_, "->") => (Tok::Arrow, 2),
            ('λ' | '\\', _) => (Tok::Lam, 1),
            ('.', _) => (Tok::Dot, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('<', _) => (Tok::LAngle, 1),
            ('>', _) => (Tok::RAngle, 1),
            (';', _) => (Tok::Semi, 1),
            ('{', _) => (Tok::LBrace, 1),
            ('}', _) => (Tok::RBrace, 1),
            ('+', _) => (Tok::Plus, 1),
            ('=', _) => (Tok::Eq, 1),
            ('→', _) => (Tok::Arrow, 1),
            ('×' | '*', _) => (Tok::Times, 1),
            (':', _) => (Tok::Colon, 1),
            ('Π', _) => (Tok::Pi, 1),
            ('Σ', _) => (Tok::Sigma, 1),
            ('#' | '?', _) | ('0'..='9', _) => {
                let skip = usize::from(!c.is_ascii_digit());
                let digits: String = chars[i + skip..]
                    .iter()
                    .take_while(|c| c.is_ascii_digit())
                    .collect();
                let bad = || SurfaceError::syntax(start, "a number");
                let n: u64 = digits.parse().map_err(|_| bad())?;
                let tok = match c {
                    '#' => Tok::FinLit(u32::try_from(n).map_err(|_| bad())?),
                    '?' => Tok::Free(n as usize),
                    _ => Tok::Num(n),
                };
                (tok, skip + digits.len())
            }
            (c, _) if c.is_alphabetic() || c == '_' => {
                let word: String = chars[i..]
                    .iter()
                    .take_while(|c| c.is_alphanumeric() || **c == '_' || **c == '\'')
                    .collect();
                let len = word.chars().count();
                (Tok::Ident(word), len)
            }
            _ => return Err(SurfaceError::syntax(start, "a listing token")),
        };
        for _ in 0..len {
            advance(&mut pos, chars[i]);
            i += 1;
        }
        out.push((tok, start));
    }
    Ok(out)
}

/// Parse a program listing.
pub fn parse_program(text: &str) -> Result<Term> {
    let mut p = ListingParser::new(text)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parse a type listing.
pub fn parse_listing_ty(text: &str) -> Result<Ty> {
    let mut p = ListingParser::new(text)?;
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

struct ListingParser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
    scope: Vec<String>,
}

impl ListingParser {
    fn new(text: &str) -> Result<ListingParser> {
        let toks = lex(text)?;
        let end = text
            .lines()
            .enumerate()
            .last()
            .map_or(Pos { line: 1, col: 1 }, |(n, l)| Pos {
                line: n + 1,
                col: l.chars().count() + 1,
            });
        Ok(ListingParser {
            toks,
            at: 0,
            end,
            scope: Vec::new(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn fail<T>(&self, what: &str) -> Result<T> {
        Err(SurfaceError::syntax(self.pos(), what))
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.fail(what)
        }
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == w)
    }

    fn finish(&self) -> Result<()> {
        if self.at < self.toks.len() {
            return self.fail("end of input");
        }
        Ok(())
    }

    fn binder(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) if !RESERVED.contains(&s.as_str()) => {
                let s = s.clone();
                self.at += 1;
                Ok(s)
            }
            _ => self.fail("a variable name"),
        }
    }

    fn with<T>(&mut self, names: &[String], f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        let depth = self.scope.len();
        self.scope.extend(names.iter().cloned());
        let out = f(self);
        self.scope.truncate(depth);
        out
    }

    fn term(&mut self) -> Result<Term> {
        if self.eat(&Tok::Lam) {
            let x = self.binder()?;
            self.expect(Tok::Dot, "`.` after the bound variable")?;
            let body = self.with(&[x], |p| p.term())?;
            return Ok(Term::lam(body));
        }
        if self.is_word("case") {
            self.at += 1;
            let s = self.term()?;
            self.word("of")?;
            self.expect(Tok::LBrace, "`{`")?;
            self.word("inl")?;
            let x = self.binder()?;
            self.expect(Tok::Arrow, "`->`")?;
            let l = self.with(&[x], |p| p.term())?;
            self.expect(Tok::Semi, "`;`")?;
            self.word("inr")?;
            let y = self.binder()?;
            self.expect(Tok::Arrow, "`->`")?;
            let r = self.with(&[y], |p| p.term())?;
            self.expect(Tok::RBrace, "`}`")?;
            return Ok(Term::case(s, l, r));
        }
        self.or()
    }

    fn word(&mut self, w: &str) -> Result<()> {
        if self.is_word(w) {
            self.at += 1;
            Ok(())
        } else {
            self.fail(&format!("`{w}`"))
        }
    }

    fn or(&mut self) -> Result<Term> {
        let mut t = self.and()?;
        while self.eat(&Tok::OrOr) {
            t = Term::Or(t.into(), self.and()?.into());
        }
        Ok(t)
    }

    fn and(&mut self) -> Result<Term> {
        let mut t = self.cmp()?;
        while self.eat(&Tok::AndAnd) {
            t = Term::And(t.into(), self.cmp()?.into());
        }
        Ok(t)
    }

    fn cmp(&mut self) -> Result<Term> {
        let t = self.add()?;
        if self.eat(&Tok::Eq) {
            return Ok(Term::eq(t, self.add()?));
        }
        if self.eat(&Tok::Le) {
            return Ok(Term::le(t, self.add()?));
        }
        Ok(t)
    }

    fn add(&mut self) -> Result<Term> {
        let mut t = self.app()?;
        while self.eat(&Tok::Plus) {
            t = Term::add(t, self.app()?);
        }
        Ok(t)
    }

    fn starts_argument(&self) -> bool {
        match self.peek() {
            Some(Tok::LParen | Tok::LAngle | Tok::Num(_) | Tok::FinLit(_) | Tok::Free(_)) => true,
            Some(Tok::Ident(s)) => !matches!(
                s.as_str(),
                "succ" | "inl" | "inr" | "not" | "absurd" | "rec" | "case" | "of"
            ),
            _ => false,
        }
    }

    fn app(&mut self) -> Result<Term> {
        let mut f = self.head()?;
        while self.starts_argument() {
            f = Term::app(f, self.postfix()?);
        }
        Ok(f)
    }

    /// A prefix keyword form or a postfix expression.
    fn head(&mut self) -> Result<Term> {
        let word = match self.peek() {
            Some(Tok::Ident(s)) => s.clone(),
            _ => return self.postfix(),
        };
        let unary: Option<fn(Term) -> Term> = match word.as_str() {
            "inl" => Some(Term::inl),
            "inr" => Some(Term::inr),
            "not" => Some(|t| Term::Not(t.into())),
            "absurd" => Some(Term::absurd),
            _ => None,
        };
        if let Some(f) = unary {
            self.at += 1;
            return Ok(f(self.postfix()?));
        }
        match word.as_str() {
            "succ" => {
                self.at += 1;
                let bare = matches!(self.peek(), Some(Tok::Num(_))) || self.is_word("zero");
                let arg = self.postfix()?;
                Ok(match arg {
                    Term::Nat(n) if bare => Term::Nat(n + 1),
                    arg => Term::succ(arg),
                })
            }
            "rec" => {
                self.at += 1;
                self.expect(Tok::LParen, "`(` before the motive")?;
                self.expect(Tok::Lam, "`λ`")?;
                let z = self.binder()?;
                self.expect(Tok::Dot, "`.`")?;
                let motive = self.with(&[z], |p| p.ty())?;
                self.expect(Tok::RParen, "`)` after the motive")?;
                let n = self.postfix()?;
                let base = self.postfix()?;
                self.expect(Tok::LParen, "`(` before the step")?;
                self.expect(Tok::Lam, "`λ`")?;
                let k = self.binder()?;
                self.expect(Tok::Dot, "`.`")?;
                self.expect(Tok::Lam, "`λ`")?;
                let a = self.binder()?;
                self.expect(Tok::Dot, "`.`")?;
                let step = self.with(&[k, a], |p| p.term())?;
                self.expect(Tok::RParen, "`)` after the step")?;
                Ok(Term::rec(motive, n, base, step))
            }
            _ => self.postfix(),
        }
    }

    fn postfix(&mut self) -> Result<Term> {
        let mut t = self.atom()?;
        while self.peek() == Some(&Tok::Dot) {
            match self.toks.get(self.at + 1).map(|(t, _)| t) {
                Some(Tok::Num(1)) => t = Term::fst(t),
                Some(Tok::Num(2)) => t = Term::snd(t),
                _ => {
                    self.at += 1;
                    return self.fail("`1` or `2` after `.`");
                }
            }
            self.at += 2;
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term> {
        let Some(tok) = self.peek().cloned() else {
            return self.fail("a term");
        };
        let t = match tok {
            Tok::LParen => {
                self.at += 1;
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                return Ok(t);
            }
            Tok::LAngle => {
                self.at += 1;
                let x = self.term()?;
                self.expect(Tok::Semi, "`;` in a pair")?;
                let y = self.term()?;
                self.expect(Tok::RAngle, "`>` closing a pair")?;
                return Ok(Term::pair(x, y));
            }
            Tok::Num(n) => Term::Nat(n),
            Tok::FinLit(i) => Term::Fin(i),
            Tok::Free(i) => Term::Var(i + self.scope.len()),
            Tok::Ident(w) => match w.as_str() {
                "e" => Term::Elt,
                "zero" => Term::Nat(0),
                "true" => Term::Bool(true),
                "false" => Term::Bool(false),
                name => match self.scope.iter().rev().position(|n| n == name) {
                    Some(i) => Term::Var(i),
                    None => {
                        return Err(SurfaceError::UnboundName {
                            pos: self.pos(),
                            name: name.to_string(),
                        })
                    }
                },
            },
            _ => return self.fail("a term"),
        };
        self.at += 1;
        Ok(t)
    }

    fn ty(&mut self) -> Result<Ty> {
        if matches!(self.peek(), Some(Tok::Pi | Tok::Sigma)) {
            let pi = self.peek() == Some(&Tok::Pi);
            self.at += 1;
            let x = self.binder()?;
            self.expect(Tok::Colon, "`:`")?;
            let d = self.ty_sum()?;
            self.expect(Tok::Dot, "`.`")?;
            let c = self.with(&[x], |p| p.ty())?;
            return Ok(if pi { Ty::pi(d, c) } else { Ty::sigma(d, c) });
        }
        let d = self.ty_sum()?;
        if self.eat(&Tok::Arrow) {
            return Ok(Ty::fun(d, self.ty()?));
        }
        Ok(d)
    }

    fn ty_sum(&mut self) -> Result<Ty> {
        let d = self.ty_prod()?;
        if self.eat(&Tok::Plus) {
            return Ok(Ty::sum(d, self.ty_sum()?));
        }
        Ok(d)
    }

    fn ty_prod(&mut self) -> Result<Ty> {
        let d = self.ty_atom()?;
        if self.eat(&Tok::Times) {
            return Ok(Ty::prod(d, self.ty_prod()?));
        }
        Ok(d)
    }

    fn ty_atom(&mut self) -> Result<Ty> {
        if self.eat(&Tok::LParen) {
            let t = self.ty()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(t);
        }
        let Some(Tok::Ident(w)) = self.peek().cloned() else {
            return self.fail("a type");
        };
        self.at += 1;
        Ok(match w.as_str() {
            "Empty" => Ty::Empty,
            "Unit" => Ty::Unit,
            "Nat" => Ty::Nat,
            "Bool" => Ty::Bool,
            "Fin" => match self.peek() {
                Some(Tok::Num(n)) if *n <= u32::MAX as u64 => {
                    let n = *n as u32;
                    self.at += 1;
                    Ty::Fin(n)
                }
                _ => return self.fail("a size after `Fin`"),
            },
            "Holds" => {
                self.expect(Tok::LParen, "`(`")?;
                let c = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ty::holds(c)
            }
            _ => {
                self.at -= 1;
                return self.fail("a type");
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listing_vocabulary() {
        let t = Term::pair(
            Term::Nat(0),
            Term::pair(Term::Nat(1), Term::pair(Term::Elt, Term::Elt)),
        );
        assert_eq!(print_program(&t), "<zero; <succ zero; <e; e>>>");
        assert_eq!(parse_program("<zero; <succ zero; <e; e>>>").unwrap(), t);
        assert_eq!(print_program(&Term::lam(Term::Var(0))), "λs.s");
    }

    #[test]
    fn projections_and_case() {
        let q = Term::fst(Term::snd(Term::Var(0)));
        let t = Term::lam(Term::case(
            Term::Var(0),
            Term::succ(q.clone()),
            Term::Nat(7),
        ));
        let s = print_program(&t);
        assert_eq!(s, "λs.case s of {inl x -> succ x.2.1; inr x -> 7}");
        assert_eq!(parse_program(&s).unwrap(), t);
    }

    #[test]
    fn succ_of_literal_is_kept_apart() {
        for t in [
            Term::succ(Term::Nat(0)),
            Term::succ(Term::Nat(1)),
            Term::Nat(1),
            Term::Nat(2),
        ] {
            assert_eq!(parse_program(&print_program(&t)).unwrap(), t);
        }
    }

    #[test]
    fn rec_and_types() {
        let motive = Ty::sigma(Ty::Nat, Ty::prod(Ty::Nat, Ty::Unit));
        let t = Term::lam(Term::rec(
            motive,
            Term::Var(0),
            Term::pair(Term::Nat(0), Term::pair(Term::Nat(1), Term::Elt)),
            Term::pair(
                Term::fst(Term::snd(Term::Var(0))),
                Term::add(Term::fst(Term::Var(0)), Term::Var(1)),
            ),
        ));
        let s = print_program(&t);
        assert_eq!(parse_program(&s).unwrap(), t, "{s}");
        let ty = Ty::fun(
            Ty::sum(Ty::Fin(2), Ty::Unit),
            Ty::pi(Ty::Nat, Ty::holds(Term::le(Term::Var(0), Term::Nat(3)))),
        );
        assert_eq!(parse_listing_ty(&print_listing_ty(&ty)).unwrap(), ty);
    }

    #[test]
    fn free_variables_round_trip() {
        let t = Term::lam(Term::app(Term::Var(1), Term::Var(0)));
        assert_eq!(print_program(&t), "λs.?0 s");
        assert_eq!(parse_program("λs.?0 s").unwrap(), t);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_program("<zero; e"),
            Err(SurfaceError::Syntax { .. })
        ));
        assert!(matches!(
            parse_program("λs. t"),
            Err(SurfaceError::UnboundName { .. })
        ));
    }
}
