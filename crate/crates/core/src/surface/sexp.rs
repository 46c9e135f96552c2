//! S-expression reader with source positions.

use std::fmt;

use super::SurfaceError;

/// 1-based line and column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    pub fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(s, _) => Some(s),
            Sexp::List(..) => None,
        }
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl Reader<'_> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<Option<Sexp>, SurfaceError> {
        self.skip_trivia();
        let start = self.pos;
        match self.chars.peek() {
            None => Ok(None),
            Some(')') => Err(SurfaceError::syntax(start, "an expression, found `)`")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => {
                            return Err(SurfaceError::syntax(self.pos, "`)` before end of input"))
                        }
                        Some(')') => {
                            self.bump();
                            return Ok(Some(Sexp::List(items, start)));
                        }
                        _ => items.push(self.read()?.expect("input remains")),
                    }
                }
            }
            Some(_) => {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                Ok(Some(Sexp::Atom(s, start)))
            }
        }
    }
}

/// Read every top-level expression of `text`.
pub fn read_all(text: &str) -> Result<Vec<Sexp>, SurfaceError> {
    let mut reader = Reader {
        chars: text.chars().peekable(),
        pos: Pos { line: 1, col: 1 },
    };
    let mut out = Vec::new();
    while let Some(s) = reader.read()? {
        out.push(s);
    }
    Ok(out)
}

/// Read exactly one expression.
pub fn read_one(text: &str) -> Result<Sexp, SurfaceError> {
    let mut all = read_all(text)?;
    match all.len() {
        1 => Ok(all.remove(0)),
        0 => Err(SurfaceError::syntax(
            Pos { line: 1, col: 1 },
            "an expression",
        )),
        _ => Err(SurfaceError::syntax(all[1].pos(), "end of input")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_and_comments() {
        let all = read_all("; comment\n(a (b c))\n  d").unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!(all[0].pos(), Pos { line: 2, col: 1 });
        assert_eq!(all[1], Sexp::Atom("d".into(), Pos { line: 3, col: 3 }));
    }

    #[test]
    fn unbalanced() {
        let err = read_all("(a (b)").unwrap_err();
        assert!(matches!(
            err,
            SurfaceError::Syntax {
                pos: Pos { line: 1, col: 7 },
                ..
            }
        ));
        let err = read_all(")").unwrap_err();
        assert!(matches!(
            err,
            SurfaceError::Syntax {
                pos: Pos { line: 1, col: 1 },
                ..
            }
        ));
    }
}
