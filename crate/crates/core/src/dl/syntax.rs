//! Concept-expression syntax of the domain file.
//!
//! ```text
//! expr  := conj ("or" conj)*
//! conj  := unary ("and" unary)*
//! unary := "exists" role "." unary | "forall" role "." unary
//!        | "(" expr ")" | "Top" | Name
//! role  := "inv" "(" role ")" | "union" "(" role ("," role)* ")" | Name
//! ```

use super::concept::{ConceptExpr, RoleExpr};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    LParen,
    RParen,
    Dot,
    Comma,
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' => {
                chars.next();
                out.push(Tok::LParen);
            }
            ')' => {
                chars.next();
                out.push(Tok::RParen);
            }
            '.' => {
                chars.next();
                out.push(Tok::Dot);
            }
            ',' => {
                chars.next();
                out.push(Tok::Comma);
            }
            c if is_ident_char(c) => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if !is_ident_char(c) {
                        break;
                    }
                    s.push(c);
                    chars.next();
                }
                out.push(Tok::Ident(s));
            }
            other => return Err(format!("unexpected character '{other}'")),
        }
    }
    Ok(out)
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

pub(crate) fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.chars().all(is_ident_char)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<&'a Tok> {
        let t = self.toks.get(self.pos);
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: &Tok) -> Result<(), String> {
        match self.next() {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(format!("expected {want:?}, found {t:?}")),
            None => Err(format!("expected {want:?}, found end of input")),
        }
    }

    fn keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn expr(&mut self) -> Result<ConceptExpr, String> {
        let mut parts = vec![self.conj()?];
        while self.keyword("or") {
            self.pos += 1;
            parts.push(self.conj()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            ConceptExpr::Disjunction(parts)
        })
    }

    fn conj(&mut self) -> Result<ConceptExpr, String> {
        let mut parts = vec![self.unary()?];
        while self.keyword("and") {
            self.pos += 1;
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            ConceptExpr::Conjunction(parts)
        })
    }

    fn unary(&mut self) -> Result<ConceptExpr, String> {
        match self.next() {
            Some(Tok::Ident(kw)) if kw == "exists" || kw == "forall" => {
                let role = self.role()?;
                self.expect(&Tok::Dot)?;
                let filler = self.unary()?;
                Ok(if kw == "exists" {
                    ConceptExpr::exists(role, filler)
                } else {
                    ConceptExpr::forall(role, filler)
                })
            }
            Some(Tok::Ident(kw)) if kw == "and" || kw == "or" => {
                Err(format!("unexpected operator '{kw}'"))
            }
            Some(Tok::Ident(name)) if name == "Top" => Ok(ConceptExpr::Top),
            Some(Tok::Ident(name)) => Ok(ConceptExpr::Atomic(name.clone())),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            Some(t) => Err(format!("unexpected token {t:?}")),
            None => Err("unexpected end of expression".into()),
        }
    }

    fn role(&mut self) -> Result<RoleExpr, String> {
        match self.next() {
            Some(Tok::Ident(kw)) if kw == "inv" => {
                self.expect(&Tok::LParen)?;
                let r = self.role()?;
                self.expect(&Tok::RParen)?;
                Ok(r.inverse())
            }
            Some(Tok::Ident(kw)) if kw == "union" => {
                self.expect(&Tok::LParen)?;
                let mut parts = vec![self.role()?];
                while matches!(self.peek(), Some(Tok::Comma)) {
                    self.pos += 1;
                    parts.push(self.role()?);
                }
                self.expect(&Tok::RParen)?;
                Ok(RoleExpr::union(parts))
            }
            Some(Tok::Ident(name)) => Ok(RoleExpr::Atomic(name.clone())),
            Some(t) => Err(format!("expected role, found {t:?}")),
            None => Err("expected role, found end of input".into()),
        }
    }
}

pub(crate) fn parse_concept_tokens(toks: &[Tok]) -> Result<ConceptExpr, String> {
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != toks.len() {
        return Err(format!("trailing input after expression: {:?}", &toks[p.pos..]));
    }
    Ok(e)
}

/// Parses a concept expression written in domain-file syntax.
pub fn parse_concept(src: &str) -> Result<ConceptExpr, String> {
    parse_concept_tokens(&tokenize(src)?)
}

/// Parses a role expression written in domain-file syntax.
pub fn parse_role(src: &str) -> Result<RoleExpr, String> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks: &toks, pos: 0 };
    let r = p.role()?;
    if p.pos != toks.len() {
        return Err("trailing input after role".into());
    }
    Ok(r)
}
