use std::sync::Arc;

use super::MvPoly;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FqnElem};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(u64),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = cs[st..i].iter().collect();
            out.push(Tok::Num(t.parse().map_err(|_| Error::Parse(format!("bad integer {t}")))?));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    ctx: &'a Arc<FieldCtx>,
    nvars: usize,
    consts: &'a [(&'a str, FqnElem)],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MvPoly> {
        let mut p = self.term()?;
        loop {
            if self.eat('+') {
                p = &p + &self.term()?;
            } else if self.eat('-') {
                p = &p - &self.term()?;
            } else {
                return Ok(p);
            }
        }
    }

    fn term(&mut self) -> Result<MvPoly> {
        let mut p = self.unary()?;
        while self.eat('*') {
            p = &p * &self.unary()?;
        }
        Ok(p)
    }

    fn unary(&mut self) -> Result<MvPoly> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        let base = self.atom()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(k)) => {
                    self.pos += 1;
                    return Ok(base.pow(k as u32));
                }
                _ => return Err(Error::Parse("exponent must be an integer".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MvPoly> {
        let t = self.toks.get(self.pos).cloned().ok_or_else(|| Error::Parse("unexpected end of input".into()))?;
        self.pos += 1;
        match t {
            Tok::Num(k) => Ok(MvPoly::constant(self.ctx, self.nvars, self.ctx.from_int((k % self.ctx.p()) as i64))),
            Tok::Op('(') => {
                let p = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing )".into()));
                }
                Ok(p)
            }
            Tok::Ident(name) => {
                if let Some(&(_, c)) = self.consts.iter().find(|(n, _)| *n == name) {
                    return Ok(MvPoly::constant(self.ctx, self.nvars, c));
                }
                if let Some(idx) = name.strip_prefix('X').and_then(|s| s.parse::<usize>().ok()) {
                    if idx < self.nvars {
                        return Ok(MvPoly::var(self.ctx, self.nvars, idx));
                    }
                }
                Err(Error::Parse(format!("unknown symbol {name}")))
            }
            Tok::Op(c) => Err(Error::Parse(format!("unexpected {c:?}"))),
        }
    }
}

pub(super) fn parse(ctx: &Arc<FieldCtx>, nvars: usize, s: &str, consts: &[(&str, FqnElem)]) -> Result<MvPoly> {
    let mut p = Parser { toks: lex(s)?, pos: 0, ctx, nvars, consts };
    let r = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(r)
}
