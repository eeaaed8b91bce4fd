//! Parser for polynomial and tensor expressions.
//!
//! ```text
//! expr    := sign? term (('+' | '-') term)*
//! term    := factor ('*' factor)*
//! factor  := atom ('^' INT)*
//! atom    := INT ('/' INT)? | IDENT | '(' expr ')' | '[' expr ',' expr (';' expr)? ']'
//! tensor  := sign? tterm (('+' | '-') tterm)*
//! tterm   := term ('⊗' | '@') term
//! ```
//! `[a, b]` is `ab - ba` and `[a, b; q]` is `ab - q ba`. Identifiers resolve to
//! generators first, then to named scalars.

use std::collections::HashMap;

use crate::error::{CoreError, Result};
use crate::field::{Fe, Field};
use crate::word::NcPoly;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Semi,
    Tensor,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => { out.push(Tok::Plus); i += 1 }
            '-' | '−' => { out.push(Tok::Minus); i += 1 }
            '*' | '·' => { out.push(Tok::Star); i += 1 }
            '^' => { out.push(Tok::Caret); i += 1 }
            '/' => { out.push(Tok::Slash); i += 1 }
            '(' => { out.push(Tok::LParen); i += 1 }
            ')' => { out.push(Tok::RParen); i += 1 }
            '[' => { out.push(Tok::LBrack); i += 1 }
            ']' => { out.push(Tok::RBrack); i += 1 }
            ',' => { out.push(Tok::Comma); i += 1 }
            ';' => { out.push(Tok::Semi); i += 1 }
            '⊗' | '@' => { out.push(Tok::Tensor); i += 1 }
            d if d.is_ascii_digit() => {
                let st = i;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
                let txt: String = cs[st..i].iter().collect();
                out.push(Tok::Num(txt.parse().map_err(|_| CoreError::Parse(format!("bad integer {txt}")))?));
            }
            a if a.is_alphabetic() || a == '_' => {
                let st = i;
                while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_' || cs[i] == '\'') {
                    i += 1;
                }
                out.push(Tok::Ident(cs[st..i].iter().collect()));
            }
            other => return Err(CoreError::Parse(format!("unexpected character '{other}' in \"{s}\""))),
        }
    }
    Ok(out)
}

/// Name resolution for the parser.
pub struct Scope<'a> {
    pub field: &'a Field,
    pub generators: &'a [String],
    pub scalars: &'a HashMap<String, Fe>,
}

struct Parser<'a, 'b> {
    toks: Vec<Tok>,
    pos: usize,
    scope: &'b Scope<'a>,
    src: &'b str,
}

impl<'a, 'b> Parser<'a, 'b> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }
    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }
    fn err(&self, msg: &str) -> CoreError {
        CoreError::Parse(format!("{msg} at token {} in \"{}\"", self.pos, self.src))
    }
    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.next() == Some(t.clone()) {
            Ok(())
        } else {
            Err(self.err(&format!("expected {t:?}")))
        }
    }

    fn expr(&mut self) -> Result<NcPoly> {
        let f = self.scope.field;
        let mut neg = false;
        match self.peek() {
            Some(Tok::Minus) => { self.pos += 1; neg = true }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term()?;
        if neg {
            acc = acc.scale(f, f.neg(Fe::ONE));
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => { self.pos += 1; let t = self.term()?; acc = acc.add(f, &t) }
                Some(Tok::Minus) => { self.pos += 1; let t = self.term()?; acc = acc.sub(f, &t) }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<NcPoly> {
        let f = self.scope.field;
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let x = self.factor()?;
            acc = acc.mul(f, &x);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<NcPoly> {
        let f = self.scope.field;
        let mut a = self.atom()?;
        while self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let neg = if self.peek() == Some(&Tok::Minus) { self.pos += 1; true } else { false };
            match self.next() {
                Some(Tok::Num(n)) => {
                    if neg {
                        // only scalars may be inverted
                        let s = a.as_scalar().filter(|s| !s.is_zero()).ok_or_else(|| self.err("negative power of a non-scalar"))?;
                        a = NcPoly::constant(f.pow(s, -n));
                    } else {
                        a = a.pow(f, n as u32);
                    }
                }
                _ => return Err(self.err("expected exponent")),
            }
        }
        Ok(a)
    }

    fn atom(&mut self) -> Result<NcPoly> {
        let f = self.scope.field;
        match self.next() {
            Some(Tok::Num(n)) => {
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    match self.next() {
                        Some(Tok::Num(d)) => Ok(NcPoly::constant(f.from_frac(n, d)?)),
                        _ => Err(self.err("expected denominator")),
                    }
                } else {
                    Ok(NcPoly::constant(f.from_i64(n)))
                }
            }
            Some(Tok::Ident(name)) => {
                if let Some(i) = self.scope.generators.iter().position(|g| *g == name) {
                    Ok(NcPoly::letter(i as u16))
                } else if let Some(&c) = self.scope.scalars.get(&name) {
                    Ok(NcPoly::constant(c))
                } else {
                    Err(self.err(&format!("unknown name '{name}'")))
                }
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::LBrack) => {
                let a = self.expr()?;
                self.expect(Tok::Comma)?;
                let b = self.expr()?;
                let q = if self.peek() == Some(&Tok::Semi) {
                    self.pos += 1;
                    self.expr()?.as_scalar().ok_or_else(|| self.err("q-commutator parameter must be a scalar"))?
                } else {
                    Fe::ONE
                };
                self.expect(Tok::RBrack)?;
                Ok(NcPoly::q_commutator(f, &a, &b, q))
            }
            _ => Err(self.err("expected a number, name, '(' or '['")),
        }
    }

    fn tensor(&mut self) -> Result<Vec<(NcPoly, NcPoly)>> {
        let f = self.scope.field;
        let mut out = Vec::new();
        let mut sign = Fe::ONE;
        match self.peek() {
            Some(Tok::Minus) => { self.pos += 1; sign = f.neg(Fe::ONE) }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        loop {
            let a = self.term()?;
            self.expect(Tok::Tensor)?;
            let b = self.term()?;
            out.push((a.scale(f, sign), b));
            match self.peek() {
                Some(Tok::Plus) => { self.pos += 1; sign = Fe::ONE }
                Some(Tok::Minus) => { self.pos += 1; sign = f.neg(Fe::ONE) }
                None => return Ok(out),
                _ => return Err(self.err("expected '+' or '-' between tensor terms")),
            }
        }
    }
}

pub fn parse_poly(src: &str, scope: &Scope) -> Result<NcPoly> {
    let mut p = Parser { toks: lex(src)?, pos: 0, scope, src };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Parse `a ⊗ b + ...` into a list of simple tensors.
pub fn parse_tensor(src: &str, scope: &Scope) -> Result<Vec<(NcPoly, NcPoly)>> {
    let mut p = Parser { toks: lex(src)?, pos: 0, scope, src };
    p.tensor()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Word;

    #[test]
    fn parses_jordan_relation() {
        let f = Field::prime(3).unwrap();
        let gens = vec!["x".to_string(), "y".to_string()];
        let scalars = HashMap::new();
        let sc = Scope { field: &f, generators: &gens, scalars: &scalars };
        let r = parse_poly("y*x - x*y + 1/2*x^2", &sc).unwrap();
        assert_eq!(r.coeff(&Word::from_slice(&[1, 0])), Fe(1));
        assert_eq!(r.coeff(&Word::from_slice(&[0, 1])), Fe(2));
        assert_eq!(r.coeff(&Word::from_slice(&[0, 0])), Fe(2));
        let c = parse_poly("[y, x] + 1/2*x^2", &sc).unwrap();
        assert_eq!(c, r);
    }

    #[test]
    fn parses_tensor() {
        let f = Field::prime(3).unwrap();
        let gens = vec!["x".to_string(), "g".to_string()];
        let scalars = HashMap::new();
        let sc = Scope { field: &f, generators: &gens, scalars: &scalars };
        let t = parse_tensor("x ⊗ 1 + g ⊗ x", &sc).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[1].0, NcPoly::letter(1));
        assert!(parse_tensor("x ⊗ 1 +", &sc).is_err());
        assert!(parse_poly("x + z", &sc).is_err());
    }

    #[test]
    fn scalars_and_q_commutators() {
        let f = Field::prime(5).unwrap();
        let gens = vec!["a".to_string(), "b".to_string()];
        let mut scalars = HashMap::new();
        scalars.insert("q".to_string(), f.from_i64(2));
        let sc = Scope { field: &f, generators: &gens, scalars: &scalars };
        let r = parse_poly("[a, b; q^-1]", &sc).unwrap();
        assert_eq!(r.coeff(&Word::from_slice(&[1, 0])), f.neg(f.inv(f.from_i64(2))));
    }
}
