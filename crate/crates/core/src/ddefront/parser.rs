//! Lexer and recursive-descent parser for the system DSL.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::exactpoly::BigRat;

use super::ast::Expr;
use super::system::{DDESystem, Declarations};
use super::DdeError;

const MAX_DEPTH: usize = 400;
const MAX_POW: u32 = 1000;
const MAX_DELTA: u32 = 64;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, DdeError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' || (c == '/' && chars.get(i + 1) == Some(&'/')) {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (l0, c0) = (line, col);
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            if text.len() > 4096 {
                return Err(DdeError::syntax(l0, c0, "numeric literal too long"));
            }
            col += i - start;
            out.push(Token {
                tok: Tok::Int(text.parse().expect("digits")),
                line: l0,
                col: c0,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: l0,
                col: c0,
            });
            continue;
        }
        if "{};,=+-*/^()[]".contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                line: l0,
                col: c0,
            });
            i += 1;
            col += 1;
            continue;
        }
        return Err(DdeError::syntax(l0, c0, format!("unexpected character `{c}`")));
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    decl: &'a Declarations,
    depth: usize,
}

/// Parses a complete `system { ... }` source.
pub fn parse_dde(src: &str) -> Result<DDESystem, DdeError> {
    let toks = lex(src)?;
    // first pass collects declarations so that equations may precede them
    let decl = collect_declarations(&toks)?;
    let mut p = Parser {
        toks,
        pos: 0,
        decl: &decl,
        depth: 0,
    };
    let eqs = p.system()?;
    let mut rhs: Vec<Option<Expr>> = vec![None; decl.unknowns.len()];
    for (idx, e, line, col) in eqs {
        if rhs[idx].is_some() {
            return Err(DdeError::syntax(
                line,
                col,
                format!("second equation for `{}`", decl.unknowns[idx]),
            ));
        }
        rhs[idx] = Some(e);
    }
    let mut equations = Vec::with_capacity(rhs.len());
    for (i, r) in rhs.into_iter().enumerate() {
        match r {
            Some(e) => equations.push(e),
            None => return Err(DdeError::MissingEquation(decl.unknowns[i].clone())),
        }
    }
    DDESystem::new(decl, equations)
}

fn collect_declarations(toks: &[Token]) -> Result<Declarations, DdeError> {
    let mut d = Declarations::default();
    let mut have_unknowns = false;
    let mut i = 0;
    let at_stmt_start = |i: usize| i >= 1 && matches!(toks[i - 1].tok, Tok::Sym('{') | Tok::Sym(';'));
    while i < toks.len() {
        let t = &toks[i];
        if let Tok::Ident(kw) = &t.tok {
            if at_stmt_start(i) {
                match kw.as_str() {
                    "unknowns" => {
                        if have_unknowns {
                            return Err(DdeError::syntax(t.line, t.col, "unknowns declared twice"));
                        }
                        have_unknowns = true;
                        let mut j = i + 1;
                        loop {
                            match &toks[j].tok {
                                Tok::Ident(n) => d.unknowns.push(n.clone()),
                                _ => return Err(DdeError::syntax(toks[j].line, toks[j].col, "expected unknown name")),
                            }
                            j += 1;
                            match &toks[j].tok {
                                Tok::Sym(',') => j += 1,
                                Tok::Sym(';') => break,
                                _ => return Err(DdeError::syntax(toks[j].line, toks[j].col, "expected `,` or `;`")),
                            }
                        }
                        i = j;
                    }
                    "catalytic" => {
                        match toks.get(i + 1).map(|t| &t.tok) {
                            Some(Tok::Ident(n)) => d.catalytic = Some(n.clone()),
                            _ => return Err(DdeError::syntax(t.line, t.col, "expected catalytic variable name")),
                        }
                        i += 2;
                    }
                    "point" => {
                        let Some(Tok::Ident(n)) = toks.get(i + 1).map(|t| &t.tok) else {
                            return Err(DdeError::syntax(t.line, t.col, "expected point name"));
                        };
                        if d.point.is_some() {
                            return Err(DdeError::MultiplePoints);
                        }
                        expect_sym(toks, i + 2, '=')?;
                        let (v, j) = signed_rational(toks, i + 3)?;
                        d.point = Some((n.clone(), v));
                        i = j;
                    }
                    "param" => {
                        let Some(Tok::Ident(n)) = toks.get(i + 1).map(|t| &t.tok) else {
                            return Err(DdeError::syntax(t.line, t.col, "expected parameter name"));
                        };
                        if matches!(toks.get(i + 2).map(|t| &t.tok), Some(Tok::Sym('='))) {
                            let (v, j) = signed_rational(toks, i + 3)?;
                            d.params.push((n.clone(), Some(v)));
                            i = j;
                        } else {
                            d.params.push((n.clone(), None));
                            i += 2;
                        }
                    }
                    "order" => {
                        match toks.get(i + 1).map(|t| &t.tok) {
                            Some(Tok::Int(k)) if !k.is_zero() && *k <= BigInt::from(MAX_DELTA) => {
                                d.order = Some(u32::try_from(k).expect("small"))
                            }
                            _ => return Err(DdeError::syntax(t.line, t.col, "expected a positive order")),
                        }
                        i += 2;
                    }
                    _ => i += 1,
                }
                continue;
            }
        }
        i += 1;
    }
    if !have_unknowns {
        return Err(DdeError::syntax(1, 1, "missing `unknowns` declaration"));
    }
    d.validate()?;
    Ok(d)
}

fn expect_sym(toks: &[Token], i: usize, c: char) -> Result<(), DdeError> {
    match toks.get(i) {
        Some(Token { tok: Tok::Sym(s), .. }) if *s == c => Ok(()),
        Some(t) => Err(DdeError::syntax(t.line, t.col, format!("expected `{c}`"))),
        None => Err(DdeError::syntax(0, 0, format!("expected `{c}`"))),
    }
}

/// `[-] int [/ int]` starting at `i`; returns the value and the index of the
/// following token.
fn signed_rational(toks: &[Token], mut i: usize) -> Result<(BigRat, usize), DdeError> {
    let neg = matches!(toks.get(i).map(|t| &t.tok), Some(Tok::Sym('-')));
    if neg {
        i += 1;
    }
    let t = &toks[i.min(toks.len() - 1)];
    let Tok::Int(n) = &t.tok else {
        return Err(DdeError::syntax(t.line, t.col, "expected a rational number"));
    };
    let mut v = BigRat::from_integer(n.clone());
    i += 1;
    if matches!(toks.get(i).map(|t| &t.tok), Some(Tok::Sym('/'))) {
        let t = &toks[i + 1];
        match &t.tok {
            Tok::Int(d) if !d.is_zero() => v /= BigRat::from_integer(d.clone()),
            _ => return Err(DdeError::syntax(t.line, t.col, "expected a nonzero denominator")),
        }
        i += 2;
    }
    Ok((if neg { -v } else { v }, i))
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, DdeError> {
        let t = self.peek();
        Err(DdeError::syntax(t.line, t.col, msg))
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek().tok == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), DdeError> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn system(&mut self) -> Result<Vec<(usize, Expr, usize, usize)>, DdeError> {
        match &self.peek().tok {
            Tok::Ident(s) if s == "system" => {
                self.bump();
            }
            _ => return self.err("expected `system`"),
        }
        self.expect('{')?;
        let mut eqs = Vec::new();
        loop {
            let t = self.peek().clone();
            match &t.tok {
                Tok::Sym('}') => {
                    self.bump();
                    break;
                }
                Tok::Ident(kw) if matches!(kw.as_str(), "unknowns" | "catalytic" | "point" | "param" | "order") => {
                    // already collected; skip to the terminating `;`
                    while !matches!(self.peek().tok, Tok::Sym(';') | Tok::Eof) {
                        self.bump();
                    }
                    self.expect(';')?;
                }
                Tok::Ident(name) => {
                    let Some(idx) = self.decl.unknowns.iter().position(|u| u == name) else {
                        return Err(DdeError::UnknownSymbol {
                            name: name.clone(),
                            line: t.line,
                            col: t.col,
                        });
                    };
                    self.bump();
                    self.expect('=')?;
                    let e = self.expr()?;
                    self.expect(';')?;
                    eqs.push((idx, e.fold(), t.line, t.col));
                }
                Tok::Eof => return self.err("unexpected end of input, expected `}`"),
                _ => return self.err("expected a declaration or an equation"),
            }
        }
        if self.peek().tok != Tok::Eof {
            return self.err("trailing input after system");
        }
        Ok(eqs)
    }

    fn check_depth(&self, d: usize) -> Result<usize, DdeError> {
        if d > MAX_DEPTH {
            return self.err("expression nested too deeply");
        }
        Ok(d)
    }

    fn expr(&mut self) -> Result<Expr, DdeError> {
        Ok(self.sum()?.0)
    }

    // each parse function also returns the depth of the tree it built
    fn sum(&mut self) -> Result<(Expr, usize), DdeError> {
        let (mut lhs, mut d) = self.term()?;
        loop {
            let add = if self.eat_sym('+') {
                true
            } else if self.eat_sym('-') {
                false
            } else {
                break;
            };
            let (rhs, dr) = self.term()?;
            d = self.check_depth(d.max(dr) + 1)?;
            lhs = if add { Expr::add(lhs, rhs) } else { Expr::sub(lhs, rhs) };
        }
        Ok((lhs, d))
    }

    fn term(&mut self) -> Result<(Expr, usize), DdeError> {
        let (mut lhs, mut d) = self.unary()?;
        loop {
            let mul = if self.eat_sym('*') {
                true
            } else if self.eat_sym('/') {
                false
            } else {
                break;
            };
            let (rhs, dr) = self.unary()?;
            d = self.check_depth(d.max(dr) + 1)?;
            lhs = if mul { Expr::mul(lhs, rhs) } else { Expr::div(lhs, rhs) };
        }
        Ok((lhs, d))
    }

    fn unary(&mut self) -> Result<(Expr, usize), DdeError> {
        if self.eat_sym('-') {
            self.depth += 1;
            if self.depth > MAX_DEPTH {
                return self.err("expression nested too deeply");
            }
            let (e, d) = self.unary()?;
            self.depth -= 1;
            return Ok((Expr::Neg(Box::new(e)), self.check_depth(d + 1)?));
        }
        let (base, d) = self.atom()?;
        if self.eat_sym('^') {
            let t = self.bump();
            match t.tok {
                Tok::Int(k) if k <= BigInt::from(MAX_POW) => {
                    return Ok((Expr::pow(base, u32::try_from(&k).expect("small")), self.check_depth(d + 1)?));
                }
                _ => return Err(DdeError::syntax(t.line, t.col, format!("expected an exponent in 0..={MAX_POW}"))),
            }
        }
        Ok((base, d))
    }

    fn atom(&mut self) -> Result<(Expr, usize), DdeError> {
        let t = self.bump();
        match t.tok {
            Tok::Int(n) => Ok((Expr::Num(BigRat::from_integer(n)), 1)),
            Tok::Sym('(') => {
                self.depth += 1;
                if self.depth > MAX_DEPTH {
                    return self.err("expression nested too deeply");
                }
                let r = self.sum()?;
                self.depth -= 1;
                self.expect(')')?;
                Ok(r)
            }
            Tok::Ident(name) => Ok((self.ident(name, t.line, t.col)?, 1)),
            _ => Err(DdeError::syntax(t.line, t.col, "expected an operand")),
        }
    }

    fn ident(&mut self, name: String, line: usize, col: usize) -> Result<Expr, DdeError> {
        let d = self.decl;
        if name == "t" {
            return Ok(Expr::T);
        }
        if name == "D" && matches!(self.peek().tok, Tok::Sym('^') | Tok::Sym('[')) {
            let mut order = 1u32;
            if self.eat_sym('^') {
                let t = self.bump();
                match t.tok {
                    Tok::Int(k) if !k.is_zero() && k <= BigInt::from(MAX_DELTA) => order = u32::try_from(&k).expect("small"),
                    _ => return Err(DdeError::syntax(t.line, t.col, format!("expected a D order in 1..={MAX_DELTA}"))),
                }
            }
            self.expect('[')?;
            let t = self.bump();
            let unknown = match &t.tok {
                Tok::Ident(n) => d.unknowns.iter().position(|u| u == n),
                _ => None,
            };
            let Some(unknown) = unknown else {
                return Err(DdeError::syntax(t.line, t.col, "expected an unknown inside D[...]"));
            };
            self.expect(']')?;
            return Ok(Expr::Delta { order, unknown });
        }
        if d.catalytic.as_deref() == Some(name.as_str()) {
            return Ok(Expr::U);
        }
        if let Some((p, _)) = &d.point {
            if *p == name {
                return Ok(Expr::Point);
            }
        }
        if let Some(i) = d.params.iter().position(|(p, _)| *p == name) {
            return Ok(Expr::Param(i));
        }
        if let Some(i) = d.unknowns.iter().position(|u| *u == name) {
            if self.eat_sym('(') {
                let t = self.bump();
                let ok = match &t.tok {
                    Tok::Ident(n) => d.point.as_ref().is_some_and(|(p, _)| p == n),
                    Tok::Int(v) => d.point.as_ref().is_some_and(|(_, a)| *a == BigRat::from_integer(v.clone())),
                    _ => false,
                };
                if !ok {
                    return Err(DdeError::syntax(t.line, t.col, "specialization must be at the declared point"));
                }
                self.expect(')')?;
                return Ok(Expr::Spec(i));
            }
            return Ok(Expr::Unknown(i));
        }
        Err(DdeError::UnknownSymbol { name, line, col })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn syntax_error_location() {
        let src = "system { unknowns F; catalytic u; point a = 0;\n F = 1 + * t; }";
        match parse_dde(src) {
            Err(DdeError::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 10)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_symbol() {
        let src = "system { unknowns F; catalytic u; point a = 0; F = 1 + t*G; }";
        assert!(matches!(parse_dde(src), Err(DdeError::UnknownSymbol { .. })));
    }
}
