//! Text grammar and printer for polynomials, ideals, matrix points and
//! univariate polynomial matrices.
//!
//! ```text
//! poly   := ['+'|'-'] term (('+'|'-') term)*
//! term   := coef ['*'] factor* | factor+      (factors may be split by ' * ')
//! factor := var adj* ['^' int] | '(' poly ')' adj* ['^' int]
//! var    := 'x' digits
//! adj    := '*' written directly after a variable, ')' or another adj
//! coef   := int ['/' int]
//! ```
//!
//! A `*` preceded by whitespace or by a coefficient is the multiplication
//! separator; glued to a variable or closing parenthesis it is the adjoint.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::matpoly::{UniPoly, UniPolyMatrix};
use crate::ncpoly::{Letter, MatrixPoint, NCPoly, Word};
use crate::qmat::QMat;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub begin: usize,
    pub end: usize,
}

impl SourceSpan {
    fn new(begin: usize, end: usize) -> SourceSpan {
        debug_assert!(begin <= end);
        SourceSpan { begin, end }
    }

    fn shift(self, by: usize) -> SourceSpan {
        SourceSpan::new(self.begin + by, self.end + by)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub span: SourceSpan,
    pub message: String,
    pub severity: Severity,
}

impl ParseDiagnostic {
    fn error(span: SourceSpan, message: impl Into<String>) -> ParseDiagnostic {
        ParseDiagnostic {
            span,
            message: message.into(),
            severity: Severity::Error,
        }
    }

    fn warning(span: SourceSpan, message: impl Into<String>) -> ParseDiagnostic {
        ParseDiagnostic {
            span,
            message: message.into(),
            severity: Severity::Warning,
        }
    }

    fn shifted(mut self, by: usize) -> ParseDiagnostic {
        self.span = self.span.shift(by);
        self
    }

    /// `line:col: message` against the original text.
    pub fn render(&self, text: &str) -> String {
        let upto = &text[..self.span.begin.min(text.len())];
        let line = upto.matches('\n').count() + 1;
        let col = upto.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
        let kind = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        format!("{line}:{col}: {kind}: {}", self.message)
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}: {}", self.span.begin, self.span.end, self.message)
    }
}

impl std::error::Error for ParseDiagnostic {}

type PResult<T> = Result<T, ParseDiagnostic>;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    /// `x` followed by optional digits.
    Var(Option<usize>),
    Plus,
    Minus,
    Slash,
    Caret,
    Star,
    Adj,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    span: SourceSpan,
}

fn lex(text: &str) -> PResult<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out: Vec<Token> = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b'[' => Some(Tok::LBracket),
            b']' => Some(Tok::RBracket),
            b',' => Some(Tok::Comma),
            b';' => Some(Tok::Semi),
            _ => None,
        };
        if let Some(t) = simple {
            out.push(Token {
                tok: t,
                span: SourceSpan::new(i, i + 1),
            });
            i += 1;
            continue;
        }
        if c == b'*' {
            let glued = i > 0
                && matches!(
                    out.last(),
                    Some(Token { tok: Tok::Var(_) | Tok::RParen | Tok::Adj, span }) if span.end == i
                );
            out.push(Token {
                tok: if glued { Tok::Adj } else { Tok::Star },
                span: SourceSpan::new(i, i + 1),
            });
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = text[start..i].parse().expect("digits");
            out.push(Token {
                tok: Tok::Int(n),
                span: SourceSpan::new(start, i),
            });
            continue;
        }
        if c == b'x' {
            i += 1;
            let ds = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let idx = if ds == i {
                None
            } else {
                match text[ds..i].parse::<usize>() {
                    Ok(k) if (1..=128).contains(&k) => Some(k),
                    _ => {
                        return Err(ParseDiagnostic::error(
                            SourceSpan::new(start, i),
                            "variable index must be between 1 and 128",
                        ))
                    }
                }
            };
            out.push(Token {
                tok: Tok::Var(idx),
                span: SourceSpan::new(start, i),
            });
            continue;
        }
        let ch = text[i..].chars().next().unwrap_or('?');
        return Err(ParseDiagnostic::error(
            SourceSpan::new(i, i + ch.len_utf8()),
            format!("unexpected character {ch:?}"),
        ));
    }
    out.push(Token {
        tok: Tok::Eof,
        span: SourceSpan::new(text.trim_end().len(), text.trim_end().len()),
    });
    Ok(out)
}

/// Anything the recursive-descent core can build: ring operations plus a
/// way to make variables and adjoints.
trait Algebra: Sized + Clone {
    fn from_rational(q: Rational) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn variable(idx: Option<usize>, span: SourceSpan) -> PResult<Self>;
    fn adjoint(&self, span: SourceSpan) -> PResult<Self>;
}

impl Algebra for NCPoly {
    fn from_rational(q: Rational) -> Self {
        NCPoly::constant(q)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn variable(idx: Option<usize>, span: SourceSpan) -> PResult<Self> {
        match idx {
            Some(i) => Ok(NCPoly::word(Word::letter(Letter::new(i, false)))),
            None => Err(ParseDiagnostic::error(span, "variables are written x1, x2, ...")),
        }
    }
    fn adjoint(&self, _span: SourceSpan) -> PResult<Self> {
        Ok(NCPoly::adjoint(self))
    }
}

impl Algebra for UniPoly {
    fn from_rational(q: Rational) -> Self {
        UniPoly::constant(q)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn variable(idx: Option<usize>, span: SourceSpan) -> PResult<Self> {
        match idx {
            None => Ok(UniPoly::x()),
            Some(_) => Err(ParseDiagnostic::error(
                span,
                "matrix entries use the single variable x",
            )),
        }
    }
    fn adjoint(&self, span: SourceSpan) -> PResult<Self> {
        Err(ParseDiagnostic::error(span, "adjoint is not allowed in matrix entries"))
    }
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> PResult<Token> {
        if *self.peek() == t {
            Ok(self.bump())
        } else {
            Err(ParseDiagnostic::error(self.span(), format!("expected {what}")))
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Tok::Var(_) | Tok::LParen)
    }

    fn expr<A: Algebra>(&mut self) -> PResult<A> {
        let mut neg = false;
        match self.peek() {
            Tok::Minus => {
                self.bump();
                neg = true;
            }
            Tok::Plus => {
                self.bump();
            }
            _ => {}
        }
        let first: A = self.term()?;
        let mut acc = if neg { first.neg() } else { first };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let t: A = self.term()?;
                    acc = acc.add(&t);
                }
                Tok::Minus => {
                    self.bump();
                    let t: A = self.term()?;
                    acc = acc.add(&t.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn coefficient(&mut self) -> PResult<Rational> {
        let t = self.bump();
        let Tok::Int(n) = t.tok else {
            return Err(ParseDiagnostic::error(t.span, "expected a number"));
        };
        if *self.peek() == Tok::Slash {
            self.bump();
            let d = self.bump();
            match d.tok {
                Tok::Int(d) if !d.is_zero() => Ok(Rational::new(n, d)),
                Tok::Int(_) => Err(ParseDiagnostic::error(d.span, "zero denominator")),
                _ => Err(ParseDiagnostic::error(d.span, "expected a denominator")),
            }
        } else {
            Ok(Rational::from_integer(n))
        }
    }

    fn term<A: Algebra>(&mut self) -> PResult<A> {
        let start = self.span();
        let mut acc: Option<A> = None;
        if matches!(self.peek(), Tok::Int(_)) {
            acc = Some(A::from_rational(self.coefficient()?));
            if *self.peek() == Tok::Star {
                self.bump();
                if !self.starts_factor() {
                    return Err(ParseDiagnostic::error(self.span(), "expected a factor after '*'"));
                }
            }
        } else if !self.starts_factor() {
            return Err(ParseDiagnostic::error(start, "expected a term"));
        }
        while self.starts_factor() {
            let f: A = self.factor()?;
            acc = Some(match acc {
                Some(a) => a.mul(&f),
                None => f,
            });
            if *self.peek() == Tok::Star {
                self.bump();
                if !self.starts_factor() {
                    return Err(ParseDiagnostic::error(self.span(), "expected a factor after '*'"));
                }
            }
        }
        if matches!(self.peek(), Tok::Int(_)) {
            return Err(ParseDiagnostic::error(
                self.span(),
                "a coefficient must come before the factors of its term",
            ));
        }
        Ok(acc.expect("term has a coefficient or a factor"))
    }

    fn factor<A: Algebra>(&mut self) -> PResult<A> {
        let t = self.bump();
        let mut base: A = match t.tok {
            Tok::Var(idx) => A::variable(idx, t.span)?,
            Tok::LParen => {
                let inner: A = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                inner
            }
            _ => return Err(ParseDiagnostic::error(t.span, "expected a factor")),
        };
        while *self.peek() == Tok::Adj {
            let s = self.bump().span;
            base = base.adjoint(s)?;
        }
        if *self.peek() == Tok::Caret {
            self.bump();
            let e = self.bump();
            let n = match &e.tok {
                Tok::Int(n) => n.to_u32().filter(|&n| n <= 64),
                _ => None,
            }
            .ok_or_else(|| ParseDiagnostic::error(e.span, "expected an exponent between 0 and 64"))?;
            let mut out = A::from_rational(Rational::one());
            for _ in 0..n {
                out = out.mul(&base);
            }
            base = out;
        }
        Ok(base)
    }

    fn finish(&mut self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(ParseDiagnostic::error(self.span(), "unexpected trailing input"))
        }
    }
}

fn parse_with<A: Algebra>(text: &str) -> PResult<A> {
    let toks = lex(text)?;
    let mut p = Parser { toks: &toks, pos: 0 };
    let v = p.expr()?;
    p.finish()?;
    Ok(v)
}

pub fn parse_poly(text: &str) -> Result<NCPoly, ParseDiagnostic> {
    parse_with(text)
}

fn fmt_abs(c: &Rational) -> String {
    let a = c.abs();
    if a.is_integer() {
        a.numer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

/// Terms in descending canonical order; parses back to the same polynomial.
pub fn print_poly(p: &NCPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (w, c)) in p.terms().iter().rev().enumerate() {
        if i == 0 {
            if c.is_negative() {
                s.push('-');
            }
        } else {
            s.push_str(if c.is_negative() { " - " } else { " + " });
        }
        if w.is_empty() {
            s.push_str(&fmt_abs(c));
        } else {
            if !c.abs().is_one() {
                s.push_str(&fmt_abs(c));
                s.push(' ');
            }
            s.push_str(&w.to_string());
        }
    }
    s
}

/// Content of an ideal file after comments and blank lines are removed.
#[derive(Clone, Debug)]
pub struct IdealFile {
    pub polys: Vec<NCPoly>,
    pub warnings: Vec<ParseDiagnostic>,
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(k) => &line[..k],
        None => line,
    }
}

/// One polynomial per line; `#` starts a comment. Zero lines are dropped
/// with a warning.
pub fn parse_ideal(text: &str) -> Result<IdealFile, ParseDiagnostic> {
    let mut polys = Vec::new();
    let mut warnings = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let body = strip_comment(line);
        if !body.trim().is_empty() {
            let p = parse_poly(body).map_err(|d| d.shifted(offset))?;
            if p.is_zero() {
                warnings.push(ParseDiagnostic::warning(
                    SourceSpan::new(offset, offset + body.trim_end().len()),
                    "zero generator ignored",
                ));
            } else {
                polys.push(p);
            }
        }
        offset += line.len();
    }
    Ok(IdealFile { polys, warnings })
}

fn parse_bracketed<A: Algebra>(text: &str) -> PResult<(Vec<Vec<A>>, SourceSpan)> {
    let toks = lex(text)?;
    let mut p = Parser { toks: &toks, pos: 0 };
    let open = p.expect(Tok::LBracket, "'['")?;
    let mut rows: Vec<Vec<A>> = vec![Vec::new()];
    if *p.peek() != Tok::RBracket {
        loop {
            let e: A = p.expr()?;
            rows.last_mut().unwrap().push(e);
            match p.peek() {
                Tok::Comma => {
                    p.bump();
                }
                Tok::Semi => {
                    p.bump();
                    rows.push(Vec::new());
                }
                _ => break,
            }
        }
    }
    let close = p.expect(Tok::RBracket, "']'")?;
    p.finish()?;
    let span = SourceSpan::new(open.span.begin, close.span.end);
    let width = rows[0].len();
    if rows.iter().any(|r| r.len() != width) || width == 0 {
        return Err(ParseDiagnostic::error(span, "rows must be nonempty and of equal length"));
    }
    Ok((rows, span))
}

/// `[x, 1; 0, x^2 + 1]`.
pub fn parse_unipoly_matrix(text: &str) -> Result<UniPolyMatrix, ParseDiagnostic> {
    let (rows, _) = parse_bracketed::<UniPoly>(text)?;
    Ok(UniPolyMatrix::from_rows(rows))
}

pub fn parse_unipoly(text: &str) -> Result<UniPoly, ParseDiagnostic> {
    parse_with(text)
}

/// Rational matrix in the same bracket syntax; entries must be constants.
pub fn parse_qmat(text: &str) -> Result<QMat, ParseDiagnostic> {
    let (rows, span) = parse_bracketed::<UniPoly>(text)?;
    let mut out = Vec::with_capacity(rows.len());
    for r in rows {
        let mut row = Vec::with_capacity(r.len());
        for e in r {
            if e.degree().unwrap_or(0) > 0 {
                return Err(ParseDiagnostic::error(span, "matrix entries must be rational numbers"));
            }
            row.push(e.coeff(0));
        }
        out.push(row);
    }
    Ok(QMat::from_rows(out))
}

/// Lines `X1 = [..]`, …, `Xg = [..]` and `v = [..]` (row or column).
pub fn parse_point(text: &str) -> Result<MatrixPoint, ParseDiagnostic> {
    let mut mats: Vec<Option<QMat>> = Vec::new();
    let mut v: Option<Vec<Rational>> = None;
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let body = strip_comment(line);
        if !body.trim().is_empty() {
            let line_span = SourceSpan::new(offset, offset + body.trim_end().len());
            let Some((lhs, rhs)) = body.split_once('=') else {
                return Err(ParseDiagnostic::error(line_span, "expected 'name = [...]'"));
            };
            let rhs_off = offset + lhs.len() + 1;
            let m = parse_qmat(rhs).map_err(|d| d.shifted(rhs_off))?;
            let name = lhs.trim();
            if name == "v" {
                if m.rows() != 1 && m.cols() != 1 {
                    return Err(ParseDiagnostic::error(line_span, "v must be a row or column"));
                }
                v = Some(if m.rows() == 1 { m.row(0).to_vec() } else { m.transpose().row(0).to_vec() });
            } else {
                let idx = name
                    .strip_prefix(['X', 'x'])
                    .and_then(|s| s.parse::<usize>().ok())
                    .filter(|&k| k >= 1)
                    .ok_or_else(|| ParseDiagnostic::error(line_span, "expected X1, X2, ... or v"))?;
                if mats.len() < idx {
                    mats.resize(idx, None);
                }
                mats[idx - 1] = Some(m);
            }
        }
        offset += line.len();
    }
    let whole = SourceSpan::new(0, text.len());
    let v = v.ok_or_else(|| ParseDiagnostic::error(whole, "missing vector v"))?;
    let mats: Vec<QMat> = mats
        .into_iter()
        .enumerate()
        .map(|(i, m)| m.ok_or_else(|| ParseDiagnostic::error(whole, format!("missing X{}", i + 1))))
        .collect::<Result<_, _>>()?;
    MatrixPoint::new(mats, v).map_err(|e| ParseDiagnostic::error(whole, e.to_string()))
}

pub fn print_unipoly(p: &UniPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    let mut first = true;
    for k in (0..p.coeffs().len()).rev() {
        let c = &p.coeffs()[k];
        if c.is_zero() {
            continue;
        }
        if first {
            if c.is_negative() {
                s.push('-');
            }
            first = false;
        } else {
            s.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let mono = match k {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{k}"),
        };
        if mono.is_empty() {
            s.push_str(&fmt_abs(c));
        } else if c.abs().is_one() {
            s.push_str(&mono);
        } else {
            s.push_str(&format!("{} {}", fmt_abs(c), mono));
        }
    }
    s
}

pub fn print_unipoly_matrix(m: &UniPolyMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| print_unipoly(m.get(i, j)))
                .collect::<Vec<_>>()
                .join(", ")
        })
        .collect();
    format!("[{}]", rows.join("; "))
}
