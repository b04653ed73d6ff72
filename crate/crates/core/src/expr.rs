//! A small expression language for η-functions.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary ("*" unary)*
//! unary  := "-" unary | factor
//! factor := number | "i" | eta | state | func "(" expr ")" | "(" expr ")"
//! eta    := "e" digit+
//! state  := LABEL | LABEL "(" signed ("," signed)* ")"
//! func   := "cos" | "sin" | "exp" | "dual" | "conj" | "normalize"
//! number := decimal | integer "/" integer
//! ```
//!
//! Whitespace is ignored. Products need an explicit `*`. State labels come
//! from the registry in [`crate::states`].

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::Error;
use crate::eta::{EtaFunction, SeriesKind, MAX_VARIABLES};
use crate::scalar::{parse_rational, Scalar};
use crate::states;

/// 1-based, inclusive-exclusive column range in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Cos,
    Sin,
    Exp,
    Dual,
    Conj,
    Normalize,
}

impl Func {
    fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "cos" => Func::Cos,
            "sin" => Func::Sin,
            "exp" => Func::Exp,
            "dual" => Func::Dual,
            "conj" => Func::Conj,
            "normalize" => Func::Normalize,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Cos => "cos",
            Func::Sin => "sin",
            Func::Exp => "exp",
            Func::Dual => "dual",
            Func::Conj => "conj",
            Func::Normalize => "normalize",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Number(BigRational),
    Imag,
    Eta(usize),
    State {
        name: String,
        args: Vec<BigRational>,
    },
    Call(Func, Box<Expr>),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
}

/// AST node. Equality ignores spans.
#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    write!(f, "{r}")
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Number(r) => write_rational(f, r),
            ExprKind::Imag => write!(f, "i"),
            ExprKind::Eta(k) => write!(f, "e{k}"),
            ExprKind::State { name, args } => {
                write!(f, "{name}")?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (k, a) in args.iter().enumerate() {
                        if k > 0 {
                            write!(f, ",")?;
                        }
                        write_rational(f, a)?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
            ExprKind::Call(func, arg) => write!(f, "{}({arg})", func.name()),
            ExprKind::Neg(x) => write!(f, "(-{x})"),
            ExprKind::Binary(op, l, r) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                };
                write!(f, "({l} {sym} {r})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    EtaIndex { index: usize, n: usize },
    UnknownIdent(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// 1-based column of the offending character.
    pub column: usize,
}

impl ParseError {
    /// Stable diagnostic code, one per error kind.
    pub fn code(&self) -> &'static str {
        match self.kind {
            ParseErrorKind::Syntax(_) => "E100",
            ParseErrorKind::EtaIndex { .. } => "E101",
            ParseErrorKind::UnknownIdent(_) => "E102",
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let col = self.column;
        match &self.kind {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error at column {col}: {msg}"),
            ParseErrorKind::EtaIndex { index, n } => {
                write!(
                    f,
                    "eta index exceeds qubit count at column {col}: e{index} with n = {n}"
                )
            }
            ParseErrorKind::UnknownIdent(name) => {
                write!(f, "unknown identifier at column {col}: {name}")
            }
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
    Comma,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Number(r) => format!("number {r}"),
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn syntax(column: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        kind: ParseErrorKind::Syntax(msg.into()),
        column,
    }
}

fn lex(input: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let chars: Vec<char> = input.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(t) = single {
            toks.push((
                t,
                Span {
                    start,
                    end: start + 1,
                },
            ));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let take_digits = |i: &mut usize| {
                let s = *i;
                while *i < chars.len() && chars[*i].is_ascii_digit() {
                    *i += 1;
                }
                chars[s..*i].iter().collect::<String>()
            };
            let mut text = take_digits(&mut i);
            let mut decimal = false;
            if i < chars.len() && chars[i] == '.' {
                decimal = true;
                i += 1;
                let frac = take_digits(&mut i);
                if text.is_empty() && frac.is_empty() {
                    return Err(syntax(start, "malformed number"));
                }
                text = format!("{text}.{frac}");
            }
            // optional "/ denominator"
            let mut j = i;
            while j < chars.len() && chars[j].is_whitespace() {
                j += 1;
            }
            if j < chars.len() && chars[j] == '/' {
                if decimal {
                    return Err(syntax(j + 1, "rational literals need an integer numerator"));
                }
                j += 1;
                while j < chars.len() && chars[j].is_whitespace() {
                    j += 1;
                }
                i = j;
                let den = take_digits(&mut i);
                if den.is_empty() {
                    return Err(syntax(j + 1, "expected denominator after '/'"));
                }
                let den_val: BigInt = den.parse().expect("digits");
                if den_val.is_zero() {
                    return Err(syntax(j + 1, "zero denominator"));
                }
                text = format!("{text}/{den}");
            }
            let value = parse_rational(&text).ok_or_else(|| syntax(start, "malformed number"))?;
            toks.push((Tok::Number(value), Span { start, end: i + 1 }));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let s = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((
                Tok::Ident(chars[s..i].iter().collect()),
                Span { start, end: i + 1 },
            ));
            continue;
        }
        if c == '/' {
            return Err(syntax(
                start,
                "'/' is only allowed inside rational literals such as 1/2",
            ));
        }
        return Err(syntax(start, format!("unexpected character {c:?}")));
    }
    toks.push((
        Tok::End,
        Span {
            start: chars.len() + 1,
            end: chars.len() + 1,
        },
    ));
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    n: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<Span, ParseError> {
        if *self.peek() == want {
            Ok(self.bump().1)
        } else {
            Err(syntax(
                self.span().start,
                format!(
                    "expected {}, found {}",
                    want.describe(),
                    self.peek().describe()
                ),
            ))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let rhs = self.unary()?;
            lhs = binary(BinOp::Mul, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            let start = self.bump().1.start;
            let inner = self.unary()?;
            let end = inner.span.end;
            return Ok(Expr {
                kind: ExprKind::Neg(Box::new(inner)),
                span: Span { start, end },
            });
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let (tok, span) = self.bump();
        match tok {
            Tok::Number(r) => Ok(Expr {
                kind: ExprKind::Number(r),
                span,
            }),
            Tok::LParen => {
                let inner = self.expr()?;
                let close = self.expect(Tok::RParen)?;
                Ok(Expr {
                    span: Span {
                        start: span.start,
                        end: close.end,
                    },
                    ..inner
                })
            }
            Tok::Ident(name) => self.ident(name, span),
            other => Err(syntax(
                span.start,
                format!("unexpected {}", other.describe()),
            )),
        }
    }

    fn ident(&mut self, name: String, span: Span) -> Result<Expr, ParseError> {
        if name == "i" {
            return Ok(Expr {
                kind: ExprKind::Imag,
                span,
            });
        }
        if let Some(digits) = name
            .strip_prefix('e')
            .filter(|d| !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()))
        {
            let index: usize = digits.parse().unwrap_or(usize::MAX);
            if index == 0 || index > self.n {
                return Err(ParseError {
                    kind: ParseErrorKind::EtaIndex { index, n: self.n },
                    column: span.start,
                });
            }
            return Ok(Expr {
                kind: ExprKind::Eta(index),
                span,
            });
        }
        if let Some(func) = Func::from_name(&name) {
            self.expect(Tok::LParen)?;
            let arg = self.expr()?;
            let close = self.expect(Tok::RParen)?;
            return Ok(Expr {
                kind: ExprKind::Call(func, Box::new(arg)),
                span: Span {
                    start: span.start,
                    end: close.end,
                },
            });
        }
        if !states::is_known_label(&name) {
            return Err(ParseError {
                kind: ParseErrorKind::UnknownIdent(name),
                column: span.start,
            });
        }
        let mut args = Vec::new();
        let mut end = span.end;
        if *self.peek() == Tok::LParen {
            self.bump();
            loop {
                args.push(self.signed_number()?);
                match self.peek() {
                    Tok::Comma => {
                        self.bump();
                    }
                    _ => break,
                }
            }
            end = self.expect(Tok::RParen)?.end;
        }
        Ok(Expr {
            kind: ExprKind::State { name, args },
            span: Span {
                start: span.start,
                end,
            },
        })
    }

    fn signed_number(&mut self) -> Result<BigRational, ParseError> {
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match self.bump() {
            (Tok::Number(r), _) => Ok(if neg { -r } else { r }),
            (other, span) => Err(syntax(
                span.start,
                format!("expected number argument, found {}", other.describe()),
            )),
        }
    }
}

fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
    let span = Span {
        start: lhs.span.start,
        end: rhs.span.end,
    };
    Expr {
        kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)),
        span,
    }
}

/// Parses `input` for `n` variables.
pub fn parse(input: &str, n: usize) -> Result<Expr, ParseError> {
    if !(1..=MAX_VARIABLES).contains(&n) {
        return Err(syntax(
            1,
            format!("qubit count {n} outside 1..={MAX_VARIABLES}"),
        ));
    }
    let toks = lex(input)?;
    let mut p = Parser { toks, pos: 0, n };
    if *p.peek() == Tok::End {
        return Err(syntax(1, "empty expression"));
    }
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(syntax(
            p.span().start,
            format!("unexpected {}", p.peek().describe()),
        ));
    }
    Ok(e)
}

/// Evaluation failure with the span of the subexpression that raised it.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalError {
    pub error: Error,
    pub span: Span,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (columns {}-{})",
            self.error,
            self.span.start,
            self.span.end.saturating_sub(1).max(self.span.start)
        )
    }
}

impl std::error::Error for EvalError {}

/// Evaluates `e` in the algebra of `n` variables over `S`.
pub fn evaluate<S: Scalar>(e: &Expr, n: usize) -> Result<EtaFunction<S>, EvalError> {
    let at = |error: Error| EvalError {
        error,
        span: e.span,
    };
    match &e.kind {
        ExprKind::Number(r) => EtaFunction::constant(n, S::from_rational(r)).map_err(at),
        ExprKind::Imag => EtaFunction::constant(n, S::imag_unit()).map_err(at),
        ExprKind::Eta(k) => EtaFunction::variable(n, *k).map_err(at),
        ExprKind::State { name, args } => {
            let st = states::lookup::<S>(name, args).map_err(at)?;
            if st.n() != n {
                return Err(at(Error::QubitCount {
                    expected: n,
                    got: st.n(),
                }));
            }
            Ok(st.function)
        }
        ExprKind::Call(func, arg) => {
            let x = evaluate::<S>(arg, n)?;
            match func {
                Func::Cos => x.apply_series(SeriesKind::Cos),
                Func::Sin => x.apply_series(SeriesKind::Sin),
                Func::Exp => x.apply_series(SeriesKind::Exp),
                Func::Dual => Ok(x.hodge_dual()),
                Func::Conj => Ok(x.conjugate()),
                Func::Normalize => x.normalize(),
            }
            .map_err(at)
        }
        ExprKind::Neg(x) => Ok(evaluate::<S>(x, n)?.neg()),
        ExprKind::Binary(op, l, r) => {
            let (l, r) = (evaluate::<S>(l, n)?, evaluate::<S>(r, n)?);
            match op {
                BinOp::Add => l.add(&r),
                BinOp::Sub => l.sub(&r),
                BinOp::Mul => l.multiply(&r),
            }
            .map_err(at)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Exact, Float};

    fn ev(s: &str, n: usize) -> EtaFunction<Exact> {
        evaluate(&parse(s, n).unwrap(), n).unwrap()
    }

    #[test]
    fn cosine_of_four_variables() {
        let e = parse("cos(e1+e2+e3+e4)", 4).unwrap();
        assert!(matches!(e.kind, ExprKind::Call(Func::Cos, _)));
        assert_eq!(
            ev("cos(e1+e2+e3+e4)", 4),
            crate::states::psi_c::<Exact>(4).unwrap().function
        );
    }

    #[test]
    fn cluster_expression() {
        let f = ev("1/2*(cos(e1*e2+e3*e4)+sin(e1*e2+e3*e4))", 4);
        let cs = crate::states::psi_cs::<Exact>()
            .unwrap()
            .function
            .scale(&Exact::from_ratio(1, 2));
        assert_eq!(f, cs);
    }

    #[test]
    fn eta_index_error() {
        let err = parse("e5", 4).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::EtaIndex { index: 5, n: 4 });
        assert_eq!(err.column, 1);
        assert!(err.to_string().contains("eta index exceeds qubit count"));
        assert_eq!(parse("e1 + e0", 4).unwrap_err().column, 6);
    }

    #[test]
    fn error_codes_and_columns() {
        let e = parse("cos(e1 + )", 2).unwrap_err();
        assert_eq!((e.code(), e.column), ("E100", 10));
        let e = parse("FOO + e1", 2).unwrap_err();
        assert_eq!((e.code(), e.column), ("E102", 1));
        let e = parse("e1 $ e2", 2).unwrap_err();
        assert_eq!((e.code(), e.column), ("E100", 4));
        assert_eq!(parse("", 2).unwrap_err().code(), "E100");
        assert_eq!(parse("e1 e2", 2).unwrap_err().column, 4);
        assert_eq!(parse("1/0", 2).unwrap_err().code(), "E100");
        assert_eq!(parse("e1/e2", 2).unwrap_err().column, 3);
    }

    #[test]
    fn precedence_and_associativity() {
        let e = parse("e1 - e2 - e3", 3).unwrap();
        let ExprKind::Binary(BinOp::Sub, lhs, _) = &e.kind else {
            panic!()
        };
        assert!(matches!(lhs.kind, ExprKind::Binary(BinOp::Sub, _, _)));
        let e = parse("e1 + e2 * e3", 3).unwrap();
        assert!(matches!(e.kind, ExprKind::Binary(BinOp::Add, _, _)));
        assert_eq!(ev("e1 + e2 * e3", 3), ev("e1 + (e2*e3)", 3));
    }

    #[test]
    fn evaluation_examples() {
        let c = ev("cos(e1+e2)", 2);
        assert_eq!(c.to_string(), "(1)*1 + (-1)*e1*e2");
        let d = ev("dual(e1+e2+e3+e4)", 4);
        assert!(d.terms().all(|(m, _)| m.count_ones() == 3));
        assert_eq!(d.terms().count(), 4);
        assert!(ev("GHZ4 - GHZ4", 4).is_zero());
        assert_eq!(ev("conj(i*e1)", 1).coeff(1), -Exact::imag_unit());
        assert_eq!(ev("-e1 + e1", 1), EtaFunction::zero(1).unwrap());
        assert_eq!(
            ev("0.25*G(1,0,0,1)", 4),
            crate::states::ghz::<Exact>(4)
                .unwrap()
                .function
                .scale(&Exact::from_ratio(1, 4))
        );
        assert_eq!(
            ev("PSIAD(1,-1)", 4),
            crate::states::psi_d(Exact::from_i64(1)).unwrap().function
        );
    }

    #[test]
    fn evaluation_errors_carry_spans() {
        let e = parse("e1 + normalize(e1+e2)", 2).unwrap();
        let err = evaluate::<Exact>(&e, 2).unwrap_err();
        assert_eq!(err.error, Error::ExactNormalize);
        assert_eq!(err.span, Span { start: 6, end: 22 });
        assert!(evaluate::<Float>(&e, 2).is_ok());
        let e = parse("GHZ3", 4).unwrap();
        assert_eq!(
            evaluate::<Exact>(&e, 4).unwrap_err().error,
            Error::QubitCount {
                expected: 4,
                got: 3
            }
        );
        let e = parse("cos(1+e1)", 1).unwrap();
        assert!(matches!(
            evaluate::<Exact>(&e, 1).unwrap_err().error,
            Error::InexactSeries { .. }
        ));
    }

    #[test]
    fn print_then_parse() {
        for s in [
            "1/2*(cos(e1*e2+e3*e4)+sin(e1*e2+e3*e4))",
            "-e1 - -e2 * i",
            "PSIAD(1,-1/3) + dual(conj(e4))",
            "exp(e1*e2*e3*e4) - normalize(W4)",
            "0.125 * (e1 - (e2 - e3))",
        ] {
            let a = parse(s, 4).unwrap();
            let printed = a.to_string();
            assert_eq!(parse(&printed, 4).unwrap(), a, "{s} -> {printed}");
        }
    }
}
