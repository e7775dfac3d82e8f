//! Concrete syntax: lexer, recursive-descent parser, sugar expansion,
//! canonical printer, and the theory/model file formats.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::formula::{Formula, Inequality, Letter, Mode, Rational, Theory};

/// Position of an offending token. Line and column are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("{span}: {message}")]
    Syntax { span: SourceSpan, message: String },
    #[error("{span}: constant {literal} is not available in basic mode")]
    Mode { span: SourceSpan, literal: Rational },
    #[error("{span}: letter {letter} assigned twice")]
    DuplicateLetter { span: SourceSpan, letter: String },
}

impl SyntaxError {
    pub fn span(&self) -> SourceSpan {
        match self {
            SyntaxError::Syntax { span, .. }
            | SyntaxError::Mode { span, .. }
            | SyntaxError::DuplicateLetter { span, .. } => *span,
        }
    }

    fn at(span: SourceSpan, message: impl Into<String>) -> Self {
        SyntaxError::Syntax { span, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Slash,
    MeetOp,
    JoinOp,
    Le,
    Eq,
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
            Tok::Num(n) => format!("number {n}"),
            Tok::Ident(s) => format!("identifier {s}"),
            Tok::Slash => "'/'".into(),
            Tok::MeetOp => "'/\\'".into(),
            Tok::JoinOp => "'\\/'".into(),
            Tok::Le => "'<='".into(),
            Tok::Eq => "'='".into(),
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

fn lex(text: &str, first_line: usize) -> Result<Vec<(Tok, SourceSpan)>, SyntaxError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, first_line, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let span = |len: usize| SourceSpan { line, column: col, length: len };
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
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let n: BigInt = digits.parse().expect("digit run");
            out.push((Tok::Num(n), span(i - start)));
            col += i - start;
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            out.push((Tok::Ident(name), span(i - start)));
            col += i - start;
            continue;
        }
        let next = chars.get(i + 1).copied();
        let (tok, len) = match (c, next) {
            ('/', Some('\\')) => (Tok::MeetOp, 2),
            ('\\', Some('/')) => (Tok::JoinOp, 2),
            ('<', Some('=')) => (Tok::Le, 2),
            ('/', _) => (Tok::Slash, 1),
            ('=', _) => (Tok::Eq, 1),
            ('+', _) => (Tok::Plus, 1),
            ('-', _) => (Tok::Minus, 1),
            ('*', _) => (Tok::Star, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            (',', _) => (Tok::Comma, 1),
            _ => return Err(SyntaxError::at(span(1), format!("unexpected character '{c}'"))),
        };
        out.push((tok, span(len)));
        i += len;
        col += len;
    }
    out.push((Tok::End, SourceSpan { line, column: col, length: 0 }));
    Ok(out)
}

/// Surface syntax before expansion of the derived connectives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sugar {
    Literal(Rational, SourceSpan),
    Letter(Letter),
    Add(Box<Sugar>, Box<Sugar>),
    Sub(Box<Sugar>, Box<Sugar>),
    Meet(Box<Sugar>, Box<Sugar>),
    Join(Box<Sugar>, Box<Sugar>),
    Scale(Rational, Box<Sugar>),
    Negate(Box<Sugar>),
    Abs(Box<Sugar>),
    Pos(Box<Sugar>),
    Neg(Box<Sugar>),
}

/// Rewrite surface syntax into the six-constructor core.
pub fn sugar_expand(s: &Sugar, mode: Mode) -> Result<Formula, SyntaxError> {
    let go = |x: &Sugar| sugar_expand(x, mode);
    Ok(match s {
        Sugar::Literal(q, span) => {
            if q.is_zero() {
                Formula::Zero
            } else if !mode.is_extended() {
                return Err(SyntaxError::Mode { span: *span, literal: q.clone() });
            } else if q.is_one() {
                Formula::One
            } else {
                Formula::constant(q.clone())
            }
        }
        Sugar::Letter(l) => Formula::Letter(l.clone()),
        Sugar::Add(a, b) => Formula::add(go(a)?, go(b)?),
        Sugar::Sub(a, b) => Formula::sub(go(a)?, go(b)?),
        Sugar::Meet(a, b) => Formula::meet(go(a)?, go(b)?),
        Sugar::Join(a, b) => Formula::join(go(a)?, go(b)?),
        Sugar::Scale(q, a) => Formula::scale(q.clone(), go(a)?),
        Sugar::Negate(a) => Formula::negate(go(a)?),
        Sugar::Abs(a) => Formula::abs(go(a)?),
        Sugar::Pos(a) => Formula::pos(go(a)?),
        Sugar::Neg(a) => Formula::neg(go(a)?),
    })
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
}

impl Parser {
    fn new(text: &str, first_line: usize) -> Result<Self, SyntaxError> {
        Ok(Parser { toks: lex(text, first_line)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), SyntaxError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected {}", want.describe())))
        }
    }

    fn unexpected(&self, context: &str) -> SyntaxError {
        SyntaxError::at(self.span(), format!("{context}, found {}", self.peek().describe()))
    }

    fn finish(&self) -> Result<(), SyntaxError> {
        match self.peek() {
            Tok::End => Ok(()),
            _ => Err(self.unexpected("expected end of input")),
        }
    }

    fn inequality(&mut self) -> Result<(Sugar, Option<Sugar>), SyntaxError> {
        let first = self.formula()?;
        if *self.peek() == Tok::Le {
            self.bump();
            let second = self.formula()?;
            Ok((first, Some(second)))
        } else {
            Ok((first, None))
        }
    }

    fn formula(&mut self) -> Result<Sugar, SyntaxError> {
        let mut acc = self.sum()?;
        loop {
            match self.peek() {
                Tok::MeetOp => {
                    self.bump();
                    acc = Sugar::Meet(Box::new(acc), Box::new(self.sum()?));
                }
                Tok::JoinOp => {
                    self.bump();
                    acc = Sugar::Join(Box::new(acc), Box::new(self.sum()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn sum(&mut self) -> Result<Sugar, SyntaxError> {
        let mut acc = self.signed()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = Sugar::Add(Box::new(acc), Box::new(self.signed()?));
                }
                Tok::Minus => {
                    self.bump();
                    acc = Sugar::Sub(Box::new(acc), Box::new(self.signed()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn signed(&mut self) -> Result<Sugar, SyntaxError> {
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        if let Tok::Num(_) = self.peek() {
            // A leading minus directly before a numeral negates the scalar itself.
            let span = self.span();
            let mut q = self.rational()?;
            if negative {
                q = -q;
            }
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    Ok(Sugar::Scale(q, Box::new(self.prim()?)))
                }
                Tok::Ident(_) | Tok::LParen => Ok(Sugar::Scale(q, Box::new(self.prim()?))),
                _ => Ok(Sugar::Literal(q, span)),
            }
        } else {
            let p = self.prim()?;
            Ok(if negative { Sugar::Negate(Box::new(p)) } else { p })
        }
    }

    fn rational(&mut self) -> Result<Rational, SyntaxError> {
        let numer = match self.bump() {
            Tok::Num(n) => n,
            _ => unreachable!("caller checked for a numeral"),
        };
        if *self.peek() == Tok::Slash {
            self.bump();
            let span = self.span();
            match self.bump() {
                Tok::Num(d) if !d.is_zero() => Ok(Rational::new(numer, d)),
                Tok::Num(_) => Err(SyntaxError::at(span, "zero denominator")),
                other => Err(SyntaxError::at(
                    span,
                    format!("expected denominator, found {}", other.describe()),
                )),
            }
        } else {
            Ok(Rational::from_integer(numer))
        }
    }

    fn prim(&mut self) -> Result<Sugar, SyntaxError> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Num(_) => {
                let q = self.rational()?;
                Ok(Sugar::Literal(q, span))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(name) => {
                self.bump();
                let func = matches!(name.as_str(), "min" | "max" | "abs" | "pos" | "neg");
                if func && *self.peek() == Tok::LParen {
                    self.bump();
                    let a = self.formula()?;
                    let out = match name.as_str() {
                        "min" | "max" => {
                            self.expect(Tok::Comma)?;
                            let b = self.formula()?;
                            if name == "min" {
                                Sugar::Meet(Box::new(a), Box::new(b))
                            } else {
                                Sugar::Join(Box::new(a), Box::new(b))
                            }
                        }
                        "abs" => Sugar::Abs(Box::new(a)),
                        "pos" => Sugar::Pos(Box::new(a)),
                        _ => Sugar::Neg(Box::new(a)),
                    };
                    self.expect(Tok::RParen)?;
                    Ok(out)
                } else {
                    Ok(Sugar::Letter(Letter::new(&name)))
                }
            }
            _ => Err(self.unexpected("expected a formula")),
        }
    }
}

/// Parse surface syntax of a single formula without expanding it.
pub fn parse_sugar(text: &str) -> Result<Sugar, SyntaxError> {
    let mut p = Parser::new(text, 1)?;
    let s = p.formula()?;
    p.finish()?;
    Ok(s)
}

pub fn parse_formula(text: &str, mode: Mode) -> Result<Formula, SyntaxError> {
    sugar_expand(&parse_sugar(text)?, mode)
}

pub fn parse_inequality(text: &str, mode: Mode) -> Result<Inequality, SyntaxError> {
    parse_inequality_at(text, mode, 1)
}

fn parse_inequality_at(text: &str, mode: Mode, line: usize) -> Result<Inequality, SyntaxError> {
    let mut p = Parser::new(text, line)?;
    let (a, b) = p.inequality()?;
    p.finish()?;
    let a = sugar_expand(&a, mode)?;
    Ok(match b {
        Some(b) => Inequality::new(a, sugar_expand(&b, mode)?),
        None => Inequality::nonneg(a),
    })
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split('\n').enumerate().filter_map(|(i, raw)| {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let body = line.split('#').next().unwrap_or("");
        (!body.trim().is_empty()).then_some((i + 1, line))
    })
}

/// One inequality per non-comment, non-blank line.
pub fn parse_theory_file(text: &str, mode: Mode) -> Result<Theory, SyntaxError> {
    content_lines(text)
        .map(|(line, body)| parse_inequality_at(body, mode, line))
        .collect()
}

/// Lines of the form `ident = rational`.
pub fn parse_model_file(text: &str) -> Result<BTreeMap<Letter, Rational>, SyntaxError> {
    let mut out = BTreeMap::new();
    for (line, body) in content_lines(text) {
        let mut p = Parser::new(body, line)?;
        let name_span = p.span();
        let name = match p.bump() {
            Tok::Ident(n) => n,
            other => {
                return Err(SyntaxError::at(
                    name_span,
                    format!("expected letter, found {}", other.describe()),
                ))
            }
        };
        p.expect(Tok::Eq)?;
        let negative = if *p.peek() == Tok::Minus {
            p.bump();
            true
        } else {
            false
        };
        if !matches!(p.peek(), Tok::Num(_)) {
            return Err(p.unexpected("expected rational value"));
        }
        let q = p.rational()?;
        p.finish()?;
        let letter = Letter::new(&name);
        if out.insert(letter, if negative { -q } else { q }).is_some() {
            return Err(SyntaxError::DuplicateLetter { span: name_span, letter: name });
        }
    }
    Ok(out)
}

/// Reduced rational, `p/q` or an integer.
pub fn print_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_meet_level(f, &mut out);
    out
}

pub fn print_inequality(i: &Inequality) -> String {
    format!("{} <= {}", print_formula(&i.lhs), print_formula(&i.rhs))
}

fn write_meet_level(f: &Formula, out: &mut String) {
    match f {
        Formula::Meet(a, b) => {
            write_meet_level(a, out);
            out.push_str(" /\\ ");
            write_sum_level(b, out);
        }
        _ => write_sum_level(f, out),
    }
}

fn write_sum_level(f: &Formula, out: &mut String) {
    match f {
        Formula::Meet(..) => {
            out.push('(');
            write_meet_level(f, out);
            out.push(')');
        }
        Formula::Add(a, b) => {
            write_sum_level(a, out);
            out.push_str(" + ");
            write_signed(b, out);
        }
        _ => write_signed(f, out),
    }
}

fn write_signed(f: &Formula, out: &mut String) {
    match f {
        Formula::Zero => out.push('0'),
        Formula::One => out.push('1'),
        Formula::Letter(l) => out.push_str(l.as_str()),
        Formula::Add(..) | Formula::Meet(..) => {
            out.push('(');
            write_meet_level(f, out);
            out.push(')');
        }
        Formula::Scale(q, inner) => match inner.as_ref() {
            Formula::Letter(l) => {
                if *q == -Rational::one() {
                    out.push('-');
                } else {
                    out.push_str(&print_rational(q));
                }
                out.push_str(l.as_str());
            }
            Formula::Zero => {
                out.push_str(&print_rational(q));
                out.push_str("*0");
            }
            Formula::One => {
                out.push_str(&print_rational(q));
                out.push_str("*1");
            }
            other => {
                if *q == -Rational::one() {
                    out.push('-');
                } else {
                    out.push_str(&print_rational(q));
                }
                out.push('(');
                write_meet_level(other, out);
                out.push(')');
            }
        },
    }
}

/// Parse a possibly negative rational such as `-3/2`.
pub fn parse_rational(text: &str) -> Result<Rational, SyntaxError> {
    let mut p = Parser::new(text, 1)?;
    let negative = if *p.peek() == Tok::Minus {
        p.bump();
        true
    } else {
        false
    };
    if !matches!(p.peek(), Tok::Num(_)) {
        return Err(p.unexpected("expected rational"));
    }
    let q = p.rational()?;
    p.finish()?;
    Ok(if negative { -q } else { q })
}
