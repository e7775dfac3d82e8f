//! Łukasiewicz and continuous propositional logic, interpreted in the
//! extended language: `¬x = 1 − x`, `x ⊖ y = (x − y) ∨ 0`, `½x`.
//!
//! Surface grammar, loosest first: `<->`, `->` (right associative), `(+)`,
//! `&`, `-.`, then the prefixes `~` and `1/2`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::decide::{decide, Verdict};
use crate::formula::{int, rat, Formula, Inequality, Letter, Mode, Theory};
use crate::semantics::{satisfies, Model};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LukFormula {
    Var(Letter),
    Not(Arc<LukFormula>),
    Ominus(Arc<LukFormula>, Arc<LukFormula>),
    Half(Arc<LukFormula>),
}

#[allow(clippy::should_implement_trait)]
impl LukFormula {
    pub fn var(name: &str) -> Self {
        LukFormula::Var(Letter::new(name))
    }

    pub fn not(x: LukFormula) -> Self {
        LukFormula::Not(Arc::new(x))
    }

    pub fn ominus(x: LukFormula, y: LukFormula) -> Self {
        LukFormula::Ominus(Arc::new(x), Arc::new(y))
    }

    pub fn half(x: LukFormula) -> Self {
        LukFormula::Half(Arc::new(x))
    }

    /// `x → y := ¬(x ⊖ y)`.
    pub fn implies(x: LukFormula, y: LukFormula) -> Self {
        Self::not(Self::ominus(x, y))
    }

    /// `x ⊕ y := ¬(¬x ⊖ y)`.
    pub fn oplus(x: LukFormula, y: LukFormula) -> Self {
        Self::not(Self::ominus(Self::not(x), y))
    }

    /// `x ⊙ y := ¬(¬x ⊕ ¬y)`.
    pub fn odot(x: LukFormula, y: LukFormula) -> Self {
        Self::not(Self::oplus(Self::not(x), Self::not(y)))
    }

    /// `min(a, b) = a ⊖ (a ⊖ b)` applied to both implications.
    pub fn iff(x: LukFormula, y: LukFormula) -> Self {
        let a = Self::implies(x.clone(), y.clone());
        let b = Self::implies(y, x);
        Self::ominus(a.clone(), Self::ominus(a, b))
    }

    pub fn letters(&self) -> Vec<Letter> {
        crate::formula::letters_of(&translate(self))
    }
}

impl fmt::Display for LukFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LukFormula::Var(l) => write!(f, "{l}"),
            LukFormula::Not(x) => write!(f, "~{x}"),
            LukFormula::Half(x) => write!(f, "1/2 {x}"),
            LukFormula::Ominus(x, y) => write!(f, "({x} -. {y})"),
        }
    }
}

pub fn translate(f: &LukFormula) -> Formula {
    match f {
        LukFormula::Var(l) => Formula::Letter(l.clone()),
        LukFormula::Not(x) => Formula::sub(Formula::One, translate(x)),
        LukFormula::Ominus(x, y) => Formula::join(Formula::sub(translate(x), translate(y)), Formula::Zero),
        LukFormula::Half(x) => Formula::scale(rat(1, 2), translate(x)),
    }
}

/// Which constant counts as "true".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// Valid means value 1.
    #[default]
    Lukasiewicz,
    /// Valid means value 0.
    Continuous,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LukVerdict {
    Valid,
    Invalid(Model),
}

impl LukVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, LukVerdict::Valid)
    }
}

/// Validity over all valuations into `[0, 1]`: decide whether
/// `{0 ≤ P : P occurs}` entails both halves of `translate(f) = c`.
pub fn luk_valid(f: &LukFormula, convention: Convention) -> LukVerdict {
    let t = translate(f);
    let letters = crate::formula::letters_of(&t);
    let theory: Theory = letters
        .iter()
        .map(|l| Inequality::nonneg(Formula::Letter(l.clone())))
        .collect();
    let target = match convention {
        Convention::Lukasiewicz => Formula::One,
        Convention::Continuous => Formula::Zero,
    };
    for goal in [Inequality::new(t.clone(), target.clone()), Inequality::new(target, t)] {
        if let Verdict::Refutes(m) = decide(&theory, &goal, Mode::Extended) {
            return LukVerdict::Invalid(prefer_crisp(m, &goal));
        }
    }
    LukVerdict::Valid
}

/// Move each letter of a countermodel to 0 or 1 when that keeps `goal`
/// violated, so reported valuations are as classical as possible.
fn prefer_crisp(m: Model, goal: &Inequality) -> Model {
    let mut values = m.assignment().clone();
    let letters: Vec<Letter> = values.keys().cloned().collect();
    for l in letters {
        for candidate in [int(0), int(1)] {
            let mut trial = values.clone();
            trial.insert(l.clone(), candidate);
            let model = Model::new(trial.clone(), Mode::Extended).expect("values within range");
            if satisfies(&model, goal) == Ok(false) {
                values = trial;
                break;
            }
        }
    }
    Model::new(values, Mode::Extended).expect("values within range")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct LukSyntaxError {
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Not,
    Minus,
    Implies,
    Iff,
    Oplus,
    And,
    Half,
    LParen,
    RParen,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, LukSyntaxError> {
    const FIXED: [(&str, Tok); 8] = [
        ("<->", Tok::Iff),
        ("(+)", Tok::Oplus),
        ("1/2", Tok::Half),
        ("->", Tok::Implies),
        ("-.", Tok::Minus),
        ("~", Tok::Not),
        ("&", Tok::And),
        ("(", Tok::LParen),
    ];
    let mut out = Vec::new();
    let mut i = 0;
    let bytes = text.as_bytes();
    'outer: while i < text.len() {
        let rest = &text[i..];
        let c = rest.chars().next().expect("nonempty");
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        for (lit, tok) in FIXED.iter() {
            if rest.starts_with(lit) {
                out.push((tok.clone(), i + 1));
                i += lit.len();
                continue 'outer;
            }
        }
        if c == ')' {
            out.push((Tok::RParen, i + 1));
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < text.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), start + 1));
            continue;
        }
        return Err(LukSyntaxError { column: i + 1, message: format!("unexpected character {c:?}") });
    }
    out.push((Tok::End, text.len() + 1));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, message: &str) -> Result<T, LukSyntaxError> {
        Err(LukSyntaxError { column: self.toks[self.pos].1, message: message.to_string() })
    }

    fn iff(&mut self) -> Result<LukFormula, LukSyntaxError> {
        let left = self.implication()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let right = self.implication()?;
            return Ok(LukFormula::iff(left, right));
        }
        Ok(left)
    }

    fn implication(&mut self) -> Result<LukFormula, LukSyntaxError> {
        let left = self.disjunction()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let right = self.implication()?;
            return Ok(LukFormula::implies(left, right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<LukFormula, LukSyntaxError> {
        let mut acc = self.conjunction()?;
        while *self.peek() == Tok::Oplus {
            self.bump();
            acc = LukFormula::oplus(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<LukFormula, LukSyntaxError> {
        let mut acc = self.difference()?;
        while *self.peek() == Tok::And {
            self.bump();
            acc = LukFormula::odot(acc, self.difference()?);
        }
        Ok(acc)
    }

    fn difference(&mut self) -> Result<LukFormula, LukSyntaxError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Minus {
            self.bump();
            acc = LukFormula::ominus(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<LukFormula, LukSyntaxError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(LukFormula::not(self.unary()?))
            }
            Tok::Half => {
                self.bump();
                Ok(LukFormula::half(self.unary()?))
            }
            Tok::Ident(name) => {
                if !Letter::is_valid_name(&name) {
                    return self.fail(&format!("{name} is not a valid letter"));
                }
                self.bump();
                Ok(LukFormula::var(&name))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.iff()?;
                if self.bump() != Tok::RParen {
                    self.pos = self.pos.saturating_sub(1);
                    return self.fail("expected )");
                }
                Ok(inner)
            }
            _ => self.fail("expected a formula"),
        }
    }
}

pub fn parse_luk(text: &str) -> Result<LukFormula, LukSyntaxError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let f = p.iff()?;
    if *p.peek() != Tok::End {
        return p.fail("unexpected trailing input");
    }
    Ok(f)
}
