//! Evaluation in rational-valued models and in the ordered ring ℚ[x].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::formula::{Formula, Inequality, Letter, Mode, Rational, Theory};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("letter {0} has no value")]
    Unassigned(Letter),
    #[error("the constant 1 does not exist in basic mode")]
    OneInBasicMode,
    #[error("value {value} of {letter} lies outside [-1, 1]")]
    OutOfRange { letter: Letter, value: Rational },
}

/// Rational-valued structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    assignment: BTreeMap<Letter, Rational>,
    mode: Mode,
}

impl Model {
    /// Rejects values outside [−1, 1] in extended mode.
    pub fn new(assignment: BTreeMap<Letter, Rational>, mode: Mode) -> Result<Self, EvalError> {
        if mode.is_extended() {
            let one = Rational::one();
            if let Some((l, v)) = assignment.iter().find(|(_, v)| **v > one || **v < -one.clone()) {
                return Err(EvalError::OutOfRange { letter: l.clone(), value: v.clone() });
            }
        }
        Ok(Model { assignment, mode })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn get(&self, l: &Letter) -> Option<&Rational> {
        self.assignment.get(l)
    }

    pub fn assignment(&self) -> &BTreeMap<Letter, Rational> {
        &self.assignment
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.assignment.iter().map(|(l, v)| format!("{l} = {v}")).collect();
        f.write_str(&parts.join(", "))
    }
}

pub fn eval(f: &Formula, m: &Model) -> Result<Rational, EvalError> {
    Ok(match f {
        Formula::Zero => Rational::zero(),
        Formula::One if m.mode.is_extended() => Rational::one(),
        Formula::One => return Err(EvalError::OneInBasicMode),
        Formula::Letter(l) => m.get(l).cloned().ok_or_else(|| EvalError::Unassigned(l.clone()))?,
        Formula::Add(a, b) => eval(a, m)? + eval(b, m)?,
        Formula::Meet(a, b) => {
            let (x, y) = (eval(a, m)?, eval(b, m)?);
            if x <= y {
                x
            } else {
                y
            }
        }
        Formula::Scale(q, a) => q * eval(a, m)?,
    })
}

pub fn satisfies(m: &Model, ineq: &Inequality) -> Result<bool, EvalError> {
    Ok(eval(&ineq.lhs, m)? <= eval(&ineq.rhs, m)?)
}

pub fn satisfies_theory(m: &Model, t: &Theory) -> Result<bool, EvalError> {
    for h in t.iter() {
        if !satisfies(m, h)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Polynomial over ℚ, coefficient `i` belongs to `x^i`. Ordered so that
/// `x` exceeds every rational.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyValue(Vec<Rational>);

impl PolyValue {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PolyValue(coeffs)
    }

    pub fn constant(q: Rational) -> Self {
        PolyValue::new(vec![q])
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![Rational::zero(); k + 1];
        c[k] = Rational::one();
        PolyValue(c)
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.0
    }

    pub fn add(&self, other: &PolyValue) -> PolyValue {
        let n = self.0.len().max(other.0.len());
        let zero = Rational::zero();
        let sum = (0..n)
            .map(|i| self.0.get(i).unwrap_or(&zero) + other.0.get(i).unwrap_or(&zero))
            .collect();
        PolyValue::new(sum)
    }

    pub fn scale(&self, q: &Rational) -> PolyValue {
        PolyValue::new(self.0.iter().map(|c| c * q).collect())
    }

    pub fn sub(&self, other: &PolyValue) -> PolyValue {
        self.add(&other.scale(&-Rational::one()))
    }

    fn signum(&self) -> Ordering {
        match self.0.last() {
            None => Ordering::Equal,
            Some(lead) => lead.cmp(&Rational::zero()),
        }
    }
}

impl PartialOrd for PolyValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PolyValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sub(other).signum()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PolyModel {
    pub assignment: BTreeMap<Letter, PolyValue>,
}

pub fn poly_eval(f: &Formula, m: &PolyModel) -> Result<PolyValue, EvalError> {
    Ok(match f {
        Formula::Zero => PolyValue::default(),
        Formula::One => return Err(EvalError::OneInBasicMode),
        Formula::Letter(l) => {
            m.assignment.get(l).cloned().ok_or_else(|| EvalError::Unassigned(l.clone()))?
        }
        Formula::Add(a, b) => poly_eval(a, m)?.add(&poly_eval(b, m)?),
        Formula::Meet(a, b) => poly_eval(a, m)?.min(poly_eval(b, m)?),
        Formula::Scale(q, a) => poly_eval(a, m)?.scale(q),
    })
}

pub fn poly_leq(p: &PolyValue, q: &PolyValue) -> bool {
    p <= q
}
