//! Linear normal forms of ∧-free formulas.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::formula::{Formula, Letter, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("formula {0} contains a meet and has no linear normal form")]
pub struct NotLinear(pub Formula);

/// `Σ coeffs[P]·P + affine`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LinearForm {
    coeffs: BTreeMap<Letter, Rational>,
    affine: Rational,
}

impl LinearForm {
    pub fn zero() -> Self {
        LinearForm::default()
    }

    pub fn constant(q: Rational) -> Self {
        LinearForm { coeffs: BTreeMap::new(), affine: q }
    }

    pub fn letter(l: Letter) -> Self {
        LinearForm::from_parts([(l, Rational::one())], Rational::zero())
    }

    pub fn from_parts(
        coeffs: impl IntoIterator<Item = (Letter, Rational)>,
        affine: Rational,
    ) -> Self {
        let mut out = LinearForm::constant(affine);
        for (l, q) in coeffs {
            out.add_term(l, q);
        }
        out
    }

    fn add_term(&mut self, l: Letter, q: Rational) {
        let entry = self.coeffs.entry(l.clone()).or_insert_with(Rational::zero);
        *entry += q;
        if entry.is_zero() {
            self.coeffs.remove(&l);
        }
    }

    pub fn coeff(&self, l: &Letter) -> Rational {
        self.coeffs.get(l).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<Letter, Rational> {
        &self.coeffs
    }

    pub fn affine(&self) -> &Rational {
        &self.affine
    }

    pub fn letters(&self) -> impl Iterator<Item = &Letter> {
        self.coeffs.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.affine.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &LinearForm) -> LinearForm {
        let mut out = self.clone();
        for (l, q) in &other.coeffs {
            out.add_term(l.clone(), q.clone());
        }
        out.affine += &other.affine;
        out
    }

    pub fn scale(&self, q: &Rational) -> LinearForm {
        if q.is_zero() {
            return LinearForm::zero();
        }
        LinearForm {
            coeffs: self.coeffs.iter().map(|(l, c)| (l.clone(), c * q)).collect(),
            affine: &self.affine * q,
        }
    }

    pub fn neg(&self) -> LinearForm {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, other: &LinearForm) -> LinearForm {
        self.add(&other.neg())
    }

    /// Value at an assignment; letters without a value count as 0.
    pub fn eval(&self, values: &BTreeMap<Letter, Rational>) -> Rational {
        self.coeffs.iter().fold(self.affine.clone(), |acc, (l, c)| match values.get(l) {
            Some(v) => acc + c * v,
            None => acc,
        })
    }

    /// Coefficient vector in the given letter order.
    pub fn vector(&self, order: &[Letter]) -> Vec<Rational> {
        order.iter().map(|l| self.coeff(l)).collect()
    }

    /// `Σ aᵢPᵢ (+ a·1)`, letters in `order` first, any others after in
    /// lexicographic order; coefficient 1 is left implicit.
    pub fn to_formula(&self, order: &[Letter]) -> Formula {
        let mut letters: Vec<&Letter> = order.iter().filter(|l| self.coeffs.contains_key(*l)).collect();
        letters.extend(self.coeffs.keys().filter(|l| !order.contains(l)));
        let mut terms: Vec<Formula> = letters
            .into_iter()
            .map(|l| {
                let c = &self.coeffs[l];
                if c.is_one() {
                    Formula::Letter(l.clone())
                } else {
                    Formula::scale(c.clone(), Formula::Letter(l.clone()))
                }
            })
            .collect();
        if !self.affine.is_zero() {
            terms.push(if self.affine.is_one() {
                Formula::One
            } else {
                Formula::constant(self.affine.clone())
            });
        }
        terms.into_iter().reduce(Formula::add).unwrap_or(Formula::Zero)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula(&[]))
    }
}

pub fn linearize(f: &Formula) -> Result<LinearForm, NotLinear> {
    Ok(match f {
        Formula::Zero => LinearForm::zero(),
        Formula::One => LinearForm::constant(Rational::one()),
        Formula::Letter(l) => LinearForm::letter(l.clone()),
        Formula::Add(a, b) => linearize(a)?.add(&linearize(b)?),
        Formula::Scale(q, a) => linearize(a)?.scale(q),
        Formula::Meet(..) => return Err(NotLinear(f.clone())),
    })
}

pub fn lf_add(a: &LinearForm, b: &LinearForm) -> LinearForm {
    a.add(b)
}

pub fn lf_scale(q: &Rational, a: &LinearForm) -> LinearForm {
    a.scale(q)
}

pub fn lf_sub(a: &LinearForm, b: &LinearForm) -> LinearForm {
    a.sub(b)
}

pub fn lf_to_formula(a: &LinearForm, order: &[Letter]) -> Formula {
    a.to_formula(order)
}
