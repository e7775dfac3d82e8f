//! Formula trees, inequalities and theories.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One as _, Zero as _};

/// Exact rational scalar. Always reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Basic,
    Extended,
}

impl Mode {
    pub fn is_extended(self) -> bool {
        self == Mode::Extended
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Basic => "basic",
            Mode::Extended => "extended",
        })
    }
}

/// A proposition letter. Ordered lexicographically by code point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(Arc<str>);

impl Letter {
    pub fn new(name: &str) -> Self {
        Letter(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_valid_name(name: &str) -> bool {
        let mut chars = name.chars();
        matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Letter {
    fn from(s: &str) -> Self {
        Letter::new(s)
    }
}

/// Core formula tree. Derived connectives are built by the constructor
/// helpers below and never appear as nodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Zero,
    One,
    Letter(Letter),
    Add(Arc<Formula>, Arc<Formula>),
    Meet(Arc<Formula>, Arc<Formula>),
    Scale(Rational, Arc<Formula>),
}

#[allow(clippy::should_implement_trait)]
impl Formula {
    pub fn letter(name: &str) -> Formula {
        Formula::Letter(Letter::new(name))
    }

    pub fn add(a: Formula, b: Formula) -> Formula {
        Formula::Add(Arc::new(a), Arc::new(b))
    }

    pub fn meet(a: Formula, b: Formula) -> Formula {
        Formula::Meet(Arc::new(a), Arc::new(b))
    }

    pub fn scale(q: Rational, a: Formula) -> Formula {
        Formula::Scale(q, Arc::new(a))
    }

    /// `q` in the extended language, i.e. `q·1`.
    pub fn constant(q: Rational) -> Formula {
        Formula::scale(q, Formula::One)
    }

    /// `−φ`, i.e. `(−1)φ`.
    pub fn negate(a: Formula) -> Formula {
        Formula::scale(-Rational::one(), a)
    }

    /// `φ − ψ`, i.e. `φ + (−ψ)`.
    pub fn sub(a: Formula, b: Formula) -> Formula {
        Formula::add(a, Formula::negate(b))
    }

    /// `φ ∨ ψ`, i.e. `−(−φ ∧ −ψ)`.
    pub fn join(a: Formula, b: Formula) -> Formula {
        Formula::negate(Formula::meet(Formula::negate(a), Formula::negate(b)))
    }

    /// `φ⁺`, i.e. `0 ∨ φ`.
    pub fn pos(a: Formula) -> Formula {
        Formula::join(Formula::Zero, a)
    }

    /// `φ⁻`, i.e. `0 ∨ (−φ)`.
    pub fn neg(a: Formula) -> Formula {
        Formula::join(Formula::Zero, Formula::negate(a))
    }

    /// `|φ|`, i.e. `φ ∨ (−φ)`.
    pub fn abs(a: Formula) -> Formula {
        Formula::join(a.clone(), Formula::negate(a))
    }

    pub fn contains_one(&self) -> bool {
        match self {
            Formula::One => true,
            Formula::Zero | Formula::Letter(_) => false,
            Formula::Add(a, b) | Formula::Meet(a, b) => a.contains_one() || b.contains_one(),
            Formula::Scale(_, a) => a.contains_one(),
        }
    }

    pub fn meet_count(&self) -> usize {
        match self {
            Formula::Zero | Formula::One | Formula::Letter(_) => 0,
            Formula::Add(a, b) => a.meet_count() + b.meet_count(),
            Formula::Meet(a, b) => 1 + a.meet_count() + b.meet_count(),
            Formula::Scale(_, a) => a.meet_count(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Zero | Formula::One | Formula::Letter(_) => 1,
            Formula::Add(a, b) | Formula::Meet(a, b) => 1 + a.size() + b.size(),
            Formula::Scale(_, a) => 1 + a.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Zero | Formula::One | Formula::Letter(_) => 0,
            Formula::Add(a, b) | Formula::Meet(a, b) => 1 + a.depth().max(b.depth()),
            Formula::Scale(_, a) => 1 + a.depth(),
        }
    }

    /// True when the formula is admissible in `mode`.
    pub fn fits(&self, mode: Mode) -> bool {
        mode.is_extended() || !self.contains_one()
    }

    fn collect_letters(&self, out: &mut BTreeSet<Letter>) {
        match self {
            Formula::Zero | Formula::One => {}
            Formula::Letter(l) => {
                out.insert(l.clone());
            }
            Formula::Add(a, b) | Formula::Meet(a, b) => {
                a.collect_letters(out);
                b.collect_letters(out);
            }
            Formula::Scale(_, a) => a.collect_letters(out),
        }
    }

    /// Replace every occurrence of letter `from` by `to`.
    pub fn rename(&self, from: &Letter, to: &Letter) -> Formula {
        match self {
            Formula::Letter(l) if l == from => Formula::Letter(to.clone()),
            Formula::Zero | Formula::One | Formula::Letter(_) => self.clone(),
            Formula::Add(a, b) => Formula::add(a.rename(from, to), b.rename(from, to)),
            Formula::Meet(a, b) => Formula::meet(a.rename(from, to), b.rename(from, to)),
            Formula::Scale(q, a) => Formula::scale(q.clone(), a.rename(from, to)),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_formula(self))
    }
}

/// Sorted set of letters occurring in `f`.
pub fn letters_of(f: &Formula) -> Vec<Letter> {
    let mut set = BTreeSet::new();
    f.collect_letters(&mut set);
    set.into_iter().collect()
}

/// `lhs ≤ rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Inequality {
    pub lhs: Formula,
    pub rhs: Formula,
}

impl Inequality {
    pub fn new(lhs: Formula, rhs: Formula) -> Self {
        Inequality { lhs, rhs }
    }

    /// The bare-formula form `0 ≤ φ`.
    pub fn nonneg(f: Formula) -> Self {
        Inequality::new(Formula::Zero, f)
    }

    /// `rhs − lhs`, the formula whose nonnegativity this inequality states.
    pub fn slack(&self) -> Formula {
        Formula::sub(self.rhs.clone(), self.lhs.clone())
    }

    pub fn fits(&self, mode: Mode) -> bool {
        self.lhs.fits(mode) && self.rhs.fits(mode)
    }

    pub fn letters(&self) -> Vec<Letter> {
        let mut set = BTreeSet::new();
        self.lhs.collect_letters(&mut set);
        self.rhs.collect_letters(&mut set);
        set.into_iter().collect()
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_inequality(self))
    }
}

/// A finite ordered list of hypotheses.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Theory(pub Vec<Inequality>);

impl Theory {
    pub fn new(hyps: Vec<Inequality>) -> Self {
        Theory(hyps)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Inequality> {
        self.0.iter()
    }

    pub fn letters(&self) -> Vec<Letter> {
        let mut set = BTreeSet::new();
        for h in &self.0 {
            h.lhs.collect_letters(&mut set);
            h.rhs.collect_letters(&mut set);
        }
        set.into_iter().collect()
    }

    pub fn push(&mut self, h: Inequality) {
        self.0.push(h);
    }
}

impl FromIterator<Inequality> for Theory {
    fn from_iter<I: IntoIterator<Item = Inequality>>(iter: I) -> Self {
        Theory(iter.into_iter().collect())
    }
}

pub(crate) fn is_nonneg(q: &Rational) -> bool {
    *q >= Rational::zero()
}
