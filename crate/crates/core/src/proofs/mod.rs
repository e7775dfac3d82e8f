//! Hilbert-style derivations: representation, checking, a tactic layer for
//! building derivations, derived rules, and the deduction/cut transformers.

mod builder;
mod check;
mod format;
pub mod library;
mod schema;
mod transform;

use std::fmt;

pub use builder::{BuildError, Eqn, ProofBuilder, StepId};
pub use check::{check, conclude, Rejection, RejectionReason};
pub use format::{parse_proof_file, print_proof_file, ProofFile, ProofFileError};
pub use schema::instantiate;
pub use transform::{cut_eliminate, deduction_transform, Deduction, TransformError};

use crate::formula::{Formula, Inequality, Mode, Rational, Theory};

/// Which half of an equality axiom is meant. For the pure inequality
/// axioms only `Le` exists; for the range axiom `Le` is the lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dir {
    Le,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AxiomId {
    pub number: u8,
    pub dir: Dir,
}

impl AxiomId {
    pub fn le(number: u8) -> Self {
        AxiomId { number, dir: Dir::Le }
    }

    pub fn ge(number: u8) -> Self {
        AxiomId { number, dir: Dir::Ge }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dir = match self.dir {
            Dir::Le => "le",
            Dir::Ge => "ge",
        };
        write!(f, "a{}.{}", self.number, dir)
    }
}

/// Explicit instantiation of a schema's metavariables.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Substitution {
    pub phi: Option<Formula>,
    pub psi: Option<Formula>,
    pub xi: Option<Formula>,
    pub r: Option<Rational>,
    pub s: Option<Rational>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn phi(mut self, f: Formula) -> Self {
        self.phi = Some(f);
        self
    }

    pub fn psi(mut self, f: Formula) -> Self {
        self.psi = Some(f);
        self
    }

    pub fn xi(mut self, f: Formula) -> Self {
        self.xi = Some(f);
        self
    }

    pub fn r(mut self, q: Rational) -> Self {
        self.r = Some(q);
        self
    }

    pub fn s(mut self, q: Rational) -> Self {
        self.s = Some(q);
        self
    }
}

/// How a step is justified. Step references are 0-based indices of earlier
/// steps; `Hyp` indexes the theory.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[allow(clippy::large_enum_variant)]
pub enum Rule {
    Hyp(usize),
    Axiom(AxiomId, Substitution),
    /// Transitivity: `φ ≤ ξ`, `ξ ≤ ψ` give `φ ≤ ψ`.
    R1(usize, usize),
    /// Positive linearity: `φ ≤ ψ` gives `rφ + ξ ≤ rψ + ξ` for `r ≥ 0`.
    R2 { from: usize, r: Rational, xi: Formula },
    /// Restriction: `φ ≤ ψ` gives `φ∧0 ≤ ψ∧0`.
    R3(usize),
    /// Meet congruence: `φ ≤ ψ` and `ψ ≤ φ` give `φ∧ξ ≤ ψ∧ξ`.
    R4 { le: usize, ge: usize, xi: Formula },
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Hyp(_) => "hyp",
            Rule::Axiom(..) => "axiom",
            Rule::R1(..) => "r1",
            Rule::R2 { .. } => "r2",
            Rule::R3(_) => "r3",
            Rule::R4 { .. } => "r4",
        }
    }

    /// Least fragment admitting this rule.
    pub fn fragment(&self) -> Fragment {
        match self {
            Rule::Hyp(_) | Rule::Axiom(..) | Rule::R1(..) => Fragment::Mp,
            Rule::R2 { .. } => Fragment::Lin,
            Rule::R3(_) | Rule::R4 { .. } => Fragment::Full,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofStep {
    pub rule: Rule,
    pub conclusion: Inequality,
}

/// Rule restriction of a derivation: transitivity only, transitivity plus
/// positive linearity, or everything.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fragment {
    Mp,
    Lin,
    Full,
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fragment::Mp => "mp",
            Fragment::Lin => "lin",
            Fragment::Full => "full",
        })
    }
}

impl std::str::FromStr for Fragment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mp" => Ok(Fragment::Mp),
            "lin" => Ok(Fragment::Lin),
            "full" => Ok(Fragment::Full),
            other => Err(format!("unknown fragment {other}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub theory: Theory,
    pub mode: Mode,
    pub fragment: Fragment,
    pub steps: Vec<ProofStep>,
}

impl Derivation {
    /// Conclusion of the last step.
    pub fn conclusion(&self) -> Option<&Inequality> {
        self.steps.last().map(|s| &s.conclusion)
    }
}
