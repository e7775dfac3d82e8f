use std::fmt;

use thiserror::Error;

use super::schema::{instantiate, SchemaError};
use super::{Derivation, Fragment, ProofStep, Rule};
use crate::formula::{is_nonneg, Formula, Inequality, Mode, Theory};
use crate::syntax::print_inequality;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RejectionReason {
    #[error("derivation has no steps")]
    Empty,
    #[error("hypothesis {0} does not fit the declared mode")]
    TheoryMode(usize),
    #[error("no hypothesis {0}")]
    UnknownHypothesis(usize),
    #[error("step {0} is not an earlier step")]
    ForwardReference(usize),
    #[error("rule {rule} is not allowed in fragment {fragment}")]
    Fragment { rule: &'static str, fragment: Fragment },
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error("transitivity premises do not chain: {left} then {right}")]
    NoChain { left: String, right: String },
    #[error("linearity needs a nonnegative scalar")]
    NegativeScalar,
    #[error("meet congruence needs the converse of {0}")]
    NotConverse(String),
    #[error("formula uses 1 outside the extended language")]
    StepMode,
    #[error("stated conclusion {stated} differs from derived {derived}")]
    Mismatch { stated: String, derived: String },
}

/// Why and where a derivation was refused. `step` is 1-based; 0 means the
/// theory itself. `line` is filled in when the derivation came from a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub step: usize,
    pub line: Option<usize>,
    pub reason: RejectionReason,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.reason),
            None => write!(f, "step {}: {}", self.step, self.reason),
        }
    }
}

impl std::error::Error for Rejection {}

fn premise(steps: &[ProofStep], i: usize) -> Result<&Inequality, RejectionReason> {
    steps
        .get(i)
        .map(|s| &s.conclusion)
        .ok_or(RejectionReason::ForwardReference(i + 1))
}

fn fits(f: &Formula, mode: Mode) -> Result<(), RejectionReason> {
    if f.fits(mode) {
        Ok(())
    } else {
        Err(RejectionReason::StepMode)
    }
}

/// What `rule` derives from the steps already in place. Fragment
/// restrictions are not applied here.
pub fn conclude(
    rule: &Rule,
    steps: &[ProofStep],
    theory: &Theory,
    mode: Mode,
) -> Result<Inequality, RejectionReason> {
    let out = match rule {
        Rule::Hyp(k) => theory
            .0
            .get(*k)
            .cloned()
            .ok_or(RejectionReason::UnknownHypothesis(*k + 1))?,
        Rule::Axiom(ax, sub) => instantiate(*ax, sub, mode)?,
        Rule::R1(i, j) => {
            let (a, b) = (premise(steps, *i)?, premise(steps, *j)?);
            if a.rhs != b.lhs {
                return Err(RejectionReason::NoChain {
                    left: print_inequality(a),
                    right: print_inequality(b),
                });
            }
            Inequality::new(a.lhs.clone(), b.rhs.clone())
        }
        Rule::R2 { from, r, xi } => {
            let a = premise(steps, *from)?;
            if !is_nonneg(r) {
                return Err(RejectionReason::NegativeScalar);
            }
            Inequality::new(
                Formula::add(Formula::scale(r.clone(), a.lhs.clone()), xi.clone()),
                Formula::add(Formula::scale(r.clone(), a.rhs.clone()), xi.clone()),
            )
        }
        Rule::R3(i) => {
            let a = premise(steps, *i)?;
            Inequality::new(
                Formula::meet(a.lhs.clone(), Formula::Zero),
                Formula::meet(a.rhs.clone(), Formula::Zero),
            )
        }
        Rule::R4 { le, ge, xi } => {
            let (a, b) = (premise(steps, *le)?, premise(steps, *ge)?);
            if a.lhs != b.rhs || a.rhs != b.lhs {
                return Err(RejectionReason::NotConverse(print_inequality(a)));
            }
            Inequality::new(
                Formula::meet(a.lhs.clone(), xi.clone()),
                Formula::meet(a.rhs.clone(), xi.clone()),
            )
        }
    };
    fits(&out.lhs, mode)?;
    fits(&out.rhs, mode)?;
    Ok(out)
}

/// Verify every step of `d` in order.
pub fn check(d: &Derivation) -> Result<(), Rejection> {
    let at = |step: usize, reason| Rejection { step, line: None, reason };
    for (k, h) in d.theory.iter().enumerate() {
        if !h.fits(d.mode) {
            return Err(at(0, RejectionReason::TheoryMode(k + 1)));
        }
    }
    if d.steps.is_empty() {
        return Err(at(0, RejectionReason::Empty));
    }
    for (n, step) in d.steps.iter().enumerate() {
        if step.rule.fragment() > d.fragment {
            return Err(at(
                n + 1,
                RejectionReason::Fragment { rule: step.rule.name(), fragment: d.fragment },
            ));
        }
        let derived = conclude(&step.rule, &d.steps[..n], &d.theory, d.mode).map_err(|r| at(n + 1, r))?;
        if derived != step.conclusion {
            return Err(at(
                n + 1,
                RejectionReason::Mismatch {
                    stated: print_inequality(&step.conclusion),
                    derived: print_inequality(&derived),
                },
            ));
        }
    }
    Ok(())
}
