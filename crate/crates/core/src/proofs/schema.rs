//! Axiom schemas. Equality schemas `A = B` produce `A ≤ B` under `Le` and
//! `B ≤ A` under `Ge`.

use thiserror::Error;

use super::{AxiomId, Dir, Substitution};
use crate::formula::{is_nonneg, Formula, Inequality, Mode, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("no axiom {0}")]
    UnknownAxiom(AxiomId),
    #[error("axiom {axiom} needs metavariable {var}")]
    Missing { axiom: AxiomId, var: &'static str },
    #[error("axiom {axiom} does not use metavariable {var}")]
    Unused { axiom: AxiomId, var: &'static str },
    #[error("axiom {0} needs a nonnegative scalar")]
    NegativeScalar(AxiomId),
    #[error("axiom {0} is only available in the extended language")]
    ExtendedOnly(AxiomId),
    #[error("axiom {0} must be instantiated with a propositional letter")]
    NotALetter(AxiomId),
}

#[derive(Clone, Copy)]
enum Var {
    Phi,
    Psi,
    Xi,
    R,
    S,
}

impl Var {
    fn name(self) -> &'static str {
        match self {
            Var::Phi => "phi",
            Var::Psi => "psi",
            Var::Xi => "xi",
            Var::R => "r",
            Var::S => "s",
        }
    }

    fn present(self, sub: &Substitution) -> bool {
        match self {
            Var::Phi => sub.phi.is_some(),
            Var::Psi => sub.psi.is_some(),
            Var::Xi => sub.xi.is_some(),
            Var::R => sub.r.is_some(),
            Var::S => sub.s.is_some(),
        }
    }
}

fn uses(n: u8) -> Option<&'static [Var]> {
    use Var::*;
    Some(match n {
        1 | 10 | 14 => &[Phi, Psi],
        2 | 11 | 12 => &[Phi, Psi, Xi],
        3 | 4 | 5 | 9 | 15 => &[Phi],
        6 | 8 => &[Phi, R, S],
        7 | 13 => &[Phi, Psi, R],
        _ => return None,
    })
}

/// The instance of axiom `ax` under `sub`, validated against `mode`.
pub fn instantiate(ax: AxiomId, sub: &Substitution, mode: Mode) -> Result<Inequality, SchemaError> {
    let vars = uses(ax.number).ok_or(SchemaError::UnknownAxiom(ax))?;
    // Pure inequality axiom: only one direction.
    if ax.number == 14 && ax.dir == Dir::Ge {
        return Err(SchemaError::UnknownAxiom(ax));
    }
    for v in [Var::Phi, Var::Psi, Var::Xi, Var::R, Var::S] {
        let wanted = vars.iter().any(|u| u.name() == v.name());
        match (wanted, v.present(sub)) {
            (true, false) => return Err(SchemaError::Missing { axiom: ax, var: v.name() }),
            (false, true) => return Err(SchemaError::Unused { axiom: ax, var: v.name() }),
            _ => {}
        }
    }
    let f = |o: &Option<Formula>| o.clone().expect("checked above");
    let q = |o: &Option<Rational>| o.clone().expect("checked above");
    let (phi, psi, xi) = (&sub.phi, &sub.psi, &sub.xi);
    let (lhs, rhs) = match ax.number {
        1 => (Formula::add(f(phi), f(psi)), Formula::add(f(psi), f(phi))),
        2 => (
            Formula::add(Formula::add(f(phi), f(psi)), f(xi)),
            Formula::add(f(psi), Formula::add(f(phi), f(xi))),
        ),
        3 => (Formula::add(f(phi), Formula::Zero), f(phi)),
        4 => (Formula::scale(Rational::from_integer(1.into()), f(phi)), f(phi)),
        5 => (Formula::scale(Rational::from_integer(0.into()), f(phi)), Formula::Zero),
        6 => {
            let (r, s) = (q(&sub.r), q(&sub.s));
            (
                Formula::add(Formula::scale(r.clone(), f(phi)), Formula::scale(s.clone(), f(phi))),
                Formula::scale(s + r, f(phi)),
            )
        }
        7 => {
            let r = q(&sub.r);
            (
                Formula::add(Formula::scale(r.clone(), f(phi)), Formula::scale(r.clone(), f(psi))),
                Formula::scale(r, Formula::add(f(phi), f(psi))),
            )
        }
        8 => {
            let (r, s) = (q(&sub.r), q(&sub.s));
            (
                Formula::scale(r.clone(), Formula::scale(s.clone(), f(phi))),
                Formula::scale(r * s, f(phi)),
            )
        }
        9 => (Formula::meet(f(phi), f(phi)), f(phi)),
        10 => (Formula::meet(f(phi), f(psi)), Formula::meet(f(psi), f(phi))),
        11 => (
            Formula::meet(Formula::meet(f(phi), f(psi)), f(xi)),
            Formula::meet(f(phi), Formula::meet(f(psi), f(xi))),
        ),
        12 => (
            Formula::meet(Formula::add(f(phi), f(xi)), Formula::add(f(psi), f(xi))),
            Formula::add(Formula::meet(f(phi), f(psi)), f(xi)),
        ),
        13 => {
            let r = q(&sub.r);
            if !is_nonneg(&r) {
                return Err(SchemaError::NegativeScalar(ax));
            }
            (
                Formula::scale(r.clone(), Formula::meet(f(phi), f(psi))),
                Formula::meet(Formula::scale(r.clone(), f(phi)), Formula::scale(r, f(psi))),
            )
        }
        14 => return Ok(Inequality::new(Formula::meet(f(phi), f(psi)), f(psi))),
        15 => {
            if !mode.is_extended() {
                return Err(SchemaError::ExtendedOnly(ax));
            }
            let p = f(phi);
            if !matches!(p, Formula::Letter(_)) {
                return Err(SchemaError::NotALetter(ax));
            }
            let minus_one = Formula::constant(-Rational::from_integer(1.into()));
            return Ok(match ax.dir {
                Dir::Le => Inequality::new(minus_one, p),
                Dir::Ge => Inequality::new(p, Formula::One),
            });
        }
        _ => unreachable!("filtered by uses()"),
    };
    Ok(match ax.dir {
        Dir::Le => Inequality::new(lhs, rhs),
        Dir::Ge => Inequality::new(rhs, lhs),
    })
}
