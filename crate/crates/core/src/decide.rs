//! Decision procedure for finite theories: joint region decomposition of all
//! hypotheses and the goal, then one exact linear entailment per branch.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::farkas::{
    entails_linear, feasible, parametric_interval, Certificate, LinearSystem, LinearVerdict,
};
use crate::formula::{Formula, Inequality, Letter, Mode, Rational, Theory};
use crate::linear::LinearForm;
use crate::regions::decompose_joint;
use crate::semantics::Model;

/// Certificate for one branch, together with the system it refers to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchCertificate {
    pub signs: String,
    pub system: LinearSystem,
    pub target: LinearForm,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Entails(Vec<BranchCertificate>),
    Refutes(Model),
}

impl Verdict {
    pub fn is_entails(&self) -> bool {
        matches!(self, Verdict::Entails(_))
    }

    pub fn countermodel(&self) -> Option<&Model> {
        match self {
            Verdict::Refutes(m) => Some(m),
            Verdict::Entails(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DecideOptions {
    /// Skip branches whose guard region is empty.
    pub prune: bool,
}

/// One branch of a query: its guards plus the linear values of every source
/// formula on that branch.
struct Branch {
    signs: String,
    rows: Vec<LinearForm>,
    values: Vec<LinearForm>,
}

fn range_rows(letters: &[Letter]) -> Vec<LinearForm> {
    letters
        .iter()
        .flat_map(|l| {
            let p = LinearForm::letter(l.clone());
            [LinearForm::constant(Rational::one()).sub(&p), p.add(&LinearForm::constant(Rational::one()))]
        })
        .collect()
}

/// Joint branches of the hypotheses of `t` and the `extra` formulas; rows
/// hold guards, hypothesis values, and in extended mode the range rows.
fn branches(t: &Theory, extra: &[Formula], mode: Mode, letters: &[Letter], prune: bool) -> Vec<Branch> {
    let mut formulas: Vec<Formula> = t.iter().map(Inequality::slack).collect();
    let n = formulas.len();
    formulas.extend(extra.iter().cloned());
    let range = if mode.is_extended() { range_rows(letters) } else { Vec::new() };
    decompose_joint(&formulas, prune)
        .into_iter()
        .map(|jp| {
            let mut rows = jp.guards;
            rows.extend(jp.values[..n].iter().cloned());
            rows.extend(range.iter().cloned());
            Branch { signs: jp.signs, rows, values: jp.values[n..].to_vec() }
        })
        .collect()
}

fn letters_of_query(t: &Theory, extra: &[&Formula]) -> Vec<Letter> {
    let mut set: BTreeSet<Letter> = t.letters().into_iter().collect();
    for f in extra {
        set.extend(crate::formula::letters_of(f));
    }
    set.into_iter().collect()
}

pub fn decide(t: &Theory, goal: &Inequality, mode: Mode) -> Verdict {
    decide_with(t, goal, mode, DecideOptions::default())
}

pub fn decide_with(t: &Theory, goal: &Inequality, mode: Mode, opts: DecideOptions) -> Verdict {
    let goal_formula = goal.slack();
    let letters = letters_of_query(t, &[&goal_formula]);
    let mut certs = Vec::new();
    for b in branches(t, std::slice::from_ref(&goal_formula), mode, &letters, opts.prune) {
        let system = LinearSystem::with_order(b.rows, letters.clone());
        let target = b.values[0].clone();
        let certificate = match entails_linear(&system, &target) {
            LinearVerdict::Entailed(c) => Certificate::Farkas(c),
            LinearVerdict::Infeasible(c) => Certificate::Infeasible(c),
            LinearVerdict::Refuted(w) => {
                let model = Model::new(w, mode).expect("range rows keep witnesses in [-1, 1]");
                return Verdict::Refutes(model);
            }
        };
        certs.push(BranchCertificate { signs: b.signs, system, target, certificate });
    }
    Verdict::Entails(certs)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Consistency {
    /// Extended mode: consistent exactly when a model exists.
    Extended {
        witness: Option<Model>,
        certificates: Vec<BranchCertificate>,
    },
    /// Basic mode: always satisfiable by the constant 0; reports which letters
    /// the theory pins to 0 and, if possible, a model that is not constant 0.
    Basic {
        forced_zero: Vec<(Letter, bool)>,
        nonzero_witness: Option<Model>,
    },
}

impl Consistency {
    pub fn is_consistent(&self) -> bool {
        match self {
            Consistency::Extended { witness, .. } => witness.is_some(),
            Consistency::Basic { .. } => true,
        }
    }
}

pub fn consistent(t: &Theory, mode: Mode) -> Consistency {
    match mode {
        Mode::Extended => {
            let absurd = Inequality::nonneg(Formula::constant(-Rational::one()));
            match decide(t, &absurd, mode) {
                Verdict::Refutes(m) => Consistency::Extended { witness: Some(m), certificates: Vec::new() },
                Verdict::Entails(c) => Consistency::Extended { witness: None, certificates: c },
            }
        }
        Mode::Basic => {
            let mut forced_zero = Vec::new();
            let mut nonzero_witness = None;
            for l in t.letters() {
                let p = Formula::Letter(l.clone());
                let above = decide(t, &Inequality::new(p.clone(), Formula::Zero), mode);
                let below = decide(t, &Inequality::nonneg(p), mode);
                forced_zero.push((l, above.is_entails() && below.is_entails()));
                if nonzero_witness.is_none() {
                    nonzero_witness = above.countermodel().or(below.countermodel()).cloned();
                }
            }
            Consistency::Basic { forced_zero, nonzero_witness }
        }
    }
}

/// Intersection over all nonempty branches of the scalars `r ≥ 0` with
/// `0 ≤ base + r·slope`, as `(lower, upper)`; `None` if empty.
fn common_interval(
    t: &Theory,
    base: &Formula,
    slope: &Formula,
    mode: Mode,
) -> Option<(Rational, Option<Rational>)> {
    let letters = letters_of_query(t, &[base, slope]);
    let mut lower = Rational::zero();
    let mut upper: Option<Rational> = None;
    for b in branches(t, &[base.clone(), slope.clone()], mode, &letters, false) {
        let system = LinearSystem::with_order(b.rows, letters.clone());
        if feasible(&system).is_err() {
            continue;
        }
        let iv = parametric_interval(&system, &b.values[0], &b.values[1])?;
        if iv.lower > lower {
            lower = iv.lower;
        }
        if let Some(u) = iv.upper {
            if upper.as_ref().is_none_or(|cur| u < *cur) {
                upper = Some(u);
            }
        }
        if upper.as_ref().is_some_and(|u| *u < lower) {
            return None;
        }
    }
    Some((lower, upper))
}

/// Least `r ≥ 0` with `T ⊨ φ ≤ rξ`, if any exists.
pub fn bound_by_unit(t: &Theory, phi: &Formula, xi: &Formula, mode: Mode) -> Option<Rational> {
    common_interval(t, &Formula::negate(phi.clone()), xi, mode).map(|(lower, _)| lower)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArchimedeanReport {
    /// `T ⊨ rφ ≤ ψ` for every rational `r ≥ 0`.
    pub forall_r: bool,
    /// `T ⊨ φ ≤ 0`.
    pub neg_phi: bool,
    /// The `r = 0` instance, `T ⊨ 0 ≤ ψ`.
    pub at_zero: bool,
}

pub fn archimedean_pair(t: &Theory, phi: &Formula, psi: &Formula, mode: Mode) -> ArchimedeanReport {
    let forall_r = matches!(
        common_interval(t, psi, &Formula::negate(phi.clone()), mode),
        Some((lower, None)) if lower.is_zero()
    );
    let neg_phi = decide(t, &Inequality::new(phi.clone(), Formula::Zero), mode).is_entails();
    let at_zero = decide(t, &Inequality::nonneg(psi.clone()), mode).is_entails();
    ArchimedeanReport { forall_r, neg_phi, at_zero }
}
