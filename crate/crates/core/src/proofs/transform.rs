//! Deduction theorem and cut elimination as derivation-to-derivation
//! transformers, following the induction on derivation length.

use num_traits::{One, Zero};
use thiserror::Error;

use super::builder::{BuildError, ProofBuilder, StepId};
use super::check::{check, Rejection};
use super::{Derivation, Fragment, Rule, Substitution};
use crate::formula::{Formula, Inequality, Rational, Theory};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("input derivation is not valid: {0}")]
    Unchecked(Rejection),
    #[error("no hypothesis {0}")]
    NoSuchHypothesis(usize),
    #[error("hypothesis {0} is not of the form 0 <= theta")]
    NotBare(usize),
    #[error("the two derivations use different theories or modes")]
    TheoryMismatch,
    #[error("the last hypotheses must be 0 <= phi and 0 <= -phi")]
    CutShape,
    #[error("both conclusions must be the same 0 <= psi")]
    ConclusionShape,
    #[error(transparent)]
    Build(#[from] BuildError),
}

/// Output of the deduction transformer: the multiplier `r` and a derivation
/// of `φ + (−r)ϑ⁻ ≤ ψ` (full variant) or `φ + rϑ ≤ ψ` (linear variant)
/// from the theory without `ϑ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deduction {
    pub r: Rational,
    pub derivation: Derivation,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Variant {
    Lin,
    Full,
}

struct Transformer<'a> {
    b: ProofBuilder,
    src: &'a Derivation,
    designated: usize,
    theta: Formula,
    variant: Variant,
    /// `0 ≤ ϑ⁻`, built on first use.
    neg_nonneg: Option<StepId>,
}

impl<'a> Transformer<'a> {
    /// The term carried along: `(−r)ϑ⁻` or `rϑ`.
    fn carried(&self, r: &Rational) -> Formula {
        match self.variant {
            Variant::Full => Formula::scale(-r.clone(), Formula::neg(self.theta.clone())),
            Variant::Lin => Formula::scale(r.clone(), self.theta.clone()),
        }
    }

    fn neg_nonneg(&mut self) -> Result<StepId, BuildError> {
        if let Some(id) = self.neg_nonneg {
            return Ok(id);
        }
        let id = self.b.pos_nonneg(&Formula::negate(self.theta.clone()))?;
        self.neg_nonneg = Some(id);
        Ok(id)
    }

    /// `x + (−r)ϑ⁻ ≤ x` for `r ≥ 0`.
    fn drop_carried(&mut self, x: &Formula, r: &Rational) -> Result<StepId, BuildError> {
        let nn = self.neg_nonneg()?;
        let c = Formula::add(x.clone(), self.carried(r));
        self.b.scale_shift(nn, r, &c, x)
    }

    /// `φ + 0X ≤ ψ` from `φ ≤ ψ`.
    fn base(&mut self, id: StepId) -> Result<(Rational, StepId), BuildError> {
        let zero = Rational::zero();
        let Inequality { lhs: a, .. } = self.b.concl(id).clone();
        let tail = self.carried(&zero);
        let Formula::Scale(_, x) = &tail else { unreachable!() };
        let vanish = self.b.ax_eq(5, Substitution::new().phi((**x).clone()))?;
        let e = self.b.eq_add(self.b.refl(a.clone()), vanish)?;
        let unit = self.b.ax_eq(3, Substitution::new().phi(a))?;
        let e = self.b.trans(e, unit)?;
        let fwd = self.b.fwd(&e)?;
        Ok((zero, self.b.r1(fwd, id)?))
    }

    fn step(&mut self, n: usize, done: &[Option<(Rational, StepId)>]) -> Result<(Rational, StepId), BuildError> {
        let ih = |i: usize| done[i].clone().expect("premise transformed first");
        let concl = self.src.steps[n].conclusion.clone();
        match &self.src.steps[n].rule {
            Rule::Hyp(k) if *k == self.designated => {
                let one = Rational::one();
                let tail = self.carried(&one);
                let id = match self.variant {
                    Variant::Lin => {
                        let lhs = Formula::add(Formula::Zero, tail);
                        let e = self.b.prove_eq(&lhs, &self.theta.clone(), false)?;
                        self.b.fwd(&e)?
                    }
                    Variant::Full => {
                        let nn = self.b.pos_nonneg(&self.theta.clone())?;
                        let shifted = self.b.add_right(nn, &tail)?;
                        let decomp = self.b.riesz_decomp(&self.theta.clone())?;
                        let back = self.b.bwd(&decomp)?;
                        self.b.r1(shifted, back)?
                    }
                };
                Ok((one, id))
            }
            Rule::Hyp(k) => {
                let k = if *k > self.designated { k - 1 } else { *k };
                let id = self.b.hyp(k)?;
                self.base(id)
            }
            Rule::Axiom(ax, sub) => {
                let id = self.b.axiom(*ax, sub.clone())?;
                self.base(id)
            }
            Rule::R1(i, j) => {
                let (r1, a) = ih(*i);
                let (r2, c) = ih(*j);
                let r = &r1 + &r2;
                let phi = self.src.steps[*i].conclusion.lhs.clone();
                let moved = self.b.add_right(a, &self.carried(&r2))?;
                let lhs = Formula::add(phi, self.carried(&r));
                let e = self.b.prove_eq(&lhs, &self.b.concl(moved).lhs.clone(), false)?;
                let fwd = self.b.fwd(&e)?;
                Ok((r, self.b.chain(&[fwd, moved, c])?))
            }
            Rule::R2 { from, r: s, xi } => {
                let (t, a) = ih(*from);
                let lifted = self.b.r2(a, s.clone(), xi.clone())?;
                let r = s * &t;
                let lhs = Formula::add(concl.lhs.clone(), self.carried(&r));
                let rhs = concl.rhs.clone();
                Ok((r, self.b.restate(lifted, &lhs, &rhs, false)?))
            }
            Rule::R3(i) => {
                let (r, a) = ih(*i);
                let inner = self.src.steps[*i].conclusion.lhs.clone();
                let tail = self.carried(&r);
                let cut = self.b.r3(a)?;
                let a12 = self.b.ax_eq(
                    12,
                    Substitution::new().phi(inner.clone()).psi(Formula::Zero).xi(tail.clone()),
                )?;
                let lowered = self.drop_carried(&Formula::Zero, &r)?;
                let shifted = Formula::add(inner, tail);
                let mono = self.b.meet_mono_right(&shifted, lowered)?;
                let back = self.b.bwd(&a12)?;
                Ok((r, self.b.chain(&[back, mono, cut])?))
            }
            Rule::R4 { le, xi, .. } => {
                let (r, a) = ih(*le);
                let Inequality { lhs: lo, rhs: hi } = self.src.steps[*le].conclusion.clone();
                let tail = self.carried(&r);
                let a12 = self.b.ax_eq(12, Substitution::new().phi(lo).psi(xi.clone()).xi(tail.clone()))?;
                let m1 = self.b.meet_mono_left(a, &Formula::add(xi.clone(), tail))?;
                let lowered = self.drop_carried(xi, &r)?;
                let m2 = self.b.meet_mono_right(&hi, lowered)?;
                let back = self.b.bwd(&a12)?;
                Ok((r, self.b.chain(&[back, m1, m2])?))
            }
        }
    }
}

/// Steps the last step depends on.
fn needed_steps(d: &Derivation) -> Vec<bool> {
    let mut need = vec![false; d.steps.len()];
    if let Some(last) = need.last_mut() {
        *last = true;
    }
    for n in (0..d.steps.len()).rev() {
        if !need[n] {
            continue;
        }
        let refs: Vec<usize> = match &d.steps[n].rule {
            Rule::R1(i, j) | Rule::R4 { le: i, ge: j, .. } => vec![*i, *j],
            Rule::R2 { from, .. } => vec![*from],
            Rule::R3(i) => vec![*i],
            Rule::Hyp(_) | Rule::Axiom(..) => vec![],
        };
        for i in refs {
            need[i] = true;
        }
    }
    need
}

fn transform_with(d: &Derivation, designated: usize, variant: Variant) -> Result<Deduction, TransformError> {
    let hyp = d.theory.0.get(designated).ok_or(TransformError::NoSuchHypothesis(designated + 1))?;
    if hyp.lhs != Formula::Zero {
        return Err(TransformError::NotBare(designated + 1));
    }
    check(d).map_err(TransformError::Unchecked)?;
    let rest: Theory = d
        .theory
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != designated)
        .map(|(_, h)| h.clone())
        .collect();
    let mut t = Transformer {
        b: ProofBuilder::new(rest, d.mode),
        src: d,
        designated,
        theta: hyp.rhs.clone(),
        variant,
        neg_nonneg: None,
    };
    let need = needed_steps(d);
    let mut done: Vec<Option<(Rational, StepId)>> = vec![None; d.steps.len()];
    for n in 0..d.steps.len() {
        if need[n] {
            done[n] = Some(t.step(n, &done)?);
        }
    }
    let (r, last) = done.pop().flatten().expect("nonempty derivation");
    let fragment = match variant {
        Variant::Lin => Fragment::Lin,
        Variant::Full => Fragment::Full,
    };
    let Transformer { b, .. } = t;
    Ok(Deduction { r, derivation: b.finish(last, fragment) })
}

/// Discharge hypothesis `designated` (0-based), which must read `0 ≤ ϑ`.
/// Derivations within the linear fragment get the linear variant.
pub fn deduction_transform(d: &Derivation, designated: usize) -> Result<Deduction, TransformError> {
    let variant = if d.fragment <= Fragment::Lin { Variant::Lin } else { Variant::Full };
    transform_with(d, designated, variant)
}

/// Combine derivations of `T, 0 ≤ φ ⊢ 0 ≤ ψ` and `T, 0 ≤ −φ ⊢ 0 ≤ ψ`, the
/// cut hypothesis being the last entry of each theory, into `T ⊢ 0 ≤ ψ`.
pub fn cut_eliminate(plus: &Derivation, minus: &Derivation) -> Result<Derivation, TransformError> {
    let (tp, tm) = (&plus.theory.0, &minus.theory.0);
    if plus.mode != minus.mode || tp.len() != tm.len() || tp.is_empty() {
        return Err(TransformError::TheoryMismatch);
    }
    let n = tp.len() - 1;
    if tp[..n] != tm[..n] {
        return Err(TransformError::TheoryMismatch);
    }
    let phi = tp[n].rhs.clone();
    if tp[n].lhs != Formula::Zero || tm[n] != Inequality::nonneg(Formula::negate(phi.clone())) {
        return Err(TransformError::CutShape);
    }
    let (cp, cm) = match (plus.conclusion(), minus.conclusion()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(TransformError::ConclusionShape),
    };
    if cp != cm || cp.lhs != Formula::Zero {
        return Err(TransformError::ConclusionShape);
    }
    let psi = cp.rhs.clone();
    let variant = if plus.fragment.max(minus.fragment) <= Fragment::Lin { Variant::Lin } else { Variant::Full };
    let dp = transform_with(plus, n, variant)?;
    let dm = transform_with(minus, n, variant)?;

    let mut b = ProofBuilder::new(Theory::new(tp[..n].to_vec()), plus.mode);
    let a = *b.import(&dp.derivation, |k| k)?.last().expect("nonempty");
    let c = *b.import(&dm.derivation, |k| k)?.last().expect("nonempty");
    let fragment = plus.fragment.max(minus.fragment);

    if dp.r.is_zero() || dm.r.is_zero() {
        let keep = if dp.r.is_zero() { a } else { c };
        let last = b.restate(keep, &Formula::Zero, &psi, false)?;
        return Ok(b.finish(last, fragment));
    }
    let (r, s) = (dp.r, dm.r);
    let last = match variant {
        Variant::Lin => {
            let (ri, si) = (r.recip(), s.recip());
            let sa = b.scale_nonneg(&ri, a)?;
            let sc = b.scale_nonneg(&si, c)?;
            let both = b.add_both(sa, sc)?;
            let k = (ri + si).recip();
            b.scale_shift(both, &k, &Formula::Zero, &psi)?
        }
        Variant::Full => {
            // join of the two left sides is ≤ ψ, and is ≥ 0 because
            // rφ⁻ ∧ sφ⁺ ≤ max(r,s)(φ⁻ ∧ φ⁺) = 0
            let upper = b.lub(a, c)?;
            let left_a = b.concl(a).lhs.clone();
            let left_c = b.concl(c).lhs.clone();
            let (pos, neg) = (Formula::pos(phi.clone()), Formula::neg(phi.clone()));
            let r_neg = Formula::scale(r.clone(), neg.clone());
            let s_pos = Formula::scale(s.clone(), pos.clone());
            let e1 = b.prove_eq(&Formula::negate(left_a), &r_neg, true)?;
            let e2 = b.prove_eq(&Formula::negate(left_c), &s_pos, true)?;
            let into = b.eq_meet(e1, e2)?;
            let m = r.clone().max(s.clone());
            let nn_neg = b.pos_nonneg(&Formula::negate(phi.clone()))?;
            let nn_pos = b.pos_nonneg(&phi)?;
            let w1 = b.scale_shift(nn_neg, &(&m - &r), &r_neg, &Formula::scale(m.clone(), neg.clone()))?;
            let w2 = b.scale_shift(nn_pos, &(&m - &s), &s_pos, &Formula::scale(m.clone(), pos.clone()))?;
            let both = b.meet_mono_both(w1, w2)?;
            let a13 = b.ax_eq(13, Substitution::new().phi(neg.clone()).psi(pos.clone()).r(m.clone()))?;
            let pulled = b.bwd(&a13)?;
            let swap = b.axiom(super::AxiomId::le(10), Substitution::new().phi(neg).psi(pos))?;
            let zero = b.pos_meet_neg(&phi)?;
            let zero = b.fwd(&zero)?;
            let z = b.r1(swap, zero)?;
            let scaled = b.scale_nonneg(&m, z)?;
            let fwd = b.fwd(&into)?;
            let low = b.chain(&[fwd, both, pulled, scaled])?;
            let low = b.restate(low, &b.concl(low).lhs.clone(), &Formula::Zero, false)?;
            let flipped = b.neg_anti(low)?;
            let joined = b.concl(upper).lhs.clone();
            let flipped = b.restate(flipped, &Formula::Zero, &joined, false)?;
            b.r1(flipped, upper)?
        }
    };
    Ok(b.finish(last, fragment))
}
