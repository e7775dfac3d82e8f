//! Derived rules and lattice identities, as builder tactics and as
//! standalone checked derivations.

use num_traits::{Signed, Zero};

use super::builder::{BuildError, Eqn, ProofBuilder, StepId};
use super::{AxiomId, Derivation, Fragment, Substitution};
use crate::formula::{Formula, Inequality, Letter, Mode, Rational, Theory};

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

impl ProofBuilder {
    /// `a ≤ b` gives `−b ≤ −a`.
    pub fn neg_anti(&mut self, h: StepId) -> Result<StepId, BuildError> {
        self.scale_neg(&q(-1), h)
    }

    /// `a ≤ b` gives `a∧x ≤ b∧x`.
    pub fn meet_mono_left(&mut self, h: StepId, x: &Formula) -> Result<StepId, BuildError> {
        let Inequality { lhs: a, rhs: b } = self.concl(h).clone();
        let minus_x = Formula::negate(x.clone());
        let shifted = self.r2(h, q(1), minus_x)?;
        let cut = self.r3(shifted)?;
        let lifted = self.add_right(cut, x)?;
        let alpha = |s: &Formula| Formula::add(Formula::scale(q(1), s.clone()), Formula::negate(x.clone()));
        let (alpha_a, alpha_b) = (alpha(&a), alpha(&b));
        let zero_x = Formula::add(Formula::Zero, x.clone());
        // a∧x = (αa + x)∧(0 + x) = (αa∧0) + x, and likewise for b
        let side = |s: &mut Self, orig: &Formula, al: &Formula| -> Result<Eqn, BuildError> {
            let e1 = s.prove_eq(orig, &Formula::add(al.clone(), x.clone()), false)?;
            let e2 = s.prove_eq(x, &zero_x, false)?;
            let m = s.eq_meet(e1, e2)?;
            let a12 = s.ax_eq(12, Substitution::new().phi(al.clone()).psi(Formula::Zero).xi(x.clone()))?;
            s.trans(m, a12)
        };
        let left = side(self, &a, &alpha_a)?;
        let right = side(self, &b, &alpha_b)?;
        let right = self.sym(right);
        self.rewrite(&left, lifted, &right)
    }

    /// `a ≤ b` gives `x∧a ≤ x∧b`.
    pub fn meet_mono_right(&mut self, x: &Formula, h: StepId) -> Result<StepId, BuildError> {
        let Inequality { lhs: a, rhs: b } = self.concl(h).clone();
        let into = self.axiom(AxiomId::le(10), Substitution::new().phi(x.clone()).psi(a))?;
        let mid = self.meet_mono_left(h, x)?;
        let out = self.axiom(AxiomId::le(10), Substitution::new().phi(b).psi(x.clone()))?;
        self.chain(&[into, mid, out])
    }

    /// `a ≤ b`, `c ≤ d` give `a∧c ≤ b∧d`.
    pub fn meet_mono_both(&mut self, h1: StepId, h2: StepId) -> Result<StepId, BuildError> {
        let c = self.concl(h2).lhs.clone();
        let b = self.concl(h1).rhs.clone();
        let first = self.meet_mono_left(h1, &c)?;
        let second = self.meet_mono_right(&b, h2)?;
        self.r1(first, second)
    }

    /// `x ≤ a`, `x ≤ b` give `x ≤ a∧b`.
    pub fn glb(&mut self, h1: StepId, h2: StepId) -> Result<StepId, BuildError> {
        let x = self.concl(h1).lhs.clone();
        let b = self.concl(h2).rhs.clone();
        let dup = self.axiom(AxiomId::ge(9), Substitution::new().phi(x.clone()))?;
        let right = self.meet_mono_right(&x, h2)?;
        let left = self.meet_mono_left(h1, &b)?;
        self.chain(&[dup, right, left])
    }

    /// `a ≤ x`, `b ≤ x` give `a∨b ≤ x`.
    pub fn lub(&mut self, h1: StepId, h2: StepId) -> Result<StepId, BuildError> {
        let x = self.concl(h1).rhs.clone();
        let n1 = self.neg_anti(h1)?;
        let n2 = self.neg_anti(h2)?;
        let g = self.glb(n1, n2)?;
        let flipped = self.neg_anti(g)?;
        let lhs = self.concl(flipped).lhs.clone();
        self.restate(flipped, &lhs, &x, false)
    }

    /// `a∧b ≤ a`.
    pub fn meet_le_left(&mut self, a: &Formula, b: &Formula) -> Result<StepId, BuildError> {
        let swap = self.axiom(AxiomId::le(10), Substitution::new().phi(a.clone()).psi(b.clone()))?;
        let drop = self.axiom(AxiomId::le(14), Substitution::new().phi(b.clone()).psi(a.clone()))?;
        self.r1(swap, drop)
    }

    /// `0 ≤ x⁺`.
    pub fn pos_nonneg(&mut self, x: &Formula) -> Result<StepId, BuildError> {
        let m0 = Formula::negate(Formula::Zero);
        let below = self.meet_le_left(&m0, &Formula::negate(x.clone()))?;
        let flipped = self.neg_anti(below)?;
        let rhs = self.concl(flipped).rhs.clone();
        debug_assert_eq!(rhs, Formula::pos(x.clone()));
        self.restate(flipped, &Formula::Zero, &rhs, false)
    }

    /// `a + b = a∧b + a∨b`.
    pub fn lattice_sum(&mut self, a: &Formula, b: &Formula) -> Result<Eqn, BuildError> {
        let (na, nb) = (Formula::negate(a.clone()), Formula::negate(b.clone()));
        let sum = Formula::add(a.clone(), b.clone());
        let low = Formula::meet(na.clone(), nb.clone());
        let e1 = self.ax_eq(12, Substitution::new().phi(na).psi(nb).xi(sum.clone()))?;
        let e1 = self.sym(e1);
        let target = Formula::meet(b.clone(), a.clone());
        let e2 = self.prove_eq(&e1.rhs.clone(), &target, true)?;
        let e3 = self.ax_eq(10, Substitution::new().phi(b.clone()).psi(a.clone()))?;
        // low + (a + b) = a∧b
        let k = self.trans_all(vec![e1, e2, e3])?;
        let join = Formula::negate(low.clone());
        let back = self.sym(k);
        let lifted = self.eq_add(back, self.refl(join))?;
        let lhs = lifted.rhs.clone();
        let collapse = self.prove_eq(&lhs, &sum, false)?;
        let whole = self.trans(lifted, collapse)?;
        Ok(self.sym(whole))
    }

    /// `x = x⁺ − x⁻`.
    pub fn riesz_decomp(&mut self, x: &Formula) -> Result<Eqn, BuildError> {
        let l1 = self.lattice_sum(&Formula::Zero, x)?;
        let start = self.prove_eq(x, &l1.lhs.clone(), false)?;
        let target = Formula::add(Formula::pos(x.clone()), Formula::negate(Formula::neg(x.clone())));
        let finish = self.prove_eq(&l1.rhs.clone(), &target, true)?;
        self.trans_all(vec![start, l1, finish])
    }

    /// `x⁺ ∧ x⁻ = 0`.
    pub fn pos_meet_neg(&mut self, x: &Formula) -> Result<Eqn, BuildError> {
        let (p, n) = (Formula::pos(x.clone()), Formula::neg(x.clone()));
        let d = Formula::add(p.clone(), Formula::negate(n.clone()));
        let a12 = self.ax_eq(12, Substitution::new().phi(d.clone()).psi(Formula::Zero).xi(n.clone()))?;
        let c1 = self.prove_eq(&Formula::meet(p, n.clone()), &a12.lhs.clone(), true)?;
        let decomp = self.riesz_decomp(x)?;
        let back = self.sym(decomp);
        let inner = self.eq_meet(back, self.refl(Formula::Zero))?;
        let c2 = self.eq_add(inner, self.refl(n))?;
        let rest = c2.rhs.clone();
        let c3 = self.prove_eq(&rest, &Formula::Zero, true)?;
        self.trans_all(vec![c1, a12, c2, c3])
    }

    /// `|x| = x⁺ + x⁻`.
    pub fn abs_decomp(&mut self, x: &Formula) -> Result<Eqn, BuildError> {
        let nx = Formula::negate(x.clone());
        let two = q(2);
        let two_x = Formula::scale(two.clone(), x.clone());
        let a12 = self.ax_eq(12, Substitution::new().phi(Formula::Zero).psi(two_x.clone()).xi(nx.clone()))?;
        let start = self.prove_eq(&Formula::abs(x.clone()), &Formula::negate(a12.lhs.clone()), true)?;
        let e1 = self.eq_scale(&q(-1), a12)?;
        // 0∧2x = 2(0∧x)
        let a13 = self.ax_eq(13, Substitution::new().phi(Formula::Zero).psi(x.clone()).r(two))?;
        let bridge = self.prove_eq(&Formula::meet(Formula::Zero, two_x), &a13.rhs.clone(), true)?;
        let back = self.sym(a13);
        let z = self.trans(bridge, back)?;
        let inner = self.eq_add(z, self.refl(nx))?;
        let e2 = self.eq_scale(&q(-1), inner)?;
        // x⁺ + x⁻ with x⁺ replaced through the lattice-sum identity
        let l1 = self.lattice_sum(&Formula::Zero, x)?;
        let low = Formula::meet(Formula::Zero, x.clone());
        let pos = Formula::pos(x.clone());
        let spelled = Formula::add(l1.rhs.clone(), Formula::negate(low.clone()));
        let p1 = self.prove_eq(&pos, &spelled, false)?;
        let l1_back = self.sym(l1);
        let p2 = self.eq_add(l1_back, self.refl(Formula::negate(low)))?;
        let pos_eq = self.trans(p1, p2)?;
        let rhs_target = Formula::add(pos, Formula::neg(x.clone()));
        let n = Formula::neg(x.clone());
        let rewritten = self.eq_add(pos_eq, self.refl(n))?;
        let mid = rewritten.rhs.clone();
        let meet_up = self.prove_eq(&e2.rhs.clone(), &mid, true)?;
        let down = self.sym(rewritten);
        let whole = self.trans_all(vec![start, e1, e2, meet_up, down])?;
        debug_assert_eq!(whole.rhs, rhs_target);
        Ok(whole)
    }

    /// `0 ≤ 1`, via the range axiom on `letter`.
    pub fn one_nonneg(&mut self, letter: &Letter) -> Result<StepId, BuildError> {
        let p = Formula::Letter(letter.clone());
        let lo = self.axiom(AxiomId::le(15), Substitution::new().phi(p.clone()))?;
        let hi = self.axiom(AxiomId::ge(15), Substitution::new().phi(p))?;
        let span = self.r1(lo, hi)?;
        self.scale_shift(span, &half(), &Formula::Zero, &Formula::One)
    }

    /// `a·1 ≤ b·1` for `a ≤ b`.
    pub fn const_le(&mut self, one_nonneg: StepId, a: &Rational, b: &Rational) -> Result<StepId, BuildError> {
        debug_assert!(a <= b);
        self.scale_shift(
            one_nonneg,
            &(b - a),
            &Formula::constant(a.clone()),
            &Formula::constant(b.clone()),
        )
    }

    /// Some `m` with `−m·1 ≤ f` and `f ≤ m·1`.
    fn bound_rec(&mut self, one: StepId, f: &Formula) -> Result<(Rational, StepId, StepId), BuildError> {
        let c = |m: &Rational| Formula::constant(m.clone());
        Ok(match f {
            Formula::Zero => {
                let sub = Substitution::new().phi(Formula::One);
                (Rational::zero(), self.axiom(AxiomId::le(5), sub.clone())?, self.axiom(AxiomId::ge(5), sub)?)
            }
            Formula::One => {
                let hi = self.axiom(AxiomId::ge(4), Substitution::new().phi(Formula::One))?;
                let lo = self.scale_shift(one, &q(2), &c(&q(-1)), &Formula::One)?;
                (q(1), lo, hi)
            }
            Formula::Letter(_) => {
                let sub = Substitution::new().phi(f.clone());
                let lo = self.axiom(AxiomId::le(15), sub.clone())?;
                let top = self.axiom(AxiomId::ge(15), sub)?;
                let wrap = self.axiom(AxiomId::ge(4), Substitution::new().phi(Formula::One))?;
                (q(1), lo, self.r1(top, wrap)?)
            }
            Formula::Add(a, b) => {
                let (ma, la, ha) = self.bound_rec(one, a)?;
                let (mb, lb, hb) = self.bound_rec(one, b)?;
                let m = &ma + &mb;
                let lo = self.add_both(la, lb)?;
                let hi = self.add_both(ha, hb)?;
                let lo = self.restate(lo, &c(&-m.clone()), f, false)?;
                let hi = self.restate(hi, f, &c(&m), false)?;
                (m, lo, hi)
            }
            Formula::Scale(k, a) => {
                let (ma, la, ha) = self.bound_rec(one, a)?;
                let m = k.abs() * &ma;
                let (lo, hi) = if k.is_negative() {
                    (self.scale_neg(k, ha)?, self.scale_neg(k, la)?)
                } else {
                    (self.scale_nonneg(k, la)?, self.scale_nonneg(k, ha)?)
                };
                let lo = self.restate(lo, &c(&-m.clone()), f, false)?;
                let hi = self.restate(hi, f, &c(&m), false)?;
                (m, lo, hi)
            }
            Formula::Meet(a, b) => {
                let (ma, la, ha) = self.bound_rec(one, a)?;
                let (mb, lb, _) = self.bound_rec(one, b)?;
                let m = ma.clone().max(mb.clone());
                let wa = self.const_le(one, &-m.clone(), &-ma.clone())?;
                let wb = self.const_le(one, &-m.clone(), &-mb)?;
                let la = self.r1(wa, la)?;
                let lb = self.r1(wb, lb)?;
                let lo = self.glb(la, lb)?;
                let drop = self.meet_le_left(a, b)?;
                let up = self.const_le(one, &ma, &m)?;
                let hi = self.chain(&[drop, ha, up])?;
                (m, lo, hi)
            }
        })
    }
}

/// Both directions of a proved equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqualityProof {
    pub le: Derivation,
    pub ge: Derivation,
}

fn equality(
    mode: Mode,
    build: impl Fn(&mut ProofBuilder) -> Result<Eqn, BuildError>,
) -> Result<EqualityProof, BuildError> {
    let mut b = ProofBuilder::new(Theory::default(), mode);
    let e = build(&mut b)?;
    let fwd = b.fwd(&e)?;
    let le = b.finish(fwd, Fragment::Mp);
    let mut b = ProofBuilder::new(Theory::default(), mode);
    let e = build(&mut b)?;
    let bwd = b.bwd(&e)?;
    let ge = b.finish(bwd, Fragment::Mp);
    Ok(EqualityProof { le, ge })
}

fn single(
    theory: Vec<Inequality>,
    mode: Mode,
    build: impl FnOnce(&mut ProofBuilder) -> Result<StepId, BuildError>,
) -> Result<Derivation, BuildError> {
    let mut b = ProofBuilder::new(Theory::new(theory), mode);
    let last = build(&mut b)?;
    Ok(b.finish(last, Fragment::Mp))
}

/// `rφ + ξ ≤ rψ + ξ ⊢lin φ ≤ ψ` for `r > 0`.
pub fn cancel(r: &Rational, phi: &Formula, psi: &Formula, xi: &Formula, mode: Mode) -> Result<Derivation, BuildError> {
    assert!(r.is_positive(), "cancellation needs a positive scalar");
    let hyp = Inequality::new(
        Formula::add(Formula::scale(r.clone(), phi.clone()), xi.clone()),
        Formula::add(Formula::scale(r.clone(), psi.clone()), xi.clone()),
    );
    single(vec![hyp], mode, |b| {
        let h = b.hyp(0)?;
        b.scale_shift(h, &r.recip(), phi, psi)
    })
}

/// `{0 ≤ 2P} ⊢lin 0 ≤ P`, the witness separating the linear fragment from
/// transitivity alone.
pub fn halving_witness() -> Derivation {
    let p = Formula::letter("P");
    let two_p = Formula::scale(q(2), p.clone());
    single(vec![Inequality::nonneg(two_p)], Mode::Basic, |b| {
        let h = b.hyp(0)?;
        b.scale_shift(h, &half(), &Formula::Zero, &p)
    })
    .expect("fixed instance")
}

/// `φ ≤ ψ ⊢ φ∧ξ ≤ ψ∧ξ`.
pub fn meet_mono(phi: &Formula, psi: &Formula, xi: &Formula, mode: Mode) -> Result<Derivation, BuildError> {
    single(vec![Inequality::new(phi.clone(), psi.clone())], mode, |b| {
        let h = b.hyp(0)?;
        b.meet_mono_left(h, xi)
    })
}

/// `ξ ≤ φ, ξ ≤ ψ ⊢ ξ ≤ φ∧ψ`.
pub fn greatest_lower_bound(phi: &Formula, psi: &Formula, xi: &Formula, mode: Mode) -> Result<Derivation, BuildError> {
    let t = vec![Inequality::new(xi.clone(), phi.clone()), Inequality::new(xi.clone(), psi.clone())];
    single(t, mode, |b| {
        let (h1, h2) = (b.hyp(0)?, b.hyp(1)?);
        b.glb(h1, h2)
    })
}

/// `φ ≤ ξ, ψ ≤ ξ ⊢ φ∨ψ ≤ ξ`.
pub fn least_upper_bound(phi: &Formula, psi: &Formula, xi: &Formula, mode: Mode) -> Result<Derivation, BuildError> {
    let t = vec![Inequality::new(phi.clone(), xi.clone()), Inequality::new(psi.clone(), xi.clone())];
    single(t, mode, |b| {
        let (h1, h2) = (b.hyp(0)?, b.hyp(1)?);
        b.lub(h1, h2)
    })
}

/// `⊢ φ + ψ = φ∧ψ + φ∨ψ`.
pub fn lattice_sum(phi: &Formula, psi: &Formula, mode: Mode) -> Result<EqualityProof, BuildError> {
    equality(mode, |b| b.lattice_sum(phi, psi))
}

/// `⊢ φ = φ⁺ − φ⁻`.
pub fn riesz_decomp(phi: &Formula, mode: Mode) -> Result<EqualityProof, BuildError> {
    equality(mode, |b| b.riesz_decomp(phi))
}

/// `⊢ φ⁺ ∧ φ⁻ = 0`.
pub fn pos_meet_neg(phi: &Formula, mode: Mode) -> Result<EqualityProof, BuildError> {
    equality(mode, |b| b.pos_meet_neg(phi))
}

/// `⊢ |φ| = φ⁺ + φ⁻`.
pub fn abs_decomp(phi: &Formula, mode: Mode) -> Result<EqualityProof, BuildError> {
    equality(mode, |b| b.abs_decomp(phi))
}

/// Integer bound in the extended language: `n` with derivations of
/// `(−n)·1 ≤ φ` and `φ ≤ n·1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedBound {
    pub n: num_bigint::BigInt,
    pub lower: Derivation,
    pub upper: Derivation,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BoundError {
    #[error("integer bounds are only derivable in the extended language")]
    BasicMode,
    #[error(transparent)]
    Build(#[from] BuildError),
}

pub fn extended_bound(phi: &Formula, mode: Mode) -> Result<ExtendedBound, BoundError> {
    if !mode.is_extended() {
        return Err(BoundError::BasicMode);
    }
    let letter = crate::formula::letters_of(phi)
        .into_iter()
        .next()
        .unwrap_or_else(|| Letter::new("P"));
    let run = |upper: bool| -> Result<(num_bigint::BigInt, Derivation), BuildError> {
        let mut b = ProofBuilder::new(Theory::default(), mode);
        let one = b.one_nonneg(&letter)?;
        let (m, lo, hi) = b.bound_rec(one, phi)?;
        let n = m.ceil();
        let last = if upper {
            let w = b.const_le(one, &m, &n)?;
            b.r1(hi, w)?
        } else {
            let w = b.const_le(one, &-n.clone(), &-m.clone())?;
            b.r1(w, lo)?
        };
        Ok((n.to_integer(), b.finish(last, Fragment::Mp)))
    };
    let (n, lower) = run(false)?;
    let (_, upper) = run(true)?;
    Ok(ExtendedBound { n, lower, upper })
}
