//! Tactic layer: emits checked steps and proves equalities between formulas
//! by normalizing both sides with explicit axiom chains.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::check::{conclude, RejectionReason};
use super::{AxiomId, Derivation, Fragment, ProofStep, Rule, Substitution};
use crate::formula::{Formula, Inequality, Mode, Rational, Theory};
use crate::syntax::print_formula;

pub type StepId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("step rejected: {0}")]
    Step(#[from] RejectionReason),
    #[error("cannot identify {lhs} with {rhs}")]
    NotEqual { lhs: String, rhs: String },
}

fn not_equal(a: &Formula, b: &Formula) -> BuildError {
    BuildError::NotEqual { lhs: print_formula(a), rhs: print_formula(b) }
}

/// A proved equality `lhs = rhs`. Both directions are `None` exactly when
/// the two sides are syntactically identical and nothing was emitted.
#[derive(Debug, Clone)]
pub struct Eqn {
    pub lhs: Formula,
    pub rhs: Formula,
    fwd: Option<StepId>,
    bwd: Option<StepId>,
}

fn q1() -> Rational {
    Rational::one()
}

/// Canonical sums are `Zero`, a single term `c·atom`, or `term + canonical`
/// with strictly increasing atoms and nonzero coefficients.
enum Shape<'a> {
    Empty,
    Term(&'a Rational, &'a Formula),
    Sum(&'a Formula, &'a Formula),
}

fn shape(f: &Formula) -> Shape<'_> {
    match f {
        Formula::Zero => Shape::Empty,
        Formula::Scale(c, a) => Shape::Term(c, a),
        Formula::Add(t, rest) => Shape::Sum(t, rest),
        other => unreachable!("not a canonical sum: {other:?}"),
    }
}

fn term_parts(t: &Formula) -> (&Rational, &Formula) {
    match t {
        Formula::Scale(c, a) => (c, a),
        other => unreachable!("not a canonical term: {other:?}"),
    }
}

pub struct ProofBuilder {
    theory: Theory,
    mode: Mode,
    steps: Vec<ProofStep>,
    needed: Fragment,
    seen: HashMap<Rule, StepId>,
    norms: HashMap<(Formula, bool), Eqn>,
}

impl ProofBuilder {
    pub fn new(theory: Theory, mode: Mode) -> Self {
        ProofBuilder {
            theory,
            mode,
            steps: Vec::new(),
            needed: Fragment::Mp,
            seen: HashMap::new(),
            norms: HashMap::new(),
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn theory(&self) -> &Theory {
        &self.theory
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn concl(&self, id: StepId) -> &Inequality {
        &self.steps[id].conclusion
    }

    /// Least fragment covering every step emitted so far.
    pub fn fragment_needed(&self) -> Fragment {
        self.needed
    }

    pub fn push(&mut self, rule: Rule) -> Result<StepId, BuildError> {
        if let Some(&id) = self.seen.get(&rule) {
            return Ok(id);
        }
        let conclusion = conclude(&rule, &self.steps, &self.theory, self.mode)?;
        self.needed = self.needed.max(rule.fragment());
        let id = self.steps.len();
        self.seen.insert(rule.clone(), id);
        self.steps.push(ProofStep { rule, conclusion });
        Ok(id)
    }

    /// Close the derivation with `target` as its last step.
    pub fn finish(mut self, target: StepId, fragment: Fragment) -> Derivation {
        if target + 1 != self.steps.len() {
            let again = self.steps[target].clone();
            self.steps.push(again);
        }
        Derivation {
            theory: self.theory,
            mode: self.mode,
            fragment: fragment.max(self.needed),
            steps: self.steps,
        }
    }

    /// Replay `d` inside this builder; hypothesis `k` of `d` becomes
    /// hypothesis `hyp_map(k)` here. Returns the new id of each step.
    pub fn import(
        &mut self,
        d: &Derivation,
        hyp_map: impl Fn(usize) -> usize,
    ) -> Result<Vec<StepId>, BuildError> {
        let mut ids: Vec<StepId> = Vec::with_capacity(d.steps.len());
        for step in &d.steps {
            let rule = match &step.rule {
                Rule::Hyp(k) => Rule::Hyp(hyp_map(*k)),
                Rule::Axiom(ax, sub) => Rule::Axiom(*ax, sub.clone()),
                Rule::R1(i, j) => Rule::R1(ids[*i], ids[*j]),
                Rule::R2 { from, r, xi } => Rule::R2 { from: ids[*from], r: r.clone(), xi: xi.clone() },
                Rule::R3(i) => Rule::R3(ids[*i]),
                Rule::R4 { le, ge, xi } => Rule::R4 { le: ids[*le], ge: ids[*ge], xi: xi.clone() },
            };
            ids.push(self.push(rule)?);
        }
        Ok(ids)
    }

    // ---- raw rules -------------------------------------------------------

    pub fn hyp(&mut self, k: usize) -> Result<StepId, BuildError> {
        self.push(Rule::Hyp(k))
    }

    pub fn axiom(&mut self, ax: AxiomId, sub: Substitution) -> Result<StepId, BuildError> {
        self.push(Rule::Axiom(ax, sub))
    }

    pub fn r1(&mut self, i: StepId, j: StepId) -> Result<StepId, BuildError> {
        self.push(Rule::R1(i, j))
    }

    pub fn r2(&mut self, from: StepId, r: Rational, xi: Formula) -> Result<StepId, BuildError> {
        self.push(Rule::R2 { from, r, xi })
    }

    pub fn r3(&mut self, i: StepId) -> Result<StepId, BuildError> {
        self.push(Rule::R3(i))
    }

    pub fn r4(&mut self, le: StepId, ge: StepId, xi: Formula) -> Result<StepId, BuildError> {
        self.push(Rule::R4 { le, ge, xi })
    }

    /// Transitivity over a nonempty chain.
    pub fn chain(&mut self, ids: &[StepId]) -> Result<StepId, BuildError> {
        let (&first, rest) = ids.split_first().expect("empty chain");
        rest.iter().try_fold(first, |acc, &next| self.r1(acc, next))
    }

    // ---- equalities ------------------------------------------------------

    pub fn refl(&self, f: Formula) -> Eqn {
        Eqn { lhs: f.clone(), rhs: f, fwd: None, bwd: None }
    }

    /// `f ≤ f`, through `1f`.
    pub fn refl_step(&mut self, f: &Formula) -> Result<StepId, BuildError> {
        let sub = Substitution::new().phi(f.clone());
        let up = self.axiom(AxiomId::ge(4), sub.clone())?;
        let down = self.axiom(AxiomId::le(4), sub)?;
        self.r1(up, down)
    }

    pub fn fwd(&mut self, e: &Eqn) -> Result<StepId, BuildError> {
        match e.fwd {
            Some(id) => Ok(id),
            None => self.refl_step(&e.lhs),
        }
    }

    pub fn bwd(&mut self, e: &Eqn) -> Result<StepId, BuildError> {
        match e.bwd {
            Some(id) => Ok(id),
            None => self.refl_step(&e.rhs),
        }
    }

    /// Both halves of an equality axiom.
    pub fn ax_eq(&mut self, number: u8, sub: Substitution) -> Result<Eqn, BuildError> {
        let fwd = self.axiom(AxiomId::le(number), sub.clone())?;
        let bwd = self.axiom(AxiomId::ge(number), sub)?;
        let c = self.concl(fwd).clone();
        Ok(Eqn { lhs: c.lhs, rhs: c.rhs, fwd: Some(fwd), bwd: Some(bwd) })
    }

    pub fn sym(&self, e: Eqn) -> Eqn {
        Eqn { lhs: e.rhs, rhs: e.lhs, fwd: e.bwd, bwd: e.fwd }
    }

    pub fn trans(&mut self, a: Eqn, b: Eqn) -> Result<Eqn, BuildError> {
        if a.rhs != b.lhs {
            return Err(not_equal(&a.rhs, &b.lhs));
        }
        let join = |s: &mut Self, x: Option<StepId>, y: Option<StepId>| -> Result<Option<StepId>, BuildError> {
            Ok(match (x, y) {
                (None, y) => y,
                (x, None) => x,
                (Some(x), Some(y)) => Some(s.r1(x, y)?),
            })
        };
        let fwd = join(self, a.fwd, b.fwd)?;
        let bwd = join(self, b.bwd, a.bwd)?;
        Ok(Eqn { lhs: a.lhs, rhs: b.rhs, fwd, bwd })
    }

    pub fn trans_all(&mut self, eqs: Vec<Eqn>) -> Result<Eqn, BuildError> {
        let mut it = eqs.into_iter();
        let first = it.next().expect("empty equality chain");
        it.try_fold(first, |acc, e| self.trans(acc, e))
    }

    /// From `a' = a`, `a ≤ b`, `b = b'` get `a' ≤ b'`.
    pub fn rewrite(&mut self, left: &Eqn, h: StepId, right: &Eqn) -> Result<StepId, BuildError> {
        let mut ids = Vec::with_capacity(3);
        if left.fwd.is_some() {
            ids.push(self.fwd(left)?);
        }
        ids.push(h);
        if right.fwd.is_some() {
            ids.push(self.fwd(right)?);
        }
        let out = self.chain(&ids)?;
        debug_assert_eq!(self.concl(out).lhs, left.lhs);
        Ok(out)
    }

    // ---- monotonicity ----------------------------------------------------

    /// `a ≤ b` gives `a + x ≤ b + x`.
    pub fn add_right(&mut self, h: StepId, x: &Formula) -> Result<StepId, BuildError> {
        let Inequality { lhs: a, rhs: b } = self.concl(h).clone();
        let one_x = Formula::scale(q1(), x.clone());
        let core = self.r2(h, q1(), one_x)?;
        let up = self.axiom(AxiomId::ge(4), Substitution::new().phi(Formula::add(a.clone(), x.clone())))?;
        let split = self.axiom(AxiomId::ge(7), Substitution::new().phi(a).psi(x.clone()).r(q1()))?;
        let merge = self.axiom(AxiomId::le(7), Substitution::new().phi(b.clone()).psi(x.clone()).r(q1()))?;
        let down = self.axiom(AxiomId::le(4), Substitution::new().phi(Formula::add(b, x.clone())))?;
        self.chain(&[up, split, core, merge, down])
    }

    /// `a ≤ b` gives `x + a ≤ x + b`.
    pub fn add_left(&mut self, x: &Formula, h: StepId) -> Result<StepId, BuildError> {
        let Inequality { lhs: a, rhs: b } = self.concl(h).clone();
        let swap_in = self.axiom(AxiomId::le(1), Substitution::new().phi(x.clone()).psi(a))?;
        let mid = self.add_right(h, x)?;
        let swap_out = self.axiom(AxiomId::le(1), Substitution::new().phi(b).psi(x.clone()))?;
        self.chain(&[swap_in, mid, swap_out])
    }

    /// `a ≤ b`, `c ≤ d` give `a + c ≤ b + d`.
    pub fn add_both(&mut self, h1: StepId, h2: StepId) -> Result<StepId, BuildError> {
        let c = self.concl(h2).lhs.clone();
        let b = self.concl(h1).rhs.clone();
        let first = self.add_right(h1, &c)?;
        let second = self.add_left(&b, h2)?;
        self.r1(first, second)
    }

    /// `a ≤ b` gives `ra ≤ rb` for `r ≥ 0`.
    pub fn scale_nonneg(&mut self, r: &Rational, h: StepId) -> Result<StepId, BuildError> {
        let Inequality { lhs: a, rhs: b } = self.concl(h).clone();
        let core = self.r2(h, r.clone(), Formula::Zero)?;
        let up = self.axiom(AxiomId::ge(3), Substitution::new().phi(Formula::scale(r.clone(), a)))?;
        let down = self.axiom(AxiomId::le(3), Substitution::new().phi(Formula::scale(r.clone(), b)))?;
        self.chain(&[up, core, down])
    }

    /// `a ≤ b` gives `qb ≤ qa` for `q < 0`.
    pub fn scale_neg(&mut self, q: &Rational, h: StepId) -> Result<StepId, BuildError> {
        debug_assert!(q.is_negative());
        let Inequality { lhs: a, rhs: b } = self.concl(h).clone();
        let p = -q.clone();
        let qa = Formula::scale(q.clone(), a.clone());
        let qb = Formula::scale(q.clone(), b.clone());
        let core = self.r2(h, p.clone(), Formula::add(qa.clone(), qb.clone()))?;
        // pa + (qa + qb) = qb
        let left = {
            let pa = Formula::scale(p.clone(), a.clone());
            let e1 = self.assoc(&pa, &qa, &qb)?;
            let cancel = self.cancel_pair(&a, &p, q)?;
            let e2 = self.eq_add(cancel, self.refl(qb.clone()))?;
            let e3 = self.zero_add(&qb)?;
            self.trans_all(vec![e1, e2, e3])?
        };
        // pb + (qa + qb) = qa
        let right = {
            let pb = Formula::scale(p.clone(), b.clone());
            let comm = self.ax_eq(1, Substitution::new().phi(qa.clone()).psi(qb.clone()))?;
            let e0 = self.eq_add(self.refl(pb.clone()), comm)?;
            let e1 = self.assoc(&pb, &qb, &qa)?;
            let cancel = self.cancel_pair(&b, &p, q)?;
            let e2 = self.eq_add(cancel, self.refl(qa.clone()))?;
            let e3 = self.zero_add(&qa)?;
            self.trans_all(vec![e0, e1, e2, e3])?
        };
        let left = self.sym(left);
        self.rewrite(&left, core, &right)
    }

    /// `pa + qa = 0` when `p + q = 0`.
    fn cancel_pair(&mut self, a: &Formula, p: &Rational, q: &Rational) -> Result<Eqn, BuildError> {
        let e = self.ax_eq(6, Substitution::new().phi(a.clone()).r(p.clone()).s(q.clone()))?;
        let z = self.ax_eq(5, Substitution::new().phi(a.clone()))?;
        self.trans(e, z)
    }

    /// `0 + x = x`.
    fn zero_add(&mut self, x: &Formula) -> Result<Eqn, BuildError> {
        let c = self.ax_eq(1, Substitution::new().phi(Formula::Zero).psi(x.clone()))?;
        let z = self.ax_eq(3, Substitution::new().phi(x.clone()))?;
        self.trans(c, z)
    }

    /// `x + (y + z) = (x + y) + z`.
    pub fn assoc(&mut self, x: &Formula, y: &Formula, z: &Formula) -> Result<Eqn, BuildError> {
        let a2 = self.ax_eq(2, Substitution::new().phi(y.clone()).psi(x.clone()).xi(z.clone()))?;
        let e1 = self.sym(a2);
        let comm = self.ax_eq(1, Substitution::new().phi(y.clone()).psi(x.clone()))?;
        let e2 = self.eq_add(comm, self.refl(z.clone()))?;
        self.trans(e1, e2)
    }

    /// `x + (y + z) = y + (x + z)`.
    fn lcomm(&mut self, x: &Formula, y: &Formula, z: &Formula) -> Result<Eqn, BuildError> {
        let e1 = self.assoc(x, y, z)?;
        let e2 = self.ax_eq(2, Substitution::new().phi(x.clone()).psi(y.clone()).xi(z.clone()))?;
        self.trans(e1, e2)
    }

    // ---- congruences -----------------------------------------------------

    pub fn eq_add(&mut self, a: Eqn, b: Eqn) -> Result<Eqn, BuildError> {
        let lhs = Formula::add(a.lhs.clone(), b.lhs.clone());
        let rhs = Formula::add(a.rhs.clone(), b.rhs.clone());
        let (fwd, bwd) = match (a.fwd.is_some(), b.fwd.is_some()) {
            (false, false) => return Ok(self.refl(lhs)),
            (true, false) => {
                let (f, g) = (self.fwd(&a)?, self.bwd(&a)?);
                (self.add_right(f, &b.lhs)?, self.add_right(g, &b.lhs)?)
            }
            (false, true) => {
                let (f, g) = (self.fwd(&b)?, self.bwd(&b)?);
                (self.add_left(&a.lhs, f)?, self.add_left(&a.lhs, g)?)
            }
            (true, true) => {
                let (f1, g1, f2, g2) = (self.fwd(&a)?, self.bwd(&a)?, self.fwd(&b)?, self.bwd(&b)?);
                (self.add_both(f1, f2)?, self.add_both(g1, g2)?)
            }
        };
        Ok(Eqn { lhs, rhs, fwd: Some(fwd), bwd: Some(bwd) })
    }

    pub fn eq_scale(&mut self, q: &Rational, e: Eqn) -> Result<Eqn, BuildError> {
        let lhs = Formula::scale(q.clone(), e.lhs.clone());
        let rhs = Formula::scale(q.clone(), e.rhs.clone());
        if e.fwd.is_none() {
            return Ok(self.refl(lhs));
        }
        let (f, g) = (self.fwd(&e)?, self.bwd(&e)?);
        let (fwd, bwd) = if q.is_negative() {
            (self.scale_neg(q, g)?, self.scale_neg(q, f)?)
        } else {
            (self.scale_nonneg(q, f)?, self.scale_nonneg(q, g)?)
        };
        Ok(Eqn { lhs, rhs, fwd: Some(fwd), bwd: Some(bwd) })
    }

    /// Meet congruence; needs the full fragment unless both sides are
    /// unchanged.
    pub fn eq_meet(&mut self, a: Eqn, b: Eqn) -> Result<Eqn, BuildError> {
        let mut acc = self.refl(Formula::meet(a.lhs.clone(), b.lhs.clone()));
        if a.fwd.is_some() {
            let (f, g) = (self.fwd(&a)?, self.bwd(&a)?);
            let fwd = self.r4(f, g, b.lhs.clone())?;
            let bwd = self.r4(g, f, b.lhs.clone())?;
            let step = Eqn {
                lhs: Formula::meet(a.lhs.clone(), b.lhs.clone()),
                rhs: Formula::meet(a.rhs.clone(), b.lhs.clone()),
                fwd: Some(fwd),
                bwd: Some(bwd),
            };
            acc = self.trans(acc, step)?;
        }
        if b.fwd.is_some() {
            let (f, g) = (self.fwd(&b)?, self.bwd(&b)?);
            let c1 = self.ax_eq(10, Substitution::new().phi(a.rhs.clone()).psi(b.lhs.clone()))?;
            let fwd = self.r4(f, g, a.rhs.clone())?;
            let bwd = self.r4(g, f, a.rhs.clone())?;
            let mid = Eqn {
                lhs: Formula::meet(b.lhs.clone(), a.rhs.clone()),
                rhs: Formula::meet(b.rhs.clone(), a.rhs.clone()),
                fwd: Some(fwd),
                bwd: Some(bwd),
            };
            let c2 = self.ax_eq(10, Substitution::new().phi(b.rhs.clone()).psi(a.rhs.clone()))?;
            acc = self.trans_all(vec![acc, c1, mid, c2])?;
        }
        Ok(acc)
    }

    // ---- normalization ---------------------------------------------------

    /// `f = 1f`.
    fn atom(&mut self, f: &Formula) -> Result<Eqn, BuildError> {
        let e = self.ax_eq(4, Substitution::new().phi(f.clone()))?;
        Ok(self.sym(e))
    }

    /// Proves `f = nf(f)`. With `deep`, meet children are normalized and
    /// ordered too (uses meet congruence); otherwise meets are opaque.
    pub fn normalize(&mut self, f: &Formula, deep: bool) -> Result<Eqn, BuildError> {
        let key = (f.clone(), deep);
        if let Some(e) = self.norms.get(&key) {
            return Ok(e.clone());
        }
        let e = match f {
            Formula::Zero => self.refl(Formula::Zero),
            Formula::One | Formula::Letter(_) => self.atom(f)?,
            Formula::Meet(a, b) if deep => {
                let ea = self.normalize(a, true)?;
                let eb = self.normalize(b, true)?;
                let (x, y) = (ea.rhs.clone(), eb.rhs.clone());
                let mut m = self.eq_meet(ea, eb)?;
                if y < x {
                    let swap = self.ax_eq(10, Substitution::new().phi(x).psi(y))?;
                    m = self.trans(m, swap)?;
                }
                let wrap = self.atom(&m.rhs.clone())?;
                self.trans(m, wrap)?
            }
            Formula::Meet(..) => self.atom(f)?,
            Formula::Scale(q, x) if q.is_zero() => self.ax_eq(5, Substitution::new().phi((**x).clone()))?,
            Formula::Scale(q, x) => {
                let ex = self.normalize(x, deep)?;
                let inner = ex.rhs.clone();
                let lifted = self.eq_scale(q, ex)?;
                let canon = self.scale_canon(q, &inner)?;
                self.trans(lifted, canon)?
            }
            Formula::Add(x, y) => {
                let ex = self.normalize(x, deep)?;
                let ey = self.normalize(y, deep)?;
                let (nx, ny) = (ex.rhs.clone(), ey.rhs.clone());
                let sum = self.eq_add(ex, ey)?;
                let merged = self.merge(&nx, &ny)?;
                self.trans(sum, merged)?
            }
        };
        self.norms.insert(key, e.clone());
        Ok(e)
    }

    /// `q·X = canonical` for canonical `X` and `q ≠ 0`.
    fn scale_canon(&mut self, q: &Rational, x: &Formula) -> Result<Eqn, BuildError> {
        match shape(x) {
            Shape::Empty => {
                let zero = Rational::zero();
                let z = self.ax_eq(5, Substitution::new().phi(Formula::Zero))?;
                let intro = self.sym(z.clone());
                let e1 = self.eq_scale(q, intro)?;
                let e2 = self.ax_eq(8, Substitution::new().phi(Formula::Zero).r(q.clone()).s(zero))?;
                self.trans_all(vec![e1, e2, z])
            }
            Shape::Term(c, a) => self.ax_eq(8, Substitution::new().phi(a.clone()).r(q.clone()).s(c.clone())),
            Shape::Sum(t, rest) => {
                let a7 = self.ax_eq(7, Substitution::new().phi(t.clone()).psi(rest.clone()).r(q.clone()))?;
                let split = self.sym(a7);
                let et = self.scale_canon(q, t)?;
                let er = self.scale_canon(q, rest)?;
                let parts = self.eq_add(et, er)?;
                self.trans(split, parts)
            }
        }
    }

    /// `X + Y = canonical` for canonical `X`, `Y`.
    fn merge(&mut self, x: &Formula, y: &Formula) -> Result<Eqn, BuildError> {
        match shape(x) {
            Shape::Empty => match shape(y) {
                Shape::Empty => self.ax_eq(3, Substitution::new().phi(Formula::Zero)),
                _ => self.zero_add(y),
            },
            Shape::Term(..) => self.insert(x, y),
            Shape::Sum(t, rest) => {
                let a = self.assoc(t, rest, y)?;
                let e1 = self.sym(a);
                let m = self.merge(rest, y)?;
                let r = m.rhs.clone();
                let e2 = self.eq_add(self.refl(t.clone()), m)?;
                let e3 = self.insert(t, &r)?;
                self.trans_all(vec![e1, e2, e3])
            }
        }
    }

    /// `t + S = canonical` for a term `t` and canonical `S`.
    fn insert(&mut self, t: &Formula, s: &Formula) -> Result<Eqn, BuildError> {
        let (c, a) = term_parts(t);
        match shape(s) {
            Shape::Empty => self.ax_eq(3, Substitution::new().phi(t.clone())),
            Shape::Term(d, b) => match a.cmp(b) {
                std::cmp::Ordering::Less => Ok(self.refl(Formula::add(t.clone(), s.clone()))),
                std::cmp::Ordering::Greater => self.ax_eq(1, Substitution::new().phi(t.clone()).psi(s.clone())),
                std::cmp::Ordering::Equal => self.combine(a, c, d),
            },
            Shape::Sum(s1, rest) => {
                let (d, b) = term_parts(s1);
                match a.cmp(b) {
                    std::cmp::Ordering::Less => Ok(self.refl(Formula::add(t.clone(), s.clone()))),
                    std::cmp::Ordering::Equal => {
                        let e1 = self.assoc(t, s1, rest)?;
                        let merged = self.combine(a, c, d)?;
                        let zeroed = matches!(merged.rhs, Formula::Zero);
                        let e2 = self.eq_add(merged, self.refl(rest.clone()))?;
                        if zeroed {
                            let e3 = self.zero_add(rest)?;
                            self.trans_all(vec![e1, e2, e3])
                        } else {
                            self.trans(e1, e2)
                        }
                    }
                    std::cmp::Ordering::Greater => {
                        let e1 = self.lcomm(t, s1, rest)?;
                        let ins = self.insert(t, rest)?;
                        let r = ins.rhs.clone();
                        let e2 = self.eq_add(self.refl(s1.clone()), ins)?;
                        if matches!(r, Formula::Zero) {
                            let e3 = self.ax_eq(3, Substitution::new().phi(s1.clone()))?;
                            self.trans_all(vec![e1, e2, e3])
                        } else {
                            self.trans(e1, e2)
                        }
                    }
                }
            }
        }
    }

    /// `c·a + d·a = (d + c)·a`, collapsing to `0` when the sum vanishes.
    fn combine(&mut self, a: &Formula, c: &Rational, d: &Rational) -> Result<Eqn, BuildError> {
        let e = self.ax_eq(6, Substitution::new().phi(a.clone()).r(c.clone()).s(d.clone()))?;
        if (c + d).is_zero() {
            let z = self.ax_eq(5, Substitution::new().phi(a.clone()))?;
            self.trans(e, z)
        } else {
            Ok(e)
        }
    }

    /// `f = g` when both have the same normal form.
    pub fn prove_eq(&mut self, f: &Formula, g: &Formula, deep: bool) -> Result<Eqn, BuildError> {
        if f == g {
            return Ok(self.refl(f.clone()));
        }
        let ef = self.normalize(f, deep)?;
        let eg = self.normalize(g, deep)?;
        if ef.rhs != eg.rhs {
            return Err(not_equal(f, g));
        }
        let back = self.sym(eg);
        self.trans(ef, back)
    }

    /// Shallow normalization first, deep only if needed.
    pub fn prove_eq_auto(&mut self, f: &Formula, g: &Formula) -> Result<Eqn, BuildError> {
        match self.prove_eq(f, g, false) {
            Ok(e) => Ok(e),
            Err(_) => self.prove_eq(f, g, true),
        }
    }

    /// Restate step `h` as `lhs ≤ rhs`, both sides proved equal to the
    /// stated ones by normalization.
    pub fn restate(&mut self, h: StepId, lhs: &Formula, rhs: &Formula, deep: bool) -> Result<StepId, BuildError> {
        let c = self.concl(h).clone();
        let left = self.prove_eq(lhs, &c.lhs, deep)?;
        let right = self.prove_eq(&c.rhs, rhs, deep)?;
        self.rewrite(&left, h, &right)
    }

    /// From `a ≤ b` and `k ≥ 0` derive `c ≤ d`, provided `d − c` and
    /// `k(b − a)` have the same linear normal form.
    pub fn scale_shift(&mut self, h: StepId, k: &Rational, c: &Formula, d: &Formula) -> Result<StepId, BuildError> {
        let a = self.concl(h).lhs.clone();
        let xi = Formula::add(c.clone(), Formula::scale(-k.clone(), a));
        let moved = self.r2(h, k.clone(), xi)?;
        self.restate(moved, c, d, false)
    }
}
