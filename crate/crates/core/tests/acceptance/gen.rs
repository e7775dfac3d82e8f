//! Seeded random generators for formulas, theories and derivations.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use rvl_core::formula::{int, rat};
use rvl_core::proofs::{conclude, AxiomId, Substitution};
use rvl_core::{Derivation, Formula, Fragment, Inequality, Letter, Mode, ProofStep, Rational, Rule, Theory};

use crate::oracle::{holds, Point};

pub const LETTERS: [&str; 3] = ["P", "Q", "R"];

pub fn letters(n: usize) -> Vec<Letter> {
    LETTERS[..n].iter().map(|s| Letter::new(s)).collect()
}

pub fn small_scalar(rng: &mut ChaCha8Rng) -> Rational {
    let choices = [rat(-2, 1), rat(-1, 1), rat(-1, 2), rat(0, 1), rat(1, 3), rat(1, 2), rat(1, 1), rat(2, 1), rat(3, 1)];
    choices.choose(rng).unwrap().clone()
}

pub fn nonneg_scalar(rng: &mut ChaCha8Rng) -> Rational {
    let choices = [rat(0, 1), rat(1, 3), rat(1, 2), rat(1, 1), rat(2, 1), rat(3, 1)];
    choices.choose(rng).unwrap().clone()
}

/// Any formula over `letters` of depth at most `depth`.
pub fn formula(rng: &mut ChaCha8Rng, letters: &[Letter], depth: usize, mode: Mode) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..10) {
            0 => Formula::Zero,
            1 if mode.is_extended() => Formula::One,
            _ => Formula::Letter(letters.choose(rng).unwrap().clone()),
        };
    }
    let mut sub = || formula(rng, letters, depth - 1, mode);
    let (a, b) = (sub(), sub());
    match rng.gen_range(0..3) {
        0 => Formula::add(a, b),
        1 => Formula::meet(a, b),
        _ => Formula::scale(small_scalar(rng), a),
    }
}

/// `Σ cᵢ·atomᵢ` with integer coefficients in `{−2, …, 2}`, where an atom is a
/// letter, `1` in extended mode, or (while `meets` lasts) a meet of two such
/// sums.
pub fn bounded_formula(rng: &mut ChaCha8Rng, letters: &[Letter], meets: &mut usize, mode: Mode) -> Formula {
    let terms = rng.gen_range(1..=3);
    let mut out: Option<Formula> = None;
    for _ in 0..terms {
        let atom = if *meets > 0 && rng.gen_bool(0.35) {
            *meets -= 1;
            let a = bounded_formula(rng, letters, meets, mode);
            let b = bounded_formula(rng, letters, meets, mode);
            Formula::meet(a, b)
        } else if mode.is_extended() && rng.gen_bool(0.2) {
            Formula::One
        } else {
            Formula::Letter(letters.choose(rng).unwrap().clone())
        };
        let c = rng.gen_range(-2..=2);
        let term = if c == 1 { atom } else { Formula::scale(int(c), atom) };
        out = Some(match out {
            None => term,
            Some(acc) => Formula::add(acc, term),
        });
    }
    out.unwrap()
}

/// Rational point with coordinates `k/d`, `d ≤ 4`, inside `[−bound, bound]`.
pub fn random_point(rng: &mut ChaCha8Rng, letters: &[Letter], bound: i64) -> Point {
    letters
        .iter()
        .map(|l| {
            let d = rng.gen_range(1..=4i64);
            (l.clone(), rat(rng.gen_range(-bound * d..=bound * d), d))
        })
        .collect()
}

/// A theory of up to `max_hyps` hypotheses together with the sample points
/// that satisfy it; every accepted hypothesis keeps at least `keep` points.
pub fn theory_with_models(
    rng: &mut ChaCha8Rng,
    letters: &[Letter],
    mode: Mode,
    max_hyps: usize,
    keep: usize,
    bare: bool,
) -> (Theory, Vec<Point>) {
    let bound = if mode.is_extended() { 1 } else { 3 };
    let mut pool: Vec<Point> = (0..3 * keep).map(|_| random_point(rng, letters, bound)).collect();
    let mut hyps = Vec::new();
    let wanted = rng.gen_range(0..=max_hyps);
    let mut tries = 0;
    while hyps.len() < wanted && tries < 40 {
        tries += 1;
        let rhs = formula(rng, letters, 2, mode);
        let lhs = if bare || rng.gen_bool(0.5) { Formula::Zero } else { formula(rng, letters, 1, mode) };
        let h = Inequality::new(lhs, rhs);
        let kept: Vec<Point> = pool.iter().filter(|p| holds(&h, p)).cloned().collect();
        if kept.len() >= keep {
            pool = kept;
            hyps.push(h);
        }
    }
    (Theory::new(hyps), pool)
}

pub const MAX_DEPTH: usize = 8;

/// Random forward construction of checked derivations. Every step is
/// validated through `conclude` before it is recorded.
pub struct DerivationGen<'a> {
    pub rng: &'a mut ChaCha8Rng,
    pub theory: Theory,
    pub mode: Mode,
    pub letters: Vec<Letter>,
    pub full: bool,
    pub steps: Vec<ProofStep>,
    depth: Vec<usize>,
}

impl<'a> DerivationGen<'a> {
    pub fn new(rng: &'a mut ChaCha8Rng, theory: Theory, mode: Mode, letters: Vec<Letter>, full: bool) -> Self {
        DerivationGen { rng, theory, mode, letters, full, steps: Vec::new(), depth: Vec::new() }
    }

    fn push(&mut self, rule: Rule, premises: &[usize]) -> Option<usize> {
        let d = 1 + premises.iter().map(|&i| self.depth[i]).max().unwrap_or(0);
        if d > MAX_DEPTH {
            return None;
        }
        let c = conclude(&rule, &self.steps, &self.theory, self.mode).ok()?;
        if c.lhs.size() + c.rhs.size() > 300 {
            return None;
        }
        self.steps.push(ProofStep { rule, conclusion: c });
        self.depth.push(d);
        Some(self.steps.len() - 1)
    }

    fn small(&mut self) -> Formula {
        if !self.steps.is_empty() && self.rng.gen_bool(0.3) {
            let i = self.rng.gen_range(0..self.steps.len());
            let c = &self.steps[i].conclusion;
            return if self.rng.gen_bool(0.5) { c.lhs.clone() } else { c.rhs.clone() };
        }
        formula(self.rng, &self.letters, 1, self.mode)
    }

    fn substitution(&mut self, n: u8) -> Substitution {
        let mut sub = Substitution::new();
        let needs: &[char] = match n {
            1 | 10 | 14 => &['p', 'q'],
            2 | 11 | 12 => &['p', 'q', 'x'],
            3 | 4 | 5 | 9 => &['p'],
            6 | 8 => &['p', 'r', 's'],
            7 | 13 => &['p', 'q', 'r'],
            15 => return sub.phi(Formula::Letter(self.letters.choose(self.rng).unwrap().clone())),
            _ => unreachable!(),
        };
        for v in needs {
            sub = match v {
                'p' => sub.phi(self.small()),
                'q' => sub.psi(self.small()),
                'x' => sub.xi(self.small()),
                'r' if n == 13 => sub.r(nonneg_scalar(self.rng)),
                'r' => sub.r(small_scalar(self.rng)),
                's' => sub.s(small_scalar(self.rng)),
                _ => unreachable!(),
            };
        }
        sub
    }

    fn random_axiom(&mut self) -> Option<usize> {
        let top = if self.mode.is_extended() { 15 } else { 14 };
        let n = self.rng.gen_range(1..=top);
        let ax = if n == 14 || self.rng.gen_bool(0.5) { AxiomId::le(n) } else { AxiomId::ge(n) };
        let sub = self.substitution(n);
        self.push(Rule::Axiom(ax, sub), &[])
    }

    /// Axiom instances whose left side is exactly `b`.
    fn rewrites_from(b: &Formula) -> Vec<(AxiomId, Substitution)> {
        let s = Substitution::new;
        let mut out = vec![
            (AxiomId::ge(4), s().phi(b.clone())),
            (AxiomId::ge(3), s().phi(b.clone())),
            (AxiomId::ge(9), s().phi(b.clone())),
        ];
        match b {
            Formula::Add(x, y) => {
                out.push((AxiomId::le(1), s().phi((**x).clone()).psi((**y).clone())));
                if let Formula::Add(p, q) = &**x {
                    out.push((AxiomId::le(2), s().phi((**p).clone()).psi((**q).clone()).xi((**y).clone())));
                }
                if let Formula::Zero = &**y {
                    out.push((AxiomId::le(3), s().phi((**x).clone())));
                }
                if let (Formula::Scale(r, p), Formula::Scale(q, p2)) = (&**x, &**y) {
                    if p == p2 {
                        out.push((AxiomId::le(6), s().phi((**p).clone()).r(r.clone()).s(q.clone())));
                    }
                    if r == q {
                        out.push((AxiomId::le(7), s().phi((**p).clone()).psi((**p2).clone()).r(r.clone())));
                    }
                }
            }
            Formula::Meet(x, y) => {
                out.push((AxiomId::le(10), s().phi((**x).clone()).psi((**y).clone())));
                out.push((AxiomId::le(14), s().phi((**x).clone()).psi((**y).clone())));
                if let Formula::Meet(p, q) = &**x {
                    out.push((AxiomId::le(11), s().phi((**p).clone()).psi((**q).clone()).xi((**y).clone())));
                }
            }
            Formula::Scale(r, x) => {
                if r == &int(1) {
                    out.push((AxiomId::le(4), s().phi((**x).clone())));
                }
                if r == &int(0) {
                    out.push((AxiomId::le(5), s().phi((**x).clone())));
                }
                if let Formula::Scale(q, p) = &**x {
                    out.push((AxiomId::le(8), s().phi((**p).clone()).r(r.clone()).s(q.clone())));
                }
                if let (Formula::Meet(p, q), true) = (&**x, r >= &int(0)) {
                    out.push((AxiomId::le(13), s().phi((**p).clone()).psi((**q).clone()).r(r.clone())));
                }
            }
            _ => {}
        }
        out
    }

    fn chain_forward(&mut self) -> Option<usize> {
        let i = self.rng.gen_range(0..self.steps.len());
        let b = self.steps[i].conclusion.rhs.clone();
        let options = Self::rewrites_from(&b);
        let (ax, sub) = options.choose(self.rng).unwrap().clone();
        let a = self.push(Rule::Axiom(ax, sub), &[])?;
        self.push(Rule::R1(i, a), &[i, a])
    }

    fn chain_backward(&mut self) -> Option<usize> {
        let j = self.rng.gen_range(0..self.steps.len());
        let a = self.steps[j].conclusion.lhs.clone();
        let n = *[3u8, 4, 9].choose(self.rng).unwrap();
        let ax = self.push(Rule::Axiom(AxiomId::le(n), Substitution::new().phi(a)), &[])?;
        self.push(Rule::R1(ax, j), &[ax, j])
    }

    fn chain_existing(&mut self) -> Option<usize> {
        let pairs: Vec<(usize, usize)> = (0..self.steps.len())
            .flat_map(|i| (0..self.steps.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| self.steps[i].conclusion.rhs == self.steps[j].conclusion.lhs)
            .collect();
        let &(i, j) = pairs.choose(self.rng)?;
        self.push(Rule::R1(i, j), &[i, j])
    }

    fn linearity(&mut self) -> Option<usize> {
        let i = self.rng.gen_range(0..self.steps.len());
        let r = nonneg_scalar(self.rng);
        let xi = formula(self.rng, &self.letters, 1, self.mode);
        self.push(Rule::R2 { from: i, r, xi }, &[i])
    }

    fn restriction(&mut self) -> Option<usize> {
        let i = self.rng.gen_range(0..self.steps.len());
        self.push(Rule::R3(i), &[i])
    }

    fn congruence(&mut self) -> Option<usize> {
        let n = self.rng.gen_range(1..=13u8);
        let sub = self.substitution(n);
        let le = self.push(Rule::Axiom(AxiomId::le(n), sub.clone()), &[])?;
        let ge = self.push(Rule::Axiom(AxiomId::ge(n), sub), &[])?;
        let xi = self.small();
        self.push(Rule::R4 { le, ge, xi }, &[le, ge])
    }

    pub fn hyp(&mut self, k: usize) -> Option<usize> {
        self.push(Rule::Hyp(k), &[])
    }

    /// Grow the derivation by one random rule application (which may add
    /// auxiliary axiom steps first).
    pub fn grow(&mut self) {
        let choice = if self.steps.is_empty() { self.rng.gen_range(0..2) } else { self.rng.gen_range(0..9) };
        let _ = match choice {
            0 if !self.theory.is_empty() => {
                let k = self.rng.gen_range(0..self.theory.len());
                self.hyp(k)
            }
            0 | 1 => self.random_axiom(),
            2 => self.chain_forward(),
            3 => self.chain_backward(),
            4 => self.chain_existing(),
            5 | 6 => self.linearity(),
            7 if self.full => self.restriction(),
            8 if self.full => self.congruence(),
            _ => self.linearity(),
        };
    }

    /// Steps the step at `last` depends on, itself included.
    pub fn support(&self, last: usize) -> Vec<bool> {
        let mut need = vec![false; last + 1];
        need[last] = true;
        for n in (0..=last).rev() {
            if !need[n] {
                continue;
            }
            match &self.steps[n].rule {
                Rule::R1(i, j) | Rule::R4 { le: i, ge: j, .. } => {
                    need[*i] = true;
                    need[*j] = true;
                }
                Rule::R2 { from, .. } => need[*from] = true,
                Rule::R3(i) => need[*i] = true,
                Rule::Hyp(_) | Rule::Axiom(..) => {}
            }
        }
        need
    }

    pub fn finish(self, len: usize) -> Derivation {
        let fragment = if self.full { Fragment::Full } else { Fragment::Lin };
        let mut steps = self.steps;
        steps.truncate(len);
        Derivation { theory: self.theory, mode: self.mode, fragment, steps }
    }
}
