//! Exact linear entailment by Fourier–Motzkin elimination. Every derived row
//! remembers the nonnegative combination of input rows it came from, so a
//! contradiction doubles as a Farkas certificate.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::formula::{Letter, Rational};
use crate::linear::LinearForm;

/// Rows `0 ≤ vᵢ·x + rᵢ` over the letters in `letter_order`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinearSystem {
    pub hypotheses: Vec<LinearForm>,
    pub letter_order: Vec<Letter>,
}

impl LinearSystem {
    /// Letter order is the sorted union of the rows' letters.
    pub fn new(hypotheses: Vec<LinearForm>) -> Self {
        let mut order: Vec<Letter> = hypotheses.iter().flat_map(|h| h.letters().cloned()).collect();
        order.sort();
        order.dedup();
        LinearSystem { hypotheses, letter_order: order }
    }

    pub fn with_order(hypotheses: Vec<LinearForm>, mut letter_order: Vec<Letter>) -> Self {
        for l in hypotheses.iter().flat_map(|h| h.letters()) {
            if !letter_order.contains(l) {
                letter_order.push(l.clone());
            }
        }
        LinearSystem { hypotheses, letter_order }
    }

    fn order_with(&self, extra: &LinearForm) -> Vec<Letter> {
        let mut order = self.letter_order.clone();
        let mut missing: Vec<Letter> = extra.letters().filter(|l| !order.contains(l)).cloned().collect();
        missing.sort();
        order.extend(missing);
        order
    }
}

/// Σ qᵢvᵢ = u and Σ qᵢrᵢ ≤ s for the certified target `0 ≤ u·x + s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub multipliers: Vec<Rational>,
}

/// Σ qᵢvᵢ = 0 and Σ qᵢrᵢ < 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfeasibilityCertificate {
    pub multipliers: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Farkas(FarkasCertificate),
    Infeasible(InfeasibilityCertificate),
}

impl Certificate {
    pub fn multipliers(&self) -> &[Rational] {
        match self {
            Certificate::Farkas(c) => &c.multipliers,
            Certificate::Infeasible(c) => &c.multipliers,
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CERT")?;
        for q in self.multipliers() {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearVerdict {
    Entailed(FarkasCertificate),
    Infeasible(InfeasibilityCertificate),
    Refuted(BTreeMap<Letter, Rational>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FarkasError {
    #[error("certificate has {found} multipliers but the system has {expected} rows")]
    CountMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum Kind {
    Ge,
    Gt,
    Eq,
}

/// `coeffs·x + constant` compared with 0 by `kind`; `origin` is the
/// combination of input rows that produced it.
#[derive(Debug, Clone)]
pub(crate) struct Row {
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
    pub kind: Kind,
    pub origin: Vec<Rational>,
}

impl Row {
    fn combine(&self, a: &Rational, other: &Row, b: &Rational) -> Row {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| a * x + b * y).collect();
        let origin = self.origin.iter().zip(&other.origin).map(|(x, y)| a * x + b * y).collect();
        let kind = match (self.kind, other.kind) {
            (Kind::Eq, k) | (k, Kind::Eq) => k,
            (Kind::Gt, _) | (_, Kind::Gt) => Kind::Gt,
            _ => Kind::Ge,
        };
        Row { coeffs, constant: a * &self.constant + b * &other.constant, kind, origin }
    }

    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn contradictory(&self) -> bool {
        self.is_constant()
            && match self.kind {
                Kind::Ge => self.constant.is_negative(),
                Kind::Gt => !self.constant.is_positive(),
                Kind::Eq => !self.constant.is_zero(),
            }
    }

    /// Divide by the largest absolute coefficient so that parallel rows coincide.
    fn normalize(&mut self) {
        let scale = self
            .coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .filter(|m| !m.is_zero())
            .or_else(|| Some(self.constant.abs()).filter(|m| !m.is_zero()));
        if let Some(m) = scale {
            if !m.is_one() {
                let inv = m.recip();
                for c in self.coeffs.iter_mut().chain(self.origin.iter_mut()) {
                    *c *= &inv;
                }
                self.constant *= &inv;
            }
        }
    }
}

pub(crate) enum Outcome {
    /// Combination of input rows yielding a contradictory constant row.
    Contradiction(Row),
    Feasible(Vec<Rational>),
}

enum Step {
    Pivot(Row),
    Bounds(Vec<Row>),
}

/// Keep one row per (coefficients, kind), the tightest one.
fn prune(rows: Vec<Row>) -> Result<Vec<Row>, Row> {
    let mut best: HashMap<(Vec<Rational>, Kind, Option<Rational>), Row> = HashMap::new();
    let mut order = Vec::new();
    for mut row in rows {
        row.normalize();
        if row.contradictory() {
            return Err(row);
        }
        if row.is_constant() {
            continue;
        }
        let key_constant = (row.kind == Kind::Eq).then(|| row.constant.clone());
        let key = (row.coeffs.clone(), row.kind, key_constant);
        match best.get_mut(&key) {
            Some(existing) => {
                if row.constant < existing.constant {
                    *existing = row;
                }
            }
            None => {
                order.push(key.clone());
                best.insert(key, row);
            }
        }
    }
    Ok(order.into_iter().map(|k| best.remove(&k).expect("key recorded")).collect())
}

fn eliminate(rows: Vec<Row>, var: usize) -> (Vec<Row>, Step) {
    if let Some(idx) = rows.iter().position(|r| r.kind == Kind::Eq && !r.coeffs[var].is_zero()) {
        let pivot = rows[idx].clone();
        let p = pivot.coeffs[var].clone();
        let out = rows
            .into_iter()
            .enumerate()
            .filter(|(i, _)| *i != idx)
            .map(|(_, r)| {
                if r.coeffs[var].is_zero() {
                    r
                } else {
                    let factor = -(&r.coeffs[var] / &p);
                    r.combine(&Rational::one(), &pivot, &factor)
                }
            })
            .collect();
        return (out, Step::Pivot(pivot));
    }
    let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
    for r in rows {
        if r.coeffs[var].is_positive() {
            pos.push(r);
        } else if r.coeffs[var].is_negative() {
            neg.push(r);
        } else {
            rest.push(r);
        }
    }
    let saved: Vec<Row> = pos.iter().chain(neg.iter()).cloned().collect();
    for p in &pos {
        for n in &neg {
            let a = -n.coeffs[var].clone();
            let b = p.coeffs[var].clone();
            rest.push(p.combine(&a, n, &b));
        }
    }
    (rest, Step::Bounds(saved))
}

fn choose(rows: &[Row], var: usize, x: &[Rational]) -> Rational {
    let mut lower: Option<Rational> = None;
    let mut upper: Option<Rational> = None;
    for r in rows {
        let a = &r.coeffs[var];
        let rest: Rational = r
            .coeffs
            .iter()
            .zip(x)
            .enumerate()
            .filter(|(i, _)| *i != var)
            .fold(r.constant.clone(), |acc, (_, (c, v))| acc + c * v);
        let bound = -rest / a;
        if a.is_positive() {
            lower = Some(match lower {
                Some(l) if l >= bound => l,
                _ => bound,
            });
        } else {
            upper = Some(match upper {
                Some(u) if u <= bound => u,
                _ => bound,
            });
        }
    }
    match (lower, upper) {
        (Some(l), Some(u)) => (l + u) / Rational::from_integer(2.into()),
        (Some(l), None) => l + Rational::one(),
        (None, Some(u)) => u - Rational::one(),
        (None, None) => Rational::zero(),
    }
}

/// Decide feasibility of `rows` over `nvars` variables, eliminating in index order.
pub(crate) fn solve(rows: Vec<Row>, nvars: usize) -> Outcome {
    let mut current = match prune(rows) {
        Ok(r) => r,
        Err(bad) => return Outcome::Contradiction(bad),
    };
    let mut steps = Vec::with_capacity(nvars);
    for var in 0..nvars {
        let (next, step) = eliminate(current, var);
        steps.push(step);
        current = match prune(next) {
            Ok(r) => r,
            Err(bad) => return Outcome::Contradiction(bad),
        };
    }
    let mut x = vec![Rational::zero(); nvars];
    for (var, step) in steps.iter().enumerate().rev() {
        x[var] = match step {
            Step::Pivot(p) => {
                let rest = p
                    .coeffs
                    .iter()
                    .zip(&x)
                    .enumerate()
                    .filter(|(i, _)| *i != var)
                    .fold(p.constant.clone(), |acc, (_, (c, v))| acc + c * v);
                -rest / &p.coeffs[var]
            }
            Step::Bounds(rows) => choose(rows, var, &x),
        };
    }
    Outcome::Feasible(x)
}

/// Eliminate the first `keep_from` variables and return the surviving rows
/// restricted to the remaining ones, or `None` if a contradiction appears.
pub(crate) fn project(rows: Vec<Row>, keep_from: usize) -> Option<Vec<Row>> {
    let mut current = prune(rows).ok()?;
    for var in 0..keep_from {
        current = prune(eliminate(current, var).0).ok()?;
    }
    Some(current)
}

pub(crate) fn input_row(form: &LinearForm, order: &[Letter], kind: Kind, index: usize, total: usize) -> Row {
    let mut origin = vec![Rational::zero(); total];
    origin[index] = Rational::one();
    Row { coeffs: form.vector(order), constant: form.affine().clone(), kind, origin }
}

fn witness(order: &[Letter], x: Vec<Rational>) -> BTreeMap<Letter, Rational> {
    order.iter().cloned().zip(x).collect()
}

/// Feasibility of the system alone.
pub fn feasible(sys: &LinearSystem) -> Result<BTreeMap<Letter, Rational>, InfeasibilityCertificate> {
    let n = sys.hypotheses.len();
    let order = &sys.letter_order;
    let rows = sys.hypotheses.iter().enumerate().map(|(i, h)| input_row(h, order, Kind::Ge, i, n)).collect();
    match solve(rows, order.len()) {
        Outcome::Feasible(x) => Ok(witness(order, x)),
        Outcome::Contradiction(row) => Err(InfeasibilityCertificate { multipliers: row.origin }),
    }
}

pub fn entails_linear(sys: &LinearSystem, target: &LinearForm) -> LinearVerdict {
    let order = sys.order_with(target);
    let n = sys.hypotheses.len();
    let system = LinearSystem { hypotheses: sys.hypotheses.clone(), letter_order: order.clone() };
    if let Err(cert) = feasible(&system) {
        let verdict = Certificate::Infeasible(cert);
        assert_eq!(verify_certificate(&system, target, &verdict), Ok(true), "infeasibility self-check");
        let Certificate::Infeasible(cert) = verdict else { unreachable!() };
        return LinearVerdict::Infeasible(cert);
    }
    let mut rows: Vec<Row> = sys
        .hypotheses
        .iter()
        .enumerate()
        .map(|(i, h)| input_row(h, &order, Kind::Ge, i, n + 1))
        .collect();
    rows.push(input_row(&target.neg(), &order, Kind::Gt, n, n + 1));
    match solve(rows, order.len()) {
        Outcome::Feasible(x) => LinearVerdict::Refuted(witness(&order, x)),
        Outcome::Contradiction(row) => {
            let mu = row.origin[n].clone();
            assert!(mu.is_positive(), "system was feasible, the target row must take part");
            let multipliers: Vec<Rational> = row.origin[..n].iter().map(|q| q / &mu).collect();
            let cert = Certificate::Farkas(FarkasCertificate { multipliers });
            assert_eq!(verify_certificate(&system, target, &cert), Ok(true), "certificate self-check");
            let Certificate::Farkas(cert) = cert else { unreachable!() };
            LinearVerdict::Entailed(cert)
        }
    }
}

fn combination(sys: &LinearSystem, q: &[Rational]) -> LinearForm {
    sys.hypotheses.iter().zip(q).fold(LinearForm::zero(), |acc, (h, qi)| acc.add(&h.scale(qi)))
}

/// Exact check of the defining identities; the solver is not consulted.
pub fn verify_certificate(
    sys: &LinearSystem,
    target: &LinearForm,
    cert: &Certificate,
) -> Result<bool, FarkasError> {
    let q = cert.multipliers();
    if q.len() != sys.hypotheses.len() {
        return Err(FarkasError::CountMismatch { expected: sys.hypotheses.len(), found: q.len() });
    }
    if q.iter().any(Signed::is_negative) {
        return Ok(false);
    }
    let sum = combination(sys, q);
    Ok(match cert {
        Certificate::Farkas(_) => {
            let linear_part = LinearForm::from_parts(sum.coeffs().clone(), Rational::zero());
            let target_part = LinearForm::from_parts(target.coeffs().clone(), Rational::zero());
            linear_part == target_part && sum.affine() <= target.affine()
        }
        Certificate::Infeasible(_) => sum.is_constant() && sum.affine().is_negative(),
    })
}

/// Closed interval `[lower, upper]` of nonnegative rationals; `upper = None`
/// means unbounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarInterval {
    pub lower: Rational,
    pub upper: Option<Rational>,
}

/// The set of `r ≥ 0` with `sys ⊨ 0 ≤ base + r·slope`, for a feasible `sys`.
/// Computed on the dual side: by the affine Farkas lemma the set is the
/// projection onto `r` of the multipliers `q ≥ 0` with
/// `Σ qᵢvᵢ = u(r)` and `Σ qᵢrᵢ ≤ s(r)`, which is linear in `(q, r)`.
pub fn parametric_interval(
    sys: &LinearSystem,
    base: &LinearForm,
    slope: &LinearForm,
) -> Option<ScalarInterval> {
    let mut order = sys.order_with(base);
    order.extend(slope.letters().filter(|l| !order.contains(l)).cloned().collect::<Vec<_>>());
    let m = sys.hypotheses.len();
    let width = m + 1;
    let blank = || vec![Rational::zero(); width];
    let mut rows = Vec::new();
    for i in 0..=m {
        let mut coeffs = blank();
        coeffs[i] = Rational::one();
        rows.push(Row { coeffs, constant: Rational::zero(), kind: Kind::Ge, origin: Vec::new() });
    }
    for l in &order {
        let mut coeffs = blank();
        for (i, h) in sys.hypotheses.iter().enumerate() {
            coeffs[i] = h.coeff(l);
        }
        coeffs[m] = -slope.coeff(l);
        rows.push(Row { coeffs, constant: -base.coeff(l), kind: Kind::Eq, origin: Vec::new() });
    }
    let mut coeffs = blank();
    for (i, h) in sys.hypotheses.iter().enumerate() {
        coeffs[i] = -h.affine().clone();
    }
    coeffs[m] = slope.affine().clone();
    rows.push(Row { coeffs, constant: base.affine().clone(), kind: Kind::Ge, origin: Vec::new() });

    let surviving = project(rows, m)?;
    let mut lower = Rational::zero();
    let mut upper: Option<Rational> = None;
    for row in surviving {
        let a = &row.coeffs[m];
        let bound = -&row.constant / a;
        let (raise, lower_cap) = match row.kind {
            Kind::Eq => (true, true),
            _ => (a.is_positive(), !a.is_positive()),
        };
        if raise && bound > lower {
            lower = bound.clone();
        }
        if lower_cap && upper.as_ref().is_none_or(|u| bound < *u) {
            upper = Some(bound);
        }
    }
    match &upper {
        Some(u) if *u < lower => None,
        _ => Some(ScalarInterval { lower, upper }),
    }
}
