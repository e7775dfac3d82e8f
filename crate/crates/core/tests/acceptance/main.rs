//! Acceptance suite: eight end-to-end criteria, one report line each.
//! Runs without the libtest harness so the report is always printed.

mod gen;
mod oracle;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rvl_core::farkas::{entails_linear, verify_certificate, LinearSystem, LinearVerdict};
use rvl_core::formula::{int, rat};
use rvl_core::luk::{luk_valid, parse_luk, Convention, LukFormula, LukVerdict};
use rvl_core::proofs::{check, cut_eliminate, deduction_transform, AxiomId, ProofBuilder, Substitution};
use rvl_core::semantics::{poly_eval, poly_leq, PolyModel, PolyValue};
use rvl_core::syntax::{parse_formula, print_formula};
use rvl_core::{
    decide, Derivation, Formula, Fragment, Inequality, Letter, LinearForm, Mode, ProofStep, Rational, Rule,
    Theory, Verdict,
};

use gen::{bounded_formula, letters, theory_with_models, DerivationGen};
use oracle::{affine_eval, arrangement_vertices, grid, holds, holds_all, luk_value, point, value, Affine, Point};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let spent = start.elapsed();
    ensure(spent <= limit, || format!("{what} took {spent:.1?}, limit {limit:?}"))
}

/// Random checked derivations are sound in sampled models of their theory.
fn soundness_fuzz() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let (mut derivations, mut evaluations) = (0usize, 0usize);
    let mut rules: BTreeMap<&'static str, usize> = BTreeMap::new();
    while derivations < 1000 {
        let n = rng.gen_range(1..=3);
        let mode = if rng.gen_bool(0.3) { Mode::Extended } else { Mode::Basic };
        let ls = letters(n);
        let (theory, models) = theory_with_models(&mut rng, &ls, mode, 3, 20, false);
        if models.len() < 20 {
            continue;
        }
        let mut g = DerivationGen::new(&mut rng, theory, mode, ls, true);
        let target = g.rng.gen_range(3..=16);
        for _ in 0..60 {
            if g.steps.len() >= target {
                break;
            }
            g.grow();
        }
        if g.steps.is_empty() {
            continue;
        }
        let len = g.steps.len();
        let d = g.finish(len);
        check(&d).map_err(|e| format!("generated derivation rejected: {e}"))?;
        for s in &d.steps {
            *rules.entry(s.rule.name()).or_default() += 1;
        }
        for m in &models {
            for (k, s) in d.steps.iter().enumerate() {
                evaluations += 1;
                ensure(holds(&s.conclusion, m), || {
                    format!("step {} `{}` fails at {m:?} with theory {:?}", k + 1, s.conclusion, d.theory)
                })?;
            }
        }
        derivations += 1;
    }
    ensure(rules.len() == 6, || format!("rule coverage too narrow: {rules:?}"))?;
    within(start, Duration::from_secs(60), "soundness fuzz")?;
    Ok(format!("{derivations} derivations, {evaluations} step evaluations, 0 violations"))
}

fn certificates_verify(v: &Verdict) -> Result<(), String> {
    if let Verdict::Entails(branches) = v {
        for b in branches {
            ensure(verify_certificate(&b.system, &b.target, &b.certificate) == Ok(true), || {
                format!("branch {} certificate fails", b.signs)
            })?;
        }
    }
    Ok(())
}

fn query_letters(t: &Theory, goal: &Inequality) -> Vec<Letter> {
    let mut all = t.letters();
    all.extend(goal.letters());
    all.sort();
    all.dedup();
    all
}

/// Decide agrees with vertex enumeration plus grid sampling.
fn finite_completeness() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let grid_values = grid(-1, 1, 4);
    let (mut entailed, mut refuted) = (0, 0);
    for instance in 0..500 {
        let mode = if instance % 3 == 0 { Mode::Extended } else { Mode::Basic };
        let ls = letters(rng.gen_range(1..=3));
        let mut meets = 2;
        let hyps = (0..rng.gen_range(0..=2))
            .map(|_| {
                let lhs = if rng.gen_bool(0.5) { Formula::Zero } else { bounded_formula(&mut rng, &ls, &mut meets, mode) };
                Inequality::new(lhs, bounded_formula(&mut rng, &ls, &mut meets, mode))
            })
            .collect::<Vec<_>>();
        let t = Theory::new(hyps);
        let lhs = if rng.gen_bool(0.5) { Formula::Zero } else { bounded_formula(&mut rng, &ls, &mut meets, mode) };
        let goal = Inequality::new(lhs, bounded_formula(&mut rng, &ls, &mut meets, mode));
        let order = query_letters(&t, &goal);

        let by_vertex = oracle::vertex_countermodel(&t, &goal, &order);
        let samples: Vec<Point> = if order.len() <= 2 {
            let mut pts = vec![Vec::new()];
            for _ in &order {
                pts = pts.iter().flat_map(|p| grid_values.iter().map(move |v| [p.clone(), vec![v.clone()]].concat())).collect();
            }
            pts.iter().map(|x| point(&order, x)).collect()
        } else {
            (0..400).map(|_| order.iter().map(|l| (l.clone(), grid_values.choose(&mut rng).unwrap().clone())).collect()).collect()
        };
        let by_grid = samples.into_iter().find(|p| holds_all(&t, p) && !holds(&goal, p));
        ensure(by_grid.is_none() || by_vertex.is_some(), || format!("oracle inconsistency on {t:?} / {goal}"))?;

        let verdict = decide(&t, &goal, mode);
        certificates_verify(&verdict)?;
        match (&verdict, &by_vertex) {
            (Verdict::Entails(_), None) => entailed += 1,
            (Verdict::Refutes(m), Some(_)) => {
                let at = m.assignment().clone();
                ensure(holds_all(&t, &at) && !holds(&goal, &at), || format!("bad countermodel {at:?} for {goal}"))?;
                if mode.is_extended() {
                    ensure(at.values().all(|v| v.abs() <= Rational::one()), || "model out of range".into())?;
                }
                refuted += 1;
            }
            _ => {
                return Err(format!(
                    "instance {instance}: decide says {} but oracle found {by_vertex:?} for {:?} |- {goal}",
                    if verdict.is_entails() { "entailed" } else { "refuted" },
                    t.0.iter().map(|h| h.to_string()).collect::<Vec<_>>()
                ))
            }
        }
    }
    within(start, Duration::from_secs(120), "completeness check")?;
    Ok(format!("500 instances agree ({entailed} entailed, {refuted} refuted), certificates verified"))
}

fn ineq(text: &str, mode: Mode) -> Inequality {
    rvl_core::parse_inequality(text, mode).unwrap()
}

/// Small reference entailments, refutations and proofs.
fn reference_examples() -> Outcome {
    let basic = Mode::Basic;
    let t = Theory::new(vec![ineq("2Q <= P", basic), ineq("0 <= Q", basic)]);
    let v = decide(&t, &ineq("0 <= P", basic), basic);
    ensure(v.is_entails(), || "2Q <= P, 0 <= Q should entail 0 <= P".into())?;
    certificates_verify(&v)?;

    let t = Theory::new(vec![ineq("2Q <= P", basic)]);
    let goal = ineq("Q <= P", basic);
    let Verdict::Refutes(m) = decide(&t, &goal, basic) else {
        return Err("2Q <= P should not entail Q <= P".into());
    };
    let at = m.assignment().clone();
    ensure(holds_all(&t, &at) && !holds(&goal, &at), || format!("countermodel {at:?} is wrong"))?;

    let t = Theory::new(vec![ineq("0 <= P", basic)]);
    let goal = ineq("0 <= P /\\ 0", basic);
    let v = decide(&t, &goal, basic);
    ensure(v.is_entails(), || "0 <= P should entail 0 <= P /\\ 0".into())?;
    certificates_verify(&v)?;
    // the only route is the restriction rule, which the linear fragment lacks
    let zero = Formula::Zero;
    let steps = vec![
        Rule::Axiom(AxiomId::ge(9), Substitution::new().phi(zero)),
        Rule::Hyp(0),
        Rule::R3(1),
        Rule::R1(0, 2),
    ];
    let mut proof = Derivation { theory: t.clone(), mode: basic, fragment: Fragment::Full, steps: Vec::new() };
    for rule in steps {
        let conclusion = rvl_core::proofs::conclude(&rule, &proof.steps, &t, basic).map_err(|e| e.to_string())?;
        proof.steps.push(ProofStep { rule, conclusion });
    }
    ensure(proof.conclusion() == Some(&goal), || "proof ends elsewhere".into())?;
    check(&proof).map_err(|e| format!("full proof rejected: {e}"))?;
    proof.fragment = Fragment::Lin;
    ensure(check(&proof).is_err(), || "lin checker accepted a restriction step".into())?;

    let goal = ineq("P <= 1", Mode::Extended);
    ensure(decide(&Theory::default(), &goal, Mode::Extended).is_entails(), || "P <= 1 not entailed".into())?;
    let range = Rule::Axiom(AxiomId::ge(15), Substitution::new().phi(Formula::letter("P")));
    let conclusion = rvl_core::proofs::conclude(&range, &[], &Theory::default(), Mode::Extended).map_err(|e| e.to_string())?;
    let proof = Derivation {
        theory: Theory::default(),
        mode: Mode::Extended,
        fragment: Fragment::Mp,
        steps: vec![ProofStep { rule: range, conclusion }],
    };
    check(&proof).map_err(|e| e.to_string())?;
    ensure(proof.conclusion() == Some(&goal), || "range axiom gives a different bound".into())?;
    Ok("four examples reproduced, lin proof of 0 <= P /\\ 0 rejected".into())
}

/// The carried term of a deduction transform output.
fn carried(fragment: Fragment, r: &Rational, theta: &Formula) -> Formula {
    if fragment <= Fragment::Lin {
        Formula::scale(r.clone(), theta.clone())
    } else {
        Formula::scale(-r.clone(), Formula::neg(theta.clone()))
    }
}

fn random_deduction(rng: &mut ChaCha8Rng) -> Option<(Derivation, usize)> {
    let ls = letters(rng.gen_range(1..=3));
    let mode = if rng.gen_bool(0.25) { Mode::Extended } else { Mode::Basic };
    let (mut theory, _) = theory_with_models(rng, &ls, mode, 2, 10, true);
    let theta = gen::formula(rng, &ls, 2, mode);
    let k = rng.gen_range(0..=theory.len());
    theory.0.insert(k, Inequality::nonneg(theta));
    let full = rng.gen_bool(0.5);
    let mut g = DerivationGen::new(rng, theory, mode, ls, full);
    g.hyp(k)?;
    let target = g.rng.gen_range(3..=14);
    for _ in 0..60 {
        if g.steps.len() >= target {
            break;
        }
        g.grow();
    }
    let uses = |g: &DerivationGen, last: usize| {
        g.support(last).iter().enumerate().any(|(i, &on)| on && matches!(g.steps[i].rule, Rule::Hyp(h) if h == k))
    };
    let last = (0..g.steps.len()).rev().find(|&n| uses(&g, n)).unwrap_or(0);
    Some((g.finish(last + 1), k))
}

/// `T ⊢ 0 ≤ −X` from `X ≤ −b·φ` with the cut `0 ≤ φ`, or from `X ≤ a·φ`
/// with `0 ≤ −φ`; sometimes straight from a spare hypothesis `0 ≤ −X`.
fn random_cut_pair(rng: &mut ChaCha8Rng) -> Result<(Derivation, Derivation, Inequality), String> {
    let ls = letters(rng.gen_range(1..=3));
    let mode = Mode::Basic;
    let phi = gen::formula(rng, &ls, 2, mode);
    let x = gen::formula(rng, &ls, 2, mode);
    let pick = |rng: &mut ChaCha8Rng| [rat(1, 2), int(1), int(2), rat(5, 3)].choose(rng).unwrap().clone();
    let (a, b) = (pick(rng), pick(rng));
    let mut hyps = vec![
        Inequality::new(x.clone(), Formula::scale(a, phi.clone())),
        Inequality::new(x.clone(), Formula::scale(-b, phi.clone())),
    ];
    let spare = rng.gen_bool(0.2);
    if spare {
        hyps.push(Inequality::nonneg(Formula::negate(x.clone())));
    }
    hyps.shuffle(rng);
    let goal = Inequality::nonneg(Formula::negate(x.clone()));
    let fragment = if rng.gen_bool(0.5) { Fragment::Lin } else { Fragment::Full };
    let build = |cut: Inequality, minus_side: bool| -> Result<Derivation, String> {
        let mut th = hyps.clone();
        th.push(cut);
        let cut_index = th.len() - 1;
        let mut b = ProofBuilder::new(Theory::new(th.clone()), mode);
        let err = |e: rvl_core::proofs::BuildError| e.to_string();
        let last = if spare && minus_side {
            let k = th.iter().position(|h| h == &goal).unwrap();
            b.hyp(k).map_err(err)?
        } else {
            // the hypothesis whose coefficient has the sign opposite to the cut
            let k = th[..cut_index]
                .iter()
                .position(|h| match &h.rhs {
                    Formula::Scale(q, _) if h.lhs == x => q.is_positive() == minus_side,
                    _ => false,
                })
                .unwrap();
            let Formula::Scale(q, _) = th[k].rhs.clone() else { unreachable!() };
            let h = b.hyp(k).map_err(err)?;
            let c = b.hyp(cut_index).map_err(err)?;
            let slack = Formula::sub(b.concl(h).rhs.clone(), x.clone());
            let h = b.scale_shift(h, &int(1), &Formula::Zero, &slack).map_err(err)?;
            let c = b.scale_nonneg(&q.abs(), c).map_err(err)?;
            let sum = b.add_both(h, c).map_err(err)?;
            b.restate(sum, &Formula::Zero, &goal.rhs, false).map_err(err)?
        };
        Ok(b.finish(last, fragment))
    };
    let plus = build(Inequality::nonneg(phi.clone()), false)?;
    let minus = build(Inequality::nonneg(Formula::negate(phi)), true)?;
    Ok((plus, minus, goal))
}

/// Deduction and cut transforms on random inputs.
fn transform_round_trips() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let (mut deductions, mut positive, mut lin) = (0, 0, 0);
    while deductions < 200 {
        let Some((d, k)) = random_deduction(&mut rng) else { continue };
        check(&d).map_err(|e| format!("generated derivation rejected: {e}"))?;
        let out = deduction_transform(&d, k).map_err(|e| format!("transform failed: {e}\n{d:?}"))?;
        check(&out.derivation).map_err(|e| format!("transformed derivation rejected: {e}"))?;
        let mut rest = d.theory.clone();
        let theta = rest.0.remove(k).rhs;
        ensure(out.derivation.theory == rest, || "theory not reduced".into())?;
        let src = d.conclusion().unwrap();
        let want = Inequality::new(Formula::add(src.lhs.clone(), carried(d.fragment, &out.r, &theta)), src.rhs.clone());
        ensure(out.derivation.conclusion() == Some(&want), || {
            format!("conclusion {} instead of {want}", out.derivation.conclusion().unwrap())
        })?;
        ensure(!out.r.is_negative(), || "negative multiplier".into())?;
        positive += usize::from(out.r.is_positive());
        lin += usize::from(d.fragment == Fragment::Lin);
        deductions += 1;
    }
    ensure(positive >= 100, || format!("only {positive} transforms used their hypothesis"))?;
    let mut cuts = 0;
    while cuts < 200 {
        let (plus, minus, goal) = random_cut_pair(&mut rng)?;
        check(&plus).map_err(|e| format!("plus side rejected: {e}"))?;
        check(&minus).map_err(|e| format!("minus side rejected: {e}"))?;
        let out = cut_eliminate(&plus, &minus).map_err(|e| format!("cut failed: {e}"))?;
        check(&out).map_err(|e| format!("cut output rejected: {e}"))?;
        let n = plus.theory.len() - 1;
        ensure(out.theory.0 == plus.theory.0[..n], || "cut hypothesis survived".into())?;
        ensure(out.conclusion() == Some(&goal), || "cut output proves something else".into())?;
        cuts += 1;
    }
    Ok(format!("{deductions} deductions ({positive} with r > 0, {lin} linear), {cuts} cuts, all checked"))
}

fn affine_of(lf: &LinearForm, order: &[Letter]) -> Affine {
    order.iter().map(|l| lf.coeff(l)).chain([lf.affine().clone()]).collect()
}

/// Farkas verdicts against vertex enumeration in a box that provably holds
/// a witness whenever one exists.
fn farkas_engine() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let names = ["X", "Y", "Z", "W"];
    let mut kinds = [0usize; 3];
    for system in 0..500 {
        let n = rng.gen_range(1..=4);
        let order: Vec<Letter> = names[..n].iter().map(|s| Letter::new(s)).collect();
        let random_form = |rng: &mut ChaCha8Rng| {
            let coeffs: Vec<(Letter, Rational)> = order.iter().map(|l| (l.clone(), int(rng.gen_range(-3..=3)))).collect();
            LinearForm::from_parts(coeffs, int(rng.gen_range(-3..=3)))
        };
        let rows: Vec<LinearForm> = (0..rng.gen_range(1..=6)).map(|_| random_form(&mut rng)).collect();
        let target = random_form(&mut rng);
        let sys = LinearSystem::with_order(rows.clone(), order.clone());
        let affine_rows: Vec<Affine> = rows.iter().map(|r| affine_of(r, &order)).collect();
        let t = affine_of(&target, &order);

        // Basic solutions have coordinates bounded by 4!·3⁴·4 < 10⁴.
        let bound = int(10_000);
        let mut planes = affine_rows.clone();
        planes.push(t.clone());
        let mut t_shift = t.clone();
        t_shift[n] += int(1);
        planes.push(t_shift);
        let vertices = arrangement_vertices(&planes, n, &bound);
        let inside = |x: &Vec<Rational>| affine_rows.iter().all(|r| !affine_eval(r, x).is_negative());
        let feasible: Vec<&Vec<Rational>> = vertices.iter().filter(|x| inside(x)).collect();
        let expected = if feasible.is_empty() {
            0
        } else if feasible.iter().any(|x| affine_eval(&t, x).is_negative()) {
            2
        } else {
            1
        };

        let verdict = entails_linear(&sys, &target);
        let got = match &verdict {
            LinearVerdict::Infeasible(c) => {
                ensure(c.multipliers.iter().all(|q| !q.is_negative()), || "negative multiplier".into())?;
                let sum = c.multipliers.iter().zip(&affine_rows).fold(vec![int(0); n + 1], |acc, (q, r)| {
                    oracle::affine_add(&acc, &oracle::affine_scale(q, r))
                });
                ensure(sum[..n].iter().all(Zero::is_zero) && sum[n].is_negative(), || "bad infeasibility identity".into())?;
                0
            }
            LinearVerdict::Entailed(c) => {
                ensure(c.multipliers.iter().all(|q| !q.is_negative()), || "negative multiplier".into())?;
                let sum = c.multipliers.iter().zip(&affine_rows).fold(vec![int(0); n + 1], |acc, (q, r)| {
                    oracle::affine_add(&acc, &oracle::affine_scale(q, r))
                });
                ensure(sum[..n] == t[..n] && sum[n] <= t[n], || "bad Farkas identity".into())?;
                1
            }
            LinearVerdict::Refuted(w) => {
                let x: Vec<Rational> = order.iter().map(|l| w.get(l).cloned().unwrap_or_else(|| int(0))).collect();
                ensure(inside(&x) && affine_eval(&t, &x).is_negative(), || "bad witness".into())?;
                2
            }
        };
        if let LinearVerdict::Entailed(c) = &verdict {
            let cert = rvl_core::farkas::Certificate::Farkas(c.clone());
            ensure(verify_certificate(&sys, &target, &cert) == Ok(true), || "verify_certificate disagrees".into())?;
        }
        ensure(got == expected, || format!("system {system}: verdict {got}, oracle {expected}"))?;
        kinds[got] += 1;
    }
    Ok(format!("500 systems agree ({} infeasible, {} entailed, {} refuted)", kinds[0], kinds[1], kinds[2]))
}

fn random_luk(rng: &mut ChaCha8Rng, depth: usize) -> LukFormula {
    if depth == 0 || rng.gen_bool(0.25) {
        return LukFormula::var(["A", "B"].choose(rng).unwrap());
    }
    let mut sub = || random_luk(rng, depth - 1);
    let (x, y) = (sub(), sub());
    match rng.gen_range(0..6) {
        0 => LukFormula::not(x),
        1 => LukFormula::ominus(x, y),
        2 => LukFormula::half(x),
        3 => LukFormula::implies(x, y),
        4 => LukFormula::oplus(x, y),
        _ => LukFormula::odot(x, y),
    }
}

fn luk_countermodel_ok(f: &LukFormula, v: &LukVerdict) -> Result<(), String> {
    if let LukVerdict::Invalid(m) = v {
        let at = m.assignment().clone();
        ensure(at.values().all(|x| !x.is_negative() && *x <= Rational::one()), || format!("{at:?} leaves [0, 1]"))?;
        ensure(luk_value(f, &at) < Rational::one(), || format!("{f} is 1 at {at:?}"))?;
    }
    Ok(())
}

fn lukasiewicz_bridge() -> Outcome {
    let axioms = [
        "A -> (B -> A)",
        "(A -> B) -> ((B -> C) -> (A -> C))",
        "((A -> B) -> B) -> ((B -> A) -> A)",
        "(~A -> ~B) -> (B -> A)",
    ];
    for a in axioms {
        let f = parse_luk(a).map_err(|e| e.to_string())?;
        ensure(luk_valid(&f, Convention::Lukasiewicz).is_valid(), || format!("axiom {a} not valid"))?;
    }
    let refutable = [
        "A", "~A", "A -> B", "A (+) A <-> A", "A -> A & A", "A (+) A", "A & ~A", "(A -> B) -> (B -> A)",
        "A <-> ~A", "(A -> B) -> A", "((A -> B) -> A) -> A", "A & A <-> A", "(A -> ~A) -> ~A",
        "(A -> (A -> B)) -> (A -> B)", "1/2 A", "A -> 1/2 A", "B -> A & B", "A <-> B", "A & B -> A & A",
        "(A -. B) (+) (B -. A)", "~A -> A", "A & B", "(A (+) B) -> A", "~~A -> ~A",
    ];
    for text in refutable {
        let f = parse_luk(text).map_err(|e| e.to_string())?;
        let v = luk_valid(&f, Convention::Lukasiewicz);
        ensure(!v.is_valid(), || format!("{text} reported valid"))?;
        luk_countermodel_ok(&f, &v)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let values = grid(0, 1, 12);
    let (a, b) = (Letter::new("A"), Letter::new("B"));
    let (mut valid, mut invalid) = (0, 0);
    for _ in 0..150 {
        let f = random_luk(&mut rng, 3);
        let on_grid = values.iter().all(|x| {
            values.iter().all(|y| {
                let at: Point = [(a.clone(), x.clone()), (b.clone(), y.clone())].into_iter().collect();
                luk_value(&f, &at) == Rational::one()
            })
        });
        let v = luk_valid(&f, Convention::Lukasiewicz);
        luk_countermodel_ok(&f, &v)?;
        ensure(v.is_valid() == on_grid, || format!("{f}: engine {}, grid {on_grid}", v.is_valid()))?;
        if on_grid {
            valid += 1;
        } else {
            invalid += 1;
        }
    }
    Ok(format!("4 axioms valid, {} refuted with models, 150 random formulas agree ({valid} valid, {invalid} not)", refutable.len()))
}

/// `{0 ≤ kQ ≤ P : k ≤ n}` never forces `Q ≤ 0`; the polynomial structure
/// realises the whole infinite chain.
fn non_archimedean() -> Outcome {
    let q = Formula::letter("Q");
    let p = Formula::letter("P");
    for n in 1..=50 {
        let t: Theory = (1..=n)
            .flat_map(|k| {
                let kq = Formula::scale(int(k), q.clone());
                [Inequality::nonneg(kq.clone()), Inequality::new(kq, p.clone())]
            })
            .collect();
        let goal = Inequality::nonneg(Formula::negate(q.clone()));
        let Verdict::Refutes(m) = decide(&t, &goal, Mode::Basic) else {
            return Err(format!("T_{n} entails 0 <= -Q"));
        };
        let at = m.assignment().clone();
        ensure(holds_all(&t, &at) && value(&q, &at).is_positive(), || format!("T_{n}: bad model {at:?}"))?;
    }
    let name = |i: usize| format!("P{i}");
    let model = PolyModel { assignment: (0..=6).map(|i| (Letter::new(&name(i)), PolyValue::monomial(i))).collect() };
    let mut checks = 0;
    for i in 0..=5 {
        let (pi, next) = (Formula::letter(&name(i)), Formula::letter(&name(i + 1)));
        let upper = poly_eval(&next, &model).map_err(|e| e.to_string())?;
        for r in 1..=1000 {
            let scaled = poly_eval(&Formula::scale(int(r), pi.clone()), &model).map_err(|e| e.to_string())?;
            ensure(poly_leq(&PolyValue::default(), &scaled) && poly_leq(&scaled, &upper), || {
                format!("0 <= {r}P{i} <= P{} fails", i + 1)
            })?;
            checks += 1;
        }
    }
    Ok(format!("T_1..T_50 refuted with verified models, {checks} polynomial bounds hold"))
}

fn random_core_formula(rng: &mut ChaCha8Rng, depth: usize, extended: bool) -> Formula {
    let names = ["P", "Q", "R", "x1", "Long_name2"];
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..8) {
            0 => Formula::Zero,
            1 if extended => Formula::One,
            _ => Formula::letter(names.choose(rng).unwrap()),
        };
    }
    let mut sub = || random_core_formula(rng, depth - 1, extended);
    let (a, b) = (sub(), sub());
    match rng.gen_range(0..3) {
        0 => Formula::add(a, b),
        1 => Formula::meet(a, b),
        _ => {
            let q = Rational::new(rng.gen_range(-30..=30i64).into(), rng.gen_range(1..=7i64).into());
            Formula::scale(q, a)
        }
    }
}

fn parser_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    for n in 0..10_000 {
        let extended = n % 2 == 1;
        let f = random_core_formula(&mut rng, 6, extended);
        let mode = if extended { Mode::Extended } else { Mode::Basic };
        let text = print_formula(&f);
        let back = parse_formula(&text, mode).map_err(|e| format!("`{text}` does not parse: {e}"))?;
        ensure(back == f, || format!("`{text}` parses to a different tree"))?;
    }
    Ok("10000 formulas round-trip exactly".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("soundness fuzz", soundness_fuzz),
        ("finite completeness vs oracle", finite_completeness),
        ("reference examples", reference_examples),
        ("deduction and cut round-trips", transform_round_trips),
        ("farkas engine vs vertex enumeration", farkas_engine),
        ("lukasiewicz bridge", lukasiewicz_bridge),
        ("non-archimedean fixture", non_archimedean),
        ("parser round-trip", parser_round_trip),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failures = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let number = i + 1;
        if !only.is_empty() && !only.contains(&number) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {number} {name}: PASS ({detail}; {secs:.1}s)"),
            Err(why) => {
                failures += 1;
                println!("criterion {number} {name}: FAIL ({why}; {secs:.1}s)");
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
