//! Line-oriented proof files.
//!
//! ```text
//! mode basic
//! fragment lin
//! hyp 1: 2Q <= P
//! 1: hyp 1 ==> 2Q <= P
//! 2: axiom a14.le [phi := P; psi := Q] ==> P /\ Q <= Q
//! 3: r2 2 r=1 xi=-Q ==> 1(P /\ Q) + -Q <= 1Q + -Q
//! ```
//!
//! Step and hypothesis numbers are 1-based and consecutive.

use std::fmt::Write as _;

use thiserror::Error;

use super::check::{check, Rejection, RejectionReason};
use super::{AxiomId, Derivation, Dir, Fragment, ProofStep, Rule, Substitution};
use crate::formula::{Formula, Mode, Theory};
use crate::syntax::{parse_formula, parse_inequality, parse_rational, print_formula, print_inequality, print_rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ProofFileError {
    pub line: usize,
    pub message: String,
}

/// A parsed proof file together with the source line of every hypothesis
/// and step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofFile {
    pub derivation: Derivation,
    pub hyp_lines: Vec<usize>,
    pub step_lines: Vec<usize>,
}

impl ProofFile {
    /// Check the derivation, reporting rejections by source line.
    pub fn check(&self) -> Result<(), Rejection> {
        check(&self.derivation).map_err(|mut r| {
            r.line = match (&r.reason, r.step) {
                (RejectionReason::TheoryMode(k), _) => self.hyp_lines.get(k - 1).copied(),
                (_, 0) => None,
                (_, n) => self.step_lines.get(n - 1).copied(),
            };
            r
        })
    }
}

fn err(line: usize, message: impl Into<String>) -> ProofFileError {
    ProofFileError { line, message: message.into() }
}

fn number(text: &str, line: usize, what: &str) -> Result<usize, ProofFileError> {
    text.trim()
        .parse::<usize>()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| err(line, format!("expected a positive {what} number, found {text:?}")))
}

fn axiom_id(text: &str, line: usize) -> Result<AxiomId, ProofFileError> {
    let bad = || err(line, format!("bad axiom name {text:?}"));
    let rest = text.strip_prefix('a').ok_or_else(bad)?;
    let (num, dir) = rest.split_once('.').ok_or_else(bad)?;
    let number: u8 = num.parse().map_err(|_| bad())?;
    let dir = match dir {
        "le" => Dir::Le,
        "ge" => Dir::Ge,
        _ => return Err(bad()),
    };
    Ok(AxiomId { number, dir })
}

fn substitution(text: &str, mode: Mode, line: usize) -> Result<Substitution, ProofFileError> {
    let mut sub = Substitution::new();
    for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (var, value) = part
            .split_once(":=")
            .ok_or_else(|| err(line, format!("expected X := value, found {part:?}")))?;
        let (var, value) = (var.trim(), value.trim());
        let formula = || parse_formula(value, mode).map_err(|e| err(line, e.to_string()));
        let scalar = || parse_rational(value).map_err(|e| err(line, e.to_string()));
        let dup = || err(line, format!("metavariable {var} given twice"));
        match var {
            "phi" if sub.phi.is_none() => sub.phi = Some(formula()?),
            "psi" if sub.psi.is_none() => sub.psi = Some(formula()?),
            "xi" if sub.xi.is_none() => sub.xi = Some(formula()?),
            "r" if sub.r.is_none() => sub.r = Some(scalar()?),
            "s" if sub.s.is_none() => sub.s = Some(scalar()?),
            "phi" | "psi" | "xi" | "r" | "s" => return Err(dup()),
            other => return Err(err(line, format!("unknown metavariable {other}"))),
        }
    }
    Ok(sub)
}

fn step_ref(text: &str, line: usize, count: usize) -> Result<usize, ProofFileError> {
    let n = number(text, line, "step")?;
    if n > count {
        return Err(err(line, format!("step {n} refers forward")));
    }
    Ok(n - 1)
}

fn keyed<'a>(text: &'a str, key: &str, line: usize) -> Result<&'a str, ProofFileError> {
    text.trim()
        .strip_prefix(key)
        .ok_or_else(|| err(line, format!("expected {key}")))
}

fn parse_rule(body: &str, mode: Mode, line: usize, count: usize) -> Result<Rule, ProofFileError> {
    let body = body.trim();
    let (name, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
    let rest = rest.trim();
    let words: Vec<&str> = rest.split_whitespace().collect();
    match name {
        "hyp" => Ok(Rule::Hyp(number(rest, line, "hypothesis")? - 1)),
        "axiom" => {
            let (id, tail) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
            let id = axiom_id(id, line)?;
            let tail = tail.trim();
            let inner = tail
                .strip_prefix('[')
                .and_then(|t| t.strip_suffix(']'))
                .ok_or_else(|| err(line, "expected [X := value; ...]"))?;
            Ok(Rule::Axiom(id, substitution(inner, mode, line)?))
        }
        "r1" if words.len() == 2 => Ok(Rule::R1(step_ref(words[0], line, count)?, step_ref(words[1], line, count)?)),
        "r3" if words.len() == 1 => Ok(Rule::R3(step_ref(words[0], line, count)?)),
        "r2" => {
            let (from, tail) = rest.split_once(char::is_whitespace).ok_or_else(|| err(line, "r2 needs r= and xi="))?;
            let (r, xi) = tail.trim().split_once(char::is_whitespace).ok_or_else(|| err(line, "r2 needs xi="))?;
            let r = parse_rational(keyed(r, "r=", line)?).map_err(|e| err(line, e.to_string()))?;
            let xi = parse_formula(keyed(xi, "xi=", line)?, mode).map_err(|e| err(line, e.to_string()))?;
            Ok(Rule::R2 { from: step_ref(from, line, count)?, r, xi })
        }
        "r4" => {
            let mut parts = rest.splitn(3, char::is_whitespace);
            let (le, ge, xi) = match (parts.next(), parts.next(), parts.next()) {
                (Some(a), Some(b), Some(c)) => (a, b, c),
                _ => return Err(err(line, "r4 needs two steps and xi=")),
            };
            let xi = parse_formula(keyed(xi, "xi=", line)?, mode).map_err(|e| err(line, e.to_string()))?;
            Ok(Rule::R4 { le: step_ref(le, line, count)?, ge: step_ref(ge, line, count)?, xi })
        }
        "r1" | "r3" => Err(err(line, format!("wrong number of arguments for {name}"))),
        other => Err(err(line, format!("unknown rule {other:?}"))),
    }
}

pub fn parse_proof_file(text: &str) -> Result<ProofFile, ProofFileError> {
    let mut mode = None;
    let mut fragment = None;
    let mut theory = Theory::default();
    let (mut hyp_lines, mut step_lines) = (Vec::new(), Vec::new());
    let mut steps = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(m) = content.strip_prefix("mode ") {
            if mode.is_some() || !theory.is_empty() || !steps.is_empty() {
                return Err(err(line, "mode must be declared once, first"));
            }
            mode = Some(match m.trim() {
                "basic" => Mode::Basic,
                "extended" => Mode::Extended,
                other => return Err(err(line, format!("unknown mode {other:?}"))),
            });
            continue;
        }
        if let Some(fr) = content.strip_prefix("fragment ") {
            if fragment.is_some() {
                return Err(err(line, "fragment declared twice"));
            }
            fragment = Some(fr.trim().parse::<Fragment>().map_err(|e| err(line, e))?);
            continue;
        }
        let mode = mode.ok_or_else(|| err(line, "missing mode declaration"))?;
        if let Some(h) = content.strip_prefix("hyp ").filter(|_| steps.is_empty()) {
            let (k, ineq) = h.split_once(':').ok_or_else(|| err(line, "expected hyp <k>: <inequality>"))?;
            if number(k, line, "hypothesis")? != theory.len() + 1 {
                return Err(err(line, "hypotheses must be numbered consecutively from 1"));
            }
            let ineq = parse_inequality(ineq, mode).map_err(|e| err(line, e.to_string()))?;
            theory.push(ineq);
            hyp_lines.push(line);
            continue;
        }
        let (n, body) = content.split_once(':').ok_or_else(|| err(line, "expected <n>: <rule> ==> <inequality>"))?;
        if number(n, line, "step")? != steps.len() + 1 {
            return Err(err(line, "steps must be numbered consecutively from 1"));
        }
        let (rule, stated) = body.split_once("==>").ok_or_else(|| err(line, "missing ==> conclusion"))?;
        let rule = parse_rule(rule, mode, line, steps.len())?;
        let conclusion = parse_inequality(stated, mode).map_err(|e| err(line, e.to_string()))?;
        steps.push(ProofStep { rule, conclusion });
        step_lines.push(line);
    }
    let last = text.lines().count().max(1);
    let mode = mode.ok_or_else(|| err(last, "missing mode declaration"))?;
    let fragment = fragment.ok_or_else(|| err(last, "missing fragment declaration"))?;
    Ok(ProofFile {
        derivation: Derivation { theory, mode, fragment, steps },
        hyp_lines,
        step_lines,
    })
}

fn print_substitution(sub: &Substitution) -> String {
    let formulas = [("phi", &sub.phi), ("psi", &sub.psi), ("xi", &sub.xi)];
    let scalars = [("r", &sub.r), ("s", &sub.s)];
    let parts: Vec<String> = formulas
        .iter()
        .filter_map(|(k, v)| v.as_ref().map(|f| format!("{k} := {}", print_formula(f))))
        .chain(
            scalars
                .iter()
                .filter_map(|(k, v)| v.as_ref().map(|q| format!("{k} := {}", print_rational(q)))),
        )
        .collect();
    parts.join("; ")
}

fn print_rule(rule: &Rule) -> String {
    let xi = |f: &Formula| print_formula(f);
    match rule {
        Rule::Hyp(k) => format!("hyp {}", k + 1),
        Rule::Axiom(id, sub) => format!("axiom {id} [{}]", print_substitution(sub)),
        Rule::R1(i, j) => format!("r1 {} {}", i + 1, j + 1),
        Rule::R2 { from, r, xi: x } => format!("r2 {} r={} xi={}", from + 1, print_rational(r), xi(x)),
        Rule::R3(i) => format!("r3 {}", i + 1),
        Rule::R4 { le, ge, xi: x } => format!("r4 {} {} xi={}", le + 1, ge + 1, xi(x)),
    }
}

pub fn print_proof_file(d: &Derivation) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "mode {}", d.mode);
    let _ = writeln!(out, "fragment {}", d.fragment);
    for (k, h) in d.theory.iter().enumerate() {
        let _ = writeln!(out, "hyp {}: {}", k + 1, print_inequality(h));
    }
    for (n, s) in d.steps.iter().enumerate() {
        let _ = writeln!(out, "{}: {} ==> {}", n + 1, print_rule(&s.rule), print_inequality(&s.conclusion));
    }
    out
}
