use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use rvl_core::decide::{consistent, decide_with, Consistency, DecideOptions};
use rvl_core::farkas::Certificate;
use rvl_core::linear::linearize;
use rvl_core::luk::{luk_valid, parse_luk, Convention, LukVerdict};
use rvl_core::proofs::{cut_eliminate, deduction_transform, parse_proof_file, print_proof_file, ProofFile, TransformError};
use rvl_core::regions::{decompose, decompose_pruned};
use rvl_core::semantics::{eval, Model};
use rvl_core::syntax::{parse_formula, parse_inequality, parse_model_file, parse_theory_file, print_formula};
use rvl_core::{letters_of, Fragment, LinearForm, Mode, Verdict};

#[derive(Parser)]
#[command(name = "rvl", version, about = "Decide, evaluate and check proofs in real-valued logic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a finite theory entails an inequality.
    Decide {
        #[arg(long)]
        theory: Option<PathBuf>,
        #[arg(long)]
        goal: String,
        #[arg(long)]
        extended: bool,
        /// Print one certificate line per branch.
        #[arg(long)]
        certificate: bool,
        /// Print the countermodel when not entailed.
        #[arg(long)]
        countermodel: bool,
        /// Skip branches with empty guard regions.
        #[arg(long)]
        prune: bool,
    },
    /// Evaluate a formula in a model.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        extended: bool,
    },
    /// Linear normal form of a meet-free formula.
    Normalize {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        extended: bool,
    },
    /// Split a formula into guarded linear pieces.
    Regions {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        extended: bool,
        #[arg(long)]
        prune: bool,
    },
    /// Check a proof file.
    CheckProof {
        file: PathBuf,
        /// Check against this fragment instead of the declared one.
        #[arg(long, value_enum)]
        fragment: Option<FragmentArg>,
    },
    /// Discharge a hypothesis, or eliminate a cut between two proofs.
    Transform {
        file: PathBuf,
        /// 1-based index of the hypothesis `0 <= theta` to discharge.
        #[arg(long, conflicts_with = "cut", required_unless_present = "cut")]
        hyp: Option<usize>,
        /// Proof of the same conclusion from the negated cut formula.
        #[arg(long)]
        cut: Option<PathBuf>,
        /// Write the resulting proof here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Consistency of a theory.
    Consistent {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        extended: bool,
    },
    /// Validity of a Łukasiewicz or continuous-logic formula.
    Luk {
        #[arg(long)]
        formula: String,
        #[arg(long, value_enum, default_value = "luk")]
        convention: ConventionArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FragmentArg {
    Mp,
    Lin,
    Full,
}

impl From<FragmentArg> for Fragment {
    fn from(f: FragmentArg) -> Self {
        match f {
            FragmentArg::Mp => Fragment::Mp,
            FragmentArg::Lin => Fragment::Lin,
            FragmentArg::Full => Fragment::Full,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Luk,
    Cont,
}

/// Report text and exit status of a completed run.
struct Report {
    text: String,
    positive: bool,
}

impl Report {
    fn new(positive: bool) -> Self {
        Report { text: String::new(), positive }
    }

    fn line(mut self, s: impl AsRef<str>) -> Self {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
        self
    }
}

fn mode_of(extended: bool) -> Mode {
    if extended {
        Mode::Extended
    } else {
        Mode::Basic
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn print_lf(lf: &LinearForm) -> String {
    let order: Vec<_> = lf.letters().cloned().collect();
    print_formula(&lf.to_formula(&order))
}

fn load_proof(path: &Path) -> Result<ProofFile, String> {
    parse_proof_file(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cli: Cli) -> Result<Report, String> {
    match cli.command {
        Command::Decide { theory, goal, extended, certificate, countermodel, prune } => {
            let mode = mode_of(extended);
            let t = match theory {
                Some(p) => parse_theory_file(&read(&p)?, mode).map_err(|e| format!("{}: {e}", p.display()))?,
                None => Default::default(),
            };
            let goal = parse_inequality(&goal, mode).map_err(|e| format!("goal: {e}"))?;
            match decide_with(&t, &goal, mode, DecideOptions { prune }) {
                Verdict::Entails(branches) => {
                    let mut r = Report::new(true).line("RESULT entailed");
                    if certificate {
                        for b in branches {
                            r = match &b.certificate {
                                Certificate::Farkas(_) => r.line(format!("BRANCH <{}> {}", b.signs, b.certificate)),
                                Certificate::Infeasible(_) => {
                                    r.line(format!("BRANCH <{}> INFEASIBLE {}", b.signs, b.certificate))
                                }
                            };
                        }
                    }
                    Ok(r)
                }
                Verdict::Refutes(m) => {
                    let r = Report::new(false).line("RESULT not-entailed");
                    Ok(if countermodel { r.line(format!("MODEL {m}")) } else { r })
                }
            }
        }
        Command::Eval { model, formula, extended } => {
            let mode = mode_of(extended);
            let values = parse_model_file(&read(&model)?).map_err(|e| format!("{}: {e}", model.display()))?;
            let m = Model::new(values, mode).map_err(|e| e.to_string())?;
            let f = parse_formula(&formula, mode).map_err(|e| format!("formula: {e}"))?;
            let v = eval(&f, &m).map_err(|e| e.to_string())?;
            Ok(Report::new(true).line(format!("VALUE {v}")))
        }
        Command::Normalize { formula, extended } => {
            let f = parse_formula(&formula, mode_of(extended)).map_err(|e| format!("formula: {e}"))?;
            let lf = linearize(&f).map_err(|e| format!("{e}; use the regions subcommand for formulas with meets"))?;
            Ok(Report::new(true).line(format!("VALUE {}", print_lf(&lf))))
        }
        Command::Regions { formula, extended, prune } => {
            let f = parse_formula(&formula, mode_of(extended)).map_err(|e| format!("formula: {e}"))?;
            let d = if prune { decompose_pruned(&f) } else { decompose(&f) };
            let order = letters_of(&f);
            let show = |lf: &LinearForm| print_formula(&lf.to_formula(&order));
            let mut r = Report::new(true).line(format!("RESULT {} pieces", d.pieces.len()));
            for p in &d.pieces {
                let guards = if p.guards.is_empty() {
                    "(none)".to_string()
                } else {
                    p.guards.iter().map(|g| format!("0 <= {}", show(g))).collect::<Vec<_>>().join("; ")
                };
                r = r.line(format!("GUARDS {guards} => VALUE {}", show(&p.value)));
            }
            Ok(r)
        }
        Command::CheckProof { file, fragment } => {
            let mut pf = load_proof(&file)?;
            if let Some(f) = fragment {
                pf.derivation.fragment = f.into();
            }
            Ok(match pf.check() {
                Ok(()) => Report::new(true).line("PROOF ok"),
                Err(rej) => Report::new(false).line(format!("PROOF rejected {rej}")),
            })
        }
        Command::Transform { file, hyp, cut, output } => {
            let first = load_proof(&file)?;
            if let Err(rej) = first.check() {
                return Ok(Report::new(false).line(format!("PROOF rejected {}: {rej}", file.display())));
            }
            let (head, derivation) = if let Some(other) = cut {
                let second = load_proof(&other)?;
                if let Err(rej) = second.check() {
                    return Ok(Report::new(false).line(format!("PROOF rejected {}: {rej}", other.display())));
                }
                let d = cut_eliminate(&first.derivation, &second.derivation).map_err(describe)?;
                ("RESULT cut eliminated".to_string(), d)
            } else {
                let k = hyp.expect("clap enforces --hyp or --cut");
                if k == 0 {
                    return Err("hypotheses are numbered from 1".into());
                }
                let out = deduction_transform(&first.derivation, k - 1).map_err(describe)?;
                (format!("RESULT r = {}", out.r), out.derivation)
            };
            let text = print_proof_file(&derivation);
            let r = Report::new(true).line(head);
            match output {
                Some(path) => {
                    fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?;
                    Ok(r)
                }
                None => {
                    let mut r = r;
                    r.text.push_str(&text);
                    Ok(r)
                }
            }
        }
        Command::Consistent { theory, extended } => {
            let mode = mode_of(extended);
            let t = parse_theory_file(&read(&theory)?, mode).map_err(|e| format!("{}: {e}", theory.display()))?;
            Ok(match consistent(&t, mode) {
                Consistency::Extended { witness: Some(m), .. } => {
                    Report::new(true).line("RESULT consistent").line(format!("MODEL {m}"))
                }
                Consistency::Extended { witness: None, certificates } => {
                    let mut r = Report::new(false).line("RESULT inconsistent");
                    for b in certificates {
                        r = r.line(format!("BRANCH <{}> INFEASIBLE {}", b.signs, b.certificate));
                    }
                    r
                }
                Consistency::Basic { forced_zero, nonzero_witness } => {
                    let mut r = Report::new(true).line("RESULT consistent");
                    let mut forced = String::new();
                    for (l, z) in &forced_zero {
                        if *z {
                            let _ = write!(forced, " {l}");
                        }
                    }
                    r = r.line(format!("FORCED-ZERO{}", if forced.is_empty() { " (none)" } else { &forced }));
                    match nonzero_witness {
                        Some(m) => r.line(format!("MODEL {m}")),
                        None => r.line("MODEL constant 0 only"),
                    }
                }
            })
        }
        Command::Luk { formula, convention } => {
            let f = parse_luk(&formula).map_err(|e| format!("formula: {e}"))?;
            let convention = match convention {
                ConventionArg::Luk => Convention::Lukasiewicz,
                ConventionArg::Cont => Convention::Continuous,
            };
            Ok(match luk_valid(&f, convention) {
                LukVerdict::Valid => Report::new(true).line("RESULT valid"),
                LukVerdict::Invalid(m) => Report::new(false).line("RESULT invalid").line(format!("MODEL {m}")),
            })
        }
    }
}

fn describe(e: TransformError) -> String {
    e.to_string()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(r) => {
            print!("{}", r.text);
            ExitCode::from(if r.positive { 0 } else { 1 })
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
