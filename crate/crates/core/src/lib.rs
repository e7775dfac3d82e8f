//! Real-valued propositional logic: formulas, exact semantics, a decision
//! procedure with Farkas certificates, a Hilbert-style proof kernel with
//! constructive proof transformers, and a Łukasiewicz front-end.

pub mod decide;
pub mod farkas;
pub mod formula;
pub mod linear;
pub mod luk;
pub mod proofs;
pub mod regions;
pub mod semantics;
pub mod syntax;

pub use decide::{decide, BranchCertificate, Verdict};
pub use farkas::{
    entails_linear, verify_certificate, Certificate, FarkasCertificate, InfeasibilityCertificate, LinearSystem,
    LinearVerdict,
};
pub use formula::{letters_of, Formula, Inequality, Letter, Mode, Rational, Theory};
pub use linear::LinearForm;
pub use luk::{luk_valid, parse_luk, translate, LukFormula, LukVerdict};
pub use proofs::{check, cut_eliminate, deduction_transform, Derivation, Fragment, ProofStep, Rule};
pub use regions::{decompose, GuardedPiece, RegionDecomposition};
pub use semantics::{eval, Model, PolyModel, PolyValue};
pub use syntax::{parse_formula, parse_inequality, print_formula, print_inequality};
