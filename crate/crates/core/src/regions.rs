//! Sign case-splitting of formulas into guarded linear pieces.

use crate::farkas::{feasible, LinearSystem};
use crate::formula::Formula;
use crate::linear::LinearForm;

/// A linear value valid wherever every guard is nonnegative. `signs` records
/// the branch taken at each guard, `+` for `0 ≤ φ_ε − ξ_δ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuardedPiece {
    pub guards: Vec<LinearForm>,
    pub signs: String,
    pub value: LinearForm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionDecomposition {
    pub source: Formula,
    pub pieces: Vec<GuardedPiece>,
}

/// A branch of the simultaneous decomposition of several formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointPiece {
    pub guards: Vec<LinearForm>,
    pub signs: String,
    pub values: Vec<LinearForm>,
}

fn leaf(value: LinearForm) -> Vec<GuardedPiece> {
    vec![GuardedPiece { guards: Vec::new(), signs: String::new(), value }]
}

fn pieces(f: &Formula) -> Vec<GuardedPiece> {
    match f {
        Formula::Zero => leaf(LinearForm::zero()),
        Formula::One => leaf(LinearForm::constant(num_traits::One::one())),
        Formula::Letter(l) => leaf(LinearForm::letter(l.clone())),
        Formula::Scale(q, a) => pieces(a)
            .into_iter()
            .map(|p| GuardedPiece { value: p.value.scale(q), ..p })
            .collect(),
        Formula::Add(a, b) => {
            let right = pieces(b);
            pieces(a)
                .into_iter()
                .flat_map(|x| {
                    right.iter().map(move |y| GuardedPiece {
                        guards: x.guards.iter().chain(&y.guards).cloned().collect(),
                        signs: format!("{}{}", x.signs, y.signs),
                        value: x.value.add(&y.value),
                    })
                })
                .collect()
        }
        Formula::Meet(a, b) => {
            let right = pieces(b);
            let mut out = Vec::new();
            for x in pieces(a) {
                for y in &right {
                    let guards: Vec<LinearForm> = x.guards.iter().chain(&y.guards).cloned().collect();
                    let signs = format!("{}{}", x.signs, y.signs);
                    let diff = x.value.sub(&y.value);
                    let mut plus = guards.clone();
                    plus.push(diff.clone());
                    out.push(GuardedPiece { guards: plus, signs: format!("{signs}+"), value: y.value.clone() });
                    let mut minus = guards;
                    minus.push(diff.neg());
                    out.push(GuardedPiece { guards: minus, signs: format!("{signs}-"), value: x.value.clone() });
                }
            }
            out
        }
    }
}

pub fn decompose(f: &Formula) -> RegionDecomposition {
    RegionDecomposition { source: f.clone(), pieces: pieces(f) }
}

fn guards_feasible(guards: &[LinearForm]) -> bool {
    feasible(&LinearSystem::new(guards.to_vec())).is_ok()
}

/// Like [`decompose`] but drops pieces whose guard region is empty.
pub fn decompose_pruned(f: &Formula) -> RegionDecomposition {
    let mut d = decompose(f);
    d.pieces.retain(|p| guards_feasible(&p.guards));
    d
}

/// 2^(number of meets), saturating.
pub fn piece_count_bound(f: &Formula) -> u128 {
    1u128.checked_shl(f.meet_count() as u32).unwrap_or(u128::MAX)
}

/// Decompose all formulas together; branches are ordered depth-first with the
/// first formula outermost. With `prune`, branches with empty guard regions
/// are cut as soon as they appear.
pub fn decompose_joint(formulas: &[Formula], prune: bool) -> Vec<JointPiece> {
    let mut acc = vec![JointPiece { guards: Vec::new(), signs: String::new(), values: Vec::new() }];
    for f in formulas {
        let ps = pieces(f);
        let mut next = Vec::with_capacity(acc.len() * ps.len());
        for j in &acc {
            for p in &ps {
                let mut guards = j.guards.clone();
                guards.extend(p.guards.iter().cloned());
                if prune && !p.guards.is_empty() && !guards_feasible(&guards) {
                    continue;
                }
                let mut values = j.values.clone();
                values.push(p.value.clone());
                next.push(JointPiece { guards, signs: format!("{}{}", j.signs, p.signs), values });
            }
        }
        acc = next;
    }
    acc
}
