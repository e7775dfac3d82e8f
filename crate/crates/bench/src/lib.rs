//! Fixed workloads shared by the benchmarks.

use rvl_core::syntax::{parse_formula, parse_inequality};
use rvl_core::linear::linearize;
use rvl_core::{Formula, Inequality, LinearForm, LinearSystem, Mode, Theory};

/// `Q ≤ P₁`, `2P₁ ≤ P₂`, …: a chain whose goal needs every hypothesis.
pub fn chain_theory(n: usize) -> (Theory, Inequality) {
    let mut hyps = vec![parse_inequality("Q <= P1", Mode::Basic).unwrap()];
    for i in 1..n {
        let text = format!("2P{i} <= P{}", i + 1);
        hyps.push(parse_inequality(&text, Mode::Basic).unwrap());
    }
    hyps.push(parse_inequality("0 <= Q", Mode::Basic).unwrap());
    let goal = parse_inequality(&format!("0 <= P{n}"), Mode::Basic).unwrap();
    (Theory::new(hyps), goal)
}

/// A left-nested term over three letters built from `steps` alternating
/// meets and sums.
pub fn nested_lattice(steps: usize) -> Formula {
    let letters = ["P", "Q", "R"];
    let mut f = Formula::letter("P");
    for i in 0..steps {
        let g = Formula::letter(letters[(i + 1) % 3]);
        f = if i % 2 == 0 { Formula::meet(f, g) } else { Formula::add(f, g) };
    }
    f
}

/// A dense feasible system over `vars` letters together with a target it
/// entails.
pub fn dense_system(vars: usize) -> (LinearSystem, LinearForm) {
    let names: Vec<String> = (0..vars).map(|i| format!("X{i}")).collect();
    let mut rows = Vec::new();
    for (i, x) in names.iter().enumerate() {
        rows.push(form(x));
        let y = &names[(i + 1) % vars];
        rows.push(form(&format!("{}{x} - {y}", i + 2)));
    }
    let target = form(&names.join(" + "));
    (LinearSystem::new(rows), target)
}

fn form(text: &str) -> LinearForm {
    linearize(&parse_formula(text, Mode::Basic).unwrap()).unwrap()
}
