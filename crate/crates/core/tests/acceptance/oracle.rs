//! Reference semantics written from scratch: direct evaluation, linear pieces
//! and vertex enumeration over exact rationals. Nothing here calls the
//! decision procedure or the linear solver under test.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rvl_core::luk::LukFormula;
use rvl_core::{Formula, Inequality, Letter, Rational, Theory};

pub type Point = BTreeMap<Letter, Rational>;

/// Value of `f`; unassigned letters read as 0.
pub fn value(f: &Formula, at: &Point) -> Rational {
    match f {
        Formula::Zero => Rational::zero(),
        Formula::One => Rational::one(),
        Formula::Letter(l) => at.get(l).cloned().unwrap_or_else(Rational::zero),
        Formula::Add(a, b) => value(a, at) + value(b, at),
        Formula::Meet(a, b) => value(a, at).min(value(b, at)),
        Formula::Scale(q, a) => q * value(a, at),
    }
}

pub fn holds(i: &Inequality, at: &Point) -> bool {
    value(&i.lhs, at) <= value(&i.rhs, at)
}

pub fn holds_all(t: &Theory, at: &Point) -> bool {
    t.iter().all(|h| holds(h, at))
}

/// Łukasiewicz value in `[0, 1]`.
pub fn luk_value(f: &LukFormula, at: &Point) -> Rational {
    match f {
        LukFormula::Var(l) => at.get(l).cloned().unwrap_or_else(Rational::zero),
        LukFormula::Not(x) => Rational::one() - luk_value(x, at),
        LukFormula::Ominus(x, y) => (luk_value(x, at) - luk_value(y, at)).max(Rational::zero()),
        LukFormula::Half(x) => luk_value(x, at) / Rational::from_integer(2.into()),
    }
}

/// Affine map as `[c₁, …, cₙ, constant]` over a fixed letter order.
pub type Affine = Vec<Rational>;

fn affine_unit(n: usize, k: Option<usize>) -> Affine {
    let mut v = vec![Rational::zero(); n + 1];
    match k {
        Some(k) => v[k] = Rational::one(),
        None => v[n] = Rational::one(),
    }
    v
}

pub fn affine_add(a: &Affine, b: &Affine) -> Affine {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn affine_scale(q: &Rational, a: &Affine) -> Affine {
    a.iter().map(|x| q * x).collect()
}

pub fn affine_eval(a: &Affine, x: &[Rational]) -> Rational {
    let n = x.len();
    a[..n].iter().zip(x).map(|(c, v)| c * v).sum::<Rational>() + &a[n]
}

/// All linear pieces `f` can take (a superset), recording every meet
/// breakpoint `a − b = 0` into `cuts`.
pub fn pieces(f: &Formula, order: &[Letter], cuts: &mut Vec<Affine>) -> Vec<Affine> {
    let n = order.len();
    let mut out = match f {
        Formula::Zero => vec![vec![Rational::zero(); n + 1]],
        Formula::One => vec![affine_unit(n, None)],
        Formula::Letter(l) => vec![affine_unit(n, order.iter().position(|m| m == l))],
        Formula::Scale(q, a) => pieces(a, order, cuts).iter().map(|p| affine_scale(q, p)).collect(),
        Formula::Add(a, b) => {
            let (pa, pb) = (pieces(a, order, cuts), pieces(b, order, cuts));
            pa.iter().flat_map(|x| pb.iter().map(move |y| affine_add(x, y))).collect()
        }
        Formula::Meet(a, b) => {
            let (pa, pb) = (pieces(a, order, cuts), pieces(b, order, cuts));
            for x in &pa {
                for y in &pb {
                    cuts.push(affine_add(x, &affine_scale(&-Rational::one(), y)));
                }
            }
            pa.into_iter().chain(pb).collect()
        }
    };
    out.sort();
    out.dedup();
    out
}

/// Scale so the first nonzero letter coefficient is 1; `None` for constants.
fn normalized(h: &Affine) -> Option<Affine> {
    let n = h.len() - 1;
    let lead = h[..n].iter().find(|c| !c.is_zero())?.clone();
    Some(h.iter().map(|c| c / &lead).collect())
}

/// Solve the square system `rows·x = −constants`; `None` unless unique.
pub fn solve_square(rows: &[&Affine], n: usize) -> Option<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> =
        rows.iter().map(|r| r[..n].iter().cloned().chain([-r[n].clone()]).collect()).collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v = &*v / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let k = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (v, pv) in m[r].iter_mut().zip(&pivot_row) {
                    *v = &*v - &k * pv;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Every `k`-subset of `0..len`, in lexicographic order.
pub fn subsets(len: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    fn go(start: usize, len: usize, k: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            visit(cur);
            return;
        }
        for i in start..len {
            if len - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, len, k, cur, visit);
            cur.pop();
        }
    }
    go(0, len, k, &mut Vec::with_capacity(k), &mut visit);
}

/// Vertices of the arrangement of `planes` together with the faces of the
/// box `[−bound, bound]ⁿ`, restricted to the box.
pub fn arrangement_vertices(planes: &[Affine], n: usize, bound: &Rational) -> Vec<Vec<Rational>> {
    let mut all: Vec<Affine> = planes.iter().filter_map(normalized).collect();
    for k in 0..n {
        let mut face = affine_unit(n, Some(k));
        face[n] = -bound.clone();
        all.push(face.clone());
        face[n] = bound.clone();
        all.push(face);
    }
    all.sort();
    all.dedup();
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    subsets(all.len(), n, |idx| {
        let rows: Vec<&Affine> = idx.iter().map(|&i| &all[i]).collect();
        if let Some(x) = solve_square(&rows, n) {
            if x.iter().all(|v| v.abs() <= *bound) {
                out.push(x);
            }
        }
    });
    out.sort();
    out.dedup();
    out
}

pub fn point(order: &[Letter], x: &[Rational]) -> Point {
    order.iter().cloned().zip(x.iter().cloned()).collect()
}

/// Rationals in `[lo, hi]` with denominator at most `max_den`, sorted.
pub fn grid(lo: i64, hi: i64, max_den: i64) -> Vec<Rational> {
    let mut out: Vec<Rational> = (1..=max_den)
        .flat_map(|d| (lo * d..=hi * d).map(move |k| Rational::new(k.into(), d.into())))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Exact search for a point of the box satisfying `t` and violating `goal`.
/// Every formula is continuous and piecewise linear, so if the violation set
/// is nonempty the closure of one of its cells has a vertex where `t` holds
/// and the goal fails strictly; those vertices are all among the arrangement
/// vertices of every breakpoint, every piece of every slack, and the box.
pub fn vertex_countermodel(t: &Theory, goal: &Inequality, order: &[Letter]) -> Option<Point> {
    let n = order.len();
    let mut planes = Vec::new();
    let mut slacks: Vec<Formula> = t.iter().map(Inequality::slack).collect();
    slacks.push(goal.slack());
    for s in &slacks {
        let ps = pieces(s, order, &mut planes);
        planes.extend(ps);
    }
    arrangement_vertices(&planes, n, &Rational::one())
        .into_iter()
        .map(|x| point(order, &x))
        .find(|p| holds_all(t, p) && !holds(goal, p))
}
