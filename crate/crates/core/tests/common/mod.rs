//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's solvers; values are recomputed from first principles.

#![allow(dead_code)]

use std::collections::BTreeMap;

use gridcover::{make_grid, Grid, LinearProgram, Rational};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

/// Every origin-avoiding line through two nonzero points of `g`, as its
/// `(a, b)` coefficients in `a·x + b·y = 1`, mapped to the number of grid
/// points on it. Coefficients come from Cramer's rule on each pair.
pub fn brute_force_lines(g: &Grid) -> BTreeMap<(BigRational, BigRational), usize> {
    let pts: Vec<(BigRational, BigRational)> = g.points().iter().map(|p| (p.x.to_big(), p.y.to_big())).collect();
    let mut lines = BTreeMap::new();
    for (i, (px, py)) in pts.iter().enumerate() {
        for (qx, qy) in &pts[i + 1..] {
            let det = px * qy - py * qx;
            if det.is_zero() {
                continue; // collinear with the origin
            }
            let a = (qy - py) / &det;
            let b = (px - qx) / &det;
            lines.entry((a, b)).or_insert(0);
        }
    }
    for ((a, b), count) in lines.iter_mut() {
        *count = pts.iter().filter(|(x, y)| a * x + b * y == BigRational::one()).count();
    }
    lines
}

/// Square grid with integer axis `{-shift, ..., n-1-shift}` on both axes.
pub fn shifted_square_grid(n: usize, shift: i64) -> Grid {
    let axis: Vec<Rational> = (0..n as i64).map(|v| Rational::from(v - shift)).collect();
    make_grid(axis.clone(), axis).expect("shifted axis contains zero")
}

/// Solves the square system `m·x = r` by Gauss–Jordan elimination; `None` if
/// singular.
fn solve_square(mut m: Vec<Vec<BigRational>>, mut r: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = r.len();
    for col in 0..n {
        let piv = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, piv);
        r.swap(col, piv);
        let inv = m[col][col].recip();
        for v in &mut m[col][col..] {
            *v = &*v * &inv;
        }
        r[col] = &r[col] * &inv;
        let (pivot_row, pivot_rhs) = (m[col].clone(), r[col].clone());
        for (row, rhs) in m.iter_mut().zip(r.iter_mut()).enumerate().filter(|(i, _)| *i != col).map(|(_, x)| x) {
            let f = row[col].clone();
            if f.is_zero() {
                continue;
            }
            for (v, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *v -= &f * p;
            }
            *rhs -= &f * &pivot_rhs;
        }
    }
    Some(r)
}

/// Optimum of a bounded, feasible program by enumerating every basic
/// solution: each choice of `num_vars` constraints (rows, lower bounds and
/// upper bounds) held at equality. Returns `None` if no vertex is feasible.
pub fn vertex_enumeration_optimum(p: &LinearProgram) -> Option<BigRational> {
    let nv = p.num_vars();
    let mut cons: Vec<(Vec<BigRational>, BigRational)> =
        p.rows().iter().zip(p.rhs()).map(|(row, b)| (row.iter().map(Rational::to_big).collect(), b.to_big())).collect();
    for j in 0..nv {
        let mut unit = vec![BigRational::zero(); nv];
        unit[j] = BigRational::one();
        cons.push((unit.clone(), p.lower()[j].to_big()));
        if let Some(u) = &p.upper()[j] {
            let neg: Vec<BigRational> = unit.iter().map(|v| -v).collect();
            cons.push((neg, -u.to_big()));
        }
    }
    let c: Vec<BigRational> = p.objective().iter().map(Rational::to_big).collect();
    let mut best: Option<BigRational> = None;
    let mut chosen = Vec::with_capacity(nv);
    subsets(cons.len(), nv, 0, &mut chosen, &mut |idx| {
        let m = idx.iter().map(|&i| cons[i].0.clone()).collect();
        let r = idx.iter().map(|&i| cons[i].1.clone()).collect();
        let Some(x) = solve_square(m, r) else { return };
        let feasible = cons.iter().all(|(row, b)| {
            let lhs: BigRational = row.iter().zip(&x).map(|(a, v)| a * v).sum();
            lhs >= *b
        });
        if feasible {
            let val: BigRational = c.iter().zip(&x).map(|(a, v)| a * v).sum();
            if best.as_ref().is_none_or(|b| val < *b) {
                best = Some(val);
            }
        }
    });
    best
}

fn subsets(n: usize, k: usize, start: usize, chosen: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if chosen.len() == k {
        f(chosen);
        return;
    }
    for i in start..n {
        if n - i < k - chosen.len() {
            break;
        }
        chosen.push(i);
        subsets(n, k, i + 1, chosen, f);
        chosen.pop();
    }
}

/// A random program that is feasible (a random nonnegative point satisfies
/// every row) and bounded (variables with negative cost get upper bounds).
pub fn random_feasible_program(seed: u64, max_vars: usize, max_rows: usize) -> LinearProgram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nv = rng.gen_range(1..=max_vars);
    let nr = rng.gen_range(1..=max_rows);
    let witness: Vec<i64> = (0..nv).map(|_| rng.gen_range(0..=4)).collect();
    let mut rows = Vec::with_capacity(nr);
    let mut rhs = Vec::with_capacity(nr);
    for _ in 0..nr {
        let row: Vec<i64> = (0..nv).map(|_| rng.gen_range(-3..=5)).collect();
        let at_witness: i64 = row.iter().zip(&witness).map(|(a, x)| a * x).sum();
        let slack = rng.gen_range(0..=3);
        let den = rng.gen_range(1..=3);
        rhs.push(Rational::new(at_witness * den - slack, den));
        rows.push(row.into_iter().map(Rational::from).collect());
    }
    let objective: Vec<i64> = (0..nv).map(|_| rng.gen_range(-3..=6)).collect();
    let lower = vec![Rational::zero(); nv];
    let upper = objective
        .iter()
        .zip(&witness)
        .map(|(&c, &x)| (c < 0 || rng.gen_bool(0.2)).then(|| Rational::from(x + rng.gen_range(0..=3))))
        .collect();
    LinearProgram::new(objective.into_iter().map(Rational::from).collect(), rows, rhs)
        .and_then(|p| p.with_bounds(lower, upper))
        .expect("well-formed program")
}

/// Minimum 1-cover of `g` by exhaustive subset enumeration over the
/// brute-force line set. Only practical for a few dozen lines.
pub fn min_single_cover_by_subsets(g: &Grid) -> usize {
    let pts: Vec<(BigRational, BigRational)> = g.points().iter().map(|p| (p.x.to_big(), p.y.to_big())).collect();
    let masks: Vec<u64> = brute_force_lines(g)
        .keys()
        .map(|(a, b)| {
            pts.iter()
                .enumerate()
                .filter(|(_, (x, y))| a * x + b * y == BigRational::one())
                .fold(0u64, |m, (i, _)| m | (1 << i))
        })
        .collect();
    assert!(masks.len() <= 24 && pts.len() < 64, "instance too large for subset enumeration");
    let all = (1u64 << pts.len()) - 1;
    (0u32..1 << masks.len())
        .filter(|sel| masks.iter().enumerate().filter(|(i, _)| sel >> i & 1 == 1).fold(0, |m, (_, v)| m | v) == all)
        .map(|sel| sel.count_ones() as usize)
        .min()
        .expect("the full line set covers every point")
}
