//! Exact two-phase primal simplex over [`Rational`].
//!
//! Programs have the form `minimize c·x` subject to `A x >= b` and
//! `l <= x <= u` with `l >= 0` and optional `u`. Pricing is Dantzig's rule
//! with a fallback to Bland's smallest-index rule on degenerate stalls, which
//! keeps pivot counts low while still terminating on every input.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    objective: Vec<Rational>,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    lower: Vec<Rational>,
    upper: Vec<Option<Rational>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal objective value; zero unless `status` is `Optimal`.
    pub value: Rational,
    /// One entry per variable.
    pub primal: Vec<Rational>,
    /// One nonnegative multiplier per `>=` row.
    pub dual: Vec<Rational>,
}

impl LpSolution {
    fn without_optimum(status: LpStatus) -> LpSolution {
        LpSolution { status, value: Rational::zero(), primal: Vec::new(), dual: Vec::new() }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

impl LinearProgram {
    /// `minimize objective·x` s.t. `rows[i]·x >= rhs[i]`, `x >= 0`.
    pub fn new(objective: Vec<Rational>, rows: Vec<Vec<Rational>>, rhs: Vec<Rational>) -> Result<Self> {
        let nv = objective.len();
        if rows.len() != rhs.len() {
            return Err(Error::DimensionMismatch(format!("{} rows but {} rhs entries", rows.len(), rhs.len())));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != nv) {
            return Err(Error::DimensionMismatch(format!("row {i} has {} entries, expected {nv}", r.len())));
        }
        Ok(LinearProgram { objective, rows, rhs, lower: vec![Rational::zero(); nv], upper: vec![None; nv] })
    }

    /// Replaces the variable bounds. Lower bounds must be nonnegative.
    pub fn with_bounds(mut self, lower: Vec<Rational>, upper: Vec<Option<Rational>>) -> Result<Self> {
        let nv = self.num_vars();
        if lower.len() != nv || upper.len() != nv {
            return Err(Error::DimensionMismatch(format!(
                "bounds have lengths {}/{}, expected {nv}",
                lower.len(),
                upper.len()
            )));
        }
        if lower.iter().any(Rational::is_negative) {
            return Err(Error::BadParameter("negative lower bound".into()));
        }
        self.lower = lower;
        self.upper = upper;
        Ok(self)
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.rhs
    }

    pub fn lower(&self) -> &[Rational] {
        &self.lower
    }

    pub fn upper(&self) -> &[Option<Rational>] {
        &self.upper
    }

    pub fn evaluate(&self, x: &[Rational]) -> Rational {
        dot(&self.objective, x)
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    reduced: Vec<Rational>,
    value: Rational,
    /// Columns at or beyond this index are never allowed to enter.
    enter_limit: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, q: usize) {
        let mut prow = std::mem::take(&mut self.rows[r]);
        let piv = prow[q].clone();
        if piv != Rational::one() {
            for v in prow.iter_mut().filter(|v| !v.is_zero()) {
                *v /= &piv;
            }
            self.rhs[r] /= &piv;
        }
        let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
        let prhs = self.rhs[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[q].is_zero() {
                continue;
            }
            let f = row[q].clone();
            for &j in &nz {
                row[j].sub_mul(&f, &prow[j]);
            }
            self.rhs[i].sub_mul(&f, &prhs);
        }
        if !self.reduced[q].is_zero() {
            let f = self.reduced[q].clone();
            for &j in &nz {
                self.reduced[j].sub_mul(&f, &prow[j]);
            }
            self.value += &f * &prhs;
        }
        self.rows[r] = prow;
        self.basis[r] = q;
    }

    /// Bland's rule: the lowest-index improving column.
    fn entering_bland(&self) -> Option<usize> {
        (0..self.enter_limit).find(|&j| self.reduced[j].is_negative())
    }

    /// Dantzig's rule: the most negative reduced cost, lowest index on ties.
    fn entering_dantzig(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for j in 0..self.enter_limit {
            if self.reduced[j].is_negative() && best.is_none_or(|b| self.reduced[j] < self.reduced[b]) {
                best = Some(j);
            }
        }
        best
    }

    fn leaving(&self, q: usize) -> Option<usize> {
        let mut best: Option<(usize, Rational)> = None;
        for (i, row) in self.rows.iter().enumerate() {
            if !row[q].is_positive() {
                continue;
            }
            let ratio = &self.rhs[i] / &row[q];
            let better = match &best {
                None => true,
                Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
            };
            if better {
                best = Some((i, ratio));
            }
        }
        best.map(|(i, _)| i)
    }

    /// Pivots to optimality. Returns false if the program is unbounded.
    ///
    /// Columns are priced by Dantzig's rule while pivots make progress. After
    /// `DEGENERATE_RUN` consecutive degenerate pivots the smallest-index rule
    /// takes over until the objective moves again; Bland's rule cannot cycle,
    /// and every nondegenerate pivot strictly improves the objective, so no
    /// basis repeats and the loop terminates.
    fn optimize(&mut self) -> bool {
        let mut degenerate_run = 0usize;
        loop {
            let q = if degenerate_run >= DEGENERATE_RUN { self.entering_bland() } else { self.entering_dantzig() };
            let Some(q) = q else { return true };
            let Some(r) = self.leaving(q) else { return false };
            if self.rhs[r].is_zero() {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(r, q);
        }
    }
}

/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const DEGENERATE_RUN: usize = 32;

/// Solves `p` exactly.
pub fn solve_lp(p: &LinearProgram) -> Result<LpSolution> {
    let nv = p.num_vars();
    if p.rows.len() != p.rhs.len() || p.rows.iter().any(|r| r.len() != nv) {
        return Err(Error::DimensionMismatch("malformed program".into()));
    }
    if p.lower.len() != nv || p.upper.len() != nv {
        return Err(Error::DimensionMismatch("bounds length".into()));
    }
    for (l, u) in p.lower.iter().zip(&p.upper) {
        if u.as_ref().is_some_and(|u| u < l) {
            return Ok(LpSolution::without_optimum(LpStatus::Infeasible));
        }
    }

    // Shift x = l + x' and turn finite upper bounds into rows -x' >= -(u - l).
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(p.rows.len());
    let mut rhs: Vec<Rational> = Vec::with_capacity(p.rows.len());
    for (row, b) in p.rows.iter().zip(&p.rhs) {
        rows.push(row.clone());
        rhs.push(b - dot(row, &p.lower));
    }
    for (j, u) in p.upper.iter().enumerate() {
        if let Some(u) = u {
            let mut row = vec![Rational::zero(); nv];
            row[j] = -Rational::one();
            rows.push(row);
            rhs.push(&p.lower[j] - u);
        }
    }
    let nr = rows.len();
    let needs_artificial: Vec<bool> = rhs.iter().map(Rational::is_positive).collect();
    let na = needs_artificial.iter().filter(|&&a| a).count();
    let art_start = nv + nr;
    let ncols = art_start + na;

    // Row i: a·x' - s_i = b'. Rows with b' <= 0 are negated so s_i starts basic.
    let mut basis = vec![0; nr];
    let mut next_art = art_start;
    for i in 0..nr {
        rows[i].resize(ncols, Rational::zero());
        if needs_artificial[i] {
            rows[i][nv + i] = -Rational::one();
            rows[i][next_art] = Rational::one();
            basis[i] = next_art;
            next_art += 1;
        } else {
            for v in rows[i][..nv].iter_mut() {
                if !v.is_zero() {
                    *v = -&*v;
                }
            }
            rows[i][nv + i] = Rational::one();
            rhs[i] = -&rhs[i];
            basis[i] = nv + i;
        }
    }

    let mut reduced = vec![Rational::zero(); ncols];
    let mut value = Rational::zero();
    for i in (0..nr).filter(|&i| needs_artificial[i]) {
        for j in 0..art_start {
            if !rows[i][j].is_zero() {
                reduced[j] -= &rows[i][j];
            }
        }
        value += &rhs[i];
    }
    let mut t = Tableau { rows, rhs, basis, reduced, value, enter_limit: art_start };

    if na > 0 {
        t.optimize();
        if t.value.is_positive() {
            return Ok(LpSolution::without_optimum(LpStatus::Infeasible));
        }
        for r in 0..nr {
            if t.basis[r] >= art_start {
                if let Some(q) = (0..art_start).find(|&j| !t.rows[r][j].is_zero()) {
                    t.pivot(r, q);
                }
                // otherwise the row is redundant and its artificial stays at 0
            }
        }
        for row in t.rows.iter_mut() {
            row.truncate(art_start);
        }
    }

    // Phase 2 reduced costs from the true objective.
    let cost = |j: usize| if j < nv { p.objective[j].clone() } else { Rational::zero() };
    let mut reduced: Vec<Rational> = (0..art_start).map(cost).collect();
    let mut value = dot(&p.objective, &p.lower);
    for (i, &bj) in t.basis.iter().enumerate() {
        if bj >= nv {
            continue;
        }
        let cb = &p.objective[bj];
        if cb.is_zero() {
            continue;
        }
        for (d, a) in reduced.iter_mut().zip(&t.rows[i][..art_start]) {
            if !a.is_zero() {
                *d -= cb * a;
            }
        }
        value += cb * &t.rhs[i];
    }
    t.reduced = reduced;
    t.value = value;
    if !t.optimize() {
        return Ok(LpSolution::without_optimum(LpStatus::Unbounded));
    }

    let mut primal = p.lower.clone();
    for (i, &bj) in t.basis.iter().enumerate() {
        if bj < nv {
            primal[bj] += &t.rhs[i];
        }
    }
    // The multiplier of row i is the reduced cost of its surplus column.
    let dual = (0..p.rows.len()).map(|i| t.reduced[nv + i].clone()).collect();
    Ok(LpSolution { status: LpStatus::Optimal, value: t.value, primal, dual })
}

/// Independent optimality check using only the program data and the claimed
/// solution: primal feasibility, dual feasibility and equal objective values.
///
/// With reduced costs `d = c - Aᵀy`, the dual objective of a bounded program is
/// `b·y + Σ_j (d_j > 0 ? d_j·l_j : d_j·u_j)`, which requires `u_j` to exist
/// wherever `d_j < 0`.
pub fn verify_solution(p: &LinearProgram, s: &LpSolution) -> bool {
    let nv = p.num_vars();
    if s.status != LpStatus::Optimal || s.primal.len() != nv || s.dual.len() != p.num_rows() {
        return false;
    }
    for j in 0..nv {
        if s.primal[j] < p.lower[j] {
            return false;
        }
        if p.upper[j].as_ref().is_some_and(|u| s.primal[j] > *u) {
            return false;
        }
    }
    if p.rows.iter().zip(&p.rhs).any(|(row, b)| dot(row, &s.primal) < *b) {
        return false;
    }
    if s.dual.iter().any(Rational::is_negative) {
        return false;
    }
    let mut dual_value = dot(&p.rhs, &s.dual);
    for j in 0..nv {
        let mut d = p.objective[j].clone();
        for (row, y) in p.rows.iter().zip(&s.dual) {
            if !row[j].is_zero() && !y.is_zero() {
                d -= &row[j] * y;
            }
        }
        if d.is_positive() {
            dual_value += &d * &p.lower[j];
        } else if d.is_negative() {
            match &p.upper[j] {
                Some(u) => dual_value += &d * u,
                None => return false,
            }
        }
    }
    let primal_value = p.evaluate(&s.primal);
    primal_value == dual_value && primal_value == s.value
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    fn qs(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| q(x)).collect()
    }

    fn gamma2() -> LinearProgram {
        // points (0,1), (1,0), (1,1); lines x=1, y=1, x+y=1
        LinearProgram::new(qs(&[1, 1, 1]), vec![qs(&[0, 1, 1]), qs(&[1, 0, 1]), qs(&[1, 1, 0])], qs(&[1, 1, 1]))
            .unwrap()
    }

    #[test]
    fn pairwise_cover_of_smallest_grid() {
        let p = gamma2();
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.value, Rational::new(3, 2));
        assert_eq!(s.primal, vec![Rational::new(1, 2); 3]);
        assert!(verify_solution(&p, &s));
    }

    #[test]
    fn single_bound() {
        let p = LinearProgram::new(qs(&[1]), vec![qs(&[1])], qs(&[5])).unwrap();
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.value, q(5));
        assert_eq!(s.dual, qs(&[1]));
        assert!(verify_solution(&p, &s));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let p = LinearProgram::new(qs(&[1]), vec![qs(&[-1])], qs(&[1])).unwrap();
        assert_eq!(solve_lp(&p).unwrap().status, LpStatus::Infeasible);
        let p = LinearProgram::new(qs(&[-1, 0]), vec![qs(&[1, -1])], qs(&[0])).unwrap();
        assert_eq!(solve_lp(&p).unwrap().status, LpStatus::Unbounded);
        let p = LinearProgram::new(qs(&[1]), vec![qs(&[1])], qs(&[3]))
            .unwrap()
            .with_bounds(qs(&[0]), vec![Some(q(2))])
            .unwrap();
        assert_eq!(solve_lp(&p).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!(LinearProgram::new(qs(&[1, 1]), vec![qs(&[1])], qs(&[1])), Err(Error::DimensionMismatch(_))));
        assert!(matches!(LinearProgram::new(qs(&[1]), vec![qs(&[1])], qs(&[1, 2])), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn bounds_shift_and_cap() {
        // min x + y, x + y >= 3, 1 <= x <= 1, y >= 0
        let p = LinearProgram::new(qs(&[1, 1]), vec![qs(&[1, 1])], qs(&[3]))
            .unwrap()
            .with_bounds(qs(&[1, 0]), vec![Some(q(1)), None])
            .unwrap();
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.value, q(3));
        assert!(verify_solution(&p, &s));
        // min -x with x <= 4 needs the upper bound in the dual
        let p = LinearProgram::new(qs(&[-1]), vec![qs(&[1])], qs(&[1]))
            .unwrap()
            .with_bounds(qs(&[0]), vec![Some(q(4))])
            .unwrap();
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.value, q(-4));
        assert!(verify_solution(&p, &s));
    }

    #[test]
    fn verifier_rejects_tampering() {
        let p = gamma2();
        let s = solve_lp(&p).unwrap();
        let mut bumped = s.clone();
        bumped.primal[0] += q(1);
        assert!(!verify_solution(&p, &bumped));

        let asym =
            LinearProgram::new(qs(&[2, 3]), vec![qs(&[1, 1]), qs(&[1, 2]), qs(&[3, 1])], qs(&[2, 3, 3])).unwrap();
        let s = solve_lp(&asym).unwrap();
        assert!(verify_solution(&asym, &s));
        let swapped = LpSolution { primal: s.dual.clone(), dual: s.primal.clone(), ..s.clone() };
        assert!(!verify_solution(&asym, &swapped));
        let mut wrong_dual = s.clone();
        wrong_dual.dual = vec![Rational::zero(); 3];
        assert!(!verify_solution(&asym, &wrong_dual));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling LP, rewritten as min with >= rows.
        let c = vec![Rational::new(-3, 4), q(150), Rational::new(-1, 50), q(6)];
        let rows = vec![
            vec![Rational::new(-1, 4), q(60), Rational::new(1, 25), q(-9)],
            vec![Rational::new(-1, 2), q(90), Rational::new(1, 50), q(-3)],
            vec![q(0), q(0), q(-1), q(0)],
        ];
        let p = LinearProgram::new(c, rows, vec![q(0), q(0), q(-1)]).unwrap();
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.value, Rational::new(-1, 20));
        assert!(verify_solution(&p, &s));
    }
}
