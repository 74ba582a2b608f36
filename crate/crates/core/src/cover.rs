//! Covering programs over a line family: the fractional primal and dual,
//! exact `Φ`, rounding to integral covers and branch-and-bound for `cov_k`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{enumerate_lines, restricted_lines, Line, LineFamily, SlopeKind};
use crate::grid::Grid;
use crate::lp::{solve_lp, verify_solution, LinearProgram, LpSolution, LpStatus};
use crate::rational::Rational;

/// All three slopes of the restricted family: horizontal, vertical and `-1`.
pub const ALL_RESTRICTED_SLOPES: [SlopeKind; 3] = [SlopeKind::Horizontal, SlopeKind::Vertical, SlopeKind::MinusOne];

#[derive(Clone, Debug)]
pub struct CoverInstance {
    pub grid: Grid,
    pub family: LineFamily,
    /// Coverage target; ignored by the fractional programs.
    pub k: u64,
}

impl CoverInstance {
    pub fn new(grid: Grid, family: LineFamily, k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::BadParameter("k must be positive".into()));
        }
        Ok(CoverInstance { grid, family, k })
    }

    /// Instance over the full admissible family.
    pub fn full(grid: Grid, k: u64) -> Result<Self> {
        let family = enumerate_lines(&grid);
        Self::new(grid, family, k)
    }

    /// Instance over horizontal, vertical and slope `-1` lines of a standard grid.
    pub fn restricted(grid: Grid, k: u64) -> Result<Self> {
        let family = restricted_lines(&grid, &ALL_RESTRICTED_SLOPES)?;
        Self::new(grid, family, k)
    }
}

/// A multiset of lines that claims to cover every nonzero point `k` times.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cover {
    entries: BTreeMap<Line, u64>,
    k: u64,
}

impl Cover {
    pub fn new(k: u64) -> Cover {
        Cover { entries: BTreeMap::new(), k }
    }

    pub fn from_entries(k: u64, entries: impl IntoIterator<Item = (Line, u64)>) -> Cover {
        let mut c = Cover::new(k);
        for (line, mult) in entries {
            c.add(line, mult);
        }
        c
    }

    /// Adds `mult` copies of `line`; zero is a no-op.
    pub fn add(&mut self, line: Line, mult: u64) {
        if mult > 0 {
            *self.entries.entry(line).or_insert(0) += mult;
        }
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn entries(&self) -> &BTreeMap<Line, u64> {
        &self.entries
    }

    pub fn multiplicity(&self, line: &Line) -> u64 {
        self.entries.get(line).copied().unwrap_or(0)
    }

    /// Number of lines counted with multiplicity.
    pub fn size(&self) -> u64 {
        self.entries.values().sum()
    }

    /// Number of distinct lines.
    pub fn distinct(&self) -> usize {
        self.entries.len()
    }

    /// Coverage count of every nonzero point of `g`, in [`Grid::points`] order.
    pub fn coverage(&self, g: &Grid) -> Vec<u64> {
        g.points()
            .iter()
            .map(|p| self.entries.iter().filter(|(l, _)| l.contains_point(p)).map(|(_, m)| m).sum())
            .collect()
    }

    /// Text form: a header comment with the grid fingerprint and `k`, then one
    /// `a;b x multiplicity` line per distinct line.
    pub fn to_text(&self, g: &Grid) -> String {
        let mut out = format!("# gridcover cover grid={} k={}\n", g.fingerprint(), self.k);
        for (line, mult) in &self.entries {
            let _ = writeln!(out, "{line} x {mult}");
        }
        out
    }

    /// Parses [`Cover::to_text`] output. Returns the cover and the grid
    /// fingerprint from the header, if present.
    pub fn from_text(text: &str) -> Result<(Cover, Option<String>)> {
        let mut k = None;
        let mut fingerprint = None;
        let mut entries = Vec::new();
        for raw in text.lines() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                for field in comment.split_whitespace() {
                    if let Some(v) = field.strip_prefix("k=") {
                        k = Some(v.parse::<u64>().map_err(|e| Error::Parse(format!("bad k {v:?}: {e}")))?);
                    } else if let Some(v) = field.strip_prefix("grid=") {
                        fingerprint = Some(v.to_string());
                    }
                }
                continue;
            }
            let (l, m) = line
                .split_once(" x ")
                .ok_or_else(|| Error::Parse(format!("expected `a;b x multiplicity`, got {line:?}")))?;
            let l: Line = l.trim().parse()?;
            let m: u64 = m.trim().parse().map_err(|e| Error::Parse(format!("bad multiplicity {m:?}: {e}")))?;
            entries.push((l, m));
        }
        let k = k.ok_or_else(|| Error::Parse("missing `k=` in header".into()))?;
        Ok((Cover::from_entries(k, entries), fingerprint))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IlpStatus {
    Optimal,
    Timeout,
}

#[derive(Clone, Debug)]
pub struct IlpResult {
    /// Best cover size found; the true optimum when `status` is `Optimal`.
    pub optimum: u64,
    pub cover: Cover,
    pub nodes_explored: u64,
    /// `Φ` over the instance family.
    pub lp_root: Rational,
    /// Proven lower bound on the optimum.
    pub lower_bound: u64,
    pub status: IlpStatus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IlpBudget {
    pub max_nodes: u64,
    pub max_time: Duration,
}

impl Default for IlpBudget {
    fn default() -> Self {
        IlpBudget { max_nodes: 1_000_000, max_time: Duration::from_secs(60) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceBounds {
    pub trivial_lower: u64,
    pub trivial_upper: u64,
    pub ball_serra: u64,
}

fn covering_program(inst: &CoverInstance, rhs: u64) -> LinearProgram {
    let np = inst.grid.num_points();
    let nl = inst.family.len();
    let mut rows = vec![vec![Rational::zero(); nl]; np];
    for (l, (_, pts)) in inst.family.iter().enumerate() {
        for &p in pts {
            rows[p][l] = Rational::one();
        }
    }
    LinearProgram::new(vec![Rational::one(); nl], rows, vec![Rational::from(rhs); np])
        .expect("covering program dimensions are consistent")
}

/// `minimize Σ u(ℓ)` subject to every nonzero point lying on lines of total
/// weight at least 1; one variable per family line, one row per point.
pub fn build_primal(inst: &CoverInstance) -> LinearProgram {
    covering_program(inst, 1)
}

/// `maximize Σ w(p)` subject to every family line having weight at most 1,
/// stated as `minimize -Σ w(p)` with rows `-Σ_{p∈ℓ} w(p) >= -1`. The optimal
/// value of this program is `-Φ`.
pub fn build_dual(inst: &CoverInstance) -> LinearProgram {
    let np = inst.grid.num_points();
    let rows = inst
        .family
        .iter()
        .map(|(_, pts)| {
            let mut row = vec![Rational::zero(); np];
            for &p in pts {
                row[p] = -Rational::one();
            }
            row
        })
        .collect();
    LinearProgram::new(vec![-Rational::one(); np], rows, vec![-Rational::one(); inst.family.len()])
        .expect("packing program dimensions are consistent")
}

/// Solves [`build_primal`] and checks the result with the independent
/// duality verifier.
pub fn solve_primal(inst: &CoverInstance) -> Result<LpSolution> {
    let p = build_primal(inst);
    let s = solve_lp(&p)?;
    match s.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => {
            return Err(Error::Solver("covering program infeasible: some point lies on no family line".into()))
        }
        LpStatus::Unbounded => return Err(Error::Solver("covering program reported unbounded".into())),
    }
    if !verify_solution(&p, &s) {
        return Err(Error::Solver("duality certificate failed verification".into()));
    }
    Ok(s)
}

/// Exact optimum of the fractional covering program over the instance family.
pub fn phi(inst: &CoverInstance) -> Result<Rational> {
    Ok(solve_primal(inst)?.value)
}

/// Rounds a fractional cover up: `⌈k·u(ℓ)⌉` copies of each line.
pub fn round_lp_to_cover(inst: &CoverInstance, lp: &LpSolution, k: u64) -> Cover {
    let kq = Rational::from(k);
    let entries = inst.family.lines().iter().zip(&lp.primal).filter(|(_, u)| !u.is_zero()).map(|(l, u)| {
        let m = (&kq * u).ceil().to_i64().expect("multiplicity fits in i64");
        (l.clone(), m as u64)
    });
    Cover::from_entries(k, entries)
}

/// The elementary bounds on `cov_k` and the Ball–Serra lower bound.
pub fn reference_bounds(g: &Grid, k: u64) -> ReferenceBounds {
    let (a, b) = ((g.n() - 1) as u64, (g.m() - 1) as u64);
    ReferenceBounds { trivial_lower: a + b + k - 1, trivial_upper: k * (a + b), ball_serra: a + b + (k - 1) * a.max(b) }
}

/// True if `cover` uses only family lines and covers every point `k` times.
fn is_family_cover(inst: &CoverInstance, cover: &Cover, k: u64) -> bool {
    let mut count = vec![0u64; inst.grid.num_points()];
    for (line, mult) in cover.entries() {
        let Some(l) = inst.family.position(line) else {
            return false;
        };
        for &p in inst.family.incidence(l) {
            count[p] += mult;
        }
    }
    count.iter().all(|&c| c >= k)
}

struct Node {
    /// Sparse bound overrides: variable -> (lower, upper).
    bounds: BTreeMap<usize, (u64, Option<u64>)>,
    /// Lower bound inherited from the parent relaxation.
    parent_bound: u64,
}

fn ceil_u64(q: &Rational) -> u64 {
    q.ceil().to_i64().expect("bound fits in i64").max(0) as u64
}

/// Branching variable: fractional part closest to 1/2, lowest index on ties.
fn branch_variable(x: &[Rational]) -> Option<usize> {
    let half = Rational::new(1, 2);
    let mut best: Option<(usize, Rational)> = None;
    for (j, v) in x.iter().enumerate() {
        if v.is_integer() {
            continue;
        }
        let dist = (&(v - &v.floor()) - &half).abs();
        if best.as_ref().is_none_or(|(_, d)| dist < *d) {
            best = Some((j, dist));
        }
    }
    best.map(|(j, _)| j)
}

fn cover_from_integral(inst: &CoverInstance, x: &[Rational], k: u64) -> Cover {
    let entries = inst.family.lines().iter().zip(x).map(|(l, v)| (l.clone(), v.to_i64().unwrap_or(0) as u64));
    Cover::from_entries(k, entries)
}

/// Turns a fractional `k`-cover into an integral one: round every coordinate
/// down, then greedily add the line that covers the most under-covered points
/// (larger fractional part first on ties) until every point is covered `k`
/// times.
fn round_down_and_repair(inst: &CoverInstance, x: &[Rational], k: u64) -> Cover {
    let mut mult: Vec<u64> = x.iter().map(|v| v.floor().to_i64().unwrap_or(0).max(0) as u64).collect();
    let frac: Vec<Rational> = x.iter().map(|v| v - &v.floor()).collect();
    let mut deficit = vec![k; inst.grid.num_points()];
    for (l, &m) in mult.iter().enumerate() {
        for &p in inst.family.incidence(l) {
            deficit[p] = deficit[p].saturating_sub(m);
        }
    }
    loop {
        let gain = |l: usize| inst.family.incidence(l).iter().filter(|&&p| deficit[p] > 0).count();
        let best = (0..mult.len())
            .map(|l| (gain(l), l))
            .filter(|&(g, _)| g > 0)
            .max_by(|a, b| a.0.cmp(&b.0).then_with(|| frac[a.1].cmp(&frac[b.1])).then_with(|| b.1.cmp(&a.1)));
        let Some((_, l)) = best else { break };
        mult[l] += 1;
        for &p in inst.family.incidence(l) {
            deficit[p] = deficit[p].saturating_sub(1);
        }
    }
    Cover::from_entries(k, inst.family.lines().iter().cloned().zip(mult))
}

/// Minimum `k`-cover over the instance family by depth-first branch-and-bound
/// on exact relaxations.
///
/// A subtree is pruned once `⌈relaxation⌉` reaches the incumbent size, which is
/// valid because cover sizes are integers. The incumbent starts from the
/// better of `warm_start` and the rounded root relaxation, and every node's
/// relaxation is rounded into a candidate incumbent. When the budget
/// runs out the best cover so far is returned with status `Timeout`.
pub fn solve_ilp(inst: &CoverInstance, warm_start: Option<&Cover>, budget: &IlpBudget) -> Result<IlpResult> {
    let k = inst.k;
    if let Some(w) = warm_start {
        if !is_family_cover(inst, w, k) {
            return Err(Error::BadParameter("warm start is not a k-cover over the instance family".into()));
        }
    }
    let start = Instant::now();
    let kq = Rational::from(k);
    let root = solve_primal(inst)?;
    let lp_root = root.value.clone();

    let root_x: Vec<Rational> = root.primal.iter().map(|u| &kq * u).collect();
    let mut incumbent = round_lp_to_cover(inst, &root, k);
    let repaired = round_down_and_repair(inst, &root_x, k);
    if repaired.size() < incumbent.size() {
        incumbent = repaired;
    }
    if let Some(w) = warm_start {
        if w.size() < incumbent.size() {
            incumbent = Cover::from_entries(k, w.entries().iter().map(|(l, m)| (l.clone(), *m)));
        }
    }

    let base = covering_program(inst, k);
    let nv = base.num_vars();
    let mut nodes_explored = 1u64;

    // The root relaxation of the k-scaled program is k times the unit one.
    let root_value = &kq * &lp_root;
    let mut stack: Vec<Node> = Vec::new();
    let expand = |bounds: BTreeMap<usize, (u64, Option<u64>)>,
                  value: &Rational,
                  x: &[Rational],
                  incumbent: &mut Cover,
                  stack: &mut Vec<Node>| {
        let bound = ceil_u64(value);
        if bound >= incumbent.size() {
            return;
        }
        match branch_variable(x) {
            None => *incumbent = cover_from_integral(inst, x, k),
            Some(j) => {
                let rounded = round_down_and_repair(inst, x, k);
                if rounded.size() < incumbent.size() {
                    *incumbent = rounded;
                }
                let v = &x[j];
                let down = v.floor().to_i64().expect("value fits") as u64;
                let (lo, hi) = bounds.get(&j).copied().unwrap_or((0, None));
                let mut up_bounds = bounds.clone();
                up_bounds.insert(j, (down + 1, hi));
                let mut down_bounds = bounds;
                down_bounds.insert(j, (lo, Some(down)));
                // Pushed last so the down branch is explored first.
                stack.push(Node { bounds: up_bounds, parent_bound: bound });
                stack.push(Node { bounds: down_bounds, parent_bound: bound });
            }
        }
    };
    expand(BTreeMap::new(), &root_value, &root_x, &mut incumbent, &mut stack);

    let mut status = IlpStatus::Optimal;
    while let Some(node) = stack.pop() {
        if node.parent_bound >= incumbent.size() {
            continue;
        }
        if nodes_explored >= budget.max_nodes || start.elapsed() >= budget.max_time {
            stack.push(node);
            status = IlpStatus::Timeout;
            break;
        }
        nodes_explored += 1;
        let mut lower = vec![Rational::zero(); nv];
        let mut upper = vec![None; nv];
        for (&j, &(lo, hi)) in &node.bounds {
            lower[j] = Rational::from(lo);
            upper[j] = hi.map(Rational::from);
        }
        let p = base.clone().with_bounds(lower, upper)?;
        let s = solve_lp(&p)?;
        match s.status {
            LpStatus::Infeasible => continue,
            LpStatus::Unbounded => return Err(Error::Solver("branch relaxation reported unbounded".into())),
            LpStatus::Optimal => {}
        }
        expand(node.bounds, &s.value, &s.primal, &mut incumbent, &mut stack);
    }

    let optimum = incumbent.size();
    let lower_bound = match status {
        IlpStatus::Optimal => optimum,
        IlpStatus::Timeout => {
            stack.iter().map(|n| n.parent_bound).min().unwrap_or(optimum).max(ceil_u64(&root_value)).min(optimum)
        }
    };
    Ok(IlpResult { optimum, cover: incumbent, nodes_explored, lp_root, lower_bound, status })
}
