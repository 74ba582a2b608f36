//! Dual weightings: nonnegative point weights under which every admissible
//! line weighs at most 1. The total weight of such a weighting is a lower
//! bound on `Φ`, and `k` times it a lower bound on `cov_k`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{enumerate_lines, Line, LineFamily, Slope};
use crate::grid::{delta_genericity, standard_grid, Grid};
use crate::rational::{ceil_sqrt, Rational};

/// Weights on the nonzero points of a grid, in [`Grid::points`] order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weighting {
    weights: Vec<Rational>,
    total: Rational,
}

#[derive(Serialize, Deserialize)]
struct WeightedPoint {
    x: Rational,
    y: Rational,
    w: Rational,
}

#[derive(Serialize, Deserialize)]
struct WeightingDoc {
    points: Vec<WeightedPoint>,
    total: Rational,
}

impl Weighting {
    /// Wraps dense weights; rejects negative entries.
    pub fn from_values(weights: Vec<Rational>) -> Result<Weighting> {
        if let Some(i) = weights.iter().position(Rational::is_negative) {
            return Err(Error::BadParameter(format!("negative weight at point {i}")));
        }
        let total = weights.iter().sum();
        Ok(Weighting { weights, total })
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// Weight of point `i`; points beyond the stored range weigh 0.
    pub fn get(&self, i: usize) -> Rational {
        self.weights.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total(&self) -> &Rational {
        &self.total
    }

    /// Sum of the weights of the listed points.
    pub fn weight_of(&self, points: &[usize]) -> Rational {
        points.iter().filter_map(|&p| self.weights.get(p)).sum()
    }

    pub fn to_json(&self, g: &Grid) -> String {
        let points = g
            .points()
            .into_iter()
            .zip(&self.weights)
            .map(|(p, w)| WeightedPoint { x: p.x, y: p.y, w: w.clone() })
            .collect();
        serde_json::to_string_pretty(&WeightingDoc { points, total: self.total.clone() })
            .expect("weighting serialization cannot fail")
    }

    /// Parses [`Weighting::to_json`] output; unlisted points weigh 0.
    pub fn from_json(g: &Grid, s: &str) -> Result<Weighting> {
        let doc: WeightingDoc = serde_json::from_str(s)?;
        let mut weights = vec![Rational::zero(); g.num_points()];
        for p in doc.points {
            let i = g
                .index_of(&p.x, &p.y)
                .ok_or_else(|| Error::Parse(format!("({}, {}) is not a nonzero grid point", p.x, p.y)))?;
            weights[i] = p.w;
        }
        let w = Weighting::from_values(weights)?;
        if w.total != doc.total {
            return Err(Error::Parse(format!("declared total {} but weights sum to {}", doc.total, w.total)));
        }
        Ok(w)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightingReport {
    pub feasible: bool,
    pub max_line_weight: Rational,
    /// Every line of weight above 1, with its weight.
    pub violations: Vec<(Line, Rational)>,
}

/// Line weights of every family line. Weights are scaled once to a common
/// denominator so each line sum is plain integer addition.
fn line_weights(fam: &LineFamily, w: &Weighting) -> Vec<Rational> {
    let mut lcm = BigInt::one();
    for v in w.weights.iter().filter(|v| !v.is_zero()) {
        lcm = lcm.lcm(&v.denom());
    }
    let scaled: Vec<BigInt> = w.weights.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
    fam.iter()
        .map(|(_, pts)| {
            let mut s = BigInt::from(0);
            for &p in pts {
                if let Some(v) = scaled.get(p) {
                    s += v;
                }
            }
            Rational::from_bigints(s, lcm.clone())
        })
        .collect()
}

/// Checks that every line of `fam` has weight at most 1 under `w`.
pub fn verify_weighting(_g: &Grid, fam: &LineFamily, w: &Weighting) -> WeightingReport {
    let one = Rational::one();
    let mut max = Rational::zero();
    let mut violations = Vec::new();
    for (line, weight) in fam.lines().iter().zip(line_weights(fam, w)) {
        if weight > one {
            violations.push((line.clone(), weight.clone()));
        }
        if weight > max {
            max = weight;
        }
    }
    WeightingReport { feasible: violations.is_empty(), max_line_weight: max, violations }
}

/// Weighting for generic grids: x-axis points `(n-1)/(n+m-2)`, y-axis points
/// `(m-1)/(n+m-2)`, interior points `1/(n+m-2)`.
pub fn weight_generic(g: &Grid) -> Result<Weighting> {
    let delta = delta_genericity(g);
    if delta > 0 {
        return Err(Error::NotGeneric(delta));
    }
    let (n1, m1) = ((g.n() - 1) as i64, (g.m() - 1) as i64);
    let d = n1 + m1;
    let weights = g
        .points()
        .iter()
        .map(|p| match (p.x.is_zero(), p.y.is_zero()) {
            (false, true) => Rational::new(n1, d),
            (true, false) => Rational::new(m1, d),
            _ => Rational::new(1, d),
        })
        .collect();
    Weighting::from_values(weights)
}

#[derive(Clone, Debug)]
pub struct SquareClaimWeighting {
    pub weighting: Weighting,
    pub t: u64,
    /// Interior weight `1/(n+t)`.
    pub alpha: Rational,
    /// Boundary weight `(t+1)/(n+t)`.
    pub beta: Rational,
}

/// Default exclusion radius for [`weight_square_claim`]:
/// `⌈√((5n+1)(n-1))/2 - n⌉`, floored at 0.
pub fn default_square_claim_radius(n: u64) -> u64 {
    let s = ceil_sqrt((5 * n as u128 + 1) * (n as u128 - 1)) as u64;
    s.div_ceil(2).saturating_sub(n)
}

/// Weighting for arbitrary square grids. Interior points get `1/(n+t)`,
/// x-axis points `(t+1)/(n+t)`, and the y-axis point at 1-based position `j`
/// gets `(t+1)/(n+t)` only when both `|j - i0|` and `|(n+1-j) - i0|` are at
/// least `t`; lines through two weighted boundary points are then short enough
/// that no line exceeds weight 1.
pub fn weight_square_claim(g: &Grid, t: Option<u64>) -> Result<SquareClaimWeighting> {
    if !g.is_square() {
        return Err(Error::NotSquare { n: g.n(), m: g.m() });
    }
    let n = g.n() as u64;
    let t = t.unwrap_or_else(|| default_square_claim_radius(n));
    if t >= n {
        return Err(Error::BadParameter(format!("radius t={t} must be below n={n}")));
    }
    let alpha = Rational::new(1, (n + t) as i64);
    let beta = Rational::new((t + 1) as i64, (n + t) as i64);
    let i0 = g.i0() as u64 + 1;
    let weighted_y = |yj: usize| {
        let j = yj as u64 + 1;
        j.abs_diff(i0).min((n + 1 - j).abs_diff(i0)) >= t
    };
    let weights = g
        .points()
        .iter()
        .map(|p| match (p.x.is_zero(), p.y.is_zero()) {
            (false, false) => alpha.clone(),
            (false, true) => beta.clone(),
            _ if weighted_y(p.yj) => beta.clone(),
            _ => Rational::zero(),
        })
        .collect();
    Ok(SquareClaimWeighting { weighting: Weighting::from_values(weights)?, t, alpha, beta })
}

/// Weighting for square grids in which lines through two boundary points
/// carry at most `delta` interior points: interior `1/(2(n-1)-delta)`,
/// boundary `1 - (n-1)/(2(n-1)-delta)`.
///
/// For `delta > n-1` the boundary formula turns negative; it is clamped to 0
/// so the result is still a weighting, and verification then reports it as
/// infeasible.
pub fn weight_delta_generic(g: &Grid, delta: u64) -> Result<Weighting> {
    if !g.is_square() {
        return Err(Error::NotSquare { n: g.n(), m: g.m() });
    }
    let actual = delta_genericity(g);
    if actual as u64 > delta {
        return Err(Error::DeltaTooSmall { declared: delta as usize, actual });
    }
    let n1 = (g.n() - 1) as i64;
    let d = 2 * n1 - delta as i64;
    if d <= 0 {
        return Err(Error::BadParameter(format!("delta={delta} leaves no positive interior weight")));
    }
    let alpha = Rational::new(1, d);
    let beta = (Rational::one() - Rational::new(n1, d)).max(Rational::zero());
    let weights = g.points().iter().map(|p| if p.is_boundary() { beta.clone() } else { alpha.clone() }).collect();
    Weighting::from_values(weights)
}

#[derive(Clone, Debug)]
pub struct StandardWeighting {
    pub grid: Grid,
    pub weighting: Weighting,
    /// Number of weighted diagonals above the anti-diagonal.
    pub t: u64,
}

/// Largest `t` with `Σ_{i=1}^{t} 1/(n-i) <= 1/2`.
pub fn standard_weight_depth(n: u64) -> u64 {
    let half = Rational::new(1, 2);
    let mut sum = Rational::zero();
    let mut t = 0;
    while t + 1 < n {
        sum += Rational::new(1, (n - t - 1) as i64);
        if sum > half {
            break;
        }
        t += 1;
    }
    t
}

/// Weighting of the standard grid: 1/2 on every boundary point and
/// `1/(n-i)` on each point of the diagonal `x + y = n - 1 + i` for
/// `1 <= i <= t`, where `t` is [`standard_weight_depth`]. Total `n - 1 + t`.
pub fn weight_standard(n: u64) -> Result<StandardWeighting> {
    if n < 2 {
        return Err(Error::BadParameter(format!("n={n} must be at least 2")));
    }
    let t = standard_weight_depth(n);
    let grid = standard_grid(n as usize)?;
    let weights = grid
        .points()
        .iter()
        .map(|p| {
            if p.is_boundary() {
                return Rational::new(1, 2);
            }
            let s = (p.xi + p.yj) as u64;
            if s >= n && s < n + t {
                Rational::new(1, (2 * n - 1 - s) as i64)
            } else {
                Rational::zero()
            }
        })
        .collect();
    Ok(StandardWeighting { weighting: Weighting::from_values(weights)?, grid, t })
}

#[derive(Clone, Debug)]
pub struct RestrictedWeighting {
    pub grid: Grid,
    pub weighting: Weighting,
    pub t: u64,
    /// Weight of each point on the diagonal `x + y = n + t`.
    pub z: Rational,
    /// `alpha[i - 1]` is the weight moved from each boundary point of the
    /// diagonal `x + y = i` onto its interior points, for `1 <= i <= n-1`.
    pub alpha: Vec<Rational>,
}

/// Smallest integer in the admissible window for [`weight_restricted`]:
/// `⌈(√(8n²-8n+1) - 2n - 1)/2⌉`, raised to at least 1.
pub fn default_restricted_depth(n: u64) -> u64 {
    let s = ceil_sqrt(8 * (n as u128).pow(2) - 8 * n as u128 + 1) as u64;
    s.saturating_sub(2 * n + 1).div_ceil(2).max(1)
}

/// `z` for depth `t`: `((n-1)n - t(2n+t-1)) / (2((n-1)n - t(t+1)))`.
pub fn restricted_z(n: u64, t: u64) -> Rational {
    let (n, t) = (n as i64, t as i64);
    Rational::new((n - 1) * n - t * (2 * n + t - 1), 2 * ((n - 1) * n - t * (t + 1)))
}

/// `alpha_i` for `1 <= i <= n-1`, from the closed form
/// `alpha_i = (Σ_{j<=min(t,i)} j(j-1)/(n-j)) / (i(i+1)) + [i > t] t(t+1) z / (i(i+1))`.
pub fn restricted_alphas(n: u64, t: u64, z: &Rational) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n as usize - 1);
    let mut prefix = Rational::zero();
    for i in 1..n {
        if i <= t {
            prefix += Rational::new((i * (i - 1)) as i64, (n - i) as i64);
        }
        let denom = Rational::from(i * (i + 1));
        let mut a = &prefix / &denom;
        if i > t {
            a += &(Rational::from(t * (t + 1)) * z) / &denom;
        }
        out.push(a);
    }
    out
}

/// Weighting of the standard grid that is feasible for horizontal, vertical
/// and slope `-1` lines.
///
/// With `s = x + y`: boundary points get `1/2 - alpha_s`; interior points with
/// `s <= n-1` get `2 alpha_s / (s-1)`; points with `n <= s <= n+t-1` get
/// `1/(2n-1-s)`; points on `s = n+t` get `z`; all others 0. Every vertical,
/// horizontal and diagonal with `s <= n+t-1` then has weight exactly 1.
pub fn weight_restricted(n: u64, t: Option<u64>) -> Result<RestrictedWeighting> {
    if n < 3 {
        return Err(Error::BadParameter(format!("n={n} must be at least 3")));
    }
    let t = t.unwrap_or_else(|| default_restricted_depth(n));
    if t == 0 || t + 2 > n {
        return Err(Error::BadParameter(format!("depth t={t} outside [1, {}]", n - 2)));
    }
    let z = restricted_z(n, t);
    if z.is_negative() || z > Rational::new(1, (n - t - 1) as i64) {
        return Err(Error::BadParameter(format!("t={t} gives z={z} outside [0, 1/{}]", n - t - 1)));
    }
    let alpha = restricted_alphas(n, t, &z);
    let half = Rational::new(1, 2);
    for (idx, a) in alpha.iter().enumerate() {
        let i = idx as u64 + 1;
        if a.is_negative() || *a > half {
            return Err(Error::BadParameter(format!("t={t} gives alpha_{i}={a} outside [0, 1/2]")));
        }
        if i <= t + 1 && i + 1 < n && *a > Rational::new((i - 1) as i64, (2 * (n - i - 1)) as i64) {
            return Err(Error::BadParameter(format!("t={t} gives alpha_{i}={a} above (i-1)/(2(n-i-1))")));
        }
    }

    // One weight per diagonal class, shared by clones.
    let boundary: Vec<Rational> = alpha.iter().map(|a| &half - a).collect();
    let lower_interior: Vec<Rational> = alpha
        .iter()
        .enumerate()
        .map(|(idx, a)| if idx == 0 { Rational::zero() } else { (a * &Rational::from(2)) / Rational::from(idx as u64) })
        .collect();
    let grid = standard_grid(n as usize)?;
    let weights = grid
        .points()
        .iter()
        .map(|p| {
            let s = (p.xi + p.yj) as u64;
            if s < n {
                let i = s as usize - 1;
                if p.is_boundary() {
                    boundary[i].clone()
                } else {
                    lower_interior[i].clone()
                }
            } else if s < n + t {
                Rational::new(1, (2 * n - 1 - s) as i64)
            } else if s == n + t {
                z.clone()
            } else {
                Rational::zero()
            }
        })
        .collect();
    Ok(RestrictedWeighting { weighting: Weighting::from_values(weights)?, grid, t, z, alpha })
}

#[derive(Clone, Debug)]
pub struct AuditReport {
    pub report: WeightingReport,
    /// Violating lines grouped by slope.
    pub by_slope: BTreeMap<Slope, Vec<(Line, Rational)>>,
}

/// Checks `w` against the full admissible family of `g` and groups the
/// violating lines by slope.
pub fn audit_weighting(g: &Grid, w: &Weighting) -> AuditReport {
    let fam = enumerate_lines(g);
    let report = verify_weighting(g, &fam, w);
    let mut by_slope: BTreeMap<Slope, Vec<(Line, Rational)>> = BTreeMap::new();
    for (line, weight) in &report.violations {
        by_slope.entry(line.slope()).or_default().push((line.clone(), weight.clone()));
    }
    AuditReport { report, by_slope }
}

/// True when every weight is nonnegative and sums to the cached total.
pub fn weighting_is_consistent(w: &Weighting) -> bool {
    !w.weights.iter().any(|v| v.is_negative()) && w.weights.iter().sum::<Rational>() == w.total
}
