//! Explicit k-covers and an independent cover verifier.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::cover::Cover;
use crate::error::{Error, Result};
use crate::geometry::Line;
use crate::grid::{Grid, GridPoint};
use crate::rational::{ceil_sqrt, div_ceil_u64, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverReport {
    pub valid: bool,
    /// Smallest coverage count over all nonzero points.
    pub min_coverage: u64,
    /// A point attaining `min_coverage`, reported when the cover is invalid.
    pub witness: Option<GridPoint>,
}

/// Checks that every nonzero point of `g` lies on at least `c.k()` lines of
/// the cover, counted with multiplicity, by direct evaluation of each line.
pub fn verify_cover(g: &Grid, c: &Cover) -> CoverReport {
    let points = g.points();
    let coverage = c.coverage(g);
    let (idx, &min) =
        coverage.iter().enumerate().min_by_key(|(_, &v)| v).expect("a grid has at least three nonzero points");
    let valid = min >= c.k();
    CoverReport { valid, min_coverage: min, witness: (!valid).then(|| points[idx].clone()) }
}

fn nonzero(axis: &[Rational]) -> Vec<&Rational> {
    axis.iter().filter(|v| !v.is_zero()).collect()
}

/// Cover of size `k(n-1) + (m-1)` for grids with `n - 1 >= (k-1)(m-1)`.
///
/// Uses every horizontal line once and `k - 1` copies of every vertical line.
/// The nonzero x-values are split round-robin into `m - 1` blocks, one per
/// nonzero y-value `t`, and each `s` in the block of `t` contributes the line
/// through `(s, 0)` and `(0, t)`.
pub fn construct_wide(g: &Grid, k: u64) -> Result<Cover> {
    let (xs, ys) = (nonzero(g.s1()), nonzero(g.s2()));
    let (n1, m1) = (xs.len() as u64, ys.len() as u64);
    if k == 0 {
        return Err(Error::BadParameter("k must be positive".into()));
    }
    if n1 < (k - 1) * m1 {
        return Err(Error::HypothesisViolated(format!("need n >= (k-1)(m-1)+1, got n={} m={} k={k}", n1 + 1, m1 + 1)));
    }
    let mut c = Cover::new(k);
    for t in &ys {
        c.add(Line::horizontal(t), 1);
    }
    for (i, s) in xs.iter().enumerate() {
        c.add(Line::vertical(s), k - 1);
        c.add(Line::through_intercepts(s, ys[i % ys.len()]), 1);
    }
    Ok(c)
}

/// Cover of size `k(n-1) + k(m-1)²/(n+m-2)` when `k` is divisible by `a + b`,
/// where `(a, b) = (n-1, m-1) / gcd(n-1, m-1)`.
///
/// Takes `ak/(a+b)` copies of each vertical and `bk/(a+b)` copies of each
/// horizontal line, plus one intercept line per edge of a bipartite multigraph
/// that is `bk/(a+b)`-regular on the x-axis side and `ak/(a+b)`-regular on the
/// y-axis side. Edges pair the sorted half-edge lists of both sides by index.
pub fn construct_biregular(g: &Grid, k: u64) -> Result<Cover> {
    let (xs, ys) = (nonzero(g.s1()), nonzero(g.s2()));
    let (n1, m1) = (xs.len() as u64, ys.len() as u64);
    let d = n1.gcd(&m1);
    let (a, b) = (n1 / d, m1 / d);
    if k == 0 || !k.is_multiple_of(a + b) {
        return Err(Error::DivisibilityViolated { k, required: a + b });
    }
    let x_degree = b * k / (a + b);
    let y_degree = a * k / (a + b);
    let mut c = Cover::new(k);
    for s in &xs {
        c.add(Line::vertical(s), y_degree);
    }
    for t in &ys {
        c.add(Line::horizontal(t), x_degree);
    }
    let left = xs.iter().flat_map(|s| std::iter::repeat_n(*s, x_degree as usize));
    let right = ys.iter().flat_map(|t| std::iter::repeat_n(*t, y_degree as usize));
    for (s, t) in left.zip(right) {
        c.add(Line::through_intercepts(s, t), 1);
    }
    Ok(c)
}

/// Cover of a square grid of size `⌈3k/2⌉(n-1)`: `⌈k/2⌉` copies of each
/// axis-parallel line and `⌊k/2⌋` copies of the line through `(x_i, 0)` and
/// `(0, y_i)`, pairing the i-th nonzero values of both axes.
pub fn construct_square_threehalves(g: &Grid, k: u64) -> Result<Cover> {
    if !g.is_square() {
        return Err(Error::NotSquare { n: g.n(), m: g.m() });
    }
    if k == 0 {
        return Err(Error::BadParameter("k must be positive".into()));
    }
    let (xs, ys) = (nonzero(g.s1()), nonzero(g.s2()));
    let mut c = Cover::new(k);
    for (x, y) in xs.iter().zip(&ys) {
        c.add(Line::vertical(x), k.div_ceil(2));
        c.add(Line::horizontal(y), k.div_ceil(2));
        c.add(Line::through_intercepts(x, y), k / 2);
    }
    Ok(c)
}

/// Default diagonal offset for [`construct_standard`]:
/// `⌈√(2n(n-1))⌉ - (n-1)`, clamped to `[1, n-1]`.
pub fn default_standard_offset(n: u64) -> u64 {
    let t = ceil_sqrt(2 * n as u128 * (n as u128 - 1)) as u64 - (n - 1);
    t.clamp(1, n - 1)
}

/// Cover of the standard grid using only horizontal, vertical and slope `-1`
/// lines. With `T = n + t - 1`, it takes `⌈ik/T⌉` copies of `x = i` and of
/// `y = i` for `1 <= i <= n-1`, and `k - ⌈ik/T⌉` copies of `x + y = i` for
/// `1 <= i < T`.
pub fn construct_standard(n: u64, k: u64, t: Option<u64>) -> Result<Cover> {
    if n < 2 || k == 0 {
        return Err(Error::BadParameter(format!("need n >= 2 and k >= 1, got n={n} k={k}")));
    }
    let t = match t {
        Some(t) if t == 0 || t > n - 1 => return Err(Error::BadParameter(format!("t={t} outside [1, {}]", n - 1))),
        Some(t) => t,
        None => default_standard_offset(n),
    };
    let span = n + t - 1;
    let mut c = Cover::new(k);
    for i in 1..n {
        let copies = div_ceil_u64(i * k, span);
        let v = Rational::from(i);
        c.add(Line::vertical(&v), copies);
        c.add(Line::horizontal(&v), copies);
    }
    for i in 1..span {
        c.add(Line::diagonal(&Rational::from(i)), k - div_ceil_u64(i * k, span));
    }
    Ok(c)
}

/// The size bound `k[n(n-1)/(n+t-1) + (n+t-2)/2] + 2n` for [`construct_standard`].
pub fn standard_size_bound(n: u64, k: u64, t: u64) -> Rational {
    let span = Rational::from(n + t - 1);
    let inner = Rational::from(n * (n - 1)) / span + Rational::new((n + t - 2) as i64, 2);
    Rational::from(k) * inner + Rational::from(2 * n)
}
