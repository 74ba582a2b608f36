//! Origin-avoiding lines `a·x + b·y = 1` and the admissible family `𝓛(Γ)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid, GridPoint};
use crate::rational::Rational;

/// The line `{(x, y) : a·x + b·y = 1}`.
///
/// Every line missing the origin has exactly one such form, so `(a, b)` is a
/// canonical key and the origin can never lie on a `Line`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    a: Rational,
    b: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlopeKind {
    Horizontal,
    Vertical,
    MinusOne,
}

/// Slope of a line, with vertical lines kept separate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slope {
    Finite(Rational),
    Vertical,
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(s) => write!(f, "{s}"),
            Slope::Vertical => f.write_str("inf"),
        }
    }
}

impl Line {
    /// Panics if `a = b = 0`.
    pub fn new(a: Rational, b: Rational) -> Line {
        assert!(!(a.is_zero() && b.is_zero()), "a line needs (a, b) != (0, 0)");
        Line { a, b }
    }

    /// `x = c`, for nonzero `c`.
    pub fn vertical(c: &Rational) -> Line {
        Line::new(c.recip(), Rational::zero())
    }

    /// `y = c`, for nonzero `c`.
    pub fn horizontal(c: &Rational) -> Line {
        Line::new(Rational::zero(), c.recip())
    }

    /// The line through `(x0, 0)` and `(0, y0)`, both nonzero.
    pub fn through_intercepts(x0: &Rational, y0: &Rational) -> Line {
        Line::new(x0.recip(), y0.recip())
    }

    /// `x + y = c`, for nonzero `c`.
    pub fn diagonal(c: &Rational) -> Line {
        let r = c.recip();
        Line::new(r.clone(), r)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn contains(&self, x: &Rational, y: &Rational) -> bool {
        let mut v = &self.a * x;
        v += &self.b * y;
        v == Rational::one()
    }

    pub fn contains_point(&self, p: &GridPoint) -> bool {
        self.contains(&p.x, &p.y)
    }

    pub fn slope(&self) -> Slope {
        if self.b.is_zero() {
            Slope::Vertical
        } else {
            Slope::Finite(-(&self.a / &self.b))
        }
    }

    pub fn slope_kind(&self) -> Option<SlopeKind> {
        if self.a.is_zero() {
            Some(SlopeKind::Horizontal)
        } else if self.b.is_zero() {
            Some(SlopeKind::Vertical)
        } else if self.a == self.b {
            Some(SlopeKind::MinusOne)
        } else {
            None
        }
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{}", self.a, self.b)
    }
}

impl fmt::Debug for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Line({self})")
    }
}

impl FromStr for Line {
    type Err = Error;

    /// Parses `a;b`.
    fn from_str(s: &str) -> Result<Line> {
        let (a, b) = s.trim().split_once(';').ok_or_else(|| Error::Parse(format!("expected `a;b`, got {s:?}")))?;
        let (a, b): (Rational, Rational) = (a.parse()?, b.parse()?);
        if a.is_zero() && b.is_zero() {
            return Err(Error::Parse("0;0 is not a line".into()));
        }
        Ok(Line::new(a, b))
    }
}

impl Serialize for Line {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Line {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The line through two distinct points, or `None` if it passes through the
/// origin.
pub fn line_through(p: &GridPoint, q: &GridPoint) -> Result<Option<Line>> {
    if p.x == q.x && p.y == q.y {
        return Err(Error::SamePoint);
    }
    Ok(line_through_coords(&p.x, &p.y, &q.x, &q.y))
}

fn line_through_coords(x1: &Rational, y1: &Rational, x2: &Rational, y2: &Rational) -> Option<Line> {
    let det = x1 * y2 - x2 * y1;
    if det.is_zero() {
        return None;
    }
    let a = (y2 - y1) / &det;
    let b = (x1 - x2) / &det;
    Some(Line { a, b })
}

/// A list of distinct lines with, for each, the sorted indices (into
/// [`Grid::points`]) of the grid points it contains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineFamily {
    lines: Vec<Line>,
    incidence: Vec<Vec<usize>>,
}

impl LineFamily {
    /// Assembles a family without checking it against any grid. Meant for
    /// tests and hand-built families; prefer [`enumerate_lines`].
    pub fn from_parts(lines: Vec<Line>, incidence: Vec<Vec<usize>>) -> Result<LineFamily> {
        if lines.len() != incidence.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} lines but {} incidence lists",
                lines.len(),
                incidence.len()
            )));
        }
        Ok(LineFamily { lines, incidence })
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn incidence(&self, line: usize) -> &[usize] {
        &self.incidence[line]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Line, &[usize])> {
        self.lines.iter().zip(self.incidence.iter().map(Vec::as_slice))
    }

    pub fn position(&self, line: &Line) -> Option<usize> {
        match self.lines.binary_search(line) {
            Ok(i) => Some(i),
            Err(_) => self.lines.iter().position(|l| l == line),
        }
    }

    pub fn contains(&self, line: &Line) -> bool {
        self.position(line).is_some()
    }

    /// Keeps the lines whose slope class is in `kinds`.
    pub fn filter_slopes(&self, kinds: &[SlopeKind]) -> LineFamily {
        let (lines, incidence) = self
            .iter()
            .filter(|(l, _)| l.slope_kind().is_some_and(|k| kinds.contains(&k)))
            .map(|(l, inc)| (l.clone(), inc.to_vec()))
            .unzip();
        LineFamily { lines, incidence }
    }
}

/// All origin-avoiding lines through at least two nonzero points of `g`,
/// sorted by `(a, b)`.
///
/// Incidence lists are collected from the generating pairs: every point of a
/// line pairs with every other point of it, so the union of pair endpoints is
/// the full incidence set.
pub fn enumerate_lines(g: &Grid) -> LineFamily {
    let pts = g.points();
    let mut map: HashMap<Line, Vec<usize>> = HashMap::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let (p, q) = (&pts[i], &pts[j]);
            if let Some(line) = line_through_coords(&p.x, &p.y, &q.x, &q.y) {
                let inc = map.entry(line).or_default();
                inc.push(i);
                inc.push(j);
            }
        }
    }
    let mut entries: Vec<(Line, Vec<usize>)> = map
        .into_iter()
        .map(|(l, mut inc)| {
            inc.sort_unstable();
            inc.dedup();
            (l, inc)
        })
        .collect();
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    let (lines, incidence) = entries.into_iter().unzip();
    LineFamily { lines, incidence }
}

/// The lines of slope 0, ∞ and/or −1 of a standard grid that carry at least two
/// nonzero points. Built directly from the grid structure; equal to filtering
/// [`enumerate_lines`] by slope.
pub fn restricted_lines(g: &Grid, kinds: &[SlopeKind]) -> Result<LineFamily> {
    if !g.is_standard() {
        return Err(Error::NotStandardGrid);
    }
    if kinds.is_empty() {
        return Err(Error::BadParameter("empty slope set".into()));
    }
    let n = g.n();
    let mut entries: Vec<(Line, Vec<usize>)> = Vec::new();
    for c in 1..n {
        let cr = Rational::from(c);
        if kinds.contains(&SlopeKind::Vertical) {
            let inc = (0..n).filter_map(|y| g.point_index(c, y)).collect();
            entries.push((Line::vertical(&cr), inc));
        }
        if kinds.contains(&SlopeKind::Horizontal) {
            let inc = (0..n).filter_map(|x| g.point_index(x, c)).collect();
            entries.push((Line::horizontal(&cr), inc));
        }
    }
    if kinds.contains(&SlopeKind::MinusOne) {
        for c in 1..=(2 * n - 3) {
            let mut inc: Vec<usize> =
                (0..n).filter(|&x| x <= c && c - x < n).filter_map(|x| g.point_index(x, c - x)).collect();
            inc.sort_unstable();
            if inc.len() >= 2 {
                entries.push((Line::diagonal(&Rational::from(c)), inc));
            }
        }
    }
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    let (lines, incidence) = entries.into_iter().unzip();
    Ok(LineFamily { lines, incidence })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineSizeWitness {
    pub line: Line,
    /// 1-based index `j` of the y-axis point `(0, y_j)` the line passes through.
    pub j: usize,
    pub points: usize,
    pub bound: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineSizeReport {
    pub passed: bool,
    pub checked: usize,
    pub witnesses: Vec<LineSizeWitness>,
}

/// Upper bound on `|ℓ ∩ Γ|` for a non-horizontal line through `(0, y_j)` of a
/// square grid, with 1-based `j` and `i0`.
///
/// Positive slope: `n - |j - i0|`. Negative slope: reflect in the x-axis, which
/// sends `y_j` to position `n + 1 - j`, giving `n - |(n + 1 - j) - i0|`.
pub fn line_size_bound(n: usize, i0: usize, j: usize, positive_slope: bool) -> usize {
    let pos = if positive_slope { j } else { n + 1 - j };
    n - pos.abs_diff(i0)
}

/// Checks the line-size bound on every line of `fam` that passes through a
/// y-axis grid point with nonzero, finite slope. Point counts come from the
/// family's incidence lists.
pub fn linesize_bound_check(g: &Grid, fam: &LineFamily) -> Result<LineSizeReport> {
    if !g.is_square() {
        return Err(Error::NotSquare { n: g.n(), m: g.m() });
    }
    let n = g.n();
    let i0 = g.i0() + 1;
    let mut checked = 0;
    let mut witnesses = Vec::new();
    for (line, inc) in fam.iter() {
        if line.b().is_zero() || line.a().is_zero() {
            continue;
        }
        let y = line.b().recip();
        let Ok(jz) = g.s2().binary_search(&y) else {
            continue;
        };
        let j = jz + 1;
        // slope = -a/b
        let positive = line.a().is_negative() != line.b().is_negative();
        let bound = line_size_bound(n, i0, j, positive);
        checked += 1;
        if inc.len() > bound {
            witnesses.push(LineSizeWitness { line: line.clone(), j, points: inc.len(), bound });
        }
    }
    Ok(LineSizeReport { passed: witnesses.is_empty(), checked, witnesses })
}
