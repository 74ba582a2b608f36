//! Two-dimensional grids `S1 x S2` containing the origin.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Attempts made by [`generic_grid`] before giving up.
pub const GENERIC_RETRIES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointClass {
    Origin,
    Boundary,
    Interior,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridPoint {
    pub x: Rational,
    pub y: Rational,
    pub class: PointClass,
    /// Index of `x` in the sorted first axis.
    pub xi: usize,
    /// Index of `y` in the sorted second axis.
    pub yj: usize,
}

impl GridPoint {
    pub fn is_boundary(&self) -> bool {
        self.class == PointClass::Boundary
    }

    pub fn is_interior(&self) -> bool {
        self.class == PointClass::Interior
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// The grid `Γ(S1, S2)`. Both axes are sorted, distinct and contain 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Grid {
    s1: Vec<Rational>,
    s2: Vec<Rational>,
    i0: usize,
    j0: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridKind {
    Exponential,
    Quadratic,
}

/// Builds a grid from two unsorted axis lists.
pub fn make_grid(s1: Vec<Rational>, s2: Vec<Rational>) -> Result<Grid> {
    let (s1, i0) = normalize_axis(s1)?;
    let (s2, j0) = normalize_axis(s2)?;
    Ok(Grid { s1, s2, i0, j0 })
}

fn normalize_axis(mut axis: Vec<Rational>) -> Result<(Vec<Rational>, usize)> {
    if axis.len() < 2 {
        return Err(Error::TooSmall(axis.len()));
    }
    axis.sort();
    if let Some(w) = axis.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateEntry(w[0].to_string()));
    }
    let zero = axis.binary_search(&Rational::zero()).map_err(|_| Error::MissingOrigin)?;
    Ok((axis, zero))
}

/// `Γ_n = {0, ..., n-1}^2`.
pub fn standard_grid(n: usize) -> Result<Grid> {
    rectangular_grid(n, n)
}

/// `{0, ..., n-1} x {0, ..., m-1}`.
pub fn rectangular_grid(n: usize, m: usize) -> Result<Grid> {
    let axis = |len: usize| (0..len).map(Rational::from).collect::<Vec<_>>();
    make_grid(axis(n), axis(m))
}

/// The exponential grid `{0,1,2,4,...,2^(n-2)}^2` or the quadratic grid
/// `{0,1,4,...,(n-1)^2}^2`.
pub fn named_grid(kind: GridKind, n: usize) -> Result<Grid> {
    if n < 2 {
        return Err(Error::TooSmall(n));
    }
    let axis: Vec<Rational> = match kind {
        GridKind::Exponential => {
            std::iter::once(Rational::zero()).chain((0..n - 1).map(|e| Rational::from_integer(1i64 << e))).collect()
        }
        GridKind::Quadratic => (0..n).map(|i| Rational::from((i * i) as u64)).collect(),
    };
    make_grid(axis.clone(), axis)
}

/// A seeded random grid with `delta_genericity == 0`.
///
/// Nonzero axis values are `p/q` with `p` uniform in `[-10^6, 10^6] \ {0}` and
/// `q` uniform in `[1, 1000]`, drawn from ChaCha8 seeded with `seed`.
pub fn generic_grid(n: usize, m: usize, seed: u64) -> Result<Grid> {
    if n < 2 {
        return Err(Error::TooSmall(n));
    }
    if m < 2 {
        return Err(Error::TooSmall(m));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..GENERIC_RETRIES {
        let s1 = random_axis(&mut rng, n);
        let s2 = random_axis(&mut rng, m);
        let grid = make_grid(s1, s2)?;
        if delta_genericity(&grid) == 0 {
            return Ok(grid);
        }
    }
    Err(Error::GenerationFailed(GENERIC_RETRIES))
}

fn random_axis(rng: &mut ChaCha8Rng, len: usize) -> Vec<Rational> {
    let mut axis = vec![Rational::zero()];
    while axis.len() < len {
        let p = loop {
            let p: i64 = rng.gen_range(-1_000_000..=1_000_000);
            if p != 0 {
                break p;
            }
        };
        let q: i64 = rng.gen_range(1..=1000);
        let v = Rational::new(p, q);
        if !axis.contains(&v) {
            axis.push(v);
        }
    }
    axis
}

/// Maximum number of interior points on a line through `(a, 0)` and `(0, b)`.
///
/// Same-axis boundary pairs span a coordinate axis, which passes through the
/// origin, so only cross-axis pairs matter. Zero means the grid is generic.
pub fn delta_genericity(g: &Grid) -> usize {
    let xs: Vec<&Rational> = g.s1.iter().filter(|v| !v.is_zero()).collect();
    let ys: Vec<&Rational> = g.s2.iter().filter(|v| !v.is_zero()).collect();
    let mut worst = 0;
    for a in &xs {
        for b in &ys {
            // x/a + y/b = 1  =>  y = b - b*x/a
            let slope = *b / *a;
            let count = xs
                .iter()
                .filter(|x| **x != *a)
                .filter(|x| {
                    let y = *b - &slope * **x;
                    !y.is_zero() && g.s2.binary_search(&y).is_ok()
                })
                .count();
            worst = worst.max(count);
        }
    }
    worst
}

impl Grid {
    pub fn s1(&self) -> &[Rational] {
        &self.s1
    }

    pub fn s2(&self) -> &[Rational] {
        &self.s2
    }

    /// `|S1|`.
    pub fn n(&self) -> usize {
        self.s1.len()
    }

    /// `|S2|`.
    pub fn m(&self) -> usize {
        self.s2.len()
    }

    /// 0-based position of zero in `S1`.
    pub fn i0(&self) -> usize {
        self.i0
    }

    /// 0-based position of zero in `S2`.
    pub fn j0(&self) -> usize {
        self.j0
    }

    pub fn is_square(&self) -> bool {
        self.n() == self.m()
    }

    /// True for `{0,...,n-1}^2`.
    pub fn is_standard(&self) -> bool {
        self.is_square()
            && self.i0 == 0
            && self.s1 == self.s2
            && self.s1.iter().enumerate().all(|(i, v)| *v == Rational::from(i))
    }

    /// Number of nonzero points, `nm - 1`.
    pub fn num_points(&self) -> usize {
        self.n() * self.m() - 1
    }

    /// Nonzero points in row-major order of `(xi, yj)`. Indices into this list
    /// are the point indices used by line families, covers and weightings.
    pub fn points(&self) -> Vec<GridPoint> {
        let mut out = Vec::with_capacity(self.num_points());
        for (xi, x) in self.s1.iter().enumerate() {
            for (yj, y) in self.s2.iter().enumerate() {
                if xi == self.i0 && yj == self.j0 {
                    continue;
                }
                out.push(self.make_point(xi, yj, x, y));
            }
        }
        out
    }

    fn make_point(&self, xi: usize, yj: usize, x: &Rational, y: &Rational) -> GridPoint {
        let class = match (xi == self.i0, yj == self.j0) {
            (true, true) => PointClass::Origin,
            (false, false) => PointClass::Interior,
            _ => PointClass::Boundary,
        };
        GridPoint { x: x.clone(), y: y.clone(), class, xi, yj }
    }

    /// Index of the nonzero point `(s1[xi], s2[yj])` in [`Grid::points`].
    pub fn point_index(&self, xi: usize, yj: usize) -> Option<usize> {
        if xi >= self.n() || yj >= self.m() || (xi == self.i0 && yj == self.j0) {
            return None;
        }
        let flat = xi * self.m() + yj;
        let origin = self.i0 * self.m() + self.j0;
        Some(if flat > origin { flat - 1 } else { flat })
    }

    pub fn index_of(&self, x: &Rational, y: &Rational) -> Option<usize> {
        let xi = self.s1.binary_search(x).ok()?;
        let yj = self.s2.binary_search(y).ok()?;
        self.point_index(xi, yj)
    }

    pub fn point(&self, index: usize) -> GridPoint {
        let origin = self.i0 * self.m() + self.j0;
        let flat = if index >= origin { index + 1 } else { index };
        let (xi, yj) = (flat / self.m(), flat % self.m());
        self.make_point(xi, yj, &self.s1[xi], &self.s2[yj])
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("grid serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Grid> {
        let doc: GridDoc = serde_json::from_str(s)?;
        make_grid(doc.s1, doc.s2)
    }

    /// Short stable fingerprint of the axes, used in cover file headers.
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.to_json().as_bytes());
        hex::encode(&digest[..8])
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Rational]| v.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{{{}}} x {{{}}}", join(&self.s1), join(&self.s2))
    }
}

#[derive(Serialize, Deserialize)]
struct GridDoc {
    s1: Vec<Rational>,
    s2: Vec<Rational>,
}

impl Serialize for Grid {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GridDoc { s1: self.s1.clone(), s2: self.s2.clone() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Grid {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = GridDoc::deserialize(deserializer)?;
        make_grid(doc.s1, doc.s2).map_err(serde::de::Error::custom)
    }
}
