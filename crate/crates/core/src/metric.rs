//! Points, ambient spaces, and the truncated distance on `Z^n` windows and tori.
//!
//! Two points are "close" when every coordinate offset is in `{-1, 0, 1}`; then
//! their truncated distance is the Hamming distance, otherwise it is `n + 1`.
//! On a torus the offset along each axis is the wrapped representative of least
//! absolute value (ties go to the positive representative).

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("truncated ball needs a nonempty center")]
    EmptyCenter,
    #[error("radius {t} outside [0, {n}]")]
    RadiusOutOfRange { t: i64, n: usize },
    #[error("invalid ambient: {0}")]
    InvalidAmbient(String),
    #[error("point {0} is not a vertex of the ambient")]
    OutsideAmbient(Point),
}

/// An integer vector of fixed dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<i64>);

impl Point {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        Point(coords.into())
    }

    pub fn origin(n: usize) -> Self {
        Point(vec![0; n])
    }

    /// The unit vector along `axis`.
    pub fn unit(n: usize, axis: usize) -> Self {
        let mut c = vec![0; n];
        c[axis] = 1;
        Point(c)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn add(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<i64>> for Point {
    fn from(v: Vec<i64>) -> Self {
        Point(v)
    }
}

/// Duplicate-free set of points in lexicographic order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(BTreeSet<Point>);

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, p: Point) -> bool {
        self.0.insert(p)
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.0.contains(p)
    }

    pub fn get(&self, p: &Point) -> Option<&Point> {
        self.0.get(p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Point> + '_ {
        self.0.iter()
    }

    pub fn first(&self) -> Option<&Point> {
        self.0.iter().next()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn to_vec(&self) -> Vec<Point> {
        self.0.iter().cloned().collect()
    }
}

impl FromIterator<Point> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Point>>(iter: I) -> Self {
        VertexSet(iter.into_iter().collect())
    }
}

impl IntoIterator for VertexSet {
    type Item = Point;
    type IntoIter = std::collections::btree_set::IntoIter<Point>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a Point;
    type IntoIter = std::collections::btree_set::Iter<'a, Point>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// A finite ambient space: a box window of `Z^n` or a torus `C_m1 x ... x C_mn`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Ambient {
    /// Inclusive per-axis bounds.
    Window { bounds: Vec<(i64, i64)> },
    Torus { moduli: Vec<i64> },
}

impl Ambient {
    pub fn torus(moduli: impl Into<Vec<i64>>) -> Result<Self, MetricError> {
        let a = Ambient::Torus {
            moduli: moduli.into(),
        };
        a.validate()?;
        Ok(a)
    }

    pub fn window(bounds: impl Into<Vec<(i64, i64)>>) -> Result<Self, MetricError> {
        let a = Ambient::Window {
            bounds: bounds.into(),
        };
        a.validate()?;
        Ok(a)
    }

    /// The window `[-r, r]^n`.
    pub fn centered_window(n: usize, r: i64) -> Self {
        Ambient::Window {
            bounds: vec![(-r, r); n],
        }
    }

    pub fn validate(&self) -> Result<(), MetricError> {
        match self {
            Ambient::Torus { moduli } => {
                if moduli.is_empty() {
                    return Err(MetricError::InvalidAmbient("dimension 0".into()));
                }
                if let Some(m) = moduli.iter().find(|&&m| m < 1) {
                    return Err(MetricError::InvalidAmbient(format!("modulus {m} < 1")));
                }
            }
            Ambient::Window { bounds } => {
                if bounds.is_empty() {
                    return Err(MetricError::InvalidAmbient("dimension 0".into()));
                }
                if let Some((lo, hi)) = bounds.iter().find(|(lo, hi)| lo > hi) {
                    return Err(MetricError::InvalidAmbient(format!(
                        "empty axis [{lo}, {hi}]"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match self {
            Ambient::Torus { moduli } => moduli.len(),
            Ambient::Window { bounds } => bounds.len(),
        }
    }

    pub fn is_torus(&self) -> bool {
        matches!(self, Ambient::Torus { .. })
    }

    pub fn moduli(&self) -> Option<&[i64]> {
        match self {
            Ambient::Torus { moduli } => Some(moduli),
            Ambient::Window { .. } => None,
        }
    }

    fn extent(&self, axis: usize) -> i64 {
        match self {
            Ambient::Torus { moduli } => moduli[axis],
            Ambient::Window { bounds } => bounds[axis].1 - bounds[axis].0 + 1,
        }
    }

    fn low(&self, axis: usize) -> i64 {
        match self {
            Ambient::Torus { .. } => 0,
            Ambient::Window { bounds } => bounds[axis].0,
        }
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        (0..self.dim()).map(|i| self.extent(i) as usize).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// First torus axis whose modulus is below 3, if any. Balls self-overlap there.
    pub fn degenerate_axis(&self) -> Option<usize> {
        self.moduli()?.iter().position(|&m| m < 3)
    }

    pub fn check_dim(&self, p: &Point) -> Result<(), MetricError> {
        if p.dim() != self.dim() {
            return Err(MetricError::DimensionMismatch {
                expected: self.dim(),
                found: p.dim(),
            });
        }
        Ok(())
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.dim()
            && p.0.iter().enumerate().all(|(i, &c)| {
                let lo = self.low(i);
                c >= lo && c < lo + self.extent(i)
            })
    }

    /// Reduces `p` into the ambient: wraps on a torus, `None` outside a window.
    pub fn normalize(&self, p: &Point) -> Option<Point> {
        match self {
            Ambient::Torus { moduli } => Some(Point(
                p.0.iter()
                    .zip(moduli)
                    .map(|(c, m)| c.rem_euclid(*m))
                    .collect(),
            )),
            Ambient::Window { .. } => self.contains(p).then(|| p.clone()),
        }
    }

    /// Signed offset from `u` to `v` along `axis`.
    pub fn axis_diff(&self, axis: usize, u: i64, v: i64) -> i64 {
        match self {
            Ambient::Torus { moduli } => {
                let m = moduli[axis];
                let d = (v - u).rem_euclid(m);
                if 2 * d > m {
                    d - m
                } else {
                    d
                }
            }
            Ambient::Window { .. } => v - u,
        }
    }

    pub fn diff(&self, u: &Point, v: &Point) -> Result<Point, MetricError> {
        self.check_dim(u)?;
        self.check_dim(v)?;
        Ok(Point(
            (0..self.dim())
                .map(|i| self.axis_diff(i, u.0[i], v.0[i]))
                .collect(),
        ))
    }

    /// Row-major index with axis 0 most significant, so index order is lexicographic.
    pub fn index(&self, p: &Point) -> Option<usize> {
        if !self.contains(p) {
            return None;
        }
        let mut idx = 0usize;
        for i in 0..self.dim() {
            idx = idx * self.extent(i) as usize + (p.0[i] - self.low(i)) as usize;
        }
        Some(idx)
    }

    pub fn point_at(&self, mut idx: usize) -> Point {
        let n = self.dim();
        let mut c = vec![0; n];
        for i in (0..n).rev() {
            let e = self.extent(i) as usize;
            c[i] = (idx % e) as i64 + self.low(i);
            idx /= e;
        }
        Point(c)
    }

    /// All vertices in lexicographic order.
    pub fn vertices(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.len()).map(move |i| self.point_at(i))
    }

    /// Index of `p + offset`, wrapping on a torus; `None` if it leaves a window.
    pub fn shifted_index(&self, p: &Point, offset: &[i64]) -> Option<usize> {
        let q = Point(p.0.iter().zip(offset).map(|(a, b)| a + b).collect());
        self.index(&self.normalize(&q)?)
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ambient::Torus { moduli } => {
                let parts: Vec<String> = moduli.iter().map(|m| format!("C{m}")).collect();
                write!(f, "{}", parts.join("x"))
            }
            Ambient::Window { bounds } => {
                let parts: Vec<String> = bounds.iter().map(|(a, b)| format!("[{a},{b}]")).collect();
                write!(f, "{}", parts.join("x"))
            }
        }
    }
}

fn same_dim(u: &Point, v: &Point) -> Result<(), MetricError> {
    if u.dim() != v.dim() {
        return Err(MetricError::DimensionMismatch {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    Ok(())
}

/// Number of axes where the coordinates differ.
pub fn hamming(u: &Point, v: &Point) -> Result<usize, MetricError> {
    same_dim(u, v)?;
    Ok(u.0.iter().zip(&v.0).filter(|(a, b)| a != b).count())
}

/// Largest absolute per-axis offset, wrapped on a torus.
pub fn chebyshev(u: &Point, v: &Point, a: &Ambient) -> Result<i64, MetricError> {
    Ok(a.diff(u, v)?.0.iter().map(|d| d.abs()).max().unwrap_or(0))
}

/// The truncated distance: Hamming distance when all offsets are in `{-1,0,1}`, else `n+1`.
pub fn truncated_distance(u: &Point, v: &Point, a: &Ambient) -> Result<usize, MetricError> {
    let d = a.diff(u, v)?;
    if d.0.iter().any(|x| x.abs() > 1) {
        Ok(a.dim() + 1)
    } else {
        Ok(d.0.iter().filter(|&&x| x != 0).count())
    }
}

/// Offsets in `{-1,0,1}^n` with at most `t` nonzero entries, in lexicographic order.
pub fn ball_offsets(n: usize, t: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![-1i64; n];
    loop {
        if cur.iter().filter(|&&x| x != 0).count() <= t {
            out.push(cur.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < 1 {
                cur[i] += 1;
                break;
            }
            cur[i] = -1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    pub vertices: VertexSet,
    /// Set when part of the ball fell outside a window.
    pub clipped: bool,
}

/// All ambient vertices within truncated distance `t` of some vertex of `center`.
pub fn truncated_ball(center: &VertexSet, t: i64, a: &Ambient) -> Result<Ball, MetricError> {
    let n = a.dim();
    if center.is_empty() {
        return Err(MetricError::EmptyCenter);
    }
    if t < 0 || t as usize > n {
        return Err(MetricError::RadiusOutOfRange { t, n });
    }
    for s in center {
        a.check_dim(s)?;
        if !a.contains(s) {
            return Err(MetricError::OutsideAmbient(s.clone()));
        }
    }
    let (indices, clipped) = ball_indices(a, center.iter(), &ball_offsets(n, t as usize));
    Ok(Ball {
        vertices: indices.into_iter().map(|i| a.point_at(i)).collect(),
        clipped,
    })
}

/// Sorted, deduplicated ambient indices of the ball around `center` for precomputed offsets.
pub(crate) fn ball_indices<'a>(
    a: &Ambient,
    center: impl Iterator<Item = &'a Point>,
    offsets: &[Vec<i64>],
) -> (Vec<usize>, bool) {
    let mut out = Vec::new();
    let mut clipped = false;
    for s in center {
        for off in offsets {
            match a.shifted_index(s, off) {
                Some(i) => out.push(i),
                None => clipped = true,
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    (out, clipped)
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `sum_{i=0}^{t} 2^i * C(n, i)`: the size of an unclipped truncated ball around one vertex.
pub fn ball_size_formula(n: i64, t: i64) -> Result<u64, MetricError> {
    if n < 0 {
        return Err(MetricError::InvalidAmbient(format!("dimension {n} < 0")));
    }
    if t < 0 || t > n {
        return Err(MetricError::RadiusOutOfRange { t, n: n as usize });
    }
    Ok((0..=t as u64)
        .map(|i| (1u64 << i) * binomial(n as u64, i))
        .sum())
}

/// Vertices of a finite ambient in lexicographic order.
pub fn enumerate_vertices(a: &Ambient) -> impl Iterator<Item = Point> + '_ {
    a.vertices()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Point {
        Point::new(c.to_vec())
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming(&p(&[0, 0, 0]), &p(&[1, 1, 0])).unwrap(), 2);
        assert_eq!(hamming(&p(&[4, 2]), &p(&[4, 2])).unwrap(), 0);
        // On C3 x C3 the wrapped offset from 0 to 2 is -1: still one differing axis.
        let t = Ambient::torus(vec![3, 3]).unwrap();
        assert_eq!(t.diff(&p(&[0, 0]), &p(&[2, 0])).unwrap(), p(&[-1, 0]));
        assert_eq!(hamming(&p(&[0, 0]), &p(&[2, 0])).unwrap(), 1);
        assert!(matches!(
            hamming(&p(&[0]), &p(&[0, 0])),
            Err(MetricError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn truncated_distance_examples() {
        let w = Ambient::centered_window(2, 5);
        assert_eq!(truncated_distance(&p(&[0, 0]), &p(&[1, 1]), &w).unwrap(), 2);
        assert_eq!(truncated_distance(&p(&[0, 0]), &p(&[2, 0]), &w).unwrap(), 3);
        let w3 = Ambient::centered_window(3, 5);
        assert_eq!(
            truncated_distance(&p(&[0, 0, 0]), &p(&[1, 1, 1]), &w3).unwrap(),
            3
        );
        // Wrapping brings 0 and 4 together on C5.
        let t = Ambient::torus(vec![5, 5]).unwrap();
        assert_eq!(truncated_distance(&p(&[0, 0]), &p(&[4, 1]), &t).unwrap(), 2);
    }

    #[test]
    fn tie_goes_to_positive_representative() {
        let t = Ambient::torus(vec![4]).unwrap();
        assert_eq!(t.axis_diff(0, 0, 2), 2);
        assert_eq!(t.axis_diff(0, 2, 0), 2);
        assert_eq!(t.axis_diff(0, 0, 3), -1);
    }

    #[test]
    fn ball_examples() {
        let w = Ambient::centered_window(2, 3);
        let o: VertexSet = [p(&[0, 0])].into_iter().collect();
        let lee = truncated_ball(&o, 1, &w).unwrap();
        let expect: VertexSet = [[0, 0], [1, 0], [-1, 0], [0, 1], [0, -1]]
            .iter()
            .map(|c| p(c))
            .collect();
        assert_eq!(lee.vertices, expect);
        assert!(!lee.clipped);

        let boxed = truncated_ball(&o, 2, &w).unwrap();
        assert_eq!(boxed.vertices.len(), 9);

        let h: VertexSet = [p(&[0, 0]), p(&[1, 0])].into_iter().collect();
        assert_eq!(truncated_ball(&h, 0, &w).unwrap().vertices, h);
    }

    #[test]
    fn ball_clipping_is_reported() {
        let w = Ambient::window(vec![(0, 2), (0, 2)]).unwrap();
        let o: VertexSet = [p(&[0, 0])].into_iter().collect();
        let b = truncated_ball(&o, 2, &w).unwrap();
        assert!(b.clipped);
        assert_eq!(b.vertices.len(), 4);
    }

    #[test]
    fn ball_errors() {
        let w = Ambient::centered_window(2, 3);
        assert_eq!(
            truncated_ball(&VertexSet::new(), 1, &w),
            Err(MetricError::EmptyCenter)
        );
        let o: VertexSet = [p(&[0, 0])].into_iter().collect();
        assert!(matches!(
            truncated_ball(&o, 3, &w),
            Err(MetricError::RadiusOutOfRange { .. })
        ));
    }

    #[test]
    fn formula_examples() {
        assert_eq!(ball_size_formula(3, 1).unwrap(), 7);
        assert_eq!(ball_size_formula(4, 2).unwrap(), 33);
        assert_eq!(ball_size_formula(3, 3).unwrap(), 27);
        assert!(ball_size_formula(3, 4).is_err());
        assert!(ball_size_formula(3, -1).is_err());
    }

    #[test]
    fn enumeration_examples() {
        let t = Ambient::torus(vec![2, 2]).unwrap();
        let got: Vec<Point> = enumerate_vertices(&t).collect();
        assert_eq!(got, vec![p(&[0, 0]), p(&[0, 1]), p(&[1, 0]), p(&[1, 1])]);
        let w = Ambient::window(vec![(0, 1), (0, 0)]).unwrap();
        let got: Vec<Point> = enumerate_vertices(&w).collect();
        assert_eq!(got, vec![p(&[0, 0]), p(&[1, 0])]);
        assert_eq!(enumerate_vertices(&Ambient::torus(vec![3]).unwrap()).count(), 3);
    }

    #[test]
    fn invalid_ambients() {
        assert!(Ambient::torus(vec![0, 3]).is_err());
        assert!(Ambient::window(vec![(1, 0)]).is_err());
        assert_eq!(
            Ambient::torus(vec![3, 2]).unwrap().degenerate_axis(),
            Some(1)
        );
    }

    #[test]
    fn index_roundtrip() {
        let w = Ambient::window(vec![(-2, 1), (3, 5)]).unwrap();
        for (i, q) in w.vertices().enumerate() {
            assert_eq!(w.index(&q), Some(i));
        }
    }
}
