//! Code sets on tori: components, translation classes, radius assignments, and
//! the perfect-code / perfect-domination verifiers.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::metric::{ball_indices, ball_offsets, truncated_distance, Ambient, MetricError, Point, VertexSet};
use crate::report::{FailureKind, VerifyReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("operation needs a torus ambient")]
    NotTorus,
    #[error("no radius assigned to translation class {0}")]
    MissingKappa(ClassKey),
    #[error("target moduli {target:?} are not multiples of {source_moduli:?}")]
    NonMultipleModuli {
        source_moduli: Vec<i64>,
        target: Vec<i64>,
    },
    #[error("multiplier {0} < 1")]
    BadMultiplier(i64),
    #[error("component containing {0} wraps around the torus")]
    Wraps(Point),
    #[error("bad class key: {0}")]
    BadClassKey(String),
}

/// A vertex subset of a finite ambient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSet {
    pub ambient: Ambient,
    pub vertices: VertexSet,
}

impl CodeSet {
    pub fn new(ambient: Ambient, vertices: impl IntoIterator<Item = Point>) -> Result<Self, CodeError> {
        ambient.validate()?;
        let vertices: VertexSet = vertices.into_iter().collect();
        for v in &vertices {
            ambient.check_dim(v)?;
            if !ambient.contains(v) {
                return Err(MetricError::OutsideAmbient(v.clone()).into());
            }
        }
        Ok(CodeSet { ambient, vertices })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Shift every vertex by `offset` (wrapping on a torus).
    pub fn translate(&self, offset: &Point) -> Result<CodeSet, CodeError> {
        let moved: Option<Vec<Point>> = self
            .vertices
            .iter()
            .map(|v| self.ambient.normalize(&v.add(offset)))
            .collect();
        let moved = moved.ok_or_else(|| MetricError::OutsideAmbient(offset.clone()))?;
        CodeSet::new(self.ambient.clone(), moved)
    }
}

/// Translation-class key: the component shifted so its coordinate-wise minimum is the origin.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassKey(pub Vec<Point>);

impl ClassKey {
    pub fn from_points(points: &[Point]) -> ClassKey {
        let n = points.first().map_or(0, |p| p.dim());
        let min: Vec<i64> = (0..n)
            .map(|i| points.iter().map(|p| p.0[i]).min().unwrap_or(0))
            .collect();
        let min = Point(min);
        let mut cells: Vec<Point> = points.iter().map(|p| p.sub(&min)).collect();
        cells.sort();
        cells.dedup();
        ClassKey(cells)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for ClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|p| {
                p.0.iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        write!(f, "{}", parts.join(";"))
    }
}

impl FromStr for ClassKey {
    type Err = CodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let pts: Result<Vec<Point>, _> = s
            .split(';')
            .map(|part| {
                part.split(',')
                    .map(|c| c.trim().parse::<i64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map(Point)
            })
            .collect();
        let pts = pts.map_err(|e| CodeError::BadClassKey(format!("{s}: {e}")))?;
        let key = ClassKey::from_points(&pts);
        let mut sorted = pts;
        sorted.sort();
        sorted.dedup();
        if key.0 != sorted {
            return Err(CodeError::BadClassKey(format!("{s}: not normalized")));
        }
        Ok(key)
    }
}

impl Serialize for ClassKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ClassKey {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A connected component of a code set under grid adjacency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub vertices: VertexSet,
    pub class_key: ClassKey,
    /// Unwrapped coordinates, aligned with `vertices` order. `None` when the component wraps a torus axis.
    pub lift: Option<Vec<Point>>,
}

impl Component {
    fn build(vertices: VertexSet, a: &Ambient) -> Component {
        let order: Vec<Point> = vertices.to_vec();
        let pos: HashMap<&Point, usize> = order.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let n = a.dim();
        let mut lift: Vec<Option<Point>> = vec![None; order.len()];
        let mut consistent = true;
        lift[0] = Some(order[0].clone());
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let base = lift[i].clone().expect("queued vertices are lifted");
            for axis in 0..n {
                for step in [-1i64, 1] {
                    let mut off = vec![0; n];
                    off[axis] = step;
                    let Some(q) = a.normalize(&order[i].add(&Point(off))) else {
                        continue;
                    };
                    if q == order[i] {
                        continue;
                    }
                    let Some(&j) = pos.get(&q) else { continue };
                    let d = a.diff(&order[i], &q).expect("same ambient");
                    let target = base.add(&d);
                    match &lift[j] {
                        Some(l) if *l != target => consistent = false,
                        Some(_) => {}
                        None => {
                            lift[j] = Some(target);
                            queue.push_back(j);
                        }
                    }
                }
            }
        }
        let lift: Option<Vec<Point>> = if consistent {
            lift.into_iter().collect()
        } else {
            None
        };
        let class_key = match &lift {
            Some(l) => ClassKey::from_points(l),
            None => ClassKey::from_points(&order),
        };
        Component {
            vertices,
            class_key,
            lift,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn wraps(&self) -> bool {
        self.lift.is_none()
    }

    pub fn min_vertex(&self) -> &Point {
        self.vertices.first().expect("components are nonempty")
    }
}

/// Maximal grid-connected pieces of `S`, sorted by their smallest vertex.
pub fn components_of(s: &CodeSet) -> Vec<Component> {
    let a = &s.ambient;
    let n = a.dim();
    let mut seen: HashSet<&Point> = HashSet::new();
    let mut out = Vec::new();
    for start in &s.vertices {
        if !seen.insert(start) {
            continue;
        }
        let mut members = VertexSet::new();
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            members.insert(u.clone());
            for axis in 0..n {
                for step in [-1i64, 1] {
                    let mut off = vec![0; n];
                    off[axis] = step;
                    let Some(q) = a.normalize(&u.add(&Point(off))) else {
                        continue;
                    };
                    if let Some(v) = s.vertices.get(&q) {
                        if seen.insert(v) {
                            stack.push(v);
                        }
                    }
                }
            }
        }
        out.push(Component::build(members, a));
    }
    out
}

/// Radius per translation class, with an optional default for every class.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KappaAssignment {
    pub by_class: BTreeMap<ClassKey, usize>,
    pub uniform: Option<usize>,
}

impl KappaAssignment {
    pub fn uniform(t: usize) -> Self {
        KappaAssignment {
            by_class: BTreeMap::new(),
            uniform: Some(t),
        }
    }

    pub fn with_class(mut self, key: ClassKey, t: usize) -> Self {
        self.by_class.insert(key, t);
        self
    }

    pub fn radius_for(&self, key: &ClassKey) -> Option<usize> {
        self.by_class.get(key).copied().or(self.uniform)
    }
}

/// A component together with its truncated ball.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSphere {
    pub center: Component,
    pub radius: usize,
    pub ball: VertexSet,
}

impl TruncatedSphere {
    pub fn new(center: Component, radius: usize, a: &Ambient) -> Result<Self, CodeError> {
        let ball = crate::metric::truncated_ball(&center.vertices, radius as i64, a)?.vertices;
        Ok(TruncatedSphere {
            center,
            radius,
            ball,
        })
    }
}

/// Checks the perfect truncated-metric code conditions on a torus:
/// the balls of all components partition the torus, and every vertex has a
/// unique nearest code vertex.
///
/// With a single radius the nearest vertex is taken over the whole code. With
/// mixed radii it is taken inside the component whose ball owns the vertex,
/// which is the two-radius form of the definition.
pub fn verify_kappa_ptmc(s: &CodeSet, kappa: &KappaAssignment) -> Result<VerifyReport<Point>, CodeError> {
    let a = &s.ambient;
    if !a.is_torus() {
        return Err(CodeError::NotTorus);
    }
    let n = a.dim();
    if let Some(axis) = a.degenerate_axis() {
        let w = a.normalize(&Point::unit(n, axis)).expect("torus");
        return Ok(VerifyReport::fail(
            FailureKind::DegenerateAmbient,
            vec![w],
            format!("axis {axis} has modulus below 3"),
        ));
    }
    let comps = components_of(s);
    let mut radii = Vec::with_capacity(comps.len());
    for c in &comps {
        let r = kappa
            .radius_for(&c.class_key)
            .ok_or_else(|| CodeError::MissingKappa(c.class_key.clone()))?;
        if r < 1 || r > n {
            return Ok(VerifyReport::fail(
                FailureKind::BadRadius,
                vec![c.min_vertex().clone()],
                format!("radius {r} outside [1, {n}]"),
            ));
        }
        radii.push(r);
    }

    let mut offsets: HashMap<usize, Vec<Vec<i64>>> = HashMap::new();
    let mut count = vec![0u32; a.len()];
    let mut owner = vec![usize::MAX; a.len()];
    for (ci, c) in comps.iter().enumerate() {
        let offs = offsets.entry(radii[ci]).or_insert_with(|| ball_offsets(n, radii[ci]));
        let (idx, _) = ball_indices(a, c.vertices.iter(), offs);
        for i in idx {
            count[i] += 1;
            owner[i] = ci;
        }
    }
    if let Some(i) = count.iter().position(|&k| k != 1) {
        let u = a.point_at(i);
        if count[i] == 0 {
            return Ok(VerifyReport::fail(
                FailureKind::Gap,
                vec![u],
                "vertex lies in no truncated sphere",
            ));
        }
        let mut witness = vec![u.clone()];
        for (ci, c) in comps.iter().enumerate() {
            let d = c
                .vertices
                .iter()
                .map(|v| truncated_distance(&u, v, a).expect("same ambient"))
                .min()
                .unwrap_or(n + 1);
            if d <= radii[ci] {
                witness.push(c.min_vertex().clone());
            }
        }
        return Ok(VerifyReport::fail(
            FailureKind::Overlap,
            witness,
            format!("vertex lies in {} truncated spheres", count[i]),
        ));
    }

    let uniform = radii.windows(2).all(|w| w[0] == w[1]);
    let full = ball_offsets(n, n);
    for i in 0..a.len() {
        let u = a.point_at(i);
        let mut best = n + 1;
        let mut tied: Vec<Point> = Vec::new();
        let mut consider = |v: Point, d: usize| {
            if d < best {
                best = d;
                tied.clear();
                tied.push(v);
            } else if d == best {
                tied.push(v);
            }
        };
        if uniform {
            for off in &full {
                let j = a.shifted_index(&u, off).expect("torus");
                let v = a.point_at(j);
                if s.vertices.contains(&v) {
                    let d = off.iter().filter(|&&x| x != 0).count();
                    consider(v, d);
                }
            }
            if tied.is_empty() {
                tied = s.vertices.to_vec();
            }
        } else {
            for v in &comps[owner[i]].vertices {
                let d = truncated_distance(&u, v, a)?;
                consider(v.clone(), d);
            }
        }
        if tied.len() != 1 {
            let mut witness = vec![u];
            witness.extend(tied);
            return Ok(VerifyReport::fail(
                FailureKind::NonuniqueNearest,
                witness,
                format!("several code vertices at truncated distance {best}"),
            ));
        }
    }
    Ok(VerifyReport::pass())
}

/// `verify_kappa_ptmc` with one radius for every class.
pub fn verify_t_ptmc(s: &CodeSet, t: usize) -> Result<VerifyReport<Point>, CodeError> {
    verify_kappa_ptmc(s, &KappaAssignment::uniform(t))
}

fn membership(g: &Graph, code: &[usize]) -> Vec<bool> {
    let mut in_s = vec![false; g.len()];
    for &v in code {
        in_s[v] = true;
    }
    in_s
}

fn first_internal_edge(g: &Graph, in_s: &[bool]) -> Option<(usize, usize)> {
    (0..g.len())
        .filter(|&u| in_s[u])
        .find_map(|u| g.neighbors(u).iter().find(|&&v| in_s[v] && v > u).map(|&v| (u, v)))
}

/// Perfect domination: every vertex outside `code` has exactly one neighbor in it.
/// The report's `isolated` flag records independence of `code`; with
/// `require_isolated` a dependent code fails.
pub fn verify_pds(code: &[usize], g: &Graph, require_isolated: bool) -> VerifyReport<usize> {
    let in_s = membership(g, code);
    let internal = first_internal_edge(g, &in_s);
    let isolated = internal.is_none();
    for v in 0..g.len() {
        if in_s[v] {
            continue;
        }
        let seen: Vec<usize> = g.neighbors(v).iter().copied().filter(|&u| in_s[u]).collect();
        match seen.len() {
            1 => {}
            0 => {
                return VerifyReport::fail(FailureKind::Gap, vec![v], "undominated vertex")
                    .with_isolated(isolated)
            }
            k => {
                let mut w = vec![v];
                w.extend(seen);
                return VerifyReport::fail(FailureKind::Overlap, w, format!("dominated {k} times"))
                    .with_isolated(isolated);
            }
        }
    }
    if require_isolated {
        if let Some((u, v)) = internal {
            return VerifyReport::fail(
                FailureKind::AdjacentCenters,
                vec![u, v],
                "code vertices are adjacent",
            )
            .with_isolated(false);
        }
    }
    VerifyReport::pass().with_isolated(isolated)
}

/// Non-isolated perfect domination: every vertex outside `code` sees either exactly
/// one code vertex, or exactly two code vertices that are the ends of an edge.
pub fn verify_non_isolated_pds(code: &[usize], g: &Graph) -> VerifyReport<usize> {
    let in_s = membership(g, code);
    let isolated = first_internal_edge(g, &in_s).is_none();
    for v in 0..g.len() {
        if in_s[v] {
            continue;
        }
        let seen: Vec<usize> = g.neighbors(v).iter().copied().filter(|&u| in_s[u]).collect();
        let ok = seen.len() == 1 || (seen.len() == 2 && g.is_edge(seen[0], seen[1]));
        if !ok {
            if seen.is_empty() {
                return VerifyReport::fail(FailureKind::Gap, vec![v], "undominated vertex")
                    .with_isolated(isolated);
            }
            let mut w = vec![v];
            w.extend(seen);
            return VerifyReport::fail(
                FailureKind::Overlap,
                w,
                "dominated by code vertices that are not one vertex or one code edge",
            )
            .with_isolated(isolated);
        }
    }
    VerifyReport::pass().with_isolated(isolated)
}

/// Per-axis vertex counts of a full integer box.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxSpec {
    pub extents: Vec<usize>,
}

impl BoxSpec {
    /// Number of axes with extent above 1.
    pub fn r(&self) -> usize {
        self.extents.iter().filter(|&&e| e > 1).count()
    }

    pub fn volume(&self) -> usize {
        self.extents.iter().product()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoxHullError {
    #[error("component is not a full box")]
    NotABox,
    #[error("component wraps around the torus")]
    Wraps,
}

/// `Ok` iff the component is exactly the integer box spanned by its (unwrapped) vertices.
pub fn box_hull_check(h: &Component) -> Result<BoxSpec, BoxHullError> {
    if h.wraps() {
        return Err(BoxHullError::Wraps);
    }
    let key = &h.class_key.0;
    let n = key[0].dim();
    let extents: Vec<usize> = (0..n)
        .map(|i| key.iter().map(|p| p.0[i]).max().unwrap_or(0) as usize + 1)
        .collect();
    let spec = BoxSpec { extents };
    if spec.volume() == key.len() {
        Ok(spec)
    } else {
        Err(BoxHullError::NotABox)
    }
}

/// Preimage of `S` under the projection from the torus with moduli `m_i * k_i` onto `S`'s torus.
pub fn inflate_code(s: &CodeSet, multipliers: &[i64]) -> Result<CodeSet, CodeError> {
    let moduli = s.ambient.moduli().ok_or(CodeError::NotTorus)?;
    if multipliers.len() != moduli.len() {
        return Err(MetricError::DimensionMismatch {
            expected: moduli.len(),
            found: multipliers.len(),
        }
        .into());
    }
    if let Some(&k) = multipliers.iter().find(|&&k| k < 1) {
        return Err(CodeError::BadMultiplier(k));
    }
    let target: Vec<i64> = moduli.iter().zip(multipliers).map(|(m, k)| m * k).collect();
    let shifts = Ambient::torus(multipliers.to_vec())?;
    let mut out = Vec::with_capacity(s.len() * shifts.len());
    for v in &s.vertices {
        for j in shifts.vertices() {
            out.push(Point(
                v.0.iter()
                    .zip(&j.0)
                    .zip(moduli)
                    .map(|((c, ji), m)| c + ji * m)
                    .collect(),
            ));
        }
    }
    CodeSet::new(Ambient::torus(target)?, out)
}

/// `inflate_code` towards an explicit target torus.
pub fn inflate_to(s: &CodeSet, target: &Ambient) -> Result<CodeSet, CodeError> {
    let moduli = s.ambient.moduli().ok_or(CodeError::NotTorus)?;
    let tm = target.moduli().ok_or(CodeError::NotTorus)?;
    let bad = || CodeError::NonMultipleModuli {
        source_moduli: moduli.to_vec(),
        target: tm.to_vec(),
    };
    if tm.len() != moduli.len() {
        return Err(bad());
    }
    let ks: Option<Vec<i64>> = tm
        .iter()
        .zip(moduli)
        .map(|(t, m)| (t % m == 0 && t >= m).then_some(t / m))
        .collect();
    inflate_code(s, &ks.ok_or_else(bad)?)
}

/// Number of components per translation class.
pub fn class_census(s: &CodeSet) -> BTreeMap<ClassKey, usize> {
    let mut out = BTreeMap::new();
    for c in components_of(s) {
        *out.entry(c.class_key).or_insert(0) += 1;
    }
    out
}

/// Minimum l1 distance between distinct components of the periodic code in `Z^n`
/// that projects onto `S`. `None` when `S` is empty.
pub fn min_component_l1_distance(s: &CodeSet) -> Result<Option<i64>, CodeError> {
    let moduli = s.ambient.moduli().ok_or(CodeError::NotTorus)?.to_vec();
    let n = moduli.len();
    let comps = components_of(s);
    let mut lifts = Vec::with_capacity(comps.len());
    for c in &comps {
        lifts.push(c.lift.clone().ok_or_else(|| CodeError::Wraps(c.min_vertex().clone()))?);
    }
    let shifts = Ambient::window(vec![(-3, 3); n])?;
    let shift_vecs: Vec<Vec<i64>> = shifts
        .vertices()
        .map(|w| w.0.iter().zip(&moduli).map(|(a, m)| a * m).collect())
        .collect();
    let zero = vec![0i64; n];
    let mut best: Option<i64> = None;
    for (i, li) in lifts.iter().enumerate() {
        for (j, lj) in lifts.iter().enumerate().skip(i) {
            for w in &shift_vecs {
                if i == j && *w == zero {
                    continue;
                }
                for u in li {
                    for v in lj {
                        let d: i64 = (0..n).map(|k| (u.0[k] - v.0[k] - w[k]).abs()).sum();
                        if best.is_none_or(|b| d < b) {
                            best = Some(d);
                        }
                    }
                }
            }
        }
    }
    Ok(best)
}

/// A component shape in every orientation it may be placed in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shape {
    pub name: String,
    /// Cells of each orientation, normalized to a zero minimum corner.
    pub orientations: Vec<Vec<Point>>,
}

impl Shape {
    /// The unit `r`-cube `{0,1}^r` in `Z^n`, in all `C(n, r)` axis-subset orientations.
    pub fn unit_cube(n: usize, r: usize) -> Shape {
        assert!(r <= n, "cube dimension exceeds ambient dimension");
        let name = match r {
            0 => "singleton".to_string(),
            1 => "unit-edge".to_string(),
            2 => "unit-square".to_string(),
            _ => format!("unit-{r}-cube"),
        };
        let mut orientations = Vec::new();
        for axes in combinations(n, r) {
            let mut cells = Vec::with_capacity(1 << r);
            for bits in 0..(1usize << r) {
                let mut c = vec![0i64; n];
                for (k, &ax) in axes.iter().enumerate() {
                    c[ax] = ((bits >> (r - 1 - k)) & 1) as i64;
                }
                cells.push(Point(c));
            }
            cells.sort();
            orientations.push(cells);
        }
        Shape { name, orientations }
    }

    /// A shape with a single, fixed orientation.
    pub fn fixed(name: impl Into<String>, cells: Vec<Point>) -> Shape {
        Shape {
            name: name.into(),
            orientations: vec![ClassKey::from_points(&cells).0],
        }
    }

    pub fn class_keys(&self) -> Vec<ClassKey> {
        self.orientations.iter().map(|o| ClassKey::from_points(o)).collect()
    }

    pub fn cell_count(&self) -> usize {
        self.orientations.first().map_or(0, |o| o.len())
    }
}

/// `r`-element subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, r, &mut Vec::new(), &mut out);
    out
}
