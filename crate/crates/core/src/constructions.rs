//! Explicit box codes and template-driven searches for mixed-radius codes.

use std::collections::{BTreeMap, HashSet};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cover::{solve_with, tiling_instance, CoverError, OutcomeKind, SearchConfig};
use crate::lattice::{class_census, CodeError, CodeSet, KappaAssignment, Shape};
use crate::metric::{ball_offsets, Ambient, MetricError, Point};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("c[{axis}] = {value} must be at least 2")]
    BadC { axis: usize, value: i64 },
    #[error("k[{axis}] = {value} must be at least 1")]
    BadK { axis: usize, value: i64 },
    #[error("c has {c} entries but k has {k}")]
    LengthMismatch { c: usize, k: usize },
    #[error("dimension {0} is below 3")]
    BadDimension(usize),
    #[error("template: {0}")]
    Template(String),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeBasis {
    pub generators: Vec<Point>,
    pub anchor: Point,
}

impl LatticeBasis {
    /// Integer determinant of the generator matrix (fraction-free elimination).
    pub fn determinant(&self) -> i64 {
        let n = self.generators.len();
        let mut m: Vec<Vec<i128>> = self
            .generators
            .iter()
            .map(|g| g.0.iter().map(|&x| x as i128).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if m[k][k] == 0 {
                let Some(p) = (k + 1..n).find(|&r| m[r][k] != 0) else {
                    return 0;
                };
                m.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
                }
                m[i][k] = 0;
            }
            prev = m[k][k];
        }
        if n == 0 {
            return 1;
        }
        (sign * m[n - 1][n - 1]) as i64
    }
}

fn check_c(c: &[i64]) -> Result<(), ConstructionError> {
    match c.iter().position(|&x| x < 2) {
        Some(axis) => Err(ConstructionError::BadC { axis, value: c[axis] }),
        None => Ok(()),
    }
}

/// Generators `(1 + c_i) e_i`, anchor at the origin.
pub fn thm2_lattice(c: &[i64]) -> Result<LatticeBasis, ConstructionError> {
    check_c(c)?;
    let n = c.len();
    let generators = c
        .iter()
        .enumerate()
        .map(|(i, &ci)| {
            let mut g = Point::origin(n);
            g.0[i] = 1 + ci;
            g
        })
        .collect();
    Ok(LatticeBasis {
        generators,
        anchor: Point::origin(n),
    })
}

/// One box of extent `c_i - 1` per lattice cell, at offset 1, on the torus with
/// moduli `(1 + c_i) k_i`; every component gets radius `n`.
pub fn build_thm2(c: &[i64], k: &[i64]) -> Result<(CodeSet, KappaAssignment), ConstructionError> {
    check_c(c)?;
    if c.len() != k.len() {
        return Err(ConstructionError::LengthMismatch { c: c.len(), k: k.len() });
    }
    if let Some(axis) = k.iter().position(|&x| x < 1) {
        return Err(ConstructionError::BadK { axis, value: k[axis] });
    }
    let n = c.len();
    let moduli: Vec<i64> = c.iter().zip(k).map(|(ci, ki)| (1 + ci) * ki).collect();
    let ambient = Ambient::torus(moduli)?;

    let box_shape = Ambient::window(c.iter().map(|&ci| (1, ci - 1)).collect::<Vec<_>>())?;
    let cells = Ambient::window(k.iter().map(|&ki| (0, ki - 1)).collect::<Vec<_>>())?;
    let mut vertices = Vec::new();
    for cell in cells.vertices() {
        let base = Point(cell.0.iter().zip(c).map(|(x, ci)| x * (1 + ci)).collect());
        vertices.extend(box_shape.vertices().map(|b| base.add(&b)));
    }
    let code = CodeSet::new(ambient, vertices)?;
    Ok((code, KappaAssignment::uniform(n)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateComponent {
    pub shape: Shape,
    pub radius: usize,
    /// Copies per fundamental region.
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateSpec {
    pub name: String,
    pub components: Vec<TemplateComponent>,
    pub torus: Ambient,
    pub fr_volume: usize,
}

/// Size of the truncated ball of radius `t` around `cells` in the unbounded lattice.
pub fn free_ball_volume(cells: &[Point], t: usize) -> usize {
    let n = cells.first().map_or(0, |p| p.dim());
    let offsets = ball_offsets(n, t);
    let mut seen = HashSet::new();
    for c in cells {
        for o in &offsets {
            seen.insert(c.0.iter().zip(o).map(|(a, b)| a + b).collect::<Vec<i64>>());
        }
    }
    seen.len()
}

impl TemplateSpec {
    pub fn ball_volume(&self, i: usize) -> usize {
        let c = &self.components[i];
        free_ball_volume(&c.shape.orientations[0], c.radius)
    }

    /// Checks the volume identity and returns the number of fundamental regions in the torus.
    pub fn fr_count(&self) -> Result<usize, ConstructionError> {
        let sum: usize = (0..self.components.len())
            .map(|i| self.components[i].multiplicity * self.ball_volume(i))
            .sum();
        if sum != self.fr_volume {
            return Err(ConstructionError::Template(format!(
                "multiplicities give volume {sum}, declared {}",
                self.fr_volume
            )));
        }
        let total = self.torus.len();
        if self.fr_volume == 0 || !total.is_multiple_of(self.fr_volume) {
            return Err(ConstructionError::Template(format!(
                "fundamental region volume {} does not divide torus size {total}",
                self.fr_volume
            )));
        }
        Ok(total / self.fr_volume)
    }

    pub fn shapes(&self) -> Vec<(Shape, usize)> {
        self.components
            .iter()
            .map(|c| (c.shape.clone(), c.radius))
            .collect()
    }

    /// Radius per translation class of every orientation of every shape.
    pub fn kappa(&self) -> KappaAssignment {
        let mut k = KappaAssignment::default();
        for c in &self.components {
            for key in c.shape.class_keys() {
                k = k.with_class(key, c.radius);
            }
        }
        k
    }

    /// Component counts per template shape; `None` if some component matches no shape.
    pub fn census(&self, code: &CodeSet) -> Option<Vec<usize>> {
        let mut counts = vec![0; self.components.len()];
        'class: for (key, count) in class_census(code) {
            for (i, c) in self.components.iter().enumerate() {
                if c.shape.class_keys().contains(&key) {
                    counts[i] += count;
                    continue 'class;
                }
            }
            return None;
        }
        Some(counts)
    }

    pub fn census_matches(&self, code: &CodeSet) -> bool {
        let Ok(frs) = self.fr_count() else {
            return false;
        };
        self.census(code).is_some_and(|counts| {
            counts
                .iter()
                .zip(&self.components)
                .all(|(&got, c)| got == c.multiplicity * frs)
        })
    }
}

/// Unit squares and singletons, both radius 1, two of each per region, on `C6 □ C6 □ C3`.
pub fn template_thm3() -> TemplateSpec {
    let mut t = template_thm4(3).expect("n = 3 is valid");
    t.name = "squares-and-singletons".into();
    t
}

/// `(n-1)`-cubes of radius 1 and singletons of radius `n-2`, two of each per region,
/// on `C6 □ ... □ C6 □ C3`.
pub fn template_thm4(n: usize) -> Result<TemplateSpec, ConstructionError> {
    if n < 3 {
        return Err(ConstructionError::BadDimension(n));
    }
    let components = vec![
        TemplateComponent {
            shape: Shape::unit_cube(n, n - 1),
            radius: 1,
            multiplicity: 2,
        },
        TemplateComponent {
            shape: Shape::unit_cube(n, 0),
            radius: n - 2,
            multiplicity: 2,
        },
    ];
    let mut moduli = vec![6; n - 1];
    moduli.push(3);
    let mut t = TemplateSpec {
        name: format!("cubes-and-singletons-{n}"),
        components,
        torus: Ambient::torus(moduli)?,
        fr_volume: 0,
    };
    t.fr_volume = (0..t.components.len())
        .map(|i| t.components[i].multiplicity * t.ball_volume(i))
        .sum();
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TemplateOutcome {
    Built {
        code: CodeSet,
        kappa: KappaAssignment,
        census_matches: bool,
        nodes: u64,
    },
    Infeasible {
        nodes: u64,
    },
    Timeout {
        nodes: u64,
    },
}

/// Searches for a tiling of the template's torus by its shapes' truncated balls.
///
/// The first placement of shape 0 is pinned at the origin, one orientation at a time;
/// this loses nothing because every translate of a tiling is a tiling. The result is
/// infeasible only when every pinned search is exhausted.
pub fn build_by_template(t: &TemplateSpec, cfg: SearchConfig) -> Result<TemplateOutcome, ConstructionError> {
    t.fr_count()?;
    let deadline = cfg.budget.map(|b| Instant::now() + b);
    let tiling = tiling_instance(&t.torus, &t.shapes())?;
    let origin = Point::origin(t.torus.dim());
    let pins: Vec<usize> = tiling
        .placements
        .iter()
        .enumerate()
        .filter(|(_, p)| p.shape == 0 && p.anchor == origin)
        .map(|(i, _)| i)
        .collect();

    let mut nodes = 0;
    let mut timed_out = false;
    for pin in pins {
        let budget = deadline.map(|d| d.saturating_duration_since(Instant::now()));
        if budget == Some(Duration::ZERO) {
            timed_out = true;
            break;
        }
        let out = solve_with(&tiling.instance, &[pin], SearchConfig { budget, ..cfg })?;
        nodes += out.nodes;
        match out.kind {
            OutcomeKind::Solution => {
                let shapes = t.shapes();
                let vertices = out
                    .tiles
                    .iter()
                    .flat_map(|&i| tiling.placements[i].cells(&shapes, &t.torus));
                let code = CodeSet::new(t.torus.clone(), vertices)?;
                let census_matches = t.census_matches(&code);
                return Ok(TemplateOutcome::Built {
                    code,
                    kappa: t.kappa(),
                    census_matches,
                    nodes,
                });
            }
            OutcomeKind::Timeout => timed_out = true,
            OutcomeKind::Infeasible => {}
        }
    }
    Ok(if timed_out {
        TemplateOutcome::Timeout { nodes }
    } else {
        TemplateOutcome::Infeasible { nodes }
    })
}

/// Component counts per shape name, for reports.
pub fn named_census(t: &TemplateSpec, code: &CodeSet) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    if let Some(counts) = t.census(code) {
        for (c, n) in t.components.iter().zip(counts) {
            *out.entry(c.shape.name.clone()).or_default() += n;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{components_of, min_component_l1_distance, verify_kappa_ptmc, verify_t_ptmc};

    #[test]
    fn lattice_examples() {
        let b = thm2_lattice(&[2, 2]).unwrap();
        assert_eq!(b.generators, vec![Point::new([3, 0]), Point::new([0, 3])]);
        assert_eq!(b.determinant(), 9);
        let b = thm2_lattice(&[4, 2, 3]).unwrap();
        assert_eq!(
            b.generators,
            vec![Point::new([5, 0, 0]), Point::new([0, 3, 0]), Point::new([0, 0, 4])]
        );
        assert_eq!(b.determinant(), 60);
        assert!(matches!(thm2_lattice(&[1, 3]), Err(ConstructionError::BadC { axis: 0, .. })));
    }

    #[test]
    fn determinant_general() {
        let b = LatticeBasis {
            generators: vec![Point::new([0, 2]), Point::new([3, 1])],
            anchor: Point::origin(2),
        };
        assert_eq!(b.determinant(), -6);
    }

    #[test]
    fn thm2_examples() {
        let (s, k) = build_thm2(&[2, 2], &[1, 1]).unwrap();
        assert_eq!(s.ambient, Ambient::torus(vec![3, 3]).unwrap());
        assert_eq!(s.len(), 1);
        assert!(verify_kappa_ptmc(&s, &k).unwrap().is_pass());

        let (s, _) = build_thm2(&[2, 2, 2], &[1, 1, 1]).unwrap();
        assert_eq!(s.len(), 1);
        assert!(verify_t_ptmc(&s, 3).unwrap().is_pass());

        let (s, _) = build_thm2(&[3, 2], &[2, 1]).unwrap();
        assert_eq!(s.ambient, Ambient::torus(vec![8, 3]).unwrap());
        assert_eq!(components_of(&s).len(), 2);
        assert!(verify_t_ptmc(&s, 2).unwrap().is_pass());
        assert_eq!(min_component_l1_distance(&s).unwrap(), Some(3));

        assert!(build_thm2(&[2, 2], &[0, 1]).is_err());
        assert!(build_thm2(&[2, 1], &[1, 1]).is_err());
    }

    #[test]
    fn template_arithmetic() {
        let t3 = template_thm3();
        assert_eq!(t3.ball_volume(0), 20);
        assert_eq!(t3.ball_volume(1), 7);
        assert_eq!(t3.fr_volume, 54);
        assert_eq!(t3.fr_count().unwrap(), 2);
        let t = template_thm4(3).unwrap();
        assert_eq!((t.components.clone(), t.torus.clone()), (t3.components, t3.torus));

        let t4 = template_thm4(4).unwrap();
        assert_eq!(t4.ball_volume(0), 48);
        assert_eq!(t4.ball_volume(1), 33);
        assert_eq!(t4.fr_volume, 162);
        assert_eq!(t4.torus.len(), 648);
        assert_eq!(t4.fr_count().unwrap(), 4);
        assert_eq!((t4.components[0].radius, t4.components[1].radius), (1, 2));
        assert!(template_thm4(2).is_err());
    }

    #[test]
    fn template_precondition() {
        let mut t = template_thm3();
        t.torus = Ambient::torus(vec![5, 6, 3]).unwrap();
        assert!(matches!(
            build_by_template(&t, SearchConfig::default()),
            Err(ConstructionError::Template(_))
        ));
    }

    #[test]
    fn thm3_search() {
        let t = template_thm3();
        match build_by_template(&t, SearchConfig::default()).unwrap() {
            TemplateOutcome::Built {
                code,
                kappa,
                census_matches,
                ..
            } => {
                assert!(census_matches);
                assert!(verify_kappa_ptmc(&code, &kappa).unwrap().is_pass());
                let census = named_census(&t, &code);
                assert_eq!(census["unit-square"], 4);
                assert_eq!(census["singleton"], 4);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
