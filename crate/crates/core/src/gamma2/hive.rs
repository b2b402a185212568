use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::address::{Axis, TersquareAddress};
use super::vertex::{canonical_vertex, gamma_truncated_distance, GammaVertex};
use super::{Compound, GammaError};
use crate::cover::{eds_instance, enumerate, solve, CoverOutcome, ExactCoverInstance, SearchConfig, Tile};
use crate::report::{FailureKind, VerifyReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TersquareClass {
    Center,
    Subcentral,
    Corner,
    Outer,
}

/// Position of `t` relative to the hive around `center`.
pub fn classify(center: &TersquareAddress, t: &TersquareAddress) -> TersquareClass {
    if t == center {
        return TersquareClass::Center;
    }
    for axis in [Axis::X, Axis::Y] {
        for s in 0..3 {
            if &center.glue(axis, s) == t {
                return TersquareClass::Subcentral;
            }
        }
    }
    for i in 0..3 {
        for j in 0..3 {
            if &center.glue(Axis::X, i).glue(Axis::Y, j) == t {
                return TersquareClass::Corner;
            }
        }
    }
    TersquareClass::Outer
}

#[derive(Debug, Clone)]
pub struct Hive {
    pub center: TersquareAddress,
    /// Center, then x and y subcentrals by letter, then corners `(i, j)` in order.
    pub members: Vec<TersquareAddress>,
    pub compound: Compound,
}

impl Hive {
    pub fn corners(&self) -> &[TersquareAddress] {
        &self.members[7..]
    }
}

pub fn build_hive(center: &TersquareAddress) -> Hive {
    let mut members = vec![center.clone()];
    for axis in [Axis::X, Axis::Y] {
        for s in 0..3 {
            members.push(center.glue(axis, s));
        }
    }
    for i in 0..3 {
        for j in 0..3 {
            members.push(center.glue(Axis::X, i).glue(Axis::Y, j));
        }
    }
    let compound = Compound::from_tersquares(members.iter().cloned());
    Hive {
        center: center.clone(),
        members,
        compound,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerBlock {
    pub corner: TersquareAddress,
    /// Hive indices of the corner's 9 vertices, sorted.
    pub vertices: Vec<usize>,
    /// Hive indices of the 4 vertices on neither shared triangle, in label order.
    pub external: Vec<usize>,
}

/// The 9 corner tersquares, checked to partition the hive's vertices.
pub fn corner_partition(h: &Hive) -> Result<Vec<CornerBlock>, GammaError> {
    let c = &h.compound;
    let mut owner = vec![usize::MAX; c.len()];
    let mut blocks = Vec::with_capacity(9);
    for (k, corner) in h.corners().iter().enumerate() {
        let (i, j) = ((k / 3) as u8, (k % 3) as u8);
        let mut vertices = Vec::with_capacity(9);
        let mut external = Vec::with_capacity(4);
        for a in 0..3 {
            for b in 0..3 {
                let v = canonical_vertex(corner, a, b);
                let idx = c.index_of(&v).expect("corner vertex lies in its hive");
                if owner[idx] != usize::MAX {
                    return Err(GammaError::PartitionFailure(format!("{v} lies in two corners")));
                }
                owner[idx] = k;
                vertices.push(idx);
                if a != i && b != j {
                    external.push(idx);
                }
            }
        }
        vertices.sort_unstable();
        blocks.push(CornerBlock {
            corner: corner.clone(),
            vertices,
            external,
        });
    }
    if let Some(missed) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(GammaError::PartitionFailure(format!(
            "{} lies in no corner",
            c.vertices[missed]
        )));
    }
    Ok(blocks)
}

/// Row-major matrix of truncated distances between hive vertices.
pub fn hive_distances(h: &Hive) -> Vec<u8> {
    let vs = &h.compound.vertices;
    let n = vs.len();
    let mut d = vec![0u8; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let x = gamma_truncated_distance(&vs[i], &vs[j]) as u8;
            d[i * n + j] = x;
            d[j * n + i] = x;
        }
    }
    d
}

/// Checks `centers` as an isolated 2-code inside the hive: each vertex is within distance 2
/// of exactly one center (so that center is its unique nearest), and no two centers are adjacent.
pub fn verify_hive_selection(h: &Hive, dist: &[u8], centers: &[usize]) -> VerifyReport<usize> {
    let n = h.compound.len();
    for v in 0..n {
        let row = &dist[v * n..(v + 1) * n];
        let near: Vec<usize> = centers.iter().copied().filter(|&c| row[c] <= 2).collect();
        if near.len() != 1 {
            let kind = if near.is_empty() {
                FailureKind::Gap
            } else {
                FailureKind::Overlap
            };
            let mut w = vec![v];
            w.extend(near);
            return VerifyReport::fail(kind, w, "vertex not covered exactly once");
        }
    }
    for (k, &c) in centers.iter().enumerate() {
        for &d in &centers[k + 1..] {
            if c == d || dist[c * n + d] == 1 {
                return VerifyReport::fail(FailureKind::AdjacentCenters, vec![c, d], "centers touch");
            }
        }
    }
    VerifyReport::pass().with_isolated(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HiveCount {
    pub selections: usize,
    pub passing: usize,
    /// Smallest failing selection index, if any.
    pub first_failure: Option<usize>,
}

/// Verifies every choice of one external vertex per corner; returns how many pass.
pub fn enumerate_hive_2ptmc(h: &Hive, threads: usize) -> Result<HiveCount, GammaError> {
    let blocks = corner_partition(h)?;
    let dist = hive_distances(h);
    let selections = 4usize.pow(blocks.len() as u32);
    let check = |sel: usize| {
        let mut centers = [0usize; 9];
        let mut s = sel;
        for (k, b) in blocks.iter().enumerate() {
            centers[k] = b.external[s % 4];
            s /= 4;
        }
        verify_hive_selection(h, &dist, &centers[..blocks.len()]).is_pass()
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("thread pool");
    let failures: Vec<usize> =
        pool.install(|| (0..selections).into_par_iter().filter(|&s| !check(s)).collect());
    Ok(HiveCount {
        selections,
        passing: selections - failures.len(),
        first_failure: failures.first().copied(),
    })
}

/// Every isolated 2-code of the hive found by exact cover over all 81 candidate centers,
/// each re-checked by `verify_hive_selection`. Slower than `enumerate_hive_2ptmc`; it
/// shows no other codes exist.
pub fn exact_hive_2ptmc(h: &Hive, cfg: SearchConfig) -> (usize, bool) {
    let dist = hive_distances(h);
    let n = h.compound.len();
    let tiles = (0..n)
        .map(|v| Tile {
            id: h.compound.vertices[v].id(),
            cells: (0..n).filter(|&u| dist[v * n + u] <= 2).collect(),
        })
        .collect();
    let inst = ExactCoverInstance::new(h.compound.graph.labels().to_vec(), tiles).expect("distinct ids");
    let e = enumerate(&inst, None, cfg);
    let passing = e
        .solutions
        .iter()
        .filter(|s| verify_hive_selection(h, &dist, s).is_pass())
        .count();
    (passing, e.exhaustive)
}

/// The 18-vertex non-isolated perfect dominating set of the hive around the central tersquare.
pub fn thm6c_pds() -> Vec<GammaVertex> {
    let x = |i: u8| TersquareAddress::root().glue(Axis::X, i);
    let y = |j: u8| TersquareAddress::root().glue(Axis::Y, j);
    let mut s = vec![
        canonical_vertex(&y(2), 0, 0),
        canonical_vertex(&y(2), 0, 1),
        canonical_vertex(&x(0), 1, 0),
        canonical_vertex(&x(0), 2, 0),
        canonical_vertex(&y(0), 2, 1),
        canonical_vertex(&y(0), 2, 2),
        canonical_vertex(&y(1), 0, 0),
        canonical_vertex(&y(1), 0, 2),
    ];
    for (a, b) in [(0, 2), (1, 2), (1, 1), (0, 1)] {
        s.push(canonical_vertex(&x(2), a, b));
    }
    for a in [0, 2] {
        for b in 0..3 {
            s.push(canonical_vertex(&x(1), a, b));
        }
    }
    s.sort();
    s.dedup();
    s
}

/// Exhaustive efficient-domination search on the hive graph. Unbudgeted.
pub fn no_isolated_pds(h: &Hive, threads: usize) -> CoverOutcome {
    solve(
        &eds_instance(&h.compound.graph),
        SearchConfig {
            budget: None,
            threads,
        },
    )
}
