use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::address::{TersquareAddress, Word};
use super::vertex::{canonical_vertex, GammaVertex};
use super::Compound;
use crate::report::{FailureKind, VerifyReport};

/// All tersquares with `|wx| + |wy| <= depth`.
#[derive(Debug, Clone)]
pub struct Region {
    pub depth: usize,
    pub compound: Compound,
    /// Whether all four tersquares of vertex `i` are in the region.
    pub interior: Vec<bool>,
}

pub fn build_region(depth: usize) -> Region {
    let compound = Compound::from_tersquares(TersquareAddress::all_up_to(depth));
    let interior = compound
        .vertices
        .iter()
        .map(|v| v.tersquares().iter().all(|t| t.depth() <= depth))
        .collect();
    Region {
        depth,
        compound,
        interior,
    }
}

impl Region {
    pub fn interior_count(&self) -> usize {
        self.interior.iter().filter(|&&b| b).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Free,
    Matched,
    Partner,
}

/// A perfect code of the line graph of the cubic tree, as `word -> partner letter` for the
/// saturated vertex closer to the root of each code edge, plus the unsaturated vertices.
struct TreeCode {
    partner: HashMap<Word, u8>,
    free: Vec<Word>,
}

/// Root unsaturated; every child of an unsaturated vertex is matched to one of its own
/// children, whose children are unsaturated again.
fn tree_code(depth: usize, rng: &mut Option<ChaCha8Rng>) -> TreeCode {
    let mut status: HashMap<Word, Status> = HashMap::new();
    status.insert(Word::empty(), Status::Free);
    let mut partner = HashMap::new();
    let mut free = Vec::new();
    for w in Word::all_up_to(depth) {
        let st = status[&w];
        let children: Vec<u8> = (0..3).filter(|&s| w.last() != Some(s)).collect();
        match st {
            Status::Free => {
                free.push(w.clone());
                for s in children {
                    status.insert(w.glue(s), Status::Matched);
                }
            }
            Status::Matched => {
                let pick = match rng {
                    Some(r) => r.gen_range(0..children.len()),
                    None => 0,
                };
                for (k, &s) in children.iter().enumerate() {
                    let st = if k == pick { Status::Partner } else { Status::Free };
                    status.insert(w.glue(s), st);
                }
                partner.insert(w.clone(), children[pick]);
            }
            Status::Partner => {
                for s in children {
                    status.insert(w.glue(s), Status::Free);
                }
            }
        }
    }
    TreeCode { partner, free }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionCode {
    pub depth: usize,
    pub seed: Option<u64>,
    /// Centers lying in the region, sorted.
    pub centers: Vec<GammaVertex>,
    pub hives: usize,
    pub interior: usize,
    pub boundary: usize,
    pub report: VerifyReport<GammaVertex>,
}

/// Grows an isolated 2-code over the region of the given depth, hive by hive.
///
/// Hives are centered at pairs of unsaturated vertices of two tree codes and processed
/// breadth-first; corner `(i, j)` of each takes the external vertex named by the code
/// edges at `u·i` and `v·j`. Without a seed every choice is the least letter.
pub fn extend_2ptmc(depth: usize, seed: Option<u64>) -> (Region, RegionCode) {
    let region = build_region(depth);
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let tx = tree_code(depth + 3, &mut rng);
    let ty = tree_code(depth + 3, &mut rng);

    let mut hives: Vec<(usize, TersquareAddress)> = Vec::new();
    for u in &tx.free {
        for v in &ty.free {
            let t = TersquareAddress::new(u.clone(), v.clone());
            if t.depth() <= depth {
                hives.push((t.depth(), t));
            }
        }
    }
    hives.sort();

    let mut centers = BTreeSet::new();
    for (_, h) in &hives {
        for i in (0..3).filter(|&i| h.wx.last() != Some(i)) {
            for j in (0..3).filter(|&j| h.wy.last() != Some(j)) {
                let (s, t) = (h.wx.glue(i), h.wy.glue(j));
                let c = canonical_vertex(&TersquareAddress::new(s.clone(), t.clone()), tx.partner[&s], ty.partner[&t]);
                if region.compound.index_of(&c).is_some() {
                    centers.insert(c);
                }
            }
        }
    }
    let centers: Vec<GammaVertex> = centers.into_iter().collect();
    let report = verify_region_code(&region, &centers);
    let interior = region.interior_count();
    let code = RegionCode {
        depth,
        seed,
        centers,
        hives: hives.len(),
        interior,
        boundary: region.compound.len() - interior,
        report,
    };
    (region, code)
}

/// Checks on interior vertices only: each sees exactly one center within distance 2,
/// and no two centers in the region are adjacent.
pub fn verify_region_code(region: &Region, centers: &[GammaVertex]) -> VerifyReport<GammaVertex> {
    let c = &region.compound;
    let mut owners: Vec<Vec<usize>> = vec![Vec::new(); c.len()];
    let mut is_center = vec![false; c.len()];
    for (k, x) in centers.iter().enumerate() {
        if let Some(i) = c.index_of(x) {
            is_center[i] = true;
        }
        let mut ball: Vec<GammaVertex> = x
            .tersquares()
            .iter()
            .flat_map(|t| (0..3).flat_map(move |a| (0..3).map(move |b| canonical_vertex(t, a, b))))
            .collect();
        ball.sort();
        ball.dedup();
        for v in ball {
            if let Some(i) = c.index_of(&v) {
                owners[i].push(k);
            }
        }
    }
    for i in 0..c.len() {
        if !region.interior[i] || owners[i].len() == 1 {
            continue;
        }
        let kind = if owners[i].is_empty() {
            FailureKind::Gap
        } else {
            FailureKind::Overlap
        };
        let mut w = vec![c.vertices[i].clone()];
        w.extend(owners[i].iter().map(|&k| centers[k].clone()));
        return VerifyReport::fail(kind, w, "interior vertex not covered exactly once");
    }
    for i in 0..c.len() {
        if !is_center[i] {
            continue;
        }
        if let Some(&j) = c.graph.neighbors(i).iter().find(|&&j| is_center[j]) {
            return VerifyReport::fail(
                FailureKind::AdjacentCenters,
                vec![c.vertices[i].clone(), c.vertices[j].clone()],
                "centers touch",
            );
        }
    }
    VerifyReport::pass().with_isolated(true)
}
