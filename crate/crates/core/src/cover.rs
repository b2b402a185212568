//! Exact cover by dancing links, plus the two instance families built on it:
//! efficient domination (cover by closed neighborhoods) and tilings of a torus
//! by truncated balls.
//!
//! Branching is deterministic. The next column is the one with the fewest
//! remaining candidates, ties going to the least cell id, and candidates are
//! tried in tile order. `solve` returns the first solution of that search
//! order whatever the thread count: with several threads the root branches run
//! in parallel and the lowest-numbered successful branch wins.

use std::collections::HashSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::lattice::Shape;
use crate::metric::{ball_indices, ball_offsets, Ambient, MetricError, Point};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("tile {0} is empty")]
    EmptyTile(String),
    #[error("tile {tile} names cell {cell} outside a universe of {size}")]
    CellOutOfRange { tile: String, cell: usize, size: usize },
    #[error("duplicate tile id {0}")]
    DuplicateTile(String),
    #[error("duplicate universe cell {0}")]
    DuplicateCell(String),
    #[error("forced tile index {0} out of range")]
    BadForcedTile(usize),
    #[error("tilings need a torus ambient")]
    NotTorus,
    #[error("torus axis {0} has modulus below 3")]
    DegenerateAmbient(usize),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tile {
    pub id: String,
    /// Sorted, duplicate-free universe indices.
    pub cells: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactCoverInstance {
    universe: Vec<String>,
    tiles: Vec<Tile>,
}

impl ExactCoverInstance {
    pub fn new(universe: Vec<String>, tiles: Vec<Tile>) -> Result<Self, CoverError> {
        let mut names = HashSet::new();
        for u in &universe {
            if !names.insert(u.as_str()) {
                return Err(CoverError::DuplicateCell(u.clone()));
            }
        }
        let mut ids = HashSet::new();
        let mut clean = Vec::with_capacity(tiles.len());
        for mut t in tiles {
            if t.cells.is_empty() {
                return Err(CoverError::EmptyTile(t.id));
            }
            if let Some(&c) = t.cells.iter().find(|&&c| c >= universe.len()) {
                return Err(CoverError::CellOutOfRange {
                    tile: t.id,
                    cell: c,
                    size: universe.len(),
                });
            }
            if !ids.insert(t.id.clone()) {
                return Err(CoverError::DuplicateTile(t.id));
            }
            t.cells.sort_unstable();
            t.cells.dedup();
            clean.push(t);
        }
        Ok(ExactCoverInstance {
            universe,
            tiles: clean,
        })
    }

    /// Universe `0..n` named by index, tiles named `t0, t1, ...`.
    pub fn from_sets(n: usize, sets: &[Vec<usize>]) -> Result<Self, CoverError> {
        let universe = (0..n).map(|i| i.to_string()).collect();
        let tiles = sets
            .iter()
            .enumerate()
            .map(|(i, s)| Tile {
                id: format!("t{i}"),
                cells: s.clone(),
            })
            .collect();
        Self::new(universe, tiles)
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    /// Independent check that `chosen` covers every cell exactly once.
    pub fn is_exact_cover(&self, chosen: &[usize]) -> bool {
        let mut hit = vec![0u32; self.universe.len()];
        for &t in chosen {
            let Some(tile) = self.tiles.get(t) else {
                return false;
            };
            for &c in &tile.cells {
                hit[c] += 1;
            }
        }
        hit.iter().all(|&h| h == 1)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchConfig {
    pub budget: Option<Duration>,
    /// Worker threads for root-level branches; 0 and 1 both mean sequential.
    pub threads: usize,
}

impl SearchConfig {
    pub fn with_budget(budget: Duration) -> Self {
        SearchConfig {
            budget: Some(budget),
            threads: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutcomeKind {
    Solution,
    Infeasible,
    Timeout,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverOutcome {
    pub kind: OutcomeKind,
    /// Chosen tile indices in increasing order; empty unless `kind` is `Solution`.
    pub tiles: Vec<usize>,
    pub nodes: u64,
}

impl CoverOutcome {
    pub fn solution(&self) -> Option<&[usize]> {
        (self.kind == OutcomeKind::Solution).then_some(self.tiles.as_slice())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enumeration {
    /// Each solution sorted; the list sorted lexicographically.
    pub solutions: Vec<Vec<usize>>,
    /// True iff the search finished and no solution was dropped.
    pub exhaustive: bool,
    pub timed_out: bool,
    pub nodes: u64,
}

#[derive(Clone)]
struct Dlx {
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    col: Vec<usize>,
    row: Vec<usize>,
    size: Vec<usize>,
    row_start: Vec<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Flow {
    Continue,
    Stop,
}

struct Ctx<'a> {
    deadline: Option<Instant>,
    cancel: Option<(&'a AtomicUsize, usize)>,
    nodes: u64,
    timed_out: bool,
    cancelled: bool,
    stack: Vec<usize>,
}

impl<'a> Ctx<'a> {
    fn new(deadline: Option<Instant>, cancel: Option<(&'a AtomicUsize, usize)>) -> Self {
        Ctx {
            deadline,
            cancel,
            nodes: 0,
            timed_out: false,
            cancelled: false,
            stack: Vec::new(),
        }
    }

    fn should_stop(&mut self) -> bool {
        if self.nodes % 1024 != 1 {
            return false;
        }
        if let Some((best, me)) = self.cancel {
            if best.load(Ordering::Relaxed) < me {
                self.cancelled = true;
                return true;
            }
        }
        if self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.timed_out = true;
            return true;
        }
        false
    }
}

impl Dlx {
    fn new(inst: &ExactCoverInstance) -> Self {
        let ncols = inst.universe.len();
        let total = 1 + ncols + inst.tiles.iter().map(|t| t.cells.len()).sum::<usize>();
        let mut d = Dlx {
            left: Vec::with_capacity(total),
            right: Vec::with_capacity(total),
            up: Vec::with_capacity(total),
            down: Vec::with_capacity(total),
            col: Vec::with_capacity(total),
            row: Vec::with_capacity(total),
            size: vec![0; ncols + 1],
            row_start: Vec::with_capacity(inst.tiles.len()),
        };
        for i in 0..=ncols {
            d.left.push(if i == 0 { ncols } else { i - 1 });
            d.right.push(if i == ncols { 0 } else { i + 1 });
            d.up.push(i);
            d.down.push(i);
            d.col.push(i);
            d.row.push(usize::MAX);
        }
        for (r, tile) in inst.tiles.iter().enumerate() {
            let first = d.col.len();
            d.row_start.push(first);
            let k = tile.cells.len();
            for (j, &cell) in tile.cells.iter().enumerate() {
                let c = cell + 1;
                let node = first + j;
                d.left.push(if j == 0 { first + k - 1 } else { node - 1 });
                d.right.push(if j + 1 == k { first } else { node + 1 });
                d.up.push(d.up[c]);
                d.down.push(c);
                let last = d.up[c];
                d.down[last] = node;
                d.up[c] = node;
                d.col.push(c);
                d.row.push(r);
                d.size[c] += 1;
            }
        }
        d
    }

    fn cover(&mut self, c: usize) {
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = r;
        self.left[r] = l;
        let mut i = self.down[c];
        while i != c {
            let mut j = self.right[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = d;
                self.up[d] = u;
                self.size[self.col[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    fn uncover(&mut self, c: usize) {
        let mut i = self.up[c];
        while i != c {
            let mut j = self.left[i];
            while j != i {
                self.size[self.col[j]] += 1;
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = j;
                self.up[d] = j;
                j = self.left[j];
            }
            i = self.up[i];
        }
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = c;
        self.left[r] = c;
    }

    /// Commits to a tile whose columns are all still active. Returns false otherwise.
    fn select_row(&mut self, r: usize) -> bool {
        let start = self.row_start[r];
        let mut j = start;
        loop {
            let c = self.col[j];
            if !self.is_active(c) {
                return false;
            }
            j = self.right[j];
            if j == start {
                break;
            }
        }
        loop {
            self.cover(self.col[j]);
            j = self.right[j];
            if j == start {
                break;
            }
        }
        true
    }

    fn is_active(&self, c: usize) -> bool {
        let mut h = self.right[0];
        while h != 0 {
            if h == c {
                return true;
            }
            h = self.right[h];
        }
        false
    }

    fn choose_column(&self) -> Option<usize> {
        let mut best = None;
        let mut best_size = usize::MAX;
        let mut c = self.right[0];
        while c != 0 {
            if self.size[c] < best_size {
                best_size = self.size[c];
                best = Some(c);
                if best_size == 0 {
                    break;
                }
            }
            c = self.right[c];
        }
        best
    }

    fn rows_of(&self, c: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.size[c]);
        let mut i = self.down[c];
        while i != c {
            out.push(self.row[i]);
            i = self.down[i];
        }
        out
    }

    fn search(&mut self, ctx: &mut Ctx<'_>, visit: &mut dyn FnMut(&[usize]) -> Flow) -> Flow {
        ctx.nodes += 1;
        if ctx.should_stop() {
            return Flow::Stop;
        }
        let Some(c) = self.choose_column() else {
            return visit(&ctx.stack);
        };
        if self.size[c] == 0 {
            return Flow::Continue;
        }
        self.cover(c);
        let mut r = self.down[c];
        while r != c {
            ctx.stack.push(self.row[r]);
            let mut j = self.right[r];
            while j != r {
                self.cover(self.col[j]);
                j = self.right[j];
            }
            let flow = self.search(ctx, visit);
            let mut j = self.left[r];
            while j != r {
                self.uncover(self.col[j]);
                j = self.left[j];
            }
            ctx.stack.pop();
            if flow == Flow::Stop {
                self.uncover(c);
                return Flow::Stop;
            }
            r = self.down[r];
        }
        self.uncover(c);
        Flow::Continue
    }
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
}

/// Prepared search state after forcing tiles. `None` when the forced tiles conflict.
fn prepare(inst: &ExactCoverInstance, forced: &[usize]) -> Result<Option<Dlx>, CoverError> {
    let mut d = Dlx::new(inst);
    for &f in forced {
        if f >= inst.tiles.len() {
            return Err(CoverError::BadForcedTile(f));
        }
        if !d.select_row(f) {
            return Ok(None);
        }
    }
    Ok(Some(d))
}

/// First exact cover in canonical search order.
pub fn solve(inst: &ExactCoverInstance, cfg: SearchConfig) -> CoverOutcome {
    solve_with(inst, &[], cfg).expect("no forced tiles")
}

/// `solve` with some tiles committed up front; they appear in the returned solution.
pub fn solve_with(
    inst: &ExactCoverInstance,
    forced: &[usize],
    cfg: SearchConfig,
) -> Result<CoverOutcome, CoverError> {
    let deadline = cfg.budget.map(|b| Instant::now() + b);
    let Some(mut root) = prepare(inst, forced)? else {
        return Ok(CoverOutcome {
            kind: OutcomeKind::Infeasible,
            tiles: vec![],
            nodes: 0,
        });
    };
    if cfg.threads <= 1 {
        let mut ctx = Ctx::new(deadline, None);
        ctx.stack.extend_from_slice(forced);
        let mut found = None;
        root.search(&mut ctx, &mut |s| {
            found = Some(s.to_vec());
            Flow::Stop
        });
        let kind = match (&found, ctx.timed_out) {
            (Some(_), _) => OutcomeKind::Solution,
            (None, true) => OutcomeKind::Timeout,
            (None, false) => OutcomeKind::Infeasible,
        };
        return Ok(CoverOutcome {
            kind,
            tiles: found.map(sorted).unwrap_or_default(),
            nodes: ctx.nodes,
        });
    }

    let Some(c) = root.choose_column() else {
        return Ok(CoverOutcome {
            kind: OutcomeKind::Solution,
            tiles: sorted(forced.to_vec()),
            nodes: 1,
        });
    };
    let branches = root.rows_of(c);
    let best = AtomicUsize::new(usize::MAX);
    let results: Vec<(Option<Vec<usize>>, bool, u64)> = pool(cfg.threads).install(|| {
        branches
            .par_iter()
            .enumerate()
            .map(|(b, &r)| {
                let mut d = root.clone();
                d.select_row(r);
                let mut ctx = Ctx::new(deadline, Some((&best, b)));
                ctx.stack.extend_from_slice(forced);
                ctx.stack.push(r);
                let mut found = None;
                d.search(&mut ctx, &mut |s| {
                    found = Some(s.to_vec());
                    Flow::Stop
                });
                if found.is_some() {
                    best.fetch_min(b, Ordering::Relaxed);
                }
                (found, ctx.timed_out, ctx.nodes)
            })
            .collect()
    });
    let nodes = 1 + results.iter().map(|r| r.2).sum::<u64>();
    if let Some(sol) = results.iter().find_map(|r| r.0.clone()) {
        return Ok(CoverOutcome {
            kind: OutcomeKind::Solution,
            tiles: sorted(sol),
            nodes,
        });
    }
    let kind = if results.iter().any(|r| r.1) {
        OutcomeKind::Timeout
    } else {
        OutcomeKind::Infeasible
    };
    Ok(CoverOutcome {
        kind,
        tiles: vec![],
        nodes,
    })
}

/// All exact covers, up to `limit`, in canonical (sorted) order.
pub fn enumerate(inst: &ExactCoverInstance, limit: Option<usize>, cfg: SearchConfig) -> Enumeration {
    let deadline = cfg.budget.map(|b| Instant::now() + b);
    let root = Dlx::new(inst);
    let run = |mut d: Dlx, prefix: Option<usize>| {
        let mut ctx = Ctx::new(deadline, None);
        ctx.stack.extend(prefix);
        let mut sols: Vec<Vec<usize>> = Vec::new();
        let mut overflow = false;
        d.search(&mut ctx, &mut |s| {
            if limit.is_some_and(|l| sols.len() >= l) {
                overflow = true;
                return Flow::Stop;
            }
            sols.push(sorted(s.to_vec()));
            Flow::Continue
        });
        (sols, overflow, ctx.timed_out, ctx.nodes)
    };
    let parts: Vec<(Vec<Vec<usize>>, bool, bool, u64)> = match root.choose_column() {
        Some(c) if cfg.threads > 1 => {
            let branches = root.rows_of(c);
            pool(cfg.threads).install(|| {
                branches
                    .par_iter()
                    .map(|&r| {
                        let mut d = root.clone();
                        d.select_row(r);
                        run(d, Some(r))
                    })
                    .collect()
            })
        }
        _ => vec![run(root.clone(), None)],
    };
    let mut solutions: Vec<Vec<usize>> = parts.iter().flat_map(|p| p.0.clone()).collect();
    solutions.sort();
    let mut overflow = parts.iter().any(|p| p.1);
    let timed_out = parts.iter().any(|p| p.2);
    if let Some(l) = limit {
        if solutions.len() > l {
            solutions.truncate(l);
            overflow = true;
        }
    }
    Enumeration {
        solutions,
        exhaustive: !overflow && !timed_out,
        timed_out,
        nodes: parts.iter().map(|p| p.3).sum(),
    }
}

/// Efficient dominating sets of `g` as exact covers of `V(g)` by closed neighborhoods.
/// Tile `v` is `N[v]`, so a solution's tile indices are the code's vertex indices.
pub fn eds_instance(g: &Graph) -> ExactCoverInstance {
    let tiles = (0..g.len())
        .map(|v| Tile {
            id: g.label(v).to_string(),
            cells: g.closed_neighborhood(v),
        })
        .collect();
    ExactCoverInstance::new(g.labels().to_vec(), tiles).expect("graph labels are unique")
}

/// Where a tiling tile sits: which shape, which orientation, which translation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placement {
    pub shape: usize,
    pub orientation: usize,
    pub anchor: Point,
}

impl Placement {
    /// Vertices of the placed shape itself (not its ball).
    pub fn cells(&self, shapes: &[(Shape, usize)], a: &Ambient) -> Vec<Point> {
        shapes[self.shape].0.orientations[self.orientation]
            .iter()
            .map(|c| a.normalize(&c.add(&self.anchor)).expect("torus"))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingInstance {
    pub instance: ExactCoverInstance,
    /// Parallel to `instance.tiles()`.
    pub placements: Vec<Placement>,
}

/// One tile per (shape, orientation, translation): the truncated ball of the placed shape.
/// Universe cells are torus vertices in lexicographic order. Orientations whose ball
/// wraps onto itself on this torus are left out, since they cannot appear in a tiling.
pub fn tiling_instance(a: &Ambient, shapes: &[(Shape, usize)]) -> Result<TilingInstance, CoverError> {
    if !a.is_torus() {
        return Err(CoverError::NotTorus);
    }
    if let Some(axis) = a.degenerate_axis() {
        return Err(CoverError::DegenerateAmbient(axis));
    }
    let n = a.dim();
    let universe: Vec<String> = a.vertices().map(|p| p.to_string()).collect();
    let mut tiles = Vec::new();
    let mut placements = Vec::new();
    for (si, (shape, t)) in shapes.iter().enumerate() {
        if *t > n {
            return Err(MetricError::RadiusOutOfRange { t: *t as i64, n }.into());
        }
        let offsets = ball_offsets(n, *t);
        for (oi, cells) in shape.orientations.iter().enumerate() {
            let free: HashSet<Vec<i64>> = cells
                .iter()
                .flat_map(|c| offsets.iter().map(move |o| c.0.iter().zip(o).map(|(x, y)| x + y).collect()))
                .collect();
            for anchor in a.vertices() {
                let placed: Vec<Point> = cells.iter().map(|c| c.add(&anchor)).collect();
                let (ball, _) = ball_indices(a, placed.iter(), &offsets);
                if ball.len() != free.len() {
                    continue;
                }
                let coords: Vec<String> = anchor.0.iter().map(|c| c.to_string()).collect();
                tiles.push(Tile {
                    id: format!("{}/o{}@{}", shape.name, oi, coords.join(",")),
                    cells: ball,
                });
                placements.push(Placement {
                    shape: si,
                    orientation: oi,
                    anchor,
                });
            }
        }
    }
    Ok(TilingInstance {
        instance: ExactCoverInstance::new(universe, tiles)?,
        placements,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub m: usize,
    pub n: usize,
    pub exists: bool,
    pub count: usize,
    pub exhaustive: bool,
}

/// Exhaustive efficient-domination census of `P_m □ P_n` for `3 <= m, n <= max_side`.
pub fn grid_eds_survey(max_side: usize, cfg: SearchConfig) -> Vec<SurveyRow> {
    let mut rows = Vec::new();
    for m in 3..=max_side {
        for n in 3..=max_side {
            let e = enumerate(&eds_instance(&Graph::grid(m, n)), None, cfg);
            rows.push(SurveyRow {
                m,
                n,
                exists: !e.solutions.is_empty(),
                count: e.solutions.len(),
                exhaustive: e.exhaustive,
            });
        }
    }
    rows
}
