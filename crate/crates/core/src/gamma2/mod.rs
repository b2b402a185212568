//! The ternary square compound: copies of `K3 □ K3` ("tersquares") glued in pairs
//! along shared triangles, with the truncated metric and its perfect codes.
//!
//! A tersquare is addressed by a pair of reduced words over `{0,1,2}`; crossing
//! triangle `s` of the x axis appends `s` to the x word or cancels it. Local labels
//! `(a, b)` are kept across shared triangles, so `(J, a, b)` and `(J·x_a, a, b)` are
//! the same vertex. Every vertex lies in four tersquares and has degree 8.

mod address;
mod export;
mod hive;
mod region;
mod vertex;

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::Graph;

pub use address::{glue, Axis, TersquareAddress, Word};
pub use export::{export_graph, ExportFormat, GraphDoc, TersquareEntry, VertexEntry};
pub use hive::{
    build_hive, classify, corner_partition, enumerate_hive_2ptmc, exact_hive_2ptmc, hive_distances,
    no_isolated_pds, thm6c_pds, verify_hive_selection, CornerBlock, Hive, HiveCount, TersquareClass,
};
pub use region::{build_region, extend_2ptmc, verify_region_code, Region, RegionCode};
pub use vertex::{canonical_vertex, gamma_truncated_distance, tersquare_vertices, GammaVertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GammaError {
    #[error("letter {0} is not in {{0,1,2}}")]
    BadLetter(u8),
    #[error("word {0} repeats a letter")]
    NotReduced(String),
    #[error("malformed vertex or word id {0:?}")]
    BadId(String),
    #[error("vertex id {0} is not in canonical form")]
    NotCanonical(String),
    #[error("corner blocks do not partition the hive: {0}")]
    PartitionFailure(String),
    #[error("unknown export format {0:?}")]
    UnknownFormat(String),
    #[error("graph document: {0}")]
    Document(String),
}

/// A finite union of tersquares with its induced vertex set and edges.
#[derive(Debug, Clone)]
pub struct Compound {
    pub tersquares: Vec<TersquareAddress>,
    pub vertices: Vec<GammaVertex>,
    /// Labels are vertex ids; index `i` is `vertices[i]`.
    pub graph: Graph,
    index: HashMap<GammaVertex, usize>,
}

impl Compound {
    pub fn from_tersquares(tersquares: impl IntoIterator<Item = TersquareAddress>) -> Self {
        let mut tersquares: Vec<TersquareAddress> = tersquares.into_iter().collect();
        tersquares.sort();
        tersquares.dedup();
        let mut vertices: Vec<GammaVertex> = tersquares.iter().flat_map(tersquare_vertices).collect();
        vertices.sort();
        vertices.dedup();
        let index: HashMap<GammaVertex, usize> =
            vertices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let mut graph = Graph::with_labels(vertices.iter().map(|v| v.id()).collect());
        for t in &tersquares {
            let local: Vec<usize> = tersquare_vertices(t).iter().map(|v| index[v]).collect();
            for p in 0..9 {
                for q in p + 1..9 {
                    if p / 3 == q / 3 || p % 3 == q % 3 {
                        graph.add_edge(local[p], local[q]);
                    }
                }
            }
        }
        Compound {
            tersquares,
            vertices,
            graph: graph.finish(),
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, v: &GammaVertex) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn has_tersquare(&self, t: &TersquareAddress) -> bool {
        self.tersquares.binary_search(t).is_ok()
    }

    /// Member tersquares containing vertex `i`.
    pub fn tersquares_of(&self, i: usize) -> Vec<TersquareAddress> {
        self.vertices[i]
            .tersquares()
            .into_iter()
            .filter(|t| self.has_tersquare(t))
            .collect()
    }
}
