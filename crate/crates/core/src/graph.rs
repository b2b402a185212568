//! A small labelled undirected graph used as the common view for domination checks
//! and exact-cover instances.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::metric::{Ambient, Point};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    labels: Vec<String>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn with_labels(labels: Vec<String>) -> Self {
        let n = labels.len();
        Graph {
            labels,
            adj: vec![Vec::new(); n],
        }
    }

    pub fn unlabelled(n: usize) -> Self {
        Self::with_labels((0..n).map(|i| i.to_string()).collect())
    }

    /// Adds `u -- v` unless it is a loop or already present.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u == v || self.adj[u].contains(&v) {
            return;
        }
        self.adj[u].push(v);
        self.adj[v].push(u);
    }

    /// Sorts adjacency lists; call after the last `add_edge`.
    pub fn finish(mut self) -> Self {
        for a in &mut self.adj {
            a.sort_unstable();
        }
        self
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, a) in self.adj.iter().enumerate() {
            for &v in a {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn label_index(&self) -> HashMap<&str, usize> {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect()
    }

    /// Closed neighborhood, sorted.
    pub fn closed_neighborhood(&self, v: usize) -> Vec<usize> {
        let mut n = self.adj[v].clone();
        n.push(v);
        n.sort_unstable();
        n
    }

    /// The grid graph of an ambient: unit offset along one axis, wrapping on a torus.
    pub fn lattice(a: &Ambient) -> Self {
        let labels = a.vertices().map(|p| p.to_string()).collect();
        let mut g = Graph::with_labels(labels);
        let n = a.dim();
        for (i, p) in a.vertices().enumerate() {
            for axis in 0..n {
                let step = Point::unit(n, axis);
                if let Some(j) = a.shifted_index(&p, step.coords()) {
                    g.add_edge(i, j);
                }
            }
        }
        g.finish()
    }

    /// `P_m □ P_n`.
    pub fn grid(m: usize, n: usize) -> Self {
        let a = Ambient::window(vec![(0, m as i64 - 1), (0, n as i64 - 1)])
            .expect("grid sides are positive");
        Self::lattice(&a)
    }

    pub fn path(n: usize) -> Self {
        let mut g = Self::unlabelled(n);
        for i in 1..n {
            g.add_edge(i - 1, i);
        }
        g.finish()
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::unlabelled(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
        g.finish()
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::unlabelled(n);
        for i in 0..n {
            for j in i + 1..n {
                g.add_edge(i, j);
            }
        }
        g.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_graphs() {
        assert_eq!(Graph::cycle(5).edges().len(), 5);
        assert_eq!(Graph::complete(4).edges().len(), 6);
        assert_eq!(Graph::path(3).degree(1), 2);
        let g = Graph::grid(4, 4);
        assert_eq!(g.len(), 16);
        assert_eq!(g.edges().len(), 24);
    }

    #[test]
    fn torus_lattice_wraps() {
        let t = Ambient::torus(vec![3, 4]).unwrap();
        let g = Graph::lattice(&t);
        assert!((0..g.len()).all(|v| g.degree(v) == 4));
        // C2 collapses +1 and -1 onto one neighbor.
        let t2 = Ambient::torus(vec![2, 5]).unwrap();
        let g2 = Graph::lattice(&t2);
        assert!((0..g2.len()).all(|v| g2.degree(v) == 3));
    }
}
