use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A time-frequency plaquette `(frequency channel, time bin)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeLabel {
    pub freq: usize,
    pub time: usize,
}

impl NodeLabel {
    pub fn new(freq: usize, time: usize) -> Self {
        Self { freq, time }
    }
}

impl fmt::Display for NodeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(f={}, t={})", self.freq, self.time)
    }
}

/// Weighted undirected graph over plaquette-labelled nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterGraph {
    nodes: Vec<NodeLabel>,
    adjacency: DMatrix<f64>,
}

impl ClusterGraph {
    /// Graph with no edges. Labels must be distinct.
    pub fn new(nodes: Vec<NodeLabel>) -> Result<Self> {
        for (k, n) in nodes.iter().enumerate() {
            if nodes[..k].contains(n) {
                return Err(Error::UnknownNode(format!("duplicate node {n}")));
            }
        }
        let len = nodes.len();
        Ok(Self {
            nodes,
            adjacency: DMatrix::zeros(len, len),
        })
    }

    /// The `d × n_time` grid with nearest-neighbour edges of weight 1.
    pub fn grid(d: usize, n_time: usize) -> Self {
        let nodes: Vec<NodeLabel> = (0..d)
            .flat_map(|f| (0..n_time).map(move |t| NodeLabel::new(f, t)))
            .collect();
        let mut g = Self::new(nodes).expect("grid labels are distinct");
        for f in 0..d {
            for t in 0..n_time {
                let here = f * n_time + t;
                if t + 1 < n_time {
                    g.add_weight(here, here + 1, 1.0);
                }
                if f + 1 < d {
                    g.add_weight(here, here + n_time, 1.0);
                }
            }
        }
        g
    }

    pub fn nodes(&self) -> &[NodeLabel] {
        &self.nodes
    }

    pub fn adjacency(&self) -> &DMatrix<f64> {
        &self.adjacency
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_of(&self, label: NodeLabel) -> Result<usize> {
        self.nodes
            .iter()
            .position(|&n| n == label)
            .ok_or_else(|| Error::UnknownNode(label.to_string()))
    }

    pub fn weight(&self, a: NodeLabel, b: NodeLabel) -> Result<f64> {
        Ok(self.adjacency[(self.index_of(a)?, self.index_of(b)?)])
    }

    /// Adds `w` to the edge `(a, b)`; a self-loop is rejected.
    pub fn add_edge(&mut self, a: NodeLabel, b: NodeLabel, w: f64) -> Result<()> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        if i == j {
            return Err(Error::RepeatedMode(i));
        }
        self.add_weight(i, j, w);
        Ok(())
    }

    fn add_weight(&mut self, i: usize, j: usize, w: f64) {
        self.adjacency[(i, j)] += w;
        self.adjacency[(j, i)] += w;
    }

    /// Edges `(i, j, w)` with `i < j` and nonzero weight, by node index.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let w = self.adjacency[(i, j)];
                if w != 0.0 {
                    out.push((i, j, w));
                }
            }
        }
        out
    }

    /// Same labelled edge set and weights, regardless of node order.
    pub fn same_edges(&self, other: &ClusterGraph) -> bool {
        if self.len() != other.len() {
            return false;
        }
        for (k, &a) in self.nodes.iter().enumerate() {
            let Ok(ka) = other.index_of(a) else {
                return false;
            };
            for (l, &b) in self.nodes.iter().enumerate() {
                let kb = other.index_of(b).expect("label sets match");
                if self.adjacency[(k, l)] != other.adjacency[(ka, kb)] {
                    return false;
                }
            }
        }
        true
    }
}
