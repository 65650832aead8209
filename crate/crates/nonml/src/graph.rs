//! Labelled undirected graphs and stacked report sets.
//!
//! Node identity is the string label; the internal index is the position in
//! the declared ordering, which keeps every downstream construction
//! deterministic. Graphs are simple: symmetric adjacency, zero diagonal.

use std::collections::HashMap;

use crate::bits::BitMatrix;
use crate::error::GraphError;

/// An undirected graph over ordered, unique string labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledGraph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    adj: BitMatrix,
}

fn build_index(labels: &[String]) -> Result<HashMap<String, usize>, GraphError> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(GraphError::DuplicateLabel(l.clone()));
        }
    }
    Ok(index)
}

impl LabeledGraph {
    /// An edgeless graph over the given labels.
    pub fn new<S: Into<String>>(labels: Vec<S>) -> Result<Self, GraphError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let index = build_index(&labels)?;
        let n = labels.len();
        Ok(LabeledGraph {
            labels,
            index,
            adj: BitMatrix::zeros(n, n),
        })
    }

    /// Graph from an explicit edge list over the given labels.
    pub fn from_edges<S: Into<String>>(
        labels: Vec<S>,
        edges: &[(&str, &str)],
    ) -> Result<Self, GraphError> {
        let mut g = LabeledGraph::new(labels)?;
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    fn require(&self, label: &str) -> Result<usize, GraphError> {
        self.index_of(label)
            .ok_or_else(|| GraphError::UnknownLabel(label.to_string()))
    }

    pub fn add_edge(&mut self, u: &str, v: &str) -> Result<(), GraphError> {
        let (i, j) = (self.require(u)?, self.require(v)?);
        if i == j {
            return Err(GraphError::SelfLoop(u.to_string()));
        }
        self.adj.set(i, j, true);
        self.adj.set(j, i, true);
        Ok(())
    }

    pub fn has_edge(&self, u: &str, v: &str) -> bool {
        match (self.index_of(u), self.index_of(v)) {
            (Some(i), Some(j)) => self.adj.get(i, j),
            _ => false,
        }
    }

    /// Flip the edge indicator between `u` and `v`, in both directions.
    pub fn toggle_edge(&mut self, u: &str, v: &str) -> Result<(), GraphError> {
        let (i, j) = (self.require(u)?, self.require(v)?);
        if i == j {
            return Err(GraphError::SelfLoop(u.to_string()));
        }
        self.adj.flip(i, j);
        self.adj.flip(j, i);
        Ok(())
    }

    pub fn edge_count(&self) -> usize {
        self.adj.count_ones() / 2
    }

    /// Edges as index pairs (i < j), ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.node_count();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.adj.get(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn adjacency(&self) -> &BitMatrix {
        &self.adj
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj.row_count(i)
    }

    /// Construct directly from an adjacency matrix, validating symmetry and
    /// the zero diagonal.
    pub fn from_adjacency<S: Into<String>>(
        labels: Vec<S>,
        adj: BitMatrix,
    ) -> Result<Self, GraphError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let index = build_index(&labels)?;
        if adj.rows() != labels.len() || adj.cols() != labels.len() {
            return Err(GraphError::Parse {
                path: String::new(),
                detail: format!(
                    "adjacency is {}x{} but {} labels were given",
                    adj.rows(),
                    adj.cols(),
                    labels.len()
                ),
            });
        }
        for i in 0..labels.len() {
            if adj.get(i, i) {
                return Err(GraphError::SelfLoop(labels[i].clone()));
            }
            for j in (i + 1)..labels.len() {
                if adj.get(i, j) != adj.get(j, i) {
                    return Err(GraphError::Asymmetric(labels[i].clone(), labels[j].clone()));
                }
            }
        }
        Ok(LabeledGraph { labels, index, adj })
    }
}

/// The stack of reported graphs: one slice per reporter, all over a shared
/// node universe.
#[derive(Debug, Clone)]
pub struct ReportSet {
    universe: Vec<String>,
    uindex: HashMap<String, usize>,
    reporters: Vec<String>,
    slices: Vec<BitMatrix>,
}

impl ReportSet {
    /// Assemble from per-reporter graphs. Every report's labels must be a
    /// subset of the universe; slice order follows the given reporter order.
    pub fn new<S: Into<String>>(
        universe: Vec<S>,
        reports: Vec<(String, LabeledGraph)>,
    ) -> Result<Self, GraphError> {
        let universe: Vec<String> = universe.into_iter().map(Into::into).collect();
        let uindex = build_index(&universe)?;
        if reports.is_empty() {
            return Err(GraphError::NoReporters);
        }
        let mut reporters = Vec::with_capacity(reports.len());
        let mut seen = HashMap::new();
        let mut slices = Vec::with_capacity(reports.len());
        let nu = universe.len();
        for (name, graph) in reports {
            if seen.insert(name.clone(), ()).is_some() {
                return Err(GraphError::DuplicateReporter(name));
            }
            let mut slice = BitMatrix::zeros(nu, nu);
            for label in graph.labels() {
                if !uindex.contains_key(label) {
                    return Err(GraphError::UnknownLabel(label.clone()));
                }
            }
            for (a, b) in graph.edges() {
                let u = uindex[graph.label(a)];
                let v = uindex[graph.label(b)];
                slice.set(u, v, true);
                slice.set(v, u, true);
            }
            reporters.push(name);
            slices.push(slice);
        }
        Ok(ReportSet {
            universe,
            uindex,
            reporters,
            slices,
        })
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn universe_index(&self, label: &str) -> Option<usize> {
        self.uindex.get(label).copied()
    }

    pub fn reporter_count(&self) -> usize {
        self.reporters.len()
    }

    pub fn reporters(&self) -> &[String] {
        &self.reporters
    }

    /// Tie indicator X[i][u][v] by indices.
    pub fn tie(&self, reporter: usize, u: usize, v: usize) -> bool {
        self.slices[reporter].get(u, v)
    }

    pub fn slice(&self, reporter: usize) -> &BitMatrix {
        &self.slices[reporter]
    }

    /// Edges of one report as universe-index pairs (u < v).
    pub fn slice_edges(&self, reporter: usize) -> Vec<(usize, usize)> {
        let nu = self.universe.len();
        let mut out = Vec::new();
        for u in 0..nu {
            for v in (u + 1)..nu {
                if self.slices[reporter].get(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn slice_edge_count(&self, reporter: usize) -> usize {
        self.slices[reporter].count_ones() / 2
    }
}
