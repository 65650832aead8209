//! The bijection between selected node pairs and top-level node indices.
//!
//! Pair ordering is lexicographic on the sorted label pair, so the mapping is
//! deterministic and reproducible across runs. The explicit policy keeps the
//! caller's order, which also gives tests a way to permute top-level labels.

use std::collections::HashMap;

use crate::error::TransformError;
use crate::graph::{LabeledGraph, ReportSet};

/// How the top-level pair set is selected.
#[derive(Debug, Clone, PartialEq)]
pub enum PairPolicy {
    /// Every unordered pair of the universe.
    Full,
    /// Pairs present in any report or in the criterion graph.
    Union,
    /// A caller-supplied pair list, validated but kept in the given order.
    Explicit(Vec<(String, String)>),
}

/// Bijection between unordered universe pairs and `0..e`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairIndex {
    universe: Vec<String>,
    pairs: Vec<(usize, usize)>,
    lookup: HashMap<(usize, usize), usize>,
}

impl PairIndex {
    pub fn build(
        reports: &ReportSet,
        criterion: Option<&LabeledGraph>,
        policy: &PairPolicy,
    ) -> Result<Self, TransformError> {
        let universe = reports.universe().to_vec();
        if let Some(g) = criterion {
            check_same_universe(&universe, g)?;
        }
        let nu = universe.len();
        let mut pairs: Vec<(usize, usize)> = match policy {
            PairPolicy::Full => {
                let mut v = Vec::with_capacity(nu * (nu.saturating_sub(1)) / 2);
                for u in 0..nu {
                    for w in (u + 1)..nu {
                        v.push((u, w));
                    }
                }
                v
            }
            PairPolicy::Union => {
                let mut set: Vec<(usize, usize)> = Vec::new();
                for i in 0..reports.reporter_count() {
                    set.extend(reports.slice_edges(i));
                }
                if let Some(g) = criterion {
                    for (a, b) in g.edges() {
                        let u = reports.universe_index(g.label(a)).expect("checked");
                        let v = reports.universe_index(g.label(b)).expect("checked");
                        set.push(if u < v { (u, v) } else { (v, u) });
                    }
                }
                set.sort_unstable();
                set.dedup();
                set
            }
            PairPolicy::Explicit(list) => {
                let mut seen = HashMap::new();
                let mut v = Vec::with_capacity(list.len());
                for (a, b) in list {
                    let u = reports.universe_index(a).ok_or_else(|| {
                        TransformError::Graph(crate::error::GraphError::UnknownLabel(a.clone()))
                    })?;
                    let w = reports.universe_index(b).ok_or_else(|| {
                        TransformError::Graph(crate::error::GraphError::UnknownLabel(b.clone()))
                    })?;
                    if u == w {
                        return Err(TransformError::ExplicitSelfPair(a.clone()));
                    }
                    let key = if u < w { (u, w) } else { (w, u) };
                    if seen.insert(key, ()).is_some() {
                        return Err(TransformError::ExplicitDuplicate(a.clone(), b.clone()));
                    }
                    v.push(key);
                }
                v
            }
        };
        // Full and union policies order pairs lexicographically by label.
        if !matches!(policy, PairPolicy::Explicit(_)) {
            pairs.sort_by(|&(a1, a2), &(b1, b2)| {
                let ka = (&universe[a1], &universe[a2]);
                let kb = (&universe[b1], &universe[b2]);
                ka.cmp(&kb)
            });
        }
        let lookup = pairs
            .iter()
            .enumerate()
            .map(|(r, &p)| (p, r))
            .collect::<HashMap<_, _>>();
        Ok(PairIndex {
            universe,
            pairs,
            lookup,
        })
    }

    /// Number of top-level nodes e.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    /// Pre-image of top-level node `r` as universe indices (u < v).
    pub fn preimage(&self, r: usize) -> (usize, usize) {
        self.pairs[r]
    }

    /// Pre-image of `r` as labels.
    pub fn preimage_labels(&self, r: usize) -> (&str, &str) {
        let (u, v) = self.pairs[r];
        (&self.universe[u], &self.universe[v])
    }

    /// Display form used in CSV headers.
    pub fn pair_label(&self, r: usize) -> String {
        let (a, b) = self.preimage_labels(r);
        format!("{a}--{b}")
    }

    /// Top-level index of the unordered pair (u, v), if selected.
    pub fn index_of(&self, u: usize, v: usize) -> Option<usize> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.lookup.get(&key).copied()
    }

    pub fn index_of_labels(&self, a: &str, b: &str) -> Option<usize> {
        let u = self.universe.iter().position(|l| l == a)?;
        let v = self.universe.iter().position(|l| l == b)?;
        self.index_of(u, v)
    }

    /// Do the pre-images of r and t share a universe node?
    pub fn pairs_share_node(&self, r: usize, t: usize) -> bool {
        let (a, b) = self.pairs[r];
        let (c, d) = self.pairs[t];
        a == c || a == d || b == c || b == d
    }
}

pub(crate) fn check_same_universe(
    universe: &[String],
    g: &LabeledGraph,
) -> Result<(), TransformError> {
    for l in g.labels() {
        if !universe.iter().any(|u| u == l) {
            return Err(TransformError::UniverseMismatch(format!(
                "criterion node `{l}` is not in the universe"
            )));
        }
    }
    Ok(())
}
