//! The multilevel form: affiliation matrix W, colouring D, top-level graph Q,
//! and the assembled network with its blocked matrix view.
//!
//! Q and D are fixed once assembled; W and Y are the mutable layers the
//! sampler toggles. W is stored both row-major and column-major so that
//! shared-partner counts on either mode are single AND+popcount passes.

use std::collections::BTreeMap;

use crate::bits::BitMatrix;
use crate::error::TransformError;
use crate::graph::{LabeledGraph, ReportSet};
use crate::pair_index::{check_same_universe, PairIndex};

/// Edges of the reports that fell outside the pair index, grouped by pair.
#[derive(Debug, Clone, Default)]
pub struct DropReport {
    /// Total number of dropped report edges.
    pub total: usize,
    /// Dropped pair label -> reporters whose report contained it.
    pub by_pair: BTreeMap<String, Vec<String>>,
}

/// Reindex a social network's adjacency to follow the reporter order of a
/// report set.
pub fn align_social(
    reports: &ReportSet,
    social: &LabeledGraph,
) -> Result<BitMatrix, TransformError> {
    let n = reports.reporter_count();
    if social.node_count() != n {
        return Err(TransformError::DimensionMismatch(format!(
            "social network has {} nodes, expected {} reporters",
            social.node_count(),
            n
        )));
    }
    let mut y = BitMatrix::zeros(n, n);
    for (a, b) in social.edges() {
        let slot = |label: &str| {
            reports
                .reporters()
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| {
                    TransformError::DimensionMismatch(format!(
                        "social node `{label}` is not a reporter"
                    ))
                })
        };
        let i = slot(social.label(a))?;
        let j = slot(social.label(b))?;
        y.set(i, j, true);
        y.set(j, i, true);
    }
    Ok(y)
}

/// Build the affiliation matrix W (n x e): W[i][r] = 1 iff reporter i's
/// report contains the pre-image pair of r. Returns the drop report for
/// edges outside the index.
pub fn build_affiliation(reports: &ReportSet, pi: &PairIndex) -> (BitMatrix, DropReport) {
    let n = reports.reporter_count();
    let e = pi.len();
    let mut w = BitMatrix::zeros(n, e);
    let mut drops = DropReport::default();
    for i in 0..n {
        for (u, v) in reports.slice_edges(i) {
            match pi.index_of(u, v) {
                Some(r) => w.set(i, r, true),
                None => {
                    drops.total += 1;
                    let label = {
                        let (a, b) = (reports.universe()[u].clone(), reports.universe()[v].clone());
                        format!("{a}--{b}")
                    };
                    drops
                        .by_pair
                        .entry(label)
                        .or_default()
                        .push(reports.reporters()[i].clone());
                }
            }
        }
    }
    (w, drops)
}

/// Build the colouring D (length e): D[r] = 1 iff the pre-image of r is an
/// edge of the criterion graph.
pub fn build_colouring(
    criterion: &LabeledGraph,
    pi: &PairIndex,
) -> Result<Vec<u8>, TransformError> {
    check_same_universe(pi.universe(), criterion)?;
    let mut d = vec![0u8; pi.len()];
    for (r, slot) in d.iter_mut().enumerate() {
        let (a, b) = pi.preimage_labels(r);
        if criterion.has_edge(a, b) {
            *slot = 1;
        }
    }
    Ok(d)
}

/// Build the top-level graph Q (e x e): Q[r][t] = 1 iff the pre-images of r
/// and t share a universe node. For the full pair set this is the line graph
/// of the complete graph on the universe.
pub fn build_line_graph(pi: &PairIndex) -> BitMatrix {
    let e = pi.len();
    let mut q = BitMatrix::zeros(e, e);
    // Group pairs by constituent node: pairs sharing a node are adjacent.
    let nu = pi.universe().len();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nu];
    for r in 0..e {
        let (u, v) = pi.preimage(r);
        incident[u].push(r);
        incident[v].push(r);
    }
    for list in &incident {
        for (a, &r) in list.iter().enumerate() {
            for &t in &list[a + 1..] {
                q.set(r, t, true);
                q.set(t, r, true);
            }
        }
    }
    q
}

/// Structure derived from the fixed Q and D, precomputed once.
#[derive(Debug, Clone)]
pub struct TopLevel {
    /// Q-degree of each top-level node.
    pub degree: Vec<usize>,
    /// Number of Q-triangles through each node.
    pub triangles: Vec<usize>,
    /// For each Q-edge (r, t) sharing node s with pre-image endpoints {a, b},
    /// the index of the pair {a, b} when it is itself in the index.
    pub chord: BTreeMap<(usize, usize), usize>,
    /// chord_d[r] has bit t set iff chord(r, t) exists and is coloured.
    pub chord_d: BitMatrix,
    /// Per-node count of closure triangles {r, t, u} (pre-image union of
    /// exactly three nodes) whose other two members are both coloured.
    pub coloured_closures: Vec<usize>,
}

impl TopLevel {
    fn build(q: &BitMatrix, d: &[u8], pi: &PairIndex) -> Self {
        let e = q.rows();
        let degree: Vec<usize> = (0..e).map(|r| q.row_count(r)).collect();
        let triangles: Vec<usize> = (0..e)
            .map(|r| {
                let nbrs = q.row_ones(r);
                let mut count = 0;
                for (a, &t) in nbrs.iter().enumerate() {
                    for &u in &nbrs[a + 1..] {
                        if q.get(t, u) {
                            count += 1;
                        }
                    }
                }
                count
            })
            .collect();
        let mut chord = BTreeMap::new();
        let mut chord_d = BitMatrix::zeros(e, e);
        for r in 0..e {
            for t in q.row_ones(r) {
                if t <= r {
                    continue;
                }
                let (a, b) = pi.preimage(r);
                let (c, dd) = pi.preimage(t);
                // Exactly one shared node for distinct intersecting pairs;
                // the two free endpoints close the triangle.
                let mut ends = [a, b, c, dd];
                ends.sort_unstable();
                let mut free = Vec::with_capacity(2);
                let mut k = 0;
                while k < 4 {
                    if k + 1 < 4 && ends[k] == ends[k + 1] {
                        k += 2;
                    } else {
                        free.push(ends[k]);
                        k += 1;
                    }
                }
                if free.len() == 2 {
                    if let Some(x) = pi.index_of(free[0], free[1]) {
                        chord.insert((r, t), x);
                        chord.insert((t, r), x);
                        if d[x] == 1 {
                            chord_d.set(r, t, true);
                            chord_d.set(t, r, true);
                        }
                    }
                }
            }
        }
        // Each unordered {t, u} closure is reached from both members.
        let coloured_closures: Vec<usize> = (0..e)
            .map(|r| {
                let mut twice = 0;
                for t in q.row_ones(r) {
                    if d[t] == 0 {
                        continue;
                    }
                    if let Some(&u) = chord.get(&(r, t)) {
                        if d[u] == 1 {
                            twice += 1;
                        }
                    }
                }
                twice / 2
            })
            .collect();
        TopLevel {
            degree,
            triangles,
            chord,
            chord_d,
            coloured_closures,
        }
    }
}

/// The assembled multilevel network: fixed Q and D, mutable W and Y.
#[derive(Debug, Clone)]
pub struct MultilevelNetwork {
    pair_index: PairIndex,
    reporters: Vec<String>,
    w_rows: BitMatrix,
    w_cols: BitMatrix,
    y: BitMatrix,
    q: BitMatrix,
    d: Vec<u8>,
    top: TopLevel,
}

impl MultilevelNetwork {
    /// Validate dimensions and invariants, then assemble.
    ///
    /// `d` defaults to the zero colouring when no criterion is supplied.
    pub fn assemble(
        pair_index: PairIndex,
        reporters: Vec<String>,
        w: BitMatrix,
        y: BitMatrix,
        q: BitMatrix,
        d: Option<Vec<u8>>,
    ) -> Result<Self, TransformError> {
        let n = reporters.len();
        let e = pair_index.len();
        let d = d.unwrap_or_else(|| vec![0u8; e]);
        if w.rows() != n || w.cols() != e {
            return Err(TransformError::DimensionMismatch(format!(
                "W is {}x{}, expected {}x{}",
                w.rows(),
                w.cols(),
                n,
                e
            )));
        }
        if y.rows() != n || y.cols() != n {
            return Err(TransformError::DimensionMismatch(format!(
                "Y is {}x{}, expected {}x{}",
                y.rows(),
                y.cols(),
                n,
                n
            )));
        }
        if q.rows() != e || q.cols() != e {
            return Err(TransformError::DimensionMismatch(format!(
                "Q is {}x{}, expected {}x{}",
                q.rows(),
                q.cols(),
                e,
                e
            )));
        }
        if d.len() != e {
            return Err(TransformError::DimensionMismatch(format!(
                "D has length {}, expected {}",
                d.len(),
                e
            )));
        }
        if !y.is_symmetric() {
            return Err(TransformError::DimensionMismatch(
                "Y is not symmetric".to_string(),
            ));
        }
        for (i, label) in reporters.iter().enumerate() {
            if y.get(i, i) {
                return Err(TransformError::SelfTie(label.clone()));
            }
        }
        // Q must be exactly the shared-node relation of the pair index.
        for r in 0..e {
            if q.get(r, r) {
                return Err(TransformError::LineGraphInvariant(
                    pair_index.pair_label(r),
                    pair_index.pair_label(r),
                ));
            }
            for t in (r + 1)..e {
                let expected = pair_index.pairs_share_node(r, t);
                if q.get(r, t) != expected || q.get(t, r) != expected {
                    return Err(TransformError::LineGraphInvariant(
                        pair_index.pair_label(r),
                        pair_index.pair_label(t),
                    ));
                }
            }
        }
        let mut w_cols = BitMatrix::zeros(e, n);
        for i in 0..n {
            for r in w.row_ones(i) {
                w_cols.set(r, i, true);
            }
        }
        let top = TopLevel::build(&q, &d, &pair_index);
        Ok(MultilevelNetwork {
            pair_index,
            reporters,
            w_rows: w,
            w_cols,
            y,
            q,
            d,
            top,
        })
    }

    /// Transform a report set, social network and optional criterion graph
    /// into the multilevel form in one step.
    pub fn from_data(
        reports: &ReportSet,
        social: &LabeledGraph,
        criterion: Option<&LabeledGraph>,
        pi: PairIndex,
    ) -> Result<(Self, DropReport), TransformError> {
        let y = align_social(reports, social)?;
        let (w, drops) = build_affiliation(reports, &pi);
        let d = match criterion {
            Some(g) => Some(build_colouring(g, &pi)?),
            None => None,
        };
        let q = build_line_graph(&pi);
        let ml = MultilevelNetwork::assemble(pi, reports.reporters().to_vec(), w, y, q, d)?;
        Ok((ml, drops))
    }

    pub fn reporter_count(&self) -> usize {
        self.reporters.len()
    }

    pub fn pair_count(&self) -> usize {
        self.pair_index.len()
    }

    pub fn reporters(&self) -> &[String] {
        &self.reporters
    }

    pub fn pair_index(&self) -> &PairIndex {
        &self.pair_index
    }

    pub fn w(&self) -> &BitMatrix {
        &self.w_rows
    }

    /// W transposed: row r holds the reporters affiliated with pair r.
    pub fn w_by_pair(&self) -> &BitMatrix {
        &self.w_cols
    }

    pub fn y(&self) -> &BitMatrix {
        &self.y
    }

    pub fn q(&self) -> &BitMatrix {
        &self.q
    }

    pub fn d(&self) -> &[u8] {
        &self.d
    }

    pub fn top(&self) -> &TopLevel {
        &self.top
    }

    pub fn w_tie(&self, i: usize, r: usize) -> bool {
        self.w_rows.get(i, r)
    }

    pub fn y_tie(&self, i: usize, j: usize) -> bool {
        self.y.get(i, j)
    }

    /// Flip one affiliation cell. Sampler plumbing; Q and D stay fixed.
    pub fn toggle_w(&mut self, i: usize, r: usize) {
        self.w_rows.flip(i, r);
        self.w_cols.flip(r, i);
    }

    /// Flip one social tie (both triangles).
    pub fn toggle_y(&mut self, i: usize, j: usize) {
        debug_assert_ne!(i, j);
        self.y.flip(i, j);
        self.y.flip(j, i);
    }

    /// The blocked (e + n) x (e + n) view with Q in the top-left block and Y
    /// in the bottom-right.
    pub fn blocked_matrix(&self) -> BitMatrix {
        let n = self.reporter_count();
        let e = self.pair_count();
        let m = n + e;
        let mut c = BitMatrix::zeros(m, m);
        for r in 0..e {
            for t in self.q.row_ones(r) {
                c.set(r, t, true);
            }
        }
        for i in 0..n {
            for r in self.w_rows.row_ones(i) {
                c.set(e + i, r, true);
                c.set(r, e + i, true);
            }
            for j in self.y.row_ones(i) {
                c.set(e + i, e + j, true);
            }
        }
        c
    }
}
