//! File formats: edge-list and labelled-matrix CSV, report-set manifests,
//! model spec JSON, pair-index JSON, and the transform output bundle.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bits::BitMatrix;
use crate::error::{GraphError, TransformError};
use crate::graph::{LabeledGraph, ReportSet};
use crate::multilevel::MultilevelNetwork;
use crate::pair_index::{PairIndex, PairPolicy};
use crate::sampler::{FreeLayers, ModelSpec};
use crate::stats::StatRequest;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    Matrix,
}

fn io_err(path: &Path, source: std::io::Error) -> GraphError {
    GraphError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn parse_err(path: &Path, detail: impl Into<String>) -> GraphError {
    GraphError::Parse {
        path: path.display().to_string(),
        detail: detail.into(),
    }
}

/// Read an edge-list CSV (`from,to` header). Unknown labels become nodes in
/// first-seen order unless a universe is supplied, in which case labels must
/// belong to it and isolates are kept.
pub fn load_edge_list(
    path: &Path,
    universe: Option<&[String]>,
) -> Result<LabeledGraph, GraphError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| parse_err(path, e.to_string()))?;
    {
        let headers = reader
            .headers()
            .map_err(|e| parse_err(path, e.to_string()))?;
        if headers.len() < 2 || &headers[0] != "from" || &headers[1] != "to" {
            return Err(parse_err(path, "expected header `from,to`"));
        }
    }
    let mut edges: Vec<(String, String)> = Vec::new();
    let mut seen: Vec<String> = Vec::new();
    let mut seen_set: HashSet<String> = HashSet::new();
    for record in reader.records() {
        let record = record.map_err(|e| parse_err(path, e.to_string()))?;
        if record.len() < 2 {
            return Err(parse_err(path, "row with fewer than two fields"));
        }
        let (a, b) = (record[0].to_string(), record[1].to_string());
        for l in [&a, &b] {
            if !seen_set.contains(l) {
                seen_set.insert(l.clone());
                seen.push(l.clone());
            }
        }
        edges.push((a, b));
    }
    let labels: Vec<String> = match universe {
        Some(u) => {
            for l in &seen {
                if !u.contains(l) {
                    return Err(GraphError::UnknownLabel(l.clone()));
                }
            }
            u.to_vec()
        }
        None => seen,
    };
    let mut g = LabeledGraph::new(labels)?;
    for (a, b) in &edges {
        g.add_edge(a, b)?;
    }
    Ok(g)
}

/// Read a labelled 0/1 matrix CSV: first row and first column carry labels.
pub fn load_matrix(path: &Path) -> Result<LabeledGraph, GraphError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_path(path)
        .map_err(|e| parse_err(path, e.to_string()))?;
    let labels: Vec<String> = {
        let headers = reader
            .headers()
            .map_err(|e| parse_err(path, e.to_string()))?;
        headers.iter().skip(1).map(String::from).collect()
    };
    let n = labels.len();
    let mut adj = BitMatrix::zeros(n, n);
    let mut row_labels = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_err(path, e.to_string()))?;
        if record.len() != n + 1 {
            return Err(parse_err(
                path,
                format!(
                    "row {} has {} fields, expected {}",
                    r + 2,
                    record.len(),
                    n + 1
                ),
            ));
        }
        row_labels.push(record[0].to_string());
        for c in 0..n {
            match record[c + 1].trim() {
                "0" => {}
                "1" => adj.set(r, c, true),
                other => {
                    return Err(parse_err(
                        path,
                        format!("matrix entry `{other}` is not 0 or 1"),
                    ))
                }
            }
        }
    }
    if row_labels != labels {
        return Err(parse_err(path, "row labels do not match column labels"));
    }
    LabeledGraph::from_adjacency(labels, adj)
}

/// Spec-facing loader with an explicit format switch.
pub fn load_graph(path: &Path, format: GraphFormat) -> Result<LabeledGraph, GraphError> {
    match format {
        GraphFormat::EdgeList => load_edge_list(path, None),
        GraphFormat::Matrix => load_matrix(path),
    }
}

pub fn write_edge_list(path: &Path, g: &LabeledGraph) -> Result<(), GraphError> {
    let mut out = String::from("from,to\n");
    for (a, b) in g.edges() {
        out.push_str(&format!("{},{}\n", g.label(a), g.label(b)));
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}

pub fn write_matrix(path: &Path, g: &LabeledGraph) -> Result<(), GraphError> {
    let n = g.node_count();
    let mut out = String::new();
    out.push_str("label");
    for l in g.labels() {
        out.push(',');
        out.push_str(l);
    }
    out.push('\n');
    for i in 0..n {
        out.push_str(g.label(i));
        for j in 0..n {
            out.push(',');
            out.push(if g.adjacency().get(i, j) { '1' } else { '0' });
        }
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}

pub fn write_graph(path: &Path, g: &LabeledGraph, format: GraphFormat) -> Result<(), GraphError> {
    match format {
        GraphFormat::EdgeList => write_edge_list(path, g),
        GraphFormat::Matrix => write_matrix(path, g),
    }
}

/// A generic labelled binary matrix CSV (possibly rectangular).
pub fn write_bit_matrix(
    path: &Path,
    m: &BitMatrix,
    row_labels: &[String],
    col_labels: &[String],
) -> Result<(), GraphError> {
    let mut out = String::new();
    out.push_str("label");
    for l in col_labels {
        out.push(',');
        out.push_str(l);
    }
    out.push('\n');
    for (i, l) in row_labels.iter().enumerate() {
        out.push_str(l);
        for j in 0..m.cols() {
            out.push(',');
            out.push(if m.get(i, j) { '1' } else { '0' });
        }
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}

pub fn load_bit_matrix(path: &Path) -> Result<(BitMatrix, Vec<String>, Vec<String>), GraphError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_path(path)
        .map_err(|e| parse_err(path, e.to_string()))?;
    let col_labels: Vec<String> = {
        let headers = reader
            .headers()
            .map_err(|e| parse_err(path, e.to_string()))?;
        headers.iter().skip(1).map(String::from).collect()
    };
    let mut rows: Vec<Vec<bool>> = Vec::new();
    let mut row_labels = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| parse_err(path, e.to_string()))?;
        if record.len() != col_labels.len() + 1 {
            return Err(parse_err(path, "ragged matrix row"));
        }
        row_labels.push(record[0].to_string());
        let mut row = Vec::with_capacity(col_labels.len());
        for c in 0..col_labels.len() {
            match record[c + 1].trim() {
                "0" => row.push(false),
                "1" => row.push(true),
                other => {
                    return Err(parse_err(
                        path,
                        format!("matrix entry `{other}` is not 0 or 1"),
                    ))
                }
            }
        }
        rows.push(row);
    }
    let mut m = BitMatrix::zeros(rows.len(), col_labels.len());
    for (i, row) in rows.iter().enumerate() {
        for (j, &bit) in row.iter().enumerate() {
            if bit {
                m.set(i, j, true);
            }
        }
    }
    Ok((m, row_labels, col_labels))
}

// ---------------------------------------------------------------------------
// Manifest: universe, reporter files, social network, criterion, policy.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReporterEntry {
    pub label: String,
    pub path: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicySpec {
    Full,
    Union,
    Explicit(Vec<(String, String)>),
}

impl PolicySpec {
    pub fn to_policy(&self) -> PairPolicy {
        match self {
            PolicySpec::Full => PairPolicy::Full,
            PolicySpec::Union => PairPolicy::Union,
            PolicySpec::Explicit(list) => PairPolicy::Explicit(list.clone()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub universe: Vec<String>,
    pub reporters: Vec<ReporterEntry>,
    pub social_network: String,
    #[serde(default)]
    pub criterion: Option<String>,
    pub policy: PolicySpec,
}

pub struct LoadedData {
    pub reports: ReportSet,
    pub social: LabeledGraph,
    pub criterion: Option<LabeledGraph>,
    pub policy: PairPolicy,
}

pub fn load_manifest(path: &Path) -> Result<LoadedData, TransformError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let manifest: Manifest =
        serde_json::from_str(&text).map_err(|e| parse_err(path, e.to_string()))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let resolve = |p: &str| -> PathBuf {
        let pb = PathBuf::from(p);
        if pb.is_absolute() {
            pb
        } else {
            base.join(pb)
        }
    };
    let mut reports = Vec::with_capacity(manifest.reporters.len());
    for entry in &manifest.reporters {
        let g = load_edge_list(&resolve(&entry.path), Some(&manifest.universe))?;
        reports.push((entry.label.clone(), g));
    }
    let reports = ReportSet::new(manifest.universe.clone(), reports)?;
    let social = load_edge_list(
        &resolve(&manifest.social_network),
        Some(reports.reporters()),
    )?;
    let criterion = match &manifest.criterion {
        Some(p) => Some(load_edge_list(&resolve(p), Some(&manifest.universe))?),
        None => None,
    };
    Ok(LoadedData {
        reports,
        social,
        criterion,
        policy: manifest.policy.to_policy(),
    })
}

// ---------------------------------------------------------------------------
// Pair-index JSON.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairIndexFile {
    pub universe: Vec<String>,
    /// r-th entry is the label pair mapped to top-level node r.
    pub pairs: Vec<(String, String)>,
}

pub fn write_pair_index(path: &Path, pi: &PairIndex) -> Result<(), GraphError> {
    let file = PairIndexFile {
        universe: pi.universe().to_vec(),
        pairs: (0..pi.len())
            .map(|r| {
                let (a, b) = pi.preimage_labels(r);
                (a.to_string(), b.to_string())
            })
            .collect(),
    };
    let text = serde_json::to_string_pretty(&file).expect("pair index serializes");
    fs::write(path, text).map_err(|e| io_err(path, e))
}

pub fn read_pair_index_file(path: &Path) -> Result<PairIndexFile, GraphError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| parse_err(path, e.to_string()))
}

// ---------------------------------------------------------------------------
// Transform output bundle: W/Y/Q/D CSV plus the pair-index JSON.
// ---------------------------------------------------------------------------

pub fn write_transform_outputs(dir: &Path, ml: &MultilevelNetwork) -> Result<(), GraphError> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let pair_labels: Vec<String> = (0..ml.pair_count())
        .map(|r| ml.pair_index().pair_label(r))
        .collect();
    let reporter_labels = ml.reporters().to_vec();
    write_bit_matrix(&dir.join("W.csv"), ml.w(), &reporter_labels, &pair_labels)?;
    write_bit_matrix(
        &dir.join("Y.csv"),
        ml.y(),
        &reporter_labels,
        &reporter_labels,
    )?;
    write_bit_matrix(&dir.join("Q.csv"), ml.q(), &pair_labels, &pair_labels)?;
    let mut d_out = String::from("pair,colour\n");
    for (r, label) in pair_labels.iter().enumerate() {
        d_out.push_str(&format!("{label},{}\n", ml.d()[r]));
    }
    fs::write(dir.join("D.csv"), d_out).map_err(|e| io_err(&dir.join("D.csv"), e))?;
    write_pair_index(&dir.join("pair_index.json"), ml.pair_index())
}

/// Rebuild a multilevel network from a transform output directory.
pub fn load_transform_outputs(dir: &Path) -> Result<MultilevelNetwork, TransformError> {
    let pif = read_pair_index_file(&dir.join("pair_index.json"))?;
    // Recreate the index through the explicit policy to keep the stored order.
    let placeholder = LabeledGraph::new(pif.universe.clone())?;
    let reports = ReportSet::new(
        pif.universe.clone(),
        vec![("__placeholder__".to_string(), placeholder)],
    )?;
    let pi = PairIndex::build(&reports, None, &PairPolicy::Explicit(pif.pairs.clone()))?;
    let pair_labels: Vec<String> = (0..pi.len()).map(|r| pi.pair_label(r)).collect();
    let (w, reporter_labels, w_cols) = load_bit_matrix(&dir.join("W.csv"))?;
    let (y, y_rows, y_cols) = load_bit_matrix(&dir.join("Y.csv"))?;
    let (q, q_rows, q_cols) = load_bit_matrix(&dir.join("Q.csv"))?;
    // The bundle's files must describe the same labelling.
    if w_cols != pair_labels || q_rows != pair_labels || q_cols != pair_labels {
        return Err(TransformError::DimensionMismatch(
            "pair labels disagree between pair_index.json, W.csv and Q.csv".to_string(),
        ));
    }
    if y_rows != reporter_labels || y_cols != reporter_labels {
        return Err(TransformError::DimensionMismatch(
            "reporter labels disagree between W.csv and Y.csv".to_string(),
        ));
    }
    let d_text =
        fs::read_to_string(dir.join("D.csv")).map_err(|e| io_err(&dir.join("D.csv"), e))?;
    let mut d = Vec::with_capacity(pi.len());
    for line in d_text.lines().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let value = line
            .rsplit(',')
            .next()
            .and_then(|v| v.trim().parse::<u8>().ok())
            .ok_or_else(|| parse_err(&dir.join("D.csv"), format!("bad row `{line}`")))?;
        d.push(value);
    }
    let ml = MultilevelNetwork::assemble(pi, reporter_labels, w, y, q, Some(d))?;
    Ok(ml)
}

// ---------------------------------------------------------------------------
// Model spec JSON.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EffectSpec {
    pub name: String,
    #[serde(default)]
    pub theta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelSpecFile {
    pub effects: Vec<EffectSpec>,
    /// Subset of ["W", "Y"].
    pub free_layers: Vec<String>,
    #[serde(default)]
    pub structural_zeros: Option<StructuralZeros>,
    #[serde(default)]
    pub burnin: Option<u64>,
    #[serde(default)]
    pub thin: Option<u64>,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct StructuralZeros {
    #[serde(default)]
    pub w: Vec<(usize, usize)>,
    #[serde(default)]
    pub y: Vec<(usize, usize)>,
}

#[derive(Debug, thiserror::Error)]
pub enum SpecFileError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Stat(#[from] crate::error::StatError),
    #[error("free layer `{0}` is not W or Y (Q and D are fixed)")]
    BadLayer(String),
    #[error("spec file {0}: {1}")]
    Format(String, String),
}

impl ModelSpecFile {
    pub fn load(path: &Path) -> Result<Self, SpecFileError> {
        let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| SpecFileError::Format(path.display().to_string(), e.to_string()))
    }

    pub fn to_model_spec(&self) -> Result<ModelSpec, SpecFileError> {
        let mut effects = Vec::with_capacity(self.effects.len());
        for e in &self.effects {
            let id = StatRequest {
                name: e.name.clone(),
                lambda: e.lambda,
            }
            .resolve()?;
            effects.push((id, e.theta));
        }
        let mut layers = FreeLayers { w: false, y: false };
        for l in &self.free_layers {
            match l.as_str() {
                "W" | "w" => layers.w = true,
                "Y" | "y" => layers.y = true,
                other => return Err(SpecFileError::BadLayer(other.to_string())),
            }
        }
        let mut spec = ModelSpec::new(effects, layers);
        if let Some(z) = &self.structural_zeros {
            spec.w_mask = z.w.clone();
            spec.y_mask = z.y.clone();
        }
        Ok(spec)
    }

    /// Plain statistic list (for the stats subcommand the thetas are unused).
    pub fn statistic_ids(&self) -> Result<Vec<crate::stats::StatisticId>, SpecFileError> {
        let mut ids = Vec::with_capacity(self.effects.len());
        for e in &self.effects {
            ids.push(
                StatRequest {
                    name: e.name.clone(),
                    lambda: e.lambda,
                }
                .resolve()?,
            );
        }
        Ok(ids)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::env;

    fn tmp_dir(tag: &str) -> PathBuf {
        let dir = env::temp_dir().join(format!("nonml-io-{tag}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn edge_list_round_trip() {
        let dir = tmp_dir("edgelist");
        let g = LabeledGraph::from_edges(vec!["u", "s", "v"], &[("u", "s"), ("s", "v")]).unwrap();
        let path = dir.join("g.csv");
        write_edge_list(&path, &g).unwrap();
        let g2 = load_edge_list(&path, Some(&g.labels().to_vec())).unwrap();
        assert_eq!(g, g2);
    }

    #[test]
    fn matrix_round_trip() {
        let dir = tmp_dir("matrix");
        let g = LabeledGraph::from_edges(vec!["u", "s", "v"], &[("u", "v")]).unwrap();
        let path = dir.join("g.csv");
        write_matrix(&path, &g).unwrap();
        let g2 = load_matrix(&path).unwrap();
        assert_eq!(g, g2);
    }

    #[test]
    fn matrix_with_self_loop_is_rejected() {
        let dir = tmp_dir("loop");
        let path = dir.join("bad.csv");
        fs::write(&path, "label,u,s\nu,1,0\ns,0,0\n").unwrap();
        assert!(matches!(
            load_matrix(&path),
            Err(GraphError::SelfLoop(l)) if l == "u"
        ));
    }

    #[test]
    fn asymmetric_matrix_is_rejected() {
        let dir = tmp_dir("asym");
        let path = dir.join("bad.csv");
        fs::write(&path, "label,u,s\nu,0,1\ns,0,0\n").unwrap();
        assert!(matches!(
            load_matrix(&path),
            Err(GraphError::Asymmetric(_, _))
        ));
    }

    #[test]
    fn edge_list_unknown_label_with_universe_is_rejected() {
        let dir = tmp_dir("unknown");
        let path = dir.join("g.csv");
        fs::write(&path, "from,to\nu,w\n").unwrap();
        let universe = vec!["u".to_string(), "s".to_string()];
        assert!(matches!(
            load_edge_list(&path, Some(&universe)),
            Err(GraphError::UnknownLabel(l)) if l == "w"
        ));
    }

    #[test]
    fn edge_list_without_universe_uses_first_seen_order() {
        let dir = tmp_dir("firstseen");
        let path = dir.join("g.csv");
        fs::write(&path, "from,to\nb,a\nc,a\n").unwrap();
        let g = load_edge_list(&path, None).unwrap();
        assert_eq!(g.labels(), &["b", "a", "c"]);
        assert_eq!(g.edge_count(), 2);
    }

    fn small_network() -> MultilevelNetwork {
        let ha = LabeledGraph::from_edges(vec!["a", "b", "c"], &[("a", "b")]).unwrap();
        let hb = LabeledGraph::from_edges(vec!["a", "b", "c"], &[("b", "c")]).unwrap();
        let reports = ReportSet::new(
            vec!["a", "b", "c"],
            vec![("p0".to_string(), ha), ("p1".to_string(), hb)],
        )
        .unwrap();
        let social = LabeledGraph::from_edges(vec!["p0", "p1"], &[("p0", "p1")]).unwrap();
        let criterion = LabeledGraph::from_edges(vec!["a", "b", "c"], &[("b", "c")]).unwrap();
        let pi = PairIndex::build(&reports, Some(&criterion), &PairPolicy::Union).unwrap();
        MultilevelNetwork::from_data(&reports, &social, Some(&criterion), pi)
            .unwrap()
            .0
    }

    #[test]
    fn transform_bundle_round_trips() {
        let dir = tmp_dir("bundle");
        let ml = small_network();
        write_transform_outputs(&dir, &ml).unwrap();
        let back = load_transform_outputs(&dir).unwrap();
        assert_eq!(back.w(), ml.w());
        assert_eq!(back.y(), ml.y());
        assert_eq!(back.q(), ml.q());
        assert_eq!(back.d(), ml.d());
        assert_eq!(back.reporters(), ml.reporters());
    }

    #[test]
    fn transform_bundle_with_mismatched_labels_is_rejected() {
        let dir = tmp_dir("bundle-bad");
        let ml = small_network();
        write_transform_outputs(&dir, &ml).unwrap();
        // Swap the reporter labels in Y.csv only.
        let y = fs::read_to_string(dir.join("Y.csv")).unwrap();
        fs::write(dir.join("Y.csv"), y.replace("p0", "px")).unwrap();
        assert!(matches!(
            load_transform_outputs(&dir),
            Err(TransformError::DimensionMismatch(_))
        ));
    }
}
