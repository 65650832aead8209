//! Shared fixtures for the integration suites: the worked three-reporter
//! example and seeded random multilevel instances.
#![allow(dead_code)] // each test target uses a different subset

use rand::Rng;
use rand_chacha::ChaCha20Rng;

use nonml::bits::BitMatrix;
use nonml::graph::{LabeledGraph, ReportSet};
use nonml::multilevel::MultilevelNetwork;
use nonml::pair_index::{PairIndex, PairPolicy};

/// Reports i = {us, uv}, j = {us, sv}, k = {sv}; social ties i-j and j-k;
/// criterion edge u-s.
pub fn toy_inputs() -> (ReportSet, LabeledGraph, LabeledGraph) {
    let hi = LabeledGraph::from_edges(vec!["s", "u", "v"], &[("u", "s"), ("u", "v")]).unwrap();
    let hj = LabeledGraph::from_edges(vec!["s", "u", "v"], &[("u", "s"), ("s", "v")]).unwrap();
    let hk = LabeledGraph::from_edges(vec!["s", "u", "v"], &[("s", "v")]).unwrap();
    let reports = ReportSet::new(
        vec!["s", "u", "v"],
        vec![
            ("i".to_string(), hi),
            ("j".to_string(), hj),
            ("k".to_string(), hk),
        ],
    )
    .unwrap();
    let social = LabeledGraph::from_edges(vec!["i", "j", "k"], &[("i", "j"), ("j", "k")]).unwrap();
    let criterion = LabeledGraph::from_edges(vec!["s", "u", "v"], &[("u", "s")]).unwrap();
    (reports, social, criterion)
}

pub fn toy_network() -> MultilevelNetwork {
    let (reports, social, criterion) = toy_inputs();
    let pi = PairIndex::build(&reports, Some(&criterion), &PairPolicy::Full).unwrap();
    MultilevelNetwork::from_data(&reports, &social, Some(&criterion), pi)
        .unwrap()
        .0
}

/// A random multilevel instance with the given bounds. Universe size is
/// drawn from 3..=max_universe, the pair set is a random subset capped at
/// max_pairs, tie densities are uniform on (0, 1), and the colouring comes
/// from a random criterion graph.
pub fn random_instance(
    rng: &mut ChaCha20Rng,
    max_reporters: usize,
    max_universe: usize,
    max_pairs: usize,
) -> MultilevelNetwork {
    let nu = rng.gen_range(3..=max_universe);
    let universe: Vec<String> = (0..nu).map(|k| format!("c{k:02}")).collect();
    let n = rng.gen_range(2..=max_reporters);
    let reporter_labels: Vec<String> = (0..n).map(|k| format!("p{k:02}")).collect();

    let mut all_pairs: Vec<(String, String)> = Vec::new();
    for u in 0..nu {
        for v in (u + 1)..nu {
            all_pairs.push((universe[u].clone(), universe[v].clone()));
        }
    }
    // Fisher-Yates prefix.
    for idx in 0..all_pairs.len() {
        let swap = rng.gen_range(idx..all_pairs.len());
        all_pairs.swap(idx, swap);
    }
    let e = rng.gen_range(1..=all_pairs.len().min(max_pairs));
    let pairs: Vec<(String, String)> = all_pairs.into_iter().take(e).collect();

    let placeholder = LabeledGraph::new(universe.clone()).unwrap();
    let reports = ReportSet::new(
        universe.clone(),
        reporter_labels
            .iter()
            .map(|l| (l.clone(), placeholder.clone()))
            .collect(),
    )
    .unwrap();
    let pi = PairIndex::build(&reports, None, &PairPolicy::Explicit(pairs)).unwrap();
    let q = nonml::build_line_graph(&pi);

    let dens_w: f64 = rng.gen();
    let mut w = BitMatrix::zeros(n, e);
    for i in 0..n {
        for r in 0..e {
            if rng.gen::<f64>() < dens_w {
                w.set(i, r, true);
            }
        }
    }
    let dens_y: f64 = rng.gen();
    let mut y = BitMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen::<f64>() < dens_y {
                y.set(i, j, true);
                y.set(j, i, true);
            }
        }
    }
    let d: Vec<u8> = (0..e).map(|_| (rng.gen::<f64>() < 0.5) as u8).collect();

    MultilevelNetwork::assemble(pi, reporter_labels, w, y, q, Some(d)).unwrap()
}
