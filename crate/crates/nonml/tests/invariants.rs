//! Structural invariants on randomized instances: container contracts,
//! transform identities, label invariance, and file round-trips.

mod common;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use nonml::graph::{LabeledGraph, ReportSet};
use nonml::io::{load_graph, write_graph, GraphFormat};
use nonml::multilevel::MultilevelNetwork;
use nonml::pair_index::{PairIndex, PairPolicy};
use nonml::stats::{all_statistic_ids, compute_statistics};

fn random_labeled_graph(rng: &mut ChaCha20Rng, max_nodes: usize) -> LabeledGraph {
    let n = rng.gen_range(2..=max_nodes);
    let labels: Vec<String> = (0..n).map(|k| format!("n{k:02}")).collect();
    let mut g = LabeledGraph::new(labels.clone()).unwrap();
    let dens: f64 = rng.gen();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen::<f64>() < dens {
                g.add_edge(&labels[i], &labels[j]).unwrap();
            }
        }
    }
    g
}

#[test]
fn graphs_stay_symmetric_with_zero_diagonal() {
    let mut rng = ChaCha20Rng::seed_from_u64(101);
    for _ in 0..50 {
        let mut g = random_labeled_graph(&mut rng, 8);
        assert!(g.adjacency().is_symmetric());
        assert!(g.adjacency().diagonal_is_zero());
        // A few random toggles keep the contract.
        let labels = g.labels().to_vec();
        for _ in 0..10 {
            let a = rng.gen_range(0..labels.len());
            let b = rng.gen_range(0..labels.len());
            if a != b {
                g.toggle_edge(&labels[a].clone(), &labels[b].clone())
                    .unwrap();
            }
        }
        assert!(g.adjacency().is_symmetric());
        assert!(g.adjacency().diagonal_is_zero());
    }
}

#[test]
fn toggle_twice_is_identity() {
    let mut rng = ChaCha20Rng::seed_from_u64(102);
    for _ in 0..50 {
        let mut g = random_labeled_graph(&mut rng, 8);
        let before = g.clone();
        let labels = g.labels().to_vec();
        let a = rng.gen_range(0..labels.len());
        let b = (a + 1 + rng.gen_range(0..labels.len() - 1)) % labels.len();
        g.toggle_edge(&labels[a], &labels[b]).unwrap();
        g.toggle_edge(&labels[a], &labels[b]).unwrap();
        assert_eq!(g, before);
    }
}

#[test]
fn graph_files_round_trip_in_both_formats() {
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("roundtrip");
    std::fs::create_dir_all(&dir).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(103);
    for case in 0..25 {
        let g = random_labeled_graph(&mut rng, 7);
        let p_edges = dir.join(format!("g{case}.edges.csv"));
        let p_matrix = dir.join(format!("g{case}.matrix.csv"));
        write_graph(&p_edges, &g, GraphFormat::EdgeList).unwrap();
        write_graph(&p_matrix, &g, GraphFormat::Matrix).unwrap();
        // Edge lists lose isolates unless a universe is supplied.
        let back = nonml::io::load_edge_list(&p_edges, Some(&g.labels().to_vec())).unwrap();
        assert_eq!(back, g);
        let back = load_graph(&p_matrix, GraphFormat::Matrix).unwrap();
        assert_eq!(back, g);
    }
}

#[test]
fn affiliation_row_sums_match_report_margins() {
    let mut rng = ChaCha20Rng::seed_from_u64(104);
    for _ in 0..30 {
        let nu = rng.gen_range(3..=6);
        let universe: Vec<String> = (0..nu).map(|k| format!("c{k}")).collect();
        let n = rng.gen_range(1..=5);
        let mut entries = Vec::new();
        for i in 0..n {
            let mut g = LabeledGraph::new(universe.clone()).unwrap();
            let dens: f64 = rng.gen();
            for u in 0..nu {
                for v in (u + 1)..nu {
                    if rng.gen::<f64>() < dens {
                        g.add_edge(&universe[u], &universe[v]).unwrap();
                    }
                }
            }
            entries.push((format!("p{i}"), g));
        }
        let reports = ReportSet::new(universe.clone(), entries).unwrap();
        let pi = PairIndex::build(&reports, None, &PairPolicy::Union).unwrap();
        let (w, drops) = nonml::build_affiliation(&reports, &pi);
        // Union policy admits every reported edge, so no drops and exact
        // marginal preservation.
        assert_eq!(drops.total, 0);
        for i in 0..n {
            assert_eq!(w.row_count(i), reports.slice_edge_count(i));
        }
    }
}

#[test]
fn blocked_matrix_is_symmetric_with_zero_diagonal() {
    let mut rng = ChaCha20Rng::seed_from_u64(105);
    for _ in 0..20 {
        let ml = common::random_instance(&mut rng, 5, 5, 8);
        let c = ml.blocked_matrix();
        assert!(c.is_symmetric());
        assert!(c.diagonal_is_zero());
        assert_eq!(c.rows(), ml.reporter_count() + ml.pair_count());
    }
}

#[test]
fn statistics_are_invariant_to_reporter_and_pair_relabelling() {
    let mut rng = ChaCha20Rng::seed_from_u64(106);
    let ids = all_statistic_ids();
    for _ in 0..15 {
        // Build from report data so both orderings describe the same world.
        let nu = rng.gen_range(3..=5);
        let universe: Vec<String> = (0..nu).map(|k| format!("c{k}")).collect();
        let n = rng.gen_range(2..=4);
        let mut entries = Vec::new();
        for i in 0..n {
            let mut g = LabeledGraph::new(universe.clone()).unwrap();
            for u in 0..nu {
                for v in (u + 1)..nu {
                    if rng.gen::<f64>() < 0.5 {
                        g.add_edge(&universe[u], &universe[v]).unwrap();
                    }
                }
            }
            entries.push((format!("p{i}"), g));
        }
        let mut social =
            LabeledGraph::new(entries.iter().map(|(l, _)| l.clone()).collect::<Vec<_>>()).unwrap();
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.gen::<f64>() < 0.5 {
                    social.add_edge(&format!("p{i}"), &format!("p{j}")).unwrap();
                }
            }
        }
        let mut criterion = LabeledGraph::new(universe.clone()).unwrap();
        for u in 0..nu {
            for v in (u + 1)..nu {
                if rng.gen::<f64>() < 0.4 {
                    criterion.add_edge(&universe[u], &universe[v]).unwrap();
                }
            }
        }

        let reports = ReportSet::new(universe.clone(), entries.clone()).unwrap();
        let pi = PairIndex::build(&reports, Some(&criterion), &PairPolicy::Full).unwrap();
        let (ml, _) =
            MultilevelNetwork::from_data(&reports, &social, Some(&criterion), pi).unwrap();
        let base = compute_statistics(&ml, &ids).unwrap();

        // Reporters in reverse order; pairs in a rotated explicit order.
        let mut rev_entries = entries.clone();
        rev_entries.reverse();
        let reports2 = ReportSet::new(universe.clone(), rev_entries).unwrap();
        let mut pairs: Vec<(String, String)> = Vec::new();
        for u in 0..nu {
            for v in (u + 1)..nu {
                pairs.push((universe[u].clone(), universe[v].clone()));
            }
        }
        let half = pairs.len() / 2;
        pairs.rotate_left(half);
        pairs.reverse();
        let pi2 =
            PairIndex::build(&reports2, Some(&criterion), &PairPolicy::Explicit(pairs)).unwrap();
        let (ml2, _) =
            MultilevelNetwork::from_data(&reports2, &social, Some(&criterion), pi2).unwrap();
        let permuted = compute_statistics(&ml2, &ids).unwrap();

        for ((ida, va), (_, vb)) in base.entries().iter().zip(permuted.entries()) {
            assert_eq!(va, vb, "{} changed under relabelling", ida.name());
        }
    }
}

#[test]
fn summary_clustering_agrees_with_the_census_counts() {
    use nonml::stats::{
        census_oracle, clustering_ratio, summary_stats, two_mode_clustering_ratio, Statistic,
        StatisticId,
    };
    let mut rng = ChaCha20Rng::seed_from_u64(108);
    let ids = [
        StatisticId::new(Statistic::TriangleA),
        StatisticId::new(Statistic::Star2A),
        StatisticId::new(Statistic::X4Cycle),
        StatisticId::new(Statistic::X3Path),
    ];
    for _ in 0..20 {
        let ml = common::random_instance(&mut rng, 5, 5, 8);
        let z = census_oracle(&ml, &ids).unwrap().values();
        let expect_a = clustering_ratio(z[0], z[1]);
        let expect_x = two_mode_clustering_ratio(z[2], z[3]);
        let rows = summary_stats(&ml);
        let get = |name: &str| rows.iter().find(|r| r.name == name).unwrap().value;
        let got_a = get("clusteringA");
        let got_x = get("clusteringX");
        assert!(got_a == expect_a || (got_a.is_nan() && expect_a.is_nan()));
        assert!(got_x == expect_x || (got_x.is_nan() && expect_x.is_nan()));
    }
}

#[test]
fn entrainment_symmetric_exchange_not_on_random_stacks() {
    use nonml::bits::BitMatrix;
    use nonml::direct::{multiplex_statistic, MultiplexKind, MultiplexStatSpec};
    let mut rng = ChaCha20Rng::seed_from_u64(107);
    let mut asymmetry_seen = false;
    for _ in 0..60 {
        let nu = rng.gen_range(3..=5);
        let universe: Vec<String> = (0..nu).map(|k| format!("c{k}")).collect();
        let n = rng.gen_range(2..=4);
        let mut entries = Vec::new();
        for i in 0..n {
            let mut g = LabeledGraph::new(universe.clone()).unwrap();
            for u in 0..nu {
                for v in (u + 1)..nu {
                    if rng.gen::<f64>() < 0.5 {
                        g.add_edge(&universe[u], &universe[v]).unwrap();
                    }
                }
            }
            entries.push((format!("p{i}"), g));
        }
        let reports = ReportSet::new(universe, entries).unwrap();
        let y = BitMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let stat = |kind, a, b| {
                    multiplex_statistic(
                        &reports,
                        &y,
                        &MultiplexStatSpec {
                            kind,
                            pair: (a, b),
                            y_gated: false,
                        },
                    )
                    .unwrap()
                };
                assert_eq!(
                    stat(MultiplexKind::Entrainment, i, j),
                    stat(MultiplexKind::Entrainment, j, i)
                );
                if stat(MultiplexKind::Exchange, i, j) != stat(MultiplexKind::Exchange, j, i) {
                    asymmetry_seen = true;
                }
            }
        }
    }
    assert!(asymmetry_seen, "exchange never asymmetric across 60 stacks");
}

#[test]
fn gof_t_ratio_agrees_with_estimation_t_ratio() {
    use nonml::estimator::{fit_mom, FitOptions};
    use nonml::gof::gof;
    use nonml::sampler::{FreeLayers, ModelSpec};
    use nonml::stats::{Statistic, StatisticId};

    let ml = common::toy_network();
    let spec = ModelSpec::new(
        vec![(StatisticId::new(Statistic::XEdge), 0.0)],
        FreeLayers::W_ONLY,
    );
    let options = FitOptions {
        phase3_samples: 2_000,
        ..FitOptions::default()
    };
    let fit = fit_mom(&ml, &spec, &options, 3).unwrap();
    let fitted = spec.with_thetas(&fit.theta_hat);
    let table = gof(&ml, &fitted, &fitted.ids(), false, 1_500, 5_000, 9, 4, 1).unwrap();
    let row = table.rows.iter().find(|r| r.name == "XEdge").unwrap();
    assert!(
        (row.t_ratio - fit.conv_t_ratios[0]).abs() < 0.3,
        "gof t = {}, estimation t = {}",
        row.t_ratio,
        fit.conv_t_ratios[0]
    );
}

#[test]
fn full_policy_line_graph_satisfies_kneser_complement_identities() {
    for nu in 3..=8usize {
        let universe: Vec<String> = (0..nu).map(|k| format!("c{k}")).collect();
        let placeholder = LabeledGraph::new(universe.clone()).unwrap();
        let reports = ReportSet::new(universe, vec![("p0".to_string(), placeholder)]).unwrap();
        let pi = PairIndex::build(&reports, None, &PairPolicy::Full).unwrap();
        let q = nonml::build_line_graph(&pi);
        let e = nu * (nu - 1) / 2;
        assert_eq!(q.rows(), e);
        for r in 0..e {
            assert_eq!(q.row_count(r), 2 * (nu - 2));
        }
        assert_eq!(q.count_ones() / 2, nu * (nu - 1) * (nu - 2) / 2);
    }
}
