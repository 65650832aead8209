//! Direct modelling of the report stack: pairwise multiplex statistics
//! between two reports, optionally gated by the social tie, and the per-dyad
//! autologistic model over the reporter vector of one pair.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::bits::BitMatrix;
use crate::error::{DirectError, TransformError};
use crate::graph::{LabeledGraph, ReportSet};

/// Align a social network's adjacency to the reporter order of a report set.
pub fn social_matrix(
    reports: &ReportSet,
    social: &LabeledGraph,
) -> Result<BitMatrix, TransformError> {
    crate::multilevel::align_social(reports, social)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultiplexKind {
    /// Agreement on individual ties: sum over unordered pairs {k, h} of
    /// X[i][k][h] X[j][k][h].
    Entrainment,
    /// Closure of one reporter's two-path by the other's tie: sum over
    /// distinct (k, h, l) with k < l of X[i][k][h] X[i][h][l] X[j][k][l].
    Exchange,
}

#[derive(Debug, Clone, Copy)]
pub struct MultiplexStatSpec {
    pub kind: MultiplexKind,
    /// Reporter indices; must differ.
    pub pair: (usize, usize),
    /// Multiply by the social tie indicator Y[i][j].
    pub y_gated: bool,
}

pub fn multiplex_statistic(
    reports: &ReportSet,
    y: &BitMatrix,
    spec: &MultiplexStatSpec,
) -> Result<f64, DirectError> {
    let (i, j) = spec.pair;
    let n = reports.reporter_count();
    if i >= n || j >= n {
        return Err(DirectError::OutOfRange(format!("reporter pair ({i}, {j})")));
    }
    if i == j {
        return Err(DirectError::SameReporter(i));
    }
    let nu = reports.universe().len();
    let raw = match spec.kind {
        MultiplexKind::Entrainment => {
            let mut c = 0usize;
            for k in 0..nu {
                for h in (k + 1)..nu {
                    if reports.tie(i, k, h) && reports.tie(j, k, h) {
                        c += 1;
                    }
                }
            }
            c as f64
        }
        MultiplexKind::Exchange => {
            // Two-path k-h-l in report i closed by {k, l} in report j; the
            // closing pair is canonicalized (k < l) so each closure counts
            // once.
            let mut c = 0usize;
            for k in 0..nu {
                for h in 0..nu {
                    if h == k || !reports.tie(i, k, h) {
                        continue;
                    }
                    for l in (k + 1)..nu {
                        if l == h || !reports.tie(i, h, l) || !reports.tie(j, k, l) {
                            continue;
                        }
                        c += 1;
                    }
                }
            }
            c as f64
        }
    };
    if spec.y_gated {
        Ok(if y.get(i, j) { raw } else { 0.0 })
    } else {
        Ok(raw)
    }
}

/// logistic(theta0 + theta1 * sum_j Y[i][j] X[j][k][h]).
pub fn alaam_conditional_probability(
    reports: &ReportSet,
    y: &BitMatrix,
    pair: (usize, usize),
    reporter: usize,
    theta0: f64,
    theta1: f64,
) -> Result<f64, DirectError> {
    let n = reports.reporter_count();
    let (k, h) = pair;
    let nu = reports.universe().len();
    if reporter >= n || k >= nu || h >= nu || k == h {
        return Err(DirectError::OutOfRange(format!(
            "reporter {reporter}, pair ({k}, {h})"
        )));
    }
    let mut exposure = 0.0;
    for j in 0..n {
        if j != reporter && y.get(reporter, j) && reports.tie(j, k, h) {
            exposure += 1.0;
        }
    }
    let lin = theta0 + theta1 * exposure;
    Ok(1.0 / (1.0 + (-lin).exp()))
}

/// One systematic full-conditional pass over a column state, in place.
pub fn alaam_gibbs_sweep_inplace(
    column: &mut [u8],
    y: &BitMatrix,
    theta0: f64,
    theta1: f64,
    rng: &mut impl Rng,
) {
    let n = column.len();
    for i in 0..n {
        let mut exposure = 0.0;
        for j in 0..n {
            if j != i && y.get(i, j) && column[j] == 1 {
                exposure += 1.0;
            }
        }
        let p = 1.0 / (1.0 + (-(theta0 + theta1 * exposure)).exp());
        column[i] = (rng.gen::<f64>() < p) as u8;
    }
}

/// One Gibbs sweep over the reporter responses for one pair, starting from
/// the observed reports. Deterministic given the seed.
pub fn alaam_gibbs_sweep(
    reports: &ReportSet,
    y: &BitMatrix,
    pair: (usize, usize),
    theta0: f64,
    theta1: f64,
    seed: u64,
) -> Result<Vec<u8>, DirectError> {
    let n = reports.reporter_count();
    let (k, h) = pair;
    let nu = reports.universe().len();
    if k >= nu || h >= nu || k == h {
        return Err(DirectError::OutOfRange(format!("pair ({k}, {h})")));
    }
    let mut column: Vec<u8> = (0..n).map(|i| reports.tie(i, k, h) as u8).collect();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    alaam_gibbs_sweep_inplace(&mut column, y, theta0, theta1, &mut rng);
    Ok(column)
}

/// Exact ALAAM probabilities over all 2^n column states; usable for n <= 20.
/// The joint density is proportional to
/// exp(theta0 * sum x_i + theta1 * sum_{i<j} Y_ij x_i x_j).
pub fn alaam_exact_distribution(y: &BitMatrix, theta0: f64, theta1: f64) -> Vec<f64> {
    let n = y.rows();
    assert!(n <= 20, "exact enumeration is limited to small n");
    let states = 1usize << n;
    let mut weights = Vec::with_capacity(states);
    for s in 0..states {
        let mut active = 0.0;
        let mut pairs = 0.0;
        for i in 0..n {
            if s >> i & 1 == 1 {
                active += 1.0;
                for j in (i + 1)..n {
                    if s >> j & 1 == 1 && y.get(i, j) {
                        pairs += 1.0;
                    }
                }
            }
        }
        weights.push((theta0 * active + theta1 * pairs).exp());
    }
    let total: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / total).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::LabeledGraph;

    fn toy() -> (ReportSet, BitMatrix) {
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
        let social =
            LabeledGraph::from_edges(vec!["i", "j", "k"], &[("i", "j"), ("j", "k")]).unwrap();
        let y = social_matrix(&reports, &social).unwrap();
        (reports, y)
    }

    #[test]
    fn toy_entrainment_and_exchange() {
        let (reports, y) = toy();
        // i and j agree on the single tie {u, s}.
        let ent = multiplex_statistic(
            &reports,
            &y,
            &MultiplexStatSpec {
                kind: MultiplexKind::Entrainment,
                pair: (0, 1),
                y_gated: false,
            },
        )
        .unwrap();
        assert_eq!(ent, 1.0);
        // i's two-path s-u-v is closed by j's tie {s, v}.
        let exch = multiplex_statistic(
            &reports,
            &y,
            &MultiplexStatSpec {
                kind: MultiplexKind::Exchange,
                pair: (0, 1),
                y_gated: false,
            },
        )
        .unwrap();
        assert_eq!(exch, 1.0);
        // i and k are not socially tied, so the gated statistic vanishes.
        let gated = multiplex_statistic(
            &reports,
            &y,
            &MultiplexStatSpec {
                kind: MultiplexKind::Entrainment,
                pair: (0, 2),
                y_gated: true,
            },
        )
        .unwrap();
        assert_eq!(gated, 0.0);
    }

    #[test]
    fn gated_equals_tie_times_ungated() {
        let (reports, y) = toy();
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                for kind in [MultiplexKind::Entrainment, MultiplexKind::Exchange] {
                    let raw = multiplex_statistic(
                        &reports,
                        &y,
                        &MultiplexStatSpec {
                            kind,
                            pair: (i, j),
                            y_gated: false,
                        },
                    )
                    .unwrap();
                    let gated = multiplex_statistic(
                        &reports,
                        &y,
                        &MultiplexStatSpec {
                            kind,
                            pair: (i, j),
                            y_gated: true,
                        },
                    )
                    .unwrap();
                    let tie = y.get(i, j) as u8 as f64;
                    assert_eq!(gated, tie * raw);
                }
            }
        }
    }

    #[test]
    fn entrainment_is_symmetric() {
        let (reports, y) = toy();
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let ab = multiplex_statistic(
                    &reports,
                    &y,
                    &MultiplexStatSpec {
                        kind: MultiplexKind::Entrainment,
                        pair: (i, j),
                        y_gated: false,
                    },
                )
                .unwrap();
                let ba = multiplex_statistic(
                    &reports,
                    &y,
                    &MultiplexStatSpec {
                        kind: MultiplexKind::Entrainment,
                        pair: (j, i),
                        y_gated: false,
                    },
                )
                .unwrap();
                assert_eq!(ab, ba);
            }
        }
    }

    #[test]
    fn exchange_can_be_asymmetric() {
        // Reporter a holds a two-path that b closes; b has no two-path at all.
        let ha = LabeledGraph::from_edges(vec!["x", "y", "z"], &[("x", "y"), ("y", "z")]).unwrap();
        let hb = LabeledGraph::from_edges(vec!["x", "y", "z"], &[("x", "z")]).unwrap();
        let reports = ReportSet::new(
            vec!["x", "y", "z"],
            vec![("a".to_string(), ha), ("b".to_string(), hb)],
        )
        .unwrap();
        let y = BitMatrix::zeros(2, 2);
        let ab = multiplex_statistic(
            &reports,
            &y,
            &MultiplexStatSpec {
                kind: MultiplexKind::Exchange,
                pair: (0, 1),
                y_gated: false,
            },
        )
        .unwrap();
        let ba = multiplex_statistic(
            &reports,
            &y,
            &MultiplexStatSpec {
                kind: MultiplexKind::Exchange,
                pair: (1, 0),
                y_gated: false,
            },
        )
        .unwrap();
        assert_eq!(ab, 1.0);
        assert_eq!(ba, 0.0);
    }

    #[test]
    fn same_reporter_rejected() {
        let (reports, y) = toy();
        let err = multiplex_statistic(
            &reports,
            &y,
            &MultiplexStatSpec {
                kind: MultiplexKind::Entrainment,
                pair: (1, 1),
                y_gated: false,
            },
        );
        assert!(matches!(err, Err(DirectError::SameReporter(1))));
    }

    #[test]
    fn conditional_probability_examples() {
        let (reports, y) = toy();
        // Null model.
        let p = alaam_conditional_probability(&reports, &y, (0, 1), 2, 0.0, 0.0).unwrap();
        assert_eq!(p, 0.5);
        // Pair {s, u}: reporter k's only neighbour j reports it.
        let su = (0, 1);
        let p = alaam_conditional_probability(&reports, &y, su, 2, 0.0, 1.0).unwrap();
        let expect = 1.0 / (1.0 + (-1.0f64).exp());
        assert!((p - expect).abs() < 1e-12);
        assert!((p - 0.7311).abs() < 1e-4);
        // Pair {u, v}: no neighbour of k reports it.
        let uv = (1, 2);
        let p = alaam_conditional_probability(&reports, &y, uv, 2, -1.0, 1.0).unwrap();
        let expect = 1.0 / (1.0 + (1.0f64).exp());
        assert!((p - expect).abs() < 1e-12);
        assert!((p - 0.2689).abs() < 1e-4);
    }

    #[test]
    fn conditional_probability_monotone_in_theta1() {
        let (reports, y) = toy();
        // Positive exposure for reporter k on pair {s, u}.
        let mut last = 0.0;
        for step in 0..5 {
            let theta1 = step as f64;
            let p = alaam_conditional_probability(&reports, &y, (0, 1), 2, 0.0, theta1).unwrap();
            assert!(p >= last);
            last = p;
        }
    }

    #[test]
    fn gibbs_sweep_is_reproducible() {
        let (reports, y) = toy();
        let a = alaam_gibbs_sweep(&reports, &y, (0, 1), 0.3, 0.7, 42).unwrap();
        let b = alaam_gibbs_sweep(&reports, &y, (0, 1), 0.3, 0.7, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn independent_case_matches_bernoulli_mean() {
        let (_, y) = toy();
        let theta0 = -0.4f64;
        let p = 1.0 / (1.0 + (0.4f64).exp());
        let sweeps = 10_000;
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let mut column = vec![0u8; 3];
        let mut total = 0usize;
        for _ in 0..sweeps {
            alaam_gibbs_sweep_inplace(&mut column, &y, theta0, 0.0, &mut rng);
            total += column.iter().map(|&x| x as usize).sum::<usize>();
        }
        let mean = total as f64 / (sweeps * 3) as f64;
        let sd = (p * (1.0 - p) / (sweeps * 3) as f64).sqrt();
        assert!((mean - p).abs() < 3.0 * sd * 3.0); // generous: sweeps are correlated
    }

    #[test]
    fn strong_dependence_concentrates_on_unanimity() {
        let (_, y) = toy(); // connected path i-j-k
        let dist = alaam_exact_distribution(&y, 0.0, 5.0);
        let unanimity = dist[0] + dist[(1 << 3) - 1];
        assert!(unanimity > 0.95);
        // And the sampler agrees: long chain mass on unanimity.
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        let mut column = vec![0u8, 1, 0];
        let mut hits = 0usize;
        let sweeps = 20_000;
        for _ in 0..sweeps {
            alaam_gibbs_sweep_inplace(&mut column, &y, 0.0, 5.0, &mut rng);
            let s: usize = column.iter().map(|&x| x as usize).sum();
            if s == 0 || s == 3 {
                hits += 1;
            }
        }
        assert!(hits as f64 / sweeps as f64 > 0.95);
    }
}
