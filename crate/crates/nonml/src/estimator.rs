//! Method-of-moments estimation by stochastic approximation.
//!
//! Phase 1 scales the updates by the per-statistic simulation variance,
//! phase 2 runs Robbins-Monro iterations with the gain halved across
//! subphases, phase 3 takes a long simulation at the candidate for
//! convergence t-ratios and the information matrix. Convergence is declared
//! when max |t| < 0.1.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::error::EstimError;
use crate::multilevel::MultilevelNetwork;
use crate::sampler::{default_burnin, default_thin, mh_step, ModelSpec, SampleBatch};
use crate::stats::compute_statistics;

#[derive(Debug, Clone)]
pub struct FitOptions {
    /// Phase-1 sample count; defaults to 100 * p.
    pub phase1_samples: Option<usize>,
    pub subphases: usize,
    pub iters_per_subphase: usize,
    /// Initial gain a1, halved at each subphase.
    pub gain: f64,
    pub phase3_samples: usize,
    /// Chain steps between Robbins-Monro updates; defaults to #free cells.
    pub steps_between: Option<u64>,
    /// Burn-in before phase 1; defaults to 10^4 sqrt(#free cells).
    pub burnin: Option<u64>,
    /// Thinning between recorded samples; defaults to #free cells.
    pub thin: Option<u64>,
    /// Re-run phase 2+3 up to this many times before giving up.
    pub max_rounds: usize,
    pub convergence_threshold: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            phase1_samples: None,
            subphases: 4,
            iters_per_subphase: 100,
            gain: 0.1,
            phase3_samples: 1000,
            steps_between: None,
            burnin: None,
            thin: None,
            max_rounds: 3,
            convergence_threshold: 0.1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FitResult {
    pub theta_hat: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub conv_t_ratios: Vec<f64>,
    pub info_matrix: Vec<Vec<f64>>,
    pub phase_log: Vec<String>,
    pub converged: bool,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn column(mat: &[Vec<f64>], k: usize) -> Vec<f64> {
    mat.iter().map(|row| row[k]).collect()
}

/// Sample covariance matrix (rows = draws, columns = statistics).
fn covariance(mat: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m = mat.len();
    let p = mat[0].len();
    let means: Vec<f64> = (0..p).map(|k| mean(&column(mat, k))).collect();
    let mut cov = vec![vec![0.0; p]; p];
    for row in mat {
        for a in 0..p {
            let da = row[a] - means[a];
            for b in a..p {
                cov[a][b] += da * (row[b] - means[b]);
            }
        }
    }
    for a in 0..p {
        for b in a..p {
            let v = cov[a][b] / (m as f64 - 1.0);
            cov[a][b] = v;
            cov[b][a] = v;
        }
    }
    cov
}

/// Invert a symmetric positive matrix by Gauss-Jordan with partial pivoting.
fn invert(mat: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let p = mat.len();
    let mut a: Vec<Vec<f64>> = mat.to_vec();
    let mut inv: Vec<Vec<f64>> = (0..p)
        .map(|i| (0..p).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let scale: f64 = mat
        .iter()
        .flat_map(|r| r.iter().map(|x| x.abs()))
        .fold(0.0, f64::max)
        .max(1.0);
    for col in 0..p {
        let mut pivot = col;
        for row in (col + 1)..p {
            if a[row][col].abs() > a[pivot][col].abs() {
                pivot = row;
            }
        }
        if a[pivot][col].abs() < 1e-12 * scale {
            return None;
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let d = a[col][col];
        for j in 0..p {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for row in 0..p {
            if row != col {
                let f = a[row][col];
                if f != 0.0 {
                    for j in 0..p {
                        a[row][j] -= f * a[col][j];
                        inv[row][j] -= f * inv[col][j];
                    }
                }
            }
        }
    }
    Some(inv)
}

/// Name the most collinear pair of statistics in a singular covariance.
fn collinear_pair(cov: &[Vec<f64>], names: &[String]) -> String {
    let p = cov.len();
    for k in 0..p {
        if cov[k][k] <= 0.0 {
            return names[k].clone();
        }
    }
    let mut best = (0, 1, 0.0f64);
    for a in 0..p {
        for b in (a + 1)..p {
            let corr = (cov[a][b] / (cov[a][a] * cov[b][b]).sqrt()).abs();
            if corr > best.2 {
                best = (a, b, corr);
            }
        }
    }
    if p < 2 {
        names.first().cloned().unwrap_or_default()
    } else {
        format!("{} and {}", names[best.0], names[best.1])
    }
}

/// Standard errors and information matrix from a sample batch: the
/// information is the covariance of the sufficient statistics.
pub fn standard_errors(
    batch: &SampleBatch,
    spec: &ModelSpec,
) -> Result<(Vec<f64>, Vec<Vec<f64>>), EstimError> {
    let p = spec.effects.len();
    let m = batch.stat_matrix.len();
    if m < p + 1 {
        return Err(EstimError::TooFewSamples {
            need: p + 1,
            got: m,
        });
    }
    let cov = covariance(&batch.stat_matrix);
    let names: Vec<String> = spec
        .effects
        .iter()
        .map(|(id, _)| id.name().to_string())
        .collect();
    let inv = invert(&cov)
        .ok_or_else(|| EstimError::SingularInformation(collinear_pair(&cov, &names)))?;
    let se: Vec<f64> = (0..p).map(|k| inv[k][k].max(0.0).sqrt()).collect();
    Ok((se, cov))
}

/// Fit theta by solving E_theta[z] = z_obs.
pub fn fit_mom(
    observed: &MultilevelNetwork,
    spec: &ModelSpec,
    options: &FitOptions,
    seed: u64,
) -> Result<FitResult, EstimError> {
    let ids = spec.ids();
    let p = ids.len();
    let names: Vec<String> = ids.iter().map(|id| id.name().to_string()).collect();
    let z_obs = compute_statistics(observed, &ids)
        .map_err(crate::error::SamplerError::Stat)?
        .values();
    for (k, z) in z_obs.iter().enumerate() {
        if !z.is_finite() {
            return Err(EstimError::Degenerate(format!(
                "observed statistic {} is not finite",
                names[k]
            )));
        }
    }

    let free_cells = spec.free_cells(observed)?;
    let f = free_cells.len();
    let burnin = options.burnin.unwrap_or_else(|| default_burnin(f));
    let thin = options.thin.unwrap_or_else(|| default_thin(f)).max(1);
    let steps_between = options.steps_between.unwrap_or(f as u64).max(1);
    let phase1_samples = options.phase1_samples.unwrap_or(100 * p).max(p + 1);
    let phase3_samples = options.phase3_samples.max(p + 1);

    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut theta = spec.thetas();
    let mut state = observed.clone();
    let mut log = Vec::new();

    // Phase 1: estimate the scaling from a short simulation at theta0.
    let mut live = spec.with_thetas(&theta);
    for _ in 0..burnin {
        mh_step(&mut state, &live, &free_cells, &mut rng);
    }
    let mut phase1 = Vec::with_capacity(phase1_samples);
    for _ in 0..phase1_samples {
        for _ in 0..thin {
            mh_step(&mut state, &live, &free_cells, &mut rng);
        }
        let z = compute_statistics(&state, &ids)
            .map_err(crate::error::SamplerError::Stat)?
            .values();
        phase1.push(z);
    }
    let mut scale = vec![0.0; p];
    for k in 0..p {
        let col = column(&phase1, k);
        let mu = mean(&col);
        let var = col.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / (col.len() as f64 - 1.0);
        if var <= 0.0 {
            // A flat phase-1 sample usually means the start value pushed the
            // chain against a boundary; fall back to unit scaling so phase 2
            // can walk away from it.
            log.push(format!(
                "phase 1: {} had zero spread at theta0; unit scaling used",
                names[k]
            ));
            scale[k] = 1.0;
        } else {
            scale[k] = var;
        }
    }
    log.push(format!(
        "phase 1: {phase1_samples} samples, scaling = {scale:?}"
    ));

    // Phase 2: Robbins-Monro subphases with halved gains.
    for sub in 0..options.subphases {
        let gain = options.gain / 2f64.powi(sub as i32);
        for _ in 0..options.iters_per_subphase {
            live = spec.with_thetas(&theta);
            for _ in 0..steps_between {
                mh_step(&mut state, &live, &free_cells, &mut rng);
            }
            let z = compute_statistics(&state, &ids)
                .map_err(crate::error::SamplerError::Stat)?
                .values();
            for k in 0..p {
                theta[k] -= gain * (z[k] - z_obs[k]) / scale[k];
                theta[k] = theta[k].clamp(-30.0, 30.0);
            }
        }
        log.push(format!(
            "phase 2 subphase {}: gain {gain:.4}, theta = {theta:?}",
            sub + 1
        ));
    }

    // Phase 3: long run at the candidate; on a failed moment check, take a
    // score step through the estimated information and re-run.
    for round in 1..=options.max_rounds {
        live = spec.with_thetas(&theta);
        for _ in 0..burnin {
            mh_step(&mut state, &live, &free_cells, &mut rng);
        }
        let mut phase3 = Vec::with_capacity(phase3_samples);
        let mut w_extreme = 0usize;
        for _ in 0..phase3_samples {
            for _ in 0..thin {
                mh_step(&mut state, &live, &free_cells, &mut rng);
            }
            let z = compute_statistics(&state, &ids)
                .map_err(crate::error::SamplerError::Stat)?
                .values();
            phase3.push(z);
            let ties = state.w().count_ones();
            if spec.free_layers.w
                && (ties == 0 || ties == state.reporter_count() * state.pair_count())
            {
                w_extreme += 1;
            }
        }
        if spec.free_layers.w && w_extreme * 100 > phase3_samples * 99 {
            return Err(EstimError::Degenerate(format!(
                "{w_extreme}/{phase3_samples} phase-3 states have an empty or complete W layer"
            )));
        }
        let mut t_ratios = vec![0.0; p];
        let mut degenerate = None;
        for k in 0..p {
            let col = column(&phase3, k);
            let mu = mean(&col);
            let var =
                col.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / (col.len() as f64 - 1.0);
            if var <= 0.0 {
                degenerate = Some(names[k].clone());
                break;
            }
            t_ratios[k] = (mu - z_obs[k]) / var.sqrt();
        }
        if let Some(name) = degenerate {
            return Err(EstimError::DegenerateStatistic(name));
        }
        let max_t = t_ratios.iter().fold(0.0f64, |m, t| m.max(t.abs()));
        log.push(format!(
            "phase 3 round {round}: {phase3_samples} samples, t = {t_ratios:?}"
        ));
        let info = covariance(&phase3);
        let inv = invert(&info)
            .ok_or_else(|| EstimError::SingularInformation(collinear_pair(&info, &names)))?;
        if max_t < options.convergence_threshold {
            let se: Vec<f64> = (0..p).map(|k| inv[k][k].max(0.0).sqrt()).collect();
            log.push(format!("converged: max |t| = {max_t:.4}"));
            return Ok(FitResult {
                theta_hat: theta,
                std_errors: se,
                conv_t_ratios: t_ratios,
                info_matrix: info,
                phase_log: log,
                converged: true,
            });
        }
        if round == options.max_rounds {
            return Err(EstimError::NonConvergence {
                max_t,
                rounds: round,
            });
        }
        // Score correction: the information matrix is the moment Jacobian
        // for an exponential family, so one solve retargets the mean.
        let means: Vec<f64> = (0..p).map(|k| mean(&column(&phase3, k))).collect();
        for a in 0..p {
            let mut step = 0.0;
            for b in 0..p {
                step += inv[a][b] * (z_obs[b] - means[b]);
            }
            theta[a] = (theta[a] + step).clamp(-30.0, 30.0);
        }
        log.push(format!("score step after round {round}: theta = {theta:?}"));
    }
    unreachable!("round loop always returns")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{LabeledGraph, ReportSet};
    use crate::pair_index::{PairIndex, PairPolicy};
    use crate::sampler::{simulate, FreeLayers};
    use crate::stats::{Statistic, StatisticId};

    fn toy_network() -> MultilevelNetwork {
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
        let pi = PairIndex::build(&reports, None, &PairPolicy::Full).unwrap();
        MultilevelNetwork::from_data(&reports, &social, None, pi)
            .unwrap()
            .0
    }

    #[test]
    fn duplicated_effect_is_reported_as_collinear() {
        let ml = toy_network();
        let spec = ModelSpec::new(
            vec![
                (StatisticId::new(Statistic::XEdge), 0.0),
                (StatisticId::new(Statistic::XEdge), 0.0),
            ],
            FreeLayers::W_ONLY,
        );
        let batch = simulate(&ml, &spec, 500, 9, 50, 3).unwrap();
        let err = standard_errors(&batch, &spec).unwrap_err();
        match err {
            EstimError::SingularInformation(msg) => assert!(msg.contains("XEdge"), "{msg}"),
            other => panic!("expected singularity, got {other}"),
        }
    }

    #[test]
    fn too_few_samples_is_a_precondition_error() {
        let ml = toy_network();
        let spec = ModelSpec::new(
            vec![
                (StatisticId::new(Statistic::XEdge), 0.0),
                (StatisticId::new(Statistic::Star2BX), 0.0),
            ],
            FreeLayers::W_ONLY,
        );
        let batch = simulate(&ml, &spec, 100, 1, 2, 3).unwrap();
        assert!(matches!(
            standard_errors(&batch, &spec),
            Err(EstimError::TooFewSamples { need: 3, got: 2 })
        ));
    }

    #[test]
    fn grossly_misspecified_start_still_converges() {
        // The density-only moment equation is globally concave, so the fit
        // walks home even from theta0 = 10 (where phase 1 sees a saturated
        // layer with no spread).
        let ml = toy_network();
        let spec = ModelSpec::new(
            vec![(StatisticId::new(Statistic::XEdge), 10.0)],
            FreeLayers::W_ONLY,
        );
        let options = FitOptions {
            phase3_samples: 2_000,
            max_rounds: 6,
            ..FitOptions::default()
        };
        let fit = fit_mom(&ml, &spec, &options, 77).unwrap();
        assert!(fit.converged);
        let target = (5.0f64 / 4.0).ln();
        assert!(
            (fit.theta_hat[0] - target).abs() < 0.15,
            "theta = {}",
            fit.theta_hat[0]
        );
    }

    #[test]
    fn invert_recovers_identity() {
        let m = vec![vec![4.0, 1.0], vec![1.0, 3.0]];
        let inv = invert(&m).unwrap();
        let det = 11.0;
        assert!((inv[0][0] - 3.0 / det).abs() < 1e-12);
        assert!((inv[0][1] + 1.0 / det).abs() < 1e-12);
        assert!((inv[1][1] - 4.0 / det).abs() < 1e-12);
    }

    #[test]
    fn invert_rejects_singular() {
        let m = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        assert!(invert(&m).is_none());
    }

    #[test]
    fn covariance_of_constant_column_is_zero() {
        let mat = vec![vec![2.0, 1.0], vec![2.0, 3.0], vec![2.0, 5.0]];
        let cov = covariance(&mat);
        assert_eq!(cov[0][0], 0.0);
        assert!(cov[1][1] > 0.0);
    }
}
