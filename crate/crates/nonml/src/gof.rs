//! Goodness-of-fit by simulation: observed / mean / sd / t-ratio per
//! statistic, over an auxiliary statistic set that may be much wider than the
//! fitted model.
//!
//! Rows with zero simulation spread report t = +1 or -1 by the sign of
//! (observed - mean), with 0 mapped to +1; a zero sd with a genuinely
//! different observed value is flagged instead. Undefined observed values
//! (0/0 ratios) propagate as NaN.

use std::thread;

use crate::error::GofError;
use crate::multilevel::MultilevelNetwork;
use crate::sampler::ModelSpec;
use crate::seed;
use crate::stats::{compute_statistics, summary_stats, StatisticId};

#[derive(Debug, Clone)]
pub struct GofRow {
    pub name: String,
    pub observed: f64,
    pub mean: f64,
    pub sd: f64,
    pub t_ratio: f64,
}

#[derive(Debug, Clone)]
pub struct GofTable {
    pub rows: Vec<GofRow>,
    pub warnings: Vec<String>,
}

/// The t-ratio convention used throughout the table.
pub fn t_ratio(observed: f64, mean: f64, sd: f64) -> f64 {
    if observed.is_nan() || mean.is_nan() {
        f64::NAN
    } else if sd > 0.0 {
        (observed - mean) / sd
    } else if observed == mean {
        // Zero-spread rows keep a sign convention instead of dividing by 0.
        1.0
    } else {
        f64::NAN
    }
}

/// Values of one sampled (or observed) state: the auxiliary statistics, then
/// the summary rows, then the criterion-restricted extras.
fn state_row(
    ml: &MultilevelNetwork,
    aux: &[StatisticId],
    extras: bool,
) -> Result<Vec<f64>, GofError> {
    let mut values = compute_statistics(ml, aux)
        .map_err(crate::error::SamplerError::Stat)
        .map_err(GofError::Sampler)?
        .values();
    for row in summary_stats(ml) {
        values.push(row.value);
    }
    if extras {
        values.extend(expert_extras(ml));
    }
    Ok(values)
}

fn row_names(aux: &[StatisticId], extras: bool) -> Vec<String> {
    let mut names: Vec<String> = aux.iter().map(|id| id.name().to_string()).collect();
    names.extend(
        [
            "stddev degreeA",
            "skew degreeA",
            "clusteringA",
            "stddev degreeX A",
            "skew degreeX A",
            "stddev degreeX B",
            "skew degreeX B",
            "clusteringX",
            "stddev degreeB",
            "skew degreeB",
            "clusteringB",
            "IsolatesXA",
            "IsolatesXB",
        ]
        .into_iter()
        .map(String::from),
    );
    if extras {
        names.extend(
            ["Expert_XStar2B", "Expert_X4CycleB1", "Expert_X4CycleB2"]
                .into_iter()
                .map(String::from),
        );
    }
    names
}

/// Experimental criterion-restricted counts: the bipartite statistic
/// evaluated only on coloured top-level nodes.
fn expert_extras(ml: &MultilevelNetwork) -> Vec<f64> {
    let n = ml.reporter_count();
    let e = ml.pair_count();
    // Two-stars centred on coloured pair nodes.
    let mut star2 = 0.0;
    for r in 0..e {
        if ml.d()[r] == 1 {
            let c = ml.w_by_pair().row_count(r);
            star2 += (c * c.saturating_sub(1) / 2) as f64;
        }
    }
    // Four-cycles by the number of coloured pair nodes they contain.
    let mut coloured = crate::bits::BitMatrix::zeros(1, e);
    for r in 0..e {
        if ml.d()[r] == 1 {
            coloured.set(0, r, true);
        }
    }
    let mut at_least_one = 0.0;
    let mut both = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let shared = ml.w().row_and_count(i, j);
            if shared < 2 {
                continue;
            }
            let shared_coloured = {
                // |N(i) AND N(j) AND coloured|
                let mut count = 0;
                for r in ml.w().row_ones(i) {
                    if ml.w().get(j, r) && coloured.get(0, r) {
                        count += 1;
                    }
                }
                count
            };
            let choose2 = |x: usize| (x * x.saturating_sub(1) / 2) as f64;
            let total = choose2(shared);
            let none = choose2(shared - shared_coloured);
            at_least_one += total - none;
            both += choose2(shared_coloured);
        }
    }
    vec![star2, at_least_one, both]
}

#[allow(clippy::too_many_arguments)]
pub fn gof(
    observed: &MultilevelNetwork,
    spec: &ModelSpec,
    aux: &[StatisticId],
    extras: bool,
    samples: usize,
    burnin: u64,
    thin: u64,
    root_seed: u64,
    threads: usize,
) -> Result<GofTable, GofError> {
    if samples == 0 {
        return Err(GofError::Sampler(crate::error::SamplerError::NoSamples));
    }
    for (id, _) in &spec.effects {
        if !aux.iter().any(|a| a.stat == id.stat) {
            return Err(GofError::MissingEffect(id.name().to_string()));
        }
    }
    let names = row_names(aux, extras);
    let observed_row = state_row(observed, aux, extras)?;

    // Fan the sample budget out over chains with counter-derived seeds.
    let chains = threads.max(1).min(samples);
    let mut share = vec![samples / chains; chains];
    for slot in share.iter_mut().take(samples % chains) {
        *slot += 1;
    }
    type ChainResult = Result<(Vec<Vec<f64>>, Vec<String>), GofError>;
    let mut sampled: Vec<Vec<f64>> = Vec::with_capacity(samples);
    let mut warnings: Vec<String> = Vec::new();
    let results: Vec<ChainResult> = thread::scope(|scope| {
        let mut handles = Vec::new();
        for (c, &m) in share.iter().enumerate() {
            if m == 0 {
                continue;
            }
            let chain_seed = seed::derive(root_seed, c as u64);
            let spec = spec.clone();
            let observed = observed.clone();
            let aux: Vec<StatisticId> = aux.to_vec();
            handles.push(scope.spawn(move || {
                let mut rows = Vec::with_capacity(m);
                let mut state = observed.clone();
                let free_cells = spec.free_cells(&state).map_err(GofError::Sampler)?;
                let mut rng = <rand_chacha::ChaCha20Rng as rand::SeedableRng>::seed_from_u64(
                    chain_seed,
                );
                for _ in 0..burnin {
                    crate::sampler::mh_step(&mut state, &spec, &free_cells, &mut rng);
                }
                let mut extreme = 0usize;
                for _ in 0..m {
                    for _ in 0..thin {
                        crate::sampler::mh_step(&mut state, &spec, &free_cells, &mut rng);
                    }
                    rows.push(state_row(&state, &aux, extras)?);
                    let w_ties = state.w().count_ones();
                    let n = state.reporter_count();
                    let y_ties = state.y().count_ones() / 2;
                    let w_extreme = spec.free_layers.w
                        && (w_ties == 0 || w_ties == n * state.pair_count());
                    let y_extreme =
                        spec.free_layers.y && (y_ties == 0 || y_ties == n * (n - 1) / 2);
                    if w_extreme || y_extreme {
                        extreme += 1;
                    }
                }
                let mut warns = Vec::new();
                if extreme * 100 > m * 99 {
                    warns.push(format!(
                        "degeneracy: {extreme}/{m} sampled states are empty or complete in a free layer"
                    ));
                }
                Ok((rows, warns))
            }));
        }
        handles
            .into_iter()
            .map(|h| h.join().expect("chain panicked"))
            .collect()
    });
    for res in results {
        let (rows, warns) = res?;
        sampled.extend(rows);
        warnings.extend(warns);
    }

    let m = sampled.len() as f64;
    let mut rows = Vec::with_capacity(names.len());
    for (k, name) in names.iter().enumerate() {
        let col: Vec<f64> = sampled.iter().map(|row| row[k]).collect();
        let nan_free: Vec<f64> = col.iter().copied().filter(|v| !v.is_nan()).collect();
        let (mean, sd) = if nan_free.len() == col.len() {
            let mu = col.iter().sum::<f64>() / m;
            let var = col.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / (m - 1.0);
            (mu, var.max(0.0).sqrt())
        } else {
            (f64::NAN, f64::NAN)
        };
        let t = t_ratio(observed_row[k], mean, sd);
        if sd == 0.0 && observed_row[k] != mean && !observed_row[k].is_nan() {
            warnings.push(format!(
                "{name}: zero simulation spread but observed {} differs from mean {}",
                observed_row[k], mean
            ));
        }
        rows.push(GofRow {
            name: name.clone(),
            observed: observed_row[k],
            mean,
            sd,
            t_ratio: t,
        });
    }
    Ok(GofTable { rows, warnings })
}
