//! Metropolis-Hastings simulation of the multilevel ERGM over the free tie
//! variables. Q and D are never touched; a model may free W, Y or both, with
//! structural zeros masking individual cells.
//!
//! Proposal: uniform single-cell toggle. Acceptance: min(1, exp(theta' dz)).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::error::SamplerError;
use crate::multilevel::MultilevelNetwork;
use crate::stats::{compute_statistics, delta_up, StatisticId, Toggle};

/// Which layers the model treats as random.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreeLayers {
    pub w: bool,
    pub y: bool,
}

impl FreeLayers {
    pub const W_ONLY: FreeLayers = FreeLayers { w: true, y: false };
    pub const Y_ONLY: FreeLayers = FreeLayers { w: false, y: true };
    pub const BOTH: FreeLayers = FreeLayers { w: true, y: true };
}

/// Effects with parameter values, free layers and structural zeros.
#[derive(Debug, Clone)]
pub struct ModelSpec {
    pub effects: Vec<(StatisticId, f64)>,
    pub free_layers: FreeLayers,
    /// Masked affiliation cells (reporter, pair), never toggled.
    pub w_mask: Vec<(usize, usize)>,
    /// Masked social dyads (i, j), never toggled.
    pub y_mask: Vec<(usize, usize)>,
}

impl ModelSpec {
    pub fn new(effects: Vec<(StatisticId, f64)>, free_layers: FreeLayers) -> Self {
        ModelSpec {
            effects,
            free_layers,
            w_mask: Vec::new(),
            y_mask: Vec::new(),
        }
    }

    pub fn ids(&self) -> Vec<StatisticId> {
        self.effects.iter().map(|&(id, _)| id).collect()
    }

    pub fn thetas(&self) -> Vec<f64> {
        self.effects.iter().map(|&(_, t)| t).collect()
    }

    pub fn with_thetas(&self, thetas: &[f64]) -> ModelSpec {
        let mut spec = self.clone();
        for (slot, &t) in spec.effects.iter_mut().zip(thetas) {
            slot.1 = t;
        }
        spec
    }

    /// All free cells of the state under this model.
    pub fn free_cells(&self, ml: &MultilevelNetwork) -> Result<Vec<Toggle>, SamplerError> {
        if self.effects.is_empty() {
            return Err(SamplerError::NoEffects);
        }
        if !self.free_layers.w && !self.free_layers.y {
            return Err(SamplerError::NoFreeLayers);
        }
        let n = ml.reporter_count();
        let e = ml.pair_count();
        for &(i, r) in &self.w_mask {
            if i >= n || r >= e {
                return Err(SamplerError::MaskOutOfRange(format!("W[{i}][{r}]")));
            }
        }
        for &(i, j) in &self.y_mask {
            if i >= n || j >= n || i == j {
                return Err(SamplerError::MaskOutOfRange(format!("Y[{i}][{j}]")));
            }
        }
        let mut cells = Vec::new();
        if self.free_layers.w {
            let masked: std::collections::HashSet<(usize, usize)> =
                self.w_mask.iter().copied().collect();
            for i in 0..n {
                for r in 0..e {
                    if !masked.contains(&(i, r)) {
                        cells.push(Toggle::W {
                            reporter: i,
                            pair: r,
                        });
                    }
                }
            }
        }
        if self.free_layers.y {
            let masked: std::collections::HashSet<(usize, usize)> = self
                .y_mask
                .iter()
                .map(|&(i, j)| if i < j { (i, j) } else { (j, i) })
                .collect();
            for i in 0..n {
                for j in (i + 1)..n {
                    if !masked.contains(&(i, j)) {
                        cells.push(Toggle::Y { i, j });
                    }
                }
            }
        }
        if cells.is_empty() {
            return Err(SamplerError::NoFreeCells);
        }
        Ok(cells)
    }
}

/// One proposal. Returns whether it was accepted.
pub fn mh_step(
    state: &mut MultilevelNetwork,
    spec: &ModelSpec,
    free_cells: &[Toggle],
    rng: &mut impl Rng,
) -> bool {
    let cell = free_cells[rng.gen_range(0..free_cells.len())];
    let was_set = cell.is_set(state);
    if was_set {
        // Evaluate the change from the cleared state.
        cell.apply(state);
    }
    let mut log_ratio = 0.0;
    for (id, theta) in &spec.effects {
        if *theta != 0.0 {
            log_ratio += theta * delta_up(state, cell, id);
        }
    }
    if was_set {
        log_ratio = -log_ratio;
    }
    let accept = log_ratio >= 0.0 || rng.gen::<f64>() < log_ratio.exp();
    // was_set && accept: leave cleared. was_set && !accept: restore.
    // !was_set && accept: set. !was_set && !accept: leave cleared.
    if was_set != accept {
        // State should hold the cell: restore or set it.
        if !cell.is_set(state) {
            cell.apply(state);
        }
    }
    accept
}

/// Statistics recorded along a chain.
#[derive(Debug, Clone)]
pub struct SampleBatch {
    /// M x p matrix; columns follow the model's effect order.
    pub stat_matrix: Vec<Vec<f64>>,
    /// State of the chain after the last recorded sample.
    pub final_state: Option<MultilevelNetwork>,
    pub seed: u64,
    pub burnin: u64,
    pub thin: u64,
    /// Degeneracy warnings (mostly-empty or mostly-complete free layers).
    pub warnings: Vec<String>,
}

impl SampleBatch {
    pub fn column(&self, k: usize) -> Vec<f64> {
        self.stat_matrix.iter().map(|row| row[k]).collect()
    }

    pub fn column_mean(&self, k: usize) -> f64 {
        let col = self.column(k);
        col.iter().sum::<f64>() / col.len() as f64
    }
}

/// Default burn-in: 10^4 * sqrt(#free cells).
pub fn default_burnin(free_cells: usize) -> u64 {
    (1.0e4 * (free_cells as f64).sqrt()).round() as u64
}

/// Default thinning: one sweep-equivalent of proposals.
pub fn default_thin(free_cells: usize) -> u64 {
    free_cells as u64
}

/// Run a chain from `start`, recording the model statistics `samples` times
/// after `burnin` steps, every `thin` steps. Deterministic given the seed.
pub fn simulate(
    start: &MultilevelNetwork,
    spec: &ModelSpec,
    burnin: u64,
    thin: u64,
    samples: usize,
    seed: u64,
) -> Result<SampleBatch, SamplerError> {
    if samples == 0 {
        return Err(SamplerError::NoSamples);
    }
    let free_cells = spec.free_cells(start)?;
    let ids = spec.ids();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut state = start.clone();
    for _ in 0..burnin {
        mh_step(&mut state, spec, &free_cells, &mut rng);
    }
    let mut stat_matrix = Vec::with_capacity(samples);
    let mut w_extreme = 0usize;
    let mut y_extreme = 0usize;
    for _ in 0..samples {
        for _ in 0..thin {
            mh_step(&mut state, spec, &free_cells, &mut rng);
        }
        let z = compute_statistics(&state, &ids).map_err(SamplerError::Stat)?;
        stat_matrix.push(z.values());
        if spec.free_layers.w {
            let ties = state.w().count_ones();
            if ties == 0 || ties == state.reporter_count() * state.pair_count() {
                w_extreme += 1;
            }
        }
        if spec.free_layers.y {
            let ties = state.y().count_ones() / 2;
            let n = state.reporter_count();
            if ties == 0 || ties == n * (n - 1) / 2 {
                y_extreme += 1;
            }
        }
    }
    let mut warnings = Vec::new();
    let threshold = (samples as f64 * 0.99).floor() as usize;
    if spec.free_layers.w && w_extreme > threshold {
        warnings.push(format!(
            "degeneracy: {w_extreme}/{samples} recorded states have an empty or complete W layer"
        ));
    }
    if spec.free_layers.y && y_extreme > threshold {
        warnings.push(format!(
            "degeneracy: {y_extreme}/{samples} recorded states have an empty or complete Y layer"
        ));
    }
    Ok(SampleBatch {
        stat_matrix,
        final_state: Some(state),
        seed,
        burnin,
        thin,
        warnings,
    })
}
