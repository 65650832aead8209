//! Exact global values for every registry statistic.
//!
//! Shared-partner and degree counts come from bitset intersections; the
//! damping functionals live here so the change-statistic path and the census
//! oracle evaluate bit-identical terms.

use crate::error::StatError;
use crate::multilevel::MultilevelNetwork;
use crate::stats::registry::{StatVector, Statistic, StatisticId};

/// C(n, k) as f64 (exact for the small k used by the registry).
pub(crate) fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let mut num = 1.0;
    for j in 0..k {
        num *= (n - j) as f64;
    }
    let mut den = 1.0;
    for j in 1..=k {
        den *= j as f64;
    }
    num / den
}

/// Alternating-star functional: lambda^2 * ((1-1/lambda)^d - 1 + d/lambda).
pub(crate) fn alt_star(lambda: f64, d: usize) -> f64 {
    let rho = 1.0 - 1.0 / lambda;
    lambda * lambda * (rho.powi(d as i32) - 1.0 + d as f64 / lambda)
}

/// Alternating shared-partner functional: lambda * (1 - (1-1/lambda)^k).
pub(crate) fn alt_partner(lambda: f64, k: usize) -> f64 {
    let rho = 1.0 - 1.0 / lambda;
    lambda * (1.0 - rho.powi(k as i32))
}

/// Per-call cache of the quantities several statistics share.
pub(crate) struct EngineCtx {
    pub y_deg: Vec<usize>,
    pub w_row: Vec<usize>,
    pub w_col: Vec<usize>,
    b: Option<Vec<usize>>,
    a_pos: Option<Vec<(usize, usize, usize)>>,
}

impl EngineCtx {
    pub fn new(ml: &MultilevelNetwork) -> Self {
        let n = ml.reporter_count();
        let e = ml.pair_count();
        EngineCtx {
            y_deg: (0..n).map(|i| ml.y().row_count(i)).collect(),
            w_row: (0..n).map(|i| ml.w().row_count(i)).collect(),
            w_col: (0..e).map(|r| ml.w_by_pair().row_count(r)).collect(),
            b: None,
            a_pos: None,
        }
    }

    /// Co-affiliation counts b[i][j] = |N_W(i) AND N_W(j)|, flattened n x n.
    pub fn b(&mut self, ml: &MultilevelNetwork) -> &[usize] {
        if self.b.is_none() {
            let n = ml.reporter_count();
            let mut b = vec![0usize; n * n];
            for i in 0..n {
                for j in (i + 1)..n {
                    let c = ml.w().row_and_count(i, j);
                    b[i * n + j] = c;
                    b[j * n + i] = c;
                }
            }
            self.b = Some(b);
        }
        self.b.as_ref().unwrap()
    }

    /// Pairs (r < t) of top-level nodes with a positive co-reporter count,
    /// with that count.
    pub fn a_positive(&mut self, ml: &MultilevelNetwork) -> &[(usize, usize, usize)] {
        if self.a_pos.is_none() {
            let n = ml.reporter_count();
            let mut pos = Vec::new();
            if n <= 64 {
                // Sparse route: only pairs co-affiliated by some reporter can
                // have a positive count.
                let e = ml.pair_count();
                let mut seen = std::collections::HashSet::new();
                for i in 0..n {
                    let ones = ml.w().row_ones(i);
                    for (x, &r) in ones.iter().enumerate() {
                        for &t in &ones[x + 1..] {
                            seen.insert((r, t));
                        }
                    }
                }
                let mut pairs: Vec<(usize, usize)> = seen.into_iter().collect();
                pairs.sort_unstable();
                for (r, t) in pairs {
                    debug_assert!(r < t && t < e);
                    let a = ml.w_by_pair().row_and_count(r, t);
                    if a > 0 {
                        pos.push((r, t, a));
                    }
                }
            } else {
                let e = ml.pair_count();
                for r in 0..e {
                    for t in (r + 1)..e {
                        let a = ml.w_by_pair().row_and_count(r, t);
                        if a > 0 {
                            pos.push((r, t, a));
                        }
                    }
                }
            }
            self.a_pos = Some(pos);
        }
        self.a_pos.as_ref().unwrap()
    }
}

/// Unordered Y-triangles as (i < j < k) index triples.
pub(crate) fn y_triangles(ml: &MultilevelNetwork) -> Vec<(usize, usize, usize)> {
    let n = ml.reporter_count();
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if !ml.y_tie(i, j) {
                continue;
            }
            for k in (j + 1)..n {
                if ml.y_tie(i, k) && ml.y_tie(j, k) {
                    out.push((i, j, k));
                }
            }
        }
    }
    out
}

/// The multilevel four-cycle count between reporters i and j:
/// h[i][j] = sum over (r, t) of W[i][r] W[j][t] Q[r][t].
pub(crate) fn h_between(ml: &MultilevelNetwork, i: usize, j: usize) -> usize {
    ml.w()
        .row_ones(i)
        .into_iter()
        .map(|r| ml.w().row_and_count_with(j, ml.q(), r))
        .sum()
}

/// The dyadic covariate projection of the multilevel four-cycle: a symmetric
/// reporter-by-reporter matrix with zero diagonal.
pub fn dyadic_covariate(ml: &MultilevelNetwork) -> Vec<Vec<f64>> {
    let n = ml.reporter_count();
    let mut h = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = h_between(ml, i, j) as f64;
            h[i][j] = v;
            h[j][i] = v;
        }
    }
    h
}

pub(crate) fn value_of(
    ml: &MultilevelNetwork,
    ctx: &mut EngineCtx,
    id: &StatisticId,
) -> Result<f64, StatError> {
    if id.stat.is_alternating() && id.lambda <= 1.0 {
        return Err(StatError::BadLambda(id.lambda));
    }
    let n = ml.reporter_count();
    let e = ml.pair_count();
    let lam = id.lambda;
    let v = match id.stat {
        Statistic::EdgeA => (ml.y().count_ones() / 2) as f64,
        Statistic::Star2A => ctx.y_deg.iter().map(|&d| binom(d, 2)).sum(),
        Statistic::Star3A => ctx.y_deg.iter().map(|&d| binom(d, 3)).sum(),
        Statistic::Star4A => ctx.y_deg.iter().map(|&d| binom(d, 4)).sum(),
        Statistic::Star5A => ctx.y_deg.iter().map(|&d| binom(d, 5)).sum(),
        Statistic::TriangleA => {
            // Each triangle is seen once per edge.
            let mut thrice = 0usize;
            for i in 0..n {
                for j in (i + 1)..n {
                    if ml.y_tie(i, j) {
                        thrice += ml.y().row_and_count(i, j);
                    }
                }
            }
            (thrice / 3) as f64
        }
        Statistic::Cycle4A => {
            let mut twice = 0usize;
            for i in 0..n {
                for j in (i + 1)..n {
                    let sp = ml.y().row_and_count(i, j);
                    twice += sp * sp.saturating_sub(1) / 2;
                }
            }
            (twice / 2) as f64
        }
        Statistic::IsolatesA => ctx.y_deg.iter().filter(|&&d| d == 0).count() as f64,
        Statistic::IsolateEdgesA => {
            let mut count = 0usize;
            for i in 0..n {
                for j in (i + 1)..n {
                    if ml.y_tie(i, j) && ctx.y_deg[i] == 1 && ctx.y_deg[j] == 1 {
                        count += 1;
                    }
                }
            }
            count as f64
        }
        Statistic::AltStarA => ctx.y_deg.iter().map(|&d| alt_star(lam, d)).sum(),
        Statistic::AltTriangleA => {
            let mut total = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    if ml.y_tie(i, j) {
                        total += alt_partner(lam, ml.y().row_and_count(i, j));
                    }
                }
            }
            total
        }
        Statistic::AltTwoPathA => {
            let mut total = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    total += alt_partner(lam, ml.y().row_and_count(i, j));
                }
            }
            total
        }
        Statistic::AltEdgeTriangleA => y_triangles(ml)
            .into_iter()
            .map(|(i, j, k)| alt_partner(lam, ctx.y_deg[i] + ctx.y_deg[j] + ctx.y_deg[k] - 6))
            .sum(),
        Statistic::XEdge => ml.w().count_ones() as f64,
        Statistic::XStar2A => ctx.w_row.iter().map(|&d| binom(d, 2)).sum(),
        Statistic::XStar3A => ctx.w_row.iter().map(|&d| binom(d, 3)).sum(),
        Statistic::XStar2B => ctx.w_col.iter().map(|&d| binom(d, 2)).sum(),
        Statistic::XStar3B => ctx.w_col.iter().map(|&d| binom(d, 3)).sum(),
        Statistic::X3Path => {
            let mut total = 0usize;
            for i in 0..n {
                if ctx.w_row[i] == 0 {
                    continue;
                }
                for r in ml.w().row_ones(i) {
                    total += (ctx.w_row[i] - 1) * (ctx.w_col[r] - 1);
                }
            }
            total as f64
        }
        Statistic::X4Cycle => {
            let b = ctx.b(ml);
            let mut total = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    total += binom(b[i * n + j], 2);
                }
            }
            total
        }
        Statistic::XAltStarA => ctx.w_row.iter().map(|&d| alt_star(lam, d)).sum(),
        Statistic::XAltStarB => ctx.w_col.iter().map(|&d| alt_star(lam, d)).sum(),
        Statistic::XAltCycleA => ctx
            .a_positive(ml)
            .iter()
            .map(|&(_, _, a)| alt_partner(lam, a))
            .sum(),
        Statistic::XAltCycleB => {
            let b = ctx.b(ml);
            let mut total = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    total += alt_partner(lam, b[i * n + j]);
                }
            }
            total
        }
        Statistic::XEdgeCycleA => {
            let b = ctx.b(ml);
            let mut total = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    let bij = b[i * n + j];
                    if bij == 0 {
                        continue;
                    }
                    for k in (j + 1)..n {
                        total += (bij * b[j * n + k] * b[i * n + k]) as f64;
                    }
                }
            }
            total
        }
        Statistic::XEdgeCycleB => {
            // Triangles in the positive co-reporter relation, weighted by the
            // product of the three leg counts.
            let pos = ctx.a_positive(ml).to_vec();
            let mut nbrs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); e];
            for &(r, t, a) in &pos {
                nbrs[r].push((t, a));
            }
            let mut total = 0.0;
            for &(r, t, a_rt) in &pos {
                // u > t keeps triples ordered r < t < u.
                for &(u, a_tu) in &nbrs[t] {
                    if u <= t {
                        continue;
                    }
                    if let Ok(idx) = nbrs[r].binary_search_by_key(&u, |&(x, _)| x) {
                        let a_ru = nbrs[r][idx].1;
                        total += (a_rt * a_tu * a_ru) as f64;
                    }
                }
            }
            total
        }
        Statistic::XAltEdgeCycleA => {
            let b = ctx.b(ml);
            let mut total = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    total += alt_star(lam, b[i * n + j]);
                }
            }
            total
        }
        Statistic::XAltEdgeCycleB => {
            // alt_star(0) = 0, so only positive pairs contribute.
            ctx.a_positive(ml)
                .iter()
                .map(|&(_, _, a)| alt_star(lam, a))
                .sum()
        }
        Statistic::Star2AX => (0..n).map(|i| (ctx.y_deg[i] * ctx.w_row[i]) as f64).sum(),
        Statistic::TriangleXAX => {
            let mut total = 0usize;
            for i in 0..n {
                for j in (i + 1)..n {
                    if ml.y_tie(i, j) {
                        total += ml.w().row_and_count(i, j);
                    }
                }
            }
            total as f64
        }
        Statistic::L3XAX => {
            let mut total = 0usize;
            for i in 0..n {
                for j in (i + 1)..n {
                    if ml.y_tie(i, j) {
                        total += ctx.w_row[i] * ctx.w_row[j] - ml.w().row_and_count(i, j);
                    }
                }
            }
            total as f64
        }
        Statistic::AltTriangleXAX => {
            let mut total = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    if ml.y_tie(i, j) {
                        total += alt_partner(lam, ml.w().row_and_count(i, j));
                    }
                }
            }
            total
        }
        Statistic::Star2BX => (0..e)
            .map(|r| (ctx.w_col[r] * ml.top().degree[r]) as f64)
            .sum(),
        Statistic::TriangleXBX => {
            let mut twice = 0usize;
            for i in 0..n {
                for r in ml.w().row_ones(i) {
                    twice += ml.w().row_and_count_with(i, ml.q(), r);
                }
            }
            (twice / 2) as f64
        }
        Statistic::L3XBX => {
            let mut total = 0usize;
            for r in 0..e {
                for t in ml.q().row_ones(r) {
                    if t <= r {
                        continue;
                    }
                    total += ctx.w_col[r] * ctx.w_col[t] - ml.w_by_pair().row_and_count(r, t);
                }
            }
            total as f64
        }
        Statistic::AltTriangleXBX => {
            let mut total = 0.0;
            for r in 0..e {
                for t in ml.q().row_ones(r) {
                    if t <= r {
                        continue;
                    }
                    total += alt_partner(lam, ml.w_by_pair().row_and_count(r, t));
                }
            }
            total
        }
        Statistic::ExtTriangleB => (0..e)
            .map(|r| (ctx.w_col[r] * ml.top().triangles[r]) as f64)
            .sum(),
        Statistic::ExtTriangleA => y_triangles(ml)
            .into_iter()
            .map(|(i, j, k)| (ctx.w_row[i] + ctx.w_row[j] + ctx.w_row[k]) as f64)
            .sum(),
        Statistic::Cycle4AXB => {
            let mut total = 0usize;
            for i in 0..n {
                for j in (i + 1)..n {
                    if ml.y_tie(i, j) {
                        total += h_between(ml, i, j);
                    }
                }
            }
            total as f64
        }
        Statistic::L3AXB => {
            let mut total = 0usize;
            for j in 0..n {
                if ctx.y_deg[j] == 0 {
                    continue;
                }
                let s: usize = ml
                    .w()
                    .row_ones(j)
                    .into_iter()
                    .map(|r| ml.top().degree[r])
                    .sum();
                total += ctx.y_deg[j] * s;
            }
            total as f64
        }
        Statistic::AltStarAXB => {
            let mut total = 0.0;
            for i in 0..n {
                let fi = alt_star(lam, ctx.y_deg[i]);
                for r in ml.w().row_ones(i) {
                    total += fi * alt_star(lam, ml.top().degree[r]);
                }
            }
            total
        }
        Statistic::AltCycle4AXB => {
            let mut total = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    if ml.y_tie(i, j) {
                        total += alt_partner(lam, h_between(ml, i, j));
                    }
                }
            }
            total
        }
        Statistic::ExpertXEdgeB => (0..e)
            .filter(|&r| ml.d()[r] == 1)
            .map(|r| ctx.w_col[r] as f64)
            .sum(),
        Statistic::ExpertStar2BX => (0..e)
            .filter(|&r| ml.d()[r] == 1)
            .map(|r| (ctx.w_col[r] * ml.top().degree[r]) as f64)
            .sum(),
        Statistic::XTriEdgeB => (0..e)
            .map(|r| (ctx.w_col[r] * ml.top().coloured_closures[r]) as f64)
            .sum(),
        Statistic::XC4ChordB => {
            let mut twice = 0usize;
            for i in 0..n {
                for r in ml.w().row_ones(i) {
                    twice += ml.w().row_and_count_with(i, &ml.top().chord_d, r);
                }
            }
            (twice / 2) as f64
        }
    };
    Ok(v)
}

/// Exact values of the requested statistics, in request order.
pub fn compute_statistics(
    ml: &MultilevelNetwork,
    ids: &[StatisticId],
) -> Result<StatVector, StatError> {
    let mut ctx = EngineCtx::new(ml);
    let mut entries = Vec::with_capacity(ids.len());
    for id in ids {
        entries.push((*id, value_of(ml, &mut ctx, id)?));
    }
    Ok(StatVector::new(entries))
}
