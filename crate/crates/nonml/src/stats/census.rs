//! Brute-force census of every registry statistic.
//!
//! Everything here is definitional enumeration over raw index tuples with
//! cell-by-cell reads. No shared-partner caches, no incidence shortcuts.
//! This is the test oracle for the optimized engine; keep it slow and
//! obviously correct.

use crate::error::StatError;
use crate::multilevel::MultilevelNetwork;
use crate::stats::engine::{alt_partner, alt_star, binom};
use crate::stats::registry::{StatVector, Statistic, StatisticId};

fn y_degree(ml: &MultilevelNetwork, i: usize) -> usize {
    (0..ml.reporter_count()).filter(|&j| ml.y_tie(i, j)).count()
}

fn w_row(ml: &MultilevelNetwork, i: usize) -> usize {
    (0..ml.pair_count()).filter(|&r| ml.w_tie(i, r)).count()
}

fn w_col(ml: &MultilevelNetwork, r: usize) -> usize {
    (0..ml.reporter_count()).filter(|&i| ml.w_tie(i, r)).count()
}

fn shared_partners_y(ml: &MultilevelNetwork, i: usize, j: usize) -> usize {
    (0..ml.reporter_count())
        .filter(|&k| k != i && k != j && ml.y_tie(i, k) && ml.y_tie(j, k))
        .count()
}

fn co_affiliations(ml: &MultilevelNetwork, i: usize, j: usize) -> usize {
    (0..ml.pair_count())
        .filter(|&r| ml.w_tie(i, r) && ml.w_tie(j, r))
        .count()
}

fn co_reporters(ml: &MultilevelNetwork, r: usize, t: usize) -> usize {
    (0..ml.reporter_count())
        .filter(|&i| ml.w_tie(i, r) && ml.w_tie(i, t))
        .count()
}

fn q_tie(ml: &MultilevelNetwork, r: usize, t: usize) -> bool {
    ml.q().get(r, t)
}

fn q_degree(ml: &MultilevelNetwork, r: usize) -> usize {
    (0..ml.pair_count()).filter(|&t| q_tie(ml, r, t)).count()
}

fn q_triangles_at(ml: &MultilevelNetwork, r: usize) -> usize {
    let e = ml.pair_count();
    let mut count = 0;
    for t in 0..e {
        for u in (t + 1)..e {
            if t != r && u != r && q_tie(ml, r, t) && q_tie(ml, r, u) && q_tie(ml, t, u) {
                count += 1;
            }
        }
    }
    count
}

fn ordered_four_cycle_sum(ml: &MultilevelNetwork, i: usize, j: usize) -> usize {
    // h[i][j] as the displayed ordered double sum over (r, t).
    let e = ml.pair_count();
    let mut total = 0;
    for r in 0..e {
        for t in 0..e {
            if ml.w_tie(i, r) && ml.w_tie(j, t) && q_tie(ml, r, t) {
                total += 1;
            }
        }
    }
    total
}

/// Do the pre-images of three distinct top-level nodes form a triangle on
/// exactly three universe nodes (as opposed to a star through one node)?
fn preimage_closure(ml: &MultilevelNetwork, r: usize, t: usize, u: usize) -> bool {
    let mut nodes = Vec::new();
    for x in [r, t, u] {
        let (a, b) = ml.pair_index().preimage(x);
        nodes.push(a);
        nodes.push(b);
    }
    nodes.sort_unstable();
    nodes.dedup();
    nodes.len() == 3
}

fn census_value(ml: &MultilevelNetwork, id: &StatisticId) -> Result<f64, StatError> {
    if id.stat.is_alternating() && id.lambda <= 1.0 {
        return Err(StatError::BadLambda(id.lambda));
    }
    let n = ml.reporter_count();
    let e = ml.pair_count();
    let lam = id.lambda;
    let v: f64 = match id.stat {
        Statistic::EdgeA => {
            let mut c = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    if ml.y_tie(i, j) {
                        c += 1;
                    }
                }
            }
            c as f64
        }
        Statistic::Star2A => (0..n).map(|i| binom(y_degree(ml, i), 2)).sum(),
        Statistic::Star3A => (0..n).map(|i| binom(y_degree(ml, i), 3)).sum(),
        Statistic::Star4A => (0..n).map(|i| binom(y_degree(ml, i), 4)).sum(),
        Statistic::Star5A => (0..n).map(|i| binom(y_degree(ml, i), 5)).sum(),
        Statistic::TriangleA => {
            let mut c = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    for k in (j + 1)..n {
                        if ml.y_tie(i, j) && ml.y_tie(j, k) && ml.y_tie(i, k) {
                            c += 1;
                        }
                    }
                }
            }
            c as f64
        }
        Statistic::Cycle4A => {
            // Ordered traversals of four distinct nodes, divided by the 8
            // traversals of each undirected 4-cycle.
            let mut ordered = 0usize;
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        for d in 0..n {
                            if a == b || a == c || a == d || b == c || b == d || c == d {
                                continue;
                            }
                            if ml.y_tie(a, b) && ml.y_tie(b, c) && ml.y_tie(c, d) && ml.y_tie(d, a)
                            {
                                ordered += 1;
                            }
                        }
                    }
                }
            }
            (ordered / 8) as f64
        }
        Statistic::IsolatesA => (0..n).filter(|&i| y_degree(ml, i) == 0).count() as f64,
        Statistic::IsolateEdgesA => {
            let mut c = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    if ml.y_tie(i, j) && y_degree(ml, i) == 1 && y_degree(ml, j) == 1 {
                        c += 1;
                    }
                }
            }
            c as f64
        }
        Statistic::AltStarA => (0..n).map(|i| alt_star(lam, y_degree(ml, i))).sum(),
        Statistic::AltTriangleA => {
            let mut total = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    if ml.y_tie(i, j) {
                        total += alt_partner(lam, shared_partners_y(ml, i, j));
                    }
                }
            }
            total
        }
        Statistic::AltTwoPathA => {
            let mut total = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    total += alt_partner(lam, shared_partners_y(ml, i, j));
                }
            }
            total
        }
        Statistic::AltEdgeTriangleA => {
            let mut total = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    for k in (j + 1)..n {
                        if ml.y_tie(i, j) && ml.y_tie(j, k) && ml.y_tie(i, k) {
                            let ext = y_degree(ml, i) + y_degree(ml, j) + y_degree(ml, k) - 6;
                            total += alt_partner(lam, ext);
                        }
                    }
                }
            }
            total
        }
        Statistic::XEdge => {
            let mut c = 0;
            for i in 0..n {
                for r in 0..e {
                    if ml.w_tie(i, r) {
                        c += 1;
                    }
                }
            }
            c as f64
        }
        Statistic::XStar2A => (0..n).map(|i| binom(w_row(ml, i), 2)).sum(),
        Statistic::XStar3A => (0..n).map(|i| binom(w_row(ml, i), 3)).sum(),
        Statistic::XStar2B => (0..e).map(|r| binom(w_col(ml, r), 2)).sum(),
        Statistic::XStar3B => (0..e).map(|r| binom(w_col(ml, r), 3)).sum(),
        Statistic::X3Path => {
            // Paths i - r - j - t, enumerated from the reporter endpoint.
            let mut c = 0usize;
            for i in 0..n {
                for r in 0..e {
                    for j in 0..n {
                        for t in 0..e {
                            if i != j
                                && r != t
                                && ml.w_tie(i, r)
                                && ml.w_tie(j, r)
                                && ml.w_tie(j, t)
                            {
                                c += 1;
                            }
                        }
                    }
                }
            }
            c as f64
        }
        Statistic::X4Cycle => {
            let mut ordered = 0usize;
            for i in 0..n {
                for r in 0..e {
                    for j in 0..n {
                        for t in 0..e {
                            if i != j
                                && r != t
                                && ml.w_tie(i, r)
                                && ml.w_tie(j, r)
                                && ml.w_tie(j, t)
                                && ml.w_tie(i, t)
                            {
                                ordered += 1;
                            }
                        }
                    }
                }
            }
            (ordered / 4) as f64
        }
        Statistic::XAltStarA => (0..n).map(|i| alt_star(lam, w_row(ml, i))).sum(),
        Statistic::XAltStarB => (0..e).map(|r| alt_star(lam, w_col(ml, r))).sum(),
        Statistic::XAltCycleA => {
            let mut total = 0.0;
            for r in 0..e {
                for t in (r + 1)..e {
                    total += alt_partner(lam, co_reporters(ml, r, t));
                }
            }
            total
        }
        Statistic::XAltCycleB => {
            let mut total = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    total += alt_partner(lam, co_affiliations(ml, i, j));
                }
            }
            total
        }
        Statistic::XEdgeCycleA => {
            let mut total = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    for k in (j + 1)..n {
                        total += (co_affiliations(ml, i, j)
                            * co_affiliations(ml, j, k)
                            * co_affiliations(ml, i, k)) as f64;
                    }
                }
            }
            total
        }
        Statistic::XEdgeCycleB => {
            let mut total = 0.0;
            for r in 0..e {
                for t in (r + 1)..e {
                    for u in (t + 1)..e {
                        total += (co_reporters(ml, r, t)
                            * co_reporters(ml, t, u)
                            * co_reporters(ml, r, u)) as f64;
                    }
                }
            }
            total
        }
        Statistic::XAltEdgeCycleA => {
            let mut total = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    total += alt_star(lam, co_affiliations(ml, i, j));
                }
            }
            total
        }
        Statistic::XAltEdgeCycleB => {
            let mut total = 0.0;
            for r in 0..e {
                for t in (r + 1)..e {
                    total += alt_star(lam, co_reporters(ml, r, t));
                }
            }
            total
        }
        Statistic::Star2AX => (0..n)
            .map(|i| (y_degree(ml, i) * w_row(ml, i)) as f64)
            .sum(),
        Statistic::TriangleXAX => {
            let mut c = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    if ml.y_tie(i, j) {
                        c += co_affiliations(ml, i, j);
                    }
                }
            }
            c as f64
        }
        Statistic::L3XAX => {
            let mut c = 0usize;
            for i in 0..n {
                for j in (i + 1)..n {
                    if !ml.y_tie(i, j) {
                        continue;
                    }
                    for r in 0..e {
                        for t in 0..e {
                            if r != t && ml.w_tie(i, r) && ml.w_tie(j, t) {
                                c += 1;
                            }
                        }
                    }
                }
            }
            c as f64
        }
        Statistic::AltTriangleXAX => {
            let mut total = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    if ml.y_tie(i, j) {
                        total += alt_partner(lam, co_affiliations(ml, i, j));
                    }
                }
            }
            total
        }
        Statistic::Star2BX => {
            let mut c = 0;
            for i in 0..n {
                for r in 0..e {
                    if ml.w_tie(i, r) {
                        c += q_degree(ml, r);
                    }
                }
            }
            c as f64
        }
        Statistic::TriangleXBX => {
            let mut c = 0;
            for i in 0..n {
                for r in 0..e {
                    for t in (r + 1)..e {
                        if ml.w_tie(i, r) && ml.w_tie(i, t) && q_tie(ml, r, t) {
                            c += 1;
                        }
                    }
                }
            }
            c as f64
        }
        Statistic::L3XBX => {
            let mut c = 0usize;
            for r in 0..e {
                for t in (r + 1)..e {
                    if !q_tie(ml, r, t) {
                        continue;
                    }
                    for i in 0..n {
                        for j in 0..n {
                            if i != j && ml.w_tie(i, r) && ml.w_tie(j, t) {
                                c += 1;
                            }
                        }
                    }
                }
            }
            c as f64
        }
        Statistic::AltTriangleXBX => {
            let mut total = 0.0;
            for r in 0..e {
                for t in (r + 1)..e {
                    if q_tie(ml, r, t) {
                        total += alt_partner(lam, co_reporters(ml, r, t));
                    }
                }
            }
            total
        }
        Statistic::ExtTriangleB => {
            let mut c = 0;
            for i in 0..n {
                for r in 0..e {
                    if ml.w_tie(i, r) {
                        c += q_triangles_at(ml, r);
                    }
                }
            }
            c as f64
        }
        Statistic::ExtTriangleA => {
            let mut c = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    for k in (j + 1)..n {
                        if ml.y_tie(i, j) && ml.y_tie(j, k) && ml.y_tie(i, k) {
                            c += w_row(ml, i) + w_row(ml, j) + w_row(ml, k);
                        }
                    }
                }
            }
            c as f64
        }
        Statistic::Cycle4AXB => {
            let mut c = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    if ml.y_tie(i, j) {
                        c += ordered_four_cycle_sum(ml, i, j);
                    }
                }
            }
            c as f64
        }
        Statistic::L3AXB => {
            let mut c = 0usize;
            for i in 0..n {
                for j in 0..n {
                    if i == j || !ml.y_tie(i, j) {
                        continue;
                    }
                    for r in 0..e {
                        if !ml.w_tie(j, r) {
                            continue;
                        }
                        for t in 0..e {
                            if q_tie(ml, r, t) {
                                c += 1;
                            }
                        }
                    }
                }
            }
            c as f64
        }
        Statistic::AltStarAXB => {
            let mut total = 0.0;
            for i in 0..n {
                for r in 0..e {
                    if ml.w_tie(i, r) {
                        total += alt_star(lam, y_degree(ml, i)) * alt_star(lam, q_degree(ml, r));
                    }
                }
            }
            total
        }
        Statistic::AltCycle4AXB => {
            let mut total = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    if ml.y_tie(i, j) {
                        total += alt_partner(lam, ordered_four_cycle_sum(ml, i, j));
                    }
                }
            }
            total
        }
        Statistic::ExpertXEdgeB => {
            let mut c = 0;
            for i in 0..n {
                for r in 0..e {
                    if ml.w_tie(i, r) && ml.d()[r] == 1 {
                        c += 1;
                    }
                }
            }
            c as f64
        }
        Statistic::ExpertStar2BX => {
            let mut c = 0;
            for i in 0..n {
                for r in 0..e {
                    if ml.w_tie(i, r) && ml.d()[r] == 1 {
                        c += q_degree(ml, r);
                    }
                }
            }
            c as f64
        }
        Statistic::XTriEdgeB => {
            let mut c = 0;
            for i in 0..n {
                for r in 0..e {
                    if !ml.w_tie(i, r) {
                        continue;
                    }
                    for t in 0..e {
                        for u in (t + 1)..e {
                            if t == r || u == r {
                                continue;
                            }
                            if q_tie(ml, r, t)
                                && q_tie(ml, r, u)
                                && q_tie(ml, t, u)
                                && ml.d()[t] == 1
                                && ml.d()[u] == 1
                                && preimage_closure(ml, r, t, u)
                            {
                                c += 1;
                            }
                        }
                    }
                }
            }
            c as f64
        }
        Statistic::XC4ChordB => {
            let mut c = 0;
            for i in 0..n {
                for r in 0..e {
                    for t in (r + 1)..e {
                        if !(ml.w_tie(i, r) && ml.w_tie(i, t) && q_tie(ml, r, t)) {
                            continue;
                        }
                        for x in 0..e {
                            if x != r
                                && x != t
                                && ml.d()[x] == 1
                                && q_tie(ml, r, x)
                                && q_tie(ml, t, x)
                                && preimage_closure(ml, r, t, x)
                            {
                                c += 1;
                            }
                        }
                    }
                }
            }
            c as f64
        }
    };
    Ok(v)
}

/// Same contract as `compute_statistics`, by exhaustive enumeration.
pub fn census_oracle(ml: &MultilevelNetwork, ids: &[StatisticId]) -> Result<StatVector, StatError> {
    let mut entries = Vec::with_capacity(ids.len());
    for id in ids {
        entries.push((*id, census_value(ml, id)?));
    }
    Ok(StatVector::new(entries))
}
