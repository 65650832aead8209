//! Local change statistics: the effect on each registry statistic of setting
//! one free cell to 1, computed without a full recount.
//!
//! The returned value is always z(cell = 1) - z(cell = 0). When the cell is
//! currently 1 the public entry point evaluates on a copy with the cell
//! cleared, so callers never see state mutation. The sampler uses the
//! zero-state kernel directly and manages its own toggles.

use crate::error::StatError;
use crate::multilevel::MultilevelNetwork;
use crate::stats::engine::{alt_partner, alt_star, binom, h_between};
use crate::stats::registry::{StatVector, Statistic, StatisticId};

/// Address of one free tie variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Toggle {
    /// Affiliation cell W[reporter][pair].
    W { reporter: usize, pair: usize },
    /// Social tie Y[i][j], i != j.
    Y { i: usize, j: usize },
}

impl Toggle {
    pub fn validate(&self, ml: &MultilevelNetwork) -> Result<(), StatError> {
        match *self {
            Toggle::W { reporter, pair } => {
                if reporter >= ml.reporter_count() || pair >= ml.pair_count() {
                    return Err(StatError::ToggleOutOfRange(format!(
                        "W[{reporter}][{pair}]"
                    )));
                }
            }
            Toggle::Y { i, j } => {
                if i >= ml.reporter_count() || j >= ml.reporter_count() {
                    return Err(StatError::ToggleOutOfRange(format!("Y[{i}][{j}]")));
                }
                if i == j {
                    return Err(StatError::ToggleSelfTie);
                }
            }
        }
        Ok(())
    }

    pub fn is_set(&self, ml: &MultilevelNetwork) -> bool {
        match *self {
            Toggle::W { reporter, pair } => ml.w_tie(reporter, pair),
            Toggle::Y { i, j } => ml.y_tie(i, j),
        }
    }

    pub fn apply(&self, ml: &mut MultilevelNetwork) {
        match *self {
            Toggle::W { reporter, pair } => ml.toggle_w(reporter, pair),
            Toggle::Y { i, j } => ml.toggle_y(i, j),
        }
    }
}

/// Change in one statistic from setting the cell, with the cell currently 0.
pub(crate) fn delta_up(ml: &MultilevelNetwork, toggle: Toggle, id: &StatisticId) -> f64 {
    debug_assert!(!toggle.is_set(ml));
    match toggle {
        Toggle::Y { i, j } => delta_up_y(ml, i, j, id),
        Toggle::W { reporter, pair } => delta_up_w(ml, reporter, pair, id),
    }
}

fn delta_up_y(ml: &MultilevelNetwork, a: usize, b: usize, id: &StatisticId) -> f64 {
    let lam = id.lambda;
    let y = ml.y();
    let da = y.row_count(a);
    let db = y.row_count(b);
    match id.stat {
        Statistic::EdgeA => 1.0,
        Statistic::Star2A => binom(da, 1) + binom(db, 1),
        Statistic::Star3A => binom(da, 2) + binom(db, 2),
        Statistic::Star4A => binom(da, 3) + binom(db, 3),
        Statistic::Star5A => binom(da, 4) + binom(db, 4),
        Statistic::TriangleA => y.row_and_count(a, b) as f64,
        Statistic::Cycle4A => y
            .row_ones(a)
            .into_iter()
            .map(|x| y.row_and_count(x, b) as f64)
            .sum(),
        Statistic::IsolatesA => -((da == 0) as i32 as f64) - ((db == 0) as i32 as f64),
        Statistic::IsolateEdgesA => {
            let mut delta = 0.0;
            if da == 0 && db == 0 {
                delta += 1.0;
            }
            for v in [a, b] {
                if y.row_count(v) == 1 {
                    let nbr = y.row_ones(v)[0];
                    if y.row_count(nbr) == 1 {
                        delta -= 1.0;
                    }
                }
            }
            delta
        }
        Statistic::AltStarA => {
            alt_star(lam, da + 1) - alt_star(lam, da) + alt_star(lam, db + 1) - alt_star(lam, db)
        }
        Statistic::AltTriangleA => {
            let mut delta = alt_partner(lam, y.row_and_count(a, b));
            for c in y.row_ones(a) {
                if y.get(b, c) {
                    let sp_ac = y.row_and_count(a, c);
                    let sp_bc = y.row_and_count(b, c);
                    delta += alt_partner(lam, sp_ac + 1) - alt_partner(lam, sp_ac);
                    delta += alt_partner(lam, sp_bc + 1) - alt_partner(lam, sp_bc);
                }
            }
            delta
        }
        Statistic::AltTwoPathA => {
            let mut delta = 0.0;
            for c in y.row_ones(b) {
                let sp = y.row_and_count(a, c);
                delta += alt_partner(lam, sp + 1) - alt_partner(lam, sp);
            }
            for c in y.row_ones(a) {
                let sp = y.row_and_count(b, c);
                delta += alt_partner(lam, sp + 1) - alt_partner(lam, sp);
            }
            delta
        }
        Statistic::AltEdgeTriangleA => {
            let mut delta = 0.0;
            // New triangles through the new edge, with post-toggle degrees
            // at both endpoints.
            for c in y.row_ones(a) {
                if y.get(b, c) {
                    let ext = (da + 1) + (db + 1) + y.row_count(c) - 6;
                    delta += alt_partner(lam, ext);
                }
            }
            // Existing triangles at either endpoint gain one attached edge.
            for v in [a, b] {
                let nbrs = y.row_ones(v);
                for (x, &p) in nbrs.iter().enumerate() {
                    for &q in &nbrs[x + 1..] {
                        if y.get(p, q) {
                            let ext = y.row_count(v) + y.row_count(p) + y.row_count(q) - 6;
                            delta += alt_partner(lam, ext + 1) - alt_partner(lam, ext);
                        }
                    }
                }
            }
            delta
        }
        Statistic::Star2AX => (ml.w().row_count(a) + ml.w().row_count(b)) as f64,
        Statistic::TriangleXAX => ml.w().row_and_count(a, b) as f64,
        Statistic::L3XAX => {
            (ml.w().row_count(a) * ml.w().row_count(b) - ml.w().row_and_count(a, b)) as f64
        }
        Statistic::AltTriangleXAX => alt_partner(lam, ml.w().row_and_count(a, b)),
        Statistic::ExtTriangleA => {
            let mut delta = 0usize;
            for c in y.row_ones(a) {
                if y.get(b, c) {
                    delta += ml.w().row_count(a) + ml.w().row_count(b) + ml.w().row_count(c);
                }
            }
            delta as f64
        }
        Statistic::Cycle4AXB => h_between(ml, a, b) as f64,
        Statistic::L3AXB => {
            let s = |v: usize| -> usize {
                ml.w()
                    .row_ones(v)
                    .into_iter()
                    .map(|r| ml.top().degree[r])
                    .sum()
            };
            (s(a) + s(b)) as f64
        }
        Statistic::AltStarAXB => {
            let mut delta = 0.0;
            for (v, d) in [(a, da), (b, db)] {
                let gain = alt_star(lam, d + 1) - alt_star(lam, d);
                for r in ml.w().row_ones(v) {
                    delta += gain * alt_star(lam, ml.top().degree[r]);
                }
            }
            delta
        }
        Statistic::AltCycle4AXB => alt_partner(lam, h_between(ml, a, b)),
        // Statistics that do not involve Y.
        Statistic::XEdge
        | Statistic::XStar2A
        | Statistic::XStar2B
        | Statistic::XStar3A
        | Statistic::XStar3B
        | Statistic::X3Path
        | Statistic::X4Cycle
        | Statistic::XAltStarA
        | Statistic::XAltStarB
        | Statistic::XAltCycleA
        | Statistic::XAltCycleB
        | Statistic::XEdgeCycleA
        | Statistic::XEdgeCycleB
        | Statistic::XAltEdgeCycleA
        | Statistic::XAltEdgeCycleB
        | Statistic::Star2BX
        | Statistic::TriangleXBX
        | Statistic::L3XBX
        | Statistic::AltTriangleXBX
        | Statistic::ExtTriangleB
        | Statistic::ExpertXEdgeB
        | Statistic::ExpertStar2BX
        | Statistic::XTriEdgeB
        | Statistic::XC4ChordB => 0.0,
    }
}

fn delta_up_w(ml: &MultilevelNetwork, i: usize, r: usize, id: &StatisticId) -> f64 {
    let lam = id.lambda;
    let w = ml.w();
    let wp = ml.w_by_pair();
    let row_i = w.row_count(i);
    let col_r = wp.row_count(r);
    match id.stat {
        Statistic::XEdge => 1.0,
        Statistic::XStar2A => binom(row_i, 1),
        Statistic::XStar3A => binom(row_i, 2),
        Statistic::XStar2B => binom(col_r, 1),
        Statistic::XStar3B => binom(col_r, 2),
        Statistic::X3Path => {
            let mut delta = row_i * col_r;
            for t in w.row_ones(i) {
                delta += wp.row_count(t) - 1;
            }
            for j in wp.row_ones(r) {
                delta += w.row_count(j) - 1;
            }
            delta as f64
        }
        Statistic::X4Cycle => wp
            .row_ones(r)
            .into_iter()
            .map(|j| w.row_and_count(i, j) as f64)
            .sum(),
        Statistic::XAltStarA => alt_star(lam, row_i + 1) - alt_star(lam, row_i),
        Statistic::XAltStarB => alt_star(lam, col_r + 1) - alt_star(lam, col_r),
        Statistic::XAltCycleA => {
            let mut delta = 0.0;
            for t in w.row_ones(i) {
                let a = wp.row_and_count(r, t);
                delta += alt_partner(lam, a + 1) - alt_partner(lam, a);
            }
            delta
        }
        Statistic::XAltCycleB => {
            let mut delta = 0.0;
            for j in wp.row_ones(r) {
                let b = w.row_and_count(i, j);
                delta += alt_partner(lam, b + 1) - alt_partner(lam, b);
            }
            delta
        }
        Statistic::XEdgeCycleA => {
            let n = ml.reporter_count();
            let marked: Vec<bool> = {
                let mut m = vec![false; n];
                for j in wp.row_ones(r) {
                    m[j] = true;
                }
                m
            };
            let mut delta = 0.0;
            for j in 0..n {
                if j == i {
                    continue;
                }
                let b_ij = w.row_and_count(i, j);
                for k in (j + 1)..n {
                    if k == i {
                        continue;
                    }
                    let b_jk = w.row_and_count(j, k);
                    if b_jk == 0 {
                        continue;
                    }
                    let b_ik = w.row_and_count(i, k);
                    let new = (b_ij + marked[j] as usize) * (b_ik + marked[k] as usize);
                    let old = b_ij * b_ik;
                    if new != old {
                        delta += ((new - old) * b_jk) as f64;
                    }
                }
            }
            delta
        }
        Statistic::XEdgeCycleB => {
            let e = ml.pair_count();
            let mut delta = 0.0;
            // Pairs {t, u} with at least one member affiliated to i; pairs
            // with both members visit this loop twice, covering both
            // single-increment terms of the product expansion.
            for u in w.row_ones(i) {
                for t in 0..e {
                    if t == r || t == u {
                        continue;
                    }
                    let a_tu = wp.row_and_count(t, u);
                    if a_tu == 0 {
                        continue;
                    }
                    delta += (wp.row_and_count(r, t) * a_tu) as f64;
                }
            }
            // Both members affiliated to i: the cross term.
            let ones = w.row_ones(i);
            for (x, &t) in ones.iter().enumerate() {
                for &u in &ones[x + 1..] {
                    delta += wp.row_and_count(t, u) as f64;
                }
            }
            delta
        }
        Statistic::XAltEdgeCycleA => {
            let mut delta = 0.0;
            for j in wp.row_ones(r) {
                let b = w.row_and_count(i, j);
                delta += alt_star(lam, b + 1) - alt_star(lam, b);
            }
            delta
        }
        Statistic::XAltEdgeCycleB => {
            let mut delta = 0.0;
            for t in w.row_ones(i) {
                let a = wp.row_and_count(r, t);
                delta += alt_star(lam, a + 1) - alt_star(lam, a);
            }
            delta
        }
        Statistic::Star2AX => ml.y().row_count(i) as f64,
        Statistic::TriangleXAX => ml.y().row_and_count_with(i, wp, r) as f64,
        Statistic::L3XAX => {
            let mut delta = 0isize;
            for k in ml.y().row_ones(i) {
                delta += w.row_count(k) as isize;
            }
            delta -= ml.y().row_and_count_with(i, wp, r) as isize;
            delta as f64
        }
        Statistic::AltTriangleXAX => {
            let mut delta = 0.0;
            for j in wp.row_ones(r) {
                if ml.y_tie(i, j) {
                    let b = w.row_and_count(i, j);
                    delta += alt_partner(lam, b + 1) - alt_partner(lam, b);
                }
            }
            delta
        }
        Statistic::Star2BX => ml.top().degree[r] as f64,
        Statistic::TriangleXBX => w.row_and_count_with(i, ml.q(), r) as f64,
        Statistic::L3XBX => {
            let mut delta = 0isize;
            for t in ml.q().row_ones(r) {
                delta += wp.row_count(t) as isize;
            }
            delta -= w.row_and_count_with(i, ml.q(), r) as isize;
            delta as f64
        }
        Statistic::AltTriangleXBX => {
            let mut delta = 0.0;
            for t in w.row_ones(i) {
                if ml.q().get(r, t) {
                    let a = wp.row_and_count(r, t);
                    delta += alt_partner(lam, a + 1) - alt_partner(lam, a);
                }
            }
            delta
        }
        Statistic::ExtTriangleB => ml.top().triangles[r] as f64,
        Statistic::ExtTriangleA => {
            let y = ml.y();
            let nbrs = y.row_ones(i);
            let mut tri = 0usize;
            for (x, &p) in nbrs.iter().enumerate() {
                for &q in &nbrs[x + 1..] {
                    if y.get(p, q) {
                        tri += 1;
                    }
                }
            }
            tri as f64
        }
        Statistic::Cycle4AXB => ml
            .y()
            .row_ones(i)
            .into_iter()
            .map(|k| w.row_and_count_with(k, ml.q(), r) as f64)
            .sum(),
        Statistic::L3AXB => (ml.y().row_count(i) * ml.top().degree[r]) as f64,
        Statistic::AltStarAXB => {
            alt_star(lam, ml.y().row_count(i)) * alt_star(lam, ml.top().degree[r])
        }
        Statistic::AltCycle4AXB => {
            let mut delta = 0.0;
            for k in ml.y().row_ones(i) {
                let h = h_between(ml, i, k);
                let grow = w.row_and_count_with(k, ml.q(), r);
                delta += alt_partner(lam, h + grow) - alt_partner(lam, h);
            }
            delta
        }
        Statistic::ExpertXEdgeB => ml.d()[r] as f64,
        Statistic::ExpertStar2BX => (ml.d()[r] as usize * ml.top().degree[r]) as f64,
        Statistic::XTriEdgeB => ml.top().coloured_closures[r] as f64,
        Statistic::XC4ChordB => w.row_and_count_with(i, &ml.top().chord_d, r) as f64,
        // Statistics that do not involve W.
        Statistic::EdgeA
        | Statistic::Star2A
        | Statistic::Star3A
        | Statistic::Star4A
        | Statistic::Star5A
        | Statistic::TriangleA
        | Statistic::Cycle4A
        | Statistic::IsolatesA
        | Statistic::IsolateEdgesA
        | Statistic::AltStarA
        | Statistic::AltTriangleA
        | Statistic::AltTwoPathA
        | Statistic::AltEdgeTriangleA => 0.0,
    }
}

/// z(C with cell = 1) - z(C with cell = 0), for every requested statistic.
pub fn change_statistic(
    ml: &MultilevelNetwork,
    toggle: Toggle,
    ids: &[StatisticId],
) -> Result<StatVector, StatError> {
    toggle.validate(ml)?;
    for id in ids {
        if id.stat.is_alternating() && id.lambda <= 1.0 {
            return Err(StatError::BadLambda(id.lambda));
        }
    }
    if toggle.is_set(ml) {
        let mut cleared = ml.clone();
        toggle.apply(&mut cleared);
        let entries = ids
            .iter()
            .map(|id| (*id, delta_up(&cleared, toggle, id)))
            .collect();
        Ok(StatVector::new(entries))
    } else {
        let entries = ids
            .iter()
            .map(|id| (*id, delta_up(ml, toggle, id)))
            .collect();
        Ok(StatVector::new(entries))
    }
}
