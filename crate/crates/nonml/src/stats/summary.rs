//! Degree-distribution and clustering summaries reported alongside the
//! configuration statistics in goodness-of-fit tables.
//!
//! Undefined ratios (0/0) are reported as NaN, never silently zeroed.

use crate::multilevel::MultilevelNetwork;
use crate::stats::engine::binom;

/// Sample standard deviation (n - 1 denominator); NaN when n < 2.
pub fn sample_sd(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return f64::NAN;
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
    (ss / (n as f64 - 1.0)).sqrt()
}

/// Adjusted Fisher-Pearson sample skewness; NaN when n < 3 or variance is 0.
pub fn sample_skewness(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    if xs.len() < 3 {
        return f64::NAN;
    }
    let mean = xs.iter().sum::<f64>() / n;
    let m2 = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m3 = xs.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / n;
    if m2 == 0.0 {
        return f64::NAN;
    }
    let g1 = m3 / m2.powf(1.5);
    g1 * (n * (n - 1.0)).sqrt() / (n - 2.0)
}

/// One named summary row.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub name: String,
    pub value: f64,
}

/// One-mode clustering: 3 * triangles / two-stars, NaN on 0/0.
pub fn clustering_ratio(triangles: f64, two_stars: f64) -> f64 {
    if two_stars == 0.0 {
        f64::NAN
    } else {
        3.0 * triangles / two_stars
    }
}

/// Two-mode clustering: 4 * four-cycles / three-paths, NaN on 0/0.
pub fn two_mode_clustering_ratio(four_cycles: f64, three_paths: f64) -> f64 {
    if three_paths == 0.0 {
        f64::NAN
    } else {
        4.0 * four_cycles / three_paths
    }
}

fn clustering(triangles: f64, two_stars: f64) -> f64 {
    clustering_ratio(triangles, two_stars)
}

/// Degree spreads and clustering coefficients for all four degree sequences.
pub fn summary_stats(ml: &MultilevelNetwork) -> Vec<SummaryRow> {
    let n = ml.reporter_count();
    let e = ml.pair_count();
    let deg_a: Vec<f64> = (0..n).map(|i| ml.y().row_count(i) as f64).collect();
    let deg_xa: Vec<f64> = (0..n).map(|i| ml.w().row_count(i) as f64).collect();
    let deg_xb: Vec<f64> = (0..e).map(|r| ml.w_by_pair().row_count(r) as f64).collect();
    let deg_b: Vec<f64> = ml.top().degree.iter().map(|&d| d as f64).collect();

    // One-mode clustering on Y.
    let mut tri_a = 0usize;
    let mut star2_a = 0.0;
    for i in 0..n {
        star2_a += binom(ml.y().row_count(i), 2);
        for j in (i + 1)..n {
            if ml.y_tie(i, j) {
                tri_a += ml.y().row_and_count(i, j);
            }
        }
    }
    let tri_a = (tri_a / 3) as f64;

    // Two-mode clustering on W: closed 4-cycles over 3-paths.
    let mut x4 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            x4 += binom(ml.w().row_and_count(i, j), 2);
        }
    }
    let mut x3path = 0.0;
    for i in 0..n {
        let row = ml.w().row_count(i);
        if row == 0 {
            continue;
        }
        for r in ml.w().row_ones(i) {
            x3path += ((row - 1) * (ml.w_by_pair().row_count(r) - 1)) as f64;
        }
    }
    let clustering_x = two_mode_clustering_ratio(x4, x3path);

    // One-mode clustering on the fixed top-level graph.
    let mut tri_b = 0usize;
    let mut star2_b = 0.0;
    for r in 0..e {
        star2_b += binom(ml.top().degree[r], 2);
        for t in ml.q().row_ones(r) {
            if t > r {
                tri_b += ml.q().row_and_count(r, t);
            }
        }
    }
    let tri_b = (tri_b / 3) as f64;

    vec![
        SummaryRow {
            name: "stddev degreeA".to_string(),
            value: sample_sd(&deg_a),
        },
        SummaryRow {
            name: "skew degreeA".to_string(),
            value: sample_skewness(&deg_a),
        },
        SummaryRow {
            name: "clusteringA".to_string(),
            value: clustering(tri_a, star2_a),
        },
        SummaryRow {
            name: "stddev degreeX A".to_string(),
            value: sample_sd(&deg_xa),
        },
        SummaryRow {
            name: "skew degreeX A".to_string(),
            value: sample_skewness(&deg_xa),
        },
        SummaryRow {
            name: "stddev degreeX B".to_string(),
            value: sample_sd(&deg_xb),
        },
        SummaryRow {
            name: "skew degreeX B".to_string(),
            value: sample_skewness(&deg_xb),
        },
        SummaryRow {
            name: "clusteringX".to_string(),
            value: clustering_x,
        },
        SummaryRow {
            name: "stddev degreeB".to_string(),
            value: sample_sd(&deg_b),
        },
        SummaryRow {
            name: "skew degreeB".to_string(),
            value: sample_skewness(&deg_b),
        },
        SummaryRow {
            name: "clusteringB".to_string(),
            value: clustering(tri_b, star2_b),
        },
        SummaryRow {
            name: "IsolatesXA".to_string(),
            value: deg_xa.iter().filter(|&&d| d == 0.0).count() as f64,
        },
        SummaryRow {
            name: "IsolatesXB".to_string(),
            value: deg_xb.iter().filter(|&&d| d == 0.0).count() as f64,
        },
    ]
}
