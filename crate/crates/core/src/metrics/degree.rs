// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use serde::Serialize;

use crate::graph::Graph;

use super::MetricError;

/// Smallest tail accepted by the power-law fit.
pub const MIN_TAIL: usize = 10;

pub fn degree_histogram(g: &Graph) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for v in g.nodes() {
        *hist.entry(g.deg(v)).or_insert(0) += 1;
    }
    hist
}

/// Average degree of each node's neighbors; `None` for isolated nodes.
pub fn neighbor_degrees(g: &Graph) -> Vec<Option<f64>> {
    g.nodes()
        .map(|v| {
            let k = g.deg(v);
            (k > 0).then(|| g.adj(v).iter().map(|&u| g.deg(u) as f64).sum::<f64>() / k as f64)
        })
        .collect()
}

/// Mean over non-isolated nodes of their average neighbor degree.
pub fn mean_neighbor_degree(g: &Graph) -> Option<f64> {
    let values: Vec<f64> = neighbor_degrees(g).into_iter().flatten().collect();
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bin {
    /// Mean own degree of the nodes in the bin.
    pub x: f64,
    /// Mean neighbor degree of the nodes in the bin.
    pub y: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinnedSeries {
    pub bins: Vec<Bin>,
    /// Isolated nodes, which have no neighbor degree.
    pub excluded: usize,
}

/// Neighbor degree against own degree, nodes sorted by degree and split into
/// `bins` contiguous bins of equal count (sizes differ by at most one).
pub fn mean_neighbor_degree_curve(g: &Graph, bins: usize) -> Result<BinnedSeries, MetricError> {
    if bins == 0 {
        return Err(MetricError::Undefined(
            "neighbor degree curve needs at least one bin",
        ));
    }
    let knn = neighbor_degrees(g);
    let mut points: Vec<(usize, usize, f64)> = g
        .nodes()
        .filter_map(|v| knn[v].map(|y| (g.deg(v), v, y)))
        .collect();
    let excluded = g.node_count() - points.len();
    points.sort_by_key(|a| (a.0, a.1));
    let total = points.len();
    let bins = bins.min(total);
    let mut out = Vec::with_capacity(bins);
    for b in 0..bins {
        let chunk = &points[b * total / bins..(b + 1) * total / bins];
        let count = chunk.len() as f64;
        out.push(Bin {
            x: chunk.iter().map(|p| p.0 as f64).sum::<f64>() / count,
            y: chunk.iter().map(|p| p.2).sum::<f64>() / count,
            count: chunk.len(),
        });
    }
    Ok(BinnedSeries {
        bins: out,
        excluded,
    })
}

/// Hurwitz zeta `ζ(s, a) = Σ_{k≥0} (k + a)^{-s}` for `s > 1`, `a > 0`, by
/// Euler–Maclaurin summation.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    // B_2j / (2j)!
    const COEFFS: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30_240.0,
        -1.0 / 1_209_600.0,
        1.0 / 47_900_160.0,
        -691.0 / 1_307_674_368_000.0,
        1.0 / 74_724_249_600.0,
        -3617.0 / 10_670_622_842_880_000.0,
    ];
    const DIRECT: usize = 12;
    let head: f64 = (0..DIRECT).map(|k| (k as f64 + a).powf(-s)).sum();
    let x = a + DIRECT as f64;
    let mut tail = x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    // rising factorial s (s+1) ... (s+2j-2) times x^{-s-2j+1}
    let mut factor = s * x.powf(-s - 1.0);
    for (j, c) in COEFFS.iter().enumerate() {
        tail += c * factor;
        let j = j as f64;
        factor *= (s + 2.0 * j + 1.0) * (s + 2.0 * j + 2.0) / (x * x);
    }
    head + tail
}

fn tail_of(degrees: &[u64], k_min: u64) -> Result<Vec<f64>, MetricError> {
    if k_min == 0 {
        return Err(MetricError::Undefined("power-law fit needs k_min >= 1"));
    }
    let tail: Vec<f64> = degrees
        .iter()
        .filter(|&&k| k >= k_min)
        .map(|&k| k as f64)
        .collect();
    if tail.len() < MIN_TAIL {
        return Err(MetricError::InsufficientTail {
            found: tail.len(),
            needed: MIN_TAIL,
        });
    }
    Ok(tail)
}

/// Continuous approximation to the discrete maximum-likelihood exponent,
/// `1 + N / Σ ln(k / (k_min − ½))`. Biased low for small `k_min`.
pub fn power_law_alpha_approx(degrees: &[u64], k_min: u64) -> Result<f64, MetricError> {
    let tail = tail_of(degrees, k_min)?;
    let shift = k_min as f64 - 0.5;
    let s: f64 = tail.iter().map(|k| (k / shift).ln()).sum();
    Ok(1.0 + tail.len() as f64 / s)
}

/// Exact discrete maximum-likelihood exponent for `P(k) ∝ k^{-α}`,
/// `k ≥ k_min`: maximizes `−α Σ ln k − N ln ζ(α, k_min)`, which is concave
/// in `α`, by golden-section search.
pub fn fit_power_law(degrees: &[u64], k_min: u64) -> Result<f64, MetricError> {
    let tail = tail_of(degrees, k_min)?;
    let n = tail.len() as f64;
    let log_sum: f64 = tail.iter().map(|k| k.ln()).sum();
    if tail.iter().all(|&k| k == k_min as f64) {
        return Err(MetricError::Undefined(
            "power-law fit of a tail with a single degree value",
        ));
    }
    let a = k_min as f64;
    let neg_ll = |alpha: f64| alpha * log_sum + n * hurwitz_zeta(alpha, a).ln();

    let approx = power_law_alpha_approx(degrees, k_min)?;
    let (mut lo, mut hi) = (1.0 + 1e-9, (2.0 * approx).max(approx + 2.0).min(50.0));
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (neg_ll(x1), neg_ll(x2));
    while hi - lo > 1e-10 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = neg_ll(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = neg_ll(x2);
        }
    }
    Ok(0.5 * (lo + hi))
}

/// A power-law fit together with the lower cutoff it was fitted above.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub alpha: f64,
    pub k_min: u64,
    pub tail: usize,
    /// Kolmogorov–Smirnov distance between the tail and the fitted law.
    pub ks: f64,
}

/// Largest gap between the empirical CDF of `tail` (sorted, all `≥ k_min`)
/// and the discrete power-law CDF.
fn ks_distance(tail: &[u64], alpha: f64, k_min: u64) -> f64 {
    let norm = hurwitz_zeta(alpha, k_min as f64);
    let n = tail.len() as f64;
    let mut model = 0.0;
    let mut idx = 0;
    let mut worst: f64 = 0.0;
    for k in k_min..=*tail.last().expect("non-empty tail") {
        model += (k as f64).powf(-alpha) / norm;
        while idx < tail.len() && tail[idx] <= k {
            idx += 1;
        }
        worst = worst.max((idx as f64 / n - model).abs());
    }
    worst
}

/// Fits the exponent above every candidate cutoff leaving at least
/// `min_tail` observations and keeps the cutoff whose fit has the smallest
/// Kolmogorov–Smirnov distance.
pub fn fit_power_law_scan(degrees: &[u64], min_tail: usize) -> Result<PowerLawFit, MetricError> {
    let min_tail = min_tail.max(MIN_TAIL);
    let mut sorted: Vec<u64> = degrees.iter().copied().filter(|&k| k > 0).collect();
    sorted.sort_unstable();
    let mut candidates: Vec<u64> = sorted.clone();
    candidates.dedup();

    let mut best: Option<PowerLawFit> = None;
    for k_min in candidates {
        let start = sorted.partition_point(|&k| k < k_min);
        let tail = &sorted[start..];
        if tail.len() < min_tail {
            break;
        }
        let Ok(alpha) = fit_power_law(tail, k_min) else {
            continue;
        };
        let ks = ks_distance(tail, alpha, k_min);
        if best.is_none_or(|b| ks < b.ks) {
            best = Some(PowerLawFit {
                alpha,
                k_min,
                tail: tail.len(),
                ks,
            });
        }
    }
    best.ok_or(MetricError::InsufficientTail {
        found: sorted.len(),
        needed: min_tail,
    })
}

/// Power-law exponent of the degree distribution of `g`.
pub fn power_law_alpha(g: &Graph, k_min: u64) -> Result<f64, MetricError> {
    let degrees: Vec<u64> = g.nodes().map(|v| g.deg(v) as u64).collect();
    fit_power_law(&degrees, k_min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::stochastic::SeededRng;
    use rand::Rng;

    #[test]
    fn histograms() {
        assert_eq!(degree_histogram(&complete(3)), BTreeMap::from([(2, 3)]));
        assert_eq!(degree_histogram(&star(3)), BTreeMap::from([(1, 3), (3, 1)]));
        assert_eq!(degree_histogram(&path(3)), BTreeMap::from([(1, 2), (2, 1)]));
    }

    #[test]
    fn star_curve_in_one_bin() {
        let s = mean_neighbor_degree_curve(&star(3), 1).unwrap();
        assert_eq!(s.bins.len(), 1);
        assert_eq!(s.bins[0].count, 4);
        assert!((s.bins[0].x - 1.5).abs() < 1e-12);
        assert!((s.bins[0].y - 2.5).abs() < 1e-12);
        let two = mean_neighbor_degree_curve(&star(3), 2).unwrap();
        assert_eq!(two.bins.iter().map(|b| b.count).sum::<usize>(), 4);
        assert!((two.bins[0].y - 3.0).abs() < 1e-12);
        assert!((two.bins[1].x - 2.0).abs() < 1e-12);
    }

    #[test]
    fn regular_curve_is_flat() {
        let s = mean_neighbor_degree_curve(&cycle(12), 4).unwrap();
        assert!(s
            .bins
            .iter()
            .all(|b| b.x == 2.0 && b.y == 2.0 && b.count == 3));
    }

    #[test]
    fn curve_excludes_isolated_nodes() {
        let g = from_edges(5, &[(0, 1), (1, 2)]);
        let s = mean_neighbor_degree_curve(&g, 10).unwrap();
        assert_eq!(s.excluded, 2);
        assert_eq!(s.bins.len(), 3);
        assert_eq!(s.bins.iter().map(|b| b.count).sum::<usize>(), 3);
        assert!(mean_neighbor_degree_curve(&g, 0).is_err());
    }

    #[test]
    fn zeta_reference_values() {
        let pi = std::f64::consts::PI;
        assert!((hurwitz_zeta(2.0, 1.0) - pi * pi / 6.0).abs() < 1e-13);
        assert!((hurwitz_zeta(4.0, 1.0) - pi.powi(4) / 90.0).abs() < 1e-13);
        // ζ(2, 2) = π²/6 − 1
        assert!((hurwitz_zeta(2.0, 2.0) - (pi * pi / 6.0 - 1.0)).abs() < 1e-13);
        // brute force with an integral tail correction
        let s = 2.5;
        let direct: f64 = (0..200_000).map(|k| (k as f64 + 3.0).powf(-s)).sum::<f64>()
            + (200_003.0_f64 - 0.5).powf(1.0 - s) / (s - 1.0);
        assert!((hurwitz_zeta(s, 3.0) - direct).abs() < 1e-12);
    }

    /// Exact inverse-CDF sampler for `P(k) ∝ k^{-α}`, `k ≥ k_min`, truncated
    /// where the remaining mass is negligible.
    pub(crate) fn power_law_sample(alpha: f64, k_min: u64, draws: usize, seed: u64) -> Vec<u64> {
        let cutoff = 2_000_000u64;
        let mut cdf = Vec::with_capacity((cutoff - k_min) as usize);
        let mut acc = 0.0;
        for k in k_min..cutoff {
            acc += (k as f64).powf(-alpha);
            cdf.push(acc);
        }
        let mut rng = SeededRng::new(seed);
        (0..draws)
            .map(|_| {
                let u: f64 = rng.random::<f64>() * acc;
                k_min + cdf.partition_point(|&c| c < u) as u64
            })
            .collect()
    }

    #[test]
    fn fit_recovers_synthetic_exponent() {
        let sample = power_law_sample(2.5, 2, 100_000, 21);
        let alpha = fit_power_law(&sample, 2).unwrap();
        assert!((alpha - 2.5).abs() < 0.05, "{alpha}");
        // the continuous approximation is visibly biased at k_min = 2
        let approx = power_law_alpha_approx(&sample, 2).unwrap();
        assert!(approx < 2.45, "{approx}");
    }

    #[test]
    fn fit_recovers_steeper_exponent_at_larger_k_min() {
        let sample = power_law_sample(3.3, 4, 50_000, 5);
        let alpha = fit_power_law(&sample, 4).unwrap();
        assert!((alpha - 3.3).abs() < 0.06, "{alpha}");
    }

    #[test]
    fn scan_finds_the_cutoff_of_a_contaminated_sample() {
        // uniform noise on 1..20 below an exact alpha = 2.5 tail from 20 up
        let mut sample = power_law_sample(2.5, 20, 20_000, 8);
        let mut rng = SeededRng::new(9);
        sample.extend((0..20_000).map(|_| rng.random_range(1..20u64)));
        let fit = fit_power_law_scan(&sample, 100).unwrap();
        assert!((fit.k_min as i64 - 20).abs() <= 3, "{fit:?}");
        assert!((fit.alpha - 2.5).abs() < 0.1, "{fit:?}");
        assert!(fit.ks < 0.02);
        // fitting the whole sample from k_min = 1 is far off
        assert!(fit_power_law(&sample, 1).unwrap() < 2.0);
    }

    #[test]
    fn scan_on_pure_power_law_keeps_a_low_cutoff() {
        let sample = power_law_sample(2.5, 1, 50_000, 10);
        let fit = fit_power_law_scan(&sample, 100).unwrap();
        assert!((fit.alpha - 2.5).abs() < 0.1, "{fit:?}");
        assert!(fit_power_law_scan(&sample[..5], 100).is_err());
    }

    #[test]
    fn fit_needs_a_tail() {
        let err = power_law_alpha(&star(20), 2).unwrap_err();
        assert_eq!(
            err,
            MetricError::InsufficientTail {
                found: 1,
                needed: MIN_TAIL
            }
        );
        assert!(fit_power_law(&[3; 50], 3).is_err());
        assert!(fit_power_law(&[3; 50], 0).is_err());
    }
}
