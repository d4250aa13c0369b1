// SPDX-License-Identifier: Apache-2.0

use crate::graph::Graph;

use super::MetricError;

/// Degree mixing coefficient: Pearson correlation of the degrees at both
/// ends of every edge, each edge counted in both orientations.
pub fn degree_mixing(g: &Graph) -> Result<f64, MetricError> {
    let m = g.edge_count();
    if m == 0 {
        return Err(MetricError::NoEdges);
    }
    // With both orientations the two marginals coincide, so the correlation
    // reduces to sums over edges.
    let (mut s_prod, mut s_sum, mut s_sq) = (0.0, 0.0, 0.0);
    for (i, j) in g.edges() {
        let (a, b) = (g.deg(i) as f64, g.deg(j) as f64);
        s_prod += a * b;
        s_sum += 0.5 * (a + b);
        s_sq += 0.5 * (a * a + b * b);
    }
    let m = m as f64;
    let mean = s_sum / m;
    let var = s_sq / m - mean * mean;
    let cov = s_prod / m - mean * mean;
    if var <= 1e-12 * s_sq / m {
        return Err(MetricError::Undefined(
            "degree mixing of a graph with constant endpoint degrees",
        ));
    }
    Ok((cov / var).clamp(-1.0, 1.0))
}
