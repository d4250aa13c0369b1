// SPDX-License-Identifier: Apache-2.0

use crate::graph::{Graph, NodeId};

/// Triangles through each node, counted once per triangle.
///
/// Orients every edge from lower to higher (degree, id) rank, so each
/// triangle is found exactly once from its lowest-ranked corner.
pub fn triangles_per_node(g: &Graph) -> Vec<u64> {
    let n = g.node_count();
    let rank = |v: NodeId| (g.deg(v), v);
    let forward: Vec<Vec<NodeId>> = g
        .nodes()
        .map(|v| {
            g.adj(v)
                .iter()
                .copied()
                .filter(|&u| rank(u) > rank(v))
                .collect()
        })
        .collect();
    let mut mark = vec![usize::MAX; n];
    let mut tri = vec![0u64; n];
    for v in 0..n {
        for &u in &forward[v] {
            mark[u] = v;
        }
        for &u in &forward[v] {
            for &w in &forward[u] {
                if mark[w] == v {
                    tri[v] += 1;
                    tri[u] += 1;
                    tri[w] += 1;
                }
            }
        }
    }
    tri
}

/// Mean local clustering coefficient; nodes of degree below two count as 0.
pub fn clustering(g: &Graph) -> f64 {
    let n = g.node_count();
    if n == 0 {
        return 0.0;
    }
    let tri = triangles_per_node(g);
    let total: f64 = g
        .nodes()
        .map(|v| {
            let k = g.deg(v) as f64;
            if k < 2.0 {
                0.0
            } else {
                2.0 * tri[v] as f64 / (k * (k - 1.0))
            }
        })
        .sum();
    total / n as f64
}

/// Global transitivity: three times the triangles over connected triples.
pub fn transitivity(g: &Graph) -> f64 {
    let tri: u64 = triangles_per_node(g).iter().sum();
    let triples: u64 = g
        .nodes()
        .map(|v| {
            let k = g.deg(v) as u64;
            k * k.saturating_sub(1) / 2
        })
        .sum();
    if triples == 0 {
        0.0
    } else {
        // tri already counts each triangle three times
        tri as f64 / triples as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn reference_values() {
        assert!((clustering(&complete(3)) - 1.0).abs() < 1e-12);
        assert_eq!(clustering(&star(4)), 0.0);
        // K4 minus edge (2, 3): nodes 2, 3 have C = 1 (their two neighbors are
        // linked), nodes 0, 1 have two of three neighbor pairs linked
        let g = from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]);
        assert!((clustering(&g) - (1.0 + 1.0 + 2.0 / 3.0 + 2.0 / 3.0) / 4.0).abs() < 1e-12);
        assert!((transitivity(&g) - 0.75).abs() < 1e-12);
        assert_eq!(clustering(&Graph::new()), 0.0);
    }

    #[test]
    fn triangle_counts_on_k5() {
        // each node of K5 lies on C(4,2) = 6 triangles
        assert!(triangles_per_node(&complete(5)).iter().all(|&t| t == 6));
    }
}
