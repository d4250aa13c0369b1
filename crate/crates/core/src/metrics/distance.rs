// SPDX-License-Identifier: Apache-2.0

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use crate::graph::{Graph, NodeId};
use crate::stochastic::SeededRng;

use super::MetricError;

/// Graphs up to this size get exact all-source BFS.
pub const EXACT_DISTANCE_LIMIT: usize = 50_000;
/// Number of BFS sources used above [`EXACT_DISTANCE_LIMIT`].
pub const SAMPLED_SOURCES: usize = 1000;
const SAMPLING_SEED: u64 = 0x5EED_D157;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanDistance {
    pub value: f64,
    /// Standard error of the estimate; `None` when computed exactly.
    pub std_error: Option<f64>,
    pub sources: usize,
}

/// Distances from `source` summed over all other nodes, plus the number of
/// nodes reached (including `source`).
fn bfs_sum(
    g: &Graph,
    source: NodeId,
    dist: &mut [u32],
    queue: &mut VecDeque<NodeId>,
) -> (u64, usize) {
    dist.fill(u32::MAX);
    dist[source] = 0;
    queue.clear();
    queue.push_back(source);
    let (mut total, mut reached) = (0u64, 0usize);
    while let Some(v) = queue.pop_front() {
        reached += 1;
        total += dist[v] as u64;
        let next = dist[v] + 1;
        for &u in g.adj(v) {
            if dist[u] == u32::MAX {
                dist[u] = next;
                queue.push_back(u);
            }
        }
    }
    (total, reached)
}

fn per_source(g: &Graph, sources: &[NodeId]) -> Result<Vec<u64>, MetricError> {
    let n = g.node_count();
    sources
        .par_iter()
        .map_init(
            || (vec![u32::MAX; n], VecDeque::new()),
            |(dist, queue), &s| {
                let (total, reached) = bfs_sum(g, s, dist, queue);
                if reached == n {
                    Ok(total)
                } else {
                    Err(MetricError::Disconnected)
                }
            },
        )
        .collect()
}

/// Average shortest-path length over unordered node pairs. Exact up to
/// [`EXACT_DISTANCE_LIMIT`] nodes, sampled from [`SAMPLED_SOURCES`]
/// uniformly chosen sources above that.
pub fn mean_distance_summary(g: &Graph) -> Result<MeanDistance, MetricError> {
    let n = g.node_count();
    if n < 2 {
        return Err(MetricError::Undefined(
            "mean distance needs at least two nodes",
        ));
    }
    if n <= EXACT_DISTANCE_LIMIT {
        let sources: Vec<NodeId> = g.nodes().collect();
        let total: u64 = per_source(g, &sources)?.into_iter().sum();
        let pairs = n as f64 * (n as f64 - 1.0);
        return Ok(MeanDistance {
            value: total as f64 / pairs,
            std_error: None,
            sources: n,
        });
    }
    if !g.is_connected() {
        return Err(MetricError::Disconnected);
    }
    let mut rng = SeededRng::new(SAMPLING_SEED);
    let all: Vec<NodeId> = g.nodes().collect();
    let sources = rng.sample_subset(&all, SAMPLED_SOURCES);
    let means: Vec<f64> = per_source(g, &sources)?
        .into_iter()
        .map(|t| t as f64 / (n - 1) as f64)
        .collect();
    let k = means.len() as f64;
    let mean = means.iter().sum::<f64>() / k;
    let var = means.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
    Ok(MeanDistance {
        value: mean,
        std_error: Some((var / k).sqrt()),
        sources: means.len(),
    })
}

pub fn mean_distance(g: &Graph) -> Result<f64, MetricError> {
    mean_distance_summary(g).map(|d| d.value)
}
