// SPDX-License-Identifier: Apache-2.0

//! Modularity and its multi-level (Louvain) maximization.

use rand::seq::SliceRandom;

use crate::graph::{Graph, NodeId};
use crate::stochastic::SeededRng;

use super::MetricError;

/// Assignment of every node to exactly one community, ids dense in `0..k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<usize>,
    communities: usize,
}

impl Partition {
    /// Relabels arbitrary community labels to dense ids in order of first
    /// appearance.
    pub fn from_labels<L: Eq + std::hash::Hash + Copy>(labels: &[L]) -> Self {
        let mut ids = std::collections::HashMap::new();
        let assignment = labels
            .iter()
            .map(|l| {
                let next = ids.len();
                *ids.entry(*l).or_insert(next)
            })
            .collect();
        Self {
            assignment,
            communities: ids.len(),
        }
    }

    pub fn single(n: usize) -> Self {
        Self::from_labels(&vec![0u8; n])
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            assignment: (0..n).collect(),
            communities: n,
        }
    }

    pub fn community_of(&self, v: NodeId) -> usize {
        self.assignment[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn community_count(&self) -> usize {
        self.communities
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }
}

/// `Q = Σ_c [m_c / m − (d_c / 2m)²]`, with `m_c` the edges inside community
/// `c` and `d_c` its total degree.
pub fn modularity(g: &Graph, part: &Partition) -> Result<f64, MetricError> {
    let m = g.edge_count();
    if m == 0 {
        return Err(MetricError::NoEdges);
    }
    if part.len() != g.node_count() {
        return Err(MetricError::PartitionSize {
            nodes: g.node_count(),
            assigned: part.len(),
        });
    }
    let k = part.community_count();
    let mut inside = vec![0usize; k];
    let mut degree = vec![0usize; k];
    for v in g.nodes() {
        degree[part.community_of(v)] += g.deg(v);
    }
    for (i, j) in g.edges() {
        if part.community_of(i) == part.community_of(j) {
            inside[part.community_of(i)] += 1;
        }
    }
    let m = m as f64;
    Ok(inside
        .iter()
        .zip(&degree)
        .map(|(&mc, &dc)| mc as f64 / m - (dc as f64 / (2.0 * m)).powi(2))
        .sum())
}

/// Weighted graph used between aggregation levels. `internal[i]` is the
/// weight of edges collapsed inside super-node `i`, each counted once.
struct Level {
    adj: Vec<Vec<(usize, f64)>>,
    internal: Vec<f64>,
    strength: Vec<f64>,
}

impl Level {
    fn from_graph(g: &Graph) -> Self {
        let adj: Vec<Vec<(usize, f64)>> = g
            .nodes()
            .map(|v| g.adj(v).iter().map(|&u| (u, 1.0)).collect())
            .collect();
        let strength = g.nodes().map(|v| g.deg(v) as f64).collect();
        Self {
            adj,
            internal: vec![0.0; g.node_count()],
            strength,
        }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    /// Moves single nodes between neighboring communities until no move
    /// increases modularity. Returns the community of every node and
    /// whether anything moved.
    fn local_moves(&self, two_m: f64, rng: &mut SeededRng) -> (Vec<usize>, bool) {
        let n = self.len();
        let mut comm: Vec<usize> = (0..n).collect();
        let mut total: Vec<f64> = self.strength.clone();
        let mut link_weight = vec![0.0; n];
        let mut seen = vec![false; n];
        let mut touched: Vec<usize> = Vec::new();
        let mut order: Vec<usize> = (0..n).collect();
        let mut moved_any = false;

        for _pass in 0..MAX_PASSES {
            order.shuffle(rng);
            let mut moved = false;
            for &v in &order {
                let own = comm[v];
                let k_v = self.strength[v];
                for &c in &touched {
                    link_weight[c] = 0.0;
                    seen[c] = false;
                }
                touched.clear();
                seen[own] = true;
                touched.push(own);
                for &(u, w) in &self.adj[v] {
                    let c = comm[u];
                    if !seen[c] {
                        seen[c] = true;
                        touched.push(c);
                    }
                    link_weight[c] += w;
                }

                total[own] -= k_v;
                // gain of joining c, up to a constant shared by all c
                let gain = |c: usize| link_weight[c] - total[c] * k_v / two_m;
                let mut best = own;
                let mut best_gain = gain(own);
                for &c in &touched {
                    let g = gain(c);
                    if g > best_gain + GAIN_EPS {
                        best = c;
                        best_gain = g;
                    }
                }
                total[best] += k_v;
                if best != own {
                    comm[v] = best;
                    moved = true;
                    moved_any = true;
                }
            }
            if !moved {
                break;
            }
        }
        (comm, moved_any)
    }

    /// Collapses communities into super-nodes. `comm` must be dense.
    fn aggregate(&self, comm: &[usize], communities: usize) -> Level {
        let mut internal = vec![0.0; communities];
        let mut strength = vec![0.0; communities];
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); communities];
        for v in 0..self.len() {
            members[comm[v]].push(v);
            internal[comm[v]] += self.internal[v];
            strength[comm[v]] += self.strength[v];
        }
        let mut adj = vec![Vec::new(); communities];
        let mut weight = vec![0.0; communities];
        let mut touched = Vec::new();
        for c in 0..communities {
            for &v in &members[c] {
                for &(u, w) in &self.adj[v] {
                    let d = comm[u];
                    if d == c {
                        // seen from both ends
                        internal[c] += 0.5 * w;
                    } else {
                        if weight[d] == 0.0 {
                            touched.push(d);
                        }
                        weight[d] += w;
                    }
                }
            }
            for &d in &touched {
                adj[c].push((d, weight[d]));
                weight[d] = 0.0;
            }
            touched.clear();
        }
        Level {
            adj,
            internal,
            strength,
        }
    }
}

const MAX_PASSES: usize = 10_000;
const GAIN_EPS: f64 = 1e-12;

fn densify(comm: &mut [usize]) -> usize {
    let mut map = vec![usize::MAX; comm.len()];
    let mut next = 0;
    for c in comm.iter_mut() {
        if map[*c] == usize::MAX {
            map[*c] = next;
            next += 1;
        }
        *c = map[*c];
    }
    next
}

/// Multi-level modularity maximization: greedy local moves, then
/// aggregation of each community into a super-node, repeated until a level
/// makes no move. Node visit order is shuffled each pass with `rng`; ties
/// keep the node in its current community.
pub fn louvain(g: &Graph, rng: &mut SeededRng) -> Result<Partition, MetricError> {
    if g.edge_count() == 0 {
        return Err(MetricError::NoEdges);
    }
    let two_m = 2.0 * g.edge_count() as f64;
    let mut level = Level::from_graph(g);
    let mut membership: Vec<usize> = g.nodes().collect();
    loop {
        let (mut comm, moved) = level.local_moves(two_m, rng);
        if !moved {
            break;
        }
        let communities = densify(&mut comm);
        for c in membership.iter_mut() {
            *c = comm[*c];
        }
        level = level.aggregate(&comm, communities);
    }
    Ok(Partition::from_labels(&membership))
}
