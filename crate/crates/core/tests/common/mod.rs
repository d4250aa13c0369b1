// SPDX-License-Identifier: Apache-2.0

//! Brute-force reference implementations on dense adjacency matrices.
#![allow(dead_code, clippy::needless_range_loop)]

use citenet::Graph;

#[derive(Debug, Clone)]
pub struct Dense {
    pub n: usize,
    pub adj: Vec<Vec<bool>>,
}

impl Dense {
    /// Graph on `n` nodes whose edges are the set bits of `mask` over the
    /// pairs `(i, j)`, `i < j`, in lexicographic order.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        let mut adj = vec![vec![false; n]; n];
        let mut bit = 0;
        for i in 0..n {
            for j in i + 1..n {
                if mask >> bit & 1 == 1 {
                    adj[i][j] = true;
                    adj[j][i] = true;
                }
                bit += 1;
            }
        }
        Self { n, adj }
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Self {
        let mut adj = vec![vec![false; n]; n];
        for &(i, j) in pairs {
            if i != j {
                adj[i][j] = true;
                adj[j][i] = true;
            }
        }
        Self { n, adj }
    }

    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::with_nodes(self.n);
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.adj[i][j] {
                    g.add_edge(i, j).unwrap();
                }
            }
        }
        g
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].iter().filter(|&&b| b).count()
    }

    pub fn edges(&self) -> usize {
        (0..self.n).map(|i| self.degree(i)).sum::<usize>() / 2
    }

    pub fn connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut reached = vec![false; self.n];
        let mut stack = vec![0];
        reached[0] = true;
        while let Some(v) = stack.pop() {
            for u in 0..self.n {
                if self.adj[v][u] && !reached[u] {
                    reached[u] = true;
                    stack.push(u);
                }
            }
        }
        reached.iter().all(|&r| r)
    }

    pub fn floyd_warshall(&self) -> Vec<Vec<Option<usize>>> {
        let n = self.n;
        let mut d = vec![vec![None; n]; n];
        for i in 0..n {
            d[i][i] = Some(0);
            for j in 0..n {
                if self.adj[i][j] {
                    d[i][j] = Some(1);
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                        if d[i][j].is_none_or(|c| a + b < c) {
                            d[i][j] = Some(a + b);
                        }
                    }
                }
            }
        }
        d
    }

    pub fn mean_distance(&self) -> Option<f64> {
        let d = self.floyd_warshall();
        let mut sum = 0;
        let mut pairs = 0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                sum += d[i][j]?;
                pairs += 1;
            }
        }
        (pairs > 0).then(|| sum as f64 / pairs as f64)
    }

    /// Pearson correlation over the materialized list of both orientations
    /// of every edge.
    pub fn mixing(&self) -> Option<f64> {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if self.adj[i][j] {
                    xs.push(self.degree(i) as f64);
                    ys.push(self.degree(j) as f64);
                }
            }
        }
        if xs.is_empty() {
            return None;
        }
        let len = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / len;
        let my = ys.iter().sum::<f64>() / len;
        let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let vx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let vy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
        (vx > 1e-12 && vy > 1e-12).then(|| cov / (vx * vy).sqrt())
    }

    /// Mean local clustering by enumerating neighbor pairs.
    pub fn clustering(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        let mut total = 0.0;
        for v in 0..self.n {
            let nb: Vec<usize> = (0..self.n).filter(|&u| self.adj[v][u]).collect();
            if nb.len() < 2 {
                continue;
            }
            let mut closed = 0;
            for a in 0..nb.len() {
                for b in a + 1..nb.len() {
                    if self.adj[nb[a]][nb[b]] {
                        closed += 1;
                    }
                }
            }
            total += closed as f64 / (nb.len() * (nb.len() - 1) / 2) as f64;
        }
        total / self.n as f64
    }

    /// `Q = (1/2m) Σ_ij [A_ij − k_i k_j / 2m] δ(c_i, c_j)` over all ordered
    /// node pairs.
    pub fn modularity(&self, labels: &[usize]) -> Option<f64> {
        let two_m = 2.0 * self.edges() as f64;
        if two_m == 0.0 {
            return None;
        }
        let mut q = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if labels[i] == labels[j] {
                    let a = if self.adj[i][j] { 1.0 } else { 0.0 };
                    q += a - (self.degree(i) * self.degree(j)) as f64 / two_m;
                }
            }
        }
        Some(q / two_m)
    }
}

/// Every connected labeled graph on `n` nodes.
pub fn connected_graphs(n: usize) -> impl Iterator<Item = Dense> {
    let pairs = n * n.saturating_sub(1) / 2;
    (0..1u64 << pairs)
        .map(move |mask| Dense::from_mask(n, mask))
        .filter(Dense::connected)
}
