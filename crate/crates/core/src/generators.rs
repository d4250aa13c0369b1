// SPDX-License-Identifier: Apache-2.0

//! Growth models driven by a burning (forest-fire) exploration.
//!
//! Every new node picks a uniformly random ambassador and explores outward:
//! from each ambassador it burns a geometric number of not-yet-burned
//! neighbors, which become ambassadors in turn (breadth-first). The models
//! differ only in which nodes the newcomer links to:
//!
//! | model | links formed                                                     |
//! |-------|------------------------------------------------------------------|
//! | FF    | every burned node                                                |
//! | BTF   | each burned node independently with probability `q`              |
//! | CIT   | a geometric number (mean `q/(1-q)`) of each ambassador's neighbors |
//! | CPY   | as CIT, plus every ambassador                                     |
//!
//! In CIT the burned and linked sets are drawn independently, so they may
//! overlap arbitrarily or be disjoint.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, NodeId};
use crate::stochastic::SeededRng;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenerateError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(
        "{kind} with n={n}, p={p}, q={q}: network stuck at {largest} nodes after {episodes} episodes"
    )]
    BudgetExhausted {
        kind: ModelKind,
        n: usize,
        p: f64,
        q: f64,
        largest: usize,
        episodes: usize,
    },
    #[error("cannot insert into an empty graph")]
    EmptyGraph,
    #[error("config: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Ff,
    Btf,
    Cpy,
    Cit,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::Ff,
        ModelKind::Btf,
        ModelKind::Cpy,
        ModelKind::Cit,
    ];

    pub fn uses_q(self) -> bool {
        self != ModelKind::Ff
    }

    /// CIT and CPY start from a single link, FF and BTF from a single node.
    fn seed_nodes(self) -> usize {
        match self {
            ModelKind::Ff | ModelKind::Btf => 1,
            ModelKind::Cpy | ModelKind::Cit => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Ff => "ff",
            ModelKind::Btf => "btf",
            ModelKind::Cpy => "cpy",
            ModelKind::Cit => "cit",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.as_str().to_uppercase())
    }
}

impl FromStr for ModelKind {
    type Err = GenerateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ff" => Ok(ModelKind::Ff),
            "btf" => Ok(ModelKind::Btf),
            "cpy" => Ok(ModelKind::Cpy),
            "cit" => Ok(ModelKind::Cit),
            other => Err(GenerateError::InvalidParams(format!(
                "unknown model {other:?} (expected ff, btf, cpy or cit)"
            ))),
        }
    }
}

/// Everything needed to reproduce one realization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    #[serde(rename = "model")]
    pub kind: ModelKind,
    pub n: usize,
    pub p: f64,
    /// Ignored by FF.
    #[serde(default)]
    pub q: f64,
    #[serde(default)]
    pub seed: u64,
}

impl ModelParams {
    pub fn new(kind: ModelKind, n: usize, p: f64, q: f64, seed: u64) -> Self {
        Self {
            kind,
            n,
            p,
            q,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), GenerateError> {
        if self.n < 2 {
            return Err(GenerateError::InvalidParams(format!(
                "n must be at least 2, got {}",
                self.n
            )));
        }
        if !(0.0..0.5).contains(&self.p) {
            return Err(GenerateError::InvalidParams(format!(
                "burning probability p must lie in [0, 1/2), got {}",
                self.p
            )));
        }
        if self.kind.uses_q() && !(0.0..1.0).contains(&self.q) {
            return Err(GenerateError::InvalidParams(format!(
                "linking probability q must lie in [0, 1), got {}",
                self.q
            )));
        }
        Ok(())
    }

    /// Parses and validates a TOML key-value block:
    ///
    /// ```toml
    /// model = "cit"
    /// n = 1000
    /// p = 0.3
    /// q = 0.75
    /// seed = 42
    /// ```
    pub fn from_config(text: &str) -> Result<Self, GenerateError> {
        let params: ModelParams =
            toml::from_str(text).map_err(|e| GenerateError::Config(e.message().to_string()))?;
        params.validate()?;
        Ok(params)
    }

    /// TOML integers are signed, so a seed above `i64::MAX` is written but
    /// rejected by [`ModelParams::from_config`].
    pub fn to_config(&self) -> String {
        toml::to_string(self).expect("plain struct serializes")
    }
}

/// Bookkeeping for one insertion episode.
#[derive(Debug, Clone, Default)]
pub struct EpisodeState {
    pub burned: IndexSet<NodeId>,
    pub linked: IndexSet<NodeId>,
    pub frontier: VecDeque<NodeId>,
}

/// Summary of a committed insertion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Insertion {
    pub node: NodeId,
    pub burned: usize,
    pub links: usize,
    pub dropped_duplicates: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct GenerationLog {
    /// Insertion attempts, including isolated and rejected ones.
    pub episodes: usize,
    /// Episodes that formed no link; their node is discarded.
    pub isolated_discards: usize,
    pub burned_total: usize,
    pub links_total: usize,
    pub dropped_duplicate_edges: usize,
}

impl GenerationLog {
    /// Mean number of burned nodes (ambassadors) per episode.
    pub fn burned_per_episode(&self) -> f64 {
        if self.episodes == 0 {
            0.0
        } else {
            self.burned_total as f64 / self.episodes as f64
        }
    }

    fn record(&mut self, ep: &EpisodeState) {
        self.episodes += 1;
        self.burned_total += ep.burned.len();
    }
}

#[derive(Debug, Clone, Copy)]
enum Linking {
    /// FF/BTF: each burned node is linked with this probability.
    Burned(f64),
    /// CIT/CPY: geometric draw with this mean over each ambassador's
    /// neighbors; optionally also link the ambassador itself.
    Neighbors { mean: f64, link_ambassador: bool },
}

impl Linking {
    fn for_params(params: &ModelParams) -> Self {
        match params.kind {
            ModelKind::Ff => Linking::Burned(1.0),
            ModelKind::Btf => Linking::Burned(params.q),
            ModelKind::Cit => Linking::Neighbors {
                mean: geometric_mean(params.q),
                link_ambassador: false,
            },
            ModelKind::Cpy => Linking::Neighbors {
                mean: geometric_mean(params.q),
                link_ambassador: true,
            },
        }
    }
}

fn geometric_mean(prob: f64) -> f64 {
    prob / (1.0 - prob)
}

/// Runs one exploration over `g` for a node that is not yet part of it.
/// The graph is left untouched; the caller decides whether to commit.
fn run_episode(g: &Graph, burn_mean: f64, linking: Linking, rng: &mut SeededRng) -> EpisodeState {
    let mut ep = EpisodeState::default();
    let ambassador = rng.below(g.node_count());
    ep.burned.insert(ambassador);
    ep.frontier.push_back(ambassador);
    if let Linking::Burned(prob) = linking {
        if rng.chance(prob) {
            ep.linked.insert(ambassador);
        }
    }

    let mut candidates = Vec::new();
    while let Some(a) = ep.frontier.pop_front() {
        if let Linking::Neighbors {
            link_ambassador: true,
            ..
        } = linking
        {
            ep.linked.insert(a);
        }

        let burn = rng.geometric_count(burn_mean).expect("validated mean") as usize;
        candidates.clear();
        candidates.extend(g.adj(a).iter().copied().filter(|v| !ep.burned.contains(v)));
        for next in rng.sample_subset(&candidates, burn) {
            let fresh = ep.burned.insert(next);
            debug_assert!(fresh, "node {next} burned twice");
            ep.frontier.push_back(next);
            if let Linking::Burned(prob) = linking {
                if rng.chance(prob) {
                    ep.linked.insert(next);
                }
            }
        }

        if let Linking::Neighbors { mean, .. } = linking {
            let cite = rng.geometric_count(mean).expect("validated mean") as usize;
            candidates.clear();
            candidates.extend(g.adj(a).iter().copied().filter(|v| !ep.linked.contains(v)));
            for target in rng.sample_subset(&candidates, cite) {
                let fresh = ep.linked.insert(target);
                debug_assert!(fresh, "node {target} linked twice");
            }
        }
    }
    ep
}

fn commit(g: &mut Graph, ep: &EpisodeState) -> Insertion {
    let node = g.add_node();
    let mut links = 0;
    let mut dropped_duplicates = 0;
    for &target in &ep.linked {
        if g.add_edge(node, target).expect("episode nodes exist") {
            links += 1;
        } else {
            dropped_duplicates += 1;
        }
    }
    Insertion {
        node,
        burned: ep.burned.len(),
        links,
        dropped_duplicates,
    }
}

fn check_probability(name: &str, value: f64, upper: f64) -> Result<(), GenerateError> {
    if (0.0..upper).contains(&value) {
        Ok(())
    } else {
        Err(GenerateError::InvalidParams(format!(
            "{name}={value} outside [0, {upper})"
        )))
    }
}

/// Adds one node by FF-style burning. With `link_prob = 1` the node links
/// to every burned node (FF); with `link_prob = q` each of those links
/// forms independently (BTF).
pub fn insert_node_ff(
    g: &mut Graph,
    p: f64,
    rng: &mut SeededRng,
    link_prob: f64,
) -> Result<Insertion, GenerateError> {
    if g.is_empty() {
        return Err(GenerateError::EmptyGraph);
    }
    check_probability("p", p, 0.5)?;
    if !(0.0..=1.0).contains(&link_prob) {
        return Err(GenerateError::InvalidParams(format!(
            "link_prob={link_prob} outside [0, 1]"
        )));
    }
    let ep = run_episode(g, geometric_mean(p), Linking::Burned(link_prob), rng);
    Ok(commit(g, &ep))
}

/// Adds one node by CIT-style burning: ambassadors come from the burning
/// draw, links from an independent draw over each ambassador's neighbors.
/// `link_ambassador` selects the CPY variant.
pub fn insert_node_cit(
    g: &mut Graph,
    p: f64,
    q: f64,
    rng: &mut SeededRng,
    link_ambassador: bool,
) -> Result<Insertion, GenerateError> {
    if g.is_empty() {
        return Err(GenerateError::EmptyGraph);
    }
    check_probability("p", p, 0.5)?;
    check_probability("q", q, 1.0)?;
    let linking = Linking::Neighbors {
        mean: geometric_mean(q),
        link_ambassador,
    };
    let ep = run_episode(g, geometric_mean(p), linking, rng);
    Ok(commit(g, &ep))
}

/// Default attempt budget: `100·n` episodes.
pub fn default_budget(n: usize) -> usize {
    100 * n
}

/// Generates one realization; see [`grow_to_component`].
pub fn generate(params: &ModelParams) -> Result<(Graph, GenerationLog), GenerateError> {
    grow_to_component(params, default_budget(params.n))
}

/// Inserts nodes until the network has exactly `params.n` nodes, all in one
/// connected component.
///
/// An episode that forms no link is discarded and the insertion repeated,
/// so ambassadors are always drawn from the connected network. Every
/// committed node links only into that network, which therefore stays a
/// single component throughout.
pub fn grow_to_component(
    params: &ModelParams,
    max_episodes: usize,
) -> Result<(Graph, GenerationLog), GenerateError> {
    params.validate()?;
    let n = params.n;
    let mut rng = SeededRng::new(params.seed);
    let mut log = GenerationLog::default();
    let mut g = Graph::new();
    for _ in 0..params.kind.seed_nodes() {
        g.add_node();
    }
    if g.node_count() == 2 {
        g.add_edge(0, 1).expect("seed nodes exist");
    }

    let burn_mean = geometric_mean(params.p);
    let linking = Linking::for_params(params);
    while g.node_count() < n {
        if log.episodes >= max_episodes {
            return Err(GenerateError::BudgetExhausted {
                kind: params.kind,
                n,
                p: params.p,
                q: params.q,
                largest: g.node_count(),
                episodes: log.episodes,
            });
        }
        let ep = run_episode(&g, burn_mean, linking, &mut rng);
        log.record(&ep);
        if ep.linked.is_empty() {
            log.isolated_discards += 1;
            continue;
        }
        let ins = commit(&mut g, &ep);
        log.links_total += ins.links;
        log.dropped_duplicate_edges += ins.dropped_duplicates;
    }
    Ok((g, log))
}
