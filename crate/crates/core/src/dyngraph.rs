//! Neighborhood turnover in time-indexed graphs.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Snapshots of a graph over a fixed node set. `neighbors(t, i)` is the
/// sorted, duplicate-free neighbor set of node `i` at time `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalGraph {
    nodes: usize,
    snapshots: Vec<Vec<Vec<usize>>>,
}

impl TemporalGraph {
    /// `snapshots[t][i]` lists the neighbors of node `i` at time `t`.
    pub fn new(nodes: usize, snapshots: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let mut snapshots = snapshots;
        for (t, snap) in snapshots.iter_mut().enumerate() {
            if snap.len() != nodes {
                return Err(Error::Dimension(format!(
                    "snapshot {t} has {} nodes, expected {nodes}",
                    snap.len()
                )));
            }
            for (i, set) in snap.iter_mut().enumerate() {
                if let Some(&bad) = set.iter().find(|&&j| j >= nodes) {
                    return Err(Error::Index {
                        index: bad,
                        len: nodes,
                    });
                }
                set.sort_unstable();
                if set.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::InvalidValue(format!(
                        "duplicate neighbor of node {i} at time {t}"
                    )));
                }
            }
        }
        Ok(Self { nodes, snapshots })
    }

    /// Builds undirected snapshots from per-time edge lists.
    pub fn from_edge_lists(nodes: usize, edges: &[Vec<(usize, usize)>]) -> Result<Self> {
        let mut snapshots = Vec::with_capacity(edges.len());
        for list in edges {
            let mut sets = vec![BTreeSet::new(); nodes];
            for &(a, b) in list {
                for x in [a, b] {
                    if x >= nodes {
                        return Err(Error::Index {
                            index: x,
                            len: nodes,
                        });
                    }
                }
                sets[a].insert(b);
                sets[b].insert(a);
            }
            snapshots.push(sets.into_iter().map(|s| s.into_iter().collect()).collect());
        }
        Self::new(nodes, snapshots)
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    /// Number of snapshots.
    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn neighbors(&self, t: usize, i: usize) -> &[usize] {
        &self.snapshots[t][i]
    }

    fn check(&self, i: usize, horizon: usize) -> Result<()> {
        if i >= self.nodes {
            return Err(Error::Index {
                index: i,
                len: self.nodes,
            });
        }
        if horizon == 0 || horizon > self.len() {
            return Err(Error::param(format!(
                "horizon {horizon} must lie in 1..={}",
                self.len()
            )));
        }
        Ok(())
    }
}

/// Counts of `a \ b` and `a ∪ b` for sorted slices.
fn difference_and_union(a: &[usize], b: &[usize]) -> (usize, usize) {
    let (mut i, mut j) = (0, 0);
    let (mut only_a, mut union) = (0, 0);
    while i < a.len() && j < b.len() {
        union += 1;
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                only_a += 1;
                i += 1;
            }
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    only_a += a.len() - i;
    union += (a.len() - i) + (b.len() - j);
    (only_a, union)
}

/// Turnover of node `i` across transitions `(t-1, t)` for `start < t < end`,
/// with 0-based snapshot indices. Each term is `|V_{t-1} \ V_t| / |V_{t-1} ∪ V_t|`,
/// and a pair of empty sets contributes 0.
pub fn temporal_degree_between(
    g: &TemporalGraph,
    i: usize,
    start: usize,
    end: usize,
) -> Result<f64> {
    g.check(i, end)?;
    if start >= end {
        return Err(Error::param(format!("window {start}..{end} is empty")));
    }
    Ok((start + 1..end)
        .map(|t| {
            let (lost, union) = difference_and_union(g.neighbors(t - 1, i), g.neighbors(t, i));
            if union == 0 {
                0.0
            } else {
                lost as f64 / union as f64
            }
        })
        .sum())
}

/// Turnover of node `i` over the first `horizon` snapshots.
pub fn temporal_degree(g: &TemporalGraph, i: usize, horizon: usize) -> Result<f64> {
    temporal_degree_between(g, i, 0, horizon)
}

/// Fraction of the neighbors of `i` at snapshot `horizon - 1` that were
/// neighbors in at least one of the `history` snapshots just before it.
/// `None` when the current neighborhood is empty.
pub fn temporal_clustering_window(
    g: &TemporalGraph,
    i: usize,
    horizon: usize,
    history: usize,
) -> Result<Option<f64>> {
    g.check(i, horizon)?;
    let now = horizon - 1;
    let current = g.neighbors(now, i);
    if current.is_empty() {
        return Ok(None);
    }
    let seen: BTreeSet<usize> = (now.saturating_sub(history)..now)
        .flat_map(|t| g.neighbors(t, i).iter().copied())
        .collect();
    let hits = current.iter().filter(|j| seen.contains(j)).count();
    Ok(Some(hits as f64 / current.len() as f64))
}

/// [`temporal_clustering_window`] with the full prior history.
pub fn temporal_clustering(g: &TemporalGraph, i: usize, horizon: usize) -> Result<Option<f64>> {
    temporal_clustering_window(g, i, horizon, horizon)
}
