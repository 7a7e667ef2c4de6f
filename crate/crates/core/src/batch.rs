//! Many independent matchings at once. Each instance is single-threaded;
//! with the `parallel` feature instances are spread over a rayon pool.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::graph::{Graph, Matching};
use crate::matcher::{maximum_matching, MatchError, MatchOptions, PhaseStats};

#[derive(Debug, Clone)]
pub struct BatchItem {
    pub name: String,
    pub graph: Graph,
}

#[derive(Debug, Clone)]
pub struct BatchResult {
    pub name: String,
    pub n: u32,
    pub m: usize,
    pub matching: Matching,
    pub stats: PhaseStats,
}

impl BatchResult {
    pub fn size(&self) -> usize {
        self.matching.size()
    }

    /// Largest per-phase edge-scan count divided by `n + m`.
    pub fn max_scans_ratio(&self) -> f64 {
        self.stats.max_edge_scans() as f64 / (self.n as f64 + self.m as f64).max(1.0)
    }

    pub fn total_micros(&self) -> u64 {
        self.stats.phases.iter().map(|p| p.micros).sum()
    }
}

fn one(item: &BatchItem, opts: &MatchOptions) -> Result<BatchResult, MatchError> {
    let (matching, stats) = maximum_matching(&item.graph, opts)?;
    Ok(BatchResult {
        name: item.name.clone(),
        n: item.graph.vertex_count(),
        m: item.graph.edge_count(),
        matching,
        stats,
    })
}

/// Runs every item, in parallel when the `parallel` feature is on.
/// Results keep the input order.
pub fn run_batch(items: &[BatchItem], opts: &MatchOptions) -> Vec<Result<BatchResult, MatchError>> {
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(|it| one(it, opts)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_batch_sequential(items, opts)
    }
}

pub fn run_batch_sequential(
    items: &[BatchItem],
    opts: &MatchOptions,
) -> Vec<Result<BatchResult, MatchError>> {
    items.iter().map(|it| one(it, opts)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate_random;

    #[test]
    fn parallel_matches_sequential() {
        let items: Vec<_> = (0..12)
            .map(|s| BatchItem {
                name: format!("g{s}"),
                graph: generate_random(60 + s * 7, 150, s as u64).unwrap(),
            })
            .collect();
        let opts = MatchOptions::default();
        let a = run_batch(&items, &opts);
        let b = run_batch_sequential(&items, &opts);
        for (x, y) in a.iter().zip(&b) {
            let (x, y) = (x.as_ref().unwrap(), y.as_ref().unwrap());
            assert_eq!(x.name, y.name);
            assert_eq!(x.matching, y.matching);
            assert_eq!(x.stats.phases.len(), y.stats.phases.len());
        }
    }
}
