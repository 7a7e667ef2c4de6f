//! Phase driver: repeat phases until one finds no augmenting path.

use std::time::Instant;

use thiserror::Error;

use crate::assignment::{AssignOutcome, Assignment};
use crate::augmentation::Augmentation;
use crate::ddfs::Scratch;
use crate::graph::{greedy_matching, validate_matching, Graph, Matching};
use crate::merge::{Backend, MergeForest, SetMerging};
use crate::phase::PhaseState;
use crate::trace::PhaseTrace;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatchError {
    #[error("initial matching has {got} vertices, graph has {want}")]
    SizeMismatch { got: u32, want: u32 },
    #[error("initial matching is invalid: {0}")]
    InvalidInitial(String),
}

#[derive(Debug, Clone, Default)]
pub enum InitialMatching {
    Empty,
    #[default]
    Greedy,
    Given(Matching),
}

#[derive(Debug, Clone, Default)]
pub struct MatchOptions {
    pub backend: Backend,
    pub initial: InitialMatching,
    /// Keep a [`PhaseTrace`] for every phase.
    pub trace: bool,
}

/// Work and outcome of one phase.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PhaseRecord {
    pub l_m: Option<u32>,
    pub aps: u64,
    pub edge_scans: u64,
    pub finds: u64,
    pub unions: u64,
    pub grows: u64,
    pub merge_steps: u64,
    pub ddfs_runs: u64,
    pub bottlenecks: u64,
    pub dead_ends: u64,
    pub reroutes: u64,
    /// Bridges whose tenacity was below the level being processed when
    /// they were found. Always zero unless level assignment is broken.
    pub late_bridges: u64,
    pub micros: u64,
}

#[derive(Debug, Clone, Default)]
pub struct PhaseStats {
    pub phases: Vec<PhaseRecord>,
    pub traces: Vec<PhaseTrace>,
}

impl PhaseStats {
    pub fn total_aps(&self) -> u64 {
        self.phases.iter().map(|p| p.aps).sum()
    }

    pub fn max_edge_scans(&self) -> u64 {
        self.phases.iter().map(|p| p.edge_scans).max().unwrap_or(0)
    }
}

/// One phase: level assignment up to the first augmenting path, then the
/// augmentation subphase. The matching is augmented in place.
pub fn run_phase(
    g: &Graph,
    m: &mut Matching,
    backend: Backend,
    mut trace: Option<&mut PhaseTrace>,
) -> PhaseRecord {
    let start = Instant::now();
    let n = g.vertex_count();
    let mut st = PhaseState::new(g);
    let mut forest = MergeForest::new(backend, n as usize + 1);
    let mut sc = Scratch::new(n);
    let outcome = Assignment {
        g,
        m,
        st: &mut st,
        forest: &mut forest,
        sc: &mut sc,
        trace: trace.as_deref_mut(),
    }
    .run();
    if let Some(t) = trace.as_deref_mut() {
        let lv = |x: u32| (x != crate::phase::INF).then_some(x);
        t.even = st.even.iter().map(|&x| lv(x)).collect();
        t.odd = st.odd.iter().map(|&x| lv(x)).collect();
    }
    let mut rec = PhaseRecord::default();
    if let AssignOutcome::FirstAp { l_m, bucket } = outcome {
        rec.l_m = Some(l_m);
        let counts = Augmentation::new(g, m, &mut st, &mut forest, &mut sc, trace, bucket).run();
        rec.aps = counts.aps;
        rec.bottlenecks = counts.bottlenecks;
        rec.dead_ends = counts.dead_ends;
        rec.reroutes = counts.reroutes;
    }
    let work = forest.work();
    rec.edge_scans = st.counters.edge_scans;
    rec.ddfs_runs = st.counters.ddfs_runs;
    rec.late_bridges = st.counters.late_bridges;
    rec.finds = work.finds;
    rec.unions = work.unions;
    rec.grows = work.grows;
    rec.merge_steps = work.steps;
    rec.micros = start.elapsed().as_micros() as u64;
    rec
}

/// Computes a maximum-cardinality matching of `g`.
pub fn maximum_matching(
    g: &Graph,
    opts: &MatchOptions,
) -> Result<(Matching, PhaseStats), MatchError> {
    let mut m = match &opts.initial {
        InitialMatching::Empty => Matching::empty(g.vertex_count()),
        InitialMatching::Greedy => greedy_matching(g),
        InitialMatching::Given(m) => {
            if m.vertex_count() != g.vertex_count() {
                return Err(MatchError::SizeMismatch {
                    got: m.vertex_count(),
                    want: g.vertex_count(),
                });
            }
            let v = validate_matching(g, m);
            if !v.is_valid() {
                return Err(MatchError::InvalidInitial(v.problems.join("; ")));
            }
            m.clone()
        }
    };
    let mut stats = PhaseStats::default();
    loop {
        let mut trace = PhaseTrace::default();
        let rec = run_phase(g, &mut m, opts.backend, opts.trace.then_some(&mut trace));
        let aps = rec.aps;
        stats.phases.push(rec);
        if opts.trace {
            stats.traces.push(trace);
        }
        if aps == 0 {
            break;
        }
    }
    Ok((m, stats))
}
