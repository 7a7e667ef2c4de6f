#![allow(dead_code)]

use mvmatch::graph::{Graph, Matching, Vertex};
use mvmatch::merge::{Backend, MergeForest, SetMerging};
use mvmatch::trace::AugEvent;
use mvmatch::{maximum_matching, InitialMatching, MatchOptions, PhaseStats};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Each pair present with probability `p`.
pub fn gnp(n: u32, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    edges.shuffle(&mut rng);
    Graph::from_edges(n, &edges)
}

/// A run with traces plus the matching each phase started from.
pub struct TracedRun {
    pub matching: Matching,
    pub stats: PhaseStats,
    pub starts: Vec<Matching>,
}

pub fn traced(g: &Graph, backend: Backend, initial: InitialMatching) -> TracedRun {
    let opts = MatchOptions {
        backend,
        initial,
        trace: true,
    };
    let first = match &opts.initial {
        InitialMatching::Empty => Matching::empty(g.vertex_count()),
        InitialMatching::Greedy => mvmatch::graph::greedy_matching(g),
        InitialMatching::Given(m) => m.clone(),
    };
    let (matching, stats) = maximum_matching(g, &opts).expect("valid options");
    let mut starts = vec![first];
    for t in &stats.traces {
        let mut m = starts.last().unwrap().clone();
        for p in t.paths() {
            m.augment(p);
        }
        starts.push(m);
    }
    starts.pop();
    TracedRun {
        matching,
        stats,
        starts,
    }
}

/// A reported petal with the vertices deleted before it was formed.
pub struct PetalSeen {
    pub bud: Vertex,
    pub members: Vec<Vertex>,
    pub removed: Vec<Vertex>,
}

/// Every petal reported in a trace: those formed during level assignment
/// and the bottlenecks of the augmentation subphase.
pub fn petals(t: &mvmatch::trace::PhaseTrace) -> Vec<PetalSeen> {
    let mut out: Vec<_> = t
        .petals
        .iter()
        .map(|p| PetalSeen {
            bud: p.bud,
            members: p.members.clone(),
            removed: Vec::new(),
        })
        .collect();
    let mut removed = Vec::new();
    for e in &t.events {
        match e {
            AugEvent::Bottleneck { bud, members, .. } => out.push(PetalSeen {
                bud: *bud,
                members: members.clone(),
                removed: removed.clone(),
            }),
            AugEvent::DeadEnd { deleted, .. } | AugEvent::Augment { deleted, .. } => {
                removed.extend(deleted)
            }
        }
    }
    out
}

pub fn check_petals(
    g: &Graph,
    start: &Matching,
    t: &mvmatch::trace::PhaseTrace,
) -> Result<usize, String> {
    let ps = petals(t);
    for p in &ps {
        mvmatch::oracle::petal_property_check_avoiding(
            g,
            start,
            &p.removed,
            &[(p.bud, p.members.clone())],
        )?;
    }
    Ok(ps.len())
}

#[derive(Debug, Clone, Copy)]
pub enum Op {
    Root(Vertex),
    Grow(Vertex, Vertex),
    Union(Vertex),
    Find(Vertex),
}

/// A valid operation script of `len` ops over `cap - 1` vertices, built by
/// driving a reference forest.
pub fn merge_script(cap: usize, len: usize, seed: u64) -> Vec<Op> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = MergeForest::new(Backend::Reference, cap);
    let mut fresh: Vec<Vertex> = (1..cap as Vertex).collect();
    fresh.shuffle(&mut rng);
    let mut present: Vec<Vertex> = Vec::new();
    let mut ops = Vec::with_capacity(len);
    while ops.len() < len {
        let roll = rng.gen_range(0..100);
        if present.is_empty() || (roll < 5 && !fresh.is_empty()) {
            let Some(v) = fresh.pop() else { break };
            f.make_root(v).unwrap();
            present.push(v);
            ops.push(Op::Root(v));
        } else if roll < 40 && !fresh.is_empty() {
            let p = *present.choose(&mut rng).unwrap();
            let v = fresh.pop().unwrap();
            f.grow(p, v).unwrap();
            present.push(v);
            ops.push(Op::Grow(p, v));
        } else if roll < 60 {
            let v = *present.choose(&mut rng).unwrap();
            let r = f.find(v).unwrap();
            if f.tree_parent(r).is_some() {
                f.union_up(r).unwrap();
                ops.push(Op::Union(r));
            }
        } else {
            let v = *present.choose(&mut rng).unwrap();
            f.find(v).unwrap();
            ops.push(Op::Find(v));
        }
    }
    ops
}

/// Replays a script and returns the answer of every find.
pub fn replay(backend: Backend, cap: usize, ops: &[Op]) -> Vec<Vertex> {
    let mut f = MergeForest::new(backend, cap);
    let mut out = Vec::new();
    for &op in ops {
        match op {
            Op::Root(v) => f.make_root(v).unwrap(),
            Op::Grow(p, v) => f.grow(p, v).unwrap(),
            Op::Union(v) => f.union_up(v).unwrap(),
            Op::Find(v) => out.push(f.find(v).unwrap()),
        }
    }
    out
}
