//! Search level `i_m` after the first augmenting path has been seen.
//!
//! A path `A = A_1, ..., A_l` of petal*s is grown depth-first along props
//! from a free petal*. The vertices of `A` live on the stack `ahat`, each
//! element's bud first; `a[v]` is the position of `v` on that stack and
//! `bhat[i]` is the bud of `A_i`. Bridges of tenacity `l_m` at the tip are
//! searched by a DDFS whose red side walks down `A`.

use crate::ddfs::{Ddfs, Outcome, Scratch};
use crate::graph::{Graph, Matching, Vertex, NIL};
use crate::merge::{MergeForest, SetMerging};
use crate::phase::{check_augmenting_path, PetalRecord, PhaseState, Side};
use crate::trace::{AugEvent, PhaseTrace};

#[derive(Debug)]
pub(crate) struct AnchorStack {
    ahat: Vec<Vertex>,
    a: Vec<u32>,
    bhat: Vec<Vertex>,
    entry: Vec<Vertex>,
    bridge_cur: Vec<Vertex>,
    prop_cur: Vec<Vertex>,
}

impl AnchorStack {
    pub fn new(n: u32) -> Self {
        AnchorStack {
            ahat: vec![NIL],
            a: vec![0; n as usize + 1],
            bhat: vec![NIL],
            entry: vec![NIL],
            bridge_cur: vec![NIL],
            prop_cur: vec![NIL],
        }
    }

    pub fn len(&self) -> usize {
        self.bhat.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn bud(&self, i: usize) -> Vertex {
        self.bhat[i]
    }

    pub fn entry_pred(&self, i: usize) -> Vertex {
        self.entry[i]
    }

    pub fn buds(&self) -> &[Vertex] {
        &self.bhat[1..]
    }

    pub fn index(&self, v: Vertex) -> u32 {
        self.a[v as usize]
    }

    /// Element of `A` holding `v`, by binary search over the bud indices.
    pub fn element_of(&self, v: Vertex) -> Option<usize> {
        let ai = self.a[v as usize];
        if ai == 0 {
            return None;
        }
        let k = self.bhat[1..].partition_point(|&b| self.a[b as usize] <= ai);
        Some(k)
    }

    fn push_vertex(&mut self, v: Vertex) {
        self.ahat.push(v);
        self.a[v as usize] = (self.ahat.len() - 1) as u32;
    }

    fn push_element(&mut self, st: &PhaseState, bud: Vertex, entry: Vertex) {
        for v in st.members(bud) {
            self.push_vertex(v);
        }
        self.bhat.push(bud);
        self.entry.push(entry);
        self.bridge_cur.push(bud);
        self.prop_cur.push(bud);
    }

    /// Drops elements above `keep`, clearing their stack positions.
    fn truncate(&mut self, keep: usize) -> Vec<Vertex> {
        let cut = if keep == self.len() {
            return Vec::new();
        } else {
            self.a[self.bhat[keep + 1] as usize] as usize
        };
        let dropped = self.ahat.split_off(cut);
        for &v in &dropped {
            self.a[v as usize] = 0;
        }
        self.bhat.truncate(keep + 1);
        self.entry.truncate(keep + 1);
        self.bridge_cur.truncate(keep + 1);
        self.prop_cur.truncate(keep + 1);
        dropped
    }
}

/// Statistics of one augmentation subphase.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AugmentationCounts {
    pub aps: u64,
    pub bottlenecks: u64,
    pub dead_ends: u64,
    pub reroutes: u64,
    pub extend_scans: u64,
}

pub(crate) struct Augmentation<'a> {
    pub g: &'a Graph,
    pub m: &'a mut Matching,
    pub st: &'a mut PhaseState,
    pub forest: &'a mut MergeForest,
    pub sc: &'a mut Scratch,
    pub trace: Option<&'a mut PhaseTrace>,
    pub stack: AnchorStack,
    lm_bridges: Vec<Vec<u32>>,
    br_cur: Vec<u32>,
    succ_cur: Vec<u32>,
    next_free: Vertex,
    pub counts: AugmentationCounts,
}

fn stack_bud(stack: &AnchorStack, forest: &mut MergeForest, v: Vertex) -> Vertex {
    match stack.element_of(v) {
        Some(i) => stack.bud(i),
        None => forest
            .find(v)
            .expect("every leveled vertex is in the forest"),
    }
}

impl<'a> Augmentation<'a> {
    pub fn new(
        g: &'a Graph,
        m: &'a mut Matching,
        st: &'a mut PhaseState,
        forest: &'a mut MergeForest,
        sc: &'a mut Scratch,
        trace: Option<&'a mut PhaseTrace>,
        l_m_bucket: Vec<u32>,
    ) -> Self {
        let size = g.vertex_count() as usize + 1;
        let mut aug = Augmentation {
            g,
            m,
            stack: AnchorStack::new(st.vertex_count()),
            st,
            forest,
            sc,
            trace,
            lm_bridges: vec![Vec::new(); size],
            br_cur: vec![0; size],
            succ_cur: vec![0; size],
            next_free: 1,
            counts: AugmentationCounts::default(),
        };
        aug.st.lm_pending.extend(l_m_bucket);
        aug.index_pending();
        aug
    }

    fn index_pending(&mut self) {
        for e in std::mem::take(&mut self.st.lm_pending) {
            let (u, v) = self.g.edge(e);
            self.lm_bridges[u as usize].push(e);
            self.lm_bridges[v as usize].push(e);
        }
    }

    /// Runs the subphase to exhaustion and returns the number of
    /// augmenting paths applied.
    pub fn run(mut self) -> AugmentationCounts {
        while let Some((r, g)) = self.extend() {
            let l_m = self.st.l_m.expect("subphase runs with l_m known");
            let outcome = {
                let stack = &self.stack;
                let forest = &mut *self.forest;
                Ddfs::new(self.st, self.sc, |v| stack_bud(stack, forest, v)).run_anchored(stack, g)
            };
            match outcome {
                Outcome::Degenerate => {}
                Outcome::Petal {
                    bud,
                    support,
                    red_root,
                    green_root,
                    red_step_to_bud,
                    green_step_to_bud,
                    rerouted,
                } => {
                    if rerouted {
                        self.counts.reroutes += 1;
                    }
                    let rec = PetalRecord {
                        bud,
                        red_end: r,
                        green_end: g,
                        red_root,
                        green_root,
                        red_step_to_bud,
                        green_step_to_bud,
                        tenacity: l_m,
                    };
                    self.finish_bottleneck(rec, &support);
                }
                Outcome::Augmenting {
                    red_root,
                    green_root,
                    red_free,
                    green_free,
                    rerouted,
                } => {
                    if rerouted {
                        self.counts.reroutes += 1;
                    }
                    let path = self
                        .st
                        .augmenting_path(self.m, r, g, red_root, green_root, red_free, green_free);
                    if let Err(msg) = check_augmenting_path(self.g, self.m, &path, l_m) {
                        panic!("reconstructed path {path:?} is invalid: {msg}");
                    }
                    self.finish_ap(path);
                }
            }
        }
        self.counts
    }

    /// Grows `A` until its tip has an untried bridge. Returns the bridge
    /// as (tip endpoint, other endpoint), or None when no free petal* is
    /// left to start from.
    fn extend(&mut self) -> Option<(Vertex, Vertex)> {
        loop {
            if self.stack.is_empty() && !self.start_new()? {
                continue;
            }
            let tip = self.stack.len();
            if let Some(br) = self.next_bridge(tip) {
                return Some(br);
            }
            if let Some((from, bud)) = self.next_successor(tip) {
                self.stack.push_element(self.st, bud, from);
                continue;
            }
            self.dead_end();
        }
    }

    /// Starts `A` at the next free petal*. `Some(false)` means the
    /// candidate was unusable; None means none are left.
    fn start_new(&mut self) -> Option<bool> {
        let n = self.g.vertex_count();
        while self.next_free <= n {
            let f = self.next_free;
            self.next_free += 1;
            if !self.m.is_free(f) || self.st.deleted[f as usize] || !self.forest.contains(f) {
                continue;
            }
            self.stack.push_element(self.st, f, NIL);
            return Some(true);
        }
        None
    }

    fn next_bridge(&mut self, tip: usize) -> Option<(Vertex, Vertex)> {
        let bud = self.stack.bud(tip);
        loop {
            let v = self.stack.bridge_cur[tip];
            if !self.st.deleted[v as usize] {
                while (self.br_cur[v as usize] as usize) < self.lm_bridges[v as usize].len() {
                    let e = self.lm_bridges[v as usize][self.br_cur[v as usize] as usize];
                    self.br_cur[v as usize] += 1;
                    self.counts.extend_scans += 1;
                    self.st.counters.edge_scans += 1;
                    let u = self.g.other(e, v);
                    if self.st.bridge_done[e as usize] || self.st.deleted[u as usize] {
                        continue;
                    }
                    self.st.bridge_done[e as usize] = true;
                    return Some((v, u));
                }
            }
            if v == self.st.member_tail[bud as usize] {
                return None;
            }
            self.stack.bridge_cur[tip] = self.st.next_member[v as usize];
        }
    }

    fn next_successor(&mut self, tip: usize) -> Option<(Vertex, Vertex)> {
        let bud = self.stack.bud(tip);
        loop {
            let v = self.stack.prop_cur[tip];
            if !self.st.deleted[v as usize] {
                while (self.succ_cur[v as usize] as usize) < self.st.succs[v as usize].len() {
                    let s = self.st.succs[v as usize][self.succ_cur[v as usize] as usize];
                    self.succ_cur[v as usize] += 1;
                    self.counts.extend_scans += 1;
                    self.st.counters.edge_scans += 1;
                    if self.st.deleted[s as usize] || self.stack.index(s) != 0 {
                        continue;
                    }
                    if self.forest.find(s).expect("leveled") != s {
                        continue;
                    }
                    return Some((v, s));
                }
            }
            if v == self.st.member_tail[bud as usize] {
                return None;
            }
            self.stack.prop_cur[tip] = self.st.next_member[v as usize];
        }
    }

    fn dead_end(&mut self) {
        let tip = self.stack.len();
        let bud = self.stack.bud(tip);
        let dropped = self.stack.truncate(tip - 1);
        let deleted = self.st.delete_cascade(self.m, &dropped);
        self.counts.dead_ends += 1;
        if let Some(t) = self.trace.as_deref_mut() {
            t.events.push(AugEvent::DeadEnd { bud, deleted });
        }
    }

    fn finish_bottleneck(&mut self, rec: PetalRecord, support: &[(Vertex, Side)]) {
        let bud = rec.bud;
        let tenacity = rec.tenacity;
        let j = match self.stack.element_of(bud) {
            Some(j) if self.stack.bud(j) == bud => j,
            _ => panic!("bottleneck {bud} is not the bud of an element of A"),
        };
        for i in j + 1..=self.stack.len() {
            let b = self.stack.bud(i);
            assert!(
                support.iter().any(|&(x, _)| x == b),
                "element {i} of A lies above the bottleneck but outside the petal"
            );
        }
        self.stack.bhat.truncate(j + 1);
        self.stack.entry.truncate(j + 1);
        self.stack.bridge_cur.truncate(j + 1);
        self.stack.prop_cur.truncate(j + 1);
        self.st.record_petal(rec, support);
        for &(x, _) in support {
            let newly = self.stack.index(x) == 0;
            if newly {
                for v in self.st.members(x) {
                    self.stack.push_vertex(v);
                }
            }
            self.st.concat_members(bud, x);
        }
        for &(x, _) in support {
            if self.st.assign_maxlevel(x, tenacity) {
                self.st.scan_gained(self.g, self.m, x, tenacity);
            }
        }
        self.index_pending();
        self.counts.bottlenecks += 1;
        if let Some(t) = self.trace.as_deref_mut() {
            t.events.push(AugEvent::Bottleneck {
                bud,
                buds_after: self.stack.buds().to_vec(),
                members: self.st.members(bud),
            });
        }
    }

    fn finish_ap(&mut self, path: Vec<Vertex>) {
        self.m.augment(&path);
        let deleted = self.st.delete_cascade(self.m, &path);
        let mut keep = 0;
        while keep < self.stack.len() && !self.st.deleted[self.stack.bud(keep + 1) as usize] {
            keep += 1;
        }
        let dropped = self.stack.truncate(keep);
        for v in dropped {
            assert!(
                self.st.deleted[v as usize],
                "vertex {v} of a deleted anchor element survived the augmentation"
            );
        }
        self.counts.aps += 1;
        if let Some(t) = self.trace.as_deref_mut() {
            t.events.push(AugEvent::Augment { path, deleted });
        }
    }
}
