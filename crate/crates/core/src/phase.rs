//! Per-phase search state shared by the assignment and augmentation
//! subphases: levels, props, bridges, petal records, member lists,
//! deletion, and augmenting-path reconstruction.

use crate::graph::{EdgeId, Graph, Matching, Vertex, NIL};

pub const INF: u32 = u32::MAX;

/// Which DDFS side reached a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Red,
    Green,
}

/// DDFS tree parent: entered from node `from` through its prop to `pred`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeStep {
    pub from: Vertex,
    pub pred: Vertex,
}

/// A petal formed by one DDFS.
#[derive(Debug, Clone)]
pub struct PetalRecord {
    pub bud: Vertex,
    pub red_end: Vertex,
    pub green_end: Vertex,
    pub red_root: Vertex,
    pub green_root: Vertex,
    pub red_step_to_bud: Option<TreeStep>,
    pub green_step_to_bud: Option<TreeStep>,
    pub tenacity: u32,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScanCounters {
    pub edge_scans: u64,
    pub ddfs_runs: u64,
    pub late_bridges: u64,
}

#[derive(Debug)]
pub struct PhaseState {
    pub(crate) n: u32,
    pub(crate) even: Vec<u32>,
    pub(crate) odd: Vec<u32>,
    pub(crate) preds: Vec<Vec<Vertex>>,
    pub(crate) succs: Vec<Vec<Vertex>>,
    pub(crate) pred_count: Vec<u32>,
    pub(crate) prop_edge: Vec<bool>,
    pub(crate) bridge_edge: Vec<bool>,
    pub(crate) buckets: Vec<Vec<EdgeId>>,
    pub(crate) level_lists: Vec<Vec<Vertex>>,
    pub(crate) deleted: Vec<bool>,
    pub(crate) petal_of: Vec<u32>,
    pub(crate) color: Vec<Side>,
    pub(crate) petals: Vec<PetalRecord>,
    pub(crate) tree_step: Vec<TreeStep>,
    pub(crate) next_member: Vec<Vertex>,
    pub(crate) member_tail: Vec<Vertex>,
    /// Length of a shortest augmenting path, once known.
    pub l_m: Option<u32>,
    /// Tenacity-`l_m` bridges found after the switch, not yet indexed.
    pub(crate) lm_pending: Vec<EdgeId>,
    pub(crate) bridge_done: Vec<bool>,
    pub counters: ScanCounters,
}

impl PhaseState {
    pub fn new(g: &Graph) -> Self {
        let n = g.vertex_count();
        let size = n as usize + 1;
        PhaseState {
            n,
            even: vec![INF; size],
            odd: vec![INF; size],
            preds: vec![Vec::new(); size],
            succs: vec![Vec::new(); size],
            pred_count: vec![0; size],
            prop_edge: vec![false; g.edge_count()],
            bridge_edge: vec![false; g.edge_count()],
            buckets: Vec::new(),
            level_lists: Vec::new(),
            deleted: vec![false; size],
            petal_of: vec![0; size],
            color: vec![Side::Red; size],
            petals: Vec::new(),
            tree_step: vec![
                TreeStep {
                    from: NIL,
                    pred: NIL
                };
                size
            ],
            next_member: vec![NIL; size],
            member_tail: (0..size as Vertex).collect(),
            l_m: None,
            lm_pending: Vec::new(),
            bridge_done: vec![false; g.edge_count()],
            counters: ScanCounters::default(),
        }
    }

    pub fn vertex_count(&self) -> u32 {
        self.n
    }

    pub fn evenlevel(&self, v: Vertex) -> Option<u32> {
        Some(self.even[v as usize]).filter(|&l| l != INF)
    }

    pub fn oddlevel(&self, v: Vertex) -> Option<u32> {
        Some(self.odd[v as usize]).filter(|&l| l != INF)
    }

    pub fn minlevel(&self, v: Vertex) -> u32 {
        self.even[v as usize].min(self.odd[v as usize])
    }

    pub fn maxlevel(&self, v: Vertex) -> Option<u32> {
        let m = self.even[v as usize].max(self.odd[v as usize]);
        (m != INF).then_some(m)
    }

    pub fn predecessors(&self, v: Vertex) -> &[Vertex] {
        &self.preds[v as usize]
    }

    pub fn is_deleted(&self, v: Vertex) -> bool {
        self.deleted[v as usize]
    }

    pub fn is_prop(&self, e: EdgeId) -> bool {
        self.prop_edge[e as usize]
    }

    pub fn is_bridge(&self, e: EdgeId) -> bool {
        self.bridge_edge[e as usize]
    }

    pub(crate) fn level_list_mut(&mut self, level: u32) -> &mut Vec<Vertex> {
        let idx = level as usize;
        if self.level_lists.len() <= idx {
            self.level_lists.resize_with(idx + 1, Vec::new);
        }
        &mut self.level_lists[idx]
    }

    pub(crate) fn add_prop(&mut self, e: EdgeId, from: Vertex, to: Vertex) {
        self.prop_edge[e as usize] = true;
        self.preds[to as usize].push(from);
        self.succs[from as usize].push(to);
        self.pred_count[to as usize] += 1;
    }

    /// Buckets `e` at tenacity `t` unless it already is a bridge.
    pub(crate) fn add_bridge(&mut self, e: EdgeId, t: u32, current: u32) {
        if self.bridge_edge[e as usize] {
            return;
        }
        self.bridge_edge[e as usize] = true;
        if t < current {
            self.counters.late_bridges += 1;
        }
        match self.l_m {
            Some(lm) => {
                if t == lm {
                    self.register_lm_bridge(e);
                }
            }
            None => {
                let idx = t as usize;
                if self.buckets.len() <= idx {
                    self.buckets.resize_with(idx + 1, Vec::new);
                }
                self.buckets[idx].push(e);
            }
        }
    }

    pub(crate) fn register_lm_bridge(&mut self, e: EdgeId) {
        self.lm_pending.push(e);
    }

    /// Examines the edges whose tenacity becomes known because `v` just
    /// received its second level (from petal formation).
    pub(crate) fn scan_gained(&mut self, g: &Graph, m: &Matching, v: Vertex, current: u32) {
        let gained_even = self.even[v as usize] > self.odd[v as usize];
        if gained_even {
            for &e in g.incident(v) {
                let u = g.other(e, v);
                if m.mate_raw(v) == u {
                    continue;
                }
                self.counters.edge_scans += 1;
                if self.deleted[u as usize] || self.prop_edge[e as usize] {
                    continue;
                }
                if self.even[u as usize] != INF {
                    let t = self.even[u as usize] + self.even[v as usize] + 1;
                    self.add_bridge(e, t, current);
                }
            }
        } else {
            let u = m.mate_raw(v);
            if u == NIL {
                return;
            }
            self.counters.edge_scans += 1;
            let e = matched_edge(g, v, u);
            if !self.deleted[u as usize]
                && !self.prop_edge[e as usize]
                && self.odd[u as usize] != INF
            {
                let t = self.odd[u as usize] + self.odd[v as usize] + 1;
                self.add_bridge(e, t, current);
            }
        }
    }

    /// Gives a support node its maxlevel `t - minlevel`. Returns false if
    /// the node already had both levels.
    pub(crate) fn assign_maxlevel(&mut self, v: Vertex, t: u32) -> bool {
        let (e, o) = (self.even[v as usize], self.odd[v as usize]);
        if e != INF && o != INF {
            return false;
        }
        if e < o {
            self.odd[v as usize] = t - e;
        } else {
            self.even[v as usize] = t - o;
        }
        true
    }

    /// Appends the member list of `x` to that of `bud`.
    pub(crate) fn concat_members(&mut self, bud: Vertex, x: Vertex) {
        let tail = self.member_tail[bud as usize];
        self.next_member[tail as usize] = x;
        self.member_tail[bud as usize] = self.member_tail[x as usize];
    }

    pub fn members(&self, head: Vertex) -> Vec<Vertex> {
        let mut out = Vec::new();
        let mut cur = head;
        while cur != NIL {
            out.push(cur);
            if cur == self.member_tail[head as usize] {
                break;
            }
            cur = self.next_member[cur as usize];
        }
        out
    }

    pub(crate) fn record_petal(&mut self, rec: PetalRecord, support: &[(Vertex, Side)]) -> u32 {
        self.petals.push(rec);
        let id = self.petals.len() as u32;
        for &(x, side) in support {
            self.petal_of[x as usize] = id;
            self.color[x as usize] = side;
        }
        id
    }

    /// Marks `roots` deleted and cascades to every non-free vertex left with
    /// no undeleted predecessor. Returns all vertices deleted.
    pub(crate) fn delete_cascade(&mut self, m: &Matching, roots: &[Vertex]) -> Vec<Vertex> {
        let mut work: Vec<Vertex> = Vec::new();
        let mut out = Vec::new();
        for &r in roots {
            if !self.deleted[r as usize] {
                self.deleted[r as usize] = true;
                work.push(r);
            }
        }
        while let Some(x) = work.pop() {
            out.push(x);
            for i in 0..self.succs[x as usize].len() {
                let s = self.succs[x as usize][i];
                self.counters.edge_scans += 1;
                if self.deleted[s as usize] {
                    continue;
                }
                self.pred_count[s as usize] -= 1;
                if self.pred_count[s as usize] == 0 && !m.is_free(s) {
                    self.deleted[s as usize] = true;
                    work.push(s);
                }
            }
        }
        out
    }

    /// Level of bridge endpoint `end` that an alternating path through the
    /// bridge to `other` uses.
    fn bridge_level(&self, m: &Matching, end: Vertex, other: Vertex) -> u32 {
        if m.mate_raw(end) == other {
            self.odd[end as usize]
        } else {
            self.even[end as usize]
        }
    }

    /// Appends a path from `x` down to `target` (both included) that
    /// realizes level `need` of `x`.
    fn descend(&self, m: &Matching, x: Vertex, need: u32, target: Vertex, out: &mut Vec<Vertex>) {
        let floor = self.minlevel(target);
        let (mut cur, mut need) = (x, need);
        loop {
            if cur == target {
                out.push(cur);
                return;
            }
            if need != self.minlevel(cur) {
                break;
            }
            out.push(cur);
            cur = self.preds[cur as usize]
                .iter()
                .copied()
                .find(|&p| !self.deleted[p as usize])
                .expect("live vertex has a live predecessor");
            need -= 1;
            assert!(need >= floor, "descent from {x} passed below {target}");
        }
        // `cur` is used at its maxlevel: go around its petal
        let id = self.petal_of[cur as usize];
        assert!(
            id != 0,
            "vertex {cur} needs its maxlevel but is in no petal"
        );
        let rec = &self.petals[id as usize - 1];
        let (near, far, near_side, far_side) = match self.color[cur as usize] {
            Side::Red => (rec.red_end, rec.green_end, Side::Red, Side::Green),
            Side::Green => (rec.green_end, rec.red_end, Side::Green, Side::Red),
        };
        let mut up = Vec::new();
        self.through_bridge_end(m, rec, near, far, near_side, cur, &mut up);
        up.reverse();
        out.extend_from_slice(&up);
        self.through_bridge_end(m, rec, far, near, far_side, rec.bud, out);
        if rec.bud != target {
            out.pop();
            self.descend(m, rec.bud, self.minlevel(rec.bud), target, out);
        }
    }

    /// Path from bridge endpoint `end` through its DDFS root and down the
    /// `side` tree to node `dest`.
    #[allow(clippy::too_many_arguments)]
    fn through_bridge_end(
        &self,
        m: &Matching,
        rec: &PetalRecord,
        end: Vertex,
        other: Vertex,
        side: Side,
        dest: Vertex,
        out: &mut Vec<Vertex>,
    ) {
        let root = match side {
            Side::Red => rec.red_root,
            Side::Green => rec.green_root,
        };
        self.descend(m, end, self.bridge_level(m, end, other), root, out);
        let bud_step = match side {
            Side::Red => rec.red_step_to_bud,
            Side::Green => rec.green_step_to_bud,
        };
        let steps = self.chain(dest, root, (dest == rec.bud).then_some(bud_step).flatten());
        self.walk_steps(m, &steps, out);
    }

    /// Tree steps from `root` down to `dest`, in descending order.
    fn chain(
        &self,
        dest: Vertex,
        root: Vertex,
        first: Option<TreeStep>,
    ) -> Vec<(TreeStep, Vertex)> {
        let mut steps = Vec::new();
        let mut node = dest;
        let mut step = first;
        while node != root {
            let s = step.unwrap_or(self.tree_step[node as usize]);
            assert!(s.from != NIL, "broken DDFS tree at {node}");
            steps.push((s, node));
            node = s.from;
            step = None;
        }
        steps.reverse();
        steps
    }

    fn walk_steps(&self, m: &Matching, steps: &[(TreeStep, Vertex)], out: &mut Vec<Vertex>) {
        for &(step, node) in steps {
            debug_assert_eq!(out.last(), Some(&step.from));
            // the prop pred -> from gave `from` its minlevel
            let need = self.minlevel(step.from) - 1;
            self.descend(m, step.pred, need, node, out);
        }
    }

    /// Reconstructs the augmenting path found by a DDFS for bridge
    /// `(red_end, green_end)` whose trees end at two free vertices.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn augmenting_path(
        &self,
        m: &Matching,
        red_end: Vertex,
        green_end: Vertex,
        red_root: Vertex,
        green_root: Vertex,
        red_free: Vertex,
        green_free: Vertex,
    ) -> Vec<Vertex> {
        let mut red = Vec::new();
        self.descend(
            m,
            red_end,
            self.bridge_level(m, red_end, green_end),
            red_root,
            &mut red,
        );
        let steps = self.chain(red_free, red_root, None);
        self.walk_steps(m, &steps, &mut red);
        red.reverse();
        self.descend(
            m,
            green_end,
            self.bridge_level(m, green_end, red_end),
            green_root,
            &mut red,
        );
        let steps = self.chain(green_free, green_root, None);
        self.walk_steps(m, &steps, &mut red);
        red
    }
}

pub(crate) fn matched_edge(g: &Graph, v: Vertex, u: Vertex) -> EdgeId {
    *g.incident(v)
        .iter()
        .find(|&&e| g.other(e, v) == u)
        .expect("mate is adjacent")
}

/// Checks that `path` is a simple augmenting path of `len` edges.
pub fn check_augmenting_path(
    g: &Graph,
    m: &Matching,
    path: &[Vertex],
    len: u32,
) -> Result<(), String> {
    if path.len() != len as usize + 1 {
        return Err(format!(
            "path has {} edges, expected {len}",
            path.len().saturating_sub(1)
        ));
    }
    let first = path[0];
    let last = *path.last().unwrap();
    if !m.is_free(first) || !m.is_free(last) || first == last {
        return Err(format!(
            "endpoints {first}, {last} are not two distinct free vertices"
        ));
    }
    let mut seen = std::collections::HashSet::new();
    for &v in path {
        if !seen.insert(v) {
            return Err(format!("vertex {v} repeats"));
        }
    }
    for (i, w) in path.windows(2).enumerate() {
        let matched = m.mate_raw(w[0]) == w[1];
        if matched != (i % 2 == 1) {
            return Err(format!(
                "edge {}-{} breaks alternation at position {i}",
                w[0], w[1]
            ));
        }
        if !matched && !g.has_edge(w[0], w[1]) {
            return Err(format!("{}-{} is not an edge", w[0], w[1]));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn checks_augmenting_paths() {
        let f = fixtures::g2();
        let (g, m) = (&f.graph, &f.matching);
        assert_eq!(check_augmenting_path(g, m, &[1, 2, 3, 4, 5, 6], 5), Ok(()));
        assert!(check_augmenting_path(g, m, &[1, 2, 3, 4, 5, 6], 7).is_err());
        // (3,5) is unmatched, so 2-3-5 does not alternate
        assert!(check_augmenting_path(g, m, &[1, 2, 3, 5, 4, 3], 5).is_err());
        assert!(check_augmenting_path(g, m, &[1, 2, 3, 4], 3).is_err());
    }

    #[test]
    fn fresh_state_has_no_levels() {
        let f = fixtures::g9();
        let st = PhaseState::new(&f.graph);
        assert_eq!(st.vertex_count(), 8);
        for v in f.graph.vertices() {
            assert_eq!(st.evenlevel(v), None);
            assert_eq!(st.minlevel(v), INF);
            assert!(!st.is_deleted(v));
        }
    }

    #[test]
    fn deletion_cascades_along_single_predecessors() {
        let f = fixtures::g2();
        let (g, m) = (&f.graph, &f.matching);
        let mut st = PhaseState::new(g);
        let e = |u, v| {
            g.incident(u)
                .iter()
                .copied()
                .find(|&e| g.other(e, u) == v)
                .unwrap()
        };
        st.add_prop(e(1, 2), 1, 2);
        st.add_prop(e(2, 3), 2, 3);
        st.add_prop(e(6, 5), 6, 5);
        st.add_prop(e(5, 4), 5, 4);
        let mut gone = st.delete_cascade(m, &[1]);
        gone.sort();
        assert_eq!(gone, vec![1, 2, 3]);
        assert!(!st.is_deleted(5));
        assert_eq!(st.delete_cascade(m, &[1]), Vec::<Vertex>::new());
    }
}
