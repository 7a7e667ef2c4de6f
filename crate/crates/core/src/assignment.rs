//! Level assignment: alternating MIN and MAX steps by increasing level,
//! with petal*s kept as sets of a set-merging forest.

use crate::ddfs::{Ddfs, Outcome, Scratch};
use crate::graph::{Graph, Matching, Vertex, NIL};
use crate::merge::{MergeForest, SetMerging};
use crate::phase::{matched_edge, PetalRecord, PhaseState, Side, INF};
use crate::trace::{PetalEvent, PhaseTrace};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum AssignOutcome {
    /// No augmenting path exists.
    Exhausted,
    /// A DDFS at tenacity `l_m` reached two free vertices; `bucket` holds
    /// every bridge of that tenacity.
    FirstAp { l_m: u32, bucket: Vec<u32> },
}

pub(crate) struct Assignment<'a> {
    pub g: &'a Graph,
    pub m: &'a Matching,
    pub st: &'a mut PhaseState,
    pub forest: &'a mut MergeForest,
    pub sc: &'a mut Scratch,
    pub trace: Option<&'a mut PhaseTrace>,
}

impl Assignment<'_> {
    pub fn run(mut self) -> AssignOutcome {
        // free vertices in order of first appearance in the edge list
        let ends = self.g.edges().iter().flat_map(|&(u, v)| [u, v]);
        for v in ends.chain(self.g.vertices()) {
            if self.m.is_free(v) && self.st.even[v as usize] == INF {
                self.st.even[v as usize] = 0;
                self.forest.make_root(v).expect("fresh forest");
                self.st.level_list_mut(0).push(v);
            }
        }
        let mut i = 0u32;
        loop {
            self.min_step(i);
            if let Some(out) = self.max_step(i) {
                return out;
            }
            let more_levels = self.st.level_lists.len() > i as usize + 1;
            let more_bridges = self.st.buckets.len() > 2 * i as usize + 2;
            if !more_levels && !more_bridges {
                return AssignOutcome::Exhausted;
            }
            i += 1;
        }
    }

    fn find(&mut self, v: Vertex) -> Vertex {
        self.forest
            .find(v)
            .expect("leveled vertex is in the forest")
    }

    fn min_step(&mut self, i: u32) {
        let Some(list) = self.st.level_lists.get_mut(i as usize).map(std::mem::take) else {
            return;
        };
        let (g, m) = (self.g, self.m);
        for &v in &list {
            if i.is_multiple_of(2) {
                for &e in g.incident(v) {
                    let u = g.other(e, v);
                    if m.mate_raw(v) == u {
                        continue;
                    }
                    self.st.counters.edge_scans += 1;
                    if self.st.even[u as usize] != INF {
                        if !self.st.prop_edge[e as usize] {
                            let t = self.st.even[u as usize] + i + 1;
                            self.st.add_bridge(e, t, 2 * i + 1);
                        }
                    } else if self.st.odd[u as usize] == INF {
                        self.st.odd[u as usize] = i + 1;
                        self.st.add_prop(e, v, u);
                        let b = self.find(v);
                        self.forest
                            .grow(b, u)
                            .expect("first predecessor grows once");
                        self.st.level_list_mut(i + 1).push(u);
                    } else if self.st.odd[u as usize] == i + 1 {
                        self.st.add_prop(e, v, u);
                    }
                }
            } else {
                let u = m.mate_raw(v);
                debug_assert_ne!(u, NIL, "odd vertices are matched");
                self.st.counters.edge_scans += 1;
                let e = matched_edge(g, v, u);
                if self.st.odd[u as usize] != INF {
                    if !self.st.prop_edge[e as usize] {
                        let t = self.st.odd[u as usize] + i + 1;
                        self.st.add_bridge(e, t, 2 * i + 1);
                    }
                } else if self.st.even[u as usize] == INF {
                    self.st.even[u as usize] = i + 1;
                    self.st.add_prop(e, v, u);
                    let b = self.find(v);
                    self.forest
                        .grow(b, u)
                        .expect("first predecessor grows once");
                    self.st.level_list_mut(i + 1).push(u);
                }
            }
        }
        self.st.level_lists[i as usize] = list;
    }

    fn max_step(&mut self, i: u32) -> Option<AssignOutcome> {
        let t = 2 * i + 1;
        let mut k = 0;
        while let Some(&e) = self.st.buckets.get(t as usize).and_then(|b| b.get(k)) {
            k += 1;
            let (r, g) = self.g.edge(e);
            let outcome = {
                let forest = &mut *self.forest;
                Ddfs::new(self.st, self.sc, |v| {
                    forest.find(v).expect("leveled vertex is in the forest")
                })
                .run(r, g)
            };
            match outcome {
                Outcome::Degenerate => {}
                Outcome::Augmenting { .. } => {
                    self.st.l_m = Some(t);
                    if let Some(tr) = self.trace.as_deref_mut() {
                        tr.l_m = Some(t);
                    }
                    let bucket = std::mem::take(&mut self.st.buckets[t as usize]);
                    return Some(AssignOutcome::FirstAp { l_m: t, bucket });
                }
                Outcome::Petal {
                    bud,
                    support,
                    red_root,
                    green_root,
                    red_step_to_bud,
                    green_step_to_bud,
                    ..
                } => {
                    let rec = PetalRecord {
                        bud,
                        red_end: r,
                        green_end: g,
                        red_root,
                        green_root,
                        red_step_to_bud,
                        green_step_to_bud,
                        tenacity: t,
                    };
                    self.form_petal(rec, &support);
                }
            }
        }
        None
    }

    fn form_petal(&mut self, rec: PetalRecord, support: &[(Vertex, Side)]) {
        let (bud, t) = (rec.bud, rec.tenacity);
        self.st.record_petal(rec, support);
        for &(x, _) in support {
            self.forest
                .union_up(x)
                .expect("support node is a set representative");
            self.st.concat_members(bud, x);
        }
        debug_assert!(support.iter().all(|&(x, _)| self.find(x) == bud));
        for &(x, _) in support {
            let fresh = self.st.assign_maxlevel(x, t);
            debug_assert!(fresh, "support node {x} already had both levels");
            self.st.scan_gained(self.g, self.m, x, t);
            // MIN scans x again at its new level for props
            let lv = self.st.maxlevel(x).expect("just assigned");
            self.st.level_list_mut(lv).push(x);
        }
        if let Some(tr) = self.trace.as_deref_mut() {
            tr.petals.push(PetalEvent {
                bud,
                tenacity: t,
                members: self.st.members(bud),
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, Fixture};
    use crate::merge::Backend;
    use crate::oracle::path_levels;

    fn assign(
        f: &Fixture,
        backend: Backend,
    ) -> (AssignOutcome, PhaseState, MergeForest, PhaseTrace) {
        let n = f.graph.vertex_count();
        let mut st = PhaseState::new(&f.graph);
        let mut forest = MergeForest::new(backend, n as usize + 1);
        let mut sc = Scratch::new(n);
        let mut tr = PhaseTrace::default();
        let out = Assignment {
            g: &f.graph,
            m: &f.matching,
            st: &mut st,
            forest: &mut forest,
            sc: &mut sc,
            trace: Some(&mut tr),
        }
        .run();
        (out, st, forest, tr)
    }

    #[test]
    fn g1_forms_one_petal_and_exhausts() {
        for backend in [Backend::Reference, Backend::IncrementalTree] {
            let f = fixtures::g1();
            let (out, st, mut forest, tr) = assign(&f, backend);
            assert_eq!(out, AssignOutcome::Exhausted);
            assert_eq!(tr.petals.len(), 1);
            assert_eq!(tr.petals[0].bud, 3);
            assert_eq!(tr.petals[0].tenacity, 7);
            assert_eq!(tr.petals[0].members, vec![3, 4, 5]);
            assert_eq!(forest.find(4), Ok(3));
            assert_eq!(forest.find(5), Ok(3));
            assert_eq!(st.maxlevel(4), Some(4));
            assert_eq!(st.maxlevel(5), Some(4));
        }
    }

    #[test]
    fn g2_stops_at_first_bridge() {
        let f = fixtures::g2();
        let (out, st, _, _) = assign(&f, Backend::Reference);
        let AssignOutcome::FirstAp { l_m, bucket } = out else {
            panic!("expected an augmenting path");
        };
        assert_eq!(l_m, 5);
        assert_eq!(
            bucket.iter().map(|&e| f.graph.edge(e)).collect::<Vec<_>>(),
            vec![(3, 4)]
        );
        assert_eq!(st.oddlevel(2), Some(1));
        assert_eq!(st.oddlevel(5), Some(1));
        assert_eq!(st.evenlevel(3), Some(2));
        assert_eq!(st.evenlevel(4), Some(2));
        // the tenacity-7 bridge (3,5) is never reached
        assert_eq!(st.maxlevel(3), None);
    }

    #[test]
    fn levels_match_enumeration_on_fixtures() {
        for f in fixtures::all() {
            let (_, st, _, _) = assign(&f, Backend::Reference);
            let want = path_levels(&f.graph, &f.matching).unwrap();
            for v in f.graph.vertices() {
                let want_min = want.minlevel(v);
                let got_min = (st.minlevel(v) != INF).then(|| st.minlevel(v));
                assert_eq!(got_min, want_min, "{} minlevel of {v}", f.name);
            }
        }
    }

    #[test]
    fn g20_second_component_first() {
        let f = fixtures::g20();
        let (out, _, _, tr) = assign(&f, Backend::IncrementalTree);
        assert!(matches!(out, AssignOutcome::FirstAp { l_m: 7, .. }));
        assert!(tr.petals.is_empty());
    }
}
