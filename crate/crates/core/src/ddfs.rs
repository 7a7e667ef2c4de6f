//! Double depth-first search over petal nodes.
//!
//! Two searches descend from the ends of a bridge, red and green, each
//! through props towards lower levels. The one at the higher level moves
//! (red on ties). When red lands on green's current node, red keeps it and
//! green must back off; when green lands on red's, green backs off. A side
//! that backs off to nothing ends the search: either both reach distinct
//! free vertices, or the last contested node is the bottleneck.

use crate::augmentation::AnchorStack;
use crate::graph::{Vertex, NIL};
use crate::phase::{PhaseState, Side, TreeStep};

#[derive(Debug)]
pub(crate) struct Scratch {
    stamp: u32,
    mark: Vec<u32>,
    col: Vec<Side>,
    cursor: Vec<u32>,
}

impl Scratch {
    pub fn new(n: u32) -> Self {
        let size = n as usize + 1;
        Scratch {
            stamp: 0,
            mark: vec![0; size],
            col: vec![Side::Red; size],
            cursor: vec![0; size],
        }
    }

    fn begin(&mut self) {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.stamp = 1;
        }
    }

    fn color(&self, v: Vertex) -> Option<Side> {
        (self.mark[v as usize] == self.stamp).then(|| self.col[v as usize])
    }

    fn paint(&mut self, v: Vertex, side: Side) {
        if self.mark[v as usize] != self.stamp {
            self.mark[v as usize] = self.stamp;
            self.cursor[v as usize] = 0;
        }
        self.col[v as usize] = side;
    }
}

#[derive(Debug)]
pub(crate) enum Outcome {
    /// Both ends lie in the same petal*.
    Degenerate,
    Petal {
        bud: Vertex,
        support: Vec<(Vertex, Side)>,
        red_root: Vertex,
        green_root: Vertex,
        red_step_to_bud: Option<TreeStep>,
        green_step_to_bud: Option<TreeStep>,
        /// The anchored search had to leave the anchor path to succeed.
        rerouted: bool,
    },
    Augmenting {
        red_root: Vertex,
        green_root: Vertex,
        red_free: Vertex,
        green_free: Vertex,
        rerouted: bool,
    },
}

pub(crate) struct Ddfs<'a, F: FnMut(Vertex) -> Vertex> {
    st: &'a mut PhaseState,
    sc: &'a mut Scratch,
    bud: F,
    anchor: Option<&'a AnchorStack>,
    /// Element index of red's node while red follows the anchor path.
    eps: usize,
    anchored: bool,
    /// Bottleneck a strictly anchored search would have reported.
    literal_bud: Vertex,
    red: Vec<Vertex>,
    green: Vec<Vertex>,
    green_floor: usize,
    dcv: Vertex,
    dcv_green_step: Option<TreeStep>,
    dcv_red_step: Option<TreeStep>,
    visited: Vec<Vertex>,
}

impl<'a, F: FnMut(Vertex) -> Vertex> Ddfs<'a, F> {
    pub fn new(st: &'a mut PhaseState, sc: &'a mut Scratch, bud: F) -> Self {
        sc.begin();
        st.counters.ddfs_runs += 1;
        Ddfs {
            st,
            sc,
            bud,
            anchor: None,
            eps: 0,
            anchored: false,
            literal_bud: NIL,
            red: Vec::new(),
            green: Vec::new(),
            green_floor: 0,
            dcv: NIL,
            dcv_green_step: None,
            dcv_red_step: None,
            visited: Vec::new(),
        }
    }

    fn level(&self, v: Vertex) -> u32 {
        self.st.minlevel(v)
    }

    fn take(&mut self, v: Vertex, side: Side, step: Option<TreeStep>) {
        let fresh = self.sc.color(v).is_none();
        self.sc.paint(v, side);
        if let Some(s) = step {
            self.st.tree_step[v as usize] = s;
        }
        if fresh {
            self.visited.push(v);
        }
        match side {
            Side::Red => self.red.push(v),
            Side::Green => self.green.push(v),
        }
    }

    /// Next undeleted predecessor of node `x`.
    fn next_pred(&mut self, x: Vertex) -> Option<Vertex> {
        let preds = &self.st.preds[x as usize];
        let cur = &mut self.sc.cursor[x as usize];
        while (*cur as usize) < preds.len() {
            let p = preds[*cur as usize];
            *cur += 1;
            self.st.counters.edge_scans += 1;
            if !self.st.deleted[p as usize] {
                return Some(p);
            }
        }
        None
    }

    /// Plain search from the bridge `(r, g)`.
    pub fn run(mut self, r: Vertex, g: Vertex) -> Outcome {
        let rr = (self.bud)(r);
        let gr = (self.bud)(g);
        if rr == gr {
            return Outcome::Degenerate;
        }
        self.take(rr, Side::Red, None);
        self.take(gr, Side::Green, None);
        self.green_floor = 1;
        self.main(rr, gr)
    }

    /// Search from the bridge `(r, g)` with `r` in the tip element of the
    /// anchor path `A`. Red walks down `A` as long as it can.
    pub fn run_anchored(mut self, stack: &'a AnchorStack, g: Vertex) -> Outcome {
        self.anchor = Some(stack);
        let tip = stack.len();
        let rr = stack.bud(tip);
        let red_root = rr;
        self.anchored = true;
        self.eps = tip;
        self.take(rr, Side::Red, None);
        let gr = match stack.element_of(g) {
            Some(j) if j >= tip => return Outcome::Degenerate,
            Some(j) => {
                self.red_down_to(j);
                // green's root is red's node: red yields it at once
                let w = stack.bud(j);
                self.dcv = w;
                self.dcv_green_step = None;
                self.green_exhausted_at(w);
                if self.red.is_empty() {
                    return self.bottleneck(red_root, w);
                }
                w
            }
            None => {
                let u = (self.bud)(g);
                self.take(u, Side::Green, None);
                self.green_floor = 1;
                u
            }
        };
        self.main(red_root, gr)
    }

    fn red_down_to(&mut self, j: usize) {
        let stack = self.anchor.expect("anchored");
        while self.eps > j {
            let from = stack.bud(self.eps);
            let pred = stack.entry_pred(self.eps);
            self.eps -= 1;
            let y = stack.bud(self.eps);
            self.take(y, Side::Red, Some(TreeStep { from, pred }));
        }
    }

    fn main(&mut self, red_root: Vertex, green_root: Vertex) -> Outcome {
        loop {
            let (Some(&cr), Some(&cg)) = (self.red.last(), self.green.last()) else {
                unreachable!("both stacks are non-empty inside the loop");
            };
            let (lr, lg) = (self.level(cr), self.level(cg));
            if lr == 0 && lg == 0 {
                debug_assert_ne!(cr, cg);
                return Outcome::Augmenting {
                    red_root,
                    green_root,
                    red_free: cr,
                    green_free: cg,
                    rerouted: self.literal_bud != NIL,
                };
            }
            let done = if lr >= lg {
                self.step_red(cr)
            } else {
                self.step_green(cg)
            };
            if done {
                let bud = self.dcv;
                return self.bottleneck_outcome(red_root, green_root, bud);
            }
        }
    }

    /// One red move. Returns true when red has run out.
    fn step_red(&mut self, x: Vertex) -> bool {
        if self.anchored {
            self.red_down_to(self.eps - 1);
            return false;
        }
        match self.next_pred(x) {
            Some(p) => {
                let y = (self.bud)(p);
                let step = Some(TreeStep { from: x, pred: p });
                match self.sc.color(y) {
                    None => self.take(y, Side::Red, step),
                    Some(Side::Green) if self.green.last() == Some(&y) => {
                        self.dcv = y;
                        self.dcv_green_step = Some(self.st.tree_step[y as usize]);
                        if self.green.len() == 1 {
                            // green's root has no tree parent
                            self.dcv_green_step = None;
                        }
                        self.sc.paint(y, Side::Red);
                        self.st.tree_step[y as usize] = TreeStep { from: x, pred: p };
                        self.red.push(y);
                        if self.green.len() > self.green_floor {
                            self.green.pop();
                        } else {
                            self.green_reclaims();
                        }
                    }
                    _ => {}
                }
                self.red.is_empty()
            }
            None => {
                self.red.pop();
                self.red.is_empty()
            }
        }
    }

    /// Green cannot back off below its floor: it takes the contested node
    /// back and red must search for another way down.
    fn green_reclaims(&mut self) {
        let w = self.dcv;
        self.green.pop();
        self.green_exhausted_at(w);
    }

    /// Green takes `w` for good; red backs off from it.
    fn green_exhausted_at(&mut self, w: Vertex) {
        let at = self
            .red
            .iter()
            .rposition(|&v| v == w)
            .expect("contested node is on red's stack");
        self.dcv_red_step = (at > 0).then(|| self.st.tree_step[w as usize]);
        self.red.truncate(at);
        self.sc.paint(w, Side::Green);
        if let Some(s) = self.dcv_green_step {
            self.st.tree_step[w as usize] = s;
        }
        self.green.push(w);
        self.green_floor = self.green.len();
        if self.anchored {
            self.anchored = false;
            self.literal_bud = w;
        }
    }

    /// One green move. Returns true when red has run out.
    fn step_green(&mut self, x: Vertex) -> bool {
        match self.next_pred(x) {
            Some(p) => {
                if self.anchored {
                    let stack = self.anchor.expect("anchored");
                    if let Some(j) = stack.element_of(p) {
                        if j <= self.eps {
                            self.red_down_to(j);
                            self.dcv = stack.bud(j);
                            self.dcv_green_step = Some(TreeStep { from: x, pred: p });
                        }
                        return false;
                    }
                }
                let y = (self.bud)(p);
                let step = TreeStep { from: x, pred: p };
                match self.sc.color(y) {
                    None => self.take(y, Side::Green, Some(step)),
                    Some(Side::Red) if self.red.last() == Some(&y) => {
                        self.dcv = y;
                        self.dcv_green_step = Some(step);
                    }
                    _ => {}
                }
                false
            }
            None => {
                if self.green.len() > self.green_floor {
                    self.green.pop();
                    false
                } else {
                    let w = self.dcv;
                    assert!(w != NIL, "green exhausted with no contested node");
                    self.green_exhausted_at(w);
                    self.red.is_empty()
                }
            }
        }
    }

    fn bottleneck(&mut self, red_root: Vertex, bud: Vertex) -> Outcome {
        self.bottleneck_outcome(red_root, bud, bud)
    }

    fn bottleneck_outcome(&mut self, red_root: Vertex, green_root: Vertex, bud: Vertex) -> Outcome {
        assert_eq!(
            self.green.last(),
            Some(&bud),
            "bottleneck is not held by green"
        );
        let support = self
            .visited
            .iter()
            .copied()
            .filter(|&v| v != bud)
            .map(|v| (v, self.sc.color(v).expect("visited nodes are colored")))
            .collect();
        let rerouted = self.literal_bud != NIL && self.literal_bud != bud;
        Outcome::Petal {
            bud,
            support,
            red_root,
            green_root,
            red_step_to_bud: self.dcv_red_step,
            green_step_to_bud: self.dcv_green_step,
            rerouted,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::{AssignOutcome, Assignment};
    use crate::fixtures;
    use crate::merge::{Backend, MergeForest, SetMerging};

    #[test]
    fn g2_bridge_reaches_both_free_vertices() {
        let f = fixtures::g2();
        let n = f.graph.vertex_count();
        let mut st = PhaseState::new(&f.graph);
        let mut forest = MergeForest::new(Backend::Reference, n as usize + 1);
        let mut sc = Scratch::new(n);
        let out = Assignment {
            g: &f.graph,
            m: &f.matching,
            st: &mut st,
            forest: &mut forest,
            sc: &mut sc,
            trace: None,
        }
        .run();
        assert!(matches!(out, AssignOutcome::FirstAp { l_m: 5, .. }));
        // the search is repeatable on the frozen state
        let outcome = Ddfs::new(&mut st, &mut sc, |v| forest.find(v).unwrap()).run(3, 4);
        match outcome {
            Outcome::Augmenting {
                red_free,
                green_free,
                rerouted,
                ..
            } => {
                assert_eq!((red_free, green_free), (1, 6));
                assert!(!rerouted);
            }
            other => panic!("unexpected {other:?}"),
        }
        let path = st.augmenting_path(&f.matching, 3, 4, 3, 4, 1, 6);
        assert_eq!(path, vec![1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn g1_bridge_inside_its_petal_is_degenerate() {
        let f = fixtures::g1();
        let n = f.graph.vertex_count();
        let mut st = PhaseState::new(&f.graph);
        let mut forest = MergeForest::new(Backend::IncrementalTree, n as usize + 1);
        let mut sc = Scratch::new(n);
        Assignment {
            g: &f.graph,
            m: &f.matching,
            st: &mut st,
            forest: &mut forest,
            sc: &mut sc,
            trace: None,
        }
        .run();
        let outcome = Ddfs::new(&mut st, &mut sc, |v| forest.find(v).unwrap()).run(4, 5);
        assert!(matches!(outcome, Outcome::Degenerate));
    }

    #[test]
    fn stamps_survive_wraparound() {
        let mut sc = Scratch::new(3);
        sc.stamp = u32::MAX;
        sc.paint(2, Side::Green);
        sc.begin();
        assert_eq!(sc.stamp, 1);
        assert_eq!(sc.color(2), None);
    }
}
