//! Set merging over a growing forest.
//!
//! Nodes are added as roots or as leaves under an existing node; a union
//! always contracts a set into the set holding the tree parent of its
//! top-most node, so every set stays a connected subtree and its
//! representative is the subtree's root.
//!
//! Two backends answer the same queries:
//!
//! * [`ReferenceForest`]: union-find with path halving and union by size,
//!   carrying an explicit representative label per set.
//! * [`IncrementalTreeForest`]: micro/macro decomposition. Nodes are packed
//!   into micro trees of at most `b` nodes in insertion order, so each
//!   node's ancestors inside its micro tree form a `b`-bit mask and a find
//!   inside a micro tree is one mask intersection plus a table lookup.
//!   Finds that leave a micro tree continue through a union-find over the
//!   boundary nodes (parents of micro-tree roots).

use std::cell::OnceCell;

use thiserror::Error;

use crate::graph::{Vertex, NIL};

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum MergeError {
    #[error("node {0} already present")]
    Duplicate(Vertex),
    #[error("node {0} not present")]
    Unknown(Vertex),
    #[error("set of node {0} is rooted at a forest root")]
    NoParentSet(Vertex),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Backend {
    #[default]
    Reference,
    IncrementalTree,
}

impl std::str::FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "reference" => Ok(Backend::Reference),
            "inctree" | "incremental-tree" => Ok(Backend::IncrementalTree),
            other => Err(format!("unknown backend `{other}` (reference|inctree)")),
        }
    }
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Backend::Reference => "reference",
            Backend::IncrementalTree => "inctree",
        })
    }
}

/// Operation counters. `steps` counts elementary pointer/mask operations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MergeWork {
    pub finds: u64,
    pub unions: u64,
    pub grows: u64,
    pub steps: u64,
}

pub trait SetMerging {
    fn make_root(&mut self, v: Vertex) -> Result<(), MergeError>;
    fn grow(&mut self, parent: Vertex, child: Vertex) -> Result<(), MergeError>;
    /// Merges the set of `v` into the set containing the tree parent of
    /// that set's representative.
    fn union_up(&mut self, v: Vertex) -> Result<(), MergeError>;
    fn find(&mut self, v: Vertex) -> Result<Vertex, MergeError>;
    fn contains(&self, v: Vertex) -> bool;
    fn tree_parent(&self, v: Vertex) -> Option<Vertex>;
    fn work(&self) -> MergeWork;
}

/// Union-find with an explicit representative label.
#[derive(Debug, Clone)]
pub struct ReferenceForest {
    present: Vec<bool>,
    tree_parent: Vec<Vertex>,
    uf: Vec<Vertex>,
    size: Vec<u32>,
    label: Vec<Vertex>,
    work: MergeWork,
}

impl ReferenceForest {
    pub fn new(capacity: usize) -> Self {
        ReferenceForest {
            present: vec![false; capacity],
            tree_parent: vec![NIL; capacity],
            uf: (0..capacity as Vertex).collect(),
            size: vec![1; capacity],
            label: (0..capacity as Vertex).collect(),
            work: MergeWork::default(),
        }
    }

    fn root(&mut self, mut v: Vertex) -> Vertex {
        while self.uf[v as usize] != v {
            let gp = self.uf[self.uf[v as usize] as usize];
            self.uf[v as usize] = gp;
            v = gp;
            self.work.steps += 1;
        }
        v
    }

    fn check_new(&self, v: Vertex) -> Result<(), MergeError> {
        if (v as usize) >= self.present.len() || v == NIL {
            return Err(MergeError::Unknown(v));
        }
        if self.present[v as usize] {
            return Err(MergeError::Duplicate(v));
        }
        Ok(())
    }

    fn check_present(&self, v: Vertex) -> Result<(), MergeError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(MergeError::Unknown(v))
        }
    }
}

impl SetMerging for ReferenceForest {
    fn make_root(&mut self, v: Vertex) -> Result<(), MergeError> {
        self.check_new(v)?;
        self.present[v as usize] = true;
        Ok(())
    }

    fn grow(&mut self, parent: Vertex, child: Vertex) -> Result<(), MergeError> {
        self.check_present(parent)?;
        self.check_new(child)?;
        self.present[child as usize] = true;
        self.tree_parent[child as usize] = parent;
        self.work.grows += 1;
        self.work.steps += 1;
        Ok(())
    }

    fn union_up(&mut self, v: Vertex) -> Result<(), MergeError> {
        self.check_present(v)?;
        let a = self.root(v);
        let rep = self.label[a as usize];
        let p = self.tree_parent[rep as usize];
        if p == NIL {
            return Err(MergeError::NoParentSet(v));
        }
        let b = self.root(p);
        let keep = self.label[b as usize];
        let (big, small) = if self.size[a as usize] >= self.size[b as usize] {
            (a, b)
        } else {
            (b, a)
        };
        self.uf[small as usize] = big;
        self.size[big as usize] += self.size[small as usize];
        self.label[big as usize] = keep;
        self.work.unions += 1;
        self.work.steps += 1;
        Ok(())
    }

    fn find(&mut self, v: Vertex) -> Result<Vertex, MergeError> {
        self.check_present(v)?;
        self.work.finds += 1;
        self.work.steps += 1;
        let r = self.root(v);
        Ok(self.label[r as usize])
    }

    fn contains(&self, v: Vertex) -> bool {
        (v as usize) < self.present.len() && self.present[v as usize]
    }

    fn tree_parent(&self, v: Vertex) -> Option<Vertex> {
        self.contains(v)
            .then(|| self.tree_parent[v as usize])
            .filter(|&p| p != NIL)
    }

    fn work(&self) -> MergeWork {
        self.work
    }
}

type Mask = u16;
const NO_MICRO: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct Micro {
    nodes: Vec<Vertex>,
    unmarked: Mask,
    /// Tree parent of the micro root, `NIL` for a forest root.
    ext_parent: Vertex,
    /// Boundary nodes in this micro tree not yet linked upward.
    pending: Vec<Vertex>,
}

/// Micro/macro incremental-tree set union.
#[derive(Debug, Clone)]
pub struct IncrementalTreeForest {
    micro_size: usize,
    micro_of: Vec<u32>,
    local: Vec<u8>,
    anc: Vec<Mask>,
    micros: Vec<Micro>,
    /// Boundary-node union-find: `macro_up[y]` is the boundary node above
    /// `y` once every micro ancestor of `y` is merged, else `NIL`.
    macro_up: Vec<Vertex>,
    is_boundary: Vec<bool>,
    table: OnceCell<Vec<u8>>,
    work: MergeWork,
}

/// Micro-tree size: `log2(capacity)/4` rounded up to a power of two and
/// clamped to `8..=16` so a micro set fits one small word.
pub fn micro_size_for(capacity: usize) -> usize {
    let lg = (usize::BITS - capacity.max(2).leading_zeros()) as usize;
    lg.div_ceil(4).max(1).next_power_of_two().clamp(8, 16)
}

impl IncrementalTreeForest {
    pub fn new(capacity: usize) -> Self {
        Self::with_micro_size(capacity, micro_size_for(capacity))
    }

    pub fn with_micro_size(capacity: usize, micro_size: usize) -> Self {
        assert!((1..=Mask::BITS as usize).contains(&micro_size));
        IncrementalTreeForest {
            micro_size,
            micro_of: vec![NO_MICRO; capacity],
            local: vec![0; capacity],
            anc: vec![0; capacity],
            micros: Vec::new(),
            macro_up: vec![NIL; capacity],
            is_boundary: vec![false; capacity],
            table: OnceCell::new(),
            work: MergeWork::default(),
        }
    }

    pub fn micro_size(&self) -> usize {
        self.micro_size
    }

    /// Highest set bit of a micro set, by table.
    fn highest(&self, mask: Mask) -> usize {
        let b = self.micro_size;
        let table = self.table.get_or_init(|| {
            let mut t = vec![0u8; 1 << b];
            for (m, slot) in t.iter_mut().enumerate().skip(1) {
                *slot = (usize::BITS - 1 - m.leading_zeros()) as u8;
            }
            t
        });
        table[mask as usize] as usize
    }

    fn check_new(&self, v: Vertex) -> Result<(), MergeError> {
        if (v as usize) >= self.micro_of.len() || v == NIL {
            return Err(MergeError::Unknown(v));
        }
        if self.micro_of[v as usize] != NO_MICRO {
            return Err(MergeError::Duplicate(v));
        }
        Ok(())
    }

    fn new_micro(&mut self, root: Vertex, ext_parent: Vertex) {
        let id = self.micros.len() as u32;
        self.micros.push(Micro {
            nodes: vec![root],
            unmarked: 1,
            ext_parent,
            pending: Vec::new(),
        });
        self.micro_of[root as usize] = id;
        self.local[root as usize] = 0;
        self.anc[root as usize] = 1;
    }

    fn local_find(&mut self, v: Vertex) -> Option<Vertex> {
        self.work.steps += 1;
        let m = &self.micros[self.micro_of[v as usize] as usize];
        let mask = self.anc[v as usize] & m.unmarked;
        if mask == 0 {
            None
        } else {
            let i = self.highest(mask);
            Some(self.micros[self.micro_of[v as usize] as usize].nodes[i])
        }
    }

    fn macro_find(&mut self, mut y: Vertex) -> Vertex {
        while self.macro_up[y as usize] != NIL {
            let up = self.macro_up[y as usize];
            let upup = self.macro_up[up as usize];
            if upup != NIL {
                self.macro_up[y as usize] = upup;
            }
            y = up;
            self.work.steps += 1;
        }
        y
    }

    /// Links every pending boundary node of micro `mid` whose micro
    /// ancestors are all merged.
    fn link_escaped(&mut self, mid: usize) {
        let unmarked = self.micros[mid].unmarked;
        let ext = self.micros[mid].ext_parent;
        let mut pending = std::mem::take(&mut self.micros[mid].pending);
        pending.retain(|&y| {
            self.work.steps += 1;
            if self.anc[y as usize] & unmarked == 0 {
                debug_assert_ne!(ext, NIL);
                self.macro_up[y as usize] = ext;
                false
            } else {
                true
            }
        });
        self.micros[mid].pending = pending;
    }

    fn register_boundary(&mut self, y: Vertex) {
        if self.is_boundary[y as usize] {
            return;
        }
        self.is_boundary[y as usize] = true;
        let mid = self.micro_of[y as usize] as usize;
        self.micros[mid].pending.push(y);
        self.link_escaped(mid);
    }
}

impl SetMerging for IncrementalTreeForest {
    fn make_root(&mut self, v: Vertex) -> Result<(), MergeError> {
        self.check_new(v)?;
        self.new_micro(v, NIL);
        Ok(())
    }

    fn grow(&mut self, parent: Vertex, child: Vertex) -> Result<(), MergeError> {
        if !self.contains(parent) {
            return Err(MergeError::Unknown(parent));
        }
        self.check_new(child)?;
        self.work.grows += 1;
        self.work.steps += 1;
        let mid = self.micro_of[parent as usize] as usize;
        if self.micros[mid].nodes.len() < self.micro_size {
            let idx = self.micros[mid].nodes.len();
            self.micros[mid].nodes.push(child);
            self.micros[mid].unmarked |= 1 << idx;
            self.micro_of[child as usize] = mid as u32;
            self.local[child as usize] = idx as u8;
            self.anc[child as usize] = self.anc[parent as usize] | (1 << idx);
        } else {
            self.new_micro(child, parent);
            self.register_boundary(parent);
        }
        Ok(())
    }

    fn union_up(&mut self, v: Vertex) -> Result<(), MergeError> {
        let rep = self.find(v)?;
        self.work.finds -= 1;
        let mid = self.micro_of[rep as usize] as usize;
        let idx = self.local[rep as usize];
        if idx == 0 && self.micros[mid].ext_parent == NIL {
            return Err(MergeError::NoParentSet(v));
        }
        self.work.unions += 1;
        self.micros[mid].unmarked &= !(1 << idx);
        self.link_escaped(mid);
        Ok(())
    }

    fn find(&mut self, v: Vertex) -> Result<Vertex, MergeError> {
        if !self.contains(v) {
            return Err(MergeError::Unknown(v));
        }
        self.work.finds += 1;
        if let Some(r) = self.local_find(v) {
            return Ok(r);
        }
        let ext = self.micros[self.micro_of[v as usize] as usize].ext_parent;
        let top = self.macro_find(ext);
        Ok(self
            .local_find(top)
            .expect("unlinked boundary node has an unmerged micro ancestor"))
    }

    fn contains(&self, v: Vertex) -> bool {
        (v as usize) < self.micro_of.len() && self.micro_of[v as usize] != NO_MICRO
    }

    fn tree_parent(&self, v: Vertex) -> Option<Vertex> {
        if !self.contains(v) {
            return None;
        }
        let m = &self.micros[self.micro_of[v as usize] as usize];
        let idx = self.local[v as usize] as usize;
        if idx == 0 {
            return (m.ext_parent != NIL).then_some(m.ext_parent);
        }
        // parent is the highest proper ancestor inside the micro tree
        let proper = self.anc[v as usize] & !(1 << idx);
        Some(m.nodes[(Mask::BITS - 1 - proper.leading_zeros()) as usize])
    }

    fn work(&self) -> MergeWork {
        self.work
    }
}

/// Backend-selected forest; the engine talks to this type.
#[derive(Debug, Clone)]
pub enum MergeForest {
    Reference(ReferenceForest),
    IncrementalTree(IncrementalTreeForest),
}

impl MergeForest {
    pub fn new(backend: Backend, capacity: usize) -> Self {
        match backend {
            Backend::Reference => MergeForest::Reference(ReferenceForest::new(capacity)),
            Backend::IncrementalTree => {
                MergeForest::IncrementalTree(IncrementalTreeForest::new(capacity))
            }
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            MergeForest::Reference(_) => Backend::Reference,
            MergeForest::IncrementalTree(_) => Backend::IncrementalTree,
        }
    }

    fn inner(&self) -> &dyn SetMerging {
        match self {
            MergeForest::Reference(f) => f,
            MergeForest::IncrementalTree(f) => f,
        }
    }

    fn inner_mut(&mut self) -> &mut dyn SetMerging {
        match self {
            MergeForest::Reference(f) => f,
            MergeForest::IncrementalTree(f) => f,
        }
    }
}

impl SetMerging for MergeForest {
    fn make_root(&mut self, v: Vertex) -> Result<(), MergeError> {
        self.inner_mut().make_root(v)
    }
    fn grow(&mut self, parent: Vertex, child: Vertex) -> Result<(), MergeError> {
        self.inner_mut().grow(parent, child)
    }
    fn union_up(&mut self, v: Vertex) -> Result<(), MergeError> {
        self.inner_mut().union_up(v)
    }
    fn find(&mut self, v: Vertex) -> Result<Vertex, MergeError> {
        self.inner_mut().find(v)
    }
    fn contains(&self, v: Vertex) -> bool {
        self.inner().contains(v)
    }
    fn tree_parent(&self, v: Vertex) -> Option<Vertex> {
        self.inner().tree_parent(v)
    }
    fn work(&self) -> MergeWork {
        self.inner().work()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn both(cap: usize) -> [MergeForest; 2] {
        [
            MergeForest::new(Backend::Reference, cap),
            MergeForest::IncrementalTree(IncrementalTreeForest::with_micro_size(cap, 2)),
        ]
    }

    #[test]
    fn make_root_and_duplicates() {
        for mut f in both(4) {
            f.make_root(1).unwrap();
            assert_eq!(f.find(1), Ok(1));
            assert_eq!(f.make_root(1), Err(MergeError::Duplicate(1)));
            f.make_root(2).unwrap();
            assert_eq!(f.find(2), Ok(2));
            assert_eq!(f.find(1), Ok(1));
            assert_eq!(f.find(3), Err(MergeError::Unknown(3)));
        }
    }

    #[test]
    fn grow_errors() {
        for mut f in both(10) {
            f.make_root(1).unwrap();
            f.grow(1, 2).unwrap();
            assert_eq!(f.find(2), Ok(2));
            assert_eq!(f.grow(9, 3), Err(MergeError::Unknown(9)));
            assert_eq!(f.grow(1, 2), Err(MergeError::Duplicate(2)));
            f.grow(2, 3).unwrap();
            assert_eq!(f.find(3), Ok(3));
            assert_eq!(f.tree_parent(3), Some(2));
            assert_eq!(f.tree_parent(1), None);
        }
    }

    #[test]
    fn union_up_merges_into_parent() {
        for mut f in both(10) {
            f.make_root(1).unwrap();
            f.grow(1, 2).unwrap();
            f.grow(2, 3).unwrap();
            f.union_up(3).unwrap();
            assert_eq!(f.find(3), Ok(2));
            f.union_up(2).unwrap();
            assert_eq!(f.find(3), Ok(1));
            assert_eq!(f.find(2), Ok(1));
            assert_eq!(f.union_up(3), Err(MergeError::NoParentSet(3)));
        }
    }

    #[test]
    fn petal_union_over_support() {
        // 1 <- 2 <- 3, 3 <- 4, 3 <- 5 ; merging support {4,5} into bud 3
        for mut f in both(10) {
            f.make_root(1).unwrap();
            f.grow(1, 2).unwrap();
            f.grow(2, 3).unwrap();
            f.grow(3, 4).unwrap();
            f.grow(3, 5).unwrap();
            f.union_up(5).unwrap();
            f.union_up(4).unwrap();
            assert_eq!(f.find(4), Ok(3));
            assert_eq!(f.find(5), Ok(3));
            assert_eq!(f.find(2), Ok(2));
        }
    }

    #[test]
    fn micro_size_is_word_friendly() {
        assert_eq!(micro_size_for(16), 8);
        assert_eq!(micro_size_for(1 << 20), 8);
        assert_eq!(IncrementalTreeForest::new(100).micro_size(), 8);
    }
}
