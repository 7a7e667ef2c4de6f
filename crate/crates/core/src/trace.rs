//! Optional per-phase event log, used by the fixture tests and `--trace`.

use crate::graph::Vertex;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PetalEvent {
    pub bud: Vertex,
    pub tenacity: u32,
    /// All vertices of the petal* after the merge, bud first.
    pub members: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AugEvent {
    Bottleneck {
        bud: Vertex,
        buds_after: Vec<Vertex>,
        members: Vec<Vertex>,
    },
    DeadEnd {
        bud: Vertex,
        deleted: Vec<Vertex>,
    },
    Augment {
        path: Vec<Vertex>,
        deleted: Vec<Vertex>,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PhaseTrace {
    /// Petals formed during level assignment, in order.
    pub petals: Vec<PetalEvent>,
    /// Levels when the assignment subphase stopped; index 0 unused.
    pub even: Vec<Option<u32>>,
    pub odd: Vec<Option<u32>>,
    pub l_m: Option<u32>,
    pub events: Vec<AugEvent>,
}

impl PhaseTrace {
    pub fn paths(&self) -> Vec<&[Vertex]> {
        self.events
            .iter()
            .filter_map(|e| match e {
                AugEvent::Augment { path, .. } => Some(path.as_slice()),
                _ => None,
            })
            .collect()
    }

    pub fn bottlenecks(&self) -> Vec<Vertex> {
        self.events
            .iter()
            .filter_map(|e| match e {
                AugEvent::Bottleneck { bud, .. } => Some(*bud),
                _ => None,
            })
            .collect()
    }
}
