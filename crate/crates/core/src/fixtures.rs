//! Small hand-built instances with prescribed initial matchings.

use crate::graph::{Graph, Matching, Vertex};

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub graph: Graph,
    pub matching: Matching,
}

fn fixture(
    name: &'static str,
    n: u32,
    edges: &[(Vertex, Vertex)],
    pairs: &[(Vertex, Vertex)],
) -> Fixture {
    Fixture {
        name,
        graph: Graph::from_edges(n, edges),
        matching: Matching::from_pairs(n, pairs),
    }
}

/// Triangle 3-4-5 hanging off the path 1-2-3; free {1}.
pub fn g1() -> Fixture {
    fixture(
        "G1",
        5,
        &[(1, 2), (2, 3), (3, 4), (3, 5), (4, 5)],
        &[(2, 3), (4, 5)],
    )
}

/// G1 plus the pendant edge (5,6); free {1,6}.
pub fn g2() -> Fixture {
    fixture(
        "G2",
        6,
        &[(1, 2), (2, 3), (3, 4), (3, 5), (4, 5), (5, 6)],
        &[(2, 3), (4, 5)],
    )
}

/// Augmenting path of length 7 through a triangle; free {1,8}.
pub fn g9() -> Fixture {
    fixture(
        "G9",
        8,
        &[
            (1, 2),
            (2, 3),
            (3, 4),
            (3, 5),
            (4, 5),
            (5, 6),
            (6, 7),
            (7, 8),
        ],
        &[(2, 3), (4, 5), (6, 7)],
    )
}

/// Two components, the path 6..13 listed first, then a copy of G1.
pub fn g20() -> Fixture {
    fixture(
        "G20",
        13,
        &[
            (6, 7),
            (7, 8),
            (8, 9),
            (9, 10),
            (10, 11),
            (11, 12),
            (12, 13),
            (1, 2),
            (2, 3),
            (3, 4),
            (3, 5),
            (4, 5),
        ],
        &[(7, 8), (9, 10), (11, 12), (2, 3), (4, 5)],
    )
}

pub fn all() -> Vec<Fixture> {
    vec![g1(), g2(), g9(), g20()]
}
