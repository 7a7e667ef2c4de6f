//! Slow, independent references for testing the engine.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::graph::{Graph, Matching, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance too large for this oracle: {what} = {got}, limit {limit}")]
    TooLarge {
        what: &'static str,
        got: usize,
        limit: usize,
    },
}

pub const BRUTE_FORCE_MAX_EDGES: usize = 28;
pub const LEVEL_ORACLE_MAX_VERTICES: usize = 2000;
pub const ENUMERATION_MAX_VERTICES: usize = 16;

/// Maximum matching size by exhaustive search over edge subsets.
pub fn brute_force_max(g: &Graph) -> Result<usize, OracleError> {
    let m = g.edge_count();
    if m > BRUTE_FORCE_MAX_EDGES {
        return Err(OracleError::TooLarge {
            what: "edges",
            got: m,
            limit: BRUTE_FORCE_MAX_EDGES,
        });
    }
    fn go(edges: &[(Vertex, Vertex)], i: usize, used: &mut [bool], cur: usize, best: &mut usize) {
        if cur + (edges.len() - i) <= *best {
            return;
        }
        if i == edges.len() {
            *best = cur;
            return;
        }
        let (u, v) = edges[i];
        if !used[u as usize] && !used[v as usize] {
            used[u as usize] = true;
            used[v as usize] = true;
            go(edges, i + 1, used, cur + 1, best);
            used[u as usize] = false;
            used[v as usize] = false;
        }
        go(edges, i + 1, used, cur, best);
    }
    let mut used = vec![false; g.vertex_count() as usize + 1];
    let mut best = 0;
    go(g.edges(), 0, &mut used, 0, &mut best);
    Ok(best)
}

/// Cubic blossom-shrinking matcher (BFS from each free vertex, blossoms
/// contracted through a base array).
pub fn reference_blossom_max(g: &Graph) -> Matching {
    let n = g.vertex_count() as usize;
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            g.incident(i as Vertex + 1)
                .iter()
                .map(|&e| g.other(e, i as Vertex + 1) as usize - 1)
                .collect()
        })
        .collect();
    let mut mate = vec![usize::MAX; n];
    for root in 0..n {
        if mate[root] == usize::MAX {
            if let Some(end) = blossom_search(&adj, &mate, root) {
                let (mut v, parent) = end;
                while v != usize::MAX {
                    let pv = parent[v];
                    let ppv = mate[pv];
                    mate[v] = pv;
                    mate[pv] = v;
                    v = ppv;
                }
            }
        }
    }
    let pairs: Vec<(Vertex, Vertex)> = (0..n)
        .filter(|&v| mate[v] != usize::MAX && v < mate[v])
        .map(|v| (v as Vertex + 1, mate[v] as Vertex + 1))
        .collect();
    Matching::from_pairs(g.vertex_count(), &pairs)
}

fn blossom_search(adj: &[Vec<usize>], mate: &[usize], root: usize) -> Option<(usize, Vec<usize>)> {
    const NONE: usize = usize::MAX;
    let n = adj.len();
    let mut used = vec![false; n];
    let mut parent = vec![NONE; n];
    let mut base: Vec<usize> = (0..n).collect();
    used[root] = true;
    let mut q = VecDeque::from([root]);
    while let Some(v) = q.pop_front() {
        for &to in &adj[v] {
            if base[v] == base[to] || mate[v] == to {
                continue;
            }
            if to == root || (mate[to] != NONE && parent[mate[to]] != NONE) {
                let cur = lca(mate, &base, &parent, v, to);
                let mut blossom = vec![false; n];
                mark_path(mate, &base, &mut parent, &mut blossom, v, cur, to);
                mark_path(mate, &base, &mut parent, &mut blossom, to, cur, v);
                for i in 0..n {
                    if blossom[base[i]] {
                        base[i] = cur;
                        if !used[i] {
                            used[i] = true;
                            q.push_back(i);
                        }
                    }
                }
            } else if parent[to] == NONE {
                parent[to] = v;
                if mate[to] == NONE {
                    return Some((to, parent));
                }
                used[mate[to]] = true;
                q.push_back(mate[to]);
            }
        }
    }
    None
}

fn lca(mate: &[usize], base: &[usize], parent: &[usize], mut a: usize, mut b: usize) -> usize {
    let mut seen = vec![false; mate.len()];
    loop {
        a = base[a];
        seen[a] = true;
        if mate[a] == usize::MAX {
            break;
        }
        a = parent[mate[a]];
    }
    loop {
        b = base[b];
        if seen[b] {
            return b;
        }
        b = parent[mate[b]];
    }
}

fn mark_path(
    mate: &[usize],
    base: &[usize],
    parent: &mut [usize],
    blossom: &mut [bool],
    mut v: usize,
    b: usize,
    mut child: usize,
) {
    while base[v] != b {
        blossom[base[v]] = true;
        blossom[base[mate[v]]] = true;
        parent[v] = child;
        child = mate[v];
        v = parent[mate[v]];
    }
}

/// Shortest even/odd alternating walk lengths from the free vertices.
/// Index 0 is unused; None means unreachable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelOracleResult {
    pub even: Vec<Option<u32>>,
    pub odd: Vec<Option<u32>>,
}

impl LevelOracleResult {
    pub fn minlevel(&self, v: Vertex) -> Option<u32> {
        match (self.even[v as usize], self.odd[v as usize]) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    pub fn maxlevel(&self, v: Vertex) -> Option<u32> {
        Some(self.even[v as usize]?.max(self.odd[v as usize]?))
    }
}

/// Breadth-first search over (vertex, parity) states.
pub fn level_oracle(g: &Graph, m: &Matching) -> Result<LevelOracleResult, OracleError> {
    let n = g.vertex_count() as usize;
    if n > LEVEL_ORACLE_MAX_VERTICES {
        return Err(OracleError::TooLarge {
            what: "vertices",
            got: n,
            limit: LEVEL_ORACLE_MAX_VERTICES,
        });
    }
    let mut even = vec![None; n + 1];
    let mut odd = vec![None; n + 1];
    let mut q = VecDeque::new();
    for v in g.vertices() {
        if m.is_free(v) {
            even[v as usize] = Some(0);
            q.push_back((v, false));
        }
    }
    while let Some((v, is_odd)) = q.pop_front() {
        if is_odd {
            let d = odd[v as usize].unwrap();
            if let Some(u) = m.mate(v) {
                if even[u as usize].is_none() {
                    even[u as usize] = Some(d + 1);
                    q.push_back((u, false));
                }
            }
        } else {
            let d = even[v as usize].unwrap();
            for &e in g.incident(v) {
                let u = g.other(e, v);
                if m.mate(v) != Some(u) && odd[u as usize].is_none() {
                    odd[u as usize] = Some(d + 1);
                    q.push_back((u, true));
                }
            }
        }
    }
    Ok(LevelOracleResult { even, odd })
}

/// Every simple alternating path that starts at a free vertex, by
/// exhaustive enumeration. Paths are listed from the free end.
pub fn alternating_paths(g: &Graph, m: &Matching) -> Result<Vec<Vec<Vertex>>, OracleError> {
    alternating_paths_avoiding(g, m, &[])
}

/// As [`alternating_paths`], in the graph with `removed` deleted.
pub fn alternating_paths_avoiding(
    g: &Graph,
    m: &Matching,
    removed: &[Vertex],
) -> Result<Vec<Vec<Vertex>>, OracleError> {
    let n = g.vertex_count() as usize;
    if n > ENUMERATION_MAX_VERTICES {
        return Err(OracleError::TooLarge {
            what: "vertices",
            got: n,
            limit: ENUMERATION_MAX_VERTICES,
        });
    }
    fn go(
        g: &Graph,
        m: &Matching,
        path: &mut Vec<Vertex>,
        on: &mut [bool],
        out: &mut Vec<Vec<Vertex>>,
    ) {
        out.push(path.clone());
        let v = *path.last().unwrap();
        let want_matched = path.len().is_multiple_of(2);
        for &e in g.incident(v) {
            let u = g.other(e, v);
            if on[u as usize] || (m.mate(v) == Some(u)) != want_matched {
                continue;
            }
            on[u as usize] = true;
            path.push(u);
            go(g, m, path, on, out);
            path.pop();
            on[u as usize] = false;
        }
    }
    let mut out = Vec::new();
    let mut on = vec![false; n + 1];
    for &v in removed {
        on[v as usize] = true;
    }
    let starts: Vec<Vertex> = g
        .vertices()
        .filter(|&v| m.is_free(v) && !on[v as usize])
        .collect();
    for f in starts {
        on[f as usize] = true;
        go(g, m, &mut vec![f], &mut on, &mut out);
        on[f as usize] = false;
    }
    Ok(out)
}

/// Levels over simple alternating paths (small graphs only).
pub fn path_levels(g: &Graph, m: &Matching) -> Result<LevelOracleResult, OracleError> {
    levels_of(g, alternating_paths(g, m)?)
}

fn levels_of(g: &Graph, paths: Vec<Vec<Vertex>>) -> Result<LevelOracleResult, OracleError> {
    let n = g.vertex_count() as usize;
    let mut even: Vec<Option<u32>> = vec![None; n + 1];
    let mut odd: Vec<Option<u32>> = vec![None; n + 1];
    for p in paths {
        let len = (p.len() - 1) as u32;
        let v = *p.last().unwrap() as usize;
        let slot = if len.is_multiple_of(2) {
            &mut even[v]
        } else {
            &mut odd[v]
        };
        if slot.is_none_or(|l| len < l) {
            *slot = Some(len);
        }
    }
    Ok(LevelOracleResult { even, odd })
}

/// Length of a shortest augmenting path, by enumeration.
pub fn shortest_augmenting_path(g: &Graph, m: &Matching) -> Result<Option<u32>, OracleError> {
    Ok(alternating_paths(g, m)?
        .iter()
        .filter(|p| p.len() >= 2 && p.len() % 2 == 0 && m.is_free(*p.last().unwrap()))
        .map(|p| (p.len() - 1) as u32)
        .min())
}

/// Checks reported petal*s `(bud, members)` against path enumeration.
/// Non-bud members are matched inside the set and have both levels;
/// every minlevel path of a member passes through the bud, and the
/// members are exactly the vertices on minlevel subpaths from the bud.
pub fn petal_property_check(
    g: &Graph,
    m: &Matching,
    petals: &[(Vertex, Vec<Vertex>)],
) -> Result<(), String> {
    petal_property_check_avoiding(g, m, &[], petals)
}

/// As [`petal_property_check`], in the graph with `removed` deleted. Petals
/// found after some augmentations of a phase are checked this way, with the
/// phase's starting matching and the vertices deleted so far.
pub fn petal_property_check_avoiding(
    g: &Graph,
    m: &Matching,
    removed: &[Vertex],
    petals: &[(Vertex, Vec<Vertex>)],
) -> Result<(), String> {
    if g.vertex_count() as usize > 10 {
        return Err(format!(
            "petal check needs n <= 10, got {}",
            g.vertex_count()
        ));
    }
    let paths = alternating_paths_avoiding(g, m, removed).map_err(|e| e.to_string())?;
    let levels = levels_of(g, paths.clone()).map_err(|e| e.to_string())?;
    for (bud, members) in petals {
        let want: BTreeSet<Vertex> = members.iter().copied().collect();
        let mut union = BTreeSet::from([*bud]);
        for &v in members.iter().filter(|&v| v != bud) {
            if m.mate(v).is_none_or(|u| !want.contains(&u)) {
                return Err(format!(
                    "member {v} of petal {bud} is not matched inside it"
                ));
            }
            if levels.maxlevel(v).is_none() {
                return Err(format!("member {v} of petal {bud} lacks a maxlevel"));
            }
        }
        if m.mate(*bud).is_some_and(|u| want.contains(&u)) {
            return Err(format!("bud {bud} is matched inside its petal"));
        }
        for &v in members {
            let Some(ml) = levels.minlevel(v) else {
                return Err(format!("member {v} of petal {bud} has no level"));
            };
            for p in paths
                .iter()
                .filter(|p| *p.last().unwrap() == v && p.len() as u32 - 1 == ml)
            {
                let Some(at) = p.iter().position(|x| x == bud) else {
                    return Err(format!("minlevel path {p:?} of {v} avoids bud {bud}"));
                };
                union.extend(&p[at..]);
            }
        }
        if union != want {
            return Err(format!(
                "petal with bud {bud}: reported {want:?}, minlevel subpaths cover {union:?}"
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn cycle(n: u32) -> Graph {
        let edges: Vec<_> = (1..=n).map(|v| (v, v % n + 1)).collect();
        Graph::from_edges(n, &edges)
    }

    fn complete(n: u32) -> Graph {
        let mut edges = Vec::new();
        for u in 1..=n {
            for v in u + 1..=n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges)
    }

    fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i + 1, (i + 1) % 5 + 1));
            edges.push((i + 1, i + 6));
            edges.push((i + 6, (i + 2) % 5 + 6));
        }
        Graph::from_edges(10, &edges)
    }

    fn grid(k: u32) -> Graph {
        let id = |r: u32, c: u32| r * k + c + 1;
        let mut edges = Vec::new();
        for r in 0..k {
            for c in 0..k {
                if c + 1 < k {
                    edges.push((id(r, c), id(r, c + 1)));
                }
                if r + 1 < k {
                    edges.push((id(r, c), id(r + 1, c)));
                }
            }
        }
        Graph::from_edges(k * k, &edges)
    }

    #[test]
    fn small_maxima() {
        let cases = [
            (cycle(5), 2),
            (complete(4), 2),
            (Graph::new(0), 0),
            (Graph::new(3), 0),
            (petersen(), 5),
            (grid(4), 8),
            (fixtures::g20().graph, 6),
        ];
        for (g, want) in cases {
            assert_eq!(brute_force_max(&g).unwrap(), want);
            assert_eq!(reference_blossom_max(&g).size(), want);
        }
    }

    #[test]
    fn brute_force_refuses_large() {
        let g = complete(9);
        assert!(matches!(
            brute_force_max(&g),
            Err(OracleError::TooLarge { .. })
        ));
    }

    #[test]
    fn g2_levels() {
        let f = fixtures::g2();
        let lv = path_levels(&f.graph, &f.matching).unwrap();
        assert_eq!(lv.even[1], Some(0));
        assert_eq!(lv.even[6], Some(0));
        assert_eq!(lv.odd[2], Some(1));
        assert_eq!(lv.odd[5], Some(1));
        assert_eq!(lv.even[3], Some(2));
        assert_eq!(lv.even[4], Some(2));
        assert_eq!(lv, level_oracle(&f.graph, &f.matching).unwrap());
        assert_eq!(
            shortest_augmenting_path(&f.graph, &f.matching).unwrap(),
            Some(5)
        );
    }

    #[test]
    fn g1_has_no_augmenting_path() {
        let f = fixtures::g1();
        assert_eq!(
            shortest_augmenting_path(&f.graph, &f.matching).unwrap(),
            None
        );
        let lv = path_levels(&f.graph, &f.matching).unwrap();
        assert_eq!(lv.maxlevel(4), Some(4));
        assert_eq!(lv.maxlevel(5), Some(4));
    }

    #[test]
    fn walk_levels_can_undercut_simple_paths() {
        // a walk may reuse vertices, so BFS levels are only lower bounds
        let f = fixtures::g9();
        let walk = level_oracle(&f.graph, &f.matching).unwrap();
        let simple = path_levels(&f.graph, &f.matching).unwrap();
        for v in f.graph.vertices() {
            if let (Some(a), Some(b)) = (walk.even[v as usize], simple.even[v as usize]) {
                assert!(a <= b);
            }
        }
        assert_eq!(
            shortest_augmenting_path(&f.graph, &f.matching).unwrap(),
            Some(7)
        );
    }

    #[test]
    fn petal_check_accepts_g1_petal() {
        let f = fixtures::g1();
        assert_eq!(
            petal_property_check(&f.graph, &f.matching, &[(3, vec![3, 4, 5])]),
            Ok(())
        );
    }

    #[test]
    fn petal_check_rejects_corrupted_petal() {
        let f = fixtures::g1();
        assert!(petal_property_check(&f.graph, &f.matching, &[(4, vec![3, 4])]).is_err());
        assert!(petal_property_check(&f.graph, &f.matching, &[(3, vec![3, 4])]).is_err());
    }
}
