//! Maximum-cardinality matching in general graphs.
//!
//! Each phase assigns even and odd levels by increasing level, keeping
//! petal*s in a set-merging forest, until a double depth-first search
//! finds a shortest augmenting path. The rest of that search level is
//! handled by depth-first growth of an anchor path of petal*s, with
//! petals merged by popping a stack instead of set operations.
//!
//! ```
//! use mvmatch::{graph::Graph, matcher::{maximum_matching, MatchOptions}};
//!
//! let g = Graph::from_edges(4, &[(1, 2), (2, 3), (3, 4)]);
//! let (m, _) = maximum_matching(&g, &MatchOptions::default()).unwrap();
//! assert_eq!(m.size(), 2);
//! ```

pub mod assignment;
pub mod augmentation;
pub mod batch;
mod ddfs;
pub mod fixtures;
pub mod graph;
pub mod matcher;
pub mod merge;
pub mod oracle;
pub mod phase;
pub mod trace;

pub use graph::{Graph, Matching, Vertex};
pub use matcher::{maximum_matching, InitialMatching, MatchError, MatchOptions, PhaseStats};
pub use merge::Backend;
