//! Forbidden configurations and cap subgraphs.
//!
//! Matching is by subgraph (not induced) monomorphism: extra host edges
//! between the images are allowed. Degree constraints on pattern vertices
//! refer to degrees in the host.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DetectError {
    #[error("unknown pattern `{0}`")]
    UnknownPattern(String),
    #[error("unknown hypothesis family `{0}`")]
    UnknownFamily(String),
    #[error("pattern must be connected and nonempty")]
    DisconnectedPattern,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub name: String,
    pub graph: Graph,
    /// Required host degree per pattern vertex.
    pub host_degree: Vec<Option<usize>>,
    pub labels: Vec<String>,
}

impl Pattern {
    pub fn new(name: &str, graph: Graph) -> Result<Self, DetectError> {
        if graph.n() == 0 || !graph.is_connected() {
            return Err(DetectError::DisconnectedPattern);
        }
        let n = graph.n();
        Ok(Pattern {
            name: name.to_string(),
            graph,
            host_degree: vec![None; n],
            labels: (0..n).map(|i| i.to_string()).collect(),
        })
    }

    pub fn with_host_degree(mut self, v: usize, d: usize) -> Self {
        self.host_degree[v] = Some(d);
        self
    }

    fn from_letters(name: &str, letters: &str, edges: &str) -> Self {
        let labels: Vec<char> = letters.chars().collect();
        let idx = |c: char| {
            labels
                .iter()
                .position(|&l| l == c)
                .expect("letter in vertex list")
        };
        let pairs: Vec<(usize, usize)> = edges
            .split_whitespace()
            .map(|e| {
                let mut cs = e.chars();
                (idx(cs.next().unwrap()), idx(cs.next().unwrap()))
            })
            .collect();
        let graph = Graph::new(labels.len(), &pairs).expect("builtin pattern is simple");
        let mut p = Pattern::new(name, graph).expect("builtin pattern is connected");
        p.labels = labels.iter().map(|c| c.to_string()).collect();
        p
    }
}

pub const BUILTIN_PATTERNS: [&str; 7] = [
    "fig2a", "fig2b", "fig3a", "fig3b", "fig3c", "fig5a", "fig5b",
];

/// The named forbidden configurations. `a..d` and `h` are shared labels:
/// every pattern contains the 4-cycle `abcd` and the triangle `abh`.
pub fn builtin_pattern(name: &str) -> Result<Pattern, DetectError> {
    let (letters, edges) = match name {
        "fig2a" | "fig3a" | "fig5a" => ("abcdh", "ah hb bc cd da ab"),
        "fig2b" => ("abcdhxy", "ax xh hy yb bc cd da ah hb"),
        "fig3b" => ("abcdhxyz", "ax xz zh hy yb bc cd da ah hb hx"),
        "fig3c" => ("abcdhxyz", "az zx xh hy yb bc cd da xa ah hb"),
        "fig5b" => ("abcdhxy", "ay yx xh hb bc cd da xa ah"),
        _ => return Err(DetectError::UnknownPattern(name.to_string())),
    };
    Ok(Pattern::from_letters(name, letters, edges))
}

/// Injective map pattern vertex -> host vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding(pub Vec<usize>);

/// The lexicographically least embedding of `p` into `g`, if any.
pub fn find_pattern(p: &Pattern, g: &Graph) -> Option<Embedding> {
    let mut out = None;
    search_embeddings(p, g, &mut |m| {
        out = Some(Embedding(m.to_vec()));
        false
    });
    out
}

/// Number of embeddings of `p` into `g`.
pub fn count_embeddings(p: &Pattern, g: &Graph) -> usize {
    let mut count = 0;
    search_embeddings(p, g, &mut |_| {
        count += 1;
        true
    });
    count
}

/// Backtracking in pattern-id order with host candidates ascending, so the
/// first complete map found is the lexicographically least. `visit` returns
/// whether to continue.
fn search_embeddings(p: &Pattern, g: &Graph, visit: &mut dyn FnMut(&[usize]) -> bool) {
    let k = p.graph.n();
    if k > g.n() || p.graph.edge_count() > g.edge_count() {
        return;
    }
    let candidates: Vec<Vec<usize>> = (0..k)
        .map(|i| {
            (0..g.n())
                .filter(|&t| {
                    g.degree(t) >= p.graph.degree(i)
                        && p.host_degree[i].is_none_or(|d| g.degree(t) == d)
                })
                .collect()
        })
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return;
    }
    let mut map = vec![usize::MAX; k];
    let mut used = vec![false; g.n()];
    extend(p, g, &candidates, 0, &mut map, &mut used, visit);
}

fn extend(
    p: &Pattern,
    g: &Graph,
    candidates: &[Vec<usize>],
    i: usize,
    map: &mut [usize],
    used: &mut [bool],
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if i == map.len() {
        return visit(map);
    }
    for &t in &candidates[i] {
        if used[t] {
            continue;
        }
        let fits = p
            .graph
            .neighbors(i)
            .iter()
            .all(|&j| j > i || g.has_edge(map[j], t));
        if !fits {
            continue;
        }
        map[i] = t;
        used[t] = true;
        // forward check: later pattern neighbours of i need a free host neighbour of t
        let viable = p
            .graph
            .neighbors(i)
            .iter()
            .filter(|&&j| j > i)
            .all(|&j| candidates[j].iter().any(|&s| !used[s] && g.has_edge(t, s)));
        let keep_going = !viable || extend(p, g, candidates, i + 1, map, used, visit);
        used[t] = false;
        map[i] = usize::MAX;
        if !keep_going {
            return false;
        }
    }
    true
}

/// A cap: chordless cycle plus an apex adjacent to exactly two consecutive
/// cycle vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cap {
    pub cycle: Vec<usize>,
    pub apex: usize,
}

/// First cap with cycle length in `kmin..=kmax`, cycles taken in
/// lexicographic order of their vertex sequence (smallest vertex first,
/// second vertex smaller than the last), apex ascending. With
/// `require_degree4`, every vertex of the cap must have host degree 4.
pub fn find_cap(g: &Graph, kmin: usize, kmax: usize, require_degree4: bool) -> Option<Cap> {
    let mut found = None;
    for_each_chordless_cycle(g, kmin.max(3), kmax, &mut |cycle| {
        if require_degree4 && cycle.iter().any(|&v| g.degree(v) != 4) {
            return true;
        }
        for u in 0..g.n() {
            if cycle.contains(&u) || (require_degree4 && g.degree(u) != 4) {
                continue;
            }
            let hits: Vec<usize> = (0..cycle.len())
                .filter(|&i| g.has_edge(u, cycle[i]))
                .collect();
            if hits.len() == 2 {
                let (i, j) = (hits[0], hits[1]);
                if j == i + 1 || (i == 0 && j == cycle.len() - 1) {
                    found = Some(Cap {
                        cycle: cycle.to_vec(),
                        apex: u,
                    });
                    return false;
                }
            }
        }
        true
    });
    found
}

/// Calls `visit` once per chordless cycle of length in `kmin..=kmax`.
/// `visit` returns whether to continue.
pub fn for_each_chordless_cycle(
    g: &Graph,
    kmin: usize,
    kmax: usize,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) {
    let n = g.n();
    let mut path = Vec::new();
    let mut on_path = vec![false; n];
    for s in 0..n {
        path.push(s);
        on_path[s] = true;
        let go = grow_chordless(g, s, kmin, kmax, &mut path, &mut on_path, visit);
        on_path[s] = false;
        path.pop();
        if !go {
            return;
        }
    }
}

/// Extends an induced path starting at `s` (all vertices > `s`).
fn grow_chordless(
    g: &Graph,
    s: usize,
    kmin: usize,
    kmax: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let last = *path.last().expect("nonempty path");
    for &w in g.neighbors(last) {
        if w <= s || on_path[w] {
            continue;
        }
        // w may touch only `last` among path vertices, except `s` when closing
        let touches_inner =
            path.len() > 2 && path[1..path.len() - 1].iter().any(|&x| g.has_edge(w, x));
        if touches_inner {
            continue;
        }
        let closes = g.has_edge(w, s);
        if path.len() == 1 {
            // second vertex; closing is decided later
        } else if closes {
            let len = path.len() + 1;
            if len >= kmin && len <= kmax && path[1] < w {
                path.push(w);
                let go = visit(path);
                path.pop();
                if !go {
                    return false;
                }
            }
            continue;
        }
        if path.len() + 1 >= kmax {
            continue;
        }
        path.push(w);
        on_path[w] = true;
        let go = grow_chordless(g, s, kmin, kmax, path, on_path, visit);
        on_path[w] = false;
        path.pop();
        if !go {
            return false;
        }
    }
    true
}

/// Hypothesis families used by the detectors and sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Fig2Free,
    Fig3Free,
    Fig5Free,
    No4Cycles,
    No5Cycles,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Fig2Free => "fig2-free",
            Family::Fig3Free => "fig3-free",
            Family::Fig5Free => "fig5-free",
            Family::No4Cycles => "no-4-cycles",
            Family::No5Cycles => "no-5-cycles",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = DetectError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "fig2-free" => Family::Fig2Free,
            "fig3-free" => Family::Fig3Free,
            "fig5-free" => Family::Fig5Free,
            "no-4-cycles" => Family::No4Cycles,
            "no-5-cycles" => Family::No5Cycles,
            _ => return Err(DetectError::UnknownFamily(s.to_string())),
        })
    }
}

fn family_patterns(family: Family) -> Vec<Pattern> {
    let named = |names: &[&str]| {
        names
            .iter()
            .map(|n| builtin_pattern(n).expect("builtin"))
            .collect()
    };
    match family {
        Family::Fig2Free => named(&["fig2a", "fig2b"]),
        Family::Fig3Free => named(&["fig3a", "fig3b", "fig3c"]),
        Family::Fig5Free => named(&["fig5a", "fig5b"]),
        Family::No4Cycles => vec![Pattern::new("C4", Graph::cycle(4)).expect("cycle")],
        Family::No5Cycles => vec![Pattern::new("C5", Graph::cycle(5)).expect("cycle")],
    }
}

/// Whether `g` avoids every configuration of the family. On failure the
/// offending pattern name and embedding are returned.
pub fn family_witness(g: &Graph, family: Family) -> Option<(String, Embedding)> {
    family_patterns(family)
        .into_iter()
        .find_map(|p| find_pattern(&p, g).map(|e| (p.name.clone(), e)))
}

pub fn hypothesis_check(g: &Graph, family: Family) -> bool {
    family_witness(g, family).is_none()
}
