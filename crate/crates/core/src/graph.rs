//! Simple undirected graphs over dense vertex ids `0..n`.
//!
//! A [`Graph`] is immutable once built. Adjacency lists are kept sorted so
//! that structural equality and hashing coincide with equality of labeled
//! graphs.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("loop edge ({0}, {0})")]
    Loop(usize),
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    OutOfRange { u: usize, v: usize, n: usize },
    #[error("duplicate edge ({0}, {1})")]
    Duplicate(usize, usize),
    #[error("graph has no vertices")]
    Empty,
    #[error("graph is not connected")]
    Disconnected,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n(), self.edges())
    }
}

/// A block of the block-cut decomposition: its vertex set and its edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

/// An induced subgraph together with the map from its ids to parent ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    pub graph: Graph,
    pub parent: Vec<usize>,
}

impl Graph {
    /// Builds a graph on `n` vertices, rejecting loops, out-of-range
    /// endpoints and repeated edges (in either orientation).
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::OutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let (a, b) = (u.min(w[0]), u.max(w[0]));
                return Err(GraphError::Duplicate(a, b));
            }
        }
        Ok(Graph { adj })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::new(n, &edges).expect("path is simple")
    }

    /// The cycle `C_n`; requires `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges).expect("cycle is simple")
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n)
            .map(|u| (0..n).filter(|&v| v != u).collect())
            .collect();
        Graph { adj }
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut edges = Vec::with_capacity(a * b);
        for i in 0..a {
            for j in 0..b {
                edges.push((i, a + j));
            }
        }
        Graph::new(a + b, &edges).expect("bipartite graph is simple")
    }

    /// Circulant graph: `i ~ i ± s (mod n)` for every step `s`.
    pub fn circulant(n: usize, steps: &[usize]) -> Self {
        let mut adj = vec![Vec::new(); n];
        for i in 0..n {
            for &s in steps {
                let s = s % n;
                if s == 0 {
                    continue;
                }
                adj[i].push((i + s) % n);
                adj[i].push((i + n - s) % n);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Graph { adj }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, list) in self.adj.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn min_degree(&self) -> Result<usize, GraphError> {
        self.adj.iter().map(Vec::len).min().ok_or(GraphError::Empty)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_regular(&self, k: usize) -> bool {
        self.adj.iter().all(|l| l.len() == k)
    }

    /// Vertices left after repeatedly deleting vertices of degree `<= k`.
    /// Empty exactly when the graph is `k`-degenerate.
    pub fn k_core_residual(&self, k: usize) -> Vec<usize> {
        let mut deg = self.degrees();
        let mut removed = vec![false; self.n()];
        let mut queue: VecDeque<usize> = (0..self.n()).filter(|&v| deg[v] <= k).collect();
        for &v in &queue {
            removed[v] = true;
        }
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if !removed[w] {
                    deg[w] -= 1;
                    if deg[w] <= k {
                        removed[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        (0..self.n()).filter(|&v| !removed[v]).collect()
    }

    pub fn is_k_degenerate(&self, k: usize) -> bool {
        self.k_core_residual(k).is_empty()
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// The empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Block decomposition (maximal 2-connected subgraphs and bridges) and
    /// the cut vertices, via Hopcroft-Tarjan lowpoints with an explicit stack.
    pub fn blocks_and_cut_vertices(&self) -> Result<(Vec<Block>, Vec<usize>), GraphError> {
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        let n = self.n();
        let mut blocks = Vec::new();
        let mut is_cut = vec![false; n];
        if n == 0 {
            return Ok((blocks, Vec::new()));
        }
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut timer = 0;
        let mut edge_stack: Vec<(usize, usize)> = Vec::new();
        // frame: (vertex, parent, next neighbor index)
        let mut stack: Vec<(usize, usize, usize)> = vec![(0, usize::MAX, 0)];
        disc[0] = 0;
        low[0] = 0;
        timer += 1;
        let mut root_children = 0;
        while let Some(&mut (v, parent, ref mut idx)) = stack.last_mut() {
            if *idx < self.adj[v].len() {
                let w = self.adj[v][*idx];
                *idx += 1;
                if disc[w] == usize::MAX {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    edge_stack.push((v, w));
                    if v == 0 {
                        root_children += 1;
                    }
                    stack.push((w, v, 0));
                } else if w != parent && disc[w] < disc[v] {
                    low[v] = low[v].min(disc[w]);
                    edge_stack.push((v, w));
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] >= disc[parent] {
                        if parent != 0 {
                            is_cut[parent] = true;
                        }
                        let mut edges = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            edges.push((e.0.min(e.1), e.0.max(e.1)));
                            if e == (parent, v) {
                                break;
                            }
                        }
                        edges.sort_unstable();
                        let mut vertices: Vec<usize> =
                            edges.iter().flat_map(|&(a, b)| [a, b]).collect();
                        vertices.sort_unstable();
                        vertices.dedup();
                        blocks.push(Block { vertices, edges });
                    }
                }
            }
        }
        if root_children >= 2 {
            is_cut[0] = true;
        }
        if n == 1 {
            blocks.push(Block {
                vertices: vec![0],
                edges: Vec::new(),
            });
        }
        blocks.sort_by(|a, b| a.vertices.cmp(&b.vertices).then(a.edges.cmp(&b.edges)));
        let cuts = (0..n).filter(|&v| is_cut[v]).collect();
        Ok((blocks, cuts))
    }

    pub fn cut_vertices(&self) -> Vec<usize> {
        self.blocks_and_cut_vertices()
            .map(|(_, c)| c)
            .unwrap_or_default()
    }

    /// Connected, at least three vertices and no cut vertex.
    pub fn is_2connected(&self) -> bool {
        self.n() >= 3 && self.is_connected() && self.cut_vertices().is_empty()
    }

    pub fn is_cycle(&self) -> bool {
        self.n() >= 3 && self.is_regular(2) && self.is_connected()
    }

    pub fn is_complete(&self) -> bool {
        let n = self.n();
        self.adj.iter().all(|l| l.len() + 1 == n)
    }

    pub fn is_planar(&self) -> bool {
        crate::planar::is_planar(self)
    }

    /// Cartesian product; vertex `(a, b)` gets id `a * other.n() + b`.
    pub fn cartesian_product(&self, other: &Graph) -> Graph {
        let nb = other.n();
        let mut adj = vec![Vec::new(); self.n() * nb];
        for a in 0..self.n() {
            for b in 0..nb {
                let list = &mut adj[a * nb + b];
                list.extend(other.adj[b].iter().map(|&b2| a * nb + b2));
                list.extend(self.adj[a].iter().map(|&a2| a2 * nb + b));
                list.sort_unstable();
            }
        }
        Graph { adj }
    }

    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n();
        let mut adj = self.adj.clone();
        adj.extend(
            other
                .adj
                .iter()
                .map(|l| l.iter().map(|&v| v + off).collect()),
        );
        Graph { adj }
    }

    /// Subgraph induced by `keep` (duplicates ignored); new ids follow the
    /// ascending order of the kept parent ids.
    pub fn induced_subgraph(&self, keep: &[usize]) -> Subgraph {
        let mut parent: Vec<usize> = keep.to_vec();
        parent.sort_unstable();
        parent.dedup();
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in parent.iter().enumerate() {
            local[v] = i;
        }
        let adj = parent
            .iter()
            .map(|&v| {
                self.adj[v]
                    .iter()
                    .filter(|&&w| local[w] != usize::MAX)
                    .map(|&w| local[w])
                    .collect()
            })
            .collect();
        Subgraph {
            graph: Graph { adj },
            parent,
        }
    }

    /// Adjacency as bitmasks; only valid for `n <= 64`.
    pub fn adjacency_masks(&self) -> Vec<u64> {
        assert!(self.n() <= 64, "bitmask adjacency needs n <= 64");
        self.adj
            .iter()
            .map(|l| l.iter().fold(0u64, |m, &v| m | (1 << v)))
            .collect()
    }
}
