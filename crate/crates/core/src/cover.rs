//! Valued covers `(H, f)` of a host graph.
//!
//! The cover graph `H` is never materialized. Each host edge `uv` (with
//! `u < v`) carries a partial injective slot map `sigma_uv`, meaning
//! `(u, q) ~ (v, sigma_uv(q))`. Slots are 0-based in this API; the text
//! formats use 1-based slots.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("slot {q} out of range for kappa {kappa}")]
    SlotOutOfRange { q: usize, kappa: usize },
    #[error("({u}, {v}) is not a host edge")]
    NotAnEdge { u: usize, v: usize },
    #[error("matching on ({u}, {v}) is not injective at slot {q}")]
    NotInjective { u: usize, v: usize, q: usize },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("kappa must be at least 1")]
    ZeroKappa,
    #[error("transversal has {got} choices for {n} host vertices")]
    TransversalLength { got: usize, n: usize },
}

/// A partial injective map between the fans of an edge's endpoints.
pub type SlotMap = Vec<Option<usize>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    host: Graph,
    kappa: usize,
    // keyed by (u, v) with u < v
    matchings: BTreeMap<(usize, usize), SlotMap>,
    // f[v][q]
    capacity: Vec<Vec<u32>>,
}

/// One fan vertex chosen per host vertex (0-based slots).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transversal(pub Vec<usize>);

impl Transversal {
    pub fn choice(&self, v: usize) -> usize {
        self.0[v]
    }

    /// `v:q` pairs with 1-based slots, space separated.
    pub fn display_one_based(&self) -> String {
        self.0
            .iter()
            .enumerate()
            .map(|(v, q)| format!("{v}:{}", q + 1))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// The kernel as a plain graph whose vertex `i` is the fan vertex `labels[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kernel {
    pub graph: Graph,
    pub labels: Vec<(usize, usize)>,
}

impl Cover {
    /// A cover with every matching empty and `f == 0`.
    pub fn new(host: Graph, kappa: usize) -> Result<Self, CoverError> {
        if kappa == 0 {
            return Err(CoverError::ZeroKappa);
        }
        let n = host.n();
        let matchings = host
            .edges()
            .into_iter()
            .map(|e| (e, vec![None; kappa]))
            .collect();
        Ok(Cover {
            host,
            kappa,
            matchings,
            capacity: vec![vec![0; kappa]; n],
        })
    }

    pub fn host(&self) -> &Graph {
        &self.host
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn n(&self) -> usize {
        self.host.n()
    }

    pub fn f(&self, v: usize, q: usize) -> u32 {
        self.capacity[v][q]
    }

    pub fn f_row(&self, v: usize) -> &[u32] {
        &self.capacity[v]
    }

    pub fn set_f(&mut self, v: usize, q: usize, value: u32) -> Result<(), CoverError> {
        if v >= self.n() {
            return Err(CoverError::VertexOutOfRange(v));
        }
        if q >= self.kappa {
            return Err(CoverError::SlotOutOfRange {
                q,
                kappa: self.kappa,
            });
        }
        self.capacity[v][q] = value;
        Ok(())
    }

    pub fn set_f_row(&mut self, v: usize, row: &[u32]) -> Result<(), CoverError> {
        for (q, &x) in row.iter().enumerate() {
            self.set_f(v, q, x)?;
        }
        Ok(())
    }

    /// Adds `(u, qu) ~ (v, qv)`. Re-adding the same pair is a no-op.
    pub fn add_match(
        &mut self,
        u: usize,
        v: usize,
        qu: usize,
        qv: usize,
    ) -> Result<(), CoverError> {
        let kappa = self.kappa;
        for q in [qu, qv] {
            if q >= kappa {
                return Err(CoverError::SlotOutOfRange { q, kappa });
            }
        }
        let (a, b, qa, qb) = if u < v {
            (u, v, qu, qv)
        } else {
            (v, u, qv, qu)
        };
        let sigma = self
            .matchings
            .get_mut(&(a, b))
            .ok_or(CoverError::NotAnEdge { u, v })?;
        if sigma[qa] == Some(qb) {
            return Ok(());
        }
        if sigma[qa].is_some() {
            return Err(CoverError::NotInjective { u: a, v: b, q: qa });
        }
        if sigma.contains(&Some(qb)) {
            return Err(CoverError::NotInjective { u: b, v: a, q: qb });
        }
        sigma[qa] = Some(qb);
        Ok(())
    }

    /// Replaces the whole slot map of edge `(u, v)`, read as `u`'s slots to `v`'s.
    pub fn set_matching(
        &mut self,
        u: usize,
        v: usize,
        sigma: &[Option<usize>],
    ) -> Result<(), CoverError> {
        let (a, b) = (u.min(v), u.max(v));
        if !self.matchings.contains_key(&(a, b)) {
            return Err(CoverError::NotAnEdge { u, v });
        }
        self.matchings.insert((a, b), vec![None; self.kappa]);
        for (q, t) in sigma.iter().enumerate() {
            if let Some(t) = *t {
                self.add_match(u, v, q, t)?;
            }
        }
        Ok(())
    }

    /// `sigma_uv` oriented from `u` to `v`.
    pub fn matching(&self, u: usize, v: usize) -> Option<SlotMap> {
        if u < v {
            self.matchings.get(&(u, v)).cloned()
        } else {
            self.matchings.get(&(v, u)).map(|s| invert(s, self.kappa))
        }
    }

    /// The slot of `v` matched to `(u, q)`, if any.
    pub fn mate(&self, u: usize, q: usize, v: usize) -> Option<usize> {
        if u < v {
            self.matchings.get(&(u, v))?[q]
        } else {
            let sigma = self.matchings.get(&(v, u))?;
            sigma.iter().position(|&t| t == Some(q))
        }
    }

    /// All matched pairs as `(u, v, qu, qv)` with `u < v`, sorted.
    pub fn matched_pairs(&self) -> Vec<(usize, usize, usize, usize)> {
        let mut out = Vec::new();
        for (&(u, v), sigma) in &self.matchings {
            for (q, t) in sigma.iter().enumerate() {
                if let Some(t) = *t {
                    out.push((u, v, q, t));
                }
            }
        }
        out
    }

    pub fn is_full_matching(&self) -> bool {
        self.matchings
            .values()
            .all(|s| s.iter().all(Option::is_some))
    }

    /// Per-vertex sums `f(v, 1) + ... + f(v, kappa)`.
    pub fn fsum(&self) -> Vec<u64> {
        self.capacity
            .iter()
            .map(|row| row.iter().map(|&x| x as u64).sum())
            .collect()
    }

    pub fn max_f(&self, v: usize) -> u32 {
        self.capacity[v].iter().copied().max().unwrap_or(0)
    }

    /// Fan vertices with positive capacity and the matching edges among them.
    pub fn kernel(&self) -> Kernel {
        let mut id = vec![vec![usize::MAX; self.kappa]; self.n()];
        let mut labels = Vec::new();
        for v in 0..self.n() {
            for q in 0..self.kappa {
                if self.capacity[v][q] > 0 {
                    id[v][q] = labels.len();
                    labels.push((v, q));
                }
            }
        }
        let edges: Vec<(usize, usize)> = self
            .matched_pairs()
            .into_iter()
            .filter(|&(u, v, qu, qv)| id[u][qu] != usize::MAX && id[v][qv] != usize::MAX)
            .map(|(u, v, qu, qv)| (id[u][qu], id[v][qv]))
            .collect();
        let graph = Graph::new(labels.len(), &edges).expect("fan matchings are simple");
        Kernel { graph, labels }
    }

    /// The cover of the induced host subgraph `G[keep]`, plus the map from
    /// new host ids to old ones.
    pub fn restrict(&self, keep: &[usize]) -> (Cover, Vec<usize>) {
        let sub = self.host.induced_subgraph(keep);
        let parent = sub.parent;
        let mut out = Cover::new(sub.graph, self.kappa).expect("kappa already validated");
        for (i, &v) in parent.iter().enumerate() {
            out.capacity[i] = self.capacity[v].clone();
        }
        for (a, b) in out.host.edges() {
            let sigma = self
                .matching(parent[a], parent[b])
                .expect("induced edge exists in parent");
            out.matchings.insert((a, b), sigma);
        }
        (out, parent)
    }

    pub fn validate_transversal(&self, r: &Transversal) -> Result<(), CoverError> {
        if r.0.len() != self.n() {
            return Err(CoverError::TransversalLength {
                got: r.0.len(),
                n: self.n(),
            });
        }
        if let Some(&q) = r.0.iter().find(|&&q| q >= self.kappa) {
            return Err(CoverError::SlotOutOfRange {
                q,
                kappa: self.kappa,
            });
        }
        Ok(())
    }

    /// Degree of each selected fan vertex inside `H[R]`.
    pub fn selected_degrees(&self, r: &Transversal) -> Vec<usize> {
        let mut deg = vec![0; self.n()];
        for (&(u, v), sigma) in &self.matchings {
            if sigma[r.0[u]] == Some(r.0[v]) {
                deg[u] += 1;
                deg[v] += 1;
            }
        }
        deg
    }

    /// Whether `H[R]` is strictly f-degenerate, by capacity peeling.
    pub fn is_strictly_f_degenerate(&self, r: &Transversal) -> Result<bool, CoverError> {
        self.validate_transversal(r)?;
        let alive = vec![true; self.n()];
        Ok(self.peel_selected(&r.0, alive).iter().all(|a| !a))
    }

    /// Peels the selected fan vertices of the host vertices marked alive:
    /// repeatedly drop one whose matched selected neighbours number fewer
    /// than its capacity. Returns what survives (the stuck core).
    pub(crate) fn peel_selected(&self, choice: &[usize], mut alive: Vec<bool>) -> Vec<bool> {
        let n = self.n();
        let linked = |u: usize, v: usize| self.mate(u, choice[u], v) == Some(choice[v]);
        let mut deg = vec![0usize; n];
        for u in 0..n {
            if alive[u] {
                deg[u] = self
                    .host
                    .neighbors(u)
                    .iter()
                    .filter(|&&v| alive[v] && linked(u, v))
                    .count();
            }
        }
        let mut stack: Vec<usize> = (0..n)
            .filter(|&u| alive[u] && (deg[u] as u64) < self.capacity[u][choice[u]] as u64)
            .collect();
        for &u in &stack {
            alive[u] = false;
        }
        while let Some(u) = stack.pop() {
            for &v in self.host.neighbors(u) {
                if alive[v] && linked(u, v) {
                    deg[v] -= 1;
                    if (deg[v] as u64) < self.capacity[v][choice[v]] as u64 {
                        alive[v] = false;
                        stack.push(v);
                    }
                }
            }
        }
        alive
    }

    /// Cover of `G` built from colour lists over colours `0..kappa`:
    /// equal colours are matched and `f` marks list membership.
    pub fn from_lists(host: Graph, kappa: usize, lists: &[Vec<usize>]) -> Result<Self, CoverError> {
        let mut c = Cover::new(host, kappa)?;
        for (v, list) in lists.iter().enumerate() {
            for &q in list {
                c.set_f(v, q, 1)?;
            }
        }
        for (u, v) in c.host.edges() {
            for q in 0..kappa {
                if lists[u].contains(&q) && lists[v].contains(&q) {
                    c.add_match(u, v, q, q)?;
                }
            }
        }
        Ok(c)
    }

    /// Identity matching on every slot of every edge.
    pub fn with_identity_matchings(mut self) -> Self {
        for sigma in self.matchings.values_mut() {
            for (q, t) in sigma.iter_mut().enumerate() {
                *t = Some(q);
            }
        }
        self
    }
}

fn invert(sigma: &[Option<usize>], kappa: usize) -> SlotMap {
    let mut out = vec![None; kappa];
    for (q, t) in sigma.iter().enumerate() {
        if let Some(t) = *t {
            out[t] = Some(q);
        }
    }
    out
}
