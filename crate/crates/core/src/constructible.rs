//! Building covers and constructible covers.
//!
//! A building cover has `fsum(v) = deg(v)` everywhere and a kernel of one of
//! four shapes: a copy of the host (monoblock), disjoint copies of `K_p` over
//! a complete host with `f` constant per copy, two disjoint `n`-cycles over an
//! odd cycle, or one `2n`-cycle over an even cycle (the last two with
//! `f == 1` on the kernel). Constructible covers close building covers under
//! gluing at a single vertex with slot-wise addition of `f`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::cover::{Cover, CoverError};
use crate::graph::Graph;
use crate::iso::are_isomorphic;
use crate::solver::{SolveError, Solver};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BuildKind {
    Monoblock,
    TildeComplete,
    CircularLadder,
    MobiusLadder,
}

impl BuildKind {
    pub fn tag(self) -> &'static str {
        match self {
            BuildKind::Monoblock => "monoblock",
            BuildKind::TildeComplete => "tilde-complete",
            BuildKind::CircularLadder => "circular-ladder",
            BuildKind::MobiusLadder => "mobius-ladder",
        }
    }
}

impl fmt::Display for BuildKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("slot constants sum to {got}, expected p - 1 = {expected}")]
    BadConstantSum { got: u64, expected: u64 },
    #[error("{0} slot constants given for kappa {1}")]
    WrongSlotCount(usize, usize),
    #[error("circular ladders need an odd cycle length >= 3, got {0}")]
    CircularParity(usize),
    #[error("mobius ladders need an even cycle length >= 4, got {0}")]
    MobiusParity(usize),
    #[error("complete graph needs p >= 2, got {0}")]
    TooSmall(usize),
    #[error("glued covers must share kappa ({0} vs {1})")]
    KappaMismatch(usize, usize),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

/// `f(v, 1) = deg(v)`, every other slot 0, identity matchings on slot 1.
pub fn make_monoblock(g: &Graph, kappa: usize) -> Result<Cover, BuildError> {
    let mut c = Cover::new(g.clone(), kappa)?;
    for (u, v) in g.edges() {
        c.add_match(u, v, 0, 0)?;
    }
    for v in 0..g.n() {
        c.set_f(v, 0, g.degree(v) as u32)?;
    }
    Ok(c)
}

/// Cover of `K_p` with identity matchings on every slot of positive constant
/// and `f(v, q) = fconst[q]`.
pub fn make_tilde_complete(p: usize, kappa: usize, fconst: &[u32]) -> Result<Cover, BuildError> {
    if p < 2 {
        return Err(BuildError::TooSmall(p));
    }
    if fconst.len() != kappa {
        return Err(BuildError::WrongSlotCount(fconst.len(), kappa));
    }
    let got: u64 = fconst.iter().map(|&x| x as u64).sum();
    if got != p as u64 - 1 {
        return Err(BuildError::BadConstantSum {
            got,
            expected: p as u64 - 1,
        });
    }
    let g = Graph::complete(p);
    let mut c = Cover::new(g.clone(), kappa)?;
    for (u, v) in g.edges() {
        for (q, &x) in fconst.iter().enumerate() {
            if x > 0 {
                c.add_match(u, v, q, q)?;
            }
        }
    }
    for v in 0..p {
        c.set_f_row(v, fconst)?;
    }
    Ok(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderKind {
    Circular,
    Mobius,
}

/// `kappa = 2`, `f == 1`; identity matchings along `C_n`, with the closing
/// edge `(n-1, 0)` crossed for the Mobius kind.
pub fn make_ladder_cover(n: usize, kind: LadderKind) -> Result<Cover, BuildError> {
    match kind {
        LadderKind::Circular if n < 3 || n.is_multiple_of(2) => return Err(BuildError::CircularParity(n)),
        LadderKind::Mobius if n < 4 || n % 2 == 1 => return Err(BuildError::MobiusParity(n)),
        _ => {}
    }
    let mut c = Cover::new(Graph::cycle(n), 2)?.with_identity_matchings();
    if kind == LadderKind::Mobius {
        c.set_matching(n - 1, 0, &[Some(1), Some(0)])?;
    }
    for v in 0..n {
        c.set_f_row(v, &[1, 1])?;
    }
    Ok(c)
}

/// Identifies vertex `w1` of the first cover with `w2` of the second and
/// adds their capacities slot-wise. The glued host lists the first cover's
/// vertices, then the second's minus `w2`.
pub fn glue(c1: &Cover, w1: usize, c2: &Cover, w2: usize) -> Result<(Cover, usize), BuildError> {
    if c1.kappa() != c2.kappa() {
        return Err(BuildError::KappaMismatch(c1.kappa(), c2.kappa()));
    }
    let n1 = c1.n();
    let map2 = |v: usize| -> usize {
        match v.cmp(&w2) {
            std::cmp::Ordering::Equal => w1,
            std::cmp::Ordering::Less => n1 + v,
            std::cmp::Ordering::Greater => n1 + v - 1,
        }
    };
    let mut edges = c1.host().edges();
    edges.extend(
        c2.host()
            .edges()
            .into_iter()
            .map(|(u, v)| (map2(u), map2(v))),
    );
    let n = n1 + c2.n() - 1;
    let host = Graph::new(n, &edges).map_err(|_| CoverError::NotAnEdge { u: w1, v: w2 })?;
    let mut c = Cover::new(host, c1.kappa())?;
    for (u, v, qu, qv) in c1.matched_pairs() {
        c.add_match(u, v, qu, qv)?;
    }
    for (u, v, qu, qv) in c2.matched_pairs() {
        c.add_match(map2(u), map2(v), qu, qv)?;
    }
    for v in 0..n1 {
        c.set_f_row(v, c1.f_row(v))?;
    }
    for v in 0..c2.n() {
        let t = map2(v);
        for q in 0..c2.kappa() {
            let add = c2.f(v, q);
            c.set_f(t, q, c.f(t, q) + add)?;
        }
    }
    Ok((c, w1))
}

fn sums_equal_degrees(c: &Cover) -> bool {
    let g = c.host();
    c.fsum()
        .iter()
        .enumerate()
        .all(|(v, &s)| s == g.degree(v) as u64)
}

/// Which building-cover shape, if any, `c` has. The host must be connected.
pub fn is_building_cover(c: &Cover) -> Option<BuildKind> {
    let g = c.host();
    if g.n() == 0 || !g.is_connected() || !sums_equal_degrees(c) {
        return None;
    }
    // A lone vertex with zero capacity: its kernel is empty, which is the
    // degenerate monoblock.
    if g.n() == 1 {
        return Some(BuildKind::Monoblock);
    }
    let kernel = c.kernel();
    if are_isomorphic(&kernel.graph, g) {
        return Some(BuildKind::Monoblock);
    }
    if g.is_complete() && g.n() >= 2 && is_tilde_complete_kernel(c, &kernel.graph, &kernel.labels) {
        return Some(BuildKind::TildeComplete);
    }
    let unit = kernel.labels.iter().all(|&(v, q)| c.f(v, q) == 1);
    if g.is_cycle() && unit {
        let n = g.n();
        if n % 2 == 1 {
            let ladder = Graph::cycle(n).disjoint_union(&Graph::cycle(n));
            if are_isomorphic(&kernel.graph, &ladder) {
                return Some(BuildKind::CircularLadder);
            }
        } else if are_isomorphic(&kernel.graph, &Graph::cycle(2 * n)) {
            return Some(BuildKind::MobiusLadder);
        }
    }
    None
}

/// Kernel is a disjoint union of copies of `K_p` with `f` constant on each.
fn is_tilde_complete_kernel(c: &Cover, kernel: &Graph, labels: &[(usize, usize)]) -> bool {
    let p = c.n();
    let comps = kernel.components();
    !comps.is_empty()
        && comps.iter().all(|comp| {
            comp.len() == p
                && comp.iter().all(|&i| kernel.degree(i) == p - 1)
                && comp.iter().all(|&i| {
                    let (v, q) = labels[i];
                    let (v0, q0) = labels[comp[0]];
                    c.f(v, q) == c.f(v0, q0)
                })
        })
}

/// Whether the cover is constructible. The host must be connected.
pub fn is_constructible(c: &Cover) -> bool {
    let g = c.host();
    if g.n() == 0 || !g.is_connected() {
        return false;
    }
    let mut memo = HashMap::new();
    let ids: Vec<usize> = (0..g.n()).collect();
    constructible_part(c, &ids, &mut memo)
}

// (original host ids of the part, capacity rows of the part)
type MemoKey = (Vec<usize>, Vec<Vec<u32>>);

/// `ids[i]` is the original host id of local vertex `i`.
fn constructible_part(c: &Cover, ids: &[usize], memo: &mut HashMap<MemoKey, bool>) -> bool {
    let key = (
        ids.to_vec(),
        (0..c.n()).map(|v| c.f_row(v).to_vec()).collect(),
    );
    if let Some(&hit) = memo.get(&key) {
        return hit;
    }
    let result =
        sums_equal_degrees(c) && (is_building_cover(c).is_some() || split_somewhere(c, ids, memo));
    memo.insert(key, result);
    result
}

/// Tries every way to write `c` as two covers glued at a cut vertex `w`:
/// the components of `G - w` are shared out between the sides and
/// `f(w, .)` is split so each side's sum matches `w`'s degree there.
fn split_somewhere(c: &Cover, ids: &[usize], memo: &mut HashMap<MemoKey, bool>) -> bool {
    let g = c.host();
    for w in g.cut_vertices() {
        let rest: Vec<usize> = (0..g.n()).filter(|&v| v != w).collect();
        let induced = g.induced_subgraph(&rest);
        let comps: Vec<Vec<usize>> = induced
            .graph
            .components()
            .into_iter()
            .map(|comp| comp.into_iter().map(|i| induced.parent[i]).collect())
            .collect();
        let k = comps.len();
        let row = c.f_row(w).to_vec();
        // Component 0 always goes to the first side; the other side is nonempty.
        for mask in 0u32..(1 << (k - 1)) - 1 {
            let mut side1 = vec![w];
            let mut side2 = vec![w];
            side1.extend(&comps[0]);
            for (i, comp) in comps.iter().enumerate().skip(1) {
                if mask >> (i - 1) & 1 == 1 {
                    side1.extend(comp);
                } else {
                    side2.extend(comp);
                }
            }
            let deg1 = side1.iter().filter(|&&v| g.has_edge(w, v)).count() as u64;
            let (mut c1, map1) = c.restrict(&side1);
            let (mut c2, map2) = c.restrict(&side2);
            let w1 = map1.binary_search(&w).expect("glue vertex kept");
            let w2 = map2.binary_search(&w).expect("glue vertex kept");
            let ids1: Vec<usize> = map1.iter().map(|&v| ids[v]).collect();
            let ids2: Vec<usize> = map2.iter().map(|&v| ids[v]).collect();
            for split in bounded_compositions(&row, deg1) {
                let other: Vec<u32> = row.iter().zip(&split).map(|(a, b)| a - b).collect();
                c1.set_f_row(w1, &split).expect("row has kappa entries");
                c2.set_f_row(w2, &other).expect("row has kappa entries");
                if constructible_part(&c1, &ids1, memo) && constructible_part(&c2, &ids2, memo) {
                    return true;
                }
            }
        }
    }
    false
}

/// All vectors `x` with `0 <= x[q] <= bound[q]` and `sum x = total`.
pub(crate) fn bounded_compositions(bound: &[u32], total: u64) -> Vec<Vec<u32>> {
    fn rec(bound: &[u32], total: u64, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == bound.len() {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let rest: u64 = bound[prefix.len() + 1..].iter().map(|&x| x as u64).sum();
        let hi = (bound[prefix.len()] as u64).min(total);
        for x in 0..=hi {
            if total - x > rest {
                continue;
            }
            prefix.push(x as u32);
            rec(bound, total - x, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(bound, total, &mut Vec::new(), &mut out);
    out
}

/// The equivalence "SFDT exists iff not constructible" on one cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub constructible: bool,
    pub has_sfdt: bool,
}

impl EquivalenceReport {
    /// Exactly one of the two holds.
    pub fn consistent(&self) -> bool {
        self.constructible != self.has_sfdt
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EquivalenceError {
    #[error("host graph is not connected")]
    Disconnected,
    #[error("vertex {0} has capacity sum below its degree")]
    SumBelowDegree(usize),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

pub fn check_equivalence(
    c: &Cover,
    solver: &Solver,
) -> Result<EquivalenceReport, EquivalenceError> {
    let g = c.host();
    if !g.is_connected() {
        return Err(EquivalenceError::Disconnected);
    }
    let fsum = c.fsum();
    if let Some(v) = (0..g.n()).find(|&v| fsum[v] < g.degree(v) as u64) {
        return Err(EquivalenceError::SumBelowDegree(v));
    }
    Ok(EquivalenceReport {
        constructible: is_constructible(c),
        has_sfdt: solver.solve(c)?.is_some(),
    })
}
