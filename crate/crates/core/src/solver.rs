//! Search for strictly f-degenerate transversals (SFDTs).
//!
//! [`find_sfdt`] first defers every vertex whose capacity sum exceeds its
//! current degree: such a vertex can always be re-inserted on top of any
//! SFDT of the rest, because its chosen neighbours block at most one slot
//! each. The residual core is then searched depth-first with forward
//! checking. Strict f-degeneracy is hereditary, so a partial choice whose
//! selected set is already stuck can be abandoned.

use thiserror::Error;

use crate::cover::{Cover, CoverError, Transversal};

/// Default limit on `kappa^n` for the exhaustive oracle.
pub const DEFAULT_ORACLE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("search budget of {0} exceeded")]
    BudgetExceeded(u64),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

/// Enumerates all transversals in lexicographic order (vertex 0 most
/// significant) and returns the first strictly f-degenerate one.
pub fn brute_force_sfdt(c: &Cover, budget: u64) -> Result<Option<Transversal>, SolveError> {
    let n = c.n();
    let kappa = c.kappa() as u64;
    let total = (0..n).try_fold(1u64, |acc, _| acc.checked_mul(kappa));
    match total {
        Some(t) if t <= budget => {}
        _ => return Err(SolveError::BudgetExceeded(budget)),
    }
    let mut choice = vec![0usize; n];
    loop {
        let r = Transversal(choice.clone());
        if c.is_strictly_f_degenerate(&r)? {
            return Ok(Some(r));
        }
        // odometer increment, last vertex fastest
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < c.kappa() {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// Complete search with no node limit.
pub fn find_sfdt(c: &Cover) -> Option<Transversal> {
    Solver::default()
        .solve(c)
        .expect("unbounded search cannot exceed its budget")
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Solver {
    /// Maximum number of tentative assignments; `None` is unbounded.
    pub node_budget: Option<u64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub deferred: usize,
    pub nodes: u64,
}

impl Solver {
    pub fn with_budget(budget: u64) -> Self {
        Solver {
            node_budget: Some(budget),
        }
    }

    pub fn solve(&self, c: &Cover) -> Result<Option<Transversal>, SolveError> {
        self.solve_with_stats(c).map(|(r, _)| r)
    }

    pub fn solve_with_stats(
        &self,
        c: &Cover,
    ) -> Result<(Option<Transversal>, SolveStats), SolveError> {
        let n = c.n();
        let mut stats = SolveStats::default();
        let mut alive = vec![true; n];
        let deferred = defer_loose_vertices(c, &mut alive);
        stats.deferred = deferred.len();

        let mut search = Search {
            cover: c,
            in_core: alive.clone(),
            choice: vec![None; n],
            nodes: 0,
            budget: self.node_budget,
        };
        if !search.run()? {
            stats.nodes = search.nodes;
            return Ok((None, stats));
        }
        stats.nodes = search.nodes;
        let mut choice: Vec<usize> = search.choice.iter().map(|q| q.unwrap_or(0)).collect();

        for &v in deferred.iter().rev() {
            alive[v] = true;
            if !reinsert(c, v, &mut choice, &alive) {
                // Unreachable by the counting argument; keep the search complete anyway.
                debug_assert!(false, "re-insertion of deferred vertex {v} failed");
                return self.solve_plain(c, stats);
            }
        }
        let r = Transversal(choice);
        if c.is_strictly_f_degenerate(&r)? {
            Ok((Some(r), stats))
        } else {
            debug_assert!(false, "assembled transversal failed re-validation");
            self.solve_plain(c, stats)
        }
    }

    /// Backtracking over the whole cover, without the deferral step.
    fn solve_plain(
        &self,
        c: &Cover,
        mut stats: SolveStats,
    ) -> Result<(Option<Transversal>, SolveStats), SolveError> {
        let n = c.n();
        let mut search = Search {
            cover: c,
            in_core: vec![true; n],
            choice: vec![None; n],
            nodes: 0,
            budget: self.node_budget,
        };
        let found = search.run()?;
        stats.nodes += search.nodes;
        if !found {
            return Ok((None, stats));
        }
        let r = Transversal(
            search
                .choice
                .iter()
                .map(|q| q.expect("complete assignment"))
                .collect(),
        );
        Ok((Some(r), stats))
    }
}

/// Repeatedly removes a vertex whose capacity sum exceeds its degree among
/// the remaining vertices. Returns the removal order.
fn defer_loose_vertices(c: &Cover, alive: &mut [bool]) -> Vec<usize> {
    let g = c.host();
    let fsum = c.fsum();
    let mut deg: Vec<u64> = (0..g.n()).map(|v| g.degree(v) as u64).collect();
    let mut order = Vec::new();
    let mut stack: Vec<usize> = (0..g.n()).rev().filter(|&v| fsum[v] > deg[v]).collect();
    for &v in &stack {
        alive[v] = false;
    }
    while let Some(v) = stack.pop() {
        order.push(v);
        for &w in g.neighbors(v) {
            if alive[w] {
                deg[w] -= 1;
                if fsum[w] > deg[w] {
                    alive[w] = false;
                    stack.push(w);
                }
            }
        }
    }
    order
}

/// Chooses a slot for `v` given the choices of the other alive vertices:
/// largest slack `f(v, q) - #blocking neighbours` first, then every other
/// slot, each verified by peeling the alive set.
fn reinsert(c: &Cover, v: usize, choice: &mut [usize], alive: &[bool]) -> bool {
    let mut slots: Vec<(i64, usize)> = (0..c.kappa())
        .map(|q| {
            let blocked = c
                .host()
                .neighbors(v)
                .iter()
                .filter(|&&u| alive[u] && c.mate(v, q, u) == Some(choice[u]))
                .count() as i64;
            (c.f(v, q) as i64 - blocked, q)
        })
        .collect();
    slots.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for (_, q) in slots {
        if c.f(v, q) == 0 {
            continue;
        }
        choice[v] = q;
        if c.peel_selected(choice, alive.to_vec()).iter().all(|a| !a) {
            return true;
        }
    }
    false
}

struct Search<'a> {
    cover: &'a Cover,
    in_core: Vec<bool>,
    choice: Vec<Option<usize>>,
    nodes: u64,
    budget: Option<u64>,
}

impl Search<'_> {
    fn run(&mut self) -> Result<bool, SolveError> {
        if !self.forward_check() {
            return Ok(false);
        }
        self.descend()
    }

    fn descend(&mut self) -> Result<bool, SolveError> {
        let Some(v) = self.next_vertex() else {
            return Ok(true);
        };
        for q in 0..self.cover.kappa() {
            if self.cover.f(v, q) == 0 {
                continue;
            }
            self.nodes += 1;
            if let Some(limit) = self.budget {
                if self.nodes > limit {
                    return Err(SolveError::BudgetExceeded(limit));
                }
            }
            self.choice[v] = Some(q);
            if self.selected_is_degenerate() && self.forward_check() && self.descend()? {
                return Ok(true);
            }
        }
        self.choice[v] = None;
        Ok(false)
    }

    /// Unassigned core vertex with the most assigned neighbours, then the
    /// highest core degree, then the smallest id.
    fn next_vertex(&self) -> Option<usize> {
        let g = self.cover.host();
        (0..g.n())
            .filter(|&v| self.in_core[v] && self.choice[v].is_none())
            .max_by_key(|&v| {
                let mut assigned = 0;
                let mut core_deg = 0;
                for &w in g.neighbors(v) {
                    if self.in_core[w] {
                        core_deg += 1;
                        if self.choice[w].is_some() {
                            assigned += 1;
                        }
                    }
                }
                (assigned, core_deg, std::cmp::Reverse(v))
            })
    }

    fn selected_is_degenerate(&self) -> bool {
        let mut flat = vec![0; self.choice.len()];
        let mut alive = vec![false; self.choice.len()];
        for (v, q) in self.choice.iter().enumerate() {
            if let Some(q) = *q {
                flat[v] = q;
                alive[v] = true;
            }
        }
        self.cover.peel_selected(&flat, alive).iter().all(|a| !a)
    }

    /// Every unassigned core vertex must still have a slot that keeps the
    /// selected set strictly f-degenerate.
    fn forward_check(&mut self) -> bool {
        let n = self.choice.len();
        let mut flat = vec![0; n];
        let mut alive = vec![false; n];
        for (v, q) in self.choice.iter().enumerate() {
            if let Some(q) = *q {
                flat[v] = q;
                alive[v] = true;
            }
        }
        for u in 0..n {
            if !self.in_core[u] || self.choice[u].is_some() {
                continue;
            }
            let viable = (0..self.cover.kappa()).any(|q| {
                if self.cover.f(u, q) == 0 {
                    return false;
                }
                flat[u] = q;
                let mut trial = alive.clone();
                trial[u] = true;
                self.cover.peel_selected(&flat, trial).iter().all(|a| !a)
            });
            flat[u] = 0;
            if !viable {
                return false;
            }
        }
        true
    }
}

/// No SFDT, yet deleting any single fan `L_v` leaves one.
pub fn is_minimal_non_sfd(c: &Cover, solver: &Solver) -> Result<bool, SolveError> {
    if solver.solve(c)?.is_some() {
        return Ok(false);
    }
    for v in 0..c.n() {
        let keep: Vec<usize> = (0..c.n()).filter(|&w| w != v).collect();
        let (sub, _) = c.restrict(&keep);
        if solver.solve(&sub)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MinimalPairError {
    #[error("cover is not a minimal non-strictly-f-degenerate pair")]
    NotMinimal,
    #[error("the chosen vertex set does not induce a 2-connected subgraph")]
    NotTwoConnected,
    #[error("vertex {0} has capacity sum below its degree")]
    OutsideD(usize),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Which alternative of the local-structure condition held.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalShape {
    Cycle,
    Complete,
    CapacityBound,
    Violated,
}

/// Outcome of checking the necessary conditions on a minimal pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalPairReport {
    pub connected: bool,
    pub sums_at_most_degree: bool,
    pub local_shape: LocalShape,
}

impl MinimalPairReport {
    pub fn part_i(&self) -> bool {
        self.connected && self.sums_at_most_degree
    }

    pub fn part_ii(&self) -> bool {
        self.local_shape != LocalShape::Violated
    }

    pub fn holds(&self) -> bool {
        self.part_i() && self.part_ii()
    }
}

/// Checks the necessary conditions every minimal non-SFD pair satisfies:
/// (i) the host is connected with `fsum(v) <= deg(v)` everywhere; (ii) for a
/// 2-connected `F` inside `D = {v : fsum(v) >= deg(v)}`, `G[V(F)]` is a
/// cycle, a complete graph, or has `deg(v) <= max_q f(v, q)` throughout.
pub fn check_minimal_pair(
    c: &Cover,
    f_vertices: &[usize],
    solver: &Solver,
) -> Result<MinimalPairReport, MinimalPairError> {
    if !is_minimal_non_sfd(c, solver)? {
        return Err(MinimalPairError::NotMinimal);
    }
    let g = c.host();
    let fsum = c.fsum();
    let sub = g.induced_subgraph(f_vertices);
    if !sub.graph.is_2connected() {
        return Err(MinimalPairError::NotTwoConnected);
    }
    if let Some(&v) = sub.parent.iter().find(|&&v| fsum[v] < g.degree(v) as u64) {
        return Err(MinimalPairError::OutsideD(v));
    }
    let connected = g.is_connected();
    let sums_at_most_degree = (0..g.n()).all(|v| fsum[v] <= g.degree(v) as u64);
    let local_shape = if sub.graph.is_cycle() {
        LocalShape::Cycle
    } else if sub.graph.is_complete() {
        LocalShape::Complete
    } else if sub
        .parent
        .iter()
        .enumerate()
        .all(|(i, &v)| sub.graph.degree(i) as u64 <= c.max_f(v) as u64)
    {
        LocalShape::CapacityBound
    } else {
        LocalShape::Violated
    };
    Ok(MinimalPairReport {
        connected,
        sums_at_most_degree,
        local_shape,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn k1(f: u32) -> Cover {
        let mut c = Cover::new(Graph::empty(1), 1).unwrap();
        c.set_f(0, 0, f).unwrap();
        c
    }

    fn mobius4() -> Cover {
        let mut c = Cover::new(Graph::cycle(4), 2)
            .unwrap()
            .with_identity_matchings();
        c.set_matching(3, 0, &[Some(1), Some(0)]).unwrap();
        for v in 0..4 {
            c.set_f_row(v, &[1, 1]).unwrap();
        }
        c
    }

    fn random_cover(rng: &mut ChaCha8Rng, n: usize, kappa: usize, slack: u64) -> Cover {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(0.5) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::new(n, &edges).unwrap();
        let mut c = Cover::new(g.clone(), kappa).unwrap();
        for (u, v) in g.edges() {
            let mut t: Vec<usize> = (0..kappa).collect();
            rand::seq::SliceRandom::shuffle(&mut t[..], rng);
            for q in 0..kappa {
                if rng.gen_bool(0.85) {
                    c.add_match(u, v, q, t[q]).unwrap();
                }
            }
        }
        for v in 0..n {
            let target = g.degree(v) as u64 + rng.gen_range(0..=slack);
            for _ in 0..target {
                let q = rng.gen_range(0..kappa);
                c.set_f(v, q, c.f(v, q) + 1).unwrap();
            }
        }
        c
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(
            brute_force_sfdt(&k1(1), 10).unwrap(),
            Some(Transversal(vec![0]))
        );
        assert_eq!(brute_force_sfdt(&k1(0), 10).unwrap(), None);
        assert_eq!(brute_force_sfdt(&mobius4(), 100).unwrap(), None);
        assert_eq!(
            brute_force_sfdt(&mobius4(), 15),
            Err(SolveError::BudgetExceeded(15))
        );
    }

    #[test]
    fn solver_examples() {
        assert_eq!(find_sfdt(&k1(1)), Some(Transversal(vec![0])));
        assert_eq!(find_sfdt(&k1(0)), None);
        assert_eq!(find_sfdt(&mobius4()), None);
        assert_eq!(
            find_sfdt(&Cover::new(Graph::empty(0), 1).unwrap()),
            Some(Transversal(vec![]))
        );

        let lists = Cover::from_lists(Graph::cycle(4), 2, &vec![vec![0, 1]; 4]).unwrap();
        assert!(find_sfdt(&lists).is_some());

        // monoblock of the 3x3 torus grid: kernel is the host, capacity 4 on slot 1
        let t = Graph::cycle(3).cartesian_product(&Graph::cycle(3));
        let mut mono = Cover::new(t.clone(), 2).unwrap();
        for (u, v) in t.edges() {
            mono.add_match(u, v, 0, 0).unwrap();
        }
        for v in 0..9 {
            mono.set_f_row(v, &[4, 0]).unwrap();
        }
        assert_eq!(brute_force_sfdt(&mono, 1 << 9).unwrap(), None);
        assert_eq!(find_sfdt(&mono), None);

        // capacity split 2 + 2 over two parallel copies: mixing slots escapes
        let mut split = Cover::new(t, 2).unwrap().with_identity_matchings();
        for v in 0..9 {
            split.set_f_row(v, &[2, 2]).unwrap();
        }
        assert!(brute_force_sfdt(&split, 1 << 9).unwrap().is_some());
        assert!(find_sfdt(&split).is_some());
    }

    #[test]
    fn slack_everywhere_is_always_colorable() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let n = rng.gen_range(1..=6);
            let mut c = random_cover(&mut rng, n, 3, 0);
            for v in 0..n {
                let q = rng.gen_range(0..3);
                c.set_f(v, q, c.f(v, q) + 1).unwrap();
            }
            let (r, stats) = Solver::default().solve_with_stats(&c).unwrap();
            assert!(r.is_some());
            assert_eq!(stats.deferred, n);
            assert!(brute_force_sfdt(&c, DEFAULT_ORACLE_BUDGET)
                .unwrap()
                .is_some());
        }
    }

    #[test]
    fn solver_agrees_with_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        for _ in 0..300 {
            let n = rng.gen_range(1..=6);
            let kappa = rng.gen_range(1..=3);
            let c = random_cover(&mut rng, n, kappa, 1);
            let fast = find_sfdt(&c);
            let slow = brute_force_sfdt(&c, DEFAULT_ORACLE_BUDGET).unwrap();
            assert_eq!(fast.is_some(), slow.is_some(), "{c:?}");
            if let Some(r) = fast {
                assert!(c.is_strictly_f_degenerate(&r).unwrap());
            }
        }
    }

    #[test]
    fn raising_capacity_is_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..100 {
            let n = rng.gen_range(1..=6);
            let c = random_cover(&mut rng, n, 2, 0);
            if find_sfdt(&c).is_none() {
                continue;
            }
            let mut raised = c.clone();
            let v = rng.gen_range(0..n);
            let q = rng.gen_range(0..2);
            raised.set_f(v, q, c.f(v, q) + 1).unwrap();
            assert!(find_sfdt(&raised).is_some());
        }
    }

    #[test]
    fn node_budget_is_enforced() {
        let t = Graph::cycle(3).cartesian_product(&Graph::cycle(3));
        let mut c = Cover::new(t, 2).unwrap().with_identity_matchings();
        for v in 0..9 {
            c.set_f_row(v, &[2, 2]).unwrap();
        }
        c.set_f(0, 1, 1).unwrap();
        assert_eq!(
            Solver::with_budget(3).solve(&c),
            Err(SolveError::BudgetExceeded(3))
        );
    }

    #[test]
    fn minimality() {
        let s = Solver::default();
        assert!(is_minimal_non_sfd(&mobius4(), &s).unwrap());
        assert!(!is_minimal_non_sfd(&k1(1), &s).unwrap());

        // Mobius component plus an isolated colourable vertex.
        let g = Graph::cycle(4).disjoint_union(&Graph::empty(1));
        let mut c = Cover::new(g, 2).unwrap().with_identity_matchings();
        c.set_matching(3, 0, &[Some(1), Some(0)]).unwrap();
        for v in 0..4 {
            c.set_f_row(v, &[1, 1]).unwrap();
        }
        c.set_f(4, 0, 1).unwrap();
        assert!(find_sfdt(&c).is_none());
        assert!(!is_minimal_non_sfd(&c, &s).unwrap());
    }

    #[test]
    fn minimal_pair_conditions() {
        let s = Solver::default();
        let report = check_minimal_pair(&mobius4(), &[0, 1, 2, 3], &s).unwrap();
        assert!(report.holds());
        assert_eq!(report.local_shape, LocalShape::Cycle);

        let mut k4 = Cover::new(Graph::complete(4), 2)
            .unwrap()
            .with_identity_matchings();
        for v in 0..4 {
            k4.set_f_row(v, &[1, 2]).unwrap();
        }
        let report = check_minimal_pair(&k4, &[0, 1, 2, 3], &s).unwrap();
        assert!(report.holds());
        assert_eq!(report.local_shape, LocalShape::Complete);

        assert_eq!(
            check_minimal_pair(&k1(1), &[0], &s),
            Err(MinimalPairError::NotMinimal)
        );
        assert_eq!(
            check_minimal_pair(&mobius4(), &[0, 1, 2], &s),
            Err(MinimalPairError::NotTwoConnected)
        );
    }
}
