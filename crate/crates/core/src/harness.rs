//! Verification sweeps over small connected graphs.
//!
//! Every sweep enumerates connected graphs up to isomorphism, processes
//! them in canonical order (optionally on a thread pool) and reports the
//! results in that same order, so output depends only on the arguments.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::constructible::{bounded_compositions, check_equivalence};
use crate::cover::Cover;
use crate::detect::{find_cap, hypothesis_check, Family};
use crate::graph::Graph;
use crate::io::to_graph6;
use crate::iso::canonical_form;
use crate::solver::{brute_force_sfdt, find_sfdt, Solver, DEFAULT_ORACLE_BUDGET};

pub const MAX_ENUMERATION_ORDER: usize = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HarnessError {
    #[error("graph enumeration is limited to n <= {MAX_ENUMERATION_ORDER}, got {0}")]
    TooLarge(usize),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("unknown sweep family `{0}`")]
    UnknownFamily(String),
    #[error("could not build thread pool: {0}")]
    ThreadPool(String),
}

/// All connected graphs on `n` vertices up to isomorphism, each given by
/// its canonical labelling, in ascending canonical order.
pub fn enumerate_connected_graphs(n: usize) -> Result<Vec<Graph>, HarnessError> {
    if n > MAX_ENUMERATION_ORDER {
        return Err(HarnessError::TooLarge(n));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    // every connected graph has a vertex whose removal leaves it connected
    let mut level = vec![Graph::empty(1)];
    for k in 2..=n {
        let prev = k - 1;
        let forms: BTreeSet<_> = level
            .par_iter()
            .flat_map_iter(|g| {
                let base = g.edges();
                (1u32..1 << prev).map(move |mask| {
                    let mut edges = base.clone();
                    edges.extend((0..prev).filter(|&v| mask >> v & 1 == 1).map(|v| (v, prev)));
                    canonical_form(&Graph::new(k, &edges).expect("simple extension"))
                })
            })
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        level = forms.into_iter().map(|f| f.to_graph()).collect();
    }
    Ok(level)
}

/// Connected graphs on `1..=nmax` vertices in canonical order by size.
pub fn connected_graphs_up_to(nmax: usize) -> Result<Vec<Graph>, HarnessError> {
    let mut out = Vec::new();
    for n in 1..=nmax {
        out.extend(enumerate_connected_graphs(n)?);
    }
    Ok(out)
}

/// Graph classes the planar sweeps range over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepFamily {
    Fig2FreePlanar,
    Fig3FreePlanar,
    No4CyclesPlanar,
}

impl SweepFamily {
    pub const ALL: [SweepFamily; 3] = [
        SweepFamily::Fig2FreePlanar,
        SweepFamily::Fig3FreePlanar,
        SweepFamily::No4CyclesPlanar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepFamily::Fig2FreePlanar => "fig2-free-planar",
            SweepFamily::Fig3FreePlanar => "fig3-free-planar",
            SweepFamily::No4CyclesPlanar => "no4cycles-planar",
        }
    }

    pub fn hypothesis(self) -> Family {
        match self {
            SweepFamily::Fig2FreePlanar => Family::Fig2Free,
            SweepFamily::Fig3FreePlanar => Family::Fig3Free,
            SweepFamily::No4CyclesPlanar => Family::No4Cycles,
        }
    }

    pub fn contains(self, g: &Graph) -> bool {
        g.is_planar() && hypothesis_check(g, self.hypothesis())
    }

    /// Largest capacity a single slot may take in the coloring sweep.
    pub fn max_slot_capacity(self) -> u32 {
        match self {
            SweepFamily::Fig2FreePlanar => 4,
            _ => 2,
        }
    }
}

impl fmt::Display for SweepFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepFamily {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SweepFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| HarnessError::UnknownFamily(s.to_string()))
    }
}

/// Outcome of one sweep. `lines` are informational; any entry in
/// `violations` is a failure.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepReport {
    pub suite: String,
    pub graphs: usize,
    pub cases: usize,
    pub lines: Vec<String>,
    pub violations: Vec<String>,
}

impl SweepReport {
    fn new(suite: impl Into<String>) -> Self {
        SweepReport {
            suite: suite.into(),
            ..Default::default()
        }
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("suite {}\n", self.suite);
        for l in &self.lines {
            let _ = writeln!(out, "{l}");
        }
        for v in &self.violations {
            let _ = writeln!(out, "VIOLATION {v}");
        }
        let _ = writeln!(
            out,
            "graphs {} cases {} violations {}",
            self.graphs,
            self.cases,
            self.violations.len()
        );
        out
    }

    /// Adds per-graph outcomes and returns the total of their `marked` counts.
    fn absorb(&mut self, per_graph: Vec<GraphOutcome>) -> usize {
        let mut marked = 0;
        for o in per_graph {
            marked += o.marked;
            self.graphs += 1;
            self.cases += o.cases;
            self.violations.extend(o.violations);
        }
        marked
    }
}

#[derive(Debug, Default)]
struct GraphOutcome {
    cases: usize,
    /// Cases on the rarer side of a dichotomy, reported for coverage.
    marked: usize,
    violations: Vec<String>,
}

/// Runs `work` on every graph, in parallel when `jobs != 1`, and returns
/// the outcomes in input order.
fn run_jobs<T, F>(graphs: &[Graph], jobs: usize, work: F) -> Result<Vec<T>, HarnessError>
where
    T: Send,
    F: Fn(usize, &Graph) -> T + Sync + Send,
{
    if jobs == 1 {
        return Ok(graphs.iter().enumerate().map(|(i, g)| work(i, g)).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| HarnessError::ThreadPool(e.to_string()))?;
    Ok(pool.install(|| {
        graphs
            .par_iter()
            .enumerate()
            .map(|(i, g)| work(i, g))
            .collect()
    }))
}

/// Per-graph random stream: independent of scheduling.
fn graph_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Settings for drawing random covers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverSampler {
    pub kappa: usize,
    /// Upper bound on each `f(v, q)`.
    pub max_slot: u32,
    /// Probability that an edge carries a full matching rather than a
    /// random partial one.
    pub full_probability: f64,
}

impl CoverSampler {
    /// A cover with `f(v, 1) + ... + f(v, kappa) = targets[v]`, each row
    /// uniform over the admissible compositions. `None` if some target is
    /// out of reach.
    pub fn sample<R: Rng>(&self, g: &Graph, targets: &[u64], rng: &mut R) -> Option<Cover> {
        let mut c = Cover::new(g.clone(), self.kappa).ok()?;
        for (u, v) in g.edges() {
            let mut perm: Vec<usize> = (0..self.kappa).collect();
            perm.shuffle(rng);
            let full = rng.gen_bool(self.full_probability);
            for (q, &t) in perm.iter().enumerate() {
                if full || rng.gen_bool(0.5) {
                    c.add_match(u, v, q, t).expect("permutation is injective");
                }
            }
        }
        let bound = vec![self.max_slot; self.kappa];
        for (v, &target) in targets.iter().enumerate() {
            let rows = bounded_compositions(&bound, target);
            let row = rows.choose(rng)?;
            c.set_f_row(v, row).expect("row has kappa entries");
        }
        Some(c)
    }
}

/// Every connected planar fig2-free graph on at most `nmax` vertices is
/// 3-degenerate.
pub fn verify_planar_3degenerate(nmax: usize, jobs: usize) -> Result<SweepReport, HarnessError> {
    let mut report = SweepReport::new("3degenerate");
    for n in 1..=nmax {
        let all = enumerate_connected_graphs(n)?;
        let family: Vec<Graph> = all
            .into_iter()
            .filter(|g| SweepFamily::Fig2FreePlanar.contains(g))
            .collect();
        let outcomes = run_jobs(&family, jobs, |_, g| GraphOutcome {
            cases: 1,
            marked: 0,
            violations: if g.is_k_degenerate(3) {
                Vec::new()
            } else {
                vec![format!("{} is not 3-degenerate", to_graph6(g))]
            },
        })?;
        report
            .lines
            .push(format!("n {n} family-graphs {}", family.len()));
        report.absorb(outcomes);
    }
    Ok(report)
}

/// How covers are chosen for the equivalence sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MrCovers {
    /// Every full matching and every `f` with `fsum = deg`.
    Exhaustive,
    /// This many seeded covers per graph with `fsum = deg`.
    Sampled(usize),
}

/// The equivalence "SFDT exists iff not constructible" on covers with
/// `fsum = deg`. Sampled covers use full matchings; the verdict is also
/// cross-checked against the exhaustive oracle.
pub fn verify_constructible_equivalence(
    nmax: usize,
    kappa: usize,
    covers: MrCovers,
    seed: u64,
    jobs: usize,
) -> Result<SweepReport, HarnessError> {
    let label = match covers {
        MrCovers::Exhaustive => "exhaustive".to_string(),
        MrCovers::Sampled(k) => format!("sampled {k}"),
    };
    let mut report = SweepReport::new("mr");
    report.lines.push(format!(
        "nmax {nmax} kappa {kappa} covers {label} seed {seed}"
    ));
    let graphs = connected_graphs_up_to(nmax)?;
    let sampler = CoverSampler {
        kappa,
        max_slot: u32::MAX,
        full_probability: 1.0,
    };
    let outcomes = run_jobs(&graphs, jobs, |i, g| {
        let targets: Vec<u64> = g.degrees().into_iter().map(|d| d as u64).collect();
        let list: Vec<Cover> = match covers {
            MrCovers::Exhaustive => all_full_covers(g, kappa, &targets),
            MrCovers::Sampled(k) => {
                let mut rng = graph_rng(seed, i);
                (0..k)
                    .filter_map(|_| sampler.sample(g, &targets, &mut rng))
                    .collect()
            }
        };
        let mut out = GraphOutcome::default();
        for c in &list {
            out.cases += 1;
            match equivalence_violation(c) {
                Ok(true) => out.marked += 1,
                Ok(false) => {}
                Err(v) => out.violations.push(v),
            }
        }
        out
    })?;
    let constructible = report.absorb(outcomes);
    report
        .lines
        .push(format!("constructible-covers {constructible}"));
    Ok(report)
}

/// `Ok(constructible)` when the cover is consistent, else a description.
fn equivalence_violation(c: &Cover) -> Result<bool, String> {
    let g6 = to_graph6(c.host());
    match check_equivalence(c, &Solver::default()) {
        Err(e) => Err(format!("{g6}: {e}")),
        Ok(r) if !r.consistent() => Err(format!(
            "{g6}: constructible={} has_sfdt={} f={:?}",
            r.constructible,
            r.has_sfdt,
            (0..c.n()).map(|v| c.f_row(v).to_vec()).collect::<Vec<_>>()
        )),
        Ok(r) => match brute_force_sfdt(c, DEFAULT_ORACLE_BUDGET) {
            Ok(oracle) if oracle.is_some() != r.has_sfdt => {
                Err(format!("{g6}: solver and oracle disagree"))
            }
            _ => Ok(r.constructible),
        },
    }
}

/// Every cover of `g` with full matchings and row sums `targets`.
pub fn all_full_covers(g: &Graph, kappa: usize, targets: &[u64]) -> Vec<Cover> {
    let perms = permutations(kappa);
    let edges = g.edges();
    let bound = vec![u32::MAX; kappa];
    let rows: Vec<Vec<Vec<u32>>> = targets
        .iter()
        .map(|&t| bounded_compositions(&bound, t))
        .collect();
    let mut matchings = Vec::new();
    let mut idx = vec![0usize; edges.len()];
    loop {
        let mut c = Cover::new(g.clone(), kappa).expect("kappa >= 1");
        for (e, &(u, v)) in edges.iter().enumerate() {
            let sigma: Vec<Option<usize>> = perms[idx[e]].iter().map(|&t| Some(t)).collect();
            c.set_matching(u, v, &sigma).expect("permutation");
        }
        matchings.push(c);
        if !advance(&mut idx, perms.len()) {
            break;
        }
    }
    let mut out = Vec::new();
    for base in matchings {
        let mut pick = vec![0usize; targets.len()];
        loop {
            let mut c = base.clone();
            for v in 0..targets.len() {
                c.set_f_row(v, &rows[v][pick[v]])
                    .expect("row has kappa entries");
            }
            out.push(c);
            if !advance_mixed(&mut pick, &rows.iter().map(Vec::len).collect::<Vec<_>>()) {
                break;
            }
        }
    }
    out
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, k - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn advance(idx: &mut [usize], radix: usize) -> bool {
    for x in idx.iter_mut() {
        *x += 1;
        if *x < radix {
            return true;
        }
        *x = 0;
    }
    false
}

fn advance_mixed(idx: &mut [usize], radix: &[usize]) -> bool {
    for (x, &r) in idx.iter_mut().zip(radix) {
        *x += 1;
        if *x < r {
            return true;
        }
        *x = 0;
    }
    false
}

/// The solver against the exhaustive oracle on seeded covers with
/// `fsum(v)` in `{deg(v), deg(v) + 1}` and random partial matchings.
pub fn verify_oracle(
    nmax: usize,
    kappa: usize,
    covers_per_graph: usize,
    seed: u64,
    jobs: usize,
) -> Result<SweepReport, HarnessError> {
    let mut report = SweepReport::new("oracle");
    report.lines.push(format!(
        "nmax {nmax} kappa {kappa} samples {covers_per_graph} seed {seed}"
    ));
    let graphs = connected_graphs_up_to(nmax)?;
    let sampler = CoverSampler {
        kappa,
        max_slot: u32::MAX,
        full_probability: 0.75,
    };
    let outcomes = run_jobs(&graphs, jobs, |i, g| {
        let mut rng = graph_rng(seed, i);
        let mut out = GraphOutcome::default();
        for _ in 0..covers_per_graph {
            let targets: Vec<u64> = g
                .degrees()
                .into_iter()
                .map(|d| d as u64 + rng.gen_range(0..=1))
                .collect();
            let Some(c) = sampler.sample(g, &targets, &mut rng) else {
                continue;
            };
            out.cases += 1;
            let fast = find_sfdt(&c);
            match brute_force_sfdt(&c, DEFAULT_ORACLE_BUDGET) {
                Ok(slow) if slow.is_some() != fast.is_some() => {
                    out.violations.push(format!(
                        "{}: solver {:?} oracle {:?}",
                        to_graph6(g),
                        fast,
                        slow
                    ));
                }
                Ok(_) => {}
                Err(e) => out.violations.push(format!("{}: {e}", to_graph6(g))),
            }
            if let Some(r) = &fast {
                if c.is_strictly_f_degenerate(r) != Ok(true) {
                    out.violations.push(format!(
                        "{}: returned transversal is not strictly f-degenerate",
                        to_graph6(g)
                    ));
                }
            }
        }
        out
    })?;
    report.absorb(outcomes);
    Ok(report)
}

/// Family graphs with seeded covers whose rows sum to 4 and whose slots
/// are bounded by the family's capacity range; each must have an SFDT.
pub fn verify_dp4(
    family: SweepFamily,
    nmax: usize,
    kappa: usize,
    covers_per_graph: usize,
    seed: u64,
    jobs: usize,
) -> Result<SweepReport, HarnessError> {
    let mut report = SweepReport::new("dp4");
    report.lines.push(format!(
        "family {family} nmax {nmax} kappa {kappa} samples {covers_per_graph} seed {seed} max-slot {}",
        family.max_slot_capacity()
    ));
    let graphs: Vec<Graph> = connected_graphs_up_to(nmax)?
        .into_iter()
        .filter(|g| family.contains(g))
        .collect();
    let sampler = CoverSampler {
        kappa,
        max_slot: family.max_slot_capacity(),
        full_probability: 1.0,
    };
    let outcomes = run_jobs(&graphs, jobs, |i, g| {
        let mut rng = graph_rng(seed, i);
        let mut out = GraphOutcome::default();
        let targets = vec![4u64; g.n()];
        for _ in 0..covers_per_graph {
            let Some(c) = sampler.sample(g, &targets, &mut rng) else {
                out.violations
                    .push(format!("{}: no admissible capacity rows", to_graph6(g)));
                break;
            };
            out.cases += 1;
            if find_sfdt(&c).is_none() {
                out.violations.push(format!("{}: no SFDT", to_graph6(g)));
            }
        }
        out
    })?;
    report.absorb(outcomes);
    Ok(report)
}

/// Minimum degree at most three, or the family's cap subgraph.
pub fn verify_structure(
    family: SweepFamily,
    nmax: usize,
    jobs: usize,
) -> Result<SweepReport, HarnessError> {
    let mut report = SweepReport::new("structure");
    report.lines.push(format!("family {family} nmax {nmax}"));
    let graphs: Vec<Graph> = connected_graphs_up_to(nmax)?
        .into_iter()
        .filter(|g| family.contains(g))
        .collect();
    let outcomes = run_jobs(&graphs, jobs, |_, g| {
        let low = g.min_degree().map_or(true, |d| d <= 3);
        let ok = low
            || match family {
                SweepFamily::Fig2FreePlanar => false,
                SweepFamily::Fig3FreePlanar => find_cap(g, 5, 5, true).is_some(),
                SweepFamily::No4CyclesPlanar => find_cap(g, 5, g.n(), true).is_some(),
            };
        GraphOutcome {
            cases: 1,
            marked: 0,
            violations: if ok {
                Vec::new()
            } else {
                vec![format!("{}: min degree >= 4 and no cap", to_graph6(g))]
            },
        }
    })?;
    let high = graphs
        .iter()
        .filter(|g| g.min_degree().is_ok_and(|d| d >= 4))
        .count();
    report.lines.push(format!("min-degree-4-graphs {high}"));
    report.absorb(outcomes);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructible::is_constructible;

    #[test]
    fn connected_graph_counts() {
        let counts: Vec<usize> = (0..=6)
            .map(|n| enumerate_connected_graphs(n).unwrap().len())
            .collect();
        assert_eq!(counts, vec![0, 1, 1, 2, 6, 21, 112]);
        assert_eq!(
            enumerate_connected_graphs(8),
            Err(HarnessError::TooLarge(8))
        );
        assert!(enumerate_connected_graphs(5)
            .unwrap()
            .iter()
            .all(Graph::is_connected));
    }

    #[test]
    fn enumeration_is_deterministic_under_parallelism() {
        let a = enumerate_connected_graphs(6).unwrap();
        let b = rayon::ThreadPoolBuilder::new()
            .num_threads(3)
            .build()
            .unwrap()
            .install(|| enumerate_connected_graphs(6).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn sampler_respects_targets() {
        let g = Graph::complete(4);
        let s = CoverSampler {
            kappa: 4,
            max_slot: 2,
            full_probability: 1.0,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let c = s.sample(&g, &[4, 4, 4, 4], &mut rng).unwrap();
            assert_eq!(c.fsum(), vec![4; 4]);
            assert!(c.is_full_matching());
            assert!((0..4).all(|v| c.max_f(v) <= 2));
        }
        assert!(s.sample(&g, &[9, 4, 4, 4], &mut rng).is_none());
    }

    #[test]
    fn full_cover_enumeration() {
        let covers = all_full_covers(&Graph::cycle(3), 2, &[2, 2, 2]);
        // 2^3 matchings, 3 rows per vertex
        assert_eq!(covers.len(), 8 * 27);
        assert!(covers.iter().any(is_constructible));
    }

    #[test]
    fn small_sweeps_are_clean_and_reproducible() {
        let a = verify_planar_3degenerate(5, 1).unwrap();
        assert!(a.is_clean());
        assert_eq!(a, verify_planar_3degenerate(5, 2).unwrap());
        let mr = verify_constructible_equivalence(4, 2, MrCovers::Sampled(5), 42, 2).unwrap();
        assert!(mr.is_clean(), "{}", mr.to_text());
        assert_eq!(
            mr,
            verify_constructible_equivalence(4, 2, MrCovers::Sampled(5), 42, 1).unwrap()
        );
        let dp = verify_dp4(SweepFamily::Fig3FreePlanar, 5, 4, 3, 7, 1).unwrap();
        assert!(dp.is_clean());
        assert!(verify_structure(SweepFamily::No4CyclesPlanar, 6, 1)
            .unwrap()
            .is_clean());
        assert_eq!(
            "fig2-free-planar".parse::<SweepFamily>(),
            Ok(SweepFamily::Fig2FreePlanar)
        );
    }
}
