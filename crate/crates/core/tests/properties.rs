use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sfdt_core::constructible::{
    glue, is_building_cover, is_constructible, make_ladder_cover, make_monoblock,
    make_tilde_complete, BuildKind, LadderKind,
};
use sfdt_core::discharge::{run_discharge, Scheme};
use sfdt_core::embedding::EmbeddedGraph;
use sfdt_core::io::{parse_cover, parse_graph6, to_graph6, write_cover};
use sfdt_core::iso::canonical_form;
use sfdt_core::solver::{brute_force_sfdt, find_sfdt};
use sfdt_core::{Cover, Graph};

fn random_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).unwrap()
}

/// Random partial matchings and capacities in `0..=fmax`.
fn random_cover(g: Graph, kappa: usize, fmax: u32, rng: &mut ChaCha8Rng) -> Cover {
    let mut c = Cover::new(g.clone(), kappa).unwrap();
    for (u, v) in g.edges() {
        let mut perm: Vec<usize> = (0..kappa).collect();
        perm.shuffle(rng);
        let sigma: Vec<Option<usize>> = perm
            .into_iter()
            .map(|q| rng.gen_bool(0.8).then_some(q))
            .collect();
        c.set_matching(u, v, &sigma).unwrap();
    }
    for v in 0..g.n() {
        let row: Vec<u32> = (0..kappa).map(|_| rng.gen_range(0..=fmax)).collect();
        c.set_f_row(v, &row).unwrap();
    }
    c
}

fn relabel(g: &Graph, perm: &[usize]) -> Graph {
    let edges: Vec<_> = g
        .edges()
        .into_iter()
        .map(|(u, v)| (perm[u], perm[v]))
        .collect();
    Graph::new(g.n(), &edges).unwrap()
}

/// One of the four building-cover shapes, chosen and sized by the RNG.
fn random_building_cover(rng: &mut ChaCha8Rng) -> (Cover, BuildKind) {
    match rng.gen_range(0..4) {
        0 => {
            let g = loop {
                let g = random_graph(rng.gen_range(2..6), 0.6, rng);
                if g.is_connected() {
                    break g;
                }
            };
            (
                make_monoblock(&g, rng.gen_range(1..4)).unwrap(),
                BuildKind::Monoblock,
            )
        }
        1 => {
            let p = rng.gen_range(3..6);
            let kappa = rng.gen_range(2..4);
            // Two positive slots keep the kernel from being a single K_p,
            // which would read as a monoblock.
            let mut f = vec![0u32; kappa];
            f[0] = 1;
            f[1] = 1;
            for _ in 0..p - 3 {
                f[rng.gen_range(0..kappa)] += 1;
            }
            (
                make_tilde_complete(p, kappa, &f).unwrap(),
                BuildKind::TildeComplete,
            )
        }
        2 => (
            make_ladder_cover(2 * rng.gen_range(2..4) + 1, LadderKind::Circular).unwrap(),
            BuildKind::CircularLadder,
        ),
        _ => (
            make_ladder_cover(2 * rng.gen_range(2..4), LadderKind::Mobius).unwrap(),
            BuildKind::MobiusLadder,
        ),
    }
}

#[test]
fn triangle_ladder_is_also_tilde_complete() {
    let c = make_ladder_cover(3, LadderKind::Circular).unwrap();
    assert_eq!(c, make_tilde_complete(3, 2, &[1, 1]).unwrap());
    assert_eq!(is_building_cover(&c), Some(BuildKind::TildeComplete));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn graph6_round_trip(seed in any::<u64>(), n in 0usize..70) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(n, 0.3, &mut rng);
        prop_assert_eq!(parse_graph6(&to_graph6(&g)).unwrap(), g);
    }

    #[test]
    fn cover_text_round_trip(seed in any::<u64>(), n in 1usize..8, kappa in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(n, 0.5, &mut rng);
        let c = random_cover(g, kappa, 3, &mut rng);
        prop_assert_eq!(parse_cover(&write_cover(&c)).unwrap(), c);
    }

    #[test]
    fn canonical_form_ignores_labels(seed in any::<u64>(), n in 1usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(n, 0.45, &mut rng);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        prop_assert_eq!(canonical_form(&g), canonical_form(&relabel(&g, &perm)));
    }

    #[test]
    fn solver_matches_brute_force(seed in any::<u64>(), n in 1usize..7, kappa in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(n, 0.5, &mut rng);
        let c = random_cover(g, kappa, 2, &mut rng);
        let found = find_sfdt(&c);
        let oracle = brute_force_sfdt(&c, 1_000_000).unwrap();
        prop_assert_eq!(found.is_some(), oracle.is_some());
        if let Some(r) = found {
            prop_assert!(c.is_strictly_f_degenerate(&r).unwrap());
        }
    }

    #[test]
    fn raising_capacity_keeps_transversals(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(n, 0.5, &mut rng);
        let c = random_cover(g, 2, 2, &mut rng);
        if let Some(r) = find_sfdt(&c) {
            let mut more = c.clone();
            let (v, q) = (rng.gen_range(0..n), rng.gen_range(0..2));
            more.set_f(v, q, c.f(v, q) + 1).unwrap();
            prop_assert!(more.is_strictly_f_degenerate(&r).unwrap());
        }
    }

    #[test]
    fn constructors_are_recognised(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (c, kind) = random_building_cover(&mut rng);
        prop_assert_eq!(is_building_cover(&c), Some(kind));
        prop_assert!(is_constructible(&c));
        prop_assert!(find_sfdt(&c).is_none());
    }

    #[test]
    fn gluing_preserves_constructibility(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut c, _) = random_building_cover(&mut rng);
        for _ in 0..rng.gen_range(1..3) {
            let (d, _) = random_building_cover(&mut rng);
            if d.kappa() != c.kappa() {
                continue;
            }
            let (w1, w2) = (rng.gen_range(0..c.n()), rng.gen_range(0..d.n()));
            c = glue(&c, w1, &d, w2).unwrap().0;
        }
        prop_assert!(is_constructible(&c));
        prop_assert!(find_sfdt(&c).is_none());
    }

    #[test]
    fn discharging_conserves_charge(seed in any::<u64>(), n in 4usize..16) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let deletions = rng.gen_range(0..2 * n);
        let e = EmbeddedGraph::random_plane_graph(n, deletions, &mut rng);
        prop_assert_eq!(e.euler_characteristic(), 2);
        for s in [Scheme::MlOne, Scheme::MlTwo, Scheme::MlThree] {
            prop_assert!(run_discharge(&e, s).is_conserved());
        }
    }
}
