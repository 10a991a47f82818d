//! Browser bindings for the demo page. Every entry point takes plain text or
//! numbers and returns a JSON string; failures come back as
//! `{"error": "..."}` rather than exceptions.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use sfdt_core::constructible::{
    is_building_cover, is_constructible, make_ladder_cover, make_monoblock, make_tilde_complete,
    LadderKind,
};
use sfdt_core::detect::{builtin_pattern, family_witness, find_cap, find_pattern, Family};
use sfdt_core::discharge::{format_charge, run_discharge, Element, Scheme};
use sfdt_core::embedding::EmbeddedGraph;
use sfdt_core::io::{parse_cover, parse_graph_auto, write_cover};
use sfdt_core::solver::Solver;
use sfdt_core::Graph;

const SOLVE_BUDGET: u64 = 2_000_000;

fn error(msg: impl ToString) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

fn edges_json(g: &Graph) -> Value {
    json!(g
        .edges()
        .into_iter()
        .map(|(u, v)| [u, v])
        .collect::<Vec<_>>())
}

/// Cover text for one of the building families, to seed the solve panel.
#[wasm_bindgen]
pub fn example_cover(family: &str, size: usize) -> String {
    let cover = match family {
        "circular-ladder" => make_ladder_cover(size, LadderKind::Circular),
        "mobius-ladder" => make_ladder_cover(size, LadderKind::Mobius),
        "tilde-complete" => {
            let mut f = vec![1; 2];
            f[1] = size.saturating_sub(2) as u32;
            make_tilde_complete(size, 2, &f)
        }
        "monoblock-torus" => make_monoblock(
            &Graph::cycle(size).cartesian_product(&Graph::cycle(size)),
            2,
        ),
        "monoblock-cycle" => make_monoblock(&Graph::cycle(size), 2),
        other => return format!("# unknown family {other}\n"),
    };
    match cover {
        Ok(c) => write_cover(&c),
        Err(e) => format!("# {e}\n"),
    }
}

/// Solves a cover given in the cover text format and classifies it.
#[wasm_bindgen]
pub fn solve_cover(text: &str) -> String {
    let c = match parse_cover(text) {
        Ok(c) => c,
        Err(e) => return error(e),
    };
    let g = c.host();
    if !g.is_connected() {
        return error("the host graph must be connected");
    }
    let found = match Solver::with_budget(SOLVE_BUDGET).solve(&c) {
        Ok(r) => r,
        Err(e) => return error(e),
    };
    let class = match is_building_cover(&c) {
        Some(kind) => format!("BUILDING {kind}"),
        None if is_constructible(&c) => "CONSTRUCTIBLE".into(),
        None => "NO".into(),
    };
    let degrees_met = c
        .fsum()
        .iter()
        .enumerate()
        .all(|(v, &s)| s >= g.degree(v) as u64);
    json!({
        "n": g.n(),
        "edges": edges_json(g),
        "kappa": c.kappa(),
        "answer": match &found {
            Some(r) => format!("SFDT {}", r.display_one_based()),
            None => "NONE".into(),
        },
        "transversal": found.map(|r| r.0.iter().map(|q| q + 1).collect::<Vec<_>>()),
        "constructible": class,
        "fsum_at_least_degree": degrees_met,
    })
    .to_string()
}

/// Runs a query against a graph in graph6 or edge-list form. `query` is a
/// built-in pattern name, a hypothesis family name, or `cap KMIN KMAX`
/// optionally followed by `deg4`.
#[wasm_bindgen]
pub fn detect_in_graph(graph_text: &str, query: &str) -> String {
    let g = match parse_graph_auto(graph_text) {
        Ok(g) => g,
        Err(e) => return error(e),
    };
    let words: Vec<&str> = query.split_whitespace().collect();
    let (text, hit): (String, Vec<usize>) = match words.as_slice() {
        ["cap", kmin, kmax, rest @ ..] => {
            let (Ok(kmin), Ok(kmax)) = (kmin.parse::<usize>(), kmax.parse::<usize>()) else {
                return error("cap bounds must be numbers");
            };
            if kmin < 3 || kmin > kmax {
                return error("cap bounds need 3 <= KMIN <= KMAX");
            }
            match find_cap(&g, kmin, kmax, rest.first() == Some(&"deg4")) {
                Some(cap) => {
                    let mut hit = cap.cycle.clone();
                    hit.push(cap.apex);
                    (
                        format!("CAP length {} apex {}", cap.cycle.len(), cap.apex),
                        hit,
                    )
                }
                None => ("NONE".into(), Vec::new()),
            }
        }
        [name] if name.parse::<Family>().is_ok() => {
            let family: Family = name.parse().expect("checked above");
            match family_witness(&g, family) {
                None => (format!("{family} holds"), Vec::new()),
                Some((pattern, emb)) => (format!("{family} fails: contains {pattern}"), emb.0),
            }
        }
        [name] => match builtin_pattern(name) {
            Ok(p) => match find_pattern(&p, &g) {
                Some(emb) => (format!("FOUND {}", p.name), emb.0),
                None => ("NONE".into(), Vec::new()),
            },
            Err(e) => return error(e),
        },
        _ => return error("empty query"),
    };
    let hit_edges: Vec<[usize; 2]> = g
        .edges()
        .into_iter()
        .filter(|(u, v)| hit.contains(u) && hit.contains(v))
        .map(|(u, v)| [u, v])
        .collect();
    json!({ "n": g.n(), "edges": edges_json(&g), "text": text, "highlight": hit, "highlight_edges": hit_edges })
        .to_string()
}

fn instance(
    name: &str,
    size: usize,
    seed: u32,
) -> Result<(EmbeddedGraph, Option<Vec<[f64; 2]>>), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.into());
    match name {
        "torus-grid" => {
            let e = EmbeddedGraph::torus_grid(size, size).map_err(|e| e.to_string())?;
            let pos = (0..size * size)
                .map(|v| [(v % size) as f64, (v / size) as f64])
                .collect();
            Ok((e, Some(pos)))
        }
        "icosahedron" => Ok((EmbeddedGraph::icosahedron(), None)),
        "octahedron" => Ok((EmbeddedGraph::octahedron(), None)),
        "stacked" if (4..=40).contains(&size) => {
            Ok((EmbeddedGraph::stacked_triangulation(size, &mut rng), None))
        }
        "random-plane" if (4..=40).contains(&size) => Ok((
            EmbeddedGraph::random_plane_graph(size, size, &mut rng),
            None,
        )),
        "stacked" | "random-plane" => Err("size must be between 4 and 40".into()),
        other => Err(format!("unknown instance {other}")),
    }
}

/// Runs a discharging scheme on a built-in embedded instance.
#[wasm_bindgen]
pub fn discharge_instance(name: &str, size: usize, seed: u32, scheme: &str) -> String {
    let scheme: Scheme = match scheme.parse() {
        Ok(s) => s,
        Err(e) => return error(e),
    };
    let (e, positions) = match instance(name, size, seed) {
        Ok(x) => x,
        Err(msg) => return error(msg),
    };
    let ledger = run_discharge(&e, scheme);
    let finals = ledger.final_charges();
    let g = e.graph();
    let vertex_final: Vec<String> = (0..g.n())
        .map(|v| {
            finals
                .get(&Element::Vertex(v))
                .map_or(String::new(), format_charge)
        })
        .collect();
    let negative_vertices: Vec<usize> = ledger
        .negatives()
        .into_iter()
        .filter_map(|(el, _)| match el {
            Element::Vertex(v) => Some(v),
            _ => None,
        })
        .collect();
    json!({
        "n": g.n(),
        "edges": edges_json(g),
        "positions": positions,
        "faces": e.faces().len(),
        "euler": e.euler_characteristic(),
        "summary": ledger.summary_line(),
        "conserved": ledger.is_conserved(),
        "transfers": ledger.transfers.len(),
        "vertex_final": vertex_final,
        "negative_vertices": negative_vertices,
        "ledger": ledger.to_text(),
    })
    .to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn mobius_example_has_no_transversal() {
        let out = parse(&solve_cover(&example_cover("mobius-ladder", 4)));
        assert_eq!(out["answer"], "NONE");
        assert_eq!(out["constructible"], "BUILDING mobius-ladder");
        assert_eq!(out["n"], 4);
    }

    #[test]
    fn solve_reports_parse_errors() {
        assert!(parse(&solve_cover("kappa two\n"))["error"].is_string());
    }

    #[test]
    fn cap_query_highlights_witness() {
        let out = parse(&detect_in_graph("EznW", "cap 3 6 deg4"));
        assert_eq!(out["text"], "CAP length 3 apex 3");
        assert_eq!(out["highlight"], json!([0, 1, 2, 3]));
        let out = parse(&detect_in_graph("EznW", "fig2a"));
        assert!(out["text"].as_str().unwrap().starts_with("FOUND"));
        let out = parse(&detect_in_graph("3 2\n0 1\n1 2\n", "no-4-cycles"));
        assert_eq!(out["text"], "no-4-cycles holds");
    }

    #[test]
    fn torus_discharge_is_flat() {
        let out = parse(&discharge_instance("torus-grid", 4, 0, "mlone"));
        assert_eq!(out["summary"], "SUM_INITIAL 0/1 SUM_FINAL 0/1 NEGATIVES 0");
        assert_eq!(out["positions"].as_array().unwrap().len(), 16);
        let out = parse(&discharge_instance("icosahedron", 0, 0, "mltwo"));
        assert_eq!(out["euler"], 2);
        assert_eq!(out["conserved"], true);
        assert!(parse(&discharge_instance("stacked", 2, 0, "mlone"))["error"].is_string());
    }
}
