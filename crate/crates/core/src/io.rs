//! Text formats: graph6, edge lists, pattern files, cover files and
//! rotation files.
//!
//! All line formats accept `#` comments and blank lines. Cover files use
//! 1-based slots; everything else is 0-based.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::cover::{Cover, CoverError};
use crate::detect::Pattern;
use crate::embedding::{EmbedError, EmbeddedGraph};
use crate::graph::{Graph, GraphError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Cover { line: usize, source: CoverError },
    #[error("graph6: {0}")]
    Graph6(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
}

fn syntax(line: usize, msg: impl Into<String>) -> IoError {
    IoError::Syntax {
        line,
        msg: msg.into(),
    }
}

/// Non-blank lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn number<T: std::str::FromStr>(line: usize, tok: &str) -> Result<T, IoError> {
    tok.parse().map_err(|_| {
        syntax(
            line,
            format!("expected a nonnegative integer, found `{tok}`"),
        )
    })
}

fn expect_arity(line: usize, toks: &[&str], k: usize) -> Result<(), IoError> {
    if toks.len() != k {
        return Err(syntax(
            line,
            format!(
                "`{}` takes {} arguments, found {}",
                toks[0],
                k - 1,
                toks.len() - 1
            ),
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------- graph6

pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        out.extend((0..3).rev().map(|k| ((n >> (6 * k)) & 63) as u8 + 63));
    } else {
        out.extend([126, 126]);
        out.extend((0..6).rev().map(|k| ((n >> (6 * k)) & 63) as u8 + 63));
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 is printable ASCII")
}

pub fn parse_graph6(s: &str) -> Result<Graph, IoError> {
    let s = s.trim();
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bytes = s.as_bytes();
    if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(IoError::Graph6("byte outside 63..=126".into()));
    }
    let (n, body) = match bytes {
        [126, 126, rest @ ..] if rest.len() >= 6 => (decode_n(&rest[..6]), &rest[6..]),
        [126, rest @ ..] if rest.len() >= 3 => (decode_n(&rest[..3]), &rest[3..]),
        [126, ..] => return Err(IoError::Graph6("truncated size".into())),
        [b, rest @ ..] => ((*b - 63) as usize, rest),
        [] => return Err(IoError::Graph6("empty string".into())),
    };
    let bits = n * n.saturating_sub(1) / 2;
    if body.len() != bits.div_ceil(6) {
        return Err(IoError::Graph6(format!(
            "expected {} data bytes for n = {n}, found {}",
            bits.div_ceil(6),
            body.len()
        )));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = body[k / 6] - 63;
            if (byte >> (5 - k % 6)) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Ok(Graph::new(n, &edges)?)
}

fn decode_n(bytes: &[u8]) -> usize {
    bytes
        .iter()
        .fold(0, |acc, &b| (acc << 6) | (b - 63) as usize)
}

// ------------------------------------------------------------- edge list

/// Edge list: header `n m`, then `m` lines `u v`.
pub fn parse_edge_list(text: &str) -> Result<Graph, IoError> {
    let (g, constraints) = parse_edges_with_constraints(text)?;
    if let Some((line, _, _)) = constraints.first() {
        return Err(syntax(
            *line,
            "`deg` lines are only allowed in pattern files",
        ));
    }
    Ok(g)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Edge list that may also carry `deg V D` lines fixing the host degree of
/// pattern vertex `V`.
pub fn parse_pattern(name: &str, text: &str) -> Result<Pattern, IoError> {
    let (g, constraints) = parse_edges_with_constraints(text)?;
    let mut p = Pattern::new(name, g).map_err(|e| syntax(0, e.to_string()))?;
    for (line, v, d) in constraints {
        if v >= p.graph.n() {
            return Err(syntax(line, format!("vertex {v} out of range")));
        }
        p = p.with_host_degree(v, d);
    }
    Ok(p)
}

pub fn write_pattern(p: &Pattern) -> String {
    let mut out = write_edge_list(&p.graph);
    for (v, d) in p.host_degree.iter().enumerate() {
        if let Some(d) = d {
            let _ = writeln!(out, "deg {v} {d}");
        }
    }
    out
}

type Constraint = (usize, usize, usize);

fn parse_edges_with_constraints(text: &str) -> Result<(Graph, Vec<Constraint>), IoError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| syntax(0, "missing `n m` header"))?;
    if header.len() != 2 {
        return Err(syntax(hline, "header must be `n m`"));
    }
    let n: usize = number(hline, header[0])?;
    let m: usize = number(hline, header[1])?;
    let mut edges = Vec::new();
    let mut seen = BTreeSet::new();
    let mut constraints = Vec::new();
    for (line, toks) in lines {
        if toks[0] == "deg" {
            expect_arity(line, &toks, 3)?;
            constraints.push((line, number(line, toks[1])?, number(line, toks[2])?));
            continue;
        }
        if toks.len() != 2 {
            return Err(syntax(line, "edge line must be `u v`"));
        }
        let (u, v): (usize, usize) = (number(line, toks[0])?, number(line, toks[1])?);
        if u >= n || v >= n {
            return Err(syntax(line, format!("vertex out of range for n = {n}")));
        }
        if u == v {
            return Err(syntax(line, "self-loop"));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(syntax(line, "duplicate edge"));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(syntax(
            hline,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    Ok((Graph::new(n, &edges)?, constraints))
}

/// Edge list if the first content line is two integers, graph6 otherwise.
pub fn parse_graph_auto(text: &str) -> Result<Graph, IoError> {
    let first = content_lines(text).next();
    match first {
        Some((_, toks)) if toks.len() == 2 && toks.iter().all(|t| t.parse::<usize>().is_ok()) => {
            parse_edge_list(text)
        }
        Some((_, toks)) if toks.len() == 1 => parse_graph6(toks[0]),
        _ => Err(syntax(1, "neither an edge list nor graph6")),
    }
}

// ----------------------------------------------------------------- cover

/// Parses the cover grammar:
///
/// ```text
/// kappa K
/// vertices N
/// edge U V
/// match U V QU QV
/// f V Q VALUE
/// ```
///
/// `kappa` and `vertices` come first, once each. Capacities not listed are 0.
pub fn parse_cover(text: &str) -> Result<Cover, IoError> {
    let mut kappa: Option<usize> = None;
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    let mut seen = BTreeSet::new();
    let mut matches = Vec::new();
    let mut fvals = Vec::new();
    for (line, toks) in content_lines(text) {
        let header_done = kappa.is_some() && n.is_some();
        match toks[0] {
            "kappa" | "vertices" => {
                expect_arity(line, &toks, 2)?;
                let x: usize = number(line, toks[1])?;
                let slot = if toks[0] == "kappa" {
                    &mut kappa
                } else {
                    &mut n
                };
                if slot.replace(x).is_some() {
                    return Err(syntax(line, format!("`{}` given twice", toks[0])));
                }
                if toks[0] == "kappa" && x == 0 {
                    return Err(IoError::Cover {
                        line,
                        source: CoverError::ZeroKappa,
                    });
                }
            }
            _ if !header_done => {
                return Err(syntax(line, "`kappa` and `vertices` must come first"))
            }
            "edge" => {
                expect_arity(line, &toks, 3)?;
                let (u, v): (usize, usize) = (number(line, toks[1])?, number(line, toks[2])?);
                let nv = n.expect("header");
                if u >= nv || v >= nv {
                    return Err(syntax(
                        line,
                        format!("vertex out of range for {nv} vertices"),
                    ));
                }
                if u == v {
                    return Err(syntax(line, "self-loop"));
                }
                if !seen.insert((u.min(v), u.max(v))) {
                    return Err(syntax(line, "duplicate edge"));
                }
                edges.push((u, v));
            }
            "match" => {
                expect_arity(line, &toks, 5)?;
                let nums: Vec<usize> = toks[1..]
                    .iter()
                    .map(|t| number(line, t))
                    .collect::<Result<_, _>>()?;
                matches.push((line, nums[0], nums[1], nums[2], nums[3]));
            }
            "f" => {
                expect_arity(line, &toks, 4)?;
                let (v, q): (usize, usize) = (number(line, toks[1])?, number(line, toks[2])?);
                let value: u32 = number(line, toks[3])?;
                fvals.push((line, v, q, value));
            }
            other => return Err(syntax(line, format!("unknown keyword `{other}`"))),
        }
    }
    let (Some(kappa), Some(n)) = (kappa, n) else {
        return Err(syntax(0, "missing `kappa` or `vertices`"));
    };
    let host = Graph::new(n, &edges)?;
    let mut cover = Cover::new(host, kappa).map_err(|source| IoError::Cover { line: 0, source })?;
    let slot = |line: usize, q: usize| {
        if q == 0 || q > kappa {
            Err(IoError::Cover {
                line,
                source: CoverError::SlotOutOfRange { q, kappa },
            })
        } else {
            Ok(q - 1)
        }
    };
    for (line, u, v, qu, qv) in matches {
        if u >= n || v >= n || !cover.host().has_edge(u, v) {
            return Err(syntax(line, format!("match on undeclared edge ({u}, {v})")));
        }
        let (qu, qv) = (slot(line, qu)?, slot(line, qv)?);
        if cover.mate(u, qu, v).is_some() || cover.mate(v, qv, u).is_some() {
            return Err(IoError::Cover {
                line,
                source: CoverError::NotInjective { u, v, q: qu },
            });
        }
        cover
            .add_match(u, v, qu, qv)
            .map_err(|source| IoError::Cover { line, source })?;
    }
    let mut fseen = BTreeSet::new();
    for (line, v, q, value) in fvals {
        if v >= n {
            return Err(IoError::Cover {
                line,
                source: CoverError::VertexOutOfRange(v),
            });
        }
        let q = slot(line, q)?;
        if !fseen.insert((v, q)) {
            return Err(syntax(line, format!("f({v}, {}) given twice", q + 1)));
        }
        cover
            .set_f(v, q, value)
            .map_err(|source| IoError::Cover { line, source })?;
    }
    Ok(cover)
}

/// Canonical text for a cover: edges and matches sorted, zero capacities
/// omitted.
pub fn write_cover(c: &Cover) -> String {
    let mut out = format!("kappa {}\nvertices {}\n", c.kappa(), c.n());
    for (u, v) in c.host().edges() {
        let _ = writeln!(out, "edge {u} {v}");
    }
    for (u, v, qu, qv) in c.matched_pairs() {
        let _ = writeln!(out, "match {u} {v} {} {}", qu + 1, qv + 1);
    }
    for v in 0..c.n() {
        for q in 0..c.kappa() {
            if c.f(v, q) != 0 {
                let _ = writeln!(out, "f {v} {} {}", q + 1, c.f(v, q));
            }
        }
    }
    out
}

// -------------------------------------------------------------- rotation

/// Parses `vertices N` followed by one `rot V W1 ... Wd` line per vertex
/// (isolated vertices may omit theirs).
pub fn parse_rotation(text: &str, g: &Graph) -> Result<EmbeddedGraph, IoError> {
    let mut n: Option<usize> = None;
    let mut rotation: Vec<Option<Vec<usize>>> = Vec::new();
    for (line, toks) in content_lines(text) {
        match toks[0] {
            "vertices" => {
                expect_arity(line, &toks, 2)?;
                if n.is_some() {
                    return Err(syntax(line, "`vertices` given twice"));
                }
                let x: usize = number(line, toks[1])?;
                if x != g.n() {
                    return Err(syntax(
                        line,
                        format!("rotation has {x} vertices, graph has {}", g.n()),
                    ));
                }
                n = Some(x);
                rotation = vec![None; x];
            }
            "rot" => {
                let Some(nv) = n else {
                    return Err(syntax(line, "`vertices` must come first"));
                };
                if toks.len() < 2 {
                    return Err(syntax(line, "`rot` needs a vertex"));
                }
                let v: usize = number(line, toks[1])?;
                if v >= nv {
                    return Err(syntax(line, format!("vertex {v} out of range")));
                }
                let ws: Vec<usize> = toks[2..]
                    .iter()
                    .map(|t| number(line, t))
                    .collect::<Result<_, _>>()?;
                let mut sorted = ws.clone();
                sorted.sort_unstable();
                if sorted != g.neighbors(v) {
                    return Err(syntax(
                        line,
                        format!("rotation at {v} is not a permutation of its neighbours"),
                    ));
                }
                if rotation[v].replace(ws).is_some() {
                    return Err(syntax(line, format!("rotation at {v} given twice")));
                }
            }
            other => return Err(syntax(line, format!("unknown keyword `{other}`"))),
        }
    }
    if n.is_none() {
        return Err(syntax(0, "missing `vertices`"));
    }
    let mut full = Vec::with_capacity(g.n());
    for (v, r) in rotation.into_iter().enumerate() {
        match r {
            Some(r) => full.push(r),
            None if g.degree(v) == 0 => full.push(Vec::new()),
            None => return Err(syntax(0, format!("no rotation for vertex {v}"))),
        }
    }
    Ok(EmbeddedGraph::new(g.clone(), full)?)
}

pub fn write_rotation(e: &EmbeddedGraph) -> String {
    let mut out = format!("vertices {}\n", e.graph().n());
    for (v, rot) in e.rotation().iter().enumerate() {
        let _ = write!(out, "rot {v}");
        for w in rot {
            let _ = write!(out, " {w}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructible::{make_ladder_cover, LadderKind};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
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

    #[test]
    fn graph6_known_strings() {
        assert_eq!(to_graph6(&Graph::empty(0)), "?");
        assert_eq!(to_graph6(&Graph::empty(1)), "@");
        assert_eq!(to_graph6(&Graph::complete(4)), "C~");
        assert_eq!(to_graph6(&Graph::path(2)), "A_");
        assert_eq!(parse_graph6(">>graph6<<C~").unwrap(), Graph::complete(4));
        assert!(parse_graph6("C~~").is_err());
        assert!(parse_graph6("").is_err());
    }

    #[test]
    fn graph6_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let n = rng.gen_range(0..20);
            let g = random_graph(&mut rng, n, 0.4);
            assert_eq!(parse_graph6(&to_graph6(&g)).unwrap(), g);
        }
        for n in [62, 63, 100] {
            let g = Graph::cycle(n);
            let s = to_graph6(&g);
            assert_eq!(s.as_bytes()[0] == 126, n >= 63);
            assert_eq!(parse_graph6(&s).unwrap(), g);
        }
    }

    #[test]
    fn edge_list_round_trip_and_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let n = rng.gen_range(1..12);
            let g = random_graph(&mut rng, n, 0.5);
            let text = write_edge_list(&g);
            assert_eq!(parse_edge_list(&text).unwrap(), g);
            assert_eq!(parse_graph_auto(&text).unwrap(), g);
            assert_eq!(parse_graph_auto(&to_graph6(&g)).unwrap(), g);
        }
        let err = parse_edge_list("# c\n3 2\n0 1\n0 1\n").unwrap_err();
        assert_eq!(err, syntax(4, "duplicate edge"));
        assert!(matches!(
            parse_edge_list("3 2\n0 1\n"),
            Err(IoError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("2 1\n0 x\n"),
            Err(IoError::Syntax { line: 2, .. })
        ));
    }

    #[test]
    fn pattern_files() {
        let p = parse_pattern("cap", "6 7\n0 1\n1 2\n2 3\n3 4\n4 0\n5 1\n5 2\ndeg 5 4\n").unwrap();
        assert_eq!(p.host_degree[5], Some(4));
        assert_eq!(parse_pattern("cap", &write_pattern(&p)).unwrap(), p);
        assert!(parse_edge_list("2 1\n0 1\ndeg 0 4\n").is_err());
    }

    #[test]
    fn cover_examples() {
        let c = parse_cover("kappa 1\nvertices 1\n").unwrap();
        assert_eq!(c.n(), 1);
        assert_eq!(c.f(0, 0), 0);
        let err = parse_cover("kappa 2\nvertices 3\nedge 0 1\nmatch 1 2 1 1\n").unwrap_err();
        assert!(matches!(err, IoError::Syntax { line: 4, .. }));
        let err = parse_cover("kappa 2\nvertices 2\nedge 0 1\nmatch 0 1 3 1\n").unwrap_err();
        assert!(matches!(
            err,
            IoError::Cover {
                line: 4,
                source: CoverError::SlotOutOfRange { .. }
            }
        ));
        let err = parse_cover("kappa 2\nvertices 2\nedge 0 1\nmatch 0 1 1 1\nmatch 0 1 2 1\n")
            .unwrap_err();
        assert!(matches!(err, IoError::Cover { line: 5, .. }));
        let err = parse_cover("vertices 2\nedge 0 1\nkappa 2\n").unwrap_err();
        assert!(matches!(err, IoError::Syntax { line: 2, .. }));
        let err = parse_cover("kappa 2\nvertices 2\nbogus\n").unwrap_err();
        assert!(matches!(err, IoError::Syntax { line: 3, .. }));

        let mobius = make_ladder_cover(4, LadderKind::Mobius).unwrap();
        let text = write_cover(&mobius);
        assert_eq!(parse_cover(&text).unwrap(), mobius);
    }

    #[test]
    fn cover_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let n = rng.gen_range(1..8);
            let kappa = rng.gen_range(1..4);
            let g = random_graph(&mut rng, n, 0.5);
            let mut c = Cover::new(g.clone(), kappa).unwrap();
            for (u, v) in g.edges() {
                let mut slots: Vec<usize> = (0..kappa).collect();
                for q in 0..kappa {
                    let j = rng.gen_range(q..kappa);
                    slots.swap(q, j);
                    if rng.gen_bool(0.7) {
                        c.add_match(u, v, q, slots[q]).unwrap();
                    }
                }
            }
            for v in 0..n {
                for q in 0..kappa {
                    c.set_f(v, q, rng.gen_range(0..4)).unwrap();
                }
            }
            assert_eq!(parse_cover(&write_cover(&c)).unwrap(), c);
        }
    }

    #[test]
    fn rotation_files() {
        let k4 = EmbeddedGraph::tetrahedron();
        let back = parse_rotation(&write_rotation(&k4), k4.graph()).unwrap();
        assert_eq!(back, k4);
        let bad = "vertices 4\nrot 0 1 2 2\nrot 1 0 2 3\nrot 2 0 1 3\nrot 3 0 1 2\n";
        assert!(matches!(
            parse_rotation(bad, k4.graph()),
            Err(IoError::Syntax { line: 2, .. })
        ));

        let torus = EmbeddedGraph::torus_grid(3, 3).unwrap();
        let back = parse_rotation(&write_rotation(&torus), torus.graph()).unwrap();
        assert_eq!(back.faces().len(), 9);

        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..100 {
            let n = rng.gen_range(3..12);
            let e = EmbeddedGraph::random_plane_graph(n, n, &mut rng);
            assert_eq!(parse_rotation(&write_rotation(&e), e.graph()).unwrap(), e);
        }
    }
}
