use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;

use sfdt_core::constructible::{
    make_ladder_cover, make_monoblock, make_tilde_complete, LadderKind,
};
use sfdt_core::embedding::EmbeddedGraph;
use sfdt_core::io::{parse_graph_auto, write_cover, write_edge_list, write_rotation};
use sfdt_core::Graph;

#[derive(Args)]
pub struct GenArgs {
    /// monoblock, tilde-complete, circular-ladder, mobius-ladder, cap or torus-grid.
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Cycle length of a cap.
    #[arg(long)]
    k: Option<usize>,
    /// Order of the complete graph for tilde-complete.
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    kappa: Option<usize>,
    /// Per-slot constants for tilde-complete, comma separated.
    #[arg(long, value_delimiter = ',')]
    f: Vec<u32>,
    /// Host graph for monoblock.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Write PREFIX.cover, PREFIX.edges and PREFIX.rot instead of printing.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Artifact {
    Cover(String),
    Graph(String),
    Rotation(String),
}

impl Artifact {
    fn extension(&self) -> &'static str {
        match self {
            Artifact::Cover(_) => "cover",
            Artifact::Graph(_) => "edges",
            Artifact::Rotation(_) => "rot",
        }
    }

    fn text(&self) -> &str {
        match self {
            Artifact::Cover(t) | Artifact::Graph(t) | Artifact::Rotation(t) => t,
        }
    }
}

fn need(x: Option<usize>, flag: &str, family: &str) -> Result<usize> {
    x.with_context(|| format!("family {family} needs --{flag}"))
}

pub fn run(a: GenArgs) -> Result<String> {
    let artifacts = match a.family.as_str() {
        "monoblock" => {
            let host = match (&a.graph, a.m, a.n) {
                (Some(path), _, _) => {
                    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                    parse_graph_auto(&text)?
                }
                (None, Some(m), Some(n)) if m >= 3 && n >= 3 => Graph::cycle(m).cartesian_product(&Graph::cycle(n)),
                (None, None, Some(n)) if n >= 3 => Graph::cycle(n),
                _ => bail!("family monoblock needs --graph FILE, --n N (cycle) or --m M --n N (torus grid), cycles of length >= 3"),
            };
            vec![Artifact::Cover(write_cover(&make_monoblock(&host, a.kappa.unwrap_or(2))?))]
        }
        "tilde-complete" | "tilde" => {
            let p = need(a.p, "p", "tilde-complete")?;
            let kappa = a.kappa.unwrap_or(a.f.len());
            vec![Artifact::Cover(write_cover(&make_tilde_complete(p, kappa, &a.f)?))]
        }
        "circular-ladder" | "circular" => {
            let n = need(a.n, "n", "circular-ladder")?;
            vec![Artifact::Cover(write_cover(&make_ladder_cover(n, LadderKind::Circular)?))]
        }
        "mobius-ladder" | "mobius" => {
            let n = need(a.n, "n", "mobius-ladder")?;
            vec![Artifact::Cover(write_cover(&make_ladder_cover(n, LadderKind::Mobius)?))]
        }
        "cap" => {
            let k = need(a.k, "k", "cap")?;
            if k < 3 {
                bail!("a cap needs a cycle of length at least 3");
            }
            let mut edges: Vec<(usize, usize)> = (0..k).map(|i| (i, (i + 1) % k)).collect();
            edges.extend([(0, k), (1, k)]);
            vec![Artifact::Graph(write_edge_list(&Graph::new(k + 1, &edges)?))]
        }
        "torus-grid" => {
            let m = need(a.m, "m", "torus-grid")?;
            let n = need(a.n, "n", "torus-grid")?;
            if m < 3 || n < 3 {
                bail!("torus-grid needs --m and --n of at least 3");
            }
            let e = EmbeddedGraph::torus_grid(m, n)?;
            vec![Artifact::Graph(write_edge_list(e.graph())), Artifact::Rotation(write_rotation(&e))]
        }
        other => bail!(
            "unknown family `{other}` (expected monoblock, tilde-complete, circular-ladder, mobius-ladder, cap or torus-grid)"
        ),
    };
    match a.out {
        Some(prefix) => {
            let mut report = String::new();
            for art in &artifacts {
                let path = prefix.with_extension(art.extension());
                fs::write(&path, art.text())
                    .with_context(|| format!("writing {}", path.display()))?;
                report.push_str(&format!("wrote {}\n", path.display()));
            }
            Ok(report)
        }
        None if artifacts.len() == 1 => Ok(artifacts[0].text().to_string()),
        None => Ok(artifacts
            .iter()
            .map(|art| format!("# {}\n{}", art.extension(), art.text()))
            .collect()),
    }
}
