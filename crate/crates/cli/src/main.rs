//! `sfdt`: solve covers, recognise constructible covers, detect
//! configurations, run discharging audits and verification sweeps, and
//! generate the named instance families.
//!
//! Exit codes: 0 success, 1 a negative answer (NONE, NO, violations,
//! a failed hypothesis),
//! 2 usage or input errors.

mod gen;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand};

use sfdt_core::constructible::{is_building_cover, is_constructible};
use sfdt_core::detect::{builtin_pattern, family_witness, find_cap, find_pattern, Family, Pattern};
use sfdt_core::discharge::{discharge_audit, Scheme};
use sfdt_core::harness::{
    verify_constructible_equivalence, verify_dp4, verify_oracle, verify_planar_3degenerate,
    verify_structure, MrCovers, SweepFamily, SweepReport,
};
use sfdt_core::io::{parse_cover, parse_graph_auto, parse_pattern, parse_rotation};
use sfdt_core::solver::{brute_force_sfdt, Solver};
use sfdt_core::{Cover, Graph};

#[derive(Parser)]
#[command(
    name = "sfdt",
    version,
    about = "Strictly f-degenerate transversals of graph covers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find a strictly f-degenerate transversal of a cover.
    Solve(SolveArgs),
    /// Decide whether a cover is constructible.
    Constructible(CoverArg),
    /// Search a graph for a configuration, a cap, or a hypothesis failure.
    Detect(DetectArgs),
    /// Run a discharging scheme on an embedded graph and audit it.
    Discharge(DischargeArgs),
    /// Run a verification sweep.
    Verify(VerifyArgs),
    /// Generate an instance of a named family.
    Gen(gen::GenArgs),
}

#[derive(Args)]
struct CoverArg {
    #[arg(long)]
    cover: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    cover: PathBuf,
    /// Give up after this many search nodes.
    #[arg(long)]
    budget: Option<u64>,
    /// Use exhaustive enumeration instead of the search.
    #[arg(long)]
    oracle: bool,
}

#[derive(Args)]
#[command(group(ArgGroup::new("target").required(true).args(["pattern", "pattern_file", "cap", "family"])))]
struct DetectArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Built-in pattern name (fig2a, fig2b, fig3a, fig3b, fig3c, fig5a, fig5b).
    #[arg(long)]
    pattern: Option<String>,
    /// Edge-list pattern file, optionally with `deg V D` lines.
    #[arg(long)]
    pattern_file: Option<PathBuf>,
    /// Cap with cycle length between KMIN and KMAX.
    #[arg(long, num_args = 2, value_names = ["KMIN", "KMAX"])]
    cap: Option<Vec<usize>>,
    /// Require every cap vertex to have degree 4.
    #[arg(long, requires = "cap")]
    deg4: bool,
    /// Hypothesis family (fig2-free, fig3-free, fig5-free, no-4-cycles, no-5-cycles).
    #[arg(long)]
    family: Option<String>,
}

#[derive(Args)]
struct DischargeArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    rotation: PathBuf,
    #[arg(long)]
    scheme: String,
    /// Comma-separated hypothesis families to report on.
    #[arg(long, value_delimiter = ',')]
    hypotheses: Vec<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// 3degenerate, mr, dp4, structure or oracle.
    #[arg(long)]
    suite: String,
    #[arg(long)]
    nmax: Option<usize>,
    #[arg(long)]
    kappa: Option<usize>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    samples: usize,
    /// Sweep family for dp4 and structure; all three when omitted.
    #[arg(long)]
    family: Option<String>,
    /// mr only: every full matching and capacity row instead of samples.
    #[arg(long)]
    exhaustive: bool,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

/// Text to print and whether the answer was positive.
struct Outcome {
    text: String,
    success: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{}", out.text);
            if out.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Solve(a) => solve(a),
        Command::Constructible(a) => constructible(a),
        Command::Detect(a) => detect(a),
        Command::Discharge(a) => discharge(a),
        Command::Verify(a) => verify(a),
        Command::Gen(a) => gen::run(a).map(|text| Outcome {
            text,
            success: true,
        }),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_cover(path: &Path) -> Result<Cover> {
    parse_cover(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_graph(path: &Path) -> Result<Graph> {
    parse_graph_auto(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn solve(a: SolveArgs) -> Result<Outcome> {
    let c = read_cover(&a.cover)?;
    let found = if a.oracle {
        brute_force_sfdt(
            &c,
            a.budget.unwrap_or(sfdt_core::solver::DEFAULT_ORACLE_BUDGET),
        )?
    } else {
        let solver = a.budget.map_or_else(Solver::default, Solver::with_budget);
        solver.solve(&c)?
    };
    Ok(match found {
        Some(r) => Outcome {
            text: format!("SFDT {}\n", r.display_one_based()),
            success: true,
        },
        None => Outcome {
            text: "NONE\n".into(),
            success: false,
        },
    })
}

fn constructible(a: CoverArg) -> Result<Outcome> {
    let c = read_cover(&a.cover)?;
    Ok(if let Some(kind) = is_building_cover(&c) {
        Outcome {
            text: format!("BUILDING {kind}\n"),
            success: true,
        }
    } else if is_constructible(&c) {
        Outcome {
            text: "CONSTRUCTIBLE\n".into(),
            success: true,
        }
    } else {
        Outcome {
            text: "NO\n".into(),
            success: false,
        }
    })
}

fn detect(a: DetectArgs) -> Result<Outcome> {
    let g = read_graph(&a.graph)?;
    if let Some(k) = a.cap {
        let (kmin, kmax) = (k[0], k[1]);
        if kmin < 3 || kmin > kmax {
            bail!("--cap needs 3 <= KMIN <= KMAX");
        }
        return Ok(match find_cap(&g, kmin, kmax, a.deg4) {
            Some(cap) => Outcome {
                text: format!(
                    "CAP length {} cycle {} apex {}\n",
                    cap.cycle.len(),
                    join(&cap.cycle),
                    cap.apex
                ),
                success: true,
            },
            None => Outcome {
                text: "NONE\n".into(),
                success: false,
            },
        });
    }
    if let Some(name) = a.family {
        let family: Family = name.parse()?;
        return Ok(match family_witness(&g, family) {
            None => Outcome {
                text: format!("{family} holds\n"),
                success: true,
            },
            Some((pattern, emb)) => Outcome {
                text: format!("{family} fails {pattern} at {}\n", join(&emb.0)),
                success: false,
            },
        });
    }
    let pattern: Pattern = match (a.pattern, a.pattern_file) {
        (Some(name), _) => builtin_pattern(&name)?,
        (None, Some(path)) => {
            let name = path
                .file_stem()
                .map_or("pattern".into(), |s| s.to_string_lossy().into_owned());
            parse_pattern(&name, &read(&path)?)
                .with_context(|| format!("parsing {}", path.display()))?
        }
        (None, None) => bail!("nothing to detect"),
    };
    Ok(match find_pattern(&pattern, &g) {
        Some(emb) => {
            let pairs: Vec<String> = pattern
                .labels
                .iter()
                .zip(&emb.0)
                .map(|(l, v)| format!("{l}:{v}"))
                .collect();
            Outcome {
                text: format!("FOUND {} {}\n", pattern.name, pairs.join(" ")),
                success: true,
            }
        }
        None => Outcome {
            text: "NONE\n".into(),
            success: false,
        },
    })
}

fn discharge(a: DischargeArgs) -> Result<Outcome> {
    let g = read_graph(&a.graph)?;
    let e = parse_rotation(&read(&a.rotation)?, &g)
        .with_context(|| format!("parsing {}", a.rotation.display()))?;
    let scheme: Scheme = a.scheme.parse()?;
    let hypotheses: Vec<Family> = a
        .hypotheses
        .iter()
        .map(|h| h.parse())
        .collect::<Result<_, _>>()?;
    let report = discharge_audit(&e, scheme, &hypotheses);
    Ok(Outcome {
        text: report.to_text(),
        success: report.is_clean(),
    })
}

fn verify(a: VerifyArgs) -> Result<Outcome> {
    let families: Vec<SweepFamily> = match &a.family {
        Some(f) => vec![f.parse()?],
        None => SweepFamily::ALL.to_vec(),
    };
    if a.jobs == 0 {
        bail!("--jobs must be at least 1");
    }
    let reports: Vec<SweepReport> = match a.suite.as_str() {
        "3degenerate" => vec![verify_planar_3degenerate(a.nmax.unwrap_or(7), a.jobs)?],
        "mr" => {
            let covers = if a.exhaustive {
                MrCovers::Exhaustive
            } else {
                MrCovers::Sampled(a.samples)
            };
            vec![verify_constructible_equivalence(
                a.nmax.unwrap_or(5),
                a.kappa.unwrap_or(2),
                covers,
                a.seed,
                a.jobs,
            )?]
        }
        "oracle" => vec![verify_oracle(
            a.nmax.unwrap_or(5),
            a.kappa.unwrap_or(2),
            a.samples,
            a.seed,
            a.jobs,
        )?],
        "dp4" => families
            .iter()
            .map(|&f| {
                verify_dp4(
                    f,
                    a.nmax.unwrap_or(6),
                    a.kappa.unwrap_or(4),
                    a.samples,
                    a.seed,
                    a.jobs,
                )
            })
            .collect::<Result<_, _>>()?,
        "structure" => families
            .iter()
            .map(|&f| verify_structure(f, a.nmax.unwrap_or(7), a.jobs))
            .collect::<Result<_, _>>()?,
        other => {
            bail!("unknown suite `{other}` (expected 3degenerate, mr, dp4, structure or oracle)")
        }
    };
    let text: String = reports.iter().map(SweepReport::to_text).collect();
    Ok(Outcome {
        text,
        success: reports.iter().all(SweepReport::is_clean),
    })
}

fn join(xs: &[usize]) -> String {
    xs.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}
