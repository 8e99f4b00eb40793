//! Command-line interface for the brane-tiler library.

use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use brane_tiler::consistency::{consistency_class, find_r_charge, ConsistencyClass};
use brane_tiler::error::{Error, ErrorClass, Result};
use brane_tiler::fan::{build_triangulation, ToricTriangulation};
use brane_tiler::lattice::build_lattices;
use brane_tiler::matchings::{count_matchings_oracle, diagram_of_center, enumerate_matchings, is_extremal};
use brane_tiler::mckay::{build_mckay_tiling, hilb_theta, AbelianAction};
use brane_tiler::quiver::{dualize, DualQuiver};
use brane_tiler::stability::is_theta_stable;
use brane_tiler::svg::render_svg;
use brane_tiler::tiling::{parse_tiling, BraneTiling};

/// Brane tilings on the torus: quivers, matchings, consistency, stability,
/// and the toric diagram of the crepant resolution.
#[derive(Parser)]
#[command(name = "brane-tiler", version, max_term_width = 100)]
struct Cli {
    /// Emit a machine-readable JSON run report on stdout instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Random seed recorded in the run report (reserved; all current
    /// computations are deterministic and ignore it).
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and fully validate a tiling document.
    Validate(TilingArgs),
    /// Weight-lattice ranks and the distinguished degree ω̄.
    Lattice(TilingArgs),
    /// Enumerate perfect matchings and the toric diagram of the center.
    Matchings(TilingArgs),
    /// Exact R-charge certificates: geometric / consistent / inconsistent.
    Consistency(TilingArgs),
    /// θ-stability of each perfect matching.
    Stable(TilingThetaArgs),
    /// The θ-triangulation of the toric diagram.
    Fan(FanArgs),
    /// Build the tiling of an abelian orbifold ℂ³/G.
    Mckay(MckayArgs),
    /// The orbifold's triangulated toric diagram in one step.
    MckayFan(MckayFanArgs),
}

#[derive(Args)]
struct TilingArgs {
    /// Path to the tiling JSON document ("-" for stdin).
    input: String,
}

#[derive(Args)]
struct TilingThetaArgs {
    /// Path to the tiling JSON document ("-" for stdin).
    input: String,
    /// Stability parameter, comma-separated integers summing to zero, one
    /// per quiver vertex in face order (defaults to "0" for one vertex).
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
}

#[derive(Args)]
struct FanArgs {
    #[command(flatten)]
    base: TilingThetaArgs,
    /// Also render the triangulation to this SVG file.
    #[arg(long)]
    svg: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct GroupArgs {
    /// Cyclic group order n for G = ℤ_n.
    #[arg(long, conflicts_with = "factors")]
    cyclic: Option<u64>,
    /// Cyclic factor orders for G = ℤ_{n1} × ⋯ × ℤ_{nk}, comma-separated.
    #[arg(long)]
    factors: Option<String>,
    /// The three weights, comma-separated; with --factors each weight is
    /// dot-joined per factor (e.g. "1.0,0.1,1.1").
    #[arg(long)]
    weights: String,
}

#[derive(Args)]
struct MckayArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Print the generated tiling document itself (pipe into other
    /// subcommands) instead of the usual report.
    #[arg(long)]
    emit_tiling: bool,
}

#[derive(Args)]
struct MckayFanArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Stability parameter (defaults to the Hilbert-scheme chamber
    /// −(N−1),1,…,1).
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    /// Also render the triangulation to this SVG file.
    #[arg(long)]
    svg: Option<std::path::PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.class() {
                ErrorClass::Validation => 3,
                ErrorClass::Infeasible => 4,
                ErrorClass::Invariant => 5,
                ErrorClass::Other => 1,
            })
        }
    }
}

/// Everything a tiling-file subcommand needs, parsed once.
struct Loaded {
    tiling: BraneTiling,
    quiver: DualQuiver,
    sha256: String,
}

fn load(input: &str) -> Result<Loaded> {
    let bytes = if input == "-" {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf)?;
        buf
    } else {
        std::fs::read(input)?
    };
    let sha256 = hex(&Sha256::digest(&bytes));
    let src = String::from_utf8(bytes)
        .map_err(|e| Error::Schema(format!("input is not UTF-8: {e}")))?;
    let tiling = parse_tiling(&src)?;
    let quiver = dualize(&tiling);
    Ok(Loaded { tiling, quiver, sha256 })
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn parse_theta_arg(spec: Option<&str>, q: &DualQuiver) -> Result<Vec<i64>> {
    match spec {
        Some(s) => s
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::Theta(format!("cannot parse theta entry '{x}': {e}")))
            })
            .collect(),
        None if q.n_vertices() == 1 => Ok(vec![0]),
        None => Err(Error::Theta(format!(
            "--theta is required: the quiver has {} vertices",
            q.n_vertices()
        ))),
    }
}

fn parse_group(g: &GroupArgs) -> Result<AbelianAction> {
    let parse_list = |s: &str, what: &str| -> Result<Vec<u64>> {
        s.split(',')
            .map(|x| {
                x.trim()
                    .parse::<u64>()
                    .map_err(|e| Error::Group(format!("cannot parse {what} entry '{x}': {e}")))
            })
            .collect()
    };
    match (&g.cyclic, &g.factors) {
        (Some(n), None) => {
            let w = parse_list(&g.weights, "weight")?;
            if w.len() != 3 {
                return Err(Error::Group(format!("expected 3 weights, got {}", w.len())));
            }
            AbelianAction::cyclic(*n, [w[0], w[1], w[2]])
        }
        (None, Some(fs)) => {
            let factors = parse_list(fs, "factor")?;
            let parts: Vec<&str> = g.weights.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::Group(format!("expected 3 weights, got {}", parts.len())));
            }
            let mut weights: Vec<Vec<u64>> = Vec::with_capacity(3);
            for p in parts {
                let w: Result<Vec<u64>> = p
                    .split('.')
                    .map(|x| {
                        x.trim().parse::<u64>().map_err(|e| {
                            Error::Group(format!("cannot parse weight component '{x}': {e}"))
                        })
                    })
                    .collect();
                weights.push(w?);
            }
            AbelianAction::new(factors, [weights[0].clone(), weights[1].clone(), weights[2].clone()])
        }
        _ => Err(Error::Group("exactly one of --cyclic or --factors is required".into())),
    }
}

/// Assemble and print the run report (JSON mode) or return the payload for
/// text rendering.
struct Report<'a> {
    cli: &'a Cli,
    command: &'static str,
    input_sha256: String,
    started: Instant,
}

impl<'a> Report<'a> {
    fn new(cli: &'a Cli, command: &'static str, input_sha256: String, started: Instant) -> Self {
        Report { cli, command, input_sha256, started }
    }

    /// In JSON mode, print the full run report around `result`.
    fn emit(&self, result: Value) -> Result<()> {
        if !self.cli.json {
            return Ok(());
        }
        let threads = std::env::var("BRANE_TILER_THREADS")
            .ok()
            .and_then(|v| v.parse::<u64>().ok());
        let report = json!({
            "tool": "brane-tiler",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "input_sha256": self.input_sha256,
            "seed": self.cli.seed,
            "threads": threads,
            "result": result,
            "timings_ms": { "total": self.started.elapsed().as_millis() as u64 },
        });
        out(format_args!("{}", serde_json::to_string_pretty(&report)?));
        Ok(())
    }
}


/// Print a line to stdout, exiting quietly if the reader hung up (e.g. the
/// output is piped into `head`).
fn out(line: std::fmt::Arguments<'_>) {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    if writeln!(stdout, "{line}").is_err() {
        std::process::exit(0);
    }
}

fn text(cli: &Cli, line: String) {
    if !cli.json {
        out(format_args!("{line}"));
    }
}

fn run(cli: &Cli) -> Result<()> {
    let started = Instant::now();
    match &cli.command {
        Command::Validate(a) => {
            let l = load(&a.input)?;
            let report = Report::new(cli, "validate", l.sha256.clone(), started);
            text(cli, format!("{}: valid brane tiling", l.tiling.name));
            text(
                cli,
                format!(
                    "  {} white + {} black vertices, {} edges, {} faces",
                    l.tiling.white.len(),
                    l.tiling.black.len(),
                    l.tiling.edges.len(),
                    l.tiling.faces.len()
                ),
            );
            text(
                cli,
                format!(
                    "  dual quiver: {} vertices, {} arrows, {} potential terms",
                    l.quiver.n_vertices(),
                    l.quiver.n_arrows(),
                    l.quiver.n_faces()
                ),
            );
            report.emit(json!({
                "name": l.tiling.name,
                "valid": true,
                "white": l.tiling.white.len(),
                "black": l.tiling.black.len(),
                "edges": l.tiling.edges.len(),
                "faces": l.tiling.faces.len(),
                "quiver": {
                    "vertices": l.quiver.n_vertices(),
                    "arrows": l.quiver.n_arrows(),
                    "potential_terms": l.quiver.n_faces(),
                },
            }))
        }
        Command::Lattice(a) => {
            let l = load(&a.input)?;
            let report = Report::new(cli, "lattice", l.sha256.clone(), started);
            let lat = build_lattices(&l.quiver)?;
            let omega: Vec<String> =
                lat.omega_bar().iter().map(|x| x.to_string()).collect();
            text(
                cli,
                format!(
                    "{}: rank Λ = {}, rank M = {}, rank B = {}",
                    l.tiling.name,
                    lat.rank_lambda(),
                    lat.rank_m(),
                    lat.rank_b()
                ),
            );
            text(cli, format!("  ω̄ = ({})", omega.join(", ")));
            report.emit(json!({
                "name": l.tiling.name,
                "rank_lambda": lat.rank_lambda(),
                "rank_m": lat.rank_m(),
                "rank_b": lat.rank_b(),
                "omega_bar": omega,
            }))
        }
        Command::Matchings(a) => {
            let l = load(&a.input)?;
            let report = Report::new(cli, "matchings", l.sha256.clone(), started);
            let lat = build_lattices(&l.quiver)?;
            let ms = enumerate_matchings(&l.tiling);
            let permanent = count_matchings_oracle(&l.tiling).ok().map(|x| x.to_string());
            let diagram = diagram_of_center(&l.quiver, &lat, &ms)?;
            text(cli, format!("{}: {} perfect matchings", l.tiling.name, ms.len()));
            let mut entries = Vec::with_capacity(ms.len());
            for m in &ms {
                let point = lat.diagram_point(&m.edges)?;
                let extremal = is_extremal(&l.quiver, &m.edges);
                text(
                    cli,
                    format!(
                        "  {{{}}} at ({}, {}){}",
                        m.id,
                        point.0,
                        point.1,
                        if extremal { "  extremal" } else { "" }
                    ),
                );
                entries.push(json!({
                    "edges": m.edges.iter().map(|&e| l.tiling.edges[e].id.clone()).collect::<Vec<_>>(),
                    "point": [i64::try_from(&point.0).ok(), i64::try_from(&point.1).ok()],
                    "extremal": extremal,
                }));
            }
            text(
                cli,
                format!(
                    "  diagram: {} lattice points, {} hull vertices",
                    diagram.points.len(),
                    diagram.hull.len()
                ),
            );
            report.emit(json!({
                "name": l.tiling.name,
                "count": ms.len(),
                "permanent": permanent,
                "matchings": entries,
                "diagram_points": diagram.points.len(),
                "hull_size": diagram.hull.len(),
            }))
        }
        Command::Consistency(a) => {
            let l = load(&a.input)?;
            let report = Report::new(cli, "consistency", l.sha256.clone(), started);
            let class = consistency_class(&l.tiling)?;
            let label = match class {
                ConsistencyClass::Geometric => "geometrically consistent",
                ConsistencyClass::ConsistentOnly => "consistent (not geometrically)",
                ConsistencyClass::Inconsistent => "inconsistent",
            };
            text(cli, format!("{}: {label}", l.tiling.name));
            let solution = if class == ConsistencyClass::Inconsistent {
                None
            } else {
                let sol = find_r_charge(&l.tiling)?;
                text(cli, format!("  margin ε* = {}", sol.epsilon));
                for (e, r) in l.tiling.edges.iter().zip(&sol.r) {
                    text(cli, format!("  R({}) = {}", e.id, r));
                }
                Some(sol)
            };
            report.emit(json!({
                "name": l.tiling.name,
                "class": match class {
                    ConsistencyClass::Geometric => "geometric",
                    ConsistencyClass::ConsistentOnly => "consistent",
                    ConsistencyClass::Inconsistent => "inconsistent",
                },
                "epsilon": solution.as_ref().map(|s| s.epsilon.to_string()),
                "r": solution.as_ref().map(|s| {
                    l.tiling
                        .edges
                        .iter()
                        .zip(&s.r)
                        .map(|(e, r)| json!({ "edge": e.id, "r": r.to_string() }))
                        .collect::<Vec<_>>()
                }),
            }))
        }
        Command::Stable(a) => {
            let l = load(&a.input)?;
            let report = Report::new(cli, "stable", l.sha256.clone(), started);
            let theta = parse_theta_arg(a.theta.as_deref(), &l.quiver)?;
            let ms = enumerate_matchings(&l.tiling);
            let mut entries = Vec::with_capacity(ms.len());
            let mut stable_count = 0usize;
            for m in &ms {
                let stable = is_theta_stable(&l.quiver, &m.edges, &theta)?;
                stable_count += usize::from(stable);
                text(
                    cli,
                    format!("  {{{}}} {}", m.id, if stable { "stable" } else { "unstable" }),
                );
                entries.push(json!({
                    "edges": m.edges.iter().map(|&e| l.tiling.edges[e].id.clone()).collect::<Vec<_>>(),
                    "stable": stable,
                }));
            }
            text(
                cli,
                format!(
                    "{}: {stable_count} of {} matchings θ-stable at θ = {theta:?}",
                    l.tiling.name,
                    ms.len()
                ),
            );
            report.emit(json!({
                "name": l.tiling.name,
                "theta": theta,
                "stable_count": stable_count,
                "matchings": entries,
            }))
        }
        Command::Fan(a) => {
            let l = load(&a.base.input)?;
            let report = Report::new(cli, "fan", l.sha256.clone(), started);
            let theta = parse_theta_arg(a.base.theta.as_deref(), &l.quiver)?;
            let lat = build_lattices(&l.quiver)?;
            let ms = enumerate_matchings(&l.tiling);
            let fan = build_triangulation(&l.tiling, &l.quiver, &lat, &ms, &theta)?;
            print_fan_text(cli, &l.tiling.name, &fan);
            if let Some(path) = &a.svg {
                std::fs::write(path, render_svg(&fan)?)?;
                text(cli, format!("  wrote {}", path.display()));
            }
            report.emit(json!({
                "name": l.tiling.name,
                "fan": fan.to_json(&l.tiling),
            }))
        }
        Command::Mckay(a) => {
            let group = parse_group(&a.group)?;
            let key = group.name();
            let report = Report::new(cli, "mckay", hex(&Sha256::digest(key.as_bytes())), started);
            let mk = build_mckay_tiling(group)?;
            if a.emit_tiling {
                // Raw document on stdout, byte-identical to the library's
                // serialization, regardless of --json.
                out(format_args!("{}", mk.tiling.to_json()));
                return Ok(());
            }
            text(
                cli,
                format!(
                    "{}: order {} group, {} arrows, {} hexagonal faces",
                    mk.tiling.name,
                    mk.action.order(),
                    mk.quiver.n_arrows(),
                    mk.action.order()
                ),
            );
            let m0: Vec<Vec<String>> = mk
                .m0
                .iter()
                .map(|v| v.iter().map(|x| x.to_string()).collect())
                .collect();
            text(cli, format!("  invariant monomial basis rows: {m0:?}"));
            report.emit(json!({
                "name": mk.tiling.name,
                "order": mk.action.order(),
                "factors": mk.action.factors,
                "weights": mk.action.weights,
                "arrows": mk
                    .quiver
                    .arrows
                    .iter()
                    .zip(&mk.types)
                    .map(|(arrow, t)| json!({
                        "id": arrow.id,
                        "source": mk.quiver.vertices[arrow.source],
                        "target": mk.quiver.vertices[arrow.target],
                        "type": t,
                    }))
                    .collect::<Vec<_>>(),
                "monomial_basis": m0,
            }))
        }
        Command::MckayFan(a) => {
            let group = parse_group(&a.group)?;
            let key = group.name();
            let report = Report::new(cli, "mckay-fan", hex(&Sha256::digest(key.as_bytes())), started);
            let mk = build_mckay_tiling(group)?;
            let theta = match &a.theta {
                Some(s) => parse_theta_arg(Some(s), &mk.quiver)?,
                None => hilb_theta(mk.quiver.n_vertices()),
            };
            let ms = enumerate_matchings(&mk.tiling);
            let fan = build_triangulation(&mk.tiling, &mk.quiver, &mk.lattice, &ms, &theta)?;
            print_fan_text(cli, &mk.tiling.name, &fan);
            if let Some(path) = &a.svg {
                std::fs::write(path, render_svg(&fan)?)?;
                text(cli, format!("  wrote {}", path.display()));
            }
            let typed: Vec<[usize; 3]> =
                fan.rays.iter().map(|r| mk.typed_character(&r.matching.edges)).collect();
            report.emit(json!({
                "name": mk.tiling.name,
                "matchings": ms.len(),
                "fan": fan.to_json(&mk.tiling),
                "ray_typed_characters": typed,
            }))
        }
    }
}

fn print_fan_text(cli: &Cli, name: &str, fan: &ToricTriangulation) {
    text(
        cli,
        format!(
            "{name}: {} rays, {} edges, {} triangles at θ = {:?}",
            fan.rays.len(),
            fan.edges.len(),
            fan.triangles.len(),
            fan.theta
        ),
    );
    for (i, r) in fan.rays.iter().enumerate() {
        text(cli, format!("  ray {i}: ({}, {}) = {{{}}}", r.point.0, r.point.1, r.matching.id));
    }
    for tri in &fan.triangles {
        text(cli, format!("  triangle {:?}", tri));
    }
}
