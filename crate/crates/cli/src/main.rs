use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use serde::Serialize;

use cubulate::complex::{self, ComplexError, CubeComplex, COMPLEX_FORMAT_VERSION};
use cubulate::criteria::{
    self, AxisOptions, CriteriaError, SelectOptions, SelectionResult, SeparationProfile, Stability,
};
use cubulate::dual::{self, DualBudget, DualComplex, DualError, DUAL_FORMAT_VERSION};
use cubulate::fixtures;
use cubulate::group::{
    parse_group_file, BallFile, Builtin, CayleyBall, GroupError, GroupPresentation,
    BALL_FORMAT_VERSION, DEFAULT_REWRITE_BUDGET, DEFAULT_VERTEX_BUDGET,
};
use cubulate::wallspace::{WallError, WallsSpec, Wallspace, WALLSPACE_FORMAT_VERSION};

#[derive(Parser)]
#[command(name = "cubulate", about = "Wallspaces, dual cube complexes and cubulation diagnostics")]
struct Cli {
    /// Worker threads for parallel checks (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for the `random` fixture.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    budgets: Budgets,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Budgets {
    #[arg(long, global = true, env = "CUBULATE_BUDGET_REWRITE_STEPS",
          default_value_t = DEFAULT_REWRITE_BUDGET, value_parser = positive)]
    rewrite_budget: usize,
    #[arg(long, global = true, env = "CUBULATE_BUDGET_VERTICES",
          default_value_t = DEFAULT_VERTEX_BUDGET, value_parser = positive)]
    vertex_budget: usize,
    #[arg(long, global = true, env = "CUBULATE_BUDGET_WALLS",
          default_value_t = dual::DEFAULT_WALL_BUDGET, value_parser = positive)]
    wall_budget: usize,
    #[arg(long, global = true, env = "CUBULATE_BUDGET_ZERO_CUBES",
          default_value_t = dual::DEFAULT_ZERO_CUBE_BUDGET, value_parser = positive)]
    zero_cube_budget: usize,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("budgets must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Args)]
struct GroupSource {
    /// Group description file.
    #[arg(long, conflicts_with = "builtin")]
    group: Option<PathBuf>,
    /// Builtin group, e.g. `free_abelian(2)`, `free_group(2)`,
    /// `surface_genus2`, `raag(4;0-1,1-2)`.
    #[arg(long)]
    builtin: Option<String>,
}

/// Where a wallspace comes from.
#[derive(Args)]
struct WallsSource {
    /// Wallspace artifact written by `cubulate walls`.
    #[arg(long, conflicts_with_all = ["fixture", "ball"])]
    walls: Option<PathBuf>,
    /// Named wallspace fixture (see `cubulate fixtures`); `random` uses `--seed`.
    #[arg(long, conflicts_with = "ball")]
    fixture: Option<String>,
    /// Ball artifact, used with `--candidates`.
    #[arg(long, requires = "candidates")]
    ball: Option<PathBuf>,
    /// Walls spec (TOML) applied to `--ball`.
    #[arg(long, alias = "spec", requires = "ball")]
    candidates: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate a ball in the Cayley graph.
    Ball {
        #[command(flatten)]
        group: GroupSource,
        #[arg(long)]
        radius: u32,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Build a wallspace from a ball and a walls spec, or from a fixture.
    Walls {
        #[command(flatten)]
        source: WallsSource,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build the dual cube complex and check the median property.
    Dual {
        #[command(flatten)]
        source: WallsSource,
        #[arg(long)]
        out: Option<PathBuf>,
        /// 1-skeleton with edges coloured by wall.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Also write the dual as a cube complex file.
        #[arg(long)]
        complex: Option<PathBuf>,
        #[arg(long, default_value_t = dual::DEFAULT_MAX_DIM)]
        max_dim: usize,
    },
    /// Check the link condition at every vertex.
    CheckNpc {
        #[command(flatten)]
        source: ComplexSource,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check hyperplanes for the special pathologies.
    CheckSpecial {
        #[command(flatten)]
        source: ComplexSource,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Minimal separation profile `#(1, g)` over spheres `1..=L`.
    Criteria {
        #[command(flatten)]
        source: WallsSource,
        #[arg(long = "L", alias = "length")]
        length: u32,
        /// Longest run of distances over which the minimum may stall.
        #[arg(long, default_value_t = 1)]
        step: u32,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Search for a wall nested by powers of an element.
    Axis {
        #[arg(long = "g", alias = "element")]
        element: String,
        #[command(flatten)]
        source: WallsSource,
        #[command(flatten)]
        axis: AxisArgs,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Greedy choice of finitely many walls covering short elements.
    Select {
        #[command(flatten)]
        source: WallsSource,
        #[arg(long = "L", alias = "length")]
        length: u32,
        #[command(flatten)]
        axis: AxisArgs,
        /// Also separate every pair of distinct trusted vertices.
        #[arg(long)]
        separate_pairs: bool,
        /// Generators of a parabolic subgroup, comma separated; repeatable.
        #[arg(long)]
        parabolic: Vec<String>,
        /// Rerun on a ball of this radius and compare the choices.
        /// Needs `--ball`/`--candidates`.
        #[arg(long)]
        compare_radius: Option<u32>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Restrict walls to a subgroup ball and profile the result.
    Induce {
        /// Subgroup generators, comma separated.
        #[arg(long)]
        subgroup: String,
        #[command(flatten)]
        source: WallsSource,
        /// Subgroup ball radius (default: the ambient trusted radius).
        #[arg(long)]
        radius: Option<u32>,
        /// Profile length (default: the subgroup radius).
        #[arg(long = "L", alias = "length")]
        length: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// List the shipped fixtures or write them to a directory.
    Fixtures {
        #[arg(long)]
        write: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ComplexSource {
    /// Cube complex file (TOML).
    #[arg(conflicts_with = "fixture", required_unless_present = "fixture")]
    file: Option<PathBuf>,
    /// Named complex fixture.
    #[arg(long)]
    fixture: Option<String>,
}

#[derive(Args)]
struct AxisArgs {
    #[arg(long, default_value_t = AxisOptions::default().n_max)]
    n_max: u32,
    #[arg(long, default_value_t = AxisOptions::default().k_max)]
    k_max: u32,
    /// Powers screened for torsion (default 2R).
    #[arg(long)]
    order_bound: Option<u32>,
}

impl AxisArgs {
    fn options(&self) -> AxisOptions {
        AxisOptions {
            n_max: self.n_max,
            k_max: self.k_max,
            order_bound: self.order_bound,
        }
    }
}

/// A run either passes or records a finding (exit status 1).
type Verdict = Result<bool>;

fn version_text() -> String {
    format!(
        "{}\nball format {BALL_FORMAT_VERSION}\nwallspace format {WALLSPACE_FORMAT_VERSION}\n\
         dual format {DUAL_FORMAT_VERSION}\ncomplex format {COMPLEX_FORMAT_VERSION}",
        env!("CARGO_PKG_VERSION")
    )
}

fn main() -> ExitCode {
    let version: &'static str = Box::leak(version_text().into_boxed_str());
    let matches = Cli::command().version(version).get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error[cli]: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error[{}]: {e:#}", module_tag(&e));
            ExitCode::from(2)
        }
    }
}

fn module_tag(e: &anyhow::Error) -> &'static str {
    for cause in e.chain() {
        if cause.is::<GroupError>() {
            return "group";
        }
        if cause.is::<WallError>() {
            return "wallspace";
        }
        if cause.is::<DualError>() {
            return "dual";
        }
        if cause.is::<ComplexError>() {
            return "complex";
        }
        if cause.is::<CriteriaError>() {
            return "criteria";
        }
        if cause.is::<std::io::Error>() {
            return "io";
        }
        if cause.is::<serde_json::Error>() {
            return "format";
        }
    }
    "cli"
}

fn run(cli: &Cli) -> Verdict {
    match &cli.command {
        Command::Ball {
            group,
            radius,
            out,
            dot,
        } => {
            let p = presentation(group, &cli.budgets)?;
            let ball = CayleyBall::build_with_budget(Arc::new(p), *radius, cli.budgets.vertex_budget)?;
            write_json(out, &BallFile::from(&ball))?;
            if let Some(d) = dot {
                write_text(d, &ball.to_dot())?;
            }
            println!("ball {}: {} vertices", ball.id(), ball.len());
            println!("spheres {:?}", ball.sphere_sizes());
            Ok(true)
        }
        Command::Walls { source, out } => {
            let (ws, notes) = wallspace_with_notes(source, cli)?;
            for n in &notes {
                println!("note: {n}");
            }
            write_json(out, &ws)?;
            println!(
                "{} walls over {} (trusted radius {})",
                ws.len(),
                ws.ball_id(),
                ws.trusted_radius()
            );
            Ok(true)
        }
        Command::Dual {
            source,
            out,
            dot,
            complex: complex_out,
            max_dim,
        } => {
            let ws = wallspace(source, cli)?;
            let budget = DualBudget {
                walls: cli.budgets.wall_budget,
                zero_cubes: cli.budgets.zero_cube_budget,
                max_dim: *max_dim,
            };
            let dc = DualComplex::build_with_budget(&ws, budget)?;
            if let Some(o) = out {
                write_json(o, &dc)?;
            }
            if let Some(d) = dot {
                write_text(d, &dc.to_dot())?;
            }
            if let Some(c) = complex_out {
                write_text(c, &CubeComplex::from_dual(&dc)?.to_toml())?;
            }
            println!("census {}", slash(&dc.census()));
            for a in dc.advisories() {
                println!("advisory: {}", serde_json::to_string(a)?);
            }
            let median = dual::check_median(&dc);
            if median.skipped {
                println!("median: skipped ({} vertices)", median.vertices);
                return Ok(true);
            }
            match &median.failure {
                None => {
                    println!("median: ok ({} triples)", median.triples_checked);
                    Ok(true)
                }
                Some(f) => {
                    println!("median: fails at triple {:?} (medians {:?})", f.triple, f.medians);
                    Ok(false)
                }
            }
        }
        Command::CheckNpc { source, report } => {
            let c = cube_complex(source)?;
            let r = complex::check_npc(&c);
            if let Some(p) = report {
                write_json(p, &r)?;
            }
            println!("{}", if r.npc { "npc" } else { "not npc" });
            for v in &r.violations {
                println!("  {}", serde_json::to_string(v)?);
            }
            Ok(r.npc)
        }
        Command::CheckSpecial { source, report } => {
            let c = cube_complex(source)?;
            let r = complex::check_special(&c);
            if let Some(p) = report {
                write_json(p, &r)?;
            }
            println!("{}", if r.special { "special" } else { "not special" });
            for p in &r.pathologies {
                println!("  {}", serde_json::to_string(p)?);
            }
            Ok(r.special)
        }
        Command::Criteria {
            source,
            length,
            step,
            report,
        } => {
            let ws = wallspace(source, cli)?;
            let prof = criteria::linear_separation_profile(&ws, *length, *step)?;
            if let Some(p) = report {
                write_json(p, &prof)?;
            }
            print_profile(&prof);
            Ok(prof.properness_plausible)
        }
        Command::Axis {
            element,
            source,
            axis,
            report,
        } => {
            let ws = wallspace(source, cli)?;
            let g = ws.ball().presentation().element(element)?;
            let r = criteria::axis_separation(&ws, &g, &axis.options())?;
            if let Some(p) = report {
                write_json(p, &r)?;
            }
            match &r.witness {
                Some(w) => println!(
                    "axis {}: wall {} ({}@{:?}) n={} direction {} chain to k={}",
                    r.element, w.wall, w.family, w.translate, w.n, w.direction, w.chain_verified_to
                ),
                None if !r.infinite_order => println!("axis {}: finite order", r.element),
                None => println!("axis {}: no witness among {} walls", r.element, r.walls_examined),
            }
            for n in &r.notes {
                println!("note: {n}");
            }
            Ok(r.verdict)
        }
        Command::Select {
            source,
            length,
            axis,
            separate_pairs,
            parabolic,
            compare_radius,
            report,
        } => select(cli, source, *length, axis, *separate_pairs, parabolic, *compare_radius, report.as_deref()),
        Command::Induce {
            subgroup,
            source,
            radius,
            length,
            out,
            report,
        } => {
            let ws = wallspace(source, cli)?;
            let p = ws.ball().presentation();
            let gens = subgroup
                .split(',')
                .map(|s| p.element(s.trim()))
                .collect::<Result<Vec<_>, _>>()?;
            let r_sub = radius.unwrap_or(ws.trusted_radius());
            let ind = criteria::induce_wallspace(&ws, &gens, r_sub)?;
            if let Some(o) = out {
                write_json(o, &ind.wallspace)?;
            }
            let prof =
                criteria::linear_separation_profile(&ind.wallspace, length.unwrap_or(r_sub), 1)?;
            if let Some(rp) = report {
                write_json(
                    rp,
                    &InduceReport {
                        subgroup_generators: &ind.subgroup_generators,
                        walls: ind.wallspace.len(),
                        provenance: &ind.provenance,
                        discarded: &ind.discarded,
                        profile: &prof,
                    },
                )?;
            }
            println!(
                "induced on <{}>: {} walls ({} ambient walls discarded)",
                ind.subgroup_generators.join(","),
                ind.wallspace.len(),
                ind.discarded.len()
            );
            print_profile(&prof);
            Ok(prof.properness_plausible)
        }
        Command::Fixtures { write } => {
            match write {
                None => {
                    println!("wallspaces: {}, random", fixtures::NAMES.join(", "));
                    println!("complexes: {}", fixtures::COMPLEX_NAMES.join(", "));
                }
                Some(dir) => {
                    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                    for name in fixtures::NAMES {
                        let ws = fixtures::by_name(name)?;
                        write_json(&dir.join(format!("{name}.json")), &ws)?;
                    }
                    for (name, text) in fixtures::COMPLEXES {
                        write_text(&dir.join(format!("{name}.toml")), text)?;
                    }
                    println!(
                        "wrote {} fixtures to {}",
                        fixtures::NAMES.len() + fixtures::COMPLEXES.len(),
                        dir.display()
                    );
                }
            }
            Ok(true)
        }
    }
}

#[derive(Serialize)]
struct InduceReport<'a> {
    subgroup_generators: &'a [String],
    walls: usize,
    provenance: &'a [criteria::InducedWall],
    discarded: &'a [usize],
    profile: &'a SeparationProfile,
}

#[derive(Serialize)]
struct SelectReport<'a> {
    selection: &'a SelectionResult,
    reverify_failures: &'a [String],
    #[serde(skip_serializing_if = "Option::is_none")]
    stability: Option<&'a Stability>,
}

#[allow(clippy::too_many_arguments)]
fn select(
    cli: &Cli,
    source: &WallsSource,
    length: u32,
    axis: &AxisArgs,
    separate_pairs: bool,
    parabolic: &[String],
    compare_radius: Option<u32>,
    report: Option<&Path>,
) -> Verdict {
    let ws = wallspace(source, cli)?;
    let opts = SelectOptions {
        axis: axis.options(),
        parabolics: parabolic
            .iter()
            .map(|p| p.split(',').map(|s| s.trim().to_string()).collect())
            .collect(),
        separate_pairs,
    };
    let result = criteria::select_walls(&ws, length, &opts)?;
    let failures = criteria::reverify_selection(&ws, &result, &opts)?;
    let stability = match compare_radius {
        None => None,
        Some(r2) => {
            let (Some(ball), Some(spec)) = (&source.ball, &source.candidates) else {
                bail!("--compare-radius needs --ball and --candidates");
            };
            let other_ball = rebuild_ball(&load_ball(ball)?, r2, &cli.budgets)?;
            let (other, _) = WallsSpec::parse(&read(spec)?)?.build(Arc::new(other_ball))?;
            let other_result = criteria::select_walls(&other, length, &opts)?;
            let r1 = ws.ball().radius();
            Some(if r1 <= r2 {
                criteria::selection_stability((r1, &result), (r2, &other_result))
            } else {
                criteria::selection_stability((r2, &other_result), (r1, &result))
            })
        }
    };
    if let Some(p) = report {
        write_json(
            p,
            &SelectReport {
                selection: &result,
                reverify_failures: &failures,
                stability: stability.as_ref(),
            },
        )?;
    }
    for s in &result.selected {
        println!("selected {}@{:?} ({:?})", s.family, s.translate, s.phase);
    }
    println!(
        "{} walls; {} representatives, {} uncovered",
        result.selected.len(),
        result.coverage.len(),
        result.uncovered.len()
    );
    for u in &result.uncovered {
        println!("uncovered {u:?}");
    }
    for pair in &result.unseparated_pairs {
        println!("unseparated {:?} {:?}", pair[0], pair[1]);
    }
    for f in &failures {
        println!("reverify failed: {f}");
    }
    if let Some(s) = &stability {
        println!(
            "stability R{} vs R{}: {}",
            s.radii[0],
            s.radii[1],
            if s.stable { "stable" } else { "changed" }
        );
    }
    Ok(result.full_coverage && failures.is_empty())
}

fn print_profile(prof: &SeparationProfile) {
    println!("profile over {} walls", prof.walls);
    println!("{:>3} {:>5} {:>8} {:>5} {:>8}  argmin", "n", "min", "mean", "max", "envelope");
    for r in &prof.rows {
        println!(
            "{:>3} {:>5} {:>8.3} {:>5} {:>8}  {:?}",
            r.n, r.min, r.mean, r.max, r.envelope, r.argmin
        );
    }
    for w in &prof.warnings {
        println!("warning: {w}");
    }
    println!(
        "properness {}",
        if prof.properness_plausible { "plausible" } else { "not plausible" }
    );
}

fn slash(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join("/")
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    write_text(path, &s)
}

fn presentation(g: &GroupSource, budgets: &Budgets) -> Result<GroupPresentation> {
    let p = match (&g.group, &g.builtin) {
        (Some(path), _) => parse_group_file(&read(path)?)
            .with_context(|| format!("in {}", path.display()))?,
        (None, Some(b)) => GroupPresentation::builtin(b.parse::<Builtin>()?)?,
        (None, None) => bail!("give --group FILE or --builtin NAME"),
    };
    Ok(p.with_rewrite_budget(budgets.rewrite_budget))
}

fn load_ball(path: &Path) -> Result<CayleyBall> {
    serde_json::from_str(&read(path)?).with_context(|| format!("loading ball {}", path.display()))
}

fn rebuild_ball(ball: &CayleyBall, radius: u32, budgets: &Budgets) -> Result<CayleyBall> {
    Ok(CayleyBall::build_with_budget(
        ball.presentation_arc(),
        radius,
        budgets.vertex_budget,
    )?)
}

fn wallspace_with_notes(source: &WallsSource, cli: &Cli) -> Result<(Wallspace, Vec<String>)> {
    if let Some(path) = &source.walls {
        let ws = serde_json::from_str(&read(path)?)
            .with_context(|| format!("loading wallspace {}", path.display()))?;
        return Ok((ws, Vec::new()));
    }
    if let Some(name) = &source.fixture {
        let ws = if name == "random" {
            fixtures::random_wallspace(cli.seed)?
        } else {
            fixtures::by_name(name)?
        };
        return Ok((ws, Vec::new()));
    }
    if let (Some(ball), Some(spec)) = (&source.ball, &source.candidates) {
        let spec = WallsSpec::parse(&read(spec)?)
            .with_context(|| format!("in {}", spec.display()))?;
        return Ok(spec.build(Arc::new(load_ball(ball)?))?);
    }
    bail!("give --walls FILE, --fixture NAME, or --ball FILE --candidates FILE")
}

fn wallspace(source: &WallsSource, cli: &Cli) -> Result<Wallspace> {
    Ok(wallspace_with_notes(source, cli)?.0)
}

fn cube_complex(source: &ComplexSource) -> Result<CubeComplex> {
    match (&source.file, &source.fixture) {
        (Some(path), _) => Ok(CubeComplex::from_toml(&read(path)?)
            .with_context(|| format!("in {}", path.display()))?),
        (None, Some(name)) => Ok(fixtures::complex(name)?),
        (None, None) => bail!("give a complex FILE or --fixture NAME"),
    }
}
