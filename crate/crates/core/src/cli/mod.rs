//! Command-line front end.
//!
//! Exit codes: 0 when every claim matched or the predicate passed, 1 on a
//! falsified predicate or mismatch, 2 when inconclusive, 3 for usage
//! errors, 4 for I/O errors, 5 for scene parse errors and 6 when a
//! computation's precondition fails.

pub mod setexpr;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

pub use setexpr::{parse_point, parse_set, SetExprError};

use crate::geom::{Point, DEFAULT_RESOLUTION};
use crate::hyperspace::{
    default_family, fell_probe, hausdorff_probe, ideal_map, vietoris_probe, HitSet, IdealMap,
    MissSet, PathSpec, ProbeStatus,
};
use crate::order::{join_brute, join_ex35, meet_brute, meet_ex42, GridSpec, LatticeOutcome};
use crate::props::{
    check_decreasing_continuous, check_dense_boundaries, check_proper_inclusion, classify_point,
    default_open_sets, default_radii, ClassStatus, PredicateStatus,
};
use crate::repro::{ex42_ideal_map, run_repro, ClaimStatus, ReproConfig, EXAMPLES};
use crate::report::Envelope;
use crate::scene::{builtin_ids, builtin_scene, parse_scene, print_scene, Scene};
use crate::setrep::{hausdorff_windowed, sample, seeded_points, DivergenceVerdict, HausdorffConfig};
use crate::window::Window;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;
pub const EXIT_IO: i32 = 4;
pub const EXIT_PARSE: i32 = 5;
pub const EXIT_PRECONDITION: i32 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "hyperfell", version, about = "Hyperspace convergence probes for cone-ordered subspaces of R^n")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Omit the timestamp so output is byte-reproducible.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// Directory for CSV dumps of the sampled clouds.
    #[arg(long, global = true, value_name = "DIR")]
    pub plot_csv: Option<PathBuf>,
    /// Grid nodes per window axis.
    #[arg(long, global = true, default_value_t = DEFAULT_RESOLUTION)]
    pub resolution: usize,
    /// Seed for sampled points and test families; decimal or 0x-hex.
    #[arg(long, global = true, default_value = "0x5EED", value_parser = parse_seed)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(h) => u64::from_str_radix(h, 16),
        None => s.parse(),
    };
    r.map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct SceneSource {
    /// Scene file in the region grammar.
    #[arg(long, conflicts_with = "builtin")]
    pub scene: Option<PathBuf>,
    /// Built-in scene id.
    #[arg(long)]
    pub builtin: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProbeTopology {
    Fell,
    Vietoris,
    Hausdorff,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Predicate {
    DecreasingContinuous,
    ProperInclusion,
    DenseBoundaries,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Expectation {
    Converges,
    Diverges,
    Divergent,
    Bounded,
}

#[derive(Debug, Subcommand)]
pub enum SceneCommand {
    /// Parse a scene and print its canonical form.
    Check {
        path: Option<PathBuf>,
        #[arg(long)]
        builtin: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scene file utilities.
    Scene {
        #[command(subcommand)]
        action: SceneCommand,
    },
    /// Windowed Hausdorff distances between two sets.
    Hausdorff {
        #[command(flatten)]
        source: SceneSource,
        #[arg(long)]
        set_a: String,
        #[arg(long)]
        set_b: String,
        /// Window radii; defaults to the scene window grown 1, 2 and 4 times.
        #[arg(long, value_delimiter = ',')]
        windows: Vec<f64>,
        #[arg(long, value_enum)]
        expect: Option<Expectation>,
    },
    /// Meet (or join) of two points by brute force, with the closed form
    /// when the scene has one.
    Meet {
        #[command(flatten)]
        source: SceneSource,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        join: bool,
    },
    /// Classify a point as upper singular, upper compact bounded or neither.
    Classify {
        #[command(flatten)]
        source: SceneSource,
        #[arg(long)]
        point: String,
        #[arg(long, value_delimiter = ',')]
        radii: Vec<f64>,
    },
    /// Convergence probe of the ideal map along a path.
    Probe {
        #[arg(value_enum)]
        topology: ProbeTopology,
        #[command(flatten)]
        source: SceneSource,
        /// Limit point x0.
        #[arg(long)]
        point: String,
        /// Path start x1; a default path is chosen when absent.
        #[arg(long)]
        to: Option<String>,
        #[arg(long)]
        hit: Vec<String>,
        #[arg(long)]
        miss: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        windows: Vec<f64>,
        /// Use the u-analogue curve for `curve:vietoris`.
        #[arg(long)]
        u_branch: bool,
        #[arg(long, value_enum)]
        expect: Option<Expectation>,
    },
    /// Check one of the order-topology predicates at sample points.
    Props {
        #[arg(value_enum)]
        predicate: Predicate,
        #[command(flatten)]
        source: SceneSource,
        /// Sample point; repeat the flag for several.
        #[arg(long = "point")]
        points: Vec<String>,
        /// Seeded points used when no `--point` is given.
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long)]
        dense_boundaries_strict: bool,
    },
    /// Reproduce a worked example, or all of them.
    Repro {
        id: String,
        #[arg(long, default_value_t = 5)]
        points: usize,
        #[arg(long)]
        u_branch: bool,
        #[arg(long)]
        dense_boundaries_strict: bool,
    },
}

/// A failure that ends the command with an exit code of 3 or more.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn usage(e: impl ToString) -> Failure {
    fail(EXIT_USAGE, e.to_string())
}

fn precondition(e: impl ToString) -> Failure {
    fail(EXIT_PRECONDITION, e.to_string())
}

struct Outcome {
    command: String,
    status: String,
    code: i32,
    report: Value,
}

fn outcome<T: Serialize>(command: &str, status: &str, code: i32, report: &T) -> Outcome {
    Outcome {
        command: command.into(),
        status: status.into(),
        code,
        report: serde_json::to_value(report).expect("report serializes"),
    }
}

fn label<T: Serialize>(t: &T) -> String {
    match serde_json::to_value(t) {
        Ok(Value::String(s)) => s,
        other => format!("{other:?}"),
    }
}

struct Loaded {
    scene: Arc<Scene>,
    builtin: Option<String>,
}

fn load_builtin(id: &str) -> Result<Loaded, Failure> {
    let s = builtin_scene(id).map_err(|e| {
        usage(format!(
            "{e}; built-ins: {}, open_box2, open_box3",
            builtin_ids().join(", ")
        ))
    })?;
    Ok(Loaded {
        scene: Arc::new(s),
        builtin: Some(id.into()),
    })
}

fn load_file(path: &Path) -> Result<Scene, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| fail(EXIT_IO, format!("{}: {e}", path.display())))?;
    parse_scene(&text).map_err(|e| fail(EXIT_PARSE, format!("{}:{e}", path.display())))
}

fn load(src: &SceneSource, resolution: usize) -> Result<Loaded, Failure> {
    let mut loaded = match (&src.scene, &src.builtin) {
        (Some(p), None) => Loaded {
            scene: Arc::new(load_file(p)?),
            builtin: None,
        },
        (None, Some(id)) => load_builtin(id)?,
        _ => return Err(usage("give exactly one of --scene and --builtin")),
    };
    let mut s = (*loaded.scene).clone();
    s.default_window = s.default_window.with_resolution(resolution);
    loaded.scene = Arc::new(s);
    Ok(loaded)
}

fn map_for(l: &Loaded) -> IdealMap {
    if l.builtin.as_deref() == Some("ex42") {
        ex42_ideal_map(&l.scene)
    } else {
        ideal_map(&l.scene)
    }
}

fn windows_for(scene: &Scene, radii: &[f64]) -> Result<Vec<Window>, Failure> {
    let w = &scene.default_window;
    if radii.is_empty() {
        return Ok(vec![w.clone(), w.aligned_growth(2), w.aligned_growth(4)]);
    }
    radii
        .iter()
        .map(|&r| {
            if !(r > 0.0) || !r.is_finite() {
                return Err(usage(format!("window radius {r} must be positive")));
            }
            Ok(w.grown_to(r))
        })
        .collect()
}

fn write_cloud(dir: &Path, name: &str, cloud: &crate::setrep::PointCloud) -> Result<(), Failure> {
    let path = dir.join(format!("{name}.csv"));
    let f = fs::File::create(&path).map_err(|e| fail(EXIT_IO, format!("{}: {e}", path.display())))?;
    cloud
        .write_csv(std::io::BufWriter::new(f))
        .map_err(|e| fail(EXIT_IO, e.to_string()))
}

fn expect_code(observed_ok: bool, inconclusive: bool) -> i32 {
    if inconclusive {
        EXIT_INCONCLUSIVE
    } else if observed_ok {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    }
}

fn scene_check(path: &Option<PathBuf>, builtin: &Option<String>) -> Result<Outcome, Failure> {
    let scene = match (path, builtin) {
        (Some(p), None) => load_file(p)?,
        (None, Some(id)) => (*load_builtin(id)?.scene).clone(),
        _ => return Err(usage("give a scene path or --builtin")),
    };
    let report = json!({
        "name": scene.name,
        "dim": scene.dim,
        "order": scene.order,
        "window": scene.default_window,
        "closed_in_rn": scene.closed_in_rn,
        "landmarks": scene.landmarks,
        "text": print_scene(&scene),
    });
    Ok(outcome("scene check", "OK", EXIT_OK, &report))
}

fn hausdorff_cmd(
    cli: &Cli,
    source: &SceneSource,
    set_a: &str,
    set_b: &str,
    radii: &[f64],
    expect: Option<Expectation>,
) -> Result<Outcome, Failure> {
    let l = load(source, cli.resolution)?;
    let a = parse_set(set_a, &l.scene, false).map_err(usage)?;
    let b = parse_set(set_b, &l.scene, false).map_err(usage)?;
    let map = map_for(&l);
    // Ideals pick up the closed-form boundary samples of the scene.
    let a = a.anchor().filter(|_| set_a.trim_start().starts_with("ideal")).map_or(a.clone(), |x| map(x));
    let b = b.anchor().filter(|_| set_b.trim_start().starts_with("ideal")).map_or(b.clone(), |x| map(x));
    let windows = windows_for(&l.scene, radii)?;
    let r = hausdorff_windowed(&a, &b, &windows, &HausdorffConfig::default());
    if let Some(dir) = &cli.plot_csv {
        let w = windows.last().expect("nonempty");
        write_cloud(dir, "set_a", &sample(&a, w))?;
        write_cloud(dir, "set_b", &sample(&b, w))?;
    }
    let inconclusive = r.verdict == DivergenceVerdict::Inconclusive;
    let code = match expect {
        None => expect_code(true, inconclusive),
        Some(Expectation::Divergent) => expect_code(r.verdict == DivergenceVerdict::Divergent, inconclusive),
        Some(Expectation::Bounded) => expect_code(r.verdict == DivergenceVerdict::Bounded, inconclusive),
        Some(e) => return Err(usage(format!("--expect {e:?} does not apply to hausdorff"))),
    };
    let report = json!({
        "set_a": a.tag,
        "set_b": b.tag,
        "divergence": r,
    });
    Ok(outcome("hausdorff", &label(&r.verdict), code, &report))
}

fn meet_cmd(cli: &Cli, source: &SceneSource, x: &str, y: &str, join: bool) -> Result<Outcome, Failure> {
    let l = load(source, cli.resolution)?;
    let n = l.scene.dim;
    let x = parse_point(x, n).map_err(usage)?;
    let y = parse_point(y, n).map_err(usage)?;
    let grid = GridSpec::new(l.scene.default_window.clone());
    let brute = if join {
        join_brute(&x, &y, &l.scene, &grid)
    } else {
        meet_brute(&x, &y, &l.scene, &grid)
    }
    .map_err(precondition)?;
    let closed = match (l.builtin.as_deref(), join) {
        (Some("ex42"), false) => Some(meet_ex42(&x, &y).map_err(precondition)?),
        (Some("ex35"), true) => Some(join_ex35(&x, &y).map_err(precondition)?),
        _ => None,
    };
    let pitch = l.scene.default_window.pitch();
    let agrees = closed.as_ref().map(|c| {
        brute.point().is_some_and(|b| {
            c.0.iter().zip(&b.0).all(|(p, q)| (p - q).abs() <= pitch * (1.0 + 1e-9))
        })
    });
    let (status, code) = match (&brute, agrees) {
        (_, Some(false)) => ("MISMATCH", EXIT_MISMATCH),
        (LatticeOutcome::Found { .. }, _) => ("FOUND", EXIT_OK),
        (LatticeOutcome::NoBound, _) => ("NO_BOUND", EXIT_OK),
        (LatticeOutcome::NotSemilatticeAtResolution { .. }, _) => {
            ("NOT_SEMILATTICE_AT_RESOLUTION", EXIT_INCONCLUSIVE)
        }
        (LatticeOutcome::Inconclusive { .. }, _) => ("INCONCLUSIVE", EXIT_INCONCLUSIVE),
    };
    let report = json!({
        "operation": if join { "join" } else { "meet" },
        "x": x,
        "y": y,
        "pitch": pitch,
        "brute": brute,
        "closed_form": closed,
        "agrees": agrees,
    });
    Ok(outcome(if join { "join" } else { "meet" }, status, code, &report))
}

fn classify_cmd(cli: &Cli, source: &SceneSource, point: &str, radii: &[f64]) -> Result<Outcome, Failure> {
    let l = load(source, cli.resolution)?;
    let x = parse_point(point, l.scene.dim).map_err(usage)?;
    let w = l.scene.default_window.clone();
    let radii = if radii.is_empty() {
        default_radii(&w)
    } else {
        radii.to_vec()
    };
    let c = classify_point(&l.scene, &x, &radii, &w).map_err(precondition)?;
    let code = if c.status == ClassStatus::Inconclusive {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    };
    Ok(outcome("classify", &label(&c.status), code, &c))
}

#[allow(clippy::too_many_arguments)]
fn probe_cmd(
    cli: &Cli,
    topology: ProbeTopology,
    source: &SceneSource,
    point: &str,
    to: &Option<String>,
    hit: &[String],
    miss: &[String],
    radii: &[f64],
    u_branch: bool,
    expect: Option<Expectation>,
) -> Result<Outcome, Failure> {
    let l = load(source, cli.resolution)?;
    let s = &l.scene;
    let w = s.default_window.clone();
    let x0 = parse_point(point, s.dim).map_err(usage)?;
    let path = match to {
        Some(t) => PathSpec::linear(x0.clone(), parse_point(t, s.dim).map_err(usage)?),
        None => PathSpec::default_for(s, &x0, &w)
            .ok_or_else(|| precondition(format!("no straight path into {x0} stays in the space")))?,
    };
    let map = map_for(&l);
    let verdict = match topology {
        ProbeTopology::Hausdorff => {
            let windows = windows_for(s, radii)?;
            hausdorff_probe(s, &path, &map, &windows, &HausdorffConfig::default())
        }
        _ => {
            let parse = |t: &String| parse_set(t, s, u_branch).map_err(usage);
            let mut hits = hit.iter().map(|t| parse(t).map(HitSet::new)).collect::<Result<Vec<_>, _>>()?;
            let mut misses = miss.iter().map(|t| parse(t).map(MissSet::new)).collect::<Result<Vec<_>, _>>()?;
            if hits.is_empty() && misses.is_empty() {
                (hits, misses) = default_family(s, &map, &x0, &w, cli.seed);
            }
            if let Some(dir) = &cli.plot_csv {
                for (k, h) in hits.iter().enumerate() {
                    write_cloud(dir, &format!("hit_{k}"), &sample(&h.set, &w))?;
                }
                for (k, m) in misses.iter().enumerate() {
                    write_cloud(dir, &format!("miss_{k}"), &sample(&m.set, &w))?;
                }
            }
            if topology == ProbeTopology::Fell {
                fell_probe(s, &path, &map, hits, misses, &w)
            } else {
                vietoris_probe(s, &path, &map, hits, misses, &w)
            }
        }
    }
    .map_err(precondition)?;
    if let Some(dir) = &cli.plot_csv {
        write_cloud(dir, "limit_ideal", &sample(&map(&x0), &w))?;
    }
    let inconclusive = verdict.status == ProbeStatus::Inconclusive;
    let code = match expect {
        None => expect_code(true, inconclusive),
        Some(Expectation::Converges) => {
            expect_code(verdict.status == ProbeStatus::ConvergesAtResolution, inconclusive)
        }
        Some(Expectation::Diverges) => expect_code(verdict.status == ProbeStatus::Diverges, inconclusive),
        Some(e) => return Err(usage(format!("--expect {e:?} does not apply to probes"))),
    };
    Ok(outcome("probe", &label(&verdict.status), code, &verdict))
}

fn props_cmd(
    cli: &Cli,
    predicate: Predicate,
    source: &SceneSource,
    points: &[String],
    samples: usize,
    strict: bool,
) -> Result<Outcome, Failure> {
    let l = load(source, cli.resolution)?;
    let s = &l.scene;
    let w = s.default_window.clone();
    let pts = if points.is_empty() {
        seeded_points(s, &w, samples, cli.seed, |_| true)
    } else {
        points
            .iter()
            .map(|p| parse_point(p, s.dim).map_err(usage))
            .collect::<Result<Vec<_>, _>>()?
    };
    if let Some(p) = pts.iter().find(|p| !s.contains(p.coords())) {
        return Err(precondition(format!("point {p} is outside the space")));
    }
    let report = match predicate {
        Predicate::DecreasingContinuous => {
            let sets: Vec<_> = pts.iter().flat_map(|x| default_open_sets(s, x, &w)).collect();
            check_decreasing_continuous(s, &pts, &sets, &w)
        }
        Predicate::ProperInclusion => {
            let d = s.order.interior_direction(s.dim).map_err(precondition)?;
            let norm = d.iter().map(|c| c * c).sum::<f64>().sqrt();
            let step = -0.05 * w.extent() / norm;
            let pairs: Vec<(Point, Point)> = pts
                .iter()
                .map(|x| (x.clone(), x.offset(&d, step)))
                .filter(|(_, y)| s.contains(y.coords()))
                .collect();
            check_proper_inclusion(s, &pairs, &w)
        }
        Predicate::DenseBoundaries => check_dense_boundaries(s, &pts, strict, &w),
    };
    let code = match report.status {
        PredicateStatus::PassedAtResolution => EXIT_OK,
        PredicateStatus::Falsified => EXIT_MISMATCH,
        PredicateStatus::Inconclusive => EXIT_INCONCLUSIVE,
    };
    Ok(outcome("props", &label(&report.status), code, &report))
}

fn repro_cmd(cli: &Cli, id: &str, points: usize, u_branch: bool, strict: bool) -> Result<Outcome, Failure> {
    let cfg = ReproConfig {
        resolution: cli.resolution,
        seed: cli.seed,
        points,
        plot_dir: cli.plot_csv.clone(),
        u_branch,
        dense_strict: strict,
    };
    let ids: Vec<&str> = if id == "all" {
        EXAMPLES.to_vec()
    } else {
        vec![id]
    };
    let mut reports = Vec::new();
    for id in ids {
        reports.push(run_repro(id, &cfg).map_err(|e| match e {
            crate::repro::ReproError::UnknownExample(_) => usage(e),
            crate::repro::ReproError::Io(_) => fail(EXIT_IO, e.to_string()),
            _ => precondition(e),
        })?);
    }
    let status = if reports.iter().any(|r| r.status == ClaimStatus::Mismatched) {
        ClaimStatus::Mismatched
    } else if reports.iter().any(|r| r.status == ClaimStatus::Inconclusive) {
        ClaimStatus::Inconclusive
    } else {
        ClaimStatus::Matched
    };
    let code = match status {
        ClaimStatus::Matched => EXIT_OK,
        ClaimStatus::Mismatched => EXIT_MISMATCH,
        ClaimStatus::Inconclusive => EXIT_INCONCLUSIVE,
    };
    Ok(outcome("repro", &label(&status), code, &json!({ "reports": reports })))
}

fn dispatch(cli: &Cli) -> Result<Outcome, Failure> {
    if cli.resolution < 2 {
        return Err(usage("--resolution must be at least 2"));
    }
    if let Some(dir) = &cli.plot_csv {
        fs::create_dir_all(dir).map_err(|e| fail(EXIT_IO, format!("{}: {e}", dir.display())))?;
    }
    match &cli.command {
        Command::Scene {
            action: SceneCommand::Check { path, builtin },
        } => scene_check(path, builtin),
        Command::Hausdorff {
            source,
            set_a,
            set_b,
            windows,
            expect,
        } => hausdorff_cmd(cli, source, set_a, set_b, windows, *expect),
        Command::Meet { source, x, y, join } => meet_cmd(cli, source, x, y, *join),
        Command::Classify { source, point, radii } => classify_cmd(cli, source, point, radii),
        Command::Probe {
            topology,
            source,
            point,
            to,
            hit,
            miss,
            windows,
            u_branch,
            expect,
        } => probe_cmd(cli, *topology, source, point, to, hit, miss, windows, *u_branch, *expect),
        Command::Props {
            predicate,
            source,
            points,
            samples,
            dense_boundaries_strict,
        } => props_cmd(cli, *predicate, source, points, *samples, *dense_boundaries_strict),
        Command::Repro {
            id,
            points,
            u_branch,
            dense_boundaries_strict,
        } => repro_cmd(cli, id, *points, *u_branch, *dense_boundaries_strict),
    }
}

/// Runs the command line `args` (program name first), writing the report
/// to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = if code == EXIT_OK {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(o) => {
            let env = Envelope::new(&o.command, &o.status, o.code, o.report, !cli.no_timestamp);
            let text = match cli.format {
                Format::Json => env.to_json(),
                Format::Text => env.to_text(),
            };
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_IO;
            }
            o.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

