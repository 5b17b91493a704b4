use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use lifeframe::catalog;
use lifeframe::detect::{detect_emissions, detect_ship_bounded, Detection, ExplosionBound};
use lifeframe::kinematics::{
    compose_parallel, compose_with, galilean, invert_oblique, lorentz, CompositionInput, Law,
    Velocity,
};
use lifeframe::pattern_io::{emit_plaintext, emit_rle, parse_any, PatternDocument};
use lifeframe::verify::{self, Suite, SuiteReport};
use lifeframe::{Rational, Scalar};

/// Overrides the growth limit as `FACTOR` or `FACTOR:SIDE`.
const EXPLOSION_ENV: &str = "LIFEFRAME_EXPLOSION";

#[derive(Parser)]
#[command(
    name = "lifeframe",
    version,
    about = "Measure Life ships and compose their velocities across moving frames"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Kv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PatternFormat {
    Rle,
    Plaintext,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum LawArg {
    Life,
    Galilean,
    Lorentz,
}

impl From<LawArg> for Law {
    fn from(l: LawArg) -> Law {
        match l {
            LawArg::Life => Law::Life,
            LawArg::Galilean => Law::Galilean,
            LawArg::Lorentz => Law::Lorentz,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    All,
    Catalog,
    Parallel,
    Oblique,
    Oracle,
    Deviation,
    Emissions,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a pattern and write the result.
    Run {
        /// Pattern file (RLE or plaintext), or `catalog:NAME`.
        pattern: String,
        #[arg(long, default_value_t = 1)]
        gens: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "rle")]
        output_format: PatternFormat,
    },
    /// Measure period, displacement and velocity.
    Detect {
        pattern: String,
        #[arg(long, default_value_t = 64)]
        max_period: u64,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Compose a carrier velocity with a bullet velocity.
    Compose {
        #[arg(long, value_enum, default_value = "life")]
        law: LawArg,
        /// Carrier velocity along +x, as `p/q`.
        #[arg(long, value_parser = parse_fraction)]
        v1: Rational,
        #[arg(long, value_parser = parse_fraction)]
        v2x: Rational,
        #[arg(long, value_parser = parse_fraction, default_value = "0")]
        v2y: Rational,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Run self-checks; exits 1 if any fails.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// List built-in patterns or print one.
    Catalog {
        #[arg(long, conflicts_with = "emit")]
        list: bool,
        #[arg(long)]
        emit: Option<String>,
    },
    /// Report ships escaping from a pattern.
    Emissions {
        pattern: String,
        #[arg(long, default_value_t = 300)]
        horizon: u64,
        /// Carrier velocity along +x, used to recover co-moving velocities.
        #[arg(long, value_parser = parse_fraction, default_value = "0")]
        v1: Rational,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

/// Fractions only: `p/q` or an integer. Decimals are refused so that
/// velocities stay exact.
fn parse_fraction(s: &str) -> std::result::Result<Rational, String> {
    if s.contains('.') || s.contains('e') || s.contains('E') {
        return Err(format!("`{s}` is not a fraction; write it as p/q"));
    }
    s.trim()
        .parse::<Rational>()
        .map_err(|e| format!("`{s}` is not a fraction: {e}"))
}

/// Failure classes mapped onto exit codes.
enum Failure {
    /// A check or limit failed: exit 1.
    Check(anyhow::Error),
    /// Bad input: exit 2.
    Usage(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn explosion_bound() -> Result<ExplosionBound> {
    let mut bound = ExplosionBound::default();
    let Ok(raw) = std::env::var(EXPLOSION_ENV) else {
        return Ok(bound);
    };
    let mut parts = raw.split(':');
    let factor = parts.next().unwrap_or_default().trim();
    bound.population_factor = factor
        .parse()
        .with_context(|| format!("{EXPLOSION_ENV}: bad factor `{factor}`"))?;
    if let Some(side) = parts.next() {
        bound.max_side = side
            .trim()
            .parse()
            .with_context(|| format!("{EXPLOSION_ENV}: bad side `{side}`"))?;
    }
    if parts.next().is_some() || bound.population_factor == 0 || bound.max_side == 0 {
        bail!("{EXPLOSION_ENV} must be FACTOR or FACTOR:SIDE with positive values");
    }
    Ok(bound)
}

fn load_document(spec: &str) -> Result<PatternDocument> {
    if let Some(name) = spec.strip_prefix("catalog:") {
        let entry = catalog::find(name).ok_or_else(|| anyhow!("no catalog entry `{name}`"))?;
        return Ok(lifeframe::pattern_io::parse_rle(entry.rle)?);
    }
    let path = Path::new(spec);
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_any(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Reads an `#R x y` position comment, the way evolved patterns are written.
fn take_position(doc: &mut PatternDocument) -> (i64, i64) {
    let mut pos = (0, 0);
    doc.comments.retain(|c| {
        let Some(rest) = c.strip_prefix("#R") else {
            return true;
        };
        let nums: Vec<i64> = rest
            .split_whitespace()
            .filter_map(|t| t.parse().ok())
            .collect();
        if let [x, y] = nums[..] {
            pos = (x, y);
            false
        } else {
            true
        }
    });
    pos
}

fn cmd_run(
    spec: &str,
    gens: u64,
    out: Option<&Path>,
    format: PatternFormat,
) -> std::result::Result<(), Failure> {
    let mut doc = load_document(spec)?;
    let (px, py) = take_position(&mut doc);
    let bound = explosion_bound()?;
    let start = doc.to_pattern();
    let mut p = start.translate(px, py).map_err(anyhow::Error::from)?;
    let initial = p.population();
    for _ in 0..gens {
        p = p.step().map_err(|e| Failure::Check(e.into()))?;
        if let Some(reason) = bound.exceeded(initial, &p) {
            return Err(Failure::Check(anyhow!(
                "explosion bound exceeded at generation {}: {reason}",
                p.generation()
            )));
        }
    }

    let mut result = PatternDocument::from_pattern(&p).map_err(|e| Failure::Check(e.into()))?;
    result.name = doc.name.clone();
    result.comments = doc.comments.clone();
    let summary = match p.bounding_box() {
        Ok(bb) => {
            result
                .comments
                .push(format!("#R {} {}", bb.min_x, bb.min_y));
            format!(
                "generation={} population={} bbox={}",
                p.generation(),
                p.population(),
                bb
            )
        }
        Err(_) => format!("generation={} population=0 bbox=none", p.generation()),
    };
    let text = match format {
        PatternFormat::Rle => emit_rle(&result) + "\n",
        PatternFormat::Plaintext => emit_plaintext(&result),
    };
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            println!("{summary}");
        }
        None => {
            print!("{text}");
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn cmd_detect(spec: &str, max_period: u64, format: Format) -> std::result::Result<(), Failure> {
    let doc = load_document(spec)?;
    let p = doc.to_pattern();
    let detection =
        detect_ship_bounded(&p, max_period, explosion_bound()?).map_err(anyhow::Error::from)?;
    let mut out = String::new();
    match (&detection, format) {
        (Detection::Periodic(r), Format::Table) => {
            let _ = writeln!(out, "{}", r.summary());
        }
        (Detection::Periodic(r), Format::Kv) => {
            let _ = writeln!(out, "kind={}", r.kind);
            let _ = writeln!(out, "period={}", r.period);
            let _ = writeln!(out, "dx={}", r.displacement.0);
            let _ = writeln!(out, "dy={}", r.displacement.1);
            let _ = writeln!(out, "vx={}", r.velocity.vx);
            let _ = writeln!(out, "vy={}", r.velocity.vy);
            let _ = writeln!(out, "speed={}", r.speed);
            let _ = writeln!(out, "population={}", p.population());
        }
        (Detection::NotPeriodic, Format::Table) => {
            let _ = writeln!(out, "not-periodic max_period={max_period}");
        }
        (Detection::NotPeriodic, Format::Kv) => {
            let _ = writeln!(out, "kind=not-periodic");
            let _ = writeln!(out, "max_period={max_period}");
        }
        (Detection::NotPeriodicWithGrowth { generation, reason }, Format::Table) => {
            let _ = writeln!(
                out,
                "not-periodic-with-growth generation={generation} ({reason})"
            );
        }
        (Detection::NotPeriodicWithGrowth { generation, .. }, Format::Kv) => {
            let _ = writeln!(out, "kind=not-periodic-with-growth");
            let _ = writeln!(out, "generation={generation}");
        }
    }
    print!("{out}");
    Ok(())
}

struct Composed {
    law: Law,
    v12: Option<Velocity<Rational>>,
    error: Option<String>,
}

fn compose_all(v1: Rational, v2x: Rational, v2y: Rational) -> Result<Vec<Composed>> {
    let parallel = v2y == Rational::from_integer(0);
    let mut out = Vec::new();
    // v1 = 1 is admitted only for the collinear law.
    let input = CompositionInput::new(v1, Velocity::new(v2x, v2y));
    for law in Law::ALL {
        let res = if parallel && input.is_err() {
            let scalar = match law {
                Law::Life => compose_parallel(v1, v2x),
                Law::Galilean => Ok(galilean(v1, v2x)),
                Law::Lorentz => lorentz(v1, v2x),
            };
            scalar.map(|v| Velocity::new(v, Rational::from_integer(0)))
        } else {
            match &input {
                Ok(i) => compose_with(law, i).map(|r| r.v12),
                Err(e) => bail!("{e}"),
            }
        };
        out.push(match res {
            Ok(v) => Composed {
                law,
                v12: Some(v),
                error: None,
            },
            Err(e) => Composed {
                law,
                v12: None,
                error: Some(e.to_string()),
            },
        });
    }
    Ok(out)
}

fn cmd_compose(
    law: Law,
    v1: Rational,
    v2x: Rational,
    v2y: Rational,
    format: Format,
) -> std::result::Result<(), Failure> {
    let all = compose_all(v1, v2x, v2y)?;
    let chosen = all
        .iter()
        .find(|c| c.law == law)
        .expect("all laws computed");
    let Some(v12) = &chosen.v12 else {
        return Err(Failure::Usage(anyhow!(
            "{law}: {}",
            chosen.error.as_deref().unwrap_or("undefined")
        )));
    };
    let tan = if v12.vx == Rational::from_integer(0) {
        if v12.vy == Rational::from_integer(0) {
            "none".to_string()
        } else {
            "vertical".to_string()
        }
    } else {
        (v12.vy / v12.vx).to_string()
    };
    let degrees = if v12.is_zero() {
        "none".to_string()
    } else {
        format!(
            "{:.3}",
            v12.vy
                .to_f64_lossy()
                .atan2(v12.vx.to_f64_lossy())
                .to_degrees()
        )
    };
    let speed = v12.chebyshev_speed();
    let superluminal = speed > Rational::from_integer(1);

    let mut out = String::new();
    match format {
        Format::Table => {
            let _ = writeln!(out, "law: {law}");
            let _ = writeln!(out, "v12x: {}", v12.vx);
            let _ = writeln!(out, "v12y: {}", v12.vy);
            let _ = writeln!(out, "tan_chi: {tan}");
            let _ = writeln!(out, "chi_degrees: {degrees} (display only)");
            let _ = writeln!(
                out,
                "speed: {speed}{}",
                if superluminal {
                    " (exceeds light speed)"
                } else {
                    ""
                }
            );
            let _ = writeln!(out, "comparison:");
            for c in &all {
                let value = match (&c.v12, &c.error) {
                    (Some(v), _) => format!("v12={v} speed={}", v.chebyshev_speed()),
                    (None, Some(e)) => format!("undefined ({e})"),
                    (None, None) => "undefined".to_string(),
                };
                let _ = writeln!(out, "  {:<9} {value}", c.law.name());
            }
        }
        Format::Kv => {
            let _ = writeln!(out, "law={law}");
            let _ = writeln!(out, "v12x={}", v12.vx);
            let _ = writeln!(out, "v12y={}", v12.vy);
            let _ = writeln!(out, "tan_chi={tan}");
            let _ = writeln!(out, "chi_degrees_display={degrees}");
            let _ = writeln!(out, "speed={speed}");
            let _ = writeln!(out, "superluminal={superluminal}");
            for c in &all {
                match &c.v12 {
                    Some(v) => {
                        let _ = writeln!(out, "{}.v12x={}", c.law, v.vx);
                        let _ = writeln!(out, "{}.v12y={}", c.law, v.vy);
                    }
                    None => {
                        let _ = writeln!(out, "{}.v12=undefined", c.law);
                    }
                }
            }
        }
    }
    print!("{out}");
    Ok(())
}

fn kv_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn render_suite(rep: &SuiteReport, format: Format, out: &mut String) {
    let suite = rep.suite;
    for c in &rep.checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        match format {
            Format::Table => {
                let _ = writeln!(out, "{status} [{suite}] {}: {}", c.name, c.detail);
            }
            Format::Kv => {
                let _ = writeln!(
                    out,
                    "suite={suite} check={} status={} detail={}",
                    kv_quote(&c.name),
                    status.to_ascii_lowercase(),
                    kv_quote(&c.detail)
                );
            }
        }
    }
    for f in &rep.findings {
        match format {
            Format::Table => {
                let _ = writeln!(out, "FINDING [{suite}] {f}");
            }
            Format::Kv => {
                let _ = writeln!(out, "suite={suite} finding={}", kv_quote(f));
            }
        }
    }
    match format {
        Format::Table => {
            let _ = writeln!(
                out,
                "{suite}: {}/{} checks passed",
                rep.passed_count(),
                rep.checks.len()
            );
        }
        Format::Kv => {
            let _ = writeln!(
                out,
                "suite={suite} passed={} total={}",
                rep.passed_count(),
                rep.checks.len()
            );
        }
    }
}

fn cmd_verify(suite: SuiteArg, format: Format) -> std::result::Result<(), Failure> {
    let selected: Vec<Suite> = match suite {
        SuiteArg::All => Suite::ALL.to_vec(),
        SuiteArg::Catalog => vec![Suite::Catalog],
        SuiteArg::Parallel => vec![Suite::Parallel],
        SuiteArg::Oblique => vec![Suite::Oblique],
        SuiteArg::Oracle => vec![Suite::Oracle],
        SuiteArg::Deviation => vec![Suite::Deviation],
        SuiteArg::Emissions => vec![Suite::Emissions],
    };
    // Catalog expectations are re-measured before anything else.
    let mut order = vec![Suite::Catalog];
    order.extend(selected.into_iter().filter(|s| *s != Suite::Catalog));

    let mut out = String::new();
    let mut failed = Vec::new();
    for s in order {
        let rep = verify::run(s);
        render_suite(&rep, format, &mut out);
        if !rep.passed() {
            failed.push(s.name());
        }
    }
    print!("{out}");
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(anyhow!(
            "failed suites: {}",
            failed.join(", ")
        )))
    }
}

fn cmd_catalog(list: bool, emit: Option<&str>) -> std::result::Result<(), Failure> {
    match emit {
        Some(name) => {
            let entry = catalog::find(name).ok_or_else(|| anyhow!("no catalog entry `{name}`"))?;
            println!("{}", entry.rle);
        }
        None => {
            let _ = list;
            for e in catalog::entries() {
                let expected = match e.expected {
                    Some(x) => format!(
                        "{} P={} d=({},{})",
                        x.kind, x.period, x.displacement.0, x.displacement.1
                    ),
                    None => "-".to_string(),
                };
                println!("{:<17} {:<28} {}", e.name, expected, e.description);
            }
        }
    }
    Ok(())
}

fn cmd_emissions(
    spec: &str,
    horizon: u64,
    v1: Rational,
    format: Format,
) -> std::result::Result<(), Failure> {
    let doc = load_document(spec)?;
    let ships = catalog::ship_reports();
    let names: Vec<&str> = catalog::entries()
        .iter()
        .filter(|e| {
            e.expected
                .is_some_and(|x| x.kind == lifeframe::detect::Kind::Ship)
        })
        .map(|e| e.name)
        .collect();
    let events =
        detect_emissions(&doc.to_pattern(), horizon, &ships).map_err(anyhow::Error::from)?;
    let mut out = String::new();
    let mut inconsistent = 0usize;
    for (i, e) in events.iter().enumerate() {
        let co_moving = invert_oblique(v1, &e.ground_velocity);
        let consistent = co_moving.as_ref().is_ok_and(|b| {
            CompositionInput::new(v1, b.clone())
                .map(|inp| lifeframe::kinematics::compose_oblique(&inp).v12 == e.ground_velocity)
                .unwrap_or(false)
        });
        if !consistent {
            inconsistent += 1;
        }
        let co = co_moving.map_or_else(|err| format!("undefined ({err})"), |v| v.to_string());
        let name = names.get(e.ship).copied().unwrap_or("?");
        match format {
            Format::Table => {
                let _ = writeln!(
                    out,
                    "#{i} {name} born={} confirmed={} at={} ground_v={} co_moving_v={} consistent={}",
                    e.birth_generation,
                    e.confirmed_generation,
                    e.first_sighting,
                    e.ground_velocity,
                    co,
                    consistent
                );
            }
            Format::Kv => {
                let _ = writeln!(
                    out,
                    "event={i} ship={name} birth={} confirmed={} x={} y={} vx={} vy={} co_moving={} consistent={}",
                    e.birth_generation,
                    e.confirmed_generation,
                    e.first_sighting.x,
                    e.first_sighting.y,
                    e.ground_velocity.vx,
                    e.ground_velocity.vy,
                    co,
                    consistent
                );
            }
        }
    }
    match format {
        Format::Table => {
            let _ = writeln!(
                out,
                "{} emissions in {} generations (v1={v1})",
                events.len(),
                horizon
            );
        }
        Format::Kv => {
            let _ = writeln!(out, "events={} horizon={} v1={v1}", events.len(), horizon);
        }
    }
    print!("{out}");
    if inconsistent > 0 {
        return Err(Failure::Check(anyhow!(
            "{inconsistent} events fail the inverse/composition round trip"
        )));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            pattern,
            gens,
            out,
            output_format,
        } => cmd_run(&pattern, gens, out.as_deref(), output_format),
        Command::Detect {
            pattern,
            max_period,
            format,
        } => cmd_detect(&pattern, max_period, format),
        Command::Compose {
            law,
            v1,
            v2x,
            v2y,
            format,
        } => cmd_compose(law.into(), v1, v2x, v2y, format),
        Command::Verify { suite, format } => cmd_verify(suite, format),
        Command::Catalog { list, emit } => cmd_catalog(list, emit.as_deref()),
        Command::Emissions {
            pattern,
            horizon,
            v1,
            format,
        } => cmd_emissions(&pattern, horizon, v1, format),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
