//! `hullcert` command-line front end.
//!
//! Exit status: 0 when everything passes, 1 when a verification (or an
//! oracle, fuzz or reproduction check) fails, 2 for unusable input.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hullcert::certificate::{VerifyMode, VerifyOptions};
use hullcert::corpus::load_dir;
use hullcert::envelope::domain_grid;
use hullcert::family::SampleKind;
use hullcert::io::{
    certificate_from_json, certificate_to_json, combination_to_json, hull_from_json, hull_report_to_json, nums,
    parse_json, parse_point, texts, to_pretty,
};
use hullcert::lp::Membership;
use hullcert::{
    fuzz, hull_equivalence_check, render_svg, Certificate, ConstraintSystem, ConstructOptions, Error, FuzzConfig,
    Instance, LotSizingMode, Scalar, Q,
};

#[derive(Parser, Debug)]
#[command(
    name = "hullcert",
    version,
    about = "Construct, verify and decompose interval-set convex-hull certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a certificate for a point, verify it and print its measure table.
    Construct(ConstructArgs),
    /// Verify a certificate file.
    Verify(FileArgs),
    /// Extract the convex (and conic) combination encoded by a certificate.
    Decompose(FileArgs),
    /// Decide hull membership by brute force, or check envelope formulas.
    Oracle(OracleArgs),
    /// Seeded construct → verify → extract → reconstruct campaign.
    Fuzz(FuzzArgs),
    /// Draw a certificate as SVG.
    Render(RenderArgs),
    /// Replay every case of the worked-example corpus.
    ReproduceAll(ReproduceArgs),
}

#[derive(Args, Debug)]
struct InstanceArgs {
    /// Family tag; enough on its own for mccormick, box and ball.
    #[arg(long)]
    family: Option<String>,
    /// Instance JSON file (its "family" field selects the routine).
    #[arg(long)]
    instance: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[command(flatten)]
    source: InstanceArgs,
    /// Explicit point ("1/2, 0.7, 1/5"), or `vertex` / `mix` to sample one;
    /// defaults to the point stored in a corpus case file.
    #[arg(long)]
    point: Option<String>,
    /// Seed for sampled points.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated flags: printed|repaired, exact|decimal, strict|hull.
    #[arg(long, default_value = "")]
    mode: String,
    /// Absolute tolerance for decimal verification.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Write the certificate JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write an SVG drawing here.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FileArgs {
    /// Certificate JSON file.
    certificate: PathBuf,
    /// Comma-separated flags: exact|decimal, strict|hull.
    #[arg(long, default_value = "")]
    mode: String,
    #[arg(long)]
    tolerance: Option<f64>,
    /// Write the result JSON here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[command(flatten)]
    source: InstanceArgs,
    /// Envelope instance JSON; switches to the envelope check.
    #[arg(long)]
    hull: Option<PathBuf>,
    /// Explicit point, `vertex`, `mix`, or `grid:K` (envelopes: step 1/K).
    #[arg(long)]
    point: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FuzzArgs {
    #[command(flatten)]
    source: InstanceArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Samples per instance.
    #[arg(long, default_value_t = 50)]
    samples: usize,
    /// Random instances (ignored with --instance, which uses one).
    #[arg(long, default_value_t = 20)]
    instances: usize,
    /// printed|repaired for lot sizing; `oracle` also cross-checks membership.
    #[arg(long, default_value = "")]
    mode: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RenderArgs {
    certificate: PathBuf,
    /// Output file; standard output otherwise.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReproduceArgs {
    /// Directory of case files.
    #[arg(long, default_value = "corpus")]
    corpus: PathBuf,
}

/// Outcome of a command that ran to completion.
enum Status {
    Pass,
    Fail,
}

fn input_error(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

#[derive(Clone, Copy, Debug, Default)]
struct Modes {
    lot_sizing: LotSizingMode,
    decimal: bool,
    hull: bool,
    oracle: bool,
}

fn parse_modes(s: &str) -> Result<Modes, Error> {
    let mut m = Modes::default();
    for flag in s.split(',').map(str::trim).filter(|f| !f.is_empty()) {
        match flag {
            "exact" => m.decimal = false,
            "decimal" => m.decimal = true,
            "strict" => m.hull = false,
            "hull" | "conv" => m.hull = true,
            "oracle" => m.oracle = true,
            other => {
                m.lot_sizing = LotSizingMode::from_name(other)
                    .ok_or_else(|| input_error(format!("unknown mode flag {other:?}")))?
            }
        }
    }
    Ok(m)
}

fn read_json(path: &Path) -> Result<serde_json::Value, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    parse_json(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| input_error(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

enum PointSource {
    Explicit(Vec<Q>),
    Sampled(SampleKind),
    Grid(i64),
}

fn parse_point_source(s: &str) -> Result<PointSource, Error> {
    match s.trim() {
        "vertex" => Ok(PointSource::Sampled(SampleKind::Vertex)),
        "mix" => Ok(PointSource::Sampled(SampleKind::Mix)),
        g if g.starts_with("grid") => {
            let k = g.strip_prefix("grid").and_then(|r| r.strip_prefix(':')).unwrap_or("8");
            let k: i64 = k
                .parse()
                .map_err(|_| input_error(format!("bad grid {g:?}; use grid:K")))?;
            if k < 1 {
                return Err(input_error("grid needs at least one step"));
            }
            Ok(PointSource::Grid(k))
        }
        p => Ok(PointSource::Explicit(parse_point(p)?)),
    }
}

/// Reads `--instance` (a bare instance, or a corpus case whose point is
/// returned alongside) or builds the instance from `--family`.
fn load_instance(args: &InstanceArgs, dim: Option<usize>) -> Result<(Instance, Option<Vec<Q>>), Error> {
    match (&args.instance, &args.family) {
        (Some(path), family) => {
            let v = read_json(path)?;
            let (inst, point) = match v.get("instance") {
                Some(inner) => (Instance::from_json(inner)?, v.get("point").map(nums).transpose()?),
                None => (Instance::from_json(&v)?, None),
            };
            if let Some(f) = family {
                if f != inst.family() {
                    return Err(input_error(format!(
                        "--family {f} but the instance is {}",
                        inst.family()
                    )));
                }
            }
            Ok((inst, point))
        }
        (None, Some(f)) => Ok((Instance::from_family(f, dim.unwrap_or(2))?, None)),
        (None, None) => Err(input_error("give --family or --instance")),
    }
}

fn resolve_point(
    inst: &Instance,
    source: Option<PointSource>,
    stored: Option<Vec<Q>>,
    seed: u64,
) -> Result<Vec<Q>, Error> {
    match source {
        None => stored.ok_or_else(|| input_error("give --point")),
        Some(PointSource::Explicit(p)) => Ok(p),
        Some(PointSource::Sampled(kind)) => inst.prepare()?.sample_seeded(seed, kind),
        Some(PointSource::Grid(_)) => Err(input_error("grids are only supported for envelope checks")),
    }
}

fn show(v: &[impl Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(Scalar::to_text).collect();
    format!("({})", parts.join(", "))
}

/// Prints `variable | target | measure` and the verification outcome.
fn summarize<T: Scalar>(cert: &Certificate<T>, opts: &VerifyOptions<T>) -> bool {
    let names = cert.system.names();
    let width = names.iter().map(String::len).max().unwrap_or(0).max(8);
    println!("{:width$}  {:>12}  {:>12}", "variable", "target", "measure");
    for (i, name) in names.iter().enumerate() {
        let mut measure = cert.convex.get(i).map_or_else(T::zero, |s| s.signed_measure());
        if let Some(conic) = &cert.conic {
            measure = measure + conic.get(i).map_or_else(T::zero, |s| s.signed_measure());
        }
        let target = cert.target.get(i).map_or_else(|| "-".into(), Scalar::to_text);
        println!("{name:width$}  {target:>12}  {:>12}", measure.to_text());
    }
    let report = cert.verify_with(opts);
    if report.passed() {
        println!("verification: PASS ({} cells checked)", report.cells_checked);
    } else {
        println!("verification: FAIL");
        for line in report.describe(&cert.system) {
            println!("  {line}");
        }
    }
    report.passed()
}

fn verify_options<T: Scalar>(
    sys: &ConstraintSystem<T>,
    hull: bool,
    tolerance: Option<f64>,
) -> Result<VerifyOptions<T>, Error> {
    let mut opts = VerifyOptions::default();
    if let Some(t) = tolerance {
        if !T::EXACT {
            opts.tolerance = T::parse_text(&t.to_string()).map_err(|e| input_error(e.to_string()))?;
        }
    }
    if hull {
        opts.mode = VerifyMode::Hull(sys.enumerate_feasible(&sys.default_box()?, 1 << 22)?);
    }
    Ok(opts)
}

fn finish_construct<T: Scalar>(cert: Certificate<T>, a: &ConstructArgs, modes: Modes) -> Result<Status, Error> {
    let opts = verify_options(&cert.system, modes.hull, a.tolerance)?;
    let ok = summarize(&cert, &opts);
    if let Some(out) = &a.out {
        write_or_print(Some(out), &to_pretty(&certificate_to_json(&cert)))?;
    }
    if let Some(svg) = &a.svg {
        write_or_print(Some(svg), &render_svg(&cert)?)?;
    }
    Ok(if ok { Status::Pass } else { Status::Fail })
}

fn cmd_construct(a: &ConstructArgs) -> Result<Status, Error> {
    let modes = parse_modes(&a.mode)?;
    let source = a.point.as_deref().map(parse_point_source).transpose()?;
    let dim = match &source {
        Some(PointSource::Explicit(p)) => Some(p.len()),
        _ => None,
    };
    let (inst, stored) = load_instance(&a.source, dim)?;
    let h = resolve_point(&inst, source, stored, a.seed)?;
    println!("family {}, point {}", inst.family(), show(&h));
    let opts = ConstructOptions {
        lot_sizing: modes.lot_sizing,
    };
    if modes.decimal {
        let h: Vec<f64> = h.iter().map(Scalar::to_f64).collect();
        finish_construct(inst.construct(&h, &opts)?, a, modes)
    } else {
        finish_construct(inst.construct(&h, &opts)?, a, modes)
    }
}

fn verify_file<T: Scalar>(a: &FileArgs, hull: bool) -> Result<Status, Error> {
    let cert: Certificate<T> = certificate_from_json(&read_json(&a.certificate)?)?;
    let opts = verify_options(&cert.system, hull, a.tolerance)?;
    Ok(if summarize(&cert, &opts) {
        Status::Pass
    } else {
        Status::Fail
    })
}

fn cmd_verify(a: &FileArgs) -> Result<Status, Error> {
    let modes = parse_modes(&a.mode)?;
    if modes.decimal {
        verify_file::<f64>(a, modes.hull)
    } else {
        verify_file::<Q>(a, modes.hull)
    }
}

fn decompose_file<T: Scalar>(a: &FileArgs, hull: bool) -> Result<Status, Error> {
    let cert: Certificate<T> = certificate_from_json(&read_json(&a.certificate)?)?;
    let opts = verify_options(&cert.system, hull, a.tolerance)?;
    let report = cert.verify_with(&opts);
    if !report.passed() {
        eprintln!("certificate does not verify:");
        for line in report.describe(&cert.system) {
            eprintln!("  {line}");
        }
        return Ok(Status::Fail);
    }
    let comb = cert.extract_with(&opts)?;
    write_or_print(a.out.as_deref(), &to_pretty(&combination_to_json(&comb)))?;
    Ok(Status::Pass)
}

fn cmd_decompose(a: &FileArgs) -> Result<Status, Error> {
    let modes = parse_modes(&a.mode)?;
    if modes.decimal {
        decompose_file::<f64>(a, modes.hull)
    } else {
        decompose_file::<Q>(a, modes.hull)
    }
}

fn cmd_oracle(a: &OracleArgs) -> Result<Status, Error> {
    let source = a.point.as_deref().map(parse_point_source).transpose()?;
    if let Some(path) = &a.hull {
        let hull = hull_from_json(&read_json(path)?)?;
        let samples = match source {
            None => domain_grid(&hull, 8)?,
            Some(PointSource::Grid(k)) => domain_grid(&hull, k)?,
            Some(PointSource::Explicit(p)) => vec![p],
            Some(PointSource::Sampled(_)) => {
                return Err(input_error("envelope checks take an explicit point or a grid"))
            }
        };
        let report = hull_equivalence_check(&hull, &samples)?;
        let findings = report.findings();
        println!(
            "envelope check: {} of {} samples agree",
            report.samples.iter().filter(|s| s.passed()).count(),
            report.samples.len()
        );
        for f in &findings {
            println!("  {f}");
        }
        if let Some(out) = &a.out {
            write_or_print(Some(out), &to_pretty(&hull_report_to_json(&report)))?;
        }
        return Ok(if report.passed() { Status::Pass } else { Status::Fail });
    }
    let dim = match &source {
        Some(PointSource::Explicit(p)) => Some(p.len()),
        _ => None,
    };
    let (inst, stored) = load_instance(&a.source, dim)?;
    let h = resolve_point(&inst, source, stored, a.seed)?;
    let json = match inst.prepare()?.oracle(&h)? {
        Membership::Inside(comb) => {
            println!("{} is in the hull", show(&h));
            for (p, w) in &comb.support {
                println!("  {} × {}", w.to_text(), show(p));
            }
            for (r, w) in &comb.rays {
                println!("  {} × ray {}", w.to_text(), show(r));
            }
            serde_json::json!({"inside": true, "combination": combination_to_json(&comb)})
        }
        Membership::Outside(sep) => {
            println!("{} is outside the hull", show(&h));
            println!("  separator: {} · x <= {}", show(&sep.normal), sep.rhs.to_text());
            serde_json::json!({"inside": false, "normal": texts(&sep.normal), "rhs": sep.rhs.to_text()})
        }
    };
    if let Some(out) = &a.out {
        write_or_print(Some(out), &to_pretty(&json))?;
    }
    Ok(if json["inside"] == true {
        Status::Pass
    } else {
        Status::Fail
    })
}

fn cmd_fuzz(a: &FuzzArgs) -> Result<Status, Error> {
    let modes = parse_modes(&a.mode)?;
    let (family, instance) = match (&a.source.instance, &a.source.family) {
        (Some(_), _) => {
            let (inst, _) = load_instance(&a.source, None)?;
            (inst.family().to_string(), Some(inst))
        }
        (None, Some(f)) => (f.clone(), None),
        (None, None) => return Err(input_error("give --family or --instance")),
    };
    let mut cfg = FuzzConfig::new(
        &family,
        a.seed,
        if instance.is_some() { 1 } else { a.instances },
        a.samples,
    );
    cfg.instance = instance;
    cfg.options.lot_sizing = modes.lot_sizing;
    cfg.oracle = modes.oracle;
    let report = fuzz(&cfg)?;
    println!("{}", report.summary());
    for (stage, n) in &report.by_stage {
        println!("  {stage}: {n}");
    }
    if let Some(out) = &a.out {
        write_or_print(Some(out), &to_pretty(&report.to_json()))?;
    }
    Ok(if report.failures() == 0 {
        Status::Pass
    } else {
        Status::Fail
    })
}

fn cmd_render(a: &RenderArgs) -> Result<Status, Error> {
    let cert: Certificate<Q> = certificate_from_json(&read_json(&a.certificate)?)?;
    write_or_print(a.svg.as_deref(), &render_svg(&cert)?)?;
    Ok(Status::Pass)
}

fn cmd_reproduce_all(a: &ReproduceArgs) -> Result<Status, Error> {
    let cases = load_dir(&a.corpus)?;
    if cases.is_empty() {
        return Err(input_error(format!("no cases in {}", a.corpus.display())));
    }
    let mut failed = 0;
    for case in &cases {
        let out = case.run();
        if out.passed() {
            println!("PASS {}", out.name);
        } else {
            failed += 1;
            println!("FAIL {}", out.name);
            for p in &out.problems {
                println!("  {p}");
            }
        }
    }
    println!("{}/{} cases reproduced", cases.len() - failed, cases.len());
    Ok(if failed == 0 { Status::Pass } else { Status::Fail })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Construct(a) => cmd_construct(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Decompose(a) => cmd_decompose(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Fuzz(a) => cmd_fuzz(a),
        Command::Render(a) => cmd_render(a),
        Command::ReproduceAll(a) => cmd_reproduce_all(a),
    };
    match result {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
