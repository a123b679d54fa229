//! `sdcode`: weight distributions, designs and neighbor tests for binary
//! self-dual codes.

mod verify;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde_json::{json, Value};

use sdcode::analysis::{intersection_spectrum, min_weight_design, neighbor_test, two_rank, MAX_PAIRS};
use sdcode::enumeration::{
    full_distribution_with, low_weight_enumerate_with, minimum_distance_with, EnumerationOptions, DEFAULT_FULL_CAP,
};
use sdcode::format;
use sdcode::geometry::{
    design_parameters, enumerate_subspaces, verify_t_design, Design, GeometryKind, GeometrySpec, TDesignCheck,
};
use sdcode::gleason;
use sdcode::{Error, LinearCode, Result};

#[derive(Parser)]
#[command(
    name = "sdcode",
    version,
    about = "Weight distributions, designs and neighbor tests for binary self-dual codes"
)]
struct Cli {
    /// Output format on standard output.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// Worker threads; defaults to one per core.
    #[arg(long, global = true, value_parser = parse_threads)]
    threads: Option<usize>,
    /// Progress on stderr (-v info, -vv debug).
    #[arg(short, long, action = ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a code or design, or load a generator file.
    #[command(subcommand)]
    Build(BuildKind),
    /// Weight distribution: certified low weights or the full enumerator.
    Wdist(WdistArgs),
    /// Complete a doubly-even self-dual weight enumerator from low-weight counts.
    Gleason(GleasonArgs),
    /// Check t-design regularity, intersection numbers and 2-rank.
    DesignCheck(DesignCheckArgs),
    /// Solve M x = 1 over the minimum-weight codewords.
    NeighborTest(NeighborArgs),
    /// Run every claim for the fixture code and R(3,7).
    Verify(VerifyArgs),
}

#[derive(Args)]
struct OutputArg {
    /// Write here instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum BuildKind {
    /// Reed–Muller code R(r, m).
    Rm {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Points versus s-dimensional subspaces of PG(m, q).
    PgDesign(GeometryArgs),
    /// Points versus s-flats of AG(m, q).
    AgDesign(GeometryArgs),
    /// Load a generator file and report its parameters.
    Load {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        out: OutputArg,
    },
}

#[derive(Args)]
struct GeometryArgs {
    #[arg(long)]
    m: u32,
    #[arg(long)]
    s: u32,
    #[arg(long, default_value_t = 2)]
    q: u64,
    #[command(flatten)]
    out: OutputArg,
}

#[derive(Args)]
struct BudgetArgs {
    /// Work budget in codeword encodings; `2^N` is accepted.
    #[arg(long, env = "WDIST_BUDGET", value_parser = parse_budget)]
    budget: Option<BigUint>,
    /// Run even when the projected work exceeds the budget.
    #[arg(long)]
    force: bool,
}

impl BudgetArgs {
    fn options(&self) -> EnumerationOptions {
        let mut opts = EnumerationOptions::default();
        if let Some(b) = &self.budget {
            opts.budget = b.clone();
        }
        opts.force = self.force;
        opts
    }
}

#[derive(Args)]
struct WdistArgs {
    /// Generator matrix file.
    input: PathBuf,
    /// Collect every codeword of weight at most this.
    #[arg(long, required_unless_present = "full", conflicts_with = "full")]
    max_weight: Option<usize>,
    /// Enumerate all 2^k codewords.
    #[arg(long)]
    full: bool,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct GleasonArgs {
    /// Code length, a multiple of 8.
    #[arg(long)]
    n: usize,
    #[arg(long, requires = "a20", conflicts_with = "fit")]
    a16: Option<BigInt>,
    #[arg(long, requires = "a16")]
    a20: Option<BigInt>,
    /// Known counts as a JSON object (or a path to one), e.g. '{"0":1,"4":0}'.
    #[arg(long, required_unless_present = "a16")]
    fit: Option<String>,
}

#[derive(Args)]
struct DesignCheckArgs {
    /// Block list, one block of 0-based point indices per line.
    #[arg(long, required_unless_present = "code", conflicts_with = "code")]
    design: Option<PathBuf>,
    /// Generator file; the blocks are its minimum-weight supports.
    #[arg(long)]
    code: Option<PathBuf>,
    /// Number of points for --design (default: largest index + 1).
    #[arg(long)]
    points: Option<usize>,
    /// Check regularity on t-subsets.
    #[arg(short, default_value_t = 2)]
    t: usize,
    /// Replace the design by its derived design at this point.
    #[arg(long)]
    derive: Option<usize>,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct NeighborArgs {
    /// Generator matrix file of a self-dual code.
    input: PathBuf,
    /// Weight of the rows of M (default: the minimum distance).
    #[arg(long)]
    d: Option<usize>,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    target: verify::Target,
    /// Take A20 = 0 from Gleason consistency instead of enumerating weight 20.
    #[arg(long)]
    quick: bool,
    /// Generator file for the fixture code.
    #[arg(long)]
    fixture: Option<PathBuf>,
    #[command(flatten)]
    budget: BudgetArgs,
}

fn parse_threads(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(t) if t > 0 => Ok(t),
        _ => Err(format!("expected a positive thread count, got {s:?}")),
    }
}

fn parse_budget(s: &str) -> std::result::Result<BigUint, String> {
    let s = s.trim();
    match s.split_once('^') {
        Some(("2", e)) => e
            .trim()
            .parse::<u32>()
            .map(|e| BigUint::one() << e)
            .map_err(|_| format!("invalid exponent in {s:?}")),
        Some(_) => Err(format!("only powers of two are accepted in exponent form, got {s:?}")),
        None => s.parse().map_err(|_| format!("invalid budget {s:?}")),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::Parse { .. } => 3,
        Error::BudgetExceeded { .. } => 4,
        Error::Inconsistent(_) | Error::Insufficient(_) | Error::Precondition(_) => 5,
        Error::InvalidParameter(_) | Error::Unsupported(_) | Error::TooLarge(_) | Error::DimensionMismatch(_) => 2,
    }
}

fn emit(format: Format, value: &Value, table: impl FnOnce() -> String) -> Result<()> {
    let mut out = io::stdout().lock();
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(value).expect("serializable"))?,
        Format::Table => write!(out, "{}", table())?,
    }
    out.flush()?;
    Ok(())
}

fn write_artifact(out: &OutputArg, write: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match &out.output {
        Some(path) => {
            let mut buf = Vec::new();
            write(&mut buf)?;
            fs::write(path, buf)?;
        }
        None => {
            let mut stdout = io::stdout().lock();
            write(&mut stdout)?;
        }
    }
    Ok(())
}

/// With `--output` the summary goes to stdout; otherwise the artifact does
/// and the summary is logged.
fn summarize(format: Format, out: &OutputArg, value: Value, line: String) -> Result<()> {
    if out.output.is_some() {
        emit(format, &value, || line + "\n")
    } else {
        log::info!("{line}");
        Ok(())
    }
}

fn code_summary(kind: &str, code: &LinearCode, out: &OutputArg) -> (Value, String) {
    let mut v = json!({
        "kind": kind,
        "n": code.n(),
        "k": code.k(),
        "self_dual": code.is_self_dual(),
        "doubly_even": code.is_doubly_even(),
    });
    let mut line = format!("[{}, {}]", code.n(), code.k());
    if code.is_self_dual() {
        line.push_str(" self-dual");
    }
    if code.is_doubly_even() {
        line.push_str(" doubly-even");
    }
    if let Some(p) = &out.output {
        v["output"] = json!(p.display().to_string());
        let _ = write!(line, " -> {}", p.display());
    }
    (v, line)
}

fn cmd_build(format: Format, kind: &BuildKind) -> Result<()> {
    match kind {
        BuildKind::Rm { r, m, out } => {
            let code = LinearCode::reed_muller(*r, *m)?;
            write_artifact(out, |w| code.save_generator(w))?;
            let (v, line) = code_summary("rm", &code, out);
            summarize(format, out, v, line)
        }
        BuildKind::Load { input, out } => {
            let code = LinearCode::load_generator(input)?;
            if out.output.is_some() {
                write_artifact(out, |w| code.save_generator(w))?;
            }
            let (v, line) = code_summary("load", &code, out);
            // Loading is a query, so its summary always goes to stdout.
            emit(format, &v, || line + "\n")
        }
        BuildKind::PgDesign(g) => build_design(format, GeometryKind::Projective, g),
        BuildKind::AgDesign(g) => build_design(format, GeometryKind::Affine, g),
    }
}

fn build_design(format: Format, kind: GeometryKind, g: &GeometryArgs) -> Result<()> {
    let spec = GeometrySpec::new(kind, g.m, g.s, g.q)?;
    let params = design_parameters(&spec)?;
    let design = enumerate_subspaces(&spec)?;
    write_artifact(&g.out, |w| format::write_design(&design, w))?;
    let mut v = json!({
        "v": design.point_count(),
        "k": design.block_size(),
        "b": design.block_count(),
        "lambda": params.lambda.to_string(),
    });
    let mut line = format!(
        "2-({}, {}, {}) design with {} blocks",
        design.point_count(),
        design.block_size(),
        params.lambda,
        design.block_count()
    );
    if let Some(p) = &g.out.output {
        v["output"] = json!(p.display().to_string());
        let _ = write!(line, " -> {}", p.display());
    }
    summarize(format, &g.out, v, line)
}

fn counts_table(value: &Value) -> String {
    let mut s = format!("{:>4}  {}\n", "i", "A_i");
    if let Some(counts) = value["counts"].as_object() {
        for (w, c) in counts {
            let _ = writeln!(s, "{:>4}  {}", w, c.as_str().unwrap_or_default());
        }
    }
    s
}

fn cmd_wdist(format: Format, args: &WdistArgs) -> Result<()> {
    let code = LinearCode::load_generator(&args.input)?;
    let opts = args.budget.options();
    let value = if args.full {
        let dist = full_distribution_with(&code, DEFAULT_FULL_CAP, &opts)?;
        let mut v = dist.to_json(code.k(), code.n(), &[]);
        v["certified"] = json!(true);
        v
    } else {
        let w = args.max_weight.expect("clap requires one mode");
        let report = low_weight_enumerate_with(&code, w, &opts)?;
        let mut v = report.to_json();
        v["certified"] = json!(report.certified);
        v["work"] = json!(report.work.to_string());
        v
    };
    emit(format, &value, || {
        let mut s = counts_table(&value);
        let _ = writeln!(
            s,
            "[{}, {}], certified up to weight {}: {}",
            value["n"], value["k"], value["certified_up_to"], value["certified"]
        );
        s
    })
}

fn cmd_gleason(format: Format, args: &GleasonArgs) -> Result<()> {
    let model = match (&args.a16, &args.a20, &args.fit) {
        (Some(a16), Some(a20), _) => {
            if args.n != 128 {
                return Err(Error::InvalidParameter(
                    "--a16/--a20 apply to length 128; use --fit for other lengths".into(),
                ));
            }
            gleason::coefficients_n128(a16, a20)?
        }
        (_, _, Some(fit)) => {
            let text = if fit.trim_start().starts_with('{') {
                fit.clone()
            } else {
                fs::read_to_string(fit)?
            };
            let known = format::parse_known_counts(&text)?;
            gleason::fit(args.n, &known)?
        }
        _ => return Err(Error::InvalidParameter("give --a16 and --a20, or --fit".into())),
    };
    let dist = gleason::expand(&model)?;
    let mac = gleason::macwilliams_check(&dist, args.n / 2);
    let mut value = dist.to_json(args.n / 2, args.n, gleason::table_zero_rows(args.n));
    value["coefficients"] = json!(model.coefficients().iter().map(|b| b.to_string()).collect::<Vec<_>>());
    value["total"] = json!(dist.total().to_string());
    value["macwilliams_check"] = json!(mac);
    emit(format, &value, || {
        format!(
            "{}MacWilliams check: {}\n",
            gleason::render_table(&dist),
            if mac { "pass" } else { "FAIL" }
        )
    })
}

fn check_json(check: &TDesignCheck) -> Value {
    match check {
        TDesignCheck::Uniform { lambda } => json!({ "uniform": true, "lambda": lambda }),
        TDesignCheck::Deviation {
            subset,
            count,
            reference,
        } => json!({ "uniform": false, "subset": subset, "count": count, "reference": reference }),
    }
}

fn cmd_design_check(format: Format, args: &DesignCheckArgs) -> Result<ExitCode> {
    let mut spans = None;
    let mut design: Design = match (&args.design, &args.code) {
        (Some(path), _) => format::parse_design(&fs::read_to_string(path)?, args.points)?,
        (None, Some(path)) => {
            let code = LinearCode::load_generator(path)?;
            let opts = args.budget.options();
            let d = minimum_distance_with(&code, &opts)?;
            let report = low_weight_enumerate_with(&code, d, &opts)?;
            let mwd = min_weight_design(&code, &report)?;
            spans = Some(mwd.spans_code);
            mwd.design
        }
        (None, None) => return Err(Error::InvalidParameter("give --design or --code".into())),
    };
    if let Some(p) = args.derive {
        design = sdcode::analysis::derived_design(&design, p)?;
    }
    let check = verify_t_design(&design, args.t)?;
    let b = design.block_count() as u64;
    let spectrum = if b * b.saturating_sub(1) / 2 <= MAX_PAIRS {
        Some(intersection_spectrum(&design)?)
    } else {
        log::warn!("skipping the intersection spectrum: too many block pairs");
        None
    };
    let rank = two_rank(&design);
    let mut value = json!({
        "v": design.point_count(),
        "k": design.block_size(),
        "b": design.block_count(),
        "t": args.t,
        "design": check_json(&check),
        "two_rank": rank,
        "intersections": spectrum.as_ref().map_or(Value::Null, |s| s.to_json()),
    });
    if let Some(s) = spans {
        value["spans_code"] = json!(s);
    }
    emit(format, &value, || {
        let mut s = format!(
            "v = {}, k = {}, b = {}\n",
            design.point_count(),
            design.block_size(),
            design.block_count()
        );
        match &check {
            TDesignCheck::Uniform { lambda } => {
                let _ = writeln!(s, "{}-design with lambda = {lambda}", args.t);
            }
            TDesignCheck::Deviation {
                subset,
                count,
                reference,
            } => {
                let _ = writeln!(
                    s,
                    "not a {}-design: {subset:?} lies in {count} blocks, not {reference}",
                    args.t
                );
            }
        }
        if let Some(sp) = &spectrum {
            let parts: Vec<String> = sp.counts.iter().map(|(k, c)| format!("{k}: {c}")).collect();
            let _ = writeln!(s, "intersections {{{}}}", parts.join(", "));
        }
        let _ = writeln!(s, "2-rank {rank}");
        if let Some(sp) = spans {
            let _ = writeln!(s, "blocks span the code: {sp}");
        }
        s
    })?;
    Ok(if check.lambda().is_some() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_neighbor(format: Format, args: &NeighborArgs) -> Result<()> {
    let code = LinearCode::load_generator(&args.input)?;
    let opts = args.budget.options();
    let d = match args.d {
        Some(d) => d,
        None => minimum_distance_with(&code, &opts)?,
    };
    let report = low_weight_enumerate_with(&code, d, &opts)?;
    let verdict = neighbor_test(&code, d, &report)?;
    let value = verdict.to_json();
    emit(format, &value, || {
        let mut s = format!(
            "weight-{d} codewords: {}\nrank M = {}, rank [M|1] = {}\nsolvable: {}\n{}\n",
            report.count(d),
            verdict.rank_m,
            verdict.rank_m_aug,
            verdict.solvable,
            verdict.conclusion()
        );
        if let Some(x) = &verdict.even_witness {
            let _ = writeln!(s, "x = {x}");
        }
        s
    })
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Build(kind) => cmd_build(cli.format, kind)?,
        Command::Wdist(args) => cmd_wdist(cli.format, args)?,
        Command::Gleason(args) => cmd_gleason(cli.format, args)?,
        Command::DesignCheck(args) => return cmd_design_check(cli.format, args),
        Command::NeighborTest(args) => cmd_neighbor(cli.format, args)?,
        Command::Verify(args) => {
            let fixture = args.fixture.clone().unwrap_or_else(verify::default_fixture);
            let mut opts = args.budget.options();
            if !args.quick {
                opts.force = true;
            }
            let outcome = verify::run(args.target, &fixture, args.quick, &opts, |claim| {
                if cli.format == Format::Table {
                    let mut out = io::stdout().lock();
                    let _ = writeln!(out, "{claim}");
                }
            })?;
            if cli.format == Format::Json {
                emit(cli.format, &outcome.to_json(), String::new)?;
            }
            if let Some(first) = outcome.first_failure() {
                eprintln!("claim failed: {}", first.name);
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
