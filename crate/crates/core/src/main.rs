use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::parser::ValueSource;
use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use holocode::builder::{build_code, default_seed, HolographicCode};
use holocode::decoder::{Backend, DecodeMode, Decoder, DecoderOptions, Objective, DEFAULT_MAX_TABLE_ENTRIES};
use holocode::distance::{fit_distance_scaling, qubit_distances, sector_distances, DistanceOptions, Sector};
use holocode::sim::{estimate_threshold, plot_points, FailureCurve, SimConfig, Target, Weights};
use holocode::tiling::{build_tiling, Family, RateVariant};
use holocode::{seed, BitVec, Error, SeedCode};

/// Boundary counts and central-qubit distances of the three reference families.
struct Reference {
    label: &'static str,
    family: Family,
    variant: RateVariant,
    seed: &'static str,
    n: [usize; 6],
    d_bit: [usize; 6],
    d_word: Option<[usize; 6]>,
}

const REFERENCE: [Reference; 3] = [
    Reference {
        label: "heptagon",
        family: Family::Heptagon,
        variant: RateVariant::Max,
        seed: "steane",
        n: [7, 42, 203, 973, 4662, 22337],
        d_bit: [3, 9, 19, 45, 99, 221],
        d_word: Some([3, 6, 8, 15, 29, 80]),
    },
    Reference {
        label: "reduced-scf",
        family: Family::Pentagon,
        variant: RateVariant::Reduced,
        seed: "scf",
        n: [5, 25, 75, 255, 745, 2525],
        d_bit: [2, 4, 8, 16, 20, 40],
        d_word: Some([2, 4, 4, 8, 8, 16]),
    },
    Reference {
        label: "happy-zero",
        family: Family::Pentagon,
        variant: RateVariant::Zero,
        seed: "five-qubit",
        n: [5, 25, 95, 355, 1325, 4945],
        d_bit: [3, 9, 19, 41, 91, 321],
        d_word: None,
    },
];

/// Largest radius whose distances finish in minutes on a desktop.
const DESK_RADIUS: usize = 4;

#[derive(Parser, Debug)]
#[command(name = "holocode", version, about = "Holographic stabilizer code workbench")]
struct Cli {
    /// Worker threads for simulation and batch distance runs.
    #[arg(long, global = true, env = "HOLOCODE_THREADS")]
    threads: Option<usize>,
    /// JSON file of subcommand options (a previous run manifest works too).
    /// Flags given on the command line take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Where to write the run manifest.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a code and write its tableau and metadata.
    Build(BuildArgs),
    /// Check seed, tiling and code invariants.
    Verify(VerifyArgs),
    /// Decode one syndrome.
    Decode(DecodeArgs),
    /// Bit and word distances of logical qubits.
    Distance(DistanceArgs),
    /// Fixed-weight Monte Carlo failure rates.
    Simulate(SimulateArgs),
    /// Threshold from failure curves at two or more radii.
    Threshold(ThresholdArgs),
    /// Depolarizing failure curves for plotting.
    Plotdata(PlotdataArgs),
    /// Canned pipelines for the reference tables and figures.
    Reproduce(ReproduceArgs),
}

#[derive(Args, Debug, Serialize, Deserialize)]
struct CodeArgs {
    #[arg(long)]
    family: Family,
    #[arg(long, default_value = "max")]
    variant: RateVariant,
    #[arg(long)]
    radius: usize,
    /// Seed code for logical tiles; the family default when omitted.
    #[arg(long)]
    seed_code: Option<String>,
}

impl CodeArgs {
    fn seed(&self) -> Result<SeedCode, Error> {
        match &self.seed_code {
            Some(name) => seed::by_name(name),
            None => Ok(default_seed(self.family, self.variant)),
        }
    }

    fn build(&self) -> Result<HolographicCode, Error> {
        build_code(self.family, self.radius, self.variant, &self.seed()?)
    }

    fn stem(&self) -> String {
        format!("{}-{}-R{}", self.family, self.variant, self.radius)
    }
}

#[derive(Args, Debug, Serialize, Deserialize)]
struct SolverArgs {
    /// Decode mode; CSS codes default to css, others to symplectic.
    #[arg(long)]
    mode: Option<DecodeMode>,
    #[arg(long, default_value = "hamming")]
    objective: Objective,
    #[arg(long, default_value = "auto")]
    backend: Backend,
    /// Per-problem time limit in seconds; 0 disables it.
    #[arg(long)]
    timeout: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_MAX_TABLE_ENTRIES)]
    max_table_entries: usize,
}

impl SolverArgs {
    fn timeout(&self, default: u64) -> Option<Duration> {
        match self.timeout {
            Some(t) if t <= 0.0 => None,
            Some(t) => Some(Duration::from_secs_f64(t)),
            None => Some(Duration::from_secs(default)),
        }
    }

    fn decoder_options(&self) -> DecoderOptions {
        DecoderOptions {
            mode: self.mode,
            objective: self.objective,
            backend: self.backend,
            timeout: self.timeout(60),
            max_table_entries: self.max_table_entries,
        }
    }

    fn distance_options(&self) -> DistanceOptions {
        DistanceOptions {
            backend: self.backend,
            timeout: self.timeout(3600),
            max_table_entries: self.max_table_entries,
        }
    }
}

#[derive(Args, Debug, Serialize, Deserialize)]
struct BuildArgs {
    #[command(flatten)]
    #[serde(flatten)]
    code: CodeArgs,
    /// Output stem; `.tableau` and `.json` are appended.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also export the tile graph as JSON.
    #[arg(long)]
    tiling_json: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum VerifyWhat {
    Seed,
    Tiling,
    Code,
    All,
}

#[derive(Args, Debug, Serialize, Deserialize)]
struct VerifyArgs {
    what: VerifyWhat,
    /// Seed name for `verify seed`; every catalog seed when omitted.
    name: Option<String>,
    #[arg(long)]
    family: Option<Family>,
    #[arg(long)]
    variant: Option<RateVariant>,
    #[arg(long)]
    radius: Option<usize>,
    #[arg(long)]
    seed_code: Option<String>,
    /// Verify a saved code instead of building one.
    #[arg(long)]
    code: Option<PathBuf>,
    /// JSON report path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize, Deserialize)]
struct DecodeArgs {
    /// Stem of a saved code.
    #[arg(long)]
    code: PathBuf,
    /// Syndrome bits as a binary string or `0x`-prefixed hex. In CSS mode the
    /// X-check bits come first.
    #[arg(long)]
    syndrome: String,
    #[command(flatten)]
    #[serde(flatten)]
    solver: SolverArgs,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug, Serialize, Deserialize)]
struct DistanceArgs {
    #[command(flatten)]
    #[serde(flatten)]
    code: CodeArgs,
    /// `central`, `all` or a logical index.
    #[arg(long, default_value = "central")]
    qubit: String,
    /// Restrict to one sector; CSS codes otherwise report the smaller of X and Z.
    #[arg(long)]
    sector: Option<Sector>,
    #[command(flatten)]
    #[serde(flatten)]
    solver: SolverArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize, Deserialize)]
struct SimulateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    code: CodeArgs,
    /// `all`, `auto` or a comma-separated list.
    #[arg(long, default_value = "auto")]
    weights: String,
    /// Trials per weight; 10000 up to radius 2 and 1000 beyond when omitted.
    #[arg(long)]
    trials_per_weight: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `central` or a logical index.
    #[arg(long, default_value = "central")]
    target: String,
    #[arg(long, default_value = "results.csv")]
    out: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    solver: SolverArgs,
}

#[derive(Args, Debug, Serialize, Deserialize)]
struct ThresholdArgs {
    /// Result files from `simulate`.
    #[arg(num_args = 2.., required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize, Deserialize)]
struct PlotdataArgs {
    #[arg(num_args = 1.., required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long, default_value_t = 0.001)]
    p_min: f64,
    #[arg(long, default_value_t = 0.2)]
    p_max: f64,
    #[arg(long, default_value_t = 200)]
    points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Recipe {
    Table3,
    Fig3a,
    Fig3b,
    Fig3c,
    Fig5,
}

#[derive(Args, Debug, Serialize, Deserialize)]
struct ReproduceArgs {
    id: Recipe,
    /// Largest radius for distance recipes.
    #[arg(long)]
    max_radius: Option<usize>,
    /// Radii for threshold recipes.
    #[arg(long, value_delimiter = ',')]
    radii: Option<Vec<usize>>,
    /// Trials per weight for threshold recipes.
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    solver: SolverArgs,
}

/// What a finished command leaves behind.
struct Outcome {
    outputs: Vec<PathBuf>,
    exit: u8,
}

impl Outcome {
    fn ok(outputs: Vec<PathBuf>) -> Self {
        Self { outputs, exit: 0 }
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    args: Value,
    threads: usize,
    outputs: Vec<String>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Invariant(_)
        | Error::NotIsometry(_)
        | Error::NoRightInverse { .. }
        | Error::ClosedLeg(_)
        | Error::Inconsistent => 2,
        Error::SolverLimit(_) => 3,
        _ => 4,
    }
}

fn main() -> ExitCode {
    let argv: Vec<OsString> = std::env::args_os().collect();
    let argv = match apply_config(&argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let matches = match Cli::command().try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 4 } else { 0 });
        }
    };
    match run(&matches) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(matches: &ArgMatches) -> Result<u8, Error> {
    let cli = Cli::from_arg_matches(matches).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    let name = matches.subcommand_name().expect("subcommand is required");
    let verbose = cli.verbose > 0;
    let (args, outcome) = match &cli.command {
        Command::Build(a) => (serde_json::to_value(a)?, cmd_build(a)?),
        Command::Verify(a) => (serde_json::to_value(a)?, cmd_verify(a)?),
        Command::Decode(a) => (serde_json::to_value(a)?, cmd_decode(a)?),
        Command::Distance(a) => (serde_json::to_value(a)?, cmd_distance(a, verbose)?),
        Command::Simulate(a) => (serde_json::to_value(a)?, cmd_simulate(a, verbose)?),
        Command::Threshold(a) => (serde_json::to_value(a)?, cmd_threshold(a)?),
        Command::Plotdata(a) => (serde_json::to_value(a)?, cmd_plotdata(a)?),
        Command::Reproduce(a) => (serde_json::to_value(a)?, cmd_reproduce(a, verbose)?),
    };
    let manifest_path = cli.manifest.clone().unwrap_or_else(|| {
        outcome
            .outputs
            .first()
            .and_then(|p| p.parent())
            .unwrap_or(Path::new(""))
            .join("manifest.json")
    });
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: name,
        args,
        threads: rayon::current_num_threads(),
        outputs: outcome.outputs.iter().map(|p| p.display().to_string()).collect(),
    };
    fs::write(&manifest_path, serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(outcome.exit)
}

/// Reads `{"command": .., "args": {..}}` or a bare object of options.
fn read_config(path: &Path) -> Result<(Option<String>, Map<String, Value>), Error> {
    let value: Value = serde_json::from_str(&fs::read_to_string(path)?)?;
    let Value::Object(mut obj) = value else {
        return Err(Error::InvalidArgument("config must be a JSON object".into()));
    };
    match obj.remove("args") {
        Some(Value::Object(args)) => {
            let cmd = obj.get("command").and_then(Value::as_str).map(str::to_string);
            Ok((cmd, args))
        }
        Some(_) => Err(Error::InvalidArgument("config 'args' must be an object".into())),
        None => Ok((None, obj)),
    }
}

fn config_tokens(key: &str, v: &Value) -> Result<Vec<OsString>, Error> {
    let scalar = |v: &Value| match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        _ => Err(Error::InvalidArgument(format!("unsupported value for config option '{key}'"))),
    };
    match v {
        Value::Null => Ok(Vec::new()),
        Value::Array(items) => items.iter().map(|i| scalar(i).map(OsString::from)).collect(),
        other => Ok(vec![scalar(other)?.into()]),
    }
}

/// Rewrites the command line so options missing from it are taken from the
/// `--config` file. Flags given on the command line win.
fn apply_config(argv: &[OsString]) -> Result<Vec<OsString>, Error> {
    let cmd = Cli::command();
    let Ok(loose) = cmd.clone().ignore_errors(true).try_get_matches_from(argv) else {
        return Ok(argv.to_vec());
    };
    let Some(path) = loose.get_one::<PathBuf>("config") else {
        return Ok(argv.to_vec());
    };
    let (config_cmd, config) = read_config(path)?;
    let Some((name, sub)) = loose.subcommand() else {
        return Ok(argv.to_vec());
    };
    if let Some(c) = config_cmd.filter(|c| c != name) {
        return Err(Error::InvalidArgument(format!("config is for '{c}', not '{name}'")));
    }
    let sub_cmd = cmd.find_subcommand(name).expect("parsed subcommand exists");
    const GLOBALS: [&str; 4] = ["threads", "config", "manifest", "verbose"];
    let own: Vec<&clap::Arg> = sub_cmd
        .get_arguments()
        .filter(|a| !GLOBALS.contains(&a.get_id().as_str()))
        .collect();
    if let Some(key) = config.keys().find(|k| !own.iter().any(|a| a.get_id() == k.as_str())) {
        return Err(Error::InvalidArgument(format!("unknown config option '{key}'")));
    }

    let mut out = vec![argv[0].clone()];
    for id in ["threads", "config", "manifest"] {
        if loose.value_source(id) == Some(ValueSource::CommandLine) {
            for raw in loose.get_raw(id).into_iter().flatten() {
                out.push(format!("--{id}").into());
                out.push(raw.to_os_string());
            }
        }
    }
    out.extend(std::iter::repeat_n(OsString::from("-v"), loose.get_count("verbose").into()));
    out.push(name.into());
    let mut positionals = Vec::new();
    for arg in own {
        let id = arg.get_id().as_str();
        let given = sub.value_source(id) == Some(ValueSource::CommandLine);
        let long = format!("--{}", arg.get_long().unwrap_or(id));
        if !arg.get_action().takes_values() {
            let on = if given {
                sub.get_flag(id)
            } else {
                config.get(id).and_then(Value::as_bool).unwrap_or(false)
            };
            if on {
                out.push(long.into());
            }
            continue;
        }
        let values: Vec<OsString> = if given {
            sub.get_raw(id).into_iter().flatten().map(|r| r.to_os_string()).collect()
        } else if let Some(v) = config.get(id) {
            config_tokens(id, v)?
        } else {
            continue;
        };
        if arg.is_positional() {
            positionals.push((arg.get_index().unwrap_or(0), values));
        } else {
            for v in values {
                let mut token = OsString::from(format!("{long}="));
                token.push(v);
                out.push(token);
            }
        }
    }
    positionals.sort_by_key(|p| p.0);
    out.extend(positionals.into_iter().flat_map(|p| p.1));
    Ok(out)
}

fn write_output(path: Option<&Path>, text: &str) -> Result<Vec<PathBuf>, Error> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(p, text)?;
            Ok(vec![p.to_path_buf()])
        }
        None => {
            print!("{text}");
            Ok(Vec::new())
        }
    }
}

fn cmd_build(args: &BuildArgs) -> Result<Outcome, Error> {
    let code = args.code.build()?;
    let stem = args.out.clone().unwrap_or_else(|| PathBuf::from(args.code.stem()));
    if let Some(dir) = stem.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    code.save(&stem)?;
    println!(
        "n={} k={} rate={:.6} css={}",
        code.n,
        code.k(),
        code.rate(),
        code.css
    );
    let mut outputs = vec![stem.with_extension("tableau"), stem.with_extension("json")];
    if let Some(path) = &args.tiling_json {
        let graph = &code.construction.as_ref().expect("built codes keep their tiling").graph;
        outputs.extend(write_output(Some(path), &(graph.to_json()? + "\n"))?);
    }
    Ok(Outcome::ok(outputs))
}

#[derive(Serialize)]
struct Check {
    name: String,
    pass: bool,
    detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

fn seed_checks(name: &str) -> Result<Vec<Check>, Error> {
    let s = seed::by_name(name)?;
    let mut checks = vec![match s.validate() {
        Ok(()) => Check::new(format!("seed {name} tableau"), true, "valid"),
        Err(e) => Check::new(format!("seed {name} tableau"), false, e.to_string()),
    }];
    let block = s.is_block_perfect();
    let perfect = s.is_perfect();
    let (want_block, want_perfect) = match s.name.as_str() {
        "steane" | "scf" => (true, false),
        _ => (true, true),
    };
    checks.push(Check::new(
        format!("seed {name} block-perfect"),
        block == want_block,
        block.to_string(),
    ));
    checks.push(Check::new(
        format!("seed {name} perfect"),
        perfect == want_perfect,
        perfect.to_string(),
    ));
    Ok(checks)
}

fn tiling_checks() -> Result<Vec<Check>, Error> {
    let mut checks = Vec::new();
    let mut matched = 0;
    for r in &REFERENCE {
        for radius in 1..=6 {
            let graph = build_tiling(r.family, radius, r.variant)?;
            let n = graph.counts().n;
            let want = r.n[radius - 1];
            matched += usize::from(n == want);
            let structure = graph.check_structure();
            checks.push(Check::new(
                format!("tiling {} R={radius}", r.label),
                n == want && structure.is_ok(),
                match structure {
                    Ok(()) => format!("n={n} expected {want}"),
                    Err(e) => format!("n={n} expected {want}; {e}"),
                },
            ));
        }
    }
    checks.push(Check::new(
        "tiling counts",
        matched == 18,
        format!("{matched}/18 match"),
    ));
    Ok(checks)
}

fn code_checks(code: &HolographicCode, label: &str) -> Vec<Check> {
    let mut checks = vec![match code.check_invariants() {
        Ok(()) => Check::new(
            format!("code {label} commutation and independence"),
            true,
            format!("n={} k={} css={}", code.n, code.k(), code.css),
        ),
        Err(e) => Check::new(format!("code {label} commutation and independence"), false, e.to_string()),
    }];
    checks.push(Check::new(
        format!("code {label} central logical qubit"),
        code.central_qubit().is_some() || code.k() == 0,
        code.central_qubit().map_or("none".into(), |q| format!("logical {q}")),
    ));
    if let Some(meta) = &code.meta {
        if let Some(r) = REFERENCE
            .iter()
            .find(|r| r.family == meta.family && r.variant == meta.variant && r.seed == meta.seed)
        {
            if let Some(&want) = r.n.get(meta.radius.wrapping_sub(1)) {
                checks.push(Check::new(
                    format!("code {label} qubit count"),
                    code.n == want,
                    format!("n={} expected {want}", code.n),
                ));
            }
        }
    }
    let decoder = Decoder::new(code, DecoderOptions::default());
    checks.push(match decoder {
        Ok(d) => {
            let zero = d.syndrome(&holocode::PauliVector::identity(code.n));
            let trivial = zero
                .and_then(|s| d.decode(&s))
                .map(|c| c.correction.is_identity())
                .unwrap_or(false);
            Check::new(
                format!("code {label} decoder"),
                trivial,
                "inverse syndrome former exists; zero syndrome decodes to identity",
            )
        }
        Err(e) => Check::new(format!("code {label} decoder"), false, e.to_string()),
    });
    checks
}

fn cmd_verify(args: &VerifyArgs) -> Result<Outcome, Error> {
    let mut checks = Vec::new();
    let all = args.what == VerifyWhat::All;
    if args.what == VerifyWhat::Seed || all {
        match &args.name {
            Some(name) if !all => checks.extend(seed_checks(name)?),
            _ => {
                for name in ["steane", "scf", "five-qubit"] {
                    checks.extend(seed_checks(name)?);
                }
            }
        }
    }
    if args.what == VerifyWhat::Tiling || all {
        checks.extend(tiling_checks()?);
    }
    if args.what == VerifyWhat::Code || all {
        if let Some(stem) = &args.code {
            let code = HolographicCode::load(stem)?;
            checks.extend(code_checks(&code, &stem.display().to_string()));
        } else if let (Some(family), Some(radius)) = (args.family, args.radius) {
            let code_args = CodeArgs {
                family,
                variant: args.variant.unwrap_or(RateVariant::Max),
                radius,
                seed_code: args.seed_code.clone(),
            };
            let code = code_args.build()?;
            checks.extend(code_checks(&code, &code_args.stem()));
        } else if all {
            for r in &REFERENCE {
                let code = build_code(r.family, 2, r.variant, &seed::by_name(r.seed)?)?;
                checks.extend(code_checks(&code, &format!("{} R=2", r.label)));
            }
        } else {
            return Err(Error::InvalidArgument(
                "verify code needs --code or --family and --radius".into(),
            ));
        }
    }
    for c in &checks {
        let tag = if c.pass { "PASS" } else { "FAIL" };
        println!("{tag} {}: {}", c.name, c.detail);
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    println!("{} checks, {failed} failed", checks.len());
    let outputs = match &args.out {
        Some(p) => write_output(Some(p), &(serde_json::to_string_pretty(&checks)? + "\n"))?,
        None => Vec::new(),
    };
    Ok(Outcome {
        outputs,
        exit: if failed == 0 { 0 } else { 2 },
    })
}

/// Parses a syndrome of exactly `len` bits from binary or `0x` hex.
fn parse_syndrome(s: &str, len: usize) -> Result<BitVec, Error> {
    let s = s.trim();
    let binary = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => {
            let mut bits = String::with_capacity(4 * hex.len());
            for c in hex.chars() {
                let d = c
                    .to_digit(16)
                    .ok_or_else(|| Error::Parse(format!("bad hex digit '{c}'")))?;
                bits.push_str(&format!("{d:04b}"));
            }
            if bits.len() < len {
                bits = "0".repeat(len - bits.len()) + &bits;
            }
            let extra = bits.len() - len;
            if bits[..extra].contains('1') {
                return Err(Error::Parse(format!("syndrome has more than {len} bits")));
            }
            bits[extra..].to_string()
        }
        None => s.to_string(),
    };
    if binary.len() != len {
        return Err(Error::Dimension(format!(
            "syndrome has {} bits, expected {len}",
            binary.len()
        )));
    }
    BitVec::parse_binary(&binary)
}

fn cmd_decode(args: &DecodeArgs) -> Result<Outcome, Error> {
    let code = HolographicCode::load(&args.code)?;
    let decoder = Decoder::new(&code, args.solver.decoder_options())?;
    let syndrome_len = code.stabilizers.len();
    let bits = parse_syndrome(&args.syndrome, syndrome_len)?;
    let syndrome = decoder.syndrome_from_bits(&bits)?;
    let decoded = decoder.decode(&syndrome)?;
    let pure = decoder.pure_error(&syndrome)?;
    let (lambda, mu) = decoder.decompose(&decoded.correction.mul(&pure))?;
    let c = &decoded.correction;
    if args.json {
        let out = json!({
            "correction": c.to_string(),
            "weight": c.weight(),
            "sector_weight": c.sector_weight(),
            "lambda": lambda.to_binary_string(),
            "mu": mu.to_binary_string(),
            "certified": decoded.certified,
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        println!("correction {c}");
        println!("weight {} sector-weight {}", c.weight(), c.sector_weight());
        println!("lambda {}", lambda.to_binary_string());
        println!("mu {}", mu.to_binary_string());
        println!("certified {}", decoded.certified);
    }
    Ok(Outcome {
        outputs: Vec::new(),
        exit: if decoded.certified { 0 } else { 3 },
    })
}

#[derive(Clone, Debug, Serialize)]
struct DistanceRow {
    family: Family,
    variant: RateVariant,
    seed: String,
    #[serde(rename = "R")]
    radius: usize,
    n: usize,
    k: usize,
    qubit: usize,
    layer: usize,
    sector: Sector,
    d_bit: usize,
    d_word: usize,
    certified: bool,
}

fn distance_rows(code: &HolographicCode, qubits: &[usize], sector: Option<Sector>, options: &DistanceOptions) -> Result<Vec<DistanceRow>, Error> {
    let meta = code.meta.clone().expect("built codes carry metadata");
    qubits
        .par_iter()
        .map(|&q| {
            let d = match sector {
                Some(s) => sector_distances(code, q, s, options)?,
                None => qubit_distances(code, q, options)?,
            };
            Ok(DistanceRow {
                family: meta.family,
                variant: meta.variant,
                seed: meta.seed.clone(),
                radius: meta.radius,
                n: code.n,
                k: code.k(),
                qubit: q,
                layer: d.layer,
                sector: d.sector,
                d_bit: d.bit_distance.value,
                d_word: d.word_distance.value,
                certified: d.bit_distance.certified && d.word_distance.certified,
            })
        })
        .collect()
}

fn cmd_distance(args: &DistanceArgs, verbose: bool) -> Result<Outcome, Error> {
    let code = args.code.build()?;
    let qubits: Vec<usize> = match args.qubit.as_str() {
        "all" => (0..code.k()).collect(),
        other => vec![other.parse::<Target>()?.resolve(&code)?],
    };
    if verbose {
        eprintln!("n={} k={}: {} qubit(s)", code.n, code.k(), qubits.len());
    }
    let rows = distance_rows(&code, &qubits, args.sector, &args.solver.distance_options())?;
    let certified = rows.iter().all(|r| r.certified);
    let outputs = write_output(args.out.as_deref(), &(serde_json::to_string_pretty(&rows)? + "\n"))?;
    Ok(Outcome {
        outputs,
        exit: if certified { 0 } else { 3 },
    })
}

fn default_trials(radius: usize) -> u64 {
    if radius <= 2 {
        10_000
    } else {
        1_000
    }
}

fn simulate_curve(code_args: &CodeArgs, config: &SimConfig, target: Target, solver: &SolverArgs, verbose: bool) -> Result<FailureCurve, Error> {
    let code = code_args.build()?;
    let target = target.resolve(&code)?;
    let decoder = Decoder::new(&code, solver.decoder_options())?;
    if verbose {
        eprintln!(
            "{}: n={} k={}, {} trials per weight",
            code_args.stem(),
            code.n,
            code.k(),
            config.trials
        );
    }
    let curve = FailureCurve::simulate(&code, &decoder, target, config)?;
    for (a, b) in curve.monotonicity_flags() {
        eprintln!(
            "warning: {}: failure rate drops by more than 3 sigma from weight {a} to {b}",
            code_args.stem()
        );
    }
    Ok(curve)
}

fn cmd_simulate(args: &SimulateArgs, verbose: bool) -> Result<Outcome, Error> {
    let config = SimConfig {
        weights: args.weights.parse::<Weights>()?,
        trials: args.trials_per_weight.unwrap_or(default_trials(args.code.radius)),
        seed: args.seed,
        ..SimConfig::default()
    };
    let curve = simulate_curve(&args.code, &config, args.target.parse()?, &args.solver, verbose)?;
    let mut buf = Vec::new();
    FailureCurve::write_csv(std::slice::from_ref(&curve), &mut buf)?;
    let outputs = write_output(Some(&args.out), &String::from_utf8(buf).expect("csv is utf-8"))?;
    let timeouts: u64 = curve.records.iter().map(|r| r.timeouts).sum();
    if timeouts > 0 {
        eprintln!("warning: {timeouts} decodes timed out and were counted as failures");
    }
    Ok(Outcome::ok(outputs))
}

fn read_curves(inputs: &[PathBuf]) -> Result<Vec<FailureCurve>, Error> {
    let mut curves = Vec::new();
    for path in inputs {
        curves.extend(FailureCurve::read_csv(fs::File::open(path)?)?);
    }
    Ok(curves)
}

fn cmd_threshold(args: &ThresholdArgs) -> Result<Outcome, Error> {
    let curves = read_curves(&args.inputs)?;
    let threshold = estimate_threshold(&curves)?;
    let outputs = write_output(args.out.as_deref(), &(serde_json::to_string_pretty(&threshold)? + "\n"))?;
    Ok(Outcome::ok(outputs))
}

fn rate_grid(p_min: f64, p_max: f64, points: usize) -> Result<Vec<f64>, Error> {
    if !(0.0..=1.0).contains(&p_min) || !(p_min..=1.0).contains(&p_max) || points < 2 {
        return Err(Error::InvalidArgument(
            "need 0 <= p-min <= p-max <= 1 and at least 2 points".into(),
        ));
    }
    Ok((0..points)
        .map(|i| p_min + (p_max - p_min) * i as f64 / (points - 1) as f64)
        .collect())
}

fn plot_csv(curves: &[FailureCurve], rates: &[f64]) -> Result<String, Error> {
    let mut out = csv::Writer::from_writer(Vec::new());
    out.write_record(["family", "variant", "R", "target", "p", "p_failure", "sigma"])?;
    for c in curves {
        for pt in plot_points(c, rates)? {
            out.write_record([
                c.family.name().to_string(),
                c.variant.name().to_string(),
                c.radius.to_string(),
                c.target.to_string(),
                pt.p.to_string(),
                pt.p_failure.to_string(),
                pt.sigma.to_string(),
            ])?;
        }
    }
    let bytes = out.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

fn cmd_plotdata(args: &PlotdataArgs) -> Result<Outcome, Error> {
    let curves = read_curves(&args.inputs)?;
    let rates = rate_grid(args.p_min, args.p_max, args.points)?;
    let outputs = write_output(args.out.as_deref(), &plot_csv(&curves, &rates)?)?;
    Ok(Outcome::ok(outputs))
}

fn cmd_reproduce(args: &ReproduceArgs, verbose: bool) -> Result<Outcome, Error> {
    let name = args.id.to_possible_value().expect("no skipped variants").get_name().to_string();
    let dir = args.out_dir.clone().unwrap_or_else(|| PathBuf::from(format!("reproduce-{name}")));
    fs::create_dir_all(&dir)?;
    match args.id {
        Recipe::Table3 => reproduce_table3(args, &dir, verbose),
        Recipe::Fig5 => reproduce_fig5(args, &dir, verbose),
        Recipe::Fig3a => reproduce_fig3(args, &dir, &REFERENCE[0], verbose),
        Recipe::Fig3b => reproduce_fig3(args, &dir, &REFERENCE[1], verbose),
        Recipe::Fig3c => reproduce_fig3(args, &dir, &REFERENCE[2], verbose),
    }
}

/// Central-qubit distances, or `None` with a warning when out of reach.
fn central_distance(r: &Reference, radius: usize, options: &DistanceOptions, verbose: bool) -> Result<Option<DistanceRow>, Error> {
    if radius > DESK_RADIUS {
        eprintln!("warning: {} R={radius} is above desk scale; attempting anyway", r.label);
    }
    let code = build_code(r.family, radius, r.variant, &seed::by_name(r.seed)?)?;
    let q = code.central_qubit().expect("reference codes have a central qubit");
    if verbose {
        eprintln!("{} R={radius}: n={}", r.label, code.n);
    }
    match distance_rows(&code, &[q], None, options) {
        Ok(mut rows) => Ok(rows.pop()),
        Err(Error::SolverLimit(msg)) => {
            eprintln!("warning: {} R={radius} skipped: {msg}", r.label);
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

#[derive(Serialize)]
struct Table3Row {
    column: &'static str,
    #[serde(rename = "R")]
    radius: usize,
    n: usize,
    n_reference: usize,
    d_bit: Option<usize>,
    d_word: Option<usize>,
    certified: Option<bool>,
    d_bit_reference: usize,
    d_word_reference: Option<usize>,
}

fn reproduce_table3(args: &ReproduceArgs, dir: &Path, verbose: bool) -> Result<Outcome, Error> {
    let max_radius = args.max_radius.unwrap_or(3);
    let options = args.solver.distance_options();
    let mut rows = Vec::new();
    let mut fits = Map::new();
    for r in &REFERENCE {
        let mut points = (Vec::new(), Vec::new());
        for radius in 1..=6 {
            let n = build_tiling(r.family, radius, r.variant)?.counts().n;
            let d = if radius <= max_radius {
                central_distance(r, radius, &options, verbose)?
            } else {
                None
            };
            if let Some(d) = d.as_ref().filter(|d| d.certified) {
                points.0.push((n as f64, d.d_bit as f64));
                points.1.push((n as f64, d.d_word as f64));
            }
            rows.push(Table3Row {
                column: r.label,
                radius,
                n,
                n_reference: r.n[radius - 1],
                d_bit: d.as_ref().map(|d| d.d_bit),
                d_word: d.as_ref().map(|d| d.d_word),
                certified: d.as_ref().map(|d| d.certified),
                d_bit_reference: r.d_bit[radius - 1],
                d_word_reference: r.d_word.map(|w| w[radius - 1]),
            });
        }
        if points.0.len() >= 3 {
            fits.insert(
                r.label.to_string(),
                json!({
                    "bit": fit_distance_scaling(&points.0)?,
                    "word": fit_distance_scaling(&points.1)?,
                }),
            );
        }
    }
    let mut csv_out = csv::Writer::from_writer(Vec::new());
    for row in &rows {
        csv_out.serialize(row)?;
    }
    let csv_text = String::from_utf8(csv_out.into_inner().map_err(|e| Error::Io(e.into_error()))?)
        .expect("csv is utf-8");
    let mut outputs = write_output(Some(&dir.join("table3.csv")), &csv_text)?;
    let report = json!({ "rows": rows, "fits": fits });
    outputs.extend(write_output(
        Some(&dir.join("table3.json")),
        &(serde_json::to_string_pretty(&report)? + "\n"),
    )?);
    for row in rows.iter().filter(|r| r.d_bit.is_some()) {
        println!(
            "{:<12} R={} n={:<6} d_bit={:<4} d_word={:<4} reference {}/{}",
            row.column,
            row.radius,
            row.n,
            row.d_bit.unwrap(),
            row.d_word.unwrap(),
            row.d_bit_reference,
            row.d_word_reference.map_or("-".into(), |w| w.to_string()),
        );
    }
    Ok(Outcome::ok(outputs))
}

fn reproduce_fig5(args: &ReproduceArgs, dir: &Path, verbose: bool) -> Result<Outcome, Error> {
    let max_radius = args.max_radius.unwrap_or(4);
    let options = args.solver.distance_options();
    let r = &REFERENCE[0];
    let mut rows = Vec::new();
    for radius in 1..=max_radius {
        if let Some(d) = central_distance(r, radius, &options, verbose)? {
            rows.push(d);
        }
    }
    let certified: Vec<&DistanceRow> = rows.iter().filter(|d| d.certified).collect();
    let bit: Vec<(f64, f64)> = certified.iter().map(|d| (d.n as f64, d.d_bit as f64)).collect();
    let word: Vec<(f64, f64)> = certified.iter().map(|d| (d.n as f64, d.d_word as f64)).collect();
    let mut csv_out = csv::Writer::from_writer(Vec::new());
    for row in &rows {
        csv_out.serialize(row)?;
    }
    let csv_text = String::from_utf8(csv_out.into_inner().map_err(|e| Error::Io(e.into_error()))?)
        .expect("csv is utf-8");
    let mut outputs = write_output(Some(&dir.join("fig5.csv")), &csv_text)?;
    let fits = if bit.len() >= 3 {
        let (b, w) = (fit_distance_scaling(&bit)?, fit_distance_scaling(&word)?);
        println!("d_bit ~ n^{:.3} ± {:.3}", b.exponent, b.ci95);
        println!("d_word ~ n^{:.3} ± {:.3}", w.exponent, w.ci95);
        json!({ "bit": b, "word": w })
    } else {
        eprintln!("warning: fewer than 3 certified points; no fit");
        Value::Null
    };
    let report = json!({ "points": rows, "fits": fits });
    outputs.extend(write_output(
        Some(&dir.join("fig5.json")),
        &(serde_json::to_string_pretty(&report)? + "\n"),
    )?);
    Ok(Outcome::ok(outputs))
}

fn reproduce_fig3(args: &ReproduceArgs, dir: &Path, r: &Reference, verbose: bool) -> Result<Outcome, Error> {
    let radii = args.radii.clone().unwrap_or_else(|| vec![2, 3]);
    let mut curves = Vec::new();
    for &radius in &radii {
        if radius > 3 {
            eprintln!("warning: {} R={radius} is above desk scale for simulation", r.label);
        }
        let code_args = CodeArgs {
            family: r.family,
            variant: r.variant,
            radius,
            seed_code: Some(r.seed.to_string()),
        };
        let config = SimConfig {
            trials: args.trials.unwrap_or(2000),
            seed: args.seed,
            ..SimConfig::default()
        };
        curves.push(simulate_curve(&code_args, &config, Target::Central, &args.solver, verbose)?);
    }
    let mut buf = Vec::new();
    FailureCurve::write_csv(&curves, &mut buf)?;
    let mut outputs = write_output(Some(&dir.join("curves.csv")), &String::from_utf8(buf).expect("csv is utf-8"))?;
    let rates = rate_grid(0.001, 0.2, 200)?;
    outputs.extend(write_output(Some(&dir.join("plotdata.csv")), &plot_csv(&curves, &rates)?)?);
    let threshold = match estimate_threshold(&curves) {
        Ok(t) => {
            println!(
                "threshold {:.4} bracket [{:.4}, {:.4}]",
                t.p_th, t.bracket.0, t.bracket.1
            );
            serde_json::to_value(&t)?
        }
        Err(e) => {
            eprintln!("warning: {e}");
            json!({ "error": e.to_string() })
        }
    };
    outputs.extend(write_output(
        Some(&dir.join("threshold.json")),
        &(serde_json::to_string_pretty(&threshold)? + "\n"),
    )?);
    Ok(Outcome::ok(outputs))
}
