//! Command-line front end for `eiscong`.
//!
//! [`cmd_dispatch`] runs one command and returns the exit code together with
//! the bytes destined for standard output. Exit code 0 means success, 1 a
//! domain error (reported as `{"error": code, "detail": ...}`), 2 a usage error.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eiscong::bernoulli::{bernoulli_char, carlitz_certificate, CarlitzCase};
use eiscong::criteria::{
    decide_level_raise_at, decide_strong_modularity_at, eta_lift, scan_level_raise_at, serre_type, Decision,
    SerreType,
};
use eiscong::dirichlet::primitive_characters;
use eiscong::eisenstein::{cusp_enumerate_with_classes, CuspMatrix, EisensteinSeries, QExpansion, ReducedQExpansion, Variant};
use eiscong::oracle::{
    default_battery, l_value_closed_form, oracle_gauss_sum, oracle_l_value, run_cusp_battery, BatteryReport,
    OracleConfig,
};
use eiscong::reduction::{all_places, place_above, reduce_at, FiniteFieldElement, Place};
use eiscong::{CyclotomicNumber, DirichletCharacter, Error};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

mod text;

/// Environment variable capping the worker pool size.
pub const THREADS_VAR: &str = "EISCONG_THREADS";

#[derive(Parser, Debug)]
#[command(name = "eiscong", version, about = "Eisenstein series congruences modulo primes")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generalized Bernoulli number B_{k, chi}.
    Bernoulli(BernoulliArgs),
    /// Gauss sum of a primitive character.
    Gauss(GaussArgs),
    /// Eisenstein series computations.
    #[command(subcommand)]
    Eis(EisCommand),
    /// Decide strong modularity or level raising at one prime.
    #[command(subcommand)]
    Decide(DecideCommand),
    /// Search for level-raising primes.
    #[command(subcommand)]
    Scan(ScanCommand),
    /// Compare exact formulas against floating-point oracles.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Subcommand, Debug)]
enum EisCommand {
    /// q-expansion of E_k^{chi1, chi2}.
    Qexp(QexpArgs),
    /// Constant terms at cusps.
    CuspConstant(CuspArgs),
    /// q-expansion of the level-raising combination F1 or F2.
    Combo(ComboArgs),
}

#[derive(Subcommand, Debug)]
enum DecideCommand {
    StrongModularity(DecideArgs),
    LevelRaise(LevelRaiseArgs),
}

#[derive(Subcommand, Debug)]
enum ScanCommand {
    LevelRaise(ScanArgs),
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    /// Exact cusp constants against the one-dimensional lattice oracle.
    CuspConstants(BatteryArgs),
    /// Gauss sums and L-values against direct summation.
    Oracles(OraclesArgs),
}

#[derive(Args, Debug)]
struct CharArg {
    /// Character: `trivial`, `quad:Q`, `gen:Q:E1,E2,..:N`, inline JSON, or a JSON file path.
    #[arg(long = "char", required_unless_present = "char_file", conflicts_with = "char_file")]
    spec: Option<String>,
    /// JSON character file.
    #[arg(long)]
    char_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PairArgs {
    /// First character (shorthand, inline JSON, or file path).
    #[arg(long, required_unless_present = "char1_file", conflicts_with = "char1_file")]
    char1: Option<String>,
    #[arg(long)]
    char1_file: Option<PathBuf>,
    /// Second character (shorthand, inline JSON, or file path).
    #[arg(long, required_unless_present = "char2_file", conflicts_with = "char2_file")]
    char2: Option<String>,
    #[arg(long)]
    char2_file: Option<PathBuf>,
    /// Weight.
    #[arg(long)]
    k: u32,
}

#[derive(Args, Debug)]
struct BernoulliArgs {
    #[arg(long)]
    k: u32,
    #[command(flatten)]
    chi: CharArg,
    /// Also reduce the value at the first place above this prime.
    #[arg(long)]
    ell: Option<u64>,
    /// Include the Carlitz integrality multiplier.
    #[arg(long)]
    carlitz: bool,
}

#[derive(Args, Debug)]
struct GaussArgs {
    #[command(flatten)]
    chi: CharArg,
}

#[derive(Args, Debug)]
struct QexpArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// Number of coefficients beyond a_0.
    #[arg(long, default_value_t = 20)]
    precision: usize,
    /// Also reduce the coefficients at the first place above this prime.
    #[arg(long)]
    ell: Option<u64>,
}

#[derive(Args, Debug)]
struct CuspArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// Matrix `u,beta,v,delta` in SL2(Z). Without it every cusp of level N*M is listed.
    #[arg(long, conflicts_with = "bottom", allow_hyphen_values = true)]
    gamma: Option<String>,
    /// Bottom row `v,delta`, completed to a matrix in SL2(Z).
    #[arg(long, allow_hyphen_values = true)]
    bottom: Option<String>,
    #[arg(long, default_value_t = 1)]
    m: u64,
    #[arg(long, value_enum, default_value_t = VariantArg::E)]
    variant: VariantArg,
    /// Also reduce the constants at the first place above this prime.
    #[arg(long)]
    ell: Option<u64>,
}

#[derive(Args, Debug)]
struct ComboArgs {
    #[command(flatten)]
    pair: PairArgs,
    #[arg(long)]
    m: u64,
    #[arg(long, value_enum)]
    variant: VariantArg,
    #[arg(long, default_value_t = 20)]
    precision: usize,
    #[arg(long)]
    ell: Option<u64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    #[value(alias = "E")]
    E,
    #[value(alias = "F1")]
    F1,
    #[value(alias = "F2")]
    F2,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::E => Variant::E,
            VariantArg::F1 => Variant::F1,
            VariantArg::F2 => Variant::F2,
        }
    }
}

#[derive(Args, Debug)]
struct DecideArgs {
    #[command(flatten)]
    pair: PairArgs,
    #[arg(long)]
    ell: u64,
    /// Place as JSON `{"ell", "m", "min_poly"}`; defaults to the first place above ell.
    #[arg(long)]
    place: Option<String>,
}

#[derive(Args, Debug)]
struct LevelRaiseArgs {
    #[command(flatten)]
    decide: DecideArgs,
    /// Candidate level-raising prime.
    #[arg(long)]
    m: u64,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[command(flatten)]
    decide: DecideArgs,
    #[arg(long)]
    bound: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Battery {
    Default,
}

#[derive(Args, Debug)]
struct OracleOpts {
    /// Truncation of the oracle sums.
    #[arg(long, default_value_t = 1_000_000)]
    cutoff: u64,
    /// Imaginary part of the evaluation point for lattice sums.
    #[arg(long, default_value_t = 8.0)]
    im_z: f64,
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
}

#[derive(Args, Debug)]
struct BatteryArgs {
    #[arg(long, value_enum, default_value_t = Battery::Default)]
    battery: Battery,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    opts: OracleOpts,
}

#[derive(Args, Debug)]
struct OraclesArgs {
    /// Largest conductor tested.
    #[arg(long, default_value_t = 12)]
    max_conductor: u64,
    #[command(flatten)]
    opts: OracleOpts,
}

/// Why a command did not succeed.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = std::result::Result<Output, Failure>;

/// A successful result: its JSON value plus an optional text rendering that
/// replaces the generic one.
struct Output {
    json: Value,
    text: Option<String>,
}

impl Output {
    fn new<T: Serialize>(value: &T) -> Self {
        Output { json: serde_json::to_value(value).expect("serializable output"), text: None }
    }
}

/// Runs one command. `argv` excludes the program name.
pub fn cmd_dispatch<S: AsRef<str>>(argv: &[S]) -> (i32, Vec<u8>) {
    let args = std::iter::once("eiscong").chain(argv.iter().map(|s| s.as_ref()));
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (0, e.render().to_string().into_bytes()),
                _ => render_failure(Failure::Usage(e.render().to_string().trim_end().to_string())),
            };
        }
    };
    let format = cli.format;
    let result = match threads() {
        Err(f) => Err(f),
        Ok(None) => run(cli.command),
        Ok(Some(n)) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run(cli.command)),
            Err(e) => Err(Failure::Io(e.to_string())),
        },
    };
    match result {
        Ok(out) => (0, render(&out, format)),
        Err(f) => render_failure(f),
    }
}

fn threads() -> std::result::Result<Option<usize>, Failure> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::Usage(format!("{THREADS_VAR} must be a positive integer, got {s:?}"))),
        },
    }
}

fn render(out: &Output, format: Format) -> Vec<u8> {
    let mut s = match format {
        Format::Json => serde_json::to_string_pretty(&out.json).expect("valid JSON"),
        Format::Text => out.text.clone().unwrap_or_else(|| text::render(&out.json)),
    };
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s.into_bytes()
}

fn render_failure(f: Failure) -> (i32, Vec<u8>) {
    let (code, error, detail) = match f {
        Failure::Usage(d) => (2, "usage", d),
        Failure::Domain(e) => (1, e.code(), e.to_string()),
        Failure::Io(d) => (1, "io-error", d),
    };
    let mut s = serde_json::to_string_pretty(&json!({ "error": error, "detail": detail })).expect("valid JSON");
    s.push('\n');
    (code, s.into_bytes())
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Bernoulli(a) => bernoulli(a),
        Command::Gauss(a) => gauss(a),
        Command::Eis(EisCommand::Qexp(a)) => qexp(a),
        Command::Eis(EisCommand::CuspConstant(a)) => cusp_constant(a),
        Command::Eis(EisCommand::Combo(a)) => combo(a),
        Command::Decide(DecideCommand::StrongModularity(a)) => decide_strong(a),
        Command::Decide(DecideCommand::LevelRaise(a)) => decide_level(a),
        Command::Scan(ScanCommand::LevelRaise(a)) => scan(a),
        Command::Verify(VerifyCommand::CuspConstants(a)) => verify_battery(a),
        Command::Verify(VerifyCommand::Oracles(a)) => verify_oracles(a),
    }
}

/// Parses a character given as shorthand, inline JSON or a file path.
fn parse_character(spec: &str) -> std::result::Result<DirichletCharacter, Failure> {
    let s = spec.trim();
    if s == "trivial" {
        return Ok(DirichletCharacter::trivial());
    }
    if let Some(q) = s.strip_prefix("quad:") {
        return Ok(DirichletCharacter::quadratic(number(q, spec)?)?);
    }
    if let Some(rest) = s.strip_prefix("gen:") {
        let parts: Vec<&str> = rest.split(':').collect();
        let [q, exps, n] = parts[..] else {
            return Err(Failure::Usage(format!("expected gen:MODULUS:EXPONENTS:ORDER, got {spec:?}")));
        };
        let q = number(q, spec)?;
        let n = number(n, spec)?;
        let images = exps
            .split(',')
            .map(|e| Ok((number(e, spec)?, n)))
            .collect::<std::result::Result<Vec<_>, Failure>>()?;
        return Ok(DirichletCharacter::from_generator_exponents(q, &images)?);
    }
    if s.starts_with('{') {
        return character_from_json(s);
    }
    let path = Path::new(s);
    if path.is_file() {
        return read_character(path);
    }
    Err(Failure::Usage(format!("unrecognized character {spec:?}")))
}

fn number(s: &str, spec: &str) -> std::result::Result<u64, Failure> {
    s.trim().parse().map_err(|_| Failure::Usage(format!("bad number {s:?} in character {spec:?}")))
}

fn character_from_json(s: &str) -> std::result::Result<DirichletCharacter, Failure> {
    serde_json::from_str(s).map_err(|e| Failure::Domain(Error::InvalidCharacter(e.to_string())))
}

fn read_character(path: &Path) -> std::result::Result<DirichletCharacter, Failure> {
    let s = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    character_from_json(&s)
}

fn one_character(spec: &Option<String>, file: &Option<PathBuf>) -> std::result::Result<DirichletCharacter, Failure> {
    match (spec, file) {
        (Some(s), _) => parse_character(s),
        (None, Some(p)) => read_character(p),
        (None, None) => Err(Failure::Usage("missing character".into())),
    }
}

impl CharArg {
    fn get(&self) -> std::result::Result<DirichletCharacter, Failure> {
        one_character(&self.spec, &self.char_file)
    }
}

impl PairArgs {
    fn get(&self) -> std::result::Result<(DirichletCharacter, DirichletCharacter), Failure> {
        Ok((one_character(&self.char1, &self.char1_file)?, one_character(&self.char2, &self.char2_file)?))
    }

    fn series(&self) -> std::result::Result<EisensteinSeries, Failure> {
        let (c1, c2) = self.get()?;
        Ok(EisensteinSeries::new(&c1, &c2, self.k)?)
    }
}

/// Parses a place in its JSON form and checks it is a factor of Phi_m mod ell.
fn parse_place(s: &str) -> std::result::Result<Arc<Place>, Failure> {
    #[derive(Deserialize)]
    struct Raw {
        ell: u64,
        m: u64,
        min_poly: Vec<u64>,
    }
    let raw: Raw =
        serde_json::from_str(s).map_err(|e| Failure::Domain(Error::InvalidInput(format!("place: {e}"))))?;
    let places = all_places(raw.ell, raw.m)?;
    places.iter().find(|w| w.min_poly() == raw.min_poly.as_slice()).cloned().ok_or_else(|| {
        Failure::Domain(Error::InvalidInput(format!(
            "{:?} is not an irreducible factor of Phi_{} mod {}",
            raw.min_poly, raw.m, raw.ell
        )))
    })
}

#[derive(Serialize)]
struct Reduced<'a> {
    place: &'a Arc<Place>,
    value: FiniteFieldElement,
}

fn reduce_value(x: &CyclotomicNumber, ell: Option<u64>) -> std::result::Result<Option<(Arc<Place>, FiniteFieldElement)>, Failure> {
    let Some(ell) = ell else { return Ok(None) };
    let place = place_above(ell, x.order())?;
    let value = reduce_at(x, &place)?;
    Ok(Some((place, value)))
}

fn bernoulli(a: BernoulliArgs) -> Outcome {
    #[derive(Serialize)]
    struct Carlitz {
        d: CyclotomicNumber,
        case: CarlitzCase,
    }
    #[derive(Serialize)]
    struct Out<'a> {
        k: u32,
        character: &'a DirichletCharacter,
        value: &'a CyclotomicNumber,
        #[serde(skip_serializing_if = "Option::is_none")]
        reduced: Option<Reduced<'a>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        carlitz: Option<Carlitz>,
    }
    let chi = a.chi.get()?;
    let value = bernoulli_char(a.k as usize, &chi)?;
    let red = reduce_value(&value, a.ell)?;
    let carlitz = if a.carlitz {
        let c = carlitz_certificate(&chi, a.k as i64)?;
        Some(Carlitz { d: c.d, case: c.case })
    } else {
        None
    };
    Ok(Output::new(&Out {
        k: a.k,
        character: &chi,
        value: &value,
        reduced: red.as_ref().map(|(place, v)| Reduced { place, value: v.clone() }),
        carlitz,
    }))
}

fn gauss(a: GaussArgs) -> Outcome {
    let chi = a.chi.get()?;
    let value = chi.gauss_sum()?;
    Ok(Output::new(&json!({ "character": chi, "conductor": chi.conductor(), "value": value })))
}

#[derive(Serialize)]
struct QexpOut<'a> {
    #[serde(flatten)]
    qexp: &'a QExpansion,
    #[serde(skip_serializing_if = "Option::is_none")]
    reduction: Option<ReducedQExpansion>,
}

fn qexp_output(e: &QExpansion, ell: Option<u64>) -> Outcome {
    let reduction = match ell {
        None => None,
        Some(ell) => {
            let order = e.coeffs.iter().map(|c| c.order()).max().unwrap_or(1);
            Some(e.reduce(&place_above(ell, order)?)?)
        }
    };
    Ok(Output::new(&QexpOut { qexp: e, reduction }))
}

fn qexp(a: QexpArgs) -> Outcome {
    let es = a.pair.series()?;
    qexp_output(&es.qexp(a.precision), a.ell)
}

fn combo(a: ComboArgs) -> Outcome {
    let es = a.pair.series()?;
    let e = es.level_raise_combo(a.m, a.variant.into(), a.precision)?;
    qexp_output(&e, a.ell)
}

fn integers<const N: usize>(s: &str, flag: &str) -> std::result::Result<[i64; N], Failure> {
    let v: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse::<i64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("--{flag} expects {N} comma-separated integers, got {s:?}")))?;
    v.try_into().map_err(|_| Failure::Usage(format!("--{flag} expects {N} comma-separated integers, got {s:?}")))
}

fn cusp_constant(a: CuspArgs) -> Outcome {
    #[derive(Serialize)]
    struct Row {
        gamma: CuspMatrix,
        value: CyclotomicNumber,
        #[serde(skip_serializing_if = "Option::is_none")]
        reduced: Option<FiniteFieldElement>,
    }
    #[derive(Serialize)]
    struct Out {
        level: u64,
        weight: u32,
        m: u64,
        variant: Variant,
        #[serde(skip_serializing_if = "Option::is_none")]
        place: Option<Arc<Place>>,
        constants: Vec<Row>,
    }
    let es = a.pair.series()?;
    if a.m == 0 {
        return Err(Error::InvalidInput("M must be positive".into()).into());
    }
    let gammas = match (&a.gamma, &a.bottom) {
        (Some(g), _) => {
            let [u, beta, v, delta] = integers::<4>(g, "gamma")?;
            vec![CuspMatrix::new(u, beta, v, delta)?]
        }
        (None, Some(b)) => {
            let [v, delta] = integers::<2>(b, "bottom")?;
            let g = CuspMatrix::from_bottom_row(v, delta)
                .ok_or_else(|| Error::InvalidInput(format!("bottom row ({v}, {delta}) is not coprime")))?;
            vec![g]
        }
        (None, None) => cusp_enumerate_with_classes(es.level() * a.m, es.chi2().modulus()),
    };
    let variant: Variant = a.variant.into();
    let values = gammas
        .iter()
        .map(|g| es.series_cusp_constant(g, a.m, variant))
        .collect::<eiscong::Result<Vec<_>>>()?;
    let place = match a.ell {
        None => None,
        Some(ell) => {
            let order = values.iter().map(|c| c.order()).fold(1, eiscong::ntheory::lcm);
            Some(place_above(ell, order)?)
        }
    };
    let constants = gammas
        .into_iter()
        .zip(values)
        .map(|(gamma, value)| {
            let reduced = match &place {
                None => None,
                Some(w) => Some(reduce_at(&value.promote(w.m())?, w)?),
            };
            Ok(Row { gamma, value, reduced })
        })
        .collect::<eiscong::Result<Vec<_>>>()?;
    Ok(Output::new(&Out { level: es.level() * a.m, weight: es.weight(), m: a.m, variant, place, constants }))
}

#[derive(Serialize)]
struct DecisionOut<'a> {
    kind: &'static str,
    serre_type: &'a SerreType,
    #[serde(flatten)]
    decision: &'a Decision,
}

/// Characters, Serre type and place for a decision command.
fn decision_setup(
    a: &DecideArgs,
) -> std::result::Result<(DirichletCharacter, DirichletCharacter, SerreType, Arc<Place>), Failure> {
    let (c1, c2) = a.pair.get()?;
    let st = serre_type(&c1, &c2, a.pair.k, a.ell)?;
    let place = match &a.place {
        None => place_above(a.ell, eta_lift(&c1, &c2).order())?,
        Some(s) => {
            let w = parse_place(s)?;
            if w.ell() != a.ell {
                return Err(Error::InvalidInput(format!("place lies over {}, not {}", w.ell(), a.ell)).into());
            }
            w
        }
    };
    Ok((c1, c2, st, place))
}

fn decide_strong(a: DecideArgs) -> Outcome {
    let (c1, c2, st, place) = decision_setup(&a)?;
    let d = decide_strong_modularity_at(&c1, &c2, a.pair.k, a.ell, &place)?;
    Ok(Output::new(&DecisionOut { kind: "strong-modularity", serre_type: &st, decision: &d }))
}

fn decide_level(a: LevelRaiseArgs) -> Outcome {
    let (c1, c2, st, place) = decision_setup(&a.decide)?;
    let d = decide_level_raise_at(&c1, &c2, a.decide.pair.k, a.decide.ell, a.m, &place)?;
    Ok(Output::new(&DecisionOut { kind: "level-raise", serre_type: &st, decision: &d }))
}

fn scan(a: ScanArgs) -> Outcome {
    let (c1, c2, st, place) = decision_setup(&a.decide)?;
    let primes = scan_level_raise_at(&c1, &c2, a.decide.pair.k, a.decide.ell, a.bound, &place)?;
    let place = eiscong::reduction::restrict_place(&place, eta_lift(&c1, &c2).order())?;
    Ok(Output::new(&json!({ "primes": primes, "bound": a.bound, "serre_type": st, "place": place })))
}

fn oracle_config(o: &OracleOpts) -> std::result::Result<OracleConfig, Failure> {
    Ok(OracleConfig::new(o.cutoff, o.im_z, o.tolerance)?)
}

fn verify_battery(a: BatteryArgs) -> Outcome {
    #[derive(Serialize)]
    struct Out<'a> {
        battery: &'static str,
        seed: u64,
        config: OracleConfig,
        #[serde(flatten)]
        report: &'a BatteryReport,
    }
    let cfg = oracle_config(&a.opts)?;
    let Battery::Default = a.battery;
    let report = run_cusp_battery(&default_battery(a.seed), &cfg)?;
    let mut out = Output::new(&Out { battery: "default", seed: a.seed, config: cfg, report: &report });
    out.text = Some(text::battery_table(&report, cfg.tolerance));
    Ok(out)
}

fn verify_oracles(a: OraclesArgs) -> Outcome {
    #[derive(Serialize)]
    struct GaussRow {
        character: DirichletCharacter,
        exact: (f64, f64),
        oracle: (f64, f64),
        gap: f64,
        pass: bool,
    }
    #[derive(Serialize)]
    struct LRow {
        character: DirichletCharacter,
        k: u32,
        exact: (f64, f64),
        oracle: (f64, f64),
        gap: f64,
        pass: bool,
    }
    #[derive(Serialize)]
    struct Out {
        config: OracleConfig,
        max_conductor: u64,
        gauss_sums: Vec<GaussRow>,
        l_values: Vec<LRow>,
        max_gap: f64,
        passed: usize,
        failed: usize,
    }
    let cfg = oracle_config(&a.opts)?;
    let chars: Vec<DirichletCharacter> = (1..=a.max_conductor).flat_map(primitive_characters).collect();
    let gauss_sums = chars
        .par_iter()
        .map(|chi| {
            let exact = chi.gauss_sum()?.embed();
            let oracle = oracle_gauss_sum(chi);
            let gap = (exact - oracle).norm();
            Ok(GaussRow {
                character: chi.clone(),
                exact: (exact.re, exact.im),
                oracle: (oracle.re, oracle.im),
                gap,
                pass: gap < cfg.tolerance,
            })
        })
        .collect::<eiscong::Result<Vec<_>>>()?;
    let cases: Vec<(&DirichletCharacter, u32)> = chars
        .iter()
        .flat_map(|chi| (3..=6u32).filter(move |k| (chi.parity() == 1) == (k % 2 == 0)).map(move |k| (chi, k)))
        .collect();
    let l_values = cases
        .par_iter()
        .map(|&(chi, k)| {
            let exact = l_value_closed_form(chi, k)?;
            let oracle = oracle_l_value(chi, k, &cfg);
            let gap = (exact - oracle).norm();
            Ok(LRow {
                character: chi.clone(),
                k,
                exact: (exact.re, exact.im),
                oracle: (oracle.re, oracle.im),
                gap,
                pass: gap < cfg.tolerance,
            })
        })
        .collect::<eiscong::Result<Vec<_>>>()?;
    let gaps = gauss_sums.iter().map(|r| (r.gap, r.pass)).chain(l_values.iter().map(|r| (r.gap, r.pass)));
    let (mut max_gap, mut passed, mut failed) = (0f64, 0, 0);
    for (gap, pass) in gaps {
        max_gap = max_gap.max(gap);
        if pass {
            passed += 1;
        } else {
            failed += 1;
        }
    }
    let out = Out { config: cfg, max_conductor: a.max_conductor, gauss_sums, l_values, max_gap, passed, failed };
    let mut o = Output::new(&out);
    o.text = Some(text::oracle_table(&o.json));
    Ok(o)
}
