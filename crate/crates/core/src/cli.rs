//! The `spinlift` command line: read a JSON input, run one computation,
//! write a JSON (or plain text) report.
//!
//! Exit codes: 0 on success, 2 when the input or configuration is rejected
//! (parse and schema errors, invalid data, `SizeBoundExceeded`), 1 on an
//! internal error or a failing `selftest`.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::cliffpin::{rep_catalog, CliffError, OrthRep, QuadSpace, RatMatrix};
use crate::exactlat::{json_ints, quotient, IntMatrix};
use crate::gcoh::lemma::{crossed_hom_coboundary, key_lemma_check, KeyLemmaSampler};
use crate::gcoh::small::{by_name, groups_up_to_16};
use crate::gcoh::{h2, Cocycle2, FiniteGroup, GModule, GcohError, GroupExtension};
use crate::rootdata::{
    adjoint_weights, catalog, RootDataError, RootDatum, Vector, WeightLattice, WeightMultiset,
    DEFAULT_WEYL_BOUND,
};
use crate::selftest::{run_suite, ExtraCatalog, SelftestError};
use crate::spincalc::{involution, spin_report};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable replacing the default size bound of every command.
pub const BOUND_ENV: &str = "SPINLIFT_BOUND";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Subcommand)]
pub enum Command {
    /// Fundamental group of a root datum
    Pi1,
    /// Spin lifting verdict, spin character and canonical involution of a weight multiset
    Spin,
    /// Canonical involution of a weight multiset
    Involution,
    /// Second cohomology of a finite group with finite coefficients
    H2,
    /// Group extension from a cocycle, or cocycle from an extension
    Extension,
    /// Randomized checks of the key lemma and the crossed-homomorphism lemma
    Keylemma,
    /// Stiefel-Whitney classes w1, w2 of an orthogonal representation
    Sw,
    /// The full acceptance suite
    Selftest,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Pi1 => "pi1",
            Command::Spin => "spin",
            Command::Involution => "involution",
            Command::H2 => "h2",
            Command::Extension => "extension",
            Command::Keylemma => "keylemma",
            Command::Sw => "sw",
            Command::Selftest => "selftest",
        }
    }

    /// What the bound limits, and its default.
    pub fn default_bound(self) -> (&'static str, usize) {
        match self {
            Command::Pi1 | Command::Spin | Command::Involution => ("datum rank", 64),
            Command::H2 => ("|G| * rank(A)", 64),
            Command::Extension => ("group and module order", 64),
            Command::Keylemma | Command::Selftest => ("|G x| W|", 32),
            Command::Sw => ("group order", 64),
        }
    }

    fn needs_input(self) -> bool {
        !matches!(self, Command::Keylemma | Command::Selftest)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "spinlift",
    version,
    about = "Spin lifts, canonical involutions, H^2 and Stiefel-Whitney classes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON input file (see docs/ for the schemas)
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Size bound; overrides SPINLIFT_BOUND and the command default
    #[arg(long, global = true)]
    pub bound: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Number of random instances (keylemma)
    #[arg(long, global = true)]
    pub trials: Option<usize>,
}

/// The input of a job: where it came from (for messages) and its text.
#[derive(Clone, Debug)]
pub struct Input {
    pub name: String,
    pub text: String,
}

#[derive(Clone, Debug)]
pub struct JobConfig {
    pub command: Command,
    pub input: Option<Input>,
    pub seed: u64,
    pub bound: Option<usize>,
    pub trials: Option<usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliError {
    #[error("{file}:{line}:{column}: parse error: {msg}")]
    Parse {
        file: String,
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("{file}:{line}:{column}: schema error: {msg}")]
    Schema {
        file: String,
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("{file}: invalid input:\n  - {}", items.join("\n  - "))]
    Invalid { file: String, items: Vec<String> },
    #[error("{file}: SizeBoundExceeded: {what} is {size}, above the bound {bound}")]
    SizeBound {
        file: String,
        what: String,
        size: usize,
        bound: usize,
    },
    #[error("{0}")]
    Usage(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Internal(_) => 1,
            _ => 2,
        }
    }

    fn invalid(file: &str, msg: impl Into<String>) -> Self {
        CliError::Invalid {
            file: file.to_string(),
            items: vec![msg.into()],
        }
    }

    fn size(file: &str, what: impl Into<String>, size: usize, bound: usize) -> Self {
        CliError::SizeBound {
            file: file.to_string(),
            what: what.into(),
            size,
            bound,
        }
    }

    fn gcoh(file: &str, e: GcohError) -> Self {
        use GcohError::*;
        match e {
            SizeBoundExceeded { what, size, bound } => Self::size(file, what, size, bound),
            InvalidGroup(_)
            | InvalidAction(_)
            | InvalidModule(_)
            | NotACocycle(_)
            | NotEquivariant(_)
            | NotAHomomorphism(_)
            | PreconditionFailed(_)
            | InvalidExtension(_)
            | NotCrossedHom(_) => Self::invalid(file, e.to_string()),
            ModuleMismatch | NotASection(_) => CliError::Internal(e.to_string()),
        }
    }

    fn cliff(file: &str, e: CliffError) -> Self {
        use CliffError::*;
        match e {
            DimensionBound { dim, bound } => Self::size(file, "dimension", dim, bound),
            Cohomology(g) => Self::gcoh(file, g),
            NotOrthogonal(_) | NotPositiveDefinite | InvalidRep(_) | SpaceMismatch => {
                Self::invalid(file, e.to_string())
            }
            NotScalarNorm | NonScalarDefect(..) => CliError::Internal(e.to_string()),
        }
    }

    fn rootdata(file: &str, e: RootDataError) -> Self {
        match e {
            RootDataError::OrderBoundExceeded(b) => Self::size(file, "Weyl group order", b + 1, b),
            other => Self::invalid(file, other.to_string()),
        }
    }
}

/// Result of a job: the report, and whether it counts as success.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Value,
    pub success: bool,
}

/// Bound for `command`: explicit value, else `SPINLIFT_BOUND`, else the
/// command default.
pub fn resolve_bound(command: Command, explicit: Option<usize>) -> Result<usize, CliError> {
    if let Some(b) = explicit {
        return Ok(b);
    }
    match std::env::var(BOUND_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{BOUND_ENV}={v} is not a nonnegative integer"))),
        Err(_) => Ok(command.default_bound().1),
    }
}

fn parse<T: DeserializeOwned>(input: &Input) -> Result<T, CliError> {
    // syntax first, so a typo is not reported as a schema mismatch
    serde_json::from_str::<serde::de::IgnoredAny>(&input.text)
        .and_then(|_| serde_json::from_str(&input.text))
        .map_err(|e| {
            let (file, line, column, msg) =
                (input.name.clone(), e.line(), e.column(), e.to_string());
            // serde_json appends " at line L column C"; the prefix carries it
            let msg = msg
                .rsplit_once(" at line ")
                .map_or(msg.clone(), |(m, _)| m.to_string());
            if e.is_syntax() || e.is_eof() {
                CliError::Parse {
                    file,
                    line,
                    column,
                    msg,
                }
            } else {
                CliError::Schema {
                    file,
                    line,
                    column,
                    msg,
                }
            }
        })
}

/// Top-level keys of the input, after a syntax check.
fn keys(input: &Input) -> Result<Vec<String>, CliError> {
    match parse::<Value>(input)? {
        Value::Object(m) => Ok(m.keys().cloned().collect()),
        _ => Err(CliError::Schema {
            file: input.name.clone(),
            line: 1,
            column: 1,
            msg: "expected a JSON object".into(),
        }),
    }
}

pub fn run_job(cfg: &JobConfig) -> Result<Outcome, CliError> {
    let bound = resolve_bound(cfg.command, cfg.bound)?;
    let input = match (&cfg.input, cfg.command.needs_input()) {
        (None, true) => {
            return Err(CliError::Usage(format!(
                "`{}` needs --input",
                cfg.command.name()
            )))
        }
        (Some(_), false) if cfg.command == Command::Keylemma => {
            return Err(CliError::Usage("`keylemma` takes no --input".into()))
        }
        (i, _) => i.as_ref(),
    };
    let input_name = input.map_or("<no input>".to_string(), |i| i.name.clone());
    let mut success = true;
    let result = match cfg.command {
        Command::Pi1 => pi1(input.expect("checked"), bound)?,
        Command::Spin => spin(input.expect("checked"), bound)?,
        Command::Involution => involution_cmd(input.expect("checked"), bound)?,
        Command::H2 => h2_cmd(input.expect("checked"), bound)?,
        Command::Extension => extension(input.expect("checked"), bound)?,
        Command::Sw => sw(input.expect("checked"), bound)?,
        Command::Keylemma => keylemma(&input_name, cfg.seed, bound, cfg.trials.unwrap_or(50))?,
        Command::Selftest => {
            let (v, ok) = selftest(input, cfg.seed, bound)?;
            success = ok;
            v
        }
    };
    let mut report = match result {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("result".into(), other);
            m
        }
    };
    report.insert("tool".into(), json!("spinlift"));
    report.insert("version".into(), json!(VERSION));
    report.insert("command".into(), json!(cfg.command.name()));
    report.insert("seed".into(), json!(cfg.seed));
    report.insert("bound".into(), json!(bound));
    Ok(Outcome {
        report: Value::Object(report),
        success,
    })
}

// ---- root data ----

enum DatumSpec {
    Name(String),
    Explicit(RootDatum),
}

/// A catalog name or an explicit object, with the object's own error
/// message instead of serde's untagged-enum summary.
fn name_or<'de, D, T, F>(d: D, what: &str, wrap: F) -> Result<T, D::Error>
where
    D: serde::Deserializer<'de>,
    F: FnOnce(Result<String, Value>) -> Result<T, serde_json::Error>,
{
    use serde::de::Error;
    match Value::deserialize(d)? {
        Value::String(s) => wrap(Ok(s)).map_err(D::Error::custom),
        v @ Value::Object(_) => wrap(Err(v)).map_err(D::Error::custom),
        other => Err(D::Error::custom(format!(
            "{what} must be a name or an object, not {other}"
        ))),
    }
}

impl<'de> Deserialize<'de> for DatumSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        name_or(d, "datum", |v| match v {
            Ok(s) => Ok(DatumSpec::Name(s)),
            Err(v) => serde_json::from_value(v).map(DatumSpec::Explicit),
        })
    }
}

fn resolve_datum(
    spec: DatumSpec,
    file: &str,
    bound: usize,
) -> Result<(Option<String>, RootDatum), CliError> {
    let (name, d) = match spec {
        DatumSpec::Name(n) => {
            let d = catalog(&n).map_err(|e| CliError::rootdata(file, e))?;
            (Some(n), d)
        }
        DatumSpec::Explicit(d) => {
            let r = d.validate();
            if !r.is_valid() {
                return Err(CliError::Invalid {
                    file: file.to_string(),
                    items: r.failures,
                });
            }
            (None, d)
        }
    };
    if d.rank > bound {
        return Err(CliError::size(file, "datum rank", d.rank, bound));
    }
    Ok((name, d))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DatumInput {
    datum: DatumSpec,
}

fn pi1(input: &Input, bound: usize) -> Result<Value, CliError> {
    let DatumInput { datum } = parse(input)?;
    let (name, d) = resolve_datum(datum, &input.name, bound)?;
    let p = d.fundamental_group();
    Ok(json!({
        "datum": name,
        "rank": d.rank,
        "invariant_factors": json_ints::wrap(p.invariant_factors()),
        "free_rank": p.free_rank(),
        "order": p.order().map(|o| json_ints::wrap(&[o])[0].clone()),
    }))
}

#[derive(Deserialize)]
enum Keyword {
    #[serde(rename = "adjoint")]
    Adjoint,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightEntry {
    weight: Vector,
    #[serde(default = "one")]
    mult: u64,
}

fn one() -> u64 {
    1
}

enum WeightsSpec {
    Keyword(Keyword),
    List(Vec<WeightEntry>),
}

impl<'de> Deserialize<'de> for WeightsSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let v = Value::deserialize(d)?;
        if v.is_string() {
            serde_json::from_value(v).map(WeightsSpec::Keyword)
        } else {
            serde_json::from_value(v).map(WeightsSpec::List)
        }
        .map_err(D::Error::custom)
    }
}

fn characters() -> WeightLattice {
    WeightLattice::Characters
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MultisetInput {
    datum: DatumSpec,
    #[serde(default = "characters")]
    lattice: WeightLattice,
    weights: WeightsSpec,
    /// Treat the weights as orbit representatives under negation, Galois
    /// and Weyl groups.
    #[serde(default)]
    orbits: bool,
}

fn multiset(input: &Input, bound: usize) -> Result<(Option<String>, WeightMultiset), CliError> {
    let m: MultisetInput = parse(input)?;
    let file = &input.name;
    let (name, d) = resolve_datum(m.datum, file, bound)?;
    let ms = match m.weights {
        WeightsSpec::Keyword(Keyword::Adjoint) => {
            if m.lattice != WeightLattice::Characters {
                return Err(CliError::invalid(
                    file,
                    "\"adjoint\" weights live in the characters",
                ));
            }
            adjoint_weights(&d)
        }
        WeightsSpec::List(ws) => {
            let ws: Vec<(Vector, u64)> = ws.into_iter().map(|e| (e.weight, e.mult)).collect();
            if m.orbits {
                WeightMultiset::from_orbits(d, m.lattice, &ws, Some(DEFAULT_WEYL_BOUND))
            } else {
                WeightMultiset::new(d, m.lattice, ws)
            }
            .map_err(|e| CliError::rootdata(file, e))?
        }
    };
    Ok((name, ms))
}

fn spin(input: &Input, bound: usize) -> Result<Value, CliError> {
    let (name, m) = multiset(input, bound)?;
    let r = spin_report(&m);
    Ok(json!({
        "datum": name,
        "dimension": m.dimension(),
        "lifts": r.lifts,
        "rho": r.rho,
        "positive_weights": r.gauge.positive_set,
        "spin_character": r.spin_character.character.vector_mod2,
        "descends": r.spin_character.descends,
        "pi1_invariant_factors": json_ints::wrap(&r.spin_character.pi1_invariant_factors),
        "pi1_values": r.spin_character.pi1_values,
        "involution": r.involution.class.vector_mod2,
        "involution_central": r.involution.central,
        "involution_galois_fixed": r.involution.galois_fixed,
    }))
}

fn involution_cmd(input: &Input, bound: usize) -> Result<Value, CliError> {
    let (name, m) = multiset(input, bound)?;
    let z = involution(&m);
    Ok(json!({
        "datum": name,
        "involution": z.class.vector_mod2,
        "trivial": z.class.is_trivial(),
        "central": z.central,
        "galois_fixed": z.galois_fixed,
    }))
}

// ---- groups and modules ----

enum GroupSpec {
    Name(String),
    Explicit(FiniteGroup),
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        name_or(d, "group", |v| match v {
            Ok(s) => Ok(GroupSpec::Name(s)),
            Err(v) => serde_json::from_value(v).map(GroupSpec::Explicit),
        })
    }
}

fn resolve_group(spec: GroupSpec, file: &str) -> Result<FiniteGroup, CliError> {
    match spec {
        GroupSpec::Name(n) => {
            by_name(&n).ok_or_else(|| CliError::invalid(file, format!("unknown group name `{n}`")))
        }
        GroupSpec::Explicit(g) => Ok(g),
    }
}

/// Name from the catalog of groups of order at most 16, if isomorphic to one.
fn identify(g: &FiniteGroup) -> Option<String> {
    if g.order() > 16 {
        return None;
    }
    groups_up_to_16()
        .into_iter()
        .find(|(_, h)| h.order() == g.order() && h.is_isomorphic(g))
        .map(|(n, _)| n)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuleInput {
    group: GroupSpec,
    /// `A = (+) Z/c_i`.
    coefficients: Vec<u64>,
    /// One integer matrix per group element, acting on `Z^k`; trivial if
    /// omitted.
    #[serde(default)]
    action: Option<Vec<IntMatrix>>,
}

fn build_module(
    g: FiniteGroup,
    coefficients: &[u64],
    action: Option<Vec<IntMatrix>>,
    file: &str,
) -> Result<GModule, CliError> {
    if coefficients.contains(&0) {
        return Err(CliError::invalid(file, "coefficients must be positive"));
    }
    let k = coefficients.len();
    let diag: Vec<BigInt> = coefficients.iter().map(|&c| BigInt::from(c)).collect();
    let pres = quotient(k, &IntMatrix::diagonal(&diag));
    let action = action.unwrap_or_else(|| vec![IntMatrix::identity(k); g.order()]);
    GModule::new(g, pres, action).map_err(|e| CliError::gcoh(file, e))
}

fn h2_cmd(input: &Input, bound: usize) -> Result<Value, CliError> {
    let m: ModuleInput = parse(input)?;
    let file = &input.name;
    let g = resolve_group(m.group, file)?;
    let module = build_module(g, &m.coefficients, m.action, file)?;
    let h = h2(&module, bound).map_err(|e| CliError::gcoh(file, e))?;
    let reps: Vec<Value> = h
        .representatives()
        .iter()
        .map(|z| json!(z.values()))
        .collect();
    Ok(json!({
        "group_order": module.group().order(),
        "module_order": module.size(),
        "order": h.order(),
        "invariant_factors": h.invariant_factors(),
        "representatives": reps,
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CocycleInput {
    group: GroupSpec,
    coefficients: Vec<u64>,
    #[serde(default)]
    action: Option<Vec<IntMatrix>>,
    /// `values[g][h]` in `Z^k`, reduced modulo the coefficients.
    values: Vec<Vec<Vec<i64>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SubgroupInput {
    total: GroupSpec,
    /// Elements of an abelian normal subgroup.
    normal: Vec<usize>,
}

fn class_json(z: &Cocycle2, bound: usize) -> Value {
    match h2(z.module(), bound) {
        Ok(h) => json!({
            "h2_invariant_factors": h.invariant_factors(),
            "coordinates": h.class_of(z).ok(),
        }),
        Err(_) => Value::Null,
    }
}

fn extension(input: &Input, bound: usize) -> Result<Value, CliError> {
    let file = &input.name;
    let ks = keys(input)?;
    if ks.iter().any(|k| k == "values") {
        let c: CocycleInput = parse(input)?;
        let g = resolve_group(c.group, file)?;
        if g.order() > bound {
            return Err(CliError::size(file, "group order", g.order(), bound));
        }
        let module = build_module(g, &c.coefficients, c.action, file)?;
        let values: Vec<Vec<Vec<BigInt>>> = c
            .values
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
                    .collect()
            })
            .collect();
        let z = Cocycle2::from_ambient(module, &values).map_err(|e| CliError::gcoh(file, e))?;
        let e = GroupExtension::from_cocycle(&z, bound).map_err(|e| CliError::gcoh(file, e))?;
        Ok(json!({
            "direction": "cocycle_to_extension",
            "order": e.total().order(),
            "identified_as": identify(e.total()),
            "abelian": e.total().is_abelian(),
            "split": e.splitting().is_some(),
            "class": class_json(&z, bound),
            "total": e.total(),
        }))
    } else if ks.iter().any(|k| k == "normal") {
        let s: SubgroupInput = parse(input)?;
        let total = resolve_group(s.total, file)?;
        if total.order() > bound {
            return Err(CliError::size(file, "group order", total.order(), bound));
        }
        let mut normal = s.normal.clone();
        normal.sort_unstable();
        normal.dedup();
        if normal.iter().any(|&x| x >= total.order()) || !total.is_subgroup(&normal) {
            return Err(CliError::invalid(file, "`normal` is not a subgroup"));
        }
        let e = GroupExtension::from_normal_subgroup(&total, &normal)
            .map_err(|e| CliError::gcoh(file, e))?;
        let z = e
            .cocycle(&e.canonical_section())
            .map_err(|e| CliError::gcoh(file, e))?;
        Ok(json!({
            "direction": "extension_to_cocycle",
            "quotient_order": e.quotient().order(),
            "quotient_identified_as": identify(e.quotient()),
            "module_invariant_factors": e.module().moduli(),
            "module_action_trivial": e.module().is_trivial_action(),
            "split": e.splitting().is_some(),
            "cocycle": z.values(),
            "class": class_json(&z, bound),
        }))
    } else {
        Err(CliError::Schema {
            file: file.clone(),
            line: 1,
            column: 1,
            msg: "expected a cocycle (`group`, `coefficients`, `values`) or an extension (`total`, `normal`)".into(),
        })
    }
}

// ---- key lemma ----

fn keylemma(file: &str, seed: u64, bound: usize, trials: usize) -> Result<Value, CliError> {
    let sampler = KeyLemmaSampler::new(bound).map_err(|e| CliError::gcoh(file, e))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let (mut passed, mut corrections) = (0, 0);
    for t in 0..trials {
        let inst = sampler
            .key_lemma(&mut rng)
            .map_err(|e| CliError::gcoh(file, e))?;
        match key_lemma_check(&inst, &mut rng) {
            Ok(r) if r.holds => {
                passed += 1;
                corrections += usize::from(!r.correction_trivial);
            }
            Ok(_) => {
                failures.push(json!({"trial": t, "kind": "key_lemma", "reason": "classes differ"}))
            }
            Err(e) => {
                failures.push(json!({"trial": t, "kind": "key_lemma", "reason": e.to_string()}))
            }
        }
    }
    let mut crossed_passed = 0;
    for t in 0..trials {
        let inst = sampler
            .crossed_hom(&mut rng)
            .map_err(|e| CliError::gcoh(file, e))?;
        match crossed_hom_coboundary(&inst, &mut rng) {
            Ok(r) if r.holds => crossed_passed += 1,
            Ok(_) => failures
                .push(json!({"trial": t, "kind": "crossed_hom", "reason": "classes differ"})),
            Err(e) => {
                failures.push(json!({"trial": t, "kind": "crossed_hom", "reason": e.to_string()}))
            }
        }
    }
    Ok(json!({
        "trials": trials,
        "passed": passed,
        "failed": trials - passed,
        "nontrivial_corrections": corrections,
        "crossed_hom": {"trials": trials, "passed": crossed_passed, "failed": trials - crossed_passed},
        "failures": failures,
    }))
}

// ---- Stiefel-Whitney ----

#[derive(Deserialize)]
#[serde(untagged)]
enum Names {
    One(String),
    Many(Vec<String>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogRepInput {
    /// Catalog names such as `C4:rot`; several are summed.
    catalog: Names,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RepInput {
    group: GroupSpec,
    /// Gram matrix of the invariant form; the standard form if omitted.
    #[serde(default)]
    gram: Option<RatMatrix>,
    /// Element indices whose images are listed; every element if omitted.
    #[serde(default)]
    generators: Option<Vec<usize>>,
    images: Vec<RatMatrix>,
}

fn load_rep(input: &Input) -> Result<OrthRep, CliError> {
    let file = &input.name;
    if keys(input)?.iter().any(|k| k == "catalog") {
        let c: CatalogRepInput = parse(input)?;
        let names = match c.catalog {
            Names::One(n) => vec![n],
            Names::Many(ns) => ns,
        };
        let cat = rep_catalog();
        let mut sum: Option<OrthRep> = None;
        for n in &names {
            let r = cat.iter().find(|r| &r.name == n).ok_or_else(|| {
                CliError::invalid(file, format!("unknown catalog representation `{n}`"))
            })?;
            sum = Some(match sum {
                None => r.rep.clone(),
                Some(s) => s.direct_sum(&r.rep).map_err(|e| CliError::cliff(file, e))?,
            });
        }
        return sum.ok_or_else(|| CliError::invalid(file, "empty catalog list"));
    }
    let r: RepInput = parse(input)?;
    let g = resolve_group(r.group, file)?;
    let dim = r
        .gram
        .as_ref()
        .map(RatMatrix::rows)
        .or_else(|| r.images.first().map(RatMatrix::rows));
    let space = match r.gram {
        Some(gram) => QuadSpace::new(gram),
        None => QuadSpace::standard(dim.unwrap_or(0)),
    }
    .map_err(|e| CliError::cliff(file, e))?;
    match r.generators {
        Some(gens) => OrthRep::from_generators(&g, &space, &gens, &r.images),
        None => OrthRep::new(g, space, r.images),
    }
    .map_err(|e| CliError::cliff(file, e))
}

fn sw(input: &Input, bound: usize) -> Result<Value, CliError> {
    let file = &input.name;
    let rep = load_rep(input)?;
    let n = rep.group().order();
    if n > bound {
        return Err(CliError::size(file, "group order", n, bound));
    }
    let w1 = rep.sw1();
    let w2 = rep.sw2().map_err(|e| CliError::cliff(file, e))?;
    let pull = GroupExtension::from_cocycle(&w2.cocycle, 2).map_err(|e| CliError::gcoh(file, e))?;
    let z2 = GModule::trivial(rep.group().clone(), &[2]);
    let h = h2(&z2, bound).ok();
    let cocycle: Vec<Vec<u64>> = w2
        .cocycle
        .values()
        .iter()
        .map(|row| row.iter().map(|a| a[0]).collect())
        .collect();
    Ok(json!({
        "group_order": n,
        "dim": rep.dim(),
        "w1": w1,
        "w1_nontrivial": w1.iter().any(|&x| x != 0),
        "w2_nontrivial": w2.nontrivial,
        "w2_class": h.as_ref().and_then(|h| h.class_of(&w2.cocycle).ok()),
        "h2_invariant_factors": h.as_ref().map(|h| h.invariant_factors()),
        "w2_cocycle": cocycle,
        "pin_extension": {
            "order": pull.total().order(),
            "identified_as": identify(pull.total()),
            "abelian": pull.total().is_abelian(),
        },
    }))
}

// ---- selftest ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogInput {
    #[serde(default)]
    root_data: std::collections::BTreeMap<String, Value>,
    #[serde(default)]
    reps: std::collections::BTreeMap<String, Value>,
}

fn selftest(input: Option<&Input>, seed: u64, bound: usize) -> Result<(Value, bool), CliError> {
    let file = input.map_or("<built-in catalogs>".to_string(), |i| i.name.clone());
    let extra = match input {
        Some(i) => {
            let c: CatalogInput = parse(i)?;
            ExtraCatalog {
                root_data: c.root_data,
                reps: c.reps,
            }
        }
        None => ExtraCatalog::default(),
    };
    let report = run_suite(seed, bound, &extra).map_err(|e| match e {
        SelftestError::SizeBoundExceeded { what, size, bound } => {
            CliError::size(&file, what, size, bound)
        }
        other => CliError::invalid(&file, other.to_string()),
    })?;
    let lines: Vec<String> = report.criteria.iter().map(|c| c.line()).collect();
    let mut v = serde_json::to_value(&report).map_err(|e| CliError::Internal(e.to_string()))?;
    // wall-clock lines go to text output only
    let ok = report.passed;
    if let Value::Object(m) = &mut v {
        m.insert("_lines".into(), json!(lines));
    }
    Ok((v, ok))
}

// ---- rendering and entry point ----

/// JSON (pretty, sorted keys, trailing newline) or `key: value` lines.
pub fn render(report: &Value, format: Format) -> String {
    let mut report = report.clone();
    let lines = match &mut report {
        Value::Object(m) => m.remove("_lines"),
        _ => None,
    };
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report).expect("serializable");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            if let Value::Object(m) = &report {
                out.push_str(&format!(
                    "spinlift {} {} (seed {}, bound {})\n",
                    m["version"].as_str().unwrap_or(VERSION),
                    m["command"].as_str().unwrap_or(""),
                    m["seed"],
                    m["bound"]
                ));
                if let Some(Value::Array(ls)) = lines {
                    for l in ls {
                        out.push_str(l.as_str().unwrap_or_default());
                        out.push('\n');
                    }
                }
                for (k, v) in m {
                    if matches!(
                        k.as_str(),
                        "tool" | "version" | "command" | "seed" | "bound" | "criteria"
                    ) {
                        continue;
                    }
                    out.push_str(&format!("{k}: {v}\n"));
                }
            }
            out
        }
    }
}

fn read_input(path: &std::path::Path) -> Result<Input, CliError> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::invalid(&name, format!("cannot read: {e}")))?;
    Ok(Input { name, text })
}

/// Parses `args`, runs the job and writes the report; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let run = || -> Result<Outcome, CliError> {
        let input = cli.input.as_deref().map(read_input).transpose()?;
        let cfg = JobConfig {
            command: cli.command,
            input,
            seed: cli.seed,
            bound: cli.bound,
            trials: cli.trials,
        };
        run_job(&cfg)
    };
    match run() {
        Ok(out) => {
            let text = render(&out.report, cli.format);
            let written = match &cli.output {
                Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("internal error: cannot write the report: {e}");
                return 1;
            }
            if out.success {
                0
            } else {
                eprintln!("selftest: some criteria failed");
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
