//! The `surfact` command-line frontend.
//!
//! Exit codes: 0 success, 1 I/O, usage or schema failure, 2 validation or
//! other domain failure, 3 "not equivalent" under `equiv --exit-code`,
//! 4 oracle disagreement.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::action::{ActionDescriptor, CharFunction};
use crate::classify::{self, Mode, WeakSearch, DEFAULT_AUT_BUDGET};
use crate::error::Error;
use crate::matmod::MatZ;
use crate::oracle::{self, OrbitMethod, DEFAULT_ORACLE_BUDGET};
use crate::residue::Modulus;
use crate::symform::{AlternatingForm, QTuple};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NOT_EQUIVALENT: i32 = 3;
pub const EXIT_ORACLE_MISMATCH: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "surfact",
    version,
    about = "Classify (Z/p^k)^m actions on closed oriented surfaces"
)]
struct Cli {
    /// Emit a machine-readable JSON report on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check an action file.
    Validate { path: PathBuf },
    /// Covering genus, induced form, normal form, q and branch data.
    Invariants {
        path: PathBuf,
        #[arg(long, default_value_t = DEFAULT_AUT_BUDGET)]
        budget: u128,
    },
    /// Decide strong or weak equivalence of two actions.
    Equiv {
        path_a: PathBuf,
        path_b: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Strong)]
        mode: ModeArg,
        /// Exit 3 when the actions are not equivalent.
        #[arg(long)]
        exit_code: bool,
        /// Cap on |Aut(G)| for the exhaustive automorphism search.
        #[arg(long, default_value_t = DEFAULT_AUT_BUDGET)]
        budget: u128,
        /// Fail instead of falling back when the search exceeds the budget.
        #[arg(long)]
        exhaustive: bool,
    },
    /// List weak classes of free actions at a covering genus.
    Enumerate {
        p: u64,
        k: u32,
        m: usize,
        #[arg(long)]
        covering_genus: u128,
    },
    /// Build a free action with a prescribed form or q-tuple.
    Realize(RealizeArgs),
    /// Block normal form of an alternating form.
    NormalForm { path: PathBuf },
    /// Brute-force cross-checks at small parameters.
    Oracle(OracleArgs),
}

#[derive(Args, Debug)]
struct RealizeArgs {
    /// q-tuple as a JSON array, e.g. "[2,0]".
    #[arg(long, conflicts_with = "form", requires_all = ["p", "k"])]
    q: Option<String>,
    /// Form file with the Gram matrix to realize.
    #[arg(long)]
    form: Option<PathBuf>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    k: Option<u32>,
    /// Rank of G; defaults to the smallest rank compatible with q.
    #[arg(long)]
    m: Option<usize>,
    /// Quotient genus.
    #[arg(long)]
    genus: usize,
    /// Also write the action file here.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 1)]
    g: usize,
    #[arg(long, default_value_t = DEFAULT_ORACLE_BUDGET)]
    budget: u128,
    #[arg(long, value_enum, default_value_t = MethodArg::Full)]
    method: MethodArg,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModeArg {
    Strong,
    Weak,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Strong => Mode::Strong,
            ModeArg::Weak => Mode::Weak,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MethodArg {
    Full,
    Generators,
}

impl From<MethodArg> for OrbitMethod {
    fn from(m: MethodArg) -> OrbitMethod {
        match m {
            MethodArg::Full => OrbitMethod::Full,
            MethodArg::Generators => OrbitMethod::Generators,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Suite {
    Strong,
    Weak,
    Q,
    Extension,
    All,
}

/// On-disk action description (UTF-8 JSON).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionFile {
    #[serde(default = "schema_version")]
    pub schema: u32,
    pub p: u64,
    pub k: u32,
    pub m: usize,
    pub quotient_genus: usize,
    pub theta: Vec<Vec<i64>>,
    #[serde(default)]
    pub branches: Vec<BranchEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchEntry {
    pub h: Vec<i64>,
    pub count: u64,
}

/// On-disk alternating form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormFile {
    #[serde(default = "schema_version")]
    pub schema: u32,
    pub p: u64,
    pub k: u32,
    pub gram: Vec<Vec<i64>>,
}

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

/// Failure classes, mapped onto exit codes.
#[derive(Debug)]
pub enum CliError {
    Io(String),
    Schema(String),
    Domain(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Schema(_) => EXIT_IO,
            CliError::Domain(_) => EXIT_INVALID,
        }
    }

    pub fn kind(&self) -> String {
        match self {
            CliError::Io(_) => "io".into(),
            CliError::Schema(_) => "schema".into(),
            CliError::Domain(e) => format!("{e:?}")
                .split(|c: char| !c.is_alphanumeric())
                .next()
                .unwrap_or_default()
                .to_string(),
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Io(m) | CliError::Schema(m) => m.clone(),
            CliError::Domain(e) => e.to_string(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

fn check_range(rows: &[Vec<i64>], modulus: &Modulus, what: &str) -> Result<(), CliError> {
    for (i, r) in rows.iter().enumerate() {
        for (j, &x) in r.iter().enumerate() {
            if x < 0 || x as u64 >= modulus.order() {
                return Err(CliError::Schema(format!(
                    "{what}[{i}][{j}] = {x} is outside [0, {})",
                    modulus.order()
                )));
            }
        }
    }
    Ok(())
}

fn check_schema(schema: u32) -> Result<(), CliError> {
    if schema != SCHEMA_VERSION {
        return Err(CliError::Schema(format!(
            "unsupported schema version {schema} (expected {SCHEMA_VERSION})"
        )));
    }
    Ok(())
}

fn modulus_of(p: u64, k: u32) -> Result<Modulus, CliError> {
    Modulus::new(p, k).map_err(|e| CliError::Schema(e.to_string()))
}

impl ActionFile {
    /// Shape and range checks; does not run [`ActionDescriptor::validate`].
    pub fn to_descriptor(&self) -> Result<ActionDescriptor, CliError> {
        check_schema(self.schema)?;
        let md = modulus_of(self.p, self.k)?;
        if self.theta.len() != self.m {
            return Err(CliError::Schema(format!(
                "theta has {} rows, expected m = {}",
                self.theta.len(),
                self.m
            )));
        }
        let cols = 2 * self.quotient_genus;
        if let Some((i, r)) = self.theta.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(CliError::Schema(format!(
                "theta row {i} has {} entries, expected 2 * quotient_genus = {cols}",
                r.len()
            )));
        }
        check_range(&self.theta, &md, "theta")?;
        let mut l = CharFunction::new();
        for (i, b) in self.branches.iter().enumerate() {
            if b.h.len() != self.m {
                return Err(CliError::Schema(format!(
                    "branches[{i}].h has {} entries, expected m = {}",
                    b.h.len(),
                    self.m
                )));
            }
            check_range(std::slice::from_ref(&b.h), &md, &format!("branches[{i}].h"))?;
            if b.count == 0 {
                return Err(CliError::Schema(format!(
                    "branches[{i}].count must be positive"
                )));
            }
            l.add(b.h.iter().map(|&x| x as u64).collect(), b.count);
        }
        let data: Vec<u64> = self.theta.iter().flatten().map(|&x| x as u64).collect();
        let theta = MatZ::from_vec(self.m, cols, data, md)?;
        Ok(ActionDescriptor::new(
            md,
            self.m,
            self.quotient_genus,
            theta,
            l,
        )?)
    }

    pub fn from_descriptor(a: &ActionDescriptor) -> Self {
        let md = a.modulus();
        ActionFile {
            schema: SCHEMA_VERSION,
            p: md.p(),
            k: md.k(),
            m: a.m(),
            quotient_genus: a.genus(),
            theta: a
                .theta()
                .to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(|x| x as i64).collect())
                .collect(),
            branches: a
                .branches()
                .iter()
                .map(|(h, c)| BranchEntry {
                    h: h.iter().map(|&x| x as i64).collect(),
                    count: c,
                })
                .collect(),
        }
    }
}

impl FormFile {
    pub fn to_form(&self) -> Result<AlternatingForm, CliError> {
        check_schema(self.schema)?;
        let md = modulus_of(self.p, self.k)?;
        let n = self.gram.len();
        if let Some((i, r)) = self.gram.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(CliError::Schema(format!(
                "gram row {i} has {} entries, expected {n}",
                r.len()
            )));
        }
        check_range(&self.gram, &md, "gram")?;
        Ok(AlternatingForm::new(MatZ::from_rows(&self.gram, md)?)?)
    }
}

#[derive(Serialize)]
struct InputDigest {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct Report {
    schema: u32,
    version: &'static str,
    command: String,
    inputs: Vec<InputDigest>,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<Value>,
}

struct Outcome {
    result: Value,
    text: String,
    code: i32,
}

struct Session {
    inputs: Vec<InputDigest>,
}

impl Session {
    fn read(&mut self, path: &Path) -> Result<Vec<u8>, CliError> {
        let bytes =
            std::fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        Ok(bytes)
    }

    fn parse<T: for<'de> Deserialize<'de>>(&mut self, path: &Path) -> Result<T, CliError> {
        let bytes = self.read(path)?;
        serde_json::from_slice(&bytes)
            .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))
    }

    fn action(&mut self, path: &Path) -> Result<ActionDescriptor, CliError> {
        self.parse::<ActionFile>(path)?.to_descriptor()
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn rows_json(m: &MatZ) -> Value {
    to_value(&m.to_rows())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Invariants { .. } => "invariants",
        Command::Equiv { .. } => "equiv",
        Command::Enumerate { .. } => "enumerate",
        Command::Realize(_) => "realize",
        Command::NormalForm { .. } => "normal-form",
        Command::Oracle(_) => "oracle",
    }
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("1 {word}")
    } else {
        format!("{n} {word}es")
    }
}

fn dispatch(cmd: &Command, s: &mut Session) -> Result<Outcome, CliError> {
    match cmd {
        Command::Validate { path } => {
            let a = s.action(path)?.validate()?;
            Ok(Outcome {
                result: json!({
                    "valid": true,
                    "p": a.modulus().p(),
                    "k": a.modulus().k(),
                    "m": a.m(),
                    "quotient_genus": a.genus(),
                    "free": a.is_free(),
                }),
                text: "OK".into(),
                code: EXIT_OK,
            })
        }
        Command::Invariants { path, budget } => {
            let a = s.action(path)?.validate()?;
            let form = a.induced_form()?;
            let nf = form.normal_form();
            let weak = a.weak_invariant_with_budget(*budget)?;
            let result = json!({
                "covering_genus": weak.covering_genus,
                "g_free_rank": form.rank(),
                "gram": rows_json(form.gram()),
                "pair_exponents": nf.pair_exponents,
                "radical_rank": nf.radical_rank,
                "q": weak.q,
                "l": to_value(a.branches()),
                "l_canonical": to_value(&weak.l_canonical),
                "l_canonical_exact": weak.l_exact,
            });
            let text = format!(
                "covering genus {}\ngram {:?}\nnormal form {}\nq {:?}\nl {}",
                weak.covering_genus,
                form.gram().to_rows(),
                nf,
                weak.q.0,
                serde_json::to_string(a.branches()).expect("serializable"),
            );
            Ok(Outcome {
                result,
                text,
                code: EXIT_OK,
            })
        }
        Command::Equiv {
            path_a,
            path_b,
            mode,
            exit_code,
            budget,
            exhaustive,
        } => {
            let a = s.action(path_a)?;
            let b = s.action(path_b)?;
            let verdict = match Mode::from(*mode) {
                Mode::Strong => classify::strong_equivalent(&a, &b)?,
                Mode::Weak => classify::weak_equivalent_with(
                    &a,
                    &b,
                    WeakSearch {
                        budget: *budget,
                        force_exhaustive: *exhaustive,
                    },
                )?,
            };
            let mut text = match (&verdict.reason, verdict.equivalent) {
                (_, true) => "equivalent".to_string(),
                (Some(r), false) => format!("not equivalent: {r}"),
                (None, false) => "not equivalent".to_string(),
            };
            if let Some(w) = &verdict.witness {
                text.push_str(&format!("\nwitness {:?}", w.to_rows()));
            }
            if !verdict.exact {
                text.push_str("\n(partial: automorphism search exceeded budget)");
            }
            let mut result = to_value(&verdict);
            if let (Some(r), Value::Object(map)) = (&verdict.reason, &mut result) {
                map.insert("reason_text".into(), Value::String(r.to_string()));
            }
            let code = if *exit_code && !verdict.equivalent {
                EXIT_NOT_EQUIVALENT
            } else {
                EXIT_OK
            };
            Ok(Outcome { result, text, code })
        }
        Command::Enumerate {
            p,
            k,
            m,
            covering_genus,
        } => {
            let md = Modulus::new(*p, *k)?;
            let classes = classify::enumerate_weak_classes_witnessed(md, *m, *covering_genus)?;
            let quotient = classify::free_quotient_genus(md, *m, *covering_genus);
            let q_list: Vec<&QTuple> = classes.iter().map(|(q, _)| q).collect();
            let witnesses: Vec<Value> = classes
                .iter()
                .map(|(q, a)| {
                    Ok(json!({
                        "q": q,
                        "min_covering_genus": classify::min_covering_genus(q, md, *m)?,
                        "action": to_value(&ActionFile::from_descriptor(a)),
                    }))
                })
                .collect::<Result<_, Error>>()?;
            let text = if classes.is_empty() {
                "no free actions at this covering genus".to_string()
            } else {
                let qs: Vec<String> = q_list.iter().map(|q| format!("{:?}", q.0)).collect();
                format!("{}: {}", plural(classes.len(), "class"), qs.join(" "))
            };
            Ok(Outcome {
                result: json!({
                    "p": p,
                    "k": k,
                    "m": m,
                    "covering_genus": covering_genus,
                    "quotient_genus": quotient,
                    "q": q_list,
                    "classes": witnesses,
                }),
                text,
                code: EXIT_OK,
            })
        }
        Command::Realize(args) => realize(args, s),
        Command::NormalForm { path } => {
            let f = s.parse::<FormFile>(path)?.to_form()?;
            let nf = f.normal_form();
            Ok(Outcome {
                result: json!({
                    "pair_exponents": nf.pair_exponents,
                    "radical_rank": nf.radical_rank,
                    "change_of_basis": rows_json(&nf.change_of_basis),
                    "block_form": rows_json(nf.block_form().gram()),
                    "q": f.q_invariant(),
                    "min_quotient_genus": classify::min_quotient_genus(&f),
                }),
                text: format!(
                    "{nf}\nchange of basis {:?}\nq {:?}",
                    nf.change_of_basis.to_rows(),
                    f.q_invariant().0
                ),
                code: EXIT_OK,
            })
        }
        Command::Oracle(args) => run_oracle(args),
    }
}

fn realize(args: &RealizeArgs, s: &mut Session) -> Result<Outcome, CliError> {
    let form = match (&args.q, &args.form) {
        (Some(q), None) => {
            let q: Vec<u32> =
                serde_json::from_str(q).map_err(|e| CliError::Schema(format!("--q: {e}")))?;
            let (p, k) = (
                args.p.expect("clap requires p"),
                args.k.expect("clap requires k"),
            );
            let md = modulus_of(p, k)?;
            let q = QTuple(q);
            let m = match args.m {
                Some(m) => m,
                None => {
                    let q1 = q.0.first().copied().unwrap_or(0) as usize;
                    if q1 == 0 {
                        2
                    } else {
                        q1
                    }
                }
            };
            AlternatingForm::from_q(&q, m, md)?
        }
        (None, Some(path)) => s.parse::<FormFile>(path)?.to_form()?,
        _ => {
            return Err(CliError::Schema(
                "realize needs exactly one of --q or --form".into(),
            ))
        }
    };
    let a = classify::realize(&form, args.genus)?;
    let file = ActionFile::from_descriptor(&a);
    let pretty = serde_json::to_string_pretty(&file).expect("serializable");
    if let Some(out) = &args.output {
        std::fs::write(out, format!("{pretty}\n"))
            .map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    }
    Ok(Outcome {
        result: json!({
            "action": to_value(&file),
            "covering_genus": a.covering_genus()?,
            "q": form.q_invariant(),
        }),
        text: pretty,
        code: EXIT_OK,
    })
}

fn run_oracle(args: &OracleArgs) -> Result<Outcome, CliError> {
    let md = Modulus::new(args.p, args.k)?;
    let mut checks: Vec<Value> = Vec::new();
    let mut lines = Vec::new();
    let mut all_ok = true;
    let wants = |s: Suite| args.suite == s || args.suite == Suite::All;
    for (suite, mode) in [(Suite::Strong, Mode::Strong), (Suite::Weak, Mode::Weak)] {
        if !wants(suite) {
            continue;
        }
        let r = oracle::orbit_agreement(md, args.m, args.g, mode, args.method.into(), args.budget)?;
        all_ok &= r.agree;
        let name = if mode == Mode::Strong {
            "strong"
        } else {
            "weak"
        };
        lines.push(if r.agree {
            format!("{name}: {}, agreement OK", plural(r.orbit_classes, "class"))
        } else {
            format!(
                "{name}: MISMATCH ({} orbits vs {} invariant classes)",
                r.orbit_classes, r.invariant_classes
            )
        });
        let mut v = to_value(&r);
        if let Value::Object(map) = &mut v {
            map.insert("suite".into(), json!(name));
        }
        checks.push(v);
    }
    if wants(Suite::Q) {
        let (forms, mismatches) = oracle::q_agreement_exhaustive(md, args.m, args.budget)?;
        all_ok &= mismatches == 0;
        lines.push(if mismatches == 0 {
            format!("q: {forms} forms, agreement OK")
        } else {
            format!("q: MISMATCH on {mismatches} of {forms} forms")
        });
        checks.push(json!({"suite": "q", "forms": forms, "mismatches": mismatches, "agree": mismatches == 0}));
    }
    if wants(Suite::Extension) {
        let ok = oracle::check_extension_property(args.g, md, args.m, args.budget)?;
        all_ok &= ok;
        lines.push(format!(
            "extension: {}",
            if ok {
                "agreement OK"
            } else {
                "COUNTEREXAMPLE FOUND"
            }
        ));
        checks.push(json!({"suite": "extension", "agree": ok}));
    }
    Ok(Outcome {
        result: json!({
            "p": args.p,
            "k": args.k,
            "m": args.m,
            "g": args.g,
            "checks": checks,
            "agree": all_ok,
        }),
        text: lines.join("\n"),
        code: if all_ok {
            EXIT_OK
        } else {
            EXIT_ORACLE_MISMATCH
        },
    })
}

/// Runs the CLI with explicit output streams; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_IO } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            return code;
        }
    };
    let mut session = Session { inputs: Vec::new() };
    let outcome = dispatch(&cli.command, &mut session);
    let command = command_name(&cli.command).to_string();
    let (code, report, text) = match outcome {
        Ok(o) => (
            o.code,
            Report {
                schema: SCHEMA_VERSION,
                version: env!("CARGO_PKG_VERSION"),
                command,
                inputs: session.inputs,
                result: Some(o.result),
                error: None,
            },
            Ok(o.text),
        ),
        Err(e) => (
            e.exit_code(),
            Report {
                schema: SCHEMA_VERSION,
                version: env!("CARGO_PKG_VERSION"),
                command,
                inputs: session.inputs,
                result: None,
                error: Some(json!({"kind": e.kind(), "message": e.message()})),
            },
            Err(format!("error: {}", e.message())),
        ),
    };
    let _ = if cli.json {
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&report).expect("serializable")
        )
    } else {
        match text {
            Ok(t) => writeln!(out, "{t}"),
            Err(t) => writeln!(err, "{t}"),
        }
    };
    code
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(args, &mut stdout.lock(), &mut stderr.lock())
}
