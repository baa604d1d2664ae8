//! The `hybis` command line.
//!
//! Exit status: 0 for success or a true verdict, 1 for a false verdict, 2
//! for usage and input errors, 3 when a resource guard refuses the
//! instance, 4 for unreadable or unwritable files.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::bisim::{
    self, decide_equiv_with, default_k, max_kl_family_with, verify_kl_family, verify_omega_family,
    verify_plain_bisim, BisimError, BisimFamily, Guard, Scope, VerifyReport,
};
use crate::model::{fixtures, KripkeModel, ModelError, PairRelation, PointedModel, RelationError, World};
use crate::oracle::{self, OracleConfig, OracleError};
use crate::semantics::{sat_hybrid, HybridContext, SemanticsError};
use crate::syntax::{
    infer_fol, infer_hybrid, parse_hybrid, FeatureSet, HybridFormula, ParseError, Signature,
};
use crate::translate::{self, Target, TranslateError};

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_GUARD: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "hybis", version, about = "Hybrid modal logic over finite Kripke structures")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a formula and print it with its degree and features.
    Parse {
        formula: String,
        /// Read the input as a first-order formula.
        #[arg(long)]
        fol: bool,
        #[arg(long)]
        sig: Option<PathBuf>,
    },
    /// Evaluate a formula at a world.
    Check {
        model: PathBuf,
        world: String,
        formula: String,
        /// Value of a free world variable, as `x=w`.
        #[arg(long = "assign", value_parser = parse_assign)]
        assign: Vec<(String, String)>,
        #[arg(long)]
        sig: Option<PathBuf>,
    },
    /// Standard translation into first-order logic.
    St {
        formula: String,
        /// Free variable of the output: `stx` or `sty`.
        #[arg(long, default_value = "stx")]
        var: String,
    },
    /// Back translation of a first-order formula with one free variable.
    Sbt {
        formula: String,
        /// Designated variable, which may be absent from a closed input.
        #[arg(long)]
        var: Option<String>,
    },
    /// Bound every quantifier by a unary predicate.
    Relativize { formula: String, pred: String },
    /// `phi_s | ((exists x . U(x)) -> sigma^U)`.
    PsiSigma {
        sigma: String,
        phi_s: String,
        #[arg(long, default_value = "U")]
        pred: String,
        #[arg(long, default_value = "c")]
        constant: String,
    },
    #[command(subcommand)]
    Bisim(BisimCommand),
    /// Decide bounded-degree equivalence through the maximal family.
    Equiv {
        #[command(flatten)]
        pair: PointPair,
        #[command(flatten)]
        bounds: Bounds,
    },
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// A formula whose models agree at degree L with some listed member.
    Axiomatise {
        /// Pointed models, as `FILE:WORLD`.
        #[arg(required = true)]
        members: Vec<String>,
        #[command(flatten)]
        bounds: Bounds,
    },
    #[command(subcommand)]
    Qinj(QinjCommand),
    #[command(subcommand)]
    Fixtures(FixturesCommand),
}

#[derive(Debug, Subcommand)]
enum BisimCommand {
    /// Check a relation, an F-(K,L) family or a list of omega relations.
    Verify {
        left: PathBuf,
        right: PathBuf,
        relation: PathBuf,
        #[arg(long, default_value = "none")]
        features: String,
        /// Check the seed pair `m,n` in every `Z[k][0]`.
        #[arg(long)]
        seed: Option<String>,
        /// Only check pairs whose points have depth below this bound.
        #[arg(long)]
        below: Option<usize>,
    },
    /// Compute the maximal F-(K,L) family.
    Maximal {
        left: PathBuf,
        right: PathBuf,
        #[command(flatten)]
        bounds: Bounds,
    },
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    /// Brute-force agreement on all formulas of degree at most L.
    Compare {
        #[command(flatten)]
        pair: PointPair,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// A formula separating the two points.
    Separate {
        #[command(flatten)]
        pair: PointPair,
        #[command(flatten)]
        bounds: Bounds,
    },
}

#[derive(Debug, Subcommand)]
enum QinjCommand {
    /// Check that a relation is a quasi-injective bisimulation.
    Verify {
        left: PathBuf,
        right: PathBuf,
        relation: PathBuf,
        #[arg(long)]
        below: Option<usize>,
    },
    /// Build the relations `B_0..B_k` from a quasi-injective bisimulation.
    Construct {
        left: PathBuf,
        right: PathBuf,
        relation: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        below: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
enum FixturesCommand {
    List,
    /// Print a fixture as JSON, or write its parts into a directory.
    Emit {
        name: String,
        params: Vec<usize>,
        /// Write `model.json`, or `left.json`, `right.json` and `relation.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct PointPair {
    left: PathBuf,
    left_world: String,
    right: PathBuf,
    right_world: String,
    #[arg(long)]
    sig: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Bounds {
    #[arg(long, default_value = "none")]
    features: String,
    /// Number of remembered worlds; defaults to L with a binder, else 0.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 1)]
    l: usize,
    #[arg(long, env = "HYBIS_MAX_PAIRS", default_value_t = bisim::DEFAULT_MAX_PAIRS)]
    max_pairs: u128,
    #[arg(long, env = "HYBIS_ORACLE_CAP", default_value_t = oracle::DEFAULT_CAP)]
    cap: usize,
}

impl Bounds {
    fn features(&self) -> Result<FeatureSet, CliError> {
        parse_features(&self.features)
    }

    fn k(&self) -> Result<usize, CliError> {
        Ok(self.k.unwrap_or_else(|| default_k(self.features().unwrap_or_default(), self.l)))
    }
}

fn parse_assign(text: &str) -> Result<(String, String), String> {
    match text.split_once('=') {
        Some((x, w)) if !x.is_empty() && !w.is_empty() => Ok((x.to_string(), w.to_string())),
        _ => Err(format!("expected `x=w`, got `{text}`")),
    }
}

fn parse_features(text: &str) -> Result<FeatureSet, CliError> {
    text.parse().map_err(|e: crate::syntax::UnknownFeature| CliError::usage(e))
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Guard(String),
    Io(String),
}

impl CliError {
    fn usage(e: impl std::fmt::Display) -> Self {
        CliError::Usage(e.to_string())
    }

    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Guard(_) => EXIT_GUARD,
            CliError::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Guard(m) | CliError::Io(m) => m,
        }
    }
}

macro_rules! usage_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::usage(e)
            }
        }
    )*};
}

usage_from!(ParseError, ModelError, RelationError, SemanticsError, TranslateError);

impl From<BisimError> for CliError {
    fn from(e: BisimError) -> Self {
        match e {
            BisimError::Guard { .. } => CliError::Guard(e.to_string()),
            other => CliError::usage(other),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Cap { .. } | OracleError::TooManyContexts { .. } => CliError::Guard(e.to_string()),
            other => CliError::usage(other),
        }
    }
}

/// Run the command line on `args` (including the program name), writing
/// results to `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_TRUE };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let mut printer = Printer { json: cli.json, text: String::new(), value: None };
    let result = dispatch(cli.command, &mut printer);
    match result {
        Ok(code) => {
            let written = match printer.value {
                Some(v) if printer.json => writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json")),
                _ => write!(out, "{}", printer.text),
            };
            if written.is_err() {
                return EXIT_IO;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}

struct Printer {
    json: bool,
    text: String,
    value: Option<Value>,
}

impl Printer {
    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn emit(&mut self, v: Value) {
        self.value = Some(v);
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_sig(path: &Path) -> Result<Signature, CliError> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Load models against `--sig`, or against the union of their signatures.
fn load_models(paths: &[&Path], sig: Option<&Path>) -> Result<Vec<KripkeModel>, CliError> {
    let texts = paths.iter().map(|p| read(p)).collect::<Result<Vec<_>, _>>()?;
    let sig = match sig {
        Some(p) => read_sig(p)?,
        None => {
            let mut acc = Signature::default();
            for t in &texts {
                acc = acc.union(&KripkeModel::signature_of_json(t)?).map_err(CliError::usage)?;
            }
            acc
        }
    };
    texts
        .iter()
        .map(|t| KripkeModel::from_json(t, &sig).map_err(CliError::from))
        .collect()
}

fn load_pair(left: &Path, right: &Path, sig: Option<&Path>) -> Result<(KripkeModel, KripkeModel), CliError> {
    let mut ms = load_models(&[left, right], sig)?;
    let r = ms.pop().expect("two models");
    let l = ms.pop().expect("two models");
    Ok((l, r))
}

fn world(model: &KripkeModel, name: &str) -> Result<World, CliError> {
    Ok(model.world_or_err(name)?)
}

fn pointed_pair(pair: &PointPair) -> Result<(PointedModel, PointedModel), CliError> {
    let (l, r) = load_pair(&pair.left, &pair.right, pair.sig.as_deref())?;
    let (a, b) = (world(&l, &pair.left_world)?, world(&r, &pair.right_world)?);
    Ok((PointedModel::new(l, a), PointedModel::new(r, b)))
}

fn scope(left: &KripkeModel, right: &KripkeModel, below: Option<usize>) -> Scope {
    match below {
        Some(b) => Scope::fixture_depth(left, right, b),
        None => Scope::All,
    }
}

fn verdict(b: bool) -> i32 {
    if b {
        EXIT_TRUE
    } else {
        EXIT_FALSE
    }
}

fn dispatch(cmd: Command, p: &mut Printer) -> Result<i32, CliError> {
    match cmd {
        Command::Parse { formula, fol, sig } => cmd_parse(&formula, fol, sig.as_deref(), p),
        Command::Check { model, world: w, formula, assign, sig } => {
            let m = load_models(&[&model], sig.as_deref())?.pop().expect("one model");
            let phi = parse_hybrid(&formula, m.signature())?;
            let point = world(&m, &w)?;
            let (slots, tuple): (Vec<String>, Vec<World>) = assign
                .iter()
                .map(|(x, v)| Ok((x.clone(), world(&m, v)?)))
                .collect::<Result<Vec<_>, CliError>>()?
                .into_iter()
                .unzip();
            let holds = sat_hybrid(&HybridContext::named(&m, slots, tuple, point), &phi)?;
            p.line(holds.to_string());
            p.emit(json!({ "formula": phi.to_string(), "world": w, "holds": holds }));
            Ok(verdict(holds))
        }
        Command::St { formula, var } => {
            let target = match var.as_str() {
                "stx" | "x" => Target::X,
                "sty" | "y" => Target::Y,
                other => return Err(CliError::Usage(format!("unknown translation variable `{other}`"))),
            };
            let (phi, _) = infer_hybrid(&formula)?;
            let out = translate::st(&phi, target)?;
            p.line(out.to_string());
            p.emit(json!({ "input": phi.to_string(), "free": target.var(), "output": out.to_string() }));
            Ok(EXIT_TRUE)
        }
        Command::Sbt { formula, var } => {
            let (phi, sig) = infer_fol(&formula)?;
            let out = match var {
                Some(x) => translate::sbt_from(&phi, &x, sig.base())?,
                None => translate::sbt(&phi, sig.base())?,
            };
            p.line(out.to_string());
            p.emit(json!({ "input": phi.to_string(), "output": out.to_string() }));
            Ok(EXIT_TRUE)
        }
        Command::Relativize { formula, pred } => {
            let (phi, _) = infer_fol(&formula)?;
            let out = translate::relativise(&phi, &pred)?;
            p.line(out.to_string());
            p.emit(json!({ "input": phi.to_string(), "pred": pred, "output": out.to_string() }));
            Ok(EXIT_TRUE)
        }
        Command::PsiSigma { sigma, phi_s, pred, constant } => {
            let (sigma, _) = infer_fol(&sigma)?;
            let (phi_s, _) = infer_fol(&phi_s)?;
            let out = translate::psi_sigma(&sigma, &phi_s, &pred, &constant)?;
            p.line(out.to_string());
            p.emit(json!({ "output": out.to_string() }));
            Ok(EXIT_TRUE)
        }
        Command::Bisim(BisimCommand::Verify { left, right, relation, features, seed, below }) => {
            cmd_bisim_verify(&left, &right, &relation, &features, seed.as_deref(), below, p)
        }
        Command::Bisim(BisimCommand::Maximal { left, right, bounds }) => {
            let (l, r) = load_pair(&left, &right, None)?;
            let fam = max_kl_family_with(&l, &r, bounds.features()?, bounds.k()?, bounds.l, Guard::new(bounds.max_pairs))?;
            for k in 0..=fam.k_max() {
                let sizes: Vec<String> = (0..=fam.l_max()).map(|i| fam.get(k, i).len().to_string()).collect();
                p.line(format!("k={k}: {}", sizes.join(" ")));
            }
            p.emit(fam.to_json_value(&l, &r));
            Ok(EXIT_TRUE)
        }
        Command::Equiv { pair, bounds } => {
            let (mp, np) = pointed_pair(&pair)?;
            let (f, k) = (bounds.features()?, bounds.k()?);
            let eq = decide_equiv_with(&mp, &np, f, bounds.l, Some(k), Guard::new(bounds.max_pairs))?;
            p.line(eq.to_string());
            let mut v = json!({ "equivalent": eq, "features": f.to_string(), "k": k, "l": bounds.l });
            if !eq {
                let cfg = OracleConfig { cap: bounds.cap, ..OracleConfig::default() };
                if let Some(phi) = oracle::separating_formula(&mp, &np, f, k, bounds.l, &cfg)? {
                    p.line(format!("separator: {phi}"));
                    v["separator"] = json!(phi.to_string());
                }
            }
            p.emit(v);
            Ok(verdict(eq))
        }
        Command::Oracle(OracleCommand::Compare { pair, bounds }) => {
            let (mp, np) = pointed_pair(&pair)?;
            let (f, k) = (bounds.features()?, bounds.k()?);
            let agree = oracle::agree_up_to(&mp, &np, f, k, bounds.l, bounds.cap)?;
            p.line(agree.to_string());
            p.emit(json!({ "agree": agree, "features": f.to_string(), "k": k, "l": bounds.l }));
            Ok(verdict(agree))
        }
        Command::Oracle(OracleCommand::Separate { pair, bounds }) => {
            let (mp, np) = pointed_pair(&pair)?;
            let (f, k) = (bounds.features()?, bounds.k()?);
            let cfg = OracleConfig { cap: bounds.cap, ..OracleConfig::default() };
            let phi = oracle::separating_formula(&mp, &np, f, k, bounds.l, &cfg)?;
            match &phi {
                Some(phi) => p.line(phi.to_string()),
                None => p.line("none"),
            }
            p.emit(json!({
                "separator": phi.as_ref().map(HybridFormula::to_string),
                "degree": phi.as_ref().map(HybridFormula::degree),
            }));
            Ok(verdict(phi.is_some()))
        }
        Command::Axiomatise { members, bounds } => cmd_axiomatise(&members, &bounds, p),
        Command::Qinj(QinjCommand::Verify { left, right, relation, below }) => {
            let (l, r) = load_pair(&left, &right, None)?;
            let rel = PairRelation::from_json(&read(&relation)?, &l, &r)?;
            let ok = bisim::is_quasi_injective(&l, &r, &rel, &scope(&l, &r, below))?;
            p.line(ok.to_string());
            p.emit(json!({ "quasi_injective": ok }));
            Ok(verdict(ok))
        }
        Command::Qinj(QinjCommand::Construct { left, right, relation, k, below }) => {
            let (l, r) = load_pair(&left, &right, None)?;
            let rel = PairRelation::from_json(&read(&relation)?, &l, &r)?;
            let fam = bisim::qinj_to_family(&l, &r, &rel, k, &scope(&l, &r, below))?;
            for (kk, b) in fam.iter().enumerate() {
                p.line(format!("B_{kk}: {} pair(s)", b.len()));
            }
            p.emit(Value::Array(fam.iter().map(|b| b.to_json_value(&l, &r)).collect()));
            Ok(EXIT_TRUE)
        }
        Command::Fixtures(FixturesCommand::List) => {
            let mut items = Vec::new();
            for (name, params, summary) in fixtures::CATALOGUE {
                let head = if params.is_empty() { name.to_string() } else { format!("{name} {params}") };
                p.line(format!("{head:<14} {summary}"));
                items.push(json!({ "name": name, "params": params, "summary": summary }));
            }
            p.emit(Value::Array(items));
            Ok(EXIT_TRUE)
        }
        Command::Fixtures(FixturesCommand::Emit { name, params, out }) => cmd_emit(&name, &params, out.as_deref(), p),
    }
}

fn cmd_parse(text: &str, fol: bool, sig: Option<&Path>, p: &mut Printer) -> Result<i32, CliError> {
    if fol {
        let (phi, _) = infer_fol(text)?;
        p.line(phi.to_string());
        let free: Vec<String> = phi.free_vars().into_iter().collect();
        p.emit(json!({ "formula": phi.to_string(), "size": phi.size(), "free": free }));
        return Ok(EXIT_TRUE);
    }
    let phi = match sig {
        Some(path) => parse_hybrid(text, &read_sig(path)?)?,
        None => infer_hybrid(text)?.0,
    };
    let free: Vec<String> = phi.free_wvars().into_iter().collect();
    p.line(phi.to_string());
    p.line(format!("degree {}, size {}, features {}", phi.degree(), phi.size(), phi.features()));
    p.emit(json!({
        "formula": phi.to_string(),
        "degree": phi.degree(),
        "size": phi.size(),
        "features": phi.features().to_string(),
        "free": free,
        "sentence": phi.is_sentence(),
    }));
    Ok(EXIT_TRUE)
}

fn cmd_bisim_verify(
    left: &Path,
    right: &Path,
    relation: &Path,
    features: &str,
    seed: Option<&str>,
    below: Option<usize>,
    p: &mut Printer,
) -> Result<i32, CliError> {
    let (l, r) = load_pair(left, right, None)?;
    let f = parse_features(features)?;
    let sc = scope(&l, &r, below);
    let doc: Value = serde_json::from_str(&read(relation)?).map_err(CliError::usage)?;
    let report: VerifyReport = if doc.get("levels").is_some() {
        let fam = BisimFamily::from_json_value(doc, &l, &r)?;
        let seed = match seed {
            Some(s) => {
                let (a, b) = s
                    .split_once(',')
                    .ok_or_else(|| CliError::Usage(format!("expected `m,n`, got `{s}`")))?;
                Some((world(&l, a)?, world(&r, b)?))
            }
            None => None,
        };
        verify_kl_family(&l, &r, &fam, f, seed, &sc)?
    } else if let Value::Array(items) = doc {
        let rels = items
            .into_iter()
            .map(|v| PairRelation::from_json_value(v, &l, &r))
            .collect::<Result<Vec<_>, _>>()?;
        let kbound = rels.len().saturating_sub(1);
        verify_omega_family(&l, &r, &rels, f, kbound, &sc)?
    } else {
        let rel = PairRelation::from_json_value(doc, &l, &r)?;
        verify_plain_bisim(&l, &r, &rel, f.contains(crate::syntax::Feature::Nom), &sc)?
    };
    p.text.push_str(&report.render(&l, &r));
    p.emit(report.to_json_value(&l, &r));
    Ok(verdict(report.ok))
}

fn cmd_axiomatise(members: &[String], bounds: &Bounds, p: &mut Printer) -> Result<i32, CliError> {
    let mut paths = Vec::new();
    let mut worlds = Vec::new();
    for m in members {
        let (path, w) = m
            .rsplit_once(':')
            .ok_or_else(|| CliError::Usage(format!("expected `FILE:WORLD`, got `{m}`")))?;
        paths.push(PathBuf::from(path));
        worlds.push(w.to_string());
    }
    let refs: Vec<&Path> = paths.iter().map(PathBuf::as_path).collect();
    let models = load_models(&refs, None)?;
    let ks = models
        .into_iter()
        .zip(&worlds)
        .map(|(m, w)| {
            let point = world(&m, w)?;
            Ok(PointedModel::new(m, point))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let (f, k) = (bounds.features()?, bounds.k()?);
    let phi = oracle::axiomatise(&ks, f, k, bounds.l, bounds.cap)?;
    p.line(phi.to_string());
    p.emit(json!({ "formula": phi.to_string(), "degree": phi.degree(), "size": phi.size(), "k": k }));
    Ok(EXIT_TRUE)
}

fn cmd_emit(name: &str, params: &[usize], out: Option<&Path>, p: &mut Printer) -> Result<i32, CliError> {
    let fx = fixtures::fixture(name, params).map_err(CliError::usage)?;
    let (value, files): (Value, Vec<(&str, Value)>) = match &fx {
        fixtures::Fixture::Model(m) => (m.to_json_value(), vec![("model.json", m.to_json_value())]),
        fixtures::Fixture::Related(rel) => {
            let parts = vec![
                ("left.json", rel.left.to_json_value()),
                ("right.json", rel.right.to_json_value()),
                ("relation.json", rel.relation.to_json_value(&rel.left, &rel.right)),
            ];
            let v = json!({ "left": parts[0].1, "right": parts[1].1, "relation": parts[2].1 });
            (v, parts)
        }
    };
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
            for (file, v) in files {
                let path = dir.join(file);
                write_file(&path, &serde_json::to_string_pretty(&v).expect("json"))?;
                p.line(path.display().to_string());
            }
        }
        None => p.line(serde_json::to_string_pretty(&value).expect("json")),
    }
    p.emit(value);
    Ok(EXIT_TRUE)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("hybis").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn st_prints_the_translation() {
        let (code, out, _) = call(&["st", "<> p"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "exists sty . (R(stx,sty) & P(sty))");
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(call(&["st", "<> ("]).0, EXIT_USAGE);
        assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(call(&["equiv", "a", "b"]).0, EXIT_USAGE);
        assert_eq!(call(&["check", "/nonexistent/m.json", "w", "p"]).0, EXIT_IO);
    }

    #[test]
    fn fixture_listing() {
        let (code, out, _) = call(&["fixtures", "list"]);
        assert_eq!(code, 0);
        assert!(out.contains("fig3_UN D"));
        let (_, json_out, _) = call(&["--json", "fixtures", "list"]);
        let v: Value = serde_json::from_str(&json_out).unwrap();
        assert_eq!(v.as_array().unwrap().len(), fixtures::CATALOGUE.len());
    }
}
