//! Command-line front end: builtin models, analysis reports, bundle diagrams
//! and modal-logic checks.

pub mod dot;
pub mod json;
pub mod report;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use sheafmodal::builders::{build_fr_model, build_pr_model, build_wigner_model, BuildError};
use sheafmodal::contextuality::ContextualityError;
use sheafmodal::empirical::{EmpiricalModel, ModelError};
use sheafmodal::modal::{
    check_axioms, check_trust, check_trustworthy, fundamental_truth_check, parse, translate,
    ModalError, TopoModel, TrustFlavor,
};
use sheafmodal::scenario::ScenarioError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),
    #[error("parse error: {0}")]
    Format(String),
    #[error("unknown builtin `{0}` (expected fr, pr, wigner-compat or wigner-incompat)")]
    UnknownBuiltin(String),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Contextuality(#[from] ContextualityError),
    #[error(transparent)]
    Modal(#[from] ModalError),
}

impl From<BuildError> for CliError {
    fn from(e: BuildError) -> Self {
        match e {
            BuildError::Model(m) => CliError::Model(m),
            BuildError::Scenario(s) => CliError::Scenario(s),
            other => CliError::BadParameters(other.to_string()),
        }
    }
}

/// Exit status for any failure.
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "sheafmodal", version, about = "Contextuality and multi-agent knowledge in empirical models")]
pub struct Cli {
    /// Human-readable text instead of JSON where available.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Worker threads for the global-section search.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit one of the builtin models as JSON.
    Builtin {
        /// fr, pr, wigner-compat or wigner-incompat
        name: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<f64>,
    },
    /// Classify a model and report witnesses, fraction and decomposition.
    Analyze {
        model: PathBuf,
        /// Cycle order for the liar-cycle search, e.g. U,B,A,W.
        #[arg(long)]
        order: Option<String>,
    },
    /// Export the possibilistic bundle as Graphviz DOT.
    Bundle {
        model: PathBuf,
        #[arg(long)]
        order: Option<String>,
    },
    /// Summarize the multi-agent reading of a model.
    Translate { model: PathBuf },
    /// Checks on Kripke models.
    #[command(subcommand)]
    Modal(ModalCommand),
}

#[derive(Debug, Args)]
pub struct TopoArgs {
    /// Kripke model JSON.
    pub model: PathBuf,
    /// Accept relations that are not reflexive and transitive.
    #[arg(long)]
    pub unchecked: bool,
}

#[derive(Debug, Subcommand)]
pub enum ModalCommand {
    /// Worlds satisfying a formula.
    Eval {
        #[command(flatten)]
        topo: TopoArgs,
        #[arg(short, long)]
        formula: String,
    },
    /// Whether one agent group trusts another for every proposition.
    Trust {
        #[command(flatten)]
        topo: TopoArgs,
        #[arg(long, value_delimiter = ',')]
        truster: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        trusted: Vec<String>,
        /// E (mutual) or D (distributed) knowledge of the trusted group.
        #[arg(long, default_value = "D")]
        flavor: String,
    },
    /// Whether whatever `i` knows `j` knows, `j` knows.
    Trustworthy {
        #[command(flatten)]
        topo: TopoArgs,
        i: String,
        j: String,
    },
    /// Validity of the K, T and 4 schemata.
    Axioms {
        #[command(flatten)]
        topo: TopoArgs,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Variables to build formulas from; defaults to the valuation's.
        #[arg(long, value_delimiter = ',')]
        vars: Vec<String>,
    },
    /// Trust vacuity and distributed-knowledge truth checks.
    Truth {
        #[command(flatten)]
        topo: TopoArgs,
    },
}

pub fn builtin_model(name: &str, alpha: Option<f64>, beta: Option<f64>) -> Result<EmpiricalModel, CliError> {
    let default = std::f64::consts::FRAC_1_SQRT_2;
    let (a, b) = (alpha.unwrap_or(default), beta.unwrap_or(default));
    if (alpha.is_some() || beta.is_some()) && !name.starts_with("wigner") {
        return Err(CliError::BadParameters(format!("{name} takes no --alpha/--beta")));
    }
    match name {
        "fr" => Ok(build_fr_model()?),
        "pr" => Ok(build_pr_model()),
        "wigner-compat" => Ok(build_wigner_model(a, b, true)?),
        "wigner-incompat" => Ok(build_wigner_model(a, b, false)?),
        other => Err(CliError::UnknownBuiltin(other.to_string())),
    }
}

fn emit(cli: &Cli, stdout: &mut dyn Write, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(path.display().to_string(), e)),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io("stdout".into(), e)),
    }
}

fn emit_json(cli: &Cli, stdout: &mut dyn Write, value: &serde_json::Value) -> Result<(), CliError> {
    let mut buf = Vec::new();
    json::write_json(&mut buf, value)?;
    emit(cli, stdout, &String::from_utf8(buf).expect("JSON is UTF-8"))
}

fn load_topo(args: &TopoArgs) -> Result<TopoModel, CliError> {
    json::topo_from_json(&json::read_json(&args.model)?, !args.unchecked)
}

fn order_arg(model: &EmpiricalModel, order: &Option<String>) -> Result<Option<Vec<usize>>, CliError> {
    order
        .as_deref()
        .map(|o| report::parse_order(model.scenario(), o))
        .transpose()
}

fn read_model(path: &Path) -> Result<EmpiricalModel, CliError> {
    json::read_model(path)
}

/// Runs a parsed command line, returning the process exit status.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Builtin { name, alpha, beta } => {
            let model = builtin_model(name, *alpha, *beta)?;
            emit_json(cli, stdout, &json::model_to_json(&model))?;
            Ok(0)
        }
        Command::Analyze { model, order } => {
            let model = read_model(model)?;
            let order = order_arg(&model, order)?;
            let analysis = report::analyze(&model, cli.jobs, order.as_deref())?;
            if cli.pretty {
                emit(cli, stdout, &analysis.text)?;
            } else {
                emit_json(cli, stdout, &analysis.json)?;
            }
            Ok(analysis.exit)
        }
        Command::Bundle { model, order } => {
            let model = read_model(model)?;
            let order = order_arg(&model, order)?;
            emit(cli, stdout, &dot::bundle_dot(&model, order.as_deref())?)?;
            Ok(0)
        }
        Command::Translate { model } => {
            let model = read_model(model)?;
            let t = translate(&model)?;
            let s = model.scenario();
            let group = |g: &[usize]| g.iter().map(|m| s.measurement_name(*m)).collect::<Vec<_>>().join(",");
            let value = json!({
                "agents": t.agents,
                "trust_pairs": t.trust_pairs.iter().map(|(g, h)| json!([group(g), group(h)])).collect::<Vec<_>>(),
                "mutual_worlds": t.mutual_worlds.iter().map(|w| s.section_label_full(w)).collect::<Vec<_>>(),
                "distributed_worlds": t.distributed_worlds.iter().map(|(c, w)| json!({
                    "context": s.context_label(c),
                    "section": s.section_label_full(w),
                })).collect::<Vec<_>>(),
            });
            emit_json(cli, stdout, &value)?;
            Ok(0)
        }
        Command::Modal(cmd) => run_modal(cli, cmd, stdout),
    }
}

fn run_modal(cli: &Cli, cmd: &ModalCommand, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let value = match cmd {
        ModalCommand::Eval { topo, formula } => {
            let m = load_topo(topo)?;
            let f = parse(formula).map_err(ModalError::from)?;
            let set = m.eval(&f)?;
            json!({
                "formula": f.to_string(),
                "worlds": m.world_names(&set),
                "valid": set.count_ones(..) == m.world_count(),
            })
        }
        ModalCommand::Trust { topo, truster, trusted, flavor } => {
            let m = load_topo(topo)?;
            let flavor = match flavor.as_str() {
                "E" | "e" => TrustFlavor::Mutual,
                "D" | "d" => TrustFlavor::Distributed,
                other => return Err(CliError::BadParameters(format!("flavor must be E or D, got {other}"))),
            };
            json!({
                "truster": truster,
                "trusted": trusted,
                "flavor": flavor.name(),
                "trusts": check_trust(&m, truster, trusted, flavor)?,
            })
        }
        ModalCommand::Trustworthy { topo, i, j } => {
            let m = load_topo(topo)?;
            json!({ "i": i, "j": j, "trustworthy": check_trustworthy(&m, i, j)? })
        }
        ModalCommand::Axioms { topo, depth, vars } => {
            let m = load_topo(topo)?;
            let vars: Vec<String> = if vars.is_empty() {
                m.valuation().keys().cloned().collect()
            } else {
                vars.clone()
            };
            let r = check_axioms(&m, &vars, *depth)?;
            json!({
                "formulas": r.formulas,
                "valid": r.all_valid(),
                "schemata": r.results.iter().map(|x| json!({
                    "schema": x.schema.name(),
                    "operator": x.operator,
                    "instances": x.instances,
                    "valid": x.valid(),
                    "witness": x.witness.as_ref().map(|w| json!({
                        "instance": w.instance.to_string(),
                        "world": w.world,
                    })),
                })).collect::<Vec<_>>(),
            })
        }
        ModalCommand::Truth { topo } => {
            let m = load_topo(topo)?;
            let r = fundamental_truth_check(&m)?;
            json!({
                "reflexive": r.reflexive,
                "pairs_checked": r.pairs_checked,
                "trust_vacuous": r.trust_vacuous(),
                "trust_failures": r.trust_failures.iter().map(|f| json!({
                    "truster": f.truster,
                    "trusted": f.trusted,
                    "flavor": f.flavor.name(),
                })).collect::<Vec<_>>(),
                "formulas_checked": r.formulas_checked,
                "distributed_implies_truth": r.distributed_implies_truth(),
                "distributed_is_identity": r.distributed_is_identity,
                "fundamental_truth": r.fundamental_truth,
            })
        }
    };
    emit_json(cli, stdout, &value)?;
    Ok(0)
}
