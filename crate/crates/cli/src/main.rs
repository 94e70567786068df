//! `hseq`: command-line front end for the hypersequent proof kernel.
//!
//! Exit codes: 0 success, 1 usage, 2 parse, 3 rejected / not found / no
//! countermodel, 4 internal error.

use std::fmt;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hseq_core::calculus::{Base, CalculusConfig, RuleId};
use hseq_core::checker::{check_proof, proof_stats, BundleError, ProofBundle};
use hseq_core::export::to_bussproofs;
use hseq_core::search::{prove, SearchBudget};
use hseq_core::semantics::{countermodel_search, parse_model, Bounds, ModelClass};
use hseq_core::syntax::{parse_formula, parse_hypersequent, parse_term, Formula, Notation, ParseError};
use hseq_core::transform::{extract_component_proof, hyperseq_formula, TranslationMode};

#[derive(Parser)]
#[command(name = "hseq", version, about = "Proof kernel for hypersequent calculi of intermediate logics")]
struct Cli {
    /// Output style.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a hypersequent (or formula) and print it in canonical form.
    Parse { input: PathBuf },
    /// Check a proof file.
    Check {
        proof: PathBuf,
        #[command(flatten)]
        calc: CalcFlags,
    },
    /// Search for a proof of a hypersequent and write it as a proof file.
    Prove {
        goal: PathBuf,
        #[command(flatten)]
        calc: CalcFlags,
        #[command(flatten)]
        budget: BudgetFlags,
        /// Where to write the proof (standard output by default).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Translate a hypersequent into a formula.
    Translate {
        input: PathBuf,
        #[arg(long, default_value = "shared")]
        mode: TranslationMode,
    },
    /// Extract a sequent proof of one root component from a communication-free proof.
    Extract {
        proof: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Search for a finite Kripke countermodel, or evaluate in a given model.
    Countermodel {
        input: PathBuf,
        /// Frame class; defaults to the class of the calculus flags, else `all`.
        #[arg(long)]
        class: Option<ModelClass>,
        #[arg(long, default_value_t = 3)]
        max_worlds: usize,
        #[arg(long, default_value_t = 2)]
        max_domain: usize,
        #[arg(long, default_value_t = 2)]
        max_atoms: usize,
        /// Evaluate in this model dump instead of searching.
        #[arg(long, conflicts_with = "class")]
        model: Option<PathBuf>,
        #[command(flatten)]
        calc: CalcFlags,
    },
    /// Render a proof file as a bussproofs derivation.
    Export {
        proof: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Default)]
struct CalcFlags {
    /// Named calculus, e.g. GD-com, QHLJ', LJ'.
    #[arg(long, conflicts_with_all = ["base", "enable", "disable", "width_cap", "quantifiers"])]
    preset: Option<String>,
    /// Base discipline: classical, lj or ljprime.
    #[arg(long)]
    base: Option<Base>,
    /// Optional rule to switch on (repeatable).
    #[arg(long)]
    enable: Vec<RuleId>,
    /// Optional rule to switch off (repeatable).
    #[arg(long)]
    disable: Vec<RuleId>,
    #[arg(long)]
    width_cap: Option<usize>,
    /// Enable the quantifier rules.
    #[arg(long)]
    quantifiers: bool,
}

#[derive(Args)]
struct BudgetFlags {
    #[arg(long, default_value_t = 12)]
    depth: usize,
    #[arg(long, default_value_t = 4)]
    width: usize,
    #[arg(long, default_value_t = 2)]
    contractions: usize,
    /// Witness terms for the quantifier rules, comma separated.
    #[arg(long, value_delimiter = ',')]
    witnesses: Vec<String>,
    /// Cut formulas, semicolon separated.
    #[arg(long, value_delimiter = ';')]
    cuts: Vec<String>,
}

/// A failure with its exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Parse(String),
    Negative(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Negative(_) => 3,
            Failure::Internal(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Parse(m) | Failure::Negative(m) | Failure::Internal(m) => f.write_str(m),
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e.to_string())
    }
}

impl From<BundleError> for Failure {
    fn from(e: BundleError) -> Self {
        match e {
            BundleError::Config(e) => Failure::Usage(e.to_string()),
            e => Failure::Parse(e.to_string()),
        }
    }
}

/// What a command prints: the human text, the machine value, and whether it
/// counts as a negative outcome.
struct Report {
    human: String,
    machine: Value,
    negative: bool,
}

impl Report {
    fn ok(human: impl Into<String>, machine: Value) -> Self {
        Report { human: human.into(), machine, negative: false }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write_artifact(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Internal(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

impl CalcFlags {
    fn given(&self) -> bool {
        self.preset.is_some()
            || self.base.is_some()
            || !self.enable.is_empty()
            || !self.disable.is_empty()
            || self.width_cap.is_some()
            || self.quantifiers
    }

    fn config(&self) -> Result<Option<(Option<String>, CalculusConfig)>, Failure> {
        let usage = |e: hseq_core::calculus::ConfigError| Failure::Usage(e.to_string());
        if let Some(p) = &self.preset {
            return Ok(Some((Some(p.clone()), CalculusConfig::preset(p).map_err(usage)?)));
        }
        if !self.given() {
            return Ok(None);
        }
        let base = self.base.ok_or_else(|| Failure::Usage("explicit rule flags need --base".into()))?;
        let mut cfg = CalculusConfig::new(base);
        cfg.quantifiers_enabled = self.quantifiers;
        cfg.width_cap = self.width_cap;
        for &r in &self.enable {
            cfg.enable(r).map_err(usage)?;
        }
        for &r in &self.disable {
            cfg.disable(r).map_err(usage)?;
        }
        cfg.validate().map_err(usage)?;
        Ok(Some((None, cfg)))
    }

    fn required(&self) -> Result<(Option<String>, CalculusConfig), Failure> {
        self.config()?.ok_or_else(|| Failure::Usage("no calculus given: use --preset or --base".into()))
    }
}

/// Reads a formula, or a hypersequent via its shared translation.
fn formula_input(text: &str) -> Result<Formula, Failure> {
    if text.contains("|-") {
        let h = parse_hypersequent(text.trim())?;
        hyperseq_formula(&h, TranslationMode::Shared).map_err(|e| Failure::Negative(e.to_string()))
    } else {
        Ok(parse_formula(text.trim())?)
    }
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Parse { input } => {
            let text = read(input)?;
            if text.contains("|-") {
                let h = parse_hypersequent(text.trim())?;
                let free: Vec<String> = h.free_vars_ordered().iter().map(ToString::to_string).collect();
                Ok(Report::ok(
                    h.to_string(),
                    json!({ "kind": "hypersequent", "text": h.to_string(), "width": h.width(), "free_variables": free }),
                ))
            } else {
                let f = parse_formula(text.trim())?;
                let free: Vec<String> = f.free_vars_ordered().iter().map(ToString::to_string).collect();
                let latex = f.display_with(&Notation::LATEX).to_string();
                Ok(Report::ok(
                    f.to_string(),
                    json!({ "kind": "formula", "text": f.to_string(), "latex": latex, "free_variables": free }),
                ))
            }
        }
        Command::Check { proof, calc } => {
            let bundle = ProofBundle::from_json(&read(proof)?)?;
            let cfg = calc.config()?.map_or(bundle.config, |(_, c)| c);
            let r = check_proof(&cfg, &bundle.proof);
            let stats = proof_stats(&bundle.proof);
            let histogram: serde_json::Map<String, Value> =
                r.rule_histogram.iter().map(|(k, v)| (k.name().to_string(), json!(v))).collect();
            let error = r
                .error
                .as_ref()
                .map(|e| json!({ "path": e.path, "kind": e.kind.name(), "message": e.kind.to_string() }));
            let machine = json!({
                "verdict": r.verdict.to_string(),
                "steps": r.steps,
                "rule_histogram": histogram,
                "error": error,
                "formulas": stats.formulas,
                "symbols": stats.symbols,
            });
            let human = match &r.error {
                None => format!("accepted, {} steps", r.steps),
                Some(e) => format!("rejected {e}"),
            };
            Ok(Report { human, machine, negative: !r.accepted() })
        }
        Command::Prove { goal, calc, budget, output } => {
            let (preset, cfg) = calc.required()?;
            let goal = parse_hypersequent(read(goal)?.trim())?;
            let witnesses = budget.witnesses.iter().map(|t| parse_term(t.trim())).collect::<Result<Vec<_>, _>>()?;
            let cuts = budget
                .cuts
                .iter()
                .filter(|c| !c.trim().is_empty())
                .map(|c| parse_formula(c.trim()))
                .collect::<Result<Vec<_>, _>>()?;
            let b = SearchBudget {
                max_depth: budget.depth,
                max_width: budget.width,
                max_contractions: budget.contractions,
                witnesses,
                cut_formulas: cuts,
            };
            b.validate().map_err(|e| Failure::Usage(e.to_string()))?;
            let out = prove(&cfg, &goal, &b);
            let stats = json!({ "nodes": out.stats.nodes, "depth": out.stats.depth, "exhausted": out.stats.exhausted });
            match out.proof {
                Some(p) => {
                    let steps = p.size();
                    let bundle = match preset {
                        Some(name) => {
                            ProofBundle::with_preset(&name, p).map_err(|e| Failure::Internal(e.to_string()))?
                        }
                        None => ProofBundle::new(cfg, p),
                    };
                    let text = bundle.to_json();
                    if output.is_none() && cli.format == Format::Human {
                        return Ok(Report::ok(text.trim_end(), Value::Null));
                    }
                    write_artifact(output.as_deref(), &text)?;
                    let human = format!("found, {steps} steps ({})", out.stats);
                    let mut machine = json!({ "found": true, "steps": steps, "search": stats });
                    if output.is_none() {
                        machine["proof"] = serde_json::from_str(&text).expect("bundle is JSON");
                    }
                    Ok(Report::ok(human, machine))
                }
                None => Ok(Report {
                    human: format!("not found within budget ({})", out.stats),
                    machine: json!({ "found": false, "search": stats }),
                    negative: true,
                }),
            }
        }
        Command::Translate { input, mode } => {
            let h = parse_hypersequent(read(input)?.trim())?;
            let f = hyperseq_formula(&h, *mode).map_err(|e| Failure::Negative(e.to_string()))?;
            Ok(Report::ok(f.to_string(), json!({ "mode": mode.to_string(), "formula": f.to_string() })))
        }
        Command::Extract { proof, output } => {
            let bundle = ProofBundle::from_json(&read(proof)?)?;
            let (k, p) = extract_component_proof(&bundle.proof).map_err(|e| Failure::Negative(e.to_string()))?;
            let component = bundle.proof.conclusion.components[k].to_string();
            let (before, after) = (proof_stats(&bundle.proof), proof_stats(&p));
            let text = ProofBundle::with_preset("LJ'", p).map_err(|e| Failure::Internal(e.to_string()))?.to_json();
            if output.is_none() && cli.format == Format::Human {
                return Ok(Report::ok(format!("component {k}: {component}\n{}", text.trim_end()), Value::Null));
            }
            write_artifact(output.as_deref(), &text)?;
            let mut machine = json!({
                "component": k,
                "sequent": component,
                "before": { "steps": before.steps, "formulas": before.formulas, "symbols": before.symbols },
                "after": { "steps": after.steps, "formulas": after.formulas, "symbols": after.symbols },
            });
            if output.is_none() {
                machine["proof"] = serde_json::from_str(&text).expect("bundle is JSON");
            }
            Ok(Report::ok(format!("component {k}: {component} ({before} -> {after})"), machine))
        }
        Command::Countermodel { input, class, max_worlds, max_domain, max_atoms, model, calc } => {
            let f = formula_input(&read(input)?)?;
            if let Some(path) = model {
                let m = parse_model(&read(path)?).map_err(|e| Failure::Parse(e.to_string()))?;
                return Ok(match m.refuting_world(&f) {
                    Some(w) => Report::ok(format!("refuted at world {w}"), json!({ "refuted": true, "world": w })),
                    None => Report {
                        human: "valid in the model".into(),
                        machine: json!({ "refuted": false }),
                        negative: true,
                    },
                });
            }
            let (derived, cap) = match calc.config()? {
                Some((_, cfg)) => ModelClass::for_config(&cfg),
                None => (ModelClass::AllPosets, None),
            };
            let class = class.unwrap_or(derived);
            let worlds = cap.map_or(*max_worlds, |c| c.min(*max_worlds));
            let bounds = Bounds::new(worlds, *max_domain, *max_atoms);
            let found = countermodel_search(&f, class, bounds).map_err(|e| Failure::Usage(e.to_string()))?;
            let limits = json!({ "class": class.name(), "max_worlds": worlds, "max_domain": max_domain, "max_atoms": max_atoms });
            Ok(match found {
                Some(m) => {
                    let dump = m.to_string();
                    Report::ok(dump.trim_end(), json!({ "found": true, "bounds": limits, "model": dump }))
                }
                None => Report {
                    human: format!("none within bounds (class {class}, {worlds} worlds, {max_domain} individuals)"),
                    machine: json!({ "found": false, "bounds": limits }),
                    negative: true,
                },
            })
        }
        Command::Export { proof, output } => {
            let bundle = ProofBundle::from_json(&read(proof)?)?;
            let text = to_bussproofs(&bundle.proof);
            if output.is_none() && cli.format == Format::Human {
                return Ok(Report::ok(text.trim_end(), Value::Null));
            }
            write_artifact(output.as_deref(), &text)?;
            let mut machine = json!({ "steps": bundle.proof.size() });
            if output.is_none() {
                machine["latex"] = json!(text);
            }
            Ok(Report::ok(format!("wrote {} steps", bundle.proof.size()), machine))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let machine = cli.format == Format::Machine;
    let result = std::panic::catch_unwind(|| run(&cli)).unwrap_or_else(|panic| {
        let msg = panic
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(Failure::Internal(format!("internal error: {msg}")))
    });
    let mut stdout = std::io::stdout();
    match result {
        Ok(report) => {
            let text = if machine { report.machine.to_string() } else { report.human };
            let _ = writeln!(stdout, "{text}");
            ExitCode::from(if report.negative { 3 } else { 0 })
        }
        Err(f) => {
            if machine {
                let _ = writeln!(stdout, "{}", json!({ "error": f.to_string(), "exit": f.code() }));
            } else {
                eprintln!("hseq: {f}");
            }
            ExitCode::from(f.code())
        }
    }
}
