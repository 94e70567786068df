//! JSON proof bundles: a calculus plus a proof tree whose hypersequents and
//! terms are written in the textual grammar.
//!
//! ```json
//! {
//!   "preset": "GD-com",
//!   "proof": {
//!     "rule": "com",
//!     "conclusion": "phi |- psi || psi |- phi",
//!     "params": { "component": 1, "other": 0, "split": 0, "split2": 0 },
//!     "premises": [
//!       { "rule": "Id", "conclusion": "phi |- phi" },
//!       { "rule": "Id", "conclusion": "psi |- psi" }
//!     ]
//!   }
//! }
//! ```
//!
//! Instead of a preset, a bundle may name a `base` (`classical`, `lj`,
//! `ljprime`) with `quantifiers` and `width_cap`; `enable` and `disable`
//! adjust optional rules in either case.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{format_path, ProofTree};
use crate::calculus::{Base, CalculusConfig, ConfigError, RuleId, RuleInstance};
use crate::syntax::{parse_formula_with, parse_hypersequent_with, parse_term_with, ParseError, Signature, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofBundle {
    /// The preset the bundle was declared with, if any.
    pub preset: Option<String>,
    pub config: CalculusConfig,
    pub proof: ProofTree,
}

#[derive(Debug, Error)]
pub enum BundleError {
    #[error("malformed proof file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("in `{field}` at {}: {source}", format_path(.path))]
    Syntax { path: Vec<usize>, field: &'static str, source: ParseError },
    #[error("`eigenvariable` at {} must be a variable, found `{found}`", format_path(.path))]
    NotAVariable { path: Vec<usize>, found: String },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("proof file names neither a preset nor a base")]
    MissingCalculus,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BundleDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    base: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    quantifiers: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    width_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    enable: Vec<RuleId>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    disable: Vec<RuleId>,
    proof: NodeDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    rule: RuleId,
    conclusion: String,
    #[serde(default, skip_serializing_if = "ParamsDoc::is_empty")]
    params: ParamsDoc,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    premises: Vec<NodeDoc>,
}

#[derive(Serialize, Deserialize, Default, PartialEq)]
#[serde(deny_unknown_fields)]
struct ParamsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    component: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    other: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    position: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    split: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    split2: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cut: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eigenvariable: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    variable: Option<String>,
}

impl ParamsDoc {
    fn is_empty(&self) -> bool {
        *self == ParamsDoc::default()
    }
}

impl ProofBundle {
    pub fn new(config: CalculusConfig, proof: ProofTree) -> Self {
        ProofBundle { preset: None, config, proof }
    }

    pub fn with_preset(preset: &str, proof: ProofTree) -> Result<Self, ConfigError> {
        Ok(ProofBundle { preset: Some(preset.to_string()), config: CalculusConfig::preset(preset)?, proof })
    }

    pub fn from_json(text: &str) -> Result<Self, BundleError> {
        let doc: BundleDoc = serde_json::from_str(text)?;
        let mut config = match (&doc.preset, &doc.base) {
            (Some(p), _) => CalculusConfig::preset(p)?,
            (None, Some(b)) => CalculusConfig::new(b.parse::<Base>()?),
            (None, None) => return Err(BundleError::MissingCalculus),
        };
        config.quantifiers_enabled |= doc.quantifiers;
        if doc.width_cap.is_some() {
            config.width_cap = doc.width_cap;
        }
        for &r in &doc.enable {
            config.enable(r)?;
        }
        for &r in &doc.disable {
            config.disable(r)?;
        }
        config.validate()?;
        let mut sig = Signature::new();
        let proof = node_from_doc(&doc.proof, &mut sig, &mut Vec::new())?;
        Ok(ProofBundle { preset: doc.preset, config, proof })
    }

    pub fn to_json(&self) -> String {
        let preset = self.preset.as_ref().filter(|p| CalculusConfig::preset(p).is_ok_and(|c| c == self.config));
        let doc = match preset {
            Some(p) => BundleDoc {
                preset: Some(p.clone()),
                base: None,
                quantifiers: false,
                width_cap: None,
                enable: Vec::new(),
                disable: Vec::new(),
                proof: node_to_doc(&self.proof),
            },
            None => BundleDoc {
                preset: None,
                base: Some(self.config.base.name().to_string()),
                quantifiers: self.config.quantifiers_enabled,
                width_cap: self.config.width_cap,
                enable: self.config.optional_rules.iter().copied().collect(),
                disable: Vec::new(),
                proof: node_to_doc(&self.proof),
            },
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("proof documents always serialize");
        s.push('\n');
        s
    }
}

fn syntax(path: &[usize], field: &'static str) -> impl FnOnce(ParseError) -> BundleError {
    let path = path.to_vec();
    move |source| BundleError::Syntax { path, field, source }
}

fn node_from_doc(doc: &NodeDoc, sig: &mut Signature, path: &mut Vec<usize>) -> Result<ProofTree, BundleError> {
    let conclusion = parse_hypersequent_with(&doc.conclusion, sig).map_err(syntax(path, "conclusion"))?;
    let p = &doc.params;
    let mut rule = RuleInstance::new(doc.rule);
    rule.component = p.component.unwrap_or(0);
    rule.other = p.other;
    rule.position = p.position;
    rule.split = p.split;
    rule.split2 = p.split2;
    rule.variable = p.variable.clone();
    if let Some(c) = &p.cut {
        rule.cut_formula = Some(parse_formula_with(c, sig).map_err(syntax(path, "cut"))?);
    }
    if let Some(w) = &p.witness {
        rule.witness = Some(parse_term_with(w, sig).map_err(syntax(path, "witness"))?);
    }
    if let Some(e) = &p.eigenvariable {
        match parse_term_with(e, sig).map_err(syntax(path, "eigenvariable"))? {
            Term::Var(v) => rule.eigenvariable = Some(v),
            _ => return Err(BundleError::NotAVariable { path: path.clone(), found: e.clone() }),
        }
    }
    let mut subproofs = Vec::with_capacity(doc.premises.len());
    for (i, d) in doc.premises.iter().enumerate() {
        path.push(i);
        subproofs.push(node_from_doc(d, sig, path)?);
        path.pop();
    }
    Ok(ProofTree { conclusion, rule, subproofs })
}

fn node_to_doc(p: &ProofTree) -> NodeDoc {
    let r = &p.rule;
    NodeDoc {
        rule: r.rule,
        conclusion: p.conclusion.to_string(),
        params: ParamsDoc {
            component: Some(r.component).filter(|&c| c != 0),
            other: r.other,
            position: r.position,
            split: r.split,
            split2: r.split2,
            cut: r.cut_formula.as_ref().map(|f| f.to_string()),
            witness: r.witness.as_ref().map(|t| t.to_string()),
            eigenvariable: r.eigenvariable.as_ref().map(Var::to_string),
            variable: r.variable.clone(),
        },
        premises: p.subproofs.iter().map(node_to_doc).collect(),
    }
}
