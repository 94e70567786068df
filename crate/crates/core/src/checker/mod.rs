//! Proof trees and their verification.

mod file;

pub use file::{BundleError, ProofBundle};

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::calculus::{premises_of, CalculusConfig, RuleError, RuleId, RuleInstance};
use crate::syntax::Hypersequent;

/// A derivation: a conclusion, the rule that produced it, and one subproof per premise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofTree {
    pub conclusion: Hypersequent,
    pub rule: RuleInstance,
    pub subproofs: Vec<ProofTree>,
}

impl ProofTree {
    pub fn new(conclusion: Hypersequent, rule: RuleInstance, subproofs: Vec<ProofTree>) -> Self {
        ProofTree { conclusion, rule, subproofs }
    }

    pub fn leaf(conclusion: Hypersequent, rule: RuleInstance) -> Self {
        ProofTree { conclusion, rule, subproofs: Vec::new() }
    }

    /// Nodes in pre-order.
    pub fn nodes(&self) -> Vec<&ProofTree> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(n) = stack.pop() {
            out.push(n);
            stack.extend(n.subproofs.iter().rev());
        }
        out
    }

    pub fn size(&self) -> usize {
        self.nodes().len()
    }

    pub fn uses(&self, rule: RuleId) -> bool {
        self.nodes().iter().any(|n| n.rule.rule == rule)
    }

    pub fn height(&self) -> usize {
        1 + self.subproofs.iter().map(ProofTree::height).max().unwrap_or(0)
    }

    /// The subtree at `path` (child indices from the root).
    pub fn at_path(&self, path: &[usize]) -> Option<&ProofTree> {
        path.iter().try_fold(self, |n, &i| n.subproofs.get(i))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckErrorKind {
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error("rule {rule} needs {expected} premises, found {found} subproofs")]
    PremiseCount { rule: RuleId, expected: usize, found: usize },
    #[error("premise {index} should be `{expected}` but the subproof concludes `{found}`")]
    PremiseMismatch { index: usize, expected: Hypersequent, found: Hypersequent },
}

impl CheckErrorKind {
    pub fn name(&self) -> &'static str {
        match self {
            CheckErrorKind::Rule(e) => e.kind(),
            CheckErrorKind::PremiseCount { .. } => "PremiseCount",
            CheckErrorKind::PremiseMismatch { .. } => "PremiseMismatch",
        }
    }
}

/// A rejection, located by the child-index path from the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckError {
    pub path: Vec<usize>,
    pub kind: CheckErrorKind,
}

impl fmt::Display for CheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}: {}", format_path(&self.path), self.kind)
    }
}

/// Renders a path as `root` or `root.0.1`.
pub fn format_path(path: &[usize]) -> String {
    let mut s = String::from("root");
    for i in path {
        s.push('.');
        s.push_str(&i.to_string());
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    Rejected,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Accepted => "accepted",
            Verdict::Rejected => "rejected",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub verdict: Verdict,
    /// Number of rule applications, i.e. nodes.
    pub steps: usize,
    pub rule_histogram: BTreeMap<RuleId, usize>,
    pub error: Option<CheckError>,
}

impl CheckReport {
    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accepted
    }
}

/// Checks every node of `p` under `cfg`.
///
/// Children are checked before their parent, left to right, and the first
/// failure in that order is reported.
pub fn check_proof(cfg: &CalculusConfig, p: &ProofTree) -> CheckReport {
    let mut rule_histogram = BTreeMap::new();
    for n in p.nodes() {
        *rule_histogram.entry(n.rule.rule).or_insert(0) += 1;
    }
    let mut path = Vec::new();
    let error = first_error(cfg, p, &mut path);
    CheckReport {
        verdict: if error.is_none() { Verdict::Accepted } else { Verdict::Rejected },
        steps: p.size(),
        rule_histogram,
        error,
    }
}

fn first_error(cfg: &CalculusConfig, p: &ProofTree, path: &mut Vec<usize>) -> Option<CheckError> {
    for (i, sub) in p.subproofs.iter().enumerate() {
        path.push(i);
        let e = first_error(cfg, sub, path);
        path.pop();
        if e.is_some() {
            return e;
        }
    }
    check_node(cfg, p).err().map(|kind| CheckError { path: path.clone(), kind })
}

/// Checks a single inference against the conclusions of its immediate subproofs.
pub fn check_node(cfg: &CalculusConfig, p: &ProofTree) -> Result<(), CheckErrorKind> {
    let premises = premises_of(cfg, &p.rule, &p.conclusion)?;
    if premises.len() != p.subproofs.len() {
        return Err(CheckErrorKind::PremiseCount {
            rule: p.rule.rule,
            expected: premises.len(),
            found: p.subproofs.len(),
        });
    }
    for (index, (expected, sub)) in premises.into_iter().zip(&p.subproofs).enumerate() {
        if !expected.alpha_eq(&sub.conclusion) {
            return Err(CheckErrorKind::PremiseMismatch { index, expected, found: sub.conclusion.clone() });
        }
    }
    Ok(())
}

/// The three size measures of a proof.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ProofStats {
    pub steps: usize,
    /// Formula occurrences summed over every hypersequent in the tree.
    pub formulas: usize,
    /// Syntax-tree nodes of those formula occurrences.
    pub symbols: usize,
}

impl ProofStats {
    /// Whether every measure is at most the corresponding one of `other`.
    pub fn dominated_by(&self, other: &ProofStats) -> bool {
        self.steps <= other.steps && self.formulas <= other.formulas && self.symbols <= other.symbols
    }
}

impl fmt::Display for ProofStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} steps, {} formulas, {} symbols", self.steps, self.formulas, self.symbols)
    }
}

pub fn proof_stats(p: &ProofTree) -> ProofStats {
    p.nodes().iter().fold(ProofStats::default(), |acc, n| ProofStats {
        steps: acc.steps + 1,
        formulas: acc.formulas + n.conclusion.formulas().count(),
        symbols: acc.symbols + n.conclusion.formulas().map(|f| f.size()).sum::<usize>(),
    })
}
