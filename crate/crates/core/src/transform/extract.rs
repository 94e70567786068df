use thiserror::Error;

use crate::calculus::{CalculusConfig, RuleId, RuleInstance};
use crate::checker::{check_proof, format_path, CheckError, ProofTree};
use crate::syntax::Hypersequent;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("precondition violated: {rule} at {} has no single-sequent counterpart", format_path(.path))]
    ForbiddenRule { rule: RuleId, path: Vec<usize> },
    #[error("precondition violated: the proof is not accepted by CD-free ({0})")]
    Rejected(CheckError),
}

impl ExtractError {
    pub fn kind(&self) -> &'static str {
        "PreconditionViolated"
    }
}

/// Rules whose soundness needs the whole hypersequent.
fn is_forbidden(rule: RuleId) -> bool {
    matches!(rule, RuleId::Com | RuleId::Rs | RuleId::Ls | RuleId::Share | RuleId::Unshare)
}

/// Finds a component of the root that already has a sequent proof, and that proof.
///
/// The input must be accepted by the CD-free calculus and use none of
/// com, rs, ls, share, unshare. The result is a width-one proof whose size,
/// formula count and symbol count are at most those of the input.
pub fn extract_component_proof(p: &ProofTree) -> Result<(usize, ProofTree), ExtractError> {
    if let Some(path) = forbidden_path(p, &mut Vec::new()) {
        let rule = p.at_path(&path).expect("path from traversal").rule.rule;
        return Err(ExtractError::ForbiddenRule { rule, path });
    }
    let cfg = CalculusConfig::preset("CD-free").expect("built-in preset");
    let report = check_proof(&cfg, p);
    if let Some(e) = report.error {
        return Err(ExtractError::Rejected(e));
    }
    Ok(extract(p))
}

fn forbidden_path(p: &ProofTree, path: &mut Vec<usize>) -> Option<Vec<usize>> {
    if is_forbidden(p.rule.rule) {
        return Some(path.clone());
    }
    for (i, sub) in p.subproofs.iter().enumerate() {
        path.push(i);
        let found = forbidden_path(sub, path);
        path.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

fn sequent_rule(rule: RuleId) -> RuleId {
    match rule {
        RuleId::ForallRms => RuleId::ForallRss,
        RuleId::ForallRmm => RuleId::ForallRsm,
        RuleId::ExistsLm => RuleId::ExistsLs,
        r => r,
    }
}

/// The same inference restricted to component `k` of `p`'s conclusion.
fn replay(p: &ProofTree, subproofs: Vec<ProofTree>) -> ProofTree {
    let k = p.rule.component;
    let rule = RuleInstance { rule: sequent_rule(p.rule.rule), component: 0, ..p.rule.clone() };
    ProofTree::new(Hypersequent::single(p.conclusion.components[k].clone()), rule, subproofs)
}

fn extract(p: &ProofTree) -> (usize, ProofTree) {
    let k = p.rule.component;
    match p.rule.rule {
        RuleId::Id | RuleId::Bot => (0, p.clone()),
        RuleId::Ew => {
            let (i, q) = extract(&p.subproofs[0]);
            (if i < k { i } else { i + 1 }, q)
        }
        RuleId::Ec => {
            let (i, q) = extract(&p.subproofs[0]);
            (if i <= k { i } else { i - 1 }, q)
        }
        RuleId::Ee => {
            let (i, q) = extract(&p.subproofs[0]);
            let j = match i {
                i if i == k => k + 1,
                i if i == k + 1 => k,
                i => i,
            };
            (j, q)
        }
        _ if p.subproofs.len() == 1 => {
            let (i, q) = extract(&p.subproofs[0]);
            if i == k {
                (k, replay(p, vec![q]))
            } else {
                (i, q)
            }
        }
        _ => {
            // Two premises: a premise whose extraction lands in the side
            // hypersequent already proves a component of the conclusion.
            let (i, q1) = extract(&p.subproofs[0]);
            if i != k {
                return (i, q1);
            }
            let (j, q2) = extract(&p.subproofs[1]);
            if j != k {
                return (j, q2);
            }
            (k, replay(p, vec![q1, q2]))
        }
    }
}
