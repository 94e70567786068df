use std::collections::BTreeSet;

use super::{premises_of, CalculusConfig, RuleId, RuleInstance};
use crate::syntax::{fresh_like, Formula, Hypersequent, Term, Var};

/// Finite supply of terms and formulas for rules whose parameters are not
/// determined by the conclusion.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CandidatePool {
    /// Witnesses for `(∀-L)` and `(∃-R)`.
    pub witnesses: Vec<Term>,
    /// Cut formulas. Empty means no cuts are proposed.
    pub cut_formulas: Vec<Formula>,
}

/// Every instance applicable to `goal` under `cfg`, in a fixed order.
///
/// Instances of unparameterized rules are enumerated exhaustively. Witnesses
/// are drawn from the pool together with the free variables of the goal;
/// eigenvariables are the bound variable itself or, when that is blocked, a
/// fresh one.
pub fn applicable_rules(cfg: &CalculusConfig, goal: &Hypersequent, pool: &CandidatePool) -> Vec<RuleInstance> {
    applications(cfg, goal, pool, |_| true).into_iter().map(|(inst, _)| inst).collect()
}

/// The instances of [`applicable_rules`] whose rule is selected by `keep`,
/// each paired with its premises.
pub fn applications(
    cfg: &CalculusConfig,
    goal: &Hypersequent,
    pool: &CandidatePool,
    keep: impl Fn(RuleId) -> bool,
) -> Vec<(RuleInstance, Vec<Hypersequent>)> {
    let mut out = Vec::new();
    for rule in cfg.enabled_rules().filter(|&r| keep(r)) {
        for inst in candidates(rule, goal, pool) {
            if let Ok(premises) = premises_of(cfg, &inst, goal) {
                out.push((inst, premises));
            }
        }
    }
    out
}

fn witnesses(goal: &Hypersequent, pool: &CandidatePool, bound: &Var) -> Vec<Term> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let free = goal.free_vars_ordered().into_iter().map(Term::Var);
    for t in pool.witnesses.iter().cloned().chain(free) {
        if seen.insert(t.clone()) {
            out.push(t);
        }
    }
    if out.is_empty() {
        out.push(Term::Var(bound.clone()));
    }
    out
}

fn eigenvariables(goal: &Hypersequent, bound: &Var) -> Vec<Option<Var>> {
    let avoid = goal.free_vars();
    if avoid.contains(bound) {
        vec![Some(fresh_like(bound, &avoid))]
    } else {
        vec![None]
    }
}

fn candidates(rule: RuleId, goal: &Hypersequent, pool: &CandidatePool) -> Vec<RuleInstance> {
    use RuleId::*;
    let width = goal.width();
    let mut out = Vec::new();
    for (k, s) in goal.components.iter().enumerate() {
        let base = RuleInstance::new(rule).at(k);
        let (nl, nr) = (s.antecedent.len(), s.succedent.len());
        match rule {
            Id | Bot => {
                if k == 0 {
                    out.push(base);
                }
            }
            Ew | Ec | Ee => out.push(base),
            IwL | IcL | AndL1 | AndL2 | OrL | ImpL | IeL => {
                out.extend((0..nl).map(|i| base.clone().pos(i)));
            }
            IwR | IcR | AndR | OrR1 | OrR2 | ImpR | ImpRPrime | IeR => {
                out.extend((0..nr).map(|i| base.clone().pos(i)));
            }
            Cut => {
                for delta in &pool.cut_formulas {
                    for a in 0..=nl {
                        for b in 0..=nr {
                            out.push(base.clone().cut(delta.clone()).splits(a, b));
                        }
                    }
                }
            }
            ForallL => {
                for (i, f) in s.antecedent.iter().enumerate() {
                    if let Formula::Forall(x, _) = f {
                        for t in witnesses(goal, pool, x) {
                            out.push(base.clone().pos(i).witness(t));
                        }
                    }
                }
            }
            ExistsR => {
                for (i, f) in s.succedent.iter().enumerate() {
                    if let Formula::Exists(x, _) = f {
                        for t in witnesses(goal, pool, x) {
                            out.push(base.clone().pos(i).witness(t));
                        }
                    }
                }
            }
            ForallRss | ForallRms | ForallRmm | ForallRsm => {
                for (i, f) in s.succedent.iter().enumerate() {
                    if let Formula::Forall(x, _) = f {
                        for y in eigenvariables(goal, x) {
                            let inst = base.clone().pos(i);
                            out.push(match y {
                                Some(y) => inst.eigen(y),
                                None => inst,
                            });
                        }
                    }
                }
            }
            ExistsLs | ExistsLm => {
                for (i, f) in s.antecedent.iter().enumerate() {
                    if let Formula::Exists(x, _) = f {
                        for y in eigenvariables(goal, x) {
                            let inst = base.clone().pos(i);
                            out.push(match y {
                                Some(y) => inst.eigen(y),
                                None => inst,
                            });
                        }
                    }
                }
            }
            Com => {
                for j in (0..width).filter(|&j| j != k) {
                    let nj = goal.components[j].antecedent.len();
                    for a in 0..=nl {
                        for b in 0..=nj {
                            out.push(base.clone().other(j).splits(a, b));
                        }
                    }
                }
            }
            Rs | Ls => {
                out.extend((0..width).filter(|&j| j != k).map(|j| base.clone().other(j)));
            }
            Share | Unshare => {
                let names: BTreeSet<String> = s.free_vars().into_iter().map(|v| v.name).collect();
                out.extend(names.into_iter().map(|n| base.clone().variable(n)));
            }
        }
    }
    out
}
