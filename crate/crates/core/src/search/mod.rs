//! Bounded root-first proof search.
//!
//! The search runs iterative deepening over macro steps. A macro step is one
//! logical, communication, contraction or cut inference, possibly preceded by
//! internal exchanges that bring its context into the required order. Axioms
//! are reached by a closing macro that discards the surplus components and
//! formulas with external and internal weakening. Every inference is produced
//! by [`premises_of`], so the result is a proof tree the checker accepts.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::calculus::{applications, premises_of, CalculusConfig, CandidatePool, RuleId, RuleInstance};
use crate::checker::{check_proof, ProofTree};
use crate::syntax::{Formula, Hypersequent, Sequent, Term};

/// Resource limits for [`prove`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBudget {
    /// Longest branch, counted in macro steps (a closing macro counts as one).
    pub max_depth: usize,
    /// Widest hypersequent contraction may produce.
    pub max_width: usize,
    /// Contractions (`ec`, `icL`, `icR`) allowed along one branch.
    pub max_contractions: usize,
    /// Witnesses for `(∀-L)` and `(∃-R)` in addition to the goal's free variables.
    pub witnesses: Vec<Term>,
    /// Cut formulas. Empty means cut-free search.
    pub cut_formulas: Vec<Formula>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("search budget field `{0}` must be positive")]
pub struct BudgetError(pub &'static str);

impl SearchBudget {
    pub fn new(max_depth: usize) -> Self {
        SearchBudget { max_depth, max_width: 4, max_contractions: 2, witnesses: Vec::new(), cut_formulas: Vec::new() }
    }

    pub fn with_witnesses(mut self, witnesses: Vec<Term>) -> Self {
        self.witnesses = witnesses;
        self
    }

    pub fn with_cuts(mut self, cut_formulas: Vec<Formula>) -> Self {
        self.cut_formulas = cut_formulas;
        self
    }

    pub fn validate(&self) -> Result<(), BudgetError> {
        if self.max_depth == 0 {
            return Err(BudgetError("max_depth"));
        }
        if self.max_width == 0 {
            return Err(BudgetError("max_width"));
        }
        if self.max_contractions == 0 {
            return Err(BudgetError("max_contractions"));
        }
        Ok(())
    }

    /// Pointwise comparison: every bound of `self` is at most the one in `other`
    /// and every pool of `self` is contained in the one of `other`.
    pub fn le(&self, other: &SearchBudget) -> bool {
        self.max_depth <= other.max_depth
            && self.max_width <= other.max_width
            && self.max_contractions <= other.max_contractions
            && self.witnesses.iter().all(|t| other.witnesses.contains(t))
            && self.cut_formulas.iter().all(|f| other.cut_formulas.contains(f))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchStats {
    /// Search nodes expanded over all iterations.
    pub nodes: u64,
    /// Depth bound of the last iteration.
    pub depth: usize,
    /// True when the last iteration failed without ever reaching its depth
    /// bound, so no deeper search can succeed either.
    pub exhausted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub proof: Option<ProofTree>,
    pub stats: SearchStats,
}

impl fmt::Display for SearchStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} nodes, depth {}", self.nodes, self.depth)?;
        if self.exhausted {
            write!(f, ", search space exhausted")?;
        }
        Ok(())
    }
}

/// Searches for a proof of `goal` under `cfg` within `budget`.
///
/// The strategy is deterministic: the same inputs always yield the same proof.
pub fn prove(cfg: &CalculusConfig, goal: &Hypersequent, budget: &SearchBudget) -> SearchOutcome {
    let mut s = Searcher {
        cfg,
        budget,
        pool: CandidatePool { witnesses: budget.witnesses.clone(), cut_formulas: budget.cut_formulas.clone() },
        nodes: 0,
        ancestors: Vec::new(),
        failed: HashMap::new(),
    };
    let mut stats = SearchStats::default();
    for depth in 1..=budget.max_depth {
        stats.depth = depth;
        match s.search(goal, depth, budget.max_contractions) {
            Ok(p) => {
                let report = check_proof(cfg, &p);
                assert!(report.accepted(), "search produced a rejected proof: {:?}", report.error);
                stats.nodes = s.nodes;
                return SearchOutcome { proof: Some(p), stats };
            }
            Err(fail) if !fail.limited => {
                stats.exhausted = true;
                break;
            }
            Err(_) => {}
        }
    }
    stats.nodes = s.nodes;
    SearchOutcome { proof: None, stats }
}

type Key = Vec<Sequent>;

fn normalize(h: &Hypersequent) -> Key {
    let mut key: Vec<Sequent> = h
        .components
        .iter()
        .map(|s| {
            let (mut a, mut b) = (s.antecedent.clone(), s.succedent.clone());
            a.sort();
            b.sort();
            Sequent::new(a, b)
        })
        .collect();
    key.sort();
    key
}

#[derive(Debug, Clone, Copy, Default)]
struct Fail {
    /// Some branch was cut off by the depth bound.
    limited: bool,
    /// Outermost ancestor (stack index) that some pruned branch repeated.
    loop_to: Option<usize>,
}

impl Fail {
    fn absorb(&mut self, other: Fail) {
        self.limited |= other.limited;
        self.loop_to = match (self.loop_to, other.loop_to) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
    }
}

/// A chain of single-premise inferences `(conclusion, rule)`, outermost first.
type Chain = Vec<(Hypersequent, RuleInstance)>;

struct Step {
    /// Reorderings `(component, succedent?, order)` applied before `rule`.
    perms: Vec<(usize, bool, Vec<usize>)>,
    rule: RuleInstance,
    premises: Vec<Hypersequent>,
    contractions: usize,
}

fn wrap(chain: Chain, inner: ProofTree) -> ProofTree {
    chain.into_iter().rev().fold(inner, |p, (c, r)| ProofTree::new(c, r, vec![p]))
}

fn rank(rule: RuleId) -> Option<u8> {
    use RuleId::*;
    Some(match rule {
        ImpR | ImpRPrime | ForallRss | ForallRms | ForallRmm | ForallRsm | ExistsLs | ExistsLm => 0,
        AndR | OrL => 1,
        OrR1 | OrR2 | AndL1 | AndL2 => 2,
        ForallL | ExistsR => 3,
        ImpL => 4,
        Ec | IcL | IcR => 6,
        Cut => 7,
        _ => return None,
    })
}

/// Internal contraction only pays off for formulas whose rules consume them
/// without being invertible.
fn worth_contracting(h: &Hypersequent, inst: &RuleInstance) -> bool {
    let s = &h.components[inst.component];
    let at = |fs: &[Formula]| inst.position.and_then(|i| fs.get(i).cloned());
    match inst.rule {
        RuleId::IcL => matches!(at(&s.antecedent), Some(Formula::Forall(..) | Formula::Imp(..) | Formula::And(..))),
        RuleId::IcR => matches!(at(&s.succedent), Some(Formula::Or(..) | Formula::Exists(..))),
        _ => true,
    }
}

/// Cuts are tried only in the lemma form `Γ ⇒ δ` and `δ ⇒ Δ`.
fn lemma_cut(h: &Hypersequent, inst: &RuleInstance) -> bool {
    let s = &h.components[inst.component];
    inst.split == Some(s.antecedent.len()) && inst.split2 == Some(0)
}

struct Searcher<'a> {
    cfg: &'a CalculusConfig,
    budget: &'a SearchBudget,
    pool: CandidatePool,
    nodes: u64,
    ancestors: Vec<Key>,
    /// Failed states: (normalized goal, contractions left) to the largest
    /// depth at which the state failed and whether that failure was depth-limited.
    failed: HashMap<(Key, usize), (usize, bool)>,
}

impl Searcher<'_> {
    fn premises(&self, h: &Hypersequent, inst: &RuleInstance) -> Option<Vec<Hypersequent>> {
        premises_of(self.cfg, inst, h).ok()
    }

    /// Applies `inst`, which must have exactly one premise, and records it in `chain`.
    fn unary(&self, h: &mut Hypersequent, chain: &mut Chain, inst: RuleInstance) -> Option<()> {
        let mut ps = self.premises(h, &inst)?;
        if ps.len() != 1 {
            return None;
        }
        chain.push((h.clone(), inst));
        *h = ps.pop().expect("one premise");
        Some(())
    }

    fn search(&mut self, h: &Hypersequent, depth: usize, contractions: usize) -> Result<ProofTree, Fail> {
        self.nodes += 1;
        if let Some(p) = self.close(h) {
            return Ok(p);
        }
        let key = normalize(h);
        if let Some(i) = self.ancestors.iter().position(|a| *a == key) {
            return Err(Fail { limited: false, loop_to: Some(i) });
        }
        let memo = (key, contractions);
        if let Some(&(d, limited)) = self.failed.get(&memo) {
            if d >= depth || !limited {
                return Err(Fail { limited, loop_to: None });
            }
        }
        let steps = self.steps(h, contractions);
        if depth <= 1 {
            return Err(Fail { limited: !steps.is_empty(), loop_to: None });
        }
        let me = self.ancestors.len();
        self.ancestors.push(memo.0.clone());
        let mut fail = Fail::default();
        let mut found = None;
        'steps: for step in steps {
            let left = contractions - step.contractions;
            let mut subproofs = Vec::with_capacity(step.premises.len());
            for p in &step.premises {
                match self.search(p, depth - 1, left) {
                    Ok(sub) => subproofs.push(sub),
                    Err(f) => {
                        fail.absorb(f);
                        continue 'steps;
                    }
                }
            }
            let mut g = h.clone();
            let mut chain = Vec::new();
            for (k, succ, order) in &step.perms {
                self.permute(&mut g, &mut chain, *k, *succ, order).expect("exchanges are enabled");
            }
            debug_assert_eq!(self.premises(&g, &step.rule).as_ref(), Some(&step.premises));
            found = Some(wrap(chain, ProofTree::new(g, step.rule, subproofs)));
            break;
        }
        self.ancestors.pop();
        if let Some(p) = found {
            return Ok(p);
        }
        // A loop back to this very node is pruned in every context, so only
        // loops to proper ancestors make the failure context-dependent.
        fail.loop_to = fail.loop_to.filter(|&i| i < me);
        if fail.loop_to.is_none() {
            let entry = self.failed.entry(memo).or_insert((depth, fail.limited));
            if depth >= entry.0 {
                *entry = (depth, fail.limited);
            }
        }
        Err(fail)
    }

    /// Closes `h` with `(Id)` or `(Bot)` after weakening away everything else.
    fn close(&self, h: &Hypersequent) -> Option<ProofTree> {
        for (k, s) in h.components.iter().enumerate() {
            for (i, a) in s.antecedent.iter().enumerate() {
                let target = if *a == Formula::Bottom && !s.succedent.is_empty() {
                    Some((0, RuleId::Bot))
                } else {
                    s.succedent.iter().position(|b| a.alpha_eq(b)).map(|j| (j, RuleId::Id))
                };
                if let Some((j, axiom)) = target {
                    if let Some(p) = self.close_at(h, k, i, j, axiom) {
                        return Some(p);
                    }
                }
            }
        }
        None
    }

    fn close_at(&self, h: &Hypersequent, k: usize, i: usize, j: usize, axiom: RuleId) -> Option<ProofTree> {
        let mut h = h.clone();
        let mut chain = Vec::new();
        for m in (0..h.width()).rev().filter(|&m| m != k) {
            self.unary(&mut h, &mut chain, RuleInstance::new(RuleId::Ew).at(m))?;
        }
        let s = &h.components[0];
        let (nl, nr) = (s.antecedent.len(), s.succedent.len());
        for p in (0..nl).rev().filter(|&p| p != i) {
            self.unary(&mut h, &mut chain, RuleInstance::new(RuleId::IwL).pos(p))?;
        }
        for p in (0..nr).rev().filter(|&p| p != j) {
            self.unary(&mut h, &mut chain, RuleInstance::new(RuleId::IwR).pos(p))?;
        }
        let inst = RuleInstance::new(axiom);
        if self.premises(&h, &inst)?.is_empty() {
            Some(wrap(chain, ProofTree::leaf(h, inst)))
        } else {
            None
        }
    }

    fn steps(&self, h: &Hypersequent, contractions: usize) -> Vec<Step> {
        let mut ranked: Vec<(u8, Step)> = Vec::new();
        for (inst, premises) in applications(self.cfg, h, &self.pool, |r| rank(r).is_some()) {
            let Some(r) = rank(inst.rule) else { continue };
            if inst.rule == RuleId::Cut && !lemma_cut(h, &inst) {
                continue;
            }
            if !worth_contracting(h, &inst) {
                continue;
            }
            let cost = usize::from(r == 6);
            if cost > contractions {
                continue;
            }
            if premises.iter().any(|p| p.width() > self.budget.max_width.max(h.width())) {
                continue;
            }
            ranked.push((r, Step { perms: Vec::new(), rule: inst, premises, contractions: cost }));
        }
        ranked.extend(self.communications(h).into_iter().map(|s| (5, s)));
        ranked.sort_by_key(|(r, s)| (*r, s.rule.component, s.rule.position));
        // single-premise invertible rules are applied eagerly without alternatives
        if ranked.first().is_some_and(|(r, _)| *r == 0) {
            ranked.truncate(1);
        }
        ranked.into_iter().map(|(_, s)| s).collect()
    }

    /// `(com)`, `(rs)` and `(ls)` over every pair of components, with the
    /// contexts rearranged by internal exchange as each rule requires.
    fn communications(&self, h: &Hypersequent) -> Vec<Step> {
        let mut out = Vec::new();
        let mut seen = Vec::new();
        let w = h.width();
        for k in 0..w {
            for j in k + 1..w {
                if self.cfg.is_enabled(RuleId::Com) {
                    let (nk, nj) = (h.components[k].antecedent.len(), h.components[j].antecedent.len());
                    // an empty side is subsumed by weakening the other premise
                    for mk in 1..1u32 << nk {
                        for mj in 1..1u32 << nj {
                            if let Some(step) = self.com(h, k, j, mk, mj) {
                                let key: Vec<Key> = step.premises.iter().map(normalize).collect();
                                if !seen.contains(&key) {
                                    seen.push(key);
                                    out.push(step);
                                }
                            }
                        }
                    }
                }
                for (rule, succ) in [(RuleId::Rs, false), (RuleId::Ls, true)] {
                    if self.cfg.is_enabled(rule) {
                        out.extend(self.split(h, rule, k, j, succ));
                    }
                }
            }
        }
        out
    }

    /// Moves the formulas of the antecedent of `k` selected by `mk` to `j`
    /// and those of `j` selected by `mj` to `k`.
    fn com(&self, h: &Hypersequent, k: usize, j: usize, mk: u32, mj: u32) -> Option<Step> {
        let split = |fs: &[Formula], mask: u32| -> (Vec<usize>, Vec<Formula>, Vec<Formula>) {
            let (moved, kept): (Vec<usize>, Vec<usize>) = (0..fs.len()).partition(|&i| mask >> i & 1 == 1);
            let pick = |is: &[usize]| is.iter().map(|&i| fs[i].clone()).collect::<Vec<_>>();
            let (kf, mf) = (pick(&kept), pick(&moved));
            ([kept, moved].concat(), kf, mf)
        };
        let (sk, sj) = (&h.components[k], &h.components[j]);
        let (order_k, kept_k, moved_k) = split(&sk.antecedent, mk);
        let (order_j, kept_j, moved_j) = split(&sj.antecedent, mj);
        let perms: Vec<_> = [(k, order_k), (j, order_j)]
            .into_iter()
            .filter(|(_, o)| o.iter().enumerate().any(|(t, &i)| t != i))
            .map(|(c, o)| (c, false, o))
            .collect();
        if !perms.is_empty() && !self.cfg.is_enabled(RuleId::IeL) {
            return None;
        }
        let inst = RuleInstance::new(RuleId::Com).at(k).other(j).splits(kept_k.len(), kept_j.len());
        let mut first = h.clone();
        first.components[k] = Sequent::new([kept_k, moved_j].concat(), sk.succedent.clone());
        first.components.remove(j);
        let mut second = h.clone();
        second.components[j] = Sequent::new([kept_j, moved_k].concat(), sj.succedent.clone());
        second.components.remove(k);
        Some(Step { perms, rule: inst, premises: vec![first, second], contractions: 0 })
    }

    /// `(rs)` or `(ls)` on components `k` and `j`, whose antecedents
    /// (succedents for `ls`) must agree up to order.
    fn split(&self, h: &Hypersequent, rule: RuleId, k: usize, j: usize, succ: bool) -> Option<Step> {
        let side = |s: &Sequent| if succ { s.succedent.clone() } else { s.antecedent.clone() };
        let (a, b) = (side(&h.components[k]), side(&h.components[j]));
        if a.len() != b.len() {
            return None;
        }
        let mut used = vec![false; b.len()];
        let mut order = Vec::with_capacity(a.len());
        for f in &a {
            let i = (0..b.len()).find(|&i| !used[i] && b[i].alpha_eq(f))?;
            used[i] = true;
            order.push(i);
        }
        let mut perms = Vec::new();
        if order.iter().enumerate().any(|(t, &i)| t != i) {
            if !self.cfg.is_enabled(if succ { RuleId::IeR } else { RuleId::IeL }) {
                return None;
            }
            perms.push((j, succ, order));
        }
        let inst = RuleInstance::new(rule).at(k).other(j);
        let (sk, sj) = (&h.components[k], &h.components[j]);
        let merged = if succ {
            Sequent::new([sk.antecedent.as_slice(), sj.antecedent.as_slice()].concat(), sk.succedent.clone())
        } else {
            Sequent::new(sk.antecedent.clone(), [sk.succedent.as_slice(), sj.succedent.as_slice()].concat())
        };
        let mut premise = h.clone();
        premise.components[k] = merged;
        premise.components.remove(j);
        Some(Step { perms, rule: inst, premises: vec![premise], contractions: 0 })
    }

    /// Reorders one side of component `k` so that position `t` holds the
    /// formula currently at `order[t]`, using adjacent exchanges.
    fn permute(&self, h: &mut Hypersequent, chain: &mut Chain, k: usize, succ: bool, order: &[usize]) -> Option<()> {
        let rule = if succ { RuleId::IeR } else { RuleId::IeL };
        let mut current: Vec<usize> = (0..order.len()).collect();
        for (t, want) in order.iter().enumerate() {
            let mut c = current.iter().position(|x| x == want).expect("permutation");
            while c > t {
                self.unary(h, chain, RuleInstance::new(rule).at(k).pos(c - 1))?;
                current.swap(c - 1, c);
                c -= 1;
            }
        }
        Some(())
    }
}
