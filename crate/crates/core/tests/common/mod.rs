#![allow(dead_code)]

pub mod schema;

use std::collections::HashMap;
use std::path::PathBuf;

use hseq_core::checker::ProofBundle;
use hseq_core::semantics::KripkeModel;
use hseq_core::syntax::{Formula, Hypersequent, Scope, Sequent, Term, Var};
use proptest::prelude::*;

pub const FIGURES: [&str; 6] =
    ["fact13.proof", "fact15.proof", "remark_exists.proof", "lin_rs.proof", "acd_rs.proof", "gdm_ls.proof"];

pub fn load(name: &str) -> ProofBundle {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    ProofBundle::from_json(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Forcing evaluator written directly from the Kripke clauses.
pub struct Oracle<'a> {
    pub m: &'a KripkeModel,
}

impl Oracle<'_> {
    fn above(&self, w: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.m.order.len()).filter(move |&v| self.m.order[w][v])
    }

    fn term(&self, t: &Term, env: &HashMap<Var, usize>) -> usize {
        match t {
            Term::Var(x) => env[x],
            Term::App(f, args) => {
                let args: Vec<usize> = args.iter().map(|a| self.term(a, env)).collect();
                self.m.functions[f][&args]
            }
        }
    }

    pub fn forces(&self, w: usize, env: &HashMap<Var, usize>, f: &Formula) -> bool {
        match f {
            Formula::Bottom => false,
            Formula::Atom(p, args) => {
                let args: Vec<usize> = args.iter().map(|a| self.term(a, env)).collect();
                self.m.atoms[w].contains(&(p.clone(), args))
            }
            Formula::And(a, b) => self.forces(w, env, a) && self.forces(w, env, b),
            Formula::Or(a, b) => self.forces(w, env, a) || self.forces(w, env, b),
            Formula::Imp(a, b) => self.above(w).all(|v| !self.forces(v, env, a) || self.forces(v, env, b)),
            Formula::Forall(x, body) => self.above(w).all(|v| {
                self.m.domains[v].iter().all(|&d| {
                    let mut e = env.clone();
                    e.insert(x.clone(), d);
                    self.forces(v, &e, body)
                })
            }),
            Formula::Exists(x, body) => self.m.domains[w].iter().any(|&d| {
                let mut e = env.clone();
                e.insert(x.clone(), d);
                self.forces(w, &e, body)
            }),
        }
    }

    /// Validity of a closed formula.
    pub fn valid(&self, f: &Formula) -> bool {
        assert!(f.is_closed(), "oracle expects closed formulas: {f}");
        (0..self.m.order.len()).all(|w| self.forces(w, &HashMap::new(), f))
    }
}

pub fn oracle_valid(m: &KripkeModel, f: &Formula) -> bool {
    Oracle { m }.valid(f)
}

/// Closes `f` universally over its free variables.
pub fn close(f: &Formula) -> Formula {
    f.free_vars_ordered().into_iter().rev().fold(f.clone(), |acc, x| Formula::forall(x, acc))
}

pub fn local(name: &str) -> Var {
    Var { name: name.to_string(), scope: Scope::Local }
}

/// Replaces free occurrences of `x`; the caller guarantees `t` is not captured.
pub fn subst(f: &Formula, x: &Var, t: &Term) -> Formula {
    let st = |u: &Term| subst_term(u, x, t);
    match f {
        Formula::Bottom => Formula::Bottom,
        Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(st).collect()),
        Formula::And(a, b) => Formula::and(subst(a, x, t), subst(b, x, t)),
        Formula::Or(a, b) => Formula::or(subst(a, x, t), subst(b, x, t)),
        Formula::Imp(a, b) => Formula::imp(subst(a, x, t), subst(b, x, t)),
        Formula::Forall(y, _) | Formula::Exists(y, _) if y == x => f.clone(),
        Formula::Forall(y, b) => Formula::forall(y.clone(), subst(b, x, t)),
        Formula::Exists(y, b) => Formula::exists(y.clone(), subst(b, x, t)),
    }
}

fn subst_term(u: &Term, x: &Var, t: &Term) -> Term {
    match u {
        Term::Var(y) if y == x => t.clone(),
        Term::Var(_) => u.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| subst_term(a, x, t)).collect()),
    }
}

pub fn seq(ante: Vec<Formula>, succ: Vec<Formula>) -> Sequent {
    Sequent::new(ante, succ)
}

pub fn hyp(components: Vec<Sequent>) -> Hypersequent {
    Hypersequent::new(components)
}

/// Terms over the free variables `vars` plus `c()` and `f(_)`.
pub fn arb_term(vars: &[&'static str]) -> BoxedStrategy<Term> {
    let mut leaves: Vec<BoxedStrategy<Term>> = vars.iter().map(|v| Just(Term::var(*v)).boxed()).collect();
    leaves.push(Just(Term::constant("c")).boxed());
    let leaf = proptest::strategy::Union::new(leaves).boxed();
    leaf.prop_recursive(1, 2, 1, |inner| inner.prop_map(|t| Term::App("f".into(), vec![t]))).boxed()
}

/// Formulas over the variables `vars`, `u` and `v`; quantifiers bind `u` or
/// `v`, which may also occur free.
pub fn arb_formula(vars: &'static [&'static str], depth: u32) -> BoxedStrategy<Formula> {
    let t = arb_term(&[vars, &["u", "v"]].concat());
    let leaf = prop_oneof![
        1 => Just(Formula::Bottom),
        3 => prop::sample::select(vec!["p", "q", "r"]).prop_map(Formula::prop),
        2 => t.clone().prop_map(|a| Formula::atom("P", vec![a])),
        1 => (t.clone(), t).prop_map(|(a, b)| Formula::atom("Q", vec![a, b])),
    ];
    leaf.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (prop::sample::select(vec!["u", "v"]), inner.clone(), any::<bool>()).prop_map(|(x, b, all)| {
                if all {
                    Formula::forall(local(x), b)
                } else {
                    Formula::exists(local(x), b)
                }
            }),
        ]
    })
    .boxed()
}

pub fn arb_context(vars: &'static [&'static str], max: usize) -> BoxedStrategy<Vec<Formula>> {
    prop::collection::vec(arb_formula(vars, 2), 0..=max).boxed()
}

pub fn arb_sequent(vars: &'static [&'static str]) -> BoxedStrategy<Sequent> {
    (arb_context(vars, 2), arb_context(vars, 2)).prop_map(|(a, s)| Sequent::new(a, s)).boxed()
}

/// Draws `n` deterministic samples from a strategy.
pub fn samples<T: std::fmt::Debug>(s: impl Strategy<Value = T>, n: usize) -> Vec<T> {
    use proptest::strategy::ValueTree;
    use proptest::test_runner::TestRunner;
    let mut runner = TestRunner::deterministic();
    (0..n).map(|_| s.new_tree(&mut runner).expect("strategy").current()).collect()
}
