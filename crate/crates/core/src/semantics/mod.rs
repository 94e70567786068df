//! Finite Kripke models with monotone domains, forcing, and exhaustive
//! countermodel search over small models.

mod dump;
mod enumerate;

pub use dump::{parse_model, ModelParseError};
pub use enumerate::{countermodel_search, enumerate_models, Bounds, MAX_ATOMS, MAX_DOMAIN, MAX_WORLDS};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::calculus::{Base, CalculusConfig, RuleId};
use crate::syntax::{Formula, Term, Var};

pub type World = usize;
pub type Individual = usize;

/// A ground atom: predicate name and argument individuals.
pub type GroundAtom = (String, Vec<Individual>);

/// A finite Kripke model.
///
/// Function symbols (constants included) have one interpretation shared by
/// all worlds, so it is trivially stable along the order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    /// `order[w][v]` holds when `w ≤ v`.
    pub order: Vec<Vec<bool>>,
    pub domains: Vec<BTreeSet<Individual>>,
    /// Ground atoms true at each world.
    pub atoms: Vec<BTreeSet<GroundAtom>>,
    pub functions: BTreeMap<String, BTreeMap<Vec<Individual>, Individual>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("no value for free variable {0}")]
    EnvIncomplete(Var),
    #[error("individual {individual} is not in the domain of world {world}")]
    IndividualOutOfDomain { individual: Individual, world: World },
    #[error("function {name} is undefined on {args:?}")]
    UndefinedFunction { name: String, args: Vec<Individual> },
    #[error("no world {0}")]
    NoSuchWorld(World),
    #[error("bounds too large: {0}")]
    BoundsTooLarge(String),
    #[error("function symbol {0} has positive arity; only constants are enumerated")]
    FunctionSymbol(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
}

/// A class of frames.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelClass {
    /// Rooted posets with increasing domains.
    AllPosets,
    /// Chains with increasing domains.
    Linear,
    /// Rooted posets with one domain.
    ConstantDomain,
    /// Chains with one domain.
    LinearConstantDomain,
}

impl ModelClass {
    pub const ALL: [ModelClass; 4] =
        [ModelClass::AllPosets, ModelClass::Linear, ModelClass::ConstantDomain, ModelClass::LinearConstantDomain];

    pub fn name(self) -> &'static str {
        match self {
            ModelClass::AllPosets => "all",
            ModelClass::Linear => "linear",
            ModelClass::ConstantDomain => "constant",
            ModelClass::LinearConstantDomain => "linear-constant",
        }
    }

    pub fn is_linear(self) -> bool {
        matches!(self, ModelClass::Linear | ModelClass::LinearConstantDomain)
    }

    pub fn is_constant_domain(self) -> bool {
        matches!(self, ModelClass::ConstantDomain | ModelClass::LinearConstantDomain)
    }

    /// Whether `m` belongs to the class.
    pub fn contains(self, m: &KripkeModel) -> bool {
        let n = m.world_count();
        let linear = (0..n).all(|w| (0..n).all(|v| m.order[w][v] || m.order[v][w]));
        let constant = m.domains.iter().all(|d| *d == m.domains[0]);
        (!self.is_linear() || linear) && (!self.is_constant_domain() || constant)
    }

    /// The frames a calculus is meant to be sound for, together with a
    /// world cap (`Some(1)` for classical logic).
    pub fn for_config(cfg: &CalculusConfig) -> (ModelClass, Option<usize>) {
        if cfg.base == Base::Classical {
            return (ModelClass::AllPosets, Some(1));
        }
        let on = |r| cfg.is_enabled(r);
        let linear = on(RuleId::Com) || on(RuleId::Rs) || on(RuleId::Ls);
        let constant = on(RuleId::ForallRmm)
            || on(RuleId::ForallRsm)
            || on(RuleId::Share)
            || on(RuleId::Unshare)
            || (linear && on(RuleId::ForallRms));
        let class = match (linear, constant) {
            (false, false) => ModelClass::AllPosets,
            (true, false) => ModelClass::Linear,
            (false, true) => ModelClass::ConstantDomain,
            (true, true) => ModelClass::LinearConstantDomain,
        };
        (class, None)
    }
}

impl FromStr for ModelClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" | "posets" | "AllPosets" => Ok(ModelClass::AllPosets),
            "linear" | "Linear" => Ok(ModelClass::Linear),
            "constant" | "ConstantDomain" => Ok(ModelClass::ConstantDomain),
            "linear-constant" | "LinearConstantDomain" => Ok(ModelClass::LinearConstantDomain),
            _ => Err(format!("unknown model class `{s}` (expected all, linear, constant or linear-constant)")),
        }
    }
}

impl fmt::Display for ModelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Variable assignment during evaluation; later entries shadow earlier ones.
type Env<'a> = Vec<(&'a Var, Individual)>;

impl KripkeModel {
    pub fn world_count(&self) -> usize {
        self.order.len()
    }

    pub fn leq(&self, w: World, v: World) -> bool {
        self.order[w][v]
    }

    /// Worlds above `w`, including `w`.
    pub fn successors(&self, w: World) -> impl Iterator<Item = World> + '_ {
        (0..self.world_count()).filter(move |&v| self.order[w][v])
    }

    /// Checks the structural invariants: a partial order, increasing
    /// domains, persistent atoms and total, domain-respecting functions.
    pub fn validate(&self) -> Result<(), SemanticsError> {
        let n = self.world_count();
        let bad = |s: String| Err(SemanticsError::InvalidModel(s));
        if n == 0 {
            return bad("no worlds".into());
        }
        if self.order.iter().any(|row| row.len() != n) || self.domains.len() != n || self.atoms.len() != n {
            return bad("tables do not match the number of worlds".into());
        }
        for w in 0..n {
            if !self.order[w][w] {
                return bad(format!("order is not reflexive at {w}"));
            }
            if self.domains[w].is_empty() {
                return bad(format!("world {w} has an empty domain"));
            }
            for v in 0..n {
                if w != v && self.order[w][v] && self.order[v][w] {
                    return bad(format!("order is not antisymmetric at {w}, {v}"));
                }
                for u in 0..n {
                    if self.order[w][v] && self.order[v][u] && !self.order[w][u] {
                        return bad(format!("order is not transitive at {w}, {v}, {u}"));
                    }
                }
                if self.order[w][v] {
                    if !self.domains[w].is_subset(&self.domains[v]) {
                        return bad(format!("domain shrinks from {w} to {v}"));
                    }
                    if let Some(a) = self.atoms[w].iter().find(|a| !self.atoms[v].contains(*a)) {
                        return bad(format!("{} holds at {w} but not at {v}", atom_text(a)));
                    }
                }
            }
            if let Some(a) = self.atoms[w].iter().find(|(_, args)| args.iter().any(|d| !self.domains[w].contains(d))) {
                return bad(format!("{} at {w} mentions an individual outside the domain", atom_text(a)));
            }
        }
        for (name, table) in &self.functions {
            let arity = table.keys().next().map_or(0, Vec::len);
            for w in 0..n {
                for args in tuples(&self.domains[w], arity) {
                    match table.get(&args) {
                        Some(v) if self.domains[w].contains(v) => {}
                        Some(v) => return bad(format!("{name}{args:?} = {v} leaves the domain of world {w}")),
                        None => return bad(format!("{name} is undefined on {args:?} at world {w}")),
                    }
                }
            }
        }
        Ok(())
    }

    fn eval_term(&self, t: &Term, env: &Env<'_>) -> Result<Individual, SemanticsError> {
        match t {
            Term::Var(x) => env
                .iter()
                .rev()
                .find(|(y, _)| *y == x)
                .map(|&(_, d)| d)
                .ok_or_else(|| SemanticsError::EnvIncomplete(x.clone())),
            Term::App(f, args) => {
                let vals = args.iter().map(|a| self.eval_term(a, env)).collect::<Result<Vec<_>, _>>()?;
                self.functions
                    .get(f)
                    .and_then(|table| table.get(&vals))
                    .copied()
                    .ok_or_else(|| SemanticsError::UndefinedFunction { name: f.clone(), args: vals })
            }
        }
    }

    fn eval<'a>(&self, w: World, env: &mut Env<'a>, f: &'a Formula) -> Result<bool, SemanticsError> {
        Ok(match f {
            Formula::Bottom => false,
            Formula::Atom(p, args) => {
                let vals = args.iter().map(|a| self.eval_term(a, env)).collect::<Result<Vec<_>, _>>()?;
                self.atoms[w].contains(&(p.clone(), vals))
            }
            Formula::And(a, b) => self.eval(w, env, a)? && self.eval(w, env, b)?,
            Formula::Or(a, b) => self.eval(w, env, a)? || self.eval(w, env, b)?,
            Formula::Imp(a, b) => {
                for v in self.successors(w) {
                    if self.eval(v, env, a)? && !self.eval(v, env, b)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Forall(x, body) => {
                for v in self.successors(w) {
                    for &d in &self.domains[v] {
                        env.push((x, d));
                        let r = self.eval(v, env, body);
                        env.pop();
                        if !r? {
                            return Ok(false);
                        }
                    }
                }
                true
            }
            Formula::Exists(x, body) => {
                for &d in &self.domains[w] {
                    env.push((x, d));
                    let r = self.eval(w, env, body);
                    env.pop();
                    if r? {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }

    /// Whether `w` forces `f` under `env`, which must cover the free
    /// variables of `f` with individuals of `w`'s domain.
    pub fn forces(&self, w: World, env: &BTreeMap<Var, Individual>, f: &Formula) -> Result<bool, SemanticsError> {
        if w >= self.world_count() {
            return Err(SemanticsError::NoSuchWorld(w));
        }
        for x in f.free_vars_ordered() {
            match env.get(&x) {
                None => return Err(SemanticsError::EnvIncomplete(x)),
                Some(&d) if !self.domains[w].contains(&d) => {
                    return Err(SemanticsError::IndividualOutOfDomain { individual: d, world: w })
                }
                Some(_) => {}
            }
        }
        let mut stack: Env<'_> = env.iter().map(|(x, &d)| (x, d)).collect();
        self.eval(w, &mut stack, f)
    }

    /// Whether every world forces `f`. Free variables are read universally,
    /// so an open formula is valid when its universal closure is; evaluation
    /// errors count as failure.
    pub fn valid_in(&self, f: &Formula) -> bool {
        self.refuting_world(f).is_none()
    }

    /// The first world that does not force the universal closure of `f`.
    pub fn refuting_world(&self, f: &Formula) -> Option<World> {
        let closed = close(f);
        (0..self.world_count()).find(|&w| !matches!(self.eval(w, &mut Vec::new(), &closed), Ok(true)))
    }
}

fn close(f: &Formula) -> Formula {
    f.free_vars_ordered().into_iter().rev().fold(f.clone(), |acc, x| Formula::forall(x, acc))
}

pub(crate) fn atom_text((p, args): &GroundAtom) -> String {
    if args.is_empty() {
        p.clone()
    } else {
        let args: Vec<String> = args.iter().map(|d| individual_name(*d)).collect();
        format!("{p}({})", args.join(", "))
    }
}

pub(crate) fn individual_name(d: Individual) -> String {
    format!("a{d}")
}

/// All tuples of length `n` over `set`, in lexicographic order.
pub(crate) fn tuples(set: &BTreeSet<Individual>, n: usize) -> Vec<Vec<Individual>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                set.iter().map(move |&d| {
                    let mut t = t.clone();
                    t.push(d);
                    t
                })
            })
            .collect();
    }
    out
}

impl fmt::Display for KripkeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&dump::dump_model(self))
    }
}
