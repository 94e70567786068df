use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::syntax::{Formula, Hypersequent, Sequent, Var};

/// Whether the free variables of a hypersequent are bound once around the
/// whole disjunction (`Shared`) or separately in each component (`Local`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TranslationMode {
    Shared,
    Local,
}

impl FromStr for TranslationMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "shared" => Ok(TranslationMode::Shared),
            "local" => Ok(TranslationMode::Local),
            _ => Err(format!("unknown translation mode `{s}` (expected shared or local)")),
        }
    }
}

impl fmt::Display for TranslationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TranslationMode::Shared => "shared",
            TranslationMode::Local => "local",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("global variable {0} has no formula reading")]
    GlobalVariablePresent(Var),
}

fn fold_right(fs: &[Formula], join: fn(Formula, Formula) -> Formula) -> Option<Formula> {
    let (last, init) = fs.split_last()?;
    Some(init.iter().rev().fold(last.clone(), |acc, f| join(f.clone(), acc)))
}

/// `⋀Γ → ⋁Δ`, nesting to the right; an empty antecedent leaves `⋁Δ` alone
/// and an empty succedent is `⊥`.
pub fn sequent_formula(s: &Sequent) -> Formula {
    let succ = fold_right(&s.succedent, Formula::or).unwrap_or(Formula::Bottom);
    match fold_right(&s.antecedent, Formula::and) {
        Some(ante) => Formula::imp(ante, succ),
        None => succ,
    }
}

/// `∀x₁…∀xₙ f`, with `vars[0]` outermost.
pub fn universal_closure(f: Formula, vars: &[Var]) -> Formula {
    vars.iter().rev().fold(f, |acc, x| Formula::forall(x.clone(), acc))
}

/// The closed formula a hypersequent stands for.
///
/// Free variables are closed in order of first occurrence, scanning the
/// components left to right.
pub fn hyperseq_formula(h: &Hypersequent, mode: TranslationMode) -> Result<Formula, TranslateError> {
    if let Some(v) = h.free_vars_ordered().into_iter().find(Var::is_global) {
        return Err(TranslateError::GlobalVariablePresent(v));
    }
    let parts: Vec<Formula> = match mode {
        TranslationMode::Shared => h.components.iter().map(sequent_formula).collect(),
        TranslationMode::Local => {
            h.components.iter().map(|s| universal_closure(sequent_formula(s), &s.free_vars_ordered())).collect()
        }
    };
    let body = fold_right(&parts, Formula::or).unwrap_or(Formula::Bottom);
    Ok(match mode {
        TranslationMode::Shared => universal_closure(body, &h.free_vars_ordered()),
        TranslationMode::Local => body,
    })
}
