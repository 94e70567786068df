use super::{Availability, Base, CalculusConfig, RuleError, RuleId, RuleInstance, Side};
use crate::syntax::{Formula, Hypersequent, Sequent, Term, Var};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Param {
    Other,
    Position,
    Splits,
    CutFormula,
    Witness,
    Eigen,
    Variable,
}

fn allowed_params(rule: RuleId) -> &'static [Param] {
    use Param::*;
    use RuleId::*;
    match rule {
        Id | Bot | Ew | Ec | Ee => &[],
        IwL | IwR | IcL | IcR | IeL | IeR => &[Position],
        Cut => &[Splits, CutFormula],
        AndL1 | AndL2 | AndR | OrL | OrR1 | OrR2 | ImpL | ImpR | ImpRPrime => &[Position],
        ForallL | ExistsR => &[Position, Witness],
        ForallRss | ForallRms | ForallRmm | ForallRsm | ExistsLs | ExistsLm => &[Position, Eigen],
        Com => &[Other, Splits],
        Rs | Ls => &[Other],
        Share | Unshare => &[Variable],
    }
}

fn check_params(inst: &RuleInstance) -> Result<(), RuleError> {
    let allowed = allowed_params(inst.rule);
    let present = [
        (Param::Other, inst.other.is_some(), "other"),
        (Param::Position, inst.position.is_some(), "position"),
        (Param::Splits, inst.split.is_some() || inst.split2.is_some(), "split"),
        (Param::CutFormula, inst.cut_formula.is_some(), "cut formula"),
        (Param::Witness, inst.witness.is_some(), "witness"),
        (Param::Eigen, inst.eigenvariable.is_some(), "eigenvariable"),
        (Param::Variable, inst.variable.is_some(), "variable"),
    ];
    for (param, is_present, name) in present {
        if is_present && !allowed.contains(&param) {
            return Err(bad(inst.rule, format!("unexpected parameter `{name}`")));
        }
    }
    let required: &[(bool, &str)] = match inst.rule {
        RuleId::Cut => &[
            (inst.cut_formula.is_some(), "cut formula"),
            (inst.split.is_some() && inst.split2.is_some(), "split and split2"),
        ],
        RuleId::Com => &[(inst.split.is_some() && inst.split2.is_some(), "split and split2")],
        RuleId::ForallL | RuleId::ExistsR => &[(inst.witness.is_some(), "witness")],
        RuleId::Share | RuleId::Unshare => &[(inst.variable.is_some(), "variable")],
        _ => &[],
    };
    for (ok, name) in required {
        if !ok {
            return Err(bad(inst.rule, format!("missing parameter `{name}`")));
        }
    }
    Ok(())
}

fn bad(rule: RuleId, reason: String) -> RuleError {
    RuleError::BadParameters { rule, reason }
}

fn shape(component: usize, reason: impl Into<String>) -> RuleError {
    RuleError::ShapeMismatch { component, reason: reason.into() }
}

/// Constraints every hypersequent in a proof must meet under `cfg`.
pub(crate) fn check_well_formed(cfg: &CalculusConfig, h: &Hypersequent) -> Result<(), RuleError> {
    if h.components.is_empty() {
        return Err(shape(0, "a hypersequent needs at least one component"));
    }
    if let Some(cap) = cfg.width_cap {
        if h.width() > cap {
            return Err(RuleError::WidthExceeded { width: h.width(), cap });
        }
    }
    if cfg.base == Base::SingleConclusion {
        if let Some(i) = h.components.iter().position(|s| s.succedent.len() > 1) {
            return Err(RuleError::DisciplineViolation(format!(
                "component {i} has {} formulas in its succedent under the single-conclusion base",
                h.components[i].succedent.len()
            )));
        }
    }
    if !cfg.allows_global_variables() && h.mentions_global() {
        return Err(RuleError::DisciplineViolation(
            "global variables are only legal when share or unshare is enabled".into(),
        ));
    }
    Ok(())
}

/// Premises demanded by `inst` for `conclusion` under `cfg`.
pub fn premises_of(
    cfg: &CalculusConfig,
    inst: &RuleInstance,
    conclusion: &Hypersequent,
) -> Result<Vec<Hypersequent>, RuleError> {
    match cfg.availability(inst.rule) {
        Availability::Enabled => {}
        Availability::Disabled => return Err(RuleError::RuleDisabled(inst.rule)),
        Availability::Forbidden => {
            return Err(RuleError::DisciplineViolation(format!(
                "rule {} is not part of the {} base",
                inst.rule,
                cfg.base.name()
            )))
        }
    }
    check_params(inst)?;
    check_well_formed(cfg, conclusion)?;
    let premises = apply(cfg, inst, conclusion)?;
    for p in &premises {
        check_well_formed(cfg, p)?;
    }
    Ok(premises)
}

fn component(h: &Hypersequent, k: usize) -> Result<&Sequent, RuleError> {
    h.components.get(k).ok_or_else(|| shape(k, format!("no component {k} in a hypersequent of width {}", h.width())))
}

fn replaced(h: &Hypersequent, k: usize, s: Sequent) -> Hypersequent {
    let mut out = h.clone();
    out.components[k] = s;
    out
}

fn left_position(inst: &RuleInstance, s: &Sequent) -> Result<usize, RuleError> {
    let p = inst.position.unwrap_or(0);
    if p < s.antecedent.len() {
        Ok(p)
    } else {
        Err(shape(inst.component, format!("no antecedent formula at position {p}")))
    }
}

fn right_position(inst: &RuleInstance, s: &Sequent) -> Result<usize, RuleError> {
    let p = match inst.position {
        Some(p) => p,
        None if s.succedent.is_empty() => {
            return Err(shape(inst.component, "the succedent is empty"));
        }
        None => s.succedent.len() - 1,
    };
    if p < s.succedent.len() {
        Ok(p)
    } else {
        Err(shape(inst.component, format!("no succedent formula at position {p}")))
    }
}

fn single_component(inst: &RuleInstance, h: &Hypersequent) -> Result<(), RuleError> {
    if h.width() == 1 {
        Ok(())
    } else {
        Err(shape(inst.component, format!("{} applies to a single sequent, found width {}", inst.rule, h.width())))
    }
}

fn single_succedent(inst: &RuleInstance, s: &Sequent) -> Result<(), RuleError> {
    if s.succedent.len() == 1 {
        Ok(())
    } else {
        Err(shape(
            inst.component,
            format!("{} needs exactly one succedent formula, found {}", inst.rule, s.succedent.len()),
        ))
    }
}

/// Where `x` occurs free in component `k` of `h`, if anywhere.
fn free_occurrence(h: &Hypersequent, k: usize, x: &Var) -> Option<(Side, usize)> {
    let s = &h.components[k];
    if let Some(i) = s.antecedent.iter().position(|f| f.has_free(x)) {
        return Some((Side::Antecedent, i));
    }
    s.succedent.iter().position(|f| f.has_free(x)).map(|i| (Side::Succedent, i))
}

/// The eigenvariable condition over the components listed in `scope`.
fn eigen_condition(h: &Hypersequent, scope: &[usize], x: &Var) -> Result<(), RuleError> {
    for &k in scope {
        if let Some((side, position)) = free_occurrence(h, k, x) {
            return Err(RuleError::EigenvariableViolation { var: x.clone(), component: k, side, position });
        }
    }
    Ok(())
}

fn eigen_for(inst: &RuleInstance, bound: &Var) -> Var {
    inst.eigenvariable.clone().unwrap_or_else(|| bound.clone())
}

fn apply(cfg: &CalculusConfig, inst: &RuleInstance, h: &Hypersequent) -> Result<Vec<Hypersequent>, RuleError> {
    use RuleId::*;
    let k = inst.component;
    let s = component(h, k)?;
    let all: Vec<usize> = (0..h.width()).collect();
    let one = |s: Sequent| Ok(vec![replaced(h, k, s)]);

    match inst.rule {
        Id => {
            single_component(inst, h)?;
            match (s.antecedent.as_slice(), s.succedent.as_slice()) {
                ([a], [b]) if a.alpha_eq(b) => Ok(vec![]),
                _ => Err(shape(k, "(Id) needs the form φ ⇒ φ")),
            }
        }
        Bot => {
            single_component(inst, h)?;
            match (s.antecedent.as_slice(), s.succedent.len()) {
                ([Formula::Bottom], 1) => Ok(vec![]),
                _ => Err(shape(k, "(Bot) needs the form ⊥ ⇒ φ")),
            }
        }
        Ew => {
            if h.width() < 2 {
                return Err(shape(k, "(ew) needs a second component to remain"));
            }
            let mut p = h.clone();
            p.components.remove(k);
            Ok(vec![p])
        }
        Ec => {
            let mut p = h.clone();
            p.components.insert(k + 1, s.clone());
            Ok(vec![p])
        }
        Ee => {
            if k + 1 >= h.width() {
                return Err(shape(k, "(ee) needs a component to the right"));
            }
            let mut p = h.clone();
            p.components.swap(k, k + 1);
            Ok(vec![p])
        }
        IwL => {
            let i = left_position(inst, s)?;
            let mut t = s.clone();
            t.antecedent.remove(i);
            one(t)
        }
        IwR => {
            let i = right_position(inst, s)?;
            let mut t = s.clone();
            t.succedent.remove(i);
            one(t)
        }
        IcL => {
            let i = left_position(inst, s)?;
            let mut t = s.clone();
            t.antecedent.insert(i, s.antecedent[i].clone());
            one(t)
        }
        IcR => {
            let i = right_position(inst, s)?;
            let mut t = s.clone();
            t.succedent.insert(i, s.succedent[i].clone());
            one(t)
        }
        IeL => {
            let i = inst.position.unwrap_or(0);
            if i + 1 >= s.antecedent.len() {
                return Err(shape(k, format!("no antecedent pair at position {i}")));
            }
            let mut t = s.clone();
            t.antecedent.swap(i, i + 1);
            one(t)
        }
        IeR => {
            let i = match inst.position {
                Some(i) => i,
                None => s.succedent.len().saturating_sub(2),
            };
            if i + 1 >= s.succedent.len() {
                return Err(shape(k, format!("no succedent pair at position {i}")));
            }
            let mut t = s.clone();
            t.succedent.swap(i, i + 1);
            one(t)
        }
        Cut => {
            let (a, b) = (inst.split.unwrap_or(0), inst.split2.unwrap_or(0));
            if a > s.antecedent.len() || b > s.succedent.len() {
                return Err(shape(k, "cut split points exceed the sequent"));
            }
            let delta = inst.cut_formula.clone().expect("checked");
            let mut left_succ = s.succedent[..b].to_vec();
            left_succ.push(delta.clone());
            let left = Sequent::new(s.antecedent[..a].to_vec(), left_succ);
            let mut right_ante = vec![delta];
            right_ante.extend_from_slice(&s.antecedent[a..]);
            let right = Sequent::new(right_ante, s.succedent[b..].to_vec());
            Ok(vec![replaced(h, k, left), replaced(h, k, right)])
        }
        AndL1 | AndL2 => {
            let i = left_position(inst, s)?;
            let Formula::And(a, b) = &s.antecedent[i] else {
                return Err(shape(k, format!("antecedent formula {i} is not a conjunction")));
            };
            let mut t = s.clone();
            t.antecedent[i] = if inst.rule == AndL1 { (**a).clone() } else { (**b).clone() };
            one(t)
        }
        AndR => {
            let i = right_position(inst, s)?;
            let Formula::And(a, b) = &s.succedent[i] else {
                return Err(shape(k, format!("succedent formula {i} is not a conjunction")));
            };
            let (mut l, mut r) = (s.clone(), s.clone());
            l.succedent[i] = (**a).clone();
            r.succedent[i] = (**b).clone();
            Ok(vec![replaced(h, k, l), replaced(h, k, r)])
        }
        OrL => {
            let i = left_position(inst, s)?;
            let Formula::Or(a, b) = &s.antecedent[i] else {
                return Err(shape(k, format!("antecedent formula {i} is not a disjunction")));
            };
            let (mut l, mut r) = (s.clone(), s.clone());
            l.antecedent[i] = (**a).clone();
            r.antecedent[i] = (**b).clone();
            Ok(vec![replaced(h, k, l), replaced(h, k, r)])
        }
        OrR1 | OrR2 => {
            let i = right_position(inst, s)?;
            let Formula::Or(a, b) = &s.succedent[i] else {
                return Err(shape(k, format!("succedent formula {i} is not a disjunction")));
            };
            let mut t = s.clone();
            t.succedent[i] = if inst.rule == OrR1 { (**a).clone() } else { (**b).clone() };
            one(t)
        }
        ImpL => {
            let i = left_position(inst, s)?;
            let Formula::Imp(a, b) = &s.antecedent[i] else {
                return Err(shape(k, format!("antecedent formula {i} is not an implication")));
            };
            let mut rest = s.antecedent.clone();
            rest.remove(i);
            // Gentzen's single-conclusion form drops Δ from the left premise.
            let mut left_succ = match cfg.base {
                Base::SingleConclusion => Vec::new(),
                _ => s.succedent.clone(),
            };
            left_succ.push((**a).clone());
            let left = Sequent::new(rest, left_succ);
            let mut right = s.clone();
            right.antecedent[i] = (**b).clone();
            Ok(vec![replaced(h, k, left), replaced(h, k, right)])
        }
        ImpR | ImpRPrime => {
            if inst.rule == ImpRPrime {
                single_succedent(inst, s)?;
            }
            let i = right_position(inst, s)?;
            let Formula::Imp(a, b) = &s.succedent[i] else {
                return Err(shape(k, format!("succedent formula {i} is not an implication")));
            };
            let mut t = s.clone();
            t.antecedent.insert(0, (**a).clone());
            t.succedent[i] = (**b).clone();
            one(t)
        }
        ForallL => {
            let i = left_position(inst, s)?;
            let Formula::Forall(x, body) = &s.antecedent[i] else {
                return Err(shape(k, format!("antecedent formula {i} is not universal")));
            };
            let t_ = inst.witness.as_ref().expect("checked");
            let mut t = s.clone();
            t.antecedent[i] = body.substitute(x, t_);
            one(t)
        }
        ExistsR => {
            let i = right_position(inst, s)?;
            let Formula::Exists(x, body) = &s.succedent[i] else {
                return Err(shape(k, format!("succedent formula {i} is not existential")));
            };
            let t_ = inst.witness.as_ref().expect("checked");
            let mut t = s.clone();
            t.succedent[i] = body.substitute(x, t_);
            one(t)
        }
        ForallRss | ForallRms | ForallRmm | ForallRsm => {
            let single = matches!(inst.rule, ForallRss | ForallRsm);
            if single {
                single_component(inst, h)?;
            }
            if matches!(inst.rule, ForallRss | ForallRms) {
                single_succedent(inst, s)?;
            }
            let i = right_position(inst, s)?;
            let Formula::Forall(x, body) = &s.succedent[i] else {
                return Err(shape(k, format!("succedent formula {i} is not universal")));
            };
            let y = eigen_for(inst, x);
            eigen_condition(h, if single { &[0] } else { &all }, &y)?;
            let mut t = s.clone();
            t.succedent[i] = body.substitute(x, &Term::Var(y));
            one(t)
        }
        ExistsLs | ExistsLm => {
            if inst.rule == ExistsLs {
                single_component(inst, h)?;
            }
            let i = left_position(inst, s)?;
            let Formula::Exists(x, body) = &s.antecedent[i] else {
                return Err(shape(k, format!("antecedent formula {i} is not existential")));
            };
            let y = eigen_for(inst, x);
            eigen_condition(h, if inst.rule == ExistsLs { &[0] } else { &all }, &y)?;
            let mut t = s.clone();
            t.antecedent[i] = body.substitute(x, &Term::Var(y));
            one(t)
        }
        Com | Rs | Ls => {
            let j = inst.other.unwrap_or(k + 1);
            if j == k {
                return Err(shape(k, format!("{} needs two distinct components", inst.rule)));
            }
            let t = component(h, j)?;
            let merged = match inst.rule {
                Com => {
                    let (a, b) = (inst.split.unwrap_or(0), inst.split2.unwrap_or(0));
                    if a > s.antecedent.len() || b > t.antecedent.len() {
                        return Err(shape(k, "communication split points exceed the antecedents"));
                    }
                    let (gamma, delta_p) = s.antecedent.split_at(a);
                    let (gamma_p, delta) = t.antecedent.split_at(b);
                    let first = Sequent::new([gamma, delta].concat(), s.succedent.clone());
                    let second = Sequent::new([gamma_p, delta_p].concat(), t.succedent.clone());
                    return Ok(vec![without(replaced(h, k, first), j), without(replaced(h, j, second), k)]);
                }
                Rs => {
                    if !same_formulas(&s.antecedent, &t.antecedent) {
                        return Err(shape(j, "(rs) needs identical antecedents"));
                    }
                    Sequent::new(s.antecedent.clone(), [s.succedent.as_slice(), t.succedent.as_slice()].concat())
                }
                _ => {
                    if !same_formulas(&s.succedent, &t.succedent) {
                        return Err(shape(j, "(ls) needs identical succedents"));
                    }
                    Sequent::new([s.antecedent.as_slice(), t.antecedent.as_slice()].concat(), s.succedent.clone())
                }
            };
            Ok(vec![without(replaced(h, k, merged), j)])
        }
        Share | Unshare => {
            let name = inst.variable.as_deref().expect("checked");
            let (local, global) = (Var::local(name), Var::global(name));
            // share turns local into global: the conclusion holds the global.
            let (in_conclusion, in_premise) = if inst.rule == Share { (global, local) } else { (local, global) };
            if s.has_free(&in_premise) {
                return Err(shape(
                    k,
                    format!("{in_premise} occurs free in the component, so it is not the result of {}", inst.rule),
                ));
            }
            let premise = s.substitute(&in_conclusion, &Term::Var(in_premise.clone()));
            if !premise.substitute(&in_premise, &Term::Var(in_conclusion.clone())).alpha_eq(s) {
                return Err(shape(k, "component is not a renaming of a premise"));
            }
            let global = Var::global(name);
            let others: Vec<usize> = all.iter().copied().filter(|&i| i != k).collect();
            eigen_condition(h, &others, &global)?;
            one(premise)
        }
    }
}

fn without(mut h: Hypersequent, k: usize) -> Hypersequent {
    h.components.remove(k);
    h
}

fn same_formulas(a: &[Formula], b: &[Formula]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.alpha_eq(y))
}
