//! Inference rules, rule instances and calculus configurations.
//!
//! Every rule is applied root-first: given a conclusion and an instance,
//! [`premises_of`] returns the premises the rule demands or explains why the
//! conclusion does not fit. Rules act on a chosen component (`component`)
//! and, for logical rules, on a chosen formula (`position`), leaving the
//! rest of the hypersequent in place. With the default parameters the
//! principal component is the first one, a left principal formula is the
//! first of its antecedent and a right principal formula the last of its
//! succedent, which is exactly the layout of the textbook schemas.

mod applicable;
mod rules;

pub use applicable::{applicable_rules, applications, CandidatePool};
pub use rules::premises_of;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{Formula, Term, Var};

macro_rules! rule_ids {
    ($($variant:ident => $name:literal, $label:literal, $latex:literal;)*) => {
        /// The closed catalogue of inference rules.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(try_from = "String", into = "String")]
        pub enum RuleId {
            $($variant,)*
        }

        impl RuleId {
            pub const ALL: &'static [RuleId] = &[$(RuleId::$variant,)*];

            /// Identifier used in proof files and on the command line.
            pub fn name(self) -> &'static str {
                match self {
                    $(RuleId::$variant => $name,)*
                }
            }

            /// Conventional label, e.g. `(∀-R_ms)`.
            pub fn label(self) -> &'static str {
                match self {
                    $(RuleId::$variant => $label,)*
                }
            }

            /// Label as LaTeX math-mode source.
            pub fn latex_label(self) -> &'static str {
                match self {
                    $(RuleId::$variant => $latex,)*
                }
            }
        }

        impl FromStr for RuleId {
            type Err = UnknownRule;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($name => Ok(RuleId::$variant),)*
                    _ => Err(UnknownRule(s.to_string())),
                }
            }
        }
    };
}

rule_ids! {
    Id => "Id", "(Id)", r"(\mathrm{Id})";
    Bot => "Bot", "(Bot)", r"(\mathrm{Bot})";
    Ew => "ew", "(ew)", r"(\mathrm{ew})";
    Ec => "ec", "(ec)", r"(\mathrm{ec})";
    Ee => "ee", "(ee)", r"(\mathrm{ee})";
    IwL => "iwL", "(iw-L)", r"(\mathrm{iw\text{-}L})";
    IwR => "iwR", "(iw-R)", r"(\mathrm{iw\text{-}R})";
    IcL => "icL", "(ic-L)", r"(\mathrm{ic\text{-}L})";
    IcR => "icR", "(ic-R)", r"(\mathrm{ic\text{-}R})";
    IeL => "ieL", "(ie-L)", r"(\mathrm{ie\text{-}L})";
    IeR => "ieR", "(ie-R)", r"(\mathrm{ie\text{-}R})";
    Cut => "cut", "(cut)", r"(\mathrm{cut})";
    AndL1 => "andL1", "(∧1-L)", r"(\land_{1}\text{-}\mathrm{L})";
    AndL2 => "andL2", "(∧2-L)", r"(\land_{2}\text{-}\mathrm{L})";
    AndR => "andR", "(∧-R)", r"(\land\text{-}\mathrm{R})";
    OrL => "orL", "(∨-L)", r"(\lor\text{-}\mathrm{L})";
    OrR1 => "orR1", "(∨1-R)", r"(\lor_{1}\text{-}\mathrm{R})";
    OrR2 => "orR2", "(∨2-R)", r"(\lor_{2}\text{-}\mathrm{R})";
    ImpL => "impL", "(→-L)", r"(\to\text{-}\mathrm{L})";
    ImpR => "impR", "(→-R)", r"(\to\text{-}\mathrm{R})";
    ImpRPrime => "impRprime", "(→-R')", r"(\to\text{-}\mathrm{R}')";
    ForallL => "forallL", "(∀-L)", r"(\forall\text{-}\mathrm{L})";
    ForallRss => "forallRss", "(∀-R_ss)", r"(\forall\text{-}\mathrm{R}_{ss})";
    ForallRms => "forallRms", "(∀-R_ms)", r"(\forall\text{-}\mathrm{R}_{ms})";
    ForallRmm => "forallRmm", "(∀-R_mm)", r"(\forall\text{-}\mathrm{R}_{mm})";
    ForallRsm => "forallRsm", "(∀-R_sm)", r"(\forall\text{-}\mathrm{R}_{sm})";
    ExistsLs => "existsLs", "(∃-L_s)", r"(\exists\text{-}\mathrm{L}_{s})";
    ExistsLm => "existsLm", "(∃-L_m)", r"(\exists\text{-}\mathrm{L}_{m})";
    ExistsR => "existsR", "(∃-R)", r"(\exists\text{-}\mathrm{R})";
    Com => "com", "(com)", r"(\mathrm{com})";
    Rs => "rs", "(rs)", r"(\mathrm{rs})";
    Ls => "ls", "(ls)", r"(\mathrm{ls})";
    Share => "share", "(share)", r"(\mathrm{share})";
    Unshare => "unshare", "(unshare)", r"(\mathrm{unshare})";
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown rule `{0}`")]
pub struct UnknownRule(pub String);

impl TryFrom<String> for RuleId {
    type Error = UnknownRule;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<RuleId> for String {
    fn from(r: RuleId) -> Self {
        r.name().to_string()
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl RuleId {
    pub fn is_axiom(self) -> bool {
        matches!(self, RuleId::Id | RuleId::Bot)
    }

    pub fn is_quantifier_rule(self) -> bool {
        use RuleId::*;
        matches!(self, ForallL | ForallRss | ForallRms | ForallRmm | ForallRsm | ExistsLs | ExistsLm | ExistsR)
    }

    /// Rules that are not part of any base calculus and must be switched on.
    pub fn is_optional(self) -> bool {
        use RuleId::*;
        matches!(self, ForallRms | ForallRmm | ForallRsm | ExistsLm | Com | Rs | Ls | Share | Unshare)
    }

    /// Rules that move material between components.
    pub fn is_communication(self) -> bool {
        matches!(self, RuleId::Com | RuleId::Rs | RuleId::Ls)
    }

    pub fn premise_count(self) -> usize {
        use RuleId::*;
        match self {
            Id | Bot => 0,
            Cut | AndR | OrL | ImpL | Com => 2,
            _ => 1,
        }
    }
}

/// The sequent discipline a calculus is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Base {
    /// Multi-conclusion sequents with the unrestricted `(→-R)`.
    Classical,
    /// Every succedent has at most one formula.
    SingleConclusion,
    /// Multi-conclusion sequents, but `(→-R)` only as `(→-R')`.
    RestrictedImp,
}

impl Base {
    pub fn name(self) -> &'static str {
        match self {
            Base::Classical => "classical",
            Base::SingleConclusion => "lj",
            Base::RestrictedImp => "ljprime",
        }
    }
}

impl FromStr for Base {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "classical" => Ok(Base::Classical),
            "lj" => Ok(Base::SingleConclusion),
            "ljprime" | "lj'" => Ok(Base::RestrictedImp),
            _ => Err(ConfigError::UnknownBase(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("unknown base `{0}` (expected classical, lj or ljprime)")]
    UnknownBase(String),
    #[error("rule `{0}` is part of every base calculus and cannot be toggled")]
    NotOptional(RuleId),
    #[error("rule `{rule}` is not available over the {base} base")]
    ForbiddenByBase { rule: RuleId, base: &'static str },
    #[error("rule `{0}` needs quantifiers to be enabled")]
    NeedsQuantifiers(RuleId),
    #[error("width cap must be positive")]
    ZeroWidthCap,
}

/// A calculus: a base discipline plus the optional rules switched on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CalculusConfig {
    pub base: Base,
    pub optional_rules: BTreeSet<RuleId>,
    pub quantifiers_enabled: bool,
    pub width_cap: Option<usize>,
}

/// Canonical preset names. `Q` stands for the predicate (∀) version and a
/// trailing `'` for the restricted-implication base.
pub const PRESET_NAMES: &[&str] = &[
    "HLK", "HLJ", "HLJ'", "QHLJ", "QHLJ'", "GD-com", "GD-rs", "GD-ls", "QGD-com", "QGD-rs", "LIN-pred", "CD-free",
    "LJ'",
];

/// How a rule stands under a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Availability {
    Enabled,
    /// An optional rule that is switched off, or a quantifier rule without quantifiers.
    Disabled,
    /// Ruled out by the base discipline.
    Forbidden,
}

impl CalculusConfig {
    pub fn new(base: Base) -> Self {
        CalculusConfig { base, optional_rules: BTreeSet::new(), quantifiers_enabled: false, width_cap: None }
    }

    pub fn with_quantifiers(mut self) -> Self {
        self.quantifiers_enabled = true;
        self
    }

    pub fn with(mut self, rule: RuleId) -> Self {
        self.optional_rules.insert(rule);
        self
    }

    pub fn with_width_cap(mut self, cap: usize) -> Self {
        self.width_cap = Some(cap);
        self
    }

    /// Looks up a preset. Accepts `∀` for `Q` and `′` or a trailing `p` for `'`.
    pub fn preset(name: &str) -> Result<Self, ConfigError> {
        use Base::*;
        use RuleId::*;
        let mut key = name.replace('∀', "Q").replace('′', "'");
        if let Some(stem) = key.strip_suffix('p') {
            if stem.ends_with("LJ") {
                key = format!("{stem}'");
            }
        }
        let cfg = match key.as_str() {
            "HLK" => Self::new(Classical),
            "HLJ" => Self::new(SingleConclusion),
            "HLJ'" => Self::new(RestrictedImp),
            "QHLJ" => Self::new(SingleConclusion).with_quantifiers(),
            "QHLJ'" => Self::new(RestrictedImp).with_quantifiers(),
            "GD-com" => Self::new(SingleConclusion).with(Com),
            "GD-rs" => Self::new(RestrictedImp).with(Rs),
            "GD-ls" => Self::new(RestrictedImp).with(Ls),
            "QGD-com" => Self::new(SingleConclusion).with_quantifiers().with(ForallRms).with(Com),
            "QGD-rs" => Self::new(RestrictedImp).with_quantifiers().with(ForallRms).with(Rs),
            "LIN-pred" => Self::new(SingleConclusion).with_quantifiers().with(Com),
            "CD-free" => Self::new(RestrictedImp).with_quantifiers().with(ForallRms).with(ExistsLm),
            "LJ'" => Self::new(RestrictedImp).with_quantifiers().with_width_cap(1),
            _ => return Err(ConfigError::UnknownPreset(name.to_string())),
        };
        Ok(cfg)
    }

    /// Switches an optional rule on, rejecting combinations the base rules out.
    pub fn enable(&mut self, rule: RuleId) -> Result<(), ConfigError> {
        if !rule.is_optional() {
            return Err(ConfigError::NotOptional(rule));
        }
        self.optional_rules.insert(rule);
        self.validate()
    }

    pub fn disable(&mut self, rule: RuleId) -> Result<(), ConfigError> {
        if !rule.is_optional() {
            return Err(ConfigError::NotOptional(rule));
        }
        self.optional_rules.remove(&rule);
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.width_cap == Some(0) {
            return Err(ConfigError::ZeroWidthCap);
        }
        for &rule in &self.optional_rules {
            if !rule.is_optional() {
                return Err(ConfigError::NotOptional(rule));
            }
            if self.forbidden_by_base(rule) {
                return Err(ConfigError::ForbiddenByBase { rule, base: self.base.name() });
            }
            if (rule.is_quantifier_rule() || matches!(rule, RuleId::Share | RuleId::Unshare))
                && !self.quantifiers_enabled
            {
                return Err(ConfigError::NeedsQuantifiers(rule));
            }
        }
        Ok(())
    }

    fn forbidden_by_base(&self, rule: RuleId) -> bool {
        use RuleId::*;
        match self.base {
            Base::Classical => false,
            Base::SingleConclusion => matches!(rule, ImpR | Rs | IcR | IeR),
            Base::RestrictedImp => rule == ImpR,
        }
    }

    pub fn availability(&self, rule: RuleId) -> Availability {
        if self.forbidden_by_base(rule) {
            return Availability::Forbidden;
        }
        let quantified = rule.is_quantifier_rule() || matches!(rule, RuleId::Share | RuleId::Unshare);
        if quantified && !self.quantifiers_enabled {
            return Availability::Disabled;
        }
        if rule.is_optional() && !self.optional_rules.contains(&rule) {
            return Availability::Disabled;
        }
        Availability::Enabled
    }

    pub fn is_enabled(&self, rule: RuleId) -> bool {
        self.availability(rule) == Availability::Enabled
    }

    /// Global variables are only meaningful when share/unshare are present.
    pub fn allows_global_variables(&self) -> bool {
        self.is_enabled(RuleId::Share) || self.is_enabled(RuleId::Unshare)
    }

    pub fn enabled_rules(&self) -> impl Iterator<Item = RuleId> + '_ {
        RuleId::ALL.iter().copied().filter(|r| self.is_enabled(*r))
    }

    /// Whether every rule of `self` is also available in `other`.
    pub fn is_subsumed_by(&self, other: &CalculusConfig) -> bool {
        self.enabled_rules().all(|r| other.is_enabled(r))
            && other.width_cap.is_none_or(|c| self.width_cap.is_some_and(|s| s <= c))
            && (self.base == other.base || (self.base == Base::RestrictedImp && other.base == Base::Classical))
    }
}

/// One application of a rule: which rule, where, and with what parameters.
///
/// Parameters a rule does not use must be absent; [`premises_of`] rejects
/// instances carrying extra parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RuleInstance {
    pub rule: RuleId,
    /// The principal (first) component.
    pub component: usize,
    /// The second component of `com`, `rs` and `ls`; defaults to `component + 1`.
    pub other: Option<usize>,
    /// Position of the principal formula inside its side of the sequent.
    pub position: Option<usize>,
    /// `cut`: length of Γ₀. `com`: length of Γ in the principal component.
    pub split: Option<usize>,
    /// `cut`: length of Δ₀. `com`: length of Γ′ in the other component.
    pub split2: Option<usize>,
    pub cut_formula: Option<Formula>,
    pub witness: Option<Term>,
    pub eigenvariable: Option<Var>,
    /// Variable name moved between scopes by `share`/`unshare`.
    pub variable: Option<String>,
}

impl RuleInstance {
    pub fn new(rule: RuleId) -> Self {
        RuleInstance {
            rule,
            component: 0,
            other: None,
            position: None,
            split: None,
            split2: None,
            cut_formula: None,
            witness: None,
            eigenvariable: None,
            variable: None,
        }
    }

    pub fn at(mut self, component: usize) -> Self {
        self.component = component;
        self
    }

    pub fn pos(mut self, position: usize) -> Self {
        self.position = Some(position);
        self
    }

    pub fn other(mut self, other: usize) -> Self {
        self.other = Some(other);
        self
    }

    pub fn splits(mut self, first: usize, second: usize) -> Self {
        self.split = Some(first);
        self.split2 = Some(second);
        self
    }

    pub fn cut(mut self, delta: Formula) -> Self {
        self.cut_formula = Some(delta);
        self
    }

    pub fn witness(mut self, t: Term) -> Self {
        self.witness = Some(t);
        self
    }

    pub fn eigen(mut self, x: Var) -> Self {
        self.eigenvariable = Some(x);
        self
    }

    pub fn variable(mut self, name: impl Into<String>) -> Self {
        self.variable = Some(name.into());
        self
    }
}

/// Which side of a sequent a formula sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Antecedent,
    Succedent,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Antecedent => "antecedent",
            Side::Succedent => "succedent",
        })
    }
}

/// Why a rule instance does not apply to a conclusion.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("rule {0} is not enabled in this calculus")]
    RuleDisabled(RuleId),
    #[error("shape mismatch in component {component}: {reason}")]
    ShapeMismatch { component: usize, reason: String },
    #[error("eigenvariable {var} occurs free in component {component} ({side} position {position})")]
    EigenvariableViolation { var: Var, component: usize, side: Side, position: usize },
    #[error("discipline violation: {0}")]
    DisciplineViolation(String),
    #[error("hypersequent of width {width} exceeds the cap of {cap}")]
    WidthExceeded { width: usize, cap: usize },
    #[error("bad parameters for {rule}: {reason}")]
    BadParameters { rule: RuleId, reason: String },
}

impl RuleError {
    /// Short stable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            RuleError::RuleDisabled(_) => "RuleDisabled",
            RuleError::ShapeMismatch { .. } => "ShapeMismatch",
            RuleError::EigenvariableViolation { .. } => "EigenvariableViolation",
            RuleError::DisciplineViolation(_) => "DisciplineViolation",
            RuleError::WidthExceeded { .. } => "WidthExceeded",
            RuleError::BadParameters { .. } => "BadParameters",
        }
    }
}
