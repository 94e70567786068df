//! First-order terms and formulas, sequents and hypersequents.
//!
//! Variables carry a scope. Ordinary proofs only use [`Scope::Local`]
//! variables; [`Scope::Global`] ones exist for the share/unshare rules and
//! are written `x!` in the concrete syntax.

mod parse;

pub use parse::{
    parse_formula, parse_formula_with, parse_hypersequent, parse_hypersequent_with, parse_sequent, parse_term,
    parse_term_with, ParseError, ParseErrorKind, Signature,
};

use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scope {
    Local,
    Global,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub name: String,
    pub scope: Scope,
}

impl Var {
    pub fn local(name: impl Into<String>) -> Self {
        Var { name: name.into(), scope: Scope::Local }
    }

    pub fn global(name: impl Into<String>) -> Self {
        Var { name: name.into(), scope: Scope::Global }
    }

    /// The same name in the other scope.
    pub fn flipped(&self) -> Self {
        let scope = match self.scope {
            Scope::Local => Scope::Global,
            Scope::Global => Scope::Local,
        };
        Var { name: self.name.clone(), scope }
    }

    pub fn is_global(&self) -> bool {
        self.scope == Scope::Global
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.scope {
            Scope::Local => write!(f, "{}", self.name),
            Scope::Global => write!(f, "{}!", self.name),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Var),
    /// Function application; zero arguments make a constant.
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(Var::local(name))
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::App(name.into(), Vec::new())
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a Var>) {
        match self {
            Term::Var(v) => out.push(v),
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out.into_iter().cloned().collect()
    }

    pub fn mentions_global(&self) -> bool {
        match self {
            Term::Var(v) => v.is_global(),
            Term::App(_, args) => args.iter().any(Term::mentions_global),
        }
    }

    pub fn contains_var(&self, x: &Var) -> bool {
        match self {
            Term::Var(v) => v == x,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(x)),
        }
    }

    pub fn substitute(&self, x: &Var, t: &Term) -> Term {
        match self {
            Term::Var(v) if v == x => t.clone(),
            Term::Var(_) => self.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.substitute(x, t)).collect()),
        }
    }

    /// Number of syntax nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_term(self, f, &Notation::ASCII)
    }
}

/// Formulas of the first-order language. `¬φ` is `φ → ⊥` and `⊤` is `⊥ → ⊥`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Bottom,
    Atom(String, Vec<Term>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
}

impl Formula {
    pub fn prop(name: impl Into<String>) -> Self {
        Formula::Atom(name.into(), Vec::new())
    }

    pub fn atom(name: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Atom(name.into(), args)
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Self {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn not(a: Formula) -> Self {
        Formula::imp(a, Formula::Bottom)
    }

    pub fn top() -> Self {
        Formula::imp(Formula::Bottom, Formula::Bottom)
    }

    pub fn forall(x: Var, body: Formula) -> Self {
        Formula::Forall(x, Box::new(body))
    }

    pub fn exists(x: Var, body: Formula) -> Self {
        Formula::Exists(x, Box::new(body))
    }

    /// Free variables in first-occurrence order, left to right.
    pub fn free_vars_ordered(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.push_free_vars(&mut Vec::new(), &mut out);
        out
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        self.free_vars_ordered().into_iter().collect()
    }

    fn push_free_vars<'a>(&'a self, bound: &mut Vec<&'a Var>, out: &mut Vec<Var>) {
        match self {
            Formula::Bottom => {}
            Formula::Atom(_, args) => {
                let mut vs = Vec::new();
                args.iter().for_each(|a| a.collect_vars(&mut vs));
                for v in vs {
                    if !bound.contains(&v) && !out.contains(v) {
                        out.push(v.clone());
                    }
                }
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.push_free_vars(bound, out);
                b.push_free_vars(bound, out);
            }
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                bound.push(x);
                body.push_free_vars(bound, out);
                bound.pop();
            }
        }
    }

    pub fn has_free(&self, x: &Var) -> bool {
        match self {
            Formula::Bottom => false,
            Formula::Atom(_, args) => args.iter().any(|a| a.contains_var(x)),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => a.has_free(x) || b.has_free(x),
            Formula::Forall(y, body) | Formula::Exists(y, body) => y != x && body.has_free(x),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars_ordered().is_empty()
    }

    /// Capture-avoiding substitution `[t/x]self`.
    ///
    /// A binder that would capture a variable of `t` is renamed by appending
    /// the smallest numeric suffix that keeps the result well-scoped.
    pub fn substitute(&self, x: &Var, t: &Term) -> Formula {
        match self {
            Formula::Bottom => Formula::Bottom,
            Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|a| a.substitute(x, t)).collect()),
            Formula::And(a, b) => Formula::and(a.substitute(x, t), b.substitute(x, t)),
            Formula::Or(a, b) => Formula::or(a.substitute(x, t), b.substitute(x, t)),
            Formula::Imp(a, b) => Formula::imp(a.substitute(x, t), b.substitute(x, t)),
            Formula::Forall(y, body) | Formula::Exists(y, body) => {
                let is_forall = matches!(self, Formula::Forall(..));
                let rebuild = |v: Var, b: Formula| {
                    if is_forall {
                        Formula::forall(v, b)
                    } else {
                        Formula::exists(v, b)
                    }
                };
                if y == x || !body.has_free(x) {
                    return self.clone();
                }
                if t.contains_var(y) {
                    let mut avoid = t.vars();
                    avoid.extend(body.free_vars());
                    avoid.insert(x.clone());
                    let fresh = fresh_var(y, &avoid);
                    let renamed = body.substitute(y, &Term::Var(fresh.clone()));
                    rebuild(fresh, renamed.substitute(x, t))
                } else {
                    rebuild(y.clone(), body.substitute(x, t))
                }
            }
        }
    }

    /// True iff the two formulas differ only in the names of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        alpha_eq_in(self, other, &mut Vec::new(), &mut Vec::new())
    }

    /// Number of syntax nodes, counting term nodes inside atoms.
    pub fn size(&self) -> usize {
        match self {
            Formula::Bottom => 1,
            Formula::Atom(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.size() + b.size(),
            Formula::Forall(_, body) | Formula::Exists(_, body) => 1 + body.size(),
        }
    }

    /// Whether any variable occurrence (free or bound) is global.
    pub fn mentions_global(&self) -> bool {
        match self {
            Formula::Bottom => false,
            Formula::Atom(_, args) => args.iter().any(Term::mentions_global),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => a.mentions_global() || b.mentions_global(),
            Formula::Forall(x, body) | Formula::Exists(x, body) => x.is_global() || body.mentions_global(),
        }
    }

    /// Predicate symbols with their arities, in first-occurrence order.
    pub fn predicates(&self) -> Vec<(String, usize)> {
        let mut out = Vec::new();
        self.walk_atoms(&mut |p, args| {
            if !out.iter().any(|(q, _): &(String, usize)| q == p) {
                out.push((p.to_string(), args.len()));
            }
        });
        out
    }

    /// Function symbols with their arities, in first-occurrence order.
    pub fn functions(&self) -> Vec<(String, usize)> {
        fn visit(t: &Term, out: &mut Vec<(String, usize)>) {
            if let Term::App(f, args) = t {
                if !out.iter().any(|(g, _)| g == f) {
                    out.push((f.clone(), args.len()));
                }
                args.iter().for_each(|a| visit(a, out));
            }
        }
        let mut out = Vec::new();
        self.walk_atoms(&mut |_, args| args.iter().for_each(|a| visit(a, &mut out)));
        out
    }

    fn walk_atoms(&self, f: &mut impl FnMut(&str, &[Term])) {
        match self {
            Formula::Bottom => {}
            Formula::Atom(p, args) => f(p, args),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.walk_atoms(f);
                b.walk_atoms(f);
            }
            Formula::Forall(_, body) | Formula::Exists(_, body) => body.walk_atoms(f),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Forall(..) | Formula::Exists(..) => 0,
            Formula::Imp(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Bottom | Formula::Atom(..) => 4,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, n: &Notation, ctx: u8) -> fmt::Result {
        let paren = self.precedence() < ctx;
        if paren {
            write!(f, "(")?;
        }
        match self {
            Formula::Bottom => write!(f, "{}", n.bottom)?,
            Formula::Atom(p, args) => {
                write!(f, "{}", (n.predicate)(p))?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ", ")?;
                        }
                        fmt_term(a, f, n)?;
                    }
                    write!(f, ")")?;
                }
            }
            Formula::Imp(a, b) => {
                a.fmt_prec(f, n, 2)?;
                write!(f, "{}", n.imp)?;
                b.fmt_prec(f, n, 1)?;
            }
            Formula::Or(a, b) => {
                a.fmt_prec(f, n, 2)?;
                write!(f, "{}", n.or)?;
                b.fmt_prec(f, n, 3)?;
            }
            Formula::And(a, b) => {
                a.fmt_prec(f, n, 3)?;
                write!(f, "{}", n.and)?;
                b.fmt_prec(f, n, 4)?;
            }
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                let q = if matches!(self, Formula::Forall(..)) { n.forall } else { n.exists };
                write!(f, "{q}")?;
                fmt_var(x, f, n)?;
                write!(f, "{}", n.binder_dot)?;
                body.fmt_prec(f, n, 0)?;
            }
        }
        if paren {
            write!(f, ")")?;
        }
        Ok(())
    }

    /// Renders with an alternative set of tokens.
    pub fn display_with<'a>(&'a self, notation: &'a Notation) -> impl fmt::Display + 'a {
        Rendered(self, notation)
    }
}

/// Token table used when printing formulas.
#[derive(Debug, Clone, Copy)]
pub struct Notation {
    pub bottom: &'static str,
    pub and: &'static str,
    pub or: &'static str,
    pub imp: &'static str,
    pub forall: &'static str,
    pub exists: &'static str,
    pub binder_dot: &'static str,
    /// Written after a global variable's name.
    pub global_mark: &'static str,
    /// Whether constants keep their empty argument list, as in `c()`.
    pub constant_parens: bool,
    /// How predicate names are written.
    pub predicate: fn(&str) -> String,
}

impl Notation {
    /// The concrete syntax accepted by the parser.
    pub const ASCII: Notation = Notation {
        bottom: "bot",
        and: " & ",
        or: " \\/ ",
        imp: " -> ",
        forall: "forall ",
        exists: "exists ",
        binder_dot: ". ",
        global_mark: "!",
        constant_parens: true,
        predicate: str::to_string,
    };

    /// LaTeX math mode.
    pub const LATEX: Notation = Notation {
        bottom: r"\bot",
        and: r" \land ",
        or: r" \lor ",
        imp: r" \to ",
        forall: r"\forall ",
        exists: r"\exists ",
        binder_dot: r"\,",
        global_mark: r"^{\mathrm{g}}",
        constant_parens: false,
        predicate: latex_name,
    };
}

const GREEK: &[&str] = &[
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta", "iota", "kappa", "lambda", "mu", "nu", "xi",
    "pi", "rho", "sigma", "tau", "upsilon", "phi", "chi", "psi", "omega",
];

/// `phi` becomes `\varphi`, `gamma1` becomes `\gamma_{1}`, other names are set upright.
fn latex_name(name: &str) -> String {
    let stem = name.trim_end_matches(|c: char| c.is_ascii_digit());
    let index = &name[stem.len()..];
    let body = if GREEK.contains(&stem) {
        match stem {
            "phi" | "epsilon" | "theta" => format!("\\var{stem}"),
            _ => format!("\\{stem}"),
        }
    } else if stem.chars().count() == 1 {
        stem.to_string()
    } else {
        return format!("\\mathrm{{{name}}}");
    };
    if index.is_empty() {
        body
    } else {
        format!("{body}_{{{index}}}")
    }
}

struct Rendered<'a>(&'a Formula, &'a Notation);

impl fmt::Display for Rendered<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt_prec(f, self.1, 0)
    }
}

fn fmt_var(v: &Var, f: &mut fmt::Formatter<'_>, n: &Notation) -> fmt::Result {
    match v.scope {
        Scope::Local => write!(f, "{}", v.name),
        Scope::Global => write!(f, "{}{}", v.name, n.global_mark),
    }
}

fn fmt_term(t: &Term, f: &mut fmt::Formatter<'_>, n: &Notation) -> fmt::Result {
    match t {
        Term::Var(v) => fmt_var(v, f, n),
        Term::App(name, args) if args.is_empty() && !n.constant_parens => write!(f, "{name}"),
        Term::App(name, args) => {
            write!(f, "{name}(")?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                fmt_term(a, f, n)?;
            }
            write!(f, ")")
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // A quantifier nested as an operand always gets parentheses, so the
        // outermost call starts at the loosest context.
        self.fmt_prec(f, &Notation::ASCII, 0)
    }
}

fn fresh_var(base: &Var, avoid: &BTreeSet<Var>) -> Var {
    (1..)
        .map(|k| Var { name: format!("{}{k}", base.name), scope: base.scope })
        .find(|v| !avoid.contains(v))
        .expect("unbounded suffix supply")
}

/// A variable named after `base` that is not in `avoid`; `base` itself if possible.
pub fn fresh_like(base: &Var, avoid: &BTreeSet<Var>) -> Var {
    if avoid.contains(base) {
        fresh_var(base, avoid)
    } else {
        base.clone()
    }
}

fn bound_index(stack: &[&Var], v: &Var) -> Option<usize> {
    stack.iter().rposition(|b| *b == v)
}

fn alpha_eq_term(s: &Term, t: &Term, ls: &[&Var], rs: &[&Var]) -> bool {
    match (s, t) {
        (Term::Var(a), Term::Var(b)) => match (bound_index(ls, a), bound_index(rs, b)) {
            (None, None) => a == b,
            (Some(i), Some(j)) => i == j,
            _ => false,
        },
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_eq_term(x, y, ls, rs))
        }
        _ => false,
    }
}

fn alpha_eq_in<'a>(f: &'a Formula, g: &'a Formula, ls: &mut Vec<&'a Var>, rs: &mut Vec<&'a Var>) -> bool {
    match (f, g) {
        (Formula::Bottom, Formula::Bottom) => true,
        (Formula::Atom(p, xs), Formula::Atom(q, ys)) => {
            p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_eq_term(x, y, ls, rs))
        }
        (Formula::And(a, b), Formula::And(c, d))
        | (Formula::Or(a, b), Formula::Or(c, d))
        | (Formula::Imp(a, b), Formula::Imp(c, d)) => alpha_eq_in(a, c, ls, rs) && alpha_eq_in(b, d, ls, rs),
        (Formula::Forall(x, a), Formula::Forall(y, b)) | (Formula::Exists(x, a), Formula::Exists(y, b)) => {
            ls.push(x);
            rs.push(y);
            let eq = alpha_eq_in(a, b, ls, rs);
            ls.pop();
            rs.pop();
            eq
        }
        _ => false,
    }
}

/// A sequent `Γ ⇒ Δ` with ordered sides.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Sequent {
    pub antecedent: Vec<Formula>,
    pub succedent: Vec<Formula>,
}

impl Sequent {
    pub fn new(antecedent: Vec<Formula>, succedent: Vec<Formula>) -> Self {
        Sequent { antecedent, succedent }
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.antecedent.iter().chain(&self.succedent)
    }

    pub fn has_free(&self, x: &Var) -> bool {
        self.formulas().any(|f| f.has_free(x))
    }

    pub fn free_vars_ordered(&self) -> Vec<Var> {
        let mut out: Vec<Var> = Vec::new();
        for v in self.formulas().flat_map(Formula::free_vars_ordered) {
            if !out.contains(&v) {
                out.push(v);
            }
        }
        out
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        self.formulas().flat_map(Formula::free_vars_ordered).collect()
    }

    pub fn substitute(&self, x: &Var, t: &Term) -> Sequent {
        Sequent {
            antecedent: self.antecedent.iter().map(|f| f.substitute(x, t)).collect(),
            succedent: self.succedent.iter().map(|f| f.substitute(x, t)).collect(),
        }
    }

    pub fn alpha_eq(&self, other: &Sequent) -> bool {
        fn side(a: &[Formula], b: &[Formula]) -> bool {
            a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.alpha_eq(y))
        }
        side(&self.antecedent, &other.antecedent) && side(&self.succedent, &other.succedent)
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |fs: &[Formula]| fs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        let (ante, succ) = (join(&self.antecedent), join(&self.succedent));
        match (ante.is_empty(), succ.is_empty()) {
            (true, true) => write!(f, "|-"),
            (true, false) => write!(f, "|- {succ}"),
            (false, true) => write!(f, "{ante} |-"),
            (false, false) => write!(f, "{ante} |- {succ}"),
        }
    }
}

/// An ordered, nonempty sequence of components.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hypersequent {
    pub components: Vec<Sequent>,
}

impl Hypersequent {
    pub fn new(components: Vec<Sequent>) -> Self {
        Hypersequent { components }
    }

    pub fn single(s: Sequent) -> Self {
        Hypersequent { components: vec![s] }
    }

    pub fn width(&self) -> usize {
        self.components.len()
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.components.iter().flat_map(Sequent::formulas)
    }

    pub fn has_free(&self, x: &Var) -> bool {
        self.components.iter().any(|s| s.has_free(x))
    }

    pub fn free_vars_ordered(&self) -> Vec<Var> {
        let mut out: Vec<Var> = Vec::new();
        for v in self.components.iter().flat_map(Sequent::free_vars_ordered) {
            if !out.contains(&v) {
                out.push(v);
            }
        }
        out
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        self.components.iter().flat_map(Sequent::free_vars_ordered).collect()
    }

    pub fn mentions_global(&self) -> bool {
        self.formulas().any(Formula::mentions_global)
    }

    pub fn alpha_eq(&self, other: &Hypersequent) -> bool {
        self.components.len() == other.components.len()
            && self.components.iter().zip(&other.components).all(|(a, b)| a.alpha_eq(b))
    }
}

impl fmt::Display for Hypersequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, " || ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl From<Sequent> for Hypersequent {
    fn from(s: Sequent) -> Self {
        Hypersequent::single(s)
    }
}
