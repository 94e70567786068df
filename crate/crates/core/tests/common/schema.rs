//! Rule schemas built bottom-up: meta-variables are instantiated first and
//! the conclusion and premises are assembled from them, so the expected
//! premises never come from decomposing a conclusion.

use hseq_core::calculus::{premises_of, Base, CalculusConfig, RuleError, RuleId, RuleInstance};
use hseq_core::syntax::{Formula, Hypersequent, Sequent, Term, Var};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use super::{arb_context, arb_formula, arb_sequent, arb_term, local, subst};

const CTX: &[&str] = &["z", "w"];
const BODY: &[&str] = &["x", "z"];

#[derive(Debug, Clone)]
pub struct Parts {
    before: Vec<Sequent>,
    mid: Vec<Sequent>,
    after: Vec<Sequent>,
    g1: Vec<Formula>,
    g2: Vec<Formula>,
    d1: Vec<Formula>,
    d2: Vec<Formula>,
    h1: Vec<Formula>,
    h2: Vec<Formula>,
    e1: Vec<Formula>,
    a: Formula,
    b: Formula,
    c: Formula,
    body: Formula,
    witness: Term,
    named_eigen: bool,
    omit_defaults: bool,
    swap: bool,
    pick: usize,
}

fn parts() -> impl Strategy<Value = Parts> {
    let comps = || prop::collection::vec(arb_sequent(CTX), 0..=2);
    let ctx = || arb_context(CTX, 2);
    let f = || arb_formula(CTX, 2);
    (
        (comps(), prop::collection::vec(arb_sequent(CTX), 0..=1), comps()),
        (ctx(), ctx(), ctx(), ctx()),
        (ctx(), ctx(), ctx()),
        (f(), f(), f(), arb_formula(BODY, 2), arb_term(CTX)),
        (any::<bool>(), any::<bool>(), any::<bool>(), 0usize..1000),
    )
        .prop_map(|((before, mid, after), (g1, g2, d1, d2), (h1, h2, e1), (a, b, c, body, witness), flags)| {
            Parts {
                before,
                mid,
                after,
                g1,
                g2,
                d1,
                d2,
                h1,
                h2,
                e1,
                a,
                b,
                c,
                body,
                witness,
                named_eigen: flags.0,
                omit_defaults: flags.1,
                swap: flags.2,
                pick: flags.3,
            }
        })
}

/// What `premises_of` must return.
#[derive(Debug, Clone)]
pub enum Expect {
    Premises(Vec<Hypersequent>),
    EigenViolation,
}

#[derive(Debug, Clone)]
pub struct Case {
    pub inst: RuleInstance,
    pub conclusion: Hypersequent,
    pub expect: Expect,
}

/// Every rule is available here, global variables included.
pub fn full_config() -> CalculusConfig {
    RuleId::ALL
        .iter()
        .filter(|r| r.is_optional())
        .fold(CalculusConfig::new(Base::Classical).with_quantifiers(), |c, &r| c.with(r))
}

fn cat(parts: &[&[Formula]]) -> Vec<Formula> {
    parts.concat()
}

fn with(xs: &[Formula], f: &Formula) -> Vec<Formula> {
    let mut v = xs.to_vec();
    v.push(f.clone());
    v
}

impl Parts {
    fn k(&self) -> usize {
        self.before.len()
    }

    fn around(&self, s: Sequent) -> Hypersequent {
        let mut c = self.before.clone();
        c.push(s);
        c.extend(self.after.iter().cloned());
        Hypersequent::new(c)
    }

    fn context(&self) -> Vec<Sequent> {
        [self.before.as_slice(), self.after.as_slice()].concat()
    }

    fn position(&self, inst: RuleInstance, p: usize, default: usize) -> RuleInstance {
        if self.omit_defaults && p == default {
            inst
        } else {
            inst.pos(p)
        }
    }

    fn eigen(&self) -> Var {
        if self.named_eigen {
            local("y")
        } else {
            local("x")
        }
    }

    fn mark(&self, eigen: &Var) -> Formula {
        Formula::atom("P", vec![Term::Var(eigen.clone())])
    }
}

fn insert(v: &[Formula], at: usize, f: Formula) -> Vec<Formula> {
    let mut v = v.to_vec();
    v.insert(at % (v.len() + 1), f);
    v
}

/// Two distinguished components placed in `G`; returns the components and
/// the indices of the first and second one.
fn pair(p: &Parts, s: Sequent, t: Sequent) -> (Vec<Sequent>, usize, usize) {
    let mut c = p.before.clone();
    let (first, second) = if p.swap { (t.clone(), s.clone()) } else { (s.clone(), t.clone()) };
    c.push(first);
    c.extend(p.mid.iter().cloned());
    c.push(second);
    c.extend(p.after.iter().cloned());
    let (i, j) = (p.before.len(), p.before.len() + 1 + p.mid.len());
    if p.swap {
        (c, j, i)
    } else {
        (c, i, j)
    }
}

fn replace_drop(c: &[Sequent], k: usize, s: Sequent, drop: usize) -> Hypersequent {
    let mut c = c.to_vec();
    c[k] = s;
    c.remove(drop);
    Hypersequent::new(c)
}

pub fn build(rule: RuleId, p: &Parts, negative: bool) -> Case {
    use RuleId::*;
    let k = p.k();
    let at = RuleInstance::new(rule).at(k);
    let (a, b) = (&p.a, &p.b);
    let x = local("x");
    let ok = |inst: RuleInstance, conclusion: Hypersequent, premises: Vec<Hypersequent>| Case {
        inst,
        conclusion,
        expect: Expect::Premises(premises),
    };
    let single = |s: Sequent| Hypersequent::single(s);
    let left = |conc: Vec<Formula>| Sequent::new(conc, p.d1.clone());
    let right = |conc: Vec<Formula>| Sequent::new(p.g1.clone(), conc);
    let lpos = p.g1.len();
    let rpos = p.d1.len();
    let rdefault = p.d1.len() + 1 + p.d2.len() - 1;
    match rule {
        Id => ok(RuleInstance::new(Id), single(Sequent::new(vec![a.clone()], vec![a.clone()])), vec![]),
        Bot => ok(RuleInstance::new(Bot), single(Sequent::new(vec![Formula::Bottom], vec![a.clone()])), vec![]),
        Ew => {
            let mut g = p.context();
            if g.is_empty() {
                g.extend(p.mid.iter().cloned());
            }
            if g.is_empty() {
                g.push(Sequent::new(p.h1.clone(), p.e1.clone()));
            }
            let k = k.min(g.len());
            let mut c = g.clone();
            c.insert(k, Sequent::new(p.g1.clone(), p.d1.clone()));
            ok(RuleInstance::new(Ew).at(k), Hypersequent::new(c), vec![Hypersequent::new(g)])
        }
        Ec => {
            let s = Sequent::new(p.g1.clone(), p.d1.clone());
            let mut prem = p.before.clone();
            prem.push(s.clone());
            prem.push(s.clone());
            prem.extend(p.after.iter().cloned());
            ok(at, p.around(s), vec![Hypersequent::new(prem)])
        }
        Ee => {
            let s = Sequent::new(p.g1.clone(), p.d1.clone());
            let t = Sequent::new(p.h1.clone(), p.e1.clone());
            let build = |x: &Sequent, y: &Sequent| {
                let mut c = p.before.clone();
                c.push(x.clone());
                c.push(y.clone());
                c.extend(p.after.iter().cloned());
                Hypersequent::new(c)
            };
            ok(at, build(&s, &t), vec![build(&t, &s)])
        }
        IwL => ok(
            p.position(at, lpos, 0),
            p.around(left(cat(&[&p.g1, std::slice::from_ref(a), &p.g2]))),
            vec![p.around(left(cat(&[&p.g1, &p.g2])))],
        ),
        IwR => ok(
            p.position(at, rpos, rdefault),
            p.around(right(cat(&[&p.d1, std::slice::from_ref(a), &p.d2]))),
            vec![p.around(right(cat(&[&p.d1, &p.d2])))],
        ),
        IcL => ok(
            p.position(at, lpos, 0),
            p.around(left(cat(&[&p.g1, std::slice::from_ref(a), &p.g2]))),
            vec![p.around(left(cat(&[&p.g1, &[a.clone(), a.clone()], &p.g2])))],
        ),
        IcR => ok(
            p.position(at, rpos, rdefault),
            p.around(right(cat(&[&p.d1, std::slice::from_ref(a), &p.d2]))),
            vec![p.around(right(cat(&[&p.d1, &[a.clone(), a.clone()], &p.d2])))],
        ),
        IeL => ok(
            p.position(at, lpos, 0),
            p.around(left(cat(&[&p.g1, &[b.clone(), a.clone()], &p.g2]))),
            vec![p.around(left(cat(&[&p.g1, &[a.clone(), b.clone()], &p.g2])))],
        ),
        IeR => {
            let len = p.d1.len() + 2 + p.d2.len();
            ok(
                p.position(at, rpos, len - 2),
                p.around(right(cat(&[&p.d1, &[b.clone(), a.clone()], &p.d2]))),
                vec![p.around(right(cat(&[&p.d1, &[a.clone(), b.clone()], &p.d2])))],
            )
        }
        Cut => ok(
            at.splits(p.g1.len(), p.d1.len()).cut(p.c.clone()),
            p.around(Sequent::new(cat(&[&p.g1, &p.g2]), cat(&[&p.d1, &p.d2]))),
            vec![
                p.around(Sequent::new(p.g1.clone(), with(&p.d1, &p.c))),
                p.around(Sequent::new(cat(&[std::slice::from_ref(&p.c), &p.g2]), p.d2.clone())),
            ],
        ),
        AndL1 | AndL2 => {
            let chosen = if rule == AndL1 { a } else { b };
            ok(
                p.position(at, lpos, 0),
                p.around(left(cat(&[&p.g1, &[Formula::and(a.clone(), b.clone())], &p.g2]))),
                vec![p.around(left(cat(&[&p.g1, std::slice::from_ref(chosen), &p.g2])))],
            )
        }
        AndR => ok(
            p.position(at, rpos, rdefault),
            p.around(right(cat(&[&p.d1, &[Formula::and(a.clone(), b.clone())], &p.d2]))),
            vec![
                p.around(right(cat(&[&p.d1, std::slice::from_ref(a), &p.d2]))),
                p.around(right(cat(&[&p.d1, std::slice::from_ref(b), &p.d2]))),
            ],
        ),
        OrL => ok(
            p.position(at, lpos, 0),
            p.around(left(cat(&[&p.g1, &[Formula::or(a.clone(), b.clone())], &p.g2]))),
            vec![
                p.around(left(cat(&[&p.g1, std::slice::from_ref(a), &p.g2]))),
                p.around(left(cat(&[&p.g1, std::slice::from_ref(b), &p.g2]))),
            ],
        ),
        OrR1 | OrR2 => {
            let chosen = if rule == OrR1 { a } else { b };
            ok(
                p.position(at, rpos, rdefault),
                p.around(right(cat(&[&p.d1, &[Formula::or(a.clone(), b.clone())], &p.d2]))),
                vec![p.around(right(cat(&[&p.d1, std::slice::from_ref(chosen), &p.d2])))],
            )
        }
        ImpL => ok(
            p.position(at, lpos, 0),
            p.around(left(cat(&[&p.g1, &[Formula::imp(a.clone(), b.clone())], &p.g2]))),
            vec![
                p.around(Sequent::new(cat(&[&p.g1, &p.g2]), with(&p.d1, a))),
                p.around(left(cat(&[&p.g1, std::slice::from_ref(b), &p.g2]))),
            ],
        ),
        ImpR => ok(
            p.position(at, rpos, rdefault),
            p.around(right(cat(&[&p.d1, &[Formula::imp(a.clone(), b.clone())], &p.d2]))),
            vec![p.around(Sequent::new(
                cat(&[std::slice::from_ref(a), &p.g1]),
                cat(&[&p.d1, std::slice::from_ref(b), &p.d2]),
            ))],
        ),
        ImpRPrime => ok(
            p.position(at, 0, 0),
            p.around(right(vec![Formula::imp(a.clone(), b.clone())])),
            vec![p.around(Sequent::new(cat(&[std::slice::from_ref(a), &p.g1]), vec![b.clone()]))],
        ),
        ForallL => {
            let q = Formula::forall(x.clone(), p.body.clone());
            ok(
                p.position(at, lpos, 0).witness(p.witness.clone()),
                p.around(left(cat(&[&p.g1, &[q], &p.g2]))),
                vec![p.around(left(cat(&[&p.g1, &[subst(&p.body, &x, &p.witness)], &p.g2])))],
            )
        }
        ExistsR => {
            let q = Formula::exists(x.clone(), p.body.clone());
            ok(
                p.position(at, rpos, rdefault).witness(p.witness.clone()),
                p.around(right(cat(&[&p.d1, &[q], &p.d2]))),
                vec![p.around(right(cat(&[&p.d1, &[subst(&p.body, &x, &p.witness)], &p.d2])))],
            )
        }
        ForallRss | ForallRms | ForallRmm | ForallRsm | ExistsLs | ExistsLm => {
            let y = p.eigen();
            let inst = if p.named_eigen || !p.omit_defaults { at.clone().eigen(y.clone()) } else { at.clone() };
            let opened = subst(&p.body, &x, &Term::Var(y.clone()));
            let width_one = matches!(rule, ForallRss | ForallRsm | ExistsLs);
            let multi_succ = matches!(rule, ForallRmm | ForallRsm);
            let (conc, prem, inst) = if matches!(rule, ExistsLs | ExistsLm) {
                let q = Formula::exists(x.clone(), p.body.clone());
                (left(cat(&[&p.g1, &[q], &p.g2])), left(cat(&[&p.g1, &[opened], &p.g2])), p.position(inst, lpos, 0))
            } else {
                let q = Formula::forall(x.clone(), p.body.clone());
                let (d1, d2) = if multi_succ { (p.d1.clone(), p.d2.clone()) } else { (vec![], vec![]) };
                let default = d1.len() + d2.len();
                (right(cat(&[&d1, &[q], &d2])), right(cat(&[&d1, &[opened], &d2])), p.position(inst, d1.len(), default))
            };
            let mark = p.mark(&y);
            let left_rule = matches!(rule, ExistsLs | ExistsLm);
            // the mark goes on the side that does not hold the principal formula
            let mark_aside = |s: Sequent| {
                if left_rule {
                    Sequent::new(s.antecedent, insert(&s.succedent, p.pick, mark.clone()))
                } else {
                    Sequent::new(insert(&s.antecedent, p.pick, mark.clone()), s.succedent)
                }
            };
            if width_one {
                let (inst, conc, prem) = (inst.at(0), conc, prem);
                if negative {
                    return Case { inst, conclusion: single(mark_aside(conc)), expect: Expect::EigenViolation };
                }
                return ok(inst, single(conc), vec![single(prem)]);
            }
            if negative {
                let mut c = p.around(conc);
                if c.width() == 1 || p.pick.is_multiple_of(2) {
                    c.components[k] = mark_aside(c.components[k].clone());
                } else {
                    let others: Vec<usize> = (0..c.width()).filter(|&i| i != k).collect();
                    let s = &mut c.components[others[p.pick % others.len()]];
                    s.succedent = insert(&s.succedent, p.pick, mark.clone());
                }
                return Case { inst, conclusion: c, expect: Expect::EigenViolation };
            }
            ok(inst, p.around(conc), vec![p.around(prem)])
        }
        Com => {
            let s = Sequent::new(cat(&[&p.g1, &p.g2]), p.d1.clone());
            let t = Sequent::new(cat(&[&p.h1, &p.h2]), p.e1.clone());
            let (c, i, j) = pair(p, s, t);
            let mut inst = RuleInstance::new(Com).at(i).splits(p.g1.len(), p.h1.len());
            if !(p.omit_defaults && j == i + 1) {
                inst = inst.other(j);
            }
            let first = Sequent::new(cat(&[&p.g1, &p.h2]), p.d1.clone());
            let second = Sequent::new(cat(&[&p.h1, &p.g2]), p.e1.clone());
            ok(inst, Hypersequent::new(c.clone()), vec![replace_drop(&c, i, first, j), replace_drop(&c, j, second, i)])
        }
        Rs | Ls => {
            let (s, t, merged) = if rule == Rs {
                (
                    Sequent::new(p.g1.clone(), p.d1.clone()),
                    Sequent::new(p.g1.clone(), p.e1.clone()),
                    Sequent::new(p.g1.clone(), cat(&[&p.d1, &p.e1])),
                )
            } else {
                (
                    Sequent::new(p.g1.clone(), p.d1.clone()),
                    Sequent::new(p.h1.clone(), p.d1.clone()),
                    Sequent::new(cat(&[&p.g1, &p.h1]), p.d1.clone()),
                )
            };
            let (c, i, j) = pair(p, s, t);
            let mut inst = RuleInstance::new(rule).at(i);
            if !(p.omit_defaults && j == i + 1) {
                inst = inst.other(j);
            }
            ok(inst, Hypersequent::new(c.clone()), vec![replace_drop(&c, i, merged, j)])
        }
        Share | Unshare => {
            let (l, g) = (local("s"), Var::global("s"));
            let open = subst(&p.body, &x, &Term::Var(l.clone()));
            let with_local = Sequent::new(cat(&[&p.g1, &[open]]), p.d1.clone());
            let to_global = |s: &Sequent| {
                let m = |f: &Formula| subst(f, &l, &Term::Var(g.clone()));
                Sequent::new(s.antecedent.iter().map(m).collect(), s.succedent.iter().map(m).collect())
            };
            let (conc, prem) = if rule == Share {
                (to_global(&with_local), with_local)
            } else {
                let gl = to_global(&with_local);
                (with_local, gl)
            };
            let inst = at.variable("s");
            if negative {
                let mut c = p.around(conc);
                if c.width() == 1 {
                    c.components.push(Sequent::default());
                }
                let others: Vec<usize> = (0..c.width()).filter(|&i| i != k).collect();
                let s = &mut c.components[others[p.pick % others.len()]];
                s.antecedent = insert(&s.antecedent, p.pick, Formula::atom("P", vec![Term::Var(g)]));
                return Case { inst, conclusion: c, expect: Expect::EigenViolation };
            }
            ok(inst, p.around(conc), vec![p.around(prem)])
        }
    }
}

/// Rules with a freshness side condition.
pub fn has_eigen_condition(rule: RuleId) -> bool {
    use RuleId::*;
    matches!(rule, ForallRss | ForallRms | ForallRmm | ForallRsm | ExistsLs | ExistsLm | Share | Unshare)
}

fn check(cfg: &CalculusConfig, rule: RuleId, case: &Case) -> Result<(), String> {
    let got = premises_of(cfg, &case.inst, &case.conclusion);
    match (&case.expect, got) {
        (Expect::Premises(want), Ok(got)) if *want == got => Ok(()),
        (Expect::EigenViolation, Err(RuleError::EigenvariableViolation { .. })) => Ok(()),
        (want, got) => {
            Err(format!("{rule} on `{}` ({:?}): expected {want:?}, got {got:?}", case.conclusion, case.inst))
        }
    }
}

/// Runs `cases` randomized instantiations of `rule`, plus as many
/// freshness violations when the rule has a side condition. Returns the
/// number of cases checked.
pub fn run(rule: RuleId, cases: u32) -> Result<u32, String> {
    let cfg = full_config();
    let modes: &[bool] = if has_eigen_condition(rule) { &[false, true] } else { &[false] };
    let mut total = 0;
    for &negative in modes {
        let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
        runner
            .run(&parts(), |p| {
                let case = build(rule, &p, negative);
                check(&cfg, rule, &case).map_err(TestCaseError::fail)
            })
            .map_err(|e| e.to_string())?;
        total += cases;
    }
    Ok(total)
}
