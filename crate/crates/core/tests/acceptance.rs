mod common;

use std::collections::BTreeSet;
use std::io::Write;

use common::{load, oracle_valid, schema, FIGURES};
use hseq_core::calculus::{CalculusConfig, RuleError, RuleId, RuleInstance};
use hseq_core::checker::{check_proof, proof_stats, CheckErrorKind, ProofTree};
use hseq_core::search::{prove, SearchBudget};
use hseq_core::semantics::{countermodel_search, enumerate_models, Bounds, KripkeModel, ModelClass};
use hseq_core::syntax::{parse_formula, parse_hypersequent, Formula, Hypersequent, Sequent, Term};
use hseq_core::transform::{extract_component_proof, hyperseq_formula, sequent_formula, TranslationMode};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn preset(name: &str) -> CalculusConfig {
    CalculusConfig::preset(name).unwrap()
}

fn h(s: &str) -> Hypersequent {
    parse_hypersequent(s).unwrap()
}

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

/// First node using `rule` when children are visited before parents, left to right.
fn first_use(p: &ProofTree, rule: RuleId, path: &mut Vec<usize>) -> Option<Vec<usize>> {
    for (i, sub) in p.subproofs.iter().enumerate() {
        path.push(i);
        let found = first_use(sub, rule, path);
        path.pop();
        if found.is_some() {
            return found;
        }
    }
    (p.rule.rule == rule).then(|| path.clone())
}

fn golden_figures() -> Outcome {
    const CHARACTERISTIC: [RuleId; 5] = [RuleId::Com, RuleId::Rs, RuleId::Ls, RuleId::ForallRms, RuleId::ExistsLm];
    let mut rejections = 0;
    for name in FIGURES {
        let b = load(name);
        let r = check_proof(&b.config, &b.proof);
        ensure(r.accepted(), || format!("{name} rejected: {}", r.error.clone().unwrap()))?;
        let used: Vec<RuleId> = CHARACTERISTIC.into_iter().filter(|&r| b.proof.uses(r)).collect();
        ensure(!used.is_empty(), || format!("{name} uses no characteristic rule"))?;
        for rule in used {
            let mut cfg = b.config.clone();
            cfg.disable(rule).unwrap();
            let r = check_proof(&cfg, &b.proof);
            let err = r.error.ok_or_else(|| format!("{name} accepted without {rule}"))?;
            let want = first_use(&b.proof, rule, &mut Vec::new()).unwrap();
            ensure(err.kind == CheckErrorKind::Rule(RuleError::RuleDisabled(rule)) && err.path == want, || {
                format!("{name} without {rule}: {err}, expected RuleDisabled at {want:?}")
            })?;
            rejections += 1;
        }
    }
    Ok(format!("6 figures accepted, {rejections} located rejections"))
}

fn predicate_count(f: &Formula) -> usize {
    f.predicates().into_iter().map(|(p, _)| p).collect::<BTreeSet<_>>().len()
}

/// Checks `root`'s shared translation against every model of the class of
/// `cfg`. Returns the number of models visited.
fn sweep(cfg: &CalculusConfig, root: &Hypersequent, label: &str) -> Result<usize, String> {
    let g = hyperseq_formula(root, TranslationMode::Shared).map_err(|e| e.to_string())?;
    let (class, cap) = ModelClass::for_config(cfg);
    let worlds = cap.unwrap_or(4).min(4);
    let bounds = Bounds::new(worlds, 2, predicate_count(&g).max(2));
    let mut violation = None;
    let n = enumerate_models(&g, class, bounds, |m| {
        if oracle_valid(m, &g) {
            true
        } else {
            violation = Some(m.to_string());
            false
        }
    })
    .map_err(|e| format!("{label}: {e}"))?;
    match violation {
        Some(m) => Err(format!("{label}: `{g}` fails on\n{m}")),
        None => Ok(n),
    }
}

fn soundness_sweep() -> Outcome {
    let mut models = 0;
    for name in FIGURES {
        let b = load(name);
        models += sweep(&b.config, &b.proof.conclusion, name)?;
    }
    Ok(format!("6 roots, {models} models, no violations"))
}

fn is_fork(m: &KripkeModel) -> bool {
    m.world_count() == 3 && m.order[0][1] && m.order[0][2] && !m.order[1][2] && !m.order[2][1]
}

fn refutes(m: &KripkeModel, g: &Formula, class: ModelClass) -> bool {
    class.contains(m) && !oracle_valid(m, &common::close(g))
}

fn none_in(g: &Formula, class: ModelClass, bounds: Bounds) -> Result<usize, String> {
    if let Some(m) = countermodel_search(g, class, bounds).map_err(|e| e.to_string())? {
        return Err(format!("unexpected countermodel for `{g}` in {class}:\n{m}"));
    }
    let mut bad = 0;
    let n = enumerate_models(g, class, bounds, |m| {
        bad += usize::from(!oracle_valid(m, &common::close(g)));
        true
    })
    .map_err(|e| e.to_string())?;
    ensure(bad == 0, || format!("oracle refutes `{g}` in {bad} models of {class}"))?;
    Ok(n)
}

fn countermodels() -> Outcome {
    let lin = f("(phi -> psi) \\/ (psi -> phi)");
    let acd = f("(forall x. (phi \\/ psi(x))) -> phi \\/ (forall x. psi(x))");
    let gdm = f("(gamma1 & gamma2 -> delta) -> (gamma1 -> delta) \\/ (gamma2 -> delta)");
    let all = ModelClass::AllPosets;
    let found = |g: &Formula, b: Bounds| countermodel_search(g, all, b).map_err(|e| e.to_string());

    let m = found(&lin, Bounds::new(3, 1, 2))?.ok_or("no countermodel for LIN")?;
    ensure(is_fork(&m) && refutes(&m, &lin, all), || format!("LIN countermodel is not a refuting fork:\n{m}"))?;

    let m = found(&acd, Bounds::new(2, 2, 2))?.ok_or("no countermodel for ACD")?;
    let grows = m.world_count() == 2 && m.domains[0].len() < m.domains[1].len();
    ensure(grows && refutes(&m, &acd, all), || format!("ACD countermodel is not a refuting growing pair:\n{m}"))?;

    let m = found(&gdm, Bounds::new(3, 1, 3))?.ok_or("no countermodel for GDM")?;
    ensure(is_fork(&m) && refutes(&m, &gdm, all), || format!("GDM countermodel is not a refuting fork:\n{m}"))?;

    let a = none_in(&lin, ModelClass::Linear, Bounds::new(4, 1, 2))?;
    let b = none_in(&acd, ModelClass::ConstantDomain, Bounds::new(3, 2, 2))?;
    Ok(format!(
        "forks refute LIN and GDM, a growing pair refutes ACD; {a} chains and {b} constant-domain models validate"
    ))
}

const CD_FREE_GOALS: [&str; 20] = [
    "p |- p || q |- r",
    "p & q |- q & p",
    "p \\/ q |- q \\/ p",
    "p -> q, p |- q",
    "|- p -> p || |- q",
    "q |- r || p |- p",
    "|- (p -> q) -> (q -> r) -> p -> r",
    "p & (q \\/ r) |- (p & q) \\/ (p & r)",
    "forall x. P(x) |- P(c())",
    "forall x. P(x) |- exists y. P(y)",
    "exists x. (P(x) & Q(x, x)) |- exists x. P(x)",
    "|- q || forall x. P(x) |- forall y. P(y)",
    "exists x. P(x) |- exists y. P(y) || r |- q",
    "|- p -> q -> p",
    "bot |- p || q |- p",
    "p -> bot |- p -> q",
    "forall x. (P(x) & Q(x, x)) |- forall x. P(x)",
    "|- forall x. (P(x) -> P(x)) || |- p",
    "(p \\/ q) -> r |- p -> r",
    "p, q |- p & q || |- r",
];

fn hand_written() -> Vec<ProofTree> {
    let id = |s: &str| ProofTree::leaf(h(s), RuleInstance::new(RuleId::Id));
    let ew = |concl: &str, k: usize, sub: ProofTree| {
        ProofTree::new(h(concl), RuleInstance::new(RuleId::Ew).at(k), vec![sub])
    };
    vec![
        ew("p |- p || q |- r", 1, id("p |- p")),
        ProofTree::new(
            h("q |- r || p |- p"),
            RuleInstance::new(RuleId::Ee),
            vec![ew("p |- p || q |- r", 1, id("p |- p"))],
        ),
        ProofTree::new(
            h("|- q || p |- p \\/ q"),
            RuleInstance::new(RuleId::Ew),
            vec![ProofTree::new(h("p |- p \\/ q"), RuleInstance::new(RuleId::OrR1), vec![id("p |- p")])],
        ),
        ProofTree::new(
            h("|- forall x. (P(x) -> P(x)) || q |- r"),
            RuleInstance::new(RuleId::ForallRms).pos(0),
            vec![ew(
                "|- P(x) -> P(x) || q |- r",
                1,
                ProofTree::new(h("|- P(x) -> P(x)"), RuleInstance::new(RuleId::ImpRPrime), vec![id("P(x) |- P(x)")]),
            )],
        ),
    ]
}

fn extraction() -> Outcome {
    let cd_free = preset("CD-free");
    let lj = preset("LJ'");
    let budget = SearchBudget::new(8).with_witnesses(vec![Term::constant("c")]);
    let mut proofs = hand_written();
    for g in CD_FREE_GOALS {
        let out = prove(&cd_free, &h(g), &budget);
        proofs.push(out.proof.ok_or_else(|| format!("no CD-free proof of `{g}` ({})", out.stats))?);
    }
    for p in &proofs {
        let r = check_proof(&cd_free, p);
        ensure(r.accepted(), || format!("input `{}` rejected: {}", p.conclusion, r.error.clone().unwrap()))?;
        let (k, q) = extract_component_proof(p).map_err(|e| format!("`{}`: {e}", p.conclusion))?;
        let want = Hypersequent::single(p.conclusion.components[k].clone());
        ensure(q.conclusion == want, || format!("`{}`: extracted root `{}`", p.conclusion, q.conclusion))?;
        let r = check_proof(&lj, &q);
        ensure(r.accepted(), || format!("`{}`: extracted proof rejected: {}", p.conclusion, r.error.clone().unwrap()))?;
        let (before, after) = (proof_stats(p), proof_stats(&q));
        ensure(after.dominated_by(&before), || format!("`{}`: {after} exceeds {before}", p.conclusion))?;
    }

    let remark = h("phi |- psi || psi |- phi");
    let out = prove(&preset("GD-com"), &remark, &SearchBudget::new(4));
    let p = out.proof.ok_or("remark hypersequent not proved under GD-com")?;
    ensure(p.size() == 3 && p.uses(RuleId::Com), || format!("remark proof has {} steps", p.size()))?;
    ensure(extract_component_proof(&p).is_err(), || "extraction accepted a proof using com".into())?;
    for s in &remark.components {
        let g = sequent_formula(s);
        let m = countermodel_search(&g, ModelClass::AllPosets, Bounds::new(3, 1, 2))
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("component `{s}` has no countermodel"))?;
        ensure(m.world_count() <= 3 && refutes(&m, &g, ModelClass::AllPosets), || {
            format!("bad countermodel for `{s}`")
        })?;
    }
    Ok(format!("{} proofs extracted within bounds; remark witness refused, components refuted", proofs.len()))
}

fn search_regression() -> Outcome {
    let lin = h("|- (phi -> psi) \\/ (psi -> phi)");
    let gdm = h("|- (gamma1 & gamma2 -> delta) -> (gamma1 -> delta) \\/ (gamma2 -> delta)");
    let acd = h("|- (forall x. (phi \\/ psi(x))) -> phi \\/ (forall x. psi(x))");
    let x = vec![Term::var("x")];
    let runs = [
        ("LIN", "GD-com", &lin, SearchBudget::new(12)),
        ("LIN", "GD-rs", &lin, SearchBudget::new(12).with_cuts(vec![f("phi \\/ psi")])),
        ("GDM", "GD-ls", &gdm, SearchBudget::new(14)),
        ("ACD", "QGD-rs", &acd, SearchBudget::new(16).with_witnesses(x.clone())),
        ("ACD", "QGD-com", &acd, SearchBudget::new(16).with_witnesses(x)),
    ];
    let mut found = Vec::new();
    for (goal, calc, g, budget) in runs {
        let cfg = preset(calc);
        let out = prove(&cfg, g, &budget);
        let p = out.proof.ok_or_else(|| format!("{goal} not found under {calc} ({})", out.stats))?;
        let r = check_proof(&cfg, &p);
        ensure(r.accepted() && p.conclusion == *g, || format!("{goal}/{calc}: search output rejected"))?;
        found.push(format!("{goal}/{calc} in {} steps", p.size()));
    }
    let out = prove(&preset("HLJ"), &lin, &SearchBudget::new(12));
    ensure(out.proof.is_none() && out.stats.exhausted, || format!("LIN/HLJ: {}", out.stats))?;
    Ok(format!("{}; LIN/HLJ exhausted", found.join(", ")))
}

fn closed_hypersequents() -> Vec<Hypersequent> {
    use proptest::prelude::*;
    let closed_seq = common::arb_sequent(&["z"]).prop_map(|s| {
        Sequent::new(s.antecedent.iter().map(common::close).collect(), s.succedent.iter().map(common::close).collect())
    });
    common::samples(prop::collection::vec(closed_seq, 1..=3).prop_map(Hypersequent::new), 100)
}

fn translation() -> Outcome {
    let samples = closed_hypersequents();
    for g in &samples {
        let s = hyperseq_formula(g, TranslationMode::Shared).unwrap();
        let l = hyperseq_formula(g, TranslationMode::Local).unwrap();
        ensure(s.alpha_eq(&l), || format!("`{g}`: `{s}` vs `{l}`"))?;
    }
    let g = h("|- P(x) || |- Q(x)");
    let s = hyperseq_formula(&g, TranslationMode::Shared).unwrap();
    let l = hyperseq_formula(&g, TranslationMode::Local).unwrap();
    ensure(s.alpha_eq(&f("forall x. (P(x) \\/ Q(x))")), || format!("shared: `{s}`"))?;
    ensure(l.alpha_eq(&f("(forall x. P(x)) \\/ (forall x. Q(x))")), || format!("local: `{l}`"))?;
    let both = Formula::and(s.clone(), l.clone());
    let (mut separating, mut converse) = (None, 0);
    enumerate_models(&both, ModelClass::AllPosets, Bounds::new(2, 2, 2), |m| {
        let (vs, vl) = (oracle_valid(m, &s), oracle_valid(m, &l));
        if vs && !vl && m.world_count() == 2 && separating.is_none() {
            separating = Some(m.clone());
        }
        converse += usize::from(vl && !vs);
        true
    })
    .map_err(|e| e.to_string())?;
    let m = separating.ok_or("no 2-world model separates the translations")?;
    ensure(converse == 0, || format!("{converse} models force local but not shared"))?;
    let sizes: Vec<usize> = m.domains.iter().map(|d| d.len()).collect();
    Ok(format!("100 closed samples agree; a 2-world model with domains {sizes:?} forces `{s}` but not `{l}`; never the converse"))
}

fn schema_fidelity() -> Outcome {
    let mut total = 0;
    for &rule in RuleId::ALL {
        total += schema::run(rule, 1000)?;
    }
    Ok(format!("{} rules, {total} instantiations", RuleId::ALL.len()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 7] = [
        ("golden figures", golden_figures),
        ("soundness sweep", soundness_sweep),
        ("countermodels", countermodels),
        ("extraction", extraction),
        ("search regression", search_regression),
        ("translation", translation),
        ("schema fidelity", schema_fidelity),
    ];
    // written past the test harness's capture so the verdicts always show
    let mut out = std::io::stdout().lock();
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let line = match run() {
            Ok(detail) => format!("criterion {} ({name}): PASS: {detail}", i + 1),
            Err(why) => {
                failed.push(i + 1);
                format!("criterion {} ({name}): FAIL: {why}", i + 1)
            }
        };
        writeln!(out, "{line}").unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
