use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use super::{tuples, GroundAtom, Individual, KripkeModel, ModelClass, SemanticsError};
use crate::syntax::Formula;

pub const MAX_WORLDS: usize = 4;
pub const MAX_DOMAIN: usize = 3;
pub const MAX_ATOMS: usize = 3;

/// Size limits for enumeration. `max_atoms` caps the number of predicate
/// symbols; a `max_domain` of 0 means one individual.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub max_worlds: usize,
    pub max_domain: usize,
    pub max_atoms: usize,
}

impl Bounds {
    pub fn new(max_worlds: usize, max_domain: usize, max_atoms: usize) -> Self {
        Bounds { max_worlds, max_domain, max_atoms }
    }

    fn check(&self) -> Result<(), SemanticsError> {
        if self.max_worlds == 0 {
            return Err(SemanticsError::BoundsTooLarge("at least one world is needed".into()));
        }
        if self.max_worlds > MAX_WORLDS || self.max_domain > MAX_DOMAIN || self.max_atoms > MAX_ATOMS {
            return Err(SemanticsError::BoundsTooLarge(format!(
                "({}, {}, {}) exceeds the caps of {MAX_WORLDS} worlds, {MAX_DOMAIN} individuals and {MAX_ATOMS} atoms",
                self.max_worlds, self.max_domain, self.max_atoms
            )));
        }
        Ok(())
    }
}

/// A frame with domains and constants fixed; valuations vary.
struct Frame {
    order: Vec<Vec<bool>>,
    domains: Vec<BTreeSet<Individual>>,
    constants: BTreeMap<String, Individual>,
}

type Relation = Vec<Vec<bool>>;

/// Rooted posets on `n` worlds up to isomorphism.
///
/// World 0 is the root and every labelling is a linear extension of the
/// order, so `w ≤ v` implies `w ≤ v` as numbers. Among the labellings of one
/// poset the one with the smallest relation mask is kept.
fn rooted_posets(n: usize) -> Vec<Relation> {
    let pairs: Vec<(usize, usize)> = (1..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let build = |mask: u32| -> Relation {
        let mut r = vec![vec![false; n]; n];
        for w in 0..n {
            r[0][w] = true;
            r[w][w] = true;
        }
        for (b, &(i, j)) in pairs.iter().enumerate() {
            if mask >> b & 1 == 1 {
                r[i][j] = true;
            }
        }
        r
    };
    let transitive = |r: &Relation| (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| !(r[a][b] && r[b][c]) || r[a][c])));
    let mask_of = |r: &Relation| -> Option<u32> {
        let mut m = 0;
        for (b, &(i, j)) in pairs.iter().enumerate() {
            if r[j][i] {
                return None;
            }
            if r[i][j] {
                m |= 1 << b;
            }
        }
        Some(m)
    };
    let perms = permutations(n - 1);
    let mut out = Vec::new();
    for mask in 0..(1u32 << pairs.len()) {
        let r = build(mask);
        if !transitive(&r) {
            continue;
        }
        let minimal = perms.iter().all(|p| {
            // relabel world i (i ≥ 1) as p[i - 1] + 1
            let at = |i: usize| if i == 0 { 0 } else { p[i - 1] + 1 };
            let mut q = vec![vec![false; n]; n];
            for i in 0..n {
                for j in 0..n {
                    q[at(i)][at(j)] = r[i][j];
                }
            }
            mask_of(&q).is_none_or(|m| m >= mask)
        });
        if minimal {
            out.push(r);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn is_chain(r: &Relation) -> bool {
    let n = r.len();
    (0..n).all(|i| (0..n).all(|j| r[i][j] || r[j][i]))
}

fn mask_to_set(m: u32) -> BTreeSet<Individual> {
    (0..32).filter(|&i| m >> i & 1 == 1).collect()
}

/// Increasing domain assignments over `d` individuals, one per world, up to
/// renaming individuals.
fn domain_assignments(order: &Relation, d: usize, constant: bool) -> Vec<Vec<u32>> {
    let n = order.len();
    if constant {
        return (1..=d).map(|k| vec![(1u32 << k) - 1; n]).collect();
    }
    let full = (1u32 << d) - 1;
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    fn go(order: &Relation, full: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let w = current.len();
        if w == order.len() {
            out.push(current.clone());
            return;
        }
        let below = (0..w).filter(|&v| order[v][w]).fold(0, |acc, v| acc | current[v]);
        for m in 1..=full {
            if m & below == below {
                current.push(m);
                go(order, full, current, out);
                current.pop();
            }
        }
    }
    go(order, full, &mut current, &mut out);
    let perms = permutations(d);
    let rename = |m: u32, p: &[usize]| (0..d).filter(|&i| m >> i & 1 == 1).fold(0, |acc, i| acc | 1 << p[i]);
    out.retain(|a| perms.iter().all(|p| a.iter().map(|&m| rename(m, p)).collect::<Vec<_>>() >= *a));
    out
}

struct Signature {
    predicates: Vec<(String, usize)>,
    constants: Vec<String>,
}

fn signature(f: &Formula, bounds: &Bounds) -> Result<Signature, SemanticsError> {
    bounds.check()?;
    let predicates = f.predicates();
    if predicates.len() > bounds.max_atoms {
        return Err(SemanticsError::BoundsTooLarge(format!(
            "the formula has {} predicate symbols but at most {} are allowed",
            predicates.len(),
            bounds.max_atoms
        )));
    }
    let mut constants = Vec::new();
    for (name, arity) in f.functions() {
        if arity > 0 {
            return Err(SemanticsError::FunctionSymbol(name));
        }
        constants.push(name);
    }
    Ok(Signature { predicates, constants })
}

fn frames(sig: &Signature, class: ModelClass, bounds: &Bounds) -> Vec<Frame> {
    let d = bounds.max_domain.max(1);
    let mut out = Vec::new();
    for n in 1..=bounds.max_worlds {
        for order in rooted_posets(n) {
            if class.is_linear() && !is_chain(&order) {
                continue;
            }
            for doms in domain_assignments(&order, d, class.is_constant_domain()) {
                let domains: Vec<BTreeSet<Individual>> = doms.iter().map(|&m| mask_to_set(m)).collect();
                let root: Vec<Individual> = domains[0].iter().copied().collect();
                let mut assignments = vec![BTreeMap::new()];
                for c in &sig.constants {
                    assignments = assignments
                        .into_iter()
                        .flat_map(|a| {
                            root.iter().map(move |&v| {
                                let mut a = a.clone();
                                a.insert(c.clone(), v);
                                a
                            })
                        })
                        .collect();
                }
                for constants in assignments {
                    out.push(Frame { order: order.clone(), domains: domains.clone(), constants });
                }
            }
        }
    }
    out
}

/// Visits every model of the frame, stopping early when `visit` returns false.
fn visit_frame(frame: &Frame, sig: &Signature, mut visit: impl FnMut(&KripkeModel) -> bool) -> bool {
    let n = frame.order.len();
    let up_sets: Vec<u32> = (0..1u32 << n)
        .filter(|&m| (0..n).all(|w| m >> w & 1 == 0 || (0..n).all(|v| !frame.order[w][v] || m >> v & 1 == 1)))
        .collect();
    let everyone: BTreeSet<Individual> = frame.domains.iter().flatten().copied().collect();
    let mut atoms: Vec<(GroundAtom, Vec<u32>)> = Vec::new();
    for (p, arity) in &sig.predicates {
        for args in tuples(&everyone, *arity) {
            let allowed =
                (0..n).filter(|&w| args.iter().all(|a| frame.domains[w].contains(a))).fold(0u32, |acc, w| acc | 1 << w);
            let choices = up_sets.iter().copied().filter(|&u| u & !allowed == 0).collect();
            atoms.push(((p.clone(), args), choices));
        }
    }
    let functions = frame.constants.iter().map(|(c, &v)| (c.clone(), BTreeMap::from([(Vec::new(), v)]))).collect();
    let mut model = KripkeModel {
        order: frame.order.clone(),
        domains: frame.domains.clone(),
        atoms: vec![BTreeSet::new(); n],
        functions,
    };
    let mut index = vec![0usize; atoms.len()];
    loop {
        for w in 0..n {
            model.atoms[w] = atoms
                .iter()
                .zip(&index)
                .filter(|((_, choices), &i)| choices[i] >> w & 1 == 1)
                .map(|((a, _), _)| a.clone())
                .collect();
        }
        if !visit(&model) {
            return false;
        }
        // odometer, last atom fastest
        let mut k = atoms.len();
        loop {
            if k == 0 {
                return true;
            }
            k -= 1;
            index[k] += 1;
            if index[k] < atoms[k].1.len() {
                break;
            }
            index[k] = 0;
        }
    }
}

/// Calls `visit` on every model of `class` within `bounds` over the
/// signature of `f`, in the fixed enumeration order, until it returns false.
/// Returns the number of models visited.
pub fn enumerate_models(
    f: &Formula,
    class: ModelClass,
    bounds: Bounds,
    mut visit: impl FnMut(&KripkeModel) -> bool,
) -> Result<usize, SemanticsError> {
    let sig = signature(f, &bounds)?;
    let mut count = 0;
    for frame in frames(&sig, class, &bounds) {
        let go_on = visit_frame(&frame, &sig, |m| {
            count += 1;
            visit(m)
        });
        if !go_on {
            break;
        }
    }
    Ok(count)
}

/// The first model in enumeration order that refutes `f`, if any.
///
/// Frames are searched in parallel; the answer is the same as a sequential
/// search would give.
pub fn countermodel_search(
    f: &Formula,
    class: ModelClass,
    bounds: Bounds,
) -> Result<Option<KripkeModel>, SemanticsError> {
    let sig = signature(f, &bounds)?;
    let frames = frames(&sig, class, &bounds);
    Ok(frames.par_iter().find_map_first(|frame| {
        let mut found = None;
        visit_frame(frame, &sig, |m| {
            if m.valid_in(f) {
                true
            } else {
                found = Some(m.clone());
                false
            }
        });
        found
    }))
}
