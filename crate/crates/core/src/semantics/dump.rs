//! Plain-text model dumps.
//!
//! ```text
//! worlds: 3
//! order: 0<1 0<2
//! domain 0: a0
//! domain 1: a0 a1
//! domain 2: a0
//! true 0:
//! true 1: p P(a0,a1)
//! true 2: q
//! function c() = a0
//! ```
//!
//! `order` lists the covering pairs; reflexivity and transitivity are implied.
//! Individuals are written `a0`, `a1`, ...

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use thiserror::Error;

use super::{individual_name, GroundAtom, Individual, KripkeModel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ModelParseError {
    pub line: usize,
    pub message: String,
}

fn atom(a: &GroundAtom) -> String {
    let (p, args) = a;
    if args.is_empty() {
        p.clone()
    } else {
        let args: Vec<String> = args.iter().map(|d| individual_name(*d)).collect();
        format!("{p}({})", args.join(","))
    }
}

pub(crate) fn dump_model(m: &KripkeModel) -> String {
    let n = m.world_count();
    let mut out = String::new();
    let _ = writeln!(out, "worlds: {n}");
    let covers: Vec<String> = (0..n)
        .flat_map(|w| (0..n).map(move |v| (w, v)))
        .filter(|&(w, v)| {
            w != v && m.order[w][v] && !(0..n).any(|u| u != w && u != v && m.order[w][u] && m.order[u][v])
        })
        .map(|(w, v)| format!("{w}<{v}"))
        .collect();
    let _ = writeln!(out, "order: {}", covers.join(" "));
    for (w, d) in m.domains.iter().enumerate() {
        let names: Vec<String> = d.iter().map(|&i| individual_name(i)).collect();
        let _ = writeln!(out, "domain {w}: {}", names.join(" "));
    }
    for (w, atoms) in m.atoms.iter().enumerate() {
        let names: Vec<String> = atoms.iter().map(atom).collect();
        let _ = writeln!(out, "true {w}: {}", names.join(" "));
    }
    for (name, table) in &m.functions {
        for (args, v) in table {
            let args: Vec<String> = args.iter().map(|&d| individual_name(d)).collect();
            let _ = writeln!(out, "function {name}({}) = {}", args.join(","), individual_name(*v));
        }
    }
    // trailing spaces after empty lists are noise
    out.lines().map(str::trim_end).collect::<Vec<_>>().join("\n") + "\n"
}

fn individual(s: &str, line: usize) -> Result<Individual, ModelParseError> {
    s.strip_prefix('a')
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| ModelParseError { line, message: format!("`{s}` is not an individual") })
}

fn parse_atom(s: &str, line: usize) -> Result<GroundAtom, ModelParseError> {
    match s.split_once('(') {
        None => Ok((s.to_string(), Vec::new())),
        Some((p, rest)) => {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| ModelParseError { line, message: format!("unbalanced atom `{s}`") })?;
            let args = if inner.is_empty() {
                Vec::new()
            } else {
                inner.split(',').map(|a| individual(a.trim(), line)).collect::<Result<_, _>>()?
            };
            Ok((p.to_string(), args))
        }
    }
}

/// Reads a model written by the `Display` implementation and validates it.
pub fn parse_model(text: &str) -> Result<KripkeModel, ModelParseError> {
    let mut n = None;
    let mut covers = Vec::new();
    let mut domains = BTreeMap::new();
    let mut atoms: BTreeMap<usize, BTreeSet<GroundAtom>> = BTreeMap::new();
    let mut functions: BTreeMap<String, BTreeMap<Vec<Individual>, Individual>> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: String| ModelParseError { line, message };
        let l = raw.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        let (head, body) = l.split_once(':').map_or((l, ""), |(h, b)| (h.trim(), b.trim()));
        let mut words = head.split_whitespace();
        match (words.next(), words.next()) {
            (Some("worlds"), None) => n = Some(body.parse::<usize>().map_err(|e| err(e.to_string()))?),
            (Some("order"), None) => {
                for pair in body.split_whitespace() {
                    let (a, b) = pair.split_once('<').ok_or_else(|| err(format!("bad order pair `{pair}`")))?;
                    let a = a.parse::<usize>().map_err(|e| err(e.to_string()))?;
                    let b = b.parse::<usize>().map_err(|e| err(e.to_string()))?;
                    covers.push((a, b));
                }
            }
            (Some("domain"), Some(w)) => {
                let w = w.parse::<usize>().map_err(|e| err(e.to_string()))?;
                let d = body.split_whitespace().map(|s| individual(s, line)).collect::<Result<BTreeSet<_>, _>>()?;
                domains.insert(w, d);
            }
            (Some("true"), Some(w)) => {
                let w = w.parse::<usize>().map_err(|e| err(e.to_string()))?;
                let a = body.split_whitespace().map(|s| parse_atom(s, line)).collect::<Result<BTreeSet<_>, _>>()?;
                atoms.insert(w, a);
            }
            _ if head.starts_with("function ") => {
                let (lhs, rhs) = head["function ".len()..]
                    .split_once('=')
                    .ok_or_else(|| err("expected `function f(args) = value`".into()))?;
                let (name, args) = parse_atom(lhs.trim(), line)?;
                functions.entry(name).or_default().insert(args, individual(rhs.trim(), line)?);
            }
            _ => return Err(err(format!("unrecognised line `{l}`"))),
        }
    }
    let n = n.ok_or(ModelParseError { line: 0, message: "missing `worlds` line".into() })?;
    let mut order = vec![vec![false; n]; n];
    for (w, row) in order.iter_mut().enumerate() {
        row[w] = true;
    }
    for &(a, b) in &covers {
        if a >= n || b >= n {
            return Err(ModelParseError { line: 0, message: format!("order mentions a world outside 0..{n}") });
        }
        order[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if order[i][k] && order[k][j] {
                    order[i][j] = true;
                }
            }
        }
    }
    let m = KripkeModel {
        order,
        domains: (0..n).map(|w| domains.remove(&w).unwrap_or_default()).collect(),
        atoms: (0..n).map(|w| atoms.remove(&w).unwrap_or_default()).collect(),
        functions,
    };
    m.validate().map_err(|e| ModelParseError { line: 0, message: e.to_string() })?;
    Ok(m)
}
