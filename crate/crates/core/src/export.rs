//! Typesetting proofs as `bussproofs` derivations.

use std::fmt::Write;

use crate::checker::ProofTree;
use crate::syntax::{Formula, Hypersequent, Notation};

fn formula(f: &Formula) -> String {
    f.display_with(&Notation::LATEX).to_string()
}

/// A hypersequent in LaTeX math mode, components separated by `\mid`.
pub fn hypersequent_latex(h: &Hypersequent) -> String {
    let side = |fs: &[Formula]| fs.iter().map(formula).collect::<Vec<_>>().join(", ");
    h.components
        .iter()
        .map(|s| {
            let (a, b) = (side(&s.antecedent), side(&s.succedent));
            format!("{a} \\Rightarrow {b}").trim().to_string()
        })
        .collect::<Vec<_>>()
        .join(" \\mid ")
}

/// Renders `p` as a `prooftree` environment, leaves first, with the
/// conventional rule labels on the right of each inference line.
pub fn to_bussproofs(p: &ProofTree) -> String {
    let mut out = String::from("\\begin{prooftree}\n");
    emit(p, &mut out);
    out.push_str("\\end{prooftree}\n");
    out
}

fn emit(p: &ProofTree, out: &mut String) {
    if p.subproofs.is_empty() {
        out.push_str("\\AxiomC{}\n");
    }
    for sub in &p.subproofs {
        emit(sub, out);
    }
    let infer = match p.subproofs.len() {
        0 | 1 => "UnaryInfC",
        2 => "BinaryInfC",
        _ => "TrinaryInfC",
    };
    let _ = writeln!(out, "\\RightLabel{{\\scriptsize ${}$}}", p.rule.rule.latex_label());
    let _ = writeln!(out, "\\{infer}{{${}$}}", hypersequent_latex(&p.conclusion));
}
