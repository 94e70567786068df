//! Fixed workloads shared by the benchmarks.

use std::path::PathBuf;

use hseq_core::checker::ProofBundle;
use hseq_core::syntax::{parse_formula, parse_hypersequent, Formula, Hypersequent};

pub const FIGURES: [&str; 6] =
    ["fact13.proof", "fact15.proof", "remark_exists.proof", "lin_rs.proof", "acd_rs.proof", "gdm_ls.proof"];

pub fn figure(name: &str) -> ProofBundle {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    ProofBundle::from_json(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn lin() -> Hypersequent {
    parse_hypersequent("|- (phi -> psi) \\/ (psi -> phi)").unwrap()
}

pub fn gdm() -> Hypersequent {
    parse_hypersequent("|- (gamma1 & gamma2 -> delta) -> (gamma1 -> delta) \\/ (gamma2 -> delta)").unwrap()
}

pub fn acd() -> Formula {
    parse_formula("(forall x. (phi \\/ psi(x))) -> phi \\/ (forall x. psi(x))").unwrap()
}
