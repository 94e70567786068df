//! Reading hypersequents as formulas, and extracting sequent proofs from
//! communication-free hypersequent proofs.

mod extract;
mod translate;

pub use extract::{extract_component_proof, ExtractError};
pub use translate::{hyperseq_formula, sequent_formula, universal_closure, TranslateError, TranslationMode};
