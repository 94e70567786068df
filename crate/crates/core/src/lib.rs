pub mod calculus;
pub mod checker;
pub mod export;
pub mod search;
pub mod semantics;
pub mod syntax;
pub mod transform;
