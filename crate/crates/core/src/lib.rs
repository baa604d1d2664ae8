//! Hybrid modal logic over finite Kripke structures.

pub mod bisim;
pub mod bits;
pub mod cli;
pub mod model;
pub mod oracle;
pub mod semantics;
pub mod syntax;
pub mod translate;
