pub mod calculus;
pub mod cli;
pub mod elaborator;
pub mod normalizer;
pub mod parser;
pub mod proof;
pub mod syntax;
