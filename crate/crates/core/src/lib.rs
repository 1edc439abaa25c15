//! Corpus-driven keyboard layout synthesis for Latin-script languages.

pub mod config;
pub mod corpus;
pub mod emit;
pub mod layout;
pub mod preview;
pub mod stats;
pub mod synthesis;
pub mod unicode_base;
