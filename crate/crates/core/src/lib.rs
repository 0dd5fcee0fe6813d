//! Ordinals below ω^(ω^ω), ordinal grammars and frontier grammars of
//! algebraic trees.
//!
//! * [`ordinal`]: Cantor normal form arithmetic.
//! * [`grammar`]: context-free grammars over ordered alphabets and their
//!   structural analysis (occurrence classes, heights, pump words, strata,
//!   bounded prefix and well-order probes).
//! * [`lexorder`]: prefix, strict and lexicographic word orders and bounded
//!   enumeration of languages.
//! * [`synthesis`]: ordinal grammars for every ordinal below ω^(ω^ω), with a
//!   rank function.
//! * [`tree`]: fixed-point systems over ranked alphabets, Kleene iterates,
//!   frontiers and binarization.
//! * [`translate`]: labeled-frontier and frontier grammars of a system.
//! * [`cli`]: the `ordgram` command line.

pub mod cli;
pub mod grammar;
pub mod lexorder;
pub mod ordinal;
pub mod synthesis;
pub mod translate;
pub mod tree;

pub use grammar::{Grammar, GrammarError, Symbol, TerminalAlphabet, Word};
pub use ordinal::{CnfExponent, CnfOrdinal, OrdinalError};
pub use synthesis::{Recipe, SynthesisError, SynthesizedGrammar};
pub use tree::{PartialTree, TreeSystem};
