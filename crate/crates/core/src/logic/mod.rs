//! The paraconsistent propositional calculus C1: syntax, bivaluation
//! semantics with a quasi-matrix decision procedure, and proof checking.

mod formula;
mod parser;
mod proof;
mod semantics;

pub use formula::Formula;
pub use parser::{parse_formula, ParseError};
pub use proof::{
    check_proof, parse_proof_script, AxiomSchema, Justification, ProofScript, ProofStep, Proved,
    RejectReason, Rejection, ScriptParseError,
};
pub use semantics::{
    entails, enumerate_valuations, fresh_atom, is_valid, trivializes, Limits, LogicError,
    Triviality, Validity, Valuation, Valuations, DEFAULT_MAX_CLOSURE, MAX_CLOSURE_ENV,
};

pub(crate) use formula::is_identifier;
