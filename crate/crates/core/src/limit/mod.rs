//! The limit map from modulated Cauchy sequences to the completion, its
//! triquotiency assignment, and point-level evaluation on the rational line.

mod constant;
mod point;
mod qsharp;
mod qstar;

use thiserror::Error;

use crate::cauchy::CauchyError;
use crate::completion::CompletionError;
use crate::presentation::PresentationError;

pub use constant::{constant_map_check, q_reflection_check, ConstantMapReport};
pub use point::{
    approximate, cut_axioms, dedekind_extract, filter_query, finite_filter_query, Answer, Budget, CutOracle,
    FiniteWitness, Separation, Witness,
};
pub use qsharp::{
    frobenius_check, q_sharp_basic, q_sharp_well_defined, Basic, BasicSpace, FrobeniusReport,
    FrobeniusVerdict,
};
pub use qstar::{qstar_expr, qstar_terms, qstar_well_defined, QStarExpr, QStarTerm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LimitError {
    #[error("malformed basic open: {0}")]
    MalformedBasic(String),
    #[error("no interval confirmed within depth {depth}")]
    BudgetExhausted { depth: usize },
    #[error("sequence has no certificate; {0} needs one")]
    Uncertified(&'static str),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error(transparent)]
    Cauchy(#[from] CauchyError),
    #[error(transparent)]
    Completion(#[from] CompletionError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// Outcome of one family of checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseReport {
    pub case: String,
    pub checked: usize,
    /// The first failing instance, rendered.
    pub failure: Option<String>,
}

impl CaseReport {
    fn new(case: &str) -> CaseReport {
        CaseReport {
            case: case.to_string(),
            checked: 0,
            failure: None,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(witness());
        }
    }

    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}
