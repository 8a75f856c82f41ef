//! The cover calculus: stars, star covers, refinement, uniformly-below,
//! uniform reflection and metric uniformities.

mod finite;
mod rational;

use thiserror::Error;

use crate::frame::FrameError;

pub use finite::{
    antichain_strong_covers, below_table, check_reflection_lemma, initial_base, metric_uniformity, refines, regular_interiors, star,
    star_cover, uniform_reflection, ReflectionLemmaReport, uniformly_below, validate_uniformity, Cover, FiniteMetric,
    UniformReflection, UniformityBase, UniformityReport, UniformityViolation,
};
pub use rational::{
    decimal, eps, format_rational, grid_above, grid_below, parse_rational,
    uniformly_below_rational, Below, GridBase, RationalOpen,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UniformError {
    #[error("metric space has no points")]
    EmptySpace,
    #[error("finite metric spaces are limited to 15 points, got {0}")]
    TooManyPoints(usize),
    #[error("invalid metric: {0}")]
    BadMetric(String),
    #[error("radius schedule is empty")]
    EmptySchedule,
    #[error("radius {0} of the schedule is not positive")]
    NonPositiveRadius(usize),
    #[error("radius {0} of the schedule does not decrease")]
    NotDecreasing(usize),
    #[error("no listed cover star-refines U{0}")]
    NoStarRefinement(usize),
    #[error("fixed opens are not closed under meet or join at {a}, {b}")]
    NotASubframe { a: String, b: String },
    #[error(transparent)]
    Frame(#[from] FrameError),
}
