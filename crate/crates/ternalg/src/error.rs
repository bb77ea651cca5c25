//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TernError {
    #[error("dimension mismatch: expected {expected}, got {got}{}", context_suffix(.context))]
    DimensionMismatch {
        expected: usize,
        got: usize,
        context: &'static str,
    },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("chart mismatch: {0}")]
    ChartMismatch(String),

    #[error("grid index {index:?} out of range for shape {shape:?}")]
    IndexOutOfRange {
        index: Vec<usize>,
        shape: Vec<usize>,
    },

    #[error("heap table entry {value} out of range 1..={order}")]
    HeapEntryOutOfRange { value: usize, order: usize },

    #[error("metric is degenerate at node {node:?} (|det g| = {det:.3e} < {threshold:.0e})")]
    DegenerateMetric {
        node: Vec<usize>,
        det: f64,
        threshold: f64,
    },

    #[error("element is not a biunit (left residual {left:.3e}, right residual {right:.3e})")]
    NotBiunit { left: f64, right: f64 },

    #[error(
        "structure tensors are not scaling-related (best ratio {ratio}, deviation {deviation:.3e})"
    )]
    NotScalingRelated { ratio: f64, deviation: f64 },

    #[error(
        "axis {axis} has {points} points; at least {needed} needed for the derivative stencil"
    )]
    TooFewPoints {
        axis: usize,
        points: usize,
        needed: usize,
    },

    #[error("curve leaves the chart at sample {sample} (coordinates {point:?})")]
    CurveExitsChart { sample: usize, point: Vec<f64> },

    #[error("curve parameters must be strictly increasing (sample {sample})")]
    CurveNotIncreasing { sample: usize },

    #[error("curve needs at least 2 samples, got {0}")]
    CurveTooShort(usize),

    #[error("integration step {dt} exceeds the smallest curve segment {min_segment}")]
    StepTooLarge { dt: f64, min_segment: f64 },

    #[error("step size must be positive, got {0}")]
    NonPositiveStep(f64),

    #[error("transport map is numerically singular (|det| = {det:.3e})")]
    SingularTransport { det: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

fn context_suffix(context: &str) -> String {
    if context.is_empty() {
        String::new()
    } else {
        format!(" ({context})")
    }
}

pub type Result<T> = std::result::Result<T, TernError>;
