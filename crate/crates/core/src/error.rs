use thiserror::Error;

use crate::poset::CellId;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lens parameters: {0}")]
    InvalidParams(String),

    #[error("join inputs share the vertex label {label:?}")]
    OverlappingVertexLabels { label: String },

    #[error("join input is not a simplicial complex: cells {a:?} and {b:?} have the same vertex set")]
    JoinInputNotSimplicial { a: CellId, b: CellId },

    #[error("vertex rule does not extend to a poset automorphism: {0}")]
    NotAnAutomorphism(String),

    #[error(
        "action is not good: vertices {u:?} and {v:?} lie in one orbit but are adjacent via edge \
         {edge:?}; a quotient poset is a simplicial cell complex exactly when the action is good"
    )]
    NotGoodAction { edge: CellId, u: CellId, v: CellId },

    #[error("complex is not pure: cell {cell:?} of dimension {dim} is maximal below the top dimension {top}")]
    NotPure { cell: CellId, dim: usize, top: usize },

    #[error("ridge {ridge:?} lies in {count} facets, expected exactly 2")]
    RidgeFacetCount { ridge: CellId, count: usize },

    #[error(
        "ridge {ridge:?} admits no color: incident facets {a:?} and {b:?} omit different vertices"
    )]
    AmbiguousRidgeColor { ridge: CellId, a: CellId, b: CellId },

    #[error("graph is not properly edge-colored: node {node} has two incident edges of color {color:?}")]
    NotProperlyColored { node: usize, color: String },

    #[error("graph is disconnected; colored isomorphism propagation requires connected inputs")]
    DisconnectedGraph,

    #[error("color map is not a bijection between the color sets: {0}")]
    BadColorMap(String),

    #[error("cell {cell:?}: facets cannot be matched bijectively to omitted vertices")]
    FacetVertexMismatch { cell: CellId },

    #[error("resource budget exceeded: derived subdivision needs {needed} top simplices, budget is {budget}")]
    BudgetExceeded { needed: usize, budget: usize },

    #[error("coefficients are not a convex combination: {0}")]
    BadCoefficients(String),

    #[error("input norm {0} is too close to zero")]
    NearZeroNorm(f64),

    #[error("point is not on the unit sphere: norm {0}")]
    NotUnitNorm(f64),

    #[error("malformed poset JSON: {0}")]
    MalformedJson(String),
}

pub type Result<T> = std::result::Result<T, Error>;
