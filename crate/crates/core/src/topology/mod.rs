//! Model manifolds: cohomology rings over Q, Betti data and characteristic classes.

mod charclass;
mod expr;
mod model;
mod ring;

pub use charclass::{betti_profile, char_classes, cup_and_integrate, BettiProfile, CharClasses, KClassData};
pub use expr::{parse_class, ExprError};
pub use model::{build_model, ManifoldModel, ModelSpec, MAX_PRODUCT_DIM};
pub use ring::{CohClass, CohRing, Generator, Monomial};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("unsupported model: {0}")]
    UnsupportedModel(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("incomplete data: {0}")]
    IncompleteData(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl TopologyError {
    pub fn name(&self) -> &'static str {
        match self {
            TopologyError::UnsupportedModel(_) => "UnsupportedModel",
            TopologyError::Shape(_) => "ShapeError",
            TopologyError::IncompleteData(_) => "IncompleteData",
            TopologyError::Parse(_) => "ParseError",
        }
    }
}
