//! Finitely generated abelian groups.
//!
//! Groups are kept in the split form Z^r × Π Z_{2^{p_j}} × Π Z_{q_k}; a
//! presentation matrix is brought there through its Smith normal form.

mod group;
mod matrix;
mod snf;

pub use group::{FgAbGroup, GroupElement};
pub use matrix::IntMatrix;
pub use snf::{snf_decompose, SnfDecomposition};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FgabError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid element: {0}")]
    InvalidElement(String),
}

impl FgabError {
    pub fn name(&self) -> &'static str {
        match self {
            FgabError::Shape(_) => "ShapeError",
            FgabError::InvalidGroup(_) => "InvalidGroup",
            FgabError::InvalidElement(_) => "InvalidElement",
        }
    }
}

/// Free-function form of [`FgAbGroup::two_torsion`].
pub fn two_torsion(group: &FgAbGroup) -> Vec<GroupElement> {
    group.two_torsion()
}

/// Free-function form of [`FgAbGroup::add`].
pub fn add(group: &FgAbGroup, x: &GroupElement, y: &GroupElement) -> Result<GroupElement, FgabError> {
    group.add(x, y)
}
