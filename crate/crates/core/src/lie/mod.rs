//! Lie-algebraic model of `CH^n`: the algebra `a + n`, its metric, complex
//! structure and bracket, and the group `AN` with its adjoint action.

mod group;
mod vector;

pub use group::{
    adjoint, adjoint_series_oracle, bracket, group_inverse, group_multiply, rho, GroupElement,
};
pub use vector::{AlgVec, ModelDim};
