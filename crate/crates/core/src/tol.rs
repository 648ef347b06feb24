//! Numerical tolerances shared across the crate.

/// Relative singular-value cutoff used for every rank decision.
pub const RANK: f64 = 1e-8;

/// Eigenvalues of `P_V P_W P_V` above `1 - INTERSECTION` count as common directions.
pub const INTERSECTION: f64 = 1e-8;

/// Threshold for `|<J b_i, b_j>|` in the totally-real test.
pub const TOTALLY_REAL: f64 = 1e-10;

/// Projector distance allowed between `V` and `JV` for a complex subspace.
pub const COMPLEX: f64 = 1e-10;

/// Bracket closure residual allowed for a subalgebra.
pub const SUBALGEBRA: f64 = 1e-10;

/// Threshold for treating a scalar coordinate as nonzero in case dispatch.
pub const NONZERO: f64 = 1e-10;

/// Absolute tolerance on congruence-key scalars.
pub const KEY: f64 = 1e-9;

/// Absolute floor for relative comparisons.
pub const FLOOR: f64 = 1e-12;
