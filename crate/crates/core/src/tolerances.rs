//! Numerical thresholds shared across modules.

/// Residual sup counted as zero on finite groups.
pub const RESIDUAL_TOL_FINITE: f64 = 1e-12;

/// Residual sup counted as zero on balls, relative to the size of the terms.
pub const RESIDUAL_TOL_BALL: f64 = 1e-9;

/// Per-property tolerance of the anti-automorphism audit.
pub const AUDIT_TOL: f64 = 1e-10;

/// Slack allowed on `LHS - RHS` in the stability inequality audits.
pub const BOUND_TOL: f64 = 1e-9;

/// Multiplicativity and `|z| = 1` checks on floating-point characters.
pub const CHARACTER_TOL: f64 = 1e-12;

/// Singular values below this are treated as zero when extracting kernels.
pub const RANK_CUTOFF: f64 = 1e-10;

/// A singular value inside this band makes the numerical rank ambiguous.
pub const RANK_GUARD_BAND: (f64, f64) = (1e-11, 1e-9);

/// Projection residual below which two spans are considered equal.
pub const SPAN_TOL: f64 = 1e-9;

/// Newton/Levenberg–Marquardt convergence threshold on the residual sup.
pub const NEWTON_TOL: f64 = 1e-12;

/// Two solutions closer than this in sup norm are the same solution.
pub const DEDUP_TOL: f64 = 1e-6;

/// Consecutive sup ratio at or above which a function counts as growing.
pub const GROWTH_FACTOR: f64 = 1.5;

/// Consecutive sup ratio at or below which a function counts as flat.
/// Sups of bounded random noise on small balls still creep upward, so this
/// leaves room above 1.
pub const FLAT_FACTOR: f64 = 1.25;

/// Relative sup-norm residual below which a fitted formula is accepted.
pub const FIT_TOL: f64 = 1e-9;

/// Allowed deviation of `δ(ε)` from linear scaling in the slope check.
pub const SLOPE_TOL: f64 = 0.2;
