//! Tolerances used by the verification suites, each with its origin.
//! Suites read these as defaults; experiment configs may override per
//! check.

/// Floating-point slack for identities that hold exactly in real
/// arithmetic and are evaluated by a handful of f64 operations
/// (symmetry, monotone brackets, triangle inequality of `d_c`).
pub const EXACT_IDENTITY: f64 = 1e-12;

/// Closed-form versus closed-form comparisons that accumulate a few dozen
/// rounding steps (Funk symmetrization against the Beltrami-Klein formula).
pub const CLOSED_FORM_MATCH: f64 = 1e-9;

/// Two-sided ball bracket: the inequalities are exact; the slack absorbs
/// evaluation noise of the bound expressions near the boundary.
pub const BALL_BRACKET: f64 = 1e-10;

/// Numeric subspace optimizer against the half-space closed form. The
/// optimizer's greedy start is exact there; the tolerance guards the
/// line-search polish.
pub const QK_HALFSPACE_REL: f64 = 1e-6;

/// Numeric subspace optimizer against the ball order-equality; slightly
/// looser than the half-space case because the optimum is curved.
pub const QK_BALL_REL: f64 = 1e-5;

/// Order monotonicity of q_k across k at optimizer accuracy.
pub const QK_MONOTONE_REL: f64 = 1e-5;

/// Rigidity equality |delta_1 - delta_{d-1}| / delta_1 on balls,
/// half-spaces, and slabs.
pub const RIGIDITY_EQUALITY_REL: f64 = 1e-4;

/// Relative gap that counts as a rigidity witness on non-rigid domains.
pub const RIGIDITY_WITNESS_GAP: f64 = 0.05;

/// Sampled-graph distance against the cross-ratio oracle on the disk.
pub const GRAPH_VS_CROSS_RATIO_REL: f64 = 0.02;

/// Four-point constant of collinear normal-fiber points; zero up to
/// quadrature error.
pub const GROMOV_COLLINEAR: f64 = 1e-6;

/// Stability of the fitted four-point constant under node doubling.
pub const GROMOV_STABILITY_REL: f64 = 0.10;

/// Guard for ratios that are one by construction (localization with both
/// chord exits on the outer boundary, metric inclusion).
pub const RATIO_ONE: f64 = 1e-12;

/// Growth allowance for fitted constants across a refinement ladder; a
/// fitted constant that more than quadruples on the fine half of the
/// ladder counts as unbounded.
pub const LADDER_GROWTH_FACTOR: f64 = 4.0;

/// Classifier eigenvalue comparisons (symmetric eigensolver accuracy).
pub const CLASSIFIER_EIG: f64 = 1e-9;
