//! Error types shared across the solver layers.

use thiserror::Error;

/// Which excluded equality a parameter set sits on.
///
/// The classifier rejects these instead of guessing a neighbouring case; each
/// corresponds to an exact zero of one of the tested quadratic quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum BoundaryKind {
    /// `eps = 0`: zero drift, the target holding collapses to zero.
    ZeroDrift,
    /// `eps = delta^2 R`: the frictionless target sits exactly at `q = 1`.
    MertonLineAtOne,
    /// `m(1) = 0`, i.e. `eps = 1/(1-R) + delta^2 R / 2`.
    ZeroAtOne,
    /// `m_M = 0`, i.e. `|eps| = delta * sqrt(2R/(1-R))`.
    ZeroAtTurningPoint,
}

impl std::fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundaryKind::ZeroDrift => write!(f, "eps = 0"),
            BoundaryKind::MertonLineAtOne => write!(f, "eps = delta^2*R"),
            BoundaryKind::ZeroAtOne => write!(f, "m(1) = 0"),
            BoundaryKind::ZeroAtTurningPoint => write!(f, "m at turning point = 0"),
        }
    }
}

#[derive(Debug, Error)]
pub enum ParamError {
    /// One or more invariants on the raw inputs failed. Every violated field
    /// is listed, not just the first.
    #[error("invalid parameters: {}", .violations.join("; "))]
    Invalid { violations: Vec<String> },

    /// The parameters sit on one of the excluded boundary equalities.
    #[error("boundary case: {0}")]
    Boundary(BoundaryKind),
}

#[derive(Debug, Error)]
pub enum OdeError {
    /// `ell(q) - n` vanished away from the singular point; the curve left the
    /// admissible band.
    #[error("singular denominator ell(q) - n at q = {q}")]
    SingularDenominator { q: f64 },

    /// Start point is the turning point: the curve is the single point
    /// `(q_M, m_M)` and there is nothing to integrate.
    #[error("degenerate start at the turning point r = q_M")]
    DegenerateStart,

    /// Singular continuation requested for a geometry whose turning point
    /// lies left of one.
    #[error("not a singular-crossing geometry (requires q_M > 1 and m(1) > 0)")]
    NotSingularCase,

    /// The solution hit zero before re-meeting `m`: the ill-posed signature.
    #[error("solution hit zero at q = {q}")]
    HitZero { q: f64 },

    /// The step controller could not meet the tolerance.
    #[error("step size underflow at q = {q} (h = {h:e})")]
    StepFailure { q: f64, h: f64 },
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Param(#[from] ParamError),

    #[error(transparent)]
    Ode(#[from] OdeError),

    /// Conditionally well-posed geometry with a round-trip cost at or below
    /// the threshold.
    #[error("ill-posed for xi = {xi} (requires xi > {xi_lower})")]
    IllPosedForThisXi { xi: f64, xi_lower: f64 },

    /// Ill-posed for every transaction cost.
    #[error("ill-posed for every transaction cost")]
    IllPosedAlways,

    /// The quadratic `m` has no real roots, so the closed-form threshold does
    /// not exist.
    #[error("m has no real roots (m at turning point = {m_m})")]
    RootsNotReal { m_m: f64 },

    /// Root ordering of `m` and `ell` outside the three supported patterns.
    #[error("unsupported root ordering of m and ell")]
    OrderingUnsupported,

    /// The underlying curve hit zero, so the integrand is not defined up to a
    /// re-meeting point.
    #[error("curve hit zero at q = {q}; no admissible integral")]
    IllPosedCurve { q: f64 },

    /// Bisection could not bracket or converge.
    #[error("boundary solve failed: {0}")]
    SolverFailure(String),
}

#[derive(Debug, Error)]
pub enum PolicyError {
    #[error(transparent)]
    Solve(#[from] SolveError),

    /// `(x, y*theta)` lies outside the open solvency region.
    #[error("insolvent position: x = {x}, y*theta = {y_theta}")]
    Insolvent { x: f64, y_theta: f64 },

    /// Frictionless reference value is infinite (`m_M <= 0` with `R < 1`).
    #[error("frictionless problem ill-posed: m at turning point = {m_m}")]
    MertonIllPosed { m_m: f64 },
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    ConfigInvalid(String),

    #[error(transparent)]
    Policy(#[from] PolicyError),
}
