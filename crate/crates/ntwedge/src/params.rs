//! Parameter validation and reduction, the quadratics `m` and `ell`, and the
//! ten-case classifier.
//!
//! The market model `(mu, sigma, beta, R, lambda, gamma)` reduces to the
//! dimensionless quantities
//!
//! ```text
//! eps = mu / beta,   delta = sigma / sqrt(beta),   xi = (lambda + gamma) / (1 - gamma),
//! ```
//!
//! and everything about the shape of the solution is governed by the quadratic
//!
//! ```text
//! m(q)   = 1 - eps (1-R) q + (delta^2/2) R (1-R) q^2
//! ell(q) = m(q) + q (1-q) (delta^2/2) (1-R)
//! ```
//!
//! through the signs of `m'(0)`, `m(1)`, `m'(1)` and the value `m_M` of `m` at
//! its turning point `q_M = eps / (delta^2 R)`.

use crate::error::{BoundaryKind, ParamError};
use crate::solver;
use serde::Serialize;

/// Relative band inside which a tested quantity counts as exactly zero.
///
/// Inputs landing in the band are reported as boundary cases rather than
/// silently classified into a neighbouring regime.
pub const BOUNDARY_BAND: f64 = 1e-12;

/// Raw market-model inputs, validated on construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarketParams {
    /// Drift of the risky asset per unit time.
    pub mu: f64,
    /// Volatility per square-root time, positive.
    pub sigma: f64,
    /// Discount rate per unit time, positive.
    pub beta: f64,
    /// Relative risk aversion, positive and not equal to one.
    pub risk_aversion: f64,
    /// Proportional cost on purchases, non-negative.
    pub lambda: f64,
    /// Proportional cost on sales, in `[0, 1)`.
    pub gamma: f64,
}

impl MarketParams {
    pub fn new(
        mu: f64,
        sigma: f64,
        beta: f64,
        risk_aversion: f64,
        lambda: f64,
        gamma: f64,
    ) -> Result<Self, ParamError> {
        let mut violations = Vec::new();
        for (name, v) in [
            ("mu", mu),
            ("sigma", sigma),
            ("beta", beta),
            ("risk_aversion", risk_aversion),
            ("lambda", lambda),
            ("gamma", gamma),
        ] {
            if !v.is_finite() {
                violations.push(format!("{name} must be finite (got {v})"));
            }
        }
        if sigma <= 0.0 {
            violations.push(format!("sigma must be positive (got {sigma})"));
        }
        if beta <= 0.0 {
            violations.push(format!("beta must be positive (got {beta})"));
        }
        if risk_aversion <= 0.0 {
            violations.push(format!(
                "risk_aversion must be positive (got {risk_aversion})"
            ));
        } else if (risk_aversion - 1.0).abs() <= BOUNDARY_BAND {
            violations.push("risk_aversion = 1 (log utility) is not supported".to_string());
        }
        if lambda < 0.0 {
            violations.push(format!("lambda must be non-negative (got {lambda})"));
        }
        if !(0.0..1.0).contains(&gamma) {
            violations.push(format!("gamma must lie in [0, 1) (got {gamma})"));
        }
        if lambda + gamma <= 0.0 {
            violations.push(format!(
                "lambda + gamma must be positive (got {})",
                lambda + gamma
            ));
        }
        if !violations.is_empty() {
            return Err(ParamError::Invalid { violations });
        }
        Ok(Self {
            mu,
            sigma,
            beta,
            risk_aversion,
            lambda,
            gamma,
        })
    }

    /// Reduce to the dimensionless parametrisation.
    pub fn reduce(&self) -> DimensionlessParams {
        DimensionlessParams {
            eps: self.mu / self.beta,
            delta: self.sigma / self.beta.sqrt(),
            risk_aversion: self.risk_aversion,
            xi: (self.lambda + self.gamma) / (1.0 - self.gamma),
            lambda: self.lambda,
            gamma: self.gamma,
            original: *self,
        }
    }
}

/// Validate and reduce market parameters in one step.
pub fn reduce_params(p: MarketParams) -> DimensionlessParams {
    p.reduce()
}

/// The dimensionless problem `(eps, delta, R, xi)` plus the individual costs
/// needed to map the solution back to wedge coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimensionlessParams {
    pub eps: f64,
    pub delta: f64,
    pub risk_aversion: f64,
    /// Round-trip transaction cost `(lambda + gamma) / (1 - gamma)`.
    pub xi: f64,
    pub lambda: f64,
    pub gamma: f64,
    /// The market parameters this reduction came from. When constructed
    /// directly in dimensionless form this is the canonical `beta = 1` model.
    pub original: MarketParams,
}

impl DimensionlessParams {
    /// Build directly from dimensionless inputs. Equivalent to a market model
    /// with `beta = 1`, `mu = eps`, `sigma = delta`.
    pub fn new(
        eps: f64,
        delta: f64,
        risk_aversion: f64,
        lambda: f64,
        gamma: f64,
    ) -> Result<Self, ParamError> {
        let original = MarketParams::new(eps, delta, 1.0, risk_aversion, lambda, gamma)?;
        Ok(original.reduce())
    }

    pub fn geometry(&self) -> QuadraticGeometry {
        QuadraticGeometry::new(self.eps, self.delta, self.risk_aversion)
    }

    pub fn classify(&self) -> CaseLabel {
        classify(self)
    }

    pub fn wellposedness(&self) -> Result<WellPosedness, ParamError> {
        wellposedness(self)
    }
}

/// The quadratics `m` and `ell`, their turning point, and their real roots
/// when those exist.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticGeometry {
    pub eps: f64,
    pub delta: f64,
    pub risk_aversion: f64,
    /// Coefficient of `q` in `m`: `-eps (1-R)`.
    pub m_c1: f64,
    /// Coefficient of `q^2` in `m`: `(delta^2/2) R (1-R)`.
    pub m_c2: f64,
    /// Coefficient of `q` in `ell`: `(delta^2/2 - eps)(1-R)`.
    pub ell_c1: f64,
    /// Coefficient of `q^2` in `ell`: `-(delta^2/2)(1-R)^2`.
    pub ell_c2: f64,
    /// Turning point `q_M = eps / (delta^2 R)` of `m`.
    pub q_m: f64,
    /// `m(q_M) = 1 - eps^2 (1-R) / (2 delta^2 R)`.
    pub m_m: f64,
    /// `m(1)`.
    pub m1: f64,
    /// Roots `(q_-, q_+)` of `m`, ordered, when the discriminant is positive.
    pub m_roots: Option<(f64, f64)>,
    /// Roots `(p_-, p_+)` of `ell`, ordered. `ell` always has real roots.
    pub ell_roots: Option<(f64, f64)>,
}

impl QuadraticGeometry {
    pub fn new(eps: f64, delta: f64, risk_aversion: f64) -> Self {
        let r = risk_aversion;
        let d2 = delta * delta;
        let m_c1 = -eps * (1.0 - r);
        let m_c2 = 0.5 * d2 * r * (1.0 - r);
        let ell_c1 = (0.5 * d2 - eps) * (1.0 - r);
        let ell_c2 = -0.5 * d2 * (1.0 - r) * (1.0 - r);
        let q_m = eps / (d2 * r);
        let m_m = 1.0 - eps * eps * (1.0 - r) / (2.0 * d2 * r);
        let m1 = 1.0 + m_c1 + m_c2;
        Self {
            eps,
            delta,
            risk_aversion,
            m_c1,
            m_c2,
            ell_c1,
            ell_c2,
            q_m,
            m_m,
            m1,
            m_roots: stable_roots(m_c2, m_c1, 1.0),
            ell_roots: stable_roots(ell_c2, ell_c1, 1.0),
        }
    }

    #[inline]
    pub fn m(&self, q: f64) -> f64 {
        1.0 + q * (self.m_c1 + q * self.m_c2)
    }

    #[inline]
    pub fn m_prime(&self, q: f64) -> f64 {
        self.m_c1 + 2.0 * q * self.m_c2
    }

    #[inline]
    pub fn ell(&self, q: f64) -> f64 {
        1.0 + q * (self.ell_c1 + q * self.ell_c2)
    }

    #[inline]
    pub fn ell_prime(&self, q: f64) -> f64 {
        self.ell_c1 + 2.0 * q * self.ell_c2
    }

    /// `ell(q) - m(q) = q (1-q) (delta^2/2)(1-R)`, evaluated in factored form.
    #[inline]
    pub fn ell_minus_m(&self, q: f64) -> f64 {
        q * (1.0 - q) * 0.5 * self.delta * self.delta * (1.0 - self.risk_aversion)
    }

    /// `(delta^2/2)(1-R)`, the scale relating `n - m` to the band width.
    #[inline]
    pub fn band_scale(&self) -> f64 {
        0.5 * self.delta * self.delta * (1.0 - self.risk_aversion)
    }

    /// True when solutions started left of one pass through the singular
    /// point `(1, m(1))`: the turning point lies right of one and `m(1) > 0`.
    pub fn is_singular_case(&self) -> bool {
        self.q_m > 1.0 && self.m1 > 0.0
    }
}

/// Numerically stable roots of `a q^2 + b q + c`, ordered ascending.
fn stable_roots(a: f64, b: f64, c: f64) -> Option<(f64, f64)> {
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    // Avoid cancellation: compute the root where b and the radical add.
    let u = if b >= 0.0 { -b - sq } else { -b + sq };
    let r1 = u / (2.0 * a);
    let r2 = if u == 0.0 { -b / (2.0 * a) } else { 2.0 * c / u };
    Some(if r1 <= r2 { (r1, r2) } else { (r2, r1) })
}

/// Build the geometry for a dimensionless parameter set.
pub fn geometry(d: &DimensionlessParams) -> QuadraticGeometry {
    d.geometry()
}

/// One of the ten admissible parameter regimes, or the boundary between them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseLabel {
    Case1AbIIii,
    Case1Aa,
    Case1AbIIi,
    Case2AII,
    Case1AbIii,
    Case1AbIi,
    Case2AI,
    Case1Bii,
    Case1Bi,
    Case2B,
    /// A tested quantity was exactly zero (within [`BOUNDARY_BAND`]).
    Boundary(BoundaryKind),
}

impl CaseLabel {
    pub fn name(&self) -> &'static str {
        match self {
            CaseLabel::Case1AbIIii => "1AbIIii",
            CaseLabel::Case1Aa => "1Aa",
            CaseLabel::Case1AbIIi => "1AbIIi",
            CaseLabel::Case2AII => "2AII",
            CaseLabel::Case1AbIii => "1AbIii",
            CaseLabel::Case1AbIi => "1AbIi",
            CaseLabel::Case2AI => "2AI",
            CaseLabel::Case1Bii => "1Bii",
            CaseLabel::Case1Bi => "1Bi",
            CaseLabel::Case2B => "2B",
            CaseLabel::Boundary(_) => "boundary",
        }
    }

    pub fn is_boundary(&self) -> bool {
        matches!(self, CaseLabel::Boundary(_))
    }

    /// Drift is negative: solutions are integrated leftward over `q <= 0`.
    pub fn is_leftward(&self) -> bool {
        matches!(
            self,
            CaseLabel::Case1Bii | CaseLabel::Case1Bi | CaseLabel::Case2B
        )
    }

    /// The relevant solution may pass through the singular point `(1, m(1))`.
    pub fn crosses_singularity(&self) -> bool {
        matches!(
            self,
            CaseLabel::Case1AbIii | CaseLabel::Case1AbIi | CaseLabel::Case2AI
        )
    }

    /// Well-posed only for round-trip costs above the closed-form threshold.
    pub fn is_conditional(&self) -> bool {
        matches!(
            self,
            CaseLabel::Case1AbIIi | CaseLabel::Case1AbIi | CaseLabel::Case1Bi
        )
    }
}

impl std::fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CaseLabel::Boundary(kind) => write!(f, "boundary ({kind})"),
            other => write!(f, "{}", other.name()),
        }
    }
}

/// Sign of a tested quantity with the boundary band applied.
fn band_sign(value: f64, scale: f64) -> Option<bool> {
    if value.abs() <= BOUNDARY_BAND * scale.max(1.0) {
        None
    } else {
        Some(value > 0.0)
    }
}

/// Classify a parameter set by the sign tests on `m`.
///
/// The decision path follows the case naming: `1`/`2` on `R - 1`, `A`/`B` on
/// `(1-R) m'(0)`, then `a`/`b` on `m(1)` (only reachable for `R < 1`,
/// `eps > 0`), `I`/`II` on `(1-R) m'(1)` and finally `i`/`ii` on `m_M`.
pub fn classify(d: &DimensionlessParams) -> CaseLabel {
    let g = d.geometry();
    classify_geometry(&g)
}

pub fn classify_geometry(g: &QuadraticGeometry) -> CaseLabel {
    let r = g.risk_aversion;
    let d2r = g.delta * g.delta * r;

    // (1-R) m'(0) = -eps (1-R)^2, so the A/B split is the sign of eps.
    let eps_pos = match band_sign(g.eps, d2r) {
        Some(s) => s,
        None => return CaseLabel::Boundary(BoundaryKind::ZeroDrift),
    };

    if r > 1.0 {
        if !eps_pos {
            return CaseLabel::Case2B;
        }
        // (1-R) m'(1) sign reduces to the sign of eps - delta^2 R.
        return match band_sign(g.eps - d2r, g.eps.abs() + d2r) {
            Some(true) => CaseLabel::Case2AI,
            Some(false) => CaseLabel::Case2AII,
            None => CaseLabel::Boundary(BoundaryKind::MertonLineAtOne),
        };
    }

    // R < 1 from here on.
    let m_m_scale = 1.0 + (g.m_m - 1.0).abs();
    if !eps_pos {
        return match band_sign(g.m_m, m_m_scale) {
            Some(true) => CaseLabel::Case1Bii,
            Some(false) => CaseLabel::Case1Bi,
            None => CaseLabel::Boundary(BoundaryKind::ZeroAtTurningPoint),
        };
    }

    let m1_pos = match band_sign(g.m1, 1.0 + (g.m1 - 1.0).abs()) {
        Some(s) => s,
        None => return CaseLabel::Boundary(BoundaryKind::ZeroAtOne),
    };
    if !m1_pos {
        return CaseLabel::Case1Aa;
    }

    let singular = match band_sign(g.eps - d2r, g.eps.abs() + d2r) {
        Some(s) => s,
        None => return CaseLabel::Boundary(BoundaryKind::MertonLineAtOne),
    };
    let m_m_pos = match band_sign(g.m_m, m_m_scale) {
        Some(s) => s,
        None => return CaseLabel::Boundary(BoundaryKind::ZeroAtTurningPoint),
    };
    match (singular, m_m_pos) {
        (false, true) => CaseLabel::Case1AbIIii,
        (false, false) => CaseLabel::Case1AbIIi,
        (true, true) => CaseLabel::Case1AbIii,
        (true, false) => CaseLabel::Case1AbIi,
    }
}

/// Whether the optimisation problem has a finite value, and for which costs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum WellPosedness {
    /// Finite value for every round-trip cost.
    Unconditional,
    /// Finite value only for `xi > xi_lower = exp(Lambda_lower) - 1`.
    Conditional { xi_lower: f64 },
    /// Infinite value for every cost.
    IllPosed,
}

/// Decide well-posedness for a parameter set.
///
/// Unconditional for `R > 1` or `R < 1` with `m_M > 0`; ill-posed for `R < 1`
/// with `m(1) < 0`; otherwise conditional with the closed-form threshold.
pub fn wellposedness(d: &DimensionlessParams) -> Result<WellPosedness, ParamError> {
    let g = d.geometry();
    match classify_geometry(&g) {
        CaseLabel::Boundary(kind) => Err(ParamError::Boundary(kind)),
        CaseLabel::Case1Aa => Ok(WellPosedness::IllPosed),
        label if label.is_conditional() => {
            let lam = solver::closed_form_lambda_under(&g).expect(
                "conditional cases always satisfy the closed-form root ordering",
            );
            Ok(WellPosedness::Conditional {
                xi_lower: lam.exp() - 1.0,
            })
        }
        _ => Ok(WellPosedness::Unconditional),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const R23: f64 = 2.0 / 3.0;

    fn dimensionless(eps: f64, delta: f64, r: f64) -> DimensionlessParams {
        DimensionlessParams::new(eps, delta, r, 0.1, 0.0).unwrap()
    }

    #[test]
    fn reduce_direct_ratios() {
        let p = MarketParams::new(0.25, 0.5_f64.sqrt(), 0.5, R23, 0.1, 0.0).unwrap();
        let d = p.reduce();
        assert!((d.eps - 0.5).abs() < 1e-15);
        assert!((d.delta - 1.0).abs() < 1e-15);
        assert!((d.xi - 0.1).abs() < 1e-15);
    }

    #[test]
    fn reduce_round_trip_cost_from_sales_only() {
        let p = MarketParams::new(0.25, 0.5_f64.sqrt(), 0.5, R23, 0.0, 0.5).unwrap();
        assert!((p.reduce().xi - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_costs_rejected() {
        let err = MarketParams::new(0.25, 1.0, 0.5, R23, 0.0, 0.0).unwrap_err();
        match err {
            ParamError::Invalid { violations } => {
                assert!(violations.iter().any(|v| v.contains("lambda + gamma")))
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn invalid_params_list_every_violation() {
        let err = MarketParams::new(0.1, -1.0, 0.0, 1.0, -0.5, 1.5).unwrap_err();
        match err {
            ParamError::Invalid { violations } => assert!(violations.len() >= 5),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn turning_point_examples() {
        let g = QuadraticGeometry::new(0.5, 1.0, R23);
        assert!((g.q_m - 0.75).abs() < 1e-15);
        assert!((g.m_m - 0.9375).abs() < 1e-15);

        let g = QuadraticGeometry::new(1.0, 1.0, 2.0);
        assert!((g.q_m - 0.5).abs() < 1e-15);
        assert!((g.m1 - 1.0).abs() < 1e-15);
        assert!((g.m_m - 1.25).abs() < 1e-15);
    }

    #[test]
    fn m_roots_match_bisection() {
        let g = QuadraticGeometry::new(13.5, 6.0, R23);
        let (q_minus, q_plus) = g.m_roots.unwrap();
        assert!((q_minus - 0.304806).abs() < 1e-5);
        assert!((q_plus - 0.820194).abs() < 1e-5);

        // Independent check: bisect m on brackets around each root.
        for (lo0, hi0, root) in [(0.0, g.q_m, q_minus), (g.q_m, 1.0, q_plus)] {
            let (mut lo, mut hi) = (lo0, hi0);
            assert!(g.m(lo) * g.m(hi) < 0.0);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if g.m(lo) * g.m(mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            assert!((0.5 * (lo + hi) - root).abs() < 1e-12);
        }
    }

    #[test]
    fn root_residuals_are_small() {
        let mut rng = 123456789_u64;
        let mut next = move || {
            // xorshift is plenty for parameter scattering
            rng ^= rng << 13;
            rng ^= rng >> 7;
            rng ^= rng << 17;
            (rng >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..2000 {
            let r = if next() < 0.5 {
                0.1 + 0.8 * next()
            } else {
                1.1 + 2.0 * next()
            };
            let eps = -6.0 + 12.0 * next();
            let delta = 0.3 + 2.0 * next();
            let g = QuadraticGeometry::new(eps, delta, r);
            if let Some((a, b)) = g.m_roots {
                let scale = 1.0 + g.m_c1.abs() + g.m_c2.abs();
                assert!(g.m(a).abs() <= 1e-10 * scale, "m(q_-) = {}", g.m(a));
                assert!(g.m(b).abs() <= 1e-10 * scale, "m(q_+) = {}", g.m(b));
            }
            if let Some((a, b)) = g.ell_roots {
                let scale = 1.0 + g.ell_c1.abs() + g.ell_c2.abs();
                assert!(g.ell(a).abs() <= 1e-10 * scale);
                assert!(g.ell(b).abs() <= 1e-10 * scale);
            }
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify(&dimensionless(0.5, 1.0, R23)),
            CaseLabel::Case1AbIIii
        );
        assert_eq!(classify(&dimensionless(-1.0, 1.0, 2.0)), CaseLabel::Case2B);
        assert_eq!(
            classify(&dimensionless(0.0, 1.0, 0.5)),
            CaseLabel::Boundary(BoundaryKind::ZeroDrift)
        );
    }

    #[test]
    fn wellposedness_examples() {
        // 1/(1-R) + delta^2 R / 2 = 15 < 17.5
        assert_eq!(
            wellposedness(&dimensionless(17.5, 6.0, R23)).unwrap(),
            WellPosedness::IllPosed
        );
        assert_eq!(
            wellposedness(&dimensionless(-1.0, 1.0, 2.0)).unwrap(),
            WellPosedness::Unconditional
        );
        match wellposedness(&dimensionless(13.5, 6.0, R23)).unwrap() {
            WellPosedness::Conditional { xi_lower } => assert!(xi_lower > 0.0),
            other => panic!("expected conditional, got {other:?}"),
        }
        assert!(matches!(
            wellposedness(&dimensionless(0.0, 1.0, 0.5)),
            Err(ParamError::Boundary(BoundaryKind::ZeroDrift))
        ));
    }

    #[test]
    fn conditional_requires_negative_turning_value() {
        let mut seed = 42_u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..5000 {
            let r = if next() < 0.7 {
                0.1 + 0.85 * next()
            } else {
                1.05 + 2.5 * next()
            };
            let eps = -8.0 + 16.0 * next();
            let delta = 0.3 + 2.5 * next();
            let d = match DimensionlessParams::new(eps, delta, r, 0.1, 0.0) {
                Ok(d) => d,
                Err(_) => continue,
            };
            let g = d.geometry();
            if let Ok(WellPosedness::Conditional { .. }) = wellposedness(&d) {
                assert!(r < 1.0 && g.m_m < 0.0 && g.m1 > 0.0);
            }
            if r < 1.0 && g.m_m < 0.0 && g.m1 > 0.0 && !classify(&d).is_boundary() {
                assert!(matches!(
                    wellposedness(&d),
                    Ok(WellPosedness::Conditional { .. })
                ));
            }
        }
    }

    /// Independent decision table: the epsilon-range column of the case table.
    fn classify_by_eps_ranges(eps: f64, delta: f64, r: f64) -> Option<CaseLabel> {
        let d2r = delta * delta * r;
        if r > 1.0 {
            return Some(if eps < 0.0 {
                CaseLabel::Case2B
            } else if eps < d2r {
                CaseLabel::Case2AII
            } else {
                CaseLabel::Case2AI
            });
        }
        let s = delta * (2.0 * r / (1.0 - r)).sqrt();
        let top = 1.0 / (1.0 - r) + 0.5 * d2r;
        Some(if eps < -s {
            CaseLabel::Case1Bi
        } else if eps < 0.0 {
            CaseLabel::Case1Bii
        } else if eps < d2r.min(s) {
            CaseLabel::Case1AbIIii
        } else if eps > top {
            CaseLabel::Case1Aa
        } else if s < eps && eps < d2r.min(top) {
            CaseLabel::Case1AbIIi
        } else if d2r < eps && eps < s {
            CaseLabel::Case1AbIii
        } else if eps > d2r.max(s) && eps < top {
            CaseLabel::Case1AbIi
        } else {
            return None; // boundary value
        })
    }

    #[test]
    fn classifier_agrees_with_eps_range_table() {
        let mut seed = 0xfeed_beef_u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut checked = 0_usize;
        while checked < 10_000 {
            let r = if next() < 0.7 {
                0.05 + 0.9 * next()
            } else {
                1.05 + 3.0 * next()
            };
            let eps = -10.0 + 20.0 * next();
            let delta = 0.2 + 3.0 * next();
            let d = match DimensionlessParams::new(eps, delta, r, 0.1, 0.0) {
                Ok(d) => d,
                Err(_) => continue,
            };
            let got = classify(&d);
            if got.is_boundary() {
                continue;
            }
            assert_eq!(got, classify_by_eps_ranges(eps, delta, r).unwrap());
            checked += 1;
        }
    }

    #[test]
    fn ell_minus_m_identity() {
        let mut seed = 7_u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..2000 {
            let r = 0.1 + 3.0 * next();
            if (r - 1.0).abs() < 1e-3 {
                continue;
            }
            let g = QuadraticGeometry::new(-5.0 + 10.0 * next(), 0.2 + 3.0 * next(), r);
            for _ in 0..20 {
                let q = -3.0 + 6.0 * next();
                let direct = g.ell(q) - g.m(q);
                let factored = g.ell_minus_m(q);
                let scale = g.ell(q).abs() + g.m(q).abs() + 1.0;
                assert!(
                    (direct - factored).abs() <= 1e-12 * scale,
                    "identity violated at q={q}: {direct} vs {factored}"
                );
            }
        }
    }

    #[test]
    fn table_rows_classify_exactly() {
        let rows: [(f64, f64, f64, CaseLabel); 10] = [
            (0.5, 1.0, R23, CaseLabel::Case1AbIIii),
            (17.5, 6.0, R23, CaseLabel::Case1Aa),
            (13.5, 6.0, R23, CaseLabel::Case1AbIIi),
            (1.0, 1.0, 2.0, CaseLabel::Case2AII),
            (1.5, 1.0, R23, CaseLabel::Case1AbIii),
            (3.25, 1.5, R23, CaseLabel::Case1AbIi),
            (2.5, 1.0, 2.0, CaseLabel::Case2AI),
            (-1.0, 1.0, R23, CaseLabel::Case1Bii),
            (-3.0, 1.0, R23, CaseLabel::Case1Bi),
            (-1.0, 1.0, 2.0, CaseLabel::Case2B),
        ];
        for (eps, delta, r, expect) in rows {
            assert_eq!(classify(&dimensionless(eps, delta, r)), expect);
        }
    }
}
