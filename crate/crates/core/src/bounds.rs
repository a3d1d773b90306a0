//! Closed-form capacity upper bounds for the amplitude-constrained scalar
//! AWGN channel: Shannon's average-power bound, the McKellips bound, the
//! Thangaraj test-density bound, and the refined bound obtained by
//! optimizing the Gaussian-tail variance of the test density.
//!
//! All values are in nats; the peak power `P = A^2` is linear and
//! normalized so the noise variance is one.

use crate::error::{Error, Result};
use crate::specfun::{binary_entropy_nats, q_function, tail_moment};

/// dB threshold on P above which the McKellips form replaces the
/// Thangaraj form in the regime-switched prior bound.
pub const REGIME_SWITCH_DB: f64 = 6.303;

/// Linear peak power `P = A^2` (noise variance normalized to one).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLevel(f64);

impl PowerLevel {
    /// Validates `p > 0` and finite. The zero-power limit is deliberately
    /// rejected; callers wanting the limit evaluate at e.g. `1e-16`.
    pub fn new(p: f64) -> Result<Self> {
        if p.is_finite() && p > 0.0 {
            Ok(Self(p))
        } else {
            Err(Error::InvalidPower(p))
        }
    }

    pub fn from_db(p_db: f64) -> Result<Self> {
        Self::new(10f64.powf(p_db / 10.0))
    }

    #[inline]
    pub fn linear(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn db(self) -> f64 {
        10.0 * self.0.log10()
    }

    /// Amplitude constraint `A = sqrt(P)`.
    #[inline]
    pub fn amplitude(self) -> f64 {
        self.0.sqrt()
    }
}

/// Which branch of the regime-switched prior bound applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Below the switch: Thangaraj test-density form.
    LowP,
    /// At or above the switch: McKellips form.
    HighP,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regime::LowP => write!(f, "LOW_P"),
            Regime::HighP => write!(f, "HIGH_P"),
        }
    }
}

/// Every bound evaluated at one power level, plus the tail-variance
/// metadata behind the refined bound.
#[derive(Debug, Clone, Copy)]
pub struct BoundPoint {
    pub p_linear: f64,
    pub shannon_nats: f64,
    pub mckellips_nats: f64,
    pub thangaraj_nats: f64,
    /// Regime-matched prior bound plus the tail refinement.
    pub theorem_nats: f64,
    /// `min(theorem, shannon)` - the curve actually plotted and compared.
    pub combined_nats: f64,
    /// Tail refinement W(P) <= 0.
    pub refinement_nats: f64,
    /// Optimized tail variance, in (0, 1].
    pub sigma2: f64,
    /// Optimized body mass of the test density, in [0, 1/2).
    pub beta: f64,
    pub regime: Regime,
}

/// Average-power (Shannon) bound `log(1 + P) / 2`.
pub fn shannon_bound(p: PowerLevel) -> f64 {
    0.5 * p.linear().ln_1p()
}

/// McKellips bound `log(1 + sqrt(2P / (pi e)))`.
pub fn mckellips_bound(p: PowerLevel) -> f64 {
    (2.0 * p.linear() / (std::f64::consts::PI * std::f64::consts::E))
        .sqrt()
        .ln_1p()
}

/// Optimal body mass `1/2 - Q(2 sqrt(P))` of the test density.
pub fn beta_star(p: PowerLevel) -> f64 {
    0.5 - q_function(2.0 * p.amplitude())
}

/// Thangaraj bound `beta log sqrt(2P/(pi e)) + H(beta)` at `beta = beta_star`.
///
/// Defined for every positive P; restricting it to the low-power regime is
/// the job of [`regime_bound`], so the raw curve can be plotted everywhere.
pub fn thangaraj_bound(p: PowerLevel) -> f64 {
    let beta = beta_star(p);
    let half_log = 0.5 * (2.0 * p.linear() / (std::f64::consts::PI * std::f64::consts::E)).ln();
    // beta_star lies in (0, 1/2), so the entropy call cannot fail.
    beta * half_log + binary_entropy_nats(beta).expect("beta_star in (0, 1/2)")
}

/// Optimized tail variance `1 + 2 g(2 sqrt(P)) / (1 + 2 Q(2 sqrt(P)))`.
///
/// Lies in (0, 1] for every positive P; a non-positive result would mean a
/// broken tail-moment evaluation and is reported as an internal error.
pub fn sigma2_star(p: PowerLevel) -> Result<f64> {
    let u = 2.0 * p.amplitude();
    let sigma2 = 1.0 + 2.0 * tail_moment(u) / (1.0 + 2.0 * q_function(u));
    if sigma2 > 0.0 {
        Ok(sigma2)
    } else {
        Err(Error::DegenerateTailVariance {
            sigma2,
            p: p.linear(),
        })
    }
}

/// Tail refinement
/// `W(P) = (log s2 + 1/s2 - 1)/2 * (1/2 + Q(2 sqrt P)) + g(2 sqrt P)/(2 s2)`
/// evaluated at the optimized variance, hence always <= 0.
pub fn tail_refinement(p: PowerLevel) -> Result<f64> {
    let sigma2 = sigma2_star(p)?;
    Ok(tail_refinement_at(p, sigma2))
}

/// The same refinement expression with the tail variance left free; used by
/// the numerical optimality checks.
pub fn tail_refinement_at(p: PowerLevel, sigma2: f64) -> f64 {
    let u = 2.0 * p.amplitude();
    let penalty = sigma2.ln() + 1.0 / sigma2 - 1.0;
    0.5 * penalty * (0.5 + q_function(u)) + tail_moment(u) / (2.0 * sigma2)
}

/// Regime-switched prior bound R(P): McKellips at or above
/// [`REGIME_SWITCH_DB`], Thangaraj below.
pub fn regime_bound(p: PowerLevel) -> (f64, Regime) {
    if p.db() >= REGIME_SWITCH_DB {
        (mckellips_bound(p), Regime::HighP)
    } else {
        (thangaraj_bound(p), Regime::LowP)
    }
}

/// Evaluates every bound at `p` and assembles the refined bound
/// `min(R(P) + W(P), shannon)`.
pub fn theorem_bound(p: PowerLevel) -> Result<BoundPoint> {
    let shannon_nats = shannon_bound(p);
    let mckellips_nats = mckellips_bound(p);
    let thangaraj_nats = thangaraj_bound(p);
    let (prior, regime) = regime_bound(p);
    let sigma2 = sigma2_star(p)?;
    let refinement_nats = tail_refinement_at(p, sigma2);
    let theorem_nats = prior + refinement_nats;
    Ok(BoundPoint {
        p_linear: p.linear(),
        shannon_nats,
        mckellips_nats,
        thangaraj_nats,
        theorem_nats,
        combined_nats: theorem_nats.min(shannon_nats),
        refinement_nats,
        sigma2,
        beta: beta_star(p),
        regime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: f64) -> PowerLevel {
        PowerLevel::new(v).unwrap()
    }

    fn assert_close(actual: f64, expected: f64, tol: f64) {
        assert!(
            (actual - expected).abs() <= tol,
            "actual {actual}, expected {expected}"
        );
    }

    #[test]
    fn power_level_validation() {
        assert!(PowerLevel::new(0.0).is_err());
        assert!(PowerLevel::new(-1.0).is_err());
        assert!(PowerLevel::new(f64::NAN).is_err());
        assert!(PowerLevel::new(f64::INFINITY).is_err());
        assert_eq!(PowerLevel::from_db(0.0).unwrap().linear(), 1.0);
    }

    #[test]
    fn shannon_values() {
        assert_close(shannon_bound(p(1.0)), 0.346_573_590_279_972_64, 1e-16);
        assert_close(shannon_bound(p(3.0)), std::f64::consts::LN_2, 1e-15);
        let e2m1 = std::f64::consts::E * std::f64::consts::E - 1.0;
        assert_close(shannon_bound(p(e2m1)), 1.0, 1e-14);
    }

    #[test]
    fn mckellips_values() {
        let half_pi_e = 0.5 * std::f64::consts::PI * std::f64::consts::E;
        assert_close(mckellips_bound(p(half_pi_e)), std::f64::consts::LN_2, 1e-14);
        assert_close(mckellips_bound(p(1.0)), 0.394_701_689_140_874_2, 1e-14);
        let tiny = mckellips_bound(p(1e-12));
        assert!(tiny > 0.0 && tiny < 1e-5);
    }

    #[test]
    fn beta_star_values() {
        assert_close(beta_star(p(1.0)), 0.477_249_868_051_820_8, 1e-15);
        assert_close(beta_star(p(1e6)), 0.5, 1e-12);
        let tiny = beta_star(p(1e-12));
        assert!(tiny > 0.0 && tiny < 1e-5);
    }

    #[test]
    fn thangaraj_values() {
        assert_close(thangaraj_bound(p(1.0)), 0.345_727_858_804_132_2, 1e-14);
        // At P = pi e / 2 the log factor vanishes and only the entropy term
        // survives, just below log 2.
        let half_pi_e = 0.5 * std::f64::consts::PI * std::f64::consts::E;
        assert_close(thangaraj_bound(p(half_pi_e)), 0.693_147_179_917_414_3, 1e-12);
        let tiny = thangaraj_bound(p(1e-10));
        assert!(tiny > -1e-4 && tiny < 1e-3, "thangaraj(1e-10) = {tiny}");
        assert_close(tiny, 3.989_390_973_207_015e-6, 1e-12);
    }

    #[test]
    fn sigma2_star_values() {
        assert_close(sigma2_star(p(1e-16)).unwrap(), 1.0, 1e-7);
        assert_close(sigma2_star(p(1.0)).unwrap(), 0.967_515_254_046_186_1, 1e-12);
        assert_close(sigma2_star(p(1e6)).unwrap(), 1.0, 1e-12);
    }

    #[test]
    fn tail_refinement_values() {
        assert!(tail_refinement(p(1e6)).unwrap().abs() <= 1e-12);
        assert_close(
            tail_refinement(p(1.0)).unwrap(),
            -0.008_631_673_113_471_143,
            1e-12,
        );
        // Forcing s2 = 1 recovers g(2)/2 and must not beat the optimum.
        let at_one = tail_refinement_at(p(1.0), 1.0);
        assert_close(at_one, -0.008_490_702_616_829_637, 1e-12);
        assert!(tail_refinement(p(1.0)).unwrap() <= at_one);
    }

    #[test]
    fn regime_switch() {
        assert_eq!(regime_bound(p(10.0)).1, Regime::HighP);
        assert_eq!(regime_bound(p(1.0)).1, Regime::LowP);
        // Boundary is inclusive on the high side.
        let boundary = PowerLevel::from_db(REGIME_SWITCH_DB).unwrap();
        assert_eq!(regime_bound(boundary).1, Regime::HighP);
        let below = PowerLevel::from_db(REGIME_SWITCH_DB - 1e-9).unwrap();
        assert_eq!(regime_bound(below).1, Regime::LowP);
    }

    #[test]
    fn theorem_point_at_unit_power() {
        let bp = theorem_bound(p(1.0)).unwrap();
        assert_close(bp.theorem_nats, 0.337_096_185_690_661, 1e-12);
        assert_eq!(bp.combined_nats, bp.theorem_nats);
        assert!(bp.combined_nats < bp.shannon_nats);
        assert_eq!(bp.regime, Regime::LowP);
        assert!(bp.sigma2 > 0.0 && bp.sigma2 <= 1.0);
        assert!(bp.beta >= 0.0 && bp.beta < 0.5);
    }

    #[test]
    fn theorem_point_tiny_and_high_power() {
        let bp = theorem_bound(p(1e-8)).unwrap();
        assert!(bp.combined_nats.abs() < 1e-6);
        let bp = theorem_bound(p(100.0)).unwrap();
        assert_eq!(bp.regime, Regime::HighP);
        assert_close(bp.theorem_nats, 1.764_630_533_317_832_3, 1e-12);
        assert!(bp.combined_nats < shannon_bound(p(100.0)));
    }

    #[test]
    fn theorem_jump_at_switch_is_small() {
        let below = theorem_bound(PowerLevel::from_db(REGIME_SWITCH_DB - 1e-7).unwrap()).unwrap();
        let above = theorem_bound(PowerLevel::from_db(REGIME_SWITCH_DB).unwrap()).unwrap();
        assert!(
            (below.theorem_nats - above.theorem_nats).abs() < 5e-3,
            "jump {:e}",
            (below.theorem_nats - above.theorem_nats).abs()
        );
    }
}
