//! Scalar special functions: standard normal density and tail, the Gaussian
//! tail-moment function with its derivatives, and binary entropy in nats.
//!
//! Everything downstream (bounds, test densities, the capacity oracle)
//! inherits its precision from these routines, so the tail probability is
//! computed with a rational-approximation complementary error function
//! accurate to a couple of ulps, and the tail moment switches to an
//! asymptotic form where the direct formula would cancel catastrophically.

// The rational-approximation constants carry their canonical digit strings.
#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};

/// 1/sqrt(2*pi)
pub(crate) const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_677_94;

/// Standard normal probability density.
#[inline]
pub fn std_normal_pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Upper-tail probability of the standard normal distribution.
///
/// Relative error is below 1e-12 wherever the result is a normal f64
/// (x up to about 37); past that the tail quietly underflows toward zero
/// without ever going negative or NaN.
#[inline]
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x * std::f64::consts::FRAC_1_SQRT_2)
}

// Direct evaluation of u^2 Q(u) - u psi(u) loses roughly u^2 in relative
// accuracy to cancellation; at the switch point that costs ~676 ulps, still
// comfortably inside the 1e-9 contract, while beyond it the asymptotic
// series is accurate to ~1e-16.
const TAIL_MOMENT_SERIES_CUTOFF: f64 = 26.0;

/// Gaussian tail-moment function `u^2 Q(u) - u psi(u)`.
///
/// Strictly negative for u > 0, zero at u = 0, and vanishing as u grows;
/// relative error stays below 1e-9 until the value itself leaves the
/// representable range (|result| ~ 1e-300 near u = 37).
pub fn tail_moment(u: f64) -> f64 {
    if u < TAIL_MOMENT_SERIES_CUTOFF {
        u * u * q_function(u) - u * std_normal_pdf(u)
    } else {
        // g(u) = -(psi(u)/u) * (1 - 3/u^2 + 15/u^4 - 105/u^6 + ...)
        let inv_u2 = 1.0 / (u * u);
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 0u32;
        loop {
            k += 1;
            term *= -(2.0 * f64::from(k) + 1.0) * inv_u2;
            sum += term;
            if term.abs() < 1e-18 || k >= 12 {
                break;
            }
        }
        -(std_normal_pdf(u) / u) * sum
    }
}

/// Derivatives of [`tail_moment`] of order 1 through 4.
pub fn tail_moment_deriv(u: f64, order: u32) -> Result<f64> {
    let q = q_function(u);
    let pdf = std_normal_pdf(u);
    match order {
        1 => Ok(2.0 * u * q - pdf),
        2 => Ok(2.0 * q - u * pdf),
        3 => Ok((u * u - 3.0) * pdf),
        4 => Ok(u * (5.0 - u * u) * pdf),
        _ => Err(Error::InvalidDerivativeOrder(order)),
    }
}

/// Binary entropy `-p ln p - (1-p) ln(1-p)` in nats, with the continuous
/// extension H(0) = H(1) = 0.
pub fn binary_entropy_nats(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    if p == 0.0 || p == 1.0 {
        return Ok(0.0);
    }
    Ok(-p * p.ln() - (1.0 - p) * (1.0 - p).ln())
}

// ---------------------------------------------------------------------------
// Complementary error function.
//
// Rational approximation following the classic SunPro/FreeBSD msun erfc,
// which keeps full relative accuracy on the upper tail by computing
// exp(-x*x - 0.5625 + R/S) / x instead of 1 - erf(x).
// ---------------------------------------------------------------------------

const ERX: f64 = 8.450_629_115_104_675_3e-1;

// |x| < 0.84375: erf(x) = x + x*R(x^2)/S(x^2)
const PP0: f64 = 1.283_791_670_955_125_6e-1;
const PP1: f64 = -3.250_421_072_470_015e-1;
const PP2: f64 = -2.848_174_957_559_851e-2;
const PP3: f64 = -5.770_270_296_489_441_5e-3;
const PP4: f64 = -2.376_301_665_665_016_3e-5;
const QQ1: f64 = 3.979_172_239_591_553_4e-1;
const QQ2: f64 = 6.502_224_998_876_729e-2;
const QQ3: f64 = 5.081_306_281_875_766e-3;
const QQ4: f64 = 1.324_947_380_043_216_4e-4;
const QQ5: f64 = -3.960_228_278_775_368e-6;

// 0.84375 <= |x| < 1.25: erf(x) = erx + P1(s)/Q1(s), s = |x| - 1
const PA0: f64 = -2.362_118_560_752_659_4e-3;
const PA1: f64 = 4.148_561_186_837_483_4e-1;
const PA2: f64 = -3.722_078_760_357_013_3e-1;
const PA3: f64 = 3.183_466_199_011_617_5e-1;
const PA4: f64 = -1.108_946_942_823_966_8e-1;
const PA5: f64 = 3.547_830_432_561_823_6e-2;
const PA6: f64 = -2.166_375_594_868_790_8e-3;
const QA1: f64 = 1.064_208_804_008_442_3e-1;
const QA2: f64 = 5.403_979_177_021_710_4e-1;
const QA3: f64 = 7.182_865_441_419_627e-2;
const QA4: f64 = 1.261_712_198_087_616_4e-1;
const QA5: f64 = 1.363_708_391_202_905e-2;
const QA6: f64 = 1.198_449_984_679_910_7e-2;

// 1.25 <= |x| < 1/0.35: erfc(x) = exp(-x*x - 0.5625 + R1(z)/S1(z))/x, z = 1/x^2
const RA0: f64 = -9.864_944_034_847_148e-3;
const RA1: f64 = -6.938_585_727_071_818e-1;
const RA2: f64 = -1.055_862_622_532_329e1;
const RA3: f64 = -6.237_533_245_032_6e1;
const RA4: f64 = -1.623_966_694_625_734_7e2;
const RA5: f64 = -1.846_050_929_067_110_4e2;
const RA6: f64 = -8.128_743_550_630_66e1;
const RA7: f64 = -9.814_329_344_169_145e0;
const SA1: f64 = 1.965_127_166_743_925_7e1;
const SA2: f64 = 1.376_577_541_435_190_4e2;
const SA3: f64 = 4.345_658_774_752_292_3e2;
const SA4: f64 = 6.453_872_717_332_679e2;
const SA5: f64 = 4.290_081_400_275_678_3e2;
const SA6: f64 = 1.086_350_055_417_794_4e2;
const SA7: f64 = 6.570_249_770_319_282e0;
const SA8: f64 = -6.042_441_521_485_81e-2;

// 1/0.35 <= |x| < 28: erfc(x) = exp(-x*x - 0.5625 + R2(z)/S2(z))/x, z = 1/x^2
const RB0: f64 = -9.864_942_924_700_099e-3;
const RB1: f64 = -7.992_832_376_805_23e-1;
const RB2: f64 = -1.775_795_491_775_475_2e1;
const RB3: f64 = -1.606_363_848_558_219_2e2;
const RB4: f64 = -6.375_664_433_683_896e2;
const RB5: f64 = -1.025_095_131_611_077_2e3;
const RB6: f64 = -4.835_191_916_086_514e2;
const SB1: f64 = 3.033_806_074_348_246e1;
const SB2: f64 = 3.257_925_129_965_739_2e2;
const SB3: f64 = 1.536_729_586_084_437e3;
const SB4: f64 = 3.199_858_219_508_595_5e3;
const SB5: f64 = 2.553_050_406_433_164_3e3;
const SB6: f64 = 4.745_285_412_069_553_7e2;
const SB7: f64 = -2.244_095_244_658_581_8e1;

const TINY: f64 = 1.387_778_780_781_445_7e-17; // 2^-56

/// Complementary error function, `erfc(x) = 1 - erf(x)`, accurate to a
/// couple of ulps in relative terms over the whole normal range.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::INFINITY {
        return 0.0;
    }
    if x == f64::NEG_INFINITY {
        return 2.0;
    }
    let sign = x < 0.0;
    let ax = x.abs();

    if ax < 0.84375 {
        let temp = if ax < TINY {
            ax
        } else {
            let z = ax * ax;
            let r = PP0 + z * (PP1 + z * (PP2 + z * (PP3 + z * PP4)));
            let s = 1.0 + z * (QQ1 + z * (QQ2 + z * (QQ3 + z * (QQ4 + z * QQ5))));
            let y = r / s;
            if ax < 0.25 {
                ax + ax * y
            } else {
                0.5 + (ax * y + (ax - 0.5))
            }
        };
        return if sign { 1.0 + temp } else { 1.0 - temp };
    }

    if ax < 1.25 {
        let s = ax - 1.0;
        let p = PA0 + s * (PA1 + s * (PA2 + s * (PA3 + s * (PA4 + s * (PA5 + s * PA6)))));
        let q = 1.0 + s * (QA1 + s * (QA2 + s * (QA3 + s * (QA4 + s * (QA5 + s * QA6)))));
        return if sign {
            1.0 + ERX + p / q
        } else {
            1.0 - ERX - p / q
        };
    }

    if ax < 28.0 {
        let z = 1.0 / (ax * ax);
        let (r, s) = if ax < 1.0 / 0.35 {
            (
                RA0 + z * (RA1 + z * (RA2 + z * (RA3 + z * (RA4 + z * (RA5 + z * (RA6 + z * RA7)))))),
                1.0 + z
                    * (SA1
                        + z * (SA2
                            + z * (SA3 + z * (SA4 + z * (SA5 + z * (SA6 + z * (SA7 + z * SA8))))))),
            )
        } else {
            if sign && ax > 6.0 {
                return 2.0;
            }
            (
                RB0 + z * (RB1 + z * (RB2 + z * (RB3 + z * (RB4 + z * (RB5 + z * RB6))))),
                1.0 + z
                    * (SB1 + z * (SB2 + z * (SB3 + z * (SB4 + z * (SB5 + z * (SB6 + z * SB7)))))),
            )
        };
        // Split ax into a 20-bit head so -head*head is exact.
        let head = f64::from_bits(ax.to_bits() & 0xffff_ffff_0000_0000);
        let v = (-head * head - 0.5625).exp() * ((head - ax) * (head + ax) + r / s).exp();
        return if sign { 2.0 - v / ax } else { v / ax };
    }

    if sign {
        2.0
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_rel(actual: f64, expected: f64, rel: f64) {
        let err = (actual - expected).abs() / expected.abs().max(f64::MIN_POSITIVE);
        assert!(
            err <= rel,
            "actual {actual:e}, expected {expected:e}, rel err {err:e} > {rel:e}"
        );
    }

    #[test]
    fn pdf_known_values() {
        assert_eq!(std_normal_pdf(0.0), 0.398_942_280_401_432_7);
        assert_rel(std_normal_pdf(2.0), 0.053_990_966_513_188_05, 1e-15);
        assert_eq!(std_normal_pdf(1.7), std_normal_pdf(-1.7));
    }

    #[test]
    fn q_known_values() {
        assert_eq!(q_function(0.0), 0.5);
        assert_rel(q_function(1.0), 0.158_655_253_931_457_05, 1e-14);
        assert_rel(q_function(2.0), 0.022_750_131_948_179_21, 1e-14);
        assert_rel(q_function(5.0), 2.866_515_718_791_939e-7, 1e-13);
        assert_rel(q_function(12.0), 1.776_482_112_077_679e-33, 1e-13);
        assert_rel(q_function(30.0), 4.906_713_927_148_187e-198, 1e-12);
        assert_rel(q_function(37.0), 5.725_571_222_524_577e-300, 1e-11);
    }

    #[test]
    fn q_far_tail_is_clean() {
        let q = q_function(40.0);
        assert!((0.0..=1e-300).contains(&q), "Q(40) = {q:e}");
        assert!(!q_function(1e4).is_nan());
    }

    #[test]
    fn tail_moment_known_values() {
        assert_eq!(tail_moment(0.0), 0.0);
        assert_rel(tail_moment(1.0), -0.083_315_470_587_686_3, 1e-13);
        assert_rel(tail_moment(2.0), -0.016_981_405_233_659_274, 1e-13);
        assert!(tail_moment(30.0).abs() < 1e-100);
    }

    #[test]
    fn tail_moment_series_switch_is_seamless() {
        // Direct branch just below the cutoff, series just above; both pinned
        // against an independent high-precision evaluation.
        assert_rel(tail_moment(25.0), -3.046_992_615_747_592e-138, 1e-10);
        assert_rel(tail_moment(26.0), -2.468_791_283_150_418e-149, 1e-12);
        assert_rel(tail_moment(27.0), -7.369_345_735_175_887e-161, 1e-12);
        assert_rel(tail_moment(37.0), -5.717_237_004_895_149e-300, 1e-9);
    }

    #[test]
    fn tail_moment_deriv_values() {
        assert_eq!(tail_moment_deriv(0.0, 1).unwrap(), -0.398_942_280_401_432_7);
        assert_eq!(tail_moment_deriv(0.0, 4).unwrap(), 0.0);
        assert_rel(
            tail_moment_deriv(1.0, 1).unwrap(),
            0.075_339_783_343_770_76,
            1e-13,
        );
        assert_rel(
            tail_moment_deriv(1.0, 3).unwrap(),
            -0.483_941_449_038_286_7,
            1e-14,
        );
        assert_rel(
            tail_moment_deriv(1.0, 4).unwrap(),
            0.967_882_898_076_573_4,
            1e-14,
        );
    }

    #[test]
    fn tail_moment_deriv_rejects_bad_order() {
        assert!(matches!(
            tail_moment_deriv(1.0, 0),
            Err(Error::InvalidDerivativeOrder(0))
        ));
        assert!(matches!(
            tail_moment_deriv(1.0, 5),
            Err(Error::InvalidDerivativeOrder(5))
        ));
    }

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy_nats(0.5).unwrap(), std::f64::consts::LN_2);
        assert_eq!(binary_entropy_nats(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy_nats(1.0).unwrap(), 0.0);
        assert_rel(
            binary_entropy_nats(0.1).unwrap(),
            0.325_082_973_391_448_26,
            1e-14,
        );
    }

    #[test]
    fn binary_entropy_rejects_out_of_range() {
        assert!(binary_entropy_nats(-0.1).is_err());
        assert!(binary_entropy_nats(1.1).is_err());
        assert!(binary_entropy_nats(f64::NAN).is_err());
    }
}
