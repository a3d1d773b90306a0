//! One-dimensional golden-section search, used for the tail-variance
//! optimality checks and to polish grid optima in the min-max bound.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9; // (sqrt(5) - 1) / 2

/// Minimizes `f` over `[lo, hi]`, shrinking the bracket until its width is
/// at most `xtol`. Returns `(argmin, min)`.
pub fn golden_section_min<F: Fn(f64) -> f64>(
    f: &F,
    mut lo: f64,
    mut hi: f64,
    xtol: f64,
    max_iter: usize,
) -> Result<(f64, f64)> {
    assert!(lo < hi, "empty bracket");
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..max_iter {
        if hi - lo <= xtol {
            let (x, fx) = if f1 < f2 { (x1, f1) } else { (x2, f2) };
            return Ok((x, fx));
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    Err(Error::OptimizationFailure)
}

/// Maximizes `f` over `[lo, hi]`; returns `(argmax, max)`.
pub fn golden_section_max<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    xtol: f64,
    max_iter: usize,
) -> Result<(f64, f64)> {
    let (x, neg) = golden_section_min(&|x| -f(x), lo, hi, xtol, max_iter)?;
    Ok((x, -neg))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_minimum() {
        let (x, fx) = golden_section_min(&|x: f64| (x - 0.2) * (x - 0.2), -1.0, 1.0, 1e-10, 200)
            .unwrap();
        assert!((x - 0.2).abs() < 1e-9);
        assert!(fx < 1e-18);
    }

    #[test]
    fn boundary_maximum() {
        let (x, fx) = golden_section_max(&|x: f64| x, 0.0, 1.0, 1e-9, 200).unwrap();
        assert!((x - 1.0).abs() < 1e-8);
        assert!((fx - 1.0).abs() < 1e-8);
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        assert!(matches!(
            golden_section_min(&|x: f64| x * x, -1.0, 1.0, 1e-12, 3),
            Err(Error::OptimizationFailure)
        ));
    }
}
