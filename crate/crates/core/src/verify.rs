//! Self-check suites behind `ampcap verify` and the acceptance tests: each
//! suite sweeps one proved property over a dense grid and reports its worst
//! margin (negative margin = violation).

use rayon::prelude::*;

use crate::bounds::{
    regime_bound, shannon_bound, sigma2_star, tail_refinement_at, theorem_bound, PowerLevel,
};
use crate::error::Result;
use crate::optim::golden_section_min;
use crate::specfun::{q_function, std_normal_pdf, tail_moment, tail_moment_deriv};
use crate::testdensity::{tail_moment_gap, TestDensity};

/// Outcome of one property suite.
#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    /// Smallest slack observed; the property demands it stay non-negative.
    pub worst_margin: f64,
    pub detail: String,
}

impl SuiteResult {
    fn from_margin(name: &'static str, worst_margin: f64, detail: String) -> Self {
        Self {
            name,
            passed: worst_margin >= 0.0,
            worst_margin,
            detail,
        }
    }
}

/// Report over all suites.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }
}

impl std::fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for s in &self.suites {
            writeln!(
                f,
                "{} {:<28} worst margin {:+.3e}  {}",
                if s.passed { "PASS" } else { "FAIL" },
                s.name,
                s.worst_margin,
                s.detail
            )?;
        }
        Ok(())
    }
}

fn min_margin(values: impl Iterator<Item = (f64, f64)>) -> (f64, f64) {
    let mut worst = (f64::INFINITY, f64::NAN);
    for (margin, at) in values {
        if margin < worst.0 {
            worst = (margin, at);
        }
    }
    worst
}

/// g(u) < 0 on (0, 10]; margin is -g(u).
pub fn suite_tail_moment_negative() -> SuiteResult {
    let (worst, at) = min_margin((1..=1000).map(|k| {
        let u = 0.01 * k as f64;
        (-tail_moment(u), u)
    }));
    SuiteResult::from_margin("tail-moment-negative", worst, format!("tightest at u = {at:.2}"))
}

/// g'(u) >= 0 on [1, 10].
pub fn suite_tail_moment_monotone() -> SuiteResult {
    let (worst, at) = min_margin((100..=1000).map(|k| {
        let u = 0.01 * k as f64;
        (tail_moment_deriv(u, 1).unwrap(), u)
    }));
    SuiteResult::from_margin("tail-moment-monotone", worst, format!("tightest at u = {at:.2}"))
}

/// Fourth derivative u(5 - u^2) psi(u) > 0 on (0, sqrt 5), zero at u = 0.
pub fn suite_fourth_derivative() -> SuiteResult {
    let sqrt5 = 5f64.sqrt();
    let mut points: Vec<f64> = (1..)
        .map(|k| 0.01 * k as f64)
        .take_while(|&u| u < sqrt5)
        .collect();
    points.push(sqrt5 - 1e-9);
    let (worst, at) = min_margin(
        points
            .iter()
            .map(|&u| (tail_moment_deriv(u, 4).unwrap(), u)),
    );
    let at_zero = tail_moment_deriv(0.0, 4).unwrap();
    let worst = if at_zero == 0.0 { worst } else { -at_zero.abs() };
    SuiteResult::from_margin("fourth-derivative-positive", worst, format!("tightest at u = {at:.3}"))
}

/// x Q(x) < psi(x) and Q(x) > x psi(x) / (1 + x^2) on (0, 10].
pub fn suite_tail_inequalities() -> SuiteResult {
    let (worst, at) = min_margin((1..=1000).flat_map(|k| {
        let x = 0.01 * k as f64;
        let upper = std_normal_pdf(x) - x * q_function(x);
        let lower = q_function(x) - x * std_normal_pdf(x) / (1.0 + x * x);
        [(upper, x), (lower, x)]
    }));
    SuiteResult::from_margin("gaussian-tail-inequalities", worst, format!("tightest at x = {at:.2}"))
}

/// Splitting inequality g(a-x) + g(a+x) <= g(2a) on the 100 x 201 grid,
/// with slack -1e-12, plus exact equality at the endpoint.
pub fn suite_lemma_sweep() -> SuiteResult {
    let mut worst = f64::INFINITY;
    let mut at = (0.0, 0.0);
    let mut endpoint_worst = 0.0f64;
    for k in 1..=100 {
        let a = 0.05 * k as f64;
        for j in 0..=200 {
            let x = a * j as f64 / 200.0;
            let gap = tail_moment_gap(a, x).unwrap();
            let margin = gap + 1e-12;
            if margin < worst {
                worst = margin;
                at = (a, x);
            }
        }
        endpoint_worst = endpoint_worst.max(tail_moment_gap(a, a).unwrap().abs());
    }
    let endpoint_margin = 1e-13 - endpoint_worst;
    SuiteResult::from_margin(
        "tail-moment-splitting",
        worst.min(endpoint_margin),
        format!(
            "tightest at (a, x) = ({:.2}, {:.3}); endpoint |gap| = {endpoint_worst:.1e}",
            at.0, at.1
        ),
    )
}

/// Closed-form KL equals quadrature within 1e-7 over the 625-point grid
/// (A, x/A, beta, sigma2) in [0.2, 5] x [0, 1] x [0.1, 0.9] x [0.7, 1.3].
pub fn suite_kl_closed_vs_quadrature() -> Result<SuiteResult> {
    let amplitudes = [0.2, 1.4, 2.6, 3.8, 5.0];
    let fractions = [0.0, 0.25, 0.5, 0.75, 1.0];
    let betas = [0.1, 0.3, 0.5, 0.7, 0.9];
    let sigma2s = [0.7, 0.85, 1.0, 1.15, 1.3];
    let mut cases = Vec::with_capacity(625);
    for &a in &amplitudes {
        for &fx in &fractions {
            for &b in &betas {
                for &s2 in &sigma2s {
                    cases.push((a, fx * a, b, s2));
                }
            }
        }
    }
    let diffs: Vec<(f64, (f64, f64, f64, f64))> = cases
        .par_iter()
        .map(|&(a, x, b, s2)| {
            let density = TestDensity::new(a, b, s2)?;
            let closed = density.kl_closed_form(x)?;
            let numeric = density.kl_quadrature(x)?;
            Ok(((closed - numeric).abs(), (a, x, b, s2)))
        })
        .collect::<Result<_>>()?;
    let (worst_diff, at) = diffs
        .into_iter()
        .max_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
        .unwrap();
    Ok(SuiteResult::from_margin(
        "kl-closed-vs-quadrature",
        1e-7 - worst_diff,
        format!(
            "worst |closed - quadrature| = {worst_diff:.2e} at (A, x, beta, s2) = {at:?}"
        ),
    ))
}

/// Numeric 1-D minimization of the refinement over sigma2 in [0.5, 1.5]
/// matches the analytic optimizer within 1e-6 and its value within 1e-10,
/// across the -30..40 dB grid.
pub fn suite_sigma2_optimality() -> Result<SuiteResult> {
    let ps: Vec<f64> = crate::sweep::grid_db(-30.0, 40.0, 0.1);
    let results: Vec<(f64, f64, f64)> = ps
        .par_iter()
        .map(|&p_db| {
            let p = PowerLevel::from_db(p_db)?;
            let analytic = sigma2_star(p)?;
            let w_analytic = tail_refinement_at(p, analytic);
            let (argmin, min_val) =
                golden_section_min(&|s2| tail_refinement_at(p, s2), 0.5, 1.5, 1e-9, 400)?;
            Ok((p_db, (argmin - analytic).abs(), (min_val - w_analytic).abs()))
        })
        .collect::<Result<_>>()?;
    let worst_arg = results
        .iter()
        .cloned()
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap();
    let worst_val = results
        .iter()
        .cloned()
        .max_by(|a, b| a.2.partial_cmp(&b.2).unwrap())
        .unwrap();
    let margin = (1e-6 - worst_arg.1).min(1e-10 - worst_val.2);
    Ok(SuiteResult::from_margin(
        "tail-variance-optimality",
        margin,
        format!(
            "worst |argmin - sigma2*| = {:.2e} at {:.1} dB; worst value diff = {:.2e} at {:.1} dB",
            worst_arg.1, worst_arg.0, worst_val.2, worst_val.0
        ),
    ))
}

/// Central differences of g reproduce the first two derivative orders
/// within 1e-6 on [0, 5]. The second difference divides by h^2, so its
/// step is widened to 1e-4 to stay clear of the f64 rounding floor
/// (4 eps |g| / h^2 ~ 2e-6 at h = 1e-5); truncation there is ~1e-9.
pub fn suite_derivative_consistency() -> SuiteResult {
    const H1: f64 = 1e-5;
    const H2: f64 = 1e-4;
    let (worst, at) = min_margin((0..=500).flat_map(|k| {
        let u = 0.01 * k as f64;
        let d1 = (tail_moment(u + H1) - tail_moment(u - H1)) / (2.0 * H1);
        let d2 =
            (tail_moment(u + H2) - 2.0 * tail_moment(u) + tail_moment(u - H2)) / (H2 * H2);
        let e1 = (d1 - tail_moment_deriv(u, 1).unwrap()).abs();
        let e2 = (d2 - tail_moment_deriv(u, 2).unwrap()).abs();
        [(1e-6 - e1, u), (1e-6 - e2, u)]
    }));
    SuiteResult::from_margin(
        "derivative-consistency",
        worst,
        format!("tightest at u = {at:.2}"),
    )
}

/// Q(x) + Q(-x) = 1 within 1e-14 on [-8, 8].
pub fn suite_q_symmetry() -> SuiteResult {
    let (worst, at) = min_margin((-800..=800).map(|k| {
        let x = 0.01 * k as f64;
        (1e-14 - (q_function(x) + q_function(-x) - 1.0).abs(), x)
    }));
    SuiteResult::from_margin("q-function-symmetry", worst, format!("tightest at x = {at:.2}"))
}

/// Refinement is non-positive, never beats g(2 sqrt P)/2, and the combined
/// bound chain refined <= thangaraj-form <= mckellips-form holds on the
/// -30..40 dB grid (1e-12 slack).
pub fn suite_dominance() -> Result<SuiteResult> {
    let ps = crate::sweep::grid_db(-30.0, 40.0, 0.1);
    let mut worst = f64::INFINITY;
    let mut at = (f64::NAN, "");
    let mut check = |margin: f64, p_db: f64, label: &'static str| {
        if margin < worst {
            worst = margin;
            at = (p_db, label);
        }
    };
    for &p_db in &ps {
        let p = PowerLevel::from_db(p_db)?;
        let bp = theorem_bound(p)?;
        let shannon = shannon_bound(p);
        let (prior, _) = regime_bound(p);
        check(-bp.refinement_nats, p_db, "refinement sign");
        check(
            tail_moment(2.0 * p.amplitude()) / 2.0 + 1e-12 - bp.refinement_nats,
            p_db,
            "refinement vs unit variance",
        );
        check(prior - bp.theorem_nats, p_db, "refined below prior");
        let combined_prior = prior.min(shannon);
        let combined_mck = bp.mckellips_nats.min(shannon);
        check(
            combined_prior - bp.combined_nats + 1e-12,
            p_db,
            "combined chain (refined vs prior)",
        );
        check(
            combined_mck - combined_prior + 1e-12,
            p_db,
            "combined chain (prior vs mckellips)",
        );
        check(bp.sigma2, p_db, "sigma2 positive");
        check(1.0 - bp.sigma2, p_db, "sigma2 at most one");
        check(bp.beta, p_db, "beta non-negative");
        check(0.5 - bp.beta, p_db, "beta below one half");
    }
    Ok(SuiteResult::from_margin(
        "bound-dominance",
        worst,
        format!("tightest: {} at {:.1} dB", at.1, at.0),
    ))
}

/// log s + 1/s - 1 >= 0 on (0, 3], equality only at s = 1.
pub fn suite_penalty_positivity() -> SuiteResult {
    let mut worst = f64::INFINITY;
    let mut at = f64::NAN;
    for k in 1..=300 {
        let s = 0.01 * k as f64;
        let v = s.ln() + 1.0 / s - 1.0;
        let margin = if (s - 1.0).abs() < 1e-12 { -v.abs() } else { v };
        if margin < worst {
            worst = margin;
            at = s;
        }
    }
    SuiteResult::from_margin(
        "variance-penalty-positive",
        worst,
        format!("tightest at sigma2 = {at:.2}"),
    )
}

/// Q(A - x) + Q(A + x) is nondecreasing on x in [0, A].
pub fn suite_q_sum_monotone() -> SuiteResult {
    let mut worst = f64::INFINITY;
    let mut at = (f64::NAN, f64::NAN);
    for &a in &[0.5, 1.0, 2.0, 4.0] {
        let mut previous = f64::NEG_INFINITY;
        for j in 0..=400 {
            let x = a * j as f64 / 400.0;
            let s = q_function(a - x) + q_function(a + x);
            if j > 0 {
                let margin = s - previous + 1e-15;
                if margin < worst {
                    worst = margin;
                    at = (a, x);
                }
            }
            previous = s;
        }
    }
    SuiteResult::from_margin(
        "q-sum-monotone",
        worst,
        format!("tightest at (A, x) = ({}, {:.3})", at.0, at.1),
    )
}

/// Runs every suite.
pub fn run_all() -> Result<VerifyReport> {
    let suites = vec![
        suite_tail_moment_negative(),
        suite_tail_moment_monotone(),
        suite_fourth_derivative(),
        suite_tail_inequalities(),
        suite_lemma_sweep(),
        suite_kl_closed_vs_quadrature()?,
        suite_sigma2_optimality()?,
        suite_derivative_consistency(),
        suite_q_symmetry(),
        suite_dominance()?,
        suite_penalty_positivity(),
        suite_q_sum_monotone(),
    ];
    Ok(VerifyReport { suites })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_suites_pass() {
        assert!(suite_tail_moment_negative().passed);
        assert!(suite_tail_moment_monotone().passed);
        assert!(suite_fourth_derivative().passed);
        assert!(suite_tail_inequalities().passed);
        assert!(suite_lemma_sweep().passed);
        assert!(suite_derivative_consistency().passed);
        assert!(suite_q_symmetry().passed);
        assert!(suite_penalty_positivity().passed);
        assert!(suite_q_sum_monotone().passed);
    }
}
