//! Ground-truth capacity of the amplitude-constrained AWGN channel via
//! Blahut-Arimoto on a discretized input alphabet.
//!
//! Every iterate carries a two-sided certificate: the mutual information of
//! the current input distribution is achievable on the discretized channel,
//! and the largest per-input relative entropy against the current output
//! distribution upper-bounds its capacity. The solver therefore stops with
//! a proven `upper - lower <= tol` sandwich.
//!
//! Plain multiplicative updates stall on an O(1/k) tail once the support
//! has nearly converged (neighboring grid points trade vanishing amounts of
//! mass), so the iteration periodically attempts an equalization boost: a
//! damped Newton solve of the equal-divergence conditions on the active
//! support. A boost is adopted only if it does not decrease the lower
//! certificate, which keeps the lower bound monotone and the certificate
//! semantics intact.

use rayon::prelude::*;

use crate::bounds::PowerLevel;
use crate::error::{Error, Result};
use crate::specfun::std_normal_pdf;

/// Margin, in noise standard deviations, that the output grid extends past
/// the input support. The contract requires at least eight.
const OUTPUT_MARGIN_SIGMAS: f64 = 12.0;
const REQUIRED_MARGIN_SIGMAS: f64 = 8.0;

/// Floor applied to output probabilities inside logarithms only.
const LOG_FLOOR: f64 = 1e-300;

/// Discretized channel: inputs uniform on `[-A, A]`, outputs on a uniform
/// quadrature grid, transition rows normalized to exact distributions.
#[derive(Debug, Clone)]
pub struct ChannelGrid {
    amplitude: f64,
    inputs: Vec<f64>,
    y_lo: f64,
    y_hi: f64,
    n_outputs: usize,
    kernel: Vec<f64>, // row-major, n_inputs x n_outputs
}

impl ChannelGrid {
    /// Builds the grid with the default 12-sigma output range.
    pub fn new(a: f64, n_inputs: usize, n_outputs: usize) -> Result<Self> {
        Self::with_range(
            a,
            n_inputs,
            n_outputs,
            -a - OUTPUT_MARGIN_SIGMAS,
            a + OUTPUT_MARGIN_SIGMAS,
        )
    }

    /// Builds the grid with an explicit output range, which must cover
    /// eight noise standard deviations past the support on both sides.
    pub fn with_range(
        a: f64,
        n_inputs: usize,
        n_outputs: usize,
        y_lo: f64,
        y_hi: f64,
    ) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "amplitude must be positive and finite, got {a}"
            )));
        }
        if n_inputs < 3 || n_inputs.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "n_inputs must be odd and at least 3, got {n_inputs}"
            )));
        }
        if n_outputs < 200 {
            return Err(Error::InvalidGrid(format!(
                "n_outputs must be at least 200, got {n_outputs}"
            )));
        }
        if y_lo > -a - REQUIRED_MARGIN_SIGMAS || y_hi < a + REQUIRED_MARGIN_SIGMAS {
            return Err(Error::InvalidGrid(format!(
                "output range [{y_lo}, {y_hi}] must cover [{}, {}]",
                -a - REQUIRED_MARGIN_SIGMAS,
                a + REQUIRED_MARGIN_SIGMAS
            )));
        }

        let dx = 2.0 * a / (n_inputs - 1) as f64;
        let inputs: Vec<f64> = (0..n_inputs)
            .map(|i| {
                if i == n_inputs - 1 {
                    a
                } else {
                    -a + dx * i as f64
                }
            })
            .collect();
        let dy = (y_hi - y_lo) / (n_outputs - 1) as f64;

        let mut kernel = vec![0.0; n_inputs * n_outputs];
        kernel
            .par_chunks_mut(n_outputs)
            .enumerate()
            .for_each(|(i, row)| {
                let x = inputs[i];
                for (j, w) in row.iter_mut().enumerate() {
                    // trapezoidal weights: half at the endpoints
                    let weight = if j == 0 || j == n_outputs - 1 { 0.5 } else { 1.0 };
                    *w = weight * std_normal_pdf(y_lo + dy * j as f64 - x);
                }
                let sum: f64 = row.iter().sum();
                let inv = 1.0 / sum;
                for w in row.iter_mut() {
                    *w *= inv;
                }
            });

        Ok(Self {
            amplitude: a,
            inputs,
            y_lo,
            y_hi,
            n_outputs,
            kernel,
        })
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn inputs(&self) -> &[f64] {
        &self.inputs
    }

    pub fn n_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn n_outputs(&self) -> usize {
        self.n_outputs
    }

    pub fn y_range(&self) -> (f64, f64) {
        (self.y_lo, self.y_hi)
    }

    pub fn kernel_row(&self, i: usize) -> &[f64] {
        &self.kernel[i * self.n_outputs..(i + 1) * self.n_outputs]
    }
}

/// Capacity estimate with its convergence certificate.
#[derive(Debug, Clone)]
pub struct CapacityEstimate {
    /// Reported capacity (the final achievable lower certificate), in nats.
    pub value_nats: f64,
    /// Mutual information of the final input distribution.
    pub lower_nats: f64,
    /// Largest per-input divergence against the final output distribution.
    pub upper_nats: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Final input distribution over the grid.
    pub input_distribution: Vec<f64>,
}

/// Blahut-Arimoto state exposing one iteration at a time, so callers can
/// observe the certificate trajectory.
pub struct BaSolver<'g> {
    grid: &'g ChannelGrid,
    row_neg_entropy: Vec<f64>,
    p: Vec<f64>,
    active: Vec<usize>,
    divergence: Vec<f64>,
    q: Vec<f64>,
    ln_q: Vec<f64>,
    lower: f64,
    upper: f64,
    iterations: usize,
    next_boost_at: usize,
}

const PRUNE_BELOW: f64 = 1e-18;
const BOOST_WARMUP: usize = 10;
const BOOST_RETRY_ACCEPTED: usize = 2;
const BOOST_RETRY_REJECTED: usize = 12;
const BOOST_SUPPORT_CAP: usize = 96;
const BOOST_TOP_MASS: usize = 32;

impl<'g> BaSolver<'g> {
    /// Starts from the uniform input distribution.
    pub fn new(grid: &'g ChannelGrid) -> Result<Self> {
        let n = grid.n_inputs();
        Self::with_distribution(grid, vec![1.0 / n as f64; n])
    }

    /// Starts from a caller-supplied distribution (for warm restarts on
    /// refined grids).
    pub fn with_distribution(grid: &'g ChannelGrid, p: Vec<f64>) -> Result<Self> {
        let n = grid.n_inputs();
        if p.len() != n || p.iter().any(|&v| !v.is_finite() || v < 0.0) {
            return Err(Error::InvalidGrid(
                "initial distribution must be a non-negative vector over the input grid".into(),
            ));
        }
        let sum: f64 = p.iter().sum();
        if sum <= 0.0 {
            return Err(Error::InvalidGrid("initial distribution sums to zero".into()));
        }
        let p: Vec<f64> = p.into_iter().map(|v| v / sum).collect();
        let row_neg_entropy = (0..n)
            .into_par_iter()
            .map(|i| {
                grid.kernel_row(i)
                    .iter()
                    .map(|&w| if w > 0.0 { w * w.ln() } else { 0.0 })
                    .sum()
            })
            .collect();
        let active = (0..n).filter(|&i| p[i] > 0.0).collect();
        let mut solver = Self {
            grid,
            row_neg_entropy,
            p,
            active,
            divergence: vec![0.0; n],
            q: vec![0.0; grid.n_outputs()],
            ln_q: vec![0.0; grid.n_outputs()],
            lower: 0.0,
            upper: 0.0,
            iterations: 0,
            next_boost_at: BOOST_WARMUP,
        };
        solver.refresh_certificate()?;
        Ok(solver)
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn distribution(&self) -> &[f64] {
        &self.p
    }

    /// Recomputes (q, ln q, per-row divergences, certificates) for `self.p`.
    fn refresh_certificate(&mut self) -> Result<()> {
        let n_out = self.grid.n_outputs();
        let chunk = n_out.div_ceil(4 * rayon::current_num_threads().max(1));

        // q = sum_i p_i K_i. Parallel over disjoint output chunks keeps the
        // summation order fixed, so results do not depend on scheduling.
        let active = &self.active;
        let p = &self.p;
        let grid = self.grid;
        self.q
            .par_chunks_mut(chunk)
            .enumerate()
            .for_each(|(ci, q_chunk)| {
                let start = ci * chunk;
                q_chunk.fill(0.0);
                for &i in active {
                    let pi = p[i];
                    let row = &grid.kernel_row(i)[start..start + q_chunk.len()];
                    for (qv, &wv) in q_chunk.iter_mut().zip(row) {
                        *qv += pi * wv;
                    }
                }
            });

        self.ln_q
            .par_chunks_mut(chunk)
            .zip(self.q.par_chunks(chunk))
            .for_each(|(lnc, qc)| {
                for (l, &qv) in lnc.iter_mut().zip(qc) {
                    *l = qv.max(LOG_FLOOR).ln();
                }
            });

        let ln_q = &self.ln_q;
        let row_neg_entropy = &self.row_neg_entropy;
        self.divergence
            .par_iter_mut()
            .enumerate()
            .for_each(|(i, d)| {
                let dot: f64 = grid
                    .kernel_row(i)
                    .iter()
                    .zip(ln_q)
                    .map(|(&w, &l)| w * l)
                    .sum();
                *d = row_neg_entropy[i] - dot;
            });

        let lower: f64 = self.active.iter().map(|&i| self.p[i] * self.divergence[i]).sum();
        let upper = self
            .divergence
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        if !lower.is_finite() || !upper.is_finite() {
            return Err(Error::NumericalDegeneracy(format!(
                "non-finite certificate (lower {lower}, upper {upper})"
            )));
        }
        self.lower = lower;
        self.upper = upper;
        Ok(())
    }

    /// One iteration: either an accepted equalization boost or a standard
    /// multiplicative update. The lower certificate never decreases beyond
    /// rounding noise.
    pub fn step(&mut self) -> Result<()> {
        self.iterations += 1;

        if self.iterations >= self.next_boost_at {
            if let Some(candidate) = self.equalization_boost() {
                let saved_p = std::mem::replace(&mut self.p, candidate);
                let saved_active = std::mem::replace(
                    &mut self.active,
                    (0..self.p.len()).filter(|&i| self.p[i] > 0.0).collect(),
                );
                let saved_div = self.divergence.clone();
                let saved_q = self.q.clone();
                let saved_ln_q = self.ln_q.clone();
                let saved = (self.lower, self.upper);
                self.refresh_certificate()?;
                if self.lower >= saved.0 {
                    self.next_boost_at = self.iterations + BOOST_RETRY_ACCEPTED;
                    return Ok(());
                }
                // Boost rejected: restore the snapshot and fall through to
                // a plain multiplicative step.
                self.p = saved_p;
                self.active = saved_active;
                self.divergence = saved_div;
                self.q = saved_q;
                self.ln_q = saved_ln_q;
                self.lower = saved.0;
                self.upper = saved.1;
                self.next_boost_at = self.iterations + BOOST_RETRY_REJECTED;
            } else {
                self.next_boost_at = self.iterations + BOOST_RETRY_REJECTED;
            }
        }

        let upper = self.upper;
        let mut sum = 0.0;
        for &i in &self.active {
            let updated = self.p[i] * (self.divergence[i] - upper).exp();
            self.p[i] = updated;
            sum += updated;
        }
        if sum.is_nan() || sum <= 0.0 {
            return Err(Error::NumericalDegeneracy(
                "input distribution collapsed during the multiplicative update".into(),
            ));
        }
        let inv = 1.0 / sum;
        let mut still_active = Vec::with_capacity(self.active.len());
        for &i in &self.active {
            self.p[i] *= inv;
            if self.p[i] > PRUNE_BELOW {
                still_active.push(i);
            } else {
                self.p[i] = 0.0;
            }
        }
        let renorm: f64 = still_active.iter().map(|&i| self.p[i]).sum();
        let inv = 1.0 / renorm;
        for &i in &still_active {
            self.p[i] *= inv;
        }
        self.active = still_active;
        self.refresh_certificate()
    }

    /// Picks the candidate support for a boost: local maxima of the
    /// divergence profile (the emerging mass-point locations) plus the
    /// heaviest current inputs, capped by divergence rank.
    fn boost_support(&self) -> Vec<usize> {
        let n = self.p.len();
        let d = &self.divergence;
        let mut support: Vec<usize> = (0..n)
            .filter(|&i| {
                let left_ok = i == 0 || d[i] >= d[i - 1];
                let right_ok = i == n - 1 || d[i] >= d[i + 1];
                left_ok && right_ok
            })
            .collect();
        let mut by_mass: Vec<usize> = self.active.clone();
        by_mass.sort_unstable_by(|&a, &b| self.p[b].partial_cmp(&self.p[a]).unwrap());
        support.extend(by_mass.into_iter().take(BOOST_TOP_MASS));
        support.sort_unstable();
        support.dedup();
        if support.len() > BOOST_SUPPORT_CAP {
            support.sort_unstable_by(|&a, &b| d[b].partial_cmp(&d[a]).unwrap());
            support.truncate(BOOST_SUPPORT_CAP);
            support.sort_unstable();
        }
        support
    }

    /// Active-set Newton solve of the equal-divergence conditions on the
    /// boost support. Steps exactly to the first weight that hits zero and
    /// drops it, so a few outer rounds reach the equalized optimum.
    /// Returns a candidate distribution over the full grid.
    fn equalization_boost(&self) -> Option<Vec<f64>> {
        let mut support = self.boost_support();
        if support.len() < 2 {
            return None;
        }
        let n_out = self.grid.n_outputs();
        let seed = 1e-6 / support.len() as f64;
        let mut weights: Vec<f64> = support.iter().map(|&i| self.p[i].max(seed)).collect();
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);

        let mut q = vec![0.0; n_out];
        for _ in 0..60 {
            let m = support.len();
            q.fill(0.0);
            for (s, &i) in support.iter().enumerate() {
                let w = weights[s];
                for (qv, &kv) in q.iter_mut().zip(self.grid.kernel_row(i)) {
                    *qv += w * kv;
                }
            }
            let ln_q: Vec<f64> = q.iter().map(|&v| v.max(LOG_FLOOR).ln()).collect();
            let inv_q: Vec<f64> = q.iter().map(|&v| 1.0 / v.max(LOG_FLOOR)).collect();

            let div: Vec<f64> = support
                .par_iter()
                .map(|&i| {
                    let dot: f64 = self
                        .grid
                        .kernel_row(i)
                        .iter()
                        .zip(&ln_q)
                        .map(|(&w, &l)| w * l)
                        .sum();
                    self.row_neg_entropy[i] - dot
                })
                .collect();

            // Gram matrix G_st = sum_j K_s K_t / q
            let gram: Vec<f64> = (0..m * m)
                .into_par_iter()
                .map(|idx| {
                    let (s, t) = (idx / m, idx % m);
                    if s > t {
                        return 0.0;
                    }
                    self.grid
                        .kernel_row(support[s])
                        .iter()
                        .zip(self.grid.kernel_row(support[t]))
                        .zip(&inv_q)
                        .map(|((&a, &b), &iq)| a * b * iq)
                        .sum()
                })
                .collect();

            // Bordered system: [G 1; 1^T 0] [delta; nu] = [div; 0]
            let dim = m + 1;
            let mut mat = vec![0.0; dim * dim];
            for s in 0..m {
                for t in 0..m {
                    let v = if s <= t { gram[s * m + t] } else { gram[t * m + s] };
                    mat[s * dim + t] = v;
                }
                mat[s * dim + s] += 1e-13;
                mat[s * dim + m] = 1.0;
                mat[m * dim + s] = 1.0;
            }
            let mut rhs: Vec<f64> = div.clone();
            rhs.push(0.0);
            let delta = match solve_dense(&mut mat, &mut rhs, dim) {
                Some(solution) => solution[..m].to_vec(),
                None => break,
            };

            // Step to the first weight that would cross zero; full Newton
            // step when none does.
            let mut t_step: f64 = 1.0;
            for (s, &d) in delta.iter().enumerate() {
                if d < 0.0 {
                    t_step = t_step.min(-weights[s] / d);
                }
            }
            let mut max_move: f64 = 0.0;
            for (s, &d) in delta.iter().enumerate() {
                weights[s] = (weights[s] + t_step * d).max(0.0);
                max_move = max_move.max((t_step * d).abs());
            }
            let mut dropped = false;
            let mut s = 0;
            while s < weights.len() {
                if weights[s] <= 1e-14 {
                    weights.remove(s);
                    support.remove(s);
                    dropped = true;
                } else {
                    s += 1;
                }
            }
            if support.len() < 2 {
                return None;
            }
            let total: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|w| *w /= total);
            if !dropped && max_move < 1e-13 {
                break;
            }
        }

        let mut candidate = vec![0.0; self.grid.n_inputs()];
        for (s, &i) in support.iter().enumerate() {
            candidate[i] = weights[s];
        }
        Some(candidate)
    }
}

/// Dense LU solve with partial pivoting; overwrites its inputs. Returns the
/// solution or None when the matrix is numerically singular.
fn solve_dense(mat: &mut [f64], rhs: &mut [f64], n: usize) -> Option<Vec<f64>> {
    for col in 0..n {
        let mut pivot = col;
        let mut best = mat[col * n + col].abs();
        for row in col + 1..n {
            let v = mat[row * n + col].abs();
            if v > best {
                best = v;
                pivot = row;
            }
        }
        if best < 1e-280 {
            return None;
        }
        if pivot != col {
            for k in 0..n {
                mat.swap(col * n + k, pivot * n + k);
            }
            rhs.swap(col, pivot);
        }
        let inv = 1.0 / mat[col * n + col];
        for row in col + 1..n {
            let factor = mat[row * n + col] * inv;
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                mat[row * n + k] -= factor * mat[col * n + k];
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for k in row + 1..n {
            acc -= mat[row * n + k] * x[k];
        }
        x[row] = acc / mat[row * n + row];
    }
    if x.iter().all(|v| v.is_finite()) {
        Some(x)
    } else {
        None
    }
}

/// Runs the certified iteration until `upper - lower <= tol` or `max_iter`.
/// Non-convergence is reported through the `converged` flag, not an error.
pub fn blahut_arimoto(
    grid: &ChannelGrid,
    tol: f64,
    max_iter: usize,
) -> Result<CapacityEstimate> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidGrid(format!("tolerance must be positive, got {tol}")));
    }
    let mut solver = BaSolver::new(grid)?;
    run_to_tolerance(&mut solver, tol, max_iter)
}

fn run_to_tolerance(
    solver: &mut BaSolver<'_>,
    tol: f64,
    max_iter: usize,
) -> Result<CapacityEstimate> {
    let converged = loop {
        if solver.gap() <= tol {
            break true;
        }
        if solver.iterations() >= max_iter {
            break false;
        }
        solver.step()?;
    };
    Ok(CapacityEstimate {
        value_nats: solver.lower(),
        lower_nats: solver.lower(),
        upper_nats: solver.upper(),
        iterations: solver.iterations(),
        converged,
        input_distribution: solver.distribution().to_vec(),
    })
}

const CAPACITY_MAX_ITER: usize = 20_000;
const MAX_REFINEMENTS: usize = 4;

/// Auto-sized capacity oracle: picks grid resolutions from the amplitude,
/// then doubles them until two successive runs agree within
/// `max(tol, 1e-6)` nats (at most four doublings).
pub fn capacity(a: f64, tol: f64) -> Result<CapacityEstimate> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::InvalidGrid(format!(
            "amplitude must be positive and finite, got {a}"
        )));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidGrid(format!("tolerance must be positive, got {tol}")));
    }
    let mut n_inputs = (((50.0 * a).ceil() as usize) | 1).max(201);
    let mut n_outputs = ((400.0 * (a + 16.0)).ceil() as usize).max(4000);
    let agreement = tol.max(1e-6);

    let grid = ChannelGrid::new(a, n_inputs, n_outputs)?;
    let mut estimate = blahut_arimoto(&grid, tol, CAPACITY_MAX_ITER)?;
    drop(grid);

    for _ in 0..MAX_REFINEMENTS {
        let next_inputs = 2 * n_inputs - 1;
        let next_outputs = 2 * n_outputs;
        let fine = ChannelGrid::new(a, next_inputs, next_outputs)?;

        // Warm start: place the coarse solution on the nested fine grid and
        // blend with a little uniform mass so new points stay reachable.
        let uniform = 0.1 / next_inputs as f64;
        let mut p0 = vec![uniform; next_inputs];
        for (i, &mass) in estimate.input_distribution.iter().enumerate() {
            p0[2 * i] += 0.9 * mass;
        }
        let mut solver = BaSolver::with_distribution(&fine, p0)?;
        let refined = run_to_tolerance(&mut solver, tol, CAPACITY_MAX_ITER)?;

        let agreed = (refined.value_nats - estimate.value_nats).abs() <= agreement;
        let both_converged = estimate.converged && refined.converged;
        n_inputs = next_inputs;
        n_outputs = next_outputs;
        estimate = refined;
        if agreed && both_converged {
            return Ok(estimate);
        }
    }
    estimate.converged = false;
    Ok(estimate)
}

/// Energy per bit over noise spectral density, in dB, with unit-variance
/// real noise (N0 = 2): `10 log10(P / (2 C_bits))`.
pub fn eb_n0_db(p: PowerLevel, c_bits: f64) -> Result<f64> {
    if !(c_bits.is_finite() && c_bits > 0.0) {
        return Err(Error::InvalidCapacityBits(c_bits));
    }
    Ok(10.0 * (p.linear() / (2.0 * c_bits)).log10())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(ChannelGrid::new(1.0, 4, 2000).is_err(), "even n_inputs");
        assert!(ChannelGrid::new(1.0, 1, 2000).is_err());
        assert!(ChannelGrid::new(1.0, 3, 100).is_err());
        assert!(ChannelGrid::new(0.0, 3, 2000).is_err());
        assert!(ChannelGrid::with_range(1.0, 3, 2000, -5.0, 9.0).is_err());
    }

    #[test]
    fn small_grid_shape() {
        let grid = ChannelGrid::new(1.0, 3, 2000).unwrap();
        assert_eq!(grid.inputs(), &[-1.0, 0.0, 1.0]);
        for i in 0..3 {
            let sum: f64 = grid.kernel_row(i).iter().sum();
            assert!((sum - 1.0).abs() < 1e-9, "row {i} sums to {sum}");
        }
        // center row symmetric about y = 0
        let row = grid.kernel_row(1);
        for j in 0..row.len() / 2 {
            assert!((row[j] - row[row.len() - 1 - j]).abs() < 1e-12);
        }
    }

    #[test]
    fn coverage_rule() {
        let grid = ChannelGrid::new(2.0, 101, 4000).unwrap();
        let (lo, hi) = grid.y_range();
        assert!(lo <= -10.0 && hi >= 10.0);
    }

    #[test]
    fn tiny_amplitude_capacity_is_below_shannon() {
        let grid = ChannelGrid::new(1e-3, 3, 2000).unwrap();
        let est = blahut_arimoto(&grid, 1e-9, 10_000).unwrap();
        assert!(est.converged);
        let shannon = 0.5 * (1e-6f64).ln_1p();
        assert!(est.value_nats <= shannon + 1e-9);
        assert!(est.value_nats >= 0.0);
    }

    #[test]
    fn certificate_sandwich_holds() {
        let grid = ChannelGrid::new(0.5, 51, 2000).unwrap();
        let est = blahut_arimoto(&grid, 1e-8, 10_000).unwrap();
        assert!(est.converged);
        assert!(est.lower_nats <= est.value_nats);
        assert!(est.value_nats <= est.upper_nats);
        assert!(est.upper_nats - est.lower_nats <= 1e-8);
        let mass: f64 = est.input_distribution.iter().sum();
        assert!((mass - 1.0).abs() < 1e-12);
        assert!(est.input_distribution.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn eb_n0_values() {
        let p2 = PowerLevel::new(2.0).unwrap();
        assert!((eb_n0_db(p2, 0.5).unwrap() - 3.010_299_956_639_812).abs() < 1e-12);
        let p1 = PowerLevel::new(1.0).unwrap();
        assert_eq!(eb_n0_db(p1, 0.5).unwrap(), 0.0);
        assert!(eb_n0_db(p1, 0.0).is_err());
        assert!(eb_n0_db(p1, -1.0).is_err());
    }

    #[test]
    fn dense_solver_small_system() {
        // 2x2: [[2, 1], [1, 3]] x = [5, 10] -> x = [1, 3]
        let mut mat = vec![2.0, 1.0, 1.0, 3.0];
        let mut rhs = vec![5.0, 10.0];
        let x = solve_dense(&mut mat, &mut rhs, 2).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12);
        assert!((x[1] - 3.0).abs() < 1e-12);
    }
}
