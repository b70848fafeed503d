//! Independent checks on the direct solvers: the Born (Neumann) series of
//! the same linear systems, and residual substitution.

use num_complex::Complex64;

use crate::error::{Result, ScatterError};
use crate::foldy::build_system;
use crate::fourier::mode_system;
use crate::numerics::{norm_inf, ComplexMatrix, LinearSystem};
use crate::potential::{DeltaLineArray, FourierLinePotential, IncidentWave, Validate};

/// Power-iteration steps used for the contraction estimate.
pub const RATIO_STEPS: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct BornSeriesResult {
    /// x^{(0)} = b, x^{(1)}, …, one entry per term.
    pub partial_sums: Vec<Vec<Complex64>>,
    pub converged: bool,
    pub terms_used: usize,
    /// Growth factor per application of 𝓐 − I.
    pub estimated_ratio: f64,
}

impl BornSeriesResult {
    pub fn limit(&self) -> &[Complex64] {
        self.partial_sums.last().map(Vec::as_slice).unwrap_or(&[])
    }
}

fn perturbation(a: &ComplexMatrix) -> ComplexMatrix {
    let mut m = a.clone();
    for i in 0..m.rows().min(m.cols()) {
        m[(i, i)] -= 1.0;
    }
    m
}

/// (‖Mⁿv‖/‖v‖)^{1/n} for a fixed start vector, accumulated in logarithms.
pub fn contraction_estimate(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    if n == 0 {
        return 0.0;
    }
    let mut v: Vec<Complex64> = (0..n).map(|i| Complex64::new(1.0, 1.0 / (i + 2) as f64)).collect();
    let mut log_growth = 0.0;
    for _ in 0..RATIO_STEPS {
        let before = norm_inf(&v);
        let w = m.mul_vec(&v);
        let after = norm_inf(&w);
        if after == 0.0 || !after.is_finite() {
            return if after == 0.0 { 0.0 } else { f64::INFINITY };
        }
        log_growth += (after / before).ln();
        v = w.into_iter().map(|z| z / after).collect();
    }
    (log_growth / RATIO_STEPS as f64).exp()
}

/// Fixed-point iteration `x ← b − (𝓐 − I) x` from `x = b`, stopping once
/// successive iterates differ by less than `tol` in the ∞-norm. Never fails
/// on divergence; see [`BornSeriesResult::converged`].
pub fn neumann_iteration(system: &impl LinearSystem, max_terms: usize, tol: f64) -> Result<BornSeriesResult> {
    if max_terms == 0 || !(tol > 0.0) {
        return Err(ScatterError::OutOfRegime(format!(
            "need max_terms >= 1 and tol > 0, got {max_terms} and {tol}"
        )));
    }
    let b = system.rhs();
    let m = perturbation(system.matrix());
    if m.rows() != b.len() || !m.is_square() {
        return Err(ScatterError::DimensionMismatch(format!(
            "{}x{} matrix against rhs of length {}",
            m.rows(),
            m.cols(),
            b.len()
        )));
    }
    let estimated_ratio = contraction_estimate(&m);
    let mut partial_sums = vec![b.to_vec()];
    let mut converged = false;
    for _ in 0..max_terms {
        let x = partial_sums.last().expect("seeded with b");
        let next: Vec<Complex64> = m.mul_vec(x).iter().zip(b).map(|(mx, bi)| bi - mx).collect();
        let step: Vec<Complex64> = next.iter().zip(x).map(|(p, q)| p - q).collect();
        let diff = norm_inf(&step);
        partial_sums.push(next);
        if diff < tol {
            converged = true;
            break;
        }
        if !diff.is_finite() {
            break;
        }
    }
    Ok(BornSeriesResult {
        terms_used: partial_sums.len() - 1,
        partial_sums,
        converged,
        estimated_ratio,
    })
}

fn require_convergence(result: BornSeriesResult) -> Result<BornSeriesResult> {
    if result.converged {
        Ok(result)
    } else {
        Err(ScatterError::NotConverged {
            terms: result.terms_used,
            ratio: result.estimated_ratio,
        })
    }
}

pub fn born_series_foldy(
    array: &DeltaLineArray,
    wave: &IncidentWave,
    max_terms: usize,
    tol: f64,
) -> Result<BornSeriesResult> {
    let array = array.clone().validate()?;
    require_convergence(neumann_iteration(&build_system(&array, wave), max_terms, tol)?)
}

pub fn born_series_modes(
    potential: &FourierLinePotential,
    wave: &IncidentWave,
    max_terms: usize,
    tol: f64,
) -> Result<BornSeriesResult> {
    require_convergence(neumann_iteration(&mode_system(potential, wave)?, max_terms, tol)?)
}

/// `‖𝓐x − b‖∞ / max(1, ‖b‖∞)`.
pub fn residual_verify(system: &impl LinearSystem, solution: &[Complex64]) -> Result<f64> {
    let (a, b) = (system.matrix(), system.rhs());
    if a.cols() != solution.len() || a.rows() != b.len() {
        return Err(ScatterError::DimensionMismatch(format!(
            "{}x{} matrix, solution of length {}, rhs of length {}",
            a.rows(),
            a.cols(),
            solution.len(),
            b.len()
        )));
    }
    let residual: Vec<Complex64> = a.mul_vec(solution).iter().zip(b).map(|(ax, bi)| ax - bi).collect();
    Ok(norm_inf(&residual) / norm_inf(b).max(1.0))
}
