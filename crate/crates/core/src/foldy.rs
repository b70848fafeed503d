//! Finite arrays of point interactions on a line.
//!
//! The field values `x_n` at the scatterer positions satisfy the Foldy system
//! `Σ_n A_mn x_n = b_m` with `A_mn = δ_mn + (i/4) 𝔷_n J0(k(a_m − a_n))` and
//! `b_m = exp(i a_m p0)`; the amplitude is then
//! `f(θ) = −(2√(2π))⁻¹ Σ 𝔷_n x_n exp(−i a_n k sin θ)`.
//! `A` does not depend on the incidence angle, so neither do the spectral
//! singularities (real k where det A = 0).

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Result, ScatterError};
use crate::numerics::{
    determinant, j0, solve_identity_plus, ComplexMatrix, LinearSystem, ScaledDeterminant, SolveReport,
};
use crate::potential::{DeltaLineArray, IncidentWave, Validate};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Default ratio of |det| to the scan median below which a local minimum is
/// reported as a singularity candidate.
pub const DEFAULT_SINGULARITY_THRESHOLD: f64 = 1e-8;

const CLOSED_FORM_THRESHOLD: f64 = 1e-14;

fn amplitude_prefactor() -> f64 {
    -1.0 / (2.0 * (2.0 * PI).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoldySystem {
    pub matrix: ComplexMatrix,
    pub rhs: Vec<Complex64>,
    pub k: f64,
    pub p0: f64,
}

impl LinearSystem for FoldySystem {
    fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    fn rhs(&self) -> &[Complex64] {
        &self.rhs
    }
}

fn foldy_matrix(array: &DeltaLineArray, k: f64) -> ComplexMatrix {
    let a = &array.positions;
    ComplexMatrix::from_fn(array.len(), array.len(), |m, n| {
        let coupling = 0.25 * I * array.couplings[n] * j0(k * (a[m] - a[n]));
        if m == n {
            coupling + 1.0
        } else {
            coupling
        }
    })
}

pub fn build_system(array: &DeltaLineArray, wave: &IncidentWave) -> FoldySystem {
    let p0 = wave.p0();
    FoldySystem {
        matrix: foldy_matrix(array, wave.k()),
        rhs: array
            .positions
            .iter()
            .map(|a| Complex64::from_polar(1.0, a * p0))
            .collect(),
        k: wave.k(),
        p0,
    }
}

/// One term 𝔷_n x_n exp(−i a_n k sin θ) of the amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeTerm {
    pub weight: Complex64,
    pub position: f64,
}

/// Amplitude of a finite array, exact at every θ ∈ [−π/2, 3π/2).
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothAmplitude {
    pub k: f64,
    pub theta0: f64,
    pub terms: Vec<AmplitudeTerm>,
}

impl SmoothAmplitude {
    pub fn eval(&self, theta: f64) -> Complex64 {
        let ks = self.k * theta.sin();
        let sum: Complex64 = self
            .terms
            .iter()
            .map(|t| t.weight * Complex64::from_polar(1.0, -t.position * ks))
            .sum();
        amplitude_prefactor() * sum
    }

    /// Samples of `(θ, f(θ))` on `count` equally spaced angles of [−π/2, 3π/2).
    pub fn sample(&self, count: usize) -> Vec<(f64, Complex64)> {
        (0..count)
            .map(|i| {
                let theta = -0.5 * PI + 2.0 * PI * i as f64 / count as f64;
                (theta, self.eval(theta))
            })
            .collect()
    }
}

/// Solved Foldy system together with the solver diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldySolution {
    pub system: FoldySystem,
    pub report: SolveReport,
}

pub fn solve_system(array: &DeltaLineArray, wave: &IncidentWave) -> Result<FoldySolution> {
    let array = array.clone().validate()?;
    let system = build_system(&array, wave);
    let report = solve_identity_plus(&system.matrix, &system.rhs).map_err(|e| match e {
        ScatterError::SingularMatrix { .. } => ScatterError::SpectralSingularity {
            k: wave.k(),
            theta0: Some(wave.theta0()),
        },
        other => other,
    })?;
    Ok(FoldySolution { system, report })
}

pub fn solve_amplitude(array: &DeltaLineArray, wave: &IncidentWave) -> Result<SmoothAmplitude> {
    let solution = solve_system(array, wave)?;
    Ok(SmoothAmplitude {
        k: wave.k(),
        theta0: wave.theta0(),
        terms: array
            .couplings
            .iter()
            .zip(&array.positions)
            .zip(&solution.report.solution)
            .map(|((z, a), x)| AmplitudeTerm {
                weight: z * x,
                position: *a,
            })
            .collect(),
    })
}

/// Single point interaction:
/// `f(θ) = −√(2/π) 𝔷 exp(−i a1 k (sin θ − sin θ0)) / (4 + i𝔷)`.
pub fn closed_form_single(
    coupling: Complex64,
    position: f64,
    wave: &IncidentWave,
) -> Result<SmoothAmplitude> {
    let denominator = 4.0 + I * coupling;
    if denominator.norm() < CLOSED_FORM_THRESHOLD * (4.0 + coupling.norm()) {
        return Err(ScatterError::SpectralSingularity {
            k: wave.k(),
            theta0: Some(wave.theta0()),
        });
    }
    let field = 4.0 * Complex64::from_polar(1.0, position * wave.p0()) / denominator;
    Ok(SmoothAmplitude {
        k: wave.k(),
        theta0: wave.theta0(),
        terms: vec![AmplitudeTerm {
            weight: coupling * field,
            position,
        }],
    })
}

/// Closed-form amplitude of two point interactions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleDeltaAmplitude {
    pub couplings: [Complex64; 2],
    pub positions: [f64; 2],
    pub k: f64,
    pub theta0: f64,
    /// J0(k(a1 − a2)).
    pub bessel: f64,
    pub det: Complex64,
}

impl DoubleDeltaAmplitude {
    pub fn eval(&self, theta: f64) -> Complex64 {
        let [z1, z2] = self.couplings;
        let [a1, a2] = self.positions;
        let (s, s0) = (theta.sin(), self.theta0.sin());
        let k = self.k;
        let phase = |x: f64| Complex64::from_polar(1.0, x);
        let braces = z1 * (4.0 + I * z2) * phase(-a1 * k * (s - s0))
            + z2 * (4.0 + I * z1) * phase(-a2 * k * (s - s0))
            - I * z1 * z2 * self.bessel * (phase(-k * (a1 * s - a2 * s0)) + phase(-k * (a2 * s - a1 * s0)));
        -braces / (8.0 * (2.0 * PI).sqrt() * self.det)
    }

    /// The f_± decomposition, available for identical couplings placed
    /// symmetrically about the origin.
    pub fn symmetric(&self) -> Option<SymmetricDoubleDelta> {
        let [z1, z2] = self.couplings;
        let [a1, a2] = self.positions;
        if z1 != z2 || a1 != -a2 {
            return None;
        }
        Some(SymmetricDoubleDelta::new(z1, a1 - a2, self.k, self.theta0))
    }
}

/// Identical couplings 𝔷 at ±a/2:
/// `f(θ) = f_− cos(ak(sin θ − sin θ0)/2) + f_+ cos(ak(sin θ + sin θ0)/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricDoubleDelta {
    pub f_minus: Complex64,
    pub f_plus: Complex64,
    /// Δ(𝔷, k) = (1 − J0(ak)²) 𝔷² − 8i𝔷 − 16.
    pub delta: Complex64,
    pub separation: f64,
    pub k: f64,
    pub theta0: f64,
}

impl SymmetricDoubleDelta {
    pub fn new(coupling: Complex64, separation: f64, k: f64, theta0: f64) -> Self {
        let j = j0(separation * k);
        let delta = double_delta_discriminant(coupling, j);
        let norm = (2.0 * PI).sqrt() * delta;
        Self {
            f_minus: 4.0 * coupling * (4.0 + I * coupling) / norm,
            f_plus: -4.0 * I * coupling * coupling * j / norm,
            delta,
            separation,
            k,
            theta0,
        }
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        let half = 0.5 * self.separation * self.k;
        let (s, s0) = (theta.sin(), self.theta0.sin());
        self.f_minus * (half * (s - s0)).cos() + self.f_plus * (half * (s + s0)).cos()
    }

    /// `[f_− + f_+] cos(ak sin θ / 2)`, the form taken at normal incidence.
    pub fn eval_normal_incidence(&self, theta: f64) -> Complex64 {
        (self.f_minus + self.f_plus) * (0.5 * self.separation * self.k * theta.sin()).cos()
    }
}

/// Δ(𝔷) for a given J0(ak).
pub fn double_delta_discriminant(coupling: Complex64, bessel: f64) -> Complex64 {
    (1.0 - bessel * bessel) * coupling * coupling - 8.0 * I * coupling - 16.0
}

pub fn closed_form_double(
    couplings: [Complex64; 2],
    positions: [f64; 2],
    wave: &IncidentWave,
) -> Result<DoubleDeltaAmplitude> {
    let [z1, z2] = couplings;
    let bessel = j0(wave.k() * (positions[0] - positions[1]));
    let det = (bessel * bessel - 1.0) * z1 * z2 / 16.0 + 0.25 * I * (z1 + z2) + 1.0;
    let scale = (1.0 + 0.25 * z1.norm()) * (1.0 + 0.25 * z2.norm());
    if det.norm() < CLOSED_FORM_THRESHOLD * scale {
        return Err(ScatterError::SpectralSingularity {
            k: wave.k(),
            theta0: Some(wave.theta0()),
        });
    }
    Ok(DoubleDeltaAmplitude {
        couplings,
        positions,
        k: wave.k(),
        theta0: wave.theta0(),
        bessel,
        det,
    })
}

/// Couplings 𝔷 at which two identical deltas a distance `separation` apart
/// have a spectral singularity at wavenumber `k`: the roots of Δ(𝔷, k),
/// `𝔷 = 4i / (1 ∓ J0(ak))`. Both are purely imaginary.
pub fn double_delta_singular_couplings(separation: f64, k: f64) -> Result<[Complex64; 2]> {
    let ak = separation * k;
    let bessel = j0(ak);
    if ak.abs() < 1e-12 || bessel.abs() >= 1.0 {
        return Err(ScatterError::DegenerateSeparation { ak });
    }
    Ok([
        Complex64::new(0.0, 4.0 / (1.0 - bessel)),
        Complex64::new(0.0, 4.0 / (1.0 + bessel)),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanPoint {
    pub k: f64,
    pub det: ScaledDeterminant,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularityCandidate {
    /// Grid index of the local minimum.
    pub index: usize,
    /// Location refined by a parabola through the neighbouring points.
    pub refined: f64,
    pub abs_det: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeterminantScan {
    pub points: Vec<ScanPoint>,
    pub candidates: Vec<SingularityCandidate>,
}

/// det A at one wavenumber; the same for every incidence angle.
pub fn foldy_determinant(array: &DeltaLineArray, k: f64) -> Result<ScaledDeterminant> {
    let array = array.clone().validate()?;
    check_grid(&[k])?;
    determinant(&foldy_matrix(&array, k))
}

fn check_grid(grid: &[f64]) -> Result<()> {
    let positive = grid.iter().all(|k| k.is_finite() && *k > 0.0);
    let increasing = grid.windows(2).all(|w| w[1] > w[0]);
    if positive && increasing {
        Ok(())
    } else {
        Err(ScatterError::InvalidWave(
            "scan grid must be positive and strictly increasing".into(),
        ))
    }
}

/// det A(k) on a grid of wavenumbers, with local minima of |det| below
/// `threshold × median |det|` reported as singularity candidates.
pub fn determinant_scan(
    array: &DeltaLineArray,
    k_grid: &[f64],
    threshold: Option<f64>,
) -> Result<DeterminantScan> {
    let array = array.clone().validate()?;
    check_grid(k_grid)?;
    let points: Vec<ScanPoint> = k_grid
        .par_iter()
        .map(|&k| ScanPoint {
            k,
            det: determinant(&foldy_matrix(&array, k)).expect("Foldy matrix is square"),
        })
        .collect();
    let magnitudes: Vec<f64> = points.iter().map(|p| p.det.abs()).collect();
    let candidates = singularity_candidates(
        k_grid,
        &magnitudes,
        threshold.unwrap_or(DEFAULT_SINGULARITY_THRESHOLD),
    );
    Ok(DeterminantScan { points, candidates })
}

/// Non-strict local minima of `values` lying below `threshold × median`.
pub fn singularity_candidates(grid: &[f64], values: &[f64], threshold: f64) -> Vec<SingularityCandidate> {
    if values.is_empty() {
        return Vec::new();
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    let limit = threshold * median;
    let n = values.len();
    (0..n)
        .filter(|&i| {
            let left = i == 0 || values[i] <= values[i - 1];
            let right = i + 1 == n || values[i] <= values[i + 1];
            left && right && values[i] <= limit
        })
        .map(|i| SingularityCandidate {
            index: i,
            refined: if i > 0 && i + 1 < n {
                parabolic_vertex(
                    (grid[i - 1], values[i - 1]),
                    (grid[i], values[i]),
                    (grid[i + 1], values[i + 1]),
                )
            } else {
                grid[i]
            },
            abs_det: values[i],
        })
        .collect()
}

fn parabolic_vertex((x0, y0): (f64, f64), (x1, y1): (f64, f64), (x2, y2): (f64, f64)) -> f64 {
    let numerator = (x1 - x0).powi(2) * (y1 - y2) - (x1 - x2).powi(2) * (y1 - y0);
    let denominator = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
    if denominator == 0.0 || !denominator.is_finite() {
        return x1;
    }
    let vertex = x1 - 0.5 * numerator / denominator;
    if vertex.is_finite() && vertex >= x0 && vertex <= x2 {
        vertex
    } else {
        x1
    }
}

/// max_m |Ǎ₊(a_m) − x_m| where `Ǎ₊(y) = e^{i p0 y} − (i/4) Σ 𝔷_n x_n J0(k(y − a_n))`
/// is the field reconstructed from the solved values.
pub fn field_fixed_point_check(array: &DeltaLineArray, wave: &IncidentWave) -> Result<f64> {
    let solution = solve_system(array, wave)?;
    let x = &solution.report.solution;
    let (k, p0) = (wave.k(), wave.p0());
    let worst = array
        .positions
        .iter()
        .zip(x)
        .map(|(y, xm)| {
            let scattered: Complex64 = array
                .couplings
                .iter()
                .zip(&array.positions)
                .zip(x)
                .map(|((z, an), xn)| z * xn * j0(k * (y - an)))
                .sum();
            let field = Complex64::from_polar(1.0, p0 * y) - 0.25 * I * scattered;
            (field - xm).norm()
        })
        .fold(0.0, f64::max);
    Ok(worst)
}
