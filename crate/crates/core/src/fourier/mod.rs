//! Fourier-series line potentials and periodic combs.
//!
//! For `g(y) = Σ 𝔷_n exp(i α_n y)` with commensurate frequencies the
//! scattered field lives on a finite set of diffraction channels
//! p_s = p0 + sΩ with |p_s| < k. The channel amplitudes solve
//! `𝓐 x = b` with `𝓐_{s,s'} = δ + i Z(s − s') / (2ω_s)` and `b_s = 2π δ_{s,0}`,
//! and the far field is a finite sum of beams
//! `f(θ) = (−i/√(2π)) Σ y_s [δ(θ − θ_s) + δ(θ + θ_s − π)]`.

mod closed_form;
mod modes;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Result, ScatterError};
use crate::numerics::{determinant, solve_identity_plus, ComplexMatrix, LinearSystem, ScaledDeterminant, SolveReport};
use crate::potential::{
    comb_to_fourier, required_truncation, FourierLinePotential, IncidentWave, PeriodicComb, Validate,
};

pub use closed_form::{case2_amplitude, case2_determinant, directional_laser_condition, Case2Regime};
pub use modes::{
    commensurate_base, enumerate_modes, mode_set_formula, CommensurateBase, ModeSet,
    DEFAULT_COMMENSURATE_TOLERANCE, GRAZING_TOLERANCE, MAX_DENOMINATOR,
};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq)]
pub struct ModeSystem {
    pub matrix: ComplexMatrix,
    pub rhs: Vec<Complex64>,
    pub modes: ModeSet,
}

impl LinearSystem for ModeSystem {
    fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    fn rhs(&self) -> &[Complex64] {
        &self.rhs
    }
}

/// Z(c): total coupling carried by lattice offset c.
fn offset_couplings(potential: &FourierLinePotential, multipliers: &[i64]) -> BTreeMap<i64, Complex64> {
    let mut z = BTreeMap::new();
    let mut add = |offset: i64, value: Complex64| *z.entry(offset).or_insert(Complex64::new(0.0, 0.0)) += value;
    add(0, potential.coupling(0));
    for (i, &c) in multipliers.iter().enumerate() {
        let n = i as i32 + 1;
        add(c, potential.coupling(n));
        add(-c, potential.coupling(-n));
    }
    z
}

pub fn build_mode_system(
    potential: &FourierLinePotential,
    multipliers: &[i64],
    modes: &ModeSet,
) -> ModeSystem {
    let z = offset_couplings(potential, multipliers);
    let n = modes.len();
    let matrix = ComplexMatrix::from_fn(n, n, |l, m| {
        let offset = modes.shifts[l] - modes.shifts[m];
        let coupling = z.get(&offset).copied().unwrap_or_default();
        let entry = I * coupling / (2.0 * modes.omegas[l]);
        if l == m {
            entry + 1.0
        } else {
            entry
        }
    });
    let rhs = modes
        .shifts
        .iter()
        .map(|&s| if s == 0 { Complex64::new(2.0 * PI, 0.0) } else { Complex64::new(0.0, 0.0) })
        .collect();
    ModeSystem {
        matrix,
        rhs,
        modes: modes.clone(),
    }
}

fn lattice(potential: &FourierLinePotential) -> Result<Option<CommensurateBase>> {
    if potential.order() == 0 {
        Ok(None)
    } else {
        commensurate_base(potential, DEFAULT_COMMENSURATE_TOLERANCE).map(Some)
    }
}

fn system_on(
    potential: &FourierLinePotential,
    lattice: Option<&CommensurateBase>,
    wave: &IncidentWave,
) -> Result<ModeSystem> {
    match lattice {
        None => Ok(build_mode_system(potential, &[], &ModeSet::incident_only(wave))),
        Some(l) => {
            let modes = enumerate_modes(l.base, wave)?;
            Ok(build_mode_system(potential, &l.multipliers, &modes))
        }
    }
}

/// Mode system of a validated commensurate potential.
pub fn mode_system(potential: &FourierLinePotential, wave: &IncidentWave) -> Result<ModeSystem> {
    let potential = potential.clone().validate()?;
    let lattice = lattice(&potential)?;
    system_on(&potential, lattice.as_ref(), wave)
}

/// Determinant of the mode system; its real zeros in (k, θ0) are the
/// spectral singularities.
pub fn mode_determinant(potential: &FourierLinePotential, wave: &IncidentWave) -> Result<ScaledDeterminant> {
    determinant(&mode_system(potential, wave)?.matrix)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeSolution {
    pub system: ModeSystem,
    pub report: SolveReport,
}

fn solve_system(system: ModeSystem, wave: &IncidentWave) -> Result<ModeSolution> {
    let report = solve_identity_plus(&system.matrix, &system.rhs).map_err(|e| match e {
        ScatterError::SingularMatrix { .. } => ScatterError::SpectralSingularity {
            k: wave.k(),
            theta0: Some(wave.theta0()),
        },
        other => other,
    })?;
    Ok(ModeSolution { system, report })
}

pub fn solve_modes(potential: &FourierLinePotential, wave: &IncidentWave) -> Result<ModeSolution> {
    solve_system(mode_system(potential, wave)?, wave)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Beam {
    pub shift: i64,
    /// θ_s = arcsin(sin θ0 + sΩ/k), on the transmission side.
    pub theta: f64,
    /// y_s = x_s − 2π δ_{s,0}.
    pub coefficient: Complex64,
}

impl Beam {
    /// Reflection-side direction π − θ_s.
    pub fn reflected_theta(&self) -> f64 {
        PI - self.theta
    }
}

/// Far field of a periodic or Fourier line potential as a finite set of beams.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteAmplitude {
    pub k: f64,
    pub theta0: f64,
    pub beams: Vec<Beam>,
}

impl DiscreteAmplitude {
    fn from_solution(solution: &ModeSolution, wave: &IncidentWave) -> Self {
        let modes = &solution.system.modes;
        let beams = modes
            .shifts
            .iter()
            .zip(&modes.momenta)
            .zip(&solution.report.solution)
            .map(|((&shift, &p), &x)| Beam {
                shift,
                theta: (p / wave.k()).clamp(-1.0, 1.0).asin(),
                coefficient: if shift == 0 { x - 2.0 * PI } else { x },
            })
            .collect();
        Self {
            k: wave.k(),
            theta0: wave.theta0(),
            beams,
        }
    }

    /// `(shift, θ, y)` for every beam on both sides: θ_s then π − θ_s.
    pub fn rows(&self) -> Vec<(i64, f64, Complex64)> {
        self.beams
            .iter()
            .flat_map(|b| [(b.shift, b.theta, b.coefficient), (b.shift, b.reflected_theta(), b.coefficient)])
            .collect()
    }

    /// y_s, zero for channels that carry no beam.
    pub fn coefficient(&self, shift: i64) -> Complex64 {
        self.beams
            .iter()
            .find(|b| b.shift == shift)
            .map(|b| b.coefficient)
            .unwrap_or_default()
    }

    /// Largest |y_s − y'_s| over the union of both beam sets.
    pub fn max_discrepancy(&self, other: &DiscreteAmplitude) -> f64 {
        self.beams
            .iter()
            .chain(&other.beams)
            .map(|b| (self.coefficient(b.shift) - other.coefficient(b.shift)).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_coefficient(&self) -> f64 {
        self.beams.iter().map(|b| b.coefficient.norm()).fold(0.0, f64::max)
    }
}

pub fn solve_beams(potential: &FourierLinePotential, wave: &IncidentWave) -> Result<DiscreteAmplitude> {
    let solution = solve_modes(potential, wave)?;
    Ok(DiscreteAmplitude::from_solution(&solution, wave))
}

/// Beams of a periodic comb, truncated to the harmonics that can couple
/// admissible channels.
pub fn comb_beams(comb: &PeriodicComb, wave: &IncidentWave) -> Result<DiscreteAmplitude> {
    let comb = (*comb).validate()?;
    comb_beams_with_truncation(&comb, wave, required_truncation(comb.base_frequency(), wave))
}

/// As [`comb_beams`] with an explicit truncation, which must be at least
/// the required one.
pub fn comb_beams_with_truncation(
    comb: &PeriodicComb,
    wave: &IncidentWave,
    truncation: usize,
) -> Result<DiscreteAmplitude> {
    let comb = (*comb).validate()?;
    let required = required_truncation(comb.base_frequency(), wave);
    if truncation < required {
        return Err(ScatterError::OutOfRegime(format!(
            "truncation {truncation} is below the required {required}"
        )));
    }
    let potential = comb_to_fourier(&comb, truncation)?;
    let lattice = (truncation > 0).then(|| CommensurateBase {
        base: comb.base_frequency(),
        multipliers: (1..=truncation as i64).collect(),
    });
    let solution = solve_system(system_on(&potential, lattice.as_ref(), wave)?, wave)?;
    Ok(DiscreteAmplitude::from_solution(&solution, wave))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::norm_inf;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn single(z0: Complex64, minus: Complex64, plus: Complex64, alpha: f64) -> FourierLinePotential {
        FourierLinePotential::single_harmonic(z0, minus, plus, alpha).unwrap()
    }

    #[test]
    fn single_mode_system() {
        let (z0, k, theta0) = (c(0.3, 1.2), 1.0, 0.4);
        let wave = IncidentWave::new(k, theta0).unwrap();
        let sys = mode_system(&single(z0, c(1.0, 0.0), c(2.0, 0.0), 3.0), &wave).unwrap();
        assert_eq!(sys.modes.shifts, vec![0]);
        let expected = 1.0 + I * z0 / (2.0 * wave.omega(wave.p0()));
        assert!((sys.matrix[(0, 0)] - expected).norm() < 1e-15);
        assert_eq!(sys.rhs, vec![c(2.0 * PI, 0.0)]);
    }

    #[test]
    fn two_mode_system_layout() {
        let (z0, zm, zp) = (c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0));
        let wave = IncidentWave::new(1.0, 0.6).unwrap();
        let sys = mode_system(&single(z0, zm, zp, 1.5), &wave).unwrap();
        assert_eq!(sys.modes.shifts, vec![-1, 0]);
        let (wm, w0) = (sys.modes.omegas[0], sys.modes.omegas[1]);
        assert_eq!(sys.matrix[(0, 0)], 1.0 + I * z0 / (2.0 * wm));
        assert_eq!(sys.matrix[(0, 1)], I * zm / (2.0 * wm));
        assert_eq!(sys.matrix[(1, 0)], I * zp / (2.0 * w0));
        assert_eq!(sys.matrix[(1, 1)], 1.0 + I * z0 / (2.0 * w0));
    }

    #[test]
    fn zero_couplings_give_identity() {
        let z = c(0.0, 0.0);
        let wave = IncidentWave::new(3.0, 0.2).unwrap();
        let sys = mode_system(&single(z, z, z, 0.7), &wave).unwrap();
        let n = sys.modes.len();
        assert_eq!(sys.matrix, ComplexMatrix::identity(n));
        assert_eq!(solve_beams(&single(z, z, z, 0.7), &wave).unwrap().max_coefficient(), 0.0);
    }

    #[test]
    fn case1_beam() {
        let z0 = c(0.8, -0.4);
        let wave = IncidentWave::new(1.0, 0.3).unwrap();
        let f = solve_beams(&single(z0, c(1.0, 1.0), c(-2.0, 0.5), 2.5), &wave).unwrap();
        assert_eq!(f.beams.len(), 1);
        let expected = -2.0 * PI * I * z0 / (2.0 * wave.k() * wave.theta0().cos() + I * z0);
        assert!((f.beams[0].coefficient - expected).norm() < 1e-13);
        assert!((f.beams[0].theta - 0.3).abs() < 1e-15);
    }

    #[test]
    fn invisible_below_half_frequency() {
        let z = c(0.0, 0.0);
        let f = solve_beams(&single(z, c(5.0, 1.0), c(0.0, 3.0), 4.0), &IncidentWave::new(1.9, -0.8).unwrap()).unwrap();
        assert_eq!(f.max_coefficient(), 0.0);
    }

    #[test]
    fn rows_pair_each_beam() {
        let wave = IncidentWave::new(2.0, 0.1).unwrap();
        let f = solve_beams(&single(c(1.0, 0.2), c(0.3, 0.0), c(0.0, 0.4), 1.1), &wave).unwrap();
        let rows = f.rows();
        assert_eq!(rows.len(), 2 * f.beams.len());
        for pair in rows.chunks(2) {
            assert_eq!(pair[0].0, pair[1].0);
            assert_eq!(pair[0].2, pair[1].2);
            assert!((pair[0].1 + pair[1].1 - PI).abs() < 1e-15);
            assert!(pair[0].1.sin().abs() <= 1.0);
        }
    }

    #[test]
    fn residual_small() {
        let wave = IncidentWave::new(5.0, 0.35).unwrap();
        let harmonics = BTreeMap::from([
            (-2, c(0.4, 0.1)),
            (-1, c(1.0, -0.5)),
            (0, c(0.7, 0.0)),
            (1, c(0.0, 2.0)),
            (2, c(-0.3, 0.3)),
        ]);
        let p = FourierLinePotential::new(harmonics, vec![1.2, 1.8]).unwrap();
        let sol = solve_modes(&p, &wave).unwrap();
        assert_eq!(sol.system.modes.base, 0.6);
        let x = &sol.report.solution;
        assert!(sol.report.residual_norm < 1e-10 * norm_inf(x));
    }

    #[test]
    fn comb_below_half_frequency_is_single_beam() {
        let comb = PeriodicComb::new(c(1.0, 0.0), 1.0).unwrap();
        let wave = IncidentWave::normal(2.0).unwrap();
        let f = comb_beams(&comb, &wave).unwrap();
        assert_eq!(f.beams.len(), 1);
        let expected = -2.0 * PI * I / (2.0 * 2.0 + I);
        assert!((f.beams[0].coefficient - expected).norm() < 1e-13);
    }

    #[test]
    fn comb_truncation_stable() {
        let comb = PeriodicComb::new(c(0.7, 0.3), 1.3).unwrap();
        let wave = IncidentWave::new(9.0, 0.25).unwrap();
        let base = comb_beams(&comb, &wave).unwrap();
        let n = required_truncation(comb.base_frequency(), &wave);
        let more = comb_beams_with_truncation(&comb, &wave, n + 5).unwrap();
        assert_eq!(base, more);
        assert!(comb_beams_with_truncation(&comb, &wave, n.saturating_sub(1)).is_err() || n == 0);
    }

    #[test]
    fn incommensurate_rejected() {
        let harmonics = BTreeMap::from([(0, c(1.0, 0.0)), (1, c(1.0, 0.0)), (2, c(1.0, 0.0))]);
        let p = FourierLinePotential::new(harmonics, vec![1.0, 2f64.sqrt()]).unwrap();
        assert!(matches!(
            solve_beams(&p, &IncidentWave::normal(3.0).unwrap()),
            Err(ScatterError::IncommensurateFrequencies(_))
        ));
    }

    #[test]
    fn case1_singularity_reported() {
        let (k, theta0) = directional_laser_condition(c(0.0, 1.0), 4.0).unwrap();
        let wave = IncidentWave::new(k, theta0).unwrap();
        let p = single(c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), 4.0);
        assert!(matches!(solve_beams(&p, &wave), Err(ScatterError::SpectralSingularity { .. })));
    }
}
