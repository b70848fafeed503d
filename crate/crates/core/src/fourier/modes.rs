//! Commensurate bases and admissible diffraction channels.

use crate::error::{Result, ScatterError};
use crate::potential::{FourierLinePotential, IncidentWave};

/// Default integer-residual tolerance of [`commensurate_base`].
pub const DEFAULT_COMMENSURATE_TOLERANCE: f64 = 1e-9;

/// Largest denominator tried by [`commensurate_base`].
pub const MAX_DENOMINATOR: u64 = 1_000_000;

/// Relative width `ε/k` of the band around |p| = k treated as grazing.
pub const GRAZING_TOLERANCE: f64 = 1e-9;

/// Frequencies written as integer multiples of a common quantum Ω.
#[derive(Debug, Clone, PartialEq)]
pub struct CommensurateBase {
    pub base: f64,
    pub multipliers: Vec<i64>,
}

/// Finds the largest Ω with every α_n an integer multiple of Ω.
///
/// The ratios r_n = α_n/α_1 are scaled by L = 1, 2, … up to
/// [`MAX_DENOMINATOR`]; the first L for which every r_n·L lies within
/// `tolerance` of an integer gives Ω = α_1/L.
pub fn commensurate_base(potential: &FourierLinePotential, tolerance: f64) -> Result<CommensurateBase> {
    let alphas = &potential.frequencies;
    let Some(&first) = alphas.first() else {
        return Err(ScatterError::IncommensurateFrequencies(
            "potential has no frequencies".into(),
        ));
    };
    if !(tolerance > 0.0) || !alphas.iter().all(|a| a.is_finite() && *a > 0.0) {
        return Err(ScatterError::IncommensurateFrequencies(format!(
            "frequencies {alphas:?} with tolerance {tolerance} cannot be analysed"
        )));
    }
    let ratios: Vec<f64> = alphas.iter().map(|a| a / first).collect();
    for denominator in 1..=MAX_DENOMINATOR {
        let scale = denominator as f64;
        let fits = ratios.iter().all(|r| {
            let x = r * scale;
            (x - x.round()).abs() <= tolerance
        });
        if fits {
            return Ok(CommensurateBase {
                base: first / scale,
                multipliers: ratios.iter().map(|r| (r * scale).round() as i64).collect(),
            });
        }
    }
    Err(ScatterError::IncommensurateFrequencies(format!(
        "no common quantum for {alphas:?} with denominator up to {MAX_DENOMINATOR}"
    )))
}

/// Admissible lattice shifts s, with p_s = p0 + sΩ and ω_s = √(k² − p_s²).
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSet {
    pub base: f64,
    pub shifts: Vec<i64>,
    pub momenta: Vec<f64>,
    pub omegas: Vec<f64>,
}

impl ModeSet {
    fn from_shifts(base: f64, shifts: Vec<i64>, wave: &IncidentWave) -> Self {
        let momenta: Vec<f64> = shifts
            .iter()
            .map(|&s| if s == 0 { wave.p0() } else { wave.p0() + s as f64 * base })
            .collect();
        let omegas = momenta.iter().map(|&p| wave.omega(p)).collect();
        Self {
            base,
            shifts,
            momenta,
            omegas,
        }
    }

    /// The incident channel alone, for potentials without oscillating terms.
    pub fn incident_only(wave: &IncidentWave) -> Self {
        Self::from_shifts(f64::INFINITY, vec![0], wave)
    }

    pub fn len(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shifts.is_empty()
    }

    pub fn position(&self, shift: i64) -> Option<usize> {
        self.shifts.binary_search(&shift).ok()
    }
}

/// All shifts with |p0 + sΩ| ≤ k − ε, ε = 1e-9·k.
pub fn enumerate_modes(base: f64, wave: &IncidentWave) -> Result<ModeSet> {
    if !(base > 0.0) || !base.is_finite() {
        return Err(ScatterError::OutOfRegime(format!(
            "mode base must be positive and finite, got {base}"
        )));
    }
    let (k, p0) = (wave.k(), wave.p0());
    let eps = GRAZING_TOLERANCE * k;
    let lo = ((-k - p0) / base).floor() as i64 - 1;
    let hi = ((k - p0) / base).ceil() as i64 + 1;
    let mut shifts = Vec::new();
    for s in lo..=hi {
        let p = if s == 0 { p0 } else { p0 + s as f64 * base };
        let gap = k - p.abs();
        if gap.abs() <= eps {
            return Err(ScatterError::GrazingMode {
                shift: s,
                k,
                theta0: wave.theta0(),
            });
        }
        if gap > 0.0 {
            shifts.push(s);
        }
    }
    Ok(ModeSet::from_shifts(base, shifts, wave))
}

/// Closed-form mode set for the cell 2k/(j+1) < Ω ≤ 2k/j and
/// −k + qΩ ≤ p0 < −k + (q+1)Ω:
/// `{−q, …, −q+j}` when p0 ≤ k − (j−q)Ω, otherwise `{−q, …, −q+j−1}`.
pub fn mode_set_formula(j: u32, q: u32, base: f64, wave: &IncidentWave) -> Result<ModeSet> {
    let (k, p0) = (wave.k(), wave.p0());
    let (jf, qf) = (j as f64, q as f64);
    if j == 0 || q > j || !(2.0 * k / (jf + 1.0) < base && base <= 2.0 * k / jf) {
        return Err(ScatterError::OutOfRegime(format!(
            "need j >= 1, q <= j and 2k/(j+1) < Ω <= 2k/j; got j = {j}, q = {q}, Ω = {base}, k = {k}"
        )));
    }
    let lower = -k + qf * base;
    let full = k - (jf - qf) * base;
    let upper = -k + (qf + 1.0) * base;
    let first = -(q as i64);
    let last = if lower <= p0 && p0 <= full {
        first + j as i64
    } else if full < p0 && p0 < upper {
        first + j as i64 - 1
    } else {
        return Err(ScatterError::OutOfCell { j, q, p0 });
    };
    Ok(ModeSet::from_shifts(base, (first..=last).collect(), wave))
}
