//! Closed forms for a single harmonic `𝔷_0 + 𝔷_− e^{−iαy} + 𝔷_+ e^{iαy}`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::modes::enumerate_modes;
use super::{Beam, DiscreteAmplitude};
use crate::error::{Result, ScatterError};
use crate::potential::{FourierLinePotential, IncidentWave, Validate};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Two-channel regimes of k < α ≤ 2k.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case2Regime {
    /// Channels {−1, 0}: p0 ≥ α − k.
    Minus,
    /// Channels {0, 1}: p0 ≤ k − α.
    Plus,
}

struct Case2 {
    regime: Case2Regime,
    z0: Complex64,
    /// 𝔷_− for [`Case2Regime::Minus`], 𝔷_+ for [`Case2Regime::Plus`].
    z_side: Complex64,
    z_other: Complex64,
    omega0: f64,
    omega_side: f64,
    p_side: f64,
}

fn case2(potential: &FourierLinePotential, wave: &IncidentWave) -> Result<Case2> {
    let potential = potential.clone().validate()?;
    if potential.order() != 1 {
        return Err(ScatterError::OutOfRegime(format!(
            "closed form needs a single harmonic, got order {}",
            potential.order()
        )));
    }
    let (k, alpha) = (wave.k(), potential.frequencies[0]);
    if !(k < alpha && alpha <= 2.0 * k) {
        return Err(ScatterError::OutOfRegime(format!(
            "closed form needs k < α <= 2k, got k = {k}, α = {alpha}"
        )));
    }
    let modes = enumerate_modes(alpha, wave)?;
    let (regime, side) = match modes.shifts.as_slice() {
        [-1, 0] => (Case2Regime::Minus, -1),
        [0, 1] => (Case2Regime::Plus, 1),
        _ => {
            return Err(ScatterError::OutOfRegime(format!(
                "incident channel alone is admissible at θ0 = {}",
                wave.theta0()
            )))
        }
    };
    let side_index = modes.position(side).expect("side channel present");
    let zero_index = modes.position(0).expect("incident channel present");
    Ok(Case2 {
        regime,
        z0: potential.coupling(0),
        z_side: potential.coupling(side as i32),
        z_other: potential.coupling(-side as i32),
        omega0: modes.omegas[zero_index],
        omega_side: modes.omegas[side_index],
        p_side: modes.momenta[side_index],
    })
}

impl Case2 {
    fn determinant(&self) -> Complex64 {
        let (z0, ws, w0) = (self.z0, self.omega_side, self.omega0);
        (self.z_side * self.z_other - z0 * z0 + 2.0 * I * (ws + w0) * z0 + 4.0 * ws * w0) / (4.0 * ws * w0)
    }

    fn scale(&self) -> f64 {
        let (ws, w0) = (self.omega_side, self.omega0);
        (1.0 + self.z0.norm() / (2.0 * ws)) * (1.0 + self.z0.norm() / (2.0 * w0))
            + (self.z_side * self.z_other).norm() / (4.0 * ws * w0)
    }
}

/// `det 𝓐 = (𝔷_−𝔷_+ − 𝔷_0² + 2i(ω_s + ω_0)𝔷_0 + 4ω_sω_0) / (4ω_sω_0)`, with
/// ω_s the frequency of the side channel (s = −1 or s = +1).
pub fn case2_determinant(potential: &FourierLinePotential, wave: &IncidentWave) -> Result<Complex64> {
    Ok(case2(potential, wave)?.determinant())
}

/// Beam coefficients from the two-channel closed form:
/// `y_0 = −2π (det − 1 − i𝔷_0/(2ω_s)) / det` and
/// `y_s = −2π (i𝔷_s/(2ω_s)) / det`.
pub fn case2_amplitude(potential: &FourierLinePotential, wave: &IncidentWave) -> Result<DiscreteAmplitude> {
    let c = case2(potential, wave)?;
    let det = c.determinant();
    if det.norm() < 1e-14 * c.scale() {
        return Err(ScatterError::SpectralSingularity {
            k: wave.k(),
            theta0: Some(wave.theta0()),
        });
    }
    let ws = c.omega_side;
    let incident = Beam {
        shift: 0,
        theta: wave.theta0(),
        coefficient: -2.0 * PI * (det - 1.0 - I * c.z0 / (2.0 * ws)) / det,
    };
    let side = |shift| Beam {
        shift,
        theta: (c.p_side / wave.k()).clamp(-1.0, 1.0).asin(),
        coefficient: -2.0 * PI * (I * c.z_side / (2.0 * ws)) / det,
    };
    let beams = match c.regime {
        Case2Regime::Minus => vec![side(-1), incident],
        Case2Regime::Plus => vec![incident, side(1)],
    };
    Ok(DiscreteAmplitude {
        k: wave.k(),
        theta0: wave.theta0(),
        beams,
    })
}

/// A real (k, θ0) at which a purely gaining 𝔷_0 = i|𝔷_0| lases in the single
/// channel regime α > 2k: 2k cos θ0 = |𝔷_0| with k ∈ [|𝔷_0|/2, α/2).
/// Returns the midpoint of that interval.
pub fn directional_laser_condition(z0: Complex64, alpha: f64) -> Option<(f64, f64)> {
    let gain = z0.im;
    if z0.re != 0.0 || !(gain > 0.0) || !(gain < alpha) || !alpha.is_finite() {
        return None;
    }
    let k = 0.25 * (gain + alpha);
    Some((k, (gain / (2.0 * k)).acos()))
}
