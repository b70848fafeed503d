//! Reduction of `ζ δ(ax + by) g(bx − ay)` to the canonical form `δ(x) g'(y)`.
//!
//! For b ≠ 0 the frame is rotated with φ = arctan(−a/b):
//! `x' = sin φ x − cos φ y`, `y' = cos φ x + sin φ y`. Then
//! `ax + by = −sgn(b) s x'` and `bx − ay = sgn(b) s y'` with s = √(a² + b²),
//! so the potential becomes `(ζ/s) δ(x') g(sgn(b) s y')` and a direction at
//! angle θ maps to θ + π/2 − φ. For b = 0 no rotation is needed:
//! `δ(ax) g(−ay) = |a|⁻¹ δ(x) g(−sgn(a) |a| y)`.
//!
//! `δ(x')` is even, so a wave that arrives from the right in the rotated frame
//! is mapped to a left-incident one by the mirror x' → −x' (θ → π − θ); the
//! reduction records when this happens so amplitudes can be mapped back.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Result, ScatterError};
use crate::potential::{
    DeltaLineArray, FourierLinePotential, GeneralLinePotential, IncidentWave, LineProfile,
    PeriodicComb, Validate,
};

const GRAZING_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalReduction {
    /// ζ' = ζ / s.
    pub zeta_prime: Complex64,
    /// s = √(a² + b²); the profile is evaluated at s·y'.
    pub stretch: f64,
    /// Rotation angle φ, absent when b = 0.
    pub rotation: Option<f64>,
    /// Incidence angle in the rotated frame before any mirroring.
    pub theta0_prime: f64,
    /// The profile argument changed sign (g'(y) = g(−s y)).
    pub profile_reflected: bool,
    /// The rotated frame was mirrored x' → −x' to make the wave left-incident.
    pub mirrored: bool,
}

/// Canonical problem equivalent to a [`GeneralLinePotential`] scattering.
#[derive(Debug, Clone, PartialEq)]
pub struct Reduced {
    /// Canonical profile with ζ' and the stretch folded into its parameters.
    pub profile: LineProfile,
    pub wave: IncidentWave,
    pub reduction: CanonicalReduction,
}

/// Maps θ into [−π/2, 3π/2).
pub fn normalize_angle(theta: f64) -> f64 {
    let shifted = (theta + FRAC_PI_2).rem_euclid(2.0 * PI);
    shifted - FRAC_PI_2
}

impl Reduced {
    /// Direction in the canonical frame for a direction θ of the original frame.
    pub fn canonical_angle(&self, theta: f64) -> f64 {
        let mut t = theta + self.rotation_shift();
        if self.reduction.mirrored {
            t = PI - t;
        }
        normalize_angle(t)
    }

    /// Inverse of [`Reduced::canonical_angle`].
    pub fn original_angle(&self, theta: f64) -> f64 {
        let mut t = theta;
        if self.reduction.mirrored {
            t = PI - t;
        }
        normalize_angle(t - self.rotation_shift())
    }

    fn rotation_shift(&self) -> f64 {
        self.reduction.rotation.map_or(0.0, |phi| FRAC_PI_2 - phi)
    }
}

pub fn reduce(potential: &GeneralLinePotential, wave: &IncidentWave) -> Result<Reduced> {
    let (a, b) = (potential.a, potential.b);
    if a == 0.0 && b == 0.0 {
        return Err(ScatterError::DegenerateLine);
    }
    let violations = potential.violations();
    if !violations.is_empty() {
        return Err(ScatterError::InvalidPotential(violations));
    }

    let stretch = a.hypot(b);
    let zeta_prime = potential.zeta / stretch;
    let (rotation, theta_rotated, profile_reflected) = if b == 0.0 {
        (None, wave.theta0(), a > 0.0)
    } else {
        let phi = (-a / b).atan();
        (Some(phi), wave.theta0() + FRAC_PI_2 - phi, b < 0.0)
    };
    let theta_rotated = wrap_pi(theta_rotated);
    if theta_rotated.cos().abs() <= GRAZING_TOLERANCE {
        return Err(ScatterError::GrazingAfterRotation {
            theta0: theta_rotated,
        });
    }
    let mirrored = theta_rotated.cos() < 0.0;
    let theta_canonical = if mirrored {
        wrap_pi(PI - theta_rotated)
    } else {
        theta_rotated
    };

    let profile = transform_profile(&potential.profile, zeta_prime, stretch, profile_reflected);
    Ok(Reduced {
        profile,
        wave: IncidentWave::new(wave.k(), theta_canonical)?,
        reduction: CanonicalReduction {
            zeta_prime,
            stretch,
            rotation,
            theta0_prime: theta_rotated,
            profile_reflected,
            mirrored,
        },
    })
}

fn transform_profile(profile: &LineProfile, zeta: Complex64, s: f64, reflect: bool) -> LineProfile {
    let sign = if reflect { -1.0 } else { 1.0 };
    match profile {
        // Σ c δ(s y − a) = Σ (c/s) δ(y − a/s)
        LineProfile::DeltaArray(d) => LineProfile::DeltaArray(DeltaLineArray {
            couplings: d.couplings.iter().map(|c| zeta * c / s).collect(),
            positions: d.positions.iter().map(|p| sign * p / s).collect(),
        }),
        LineProfile::Fourier(f) => LineProfile::Fourier(FourierLinePotential {
            harmonics: f
                .harmonics
                .iter()
                .map(|(n, c)| (if reflect { -n } else { *n }, zeta * c))
                .collect(),
            frequencies: f.frequencies.iter().map(|alpha| s * alpha).collect(),
        }),
        LineProfile::Comb(c) => LineProfile::Comb(PeriodicComb {
            coupling: zeta * c.coupling / s,
            spacing: c.spacing / s,
        }),
    }
}

// Into (−π, π]; exact for inputs already in range.
fn wrap_pi(theta: f64) -> f64 {
    if theta > PI {
        theta - 2.0 * PI
    } else if theta <= -PI {
        theta + 2.0 * PI
    } else {
        theta
    }
}
