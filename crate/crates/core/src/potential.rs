//! Potential descriptors, incident-wave parameters and validation.
//!
//! All descriptors describe the profile `g(y)` of a potential `δ(x) g(y)`
//! (or, for [`GeneralLinePotential`], of `ζ δ(ax + by) g(bx − ay)`).
//! Complex couplings serialize as `[re, im]`.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ScatterError};

/// A left-incident plane wave `exp(i k (cos θ0 x + sin θ0 y))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncidentWave {
    k: f64,
    theta0: f64,
}

impl IncidentWave {
    /// `theta0` is in radians and must lie strictly inside (−π/2, π/2).
    pub fn new(k: f64, theta0: f64) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(ScatterError::InvalidWave(format!("k must be positive, got {k}")));
        }
        if !(theta0.is_finite() && theta0.abs() < FRAC_PI_2) {
            return Err(ScatterError::InvalidWave(format!(
                "theta0 must lie in (-pi/2, pi/2), got {theta0}"
            )));
        }
        Ok(Self { k, theta0 })
    }

    pub fn from_degrees(k: f64, theta0_deg: f64) -> Result<Self> {
        Self::new(k, theta0_deg.to_radians())
    }

    pub fn normal(k: f64) -> Result<Self> {
        Self::new(k, 0.0)
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    /// Transverse momentum p0 = k sin θ0.
    pub fn p0(&self) -> f64 {
        self.k * self.theta0.sin()
    }

    /// Longitudinal momentum ω(p) = √(k² − p²); NaN outside the band.
    pub fn omega(&self, p: f64) -> f64 {
        ((self.k - p) * (self.k + p)).sqrt()
    }

    pub fn with_k(&self, k: f64) -> Result<Self> {
        Self::new(k, self.theta0)
    }

    pub fn with_theta0(&self, theta0: f64) -> Result<Self> {
        Self::new(self.k, theta0)
    }
}

/// Finite array of point interactions `Σ 𝔷_n δ(y − a_n)` on the line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaLineArray {
    pub couplings: Vec<Complex64>,
    pub positions: Vec<f64>,
}

impl DeltaLineArray {
    pub fn new(couplings: Vec<Complex64>, positions: Vec<f64>) -> Result<Self> {
        Self { couplings, positions }.validate()
    }

    pub fn len(&self) -> usize {
        self.couplings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.couplings.is_empty()
    }
}

/// Finite Fourier series `Σ_{n=−N}^{N} 𝔷_n exp(i α_n y)` with α_0 = 0 and
/// α_{−n} = −α_n. Only α_1..α_N are stored; missing harmonics are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierLinePotential {
    #[serde(with = "harmonic_keys")]
    pub harmonics: BTreeMap<i32, Complex64>,
    pub frequencies: Vec<f64>,
}

// Integer map keys are lost when serde buffers an internally tagged enum, so
// harmonic indices go through strings explicitly.
mod harmonic_keys {
    use std::collections::BTreeMap;

    use num_complex::Complex64;
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<i32, Complex64>,
        serializer: S,
    ) -> Result<S::Ok, S::Error> {
        map.iter()
            .map(|(n, z)| (n.to_string(), *z))
            .collect::<BTreeMap<String, Complex64>>()
            .serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<BTreeMap<i32, Complex64>, D::Error> {
        BTreeMap::<String, Complex64>::deserialize(deserializer)?
            .into_iter()
            .map(|(key, z)| {
                key.trim()
                    .parse::<i32>()
                    .map(|n| (n, z))
                    .map_err(|_| D::Error::custom(format!("harmonic index {key:?} is not an integer")))
            })
            .collect()
    }
}

impl FourierLinePotential {
    pub fn new(harmonics: BTreeMap<i32, Complex64>, frequencies: Vec<f64>) -> Result<Self> {
        Self {
            harmonics,
            frequencies,
        }
        .validate()
    }

    /// `𝔷_0 + 𝔷_− e^{−iαy} + 𝔷_+ e^{iαy}`.
    pub fn single_harmonic(
        zeta0: Complex64,
        minus: Complex64,
        plus: Complex64,
        alpha: f64,
    ) -> Result<Self> {
        let harmonics = BTreeMap::from([(-1, minus), (0, zeta0), (1, plus)]);
        Self::new(harmonics, vec![alpha])
    }

    /// Highest harmonic index N.
    pub fn order(&self) -> usize {
        self.frequencies.len()
    }

    pub fn coupling(&self, n: i32) -> Complex64 {
        self.harmonics.get(&n).copied().unwrap_or_default()
    }

    /// Signed frequency α_n.
    pub fn frequency(&self, n: i32) -> f64 {
        match n {
            0 => 0.0,
            n if n > 0 => self.frequencies[n as usize - 1],
            n => -self.frequencies[(-n) as usize - 1],
        }
    }
}

/// Infinite comb `𝔷 Σ_n δ(y − n a)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodicComb {
    pub coupling: Complex64,
    pub spacing: f64,
}

impl PeriodicComb {
    pub fn new(coupling: Complex64, spacing: f64) -> Result<Self> {
        Self { coupling, spacing }.validate()
    }

    /// α = 2π / a.
    pub fn base_frequency(&self) -> f64 {
        2.0 * PI / self.spacing
    }
}

/// The profile `g` of a line potential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LineProfile {
    DeltaArray(DeltaLineArray),
    Fourier(FourierLinePotential),
    Comb(PeriodicComb),
}

/// `ζ δ(ax + by) g(bx − ay)` for a profile `g`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralLinePotential {
    pub zeta: Complex64,
    pub a: f64,
    pub b: f64,
    pub profile: LineProfile,
}

/// Any potential descriptor accepted by the solvers and the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Potential {
    DeltaArray(DeltaLineArray),
    Fourier(FourierLinePotential),
    Comb(PeriodicComb),
    General(GeneralLinePotential),
}

impl From<LineProfile> for Potential {
    fn from(profile: LineProfile) -> Self {
        match profile {
            LineProfile::DeltaArray(p) => Potential::DeltaArray(p),
            LineProfile::Fourier(p) => Potential::Fourier(p),
            LineProfile::Comb(p) => Potential::Comb(p),
        }
    }
}

/// Checks every type invariant and returns the value unchanged when they hold.
pub trait Validate: Sized {
    fn violations(&self) -> Vec<String>;

    fn validate(self) -> Result<Self> {
        let violations = self.violations();
        if violations.is_empty() {
            Ok(self)
        } else {
            Err(ScatterError::InvalidPotential(violations))
        }
    }
}

fn finite_complex(z: &Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

impl Validate for DeltaLineArray {
    fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.couplings.is_empty() {
            out.push("couplings: at least one delta is required".to_string());
        }
        if self.couplings.len() != self.positions.len() {
            out.push(format!(
                "couplings/positions: lengths differ ({} vs {})",
                self.couplings.len(),
                self.positions.len()
            ));
        }
        for (i, z) in self.couplings.iter().enumerate() {
            if !finite_complex(z) {
                out.push(format!("couplings[{i}]: not finite"));
            }
        }
        for (i, a) in self.positions.iter().enumerate() {
            if !a.is_finite() {
                out.push(format!("positions[{i}]: not finite"));
            }
        }
        out
    }
}

impl Validate for FourierLinePotential {
    fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, alpha) in self.frequencies.iter().enumerate() {
            if !(alpha.is_finite() && *alpha > 0.0) {
                out.push(format!("frequencies[{i}]: must be positive, got {alpha}"));
            }
        }
        for (i, pair) in self.frequencies.windows(2).enumerate() {
            if pair[1] <= pair[0] {
                out.push(format!(
                    "frequencies[{}]: must exceed frequencies[{i}] ({} <= {})",
                    i + 1,
                    pair[1],
                    pair[0]
                ));
            }
        }
        let order = self.frequencies.len() as i64;
        for (n, z) in &self.harmonics {
            if (*n as i64).abs() > order {
                out.push(format!("harmonics[{n}]: index exceeds order {order}"));
            }
            if !finite_complex(z) {
                out.push(format!("harmonics[{n}]: not finite"));
            }
        }
        out
    }
}

impl Validate for PeriodicComb {
    fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.spacing.is_finite() && self.spacing > 0.0) {
            out.push(format!("spacing: must be positive, got {}", self.spacing));
        }
        if !finite_complex(&self.coupling) {
            out.push("coupling: not finite".to_string());
        }
        out
    }
}

impl Validate for LineProfile {
    fn violations(&self) -> Vec<String> {
        match self {
            LineProfile::DeltaArray(p) => p.violations(),
            LineProfile::Fourier(p) => p.violations(),
            LineProfile::Comb(p) => p.violations(),
        }
    }
}

impl Validate for GeneralLinePotential {
    fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.a.is_finite() && self.b.is_finite()) {
            out.push("a/b: not finite".to_string());
        } else if self.a * self.a + self.b * self.b <= 0.0 {
            out.push("a/b: a^2 + b^2 must be positive".to_string());
        }
        if !finite_complex(&self.zeta) {
            out.push("zeta: not finite".to_string());
        }
        out.extend(self.profile.violations().into_iter().map(|v| format!("profile.{v}")));
        out
    }
}

impl Validate for Potential {
    fn violations(&self) -> Vec<String> {
        match self {
            Potential::DeltaArray(p) => p.violations(),
            Potential::Fourier(p) => p.violations(),
            Potential::Comb(p) => p.violations(),
            Potential::General(p) => p.violations(),
        }
    }
}

/// The comb as the Fourier series `(𝔷/a) Σ_{|n|<=N} exp(i n α y)`, α = 2π/a.
pub fn comb_to_fourier(comb: &PeriodicComb, truncation: usize) -> Result<FourierLinePotential> {
    comb.validate()?;
    let alpha = comb.base_frequency();
    let coupling = comb.coupling / comb.spacing;
    let n = truncation as i32;
    Ok(FourierLinePotential {
        harmonics: (-n..=n).map(|i| (i, coupling)).collect(),
        frequencies: (1..=n).map(|i| i as f64 * alpha).collect(),
    })
}

/// Smallest N with k < α(N+1)/2, i.e. ⌊2k/α⌋. Harmonics beyond N couple
/// only channels that cannot both propagate.
pub fn required_truncation(alpha: f64, wave: &IncidentWave) -> usize {
    (2.0 * wave.k() / alpha).floor() as usize
}
