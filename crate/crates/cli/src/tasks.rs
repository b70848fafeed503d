use std::f64::consts::PI;

use line_scatter::foldy::{foldy_determinant, singularity_candidates, solve_amplitude, solve_system};
use line_scatter::fourier::{comb_beams, comb_beams_with_truncation, mode_determinant, solve_beams, solve_modes};
use line_scatter::geometry::{normalize_angle, reduce, Reduced};
use line_scatter::numerics::{norm_inf, ScaledDeterminant};
use line_scatter::oracle::{born_series_foldy, born_series_modes, residual_verify};
use line_scatter::potential::{comb_to_fourier, required_truncation};
use line_scatter::{Complex64, FourierLinePotential, IncidentWave, LineProfile, PeriodicComb, Potential, ScatterError};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::output::{json_real, potential_hash, real, Cell, Table};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Task {
    Amplitude,
    Beams,
    ScanK,
    ScanTheta0,
    Singularities,
    Verify,
    Equivalence,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Amplitude => "amplitude",
            Task::Beams => "beams",
            Task::ScanK => "scan-k",
            Task::ScanTheta0 => "scan-theta0",
            Task::Singularities => "singularities",
            Task::Verify => "verify",
            Task::Equivalence => "equivalence",
        }
    }
}

pub struct Artifact {
    pub table: Table,
    /// Candidate list written next to a CSV output file.
    pub sidecar: Option<String>,
}

impl From<Table> for Artifact {
    fn from(table: Table) -> Self {
        Self { table, sidecar: None }
    }
}

pub fn run(task: Task, config: &RunConfig) -> Result<Artifact, CliError> {
    match task {
        Task::Amplitude => amplitude(config).map(Artifact::from),
        Task::Beams => beams(config).map(Artifact::from),
        Task::ScanK => scan(config, Axis::K),
        Task::ScanTheta0 => scan(config, Axis::Theta0),
        Task::Singularities => singularities(config).map(Artifact::from),
        Task::Verify => verify(config).map(Artifact::from),
        Task::Equivalence => equivalence(config).map(Artifact::from),
    }
}

/// `−i/√(2π)`, folded into reported beam coefficients.
fn beam_prefactor() -> Complex64 {
    Complex64::new(0.0, -1.0 / (2.0 * PI).sqrt())
}

fn kind_name(potential: &Potential) -> &'static str {
    match potential {
        Potential::DeltaArray(_) => "delta_array",
        Potential::Fourier(_) => "fourier",
        Potential::Comb(_) => "comb",
        Potential::General(_) => "general",
    }
}

/// Canonical profile and wave, plus the reduction for general potentials.
struct Canonical {
    profile: LineProfile,
    wave: IncidentWave,
    reduced: Option<Reduced>,
}

impl Canonical {
    fn new(potential: &Potential, wave: IncidentWave) -> Result<Self, CliError> {
        Ok(match potential {
            Potential::General(general) => {
                let reduced = reduce(general, &wave)?;
                Self {
                    profile: reduced.profile.clone(),
                    wave: reduced.wave,
                    reduced: Some(reduced),
                }
            }
            Potential::DeltaArray(p) => Self::plain(LineProfile::DeltaArray(p.clone()), wave),
            Potential::Fourier(p) => Self::plain(LineProfile::Fourier(p.clone()), wave),
            Potential::Comb(p) => Self::plain(LineProfile::Comb(*p), wave),
        })
    }

    fn plain(profile: LineProfile, wave: IncidentWave) -> Self {
        Self {
            profile,
            wave,
            reduced: None,
        }
    }

    fn to_canonical(&self, theta: f64) -> f64 {
        self.reduced.as_ref().map_or(theta, |r| r.canonical_angle(theta))
    }

    fn to_original(&self, theta: f64) -> f64 {
        normalize_angle(self.reduced.as_ref().map_or(theta, |r| r.original_angle(theta)))
    }
}

fn header(task: Task, config: &RunConfig, table: &mut Table) {
    table.meta("task", task.name());
    if let Ok(k) = config.k() {
        table.meta("k", real(k));
    }
    table.meta("theta0_deg", real(config.theta0_deg()));
    table.meta("potential_sha256", potential_hash(&config.potential));
}

fn amplitude(config: &RunConfig) -> Result<Table, CliError> {
    let canonical = Canonical::new(&config.potential, config.wave()?)?;
    let LineProfile::DeltaArray(array) = &canonical.profile else {
        return Err(CliError::unsupported(Task::Amplitude, kind_name(&config.potential)));
    };
    let n = config.options.theta_samples;
    if n == 0 {
        return Err(CliError::config("options.theta_samples must be positive"));
    }
    let f = solve_amplitude(array, &canonical.wave)?;
    let mut table = Table::new(&["theta_deg", "re_f", "im_f", "abs_f_sq"]);
    header(Task::Amplitude, config, &mut table);
    for i in 0..n {
        let deg = -90.0 + 360.0 * i as f64 / n as f64;
        let v = f.eval(canonical.to_canonical(deg.to_radians()));
        table.push(vec![Cell::Real(deg), Cell::Real(v.re), Cell::Real(v.im), Cell::Real(v.norm_sqr())]);
    }
    Ok(table)
}

/// Fourier potential solved for a given profile, with the comb truncation
/// resolved against the wave.
fn fourier_of(profile: &LineProfile, wave: &IncidentWave, truncation: Option<usize>) -> Result<Option<FourierLinePotential>, CliError> {
    Ok(match profile {
        LineProfile::Fourier(p) => Some(p.clone()),
        LineProfile::Comb(comb) => Some(comb_to_fourier(comb, comb_truncation(comb, wave, truncation))?),
        LineProfile::DeltaArray(_) => None,
    })
}

fn comb_truncation(comb: &PeriodicComb, wave: &IncidentWave, truncation: Option<usize>) -> usize {
    truncation.unwrap_or_else(|| required_truncation(comb.base_frequency(), wave))
}

fn discrete_beams(
    potential: &Potential,
    wave: IncidentWave,
    truncation: Option<usize>,
    task: Task,
) -> Result<(Canonical, line_scatter::fourier::DiscreteAmplitude), CliError> {
    let canonical = Canonical::new(potential, wave)?;
    let amp = match &canonical.profile {
        LineProfile::Fourier(p) => solve_beams(p, &canonical.wave)?,
        LineProfile::Comb(c) => match truncation {
            Some(n) => comb_beams_with_truncation(c, &canonical.wave, n)?,
            None => comb_beams(c, &canonical.wave)?,
        },
        LineProfile::DeltaArray(_) => return Err(CliError::unsupported(task, kind_name(potential))),
    };
    Ok((canonical, amp))
}

fn beams(config: &RunConfig) -> Result<Table, CliError> {
    let (canonical, amp) = discrete_beams(&config.potential, config.wave()?, config.options.truncation, Task::Beams)?;
    let mut table = Table::new(&["shift", "theta_deg", "re_y", "im_y", "abs_y_sq"]);
    header(Task::Beams, config, &mut table);
    table.meta("coefficients", "y_s multiplied by -i/sqrt(2 pi)");
    let c = beam_prefactor();
    for (shift, theta, y) in amp.rows() {
        let v = c * y;
        let deg = canonical.to_original(theta).to_degrees();
        table.push(vec![Cell::Int(shift), Cell::Real(deg), Cell::Real(v.re), Cell::Real(v.im), Cell::Real(v.norm_sqr())]);
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Axis {
    K,
    Theta0,
}

impl Axis {
    fn column(self) -> &'static str {
        match self {
            Axis::K => "k",
            Axis::Theta0 => "theta0_deg",
        }
    }
}

/// det of the solver matrix at one (k, θ0); `None` on a grazing channel.
fn determinant_at(config: &RunConfig, k: f64, theta0_deg: f64) -> Result<Option<ScaledDeterminant>, CliError> {
    let wave = IncidentWave::from_degrees(k, theta0_deg)?;
    let canonical = Canonical::new(&config.potential, wave)?;
    let det = match &canonical.profile {
        LineProfile::DeltaArray(array) => foldy_determinant(array, canonical.wave.k()),
        profile => {
            let fourier = fourier_of(profile, &canonical.wave, config.options.truncation)?.expect("not a delta array");
            mode_determinant(&fourier, &canonical.wave)
        }
    };
    match det {
        Ok(d) => Ok(Some(d)),
        Err(ScatterError::GrazingMode { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

struct Scan {
    grid: Vec<f64>,
    dets: Vec<Option<ScaledDeterminant>>,
}

impl Scan {
    fn run(config: &RunConfig, axis: Axis, grid: Vec<f64>, fixed: f64) -> Result<Self, CliError> {
        let dets = grid
            .par_iter()
            .map(|&x| match axis {
                Axis::K => determinant_at(config, x, fixed),
                Axis::Theta0 => determinant_at(config, fixed, x),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { grid, dets })
    }

    fn magnitudes(&self) -> Vec<f64> {
        self.dets.iter().map(|d| d.map_or(f64::INFINITY, |d| d.abs())).collect()
    }

    fn candidates(&self, threshold: f64) -> Vec<line_scatter::foldy::SingularityCandidate> {
        singularity_candidates(&self.grid, &self.magnitudes(), threshold)
    }
}

fn scan(config: &RunConfig, axis: Axis) -> Result<Artifact, CliError> {
    let (task, grid, fixed) = match axis {
        Axis::K => {
            let range = config.scan.k.ok_or_else(|| CliError::config("scan.k is required for scan-k"))?;
            (Task::ScanK, range.points("k")?, config.theta0_deg())
        }
        Axis::Theta0 => {
            let range = config
                .scan
                .theta0_deg
                .ok_or_else(|| CliError::config("scan.theta0_deg is required for scan-theta0"))?;
            (Task::ScanTheta0, range.points("theta0_deg")?, config.k()?)
        }
    };
    let result = Scan::run(config, axis, grid, fixed)?;
    let mut table = Table::new(&[axis.column(), "abs_det", "re_det", "im_det"]);
    header(task, config, &mut table);
    for (x, det) in result.grid.iter().zip(&result.dets) {
        let (abs, z) = det.map_or((f64::NAN, Complex64::new(f64::NAN, f64::NAN)), |d| (d.abs(), d.to_complex()));
        table.push(vec![Cell::Real(*x), Cell::Real(abs), Cell::Real(z.re), Cell::Real(z.im)]);
    }
    let candidates: Vec<Value> = result
        .candidates(config.options.singularity_threshold)
        .iter()
        .map(|c| {
            json!({
                "index": c.index,
                axis.column(): json_real(result.grid[c.index]),
                "refined": json_real(c.refined),
                "abs_det": json_real(c.abs_det),
            })
        })
        .collect();
    let candidates = Value::Array(candidates);
    table.meta("candidates", candidates.to_string());
    table.extra.insert("candidates".into(), candidates.clone());
    let mut sidecar = serde_json::to_string_pretty(&candidates).expect("json values serialize");
    sidecar.push('\n');
    Ok(Artifact {
        table,
        sidecar: Some(sidecar),
    })
}

fn singularities(config: &RunConfig) -> Result<Table, CliError> {
    let k_grid = config
        .scan
        .k
        .ok_or_else(|| CliError::config("scan.k is required for singularities"))?
        .points("k")?;
    let angles = match config.scan.theta0_deg {
        Some(range) => range.points("theta0_deg")?,
        None => vec![config.theta0_deg()],
    };
    let mut table = Table::new(&["theta0_deg", "k", "abs_det", "grid_index"]);
    header(Task::Singularities, config, &mut table);
    let threshold = config.options.singularity_threshold;
    for theta0 in angles {
        let scan = Scan::run(config, Axis::K, k_grid.clone(), theta0)?;
        for c in scan.candidates(threshold) {
            table.push(vec![Cell::Real(theta0), Cell::Real(c.refined), Cell::Real(c.abs_det), Cell::Int(c.index as i64)]);
        }
    }
    table.meta("candidates_found", table.rows.len().to_string());
    Ok(table)
}

fn verify(config: &RunConfig) -> Result<Table, CliError> {
    let canonical = Canonical::new(&config.potential, config.wave()?)?;
    let opts = &config.options;
    let (born, direct, residual_direct, residual_born) = match &canonical.profile {
        LineProfile::DeltaArray(array) => {
            let born = born_series_foldy(array, &canonical.wave, opts.max_terms, opts.tolerance)?;
            let direct = solve_system(array, &canonical.wave)?;
            let rd = residual_verify(&direct.system, &direct.report.solution)?;
            let rb = residual_verify(&direct.system, born.limit())?;
            (born, direct.report.solution, rd, rb)
        }
        profile => {
            let fourier = fourier_of(profile, &canonical.wave, opts.truncation)?.expect("not a delta array");
            let born = born_series_modes(&fourier, &canonical.wave, opts.max_terms, opts.tolerance)?;
            let direct = solve_modes(&fourier, &canonical.wave)?;
            let rd = residual_verify(&direct.system, &direct.report.solution)?;
            let rb = residual_verify(&direct.system, born.limit())?;
            (born, direct.report.solution, rd, rb)
        }
    };
    let diff: Vec<Complex64> = born.limit().iter().zip(&direct).map(|(a, b)| a - b).collect();
    let max_diff = norm_inf(&diff);
    let agree = max_diff <= 10.0 * opts.tolerance;

    let mut table = Table::new(&["index", "re_direct", "im_direct", "re_born", "im_born", "abs_diff"]);
    header(Task::Verify, config, &mut table);
    table
        .meta("terms_used", born.terms_used.to_string())
        .meta("estimated_ratio", real(born.estimated_ratio))
        .meta("tolerance", real(opts.tolerance))
        .meta("max_abs_diff", real(max_diff))
        .meta("residual_direct", real(residual_direct))
        .meta("residual_born", real(residual_born))
        .meta("agreement", if agree { "pass" } else { "fail" });
    for (i, (d, b)) in direct.iter().zip(born.limit()).enumerate() {
        table.push(vec![
            Cell::Int(i as i64),
            Cell::Real(d.re),
            Cell::Real(d.im),
            Cell::Real(b.re),
            Cell::Real(b.im),
            Cell::Real((d - b).norm()),
        ]);
    }
    table.extra.insert(
        "summary".into(),
        json!({
            "terms_used": born.terms_used,
            "estimated_ratio": json_real(born.estimated_ratio),
            "max_abs_diff": json_real(max_diff),
            "residual_direct": json_real(residual_direct),
            "residual_born": json_real(residual_born),
            "agreement": agree,
        }),
    );
    Ok(table)
}

fn equivalence(config: &RunConfig) -> Result<Table, CliError> {
    let reference = config
        .reference
        .as_ref()
        .ok_or_else(|| CliError::config("reference potential is required for equivalence"))?;
    let wave = config.wave()?;
    let truncation = config.options.truncation;
    let (canonical, a) = discrete_beams(&config.potential, wave, truncation, Task::Equivalence)?;
    let (_, b) = discrete_beams(reference, wave, truncation, Task::Equivalence)?;
    let discrepancy = a.max_discrepancy(&b);

    let mut shifts: Vec<i64> = a.beams.iter().chain(&b.beams).map(|beam| beam.shift).collect();
    shifts.sort_unstable();
    shifts.dedup();
    let mut table = Table::new(&["shift", "theta_deg", "re_y_a", "im_y_a", "re_y_b", "im_y_b", "abs_diff"]);
    header(Task::Equivalence, config, &mut table);
    table
        .meta("reference_sha256", potential_hash(reference))
        .meta("coefficients", "y_s multiplied by -i/sqrt(2 pi)")
        .meta("max_discrepancy", real(discrepancy));
    let c = beam_prefactor();
    for shift in shifts {
        let theta = a
            .beams
            .iter()
            .chain(&b.beams)
            .find(|beam| beam.shift == shift)
            .map(|beam| beam.theta)
            .expect("shift taken from the beams");
        let (ya, yb) = (c * a.coefficient(shift), c * b.coefficient(shift));
        table.push(vec![
            Cell::Int(shift),
            Cell::Real(canonical.to_original(theta).to_degrees()),
            Cell::Real(ya.re),
            Cell::Real(ya.im),
            Cell::Real(yb.re),
            Cell::Real(yb.im),
            Cell::Real((ya - yb).norm()),
        ]);
    }
    table.extra.insert("max_discrepancy".into(), json_real(discrepancy));
    Ok(table)
}
