//! Parameter sweeps over (Ω, Δ, ψ): stable-coherence maps, coherence optima
//! and drive-regime classification.
//!
//! Grid points are independent and evaluated in parallel; results are always
//! stored by grid index, so output is identical for any thread count.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::energetics::{coherence_bits, ergotropy_decomposition, BatteryHamiltonian, EnergeticsRecord};
use crate::error::{Error, Result};
use crate::lindblad::{evolve_to, integrate, relax_to_steady, steady_state_qubit, steady_state_reduced, Dynamics, TimeGrid};
use crate::nv_model::{build_initial_state, NuclearInit};
use crate::protocol::energetics_series;
use crate::qcore::partial_trace_nuclear;

/// Analytic vs integrated stable coherence must agree this well at audit points.
pub const AUDIT_TOL: f64 = 1e-4;
pub const DEFAULT_AUDIT_POINTS: usize = 5;
const AUDIT_SEED: u64 = 0x5eed_c0de;

/// Relative tolerance of the golden-section refinement (fraction of axis span).
pub const OPTIMUM_REL_TOL: f64 = 1e-4;

/// Largest Ω/γ gap allowed across a regime transition.
pub const MAX_REGIME_GAP: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisName {
    OmegaRabi,
    Delta,
    Psi,
    /// Only used as the second axis of time-trace fields.
    Time,
}

impl AxisName {
    pub fn as_str(&self) -> &'static str {
        match self {
            AxisName::OmegaRabi => "omega_rabi",
            AxisName::Delta => "delta",
            AxisName::Psi => "psi",
            AxisName::Time => "time",
        }
    }
}

impl std::str::FromStr for AxisName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "omega_rabi" | "omega" => Ok(AxisName::OmegaRabi),
            "delta" => Ok(AxisName::Delta),
            "psi" => Ok(AxisName::Psi),
            other => Err(Error::Config(format!("unknown sweep axis `{other}` (omega_rabi|delta|psi)"))),
        }
    }
}

/// Linear axis; frequencies in rad/μs, ψ in radians, time in μs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepAxis {
    pub name: AxisName,
    pub min: f64,
    pub max: f64,
    pub n_points: usize,
}

impl SweepAxis {
    pub fn new(name: AxisName, min: f64, max: f64, n_points: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || min >= max {
            return Err(Error::OutOfRange {
                name: "axis.max",
                value: max,
                reason: "axis needs min < max",
            });
        }
        if n_points < 2 {
            return Err(Error::OutOfRange {
                name: "axis.n_points",
                value: n_points as f64,
                reason: "axis needs at least two points",
            });
        }
        Ok(Self { name, min, max, n_points })
    }

    pub fn span(&self) -> f64 {
        self.max - self.min
    }

    pub fn step(&self) -> f64 {
        self.span() / (self.n_points - 1) as f64
    }

    pub fn value(&self, k: usize) -> f64 {
        if k + 1 == self.n_points {
            self.max
        } else {
            self.min + k as f64 * self.step()
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.n_points).map(|k| self.value(k)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AuditPoint {
    pub index: usize,
    pub analytic: f64,
    pub integrated: f64,
}

/// Observable on a 1- or 2-axis grid, row-major (first axis slowest).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepField {
    pub observable: String,
    pub axes: Vec<SweepAxis>,
    pub values: Vec<f64>,
    pub audit: Vec<AuditPoint>,
}

impl SweepField {
    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.n_points).collect()
    }

    /// Axis coordinates of flat index `k`.
    pub fn coordinates(&self, k: usize) -> Vec<f64> {
        let mut rem = k;
        let mut coords = vec![0.0; self.axes.len()];
        for (d, axis) in self.axes.iter().enumerate().rev() {
            coords[d] = axis.value(rem % axis.n_points);
            rem /= axis.n_points;
        }
        coords
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        let mut flat = 0;
        for (axis, &i) in self.axes.iter().zip(idx) {
            flat = flat * axis.n_points + i;
        }
        self.values[flat]
    }

    pub fn argmax(&self) -> usize {
        self.values
            .iter()
            .enumerate()
            .fold(0, |best, (k, v)| if *v > self.values[best] { k } else { best })
    }
}

/// Operating point that the swept axis overrides.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepBase {
    pub delta: f64,
    pub omega_rabi: f64,
    pub gamma: f64,
    pub psi: f64,
    pub a_par: f64,
}

impl SweepBase {
    pub fn with(mut self, axis: AxisName, value: f64) -> Self {
        match axis {
            AxisName::OmegaRabi => self.omega_rabi = value,
            AxisName::Delta => self.delta = value,
            AxisName::Psi => self.psi = value,
            AxisName::Time => {}
        }
        self
    }

    pub fn dynamics(&self) -> Dynamics {
        Dynamics::new(self.delta, self.omega_rabi, self.gamma, self.a_par)
    }

    pub fn nuclear(&self) -> Result<NuclearInit> {
        NuclearInit::new(self.psi)
    }

    fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0) {
            return Err(Error::NoSteadyState);
        }
        if self.omega_rabi < 0.0 {
            return Err(Error::OutOfRange {
                name: "omega_rabi",
                value: self.omega_rabi,
                reason: "Rabi frequency must be non-negative",
            });
        }
        self.nuclear().map(|_| ())
    }

    /// Coherence (bits) of the t → ∞ battery state.
    pub fn stable_coherence(&self) -> Result<f64> {
        let rho = steady_state_reduced(&self.nuclear()?, self.delta, self.omega_rabi, self.gamma, self.a_par)?;
        coherence_bits(&rho, &BatteryHamiltonian::unit())
    }

    /// Coherence of the battery at time `t` after |g⟩⊗|ψ⟩.
    pub fn coherence_at(&self, t: f64) -> Result<f64> {
        let rho = evolve_to(&build_initial_state(&self.nuclear()?), &self.dynamics(), t)?;
        coherence_bits(&partial_trace_nuclear(&rho)?, &BatteryHamiltonian::unit())
    }

    /// Coherence after numerical relaxation to the steady state.
    pub fn relaxed_coherence(&self) -> Result<f64> {
        let (rho, _) = relax_to_steady(&build_initial_state(&self.nuclear()?), &self.dynamics())?;
        coherence_bits(&partial_trace_nuclear(&rho)?, &BatteryHamiltonian::unit())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MapOptions {
    /// Late-time snapshot instead of the t → ∞ limit.
    pub at_time: Option<f64>,
    pub audit_points: usize,
}

impl Default for MapOptions {
    fn default() -> Self {
        Self {
            at_time: None,
            audit_points: DEFAULT_AUDIT_POINTS,
        }
    }
}

fn grid_points(axes: &[SweepAxis], base: &SweepBase) -> Vec<SweepBase> {
    let total: usize = axes.iter().map(|a| a.n_points).product();
    (0..total)
        .map(|k| {
            let mut rem = k;
            let mut p = *base;
            for axis in axes.iter().rev() {
                p = p.with(axis.name, axis.value(rem % axis.n_points));
                rem /= axis.n_points;
            }
            p
        })
        .collect()
}

fn check_axes(axes: &[SweepAxis]) -> Result<()> {
    if axes.is_empty() || axes.len() > 2 {
        return Err(Error::Config(format!("a sweep takes 1 or 2 axes, got {}", axes.len())));
    }
    if axes.iter().any(|a| a.name == AxisName::Time) {
        return Err(Error::Config("time is not a sweepable parameter".into()));
    }
    Ok(())
}

/// Stable coherence over a 1-D or 2-D grid, audited against long-time
/// integration at a few pseudo-randomly chosen (but fixed) grid points.
pub fn stable_coherence_map(axes: &[SweepAxis], base: &SweepBase, options: &MapOptions) -> Result<SweepField> {
    check_axes(axes)?;
    base.validate()?;
    let points = grid_points(axes, base);
    let values = points
        .par_iter()
        .map(|p| match options.at_time {
            Some(t) => p.coherence_at(t),
            None => p.stable_coherence(),
        })
        .collect::<Result<Vec<f64>>>()?;

    let audit = if options.at_time.is_none() && options.audit_points > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(AUDIT_SEED);
        let mut chosen = sample(&mut rng, points.len(), options.audit_points.min(points.len())).into_vec();
        chosen.sort_unstable();
        let audit = chosen
            .par_iter()
            .map(|&index| {
                Ok(AuditPoint {
                    index,
                    analytic: values[index],
                    integrated: points[index].relaxed_coherence()?,
                })
            })
            .collect::<Result<Vec<AuditPoint>>>()?;
        if let Some(bad) = audit.iter().find(|a| (a.analytic - a.integrated).abs() > AUDIT_TOL) {
            return Err(Error::AuditMismatch {
                index: bad.index,
                analytic: bad.analytic,
                numeric: bad.integrated,
            });
        }
        audit
    } else {
        Vec::new()
    };

    let observable = match options.at_time {
        Some(t) => format!("coherence_at_{t}us"),
        None => "stable_coherence".to_string(),
    };
    Ok(SweepField {
        observable,
        axes: axes.to_vec(),
        values,
        audit,
    })
}

/// Result of a 1-D coherence maximization.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Optimum {
    pub axis: AxisName,
    /// Refined local maxima (x, C), ascending in x.
    pub maxima: Vec<(f64, f64)>,
    pub multimodal: bool,
}

impl Optimum {
    /// (x*, c*) when the window held a single maximum.
    pub fn unimodal(&self) -> Option<(f64, f64)> {
        if self.multimodal {
            None
        } else {
            self.maxima.first().copied()
        }
    }

    pub fn best(&self) -> (f64, f64) {
        self.maxima
            .iter()
            .copied()
            .fold((f64::NAN, f64::NEG_INFINITY), |acc, m| if m.1 > acc.1 { m } else { acc })
    }
}

/// Maximizes `f` on [lo, hi] by golden-section search down to `tol`.
pub fn golden_section_max<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
        }
    }
    let x = 0.5 * (lo + hi);
    let fx = f(x)?;
    // keep the better of the midpoint and the last interior probes
    Ok([(x, fx), (x1, f1), (x2, f2)]
        .into_iter()
        .fold((x, fx), |a, b| if b.1 > a.1 { b } else { a }))
}

/// Coarse scan of the window, then golden-section refinement of each local
/// maximum to 1e-4 of the span. More than one coarse maximum sets the
/// multimodality flag instead of picking one.
pub fn find_coherence_optimum(axis: &SweepAxis, base: &SweepBase) -> Result<Optimum> {
    check_axes(std::slice::from_ref(axis))?;
    base.validate()?;
    let eval = |x: f64| base.with(axis.name, x).stable_coherence();
    let xs = axis.values();
    let coarse = xs.par_iter().map(|&x| eval(x)).collect::<Result<Vec<f64>>>()?;

    let n = coarse.len();
    let is_peak = |k: usize| {
        let left_ok = k == 0 || coarse[k] > coarse[k - 1];
        let right_ok = k + 1 == n || coarse[k] >= coarse[k + 1];
        // plateaus count once, at their left edge
        left_ok && right_ok && !(k == 0 && n > 1 && coarse[0] == coarse[1])
    };
    let peaks: Vec<usize> = (0..n).filter(|&k| is_peak(k)).collect();
    let peaks = if peaks.is_empty() { vec![0] } else { peaks };

    let tol = OPTIMUM_REL_TOL * axis.span();
    let mut maxima = peaks
        .iter()
        .map(|&k| {
            let lo = xs[k.saturating_sub(1)];
            let hi = xs[(k + 1).min(n - 1)];
            let (x, c) = golden_section_max(eval, lo, hi, tol)?;
            // an endpoint may beat the interior when the peak sits on the boundary
            Ok(if coarse[k] > c { (xs[k], coarse[k]) } else { (x, c) })
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    maxima.sort_by(|a, b| a.0.total_cmp(&b.0));

    Ok(Optimum {
        axis: axis.name,
        multimodal: maxima.len() > 1,
        maxima,
    })
}

/// Thresholds of the oscillation and incoherent-ergotropy detectors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DetectorSettings {
    /// Interior W_coh peak must exceed the steady value by this (units of ω₀).
    pub osc_margin: f64,
    /// max_t W_inc above this (units of ω₀) counts as incoherent charging.
    pub inc_floor: f64,
    /// Observation window in units of 1/γ.
    pub window_decay_times: f64,
    pub samples: usize,
}

impl Default for DetectorSettings {
    fn default() -> Self {
        Self {
            osc_margin: 1e-3,
            inc_floor: 1e-4,
            window_decay_times: 10.0,
            samples: 500,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegimePoint {
    pub omega_over_gamma: f64,
    /// max interior W_coh peak minus the steady W_coh (units of ω₀)
    pub peak_excess: f64,
    pub max_incoherent: f64,
    pub oscillates: bool,
    pub incoherent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegimeReport {
    pub settings: DetectorSettings,
    pub threshold_osc: Option<f64>,
    pub threshold_inc: Option<f64>,
    pub points: Vec<RegimePoint>,
}

/// Energetics of the charging trace from |g⟩⊗|ψ⟩ over [0, window].
pub fn charging_trace(base: &SweepBase, window: f64, samples: usize) -> Result<Vec<EnergeticsRecord>> {
    let dynamics = base.dynamics();
    let grid = TimeGrid::for_dynamics(0.0, window, samples, &dynamics)?;
    energetics_series(&integrate(&build_initial_state(&base.nuclear()?), &dynamics, &grid)?)
}

fn first_transition(points: &[RegimePoint], flag: impl Fn(&RegimePoint) -> bool) -> Result<Option<f64>> {
    let Some(k) = points.iter().position(&flag) else {
        return Ok(None);
    };
    if k > 0 {
        let gap = points[k].omega_over_gamma - points[k - 1].omega_over_gamma;
        if gap > MAX_REGIME_GAP + 1e-12 {
            return Err(Error::GridTooCoarse { gap });
        }
    }
    Ok(Some(points[k].omega_over_gamma))
}

/// Smallest Ω/γ at which W_coh(t) starts to overshoot its steady value, and
/// smallest Ω/γ at which W_inc(t) becomes nonzero, for resonant charging of
/// |g⟩⊗|↓⟩.
pub fn classify_drive_regimes(
    omega_grid: &SweepAxis,
    gamma: f64,
    a_par: f64,
    settings: &DetectorSettings,
) -> Result<RegimeReport> {
    if !(gamma > 0.0) {
        return Err(Error::NoSteadyState);
    }
    if omega_grid.name != AxisName::OmegaRabi {
        return Err(Error::Config("regime classification sweeps omega_rabi".into()));
    }
    if omega_grid.min > 0.2 * gamma * (1.0 + 1e-9) || omega_grid.max < 3.0 * gamma * (1.0 - 1e-9) {
        return Err(Error::OutOfRange {
            name: "omega_grid",
            value: omega_grid.max / gamma,
            reason: "grid must span at least [0.2, 3] in units of gamma",
        });
    }
    let window = settings.window_decay_times / gamma;
    let points = omega_grid
        .values()
        .par_iter()
        .map(|&omega| {
            let base = SweepBase {
                delta: 0.0,
                omega_rabi: omega,
                gamma,
                psi: 0.0,
                a_par,
            };
            let trace = charging_trace(&base, window, settings.samples)?;
            let steady = steady_state_qubit(0.0, omega, gamma)?;
            let steady_coh = ergotropy_decomposition(f64::INFINITY, &steady, &BatteryHamiltonian::unit())?.coherent;
            let wc: Vec<f64> = trace.iter().map(|r| r.coherent).collect();
            let peak = (1..wc.len() - 1)
                .filter(|&k| wc[k] >= wc[k - 1] && wc[k] >= wc[k + 1] && wc[k] > wc[k - 1].min(wc[k + 1]))
                .map(|k| wc[k])
                .fold(f64::NEG_INFINITY, f64::max);
            let peak_excess = peak - steady_coh;
            let max_incoherent = trace.iter().map(|r| r.incoherent).fold(0.0, f64::max);
            Ok(RegimePoint {
                omega_over_gamma: omega / gamma,
                peak_excess,
                max_incoherent,
                oscillates: peak_excess > settings.osc_margin,
                incoherent: max_incoherent > settings.inc_floor,
            })
        })
        .collect::<Result<Vec<RegimePoint>>>()?;

    Ok(RegimeReport {
        settings: *settings,
        threshold_osc: first_transition(&points, |p| p.oscillates)?,
        threshold_inc: first_transition(&points, |p| p.incoherent)?,
        points,
    })
}

/// Re-runs the classifier under perturbed detector definitions.
pub fn detector_sensitivity(omega_grid: &SweepAxis, gamma: f64, a_par: f64) -> Result<Vec<RegimeReport>> {
    let base = DetectorSettings::default();
    let variants = [
        base,
        DetectorSettings { osc_margin: 1e-4, ..base },
        DetectorSettings { osc_margin: 1e-2, ..base },
        DetectorSettings { inc_floor: 1e-6, ..base },
        DetectorSettings { inc_floor: 1e-2, ..base },
        DetectorSettings { window_decay_times: 5.0, ..base },
        DetectorSettings { window_decay_times: 20.0, ..base },
    ];
    variants
        .iter()
        .map(|s| classify_drive_regimes(omega_grid, gamma, a_par, s))
        .collect()
}

/// W_coh(t), W_inc(t) on (axis × time) plus the stable-coherence overlay along `axis`.
pub fn charging_trace_fields(axis: &SweepAxis, base: &SweepBase, window: f64, samples: usize) -> Result<[SweepField; 3]> {
    check_axes(std::slice::from_ref(axis))?;
    base.validate()?;
    let time_axis = SweepAxis::new(AxisName::Time, 0.0, window, samples)?;
    let rows = axis
        .values()
        .par_iter()
        .map(|&x| {
            let p = base.with(axis.name, x);
            Ok((charging_trace(&p, window, samples)?, p.stable_coherence()?))
        })
        .collect::<Result<Vec<_>>>()?;

    let flat = |f: fn(&EnergeticsRecord) -> f64| rows.iter().flat_map(|(tr, _)| tr.iter().map(f)).collect::<Vec<f64>>();
    let field = |observable: &str, axes: Vec<SweepAxis>, values: Vec<f64>| SweepField {
        observable: observable.to_string(),
        axes,
        values,
        audit: Vec::new(),
    };
    Ok([
        field("W_coh(t)", vec![*axis, time_axis], flat(|r| r.coherent)),
        field("W_inc(t)", vec![*axis, time_axis], flat(|r| r.incoherent)),
        field("stable_coherence", vec![*axis], rows.iter().map(|(_, c)| *c).collect()),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mhz;

    fn base(omega_mhz: f64) -> SweepBase {
        SweepBase {
            delta: 0.0,
            omega_rabi: mhz(omega_mhz),
            gamma: mhz(0.1),
            psi: 0.0,
            a_par: mhz(2.14),
        }
    }

    #[test]
    fn axis_values_hit_endpoints() {
        let a = SweepAxis::new(AxisName::Delta, -1.0, 2.0, 7).unwrap();
        let v = a.values();
        assert_eq!(v[0], -1.0);
        assert_eq!(v[6], 2.0);
        assert!((v[2] - 0.0).abs() < 1e-15);
        assert!(SweepAxis::new(AxisName::Delta, 1.0, 1.0, 3).is_err());
        assert!(SweepAxis::new(AxisName::Delta, 0.0, 1.0, 1).is_err());
    }

    #[test]
    fn golden_section_finds_parabola_peak() {
        let (x, fx) = golden_section_max(|x| Ok(-(x - 0.3137f64).powi(2)), -1.0, 2.0, 1e-8).unwrap();
        assert!((x - 0.3137).abs() < 1e-8);
        assert!(fx.abs() < 1e-15);
    }

    #[test]
    fn zero_gamma_is_rejected() {
        let mut b = base(0.5);
        b.gamma = 0.0;
        let axis = SweepAxis::new(AxisName::Delta, -1.0, 1.0, 5).unwrap();
        assert!(matches!(
            stable_coherence_map(&[axis], &b, &MapOptions::default()),
            Err(Error::NoSteadyState)
        ));
        assert!(matches!(find_coherence_optimum(&axis, &b), Err(Error::NoSteadyState)));
    }

    #[test]
    fn psi_zero_row_matches_qubit_formula() {
        let b = base(0.5);
        let psi = SweepAxis::new(AxisName::Psi, 0.0, std::f64::consts::PI, 5).unwrap();
        let delta = SweepAxis::new(AxisName::Delta, -mhz(2.0), mhz(1.0), 31).unwrap();
        let opts = MapOptions {
            audit_points: 0,
            ..MapOptions::default()
        };
        let field = stable_coherence_map(&[psi, delta], &b, &opts).unwrap();
        for (j, d) in delta.values().iter().enumerate() {
            let rho = steady_state_qubit(*d, b.omega_rabi, b.gamma).unwrap();
            let c = coherence_bits(&rho, &BatteryHamiltonian::unit()).unwrap();
            assert_eq!(field.get(&[0, j]), c);
        }
    }

    #[test]
    fn coherence_is_even_in_detuning_at_psi_zero() {
        let b = base(0.5);
        let delta = SweepAxis::new(AxisName::Delta, -mhz(1.0), mhz(1.0), 41).unwrap();
        let opts = MapOptions {
            audit_points: 0,
            ..MapOptions::default()
        };
        let field = stable_coherence_map(&[delta], &b, &opts).unwrap();
        for j in 0..41 {
            assert!((field.values[j] - field.values[40 - j]).abs() <= 1e-10);
        }
    }

    #[test]
    fn audit_points_agree_with_integration() {
        let b = base(0.3);
        let delta = SweepAxis::new(AxisName::Delta, -mhz(0.5), mhz(0.5), 6).unwrap();
        let psi = SweepAxis::new(AxisName::Psi, 0.0, std::f64::consts::PI, 3).unwrap();
        let field = stable_coherence_map(&[psi, delta], &b, &MapOptions::default()).unwrap();
        assert_eq!(field.audit.len(), DEFAULT_AUDIT_POINTS);
        for a in &field.audit {
            assert!((a.analytic - a.integrated).abs() <= AUDIT_TOL);
        }
    }

    #[test]
    fn weak_drive_optimum_is_resonant() {
        let b = base(0.01);
        let axis = SweepAxis::new(AxisName::Delta, -mhz(0.5), mhz(0.5), 21).unwrap();
        let opt = find_coherence_optimum(&axis, &b).unwrap();
        let (x, _) = opt.unimodal().expect("single resonance peak");
        assert!(x.abs() <= axis.step());
    }

    #[test]
    fn split_peak_is_flagged_multimodal() {
        let b = base(0.5);
        let axis = SweepAxis::new(AxisName::Delta, -mhz(1.0), mhz(1.0), 41).unwrap();
        let opt = find_coherence_optimum(&axis, &b).unwrap();
        assert!(opt.multimodal);
        assert_eq!(opt.maxima.len(), 2);
        assert!((opt.maxima[0].0 + opt.maxima[1].0).abs() < 1e-3);
        assert!(opt.unimodal().is_none());
    }

    #[test]
    fn regime_grid_must_be_wide_enough() {
        let g = mhz(0.1);
        let narrow = SweepAxis::new(AxisName::OmegaRabi, 0.5 * g, 3.0 * g, 11).unwrap();
        assert!(classify_drive_regimes(&narrow, g, mhz(2.14), &DetectorSettings::default()).is_err());
    }

    #[test]
    fn coarse_regime_grid_requests_refinement() {
        let g = mhz(0.1);
        let coarse = SweepAxis::new(AxisName::OmegaRabi, 0.2 * g, 3.0 * g, 8).unwrap();
        assert!(matches!(
            classify_drive_regimes(&coarse, g, mhz(2.14), &DetectorSettings::default()),
            Err(Error::GridTooCoarse { .. })
        ));
    }
}
