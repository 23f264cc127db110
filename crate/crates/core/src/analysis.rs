//! Trajectory post-processing: power spectra, dominant frequencies,
//! phase shifts, and pattern classification.
//!
//! Patterns of interest on one torus:
//!
//! - decay to the origin,
//! - in-phase oscillation (every neuron follows the same waveform),
//! - discrete rotating wave: row-adjacent neurons share one waveform
//!   separated by a fixed fraction `k/N` of the period, and diagonal
//!   translates of the wave are time translates of each other.
//!
//! For two coupled tori the report adds the ratio of the consensus
//! dominant frequencies; the multifrequency pattern pairs a rotating
//! wave in torus #1 with in-phase oscillation at `N` times the frequency
//! in torus #2. Frequencies are in cycles per simulation time unit;
//! ratio checks are dimensionless and therefore convention-free.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::dynamics::Trajectory;

/// Minimum series length for spectral analysis.
pub const MIN_SERIES_LEN: usize = 64;

/// Detrended total power below this means "no oscillation".
pub const NO_OSCILLATION_POWER: f64 = 1e-12;

/// Post-transient amplitude below this classifies as decay.
pub const DECAY_AMPLITUDE: f64 = 1e-4;

/// Phase-shift agreement tolerance, as a fraction of the period.
pub const PHASE_TOL: f64 = 0.02;

/// Normalized RMS tolerance of the diagonal-translation check.
pub const DIAGONAL_NRMSE_TOL: f64 = 0.05;

/// Dominant frequencies must agree within this many spectral bins.
pub const FREQ_AGREEMENT_BINS: f64 = 2.0;

/// One-sided periodogram of a mean-removed, Hann-windowed series.
#[derive(Debug, Clone)]
pub struct PowerSpectrum {
    /// Frequencies in cycles per time unit.
    pub freqs: Vec<f64>,
    pub power: Vec<f64>,
    /// Bin spacing, `1 / (n * dt)`.
    pub resolution: f64,
}

/// Classification of one torus's post-transient behavior.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PatternKind {
    RotatingWave,
    InPhase,
    Decay,
    Unclassified,
}

impl std::fmt::Display for PatternKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PatternKind::RotatingWave => "RotatingWave",
            PatternKind::InPhase => "InPhase",
            PatternKind::Decay => "Decay",
            PatternKind::Unclassified => "Unclassified",
        })
    }
}

/// Pattern classification output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatternReport {
    pub kind: PatternKind,
    /// Row-adjacent phase shift as a fraction of the period, present for
    /// rotating waves.
    pub phase_shift: Option<f64>,
    /// Refined dominant frequency of each neuron's x-series, row-major.
    pub dominant_freq_per_neuron: Vec<f64>,
    /// Outcome of the diagonal-translation check, when it was run.
    pub diagonal_symmetry_ok: Option<bool>,
}

impl PatternReport {
    fn bare(kind: PatternKind) -> Self {
        Self { kind, phase_shift: None, dominant_freq_per_neuron: Vec::new(), diagonal_symmetry_ok: None }
    }
}

/// One-sided periodogram with mean-square normalization: the powers sum
/// to the mean square of the windowed, detrended signal.
pub fn psd(series: &[f64], dt_sample: f64) -> Result<PowerSpectrum> {
    let n = series.len();
    if n < MIN_SERIES_LEN {
        return Err(Error::SeriesTooShort { len: n, min: MIN_SERIES_LEN });
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex64> = series
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let w = 0.5 * (1.0 - (2.0 * std::f64::consts::PI * i as f64 / (n - 1) as f64).cos());
            Complex64::new(w * (v - mean), 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let half = n / 2;
    let nbins = half + 1;
    let res = 1.0 / (n as f64 * dt_sample);
    let mut freqs = Vec::with_capacity(nbins);
    let mut power = Vec::with_capacity(nbins);
    for k in 0..nbins {
        let two_sided = buf[k].norm_sqr() / (n * n) as f64;
        let fold = if k == 0 || (n % 2 == 0 && k == half) { 1.0 } else { 2.0 };
        freqs.push(k as f64 * res);
        power.push(fold * two_sided);
    }
    Ok(PowerSpectrum { freqs, power, resolution: res })
}

/// Frequency of the maximum power bin, refined by quadratic
/// interpolation over the 3-bin neighborhood. Ties break toward the
/// lower frequency.
pub fn dominant_frequency(ps: &PowerSpectrum) -> Result<f64> {
    let total: f64 = ps.power.iter().sum();
    if total < NO_OSCILLATION_POWER {
        return Err(Error::NoOscillation { power: total });
    }
    let mut k_max = 0;
    let mut p_max = f64::NEG_INFINITY;
    for (k, &p) in ps.power.iter().enumerate() {
        if p > p_max {
            p_max = p;
            k_max = k;
        }
    }
    let mut delta = 0.0;
    if k_max > 0 && k_max + 1 < ps.power.len() {
        let (pm, p0, pp) = (ps.power[k_max - 1], ps.power[k_max], ps.power[k_max + 1]);
        let denom = pm - 2.0 * p0 + pp;
        if denom != 0.0 {
            delta = 0.5 * (pm - pp) / denom;
            delta = delta.clamp(-0.5, 0.5);
        }
    }
    Ok((k_max as f64 + delta) * ps.resolution)
}

/// Phase shift of `series_b` relative to `series_a` as a fraction of
/// their common period, in `[0, 1)`: the delay (mod period) maximizing
/// the cross-correlation. Both series must share a dominant frequency
/// within two spectral bins.
pub fn phase_shift(series_a: &[f64], series_b: &[f64], dt_sample: f64) -> Result<f64> {
    let n = series_a.len().min(series_b.len());
    let a = &series_a[..n];
    let b = &series_b[..n];
    let ps_a = psd(a, dt_sample)?;
    let ps_b = psd(b, dt_sample)?;
    let f_a = dominant_frequency(&ps_a)?;
    let f_b = dominant_frequency(&ps_b)?;
    if (f_a - f_b).abs() > FREQ_AGREEMENT_BINS * ps_a.resolution {
        return Err(Error::NotPhaseComparable { f_a, f_b });
    }
    let f = 0.5 * (f_a + f_b);
    let period_samples = 1.0 / (f * dt_sample);
    let lags = period_samples.round() as usize;
    if lags < 2 || 2 * lags >= n {
        return Err(Error::NotPhaseComparable { f_a, f_b });
    }

    let mean = |s: &[f64]| s.iter().sum::<f64>() / s.len() as f64;
    let (ma, mb) = (mean(a), mean(b));
    let overlap = n - lags;
    let mut xcorr = vec![0.0f64; lags];
    for (ell, slot) in xcorr.iter_mut().enumerate() {
        let mut sum = 0.0;
        for i in 0..overlap {
            sum += (a[i] - ma) * (b[i + ell] - mb);
        }
        *slot = sum;
    }
    let mut best = 0;
    for (ell, &v) in xcorr.iter().enumerate() {
        if v > xcorr[best] {
            best = ell;
        }
    }
    // Sub-sample refinement on the correlation peak (circular neighbors).
    let prev = xcorr[(best + lags - 1) % lags];
    let next = xcorr[(best + 1) % lags];
    let denom = prev - 2.0 * xcorr[best] + next;
    let delta = if denom != 0.0 { (0.5 * (prev - next) / denom).clamp(-0.5, 0.5) } else { 0.0 };
    let fraction = (best as f64 + delta) * dt_sample * f;
    Ok(fraction.rem_euclid(1.0))
}

/// Linear interpolation of `series` at fractional sample index `pos`.
fn sample_at(series: &[f64], pos: f64) -> f64 {
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    if i + 1 < series.len() {
        series[i] * (1.0 - frac) + series[i + 1] * frac
    } else {
        series[i]
    }
}

/// Normalized RMS error between `target` and `source` advanced by
/// `shift` samples (fractional, via linear interpolation).
fn nrmse_shifted(target: &[f64], source: &[f64], shift: f64) -> f64 {
    let n = target.len();
    let usable = n - shift.ceil() as usize - 1;
    let mean_t = target.iter().sum::<f64>() / n as f64;
    let mut err = 0.0;
    let mut norm = 0.0;
    for i in 0..usable {
        let t = target[i];
        let s = sample_at(source, i as f64 + shift);
        err += (t - s) * (t - s);
        norm += (t - mean_t) * (t - mean_t);
    }
    if norm == 0.0 {
        return if err == 0.0 { 0.0 } else { f64::INFINITY };
    }
    (err / norm).sqrt()
}

/// Cached post-transient x-series of one torus, row-major.
fn windowed_x_series(traj: &Trajectory, torus: usize) -> Vec<Vec<f64>> {
    let n = traj.system().n();
    let mut out = Vec::with_capacity(n * n);
    for alpha in 0..n {
        for beta in 0..n {
            out.push(traj.windowed_series(traj.x_column(torus, alpha, beta)));
        }
    }
    out
}

/// Circular mean of phase fractions in `[0, 1)`.
fn circular_mean(fractions: &[f64]) -> f64 {
    let sum: Complex64 = fractions
        .iter()
        .map(|&f| Complex64::cis(2.0 * std::f64::consts::PI * f))
        .sum();
    (sum.arg() / (2.0 * std::f64::consts::PI)).rem_euclid(1.0)
}

/// Distance between two phase fractions on the circle.
fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Verify the diagonal-translation structure of a rotating wave with
/// wavenumber `k_wave` and fundamental frequency `freq`: for every
/// diagonal step `k`, the series at `(alpha+k, beta+k)` advanced by
/// `k * (2 k_wave / N) * period` must match the series at `(alpha, beta)`
/// within the normalized RMS tolerance. One diagonal step adds the
/// row shift twice (once per lattice direction).
fn diagonal_translation_holds(
    series: &[Vec<f64>],
    n: usize,
    k_wave: usize,
    freq: f64,
    dt_sample: f64,
) -> bool {
    let period_samples = 1.0 / (freq * dt_sample);
    let phi_diag = (2 * k_wave % n) as f64 / n as f64;
    for k in 1..n {
        let shift_frac = (k as f64 * phi_diag).rem_euclid(1.0);
        let shift = shift_frac * period_samples;
        for alpha in 0..n {
            for beta in 0..n {
                let target = &series[alpha * n + beta];
                let source = &series[((alpha + k) % n) * n + (beta + k) % n];
                if nrmse_shifted(target, source, shift) >= DIAGONAL_NRMSE_TOL {
                    return false;
                }
            }
        }
    }
    true
}

/// Rotating-wave candidate extracted from row-adjacent phase shifts:
/// `(wavenumber, mean shift fraction, consensus frequency)`.
fn rotating_wave_candidate(
    series: &[Vec<f64>],
    n: usize,
    dt_sample: f64,
) -> Result<(usize, f64, f64)> {
    let mut shifts = Vec::with_capacity(n * n);
    for alpha in 0..n {
        for beta in 0..n {
            let a = &series[alpha * n + beta];
            let b = &series[alpha * n + (beta + 1) % n];
            shifts.push(phase_shift(a, b, dt_sample)?);
        }
    }
    let mu = circular_mean(&shifts);
    let k_wave = ((mu * n as f64).round() as usize) % n;
    if k_wave == 0 {
        return Err(Error::NonRotatingWave {
            reason: format!("row-adjacent shifts average {mu:.4}, not a nonzero multiple of 1/N"),
        });
    }
    let target = k_wave as f64 / n as f64;
    for &f in &shifts {
        if circular_distance(f, target) > PHASE_TOL {
            return Err(Error::NonRotatingWave {
                reason: format!("row-adjacent shift {f:.4} departs from {target:.4}"),
            });
        }
    }
    let mut freqs = Vec::with_capacity(series.len());
    for s in series {
        freqs.push(dominant_frequency(&psd(s, dt_sample)?)?);
    }
    Ok((k_wave, mu, median(&freqs)))
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Trajectory-level check of the diagonal-translation relation for a
/// rotating wave. Errors when the trajectory does not carry a
/// rotating-wave structure to check.
pub fn check_diagonal_translation(traj: &Trajectory) -> Result<bool> {
    check_diagonal_translation_torus(traj, 0)
}

fn check_diagonal_translation_torus(traj: &Trajectory, torus: usize) -> Result<bool> {
    let n = traj.system().n();
    let series = windowed_x_series(traj, torus);
    if series[0].len() < MIN_SERIES_LEN {
        return Err(Error::SeriesTooShort { len: series[0].len(), min: MIN_SERIES_LEN });
    }
    let (k_wave, _, freq) = rotating_wave_candidate(&series, n, traj.sample_dt()).map_err(|e| match e {
        Error::NonRotatingWave { reason } => Error::NonRotatingWave { reason },
        other => Error::NonRotatingWave { reason: other.to_string() },
    })?;
    Ok(diagonal_translation_holds(&series, n, k_wave, freq, traj.sample_dt()))
}

/// Classify the post-transient behavior of a single-torus trajectory.
pub fn classify_pattern(traj: &Trajectory) -> PatternReport {
    assert_eq!(traj.system().tori(), 1, "use two_tori_report for coupled-tori trajectories");
    classify_torus(traj, 0)
}

/// Classify one torus of a (possibly coupled) trajectory.
pub fn classify_torus(traj: &Trajectory, torus: usize) -> PatternReport {
    let n = traj.system().n();
    let dt = traj.sample_dt();
    let start = traj.post_transient_start();
    if traj.len() - start < MIN_SERIES_LEN {
        return PatternReport::bare(PatternKind::Unclassified);
    }

    // Decay first: largest magnitude of any state entry in the window.
    let half = 2 * n * n;
    let offset = torus * half;
    let mut amplitude = 0.0f64;
    for i in start..traj.len() {
        let row = &traj.state_row(i)[offset..offset + half];
        for v in row {
            amplitude = amplitude.max(v.abs());
        }
    }
    if amplitude < DECAY_AMPLITUDE {
        return PatternReport { kind: PatternKind::Decay, ..PatternReport::bare(PatternKind::Decay) };
    }

    let series = windowed_x_series(traj, torus);
    let mut freqs = Vec::with_capacity(n * n);
    let mut resolution = 0.0;
    for s in &series {
        match psd(s, dt).and_then(|ps| {
            resolution = ps.resolution;
            dominant_frequency(&ps)
        }) {
            Ok(f) => freqs.push(f),
            Err(_) => return PatternReport::bare(PatternKind::Unclassified),
        }
    }
    let f_min = freqs.iter().cloned().fold(f64::INFINITY, f64::min);
    let f_max = freqs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if f_max - f_min > FREQ_AGREEMENT_BINS * resolution {
        return PatternReport {
            dominant_freq_per_neuron: freqs,
            ..PatternReport::bare(PatternKind::Unclassified)
        };
    }

    // In-phase: every pairwise shift below tolerance. Signed shifts
    // against neuron (0,0) bound the pairwise spread.
    let mut signed = Vec::with_capacity(n * n);
    for s in &series {
        match phase_shift(&series[0], s, dt) {
            Ok(f) => signed.push(if f < 0.5 { f } else { f - 1.0 }),
            Err(_) => return PatternReport {
                dominant_freq_per_neuron: freqs,
                ..PatternReport::bare(PatternKind::Unclassified)
            },
        }
    }
    let s_min = signed.iter().cloned().fold(f64::INFINITY, f64::min);
    let s_max = signed.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if s_max - s_min < PHASE_TOL {
        return PatternReport {
            kind: PatternKind::InPhase,
            phase_shift: None,
            dominant_freq_per_neuron: freqs,
            diagonal_symmetry_ok: None,
        };
    }

    match rotating_wave_candidate(&series, n, dt) {
        Ok((k_wave, mu, freq)) => {
            let ok = diagonal_translation_holds(&series, n, k_wave, freq, dt);
            PatternReport {
                kind: if ok { PatternKind::RotatingWave } else { PatternKind::Unclassified },
                phase_shift: Some(mu),
                dominant_freq_per_neuron: freqs,
                diagonal_symmetry_ok: Some(ok),
            }
        }
        Err(_) => PatternReport {
            dominant_freq_per_neuron: freqs,
            ..PatternReport::bare(PatternKind::Unclassified)
        },
    }
}

/// Consensus dominant frequency of a report: the median over neurons.
pub fn consensus_frequency(report: &PatternReport) -> Option<f64> {
    if report.dominant_freq_per_neuron.is_empty() {
        None
    } else {
        Some(median(&report.dominant_freq_per_neuron))
    }
}

/// Classify both tori of a coupled-tori trajectory and form the ratio of
/// their consensus dominant frequencies (torus #2 over torus #1).
pub fn two_tori_report(traj: &Trajectory) -> Result<(PatternReport, PatternReport, f64)> {
    assert_eq!(traj.system().tori(), 2, "two_tori_report needs a coupled-tori trajectory");
    let r1 = classify_torus(traj, 0);
    let r2 = classify_torus(traj, 1);
    let f1 = consensus_frequency(&r1).ok_or_else(|| Error::FrequencyUnavailable {
        torus: 1,
        reason: format!("classified {:?} with no dominant frequencies", r1.kind),
    })?;
    let f2 = consensus_frequency(&r2).ok_or_else(|| Error::FrequencyUnavailable {
        torus: 2,
        reason: format!("classified {:?} with no dominant frequencies", r2.kind),
    })?;
    Ok((r1, r2, f2 / f1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{
        fig2_initial_conditions, simulate_torus, simulate_two_tori, IntegratorSettings,
        SystemConfig, Trajectory,
    };
    use crate::model::{
        apply_generator, GroupGenerator, NetworkState, NeuronParams, TorusConfig, TwoToriConfig,
    };
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn sine_series(freq: f64, phase: f64, dt: f64, len: usize) -> Vec<f64> {
        (0..len).map(|i| (2.0 * PI * freq * i as f64 * dt - phase).sin()).collect()
    }

    #[test]
    fn psd_peaks_at_sinusoid_frequency() {
        let dt = 0.01;
        let series = sine_series(0.4, 0.0, dt, 20_000);
        let ps = psd(&series, dt).unwrap();
        let f = dominant_frequency(&ps).unwrap();
        assert!((f - 0.4).abs() <= ps.resolution, "dominant {f}");
    }

    #[test]
    fn psd_of_constant_series_is_empty_after_detrend() {
        let series = vec![3.7; 512];
        let ps = psd(&series, 0.05).unwrap();
        let total: f64 = ps.power.iter().sum();
        assert!(total < 1e-12);
        assert!(matches!(dominant_frequency(&ps), Err(Error::NoOscillation { .. })));
    }

    #[test]
    fn psd_resolves_harmonic_pair() {
        let dt = 0.02;
        let n = 10_000;
        let f0 = 0.3;
        let series: Vec<f64> = (0..n)
            .map(|i| {
                let t = i as f64 * dt;
                (2.0 * PI * f0 * t).sin() + (2.0 * PI * 3.0 * f0 * t).sin()
            })
            .collect();
        let ps = psd(&series, dt).unwrap();
        // Two peaks with frequency ratio 3.
        let mut indexed: Vec<(f64, f64)> = ps.freqs.iter().cloned().zip(ps.power.iter().cloned()).collect();
        indexed.sort_by(|a, b| b.1.total_cmp(&a.1));
        let (fa, fb) = (indexed[0].0.min(indexed[1].0), indexed[0].0.max(indexed[1].0));
        assert!((fb / fa - 3.0).abs() < 3.0 * ps.resolution / fa);
    }

    #[test]
    fn psd_parseval_identity() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let n = 1000;
        let series: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let ps = psd(&series, 0.05).unwrap();
        let total: f64 = ps.power.iter().sum();
        let mean = series.iter().sum::<f64>() / n as f64;
        let windowed_ms: f64 = series
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let w = 0.5 * (1.0 - (2.0 * PI * i as f64 / (n - 1) as f64).cos());
                (w * (v - mean)).powi(2)
            })
            .sum::<f64>()
            / n as f64;
        assert_relative_eq!(total, windowed_ms, max_relative = 1e-8);
    }

    #[test]
    fn dominant_frequency_refinement() {
        let dt = 0.01;
        // 200 time units -> resolution 0.005; refinement should land well
        // within half a bin.
        let series = sine_series(0.4, 0.3, dt, 20_000);
        let f = dominant_frequency(&psd(&series, dt).unwrap()).unwrap();
        assert!((f - 0.4).abs() < 0.005);
    }

    #[test]
    fn dominant_frequency_rejects_decayed_series() {
        let series: Vec<f64> = (0..1000).map(|i| 1e-8 * (-(i as f64) / 100.0).exp()).collect();
        let ps = psd(&series, 0.05).unwrap();
        assert!(matches!(dominant_frequency(&ps), Err(Error::NoOscillation { .. })));
    }

    #[test]
    fn phase_shift_of_identical_series_is_zero() {
        let dt = 0.05;
        let series = sine_series(0.4, 0.0, dt, 4000);
        let f = phase_shift(&series, &series, dt).unwrap();
        assert!(f < 0.01 || f > 0.99, "shift {f}");
    }

    #[test]
    fn phase_shift_recovers_constructed_delay() {
        let dt = 0.05;
        let freq = 0.4;
        let a = sine_series(freq, 0.0, dt, 4000);
        // b delayed by a third of the period: b(t) = a(t - T/3).
        let b = sine_series(freq, 2.0 * PI / 3.0, dt, 4000);
        let f = phase_shift(&a, &b, dt).unwrap();
        assert!((f - 1.0 / 3.0).abs() < 0.02, "shift {f}");
    }

    #[test]
    fn phase_shift_antisymmetry() {
        let dt = 0.05;
        for phase in [0.3, 1.1, 2.9, 4.2] {
            let a = sine_series(0.37, 0.0, dt, 5000);
            let b = sine_series(0.37, phase, dt, 5000);
            let fab = phase_shift(&a, &b, dt).unwrap();
            let fba = phase_shift(&b, &a, dt).unwrap();
            let sum = (fab + fba).rem_euclid(1.0);
            assert!(sum < 0.01 || sum > 0.99, "sum {sum}");
        }
    }

    #[test]
    fn phase_shift_rejects_mismatched_frequencies() {
        let dt = 0.05;
        let a = sine_series(0.4, 0.0, dt, 4000);
        let b = sine_series(1.3, 0.0, dt, 4000);
        assert!(matches!(phase_shift(&a, &b, dt), Err(Error::NotPhaseComparable { .. })));
    }

    fn synthetic_config(n: usize) -> TorusConfig {
        TorusConfig::new(n, NeuronParams::new(0.01, 0.9, 0.9).unwrap(), 2.0, 2.0).unwrap()
    }

    /// Synthetic single-torus trajectory from a per-neuron x generator.
    fn synthetic_trajectory<F>(n: usize, dt: f64, t_end: f64, gen: F) -> Trajectory
    where
        F: Fn(usize, usize, f64) -> f64,
    {
        let len = (t_end / dt) as usize;
        let dim = 2 * n * n;
        let mut times = Vec::with_capacity(len);
        let mut data = Vec::with_capacity(len * dim);
        for i in 0..len {
            let t = i as f64 * dt;
            times.push(t);
            for alpha in 0..n {
                for beta in 0..n {
                    data.push(gen(alpha, beta, t));
                    data.push(0.0);
                }
            }
        }
        let settings = IntegratorSettings { dt, t_end, record_stride: 1, transient_discard: 10.0 };
        Trajectory::from_parts(times, data, SystemConfig::Single(synthetic_config(n)), settings).unwrap()
    }

    #[test]
    fn diagonal_translation_true_for_synthetic_wave() {
        let n = 3;
        let traj = synthetic_trajectory(n, 0.05, 200.0, |alpha, beta, t| {
            (2.0 * PI * 0.4 * t - 2.0 * PI * ((alpha + beta) % n) as f64 / n as f64).sin()
        });
        assert!(check_diagonal_translation(&traj).unwrap());
        let report = classify_pattern(&traj);
        assert_eq!(report.kind, PatternKind::RotatingWave);
        let phi = report.phase_shift.unwrap();
        assert!((phi - 1.0 / 3.0).abs() < 0.02);
        // N * phi lands on an integer.
        assert!((phi * n as f64 - (phi * n as f64).round()).abs() < 0.05);
    }

    #[test]
    fn diagonal_translation_rejects_in_phase_input() {
        let traj = synthetic_trajectory(3, 0.05, 200.0, |_, _, t| (2.0 * PI * 0.4 * t).sin());
        match check_diagonal_translation(&traj) {
            Err(Error::NonRotatingWave { .. }) => {}
            other => panic!("expected NonRotatingWave, got {other:?}"),
        }
        // A claimed nonzero shift structure on in-phase data must fail the
        // translation test itself.
        let series = windowed_x_series(&traj, 0);
        assert!(!diagonal_translation_holds(&series, 3, 1, 0.4, 0.05));
    }

    #[test]
    fn classify_decay_on_shrunken_state() {
        let traj = synthetic_trajectory(3, 0.05, 200.0, |_, _, t| 1e-5 * (-t / 50.0).exp());
        let report = classify_pattern(&traj);
        assert_eq!(report.kind, PatternKind::Decay);
        assert!(report.dominant_freq_per_neuron.is_empty());
    }

    #[test]
    fn classify_in_phase_on_synchronous_wave() {
        let traj = synthetic_trajectory(4, 0.05, 200.0, |_, _, t| (2.0 * PI * 0.35 * t).sin());
        let report = classify_pattern(&traj);
        assert_eq!(report.kind, PatternKind::InPhase);
        assert_eq!(report.dominant_freq_per_neuron.len(), 16);
    }

    #[test]
    fn classify_unclassified_on_frequency_disagreement() {
        let traj = synthetic_trajectory(3, 0.05, 200.0, |alpha, _, t| {
            (2.0 * PI * (0.3 + 0.1 * alpha as f64) * t).sin()
        });
        assert_eq!(classify_pattern(&traj).kind, PatternKind::Unclassified);
    }

    #[test]
    fn uniform_initial_conditions_never_rotate() {
        // Synchrony is flow-invariant, so a uniform start decays or stays
        // in phase regardless of the coupling.
        let c = synthetic_config(3);
        let ic = crate::dynamics::uniform_state(3, 0.4, 0.2);
        let traj = simulate_torus(&c, &ic, &IntegratorSettings::default()).unwrap();
        let report = classify_pattern(&traj);
        assert!(matches!(report.kind, PatternKind::Decay | PatternKind::InPhase));
    }

    #[test]
    fn fig2_low_coupling_decays_and_high_coupling_rotates() {
        let settings = IntegratorSettings::default();
        let low = TorusConfig::new(3, NeuronParams::new(0.01, 0.9, 0.9).unwrap(), 0.1, 0.1).unwrap();
        let traj = simulate_torus(&low, &fig2_initial_conditions(), &settings).unwrap();
        assert_eq!(classify_pattern(&traj).kind, PatternKind::Decay);

        let high = synthetic_config(3);
        let traj = simulate_torus(&high, &fig2_initial_conditions(), &settings).unwrap();
        let report = classify_pattern(&traj);
        assert_eq!(report.kind, PatternKind::RotatingWave);
        let phi = report.phase_shift.unwrap();
        assert!((phi - 1.0 / 3.0).abs() < 0.02, "phase shift {phi}");
        assert_eq!(report.diagonal_symmetry_ok, Some(true));
    }

    #[test]
    fn classification_commutes_with_group_actions() {
        let c = synthetic_config(3);
        let traj = simulate_torus(&c, &fig2_initial_conditions(), &IntegratorSettings::default()).unwrap();
        let base = classify_pattern(&traj);
        assert_eq!(base.kind, PatternKind::RotatingWave);
        let base_phi = base.phase_shift.unwrap();

        for gens in [
            vec![GroupGenerator::SigmaShift],
            vec![GroupGenerator::RhoShift],
            vec![GroupGenerator::VarpiNegation],
            vec![GroupGenerator::SigmaShift, GroupGenerator::RhoShift],
        ] {
            let moved = traj.map_states(|row| {
                let mut s = NetworkState::from_values(3, 1, row.to_vec()).unwrap();
                for &g in &gens {
                    s = apply_generator(g, &s);
                }
                s.values().to_vec()
            });
            let report = classify_pattern(&moved);
            assert_eq!(report.kind, base.kind, "kind changed under {gens:?}");
            // The diagonal relabeling sigma.rho preserves the phase shift.
            if gens.len() == 2 {
                let phi = report.phase_shift.unwrap();
                assert!(circular_distance(phi, base_phi) < 0.01);
            }
        }
    }

    #[test]
    fn two_tori_synthetic_triple_frequency() {
        let n = 3;
        let dt = 0.05;
        let len = 4000usize;
        let dim = 4 * n * n;
        let mut times = Vec::with_capacity(len);
        let mut data = Vec::with_capacity(len * dim);
        for i in 0..len {
            let t = i as f64 * dt;
            times.push(t);
            for _ in 0..n * n {
                data.push((2.0 * PI * 0.3 * t).sin());
                data.push(0.0);
            }
            // Torus #2 runs three times faster.
            for _ in 0..n * n {
                data.push((2.0 * PI * 0.9 * t).sin());
                data.push(0.0);
            }
        }
        let torus = synthetic_config(n);
        let system = SystemConfig::Two(TwoToriConfig::new(torus, 0.5).unwrap());
        let settings = IntegratorSettings { dt, t_end: 200.0, record_stride: 1, transient_discard: 10.0 };
        let traj = Trajectory::from_parts(times, data, system, settings).unwrap();
        let (r1, r2, ratio) = two_tori_report(&traj).unwrap();
        assert_eq!(r1.kind, PatternKind::InPhase);
        assert_eq!(r2.kind, PatternKind::InPhase);
        assert!((ratio - 3.0).abs() < 0.05, "ratio {ratio}");
    }

    #[test]
    fn two_tori_decoupled_identical_waves_have_unit_ratio() {
        let torus = synthetic_config(3);
        let c = TwoToriConfig::new(torus, 0.0).unwrap();
        let ic = NetworkState::join(&fig2_initial_conditions(), &fig2_initial_conditions()).unwrap();
        let traj = simulate_two_tori(&c, &ic, &IntegratorSettings::default()).unwrap();
        let (r1, r2, ratio) = two_tori_report(&traj).unwrap();
        assert_eq!(r1.kind, PatternKind::RotatingWave);
        assert_eq!(r2.kind, PatternKind::RotatingWave);
        assert!((ratio - 1.0).abs() < 1e-6, "ratio {ratio}");
    }

    #[test]
    fn two_tori_report_errors_when_frequency_unavailable() {
        // epsilon = 0 and torus #2 uniform: it decays, so no frequency.
        let torus = synthetic_config(3);
        let c = TwoToriConfig::new(torus, 0.0).unwrap();
        let ic = NetworkState::join(
            &fig2_initial_conditions(),
            &crate::dynamics::uniform_state(3, 0.1, 0.1),
        )
        .unwrap();
        let traj = simulate_two_tori(&c, &ic, &IntegratorSettings::default()).unwrap();
        assert!(matches!(two_tori_report(&traj), Err(Error::FrequencyUnavailable { torus: 2, .. })));
    }
}
