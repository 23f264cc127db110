//! Fixed-step integration of the torus vector fields.
//!
//! Classical fourth-order Runge-Kutta with a fixed step. The dynamics at
//! the studied parameters are non-stiff (|lambda| of order 1..60), and a
//! fixed step keeps runs bit-reproducible; adaptivity buys nothing here.
//! A divergence guard aborts when any state magnitude exceeds 1e6: the
//! cubic nonlinearity confines true solutions, so escape means a broken
//! setup (usually a wildly wrong step size).

use crate::error::{Error, Result};
use crate::model::{two_tori_rhs_into, torus_rhs_into, NetworkState, TorusConfig, TwoToriConfig};

/// Divergence guard threshold.
pub const DIVERGENCE_GUARD: f64 = 1e6;

/// Integrator settings.
///
/// Defaults: `dt = 0.01`, `t_end = 400`, every 5th step recorded,
/// first 200 time units discarded before pattern analysis. The studied
/// oscillation periods are of order 1..10 time units, so this leaves at
/// least twenty periods of usable record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorSettings {
    /// Fixed step size.
    pub dt: f64,
    /// Final time.
    pub t_end: f64,
    /// Store every k-th step.
    pub record_stride: usize,
    /// Time to drop before analysis (applied at analysis time).
    pub transient_discard: f64,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self { dt: 0.01, t_end: 400.0, record_stride: 5, transient_discard: 200.0 }
    }
}

impl IntegratorSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("dt must be positive (got {})", self.dt)));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::Config(format!("t_end must be positive (got {})", self.t_end)));
        }
        if self.record_stride == 0 {
            return Err(Error::Config("record_stride must be at least 1".into()));
        }
        if !(self.transient_discard >= 0.0) || self.t_end <= self.transient_discard {
            return Err(Error::Config(format!(
                "need 0 <= transient_discard < t_end (got {} vs {})",
                self.transient_discard, self.t_end
            )));
        }
        Ok(())
    }

    /// Spacing of recorded samples.
    pub fn sample_dt(&self) -> f64 {
        self.dt * self.record_stride as f64
    }
}

/// Which system a trajectory belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SystemConfig {
    Single(TorusConfig),
    Two(TwoToriConfig),
}

impl SystemConfig {
    pub fn n(&self) -> usize {
        match self {
            SystemConfig::Single(c) => c.n,
            SystemConfig::Two(c) => c.torus.n,
        }
    }

    pub fn tori(&self) -> usize {
        match self {
            SystemConfig::Single(_) => 1,
            SystemConfig::Two(_) => 2,
        }
    }

    pub fn dim(&self) -> usize {
        2 * self.tori() * self.n() * self.n()
    }
}

/// Recorded time grid and states from one integration.
#[derive(Debug, Clone)]
pub struct Trajectory {
    times: Vec<f64>,
    /// Row-major: one state row of `dim` entries per recorded time.
    data: Vec<f64>,
    dim: usize,
    system: SystemConfig,
    settings: IntegratorSettings,
}

impl Trajectory {
    pub fn from_parts(
        times: Vec<f64>,
        data: Vec<f64>,
        system: SystemConfig,
        settings: IntegratorSettings,
    ) -> Result<Self> {
        let dim = system.dim();
        if times.is_empty() || data.len() != times.len() * dim {
            return Err(Error::MalformedTrajectory(format!(
                "{} samples of dimension {} do not fill {} values",
                times.len(),
                dim,
                data.len()
            )));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::MalformedTrajectory("times must be strictly increasing".into()));
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(Error::MalformedTrajectory("non-finite state entry".into()));
        }
        Ok(Self { times, data, dim, system, settings })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn system(&self) -> &SystemConfig {
        &self.system
    }

    pub fn settings(&self) -> &IntegratorSettings {
        &self.settings
    }

    pub fn sample_dt(&self) -> f64 {
        if self.times.len() >= 2 {
            self.times[1] - self.times[0]
        } else {
            self.settings.sample_dt()
        }
    }

    pub fn state_row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn last_state(&self) -> &[f64] {
        self.state_row(self.len() - 1)
    }

    /// Index of the first sample at or after the transient cutoff.
    pub fn post_transient_start(&self) -> usize {
        let cut = self.settings.transient_discard;
        self.times.iter().position(|&t| t >= cut).unwrap_or(self.times.len())
    }

    /// Column index of `x[alpha, beta]` of the given torus (0 or 1).
    pub fn x_column(&self, torus: usize, alpha: usize, beta: usize) -> usize {
        let n = self.system.n();
        torus * 2 * n * n + 2 * (alpha * n + beta)
    }

    /// One scalar series over the whole record.
    pub fn series(&self, column: usize) -> Vec<f64> {
        (0..self.len()).map(|i| self.data[i * self.dim + column]).collect()
    }

    /// One scalar series over the post-transient window.
    pub fn windowed_series(&self, column: usize) -> Vec<f64> {
        let start = self.post_transient_start();
        (start..self.len()).map(|i| self.data[i * self.dim + column]).collect()
    }

    /// Apply a state-space map to every recorded row (used for symmetry
    /// checks on whole trajectories).
    pub fn map_states<F>(&self, f: F) -> Trajectory
    where
        F: Fn(&[f64]) -> Vec<f64>,
    {
        let mut data = Vec::with_capacity(self.data.len());
        for i in 0..self.len() {
            let row = f(self.state_row(i));
            assert_eq!(row.len(), self.dim);
            data.extend(row);
        }
        Trajectory { times: self.times.clone(), data, ..*self }
    }
}

/// Integrate an arbitrary autonomous vector field with fixed-step RK4.
///
/// Records the initial state and every `record_stride`-th step after it.
pub fn integrate<F>(rhs: F, ic: &[f64], settings: &IntegratorSettings) -> Result<(Vec<f64>, Vec<f64>)>
where
    F: Fn(&[f64], &mut [f64]),
{
    settings.validate()?;
    let dim = ic.len();
    let steps = (settings.t_end / settings.dt).round() as usize;
    let dt = settings.dt;

    let mut state = ic.to_vec();
    let mut k1 = vec![0.0; dim];
    let mut k2 = vec![0.0; dim];
    let mut k3 = vec![0.0; dim];
    let mut k4 = vec![0.0; dim];
    let mut stage = vec![0.0; dim];

    let mut times = Vec::with_capacity(steps / settings.record_stride + 2);
    let mut data = Vec::with_capacity((steps / settings.record_stride + 2) * dim);
    times.push(0.0);
    data.extend_from_slice(&state);

    for step in 1..=steps {
        rhs(&state, &mut k1);
        for i in 0..dim {
            stage[i] = state[i] + 0.5 * dt * k1[i];
        }
        rhs(&stage, &mut k2);
        for i in 0..dim {
            stage[i] = state[i] + 0.5 * dt * k2[i];
        }
        rhs(&stage, &mut k3);
        for i in 0..dim {
            stage[i] = state[i] + dt * k3[i];
        }
        rhs(&stage, &mut k4);
        for i in 0..dim {
            state[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let t = step as f64 * dt;
        if state.iter().any(|v| !v.is_finite() || v.abs() > DIVERGENCE_GUARD) {
            return Err(Error::Diverged { t });
        }
        if step % settings.record_stride == 0 {
            times.push(t);
            data.extend_from_slice(&state);
        }
    }
    Ok((times, data))
}

/// Integrate a single torus from the given initial state.
pub fn simulate_torus(
    c: &TorusConfig,
    ic: &NetworkState,
    settings: &IntegratorSettings,
) -> Result<Trajectory> {
    if ic.tori() != 1 || ic.n() != c.n {
        return Err(Error::DimensionMismatch { got: ic.values().len(), expected: c.dim() });
    }
    let (times, data) = integrate(|s, out| torus_rhs_into(s, c, out), ic.values(), settings)?;
    Trajectory::from_parts(times, data, SystemConfig::Single(*c), *settings)
}

/// Integrate two coupled tori from the given initial state.
pub fn simulate_two_tori(
    c: &TwoToriConfig,
    ic: &NetworkState,
    settings: &IntegratorSettings,
) -> Result<Trajectory> {
    if ic.tori() != 2 || ic.n() != c.torus.n {
        return Err(Error::DimensionMismatch { got: ic.values().len(), expected: c.dim() });
    }
    let (times, data) = integrate(|s, out| two_tori_rhs_into(s, c, out), ic.values(), settings)?;
    Trajectory::from_parts(times, data, SystemConfig::Two(*c), *settings)
}

/// The 3x3 initial conditions used throughout the reference runs,
/// row-major over the lattice.
pub const FIG2_X0: [f64; 9] =
    [0.8462, 0.2026, 0.8381, 0.6813, 0.8318, 0.7095, 0.3046, 0.1934, 0.3028];
pub const FIG2_Y0: [f64; 9] =
    [0.5252, 0.6721, 0.0196, 0.3795, 0.5028, 0.4289, 0.1897, 0.6822, 0.5417];

/// The reference 3x3 initial state.
pub fn fig2_initial_conditions() -> NetworkState {
    NetworkState::from_grids(3, &FIG2_X0, &FIG2_Y0).expect("fixed-size grids")
}

/// Row-major tiling of the reference 9-vector over an N x N lattice.
pub fn tiled_initial_conditions(n: usize) -> NetworkState {
    let nn = n * n;
    let x: Vec<f64> = (0..nn).map(|i| FIG2_X0[i % 9]).collect();
    let y: Vec<f64> = (0..nn).map(|i| FIG2_Y0[i % 9]).collect();
    NetworkState::from_grids(n, &x, &y).expect("matching grids")
}

/// Uniform single-torus state.
pub fn uniform_state(n: usize, x: f64, y: f64) -> NetworkState {
    let nn = n * n;
    NetworkState::from_grids(n, &vec![x; nn], &vec![y; nn]).expect("matching grids")
}

/// The 11x11 two-tori initial state: both tori tiled from the reference
/// 9-vector, with the explicitly listed neurons overriding their tiled
/// values (torus #1 row 0, columns 0..=3; torus #2 row 10, columns
/// 7..=10, zero-based).
pub fn fig4_initial_conditions() -> NetworkState {
    let n = 11;
    let mut t1 = tiled_initial_conditions(n);
    let mut t2 = tiled_initial_conditions(n);
    let x1 = [6.489, 9.3843, 6.9745, 3.3656];
    let y1 = [0.8862, 1.7536, 8.3197, 7.9935];
    for (j, (&x, &y)) in x1.iter().zip(&y1).enumerate() {
        let p = 2 * j; // row 0, columns 0..=3
        t1.values_mut()[p] = x;
        t1.values_mut()[p + 1] = y;
    }
    let x2 = [0.5475, 9.7797, 2.3655, 3.8290];
    let y2 = [4.8460, 4.3027, 7.5896, 4.9924];
    for (j, (&x, &y)) in x2.iter().zip(&y2).enumerate() {
        let p = 2 * (10 * n + 7 + j); // row 10, columns 7..=10
        t2.values_mut()[p] = x;
        t2.values_mut()[p + 1] = y;
    }
    NetworkState::join(&t1, &t2).expect("matching sides")
}

/// Default initial state when none is supplied: the reference 3x3 values
/// for N = 3, the tiled extension otherwise. For two tori, torus #2 is
/// seeded on the synchronous subspace (the multifrequency pattern pairs a
/// rotating wave with in-phase oscillations, and the in-phase subspace is
/// flow-invariant); the 11x11 case uses the tiled-with-overrides state.
pub fn default_initial_state(n: usize, two_tori: bool) -> NetworkState {
    let t1 = if n == 3 { fig2_initial_conditions() } else { tiled_initial_conditions(n) };
    if !two_tori {
        return t1;
    }
    if n == 11 {
        return fig4_initial_conditions();
    }
    let t2 = uniform_state(n, 0.1, 0.1);
    NetworkState::join(&t1, &t2).expect("matching sides")
}
