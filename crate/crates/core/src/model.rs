//! Network model: neuron parameters, torus configuration, state layout,
//! right-hand sides, and the symmetry-group actions.
//!
//! A single neuron follows the modified FitzHugh-Nagumo dynamics
//!
//! ```text
//!   dx/dt = a x - x^3 - y
//!   dy/dt = b x - c y
//! ```
//!
//! Neurons sit on an N x N lattice wrapped into a torus. Each neuron is
//! coupled unidirectionally to its forward neighbor in each direction:
//!
//! ```text
//!   dx[a,b]/dt = a x[a,b] - x[a,b]^3 - y[a,b]
//!                + gamma * (x[a,b] - x[a+1,b])
//!                + delta * (x[a,b] - x[a,b+1])
//! ```
//!
//! with all index arithmetic modulo N. Two tori couple through a mean
//! field: every x-equation of one torus receives `epsilon` times the
//! average of all N^2 x-variables of the other torus.
//!
//! The symmetry group of a single torus is `Z_N x Z_N x Z_2`, generated
//! by the cyclic shifts `sigma` (alpha direction), `rho` (beta direction)
//! and the negation `varpi: (x, y) -> (-x, -y)`.

use crate::error::{Error, Result};

/// Parameters of a single modified FHN neuron.
///
/// The studied regime is `0 < a < 1`, `b > 0`, `c > 0`, `b > a`; values
/// outside it are accepted (the closed-form spectrum stays well defined)
/// but flagged by [`NeuronParams::regime_warnings`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeuronParams {
    /// Excitation parameter `a`.
    pub a: f64,
    /// Recovery gain `b`.
    pub b: f64,
    /// Recovery decay `c`.
    pub c: f64,
}

impl NeuronParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::Config(format!(
                "neuron parameters must be finite (a={a}, b={b}, c={c})"
            )));
        }
        Ok(Self { a, b, c })
    }

    /// Non-fatal warnings for parameters outside the studied regime.
    pub fn regime_warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if !(self.a > 0.0 && self.a < 1.0) {
            w.push(format!("a = {} outside the studied regime 0 < a < 1", self.a));
        }
        if self.b <= 0.0 {
            w.push(format!("b = {} outside the studied regime b > 0", self.b));
        }
        if self.c <= 0.0 {
            w.push(format!("c = {} outside the studied regime c > 0", self.c));
        }
        if self.b <= self.a {
            w.push(format!("b = {} <= a = {} violates the studied regime b > a", self.b, self.a));
        }
        w
    }
}

/// Complete single-torus problem definition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusConfig {
    /// Lattice side N.
    pub n: usize,
    pub neuron: NeuronParams,
    /// Coupling constant in the alpha direction.
    pub gamma: f64,
    /// Coupling constant in the beta direction.
    pub delta: f64,
}

impl TorusConfig {
    pub fn new(n: usize, neuron: NeuronParams, gamma: f64, delta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("lattice side n must be at least 1".into()));
        }
        if !(gamma.is_finite() && delta.is_finite()) {
            return Err(Error::Config(format!(
                "coupling constants must be finite (gamma={gamma}, delta={delta})"
            )));
        }
        Ok(Self { n, neuron, gamma, delta })
    }

    /// Number of state variables, `2 N^2`.
    pub fn dim(&self) -> usize {
        2 * self.n * self.n
    }

    /// Non-fatal diagnostics: parameter-regime warnings plus structural
    /// caveats of the model.
    pub fn diagnostics(&self) -> Vec<String> {
        let mut w = self.neuron.regime_warnings();
        if self.n == 1 {
            w.push("n = 1 is a degenerate torus: self-coupling cancels exactly".into());
        }
        if self.n >= 2 && self.n % 2 == 0 {
            w.push(format!(
                "n = {} is even: rotating-wave Hopf bifurcation may additionally require \
                 next-nearest-neighbor coupling, which this model does not include",
                self.n
            ));
        }
        w
    }
}

/// Two identical tori with mean-field inter-tori coupling `epsilon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoToriConfig {
    pub torus: TorusConfig,
    pub epsilon: f64,
}

impl TwoToriConfig {
    pub fn new(torus: TorusConfig, epsilon: f64) -> Result<Self> {
        if !epsilon.is_finite() {
            return Err(Error::Config(format!("epsilon must be finite (got {epsilon})")));
        }
        Ok(Self { torus, epsilon })
    }

    /// Number of state variables, `4 N^2`.
    pub fn dim(&self) -> usize {
        4 * self.torus.n * self.torus.n
    }
}

/// Flat state vector over one or two tori.
///
/// Layout (single torus): entry `2 (alpha N + beta)` holds `x[alpha,beta]`
/// and entry `2 (alpha N + beta) + 1` holds `y[alpha,beta]`, row-major
/// with `alpha` outer. For two tori, torus #1 occupies the first `2 N^2`
/// entries and torus #2 the next `2 N^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkState {
    n: usize,
    tori: usize,
    values: Vec<f64>,
}

impl NetworkState {
    /// Zero state of a single torus of side `n`.
    pub fn zeros_single(n: usize) -> Self {
        Self { n, tori: 1, values: vec![0.0; 2 * n * n] }
    }

    /// Zero state of two coupled tori of side `n` each.
    pub fn zeros_two_tori(n: usize) -> Self {
        Self { n, tori: 2, values: vec![0.0; 4 * n * n] }
    }

    /// Build a single-torus state from row-major `x` and `y` grids.
    pub fn from_grids(n: usize, x: &[f64], y: &[f64]) -> Result<Self> {
        if x.len() != n * n || y.len() != n * n {
            return Err(Error::DimensionMismatch { got: x.len() + y.len(), expected: 2 * n * n });
        }
        let mut s = Self::zeros_single(n);
        for p in 0..n * n {
            s.values[2 * p] = x[p];
            s.values[2 * p + 1] = y[p];
        }
        Ok(s)
    }

    /// Concatenate two single-torus states into a two-tori state.
    pub fn join(t1: &NetworkState, t2: &NetworkState) -> Result<Self> {
        if t1.n != t2.n || t1.tori != 1 || t2.tori != 1 {
            return Err(Error::DimensionMismatch { got: t2.values.len(), expected: t1.values.len() });
        }
        let mut values = t1.values.clone();
        values.extend_from_slice(&t2.values);
        Ok(Self { n: t1.n, tori: 2, values })
    }

    pub fn from_values(n: usize, tori: usize, values: Vec<f64>) -> Result<Self> {
        let expected = 2 * tori * n * n;
        if values.len() != expected || !(tori == 1 || tori == 2) {
            return Err(Error::DimensionMismatch { got: values.len(), expected });
        }
        Ok(Self { n, tori, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tori(&self) -> usize {
        self.tori
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn x(&self, alpha: usize, beta: usize) -> f64 {
        self.values[2 * (alpha * self.n + beta)]
    }

    pub fn y(&self, alpha: usize, beta: usize) -> f64 {
        self.values[2 * (alpha * self.n + beta) + 1]
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

/// Generators of the torus symmetry group `Z_N x Z_N x Z_2`.
///
/// `SigmaShift` moves the data of neuron `(alpha, beta)` to position
/// `(alpha - 1 mod N, beta)`, `RhoShift` likewise along `beta`, and
/// `VarpiNegation` negates every entry. `sigma^N = rho^N = varpi^2 = id`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupGenerator {
    SigmaShift,
    RhoShift,
    VarpiNegation,
}

/// Apply a group generator to a single-torus state.
///
/// Panics if given a two-tori state; the group actions studied here act
/// on one torus.
pub fn apply_generator(g: GroupGenerator, s: &NetworkState) -> NetworkState {
    assert_eq!(s.tori, 1, "apply_generator expects a single-torus state");
    let n = s.n;
    let mut out = NetworkState::zeros_single(n);
    match g {
        GroupGenerator::SigmaShift => {
            for alpha in 0..n {
                let dst = (alpha + n - 1) % n;
                for beta in 0..n {
                    let from = 2 * (alpha * n + beta);
                    let to = 2 * (dst * n + beta);
                    out.values[to] = s.values[from];
                    out.values[to + 1] = s.values[from + 1];
                }
            }
        }
        GroupGenerator::RhoShift => {
            for alpha in 0..n {
                for beta in 0..n {
                    let dst = (beta + n - 1) % n;
                    let from = 2 * (alpha * n + beta);
                    let to = 2 * (alpha * n + dst);
                    out.values[to] = s.values[from];
                    out.values[to + 1] = s.values[from + 1];
                }
            }
        }
        GroupGenerator::VarpiNegation => {
            for (o, v) in out.values.iter_mut().zip(&s.values) {
                *o = -v;
            }
        }
    }
    out
}

/// Internal dynamics of one neuron: `(a x - x^3 - y, b x - c y)`.
pub fn neuron_rhs(x: f64, y: f64, p: &NeuronParams) -> (f64, f64) {
    (p.a * x - x * x * x - y, p.b * x - p.c * y)
}

/// Intratorus coupling along alpha: `kappa(u_next, u_self) = -u_next + u_self`.
pub fn coupling_kappa(u_next: f64, u_self: f64) -> f64 {
    -u_next + u_self
}

/// Intratorus coupling along beta; same form as `kappa`.
pub fn coupling_mu(u_next: f64, u_self: f64) -> f64 {
    -u_next + u_self
}

/// Single-torus vector field, writing the derivative into `out`.
///
/// `vals` and `out` must both have length `2 N^2`.
pub fn torus_rhs_into(vals: &[f64], c: &TorusConfig, out: &mut [f64]) {
    let n = c.n;
    let p = &c.neuron;
    debug_assert_eq!(vals.len(), 2 * n * n);
    debug_assert_eq!(out.len(), 2 * n * n);
    for alpha in 0..n {
        for beta in 0..n {
            let i = 2 * (alpha * n + beta);
            let x = vals[i];
            let y = vals[i + 1];
            let x_next_a = vals[2 * (((alpha + 1) % n) * n + beta)];
            let x_next_b = vals[2 * (alpha * n + (beta + 1) % n)];
            out[i] = p.a * x - x * x * x - y
                + c.gamma * coupling_kappa(x_next_a, x)
                + c.delta * coupling_mu(x_next_b, x);
            out[i + 1] = p.b * x - p.c * y;
        }
    }
}

/// Single-torus vector field.
pub fn torus_rhs(s: &NetworkState, c: &TorusConfig) -> Result<NetworkState> {
    if s.tori != 1 || s.n != c.n {
        return Err(Error::DimensionMismatch { got: s.values.len(), expected: c.dim() });
    }
    let mut out = NetworkState::zeros_single(c.n);
    torus_rhs_into(&s.values, c, &mut out.values);
    Ok(out)
}

/// Two-tori vector field, writing the derivative into `out`.
///
/// Each half evolves like a single torus; in addition every x-equation
/// receives `epsilon` times the mean of the other torus's x-variables.
pub fn two_tori_rhs_into(vals: &[f64], c: &TwoToriConfig, out: &mut [f64]) {
    let n = c.torus.n;
    let half = 2 * n * n;
    debug_assert_eq!(vals.len(), 2 * half);
    debug_assert_eq!(out.len(), 2 * half);
    let mean_x = |t: &[f64]| -> f64 {
        let mut sum = 0.0;
        for p in 0..n * n {
            sum += t[2 * p];
        }
        sum / (n * n) as f64
    };
    let m1 = mean_x(&vals[..half]);
    let m2 = mean_x(&vals[half..]);
    torus_rhs_into(&vals[..half], &c.torus, &mut out[..half]);
    torus_rhs_into(&vals[half..], &c.torus, &mut out[half..]);
    for p in 0..n * n {
        out[2 * p] += c.epsilon * m2;
        out[half + 2 * p] += c.epsilon * m1;
    }
}

/// Two-tori vector field.
pub fn two_tori_rhs(s: &NetworkState, c: &TwoToriConfig) -> Result<NetworkState> {
    if s.tori != 2 || s.n != c.torus.n {
        return Err(Error::DimensionMismatch { got: s.values.len(), expected: c.dim() });
    }
    let mut out = NetworkState::zeros_two_tori(c.torus.n);
    two_tori_rhs_into(&s.values, c, &mut out.values);
    Ok(out)
}
