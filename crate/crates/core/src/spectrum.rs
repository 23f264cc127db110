//! Closed-form eigenstructure of the linearization about the origin,
//! numeric matrix oracle, Hopf-boundary location, and origin stability.
//!
//! Linearizing the torus network at the origin gives a block-circulant
//! matrix `M` built from the 2x2 blocks
//!
//! ```text
//!   D = [ d  -1 ]    E = [ -gamma  0 ]    F = [ -delta  0 ]
//!       [ b  -c ]        [    0    0 ]        [    0    0 ]
//! ```
//!
//! with `d = a + gamma + delta`. The spectrum decomposes over the modes
//! `G(r,s) = D + zeta_r E + zeta_s F`, `zeta_k = exp(2 pi i k / N)`, one
//! 2x2 eigenproblem per pair `(r, s)`:
//!
//! ```text
//!   lambda(r,s)_{1,2} = 1/2 [ -c + a + gamma (1 - zeta_r) + delta (1 - zeta_s) ]
//!                     +/- 1/2 sqrt( [ c + a + gamma (1 - zeta_r) + delta (1 - zeta_s) ]^2 - 4 b )
//! ```
//!
//! using the principal complex square root. The real/imaginary split
//! writes the square-root argument as `a1 + i b1` and its root as
//! `a2 + i b2`; branch 1 carries `+a2` (the larger real part).

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{NeuronParams, TorusConfig, TwoToriConfig};

/// Largest lattice side accepted by the dense eigensolve oracle.
pub const DENSE_ORACLE_MAX_N: usize = 8;

/// Bisection stops when the residual magnitude drops below this.
pub const HOPF_RESIDUAL_TOL: f64 = 1e-10;

/// Bisection stops when the bracket width drops below this.
pub const HOPF_BRACKET_TOL: f64 = 1e-12;

/// Imaginary parts smaller than this at a crossing flag a degenerate
/// (steady-state) crossing instead of a Hopf point.
pub const DEGENERATE_IM_TOL: f64 = 1e-8;

/// Discrete wavenumber pair indexing one 2x2 eigenproblem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeIndex {
    pub r: usize,
    pub s: usize,
}

impl ModeIndex {
    pub fn new(r: usize, s: usize, n: usize) -> Result<Self> {
        if r >= n || s >= n {
            return Err(Error::InvalidMode {
                r: r as i64,
                s: s as i64,
                n,
                reason: "indices must lie in [0, N-1]".into(),
            });
        }
        Ok(Self { r, s })
    }

    /// True for the synchronous mode `(0, 0)`.
    pub fn is_zero(&self) -> bool {
        self.r == 0 && self.s == 0
    }

    /// Conjugate partner `(N - r, N - s) mod N`.
    pub fn conjugate(&self, n: usize) -> ModeIndex {
        ModeIndex { r: (n - self.r) % n, s: (n - self.s) % n }
    }
}

/// Eigenvalue branch: branch 1 takes `+a2` (the larger real part),
/// branch 2 takes `-a2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    One,
    Two,
}

/// Parameter varied when locating a Hopf boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VaryParam {
    Gamma,
    Delta,
}

/// Per-mode eigenvalue pair with its real/imaginary decomposition terms.
#[derive(Debug, Clone, Copy)]
pub struct ModeSpectrum {
    pub mode: ModeIndex,
    pub lambda1: Complex64,
    pub lambda2: Complex64,
    pub a1: f64,
    pub b1: f64,
    pub a2: f64,
    pub b2: f64,
    pub re1: f64,
    pub re2: f64,
    pub im1: f64,
    pub im2: f64,
}

/// Origin stability classification.
#[derive(Debug, Clone)]
pub struct StabilityVerdict {
    pub stable: bool,
    pub max_re: f64,
    /// Modes attaining the maximal real part (ties within 1e-12).
    pub critical_modes: Vec<ModeIndex>,
}

/// `zeta_k = exp(2 pi i k / N)`.
fn zeta(k: usize, n: usize) -> Complex64 {
    Complex64::cis(2.0 * PI * k as f64 / n as f64)
}

/// `a + gamma (1 - zeta_r) + delta (1 - zeta_s)`, the coupled excitation
/// term shared by the eigenvalue and eigenvector formulas.
fn coupled_term(mode: ModeIndex, c: &TorusConfig) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    Complex64::new(c.neuron.a, 0.0)
        + c.gamma * (one - zeta(mode.r, c.n))
        + c.delta * (one - zeta(mode.s, c.n))
}

/// The 2x2 mode matrix `G(r,s) = D + zeta_r E + zeta_s F`.
pub fn mode_matrix(mode: ModeIndex, c: &TorusConfig) -> Matrix2<Complex64> {
    let d = c.neuron.a + c.gamma + c.delta;
    let g00 = Complex64::new(d, 0.0) - c.gamma * zeta(mode.r, c.n) - c.delta * zeta(mode.s, c.n);
    Matrix2::new(
        g00,
        Complex64::new(-1.0, 0.0),
        Complex64::new(c.neuron.b, 0.0),
        Complex64::new(-c.neuron.c, 0.0),
    )
}

/// Eigenvalue pair of `G(r,s)` in closed form (principal square root).
pub fn closed_form_eigenvalues(mode: ModeIndex, c: &TorusConfig) -> (Complex64, Complex64) {
    let u = coupled_term(mode, c);
    let cc = Complex64::new(c.neuron.c, 0.0);
    let linear = -cc + u;
    let root = ((cc + u) * (cc + u) - Complex64::new(4.0 * c.neuron.b, 0.0)).sqrt();
    (0.5 * (linear + root), 0.5 * (linear - root))
}

/// Eigenvalues of a single uncoupled neuron linearized at the origin:
/// `lambda = (-c + a +/- sqrt((c + a)^2 - 4 b)) / 2`.
pub fn uncoupled_eigenvalues(p: &NeuronParams) -> (Complex64, Complex64) {
    let disc = Complex64::new((p.c + p.a) * (p.c + p.a) - 4.0 * p.b, 0.0);
    let root = disc.sqrt();
    let linear = Complex64::new(-p.c + p.a, 0.0);
    (0.5 * (linear + root), 0.5 * (linear - root))
}

/// Real and imaginary parts `(a1, b1)` of the square-root argument
/// `[c + a + gamma (1 - zeta_r) + delta (1 - zeta_s)]^2 - 4 b`, written
/// out trigonometrically.
fn root_argument(mode: ModeIndex, c: &TorusConfig) -> (f64, f64) {
    let n = c.n as f64;
    let (a, b, cc) = (c.neuron.a, c.neuron.b, c.neuron.c);
    let tr = 2.0 * PI * mode.r as f64 / n;
    let ts = 2.0 * PI * mode.s as f64 / n;
    let p = cc + a + c.gamma * (1.0 - tr.cos()) + c.delta * (1.0 - ts.cos());
    let q = -c.gamma * tr.sin() - c.delta * ts.sin();
    (p * p - q * q - 4.0 * b, 2.0 * p * q)
}

/// Decomposition terms `(a1, b1, a2, b2)` with
/// `a2 = sqrt(sqrt(a1^2 + b1^2) + a1) / sqrt(2)` and
/// `b2 = sgn(b1) sqrt(sqrt(a1^2 + b1^2) - a1) / sqrt(2)`, `sgn(0) = 0`.
pub fn decomposition_terms(mode: ModeIndex, c: &TorusConfig) -> (f64, f64, f64, f64) {
    let (a1, b1) = root_argument(mode, c);
    let m = a1.hypot(b1);
    let a2 = ((m + a1).max(0.0) / 2.0).sqrt();
    let sgn = if b1 > 0.0 {
        1.0
    } else if b1 < 0.0 {
        -1.0
    } else {
        0.0
    };
    let b2 = sgn * ((m - a1).max(0.0) / 2.0).sqrt();
    (a1, b1, a2, b2)
}

/// Principal-branch square root of `a1 + i b1` as a real pair. Identical
/// to the `(a2, b2)` of [`decomposition_terms`] whenever `b1 != 0`; on
/// the degenerate ray `b1 = 0, a1 < 0` it returns `(0, sqrt(-a1))` so
/// that assembled eigenvalues always agree with the closed form.
fn principal_root_terms(mode: ModeIndex, c: &TorusConfig) -> (f64, f64) {
    let (a1, b1, a2, b2) = decomposition_terms(mode, c);
    if b1 == 0.0 && a1 < 0.0 {
        (0.0, (-a1).sqrt())
    } else {
        let _ = a1;
        (a2, b2)
    }
}

/// Global real and imaginary parts of both branches:
/// `re = [-c + a + gamma (1 - cos) + delta (1 - cos) +/- a2] / 2`,
/// `im = [-gamma sin - delta sin +/- b2] / 2`.
pub fn real_imag_parts(mode: ModeIndex, c: &TorusConfig) -> (f64, f64, f64, f64) {
    let n = c.n as f64;
    let (a, cc) = (c.neuron.a, c.neuron.c);
    let tr = 2.0 * PI * mode.r as f64 / n;
    let ts = 2.0 * PI * mode.s as f64 / n;
    let base = -cc + a + c.gamma * (1.0 - tr.cos()) + c.delta * (1.0 - ts.cos());
    let osc = -c.gamma * tr.sin() - c.delta * ts.sin();
    let (a2, b2) = principal_root_terms(mode, c);
    (0.5 * (base + a2), 0.5 * (base - a2), 0.5 * (osc + b2), 0.5 * (osc - b2))
}

/// Full per-mode record: eigenvalues plus decomposition terms.
pub fn mode_spectrum(mode: ModeIndex, c: &TorusConfig) -> ModeSpectrum {
    let (lambda1, lambda2) = closed_form_eigenvalues(mode, c);
    let (a1, b1, a2, b2) = decomposition_terms(mode, c);
    let (re1, re2, im1, im2) = real_imag_parts(mode, c);
    ModeSpectrum { mode, lambda1, lambda2, a1, b1, a2, b2, re1, re2, im1, im2 }
}

/// Coupling-induced shift of the real parts relative to the uncoupled
/// real-part centroid `(-c + a) / 2`:
/// `a3 = [gamma (1 - cos(2 pi r / N)) + delta (1 - cos(2 pi s / N)) +/- a2] / 2`.
///
/// By construction `re_{1,2} = (-c + a) / 2 + a3_{1,2}`; when the
/// uncoupled pair is complex (the studied regime) the centroid is the
/// uncoupled real part itself.
pub fn coupling_shift(mode: ModeIndex, c: &TorusConfig) -> (f64, f64) {
    let n = c.n as f64;
    let tr = 2.0 * PI * mode.r as f64 / n;
    let ts = 2.0 * PI * mode.s as f64 / n;
    let coupling = c.gamma * (1.0 - tr.cos()) + c.delta * (1.0 - ts.cos());
    let (a2, _) = principal_root_terms(mode, c);
    (0.5 * (coupling + a2), 0.5 * (coupling - a2))
}

/// Dense Jacobian of the single-torus vector field at the origin.
///
/// Row-major neuron order, interleaved `(x, y)` per neuron: the diagonal
/// 2x2 block of neuron `(alpha, beta)` is `D`, with `E` coupling to
/// `(alpha + 1 mod N, beta)` and `F` to `(alpha, beta + 1 mod N)`.
pub fn assemble_linearization(c: &TorusConfig) -> DMatrix<f64> {
    let n = c.n;
    let (a, b, cc) = (c.neuron.a, c.neuron.b, c.neuron.c);
    let d = a + c.gamma + c.delta;
    let dim = 2 * n * n;
    let mut m = DMatrix::zeros(dim, dim);
    for alpha in 0..n {
        for beta in 0..n {
            let p = 2 * (alpha * n + beta);
            m[(p, p)] += d;
            m[(p, p + 1)] = -1.0;
            m[(p + 1, p)] = b;
            m[(p + 1, p + 1)] = -cc;
            let q = 2 * ((((alpha + 1) % n) * n) + beta);
            m[(p, q)] += -c.gamma;
            let r = 2 * (alpha * n + (beta + 1) % n);
            m[(p, r)] += -c.delta;
        }
    }
    m
}

/// Dense Jacobian of the two-tori vector field at the origin: two copies
/// of the single-torus Jacobian plus `epsilon / N^2` from every
/// x-variable of the other torus into each x-row.
pub fn assemble_two_tori_linearization(c: &TwoToriConfig) -> DMatrix<f64> {
    let n = c.torus.n;
    let half = 2 * n * n;
    let single = assemble_linearization(&c.torus);
    let mut m = DMatrix::zeros(2 * half, 2 * half);
    m.view_mut((0, 0), (half, half)).copy_from(&single);
    m.view_mut((half, half), (half, half)).copy_from(&single);
    let w = c.epsilon / (n * n) as f64;
    for p in 0..n * n {
        for q in 0..n * n {
            m[(2 * p, half + 2 * q)] = w;
            m[(half + 2 * p, 2 * q)] = w;
        }
    }
    m
}

/// Numerically computed spectrum of the assembled single-torus Jacobian.
/// Restricted to `N <= 8` to keep the dense oracle cheap.
pub fn dense_eigenvalues(c: &TorusConfig) -> Result<Vec<Complex64>> {
    if c.n > DENSE_ORACLE_MAX_N {
        return Err(Error::Config(format!(
            "dense eigensolve oracle is restricted to N <= {DENSE_ORACLE_MAX_N} (got N = {})",
            c.n
        )));
    }
    let m = assemble_linearization(c);
    Ok(m.complex_eigenvalues().iter().copied().collect())
}

/// Greedy minimum-distance bipartite assignment between two eigenvalue
/// lists of equal length. Returns the largest matched distance.
pub fn match_spectra(lhs: &[Complex64], rhs: &[Complex64]) -> f64 {
    assert_eq!(lhs.len(), rhs.len());
    let n = lhs.len();
    let mut pairs = Vec::with_capacity(n * n);
    for (i, l) in lhs.iter().enumerate() {
        for (j, r) in rhs.iter().enumerate() {
            pairs.push(((l - r).norm(), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut used_l = vec![false; n];
    let mut used_r = vec![false; n];
    let mut assigned = 0;
    let mut worst = 0.0f64;
    for (dist, i, j) in pairs {
        if !used_l[i] && !used_r[j] {
            used_l[i] = true;
            used_r[j] = true;
            worst = worst.max(dist);
            assigned += 1;
            if assigned == n {
                break;
            }
        }
    }
    worst
}

/// Full closed-form spectrum: all `2 N^2` eigenvalues.
pub fn closed_form_spectrum(c: &TorusConfig) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(2 * c.n * c.n);
    for r in 0..c.n {
        for s in 0..c.n {
            let (l1, l2) = closed_form_eigenvalues(ModeIndex { r, s }, c);
            out.push(l1);
            out.push(l2);
        }
    }
    out
}

/// Eigenvector of `M` for mode `(r, s)` and the given branch.
///
/// Builds `v = [1, a + gamma (1 - zeta_r) + delta (1 - zeta_s) - lambda]`,
/// tiles it along the inner (beta) ring with powers of `zeta_s`, and
/// tiles the result along the outer (alpha) ring with powers of
/// `zeta_k = exp(2 pi i k / N)`, scaled by `1/N`. The result satisfies
/// `M nu = lambda nu` exactly when `k = r`; the residual test pins this
/// convention.
pub fn mode_eigenvector(
    mode: ModeIndex,
    branch: Branch,
    k: usize,
    c: &TorusConfig,
) -> Result<Vec<Complex64>> {
    let n = c.n;
    if k >= n {
        return Err(Error::InvalidMode {
            r: k as i64,
            s: 0,
            n,
            reason: "outer tiling exponent k must lie in [0, N-1]".into(),
        });
    }
    let (l1, l2) = closed_form_eigenvalues(mode, c);
    let lambda = match branch {
        Branch::One => l1,
        Branch::Two => l2,
    };
    let v = [Complex64::new(1.0, 0.0), coupled_term(mode, c) - lambda];
    let scale = Complex64::new(1.0 / n as f64, 0.0);
    let mut nu = Vec::with_capacity(2 * n * n);
    for alpha in 0..n {
        let outer = zeta((k * alpha) % n, n);
        for beta in 0..n {
            let phase = outer * zeta((mode.s * beta) % n, n) * scale;
            nu.push(phase * v[0]);
            nu.push(phase * v[1]);
        }
    }
    Ok(nu)
}

/// Hopf residual of one branch: twice the real part of the eigenvalue,
/// `[-c + a + gamma (1 - cos) + delta (1 - cos)] +/- a2`. Zero exactly at
/// the Hopf condition. The synchronous mode `(0, 0)` is rejected: its
/// Hopf condition (`c = a` with `c^2 < b`) does not involve the coupling.
pub fn hopf_residual(mode: ModeIndex, c: &TorusConfig, branch: Branch) -> Result<f64> {
    if mode.is_zero() {
        return Err(Error::InvalidMode {
            r: 0,
            s: 0,
            n: c.n,
            reason: "mode (0,0) has coupling-independent Hopf condition c = a; \
                     use the uncoupled eigenvalues"
                .into(),
        });
    }
    let (re1, re2, _, _) = real_imag_parts(mode, c);
    Ok(match branch {
        Branch::One => 2.0 * re1,
        Branch::Two => 2.0 * re2,
    })
}

/// Locate the critical coupling where branch 1 of the given mode crosses
/// the imaginary axis, by bisection of the Hopf residual over `bracket`.
///
/// Errors when the residual does not change sign over the bracket, and
/// when the imaginary part vanishes at the crossing (a steady-state
/// rather than Hopf bifurcation).
pub fn find_hopf_boundary(
    mode: ModeIndex,
    c: &TorusConfig,
    vary: VaryParam,
    bracket: (f64, f64),
) -> Result<f64> {
    let with_value = |v: f64| -> TorusConfig {
        let mut cc = *c;
        match vary {
            VaryParam::Gamma => cc.gamma = v,
            VaryParam::Delta => cc.delta = v,
        }
        cc
    };
    let residual = |v: f64| -> Result<f64> { hopf_residual(mode, &with_value(v), Branch::One) };

    let (mut lo, mut hi) = bracket;
    let mut f_lo = residual(lo)?;
    let f_hi = residual(hi)?;
    if f_lo == 0.0 {
        return check_crossing(mode, &with_value(lo), lo);
    }
    if f_hi == 0.0 {
        return check_crossing(mode, &with_value(hi), hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange { lo, hi });
    }
    let mut mid = 0.5 * (lo + hi);
    while hi - lo > HOPF_BRACKET_TOL {
        mid = 0.5 * (lo + hi);
        let f_mid = residual(mid)?;
        if f_mid.abs() < HOPF_RESIDUAL_TOL {
            break;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    check_crossing(mode, &with_value(mid), mid)
}

fn check_crossing(mode: ModeIndex, c: &TorusConfig, value: f64) -> Result<f64> {
    let (_, _, im1, _) = real_imag_parts(mode, c);
    if im1.abs() < DEGENERATE_IM_TOL {
        return Err(Error::DegenerateCrossing { value });
    }
    Ok(value)
}

/// Stability of the origin from the closed-form spectrum: real parts of
/// all `N^2` modes and both branches, with `(0, 0)` evaluated through the
/// uncoupled formula.
pub fn origin_stability(c: &TorusConfig) -> StabilityVerdict {
    let mut max_re = f64::NEG_INFINITY;
    let mut per_mode = Vec::with_capacity(c.n * c.n);
    for r in 0..c.n {
        for s in 0..c.n {
            let mode = ModeIndex { r, s };
            let m_re = if mode.is_zero() {
                let (l1, l2) = uncoupled_eigenvalues(&c.neuron);
                l1.re.max(l2.re)
            } else {
                let (re1, re2, _, _) = real_imag_parts(mode, c);
                re1.max(re2)
            };
            max_re = max_re.max(m_re);
            per_mode.push((mode, m_re));
        }
    }
    let critical_modes = per_mode
        .into_iter()
        .filter(|(_, re)| (re - max_re).abs() <= 1e-12)
        .map(|(mode, _)| mode)
        .collect();
    StabilityVerdict { stable: max_re < 0.0, max_re, critical_modes }
}

/// Largest real part of the two-tori linearization at the origin. The
/// mean-field coupling only touches the synchronous subspace: nonzero
/// modes keep their single-torus eigenvalues (twice each), while the two
/// `(0, 0)` blocks combine into uncoupled neurons with `a` shifted by
/// `+epsilon` (symmetric) and `-epsilon` (antisymmetric).
pub fn two_tori_max_re(c: &TwoToriConfig) -> f64 {
    let mut max_re = f64::NEG_INFINITY;
    for r in 0..c.torus.n {
        for s in 0..c.torus.n {
            let mode = ModeIndex { r, s };
            if mode.is_zero() {
                continue;
            }
            let (re1, re2, _, _) = real_imag_parts(mode, &c.torus);
            max_re = max_re.max(re1).max(re2);
        }
    }
    for shifted_a in [c.torus.neuron.a + c.epsilon, c.torus.neuron.a - c.epsilon] {
        let p = NeuronParams { a: shifted_a, ..c.torus.neuron };
        let (l1, l2) = uncoupled_eigenvalues(&p);
        max_re = max_re.max(l1.re).max(l2.re);
    }
    max_re
}
