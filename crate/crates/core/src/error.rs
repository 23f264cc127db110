//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// State vector length does not match the configured lattice.
    #[error("dimension mismatch: state has {got} entries, expected {expected}")]
    DimensionMismatch { got: usize, expected: usize },

    /// The divergence guard tripped during integration.
    #[error("trajectory diverged at t={t}")]
    Diverged { t: f64 },

    /// A mode index outside `[0, N-1] x [0, N-1]`, or `(0,0)` where the
    /// nonzero-mode set `NZ` is required.
    #[error("invalid mode ({r},{s}) for lattice side {n}: {reason}")]
    InvalidMode { r: i64, s: i64, n: usize, reason: String },

    /// Root bracketing failed: no boundary in range.
    #[error("no boundary in range [{lo}, {hi}]: residual does not change sign")]
    NoSignChange { lo: f64, hi: f64 },

    /// The real part crosses zero with vanishing imaginary part.
    #[error("degenerate crossing at {value}: imaginary part is zero, not a Hopf point")]
    DegenerateCrossing { value: f64 },

    /// The normal-form transform needs `b > a^2`.
    #[error("transform undefined: requires b > a^2 (got a={a}, b={b})")]
    TransformUndefined { a: f64, b: f64 },

    /// Normal-form analysis is only valid on the Hopf locus `c = a`.
    #[error("not at Hopf point: requires c = a (got a={a}, c={c})")]
    NotAtHopf { a: f64, c: f64 },

    /// Series too short for spectral analysis.
    #[error("series too short for spectral analysis: {len} samples (need >= {min})")]
    SeriesTooShort { len: usize, min: usize },

    /// Detrended power below the oscillation threshold.
    #[error("no oscillation: detrended power {power:.3e} below threshold")]
    NoOscillation { power: f64 },

    /// The two series do not share a dominant frequency.
    #[error("not phase-comparable: dominant frequencies {f_a} and {f_b} differ by more than 2 bins")]
    NotPhaseComparable { f_a: f64, f_b: f64 },

    /// Diagonal-translation check invoked on a trajectory that is not a
    /// rotating wave.
    #[error("non-rotating-wave input: {reason}")]
    NonRotatingWave { reason: String },

    /// No consensus dominant frequency for a torus.
    #[error("torus #{torus} unclassifiable for frequency: {reason}")]
    FrequencyUnavailable { torus: usize, reason: String },

    /// Invalid run configuration (bad value, unknown key, unreadable file).
    #[error("config error: {0}")]
    Config(String),

    /// Trajectory file does not parse or does not match the configuration.
    #[error("malformed trajectory: {0}")]
    MalformedTrajectory(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
