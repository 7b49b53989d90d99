//! Numerical tolerances shared across the crate.

/// Maximum `|h(i,j) - conj(h(j,i))|` accepted for a Hermitian input.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Frobenius error allowed when reconstructing a matrix from its eigensystem.
pub const EIG_RECON_TOL: f64 = 1e-10;

/// Most negative eigenvalue still treated as floating-point leakage.
pub const PSD_TOL: f64 = 1e-10;

/// Allowed deviation of a density matrix trace from one.
pub const TRACE_TOL: f64 = 1e-10;

/// Off-diagonal Frobenius norm at which Jacobi sweeps stop.
pub const JACOBI_OFFDIAG_TOL: f64 = 1e-14;

/// Upper bound on Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 50;

/// Outcome probabilities below this contribute nothing to conditional entropy.
pub const ZERO_PROBABILITY: f64 = 1e-14;

/// Negative discord values down to this are clipped to zero; below it the
/// computation is considered inconsistent.
pub const DISCORD_CLIP: f64 = 1e-9;

/// Largest cross-block visibility accepted by the S₀ a-posteriori check.
pub const S0_VISIBILITY_TOL: f64 = 1e-8;

/// Default zero-visibility threshold for exact (noiseless) fields.
pub const EXACT_ZERO_THRESHOLD: f64 = 1e-9;

/// Largest trace deviation a raw tomographic reconstruction may have before
/// physical projection refuses it.
pub const RECON_TRACE_TOL: f64 = 0.05;

/// Simulated shot count above which `protocol_run` needs an explicit override.
pub const RESOURCE_GUARD_SHOTS: u128 = 1_000_000_000;
