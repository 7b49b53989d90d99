//! Finite-shot simulation and measurement-cost bookkeeping.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_bigint::BigUint;
#[allow(unused_imports)]
use num_traits::Float;
use rand_distr::{Binomial, Distribution};

use crate::protocol::{
    fit_fringe, fringe_phasor, linspace, transformed_state, FieldMode, ProtocolParams,
    VisibilityField,
};
use crate::qmat::{hermitian_eigen, trace_distance, ComplexMatrix, C64};
use crate::states::{expectation, pauli_observables, DensityMatrix, PauliCoefficients};
use crate::tol::{HERMITICITY_TOL, RECON_TRACE_TOL, RESOURCE_GUARD_SHOTS};
use crate::{Error, RandomSeed, Result};

/// Shots per measurement setting; `Exact` returns noiseless expectations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shots {
    Finite(u64),
    Exact,
}

impl Shots {
    pub fn finite(self) -> Option<u64> {
        match self {
            Shots::Finite(m) => Some(m),
            Shots::Exact => None,
        }
    }

    fn check(self) -> Result<()> {
        match self {
            Shots::Finite(0) => Err(Error::InvalidBudget(
                "at least one shot per setting is required",
            )),
            _ => Ok(()),
        }
    }
}

/// `m` shots per setting, `n` grid points per swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShotBudget {
    pub m: Shots,
    pub n: usize,
}

impl ShotBudget {
    pub fn new(m: Shots, n: usize) -> Result<Self> {
        m.check()?;
        if n < 2 {
            return Err(Error::InvalidBudget(
                "need at least two grid points per parameter",
            ));
        }
        Ok(ShotBudget { m, n })
    }
}

/// Mean of `m` Bernoulli ±1 outcomes with `p(+1) = (1 + mean)/2`.
///
/// The number of `+1` outcomes is drawn from the binomial distribution it
/// follows, so cost does not grow with `m`.
fn sample_mean(mean: f64, shots: Shots, seed: RandomSeed) -> f64 {
    let m = match shots {
        Shots::Exact => return mean,
        Shots::Finite(m) => m,
    };
    let p = ((1.0 + mean) / 2.0).clamp(0.0, 1.0);
    let ups = Binomial::new(m, p)
        .expect("p is clamped to [0, 1]")
        .sample(&mut seed.rng());
    (2.0 * ups as f64 - m as f64) / m as f64
}

/// Simulated average of `m` binary readouts of a `±1`-valued observable.
pub fn sample_expectation(
    rho: &DensityMatrix,
    observable: &ComplexMatrix,
    shots: Shots,
    seed: RandomSeed,
) -> Result<f64> {
    shots.check()?;
    let eig = hermitian_eigen(observable)?;
    if eig.eigenvalues.len() != 4 {
        return Err(Error::InvalidDimension {
            expected: "4x4 observable",
            found: (observable.rows(), observable.cols()),
        });
    }
    if let Some(&bad) = eig
        .eigenvalues
        .iter()
        .find(|&&l| (l.abs() - 1.0).abs() > HERMITICITY_TOL)
    {
        return Err(Error::UnsupportedObservable { eigenvalue: bad });
    }
    Ok(sample_mean(
        expectation(rho.matrix(), observable),
        shots,
        seed,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisibilityEstimate {
    pub value: f64,
    /// Shot-noise standard error of the fitted amplitude, `sqrt(2/(n·m))`;
    /// zero in exact mode.
    pub std_error: f64,
}

fn fit_amplitude(phases: &[f64], values: &[f64]) -> f64 {
    let (_, a, b) = fit_fringe(phases, values);
    (a * a + b * b).sqrt()
}

fn fringe_standard_error(n_phases: usize, shots: Shots) -> f64 {
    match shots {
        Shots::Exact => 0.0,
        Shots::Finite(m) => (2.0 / (n_phases as f64 * m as f64)).sqrt(),
    }
}

/// Phases `2πk/n`.
pub fn phase_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| TAU * k as f64 / n as f64).collect()
}

/// Estimates the visibility by sampling `K` at `n_phases` evenly spaced
/// dephasing phases and fitting `a₀ + a cos φ_d + b sin φ_d`.
///
/// Phase `k` is sampled with `seed.split(k)`.
pub fn estimate_visibility(
    rho: &DensityMatrix,
    p: &ProtocolParams,
    n_phases: usize,
    shots: Shots,
    seed: RandomSeed,
) -> Result<VisibilityEstimate> {
    if n_phases < 3 {
        return Err(Error::InvalidGrid(
            "visibility fit needs at least three phases",
        ));
    }
    shots.check()?;
    let k = crate::protocol::interference_observable();
    let phases = phase_grid(n_phases);
    let samples: Vec<f64> = phases
        .iter()
        .enumerate()
        .map(|(j, &phi_d)| {
            let mean = expectation(transformed_state(rho, &p.with_phase(phi_d)).matrix(), &k);
            sample_mean(mean, shots, seed.split(j as u64))
        })
        .collect();
    Ok(VisibilityEstimate {
        value: fit_amplitude(&phases, &samples),
        std_error: fringe_standard_error(n_phases, shots),
    })
}

/// Sampled five-parameter sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolRun {
    /// `(α, β)` slice at the requested `φ_A`, `φ_B` (nearest grid values).
    pub field: VisibilityField,
    pub phase_axis: Vec<f64>,
    /// Fitted visibilities indexed `[α][β][φ_A][φ_B]`, flattened row-major.
    pub estimates: Vec<f64>,
    /// Exactly `m·n⁵`; `None` in exact mode.
    pub measurement_count: Option<u128>,
}

fn nearest_index(axis: &[f64], x: f64) -> usize {
    let x = crate::optimize::wrap_angle(x, TAU);
    let circ = |a: f64| {
        let d = (a - x).abs();
        d.min(TAU - d)
    };
    (0..axis.len())
        .min_by(|&i, &j| circ(axis[i]).total_cmp(&circ(axis[j])))
        .expect("non-empty axis")
}

/// Runs the full protocol: α, β on `n` points of `[0, π]`, φ_A, φ_B, φ_d on
/// `2πk/n`, `m` shots per setting.
///
/// The lattice point with flat index `i` over `(α, β, φ_A, φ_B)` is sampled
/// with `seed.split(i)`, so results do not depend on evaluation order.
/// Sweeps with more than 10⁹ simulated settings·shots are refused unless
/// `override_guard` is set.
pub fn protocol_run(
    rho: &DensityMatrix,
    budget: &ShotBudget,
    phi_a: f64,
    phi_b: f64,
    seed: RandomSeed,
    override_guard: bool,
) -> Result<ProtocolRun> {
    let budget = ShotBudget::new(budget.m, budget.n)?;
    let n = budget.n;
    let lattice = (n as u128)
        .checked_pow(5)
        .ok_or(Error::CostOverflow { exponent: 5 })?;
    let count = match budget.m {
        Shots::Finite(m) => Some(
            lattice
                .checked_mul(m as u128)
                .ok_or(Error::CostOverflow { exponent: 5 })?,
        ),
        Shots::Exact => None,
    };
    let work = count.unwrap_or(lattice);
    if work > RESOURCE_GUARD_SHOTS && !override_guard {
        return Err(Error::ResourceGuard { count: work });
    }

    let angle_axis = linspace(0.0, PI, n);
    let phase_axis = phase_grid(n);
    let mut estimates = Vec::with_capacity(n * n * n * n);
    let mut samples = alloc::vec![0.0; n];
    let mut flat: u64 = 0;
    for &alpha in &angle_axis {
        for &beta in &angle_axis {
            for &pa in &phase_axis {
                for &pb in &phase_axis {
                    let z = fringe_phasor(rho, &ProtocolParams::new(alpha, pa, beta, pb));
                    let point = seed.split(flat);
                    for (j, (&phi_d, out)) in phase_axis.iter().zip(&mut samples).enumerate() {
                        let mean = 2.0 * (C64::from_polar(1.0, phi_d) * z).re;
                        *out = sample_mean(mean, budget.m, point.split(j as u64));
                    }
                    estimates.push(fit_amplitude(&phase_axis, &samples));
                    flat += 1;
                }
            }
        }
    }

    let (ia_phase, ib_phase) = (
        nearest_index(&phase_axis, phi_a),
        nearest_index(&phase_axis, phi_b),
    );
    let mut values = Vec::with_capacity(n * n);
    for ia in 0..n {
        for ib in 0..n {
            values.push(estimates[((ia * n + ib) * n + ia_phase) * n + ib_phase]);
        }
    }
    let mode = match budget.m {
        Shots::Exact => FieldMode::Exact,
        Shots::Finite(m) => FieldMode::Sampled { shots_per_point: m },
    };
    Ok(ProtocolRun {
        field: VisibilityField {
            alpha_axis: angle_axis.clone(),
            beta_axis: angle_axis,
            values,
            phi_a: phase_axis[ia_phase],
            phi_b: phase_axis[ib_phase],
            label: rho.label().into(),
            mode,
        },
        phase_axis,
        estimates,
        measurement_count: count,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TomographyResult {
    /// Hermitian Pauli-expansion estimate; may have negative eigenvalues.
    pub raw: ComplexMatrix,
    pub projected: DensityMatrix,
    pub trace_distance_to_truth: f64,
    /// `15m`; `None` in exact mode.
    pub shots_used: Option<u128>,
}

/// Pauli tomography: each of the 15 correlators is sampled with `m` shots
/// (observable `k` with `seed.split(k)`), the state is rebuilt from its Pauli
/// expansion and projected onto the physical set.
pub fn tomography(rho: &DensityMatrix, shots: Shots, seed: RandomSeed) -> Result<TomographyResult> {
    shots.check()?;
    let mut coeffs = [0.0; 15];
    for (k, (obs, out)) in pauli_observables().iter().zip(&mut coeffs).enumerate() {
        *out = sample_mean(expectation(rho.matrix(), obs), shots, seed.split(k as u64));
    }
    let raw = PauliCoefficients::from_array(&coeffs).reconstruct();
    let mut projected = project_physical(&raw)?;
    projected = projected.with_label(recon_label(rho.label()));
    let trace_distance_to_truth = trace_distance(projected.matrix(), rho.matrix())?;
    Ok(TomographyResult {
        raw,
        projected,
        trace_distance_to_truth,
        shots_used: shots.finite().map(|m| 15 * m as u128),
    })
}

fn recon_label(truth: &str) -> String {
    let mut s = String::from("recon:");
    s.push_str(truth);
    s
}

/// Clips negative eigenvalues to zero and renormalizes the trace.
pub fn project_physical(raw: &ComplexMatrix) -> Result<DensityMatrix> {
    raw.require_square(4, "4x4 reconstruction")?;
    let trace = raw.trace().re;
    if (trace - 1.0).abs() > RECON_TRACE_TOL {
        return Err(Error::ReconstructionFailed { trace });
    }
    let eig = hermitian_eigen(raw)?;
    let clipped: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    if total <= 0.0 {
        return Err(Error::ReconstructionFailed { trace });
    }
    let scaled: Vec<f64> = clipped.iter().map(|l| l / total).collect();
    let mat = eig.reconstruct_with(&scaled).hermitian_part();
    DensityMatrix::new(mat, "recon")
}

fn check_cost_args(m: u64, n: u64, d_a: u32, d_b: u32) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidBudget("m and n must be positive"));
    }
    if d_a < 2 || d_b < 2 {
        return Err(Error::InvalidBudget(
            "subsystem dimensions must be at least 2",
        ));
    }
    Ok(())
}

/// `d_a² + d_b² - d_a - d_b + 1`.
pub fn protocol_exponent(d_a: u32, d_b: u32) -> u32 {
    d_a * d_a + d_b * d_b - d_a - d_b + 1
}

/// `d_a² - d_a`.
pub fn tomography_sampled_exponent(d_a: u32) -> u32 {
    d_a * d_a - d_a
}

/// `(d_a + d_b)² - 1`.
pub fn tomography_sampled_multiplier(d_a: u32, d_b: u32) -> u32 {
    (d_a + d_b) * (d_a + d_b) - 1
}

/// `(d_a·d_b)² - 1`.
pub fn tomography_fixed_multiplier(d_a: u32, d_b: u32) -> u32 {
    (d_a * d_b) * (d_a * d_b) - 1
}

fn checked_term(multiplier: u128, m: u64, n: u64, exponent: u32) -> Result<u128> {
    (n as u128)
        .checked_pow(exponent)
        .and_then(|p| p.checked_mul(m as u128))
        .and_then(|p| p.checked_mul(multiplier))
        .ok_or(Error::CostOverflow { exponent })
}

/// Measurements for the interferometric protocol: `m·n^(d_a²+d_b²-d_a-d_b+1)`.
pub fn cost_protocol(m: u64, n: u64, d_a: u32, d_b: u32) -> Result<u128> {
    check_cost_args(m, n, d_a, d_b)?;
    checked_term(1, m, n, protocol_exponent(d_a, d_b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TomographyMode {
    /// `((d_a·d_b)² - 1)·m`.
    FixedBasis,
    /// `((d_a+d_b)² - 1)·m·n^(d_a²-d_a)`.
    SampledBasis,
}

pub fn cost_tomography(m: u64, n: u64, d_a: u32, d_b: u32, mode: TomographyMode) -> Result<u128> {
    check_cost_args(m, n, d_a, d_b)?;
    match mode {
        TomographyMode::FixedBasis => {
            checked_term(tomography_fixed_multiplier(d_a, d_b) as u128, m, n, 0)
        }
        TomographyMode::SampledBasis => checked_term(
            tomography_sampled_multiplier(d_a, d_b) as u128,
            m,
            n,
            tomography_sampled_exponent(d_a),
        ),
    }
}

/// Exact measurement counts for one `(m, n, d_a, d_b)` configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostReport {
    pub m: u64,
    pub n: u64,
    pub d_a: u32,
    pub d_b: u32,
    pub protocol_exponent: u32,
    pub tomography_exponent: u32,
    pub tomography_multiplier: u32,
    pub protocol_count: BigUint,
    pub tomography_fixed_count: BigUint,
    pub tomography_sampled_count: BigUint,
}

/// Arbitrary-precision cost report; never overflows.
pub fn cost_report(m: u64, n: u64, d_a: u32, d_b: u32) -> Result<CostReport> {
    check_cost_args(m, n, d_a, d_b)?;
    let pe = protocol_exponent(d_a, d_b);
    let te = tomography_sampled_exponent(d_a);
    let tm = tomography_sampled_multiplier(d_a, d_b);
    let (bm, bn) = (BigUint::from(m), BigUint::from(n));
    Ok(CostReport {
        m,
        n,
        d_a,
        d_b,
        protocol_exponent: pe,
        tomography_exponent: te,
        tomography_multiplier: tm,
        protocol_count: &bm * bn.pow(pe),
        tomography_fixed_count: &bm * BigUint::from(tomography_fixed_multiplier(d_a, d_b)),
        tomography_sampled_count: &bm * BigUint::from(tm) * bn.pow(te),
    })
}

/// Smallest `n` in `1..=n_max` from which the protocol needs more
/// measurements than sampled-basis tomography for every larger `n` up to
/// `n_max`.
pub fn crossover_n(m: u64, d_a: u32, d_b: u32, n_max: u64) -> Result<Option<u64>> {
    let mut start = None;
    for n in 1..=n_max {
        let r = cost_report(m, n, d_a, d_b)?;
        if r.protocol_count > r.tomography_sampled_count {
            start.get_or_insert(n);
        } else {
            start = None;
        }
    }
    Ok(start)
}
