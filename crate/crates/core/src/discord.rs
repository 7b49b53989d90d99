//! A-side quantum discord of a two-qubit state.
//!
//! `D_A(ρ) = S(ρ_A) - S(ρ) + min_Π Σⱼ pⱼ S(ρ_{B|j})`, the minimum running over
//! rank-one projective measurements `{Π, 𝕀-Π}` on A. The minimization uses
//! [`crate::optimize::minimize_on_sphere`].

#[allow(unused_imports)]
use num_traits::Float;

use crate::optimize::{minimize_on_sphere, SearchOutcome, SphereSearch};
use crate::qmat::{c, hermitian_eigen, spectrum_entropy, ComplexMatrix, Subsystem, C64};
use crate::states::DensityMatrix;
use crate::tol::{DISCORD_CLIP, ZERO_PROBABILITY};
use crate::{Error, Result};

/// Projective measurement on A: `Π₁ = |v⟩⟨v|` with
/// `|v⟩ = (cos θ/2, e^{iφ} sin θ/2)` and `Π₂ = 𝕀 - Π₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBasis {
    pub fn new(theta: f64, phi: f64) -> Self {
        MeasurementBasis { theta, phi }
    }

    /// `[|v₁⟩, |v₂⟩]`, with `|v₂⟩` orthogonal to `|v₁⟩`.
    pub fn vectors(&self) -> [[C64; 2]; 2] {
        let (s, cs) = (self.theta / 2.0).sin_cos();
        let e = C64::from_polar(1.0, self.phi);
        [[c(cs, 0.0), e * s], [-e.conj() * s, c(cs, 0.0)]]
    }

    pub fn projectors(&self) -> [ComplexMatrix; 2] {
        self.vectors()
            .map(|v| ComplexMatrix::from_fn(2, |i, j| v[i] * v[j].conj()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerTrace {
    pub iterations: usize,
    pub spread: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordResult {
    /// Bits, never negative.
    pub value: f64,
    pub argmin_basis: MeasurementBasis,
    pub trace: OptimizerTrace,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DiscordOptions {
    pub search: SphereSearch,
}

fn entropy_2x2(m: &ComplexMatrix) -> Result<f64> {
    spectrum_entropy(&hermitian_eigen(m)?.eigenvalues)
}

fn entropy_4x4(rho: &DensityMatrix) -> Result<f64> {
    spectrum_entropy(&hermitian_eigen(rho.matrix())?.eigenvalues)
}

/// `I(A:B) = S(ρ_A) + S(ρ_B) - S(ρ)` in bits.
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    let sa = entropy_2x2(&rho.reduced(Subsystem::A))?;
    let sb = entropy_2x2(&rho.reduced(Subsystem::B))?;
    Ok(sa + sb - entropy_4x4(rho)?)
}

/// Unnormalized conditional B operator `⟨v|_A ρ |w⟩_A`.
fn a_sandwich(rho: &ComplexMatrix, v: &[C64; 2], w: &[C64; 2]) -> ComplexMatrix {
    ComplexMatrix::from_fn(2, |k, l| {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                acc += v[i].conj() * rho[(2 * i + k, 2 * j + l)] * w[j];
            }
        }
        acc
    })
}

/// `Σⱼ pⱼ S(ρ_{B|j})` after measuring A in `basis`.
pub fn conditional_entropy_after_measurement(
    rho: &DensityMatrix,
    basis: &MeasurementBasis,
) -> Result<f64> {
    let mut total = 0.0;
    for v in basis.vectors().iter() {
        let unnormalized = a_sandwich(rho.matrix(), v, v);
        let p = unnormalized.trace().re;
        if p < ZERO_PROBABILITY {
            continue;
        }
        total += p * entropy_2x2(&unnormalized.scale_real(1.0 / p))?;
    }
    Ok(total)
}

/// Numerically minimized A-discord.
pub fn discord(rho: &DensityMatrix, opts: &DiscordOptions) -> Result<DiscordResult> {
    let base = entropy_2x2(&rho.reduced(Subsystem::A))? - entropy_4x4(rho)?;

    let mut failure = None;
    let objective = |t: f64, p: f64| {
        conditional_entropy_after_measurement(rho, &MeasurementBasis::new(t, p)).unwrap_or_else(
            |e| {
                failure.get_or_insert(e);
                f64::INFINITY
            },
        )
    };
    let outcome = minimize_on_sphere(objective, &opts.search);
    if let Some(e) = failure {
        return Err(e);
    }
    let SearchOutcome {
        theta,
        phi,
        value,
        iterations,
        spread,
        evaluations,
    } = outcome.map_err(|e| match e {
        Error::NonConvergence {
            best,
            spread,
            iterations,
        } => Error::NonConvergence {
            best: base + best,
            spread,
            iterations,
        },
        other => other,
    })?;

    Ok(DiscordResult {
        value: clip_discord(base + value)?,
        argmin_basis: MeasurementBasis::new(theta, phi),
        trace: OptimizerTrace {
            iterations,
            spread,
            evaluations,
        },
    })
}

fn clip_discord(value: f64) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -DISCORD_CLIP {
        Ok(0.0)
    } else {
        Err(Error::NegativeDiscord { value })
    }
}

/// Closed-form discord of the Werner state with singlet weight `c`:
/// `(1-c)/4 log₂(1-c) - (1+c)/2 log₂(1+c) + (1+3c)/4 log₂(1+3c)`.
pub fn werner_discord_closed(cw: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&cw) {
        return Err(Error::OutOfRange {
            name: "Werner weight c",
            value: cw,
            range: "[0, 1]",
        });
    }
    let xlog2x = |x: f64| if x > 0.0 { x * x.log2() } else { 0.0 };
    Ok(xlog2x(1.0 - cw) / 4.0 - xlog2x(1.0 + cw) / 2.0 + xlog2x(1.0 + 3.0 * cw) / 4.0)
}
