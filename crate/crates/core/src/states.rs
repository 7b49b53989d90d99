//! Two-qubit states: validation, the Werner family, A-classical
//! (zero-discord) states, Ginibre-random states, Pauli coordinates and the
//! single-qubit rotation used for the local unitaries `S^A`, `S^B`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::qmat::{
    c, hermitian_eigen, identity2, partial_transpose, paulis, tensor, ComplexMatrix, Subsystem,
    C64, ONE, ZERO,
};
use crate::tol::{HERMITICITY_TOL, PSD_TOL, TRACE_TOL};
use crate::{Error, RandomSeed, Result};

/// A validated 4×4 density matrix of the bipartite system A⊗B.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    label: String,
}

impl DensityMatrix {
    /// Validates `mat` against the density-matrix tolerances.
    pub fn new(mat: ComplexMatrix, label: impl Into<String>) -> Result<Self> {
        validate(&mat).into_result()?;
        Ok(DensityMatrix {
            mat,
            label: label.into(),
        })
    }

    /// Skips validation; for results that are valid by construction
    /// (unitary conjugation of a valid state).
    pub(crate) fn new_unchecked(mat: ComplexMatrix, label: String) -> Self {
        DensityMatrix { mat, label }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// `(U_A ⊗ U_B) ρ (U_A ⊗ U_B)†`.
    pub fn rotate_locally(&self, ua: &ComplexMatrix, ub: &ComplexMatrix) -> Result<Self> {
        let u = tensor(ua, ub)?;
        Ok(DensityMatrix::new_unchecked(
            self.mat.conjugate_by(&u),
            self.label.clone(),
        ))
    }

    pub fn reduced(&self, keep: Subsystem) -> ComplexMatrix {
        crate::qmat::partial_trace(&self.mat, keep).expect("density matrix is 4x4")
    }

    /// Smallest eigenvalue of the partial transpose on B; negative iff the
    /// state is entangled (two qubits).
    pub fn ppt_min_eigenvalue(&self) -> f64 {
        let pt = partial_transpose(&self.mat, Subsystem::B).expect("density matrix is 4x4");
        hermitian_eigen(&pt)
            .expect("partial transpose of a Hermitian matrix is Hermitian")
            .min_eigenvalue()
    }
}

/// Outcome of [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub dims: (usize, usize),
    pub hermiticity_deviation: f64,
    pub trace_deviation: f64,
    /// Smallest eigenvalue of the Hermitian part; `None` if the shape is wrong.
    pub min_eigenvalue: Option<f64>,
    pub failures: Vec<Error>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        match self.failures.into_iter().next() {
            None => Ok(()),
            Some(e) => Err(e),
        }
    }
}

/// Checks a candidate 4×4 matrix against the density-matrix invariants.
pub fn validate(m: &ComplexMatrix) -> ValidationReport {
    let dims = (m.rows(), m.cols());
    if dims != (4, 4) {
        return ValidationReport {
            dims,
            hermiticity_deviation: f64::INFINITY,
            trace_deviation: f64::INFINITY,
            min_eigenvalue: None,
            failures: alloc::vec![Error::InvalidDimension {
                expected: "4x4 density matrix",
                found: dims,
            }],
        };
    }
    let mut failures = Vec::new();
    let herm = m.max_hermitian_deviation();
    if herm.is_nan() || herm > HERMITICITY_TOL {
        failures.push(Error::NotHermitian {
            max_asymmetry: herm,
        });
    }
    let trace = m.trace();
    let trace_deviation = (trace - ONE).norm();
    if trace_deviation.is_nan() || trace_deviation > TRACE_TOL {
        failures.push(Error::NotNormalized { trace: trace.re });
    }
    let min_eigenvalue = if m
        .as_slice()
        .iter()
        .all(|z| z.re.is_finite() && z.im.is_finite())
    {
        hermitian_eigen(&m.hermitian_part())
            .ok()
            .map(|e| e.min_eigenvalue())
    } else {
        None
    };
    match min_eigenvalue {
        Some(min) if min >= -PSD_TOL => {}
        Some(min) => failures.push(Error::NotPositive {
            min_eigenvalue: min,
        }),
        None => failures.push(Error::NotPositive {
            min_eigenvalue: f64::NAN,
        }),
    }
    ValidationReport {
        dims,
        hermiticity_deviation: herm,
        trace_deviation,
        min_eigenvalue,
        failures,
    }
}

/// Single-qubit rotation by `theta` about the equatorial axis
/// `(-sin φ, cos φ, 0)`:
///
/// `U = exp(-i (θ/2)(-sin φ σ_x + cos φ σ_y)) = [[cos θ/2, -e^{-iφ} sin θ/2], [e^{iφ} sin θ/2, cos θ/2]]`.
///
/// It maps `|↑⟩` to the pure state with Bloch angles `(θ, φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitRotation {
    pub theta: f64,
    pub phi: f64,
}

impl QubitRotation {
    pub const IDENTITY: QubitRotation = QubitRotation {
        theta: 0.0,
        phi: 0.0,
    };

    pub fn new(theta: f64, phi: f64) -> Self {
        QubitRotation { theta, phi }
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let (s, cs) = (self.theta / 2.0).sin_cos();
        let e = C64::from_polar(1.0, self.phi);
        ComplexMatrix::from_rows(&[[c(cs, 0.0), -e.conj() * s], [e * s, c(cs, 0.0)]])
            .expect("2x2 literal")
    }

    /// The rotation that undoes this one (same axis, opposite angle).
    pub fn inverse(&self) -> Self {
        QubitRotation {
            theta: -self.theta,
            phi: self.phi,
        }
    }
}

/// Bloch vector of the pure state `(cos θ/2, e^{iφ} sin θ/2)`.
pub fn bloch_vector(theta: f64, phi: f64) -> [f64; 3] {
    [
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    ]
}

/// Single-qubit density matrix `(𝕀 + r·σ)/2`; `|r| ≤ 1` is required.
pub fn qubit_state(bloch: [f64; 3]) -> Result<ComplexMatrix> {
    let len = bloch.iter().map(|x| x * x).sum::<f64>().sqrt();
    if len.is_nan() || len > 1.0 + 1e-12 {
        return Err(Error::OutOfRange {
            name: "Bloch vector length",
            value: len,
            range: "[0, 1]",
        });
    }
    let mut m = identity2();
    for (r, s) in bloch.iter().zip(paulis().iter()) {
        m = &m + &s.scale_real(*r);
    }
    Ok(m.scale_real(0.5))
}

fn singlet_vector() -> [f64; 4] {
    [0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0]
}

/// `|Ψ⁻⟩⟨Ψ⁻|`.
pub fn singlet() -> DensityMatrix {
    let psi = singlet_vector();
    DensityMatrix::new_unchecked(
        ComplexMatrix::from_fn(4, |i, j| c(psi[i] * psi[j], 0.0)),
        "singlet".to_string(),
    )
}

pub fn maximally_mixed() -> DensityMatrix {
    DensityMatrix::new_unchecked(
        ComplexMatrix::identity(4).scale_real(0.25),
        "maximally-mixed".to_string(),
    )
}

/// Werner state `c|Ψ⁻⟩⟨Ψ⁻| + (1-c)/4 𝕀`.
pub fn werner(cw: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&cw) {
        return Err(Error::OutOfRange {
            name: "Werner weight c",
            value: cw,
            range: "[0, 1]",
        });
    }
    let psi = singlet_vector();
    let mat = ComplexMatrix::from_fn(4, |i, j| {
        let mixed = if i == j { (1.0 - cw) / 4.0 } else { 0.0 };
        c(cw * psi[i] * psi[j] + mixed, 0.0)
    });
    DensityMatrix::new(mat, alloc::format!("werner:{cw}"))
}

/// `ρ_A ⊗ ρ_B` from two Bloch vectors.
pub fn product_state(bloch_a: [f64; 3], bloch_b: [f64; 3]) -> Result<DensityMatrix> {
    let mat = tensor(&qubit_state(bloch_a)?, &qubit_state(bloch_b)?)?;
    DensityMatrix::new(mat, "product")
}

/// Ingredients of an A-classical state `Σᵢ pᵢ |ψᵢ⟩⟨ψᵢ| ⊗ ρᵢ^B`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroDiscordParts {
    /// Orthonormal A basis `|ψ₁⟩, |ψ₂⟩`.
    pub basis: [[C64; 2]; 2],
    pub weights: [f64; 2],
    pub conditional_b: [ComplexMatrix; 2],
}

impl ZeroDiscordParts {
    /// Assembles the state; checks orthonormality, weights and the B states.
    pub fn state(&self, label: impl Into<String>) -> Result<DensityMatrix> {
        let [v1, v2] = self.basis;
        let ip = v1[0].conj() * v2[0] + v1[1].conj() * v2[1];
        let n1 = v1[0].norm_sqr() + v1[1].norm_sqr();
        let n2 = v2[0].norm_sqr() + v2[1].norm_sqr();
        if ip.norm() > 1e-10 || (n1 - 1.0).abs() > 1e-10 || (n2 - 1.0).abs() > 1e-10 {
            return Err(Error::OutOfRange {
                name: "basis orthonormality defect",
                value: ip.norm().max((n1 - 1.0).abs()).max((n2 - 1.0).abs()),
                range: "[0, 1e-10]",
            });
        }
        let [p1, p2] = self.weights;
        if p1 < 0.0 || p2 < 0.0 || ((p1 + p2) - 1.0).abs() > 1e-12 {
            return Err(Error::OutOfRange {
                name: "weight",
                value: p1.min(p2),
                range: "probability simplex",
            });
        }
        let mut mat = ComplexMatrix::zeros(4);
        for ((v, &p), rho_b) in self
            .basis
            .iter()
            .zip(&self.weights)
            .zip(&self.conditional_b)
        {
            rho_b.require_square(2, "2x2 conditional state")?;
            let proj = ComplexMatrix::from_fn(2, |i, j| v[i] * v[j].conj());
            mat = &mat + &tensor(&proj, rho_b)?.scale_real(p);
        }
        DensityMatrix::new(mat, label)
    }

    /// Bloch angles `(θ, φ)` of `|ψ₁⟩`.
    pub fn first_axis(&self) -> (f64, f64) {
        let [a, b] = self.basis[0];
        let theta = 2.0 * b.norm().atan2(a.norm());
        let phi = if b.norm() < 1e-15 || a.norm() < 1e-15 {
            0.0
        } else {
            crate::optimize::wrap_angle((b / a).arg(), core::f64::consts::TAU)
        };
        (theta, phi)
    }
}

fn complex_gaussian<R: Rng>(rng: &mut R) -> C64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn ginibre<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| complex_gaussian(rng))
}

fn ginibre_state<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n);
    let gg = &g * &g.adjoint();
    let t = gg.trace().re;
    // Hermitian by symmetrization; G·G† is only Hermitian up to rounding.
    gg.hermitian_part().scale_real(1.0 / t)
}

/// Haar-random orthonormal basis of C² via Gram–Schmidt (QR with positive
/// diagonal) of a Ginibre matrix.
fn haar_basis<R: Rng>(rng: &mut R) -> [[C64; 2]; 2] {
    let g1 = [complex_gaussian(rng), complex_gaussian(rng)];
    let g2 = [complex_gaussian(rng), complex_gaussian(rng)];
    let n1 = (g1[0].norm_sqr() + g1[1].norm_sqr()).sqrt();
    let q1 = [g1[0] / n1, g1[1] / n1];
    let ip = q1[0].conj() * g2[0] + q1[1].conj() * g2[1];
    let r2 = [g2[0] - q1[0] * ip, g2[1] - q1[1] * ip];
    let n2 = (r2[0].norm_sqr() + r2[1].norm_sqr()).sqrt();
    [q1, [r2[0] / n2, r2[1] / n2]]
}

/// Random A-classical state.
pub fn zero_discord_parts(seed: RandomSeed) -> ZeroDiscordParts {
    let mut rng = seed.rng();
    let basis = haar_basis(&mut rng);
    let p1: f64 = rng.random();
    let conditional_b = [ginibre_state(&mut rng, 2), ginibre_state(&mut rng, 2)];
    ZeroDiscordParts {
        basis,
        weights: [p1, 1.0 - p1],
        conditional_b,
    }
}

pub fn zero_discord_state(seed: RandomSeed) -> DensityMatrix {
    zero_discord_parts(seed)
        .state(alloc::format!("zd:{}", seed.0))
        .expect("zero-discord construction is valid")
}

/// Ginibre-ensemble state `G·G†/tr(G·G†)`.
pub fn random_state(seed: RandomSeed) -> DensityMatrix {
    let mut rng = seed.rng();
    DensityMatrix::new(
        ginibre_state(&mut rng, 4),
        alloc::format!("random:{}", seed.0),
    )
    .expect("Ginibre state is valid")
}

/// Pauli coordinates of a two-qubit state:
/// `ρ = (𝕀⊗𝕀 + Σ aᵢ σᵢ⊗𝕀 + Σ bⱼ 𝕀⊗σⱼ + Σ cᵢⱼ σᵢ⊗σⱼ)/4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliCoefficients {
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub c: [[f64; 3]; 3],
}

impl PauliCoefficients {
    /// `[a_x, a_y, a_z, b_x, b_y, b_z, c_xx, c_xy, ..., c_zz]`.
    pub fn to_array(&self) -> [f64; 15] {
        let mut out = [0.0; 15];
        out[..3].copy_from_slice(&self.a);
        out[3..6].copy_from_slice(&self.b);
        for i in 0..3 {
            out[6 + 3 * i..9 + 3 * i].copy_from_slice(&self.c[i]);
        }
        out
    }

    pub fn from_array(v: &[f64; 15]) -> Self {
        let mut c = [[0.0; 3]; 3];
        for (i, row) in c.iter_mut().enumerate() {
            row.copy_from_slice(&v[6 + 3 * i..9 + 3 * i]);
        }
        PauliCoefficients {
            a: [v[0], v[1], v[2]],
            b: [v[3], v[4], v[5]],
            c,
        }
    }

    /// The Hermitian unit-trace matrix with these coordinates (not
    /// necessarily positive).
    pub fn reconstruct(&self) -> ComplexMatrix {
        let s = paulis();
        let id = identity2();
        let mut m = ComplexMatrix::identity(4);
        let add = |m: &mut ComplexMatrix, x: &ComplexMatrix, y: &ComplexMatrix, w: f64| {
            if w != 0.0 {
                *m = &*m + &tensor(x, y).expect("2x2 factors").scale_real(w);
            }
        };
        for i in 0..3 {
            add(&mut m, &s[i], &id, self.a[i]);
            add(&mut m, &id, &s[i], self.b[i]);
            for j in 0..3 {
                add(&mut m, &s[i], &s[j], self.c[i][j]);
            }
        }
        m.scale_real(0.25)
    }
}

/// The fifteen two-qubit Pauli observables in [`PauliCoefficients::to_array`]
/// order.
pub fn pauli_observables() -> [ComplexMatrix; 15] {
    let s = paulis();
    let id = identity2();
    core::array::from_fn(|k| {
        let (x, y) = match k {
            0..=2 => (&s[k], &id),
            3..=5 => (&id, &s[k - 3]),
            _ => (&s[(k - 6) / 3], &s[(k - 6) % 3]),
        };
        tensor(x, y).expect("2x2 factors")
    })
}

/// `tr(O ρ)` for Hermitian `O`.
pub fn expectation(rho: &ComplexMatrix, observable: &ComplexMatrix) -> f64 {
    let n = rho.rows();
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += observable[(i, j)] * rho[(j, i)];
        }
    }
    acc.re
}

pub fn pauli_decompose(rho: &DensityMatrix) -> PauliCoefficients {
    let obs = pauli_observables();
    let mut v = [0.0; 15];
    for (out, o) in v.iter_mut().zip(obs.iter()) {
        *out = expectation(rho.matrix(), o);
    }
    PauliCoefficients::from_array(&v)
}
