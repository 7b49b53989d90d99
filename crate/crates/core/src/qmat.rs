//! Small dense complex matrices (2×2 and 4×4) and the handful of operations
//! the rest of the crate needs: products, Kronecker products, partial
//! trace/transpose, a Jacobi eigensolver for Hermitian matrices and the von
//! Neumann entropy.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;
#[allow(unused_imports)]
use num_traits::Float;

use crate::tol::{HERMITICITY_TOL, JACOBI_MAX_SWEEPS, JACOBI_OFFDIAG_TOL, PSD_TOL, TRACE_TOL};
use crate::{Error, Result};

pub type C64 = Complex<f64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        ComplexMatrix {
            rows: n,
            cols: n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        ComplexMatrix {
            rows: n,
            cols: n,
            data,
        }
    }

    /// Builds a matrix from nested rows. Ragged input is rejected.
    pub fn from_rows<R: AsRef<[C64]>>(rows: &[R]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != ncols) {
            return Err(Error::InvalidDimension {
                expected: "rectangular rows",
                found: (nrows, ncols),
            });
        }
        let data = rows
            .iter()
            .flat_map(|r| r.as_ref().iter().copied())
            .collect();
        Ok(ComplexMatrix {
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let complex: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| c(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex)
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = c(v, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub(crate) fn require_square(&self, n: usize, expected: &'static str) -> Result<()> {
        if self.rows == n && self.cols == n {
            Ok(())
        } else {
            Err(Error::InvalidDimension {
                expected,
                found: (self.rows, self.cols),
            })
        }
    }

    pub fn adjoint(&self) -> Self {
        let mut out = ComplexMatrix {
            rows: self.cols,
            cols: self.rows,
            data: vec![ZERO; self.data.len()],
        };
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, k: C64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * k).collect(),
        }
    }

    pub fn scale_real(&self, k: f64) -> Self {
        self.scale(c(k, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest `|a(i,j) - conj(a(j,i))|`; infinite for non-square input.
    pub fn max_hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev = 0.0_f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// `(A + A†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        (self + &adj).scale_real(0.5)
    }

    /// `U · self · U†`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        &(u * self) * &u.adjoint()
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = ComplexMatrix {
            rows: self.rows,
            cols: rhs.cols,
            data: vec![ZERO; self.rows * rhs.cols],
        };
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

pub fn identity2() -> ComplexMatrix {
    ComplexMatrix::identity(2)
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_fn(2, |i, j| if i != j { ONE } else { ZERO })
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_fn(2, |i, j| match (i, j) {
        (0, 1) => -I,
        (1, 0) => I,
        _ => ZERO,
    })
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::diag(&[1.0, -1.0])
}

/// `[σ_x, σ_y, σ_z]`.
pub fn paulis() -> [ComplexMatrix; 3] {
    [pauli_x(), pauli_y(), pauli_z()]
}

/// Bipartite subsystem tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    A,
    B,
}

/// Kronecker product of two 2×2 matrices; `a` carries the slow index.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.require_square(2, "2x2 left factor")?;
    b.require_square(2, "2x2 right factor")?;
    Ok(ComplexMatrix::from_fn(4, |r, s| {
        a[(r / 2, s / 2)] * b[(r % 2, s % 2)]
    }))
}

/// Reduced matrix of the `keep` subsystem.
pub fn partial_trace(rho: &ComplexMatrix, keep: Subsystem) -> Result<ComplexMatrix> {
    rho.require_square(4, "4x4 bipartite matrix")?;
    Ok(match keep {
        Subsystem::A => {
            ComplexMatrix::from_fn(2, |i, j| rho[(2 * i, 2 * j)] + rho[(2 * i + 1, 2 * j + 1)])
        }
        Subsystem::B => ComplexMatrix::from_fn(2, |k, l| rho[(k, l)] + rho[(2 + k, 2 + l)]),
    })
}

/// Transpose in the indices of subsystem `on` only.
pub fn partial_transpose(rho: &ComplexMatrix, on: Subsystem) -> Result<ComplexMatrix> {
    rho.require_square(4, "4x4 bipartite matrix")?;
    Ok(ComplexMatrix::from_fn(4, |r, s| {
        let (i, k) = (r / 2, r % 2);
        let (j, l) = (s / 2, s % 2);
        match on {
            Subsystem::B => rho[(2 * i + l, 2 * j + k)],
            Subsystem::A => rho[(2 * j + k, 2 * i + l)],
        }
    }))
}

/// Eigenvalues in descending order with matching orthonormal eigenvector
/// columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// `V · diag(λ) · V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(&self.eigenvalues)
    }

    /// `V · diag(values) · V†` for a replacement spectrum.
    pub fn reconstruct_with(&self, values: &[f64]) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * v[(j, k)].conj() * values[k])
                .sum()
        })
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// Column `k` as a vector.
    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        let n = self.eigenvectors.rows();
        (0..n).map(|i| self.eigenvectors[(i, k)]).collect()
    }
}

/// Cyclic complex Jacobi eigensolver for a Hermitian matrix.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<EigenDecomposition> {
    if !h.is_square() || !(h.rows() == 2 || h.rows() == 4) {
        return Err(Error::InvalidDimension {
            expected: "2x2 or 4x4 Hermitian matrix",
            found: (h.rows(), h.cols()),
        });
    }
    let asym = h.max_hermitian_deviation();
    if asym.is_nan() || asym > HERMITICITY_TOL {
        return Err(Error::NotHermitian {
            max_asymmetry: asym,
        });
    }
    let n = h.rows();
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let stop = JACOBI_OFFDIAG_TOL * a.frobenius_norm().max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) < stop {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(y, y)].re.total_cmp(&a[(x, x)].re));
    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Zeroes `a(p,q)` with `a ← G† a G`, `v ← v G`.
///
/// `G = D·R` where `D` removes the phase of `a(p,q)` and `R` is the real
/// Jacobi rotation of the resulting real symmetric 2×2 block.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r < f64::MIN_POSITIVE {
        return;
    }
    let phase = apq / r;
    let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let cs = 1.0 / (t * t + 1.0).sqrt();
    let sn = t * cs;

    let g_pp = c(cs, 0.0);
    let g_pq = c(sn, 0.0);
    let g_qp = phase.conj() * -sn;
    let g_qq = phase.conj() * cs;

    let n = a.rows();
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = c(a[(p, p)].re, 0.0);
    a[(q, q)] = c(a[(q, q)].re, 0.0);
}

/// `-Σ λ log₂ λ` over a spectrum, with `0·log₂0 = 0`.
pub fn shannon_bits(probabilities: &[f64]) -> f64 {
    probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Von Neumann entropy in bits of a unit-trace positive semidefinite matrix.
///
/// Eigenvalues in `[-PSD_TOL, 0)` are treated as zero.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let trace = rho.trace();
    if (trace - ONE).norm() > TRACE_TOL {
        return Err(Error::NotNormalized { trace: trace.re });
    }
    let eig = hermitian_eigen(rho)?;
    spectrum_entropy(&eig.eigenvalues)
}

pub(crate) fn spectrum_entropy(eigenvalues: &[f64]) -> Result<f64> {
    let min = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -PSD_TOL {
        return Err(Error::NotPositive {
            min_eigenvalue: min,
        });
    }
    let clipped: Vec<f64> = eigenvalues.iter().map(|&x| x.max(0.0)).collect();
    Ok(shannon_bits(&clipped))
}

/// Half the trace norm of `a - b` for Hermitian inputs.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    let diff = a - b;
    let eig = hermitian_eigen(&diff)?;
    Ok(0.5 * eig.eigenvalues.iter().map(|x| x.abs()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_distr::StandardNormal;

    use crate::RandomSeed;

    fn random_matrix(n: usize, seed: u64) -> ComplexMatrix {
        let mut rng = RandomSeed(seed).rng();
        ComplexMatrix::from_fn(n, |_, _| {
            c(rng.sample(StandardNormal), rng.sample(StandardNormal))
        })
    }

    fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
        random_matrix(n, seed).hermitian_part()
    }

    fn random_qubit_state(seed: u64) -> ComplexMatrix {
        let g = random_matrix(2, seed);
        let gg = &g * &g.adjoint();
        let t = gg.trace().re;
        gg.scale_real(1.0 / t)
    }

    fn singlet() -> ComplexMatrix {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let psi = [0.0, h, -h, 0.0];
        ComplexMatrix::from_fn(4, |i, j| c(psi[i] * psi[j], 0.0))
    }

    fn werner(cw: f64) -> ComplexMatrix {
        &singlet().scale_real(cw) + &ComplexMatrix::identity(4).scale_real((1.0 - cw) / 4.0)
    }

    #[test]
    fn tensor_examples() {
        let zz = tensor(&pauli_z(), &pauli_z()).unwrap();
        assert_eq!(zz, ComplexMatrix::diag(&[1.0, -1.0, -1.0, 1.0]));
        assert_eq!(
            tensor(&identity2(), &identity2()).unwrap(),
            ComplexMatrix::identity(4)
        );
        let xi = tensor(&pauli_x(), &identity2()).unwrap();
        for r in 0..4 {
            for s in 0..4 {
                let one = matches!((r, s), (0, 2) | (1, 3) | (2, 0) | (3, 1));
                assert_eq!(xi[(r, s)], if one { ONE } else { ZERO }, "({r},{s})");
            }
        }
    }

    #[test]
    fn tensor_rejects_wrong_dimension() {
        let err = tensor(&ComplexMatrix::identity(4), &identity2()).unwrap_err();
        assert!(matches!(err, Error::InvalidDimension { .. }));
        let ragged = ComplexMatrix::from_rows(&[vec![ONE, ZERO], vec![ONE]]);
        assert!(ragged.is_err());
    }

    #[test]
    fn partial_trace_examples() {
        let half_id = identity2().scale_real(0.5);
        for cw in [0.0, 0.3, 0.7, 1.0] {
            let ra = partial_trace(&werner(cw), Subsystem::A).unwrap();
            assert!(ra.max_abs_diff(&half_id) < 1e-12);
        }
        let rb = partial_trace(&singlet(), Subsystem::B).unwrap();
        assert!(rb.max_abs_diff(&half_id) < 1e-12);

        let a = random_qubit_state(1);
        let b = random_qubit_state(2);
        let ab = tensor(&a, &b).unwrap();
        assert!(partial_trace(&ab, Subsystem::A).unwrap().max_abs_diff(&a) < 1e-12);
        assert!(partial_trace(&ab, Subsystem::B).unwrap().max_abs_diff(&b) < 1e-12);

        assert!(partial_trace(&identity2(), Subsystem::A).is_err());
    }

    #[test]
    fn partial_trace_of_tensor_scales_by_other_trace() {
        for seed in 0..20 {
            let a = random_matrix(2, 100 + seed);
            let b = random_matrix(2, 200 + seed);
            let ab = tensor(&a, &b).unwrap();
            let got = partial_trace(&ab, Subsystem::A).unwrap();
            assert!(got.max_abs_diff(&a.scale(b.trace())) < 1e-12);
        }
    }

    #[test]
    fn partial_transpose_examples() {
        let mixed = ComplexMatrix::identity(4).scale_real(0.25);
        assert_eq!(partial_transpose(&mixed, Subsystem::B).unwrap(), mixed);

        let pt = partial_transpose(&singlet(), Subsystem::B).unwrap();
        let eig = hermitian_eigen(&pt).unwrap();
        assert!((eig.min_eigenvalue() + 0.5).abs() < 1e-12);

        for k in 0..=20 {
            let cw = k as f64 / 20.0;
            let pt = partial_transpose(&werner(cw), Subsystem::B).unwrap();
            let min = hermitian_eigen(&pt).unwrap().min_eigenvalue();
            assert!((min - (1.0 - 3.0 * cw) / 4.0).abs() < 1e-12, "c={cw}");
        }
    }

    #[test]
    fn eigen_examples() {
        let d = ComplexMatrix::diag(&[3.0, 1.0, 2.0, 0.0]);
        assert_eq!(
            hermitian_eigen(&d).unwrap().eigenvalues,
            vec![3.0, 2.0, 1.0, 0.0]
        );

        let eig = hermitian_eigen(&pauli_x()).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] + 1.0).abs() < 1e-14);
        let v = eig.eigenvector(0);
        // (1, 1)/√2 up to a phase
        assert!((v[0] - v[1]).norm() < 1e-14);
        assert!((v[0].norm() - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);

        let w = hermitian_eigen(&werner(0.5)).unwrap();
        for (got, want) in w.eigenvalues.iter().zip([0.625, 0.125, 0.125, 0.125]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = c(0.5, 0.0);
        match hermitian_eigen(&m) {
            Err(Error::NotHermitian { max_asymmetry }) => {
                assert!((max_asymmetry - 0.5).abs() < 1e-15)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn eigen_reconstructs_random_hermitian() {
        for seed in 0..100 {
            let n = if seed % 2 == 0 { 4 } else { 2 };
            let h = random_hermitian(n, seed);
            let eig = hermitian_eigen(&h).unwrap();
            let err = (&eig.reconstruct() - &h).frobenius_norm();
            assert!(err < crate::tol::EIG_RECON_TOL, "seed {seed}: {err:e}");

            let v = &eig.eigenvectors;
            let gram = &v.adjoint() * v;
            assert!((&gram - &ComplexMatrix::identity(n)).frobenius_norm() < 1e-10);
            assert!(eig.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn entropy_examples() {
        assert!((von_neumann_entropy(&identity2().scale_real(0.5)).unwrap() - 1.0).abs() < 1e-12);
        assert!(von_neumann_entropy(&singlet()).unwrap().abs() < 1e-12);
        let s = von_neumann_entropy(&werner(0.5)).unwrap();
        assert!((s - 1.548795).abs() < 1e-6, "{s}");
    }

    #[test]
    fn entropy_errors() {
        let neg = ComplexMatrix::diag(&[0.6, 0.5, -0.1, 0.0]);
        assert!(matches!(
            von_neumann_entropy(&neg),
            Err(Error::NotPositive { .. })
        ));
        let unnorm = ComplexMatrix::diag(&[0.6, 0.6, 0.0, 0.0]);
        assert!(matches!(
            von_neumann_entropy(&unnorm),
            Err(Error::NotNormalized { .. })
        ));
        let leak = ComplexMatrix::diag(&[0.5 + 5e-11, 0.5, -5e-11, 0.0]);
        assert!((von_neumann_entropy(&leak).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn entropy_is_additive() {
        for seed in 0..30 {
            let a = random_qubit_state(300 + seed);
            let b = random_qubit_state(400 + seed);
            let sab = von_neumann_entropy(&tensor(&a, &b).unwrap()).unwrap();
            let sa = von_neumann_entropy(&a).unwrap();
            let sb = von_neumann_entropy(&b).unwrap();
            assert!((sab - sa - sb).abs() < 1e-10);
        }
    }

    #[test]
    fn trace_distance_of_orthogonal_pure_states_is_one() {
        let up = ComplexMatrix::diag(&[1.0, 0.0]);
        let down = ComplexMatrix::diag(&[0.0, 1.0]);
        assert!((trace_distance(&up, &down).unwrap() - 1.0).abs() < 1e-15);
    }
}
