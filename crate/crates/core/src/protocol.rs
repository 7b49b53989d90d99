//! The interferometric zero-visibility protocol.
//!
//! A state is rotated by local unitaries `S^A ⊗ S^B`, the A qubit picks up a
//! relative phase `S_d = exp(iφ_d σ_z/2)`, and the observable
//! `K = σ_x^A ⊗ σ_z^B` is read out. `⟨K⟩` oscillates in `φ_d` with no offset;
//! its amplitude is the visibility
//! `V = 2 |tr_B(ρ̃_{↑↓} σ_z)|` where `ρ̃_{↑↓}` is the A-off-diagonal block of
//! the rotated state.
//!
//! With the rotation convention of [`QubitRotation`] this reproduces the
//! Werner-state visibility
//! `c·sqrt[(sin α cos β - cos α sin β cos(φ_A-φ_B))² + sin²β sin²(φ_A-φ_B)]`
//! exactly; see [`werner_visibility_closed`].

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::optimize::{minimize_on_sphere, wrap_angle, SphereSearch};
use crate::qmat::{pauli_z, tensor, ComplexMatrix, C64, ZERO};
use crate::states::{DensityMatrix, QubitRotation};
use crate::tol::S0_VISIBILITY_TOL;
use crate::{Error, RandomSeed, Result};

/// Angles of one protocol setting. All angles are stored wrapped to
/// `[0, 2π)`; wrapping only changes the unitaries by a global sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolParams {
    pub alpha: f64,
    pub phi_a: f64,
    pub beta: f64,
    pub phi_b: f64,
    pub phi_d: f64,
}

impl ProtocolParams {
    pub fn new(alpha: f64, phi_a: f64, beta: f64, phi_b: f64) -> Self {
        ProtocolParams {
            alpha: wrap_angle(alpha, TAU),
            phi_a: wrap_angle(phi_a, TAU),
            beta: wrap_angle(beta, TAU),
            phi_b: wrap_angle(phi_b, TAU),
            phi_d: 0.0,
        }
    }

    pub fn with_phase(mut self, phi_d: f64) -> Self {
        self.phi_d = wrap_angle(phi_d, TAU);
        self
    }

    pub fn rotation_a(&self) -> QubitRotation {
        QubitRotation::new(self.alpha, self.phi_a)
    }

    pub fn rotation_b(&self) -> QubitRotation {
        QubitRotation::new(self.beta, self.phi_b)
    }
}

/// `K = σ_x^A ⊗ σ_z^B`.
pub fn interference_observable() -> ComplexMatrix {
    tensor(&crate::qmat::pauli_x(), &pauli_z()).expect("2x2 factors")
}

/// `S_d (S^A⊗S^B) ρ (S^A⊗S^B)† S_d†` with `S_d = exp(iφ_d σ_z^A/2) ⊗ 𝕀`.
pub fn transformed_state(rho: &DensityMatrix, p: &ProtocolParams) -> DensityMatrix {
    let local = tensor(&p.rotation_a().matrix(), &p.rotation_b().matrix()).expect("2x2 factors");
    let half = p.phi_d / 2.0;
    let sd_a = ComplexMatrix::from_fn(2, |i, j| match (i, j) {
        (0, 0) => C64::from_polar(1.0, half),
        (1, 1) => C64::from_polar(1.0, -half),
        _ => ZERO,
    });
    let sd = tensor(&sd_a, &crate::qmat::identity2()).expect("2x2 factors");
    let total = &sd * &local;
    DensityMatrix::new_unchecked(rho.matrix().conjugate_by(&total), rho.label().into())
}

/// `tr_B(ρ_{↑↓} σ_z)` read off a 4×4 matrix.
fn off_block_readout(m: &ComplexMatrix) -> C64 {
    m[(0, 2)] - m[(1, 3)]
}

/// Exact visibility at `p` (the dephasing phase is irrelevant).
pub fn visibility_exact(rho: &DensityMatrix, p: &ProtocolParams) -> f64 {
    let rotated = transformed_state(rho, &p.with_phase(0.0));
    2.0 * off_block_readout(rotated.matrix()).norm()
}

/// Complex fringe phasor `z` with `⟨K⟩(φ_d) = 2 Re(e^{iφ_d} z)`; the
/// visibility is `2|z|`.
pub fn fringe_phasor(rho: &DensityMatrix, p: &ProtocolParams) -> C64 {
    let block = rotated_off_block(rho.matrix(), &p.rotation_a().matrix());
    readout_with(&block, &b_readout(&p.rotation_b().matrix()))
}

/// Closed-form Werner visibility.
pub fn werner_visibility_closed(
    cw: f64,
    alpha: f64,
    beta: f64,
    phi_a: f64,
    phi_b: f64,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&cw) {
        return Err(Error::OutOfRange {
            name: "Werner weight c",
            value: cw,
            range: "[0, 1]",
        });
    }
    let d = phi_a - phi_b;
    let x = alpha.sin() * beta.cos() - alpha.cos() * beta.sin() * d.cos();
    let y = beta.sin() * d.sin();
    Ok(cw * (x * x + y * y).sqrt())
}

type Block = [[C64; 2]; 2];

/// A-off-diagonal block `⟨↑|_A (U_A⊗𝕀) ρ (U_A⊗𝕀)† |↓⟩_A`.
fn rotated_off_block(rho: &ComplexMatrix, ua: &ComplexMatrix) -> Block {
    let mut x = [[ZERO; 2]; 2];
    for (k, row) in x.iter_mut().enumerate() {
        for (l, out) in row.iter_mut().enumerate() {
            let mut acc = ZERO;
            for i in 0..2 {
                for j in 0..2 {
                    acc += ua[(0, i)] * rho[(2 * i + k, 2 * j + l)] * ua[(1, j)].conj();
                }
            }
            *out = acc;
        }
    }
    x
}

/// `U_B† σ_z U_B`, so that `tr(U_B X U_B† σ_z) = tr(X · readout)`.
fn b_readout(ub: &ComplexMatrix) -> Block {
    let r = pauli_z().conjugate_by(&ub.adjoint());
    [[r[(0, 0)], r[(0, 1)]], [r[(1, 0)], r[(1, 1)]]]
}

fn readout_with(x: &Block, r: &Block) -> C64 {
    x[0][0] * r[0][0] + x[0][1] * r[1][0] + x[1][0] * r[0][1] + x[1][1] * r[1][1]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldMode {
    Exact,
    Sampled { shots_per_point: u64 },
}

impl FieldMode {
    /// 1e-9 for exact fields, three standard errors `3/√m` when sampled.
    pub fn default_threshold(&self) -> f64 {
        match self {
            FieldMode::Exact => crate::tol::EXACT_ZERO_THRESHOLD,
            FieldMode::Sampled { shots_per_point } => 3.0 / (*shots_per_point as f64).sqrt(),
        }
    }
}

/// Visibility over an `(α, β)` grid at fixed `φ_A`, `φ_B`.
#[derive(Debug, Clone, PartialEq)]
pub struct VisibilityField {
    pub alpha_axis: Vec<f64>,
    pub beta_axis: Vec<f64>,
    /// Row-major in α: `values[ia * beta_axis.len() + ib]`.
    pub values: Vec<f64>,
    pub phi_a: f64,
    pub phi_b: f64,
    pub label: String,
    pub mode: FieldMode,
}

impl VisibilityField {
    pub fn get(&self, ia: usize, ib: usize) -> f64 {
        self.values[ia * self.beta_axis.len() + ib]
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

/// `n` evenly spaced points on `[start, end]` inclusive.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => alloc::vec![start],
        _ => (0..n)
            .map(|k| start + (end - start) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

pub(crate) fn check_axis(axis: &[f64], what: &'static str) -> Result<()> {
    if axis.is_empty() {
        return Err(Error::InvalidGrid(what));
    }
    if axis.iter().any(|x| !x.is_finite()) || axis.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(
            "grid axes must be finite and strictly increasing",
        ));
    }
    Ok(())
}

/// Exact visibility field.
pub fn visibility_map(
    rho: &DensityMatrix,
    alpha_grid: &[f64],
    beta_grid: &[f64],
    phi_a: f64,
    phi_b: f64,
) -> Result<VisibilityField> {
    check_axis(alpha_grid, "empty alpha grid")?;
    check_axis(beta_grid, "empty beta grid")?;
    let readouts: Vec<Block> = beta_grid
        .iter()
        .map(|&b| b_readout(&QubitRotation::new(b, phi_b).matrix()))
        .collect();
    let mut values = Vec::with_capacity(alpha_grid.len() * beta_grid.len());
    for &a in alpha_grid {
        let block = rotated_off_block(rho.matrix(), &QubitRotation::new(a, phi_a).matrix());
        values.extend(
            readouts
                .iter()
                .map(|r| 2.0 * readout_with(&block, r).norm()),
        );
    }
    Ok(VisibilityField {
        alpha_axis: alpha_grid.to_vec(),
        beta_axis: beta_grid.to_vec(),
        values,
        phi_a,
        phi_b,
        label: rho.label().into(),
        mode: FieldMode::Exact,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroColumn {
    pub beta: f64,
    /// Zero-visibility α values in `[0, π)`.
    pub roots: Vec<f64>,
}

/// A zero-visibility polyline followed across β columns.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroLine {
    /// `(β, α*)` with α* unwrapped (continuous modulo π along the line).
    pub points: Vec<(f64, f64)>,
    /// `max α* - min α*` along the unwrapped line.
    pub flatness: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroLineSet {
    pub threshold: f64,
    pub columns: Vec<ZeroColumn>,
    pub lines: Vec<ZeroLine>,
    /// Largest line flatness; `None` when there are no lines or the field is
    /// degenerate.
    pub flatness: Option<f64>,
    /// Every node is below threshold (e.g. the maximally mixed state).
    pub degenerate: bool,
}

/// Circular distance modulo π.
fn mod_pi_distance(a: f64, b: f64) -> f64 {
    let d = wrap_angle(a - b, PI);
    d.min(PI - d)
}

/// Signed difference `a - b` folded into `(-π/2, π/2]`.
fn mod_pi_delta(a: f64, b: f64) -> f64 {
    let d = wrap_angle(a - b, PI);
    if d > PI / 2.0 {
        d - PI
    } else {
        d
    }
}

/// Vertex of the parabola through three points, if it lies between the outer
/// two.
fn parabola_vertex(x: [f64; 3], f: [f64; 3]) -> Option<f64> {
    let (a, b) = (x[1] - x[0], x[1] - x[2]);
    let (fa, fb) = (f[1] - f[2], f[1] - f[0]);
    let den = a * fa - b * fb;
    if den == 0.0 || !den.is_finite() {
        return None;
    }
    let v = x[1] - 0.5 * (a * a * fa - b * b * fb) / den;
    (v >= x[0] && v <= x[2]).then_some(v)
}

/// Locates zero-visibility lines column by column.
///
/// Nodes below `threshold` are grouped into runs along α; each run's minimum
/// is refined by a parabola through `V²` at the minimum and its neighbours.
/// Roots are reported modulo π and chained across columns by nearest
/// neighbour to form lines.
pub fn extract_zero_lines(field: &VisibilityField, threshold: f64) -> Result<ZeroLineSet> {
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(Error::OutOfRange {
            name: "zero threshold",
            value: threshold,
            range: "(0, inf)",
        });
    }
    let na = field.alpha_axis.len();
    let nb = field.beta_axis.len();
    if na == 0 || nb == 0 || field.values.len() != na * nb {
        return Err(Error::InvalidGrid("field shape does not match its axes"));
    }
    if field.values.iter().all(|&v| v < threshold) {
        return Ok(ZeroLineSet {
            threshold,
            columns: field
                .beta_axis
                .iter()
                .map(|&beta| ZeroColumn {
                    beta,
                    roots: Vec::new(),
                })
                .collect(),
            lines: Vec::new(),
            flatness: None,
            degenerate: true,
        });
    }

    let axis = &field.alpha_axis;
    let periodic = na > 2 && (axis[na - 1] - axis[0] - PI).abs() < 1e-12;
    let min_spacing = axis
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let merge_tol = if min_spacing.is_finite() {
        0.5 * min_spacing
    } else {
        1e-9
    };

    let mut columns = Vec::with_capacity(nb);
    for (ib, &beta) in field.beta_axis.iter().enumerate() {
        let v = |ia: usize| field.get(ia, ib);
        let mut roots: Vec<f64> = Vec::new();
        let mut ia = 0;
        while ia < na {
            if v(ia) >= threshold {
                ia += 1;
                continue;
            }
            let start = ia;
            while ia < na && v(ia) < threshold {
                ia += 1;
            }
            let best = (start..ia)
                .min_by(|&x, &y| v(x).total_cmp(&v(y)))
                .expect("non-empty run");
            let neighbours = if best > 0 && best + 1 < na {
                Some((
                    [axis[best - 1], axis[best], axis[best + 1]],
                    [best - 1, best, best + 1],
                ))
            } else if periodic && best == 0 {
                Some(([axis[na - 2] - PI, axis[0], axis[1]], [na - 2, 0, 1]))
            } else if periodic && best == na - 1 {
                Some((
                    [axis[na - 2], axis[na - 1], axis[1] + PI],
                    [na - 2, na - 1, 1],
                ))
            } else {
                None
            };
            let root = neighbours
                .and_then(|(x, idx)| parabola_vertex(x, idx.map(|k| v(k) * v(k))))
                .unwrap_or(axis[best]);
            let root = wrap_angle(root, PI);
            if !roots.iter().any(|&r| mod_pi_distance(r, root) < merge_tol) {
                roots.push(root);
            }
        }
        roots.sort_by(f64::total_cmp);
        columns.push(ZeroColumn { beta, roots });
    }

    let lines = chain_lines(&columns);
    let flatness = lines.iter().map(|l| l.flatness).reduce(f64::max);
    Ok(ZeroLineSet {
        threshold,
        columns,
        lines,
        flatness,
        degenerate: false,
    })
}

/// Greedy nearest-neighbour continuation of roots across columns.
fn chain_lines(columns: &[ZeroColumn]) -> Vec<ZeroLine> {
    const GATE: f64 = PI / 4.0;
    let mut lines: Vec<ZeroLine> = Vec::new();
    for col in columns {
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        for (ri, &r) in col.roots.iter().enumerate() {
            for (li, line) in lines.iter().enumerate() {
                let last = line.points.last().expect("lines are never empty").1;
                let d = mod_pi_distance(r, last);
                if d <= GATE {
                    pairs.push((d, ri, li));
                }
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let mut root_used = alloc::vec![false; col.roots.len()];
        let mut line_used = alloc::vec![false; lines.len()];
        for (_, ri, li) in pairs {
            if root_used[ri] || line_used[li] {
                continue;
            }
            root_used[ri] = true;
            line_used[li] = true;
            let last = lines[li].points.last().expect("non-empty").1;
            let next = last + mod_pi_delta(col.roots[ri], last);
            lines[li].points.push((col.beta, next));
        }
        for (ri, &r) in col.roots.iter().enumerate() {
            if !root_used[ri] {
                lines.push(ZeroLine {
                    points: alloc::vec![(col.beta, r)],
                    flatness: 0.0,
                });
            }
        }
    }
    for line in &mut lines {
        let (lo, hi) = line
            .points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, a)| {
                (lo.min(a), hi.max(a))
            });
        line.flatness = hi - lo;
    }
    lines
}

/// `n_angle` polar angles on `[0, π]` times `n_phase` azimuths on `[0, 2π)`.
pub fn rotation_grid(n_angle: usize, n_phase: usize) -> Vec<QubitRotation> {
    let angles = linspace(0.0, PI, n_angle);
    let mut out = Vec::with_capacity(n_angle * n_phase);
    for &t in &angles {
        for j in 0..n_phase {
            out.push(QubitRotation::new(t, TAU * j as f64 / n_phase as f64));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessResult {
    /// `min_A max_B V`.
    pub value: f64,
    /// First A setting (scan order) attaining the minimum.
    pub a_setting: QubitRotation,
}

/// Scalar zero-discord witness `min over A settings of max over B settings
/// of V`. It vanishes (up to grid resolution) for A-classical states.
pub fn discord_witness(
    rho: &DensityMatrix,
    a_grid: &[QubitRotation],
    b_grid: &[QubitRotation],
) -> Result<WitnessResult> {
    if a_grid.is_empty() || b_grid.is_empty() {
        return Err(Error::InvalidGrid("witness grids must be non-empty"));
    }
    let readouts: Vec<Block> = b_grid.iter().map(|r| b_readout(&r.matrix())).collect();
    let mut best = WitnessResult {
        value: f64::INFINITY,
        a_setting: a_grid[0],
    };
    for a in a_grid {
        let block = rotated_off_block(rho.matrix(), &a.matrix());
        let worst = readouts
            .iter()
            .map(|r| 2.0 * readout_with(&block, r).norm())
            .fold(0.0, f64::max);
        if worst < best.value {
            best = WitnessResult {
                value: worst,
                a_setting: *a,
            };
        }
    }
    Ok(best)
}

/// Frobenius norm of `(Π₁⊗𝕀) ρ (Π₂⊗𝕀)` for the A basis with first vector
/// at Bloch angles `(θ, φ)`.
fn cross_block_norm(rho: &ComplexMatrix, theta: f64, phi: f64) -> f64 {
    let [v1, v2] = crate::discord::MeasurementBasis::new(theta, phi).vectors();
    let mut s = 0.0;
    for k in 0..2 {
        for l in 0..2 {
            let mut acc = ZERO;
            for i in 0..2 {
                for j in 0..2 {
                    acc += v1[i].conj() * rho[(2 * i + k, 2 * j + l)] * v2[j];
                }
            }
            s += acc.norm_sqr();
        }
    }
    s.sqrt()
}

/// Seed of the fixed B settings used by the [`find_s0`] a-posteriori check.
const S0_CHECK_SEED: RandomSeed = RandomSeed(0x050C_4EC4);

/// Finds the A rotation `S₀^A` that maps the classical A basis of an
/// A-classical state onto `{|↑⟩, |↓⟩}`.
///
/// The basis axis minimizes the cross-block norm `‖(Π₁⊗𝕀)ρ(Π₂⊗𝕀)‖`; the
/// returned rotation takes that axis to `ẑ`. The result is verified on 16
/// pseudo-random `(β, φ_B, φ_d)` settings and rejected with
/// [`Error::NotZeroDiscord`] if any visibility exceeds `1e-8`.
pub fn find_s0(rho: &DensityMatrix) -> Result<QubitRotation> {
    let outcome = minimize_on_sphere(
        |t, p| cross_block_norm(rho.matrix(), t, p),
        &SphereSearch::default(),
    );
    let (theta, phi) = match outcome {
        Ok(o) => (o.theta, o.phi),
        Err(Error::NonConvergence { best, .. }) => {
            return Err(Error::NotZeroDiscord {
                max_visibility: best,
            })
        }
        Err(e) => return Err(e),
    };
    // Rotation by θ about -n̂(φ) takes the Bloch point (θ, φ) to ẑ.
    let s0 = QubitRotation::new(theta, wrap_angle(phi + PI, TAU));

    let mut rng = S0_CHECK_SEED.rng();
    let mut worst = 0.0_f64;
    for _ in 0..16 {
        let beta = rng.random_range(0.0..TAU);
        let phi_b = rng.random_range(0.0..TAU);
        let phi_d = rng.random_range(0.0..TAU);
        let p = ProtocolParams::new(s0.theta, s0.phi, beta, phi_b).with_phase(phi_d);
        worst = worst.max(visibility_exact(rho, &p));
    }
    if worst < S0_VISIBILITY_TOL {
        Ok(s0)
    } else {
        Err(Error::NotZeroDiscord {
            max_visibility: worst,
        })
    }
}

/// Least-squares fit of `a₀ + a cos φ + b sin φ`; returns `(a₀, a, b)`.
///
/// Columns that the sample phases cannot resolve (e.g. `sin` at two phases
/// `0, π`) are dropped and reported as zero.
pub fn fit_fringe(phases: &[f64], values: &[f64]) -> (f64, f64, f64) {
    let basis = |phi: f64| [1.0, phi.cos(), phi.sin()];
    let mut gram = [[0.0; 3]; 3];
    let mut rhs = [0.0; 3];
    for (&phi, &y) in phases.iter().zip(values) {
        let f = basis(phi);
        for i in 0..3 {
            rhs[i] += f[i] * y;
            for j in 0..3 {
                gram[i][j] += f[i] * f[j];
            }
        }
    }
    let scale = phases.len().max(1) as f64;
    let sol = solve_dropping_null_columns(gram, rhs, 1e-9 * scale);
    (sol[0], sol[1], sol[2])
}

/// Gaussian elimination with partial pivoting on a symmetric PSD system;
/// pivots below `tol` mark unidentifiable coefficients, which are set to 0.
#[allow(clippy::needless_range_loop)]
fn solve_dropping_null_columns(mut a: [[f64; 3]; 3], mut b: [f64; 3], tol: f64) -> [f64; 3] {
    let mut active = [true; 3];
    for k in 0..3 {
        if a[k][k].abs() < tol {
            active[k] = false;
        }
    }
    for k in 0..3 {
        if !active[k] {
            for j in 0..3 {
                a[k][j] = 0.0;
                a[j][k] = 0.0;
            }
            a[k][k] = 1.0;
            b[k] = 0.0;
        }
    }
    for col in 0..3 {
        let piv = (col..3)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .expect("non-empty");
        a.swap(col, piv);
        b.swap(col, piv);
        let d = a[col][col];
        if d.abs() < tol {
            continue;
        }
        for r in col + 1..3 {
            let f = a[r][col] / d;
            for j in col..3 {
                a[r][j] -= f * a[col][j];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for r in (0..3).rev() {
        let s: f64 = (r + 1..3).map(|j| a[r][j] * x[j]).sum();
        x[r] = if a[r][r].abs() < tol {
            0.0
        } else {
            (b[r] - s) / a[r][r]
        };
    }
    x
}
