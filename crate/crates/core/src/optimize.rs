//! Minimization over the Bloch sphere: a coarse `(θ, φ)` grid followed by
//! Nelder–Mead refinement from the best grid nodes.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_traits::Euclid;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereSearch {
    /// Grid nodes in θ, spanning `[0, π]` inclusive.
    pub theta_points: usize,
    /// Grid nodes in φ, spanning `[0, 2π)`.
    pub phi_points: usize,
    /// Number of best grid nodes refined by the simplex.
    pub refinements: usize,
    pub max_iterations: usize,
    /// Stop once `max f - min f` over the simplex drops below this.
    pub spread_tol: f64,
}

impl Default for SphereSearch {
    fn default() -> Self {
        SphereSearch {
            theta_points: 32,
            phi_points: 64,
            refinements: 3,
            max_iterations: 200,
            spread_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOutcome {
    /// Canonical angles: `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
    pub theta: f64,
    pub phi: f64,
    pub value: f64,
    /// Simplex iterations of the refinement that produced the minimum.
    pub iterations: usize,
    pub spread: f64,
    pub evaluations: usize,
}

/// Maps arbitrary `(θ, φ)` to the same point on the sphere with
/// `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
pub fn canonical_angles(theta: f64, phi: f64) -> (f64, f64) {
    let mut t = wrap_angle(theta, TAU);
    let mut p = phi;
    if t > PI {
        t = TAU - t;
        p += PI;
    }
    (t, wrap_angle(p, TAU))
}

/// `x` reduced to `[0, period)`.
pub fn wrap_angle(x: f64, period: f64) -> f64 {
    let r = Euclid::rem_euclid(&x, &period);
    // rem_euclid can round up to `period` for tiny negative inputs.
    if r >= period {
        0.0
    } else {
        r
    }
}

/// Minimizes `f(θ, φ)` over the sphere.
///
/// Grid ties go to the lexicographically smallest `(θ, φ)`. Each of the best
/// `refinements` nodes seeds an independent simplex; the lowest converged
/// result wins. If no simplex meets `spread_tol` within `max_iterations` the
/// best value found is returned inside [`Error::NonConvergence`].
pub fn minimize_on_sphere<F>(mut f: F, opts: &SphereSearch) -> Result<SearchOutcome>
where
    F: FnMut(f64, f64) -> f64,
{
    if opts.theta_points < 2 || opts.phi_points < 1 || opts.refinements == 0 {
        return Err(Error::InvalidGrid(
            "sphere search needs at least a 2x1 grid",
        ));
    }
    let dtheta = PI / (opts.theta_points - 1) as f64;
    let dphi = TAU / opts.phi_points as f64;

    let mut nodes: Vec<(f64, f64, f64)> = Vec::with_capacity(opts.theta_points * opts.phi_points);
    for i in 0..opts.theta_points {
        for j in 0..opts.phi_points {
            let (t, p) = (i as f64 * dtheta, j as f64 * dphi);
            nodes.push((f(t, p), t, p));
        }
    }
    let mut evaluations = nodes.len();
    // Stable sort keeps scan order (lexicographic in (θ, φ)) among equal values.
    nodes.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut best: Option<(Simplex, bool)> = None;
    for &(_, t, p) in nodes.iter().take(opts.refinements) {
        let mut simplex = Simplex::around(&mut f, [t, p], [dtheta, dphi]);
        let converged = simplex.run(&mut f, opts);
        evaluations += simplex.evaluations;
        let better = match &best {
            None => true,
            Some((b, b_conv)) => {
                (converged && !b_conv) || (converged == *b_conv && simplex.best() < b.best())
            }
        };
        if better {
            best = Some((simplex, converged));
        }
    }

    let (simplex, converged) = best.expect("at least one refinement");
    if !converged {
        return Err(Error::NonConvergence {
            best: simplex.best(),
            spread: simplex.spread(),
            iterations: simplex.iterations,
        });
    }
    let [t, p] = simplex.points[0];
    let (theta, phi) = canonical_angles(t, p);
    Ok(SearchOutcome {
        theta,
        phi,
        value: simplex.values[0],
        iterations: simplex.iterations,
        spread: simplex.spread(),
        evaluations,
    })
}

/// Two-dimensional Nelder–Mead simplex, kept sorted by value.
struct Simplex {
    points: [[f64; 2]; 3],
    values: [f64; 3],
    iterations: usize,
    evaluations: usize,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

fn lerp(a: [f64; 2], b: [f64; 2], t: f64) -> [f64; 2] {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

impl Simplex {
    fn around<F: FnMut(f64, f64) -> f64>(f: &mut F, x0: [f64; 2], step: [f64; 2]) -> Self {
        let points = [x0, [x0[0] + step[0], x0[1]], [x0[0], x0[1] + step[1]]];
        let values = points.map(|x| f(x[0], x[1]));
        let mut s = Simplex {
            points,
            values,
            iterations: 0,
            evaluations: 3,
        };
        s.sort();
        s
    }

    fn sort(&mut self) {
        let mut idx = [0, 1, 2];
        idx.sort_by(|&a, &b| self.values[a].total_cmp(&self.values[b]));
        self.points = idx.map(|i| self.points[i]);
        self.values = idx.map(|i| self.values[i]);
    }

    fn best(&self) -> f64 {
        self.values[0]
    }

    fn spread(&self) -> f64 {
        self.values[2] - self.values[0]
    }

    fn eval<F: FnMut(f64, f64) -> f64>(&mut self, f: &mut F, x: [f64; 2]) -> f64 {
        self.evaluations += 1;
        f(x[0], x[1])
    }

    /// Returns whether the spread criterion was met.
    fn run<F: FnMut(f64, f64) -> f64>(&mut self, f: &mut F, opts: &SphereSearch) -> bool {
        while self.spread() >= opts.spread_tol {
            if self.iterations >= opts.max_iterations {
                return false;
            }
            self.iterations += 1;
            self.step(f);
        }
        true
    }

    fn step<F: FnMut(f64, f64) -> f64>(&mut self, f: &mut F) {
        let centroid = lerp(self.points[0], self.points[1], 0.5);
        let worst = self.points[2];
        let reflected = lerp(centroid, worst, -REFLECT);
        let fr = self.eval(f, reflected);

        if fr < self.values[0] {
            let expanded = lerp(centroid, worst, -EXPAND);
            let fe = self.eval(f, expanded);
            if fe < fr {
                self.replace_worst(expanded, fe);
            } else {
                self.replace_worst(reflected, fr);
            }
        } else if fr < self.values[1] {
            self.replace_worst(reflected, fr);
        } else {
            let (candidate, fc) = if fr < self.values[2] {
                let outside = lerp(centroid, reflected, CONTRACT);
                (outside, self.eval(f, outside))
            } else {
                let inside = lerp(centroid, worst, CONTRACT);
                (inside, self.eval(f, inside))
            };
            if fc < fr.min(self.values[2]) {
                self.replace_worst(candidate, fc);
            } else {
                for k in 1..3 {
                    self.points[k] = lerp(self.points[0], self.points[k], SHRINK);
                    self.values[k] = self.eval(f, self.points[k]);
                }
                self.sort();
            }
        }
    }

    fn replace_worst(&mut self, x: [f64; 2], fx: f64) {
        self.points[2] = x;
        self.values[2] = fx;
        self.sort();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_minimum_of_smooth_function() {
        // Minimum at θ = 1.2, φ = 4.0 (distance on the sphere is smooth).
        let target = crate::states::bloch_vector(1.2, 4.0);
        let f = |t: f64, p: f64| {
            let v = crate::states::bloch_vector(t, p);
            1.0 - (v[0] * target[0] + v[1] * target[1] + v[2] * target[2])
        };
        let out = minimize_on_sphere(f, &SphereSearch::default()).unwrap();
        assert!(out.value < 1e-9);
        assert!((out.theta - 1.2).abs() < 1e-4 && (out.phi - 4.0).abs() < 1e-4);
    }

    #[test]
    fn constant_function_converges_immediately() {
        let out = minimize_on_sphere(|_, _| 0.25, &SphereSearch::default()).unwrap();
        assert_eq!(out.iterations, 0);
        assert_eq!((out.theta, out.phi), (0.0, 0.0));
    }

    #[test]
    fn reports_non_convergence() {
        let opts = SphereSearch {
            max_iterations: 2,
            ..SphereSearch::default()
        };
        let err = minimize_on_sphere(|t, p| (t - 0.123).powi(2) + (p - 0.456).powi(2), &opts)
            .unwrap_err();
        assert!(matches!(err, Error::NonConvergence { iterations: 2, .. }));
    }

    #[test]
    fn canonical_angles_preserve_the_point() {
        for (t, p) in [(-0.5, 1.0), (4.0, 0.3), (7.0, -2.0), (1.0, 9.0)] {
            let (ct, cp) = canonical_angles(t, p);
            assert!((0.0..=PI).contains(&ct) && (0.0..TAU).contains(&cp));
            let a = crate::states::bloch_vector(t, p);
            let b = crate::states::bloch_vector(ct, cp);
            for k in 0..3 {
                assert!((a[k] - b[k]).abs() < 1e-12);
            }
        }
    }
}
