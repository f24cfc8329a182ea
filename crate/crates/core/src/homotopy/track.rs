//! Predictor-corrector path tracking for coefficient-parametrized Laurent
//! systems.
//!
//! Every homotopy here has coefficients of the form
//! `base · σ^γ · exp(i·phase·(1−σ))` with γ ≥ 0, tracked for σ from a small
//! σ₀ up to 1, where the coefficients equal `base` exactly. Terms with γ = 0
//! form the start system; the winding phase keeps the path off the
//! discriminant for almost every ray angle.

use crate::numeric::{inf_norm, monomial, ComplexLu, C64};

pub const SIGMA0: f64 = 1e-6;
pub const MIN_STEP: f64 = 1e-8;
pub const MAX_STEP: f64 = 0.1;
pub const BLOWUP: f64 = 1e12;
pub const ACCEPT_RESIDUAL: f64 = 1e-10;
const NEWTON_ITERS: usize = 4;
const POLISH_ITERS: usize = 30;

#[derive(Debug, Clone)]
pub struct PathTerm {
    pub eq: usize,
    pub expo: Vec<i64>,
    pub base: C64,
    pub gamma: f64,
    pub phase: f64,
}

/// A square system whose coefficients move along σ ∈ (0, 1].
#[derive(Debug, Clone)]
pub struct PathSystem {
    pub n: usize,
    pub terms: Vec<PathTerm>,
}

impl PathSystem {
    fn coeff(&self, t: &PathTerm, sigma: f64) -> C64 {
        let mag = if t.gamma == 0.0 {
            1.0
        } else {
            sigma.powf(t.gamma)
        };
        let rot = C64::from_polar(mag, t.phase * (1.0 - sigma));
        t.base * rot
    }

    /// d/dσ of the coefficient: (γ/σ − i·phase) · coeff.
    fn coeff_dsigma(&self, t: &PathTerm, sigma: f64) -> C64 {
        self.coeff(t, sigma) * C64::new(t.gamma / sigma, -t.phase)
    }

    pub fn eval(&self, y: &[C64], sigma: f64) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.n];
        for t in &self.terms {
            out[t.eq] += self.coeff(t, sigma) * monomial(y, &t.expo);
        }
        out
    }

    pub fn jacobian(&self, y: &[C64], sigma: f64) -> Vec<Vec<C64>> {
        let mut jac = vec![vec![C64::new(0.0, 0.0); self.n]; self.n];
        for t in &self.terms {
            let v = self.coeff(t, sigma) * monomial(y, &t.expo);
            for l in 0..self.n {
                if t.expo[l] != 0 {
                    jac[t.eq][l] += v * C64::new(t.expo[l] as f64, 0.0) / y[l];
                }
            }
        }
        jac
    }

    pub fn dsigma(&self, y: &[C64], sigma: f64) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.n];
        for t in &self.terms {
            out[t.eq] += self.coeff_dsigma(t, sigma) * monomial(y, &t.expo);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathStatus {
    Converged,
    Diverged,
    Stalled,
}

#[derive(Debug, Clone)]
pub struct PathResult {
    pub status: PathStatus,
    pub y: Vec<C64>,
    pub sigma_reached: f64,
    pub steps: usize,
    pub last_newton_step: f64,
}

fn out_of_range(y: &[C64]) -> bool {
    y.iter()
        .any(|c| !c.is_finite() || c.norm() > BLOWUP || c.norm() < 1.0 / BLOWUP)
}

/// Newton-correct `y` in place at fixed σ. Returns the final relative step
/// norm, or None when the iteration broke down or left the window.
pub fn newton_refine(
    sys: &PathSystem,
    y: &mut Vec<C64>,
    sigma: f64,
    iters: usize,
    tol: f64,
) -> Option<f64> {
    let mut last = f64::INFINITY;
    for _ in 0..iters {
        let g = sys.eval(y, sigma);
        let jac = sys.jacobian(y, sigma);
        let lu = ComplexLu::new(&jac);
        let step = lu.solve(&g)?;
        for (yi, si) in y.iter_mut().zip(&step) {
            *yi -= si;
        }
        if out_of_range(y) {
            return None;
        }
        last = inf_norm(&step) / (1.0 + inf_norm(y));
        if last < tol {
            return Some(last);
        }
    }
    if last < tol * 10.0 {
        Some(last)
    } else {
        None
    }
}

/// Track one path from σ₀ to 1 with an Euler predictor and Newton corrector.
pub fn track_path(sys: &PathSystem, start: Vec<C64>, sigma0: f64) -> PathResult {
    let mut y = start;
    let mut steps = 0usize;
    // settle onto the path at σ₀
    if newton_refine(sys, &mut y, sigma0, POLISH_ITERS, 1e-12).is_none() {
        let status = if out_of_range(&y) {
            PathStatus::Diverged
        } else {
            PathStatus::Stalled
        };
        return PathResult {
            status,
            y,
            sigma_reached: sigma0,
            steps,
            last_newton_step: f64::INFINITY,
        };
    }
    let mut sigma = sigma0;
    let mut h = 1e-2f64;
    let mut last_newton = 0.0f64;
    while sigma < 1.0 {
        h = h.min(1.0 - sigma).min(MAX_STEP);
        let target = sigma + h;
        // Euler predictor: y ← y − J⁻¹ ∂H/∂σ · h
        let jac = sys.jacobian(&y, sigma);
        let rhs = sys.dsigma(&y, sigma);
        let predicted = match ComplexLu::new(&jac).solve(&rhs) {
            Some(dy) => {
                let mut p = y.clone();
                for (pi, di) in p.iter_mut().zip(&dy) {
                    *pi -= *di * C64::new(h, 0.0);
                }
                p
            }
            None => y.clone(),
        };
        let mut corrected = predicted;
        let ok = !out_of_range(&corrected)
            && match newton_refine(sys, &mut corrected, target, NEWTON_ITERS, 1e-9) {
                Some(step) => {
                    last_newton = step;
                    true
                }
                None => false,
            };
        if ok {
            y = corrected;
            sigma = target;
            steps += 1;
            h = (h * 1.5).min(MAX_STEP);
            if out_of_range(&y) {
                return PathResult {
                    status: PathStatus::Diverged,
                    y,
                    sigma_reached: sigma,
                    steps,
                    last_newton_step: last_newton,
                };
            }
        } else {
            h *= 0.4;
            if h < MIN_STEP {
                // a path racing to toric infinity shrinks steps while the
                // coordinates escape; report that as divergence
                let status = if inf_norm(&y) > 1e6 || y.iter().any(|c| c.norm() < 1e-6) {
                    PathStatus::Diverged
                } else {
                    PathStatus::Stalled
                };
                return PathResult {
                    status,
                    y,
                    sigma_reached: sigma,
                    steps,
                    last_newton_step: last_newton,
                };
            }
        }
    }
    // final polish at σ = 1
    match newton_refine(sys, &mut y, 1.0, POLISH_ITERS, 1e-14) {
        Some(step) => PathResult {
            status: PathStatus::Converged,
            y,
            sigma_reached: 1.0,
            steps,
            last_newton_step: step,
        },
        None => {
            let status = if out_of_range(&y) || inf_norm(&y) > 1e6 {
                PathStatus::Diverged
            } else {
                PathStatus::Stalled
            };
            PathResult {
                status,
                y,
                sigma_reached: 1.0,
                steps,
                last_newton_step: f64::INFINITY,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // y² − 1 − σ = 0: the path y(σ) = √(1+σ) from 1 to √2
    fn quad() -> PathSystem {
        PathSystem {
            n: 1,
            terms: vec![
                PathTerm {
                    eq: 0,
                    expo: vec![2],
                    base: C64::new(1.0, 0.0),
                    gamma: 0.0,
                    phase: 0.0,
                },
                PathTerm {
                    eq: 0,
                    expo: vec![0],
                    base: C64::new(-1.0, 0.0),
                    gamma: 0.0,
                    phase: 0.0,
                },
                PathTerm {
                    eq: 0,
                    expo: vec![0],
                    base: C64::new(-1.0, 0.0),
                    gamma: 1.0,
                    phase: 0.0,
                },
            ],
        }
    }

    #[test]
    fn tracks_a_simple_quadratic() {
        let res = track_path(&quad(), vec![C64::new(1.0, 0.0)], SIGMA0);
        assert_eq!(res.status, PathStatus::Converged);
        assert!((res.y[0] - C64::new(2.0f64.sqrt(), 0.0)).norm() < 1e-10);
    }

    #[test]
    fn constant_homotopy_keeps_start() {
        let sys = PathSystem {
            n: 1,
            terms: vec![
                PathTerm {
                    eq: 0,
                    expo: vec![1],
                    base: C64::new(1.0, 0.0),
                    gamma: 0.0,
                    phase: 0.0,
                },
                PathTerm {
                    eq: 0,
                    expo: vec![0],
                    base: C64::new(-2.0, 0.0),
                    gamma: 0.0,
                    phase: 0.0,
                },
            ],
        };
        let res = track_path(&sys, vec![C64::new(2.0, 0.0)], SIGMA0);
        assert_eq!(res.status, PathStatus::Converged);
        assert!((res.y[0] - C64::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn diverging_path_is_reported() {
        // (1 − σ)·y − 1 = 0: the root 1/(1−σ) escapes as σ → 1
        let sys = PathSystem {
            n: 1,
            terms: vec![
                PathTerm {
                    eq: 0,
                    expo: vec![1],
                    base: C64::new(1.0, 0.0),
                    gamma: 0.0,
                    phase: 0.0,
                },
                PathTerm {
                    eq: 0,
                    expo: vec![1],
                    base: C64::new(-1.0, 0.0),
                    gamma: 1.0,
                    phase: 0.0,
                },
                PathTerm {
                    eq: 0,
                    expo: vec![0],
                    base: C64::new(-1.0, 0.0),
                    gamma: 0.0,
                    phase: 0.0,
                },
            ],
        };
        let res = track_path(&sys, vec![C64::new(1.0, 0.0)], SIGMA0);
        assert_eq!(res.status, PathStatus::Diverged);
    }
}
