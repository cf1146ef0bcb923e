//! Numerical kernels: semi-infinite oscillatory integrals, accelerated
//! alternating sums, and one-sided derivative checks.
//!
//! The first-passage integral representations all look like
//! `int_0^inf f(p) sin(a p) dp` with `f` smooth and (at worst)
//! algebraically decaying. The reliable way to evaluate these is
//! Longman's method: split the axis at the zeros of the sine factor,
//! integrate each half-period with Gauss-Legendre panels, and accelerate
//! the resulting alternating segment series with the Euler
//! transformation.

use crate::error::{Error, Result};

/// A semi-infinite integrand with its oscillation structure.
pub struct IntegrandSpec<'a> {
    /// The full integrand (including the sine factor), evaluated at p > 0.
    pub evaluate: &'a dyn Fn(f64) -> f64,
    /// Coefficient `a` in the sin(a p) factor; 0 means non-oscillatory.
    pub oscillation_wavenumber: f64,
    /// Rough exponential decay rate of the envelope (0 = algebraic decay).
    pub decay_hint: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Cap on the number of sine half-period segments.
    pub max_half_periods: usize,
    /// Depth of the Euler transformation applied to the segment sums.
    pub accel_order: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            max_half_periods: 512,
            accel_order: 12,
        }
    }
}

/// Integral estimate with an error bound.
#[derive(Clone, Copy, Debug)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

// 15-point Gauss-Legendre nodes/weights on [-1, 1] (positive half; the
// rule is symmetric).
const GL_NODES: [f64; 8] = [
    0.0,
    0.201194093997434522,
    0.394151347077563370,
    0.570972172608538848,
    0.724417731360170047,
    0.848206583410427216,
    0.937273392400705904,
    0.987992518020485428,
];
const GL_WEIGHTS: [f64; 8] = [
    0.202578241925561273,
    0.198431485327111576,
    0.186161000015562211,
    0.166269205816993934,
    0.139570677926154314,
    0.107159220467171935,
    0.070366047488108125,
    0.030753241996117268,
];

fn gauss_legendre(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut sum = GL_WEIGHTS[0] * f(mid);
    for i in 1..8 {
        let dx = half * GL_NODES[i];
        sum += GL_WEIGHTS[i] * (f(mid + dx) + f(mid - dx));
    }
    sum * half
}

/// Adaptive bisection around the fixed-order rule; the integrands are
/// smooth inside a half-period, so this rarely recurses.
fn adaptive_segment(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: usize) -> f64 {
    let whole = gauss_legendre(f, a, b);
    let mid = 0.5 * (a + b);
    let left = gauss_legendre(f, a, mid);
    let right = gauss_legendre(f, mid, b);
    let split = left + right;
    // Floor the tolerance at the roundoff level of the panel values so a
    // noise-limited integrand cannot drive the recursion to the depth cap.
    let floor = 1e-14 * (left.abs() + right.abs());
    if (whole - split).abs() <= tol.max(floor) || depth >= 12 {
        split
    } else {
        adaptive_segment(f, a, mid, tol / 2.0, depth + 1)
            + adaptive_segment(f, mid, b, tol / 2.0, depth + 1)
    }
}

/// Euler transformation of a sequence of partial sums; returns the
/// accelerated estimate from the most recent `depth + 1` entries.
fn euler_accelerate(partials: &[f64], depth: usize) -> f64 {
    let take = (depth + 1).min(partials.len());
    let mut row: Vec<f64> = partials[partials.len() - take..].to_vec();
    while row.len() > 1 {
        for i in 0..row.len() - 1 {
            row[i] = 0.5 * (row[i] + row[i + 1]);
        }
        row.pop();
    }
    row[0]
}

/// Evaluates `int_0^inf spec(p) dp` by the Longman segment scheme.
///
/// ```
/// use lobexec::quadrature::{integrate_oscillatory, IntegrandSpec, QuadConfig};
///
/// // int_0^inf e^{-p} sin(p) dp = 1/2
/// let spec = IntegrandSpec {
///     evaluate: &|p: f64| (-p).exp() * p.sin(),
///     oscillation_wavenumber: 1.0,
///     decay_hint: 1.0,
/// };
/// let est = integrate_oscillatory(&spec, &QuadConfig::default()).unwrap();
/// assert!((est.value - 0.5).abs() < 1e-9);
/// ```
pub fn integrate_oscillatory(spec: &IntegrandSpec, cfg: &QuadConfig) -> Result<Estimate> {
    let a = spec.oscillation_wavenumber;
    let seg_len = if a > 0.0 {
        std::f64::consts::PI / a
    } else {
        // Non-oscillatory: pick a scale from the decay hint.
        if spec.decay_hint > 0.0 {
            (2.0 / spec.decay_hint).min(50.0)
        } else {
            1.0
        }
    };
    let seg_tol = cfg.abs_tol * 1e-2;

    let mut partials: Vec<f64> = Vec::with_capacity(64);
    let mut plain_sum = 0.0;
    let mut estimate = f64::NAN;
    let mut tiny_run = 0usize;

    for k in 0..cfg.max_half_periods {
        let lo = k as f64 * seg_len;
        let hi = lo + seg_len;
        let u = adaptive_segment(spec.evaluate, lo, hi, seg_tol, 0);
        plain_sum += u;
        partials.push(plain_sum);

        let tol = cfg.abs_tol.max(cfg.rel_tol * plain_sum.abs());
        if u.abs() < 0.01 * cfg.abs_tol {
            tiny_run += 1;
            if tiny_run >= 2 {
                // Exponentially decaying tail: the plain sum already converged.
                return Ok(Estimate {
                    value: plain_sum,
                    error: u.abs(),
                });
            }
        } else {
            tiny_run = 0;
        }

        if partials.len() >= 4 {
            let prev = estimate;
            estimate = euler_accelerate(&partials, cfg.accel_order);
            let err = (estimate - prev).abs();
            if prev.is_finite() && err <= tol && k >= 7 {
                return Ok(Estimate {
                    value: estimate,
                    error: err.max(f64::EPSILON * estimate.abs()),
                });
            }
        }
    }

    Err(Error::Convergence {
        context: "integrate_oscillatory".to_string(),
        limit: cfg.max_half_periods,
        unit: "half-periods",
        partial: if estimate.is_finite() { estimate } else { plain_sum },
    })
}

/// Accelerated sum of an (eventually) alternating series.
pub fn sum_alternating<I: Iterator<Item = f64>>(terms: I, cfg: &QuadConfig) -> Result<f64> {
    let max_terms = 200_000usize;
    let mut partials: Vec<f64> = Vec::new();
    let mut sum = 0.0;
    let mut estimate = f64::NAN;
    let mut last_term = f64::NAN;
    let mut alternating = true;

    for (i, t) in terms.take(max_terms).enumerate() {
        sum += t;
        partials.push(sum);
        if i > 0 && t != 0.0 && last_term != 0.0 && (t.signum() == last_term.signum()) {
            alternating = false;
        }
        last_term = t;

        let tol = cfg.abs_tol.max(cfg.rel_tol * sum.abs());
        if alternating {
            if partials.len() >= 4 {
                let prev = estimate;
                estimate = euler_accelerate(&partials, cfg.accel_order);
                if prev.is_finite() && (estimate - prev).abs() <= tol && i >= 7 {
                    return Ok(estimate);
                }
            }
        } else if t.abs() <= tol {
            // Fall back to direct summation once the terms are below
            // tolerance (valid when the tail keeps shrinking).
            return Ok(sum);
        }
        if partials.len() > 4096 {
            partials.drain(..2048);
        }
    }

    Err(Error::Convergence {
        context: "sum_alternating".to_string(),
        limit: max_terms,
        unit: "terms",
        partial: if estimate.is_finite() { estimate } else { sum },
    })
}

/// One-sided finite-difference derivative of `f` at 0+, with Richardson
/// extrapolation. Used as an independent check on the analytic
/// omega-derivatives; returns an error when the estimates diverge (the
/// driftless free case has an omega log omega singularity).
pub fn derivative_at_zero_plus(f: &dyn Fn(f64) -> f64, order: u8, step: f64) -> Result<f64> {
    assert!(order == 1 || order == 2, "order must be 1 or 2");
    let stencil = |h: f64| -> f64 {
        match order {
            1 => {
                // 5-point one-sided first derivative, O(h^4).
                (-25.0 * f(0.0) + 48.0 * f(h) - 36.0 * f(2.0 * h) + 16.0 * f(3.0 * h)
                    - 3.0 * f(4.0 * h))
                    / (12.0 * h)
            }
            _ => {
                // 6-point one-sided second derivative, O(h^4).
                (45.0 * f(0.0) - 154.0 * f(h) + 214.0 * f(2.0 * h) - 156.0 * f(3.0 * h)
                    + 61.0 * f(4.0 * h)
                    - 10.0 * f(5.0 * h))
                    / (12.0 * h * h)
            }
        }
    };

    let d: Vec<f64> = (0..4).map(|i| stencil(step / 2f64.powi(i))).collect();
    let diffs: Vec<f64> = d.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    // Analytic f: successive halvings shrink the error by ~16. A log
    // singularity keeps the differences roughly constant instead.
    if diffs[1] > 0.8 * diffs[0].max(1e-300) && diffs[2] > 0.8 * diffs[1] {
        let scale = d[3].abs().max(1.0);
        if diffs[2] > 1e-6 * scale {
            return Err(Error::DivergingDerivative);
        }
    }
    // Richardson on the O(h^4) leading error.
    let r0 = (16.0 * d[1] - d[0]) / 15.0;
    let r1 = (16.0 * d[2] - d[1]) / 15.0;
    let r2 = (16.0 * d[3] - d[2]) / 15.0;
    let _ = r0;
    Ok((32.0 * r2 - r1) / 31.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn dirichlet_integral() {
        let f = |p: f64| if p == 0.0 { 1.0 } else { p.sin() / p };
        let spec = IntegrandSpec {
            evaluate: &f,
            oscillation_wavenumber: 1.0,
            decay_hint: 0.0,
        };
        let est = integrate_oscillatory(&spec, &QuadConfig::default()).unwrap();
        assert_relative_eq!(est.value, PI / 2.0, epsilon = 1e-9);
    }

    #[test]
    fn damped_sine() {
        let f = |p: f64| p.sin() * (-p).exp();
        let spec = IntegrandSpec {
            evaluate: &f,
            oscillation_wavenumber: 1.0,
            decay_hint: 1.0,
        };
        let est = integrate_oscillatory(&spec, &QuadConfig::default()).unwrap();
        assert_relative_eq!(est.value, 0.5, epsilon = 1e-10);
    }

    #[test]
    fn alternating_harmonic() {
        let cfg = QuadConfig::default();
        let s = sum_alternating(
            (1..).map(|n| if n % 2 == 1 { 1.0 / n as f64 } else { -1.0 / n as f64 }),
            &cfg,
        )
        .unwrap();
        assert_relative_eq!(s, 2f64.ln(), epsilon = 1e-9);
    }

    #[test]
    fn log_series_instance() {
        let cfg = QuadConfig::default();
        let s = sum_alternating(
            (1..).map(|n| {
                let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
                sign * (-(n as f64)).exp() / n as f64
            }),
            &cfg,
        )
        .unwrap();
        assert_relative_eq!(s, (1.0 + (-1f64).exp()).ln(), epsilon = 1e-10);
    }

    #[test]
    fn one_sided_derivatives() {
        let f = |w: f64| (-3.0 * w).exp();
        let d = derivative_at_zero_plus(&f, 1, 1e-2).unwrap();
        assert_relative_eq!(d, -3.0, epsilon = 1e-6);

        let g = |w: f64| 1.0 - 2.0 * w + 5.0 * w * w;
        let d2 = derivative_at_zero_plus(&g, 2, 1e-2).unwrap();
        assert_relative_eq!(d2, 10.0, epsilon = 1e-6);
    }

    #[test]
    fn log_singularity_flagged() {
        let f = |w: f64| {
            if w == 0.0 {
                0.0
            } else {
                0.3 * w + 0.5 * w * w.ln()
            }
        };
        assert!(matches!(
            derivative_at_zero_plus(&f, 1, 1e-2),
            Err(Error::DivergingDerivative)
        ));
    }

    #[test]
    fn halved_tolerance_never_worse() {
        let f = |p: f64| p.sin() * (-0.3 * p).exp();
        let spec = IntegrandSpec {
            evaluate: &f,
            oscillation_wavenumber: 1.0,
            decay_hint: 0.3,
        };
        let cfg = QuadConfig::default();
        let tight = QuadConfig {
            abs_tol: cfg.abs_tol / 2.0,
            rel_tol: cfg.rel_tol / 2.0,
            ..cfg
        };
        let e0 = integrate_oscillatory(&spec, &cfg).unwrap();
        let e1 = integrate_oscillatory(&spec, &tight).unwrap();
        assert!(e1.error <= e0.error * (1.0 + 1e-12));
        let exact = 1.0 / (1.0 + 0.3f64 * 0.3);
        assert_relative_eq!(e0.value, exact, epsilon = 1e-9);
    }
}
