//! First-passage quantities on the free quadrant and the semi-infinite
//! strip.
//!
//! State is the pair of queue volumes (V^b, V^a) diffusing with drift -mu
//! on (0,inf) x (0,q) (the free case is q = inf). Three absorbing
//! boundaries matter: V^b = 0 (price down), V^a = 0 (price up) and
//! V^a = q (execution). `p_ex`, `p_up`, `p_dn` denote the Laplace
//! transforms (frequency omega) of the first-passage densities through
//! each boundary; at omega = 0 they are the splitting probabilities.
//!
//! Two representations are implemented: a sine series in q_n = pi n / q
//! (authoritative, valid for all omega >= 0) and semi-infinite oscillatory
//! integrals (used as an independent cross-check). The series is summed
//! with jets so that first and second omega-derivatives — i.e. hitting
//! time moments — come out analytically rather than by finite differences.

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::model::{ModelParams, StripGeometry, BOUNDARY_SNAP};
use crate::quadrature::{integrate_oscillatory, IntegrandSpec, QuadConfig};
use std::f64::consts::PI;

/// Euler-Mascheroni constant.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Default absolute truncation target for the series tail.
const SERIES_TOL: f64 = 1e-12;
/// Hard cap on series terms.
const SERIES_CAP: usize = 10_000;

/// First-passage triple at a given state and Laplace frequency.
#[derive(Clone, Copy, Debug)]
pub struct HitProbTriple {
    pub p_ex: f64,
    pub p_up: f64,
    pub p_dn: f64,
    pub omega: f64,
    /// (V^b, V^a).
    pub state: (f64, f64),
    /// Execution threshold; `f64::INFINITY` for the free quadrant.
    pub q: f64,
}

impl HitProbTriple {
    pub fn sum(&self) -> f64 {
        self.p_ex + self.p_up + self.p_dn
    }
}

/// Which first-hit boundary a time moment is conditioned on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conditioning {
    Exec,
    Up,
    Down,
    /// Unconditional: time to hit any boundary.
    Any,
}

/// Hitting-time moments; `None` marks a divergent moment (driftless free
/// case).
#[derive(Clone, Copy, Debug)]
pub struct HittingTimeMoments {
    pub mean: Option<f64>,
    pub second_moment: Option<f64>,
    pub conditional_on: Conditioning,
    pub state: (f64, f64),
    pub q: f64,
    pub mu: f64,
}

/// Leading non-analytic expansion coefficients of the free driftless
/// up-probability: p_up(omega) = p_up(0) + a1 omega + b1 omega log omega + ...
#[derive(Clone, Copy, Debug)]
pub struct SmallOmegaCoeffs {
    pub a1: f64,
    pub b1: f64,
}

/// Free-quadrant values plus the leading large-q corrections of the strip
/// triple, exposed separately so the correction itself is testable.
#[derive(Clone, Copy, Debug)]
pub struct LargeQExpansion {
    pub free: HitProbTriple,
    /// Additive corrections (delta_ex, delta_up, delta_dn).
    pub correction: [f64; 3],
}

fn boundary_snap_triple(state: (f64, f64), q: f64, omega: f64) -> Option<[Jet; 3]> {
    let (vb, va) = state;
    let one = [Jet::c(1.0), Jet::ZERO, Jet::ZERO];
    if va >= q - BOUNDARY_SNAP {
        return Some(one);
    }
    if va <= BOUNDARY_SNAP {
        return Some([Jet::ZERO, Jet::c(1.0), Jet::ZERO]);
    }
    if vb <= BOUNDARY_SNAP {
        return Some([Jet::ZERO, Jet::ZERO, Jet::c(1.0)]);
    }
    let _ = omega;
    None
}

/// Sine-series evaluation of the strip triple, carried as jets in omega.
///
/// The conditionally convergent parts of the ex/up series are split off
/// analytically: with a = 2 omega + mu^2 and c_n = (1 - e_n)/(1 + a/q_n^2),
/// the summand factor c_n - 1 is rewritten as -a/q_n^2 + r_n with
/// r_n = (a^2/q_n^4 - e_n)/(1 + a/q_n^2). The -a/q_n^2 piece combines with
/// sin(n theta)/n into closed-form Fourier sums (of 1/n and 1/n^3 type),
/// leaving a remainder series that converges like 1/n^5 plus an
/// exponentially damped piece in e^{-q_n V^b}.
pub(crate) fn strip_series_jet(
    mu: f64,
    q: f64,
    state: (f64, f64),
    omega: f64,
) -> Result<[Jet; 3]> {
    if let Some(t) = boundary_snap_triple(state, q, omega) {
        return Ok(t);
    }
    let (vb, va) = state;
    if va > q {
        return Err(Error::parameter("state", "V^a must satisfy 0 <= V^a <= q"));
    }

    let theta = PI * va / q;
    let a = Jet {
        v: 2.0 * omega + mu * mu,
        d1: 2.0,
        d2: 0.0,
    };
    let q2pi2 = q * q / (PI * PI);
    // Closed Fourier sums on (0, 2 pi):
    //   sum sin(n t)/n            = (pi - t)/2
    //   sum (-1)^{n+1} sin(n t)/n = t/2
    //   sum sin(n t)/n^3          = pi^2 t/6 - pi t^2/4 + t^3/12
    //   sum (-1)^{n+1} sin(n t)/n^3 = pi^2 t/12 - t^3/12
    let s3 = PI * PI * theta / 6.0 - PI * theta * theta / 4.0 + theta.powi(3) / 12.0;
    let s3_alt = PI * PI * theta / 12.0 - theta.powi(3) / 12.0;

    let mut br_ex = (a * (-q2pi2 * s3_alt)) + theta / 2.0;
    let mut br_up = (a * (-q2pi2 * s3)) + (PI - theta) / 2.0;
    let mut br_dn = Jet::ZERO;

    let e_mu_q = (-mu * q).exp();
    let edecay = (-PI * vb / q).exp();
    let mut recent_bound = [f64::INFINITY; 6];
    let mut converged = false;
    let mut n_used = 0usize;

    for n in 1..=SERIES_CAP {
        n_used = n;
        let nf = n as f64;
        let qn = PI * nf / q;
        let qn2 = qn * qn;
        let mun = (Jet::var(omega) * 2.0 + (qn2 + 2.0 * mu * mu)).sqrt();
        let e_n = ((mun + (-mu)) * (-vb)).exp();
        let den = (a * (1.0 / qn2)) + 1.0;
        let r_n = ((a * a) * (1.0 / (qn2 * qn2)) - e_n) / den;

        let s = (nf * theta).sin() / nf;
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        br_ex = br_ex + r_n * (s * sign);
        br_up = br_up + r_n * s;

        let den_dn = 1.0 + mu * mu * q * q / (PI * PI * nf * nf);
        let t_dn = e_n * (s * (1.0 + sign * e_mu_q) / den_dn);
        br_dn = br_dn + t_dn;

        // Tail bound: the remainder series behaves like max(C/n^5,
        // geometric in e^{-pi V^b/q}); the sin factor can vanish at a
        // single n, so keep a short running maximum.
        let geo = 1.0 / (nf * (1.0 - edecay));
        let bound = (r_n.norm() * (0.25f64).max(geo)).max(t_dn.norm() * nf * geo);
        recent_bound[n % 6] = bound;
        if n >= 24 && recent_bound.iter().cloned().fold(0.0, f64::max) < SERIES_TOL {
            converged = true;
            break;
        }
    }
    if !converged {
        let partial = br_up.v;
        return Err(Error::Convergence {
            context: format!(
                "strip series at state ({vb}, {va}), q={q}, mu={mu}, omega={omega}"
            ),
            limit: n_used,
            unit: "terms",
            partial,
        });
    }

    let pref_ex = (2.0 / PI) * (-mu * (q - va)).exp();
    let pref_up = (2.0 / PI) * (mu * va).exp();
    Ok([
        br_ex * pref_ex,
        br_up * pref_up,
        br_dn * pref_up,
    ])
}

fn clamp_prob(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}

/// Strip triple via the authoritative series representation.
pub fn strip_laplace(
    params: &ModelParams,
    geom: &StripGeometry,
    state: (f64, f64),
    omega: f64,
) -> Result<HitProbTriple> {
    if omega < 0.0 {
        return Err(Error::parameter("omega", "must be >= 0"));
    }
    let jets = strip_series_jet(params.mu, geom.q, state, omega)?;
    Ok(HitProbTriple {
        p_ex: clamp_prob(jets[0].v),
        p_up: clamp_prob(jets[1].v),
        p_dn: clamp_prob(jets[2].v),
        omega,
        state,
        q: geom.q,
    })
}

/// Numerically stable sinh(x)/sinh(y) for x, y >= 0, y > 0.
fn sinh_ratio(x: f64, y: f64) -> f64 {
    ((x - y).exp()) * (1.0 - (-2.0 * x).exp()) / (1.0 - (-2.0 * y).exp())
}

/// Strip triple via the integral representations (independent
/// cross-check of the series; the sinh-kernel forms with
/// beta = sqrt(p^2 + 2 omega + 2 mu^2)).
pub fn strip_laplace_integral(
    params: &ModelParams,
    geom: &StripGeometry,
    state: (f64, f64),
    omega: f64,
) -> Result<HitProbTriple> {
    if let Some(j) = boundary_snap_triple(state, geom.q, omega) {
        return Ok(HitProbTriple {
            p_ex: j[0].v,
            p_up: j[1].v,
            p_dn: j[2].v,
            omega,
            state,
            q: geom.q,
        });
    }
    let (vb, va) = state;
    let (mu, q) = (params.mu, geom.q);
    let beta = move |p: f64| (p * p + 2.0 * omega + 2.0 * mu * mu).sqrt();
    let cfg = QuadConfig::default();

    let f_ex = move |p: f64| {
        let b = beta(p);
        (2.0 / PI) * p / (p * p + mu * mu)
            * (p * vb).sin()
            * sinh_ratio(b * va, b * q)
            * (mu * vb - mu * (q - va)).exp()
    };
    let f_up = move |p: f64| {
        let b = beta(p);
        (2.0 / PI) * p / (p * p + mu * mu)
            * (p * vb).sin()
            * sinh_ratio(b * (q - va), b * q)
            * (mu * (vb + va)).exp()
    };
    let f_dn = move |p: f64| {
        let b = beta(p);
        (2.0 / PI) * p / (p * p + mu * mu + 2.0 * omega)
            * (p * vb).sin()
            * (mu * vb).exp()
            * (1.0
                - (-mu * (q - va)).exp() * sinh_ratio(b * va, b * q)
                - (mu * va).exp() * sinh_ratio(b * (q - va), b * q))
    };

    let run = |f: &dyn Fn(f64) -> f64, decay: f64| -> Result<f64> {
        let spec = IntegrandSpec {
            evaluate: f,
            oscillation_wavenumber: vb,
            decay_hint: decay,
        };
        Ok(integrate_oscillatory(&spec, &cfg)?.value)
    };
    let p_ex = run(&f_ex, q - va)?;
    let p_up = run(&f_up, va)?;
    let p_dn = run(&f_dn, 0.0)?;
    Ok(HitProbTriple {
        p_ex: clamp_prob(p_ex),
        p_up: clamp_prob(p_up),
        p_dn: clamp_prob(p_dn),
        omega,
        state,
        q: geom.q,
    })
}

/// Driftless (mu = 0, omega = 0) strip probabilities in elementary
/// functions.
pub fn strip_driftless_closed(state: (f64, f64), q: f64) -> HitProbTriple {
    if let Some(j) = boundary_snap_triple(state, q, 0.0) {
        return HitProbTriple {
            p_ex: j[0].v,
            p_up: j[1].v,
            p_dn: j[2].v,
            omega: 0.0,
            state,
            q,
        };
    }
    let (vb, va) = state;
    let theta = PI * va / q;
    let e = (PI * vb / q).exp();
    let plus = (theta.sin() / (e + theta.cos())).atan() * (2.0 / PI);
    let minus = (theta.sin() / (e - theta.cos())).atan() * (2.0 / PI);
    HitProbTriple {
        p_ex: clamp_prob(va / q - plus),
        p_up: clamp_prob(1.0 - va / q - minus),
        p_dn: clamp_prob(minus + plus),
        omega: 0.0,
        state,
        q,
    }
}

/// Probability that the next price move is up/down on the free quadrant
/// (omega = 0 splitting probabilities).
pub fn free_next_sign(params: &ModelParams, state: (f64, f64)) -> Result<(f64, f64)> {
    let (vb, va) = state;
    if vb <= BOUNDARY_SNAP {
        return Ok((0.0, 1.0));
    }
    if va <= BOUNDARY_SNAP {
        return Ok((1.0, 0.0));
    }
    if params.mu == 0.0 {
        let p_up = (2.0 / PI) * (vb / va).atan();
        return Ok((p_up, 1.0 - p_up));
    }
    free_laplace(params, state, 0.0)
}

/// Laplace transforms of the up/down first-passage densities on the free
/// quadrant, via oscillatory quadrature.
pub fn free_laplace(params: &ModelParams, state: (f64, f64), omega: f64) -> Result<(f64, f64)> {
    if omega < 0.0 {
        return Err(Error::parameter("omega", "must be >= 0"));
    }
    let (vb, va) = state;
    if vb <= BOUNDARY_SNAP {
        return Ok((0.0, 1.0));
    }
    if va <= BOUNDARY_SNAP {
        return Ok((1.0, 0.0));
    }
    let jets = free_laplace_jet(params, state, omega)?;
    Ok((clamp_prob(jets[0].v), clamp_prob(jets[1].v)))
}

/// Free-quadrant (p_up, p_dn) as jets in omega, for analytic hitting-time
/// moments (mu > 0; at mu = 0 the derivative components diverge at
/// omega = 0 and must not be used there).
pub(crate) fn free_laplace_jet(
    params: &ModelParams,
    state: (f64, f64),
    omega: f64,
) -> Result<[Jet; 2]> {
    let (vb, va) = state;
    let mu = params.mu;
    let cfg = QuadConfig::default();

    let up_jet = move |k: f64| -> Jet {
        let w = Jet::var(omega);
        let a = w * 2.0 + mu * mu;
        let beta = (w * 2.0 + (k * k + 2.0 * mu * mu)).sqrt();
        let den = a * (1.0 / (k * k)) + 1.0;
        let expo = ((beta + (-mu)) * (-vb)).exp();
        ((Jet::c(1.0) - expo) / den) * ((2.0 / PI) * (k * va).sin() / k * (mu * va).exp())
    };
    let dn_jet = move |k: f64| -> Jet {
        let w = Jet::var(omega);
        let beta = (w * 2.0 + (k * k + 2.0 * mu * mu)).sqrt();
        let expo = ((beta + (-mu)) * (-vb)).exp();
        expo * ((2.0 / PI) * (k * va).sin() / k * (mu * va).exp()
            / (1.0 + mu * mu / (k * k)))
    };

    let component = |jet_f: &dyn Fn(f64) -> Jet, pick: usize, decay: f64| -> Result<f64> {
        let f = |k: f64| {
            let j = jet_f(k);
            match pick {
                0 => j.v,
                1 => j.d1,
                _ => j.d2,
            }
        };
        let spec = IntegrandSpec {
            evaluate: &f,
            oscillation_wavenumber: va,
            decay_hint: decay,
        };
        Ok(integrate_oscillatory(&spec, &cfg)?.value)
    };

    let mut out = [Jet::ZERO; 2];
    for (idx, (f, decay)) in [
        (&up_jet as &dyn Fn(f64) -> Jet, 0.0),
        (&dn_jet as &dyn Fn(f64) -> Jet, vb),
    ]
    .into_iter()
    .enumerate()
    {
        let v = component(f, 0, decay)?;
        let (d1, d2) = if mu > 0.0 || omega > 0.0 {
            (component(f, 1, decay)?, component(f, 2, decay)?)
        } else {
            (f64::NAN, f64::NAN)
        };
        out[idx] = Jet { v, d1, d2 };
    }
    Ok(out)
}

/// Unconditional mean hitting time on the strip, by quadrature of the
/// summed-then-differentiated representation (exact cancellation of the
/// leading large-p behavior happens analytically).
pub fn strip_hit_time_mean(params: &ModelParams, geom: &StripGeometry, state: (f64, f64)) -> Result<f64> {
    let (vb, va) = state;
    let (mu, q) = (params.mu, geom.q);
    if boundary_snap_triple(state, q, 0.0).is_some() {
        return Ok(0.0);
    }
    let cfg = QuadConfig::default();
    if mu == 0.0 {
        // Driftless reduction in the scaled variable p -> p/q.
        let f = move |p: f64| {
            if p == 0.0 {
                return 0.0;
            }
            let z = p * va / q;
            // 1 - cosh z + tanh(p/2) sinh z, rewritten so the O(p^2)
            // cancellation near p = 0 happens between O(z) quantities
            // (exp_m1/sinh) instead of O(1) exponentials, and nothing
            // overflows for large p (z <= p):
            let bracket = -(-z).exp_m1() - 2.0 * z.sinh() / (p.exp() + 1.0);
            (4.0 * q * q / PI) * (p * vb / q).sin() / (p * p * p) * bracket
        };
        let spec = IntegrandSpec {
            evaluate: &f,
            oscillation_wavenumber: vb / q,
            decay_hint: 0.0,
        };
        return Ok(integrate_oscillatory(&spec, &cfg)?.value);
    }
    let f = move |p: f64| {
        let b = (p * p + 2.0 * mu * mu).sqrt();
        let bracket = (mu * vb).exp()
            - sinh_ratio(b * va, b * q) * (mu * (vb + va - q)).exp()
            - sinh_ratio(b * (q - va), b * q) * (mu * (vb + va)).exp();
        (4.0 / PI) * p / (p * p + mu * mu).powi(2) * (p * vb).sin() * bracket
    };
    let spec = IntegrandSpec {
        evaluate: &f,
        oscillation_wavenumber: vb,
        decay_hint: 0.0,
    };
    Ok(integrate_oscillatory(&spec, &cfg)?.value)
}

/// Unconditional mean hitting time on the free quadrant (finite only for
/// mu > 0).
pub fn free_hit_time_mean(params: &ModelParams, state: (f64, f64)) -> Result<Option<f64>> {
    if params.mu == 0.0 {
        return Ok(None);
    }
    let (vb, va) = state;
    let mu = params.mu;
    let cfg = QuadConfig::default();
    let f = move |p: f64| {
        let b = (p * p + 2.0 * mu * mu).sqrt();
        p * (p * vb).sin() / (p * p + mu * mu).powi(2) * (-(b - mu) * va + mu * vb).exp()
    };
    let spec = IntegrandSpec {
        evaluate: &f,
        oscillation_wavenumber: vb,
        decay_hint: va,
    };
    let integral = integrate_oscillatory(&spec, &cfg)?.value;
    Ok(Some(vb / mu - 4.0 / PI * integral))
}

/// Hitting-time moments, conditional on a first-hit boundary or
/// unconditional. `geom = None` selects the free quadrant.
pub fn hit_time_moments(
    params: &ModelParams,
    geom: Option<&StripGeometry>,
    state: (f64, f64),
    conditional_on: Conditioning,
    order: u8,
) -> Result<HittingTimeMoments> {
    if order != 1 && order != 2 {
        return Err(Error::parameter("order", "must be 1 or 2"));
    }
    let make = |mean: Option<f64>, second: Option<f64>, q: f64| HittingTimeMoments {
        mean,
        second_moment: if order == 2 { second } else { None },
        conditional_on,
        state,
        q,
        mu: params.mu,
    };

    match geom {
        None => {
            if conditional_on == Conditioning::Exec {
                return Err(Error::parameter(
                    "conditional_on",
                    "no execution boundary in the free case",
                ));
            }
            if params.mu == 0.0 {
                // All free driftless hitting-time moments diverge.
                return Ok(make(None, None, f64::INFINITY));
            }
            let jets = free_laplace_jet(params, state, 0.0)?;
            let (up, dn) = (jets[0], jets[1]);
            let (mean, second) = match conditional_on {
                Conditioning::Up => (-up.d1 / up.v, up.d2 / up.v),
                Conditioning::Down => (-dn.d1 / dn.v, dn.d2 / dn.v),
                Conditioning::Any => {
                    let mean = free_hit_time_mean(params, state)?.expect("mu > 0");
                    (mean, up.d2 + dn.d2)
                }
                Conditioning::Exec => unreachable!(),
            };
            Ok(make(Some(mean), Some(second), f64::INFINITY))
        }
        Some(geom) => {
            let jets = strip_series_jet(params.mu, geom.q, state, 0.0)?;
            let pick = |j: Jet| -> Result<(f64, f64)> {
                if j.v < 1e-12 {
                    return Err(Error::parameter(
                        "conditional_on",
                        "conditioning boundary has vanishing hit probability",
                    ));
                }
                Ok((-j.d1 / j.v, j.d2 / j.v))
            };
            let (mean, second) = match conditional_on {
                Conditioning::Exec => pick(jets[0])?,
                Conditioning::Up => pick(jets[1])?,
                Conditioning::Down => pick(jets[2])?,
                Conditioning::Any => {
                    let mean = strip_hit_time_mean(params, geom, state)?;
                    let second = jets[0].d2 + jets[1].d2 + jets[2].d2;
                    (mean, second)
                }
            };
            Ok(make(Some(mean), Some(second), geom.q))
        }
    }
}

/// Closed-form small-omega coefficients of the free driftless
/// up-probability expansion.
pub fn small_omega_coeffs(state: (f64, f64)) -> SmallOmegaCoeffs {
    let (vb, va) = state;
    let pref = vb * va / PI;
    SmallOmegaCoeffs {
        a1: pref
            * ((2.0 * EULER_GAMMA - 3.0)
                + 2.0 * (va / vb) * (vb / va).atan()
                + ((vb * vb + va * va) / 2.0).ln()),
        b1: pref,
    }
}

/// Free values plus leading large-q corrections of the strip triple.
pub fn large_q_expansion(params: &ModelParams, state: (f64, f64), q: f64) -> Result<LargeQExpansion> {
    let (vb, va) = state;
    let (p_up, p_dn) = free_next_sign(params, state)?;
    let free = HitProbTriple {
        p_ex: 0.0,
        p_up,
        p_dn,
        omega: 0.0,
        state,
        q: f64::INFINITY,
    };
    let correction = if params.mu == 0.0 {
        let c = PI * vb * va / (q * q);
        [c / 2.0, -c / 6.0, -c / 3.0]
    } else {
        let mu = params.mu;
        let amp = vb / (PI.sqrt() * mu * mu) * (2.0f64.sqrt() * mu * va).sinh();
        let k_ex = (2.0 * 2.0f64.sqrt() * mu / q).powf(1.5)
            * (mu * (vb + va - (1.0 + 2.0f64.sqrt()) * q)).exp();
        let k_up = (2.0f64.sqrt() * mu / q).powf(1.5)
            * (mu * (vb + va - 2.0 * 2.0f64.sqrt() * q)).exp();
        [amp * k_ex, -amp * k_up, -amp * k_ex]
    };
    Ok(LargeQExpansion { free, correction })
}

/// Asymmetry parameter chi = p_up / p_dn evaluated at the post-up-reset
/// state (v_sml, v_lrg); free-quadrant value when `geom` is `None`.
pub fn asymmetry_chi(params: &ModelParams, geom: Option<&StripGeometry>) -> Result<f64> {
    let state = (params.v_sml, params.v_lrg);
    match geom {
        None => {
            let (up, dn) = free_next_sign(params, state)?;
            Ok(up / dn)
        }
        Some(g) => {
            let t = strip_laplace(params, g, state, 0.0)?;
            Ok(t.p_up / t.p_dn)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(mu: f64) -> ModelParams {
        ModelParams::new(mu, 1.0, 3.0, 2.0, 2.0).unwrap()
    }

    fn geom(q: f64) -> StripGeometry {
        StripGeometry { q }
    }

    #[test]
    fn driftless_closed_matches_reference() {
        let t = strip_driftless_closed((2.0, 2.0), 4.0);
        let p_ex = 0.5 - (2.0 / PI) * (1.0 / (PI / 2.0).exp()).atan();
        assert_relative_eq!(t.p_ex, p_ex, epsilon = 1e-14);
        assert_relative_eq!(t.p_ex, 0.3695, epsilon = 1e-4);
        assert_relative_eq!(t.p_up, 0.3695, epsilon = 1e-4);
        assert_relative_eq!(t.p_dn, 0.2610, epsilon = 1e-4);
        // Reflection symmetry at V^a = q/2.
        assert_relative_eq!(t.p_ex, t.p_up, epsilon = 1e-14);
    }

    #[test]
    fn series_matches_closed_driftless() {
        let p = params(0.0);
        for (vb, va, q) in [(2.0, 2.0, 4.0), (1.0, 3.0, 4.0), (0.7, 1.9, 5.5)] {
            let s = strip_laplace(&p, &geom(q), (vb, va), 0.0).unwrap();
            let c = strip_driftless_closed((vb, va), q);
            assert_relative_eq!(s.p_ex, c.p_ex, epsilon = 1e-10);
            assert_relative_eq!(s.p_up, c.p_up, epsilon = 1e-10);
            assert_relative_eq!(s.p_dn, c.p_dn, epsilon = 1e-10);
        }
    }

    #[test]
    fn conservation_with_drift() {
        for mu in [0.0, 0.5, 1.0] {
            let p = params(mu);
            let t = strip_laplace(&p, &geom(4.0), (1.3, 2.7), 0.0).unwrap();
            assert_relative_eq!(t.sum(), 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn series_matches_integral() {
        let p = params(0.5);
        let g = geom(4.0);
        for omega in [0.0, 0.3] {
            let s = strip_laplace(&p, &g, (1.5, 2.5), omega).unwrap();
            let i = strip_laplace_integral(&p, &g, (1.5, 2.5), omega).unwrap();
            assert_relative_eq!(s.p_ex, i.p_ex, epsilon = 1e-7);
            assert_relative_eq!(s.p_up, i.p_up, epsilon = 1e-7);
            assert_relative_eq!(s.p_dn, i.p_dn, epsilon = 1e-7);
        }
    }

    #[test]
    fn free_next_sign_values() {
        let p = params(0.0);
        let (up, dn) = free_next_sign(&p, (1.0, 3.0)).unwrap();
        assert_relative_eq!(up, (2.0 / PI) * (1.0f64 / 3.0).atan(), epsilon = 1e-14);
        assert_relative_eq!(up, 0.2048, epsilon = 1e-4);
        assert_relative_eq!(up + dn, 1.0, epsilon = 1e-14);
        let (up_s, dn_s) = free_next_sign(&p, (2.0, 2.0)).unwrap();
        assert_relative_eq!(up_s, 0.5, epsilon = 1e-14);
        assert_relative_eq!(dn_s, 0.5, epsilon = 1e-14);
    }

    #[test]
    fn free_laplace_conserves_at_zero() {
        for mu in [0.0, 0.5, 1.0] {
            let p = params(mu);
            let (up, dn) = free_laplace(&p, (1.0, 3.0), 0.0).unwrap();
            assert_relative_eq!(up + dn, 1.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn free_symmetry_driftless() {
        let p = params(0.0);
        for omega in [0.1, 1.0] {
            let (up, _) = free_laplace(&p, (1.2, 2.1), omega).unwrap();
            let (_, dn) = free_laplace(&p, (2.1, 1.2), omega).unwrap();
            assert_relative_eq!(up, dn, epsilon = 1e-8);
        }
    }

    #[test]
    fn gambler_ruin_limit() {
        // V^b -> infinity: p_ex -> V^a/q.
        let t = strip_driftless_closed((40.0, 1.5), 4.0);
        assert_relative_eq!(t.p_ex, 1.5 / 4.0, epsilon = 1e-10);
        // and <t_hit> -> V^a (q - V^a).
        let p = params(0.0);
        let m = strip_hit_time_mean(&p, &geom(4.0), (40.0, 1.5)).unwrap();
        assert_relative_eq!(m, 1.5 * 2.5, epsilon = 1e-6);
    }

    #[test]
    fn unconditional_time_equals_jet_derivative() {
        for mu in [0.0, 0.5, 1.0] {
            let p = params(mu);
            let g = geom(4.0);
            let jets = strip_series_jet(mu, g.q, (2.0, 2.0), 0.0).unwrap();
            let from_jets = -(jets[0].d1 + jets[1].d1 + jets[2].d1);
            let from_integral = strip_hit_time_mean(&p, &g, (2.0, 2.0)).unwrap();
            assert_relative_eq!(from_jets, from_integral, max_relative = 1e-7);
        }
    }

    #[test]
    fn free_driftless_time_is_infinite() {
        let p = params(0.0);
        let m = hit_time_moments(&p, None, (2.0, 2.0), Conditioning::Any, 1).unwrap();
        assert!(m.mean.is_none());
    }

    #[test]
    fn free_drift_time_matches_closed_integral() {
        let p = params(1.0);
        let m = hit_time_moments(&p, None, (3.0, 1.0), Conditioning::Any, 2).unwrap();
        let mean = m.mean.unwrap();
        // Swap symmetry of the unconditional time.
        let swapped = free_hit_time_mean(&p, (1.0, 3.0)).unwrap().unwrap();
        assert_relative_eq!(mean, swapped, max_relative = 1e-7);
        // Jensen.
        assert!(m.second_moment.unwrap() >= mean * mean);
    }

    #[test]
    fn small_omega_values() {
        let c = small_omega_coeffs((1.0, 1.0));
        assert_relative_eq!(c.b1, 1.0 / PI, epsilon = 1e-14);
        assert_relative_eq!(
            c.a1,
            (1.0 / PI) * (2.0 * EULER_GAMMA - 3.0 + PI / 2.0),
            epsilon = 1e-14
        );
        assert_relative_eq!(c.a1, -0.0875, epsilon = 1e-4);
        let scaled = small_omega_coeffs((2.5, 1.0));
        assert_relative_eq!(scaled.b1, 2.5 * small_omega_coeffs((1.0, 1.0)).b1, epsilon = 1e-14);
    }

    #[test]
    fn large_q_driftless_corrections() {
        let p = params(0.0);
        let e = large_q_expansion(&p, (1.0, 1.0), 10.0).unwrap();
        assert_relative_eq!(e.correction[0], PI / 200.0, epsilon = 1e-14);
        assert_relative_eq!(
            e.correction.iter().sum::<f64>(),
            0.0,
            epsilon = 1e-15
        );
        // The correction should track the actual strip deviation.
        let g = geom(10.0);
        let t = strip_laplace(&p, &g, (1.0, 1.0), 0.0).unwrap();
        assert_relative_eq!(
            t.p_ex - e.free.p_ex,
            e.correction[0],
            max_relative = 0.05
        );
    }

    #[test]
    fn chi_values() {
        let p = params(0.0);
        let chi = asymmetry_chi(&p, None).unwrap();
        assert_relative_eq!(chi, (1.0f64 / 3.0).atan() / 3.0f64.atan(), epsilon = 1e-12);
        assert_relative_eq!(chi, 0.2576, epsilon = 1e-4);
        // Symmetric resets give chi = 1.
        let sym = ModelParams::new(0.0, 2.0, 2.0 + 1e-12, 2.0, 2.0).unwrap();
        assert_relative_eq!(asymmetry_chi(&sym, None).unwrap(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn omega_monotone() {
        let p = params(0.5);
        let g = geom(4.0);
        let mut prev = f64::INFINITY;
        for i in 0..5 {
            let t = strip_laplace(&p, &g, (2.0, 2.0), 0.3 * i as f64).unwrap();
            assert!(t.p_up < prev);
            prev = t.p_up;
        }
    }
}
