//! Stochastic simulator of the queue dynamics: Euler scheme with
//! Brownian-bridge boundary detection, plus a Poissonian-jump variant for
//! granularity studies. Serves as the universal oracle for the analytic
//! modules.
//!
//! Because the interior dynamics are an exact Gaussian increment and the
//! bridge crossing probability exp(-2 d1 d2 / dt) is exact for a Brownian
//! bridge, the only time-step biases left are joint/double crossings
//! within one step and the linear-interpolation crossing times.

use crate::chain::{MomentErrors, MomentSet, Source};
use crate::error::{Error, Result};
use crate::model::{ModelParams, ResetDistribution, StripGeometry, BOUNDARY_SNAP};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

/// Simulator controls.
#[derive(Clone, Debug)]
pub struct SimConfig {
    pub dt: f64,
    pub bridge_correction: bool,
    /// Jump granularity; 0 selects the continuous-diffusion scheme.
    pub dv: f64,
    pub reset_distribution: ResetDistribution,
    pub n_paths: usize,
    pub seed: u64,
    pub max_time: f64,
    /// Snapshot times for free runs (ascending).
    pub sample_times: Vec<f64>,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            dt: 1e-3,
            bridge_correction: true,
            dv: 0.0,
            reset_distribution: ResetDistribution::Deterministic,
            n_paths: 1000,
            seed: 1,
            max_time: 1e6,
            sample_times: Vec::new(),
        }
    }
}

impl SimConfig {
    fn validate(&self, params: &ModelParams) -> Result<()> {
        if !(self.dt > 0.0) {
            return Err(Error::parameter("dt", "must be > 0"));
        }
        if self.dv < 0.0 {
            return Err(Error::parameter("dv", "must be >= 0"));
        }
        if self.dv > 0.0 && params.mu * self.dv > 1.0 {
            return Err(Error::parameter(
                "dv",
                "jump rates need mu * dv <= 1 (lambda_plus >= 0)",
            ));
        }
        if self.n_paths == 0 {
            return Err(Error::parameter("paths", "must be >= 1"));
        }
        if !(self.max_time > 0.0) {
            return Err(Error::parameter("max_time", "must be > 0"));
        }
        self.reset_distribution.validate()
    }
}

/// Evolving per-path state.
#[derive(Clone, Copy, Debug)]
pub struct PathState {
    pub vb: f64,
    pub va: f64,
    /// Signed price change in half-ticks.
    pub x: i64,
    /// Number of queue depletions so far.
    pub n: u64,
    pub t: f64,
}

/// Boundary event produced by one step; the step functions advance
/// `state.t` to the event time, the caller applies counters and resets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryEvent {
    None,
    /// Ask queue reached the execution threshold q.
    Exec,
    /// Ask queue emptied: price moves up.
    Up,
    /// Bid queue emptied: price moves down.
    Down,
}

/// Reset direction for [`draw_reset`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResetDirection {
    Up,
    Down,
}

/// One execution-run sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExecSample {
    pub x: f64,
    pub n: f64,
    pub t: f64,
    pub censored: bool,
}

/// Per-sample-time cross section of a free run.
#[derive(Clone, Debug, PartialEq)]
pub struct SnapshotRow {
    pub time: f64,
    pub x: Vec<f64>,
    pub n: Vec<f64>,
}

/// Simulation output: execution samples or free-run snapshots.
#[derive(Clone, Debug, PartialEq)]
pub struct SimOutcome {
    pub exec_samples: Vec<ExecSample>,
    pub snapshots: Vec<SnapshotRow>,
    pub n_paths: usize,
}

impl SimOutcome {
    pub fn censored_count(&self) -> usize {
        self.exec_samples.iter().filter(|s| s.censored).count()
    }

    pub fn censored_fraction(&self) -> f64 {
        if self.exec_samples.is_empty() {
            0.0
        } else {
            self.censored_count() as f64 / self.exec_samples.len() as f64
        }
    }
}

/// Exact probability that a Brownian bridge (D = 1) from distance `d1` to
/// distance `d2` over `dt` touched the boundary in between.
pub fn crossing_prob(d1: f64, d2: f64, dt: f64) -> f64 {
    if d1 <= 0.0 || d2 <= 0.0 {
        return 1.0;
    }
    let e = 2.0 * d1 * d2 / dt;
    if e > 40.0 {
        0.0
    } else {
        (-e).exp()
    }
}

/// Crossing-time fraction within the step, by linear interpolation of the
/// boundary distance.
fn crossing_frac(d1: f64, d2: f64) -> f64 {
    let den = d1 + d2.abs();
    if den > 0.0 {
        d1 / den
    } else {
        0.0
    }
}

/// One Euler step of both queues with bridge-corrected boundary
/// detection. `q = None` disables the execution boundary (free runs).
/// On an event, `state.t` is advanced to the (interpolated) crossing
/// time; otherwise by `dt`.
pub fn step_diffusion<R: Rng>(
    state: &mut PathState,
    params: &ModelParams,
    q: Option<f64>,
    dt: f64,
    bridge: bool,
    rng: &mut R,
) -> BoundaryEvent {
    let sdt = dt.sqrt();
    let gb: f64 = rng.sample(StandardNormal);
    let ga: f64 = rng.sample(StandardNormal);
    let nb = state.vb - params.mu * dt + sdt * gb;
    let na = state.va - params.mu * dt + sdt * ga;

    // Fixed draw order (bid 0, ask 0, ask q) keeps path streams
    // reproducible; a uniform is consumed only when the bridge test is
    // actually in doubt.
    let check = |d1: f64, d2: f64, rng: &mut R| -> Option<f64> {
        if d2 <= 0.0 {
            return Some(crossing_frac(d1, d2));
        }
        if bridge {
            let p = crossing_prob(d1, d2, dt);
            if p > 0.0 && rng.gen::<f64>() < p {
                return Some(crossing_frac(d1, d2));
            }
        }
        None
    };
    let f_dn = check(state.vb, nb, rng);
    let f_up = check(state.va, na, rng);
    let f_ex = q.and_then(|q| check(q - state.va, q - na, rng));

    // Earliest crossing wins; exec takes priority over the same-queue
    // reset at equal times, and exact ties break toward the bid boundary.
    let mut best = BoundaryEvent::None;
    let mut best_f = f64::INFINITY;
    if let Some(f) = f_ex {
        best = BoundaryEvent::Exec;
        best_f = f;
    }
    if let Some(f) = f_up {
        if f < best_f {
            best = BoundaryEvent::Up;
            best_f = f;
        }
    }
    if let Some(f) = f_dn {
        if f <= best_f {
            best = BoundaryEvent::Down;
            best_f = f;
        }
    }

    match best {
        BoundaryEvent::None => {
            state.vb = nb;
            state.va = na;
            state.t += dt;
        }
        _ => {
            state.t += best_f * dt;
        }
    }
    best
}

/// Jump rates (lambda_plus, lambda_minus) matching drift -mu and
/// diffusion 1 at granularity dv.
pub fn jump_rates(mu: f64, dv: f64) -> Result<(f64, f64)> {
    if !(dv > 0.0) {
        return Err(Error::parameter("dv", "must be > 0 for the jump scheme"));
    }
    let lp = (1.0 / (dv * dv) - mu / dv) / 2.0;
    let lm = (1.0 / (dv * dv) + mu / dv) / 2.0;
    if lp < 0.0 {
        return Err(Error::parameter(
            "dv",
            "jump rates need mu * dv <= 1 (lambda_plus >= 0)",
        ));
    }
    Ok((lp, lm))
}

/// One event of the Poissonian-jump dynamics: waits for the next +-dv
/// jump on either queue (exponential waiting time) and applies it.
pub fn step_jump<R: Rng>(
    state: &mut PathState,
    params: &ModelParams,
    q: Option<f64>,
    dv: f64,
    rng: &mut R,
) -> Result<BoundaryEvent> {
    let (lp, lm) = jump_rates(params.mu, dv)?;
    let total = 2.0 * (lp + lm);
    let u: f64 = rng.gen::<f64>();
    state.t += -(1.0 - u).ln() / total;
    let on_bid = rng.gen::<f64>() < 0.5;
    let up_jump = rng.gen::<f64>() < lp / (lp + lm);
    let delta = if up_jump { dv } else { -dv };
    if on_bid {
        state.vb += delta;
        if state.vb <= BOUNDARY_SNAP {
            return Ok(BoundaryEvent::Down);
        }
    } else {
        state.va += delta;
        if let Some(q) = q {
            if state.va >= q - BOUNDARY_SNAP {
                return Ok(BoundaryEvent::Exec);
            }
        }
        if state.va <= BOUNDARY_SNAP {
            return Ok(BoundaryEvent::Up);
        }
    }
    Ok(BoundaryEvent::None)
}

/// Post-depletion reset volumes (vb, va).
pub fn draw_reset<R: Rng>(
    direction: ResetDirection,
    dist: &ResetDistribution,
    params: &ModelParams,
    rng: &mut R,
) -> (f64, f64) {
    let (sml, lrg) = match dist {
        ResetDistribution::Deterministic => (params.v_sml, params.v_lrg),
        ResetDistribution::DiscreteUniform {
            sml_support,
            lrg_support,
        } => (
            sml_support[rng.gen_range(0..sml_support.len())],
            lrg_support[rng.gen_range(0..lrg_support.len())],
        ),
    };
    match direction {
        ResetDirection::Up => (sml, lrg),
        ResetDirection::Down => (lrg, sml),
    }
}

fn path_rng(seed: u64, path: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path as u64);
    rng
}

fn step<R: Rng>(
    state: &mut PathState,
    params: &ModelParams,
    q: Option<f64>,
    cfg: &SimConfig,
    rng: &mut R,
) -> Result<BoundaryEvent> {
    if cfg.dv > 0.0 {
        step_jump(state, params, q, cfg.dv, rng)
    } else {
        Ok(step_diffusion(
            state,
            params,
            q,
            cfg.dt,
            cfg.bridge_correction,
            rng,
        ))
    }
}

/// Free evolution with resets on both boundaries; records (x, n) at every
/// configured sample time.
pub fn simulate_free(params: &ModelParams, cfg: &SimConfig) -> Result<SimOutcome> {
    cfg.validate(params)?;
    if cfg.sample_times.is_empty() {
        return Err(Error::parameter("sample_times", "must be nonempty"));
    }
    let mut times = cfg.sample_times.clone();
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let horizon = *times.last().unwrap();

    let per_path: Vec<Result<Vec<(f64, f64)>>> = (0..cfg.n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(cfg.seed, i);
            let mut st = PathState {
                vb: params.v0_bid,
                va: params.v0_ask,
                x: 0,
                n: 0,
                t: 0.0,
            };
            let mut out = Vec::with_capacity(times.len());
            let mut next = 0usize;
            while next < times.len() {
                let ev = step(&mut st, params, None, cfg, &mut rng)?;
                while next < times.len() && times[next] < st.t {
                    out.push((st.x as f64, st.n as f64));
                    next += 1;
                }
                match ev {
                    BoundaryEvent::Up => {
                        st.x += 1;
                        st.n += 1;
                        let (vb, va) = draw_reset(
                            ResetDirection::Up,
                            &cfg.reset_distribution,
                            params,
                            &mut rng,
                        );
                        st.vb = vb;
                        st.va = va;
                    }
                    BoundaryEvent::Down => {
                        st.x -= 1;
                        st.n += 1;
                        let (vb, va) = draw_reset(
                            ResetDirection::Down,
                            &cfg.reset_distribution,
                            params,
                            &mut rng,
                        );
                        st.vb = vb;
                        st.va = va;
                    }
                    BoundaryEvent::Exec => unreachable!("no execution boundary in free runs"),
                    BoundaryEvent::None => {}
                }
                if st.t > horizon && next >= times.len() {
                    break;
                }
            }
            Ok(out)
        })
        .collect();

    let mut rows: Vec<SnapshotRow> = times
        .iter()
        .map(|&time| SnapshotRow {
            time,
            x: Vec::with_capacity(cfg.n_paths),
            n: Vec::with_capacity(cfg.n_paths),
        })
        .collect();
    for path in per_path {
        let path = path?;
        for (k, (x, n)) in path.into_iter().enumerate() {
            rows[k].x.push(x);
            rows[k].n.push(n);
        }
    }
    Ok(SimOutcome {
        exec_samples: Vec::new(),
        snapshots: rows,
        n_paths: cfg.n_paths,
    })
}

/// One-shot execution runs: absorb at V^a = q, reset on depletions,
/// censor at max_time.
///
/// ```
/// use lobexec::model::{ModelParams, StripGeometry};
/// use lobexec::montecarlo::{simulate_execution, summarize, SimConfig};
///
/// let params = ModelParams::new(0.0, 1.0, 3.0, 2.0, 2.0).unwrap();
/// let geom = StripGeometry::new(3.0, &params).unwrap();
/// let cfg = SimConfig { dt: 0.01, n_paths: 200, seed: 7, ..SimConfig::default() };
/// let stats = summarize(&simulate_execution(&params, &geom, &cfg).unwrap()).unwrap();
/// assert!(stats.mean_t > 0.0);
/// assert!(stats.mean_n >= stats.mean_x.abs());
/// ```
pub fn simulate_execution(
    params: &ModelParams,
    geom: &StripGeometry,
    cfg: &SimConfig,
) -> Result<SimOutcome> {
    cfg.validate(params)?;
    let q = geom.q;
    let samples: Vec<Result<ExecSample>> = (0..cfg.n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(cfg.seed, i);
            let mut st = PathState {
                vb: params.v0_bid,
                va: params.v0_ask,
                x: 0,
                n: 0,
                t: 0.0,
            };
            if st.va >= q - BOUNDARY_SNAP {
                return Ok(ExecSample {
                    x: 0.0,
                    n: 0.0,
                    t: 0.0,
                    censored: false,
                });
            }
            loop {
                if st.t >= cfg.max_time {
                    return Ok(ExecSample {
                        x: st.x as f64,
                        n: st.n as f64,
                        t: st.t,
                        censored: true,
                    });
                }
                match step(&mut st, params, Some(q), cfg, &mut rng)? {
                    BoundaryEvent::Exec => {
                        return Ok(ExecSample {
                            x: st.x as f64,
                            n: st.n as f64,
                            t: st.t,
                            censored: false,
                        });
                    }
                    BoundaryEvent::Up => {
                        st.x += 1;
                        st.n += 1;
                        let (vb, va) = draw_reset(
                            ResetDirection::Up,
                            &cfg.reset_distribution,
                            params,
                            &mut rng,
                        );
                        st.vb = vb;
                        st.va = va;
                        if st.va >= q - BOUNDARY_SNAP {
                            return Ok(ExecSample {
                                x: st.x as f64,
                                n: st.n as f64,
                                t: st.t,
                                censored: false,
                            });
                        }
                    }
                    BoundaryEvent::Down => {
                        st.x -= 1;
                        st.n += 1;
                        let (vb, va) = draw_reset(
                            ResetDirection::Down,
                            &cfg.reset_distribution,
                            params,
                            &mut rng,
                        );
                        st.vb = vb;
                        st.va = va;
                    }
                    BoundaryEvent::None => {}
                }
            }
        })
        .collect();

    let exec_samples = samples.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(SimOutcome {
        exec_samples,
        snapshots: Vec::new(),
        n_paths: cfg.n_paths,
    })
}

/// Single-leg first-passage runs on the strip (no resets): counts of
/// (exec, up, down) first hits from the initial state.
pub fn simulate_first_hit(
    params: &ModelParams,
    geom: &StripGeometry,
    cfg: &SimConfig,
) -> Result<[u64; 3]> {
    cfg.validate(params)?;
    let q = geom.q;
    let hits: Vec<Result<usize>> = (0..cfg.n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(cfg.seed, i);
            let mut st = PathState {
                vb: params.v0_bid,
                va: params.v0_ask,
                x: 0,
                n: 0,
                t: 0.0,
            };
            loop {
                match step(&mut st, params, Some(q), cfg, &mut rng)? {
                    BoundaryEvent::Exec => return Ok(0),
                    BoundaryEvent::Up => return Ok(1),
                    BoundaryEvent::Down => return Ok(2),
                    BoundaryEvent::None => {}
                }
            }
        })
        .collect();
    let mut counts = [0u64; 3];
    for h in hits {
        counts[h?] += 1;
    }
    Ok(counts)
}

/// Mean, unbiased variance, and their standard errors for one sample.
#[derive(Clone, Copy, Debug)]
pub struct ScalarStats {
    pub mean: f64,
    pub var: f64,
    pub se_mean: f64,
    pub se_var: f64,
}

/// Moment summary of a scalar sample; se of the variance uses the fourth
/// central moment.
pub fn summarize_scalar(values: &[f64]) -> Result<ScalarStats> {
    let n = values.len();
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    let mut m2 = 0.0;
    let mut m4 = 0.0;
    for v in values {
        let d = v - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    let var = m2 / (nf - 1.0);
    m4 /= nf;
    let var_of_var = (m4 - (nf - 3.0) / (nf - 1.0) * var * var) / nf;
    Ok(ScalarStats {
        mean,
        var,
        se_mean: (var / nf).sqrt(),
        se_var: var_of_var.max(0.0).sqrt(),
    })
}

/// Moment summary of execution samples; censored paths are excluded
/// (report the fraction from the [`SimOutcome`]).
pub fn summarize(outcome: &SimOutcome) -> Result<MomentSet> {
    let take = |f: fn(&ExecSample) -> f64| -> Vec<f64> {
        outcome
            .exec_samples
            .iter()
            .filter(|s| !s.censored)
            .map(f)
            .collect()
    };
    let xs = summarize_scalar(&take(|s| s.x))?;
    let ns = summarize_scalar(&take(|s| s.n))?;
    let ts = summarize_scalar(&take(|s| s.t))?;
    Ok(MomentSet {
        mean_x: xs.mean,
        var_x: xs.var,
        mean_n: ns.mean,
        var_n: ns.var,
        mean_t: ts.mean,
        var_t: ts.var,
        source: Source::MonteCarlo,
        errors: Some(MomentErrors {
            se_mean_x: xs.se_mean,
            se_var_x: xs.se_var,
            se_mean_n: ns.se_mean,
            se_var_n: ns.se_var,
            se_mean_t: ts.se_mean,
            se_var_t: ts.se_var,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::firstpassage::strip_driftless_closed;
    use approx::assert_relative_eq;

    fn params(mu: f64) -> ModelParams {
        ModelParams::new(mu, 1.0, 3.0, 2.0, 2.0).unwrap()
    }

    #[test]
    fn jump_rate_values() {
        assert_eq!(jump_rates(0.0, 1.0).unwrap(), (0.5, 0.5));
        let (lp, lm) = jump_rates(0.5, 0.5).unwrap();
        assert_relative_eq!(lp, 1.5);
        assert_relative_eq!(lm, 2.5);
        assert!(jump_rates(1.0, 2.5).is_err());
    }

    #[test]
    fn bridge_probability_value() {
        assert_relative_eq!(crossing_prob(0.1, 0.1, 0.01), (-2.0f64).exp(), epsilon = 1e-15);
        assert_eq!(crossing_prob(0.0, 0.5, 0.01), 1.0);
        assert_eq!(crossing_prob(5.0, 5.0, 0.01), 0.0);
    }

    #[test]
    fn reset_draws() {
        let p = params(0.0);
        let mut rng = path_rng(3, 0);
        assert_eq!(
            draw_reset(ResetDirection::Up, &ResetDistribution::Deterministic, &p, &mut rng),
            (1.0, 3.0)
        );
        assert_eq!(
            draw_reset(ResetDirection::Down, &ResetDistribution::Deterministic, &p, &mut rng),
            (3.0, 1.0)
        );
        let dist = ResetDistribution::stochastic_default();
        let mut lows = std::collections::HashMap::new();
        for _ in 0..30_000 {
            let (vb, va) = draw_reset(ResetDirection::Up, &dist, &p, &mut rng);
            assert!([0.5, 1.0, 1.5].contains(&vb));
            assert!([2.0, 2.5, 3.0, 3.5, 4.0].contains(&va));
            *lows.entry((vb * 2.0) as i64).or_insert(0usize) += 1;
        }
        // Uniformity within 4 sigma multinomial bounds.
        let exp = 10_000.0;
        let sigma = (30_000.0f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
        for (_, c) in lows {
            assert!((c as f64 - exp).abs() < 4.0 * sigma);
        }
    }

    #[test]
    fn summarize_basics() {
        let s = summarize_scalar(&[1.0, 2.0, 3.0]).unwrap();
        assert_relative_eq!(s.mean, 2.0);
        assert_relative_eq!(s.var, 1.0);
        let c = summarize_scalar(&[4.0; 50]).unwrap();
        assert_eq!(c.var, 0.0);
        assert_eq!(c.se_var, 0.0);
        assert!(matches!(
            summarize_scalar(&[1.0]),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn first_hit_matches_closed_form() {
        let p = params(0.0);
        let g = StripGeometry { q: 4.0 };
        let cfg = SimConfig {
            dt: 5e-3,
            n_paths: 4000,
            seed: 42,
            ..SimConfig::default()
        };
        let counts = simulate_first_hit(&p, &g, &cfg).unwrap();
        let tot: u64 = counts.iter().sum();
        assert_eq!(tot, 4000);
        let exact = strip_driftless_closed((2.0, 2.0), 4.0);
        for (c, e) in counts.iter().zip([exact.p_ex, exact.p_up, exact.p_dn]) {
            let phat = *c as f64 / 4000.0;
            let se = (e * (1.0 - e) / 4000.0).sqrt();
            assert!(
                (phat - e).abs() < 3.5 * se,
                "phat={phat} expected={e} se={se}"
            );
        }
    }

    #[test]
    fn instant_execution_all_zero() {
        let p = params(0.0);
        let g = StripGeometry { q: 2.0 };
        let cfg = SimConfig {
            n_paths: 10,
            ..SimConfig::default()
        };
        let out = simulate_execution(&p, &g, &cfg).unwrap();
        assert!(out
            .exec_samples
            .iter()
            .all(|s| s.x == 0.0 && s.n == 0.0 && s.t == 0.0 && !s.censored));
    }

    #[test]
    fn counter_invariant_and_determinism() {
        let p = params(0.5);
        let g = StripGeometry { q: 4.0 };
        let cfg = SimConfig {
            dt: 5e-3,
            n_paths: 200,
            seed: 9,
            ..SimConfig::default()
        };
        let a = simulate_execution(&p, &g, &cfg).unwrap();
        let b = simulate_execution(&p, &g, &cfg).unwrap();
        assert_eq!(a, b);
        for s in &a.exec_samples {
            assert!(s.n >= s.x.abs());
        }
    }

    #[test]
    fn free_run_symmetric_mean() {
        let p = params(0.0);
        let cfg = SimConfig {
            dt: 0.02,
            n_paths: 600,
            seed: 5,
            sample_times: vec![10.0, 50.0],
            ..SimConfig::default()
        };
        let out = simulate_free(&p, &cfg).unwrap();
        assert_eq!(out.snapshots.len(), 2);
        for row in &out.snapshots {
            let s = summarize_scalar(&row.x).unwrap();
            assert!(
                s.mean.abs() < 3.0 * s.se_mean.max(1e-12),
                "mean x at t={} is {} (se {})",
                row.time,
                s.mean,
                s.se_mean
            );
            let n = summarize_scalar(&row.n).unwrap();
            assert!(n.mean > 0.0);
        }
    }

    #[test]
    fn jump_scheme_runs_and_executes() {
        let p = params(0.0);
        let g = StripGeometry { q: 3.0 };
        let cfg = SimConfig {
            dv: 0.5,
            n_paths: 200,
            seed: 11,
            ..SimConfig::default()
        };
        let out = simulate_execution(&p, &g, &cfg).unwrap();
        let ms = summarize(&out).unwrap();
        assert!(ms.mean_t > 0.0);
        assert_eq!(out.censored_count(), 0);
    }
}
