//! Renewal/Markov-chain layer: generating functions of the price change
//! and hitting number, execution-outcome moments, execution-time
//! statistics, and the small-q / large-q asymptotic laws.
//!
//! After each queue depletion the state is fully determined by the sign
//! of the last price move (up-reset -> (v_sml, v_lrg), down-reset ->
//! (v_lrg, v_sml)), so the sequence of moves is a two-state Markov chain
//! whose transition entries are first-passage probabilities from the
//! post-reset states. Summing the renewal series gives closed rational
//! expressions for all moments in terms of the kernel entries.

use crate::error::{Error, Result};
use crate::firstpassage::{free_laplace, free_next_sign, hit_time_moments, strip_series_jet, Conditioning};
use crate::jet::Jet;
use crate::model::{classify_regime, ModelParams, Regime, StripGeometry};
use crate::quadrature::{integrate_oscillatory, IntegrandSpec, QuadConfig};
use std::f64::consts::PI;

/// Transition data of the post-reset chain at a Laplace frequency.
///
/// `m[row][col]`: row 0 = next move up, row 1 = next move down; column 0 =
/// current up-reset state (v_sml, v_lrg), column 1 = down-reset state
/// (v_lrg, v_sml). `entry_pair` holds (p_up, p_dn) from the initial state
/// and, for execution kernels, `exit_pair`/`exit_zero` hold the execution
/// probabilities from the reset and initial states.
#[derive(Clone, Copy, Debug)]
pub struct TransitionKernel {
    pub omega: f64,
    pub m: [[f64; 2]; 2],
    pub entry_pair: (f64, f64),
    pub exit_pair: (f64, f64),
    pub exit_zero: f64,
}

/// Evaluation point of the joint generating functions.
#[derive(Clone, Copy, Debug)]
pub struct GFPoint {
    pub omega: f64,
    /// Conjugate variable of the price / hit count.
    pub s: f64,
}

/// Which counter the 2x2 counting matrix tracks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Counting {
    /// Price x: up moves weight e^{-s}, down moves e^{+s}.
    Price,
    /// Hitting number n: every move weights e^{-s}.
    Hits,
}

/// Provenance of a [`MomentSet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Analytic,
    MonteCarlo,
}

/// Standard errors attached to Monte Carlo moment estimates.
#[derive(Clone, Copy, Debug, Default)]
pub struct MomentErrors {
    pub se_mean_x: f64,
    pub se_var_x: f64,
    pub se_mean_n: f64,
    pub se_var_n: f64,
    pub se_mean_t: f64,
    pub se_var_t: f64,
}

/// Mean/variance of the execution observables (x_T, n_T, T).
///
/// Analytic sets carry no errors; Monte Carlo sets always do. Fields that
/// a particular producer does not define are NaN.
#[derive(Clone, Copy, Debug)]
pub struct MomentSet {
    pub mean_x: f64,
    pub var_x: f64,
    pub mean_n: f64,
    pub var_n: f64,
    pub mean_t: f64,
    pub var_t: f64,
    pub source: Source,
    pub errors: Option<MomentErrors>,
}

impl MomentSet {
    pub fn analytic() -> MomentSet {
        MomentSet {
            mean_x: f64::NAN,
            var_x: f64::NAN,
            mean_n: f64::NAN,
            var_n: f64::NAN,
            mean_t: f64::NAN,
            var_t: f64::NAN,
            source: Source::Analytic,
            errors: None,
        }
    }
}

/// The A_up, A_dn combinations and the denominator B entering the
/// execution-time formulas.
#[derive(Clone, Copy, Debug)]
pub struct ExecTimeIntermediates {
    pub a_up: f64,
    pub a_dn: f64,
    pub b: f64,
}

/// Building blocks of the small-q linear slopes.
#[derive(Clone, Copy, Debug)]
pub struct SmallQCoeffs {
    pub delta_up: f64,
    pub delta_dn: f64,
}

/// Laplace-domain moments of the free price/hit processes.
#[derive(Clone, Copy, Debug)]
pub struct FreeLaplaceMoments {
    pub mean_x: f64,
    pub sq_x: f64,
    pub mean_n: f64,
    pub sq_n: f64,
}

/// Large-q limits and small-q slopes for the execution observables.
#[derive(Clone, Copy, Debug)]
pub struct AsymptoticExecStats {
    /// Large-q laws evaluated at the kernel's q (mean_x = impact limit,
    /// mean_n = growth law, var_x = chi * mean_n; time fields NaN).
    pub predicted: MomentSet,
    /// I(infinity): (1+chi)/6 for mu = 0, (1+chi)/2 for mu > 0.
    pub impact_limit: f64,
    /// Free-case asymmetry parameter used in the limits.
    pub chi: f64,
    pub small_q: SmallQCoeffs,
    /// d<x_T>/dq at q = v0_ask^+.
    pub slope_x: f64,
    /// d<n_T>/dq at q = v0_ask^+.
    pub slope_n: f64,
    /// d Var x_T/dq at q = v0_ask^+.
    pub slope_var_x: f64,
}

/// Asymptotic free-evolution laws; evaluate with the `predict_*` methods.
#[derive(Clone, Copy, Debug)]
pub struct FreeTimeAsymptotics {
    pub mu: f64,
    pub chi: f64,
    /// pi / (2 v_sml v_lrg); the driftless growth prefactor.
    pub driftless_factor: f64,
    /// Mean renewal interval <t_hit> (mu > 0 only).
    pub t_hit_mean: Option<f64>,
    /// Second moment <t_hit^2> (mu > 0 only).
    pub t_hit_second: Option<f64>,
    /// Asymptotic price volatility sigma^2 = chi / <t_hit> (mu > 0 only).
    pub sigma2: Option<f64>,
}

impl FreeTimeAsymptotics {
    /// Predicted <n_t>.
    pub fn predict_mean_n(&self, t: f64) -> f64 {
        match self.t_hit_mean {
            None => t / t.ln() * self.driftless_factor,
            Some(m1) => t / m1,
        }
    }

    /// Predicted Var x_t.
    pub fn predict_var_x(&self, t: f64) -> f64 {
        self.chi * self.predict_mean_n(t)
    }

    /// Predicted Var n_t.
    pub fn predict_var_n(&self, t: f64) -> f64 {
        match (self.t_hit_mean, self.t_hit_second) {
            (Some(m1), Some(m2)) => (m2 - m1 * m1) * t / (m1 * m1 * m1),
            _ => {
                let l = t.ln();
                (t * t) / (l * l * l) * self.driftless_factor * self.driftless_factor
            }
        }
    }
}

/// Full jet data of the three source states; internal to the moment
/// assembly.
struct KernelJets {
    /// [ex, up, dn] jets from the up-reset state (v_sml, v_lrg).
    u: [Jet; 3],
    /// ... from the down-reset state (v_lrg, v_sml).
    d: [Jet; 3],
    /// ... from the initial state (v0_bid, v0_ask).
    z: [Jet; 3],
}

fn kernel_jets(params: &ModelParams, geom: &StripGeometry, omega: f64) -> Result<KernelJets> {
    // The boundary snap inside the series handles both the below_vlrg
    // column (v_lrg >= q -> (1,0,0)) and the instant regime
    // (v0_ask >= q -> (1,0,0)) without special cases here.
    Ok(KernelJets {
        u: strip_series_jet(params.mu, geom.q, (params.v_sml, params.v_lrg), omega)?,
        d: strip_series_jet(params.mu, geom.q, (params.v_lrg, params.v_sml), omega)?,
        z: strip_series_jet(params.mu, geom.q, (params.v0_bid, params.v0_ask), omega)?,
    })
}

fn kernel_from_jets(j: &KernelJets, omega: f64) -> TransitionKernel {
    TransitionKernel {
        omega,
        m: [
            [j.u[1].v, j.d[1].v],
            [j.u[2].v, j.d[2].v],
        ],
        entry_pair: (j.z[1].v, j.z[2].v),
        exit_pair: (j.u[0].v, j.d[0].v),
        exit_zero: j.z[0].v,
    }
}

/// Assembles the execution-problem kernel at `omega` from first-passage
/// probabilities at the three source states.
pub fn build_kernel(params: &ModelParams, geom: &StripGeometry, omega: f64) -> Result<TransitionKernel> {
    if omega < 0.0 {
        return Err(Error::parameter("omega", "must be >= 0"));
    }
    let jets = kernel_jets(params, geom, omega)?;
    Ok(kernel_from_jets(&jets, omega))
}

/// Free-case kernel (no execution boundary): exit entries are zero and
/// the no-hit weight is carried implicitly by 1 - column sums.
pub fn build_free_kernel(params: &ModelParams, omega: f64) -> Result<TransitionKernel> {
    if omega < 0.0 {
        return Err(Error::parameter("omega", "must be >= 0"));
    }
    let u = free_laplace(params, (params.v_sml, params.v_lrg), omega)?;
    let d = free_laplace(params, (params.v_lrg, params.v_sml), omega)?;
    let z = free_laplace(params, (params.v0_bid, params.v0_ask), omega)?;
    Ok(TransitionKernel {
        omega,
        m: [[u.0, d.0], [u.1, d.1]],
        entry_pair: (z.0, z.1),
        exit_pair: (0.0, 0.0),
        exit_zero: 0.0,
    })
}

/// The determinant-like denominator B = 1 - p_ud p_du + p_uu p_dd
/// - p_uu - p_dd of the summed renewal series.
fn denom_b(k: &TransitionKernel) -> f64 {
    let [[puu, pud], [pdu, pdd]] = k.m;
    1.0 - pud * pdu + puu * pdd - puu - pdd
}

/// Explicit inverse (I - K m)^{-1}, where K is the 2x2 counting matrix at
/// the generating-function point. Equals the summed matrix power series
/// when the spectral radius of K m is below one.
pub fn geometric_sum(
    kernel: &TransitionKernel,
    gf: GFPoint,
    counting: Counting,
) -> Result<[[f64; 2]; 2]> {
    let (ku, kd) = match counting {
        Counting::Price => ((-gf.s).exp(), gf.s.exp()),
        Counting::Hits => ((-gf.s).exp(), (-gf.s).exp()),
    };
    let [[puu, pud], [pdu, pdd]] = kernel.m;
    // A = I - K m with K = diag(ku, kd) acting on the row index.
    let a = [[1.0 - ku * puu, -ku * pud], [-kd * pdu, 1.0 - kd * pdd]];
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if det.abs() <= 1e-14 {
        return Err(Error::DegenerateKernel { b: det });
    }
    Ok([
        [a[1][1] / det, -a[0][1] / det],
        [-a[1][0] / det, a[0][0] / det],
    ])
}

/// Joint generating function Phi(omega, s) of the free price or hit
/// process, assembled from the resolvent. Used as the brute-force oracle
/// for the closed-form moments.
pub fn free_gf(kernel: &TransitionKernel, gf: GFPoint, counting: Counting) -> Result<f64> {
    let (ku, kd) = match counting {
        Counting::Price => ((-gf.s).exp(), gf.s.exp()),
        Counting::Hits => ((-gf.s).exp(), (-gf.s).exp()),
    };
    let m = geometric_sum(kernel, gf, counting)?;
    let [[puu, pud], [pdu, pdd]] = kernel.m;
    let (pu0, pd0) = kernel.entry_pair;
    let nohit = [1.0 - puu - pdu, 1.0 - pud - pdd];
    let p0_nohit = 1.0 - pu0 - pd0;
    // nohit^T (I - K m)^{-1} K p0
    let kp0 = [ku * pu0, kd * pd0];
    let mk = [
        m[0][0] * kp0[0] + m[0][1] * kp0[1],
        m[1][0] * kp0[0] + m[1][1] * kp0[1],
    ];
    Ok((p0_nohit + nohit[0] * mk[0] + nohit[1] * mk[1]) / gf.omega)
}

fn sq_price_half(pu0: f64, _pd0: f64, puu: f64, pud: f64, pdu: f64, pdd: f64, b: f64) -> f64 {
    let brk1 = 1.0 - 2.0 * pdd + pdd * pdd - pdu + 3.0 * pdd * pdu - pdu * pud - pdd * pdu * pud;
    let brk2 = pdu * pdu * pud + puu - 2.0 * pdd * puu + pdd * pdd * puu - pdu * puu
        - pdd * pdu * puu;
    pu0 * (brk1 + brk2) / (b * b)
}

fn sq_hit_half(pu0: f64, _pd0: f64, puu: f64, pud: f64, pdu: f64, pdd: f64, b: f64) -> f64 {
    let brkn1 = 1.0 - 2.0 * pdd + pdd * pdd + 3.0 * pdu - pdd * pdu + 3.0 * pdu * pud
        - pdd * pdu * pud;
    let brk2 = pdu * pdu * pud + puu - 2.0 * pdd * puu + pdd * pdd * puu - pdu * puu
        - pdd * pdu * puu;
    pu0 * (brkn1 + brk2) / (b * b)
}

/// Closed-form Laplace-domain moments of the free processes (means and
/// raw second moments of x and n at frequency `omega`).
pub fn free_moments(kernel: &TransitionKernel, omega: f64) -> Result<FreeLaplaceMoments> {
    if omega <= 0.0 {
        return Err(Error::parameter("omega", "must be > 0 in the free case"));
    }
    let [[puu, pud], [pdu, pdd]] = kernel.m;
    let (pu0, pd0) = kernel.entry_pair;
    let b = denom_b(kernel);
    let mean_x = (pu0 * (1.0 - pdd - pdu) - pd0 * (1.0 - puu - pud)) / (omega * b);
    let mean_n = (pu0 * (1.0 - pdd + pdu) + pd0 * (1.0 - puu + pud)) / (omega * b);
    let sq_x = (sq_price_half(pu0, pd0, puu, pud, pdu, pdd, b)
        + sq_price_half(pd0, pu0, pdd, pdu, pud, puu, b))
        / omega;
    let sq_n = (sq_hit_half(pu0, pd0, puu, pud, pdu, pdd, b)
        + sq_hit_half(pd0, pu0, pdd, pdu, pud, puu, b))
        / omega;
    Ok(FreeLaplaceMoments {
        mean_x,
        sq_x,
        mean_n,
        sq_n,
    })
}

/// Full analytic execution statistics; shared by [`exec_moments`] and
/// [`exec_time_moments`].
fn exec_full(params: &ModelParams, geom: &StripGeometry) -> Result<(MomentSet, ExecTimeIntermediates)> {
    let regime = classify_regime(params, geom);
    if regime == Regime::Instant {
        return Ok((
            MomentSet {
                mean_x: 0.0,
                var_x: 0.0,
                mean_n: 0.0,
                var_n: 0.0,
                mean_t: 0.0,
                var_t: 0.0,
                source: Source::Analytic,
                errors: None,
            },
            ExecTimeIntermediates {
                a_up: 0.0,
                a_dn: 0.0,
                b: 1.0,
            },
        ));
    }

    let jets = kernel_jets(params, geom, 0.0)?;
    let k = kernel_from_jets(&jets, 0.0);
    let [[puu, pud], [pdu, pdd]] = k.m;
    let (pu0, pd0) = k.entry_pair;
    let b = denom_b(&k);
    if b <= 1e-14 {
        return Err(Error::DegenerateKernel { b });
    }

    let mean_x = (pu0 * (1.0 - pdd - pdu) - pd0 * (1.0 - puu - pud)) / b;
    let mean_n = (pu0 * (1.0 - pdd + pdu) + pd0 * (1.0 - puu + pud)) / b;
    let sq_x = sq_price_half(pu0, pd0, puu, pud, pdu, pdd, b)
        + sq_price_half(pd0, pu0, pdd, pdu, pud, puu, b);
    let sq_n = sq_hit_half(pu0, pd0, puu, pud, pdu, pdd, b)
        + sq_hit_half(pd0, pu0, pdd, pdu, pud, puu, b);

    // Unconditional mean/second hitting-time moments per source state,
    // and conditional mean times per (boundary, state), from the jets.
    let th = |j: &[Jet; 3]| -(j[0].d1 + j[1].d1 + j[2].d1);
    let t2h = |j: &[Jet; 3]| j[0].d2 + j[1].d2 + j[2].d2;
    let tc = |j: Jet| if j.v > 1e-12 { -j.d1 / j.v } else { 0.0 };

    let (th_u, th_d, th_0) = (th(&jets.u), th(&jets.d), th(&jets.z));
    let (t2_u, t2_d, t2_0) = (t2h(&jets.u), t2h(&jets.d), t2h(&jets.z));

    let a_up = pd0 * pud + pu0 - pu0 * pdd;
    let a_dn = pu0 * pdu + pd0 - pd0 * puu;
    let mean_t = (a_dn * th_d + a_up * th_u + b * th_0) / b;

    // Var T, assembled as two halves exchanged under up <-> down.
    let var_half = |a_dn: f64,
                    a_up: f64,
                    pu0: f64,
                    puu: f64,
                    pud: f64,
                    pdu: f64,
                    pdd: f64,
                    thd: f64,
                    thu: f64,
                    th0: f64,
                    t2d: f64,
                    t20: f64,
                    tud: f64,
                    tuu: f64,
                    tu0: f64|
     -> f64 {
        let term1 = (a_dn * (t2d - thd * thd) + b / 2.0 * (t20 - th0 * th0)) / b;
        let term2 = (-(a_dn * thd + a_up * thu).powi(2) / 2.0
            + a_dn * b * (thd - th0).powi(2)
            - a_dn * b * th0 * th0)
            / (b * b);
        let term3 = 2.0 / (b * b)
            * (a_dn * pud * tud + a_up * puu * tuu + b * pu0 * tu0)
            * ((1.0 - pdd) * thu + pdu * thd);
        term1 + term2 + term3
    };
    let h1 = var_half(
        a_dn, a_up, pu0, puu, pud, pdu, pdd, th_d, th_u, th_0, t2_d, t2_0,
        tc(jets.d[1]),
        tc(jets.u[1]),
        tc(jets.z[1]),
    );
    let h2 = var_half(
        a_up, a_dn, pd0, pdd, pdu, pud, puu, th_u, th_d, th_0, t2_u, t2_0,
        tc(jets.u[2]),
        tc(jets.d[2]),
        tc(jets.z[2]),
    );

    Ok((
        MomentSet {
            mean_x,
            var_x: sq_x - mean_x * mean_x,
            mean_n,
            var_n: sq_n - mean_n * mean_n,
            mean_t,
            var_t: h1 + h2,
            source: Source::Analytic,
            errors: None,
        },
        ExecTimeIntermediates { a_up, a_dn, b },
    ))
}

/// Mean/variance of the price change and hitting number at execution; the
/// apparent impact is `mean_x`. (The time fields are also filled: the
/// computation shares all intermediates with [`exec_time_moments`].)
///
/// ```
/// use lobexec::chain::exec_moments;
/// use lobexec::model::{ModelParams, StripGeometry};
///
/// let params = ModelParams::new(0.0, 1.0, 3.0, 2.0, 2.0).unwrap();
/// let geom = StripGeometry::new(4.0, &params).unwrap();
/// let m = exec_moments(&params, &geom).unwrap();
/// // Waiting for liquidity costs money on average: the apparent
/// // impact is strictly positive even without drift.
/// assert!(m.mean_x > 0.0 && m.mean_x < m.mean_n);
/// ```
pub fn exec_moments(params: &ModelParams, geom: &StripGeometry) -> Result<MomentSet> {
    Ok(exec_full(params, geom)?.0)
}

/// Mean and variance of the execution time T, with the A/B intermediates.
pub fn exec_time_moments(
    params: &ModelParams,
    geom: &StripGeometry,
) -> Result<(MomentSet, ExecTimeIntermediates)> {
    exec_full(params, geom)
}

/// The execution-time generating function Psi(omega) = <e^{-omega T}>.
pub fn exec_time_gf(kernel: &TransitionKernel) -> Result<f64> {
    let [[puu, pud], [pdu, pdd]] = kernel.m;
    let (pu0, pd0) = kernel.entry_pair;
    let (exu, exd) = kernel.exit_pair;
    let ex0 = kernel.exit_zero;
    let b = denom_b(kernel);
    if b <= 1e-14 {
        return Err(Error::DegenerateKernel { b });
    }
    Ok(ex0
        + (pu0 * (exu * (1.0 - pdd) + pdu * exd) + pd0 * (exd * (1.0 - puu) + pud * exu)) / b)
}

/// Small-q slope coefficients delta_up, delta_dn at q = v0_ask.
pub fn small_q_coeffs(params: &ModelParams) -> Result<SmallQCoeffs> {
    let v0 = params.v0_ask;
    let mu = params.mu;
    if mu == 0.0 {
        let ep = PI.exp();
        return Ok(SmallQCoeffs {
            delta_up: (1.0 / v0) * (ep - 1.0) / (ep + 1.0),
            delta_dn: (1.0 / v0) * 2.0 / PI.sinh(),
        });
    }
    let cfg = QuadConfig::default();
    // 1/sinh(x) and (cosh(x) - c)/sinh(x), overflow-free for large x.
    let inv_sinh = |x: f64| 2.0 * (-x).exp() / (1.0 - (-2.0 * x).exp());
    let cosh_ratio =
        |x: f64, c: f64| (1.0 + (-2.0 * x).exp() - 2.0 * c * (-x).exp()) / (1.0 - (-2.0 * x).exp());
    let f_up = move |p: f64| {
        let b = (p * p + 2.0 * mu * mu).sqrt();
        (2.0 / PI) * b * p * (p * v0).sin() / (p * p + mu * mu)
            * (2.0 * mu * v0).exp()
            * inv_sinh(b * v0)
    };
    let f_dn = move |p: f64| {
        let b = (p * p + 2.0 * mu * mu).sqrt();
        (2.0 / PI) * b * p * (p * v0).sin() / (p * p + mu * mu)
            * cosh_ratio(b * v0, (mu * v0).exp())
            * (mu * v0).exp()
    };
    let run = |f: &dyn Fn(f64) -> f64, decay: f64| -> Result<f64> {
        let spec = IntegrandSpec {
            evaluate: f,
            oscillation_wavenumber: v0,
            decay_hint: decay,
        };
        Ok(integrate_oscillatory(&spec, &cfg)?.value)
    };
    Ok(SmallQCoeffs {
        delta_up: run(&f_up, v0)?,
        delta_dn: mu + run(&f_dn, 0.0)?,
    })
}

/// Large-q limits/growth laws and small-q linear slopes of the execution
/// observables.
pub fn asymptotic_exec_stats(params: &ModelParams, geom: &StripGeometry) -> Result<AsymptoticExecStats> {
    let (vs, vl, mu, q) = (params.v_sml, params.v_lrg, params.mu, geom.q);
    let (up, dn) = free_next_sign(params, (vs, vl))?;
    let chi = up / dn;
    let impact_limit = if mu == 0.0 {
        (1.0 + chi) / 6.0
    } else {
        (1.0 + chi) / 2.0
    };
    let mean_n = if mu == 0.0 {
        2.0 * q * q / (PI * vs * vl)
    } else {
        let s2 = 2.0f64.sqrt();
        2.0 * PI.sqrt() * mu * mu * (q / (2.0 * s2 * mu)).powf(1.5)
            * (mu * ((1.0 + s2) * q - vs - vl)).exp()
            / (vs * (s2 * mu * vl).sinh() + vl * (s2 * mu * vs).sinh())
    };
    let mut predicted = MomentSet::analytic();
    predicted.mean_x = impact_limit;
    predicted.mean_n = mean_n;
    predicted.var_x = chi * mean_n;

    // Small-q slopes: strip probabilities from the down-reset state at
    // the actual threshold (p_uu = p_du = 0 below v_lrg).
    let small_q = small_q_coeffs(params)?;
    let q_slope = q.min(vl).max(params.v0_ask * (1.0 + 1e-9));
    let d_jets = strip_series_jet(mu, q_slope, (vl, vs), 0.0)?;
    let (pud, pdd) = (d_jets[1].v, d_jets[2].v);
    let (du, dd) = (small_q.delta_up, small_q.delta_dn);
    Ok(AsymptoticExecStats {
        predicted,
        impact_limit,
        chi,
        small_q,
        slope_x: du - dd * (1.0 - pud) / (1.0 - pdd),
        slope_n: du + dd * (1.0 + pud) / (1.0 - pdd),
        slope_var_x: du + dd * (1.0 + pdd) * (1.0 - pud) / ((1.0 - pdd) * (1.0 - pdd)),
    })
}

/// Asymptotic laws of the free evolution (sub-diffusive t/log t family at
/// mu = 0; renewal-CLT laws with sigma^2 = chi/<t_hit> at mu > 0).
pub fn free_time_asymptotics(params: &ModelParams) -> Result<FreeTimeAsymptotics> {
    let (up, dn) = free_next_sign(params, (params.v_sml, params.v_lrg))?;
    let chi = up / dn;
    let driftless_factor = PI / (2.0 * params.v_sml * params.v_lrg);
    if params.mu == 0.0 {
        return Ok(FreeTimeAsymptotics {
            mu: 0.0,
            chi,
            driftless_factor,
            t_hit_mean: None,
            t_hit_second: None,
            sigma2: None,
        });
    }
    let m = hit_time_moments(
        params,
        None,
        (params.v_lrg, params.v_sml),
        Conditioning::Any,
        2,
    )?;
    let m1 = m.mean.expect("finite for mu > 0");
    let m2 = m.second_moment.expect("finite for mu > 0");
    Ok(FreeTimeAsymptotics {
        mu: params.mu,
        chi,
        driftless_factor,
        t_hit_mean: Some(m1),
        t_hit_second: Some(m2),
        sigma2: Some(chi / m1),
    })
}

/// Growth exponent s of a power law from (q, n) samples, by least squares
/// on ln n = s ln q + c + d/q^2. The 1/q^2 term absorbs the leading
/// finite-size correction of the hitting probabilities, which otherwise
/// biases the slope high over moderate windows.
pub fn fit_loglog_exponent(points: &[(f64, f64)]) -> f64 {
    let mut ata = [[0.0f64; 3]; 3];
    let mut atb = [0.0f64; 3];
    for &(q, n) in points {
        let row = [q.ln(), 1.0, 1.0 / (q * q)];
        let y = n.ln();
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
            atb[i] += row[i] * y;
        }
    }
    let det3 = |m: &[[f64; 3]; 3]| -> f64 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det3(&ata);
    let mut m0 = ata;
    for i in 0..3 {
        m0[i][0] = atb[i];
    }
    det3(&m0) / d
}
