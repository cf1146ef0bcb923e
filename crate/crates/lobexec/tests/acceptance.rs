//! Acceptance suite: one test per contract criterion, each printing a
//! single PASS/FAIL line (run with `--nocapture` to see them).
//!
//! Monte Carlo settings are chosen for a single-core budget: the interior
//! Gaussian increment and the bridge crossing test are exact at any dt,
//! so the step size only controls the crossing-time interpolation bias
//! (~dt/2 per renewal leg on T) and double-crossing leakage.

use lobexec::chain::{
    asymptotic_exec_stats, build_kernel, exec_moments, exec_time_gf, exec_time_moments,
    fit_loglog_exponent, free_time_asymptotics,
};
use lobexec::firstpassage::{strip_driftless_closed, strip_laplace, strip_laplace_integral};
use lobexec::model::{ModelParams, ResetDistribution, StripGeometry};
use lobexec::montecarlo::{
    simulate_execution, simulate_first_hit, simulate_free, summarize, summarize_scalar, SimConfig,
};
use std::time::Instant;

fn params(mu: f64) -> ModelParams {
    ModelParams::new(mu, 1.0, 3.0, 2.0, 2.0).unwrap()
}

fn geom(q: f64, p: &ModelParams) -> StripGeometry {
    StripGeometry::new(q, p).unwrap()
}

fn report(name: &str, start: Instant, ok: bool, detail: &str) {
    println!(
        "criterion {name}: {} ({:.1}s) {detail}",
        if ok { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64()
    );
    assert!(ok, "criterion {name} failed: {detail}");
}

#[test]
fn criterion_01_conservation_suite() {
    let start = Instant::now();
    let mut checked = 0usize;
    let mut worst = 0.0f64;
    let mut ok = true;
    for mu in [0.0, 0.5, 1.0] {
        let p = params(mu);
        for q in [2.5, 4.0, 8.0] {
            let g = geom(q, &p);
            for state in [
                (1.0, 1.0),
                (2.0, 2.0),
                (1.0, 2.3),
                (3.0, 0.7),
                (0.5, 1.9),
            ] {
                for omega in [0.0, 0.1, 1.0] {
                    let t = strip_laplace(&p, &g, state, omega).unwrap();
                    checked += 1;
                    if omega == 0.0 {
                        let defect = (t.sum() - 1.0).abs();
                        worst = worst.max(defect);
                        ok &= defect <= 1e-6;
                    } else {
                        for v in [t.p_ex, t.p_up, t.p_dn] {
                            ok &= (0.0..=1.0).contains(&v);
                        }
                    }
                }
            }
        }
    }
    ok &= checked >= 100 && start.elapsed().as_secs_f64() < 30.0;
    report(
        "01 conservation suite",
        start,
        ok,
        &format!("{checked} points, worst omega=0 defect {worst:.2e}"),
    );
}

#[test]
fn criterion_02_closed_form_oracle() {
    let start = Instant::now();
    let p0 = params(0.0);
    let q = 4.0;
    let g = geom(q, &p0);

    // 100 deterministic pseudo-random interior states.
    let mut lcg: u64 = 0x9e3779b97f4a7c15;
    let mut unit = || {
        lcg = lcg.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (lcg >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut worst_closed = 0.0f64;
    for _ in 0..100 {
        let state = (0.2 + 2.8 * unit(), 0.2 + (q - 0.4) * unit());
        let s = strip_laplace(&p0, &g, state, 0.0).unwrap();
        let c = strip_driftless_closed(state, q);
        for (a, b) in [(s.p_ex, c.p_ex), (s.p_up, c.p_up), (s.p_dn, c.p_dn)] {
            worst_closed = worst_closed.max((a - b).abs());
        }
    }

    let mut worst_integral = 0.0f64;
    for mu in [0.0, 0.5] {
        let p = params(mu);
        for state in [(1.0, 2.0), (2.0, 2.0), (3.0, 1.0)] {
            for omega in [0.0, 0.5] {
                let s = strip_laplace(&p, &g, state, omega).unwrap();
                let i = strip_laplace_integral(&p, &g, state, omega).unwrap();
                for (a, b) in [(s.p_ex, i.p_ex), (s.p_up, i.p_up), (s.p_dn, i.p_dn)] {
                    worst_integral = worst_integral.max((a - b).abs());
                }
            }
        }
    }
    let ok = worst_closed <= 1e-8 && worst_integral <= 1e-6;
    report(
        "02 closed-form oracle",
        start,
        ok,
        &format!("series-vs-closed {worst_closed:.2e}, series-vs-integral {worst_integral:.2e}"),
    );
}

#[test]
fn criterion_03_mc_hitting_triple() {
    let start = Instant::now();
    let p = params(0.0);
    let g = geom(4.0, &p);
    let cfg = SimConfig {
        dt: 1e-3,
        n_paths: 100_000,
        seed: 20_240_001,
        ..SimConfig::default()
    };
    let counts = simulate_first_hit(&p, &g, &cfg).unwrap();
    let exact = strip_driftless_closed((2.0, 2.0), 4.0);
    let n = cfg.n_paths as f64;
    let mut ok = true;
    let mut detail = String::new();
    for (c, e) in counts.iter().zip([exact.p_ex, exact.p_up, exact.p_dn]) {
        let phat = *c as f64 / n;
        let se = (e * (1.0 - e) / n).sqrt();
        let z = (phat - e) / se;
        detail.push_str(&format!("{phat:.4} (z={z:+.2}) "));
        ok &= z.abs() <= 3.0;
    }
    ok &= start.elapsed().as_secs_f64() < 90.0;
    report("03 mc hitting triple", start, ok, detail.trim());
}

#[test]
fn criterion_04_fig2_reproduction() {
    let start = Instant::now();
    let mut pass = 0usize;
    let mut total = 0usize;
    for (mu, dt) in [(0.0, 0.01), (0.5, 0.01), (1.0, 0.025)] {
        let p = params(mu);
        let mut q = 2.0;
        while q <= 6.0 + 1e-9 {
            let g = geom(q, &p);
            let cfg = SimConfig {
                dt,
                n_paths: 8000,
                seed: 20_240_004,
                ..SimConfig::default()
            };
            let mc = summarize(&simulate_execution(&p, &g, &cfg).unwrap()).unwrap();
            let err = mc.errors.unwrap();
            let an = exec_moments(&p, &g).unwrap();
            let (an_t, _) = exec_time_moments(&p, &g).unwrap();
            for (m, s, a) in [
                (mc.mean_x, err.se_mean_x, an.mean_x),
                (mc.mean_n, err.se_mean_n, an.mean_n),
                (mc.mean_t, err.se_mean_t, an_t.mean_t),
            ] {
                total += 1;
                if (m - a).abs() <= 2.0 * s + 1e-12 {
                    pass += 1;
                }
            }
            q += 0.25;
        }
    }
    let rate = pass as f64 / total as f64;
    let ok = rate >= 0.90 && start.elapsed().as_secs_f64() < 600.0;
    report(
        "04 fig2 reproduction",
        start,
        ok,
        &format!("{pass}/{total} checks within 2 se ({:.1}%)", 100.0 * rate),
    );
}

#[test]
fn criterion_05_large_q_laws() {
    let start = Instant::now();
    let p = params(0.0);

    let asy = asymptotic_exec_stats(&p, &geom(12.0, &p)).unwrap();
    let x12 = exec_moments(&p, &geom(12.0, &p)).unwrap().mean_x;
    let impact_rel = (x12 - asy.impact_limit).abs() / asy.impact_limit;

    // The hitting-count corrections are O(1/q^2); the exponent comes from
    // the three-parameter fit ln n = s ln q + c + d / q^2.
    let mut pts = Vec::new();
    let mut q = 6.0;
    while q <= 14.0 + 1e-9 {
        pts.push((q, exec_moments(&p, &geom(q, &p)).unwrap().mean_n));
        q += 0.5;
    }
    let slope = fit_loglog_exponent(&pts);

    let m14 = exec_moments(&p, &geom(14.0, &p)).unwrap();
    let chi_rel = (m14.var_x / m14.mean_n - asy.chi).abs() / asy.chi;

    let ok = impact_rel <= 0.10 && (slope - 2.0).abs() <= 0.15 && chi_rel <= 0.15;
    report(
        "05 large-q laws",
        start,
        ok,
        &format!(
            "impact {x12:.4} vs {:.4} ({:.1}%), slope {slope:.3}, var/n vs chi {:.1}%",
            asy.impact_limit,
            100.0 * impact_rel,
            100.0 * chi_rel
        ),
    );
}

#[test]
fn criterion_06_small_q_slope() {
    let start = Instant::now();
    let p = params(0.0);
    // Forward difference from the regime boundary q = v0_ask, where
    // <x_T> = 0 exactly.
    let dq = 0.05;
    let fd = exec_moments(&p, &geom(2.0 + dq, &p)).unwrap().mean_x / dq;
    let slope = asymptotic_exec_stats(&p, &geom(2.0 + dq, &p)).unwrap().slope_x;
    let rel = (fd - slope).abs() / slope.abs();
    let ok = rel <= 0.05;
    report(
        "06 small-q slope",
        start,
        ok,
        &format!("fd {fd:.4} vs formula {slope:.4} ({:.1}%)", 100.0 * rel),
    );
}

#[test]
fn criterion_07_free_dynamics() {
    let start = Instant::now();
    let mut ok = true;
    let mut detail = String::new();

    // mu = 0: drift-free symmetry and the t / log t growth law.
    let p = params(0.0);
    let cfg = SimConfig {
        dt: 0.01,
        n_paths: 1000,
        seed: 20_240_007,
        sample_times: vec![10.0, 100.0, 1000.0, 10_000.0],
        ..SimConfig::default()
    };
    let out = simulate_free(&p, &cfg).unwrap();
    for row in &out.snapshots {
        let xs = summarize_scalar(&row.x).unwrap();
        ok &= xs.mean.abs() <= 2.0 * xs.se_mean;
    }
    let asy = free_time_asymptotics(&p).unwrap();
    let last = out.snapshots.last().unwrap();
    let n_mc = summarize_scalar(&last.n).unwrap().mean;
    let n_pred = asy.predict_mean_n(last.time);
    let n_rel = (n_mc - n_pred).abs() / n_pred;
    ok &= n_rel <= 0.25;
    detail.push_str(&format!(
        "n(1e4) {n_mc:.0} vs {n_pred:.0} ({:.1}%); ",
        100.0 * n_rel
    ));

    // mu = 1: variogram slope against sigma^2 = chi / <t_hit>.
    let p1 = params(1.0);
    let cfg1 = SimConfig {
        dt: 0.01,
        n_paths: 2000,
        seed: 20_240_008,
        sample_times: vec![100.0, 200.0],
        ..SimConfig::default()
    };
    let out1 = simulate_free(&p1, &cfg1).unwrap();
    let lag = out1.snapshots[1].time - out1.snapshots[0].time;
    let diffs: Vec<f64> = out1.snapshots[1]
        .x
        .iter()
        .zip(&out1.snapshots[0].x)
        .map(|(b, a)| b - a)
        .collect();
    let d = summarize_scalar(&diffs).unwrap();
    let slope = d.var / lag;
    let se_slope = d.se_var / lag;
    let sigma2 = free_time_asymptotics(&p1).unwrap().sigma2.unwrap();
    let z = (slope - sigma2) / se_slope;
    ok &= z.abs() <= 3.0;
    detail.push_str(&format!("variogram {slope:.4} vs {sigma2:.4} (z={z:+.2})"));

    ok &= start.elapsed().as_secs_f64() < 300.0;
    report("07 free dynamics", start, ok, &detail);
}

#[test]
fn criterion_08_granularity_robustness() {
    let start = Instant::now();
    let p = params(0.0);
    let mut ok = true;
    let mut worst_z = 0.0f64;
    for q in [2.5, 3.0, 3.5, 4.0, 4.5, 5.0] {
        let g = geom(q, &p);
        let base = SimConfig {
            dt: 0.01,
            n_paths: 5000,
            seed: 20_240_009,
            ..SimConfig::default()
        };
        let diff = summarize(&simulate_execution(&p, &g, &base).unwrap()).unwrap();
        let jump_cfg = SimConfig { dv: 0.3, ..base };
        let jump = summarize(&simulate_execution(&p, &g, &jump_cfg).unwrap()).unwrap();
        let (ed, ej) = (diff.errors.unwrap(), jump.errors.unwrap());
        let sigma = (ed.se_mean_x.powi(2) + ej.se_mean_x.powi(2)).sqrt();
        let z = (diff.mean_x - jump.mean_x) / sigma;
        worst_z = worst_z.max(z.abs());
        ok &= z.abs() < 2.0;
    }

    // Stochastic resets: finite curves.
    let stoch_cfg = SimConfig {
        dt: 0.01,
        n_paths: 2000,
        seed: 20_240_010,
        reset_distribution: ResetDistribution::stochastic_default(),
        ..SimConfig::default()
    };
    let stoch = summarize(&simulate_execution(&p, &geom(4.0, &p), &stoch_cfg).unwrap()).unwrap();
    for v in [
        stoch.mean_x,
        stoch.var_x,
        stoch.mean_n,
        stoch.var_n,
        stoch.mean_t,
        stoch.var_t,
    ] {
        ok &= v.is_finite();
    }
    report(
        "08 granularity robustness",
        start,
        ok,
        &format!(
            "worst |z| {worst_z:.2}; stochastic-reset mean_x {:.4}",
            stoch.mean_x
        ),
    );
}

#[test]
fn criterion_09_execution_time_identity() {
    let start = Instant::now();
    let mut ok = true;
    let mut worst_psi = 0.0f64;
    let mut worst_rel = 0.0f64;
    for mu in [0.0, 0.5, 1.0] {
        let p = params(mu);
        for q in [2.5, 3.0, 4.0, 5.0, 6.0] {
            let g = geom(q, &p);
            let psi0 = exec_time_gf(&build_kernel(&p, &g, 0.0).unwrap()).unwrap();
            worst_psi = worst_psi.max((psi0 - 1.0).abs());

            let (t_an, _) = exec_time_moments(&p, &g).unwrap();
            let mean_t = t_an.mean_t;
            // Scale the frequency step to the decay scale 1/<T> so the
            // one-sided difference stays second-order accurate.
            let h = 1e-3 / mean_t.max(1.0);
            let psi = |omega: f64| exec_time_gf(&build_kernel(&p, &g, omega).unwrap()).unwrap();
            let fd = (3.0 * psi0 - 4.0 * psi(h) + psi(2.0 * h)) / (2.0 * h);
            let rel = (fd - mean_t).abs() / mean_t;
            worst_rel = worst_rel.max(rel);
        }
    }
    ok &= worst_psi <= 1e-9 && worst_rel <= 1e-4;
    report(
        "09 execution-time identity",
        start,
        ok,
        &format!("worst |Psi(0)-1| {worst_psi:.2e}, worst <T> rel dev {worst_rel:.2e}"),
    );
}

#[test]
fn criterion_10_determinism() {
    let start = Instant::now();
    let bin = env!("CARGO_BIN_EXE_lobexec");
    let dir = std::env::temp_dir().join("lobexec_acceptance_det");
    std::fs::create_dir_all(&dir).unwrap();

    let run = |label: &str, threads: &str| -> Vec<u8> {
        let out = dir.join(label);
        let status = std::process::Command::new(bin)
            .args([
                "exec",
                "--mu",
                "0,0.5",
                "--Q-grid",
                "3:4:0.5",
                "--paths",
                "400",
                "--dt",
                "0.01",
                "--seed",
                "17",
                "--out",
            ])
            .arg(&out)
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap();
        assert!(
            status.status.success(),
            "binary failed: {}",
            String::from_utf8_lossy(&status.stderr)
        );
        std::fs::read(out.with_extension("csv")).unwrap()
    };

    let a = run("run_a", "1");
    let b = run("run_b", "1");
    let c = run("run_c", "4");
    let ok = a == b && a == c;
    report(
        "10 determinism",
        start,
        ok,
        &format!("{} bytes; rerun and 1-vs-4-worker outputs identical", a.len()),
    );
}
