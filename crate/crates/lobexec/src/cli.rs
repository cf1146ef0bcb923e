//! Batch front-end: config parsing, the three experiments (free
//! evolution, one-shot execution, granularity robustness) plus a
//! first-passage point probe, and deterministic CSV / plot-spec output.
//!
//! Configuration comes from an optional `key=value` file (UTF-8, `#`
//! comments) merged with command-line flags; flags take precedence and
//! unknown keys are rejected. Every emitted Monte Carlo column is paired
//! with a standard-error column, and analytic counterparts are attached
//! when they exist.

use crate::chain::{asymptotic_exec_stats, exec_moments, exec_time_moments, free_time_asymptotics};
use crate::error::{Error, Result};
use crate::firstpassage::{
    free_laplace, hit_time_moments, strip_laplace, Conditioning,
};
use crate::model::{ModelParams, ResetDistribution, StripGeometry};
use crate::montecarlo::{
    simulate_execution, simulate_free, summarize, summarize_scalar, SimConfig,
};
use clap::{Args, Parser, Subcommand};
use std::fmt::Write as _;
use std::path::PathBuf;

/// Experiment selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Probe,
    Free,
    Exec,
    Robust,
}

impl CommandKind {
    fn name(self) -> &'static str {
        match self {
            CommandKind::Probe => "probe",
            CommandKind::Free => "free",
            CommandKind::Exec => "exec",
            CommandKind::Robust => "robust",
        }
    }
}

/// Reset-volume mode: fixed pair or the stochastic supports of the
/// robustness study.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResetMode {
    Deterministic,
    Fig3,
}

impl ResetMode {
    fn distribution(self) -> ResetDistribution {
        match self {
            ResetMode::Deterministic => ResetDistribution::Deterministic,
            ResetMode::Fig3 => ResetDistribution::stochastic_default(),
        }
    }

    fn name(self) -> &'static str {
        match self {
            ResetMode::Deterministic => "deterministic",
            ResetMode::Fig3 => "fig3",
        }
    }
}

/// Fully resolved run configuration (file + flags merged).
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub command: CommandKind,
    pub mu: Vec<f64>,
    pub v_sml: f64,
    pub v_lrg: f64,
    pub v0_bid: f64,
    pub v0_ask: f64,
    /// Execution thresholds; empty selects the free problem in `probe`.
    pub q_grid: Vec<f64>,
    pub omega: f64,
    pub paths: usize,
    pub seed: u64,
    pub dt: f64,
    /// Jump granularities; 0 is the diffusion scheme. `robust` sweeps
    /// the whole list, the other commands use the first entry.
    pub dv: Vec<f64>,
    pub bridge: bool,
    pub resets: ResetMode,
    pub max_time: f64,
    /// Snapshot times for `free`.
    pub sample_times: Vec<f64>,
    /// Output stem; `<out>.csv` and `<out>.plot` are written.
    pub out: String,
}

/// Shared command-line flags; unset flags fall back to the config file,
/// then to defaults.
#[derive(Args, Clone, Debug, Default)]
pub struct CommonFlags {
    /// Drift value or comma-separated list.
    #[arg(long)]
    pub mu: Option<String>,
    /// Reset volume on the side opposite the depleted queue.
    #[arg(long)]
    pub vsml: Option<f64>,
    /// Reset volume on the depleted side.
    #[arg(long)]
    pub vlrg: Option<f64>,
    /// Initial bid-queue volume.
    #[arg(long)]
    pub vb: Option<f64>,
    /// Initial ask-queue volume.
    #[arg(long)]
    pub va: Option<f64>,
    /// Single execution threshold.
    #[arg(long = "Q")]
    pub q: Option<f64>,
    /// Threshold grid start:stop:step (inclusive).
    #[arg(long = "Q-grid", value_name = "START:STOP:STEP")]
    pub q_grid: Option<String>,
    /// Laplace frequency for the probe.
    #[arg(long)]
    pub omega: Option<f64>,
    /// Monte Carlo path count.
    #[arg(long)]
    pub paths: Option<usize>,
    /// Base RNG seed; each path uses its own counter stream.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Euler time step.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Jump granularity value or comma-separated list (0 = diffusion).
    #[arg(long)]
    pub dv: Option<String>,
    /// Brownian-bridge boundary correction: on|off.
    #[arg(long)]
    pub bridge: Option<String>,
    /// Reset mode: deterministic|fig3.
    #[arg(long)]
    pub resets: Option<String>,
    /// Censoring horizon for execution runs.
    #[arg(long = "max-time")]
    pub max_time: Option<f64>,
    /// Output stem (writes <out>.csv and <out>.plot).
    #[arg(long)]
    pub out: Option<String>,
    /// Optional key=value config file.
    #[arg(long)]
    pub config: Option<String>,
}

#[derive(Parser, Debug)]
#[command(
    name = "lobexec",
    version,
    about = "Semi-analytic engine and Monte Carlo simulator for a limit-order-book queue model"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Subcommand, Debug)]
pub enum CliCommand {
    /// First-passage probabilities and mean hitting time at one point.
    Probe(CommonFlags),
    /// Free price evolution: snapshots of (x_t, n_t) across paths.
    Free(CommonFlags),
    /// One-shot execution sweep over Q with analytic comparisons.
    Exec(CommonFlags),
    /// Granularity / reset-mode robustness sweep.
    Robust(CommonFlags),
}

/// Tabular result: metadata echo plus named numeric columns.
#[derive(Clone, Debug)]
pub struct ResultTable {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    value
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::Usage(format!("malformed value for `{key}`: {value:?}")))
}

fn parse_f64_list(key: &str, value: &str) -> Result<Vec<f64>> {
    let items: Result<Vec<f64>> = value
        .split(',')
        .map(|part| parse_f64(key, part))
        .collect();
    let items = items?;
    if items.is_empty() {
        return Err(Error::Usage(format!("`{key}` must be nonempty")));
    }
    Ok(items)
}

/// Parses an inclusive `start:stop:step` grid.
///
/// ```
/// let grid = lobexec::cli::parse_grid("Q_grid", "2:6:0.25").unwrap();
/// assert_eq!(grid.len(), 17);
/// assert_eq!(grid[0], 2.0);
/// ```
pub fn parse_grid(key: &str, value: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = value.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Usage(format!(
            "malformed grid for `{key}`: expected start:stop:step, got {value:?}"
        )));
    }
    let start = parse_f64(key, parts[0])?;
    let stop = parse_f64(key, parts[1])?;
    let step = parse_f64(key, parts[2])?;
    if !(step > 0.0) || stop < start {
        return Err(Error::Usage(format!(
            "malformed grid for `{key}`: need step > 0 and stop >= start"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

/// Parses the `key=value` config-file syntax ('#' comments, blank lines
/// ignored).
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Usage(format!(
                "config line {}: expected key=value, got {:?}",
                lineno + 1,
                raw
            ))
        })?;
        pairs.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(pairs)
}

const DEFAULT_SAMPLE_TIMES: [f64; 13] = [
    1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0, 2000.0, 5000.0, 10000.0,
];

fn default_config(command: CommandKind) -> ExperimentConfig {
    ExperimentConfig {
        command,
        mu: vec![0.0],
        v_sml: 1.0,
        v_lrg: 3.0,
        v0_bid: 2.0,
        v0_ask: 2.0,
        q_grid: Vec::new(),
        omega: 0.0,
        paths: 1000,
        seed: 1,
        dt: 1e-3,
        dv: vec![0.0],
        bridge: true,
        resets: ResetMode::Deterministic,
        max_time: 1e6,
        sample_times: DEFAULT_SAMPLE_TIMES.to_vec(),
        out: command.name().to_string(),
    }
}

fn apply_setting(cfg: &mut ExperimentConfig, key: &str, value: &str) -> Result<()> {
    match key {
        "mu" => cfg.mu = parse_f64_list(key, value)?,
        "vsml" => cfg.v_sml = parse_f64(key, value)?,
        "vlrg" => cfg.v_lrg = parse_f64(key, value)?,
        "vb" => cfg.v0_bid = parse_f64(key, value)?,
        "va" => cfg.v0_ask = parse_f64(key, value)?,
        "Q" => cfg.q_grid = vec![parse_f64(key, value)?],
        "Q_grid" | "Q-grid" => cfg.q_grid = parse_grid(key, value)?,
        "omega" => cfg.omega = parse_f64(key, value)?,
        "paths" => {
            cfg.paths = value
                .trim()
                .parse()
                .map_err(|_| Error::Usage(format!("malformed value for `paths`: {value:?}")))?
        }
        "seed" => {
            cfg.seed = value
                .trim()
                .parse()
                .map_err(|_| Error::Usage(format!("malformed value for `seed`: {value:?}")))?
        }
        "dt" => cfg.dt = parse_f64(key, value)?,
        "dv" => cfg.dv = parse_f64_list(key, value)?,
        "bridge" => {
            cfg.bridge = match value.trim() {
                "on" => true,
                "off" => false,
                other => {
                    return Err(Error::Usage(format!(
                        "`bridge` must be on|off, got {other:?}"
                    )))
                }
            }
        }
        "resets" => {
            cfg.resets = match value.trim() {
                "deterministic" => ResetMode::Deterministic,
                "fig3" => ResetMode::Fig3,
                other => {
                    return Err(Error::Usage(format!(
                        "`resets` must be deterministic|fig3, got {other:?}"
                    )))
                }
            }
        }
        "max_time" | "max-time" => cfg.max_time = parse_f64(key, value)?,
        "sample_times" => cfg.sample_times = parse_f64_list(key, value)?,
        "out" => cfg.out = value.trim().to_string(),
        other => return Err(Error::Usage(format!("unknown key: {other}"))),
    }
    Ok(())
}

/// Merges the optional config file with the flags (flags win) and
/// validates the result.
pub fn parse_config(command: CommandKind, flags: &CommonFlags) -> Result<ExperimentConfig> {
    let mut cfg = default_config(command);

    if let Some(path) = &flags.config {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
        for (key, value) in parse_config_text(&text)? {
            apply_setting(&mut cfg, &key, &value)?;
        }
    }

    let mut overlay: Vec<(&str, String)> = Vec::new();
    if let Some(v) = &flags.mu {
        overlay.push(("mu", v.clone()));
    }
    if let Some(v) = flags.vsml {
        overlay.push(("vsml", v.to_string()));
    }
    if let Some(v) = flags.vlrg {
        overlay.push(("vlrg", v.to_string()));
    }
    if let Some(v) = flags.vb {
        overlay.push(("vb", v.to_string()));
    }
    if let Some(v) = flags.va {
        overlay.push(("va", v.to_string()));
    }
    if let Some(v) = flags.q {
        overlay.push(("Q", v.to_string()));
    }
    if let Some(v) = &flags.q_grid {
        overlay.push(("Q_grid", v.clone()));
    }
    if let Some(v) = flags.omega {
        overlay.push(("omega", v.to_string()));
    }
    if let Some(v) = flags.paths {
        overlay.push(("paths", v.to_string()));
    }
    if let Some(v) = flags.seed {
        overlay.push(("seed", v.to_string()));
    }
    if let Some(v) = flags.dt {
        overlay.push(("dt", v.to_string()));
    }
    if let Some(v) = &flags.dv {
        overlay.push(("dv", v.clone()));
    }
    if let Some(v) = &flags.bridge {
        overlay.push(("bridge", v.clone()));
    }
    if let Some(v) = &flags.resets {
        overlay.push(("resets", v.clone()));
    }
    if let Some(v) = flags.max_time {
        overlay.push(("max_time", v.to_string()));
    }
    if let Some(v) = &flags.out {
        overlay.push(("out", v.clone()));
    }
    for (key, value) in overlay {
        apply_setting(&mut cfg, key, &value)?;
    }

    // Fail early on invalid physical parameters.
    for &mu in &cfg.mu {
        let params = ModelParams::new(mu, cfg.v_sml, cfg.v_lrg, cfg.v0_bid, cfg.v0_ask)?;
        for &q in &cfg.q_grid {
            StripGeometry::new(q, &params)?;
        }
    }
    if matches!(command, CommandKind::Exec | CommandKind::Robust) && cfg.q_grid.is_empty() {
        return Err(Error::Usage(
            "exec/robust need --Q or --Q-grid (or the Q/Q_grid config keys)".to_string(),
        ));
    }
    Ok(cfg)
}

fn params_for(cfg: &ExperimentConfig, mu: f64) -> Result<ModelParams> {
    ModelParams::new(mu, cfg.v_sml, cfg.v_lrg, cfg.v0_bid, cfg.v0_ask)
}

fn sim_config(cfg: &ExperimentConfig, dv: f64, resets: ResetMode) -> SimConfig {
    SimConfig {
        dt: cfg.dt,
        bridge_correction: cfg.bridge,
        dv,
        reset_distribution: resets.distribution(),
        n_paths: cfg.paths,
        seed: cfg.seed,
        max_time: cfg.max_time,
        sample_times: cfg.sample_times.clone(),
    }
}

fn metadata(cfg: &ExperimentConfig) -> Vec<(String, String)> {
    let join = |v: &[f64]| {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    let mut m = vec![
        ("artifact".to_string(), format!("lobexec v{}", env!("CARGO_PKG_VERSION"))),
        ("command".to_string(), cfg.command.name().to_string()),
        ("mu".to_string(), join(&cfg.mu)),
        ("vsml".to_string(), cfg.v_sml.to_string()),
        ("vlrg".to_string(), cfg.v_lrg.to_string()),
        ("vb".to_string(), cfg.v0_bid.to_string()),
        ("va".to_string(), cfg.v0_ask.to_string()),
        ("Q_grid".to_string(), join(&cfg.q_grid)),
        ("omega".to_string(), cfg.omega.to_string()),
        ("paths".to_string(), cfg.paths.to_string()),
        ("seed".to_string(), cfg.seed.to_string()),
        ("dt".to_string(), cfg.dt.to_string()),
        ("dv".to_string(), join(&cfg.dv)),
        (
            "bridge".to_string(),
            if cfg.bridge { "on" } else { "off" }.to_string(),
        ),
        ("resets".to_string(), cfg.resets.name().to_string()),
        ("max_time".to_string(), cfg.max_time.to_string()),
    ];
    if cfg.command == CommandKind::Free {
        m.push(("sample_times".to_string(), join(&cfg.sample_times)));
    }
    m
}

/// Point probe: first-passage triple (or free up/down split) and mean
/// hitting time at the configured state.
pub fn run_probe(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let params = params_for(cfg, cfg.mu[0])?;
    let state = (params.v0_bid, params.v0_ask);
    let (p_ex, p_up, p_dn, t_hit) = match cfg.q_grid.first() {
        Some(&q) => {
            let geom = StripGeometry::new(q, &params)?;
            let triple = strip_laplace(&params, &geom, state, cfg.omega)?;
            let t = hit_time_moments(&params, Some(&geom), state, Conditioning::Any, 1)?;
            (
                triple.p_ex,
                triple.p_up,
                triple.p_dn,
                t.mean.unwrap_or(f64::NAN),
            )
        }
        None => {
            let (hu, hd) = free_laplace(&params, state, cfg.omega)?;
            let t = hit_time_moments(&params, None, state, Conditioning::Any, 1)?;
            (0.0, hu, hd, t.mean.unwrap_or(f64::NAN))
        }
    };
    Ok(ResultTable {
        metadata: metadata(cfg),
        columns: vec!["p_ex", "p_up", "p_dn", "sum", "t_hit"],
        rows: vec![vec![p_ex, p_up, p_dn, p_ex + p_up + p_dn, t_hit]],
    })
}

/// Free-evolution experiment: per sample time, MC moments of (x_t, n_t)
/// with the long-time analytic predictions.
pub fn run_free(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let mut rows = Vec::new();
    for &mu in &cfg.mu {
        let params = params_for(cfg, mu)?;
        let asy = free_time_asymptotics(&params)?;
        let sim = sim_config(cfg, cfg.dv[0], cfg.resets);
        let outcome = simulate_free(&params, &sim)?;
        for row in &outcome.snapshots {
            let xs = summarize_scalar(&row.x)?;
            let ns = summarize_scalar(&row.n)?;
            rows.push(vec![
                row.time,
                mu,
                xs.mean,
                xs.se_mean,
                xs.var,
                xs.se_var,
                ns.mean,
                ns.se_mean,
                ns.var,
                ns.se_var,
                0.0,
                asy.predict_var_x(row.time),
                asy.predict_mean_n(row.time),
                asy.predict_var_n(row.time),
            ]);
        }
    }
    Ok(ResultTable {
        metadata: metadata(cfg),
        columns: vec![
            "t",
            "mu",
            "mc_mean_x",
            "se_x",
            "mc_var_x",
            "se_var_x",
            "mc_mean_n",
            "se_n",
            "mc_var_n",
            "se_var_n",
            "asy_mean_x",
            "asy_var_x",
            "asy_mean_n",
            "asy_var_n",
        ],
        rows,
    })
}

const EXEC_COLUMNS: [&str; 17] = [
    "q",
    "mu",
    "mc_mean_x",
    "se_x",
    "mc_var_x",
    "se_var_x",
    "mc_mean_n",
    "se_n",
    "mc_mean_T",
    "se_T",
    "an_mean_x",
    "an_var_x",
    "an_mean_n",
    "an_mean_T",
    "asy_mean_x",
    "asy_mean_n",
    "censored_frac",
];

fn exec_row(cfg: &ExperimentConfig, mu: f64, q: f64, dv: f64, resets: ResetMode) -> Result<Vec<f64>> {
    let params = params_for(cfg, mu)?;
    let geom = StripGeometry::new(q, &params)?;
    let sim = sim_config(cfg, dv, resets);
    let outcome = simulate_execution(&params, &geom, &sim)?;
    let mc = summarize(&outcome)?;
    let err = mc.errors.unwrap_or_default();
    let an = exec_moments(&params, &geom)?;
    let (an_t, _) = exec_time_moments(&params, &geom)?;
    let asy = asymptotic_exec_stats(&params, &geom)?;
    Ok(vec![
        q,
        mu,
        mc.mean_x,
        err.se_mean_x,
        mc.var_x,
        err.se_var_x,
        mc.mean_n,
        err.se_mean_n,
        mc.mean_t,
        err.se_mean_t,
        an.mean_x,
        an.var_x,
        an.mean_n,
        an_t.mean_t,
        asy.predicted.mean_x,
        asy.predicted.mean_n,
        outcome.censored_fraction(),
    ])
}

/// One-shot execution sweep: per (mu, q), MC statistics next to the
/// semi-analytic and asymptotic predictions.
pub fn run_exec(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let mut rows = Vec::new();
    for &mu in &cfg.mu {
        for &q in &cfg.q_grid {
            rows.push(exec_row(cfg, mu, q, cfg.dv[0], cfg.resets)?);
        }
    }
    Ok(ResultTable {
        metadata: metadata(cfg),
        columns: EXEC_COLUMNS.to_vec(),
        rows,
    })
}

/// Robustness sweep: one execution curve family per dv value under the
/// configured reset mode. `reset_mode` is encoded 0 = deterministic,
/// 1 = fig3.
pub fn run_robust(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let mut rows = Vec::new();
    for &dv in &cfg.dv {
        for &mu in &cfg.mu {
            for &q in &cfg.q_grid {
                let mut row = exec_row(cfg, mu, q, dv, cfg.resets)?;
                let mode = match cfg.resets {
                    ResetMode::Deterministic => 0.0,
                    ResetMode::Fig3 => 1.0,
                };
                let mut full = vec![dv, mode];
                full.append(&mut row);
                rows.push(full);
            }
        }
    }
    let mut columns = vec!["dv", "reset_mode"];
    columns.extend_from_slice(&EXEC_COLUMNS);
    Ok(ResultTable {
        metadata: metadata(cfg),
        columns,
        rows,
    })
}

/// 12-significant-digit serialization used for every CSV number.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.11e}")
    }
}

/// Renders the CSV text: '#' metadata lines, header row, data rows.
pub fn render_csv(table: &ResultTable) -> String {
    let mut out = String::new();
    for (key, value) in &table.metadata {
        let _ = writeln!(out, "# {key} = {value}");
    }
    let _ = writeln!(out, "{}", table.columns.join(","));
    for row in &table.rows {
        let line: Vec<String> = row.iter().map(|v| format_number(*v)).collect();
        let _ = writeln!(out, "{}", line.join(","));
    }
    out
}

/// Renders the declarative plot spec for a command.
pub fn render_plot(cfg: &ExperimentConfig) -> String {
    let csv = format!("{}.csv", cfg.out);
    let mut out = String::new();
    let _ = writeln!(out, "# declarative plot spec; data in {csv}");
    let _ = writeln!(out, "csv: {csv}");
    let mut chart = |name: &str, x: &str, series: &[(&str, Option<&str>)]| {
        let _ = writeln!(out, "chart: {name}");
        let _ = writeln!(out, "  x: {x}");
        for (y, yerr) in series {
            match yerr {
                Some(e) => {
                    let _ = writeln!(out, "  series: {y} err={e}");
                }
                None => {
                    let _ = writeln!(out, "  series: {y}");
                }
            }
        }
    };
    match cfg.command {
        CommandKind::Probe => {
            let _ = writeln!(out, "chart: none  # single-row probe output");
        }
        CommandKind::Free => {
            chart(
                "mean-price-change",
                "t",
                &[("mc_mean_x", Some("se_x")), ("asy_mean_x", None)],
            );
            chart(
                "price-variance",
                "t",
                &[("mc_var_x", Some("se_var_x")), ("asy_var_x", None)],
            );
            chart(
                "hit-count",
                "t",
                &[("mc_mean_n", Some("se_n")), ("asy_mean_n", None)],
            );
        }
        CommandKind::Exec | CommandKind::Robust => {
            chart(
                "apparent-impact",
                "q",
                &[
                    ("mc_mean_x", Some("se_x")),
                    ("an_mean_x", None),
                    ("asy_mean_x", None),
                ],
            );
            chart(
                "price-variance",
                "q",
                &[("mc_var_x", Some("se_var_x")), ("an_var_x", None)],
            );
            chart(
                "hit-count",
                "q",
                &[
                    ("mc_mean_n", Some("se_n")),
                    ("an_mean_n", None),
                    ("asy_mean_n", None),
                ],
            );
            chart(
                "execution-time",
                "q",
                &[("mc_mean_T", Some("se_T")), ("an_mean_T", None)],
            );
        }
    }
    if cfg.command == CommandKind::Free || cfg.command == CommandKind::Exec {
        let _ = writeln!(out, "group-by: mu");
    }
    if cfg.command == CommandKind::Robust {
        let _ = writeln!(out, "group-by: dv,reset_mode");
    }
    out
}

/// Writes `<out>.csv` and `<out>.plot`; returns both paths.
pub fn emit_outputs(table: &ResultTable, cfg: &ExperimentConfig) -> Result<(PathBuf, PathBuf)> {
    let csv_path = PathBuf::from(format!("{}.csv", cfg.out));
    let plot_path = PathBuf::from(format!("{}.plot", cfg.out));
    std::fs::write(&csv_path, render_csv(table)).map_err(|source| Error::Io {
        path: csv_path.display().to_string(),
        source,
    })?;
    std::fs::write(&plot_path, render_plot(cfg)).map_err(|source| Error::Io {
        path: plot_path.display().to_string(),
        source,
    })?;
    Ok((csv_path, plot_path))
}

fn execute(command: CommandKind, flags: &CommonFlags) -> Result<()> {
    let cfg = parse_config(command, flags)?;
    let table = match command {
        CommandKind::Probe => run_probe(&cfg)?,
        CommandKind::Free => run_free(&cfg)?,
        CommandKind::Exec => run_exec(&cfg)?,
        CommandKind::Robust => run_robust(&cfg)?,
    };
    let (csv, plot) = emit_outputs(&table, &cfg)?;
    println!("wrote {} and {}", csv.display(), plot.display());
    Ok(())
}

/// Entry point for the binary; returns the process exit code
/// (0 success, 2 parameter/usage, 3 numeric non-convergence).
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let (command, flags) = match &cli.command {
        CliCommand::Probe(f) => (CommandKind::Probe, f),
        CliCommand::Free(f) => (CommandKind::Free, f),
        CliCommand::Exec(f) => (CommandKind::Exec, f),
        CliCommand::Robust(f) => (CommandKind::Robust, f),
    };
    match execute(command, flags) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
