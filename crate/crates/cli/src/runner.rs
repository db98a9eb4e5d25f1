//! Experiment evaluation and the CSV / gnuplot / timing artifacts.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anscy::analysis::{
    connection_outage, connection_outage_lower_bound, estimation_quality, secrecy_outage_lower, secrecy_outage_upper,
    ConnectionModel,
};
use anscy::config::SystemConfig;
use anscy::montecarlo::{
    simulate_connection_outage_sweep, simulate_secrecy_outage_sweep, ChannelModel, MonteCarloEstimate, SimOptions,
};
use anscy::throughput::{secrecy_throughput, secrecy_throughput_at, throughput_over_phi, ThroughputSolution};
use rayon::prelude::*;

use crate::error::{CliError, Result};
use crate::presets::{preset, Axis, Experiment, Kind, Param, Preset};

/// A fully specified experiment run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub experiment: Experiment,
    /// `key=value` configuration text applied on top of the preset.
    pub overrides: Option<String>,
    /// Replacement for the preset's sweep grid.
    pub grid: Option<Vec<f64>>,
    /// Monte Carlo trials per point; `None` keeps the preset default.
    pub trials: Option<u64>,
    pub seed: u64,
    /// Whether to run the Monte Carlo columns at all.
    pub monte_carlo: bool,
    pub channels: ChannelModel,
    pub out_path: PathBuf,
}

impl ExperimentSpec {
    /// The preset defaults for `experiment`, written to `<name>.csv`.
    pub fn new(experiment: Experiment) -> Self {
        ExperimentSpec {
            experiment,
            overrides: None,
            grid: None,
            trials: None,
            seed: 1,
            monte_carlo: true,
            channels: ChannelModel::Scalar,
            out_path: PathBuf::from(format!("{}.csv", experiment.name())),
        }
    }
}

/// A CSV cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    /// A coordinate, written in shortest round-trip form.
    Coord(f64),
    /// A computed value, written with 17 significant digits.
    Value(f64),
    Flag(bool),
    Missing,
}

impl Cell {
    fn render(self, out: &mut String) {
        match self {
            Cell::Coord(v) => {
                let _ = write!(out, "{v}");
            }
            Cell::Value(v) => {
                let _ = write!(out, "{v:.16e}");
            }
            Cell::Flag(b) => out.push(if b { '1' } else { '0' }),
            Cell::Missing => {}
        }
    }
}

/// Evaluated experiment, before serialization.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Wall-clock seconds per series block, in series order.
    pub seconds: Vec<f64>,
    /// For throughput experiments, whether any row was feasible.
    pub any_feasible: Option<bool>,
}

impl Table {
    /// Comma-separated rendering with a header row.
    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            for (i, c) in row.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                c.render(&mut s);
            }
            s.push('\n');
        }
        s
    }
}

/// Paths written by [`run_experiment`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub csv: PathBuf,
    pub gnuplot: PathBuf,
    pub timing: PathBuf,
    pub rows: usize,
    /// True when a throughput experiment found no feasible point.
    pub infeasible_only: bool,
}

/// Reads and validates a configuration file on top of the defaults.
pub fn load_config(path: &Path) -> Result<SystemConfig> {
    let text = read(path)?;
    Ok(SystemConfig::parse(&text)?)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Keys assigned by a configuration text; tied intensities given explicitly are left alone.
fn assigned_keys(text: &str) -> Vec<String> {
    text.lines()
        .filter_map(|l| l.split('#').next()?.split_once('=').map(|(k, _)| k.trim().to_string()))
        .collect()
}

/// Per-point seed: distinct streams for every series block and point.
fn derive_seed(seed: u64, block: usize, point: usize) -> u64 {
    const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
    seed ^ GOLDEN.wrapping_mul(((block as u64) << 32) | (point as u64 + 1))
}

struct Plan {
    preset: Preset,
    base: SystemConfig,
    explicit: Vec<String>,
    trials: u64,
    seed: u64,
    opts: SimOptions,
}

impl Plan {
    fn new(spec: &ExperimentSpec) -> Result<Self> {
        let mut preset = preset(spec.experiment);
        if let Some(grid) = &spec.grid {
            if grid.is_empty() || !grid.windows(2).all(|w| w[0] < w[1]) || grid.iter().any(|v| !v.is_finite()) {
                return Err(CliError::Usage(
                    "sweep grid must be nonempty, finite and strictly increasing".into(),
                ));
            }
            if preset.sweep.param.integral() && grid.iter().any(|v| v.fract() != 0.0 || *v < 1.0) {
                return Err(CliError::Usage(format!(
                    "{} takes positive integers",
                    preset.sweep.param.column()
                )));
            }
            preset.sweep.values = grid.clone();
        }
        let mut base = preset.base.clone();
        let mut explicit = Vec::new();
        if let Some(text) = &spec.overrides {
            base.apply_text(text)?;
            explicit = assigned_keys(text);
        }
        let trials = spec.trials.unwrap_or(preset.trials);
        if spec.monte_carlo && trials == 0 && preset.trials > 0 {
            return Err(CliError::Usage("--trials must be positive".into()));
        }
        let opts = SimOptions {
            channels: spec.channels,
            ..SimOptions::default()
        };
        Ok(Plan {
            preset,
            base,
            explicit,
            trials,
            seed: spec.seed,
            opts,
        })
    }

    fn config(&self, series: Option<f64>, point: f64) -> Result<SystemConfig> {
        let mut cfg = self.base.clone();
        if let (Some(axis), Some(v)) = (&self.preset.series, series) {
            axis.param.apply(&mut cfg, v);
        }
        self.preset.sweep.param.apply(&mut cfg, point);
        let mut ties = self.preset.ties;
        if self.explicit.iter().any(|k| k == "lambda_u") {
            ties.lambda_u_per_b = None;
        }
        if self.explicit.iter().any(|k| k == "lambda_e") {
            ties.lambda_e_per_b = None;
        }
        ties.apply(&mut cfg);
        cfg.validate()?;
        Ok(cfg)
    }

    fn blocks(&self) -> Vec<Option<f64>> {
        match &self.preset.series {
            Some(a) => a.values.iter().map(|&v| Some(v)).collect(),
            None => vec![None],
        }
    }

    fn lead(&self, series: Option<f64>, point: f64) -> Vec<Cell> {
        let mut row = vec![Cell::Coord(point)];
        if let Some(v) = series {
            row.push(Cell::Coord(v));
        }
        row
    }
}

fn db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

fn mc_cells(mc: Option<&MonteCarloEstimate>) -> [Cell; 2] {
    match mc {
        Some(m) => [Cell::Value(m.p_hat), Cell::Value(m.ci_half_width_95)],
        None => [Cell::Missing, Cell::Missing],
    }
}

fn throughput_cells(s: &ThroughputSolution) -> [Cell; 5] {
    [
        Cell::Value(s.beta_bs_star),
        Cell::Value(s.beta_e_star),
        Cell::Value(s.mu),
        Cell::Value(s.p_us),
        Cell::Flag(s.feasible),
    ]
}

/// Evaluates every sweep point of `spec` without touching the file system.
pub fn evaluate(spec: &ExperimentSpec) -> Result<Table> {
    let plan = Plan::new(spec)?;
    let p = &plan.preset;
    let sweep: &Axis = &p.sweep;
    let mut columns = vec![sweep.param.column()];
    if let Some(s) = &p.series {
        columns.push(s.param.column());
    }
    let mc = spec.monte_carlo && plan.trials > 0;
    let mut any_feasible = None;
    match p.kind {
        Kind::Connection { .. } => columns.extend(["p_co_analytic", "p_co_lower", "p_co_mc", "ci"]),
        Kind::Secrecy { .. } => columns.extend(["p_so_upper", "p_so_lower", "p_so_mc", "ci"]),
        Kind::Throughput { .. } | Kind::EdgeThroughput { .. } => {
            columns.extend(["beta_bs_star", "beta_e_star", "mu", "p_us", "feasible"]);
            any_feasible = Some(false);
        }
    }
    let mut rows = Vec::new();
    let mut seconds = Vec::new();
    for (block, series) in plan.blocks().into_iter().enumerate() {
        let start = Instant::now();
        let block_rows = evaluate_block(&plan, block, series, mc)?;
        if let Some(flag) = any_feasible.as_mut() {
            *flag |= block_rows.iter().any(|r| r.last() == Some(&Cell::Flag(true)));
        }
        rows.extend(block_rows);
        seconds.push(start.elapsed().as_secs_f64());
    }
    Ok(Table {
        columns,
        rows,
        seconds,
        any_feasible,
    })
}

fn evaluate_block(plan: &Plan, block: usize, series: Option<f64>, mc: bool) -> Result<Vec<Vec<Cell>>> {
    let p = &plan.preset;
    let points = &p.sweep.values;
    let threshold_swept = matches!(p.sweep.param, Param::BetaBsDb | Param::BetaEDb);
    match p.kind {
        Kind::Connection { r, .. } if threshold_swept => {
            let cfg = plan.config(series, points[0])?;
            let model = ConnectionModel::new(&estimation_quality(&cfg, r)?, &cfg)?;
            let betas: Vec<f64> = points.iter().map(|&x| db(x)).collect();
            let analytic: Vec<(f64, f64)> = betas
                .par_iter()
                .map(|&b| Ok((model.outage(b)?, model.outage_lower_bound(b)?)))
                .collect::<Result<_>>()?;
            let sims = if mc {
                let seed = derive_seed(plan.seed, block, 0);
                Some(simulate_connection_outage_sweep(
                    &cfg,
                    r,
                    &betas,
                    plan.trials,
                    seed,
                    &plan.opts,
                )?)
            } else {
                None
            };
            Ok(points
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    let mut row = plan.lead(series, x);
                    row.extend([Cell::Value(analytic[i].0), Cell::Value(analytic[i].1)]);
                    row.extend(mc_cells(sims.as_ref().map(|s| &s[i])));
                    row
                })
                .collect())
        }
        Kind::Connection { r, beta_bs_db } => points
            .par_iter()
            .enumerate()
            .map(|(i, &x)| {
                let cfg = plan.config(series, x)?;
                let ctx = estimation_quality(&cfg, r)?;
                let b = db(beta_bs_db);
                let mut row = plan.lead(series, x);
                row.push(Cell::Value(connection_outage(&ctx, &cfg, b)?));
                row.push(Cell::Value(connection_outage_lower_bound(&ctx, &cfg, b)?));
                let sim = if mc {
                    let seed = derive_seed(plan.seed, block, i);
                    Some(simulate_connection_outage_sweep(&cfg, r, &[b], plan.trials, seed, &plan.opts)?[0])
                } else {
                    None
                };
                row.extend(mc_cells(sim.as_ref()));
                Ok(row)
            })
            .collect(),
        Kind::Secrecy { .. } if threshold_swept => {
            let cfg = plan.config(series, points[0])?;
            let betas: Vec<f64> = points.iter().map(|&x| db(x)).collect();
            let analytic: Vec<(f64, f64)> = betas
                .par_iter()
                .map(|&b| Ok((secrecy_outage_upper(&cfg, b)?, secrecy_outage_lower(&cfg, b)?)))
                .collect::<Result<_>>()?;
            let sims = if mc {
                let seed = derive_seed(plan.seed, block, 0);
                Some(simulate_secrecy_outage_sweep(
                    &cfg,
                    &betas,
                    plan.trials,
                    seed,
                    &plan.opts,
                )?)
            } else {
                None
            };
            Ok(points
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    let mut row = plan.lead(series, x);
                    row.extend([Cell::Value(analytic[i].0), Cell::Value(analytic[i].1)]);
                    row.extend(mc_cells(sims.as_ref().map(|s| &s[i])));
                    row
                })
                .collect())
        }
        Kind::Secrecy { beta_e_db } => points
            .par_iter()
            .enumerate()
            .map(|(i, &x)| {
                let cfg = plan.config(series, x)?;
                let b = db(beta_e_db);
                let mut row = plan.lead(series, x);
                row.push(Cell::Value(secrecy_outage_upper(&cfg, b)?));
                row.push(Cell::Value(secrecy_outage_lower(&cfg, b)?));
                let sim = if mc {
                    let seed = derive_seed(plan.seed, block, i);
                    Some(simulate_secrecy_outage_sweep(&cfg, &[b], plan.trials, seed, &plan.opts)?[0])
                } else {
                    None
                };
                row.extend(mc_cells(sim.as_ref()));
                Ok(row)
            })
            .collect(),
        Kind::Throughput { constraints } if p.sweep.param == Param::Phi => {
            let cfg = plan.config(series, points[0])?;
            let sols = throughput_over_phi(&cfg, &constraints, points)?;
            Ok(points
                .iter()
                .zip(&sols)
                .map(|(&x, s)| {
                    let mut row = plan.lead(series, x);
                    row.extend(throughput_cells(s));
                    row
                })
                .collect())
        }
        Kind::Throughput { constraints } => points
            .par_iter()
            .map(|&x| {
                let cfg = plan.config(series, x)?;
                let mut row = plan.lead(series, x);
                row.extend(throughput_cells(&secrecy_throughput(&cfg, &constraints)?));
                Ok(row)
            })
            .collect(),
        Kind::EdgeThroughput { constraints, edge } => points
            .par_iter()
            .map(|&x| {
                let cfg = plan.config(series, x)?;
                let r = cfg.r_c * (1.0 - edge);
                let mut row = plan.lead(series, x);
                row.extend(throughput_cells(&secrecy_throughput_at(&cfg, &constraints, r)?));
                Ok(row)
            })
            .collect(),
    }
}

/// Gnuplot script plotting every value column of `table` against the sweep variable.
pub fn gnuplot_script(spec: &ExperimentSpec, table: &Table, csv_name: &str) -> String {
    let p = preset(spec.experiment);
    let x = p.sweep.param.column();
    let mut s = String::new();
    let _ = writeln!(s, "# {}: {}", spec.experiment.name(), spec.experiment.summary());
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set datafile columnheaders");
    let _ = writeln!(s, "set xlabel '{x}'");
    if p.sweep.param.log_axis() {
        let _ = writeln!(s, "set logscale x");
    }
    let _ = writeln!(s, "set key outside");
    let lead = if p.series.is_some() { 2 } else { 1 };
    let ys: Vec<&str> = table.columns[lead..]
        .iter()
        .copied()
        .filter(|c| !matches!(*c, "ci" | "feasible" | "p_us"))
        .collect();
    let mut terms = Vec::new();
    let series: Vec<Option<f64>> = match &p.series {
        Some(a) => a.values.iter().map(|&v| Some(v)).collect(),
        None => vec![None],
    };
    for sv in &series {
        for y in &ys {
            let style = if y.ends_with("_mc") { "points" } else { "lines" };
            let term = match (sv, &p.series) {
                (Some(v), Some(a)) => format!(
                    "'{csv_name}' using (column('{col}') == {v:e} ? column('{x}') : NaN):(column('{y}')) with {style} title '{y}, {col}={v}'",
                    col = a.param.column()
                ),
                _ => format!("'{csv_name}' using (column('{x}')):(column('{y}')) with {style} title '{y}'"),
            };
            terms.push(term);
        }
    }
    let _ = writeln!(s, "plot {}", terms.join(", \\\n     "));
    s
}

/// Evaluates `spec` and writes the CSV, its gnuplot script and a timing sidecar.
///
/// Wall-clock times live in the sidecar so that the CSV itself depends only
/// on the spec and seed.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<RunSummary> {
    let table = evaluate(spec)?;
    let csv = spec.out_path.clone();
    let gnuplot = csv.with_extension("gp");
    let timing = csv.with_extension("timing");
    let csv_name = csv
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    write(&csv, &table.to_csv())?;
    write(&gnuplot, &gnuplot_script(spec, &table, &csv_name))?;
    let mut t = String::from("block,seconds\n");
    for (i, secs) in table.seconds.iter().enumerate() {
        let _ = writeln!(t, "{i},{secs:.6}");
    }
    let _ = writeln!(t, "total,{:.6}", table.seconds.iter().sum::<f64>());
    write(&timing, &t)?;
    Ok(RunSummary {
        csv,
        gnuplot,
        timing,
        rows: table.rows.len(),
        infeasible_only: table.any_feasible == Some(false),
    })
}
