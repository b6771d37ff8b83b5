use std::fs;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use emergence::traffic::{
    density_sweep, Boundary, Controller, GridConfig, IntervalMeasures, SelfOrgParams, SweepConfig,
    SweepRow,
};
use serde::{Deserialize, Serialize};

use super::kebab;
use crate::error::{CliError, CliResult};
use crate::output::{num, OutArgs, Report, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ControllerChoice {
    SelfOrg,
    GreenWave,
    Both,
}

#[derive(Debug, Args, Serialize)]
pub struct TrafficArgs {
    /// TOML file with grid and sweep settings; flags override it.
    #[arg(long, short)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "both")]
    pub controller: ControllerChoice,
    /// Target densities in `[0, 1]`.
    #[arg(long, value_delimiter = ',')]
    pub densities: Vec<f64>,
    /// `non-orientable`, `cyclic` or `helical`.
    #[arg(long, value_parser = kebab::<Boundary>)]
    pub boundary: Option<Boundary>,
    #[arg(long)]
    pub warmup: Option<u64>,
    #[arg(long)]
    pub horizon: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub out: OutArgs,
}

/// Contents of the `--config` file. Missing keys take the defaults of a
/// 10×10 grid with 40-cell blocks swept over 21 densities.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrafficFile {
    pub n_h: usize,
    pub n_v: usize,
    pub block_len: usize,
    pub boundary: Boundary,
    pub densities: Vec<f64>,
    pub warmup: u64,
    pub horizon: u64,
    pub street_probes: usize,
    pub seed: u64,
    /// Overrides the derived self-organizing parameters.
    pub self_org: Option<SelfOrgParams>,
    /// Overrides the green-wave period of `2 · block_len`.
    pub green_wave_period: Option<usize>,
}

impl Default for TrafficFile {
    fn default() -> Self {
        let sweep = SweepConfig::default();
        Self {
            n_h: sweep.grid.n_h,
            n_v: sweep.grid.n_v,
            block_len: sweep.grid.block_len,
            boundary: sweep.grid.boundary,
            densities: sweep.densities,
            warmup: sweep.warmup,
            horizon: sweep.horizon,
            street_probes: sweep.street_probes,
            seed: sweep.seed,
            self_org: None,
            green_wave_period: None,
        }
    }
}

fn load(args: &TrafficArgs) -> CliResult<TrafficFile> {
    let mut file = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            toml::from_str(&text).map_err(|e| CliError::Config {
                path: path.clone(),
                msg: e.to_string(),
            })?
        }
        None => TrafficFile::default(),
    };
    if !args.densities.is_empty() {
        file.densities = args.densities.clone();
    }
    file.boundary = args.boundary.unwrap_or(file.boundary);
    file.warmup = args.warmup.unwrap_or(file.warmup);
    file.horizon = args.horizon.unwrap_or(file.horizon);
    file.seed = args.seed.unwrap_or(file.seed);
    Ok(file)
}

fn controllers(file: &TrafficFile, choice: ControllerChoice) -> Vec<Controller> {
    let self_org = Controller::SelfOrg(
        file.self_org
            .unwrap_or_else(|| SelfOrgParams::defaults(file.block_len)),
    );
    let green_wave = Controller::GreenWave {
        period: file.green_wave_period.unwrap_or(2 * file.block_len),
    };
    match choice {
        ControllerChoice::SelfOrg => vec![self_org],
        ControllerChoice::GreenWave => vec![green_wave],
        ControllerChoice::Both => vec![self_org, green_wave],
    }
}

fn interval_row(row: &SweepRow, series: &str, m: &IntervalMeasures) -> Vec<String> {
    vec![
        row.controller.to_string(),
        num(row.target_density),
        series.to_string(),
        m.count.to_string(),
        num(m.measures.e()),
        num(m.measures.s()),
        num(m.measures.c()),
        m.degenerate.to_string(),
    ]
}

#[derive(Serialize)]
struct TrafficReport {
    config: TrafficFile,
    rows: Vec<SweepRow>,
}

pub fn run(args: &TrafficArgs) -> CliResult<Report> {
    let file = load(args)?;
    let mut rows = Vec::new();
    for controller in controllers(&file, args.controller) {
        let cfg = SweepConfig {
            grid: GridConfig {
                n_h: file.n_h,
                n_v: file.n_v,
                block_len: file.block_len,
                density: 0.0,
                boundary: file.boundary,
                controller,
            },
            densities: file.densities.clone(),
            warmup: file.warmup,
            horizon: file.horizon,
            street_probes: file.street_probes,
            seed: file.seed,
        };
        rows.extend(density_sweep(&cfg)?);
    }
    let mut curves = Table::new(
        ".csv",
        &[
            "controller",
            "target_density",
            "density",
            "v",
            "J",
            "v_opt",
            "J_opt",
            "phase",
        ],
    );
    let mut intervals = Table::new(
        ".intervals.csv",
        &[
            "controller",
            "target_density",
            "series",
            "count",
            "E",
            "S",
            "C",
            "degenerate",
        ],
    );
    for r in &rows {
        let phase = serde_json::to_value(r.stats.phase)?;
        curves.push(vec![
            r.controller.to_string(),
            num(r.target_density),
            num(r.stats.density),
            num(r.stats.v),
            num(r.stats.j),
            num(r.v_opt),
            num(r.j_opt),
            phase.as_str().unwrap_or_default().to_string(),
        ]);
        intervals.push(interval_row(r, "light", &r.stats.light));
        intervals.push(interval_row(r, "intersection", &r.stats.intersection));
        intervals.push(interval_row(r, "street", &r.stats.street));
    }
    let seed = file.seed;
    Ok(Report::new(
        TrafficReport { config: file, rows },
        vec![curves, intervals],
    )?
    .with_seed(seed))
}
