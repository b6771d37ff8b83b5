use std::path::PathBuf;

use clap::{Args, Subcommand};
use emergence::ecology::{
    analytic_emergence, component_autopoiesis, component_report, global_ranges, occupancy_curve,
    synthetic_lake, Component, ComponentReport, Dataset, LakeKind, Normalization, OccupancyConfig,
    OccupancySeries, ReportConfig,
};
use serde::Serialize;

use super::{kebab, read_dataset};
use crate::error::{CliError, CliResult};
use crate::execute;
use crate::output::{num, opt, OutArgs, Report, Stdout, Table};

#[derive(Debug, Subcommand)]
pub enum EcoCommand {
    /// Per-variable and per-component measures of a tagged table.
    Report(ReportArgs),
    /// Complexity ratio between two groups of variables.
    Autopoiesis(AutopoiesisArgs),
    /// Simulated camera-trap detections over a range of species counts.
    Occupancy(OccupancyArgs),
    /// Closed-form emergence estimate of one component.
    Analytic(AnalyticArgs),
    /// Synthetic lake year with the standard variable set.
    Synth(SynthArgs),
}

pub fn dispatch(cmd: EcoCommand) -> CliResult<()> {
    match cmd {
        EcoCommand::Report(a) => execute("eco report", &a, &a.out, report),
        EcoCommand::Autopoiesis(a) => execute("eco autopoiesis", &a, &a.out, autopoiesis),
        EcoCommand::Occupancy(a) => execute("eco occupancy", &a, &a.out, occupancy),
        EcoCommand::Analytic(a) => execute("eco analytic", &a, &a.out, analytic),
        EcoCommand::Synth(a) => execute("eco synth", &a, &a.out, synth),
    }
}

#[derive(Debug, Args, Serialize)]
pub struct ReportArgs {
    /// CSV whose headers read `TAG:Name[unit]`, with TAG one of PC, LN, Bio.
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub beta: usize,
    /// Further tables whose ranges are pooled with the input's, so that
    /// several scenarios share one normalization.
    #[arg(long, value_delimiter = ',')]
    pub pool: Vec<PathBuf>,
    #[command(flatten)]
    pub out: OutArgs,
}

fn report_config(beta: usize, ds: &Dataset, pool: &[PathBuf]) -> CliResult<ReportConfig> {
    let normalization = if pool.is_empty() {
        Normalization::PerVariable
    } else {
        let others = pool
            .iter()
            .map(|p| read_dataset(p))
            .collect::<CliResult<Vec<_>>>()?;
        let mut all: Vec<&Dataset> = vec![ds];
        all.extend(others.iter());
        Normalization::Fixed(global_ranges(&all))
    };
    Ok(ReportConfig {
        beta,
        normalization,
    })
}

pub fn report(args: &ReportArgs) -> CliResult<Report> {
    let ds = read_dataset(&args.input)?;
    let cfg = report_config(args.beta, &ds, &args.pool)?;
    let reports: Vec<ComponentReport> = Component::ALL
        .iter()
        .filter(|&&c| !ds.names_in(c).is_empty())
        .map(|&c| component_report(&ds, c, &cfg))
        .collect::<Result<_, _>>()?;
    if reports.is_empty() {
        return Err(CliError::Usage(
            "no column carries a PC, LN or Bio tag".into(),
        ));
    }
    let mut vars = Table::new(
        ".csv",
        &[
            "component",
            "variable",
            "unit",
            "min",
            "max",
            "degenerate",
            "E",
            "S",
            "C",
            "category",
            "color",
        ],
    );
    let mut summary = Table::new(
        ".summary.csv",
        &[
            "component",
            "E",
            "S",
            "C",
            "H",
            "sd_E",
            "sd_S",
            "sd_C",
            "category",
            "color",
        ],
    );
    for r in &reports {
        for v in &r.variables {
            let cat = v.measures.category().expect("reports are categorized");
            vars.push(vec![
                r.label.clone(),
                v.name.clone(),
                v.unit.clone().unwrap_or_default(),
                num(v.range.0),
                num(v.range.1),
                v.degenerate.to_string(),
                num(v.measures.e()),
                num(v.measures.s()),
                num(v.measures.c()),
                cat.label().into(),
                cat.color().name().into(),
            ]);
        }
        summary.push(vec![
            r.label.clone(),
            num(r.mean.e),
            num(r.mean.s),
            num(r.mean.c),
            opt(r.mean.h),
            num(r.sd.e),
            num(r.sd.s),
            num(r.sd.c),
            r.category.label().into(),
            r.category.color().name().into(),
        ]);
    }
    for r in &reports {
        for w in &r.warnings {
            eprintln!("warning: {}: {w}", r.label);
        }
    }
    Report::new(reports, vec![vars, summary])
}

#[derive(Debug, Args, Serialize)]
pub struct AutopoiesisArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    /// Variables forming the system.
    #[arg(long, value_delimiter = ',', required = true)]
    pub system: Vec<String>,
    /// Variables forming its environment.
    #[arg(long, value_delimiter = ',', required = true)]
    pub environment: Vec<String>,
    #[arg(long, default_value_t = 10)]
    pub beta: usize,
    #[arg(long, value_delimiter = ',')]
    pub pool: Vec<PathBuf>,
    #[command(flatten)]
    pub out: OutArgs,
}

pub fn autopoiesis(args: &AutopoiesisArgs) -> CliResult<Report> {
    let ds = read_dataset(&args.input)?;
    let cfg = report_config(args.beta, &ds, &args.pool)?;
    let system: Vec<&str> = args.system.iter().map(String::as_str).collect();
    let env: Vec<&str> = args.environment.iter().map(String::as_str).collect();
    let r = component_autopoiesis(&ds, &system, &env, &cfg)?;
    let mut table = Table::new(".csv", &["A", "C_system", "C_environment", "color"]);
    table.push(vec![
        r.a.to_string(),
        num(r.c_system),
        num(r.c_environment),
        r.color.map(|c| c.name().to_string()).unwrap_or_default(),
    ]);
    Report::new(r, vec![table])
}

#[derive(Debug, Args, Serialize)]
pub struct OccupancyArgs {
    /// Species counts to simulate.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "10,20,30,40,50,60,70,80,90,100"
    )]
    pub species: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    pub sites: usize,
    #[arg(long, default_value_t = 1000)]
    pub iterations: usize,
    #[arg(long, default_value_t = 0.1)]
    pub psi_min: f64,
    #[arg(long, default_value_t = 0.9)]
    pub psi_max: f64,
    #[arg(long, default_value_t = 0.1)]
    pub p_min: f64,
    #[arg(long, default_value_t = 0.9)]
    pub p_max: f64,
    /// Sampling occasions per site and iteration.
    #[arg(long, default_value_t = 1)]
    pub visits: usize,
    /// Use the number of sites as the number of detection trials.
    #[arg(long)]
    pub literal_sites: bool,
    /// `detected-counts` or `presence`.
    #[arg(long, default_value = "detected-counts", value_parser = kebab::<OccupancySeries>)]
    pub series: OccupancySeries,
    #[arg(long, default_value_t = 10)]
    pub beta: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutArgs,
}

pub fn occupancy(args: &OccupancyArgs) -> CliResult<Report> {
    let cfg = OccupancyConfig {
        sites: args.sites,
        species: 1,
        iterations: args.iterations,
        psi_range: (args.psi_min, args.psi_max),
        p_range: (args.p_min, args.p_max),
        visits: args.visits,
        literal_sites: args.literal_sites,
        series: args.series,
        beta: args.beta,
        seed: args.seed,
    };
    let results = occupancy_curve(&cfg, &args.species)?;
    let mut table = Table::new(".csv", &["species", "E", "S", "C", "sd_E", "sd_S", "sd_C"]);
    let mut sites = Table::new(
        ".sites.csv",
        &["species", "site", "E", "S", "C", "degenerate"],
    );
    for r in &results {
        table.push(vec![
            r.species.to_string(),
            num(r.mean.e),
            num(r.mean.s),
            num(r.mean.c),
            num(r.sd.e),
            num(r.sd.s),
            num(r.sd.c),
        ]);
        for s in &r.sites {
            sites.push(vec![
                r.species.to_string(),
                s.site.to_string(),
                num(s.measures.e),
                num(s.measures.s),
                num(s.measures.c),
                s.degenerate.to_string(),
            ]);
        }
    }
    Ok(Report::new(results, vec![table, sites])?.with_seed(args.seed))
}

#[derive(Debug, Args, Serialize)]
pub struct AnalyticArgs {
    /// `PC`, `LN` or `Bio`.
    #[arg(long, value_parser = |s: &str| s.parse::<Component>())]
    pub component: Component,
    /// Self-organization, in (0, 1].
    #[arg(long)]
    pub s: f64,
    /// Autopoiesis, at least 0.
    #[arg(long)]
    pub a: f64,
    /// Homeostasis, in (0, 1].
    #[arg(long)]
    pub h: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Serialize)]
struct AnalyticReport {
    component: Component,
    #[serde(rename = "S")]
    s: f64,
    #[serde(rename = "A")]
    a: f64,
    #[serde(rename = "H")]
    h: f64,
    #[serde(rename = "E")]
    e: f64,
}

pub fn analytic(args: &AnalyticArgs) -> CliResult<Report> {
    let e = analytic_emergence(args.component, args.s, args.a, args.h)?;
    let mut table = Table::new(".csv", &["component", "S", "A", "H", "E"]);
    table.push(vec![
        args.component.tag().into(),
        num(args.s),
        num(args.a),
        num(args.h),
        num(e),
    ]);
    Report::new(
        AnalyticReport {
            component: args.component,
            s: args.s,
            a: args.a,
            h: args.h,
            e,
        },
        vec![table],
    )
}

#[derive(Debug, Args, Serialize)]
pub struct SynthArgs {
    /// `arctic-like` or `tropic-like`.
    #[arg(long, default_value = "arctic-like", value_parser = kebab::<LakeKind>)]
    pub kind: LakeKind,
    #[arg(long, default_value_t = 365)]
    pub days: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Serialize)]
struct SynthSummary {
    kind: LakeKind,
    days: usize,
    variables: Vec<String>,
}

pub fn synth(args: &SynthArgs) -> CliResult<Report> {
    let ds = synthetic_lake(args.kind, args.days, args.seed)?;
    let header: Vec<String> = ds.variables().iter().map(|v| v.header()).collect();
    let mut table = Table::new(".csv", &header);
    for t in 0..ds.len() {
        table.push(ds.variables().iter().map(|v| num(v.values[t])).collect());
    }
    let mut report = Report::new(
        SynthSummary {
            kind: args.kind,
            days: args.days,
            variables: header,
        },
        vec![table],
    )?;
    report.stdout = Stdout::FirstTable;
    Ok(report.with_seed(args.seed))
}
