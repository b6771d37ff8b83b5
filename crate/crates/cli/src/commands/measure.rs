use std::path::PathBuf;

use clap::Args;
use emergence::discretize::{StateMatrix, SymbolSeries};
use emergence::ecology::{discretize_variable, ReportConfig};
use emergence::measures::{
    classify, homeostasis, multiscale_matrix_profile, variable_homeostasis, EvennessCases,
    MeanMeasures, MeasureSet, ScaleMeanMeasures,
};
use emergence::Error;
use serde::Serialize;

use super::read_dataset;
use crate::error::CliResult;
use crate::output::{num, opt, OutArgs, Report, Table};

#[derive(Debug, Args, Serialize)]
pub struct MeasureArgs {
    /// CSV table, one row per time step and one column per variable.
    #[arg(long, short)]
    pub input: PathBuf,
    /// Number of classes each column is discretized into.
    #[arg(long, default_value_t = 10)]
    pub beta: usize,
    /// Read the values as symbols `0..beta` instead of rescaling each column
    /// over its own range.
    #[arg(long)]
    pub symbols: bool,
    /// Bit-widths for a multi-scale profile of the table (needs `--beta 2`).
    /// A trailing remainder shorter than a window is discarded.
    #[arg(long, value_delimiter = ',')]
    pub scales: Vec<u32>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Serialize)]
struct Column {
    name: String,
    unit: Option<String>,
    range: (f64, f64),
    degenerate: bool,
    measures: MeasureSet,
    #[serde(rename = "HmV")]
    hmv: f64,
    #[serde(rename = "HmV_normalized")]
    hmv_normalized: f64,
}

#[derive(Serialize)]
struct MeasureReport {
    beta: usize,
    rows: usize,
    columns: Vec<Column>,
    mean: MeanMeasures,
    category: emergence::measures::Category,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    scales: Vec<ScaleMeanMeasures>,
}

fn as_symbols(values: &[f64], beta: usize) -> CliResult<SymbolSeries> {
    let symbols = values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            if v.fract() == 0.0 && v >= 0.0 && v < beta as f64 {
                Ok(v as u32)
            } else {
                Err(Error::InvalidValue(format!(
                    "value {v} at row {} is not a symbol in 0..{beta}",
                    i + 2
                )))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SymbolSeries::new(symbols, beta)?)
}

pub fn run(args: &MeasureArgs) -> CliResult<Report> {
    let ds = read_dataset(&args.input)?;
    let cfg = ReportConfig {
        beta: args.beta,
        ..ReportConfig::default()
    };
    let mut columns = Vec::new();
    let mut series = Vec::new();
    for var in ds.variables() {
        let (s, degenerate) = if args.symbols {
            (as_symbols(&var.values, args.beta)?, false)
        } else {
            let d = discretize_variable(var, &cfg)?;
            (d.series, d.degenerate)
        };
        let measures = if degenerate {
            MeasureSet::from_emergence(0.0)?
        } else {
            MeasureSet::of_series(&s)?
        }
        .categorized();
        let hmv = variable_homeostasis(&s, EvennessCases::ClassCount)?;
        columns.push(Column {
            name: var.name.clone(),
            unit: var.unit.clone(),
            range: (var.min, var.max),
            degenerate,
            measures,
            hmv: hmv.hmv,
            hmv_normalized: hmv.hmv_normalized,
        });
        series.push(s);
    }
    let matrix = StateMatrix::from_columns(&series)?;
    let sets: Vec<MeasureSet> = columns.iter().map(|c| c.measures).collect();
    let mut mean = MeanMeasures::from_sets(&sets)?;
    if matrix.rows() >= 2 {
        mean.h = Some(homeostasis(&matrix)?);
    }
    let scales = if args.scales.is_empty() {
        Vec::new()
    } else {
        multiscale_matrix_profile(&matrix, &args.scales)?
    };

    let mut table = Table::new(
        ".csv",
        &[
            "variable",
            "unit",
            "E",
            "S",
            "C",
            "category",
            "color",
            "HmV",
            "HmV_normalized",
            "degenerate",
        ],
    );
    for c in &columns {
        let cat = c.measures.category().expect("categorized above");
        table.push(vec![
            c.name.clone(),
            c.unit.clone().unwrap_or_default(),
            num(c.measures.e()),
            num(c.measures.s()),
            num(c.measures.c()),
            cat.label().into(),
            cat.color().name().into(),
            num(c.hmv),
            num(c.hmv_normalized),
            c.degenerate.to_string(),
        ]);
    }
    let mut tables = vec![table];
    if !scales.is_empty() {
        let mut t = Table::new(".scales.csv", &["bits", "base", "E", "S", "C", "H"]);
        for p in &scales {
            t.push(vec![
                p.bits.to_string(),
                p.base.to_string(),
                num(p.measures.e),
                num(p.measures.s),
                num(p.measures.c),
                opt(p.measures.h),
            ]);
        }
        tables.push(t);
    }
    let report = MeasureReport {
        beta: args.beta,
        rows: matrix.rows(),
        category: classify(mean.c.clamp(0.0, 1.0))?,
        columns,
        mean,
        scales,
    };
    Report::new(report, tables)
}
