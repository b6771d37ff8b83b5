use clap::Args;
use emergence::measures::{Color, Ratio};
use emergence::rbn::{
    coupled_autopoiesis, measure_ensemble, AAggregation, CoupledConfig, EnsembleConfig, Summary,
};
use serde::Serialize;

use super::kebab;
use crate::error::CliResult;
use crate::output::{num, OutArgs, Report, Table};

/// Defaults follow the full protocol (N=100, 1000 networks, 1000+1000
/// steps); pass smaller values for desk-scale runs.
#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// In-degrees to sweep.
    #[arg(long, value_delimiter = ',', default_value = "0,1,2,3,4,5")]
    pub k: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    pub replicates: usize,
    #[arg(long, default_value_t = 1000)]
    pub transient: usize,
    #[arg(long, default_value_t = 1000)]
    pub record: usize,
    /// Bit-widths of the temporal regrouping; base `2^b`.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub bits: Vec<u32>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutArgs,
}

pub fn sweep(args: &SweepArgs) -> CliResult<Report> {
    let cfg = EnsembleConfig {
        n: args.n,
        ks: args.k.clone(),
        replicates: args.replicates,
        transient: args.transient,
        record: args.record,
        bits: args.bits.clone(),
        seed: args.seed,
    };
    let points = measure_ensemble(&cfg)?;
    let mut table = Table::new(
        ".csv",
        &[
            "K", "bits", "measure", "min", "q1", "median", "q3", "max", "mean",
        ],
    );
    for p in &points {
        for (name, s) in [("E", &p.e), ("S", &p.s), ("C", &p.c), ("H", &p.h)] {
            let Summary {
                min,
                q1,
                median,
                q3,
                max,
                mean,
            } = *s;
            let mut row = vec![p.k.to_string(), p.bits.to_string(), name.to_string()];
            row.extend([min, q1, median, q3, max, mean].map(num));
            table.push(row);
        }
    }
    Ok(Report::new(points, vec![table])?.with_seed(args.seed))
}

#[derive(Debug, Args, Serialize)]
pub struct CoupledArgs {
    /// Internal network size.
    #[arg(long, default_value_t = 32)]
    pub n_i: usize,
    /// Environment network size.
    #[arg(long, default_value_t = 96)]
    pub n_e: usize,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
    pub k_i: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
    pub k_e: Vec<usize>,
    #[arg(long, default_value_t = 50)]
    pub replicates: usize,
    #[arg(long, default_value_t = 1000)]
    pub transient: usize,
    #[arg(long, default_value_t = 1000)]
    pub record: usize,
    /// `mean-of-ratios` or `ratio-of-means`.
    #[arg(long, default_value = "mean-of-ratios", value_parser = kebab::<AAggregation>)]
    pub aggregation: AAggregation,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutArgs,
}

pub fn coupled(args: &CoupledArgs) -> CliResult<Report> {
    let cfg = CoupledConfig {
        n_i: args.n_i,
        n_e: args.n_e,
        k_i: args.k_i.clone(),
        k_e: args.k_e.clone(),
        replicates: args.replicates,
        transient: args.transient,
        record: args.record,
        aggregation: args.aggregation,
        seed: args.seed,
    };
    let cells = coupled_autopoiesis(&cfg)?;
    let mut table = Table::new(
        ".csv",
        &[
            "K_i",
            "K_e",
            "A",
            "C_internal",
            "C_external",
            "degenerate",
            "color",
        ],
    );
    for c in &cells {
        let color = match c.a {
            Ratio::Infinite => Some(Color::Blue),
            Ratio::Finite(v) if v > 1.0 => Some(Color::Blue),
            Ratio::Finite(v) if v < 1.0 => Some(Color::Red),
            _ => None,
        };
        table.push(vec![
            c.k_i.to_string(),
            c.k_e.to_string(),
            c.a.to_string(),
            num(c.c_internal),
            num(c.c_external),
            c.degenerate.to_string(),
            color.map(|c| c.name().to_string()).unwrap_or_default(),
        ]);
    }
    Ok(Report::new(cells, vec![table])?.with_seed(args.seed))
}
