use clap::Args;
use emergence::eca::{measure_rule, rule_table, EcaConfig, InitMode};
use rayon::prelude::*;
use serde::Serialize;

use super::kebab;
use crate::error::CliResult;
use crate::output::{num, opt, OutArgs, Report, Table};

#[derive(Debug, Args, Serialize)]
pub struct ProfileArgs {
    /// Wolfram rule numbers, 0 to 255.
    #[arg(long, value_delimiter = ',', required = true)]
    pub rules: Vec<u32>,
    #[arg(long, default_value_t = 256)]
    pub width: usize,
    #[arg(long, default_value_t = 4096)]
    pub transient: usize,
    #[arg(long, default_value_t = 4096)]
    pub record: usize,
    /// Bit-widths of the temporal regrouping; base `2^b`.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
    pub bits: Vec<u32>,
    #[arg(long, default_value_t = 50)]
    pub replicates: usize,
    /// `random` or `single-center`.
    #[arg(long, default_value = "random", value_parser = kebab::<InitMode>)]
    pub init: InitMode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutArgs,
}

pub fn run(args: &ProfileArgs) -> CliResult<Report> {
    let rules = args
        .rules
        .iter()
        .map(|&r| rule_table(r))
        .collect::<Result<Vec<_>, _>>()?;
    let cfg = EcaConfig {
        width: args.width,
        transient: args.transient,
        record: args.record,
        bits: args.bits.clone(),
        replicates: args.replicates,
        init: args.init,
        seed: args.seed,
    };
    let profiles: Vec<_> = rules
        .par_iter()
        .map(|&rule| measure_rule(rule, &cfg))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    let mut table = Table::new(
        ".csv",
        &["rule", "bits", "base", "E", "S", "C", "H", "H_deviation"],
    );
    for p in &profiles {
        table.push(vec![
            p.rule.to_string(),
            p.bits.to_string(),
            p.base.to_string(),
            num(p.measures.e),
            num(p.measures.s),
            num(p.measures.c),
            opt(p.measures.h),
            num(p.h_deviation),
        ]);
    }
    Ok(Report::new(profiles, vec![table])?.with_seed(args.seed))
}
