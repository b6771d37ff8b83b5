//! Elementary cellular automata on a periodic ring.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discretize::StateMatrix;
use crate::error::{Error, Result};
use crate::measures::{multiscale_matrix_profile, MeanMeasures, ScaleMeanMeasures};
use crate::rng::{derived, label};

/// Rules listed in the classic four-class comparison tables.
pub const TABLED_RULES: [u8; 18] = [
    0, 8, 32, 40, 128, 1, 2, 3, 4, 5, 41, 54, 106, 110, 18, 22, 45, 161,
];

/// Outputs indexed by the neighborhood `(left, self, right)` read as a 3-bit
/// number, so `table[7]` is the output for `111`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EcaRule {
    number: u8,
    table: [bool; 8],
}

impl EcaRule {
    pub fn new(number: u8) -> Self {
        let mut table = [false; 8];
        for (i, slot) in table.iter_mut().enumerate() {
            *slot = (number >> i) & 1 == 1;
        }
        Self { number, table }
    }

    pub fn number(&self) -> u8 {
        self.number
    }

    pub fn table(&self) -> &[bool; 8] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, left: bool, center: bool, right: bool) -> bool {
        self.table[((left as usize) << 2) | ((center as usize) << 1) | right as usize]
    }
}

/// Decodes a rule number, rejecting anything outside `0..=255`.
pub fn rule_table(number: u32) -> Result<EcaRule> {
    u8::try_from(number)
        .map(EcaRule::new)
        .map_err(|_| Error::param(format!("rule {number} is outside 0..=255")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitMode {
    /// Independent fair coin per cell.
    #[default]
    Random,
    /// One live cell at index `width / 2`.
    SingleCenter,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Eca {
    rule: EcaRule,
    cells: Vec<bool>,
    #[serde(skip)]
    scratch: Vec<bool>,
}

impl Eca {
    pub fn new(rule: EcaRule, cells: Vec<bool>) -> Result<Self> {
        if cells.len() < 3 {
            return Err(Error::param(format!(
                "ring width {} is below the minimum of 3",
                cells.len()
            )));
        }
        let scratch = vec![false; cells.len()];
        Ok(Self {
            rule,
            cells,
            scratch,
        })
    }

    pub fn with_init(
        rule: EcaRule,
        width: usize,
        init: InitMode,
        rng: &mut impl Rng,
    ) -> Result<Self> {
        let cells = match init {
            InitMode::Random => (0..width).map(|_| rng.gen::<bool>()).collect(),
            InitMode::SingleCenter => (0..width).map(|i| i == width / 2).collect(),
        };
        Self::new(rule, cells)
    }

    pub fn rule(&self) -> EcaRule {
        self.rule
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    pub fn width(&self) -> usize {
        self.cells.len()
    }

    pub fn step(&mut self) {
        let n = self.cells.len();
        let c = &self.cells;
        for (i, slot) in self.scratch.iter_mut().enumerate() {
            let left = c[(i + n - 1) % n];
            let right = c[(i + 1) % n];
            *slot = self.rule.apply(left, c[i], right);
        }
        std::mem::swap(&mut self.cells, &mut self.scratch);
    }

    /// The initial row followed by `steps` evolved rows.
    pub fn evolve(&mut self, steps: usize) -> StateMatrix {
        let mut rows = Vec::with_capacity(steps + 1);
        rows.push(self.cells.clone());
        for _ in 0..steps {
            self.step();
            rows.push(self.cells.clone());
        }
        StateMatrix::from_bool_rows(&rows).expect("rows share the ring width")
    }

    /// Discards `transient` steps and returns the next `record` rows.
    pub fn run(&mut self, transient: usize, record: usize) -> StateMatrix {
        for _ in 0..transient {
            self.step();
        }
        let mut rows = Vec::with_capacity(record);
        for t in 0..record {
            if t > 0 {
                self.step();
            }
            rows.push(self.cells.clone());
        }
        if rows.is_empty() {
            return StateMatrix::empty(self.width(), 2);
        }
        StateMatrix::from_bool_rows(&rows).expect("rows share the ring width")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EcaConfig {
    pub width: usize,
    pub transient: usize,
    pub record: usize,
    pub bits: Vec<u32>,
    pub replicates: usize,
    pub init: InitMode,
    pub seed: u64,
}

impl Default for EcaConfig {
    fn default() -> Self {
        Self {
            width: 256,
            transient: 1 << 12,
            record: 1 << 12,
            bits: vec![1, 2, 4, 8],
            replicates: 50,
            init: InitMode::Random,
            seed: 0,
        }
    }
}

/// Replicate-averaged measures of one rule at one scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RuleProfile {
    pub rule: u8,
    pub bits: u32,
    pub base: usize,
    pub measures: MeanMeasures,
    /// `|H - 2^-b|`, the distance from the uncorrelated baseline.
    pub h_deviation: f64,
}

/// Per-cell temporal E/S/C averaged over cells, H over rows, each then
/// averaged over replicates.
pub fn measure_rule(rule: EcaRule, cfg: &EcaConfig) -> Result<Vec<RuleProfile>> {
    if cfg.replicates == 0 {
        return Err(Error::param("replicates must be positive"));
    }
    if cfg.bits.is_empty() {
        return Err(Error::param("at least one scale is required"));
    }
    let per_rep = (0..cfg.replicates)
        .into_par_iter()
        .map(|rep| {
            let mut rng = derived(cfg.seed, &[label::ECA, rule.number() as u64, rep as u64]);
            let mut ca = Eca::with_init(rule, cfg.width, cfg.init, &mut rng)?;
            multiscale_matrix_profile(&ca.run(cfg.transient, cfg.record), &cfg.bits)
        })
        .collect::<Result<Vec<Vec<ScaleMeanMeasures>>>>()?;

    let n = cfg.replicates as f64;
    Ok(cfg
        .bits
        .iter()
        .enumerate()
        .map(|(bi, &b)| {
            let mean = |f: fn(&MeanMeasures) -> f64| {
                per_rep.iter().map(|p| f(&p[bi].measures)).sum::<f64>() / n
            };
            let h = mean(|m| m.h.unwrap_or(f64::NAN));
            RuleProfile {
                rule: rule.number(),
                bits: b,
                base: 1 << b,
                measures: MeanMeasures {
                    e: mean(|m| m.e),
                    s: mean(|m| m.s),
                    c: mean(|m| m.c),
                    h: Some(h),
                },
                h_deviation: (h - (-(b as f64)).exp2()).abs(),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn rule_30_table() {
        let r = rule_table(30).unwrap();
        // neighborhoods 111, 110, ..., 000
        let outputs: Vec<bool> = (0..8).rev().map(|i| r.table()[i]).collect();
        assert_eq!(outputs, ring("00011110"));
    }

    #[test]
    fn rule_204_is_identity() {
        let r = rule_table(204).unwrap();
        for i in 0..8 {
            assert_eq!(r.table()[i], (i >> 1) & 1 == 1);
        }
        assert!(rule_table(0).unwrap().table().iter().all(|&b| !b));
    }

    #[test]
    fn rule_out_of_range() {
        assert!(matches!(rule_table(256), Err(Error::Parameter(_))));
    }

    #[test]
    fn rule_30_single_seed_evolution() {
        let mut ca = Eca::new(rule_table(30).unwrap(), ring("0001000")).unwrap();
        let m = ca.evolve(2);
        assert_eq!(m.rows(), 3);
        assert_eq!(m.row(1), &[0, 0, 1, 1, 1, 0, 0]);
        assert_eq!(m.row(2), &[0, 1, 1, 0, 0, 1, 0]);
    }

    #[test]
    fn single_center_init() {
        let mut rng = derived(0, &[]);
        let ca = Eca::with_init(EcaRule::new(30), 7, InitMode::SingleCenter, &mut rng).unwrap();
        assert_eq!(ca.cells(), &ring("0001000")[..]);
    }

    #[test]
    fn width_below_three_rejected() {
        assert!(Eca::new(EcaRule::new(30), vec![true, false]).is_err());
    }

    #[test]
    fn rule_0_and_204_dynamics() {
        let init = ring("1011001110");
        let m = Eca::new(EcaRule::new(0), init.clone()).unwrap().evolve(5);
        assert!((1..m.rows()).all(|t| m.row(t).iter().all(|&x| x == 0)));
        let m = Eca::new(EcaRule::new(204), init).unwrap().evolve(5);
        assert!((1..m.rows()).all(|t| m.row(t) == m.row(0)));
    }

    #[test]
    fn class_one_rule_is_frozen() {
        let cfg = EcaConfig {
            width: 32,
            transient: 1,
            record: 64,
            bits: vec![1, 2, 4],
            replicates: 3,
            init: InitMode::Random,
            seed: 11,
        };
        for p in measure_rule(EcaRule::new(0), &cfg).unwrap() {
            assert_eq!(p.measures.e, 0.0);
            assert_eq!(p.measures.c, 0.0);
            assert_eq!(p.measures.s, 1.0);
            assert_eq!(p.measures.h, Some(1.0));
        }
    }
}
