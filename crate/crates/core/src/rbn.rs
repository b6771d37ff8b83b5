//! Classical synchronous random Boolean networks.
//!
//! Every node has exactly `K` distinct inputs (a node may read itself) and a
//! random truth table of `2^K` entries. Networks are fully determined by the
//! seed they were generated from.

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discretize::StateMatrix;
use crate::error::{Error, Result};
use crate::measures::{complexity_of, emergence, multiscale_matrix_profile, Ratio};
use crate::rng::{derived, label, SimRng};

/// Largest supported in-degree (truth tables have `2^K` entries).
pub const MAX_K: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rbn {
    n: usize,
    k: usize,
    /// `inputs[i*k + j]` is the j-th input of node i, most significant first.
    inputs: Vec<u32>,
    /// `tables[i << k | idx]` is node i's output for input pattern idx.
    tables: Vec<bool>,
    state: Vec<bool>,
    scratch: Vec<bool>,
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::param("network needs at least one node"));
    }
    if k > n {
        return Err(Error::param(format!("K = {k} exceeds N = {n}")));
    }
    if k > MAX_K {
        return Err(Error::param(format!("K = {k} exceeds the maximum {MAX_K}")));
    }
    Ok(())
}

impl Rbn {
    /// Random network drawn from `rng`.
    pub fn generate_with(n: usize, k: usize, rng: &mut impl Rng) -> Result<Self> {
        check_nk(n, k)?;
        let mut inputs = Vec::with_capacity(n * k);
        for _ in 0..n {
            inputs.extend(sample(rng, n, k).into_iter().map(|j| j as u32));
        }
        let tables = (0..n << k).map(|_| rng.gen::<bool>()).collect();
        let state = (0..n).map(|_| rng.gen::<bool>()).collect();
        Ok(Self {
            n,
            k,
            inputs,
            tables,
            state,
            scratch: vec![false; n],
        })
    }

    pub fn generate(n: usize, k: usize, seed: u64) -> Result<Self> {
        Self::generate_with(n, k, &mut derived(seed, &[label::RBN, n as u64, k as u64]))
    }

    /// Network with explicit wiring, tables and initial state.
    pub fn from_parts(
        k: usize,
        inputs: Vec<Vec<usize>>,
        tables: Vec<Vec<bool>>,
        state: Vec<bool>,
    ) -> Result<Self> {
        let n = state.len();
        check_nk(n, k)?;
        if inputs.len() != n || tables.len() != n {
            return Err(Error::Dimension(format!(
                "{} input lists and {} tables for {n} nodes",
                inputs.len(),
                tables.len()
            )));
        }
        let mut flat_inputs = Vec::with_capacity(n * k);
        for (i, inp) in inputs.iter().enumerate() {
            if inp.len() != k {
                return Err(Error::Dimension(format!(
                    "node {i} has {} inputs, expected {k}",
                    inp.len()
                )));
            }
            if let Some(&bad) = inp.iter().find(|&&j| j >= n) {
                return Err(Error::Index { index: bad, len: n });
            }
            flat_inputs.extend(inp.iter().map(|&j| j as u32));
        }
        let mut flat_tables = Vec::with_capacity(n << k);
        for (i, t) in tables.iter().enumerate() {
            if t.len() != 1 << k {
                return Err(Error::Dimension(format!(
                    "node {i} table has {} entries, expected {}",
                    t.len(),
                    1usize << k
                )));
            }
            flat_tables.extend_from_slice(t);
        }
        Ok(Self {
            n,
            k,
            inputs: flat_inputs,
            tables: flat_tables,
            state,
            scratch: vec![false; n],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn state(&self) -> &[bool] {
        &self.state
    }

    pub fn set_state(&mut self, state: &[bool]) -> Result<()> {
        if state.len() != self.n {
            return Err(Error::Dimension(format!(
                "state of length {} for {} nodes",
                state.len(),
                self.n
            )));
        }
        self.state.copy_from_slice(state);
        Ok(())
    }

    pub fn inputs_of(&self, i: usize) -> &[u32] {
        &self.inputs[i * self.k..(i + 1) * self.k]
    }

    pub fn table_of(&self, i: usize) -> &[bool] {
        &self.tables[i << self.k..(i + 1) << self.k]
    }

    /// Output of node `i` given a full network state.
    fn eval(&self, i: usize, state: &[bool]) -> bool {
        let idx = self
            .inputs_of(i)
            .iter()
            .fold(0usize, |acc, &j| (acc << 1) | state[j as usize] as usize);
        self.tables[(i << self.k) | idx]
    }

    /// One synchronous update.
    pub fn step(&mut self) {
        let mut next = std::mem::take(&mut self.scratch);
        for (i, slot) in next.iter_mut().enumerate() {
            *slot = self.eval(i, &self.state);
        }
        self.scratch = std::mem::replace(&mut self.state, next);
    }

    /// Runs `transient` unrecorded steps, then records `record` states (the
    /// first recorded row is the state reached after the transient).
    pub fn run(&mut self, transient: usize, record: usize) -> StateMatrix {
        for _ in 0..transient {
            self.step();
        }
        let mut data = Vec::with_capacity(record * self.n);
        for t in 0..record {
            if t > 0 {
                self.step();
            }
            data.extend(self.state.iter().map(|&b| b as u32));
        }
        StateMatrix::new(record, self.n, 2, data).expect("binary matrix of consistent shape")
    }
}

/// Five-number summary plus mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub mean: f64,
}

/// Linearly interpolated quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

impl Summary {
    pub fn of(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        Ok(Self {
            min: v[0],
            q1: quantile(&v, 0.25),
            median: quantile(&v, 0.5),
            q3: quantile(&v, 0.75),
            max: v[v.len() - 1],
            mean: v.iter().sum::<f64>() / v.len() as f64,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub n: usize,
    pub ks: Vec<usize>,
    pub replicates: usize,
    pub transient: usize,
    pub record: usize,
    /// Bit-widths of the temporal regrouping; `1` is the raw binary scale.
    pub bits: Vec<u32>,
    pub seed: u64,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self {
            n: 100,
            ks: (0..=5).collect(),
            replicates: 1000,
            transient: 1000,
            record: 1000,
            bits: vec![1],
            seed: 0,
        }
    }
}

/// Distribution of the averaged measures across replicates for one (K, scale).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsemblePoint {
    pub k: usize,
    pub bits: u32,
    pub e: Summary,
    pub s: Summary,
    pub c: Summary,
    pub h: Summary,
}

fn check_positive(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        Err(Error::param(format!("{name} must be positive")))
    } else {
        Ok(())
    }
}

/// Generator for replicate `rep` of in-degree `k`.
pub fn replicate_rng(seed: u64, k: usize, rep: usize) -> SimRng {
    derived(seed, &[label::RBN, k as u64, rep as u64])
}

/// Per-node E/S/C averaged over nodes and H over rows, at each scale, for
/// every replicate of every K. Results are ordered by K, then scale.
pub fn measure_ensemble(cfg: &EnsembleConfig) -> Result<Vec<EnsemblePoint>> {
    check_positive("replicates", cfg.replicates)?;
    check_positive("record", cfg.record)?;
    check_positive("N", cfg.n)?;
    if cfg.bits.is_empty() {
        return Err(Error::param("at least one scale is required"));
    }
    for &k in &cfg.ks {
        check_nk(cfg.n, k)?;
    }
    for &b in &cfg.bits {
        if cfg.record / (b as usize) < 2 {
            return Err(Error::param(format!(
                "record = {} is too short for {b}-bit regrouping",
                cfg.record
            )));
        }
    }
    let jobs: Vec<(usize, usize)> = cfg
        .ks
        .iter()
        .flat_map(|&k| (0..cfg.replicates).map(move |r| (k, r)))
        .collect();
    let profiles = jobs
        .par_iter()
        .map(|&(k, rep)| {
            let mut net = Rbn::generate_with(cfg.n, k, &mut replicate_rng(cfg.seed, k, rep))?;
            let m = net.run(cfg.transient, cfg.record);
            multiscale_matrix_profile(&m, &cfg.bits)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut out = Vec::with_capacity(cfg.ks.len() * cfg.bits.len());
    for (ki, &k) in cfg.ks.iter().enumerate() {
        let reps = &profiles[ki * cfg.replicates..(ki + 1) * cfg.replicates];
        for (bi, &b) in cfg.bits.iter().enumerate() {
            let pick = |f: fn(&crate::measures::MeanMeasures) -> f64| {
                Summary::of(&reps.iter().map(|p| f(&p[bi].measures)).collect::<Vec<_>>())
            };
            out.push(EnsemblePoint {
                k,
                bits: b,
                e: pick(|m| m.e)?,
                s: pick(|m| m.s)?,
                c: pick(|m| m.c)?,
                h: pick(|m| m.h.unwrap_or(f64::NAN))?,
            });
        }
    }
    Ok(out)
}

/// A system network driven by an independent environment network.
///
/// The coupled network has `N_i` internal nodes followed by `N_e` image
/// nodes. Before each update the image nodes are overwritten with the
/// external state; only internal nodes apply truth tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoupledRbn {
    external: Rbn,
    n_i: usize,
    k_i: usize,
    inputs: Vec<u32>,
    tables: Vec<bool>,
    /// Internal state followed by the image of the external state.
    state: Vec<bool>,
    scratch: Vec<bool>,
}

impl CoupledRbn {
    /// Internal inputs are drawn without replacement from all `N_i + N_e`
    /// coupled nodes.
    pub fn generate_with(
        n_i: usize,
        k_i: usize,
        n_e: usize,
        k_e: usize,
        rng: &mut impl Rng,
    ) -> Result<Self> {
        check_positive("N_i", n_i)?;
        let external = Rbn::generate_with(n_e, k_e, rng)?;
        let n_c = n_i + n_e;
        check_nk(n_c, k_i)?;
        let mut inputs = Vec::with_capacity(n_i * k_i);
        for _ in 0..n_i {
            inputs.extend(sample(rng, n_c, k_i).into_iter().map(|j| j as u32));
        }
        let tables = (0..n_i << k_i).map(|_| rng.gen::<bool>()).collect();
        let mut state: Vec<bool> = (0..n_i).map(|_| rng.gen::<bool>()).collect();
        state.extend_from_slice(external.state());
        Ok(Self {
            external,
            n_i,
            k_i,
            inputs,
            tables,
            scratch: vec![false; n_i],
            state,
        })
    }

    pub fn n_internal(&self) -> usize {
        self.n_i
    }

    pub fn external(&self) -> &Rbn {
        &self.external
    }

    pub fn internal_state(&self) -> &[bool] {
        &self.state[..self.n_i]
    }

    pub fn internal_inputs_of(&self, i: usize) -> &[u32] {
        &self.inputs[i * self.k_i..(i + 1) * self.k_i]
    }

    pub fn step(&mut self) {
        let n_i = self.n_i;
        self.state[n_i..].copy_from_slice(self.external.state());
        let mut next = std::mem::take(&mut self.scratch);
        for (i, slot) in next.iter_mut().enumerate() {
            let idx = self.inputs[i * self.k_i..(i + 1) * self.k_i]
                .iter()
                .fold(0usize, |acc, &j| {
                    (acc << 1) | self.state[j as usize] as usize
                });
            *slot = self.tables[(i << self.k_i) | idx];
        }
        self.state[..n_i].copy_from_slice(&next);
        self.scratch = next;
        self.external.step();
    }

    /// Records `(internal, external)` state matrices after a transient.
    pub fn run(&mut self, transient: usize, record: usize) -> (StateMatrix, StateMatrix) {
        for _ in 0..transient {
            self.step();
        }
        let mut internal = Vec::with_capacity(record * self.n_i);
        let mut external = Vec::with_capacity(record * self.external.n());
        for t in 0..record {
            if t > 0 {
                self.step();
            }
            internal.extend(self.internal_state().iter().map(|&b| b as u32));
            external.extend(self.external.state().iter().map(|&b| b as u32));
        }
        (
            StateMatrix::new(record, self.n_i, 2, internal).expect("consistent shape"),
            StateMatrix::new(record, self.external.n(), 2, external).expect("consistent shape"),
        )
    }
}

/// How per-replicate complexities are combined into one A per cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AAggregation {
    /// Mean over replicates of `C_i / C_e`; replicates with an undefined or
    /// infinite ratio are skipped and counted.
    #[default]
    MeanOfRatios,
    /// Mean `C_i` over replicates divided by mean `C_e`.
    RatioOfMeans,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoupledConfig {
    pub n_i: usize,
    pub n_e: usize,
    pub k_i: Vec<usize>,
    pub k_e: Vec<usize>,
    pub replicates: usize,
    pub transient: usize,
    pub record: usize,
    pub aggregation: AAggregation,
    pub seed: u64,
}

impl Default for CoupledConfig {
    fn default() -> Self {
        Self {
            n_i: 32,
            n_e: 96,
            k_i: (1..=5).collect(),
            k_e: (1..=5).collect(),
            replicates: 50,
            transient: 1000,
            record: 1000,
            aggregation: AAggregation::MeanOfRatios,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AutopoiesisCell {
    pub k_i: usize,
    pub k_e: usize,
    pub a: Ratio,
    pub c_internal: f64,
    pub c_external: f64,
    /// Replicates whose individual ratio was infinite or undefined.
    pub degenerate: usize,
}

/// Mean per-node complexity of a binary state matrix.
pub fn mean_node_complexity(m: &StateMatrix) -> Result<f64> {
    let cs = m
        .columns()
        .map(|c| emergence(&c).map(complexity_of))
        .collect::<Result<Vec<_>>>()?;
    Ok(cs.iter().sum::<f64>() / cs.len() as f64)
}

/// `(C_i, C_e)` of one coupled replicate.
pub fn coupled_replicate(
    cfg: &CoupledConfig,
    k_i: usize,
    k_e: usize,
    rep: usize,
) -> Result<(f64, f64)> {
    let mut rng = derived(
        cfg.seed,
        &[label::COUPLED, k_i as u64, k_e as u64, rep as u64],
    );
    let mut net = CoupledRbn::generate_with(cfg.n_i, k_i, cfg.n_e, k_e, &mut rng)?;
    let (internal, external) = net.run(cfg.transient, cfg.record);
    Ok((
        mean_node_complexity(&internal)?,
        mean_node_complexity(&external)?,
    ))
}

/// Mean autopoiesis over the `(K_i, K_e)` grid, row-major in `K_i`.
pub fn coupled_autopoiesis(cfg: &CoupledConfig) -> Result<Vec<AutopoiesisCell>> {
    check_positive("replicates", cfg.replicates)?;
    check_positive("record", cfg.record)?;
    let jobs: Vec<(usize, usize, usize)> = cfg
        .k_i
        .iter()
        .flat_map(|&ki| {
            cfg.k_e
                .iter()
                .flat_map(move |&ke| (0..cfg.replicates).map(move |r| (ki, ke, r)))
        })
        .collect();
    let results = jobs
        .par_iter()
        .map(|&(ki, ke, r)| coupled_replicate(cfg, ki, ke, r))
        .collect::<Result<Vec<_>>>()?;

    let reps = cfg.replicates as f64;
    Ok(results
        .chunks(cfg.replicates)
        .zip(
            cfg.k_i
                .iter()
                .flat_map(|&ki| cfg.k_e.iter().map(move |&ke| (ki, ke))),
        )
        .map(|(chunk, (k_i, k_e))| {
            let c_internal = chunk.iter().map(|r| r.0).sum::<f64>() / reps;
            let c_external = chunk.iter().map(|r| r.1).sum::<f64>() / reps;
            let (a, degenerate) = match cfg.aggregation {
                AAggregation::RatioOfMeans => (Ratio::of(c_internal, c_external), 0),
                AAggregation::MeanOfRatios => {
                    let finite: Vec<f64> = chunk
                        .iter()
                        .filter_map(|&(ci, ce)| Ratio::of(ci, ce).finite())
                        .collect();
                    let degenerate = chunk.len() - finite.len();
                    let a = if finite.is_empty() {
                        Ratio::of(c_internal, c_external)
                    } else {
                        Ratio::Finite(finite.iter().sum::<f64>() / finite.len() as f64)
                    };
                    (a, degenerate)
                }
            };
            AutopoiesisCell {
                k_i,
                k_e,
                a,
                c_internal,
                c_external,
                degenerate,
            }
        })
        .collect())
}
