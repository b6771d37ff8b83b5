//! Normalized information measures over symbol series and state matrices.
//!
//! Emergence `E` is the Shannon information of a series normalized by
//! `log2(β)`, self-organization is `S = 1 - E`, complexity is `C = 4·E·S`.
//! Homeostasis `H` compares consecutive rows of a state matrix, so it looks at
//! whole-system states rather than individual variables. Autopoiesis `A` is
//! the ratio between the complexity of a system and that of its environment.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::discretize::{estimate_probs, regroup_bits, StateMatrix, SymbolSeries};
use crate::error::{Error, Result};

/// Tolerance used when validating that probabilities sum to one.
pub const PROB_SUM_TOLERANCE: f64 = 1e-9;

/// A probability vector over an alphabet of `probs.len()` symbols.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbDist {
    probs: Vec<f64>,
}

impl ProbDist {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidAlphabet(0));
        }
        if let Some(p) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::OutOfRange {
                value: *p,
                range: "[0, 1]",
            });
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROB_SUM_TOLERANCE {
            return Err(Error::InvalidValue(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn alphabet_size(&self) -> usize {
        self.probs.len()
    }
}

/// Shannon information in bits, `-Σ p·log2 p`, with `0·log 0 = 0`.
fn entropy_bits(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Shannon information in nats.
fn entropy_nats(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum()
}

/// Normalized Shannon information `-K·Σ p_i·log2 p_i` with `K = 1/log2 β`.
pub fn shannon_information(dist: &ProbDist) -> Result<f64> {
    let beta = dist.alphabet_size();
    if beta < 2 {
        return Err(Error::InvalidAlphabet(beta));
    }
    let k = 1.0 / (beta as f64).log2();
    // `+ 0.0` folds a negative zero from `-1·log2(1)` into `0.0`.
    Ok((k * entropy_bits(&dist.probs)).clamp(0.0, 1.0) + 0.0)
}

/// Emergence: normalized information of the empirical symbol distribution.
pub fn emergence(series: &SymbolSeries) -> Result<f64> {
    shannon_information(&estimate_probs(series)?)
}

pub fn self_organization(series: &SymbolSeries) -> Result<f64> {
    emergence(series).map(|e| 1.0 - e)
}

pub fn complexity(series: &SymbolSeries) -> Result<f64> {
    emergence(series).map(complexity_of)
}

/// `C = 4·E·(1 - E)`.
pub fn complexity_of(e: f64) -> f64 {
    4.0 * e * (1.0 - e)
}

/// Fraction of positions where two rows differ.
pub fn hamming_distance(a: &[u32], b: &[u32]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Dimension(format!(
            "rows of length {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.is_empty() {
        return Err(Error::EmptyInput);
    }
    let differing = a.iter().zip(b).filter(|(x, y)| x != y).count();
    Ok(differing as f64 / a.len() as f64)
}

/// Per-step similarity `h_t = 1 - d(row_t, row_{t+1})`.
pub fn homeostasis_steps(matrix: &StateMatrix) -> Result<Vec<f64>> {
    if matrix.rows() < 2 {
        return Err(Error::InsufficientData(format!(
            "homeostasis needs at least 2 rows, got {}",
            matrix.rows()
        )));
    }
    (1..matrix.rows())
        .map(|t| hamming_distance(matrix.row(t - 1), matrix.row(t)).map(|d| 1.0 - d))
        .collect()
}

/// Mean similarity between consecutive system states.
pub fn homeostasis(matrix: &StateMatrix) -> Result<f64> {
    let steps = homeostasis_steps(matrix)?;
    Ok(steps.iter().sum::<f64>() / steps.len() as f64)
}

/// How the evenness denominator of variable homeostasis counts "cases".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvennessCases {
    /// Number of probability classes, i.e. the alphabet size (Buzas–Gibson).
    #[default]
    ClassCount,
    /// Number of samples the probabilities were estimated from.
    SampleCount,
}

/// Variable homeostasis and its `[0, 1)` normalization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariableHomeostasis {
    pub hmv: f64,
    pub hmv_normalized: f64,
}

/// Dispersion of the class probabilities over their evenness:
/// `HmV = σP / (e^I / cases)`, with `σP` the population standard deviation of
/// the probability vector and `I` the entropy in nats.
pub fn variable_homeostasis(
    series: &SymbolSeries,
    cases: EvennessCases,
) -> Result<VariableHomeostasis> {
    let dist = estimate_probs(series)?;
    let probs = dist.probs();
    let beta = probs.len() as f64;
    let mean = 1.0 / beta;
    let sigma = (probs.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / beta).sqrt();
    let case_count = match cases {
        EvennessCases::ClassCount => beta,
        EvennessCases::SampleCount => series.len() as f64,
    };
    let evenness = entropy_nats(probs).exp() / case_count;
    let hmv = sigma / evenness;
    Ok(VariableHomeostasis {
        hmv,
        hmv_normalized: 1.0 - 1.0 / (hmv + 1.0),
    })
}

/// A ratio that may be infinite or undefined (`0/0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ratio {
    Finite(f64),
    Infinite,
    Undefined,
}

impl Ratio {
    pub fn of(num: f64, den: f64) -> Self {
        if den == 0.0 {
            if num == 0.0 {
                Ratio::Undefined
            } else {
                Ratio::Infinite
            }
        } else {
            Ratio::Finite(num / den)
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Ratio::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// `f64` view: `inf` for infinite, `NaN` for undefined.
    pub fn to_f64(self) -> f64 {
        match self {
            Ratio::Finite(v) => v,
            Ratio::Infinite => f64::INFINITY,
            Ratio::Undefined => f64::NAN,
        }
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ratio::Finite(v) => write!(f, "{v}"),
            Ratio::Infinite => f.write_str("inf"),
            Ratio::Undefined => f.write_str("undefined"),
        }
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Ratio::Finite(v) => s.serialize_f64(*v),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

fn check_unit(v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            value: v,
            range: "[0, 1]",
        })
    }
}

/// Autopoiesis `A = C(system) / C(environment)`.
pub fn autopoiesis(c_system: f64, c_environment: f64) -> Result<Ratio> {
    check_unit(c_system)?;
    check_unit(c_environment)?;
    Ok(Ratio::of(c_system, c_environment))
}

/// Five-level classification of a value in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Deserialize)]
pub enum Category {
    VeryLow,
    Low,
    Medium,
    High,
    VeryHigh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Orange,
    Yellow,
    Green,
    Blue,
}

impl Category {
    pub fn color(self) -> Color {
        match self {
            Category::VeryLow => Color::Red,
            Category::Low => Color::Orange,
            Category::Medium => Color::Yellow,
            Category::High => Color::Green,
            Category::VeryHigh => Color::Blue,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Category::VeryLow => "very-low",
            Category::Low => "low",
            Category::Medium => "medium",
            Category::High => "high",
            Category::VeryHigh => "very-high",
        }
    }

    /// 0 for `VeryLow` up to 4 for `VeryHigh`.
    pub fn rank(self) -> u8 {
        self as u8
    }
}

impl Color {
    pub fn name(self) -> &'static str {
        match self {
            Color::Red => "red",
            Color::Orange => "orange",
            Color::Yellow => "yellow",
            Color::Green => "green",
            Color::Blue => "blue",
        }
    }
}

impl Serialize for Category {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Category", 2)?;
        st.serialize_field("label", self.label())?;
        st.serialize_field("color", self.color().name())?;
        st.end()
    }
}

/// Bins are lower-inclusive; the top bin `[0.8, 1]` is closed.
pub fn classify(value: f64) -> Result<Category> {
    check_unit(value)?;
    Ok(if value < 0.2 {
        Category::VeryLow
    } else if value < 0.4 {
        Category::Low
    } else if value < 0.6 {
        Category::Medium
    } else if value < 0.8 {
        Category::High
    } else {
        Category::VeryHigh
    })
}

/// E, S, C (and optionally H) for a single series. Only `E` is stored; `S`
/// and `C` are derived, so `S = 1 - E` and `C = 4·E·S` hold by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureSet {
    e: f64,
    h: Option<f64>,
    category: Option<Category>,
}

impl MeasureSet {
    pub fn from_emergence(e: f64) -> Result<Self> {
        check_unit(e)?;
        Ok(Self {
            e,
            h: None,
            category: None,
        })
    }

    pub fn of_series(series: &SymbolSeries) -> Result<Self> {
        Self::from_emergence(emergence(series)?)
    }

    pub fn with_homeostasis(mut self, h: f64) -> Result<Self> {
        check_unit(h)?;
        self.h = Some(h);
        Ok(self)
    }

    /// Attaches the category of the complexity value.
    pub fn categorized(mut self) -> Self {
        self.category = classify(self.c()).ok();
        self
    }

    pub fn e(&self) -> f64 {
        self.e
    }

    pub fn s(&self) -> f64 {
        1.0 - self.e
    }

    pub fn c(&self) -> f64 {
        complexity_of(self.e)
    }

    pub fn h(&self) -> Option<f64> {
        self.h
    }

    pub fn category(&self) -> Option<Category> {
        self.category
    }
}

impl Serialize for MeasureSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("MeasureSet", 5)?;
        st.serialize_field("E", &self.e())?;
        st.serialize_field("S", &self.s())?;
        st.serialize_field("C", &self.c())?;
        st.serialize_field("H", &self.h)?;
        st.serialize_field("category", &self.category)?;
        st.end()
    }
}

/// Measures averaged over the variables of a system. Each field is the mean
/// of the per-variable value, so `c` is generally not `4·e·s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanMeasures {
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "S")]
    pub s: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "H")]
    pub h: Option<f64>,
}

impl MeanMeasures {
    pub fn from_sets(sets: &[MeasureSet]) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::EmptyInput);
        }
        let n = sets.len() as f64;
        Ok(Self {
            e: sets.iter().map(MeasureSet::e).sum::<f64>() / n,
            s: sets.iter().map(MeasureSet::s).sum::<f64>() / n,
            c: sets.iter().map(MeasureSet::c).sum::<f64>() / n,
            h: None,
        })
    }
}

/// Per-column E/S/C averaged over columns, plus row-wise H when the matrix
/// has at least two rows.
pub fn matrix_measures(matrix: &StateMatrix) -> Result<MeanMeasures> {
    if matrix.rows() == 0 || matrix.cols() == 0 {
        return Err(Error::EmptyInput);
    }
    let sets = matrix
        .columns()
        .map(|c| MeasureSet::of_series(&c))
        .collect::<Result<Vec<_>>>()?;
    let mut mean = MeanMeasures::from_sets(&sets)?;
    if matrix.rows() >= 2 {
        mean.h = Some(homeostasis(matrix)?);
    }
    Ok(mean)
}

/// Measures of one series at one scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaleMeasures {
    pub bits: u32,
    pub base: usize,
    pub measures: MeasureSet,
}

/// E/S/C of a binary series regrouped at each bit-width in `bits`.
pub fn multiscale_profile(series: &SymbolSeries, bits: &[u32]) -> Result<Vec<ScaleMeasures>> {
    bits.iter()
        .map(|&b| {
            let regrouped = regroup_bits(series, b)?;
            Ok(ScaleMeasures {
                bits: b,
                base: regrouped.alphabet(),
                measures: MeasureSet::of_series(&regrouped)?,
            })
        })
        .collect()
}

/// Averaged measures of a system at one scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaleMeanMeasures {
    pub bits: u32,
    pub base: usize,
    pub measures: MeanMeasures,
}

/// Multi-scale profile of a binary state matrix: each column is regrouped
/// temporally, E/S/C are averaged over columns and H is taken over rows.
pub fn multiscale_matrix_profile(
    matrix: &StateMatrix,
    bits: &[u32],
) -> Result<Vec<ScaleMeanMeasures>> {
    bits.iter()
        .map(|&b| {
            let regrouped = matrix.regroup_time(b)?;
            Ok(ScaleMeanMeasures {
                bits: b,
                base: regrouped.alphabet(),
                measures: matrix_measures(&regrouped)?,
            })
        })
        .collect()
}
