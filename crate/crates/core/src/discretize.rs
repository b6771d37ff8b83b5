//! Turning raw data into symbol series.
//!
//! Real-valued observations are mapped onto `β` equal-width classes between a
//! recorded minimum and maximum. Binary series are coarse-grained to base
//! `2^b` by fusing non-overlapping windows of `b` bits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::ProbDist;

/// Largest bit-width accepted by [`regroup_bits`]; keeps alphabets (and the
/// probability vectors built over them) at most 65 536 symbols wide.
pub const MAX_REGROUP_BITS: u32 = 16;

/// A finite sequence of symbols drawn from `{0, .., alphabet - 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolSeries {
    symbols: Vec<u32>,
    alphabet: usize,
}

impl SymbolSeries {
    pub fn new(symbols: Vec<u32>, alphabet: usize) -> Result<Self> {
        if alphabet == 0 {
            return Err(Error::InvalidAlphabet(0));
        }
        if let Some((position, &symbol)) = symbols
            .iter()
            .enumerate()
            .find(|(_, &s)| s as usize >= alphabet)
        {
            return Err(Error::SymbolOutOfRange {
                symbol,
                position,
                alphabet,
            });
        }
        Ok(Self { symbols, alphabet })
    }

    /// Binary series from booleans.
    pub fn from_bools(bits: &[bool]) -> Self {
        Self {
            symbols: bits.iter().map(|&b| b as u32).collect(),
            alphabet: 2,
        }
    }

    /// Parses a string of decimal digits such as `"0001000100010001"`.
    pub fn from_digits(digits: &str, alphabet: usize) -> Result<Self> {
        let symbols = digits
            .chars()
            .filter(|c| !c.is_whitespace())
            .enumerate()
            .map(|(i, c)| {
                c.to_digit(10).ok_or(Error::Parse {
                    row: 0,
                    col: i,
                    msg: format!("`{c}` is not a digit"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(symbols, alphabet)
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// Rows are time steps, columns are variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateMatrix {
    rows: usize,
    cols: usize,
    alphabet: usize,
    data: Vec<u32>,
}

impl StateMatrix {
    /// Builds a matrix from row-major data.
    pub fn new(rows: usize, cols: usize, alphabet: usize, data: Vec<u32>) -> Result<Self> {
        if alphabet == 0 {
            return Err(Error::InvalidAlphabet(0));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some((position, &symbol)) = data
            .iter()
            .enumerate()
            .find(|(_, &s)| s as usize >= alphabet)
        {
            return Err(Error::SymbolOutOfRange {
                symbol,
                position,
                alphabet,
            });
        }
        Ok(Self {
            rows,
            cols,
            alphabet,
            data,
        })
    }

    /// An empty matrix with `cols` variables and no recorded steps.
    pub fn empty(cols: usize, alphabet: usize) -> Self {
        Self {
            rows: 0,
            cols,
            alphabet,
            data: Vec::new(),
        }
    }

    pub fn from_rows<R: AsRef<[u32]>>(rows: &[R], alphabet: usize) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (t, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {t} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Self::new(rows.len(), cols, alphabet, data)
    }

    /// Binary matrix from boolean rows (as recorded by the simulators).
    pub fn from_bool_rows<R: AsRef<[bool]>>(rows: &[R]) -> Result<Self> {
        let converted: Vec<Vec<u32>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&b| b as u32).collect())
            .collect();
        Self::from_rows(&converted, 2)
    }

    /// Builds a matrix whose columns are the given series.
    pub fn from_columns(columns: &[SymbolSeries]) -> Result<Self> {
        let Some(first) = columns.first() else {
            return Ok(Self::empty(0, 2));
        };
        let rows = first.len();
        let alphabet = first.alphabet();
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows || c.alphabet() != alphabet {
                return Err(Error::Dimension(format!(
                    "column {j} has length {} / alphabet {}, expected {rows} / {alphabet}",
                    c.len(),
                    c.alphabet()
                )));
            }
        }
        let mut data = Vec::with_capacity(rows * columns.len());
        for t in 0..rows {
            data.extend(columns.iter().map(|c| c.symbols()[t]));
        }
        Self::new(rows, columns.len(), alphabet, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0
    }

    pub fn row(&self, t: usize) -> &[u32] {
        &self.data[t * self.cols..(t + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u32]> {
        (0..self.rows).map(move |t| self.row(t))
    }

    pub fn get(&self, t: usize, j: usize) -> u32 {
        self.data[t * self.cols + j]
    }

    /// The time series of variable `j`.
    pub fn column(&self, j: usize) -> SymbolSeries {
        SymbolSeries {
            symbols: (0..self.rows).map(|t| self.get(t, j)).collect(),
            alphabet: self.alphabet,
        }
    }

    pub fn columns(&self) -> impl Iterator<Item = SymbolSeries> + '_ {
        (0..self.cols).map(move |j| self.column(j))
    }

    /// Keeps only the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<Self> {
        if let Some(&bad) = cols.iter().find(|&&c| c >= self.cols) {
            return Err(Error::Index {
                index: bad,
                len: self.cols,
            });
        }
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for t in 0..self.rows {
            data.extend(cols.iter().map(|&j| self.get(t, j)));
        }
        Ok(Self {
            rows: self.rows,
            cols: cols.len(),
            alphabet: self.alphabet,
            data,
        })
    }

    /// Temporal coarse-graining of a binary matrix: each column's stream is
    /// regrouped into `b`-bit symbols independently, fusing `b` consecutive
    /// time steps into one row. Trailing rows that do not fill a window are
    /// dropped.
    pub fn regroup_time(&self, b: u32) -> Result<Self> {
        check_bits(b)?;
        if self.alphabet != 2 {
            return Err(Error::InvalidAlphabet(self.alphabet));
        }
        let b_us = b as usize;
        let rows = self.rows / b_us;
        let mut data = vec![0u32; rows * self.cols];
        for t in 0..rows {
            for k in 0..b_us {
                let src = self.row(t * b_us + k);
                let dst = &mut data[t * self.cols..(t + 1) * self.cols];
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d = (*d << 1) | s;
                }
            }
        }
        Ok(Self {
            rows,
            cols: self.cols,
            alphabet: 1usize << b,
            data,
        })
    }
}

fn check_bits(b: u32) -> Result<()> {
    if b < 1 {
        return Err(Error::param("bit-width must be at least 1"));
    }
    if b > MAX_REGROUP_BITS {
        return Err(Error::param(format!(
            "bit-width {b} exceeds the supported maximum of {MAX_REGROUP_BITS}"
        )));
    }
    Ok(())
}

/// Maps real values onto `classes` symbols with
/// `floor(classes * (x - min) / (max - min))`.
///
/// `x = max` lands in the top class `classes - 1`, and values outside
/// `[min, max]` are clamped into the boundary classes so that a range
/// recorded over several datasets can be applied to each one of them.
pub fn normalize_to_classes(
    values: &[f64],
    classes: usize,
    min: f64,
    max: f64,
) -> Result<SymbolSeries> {
    if classes < 2 {
        return Err(Error::InvalidAlphabet(classes));
    }
    if !min.is_finite() || !max.is_finite() {
        return Err(Error::InvalidValue(format!(
            "range bounds must be finite (got {min}, {max})"
        )));
    }
    if max <= min {
        return Err(Error::DegenerateRange { min, max });
    }
    let span = max - min;
    let top = (classes - 1) as f64;
    let symbols = values
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            if x.is_nan() {
                return Err(Error::InvalidValue(format!("NaN at position {i}")));
            }
            let class = (classes as f64 * (x - min) / span).floor();
            Ok(class.clamp(0.0, top) as u32)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SymbolSeries {
        symbols,
        alphabet: classes,
    })
}

/// Fuses non-overlapping windows of `b` bits (most significant first) into
/// base-`2^b` symbols. A trailing remainder shorter than `b` is discarded.
pub fn regroup_bits(bits: &SymbolSeries, b: u32) -> Result<SymbolSeries> {
    check_bits(b)?;
    if bits.alphabet != 2 {
        return Err(Error::InvalidAlphabet(bits.alphabet));
    }
    let symbols = bits
        .symbols
        .chunks_exact(b as usize)
        .map(|w| w.iter().fold(0u32, |acc, &bit| (acc << 1) | bit))
        .collect();
    Ok(SymbolSeries {
        symbols,
        alphabet: 1usize << b,
    })
}

/// Inverse of [`regroup_bits`]: decomposes base-`2^b` symbols back into bits.
pub fn expand_bits(series: &SymbolSeries, b: u32) -> Result<SymbolSeries> {
    check_bits(b)?;
    if series.alphabet != 1usize << b {
        return Err(Error::Dimension(format!(
            "alphabet {} is not 2^{b}",
            series.alphabet
        )));
    }
    let symbols = series
        .symbols
        .iter()
        .flat_map(|&s| (0..b).rev().map(move |k| (s >> k) & 1))
        .collect();
    Ok(SymbolSeries {
        symbols,
        alphabet: 2,
    })
}

/// Raw counts of each symbol.
pub fn symbol_counts(series: &SymbolSeries) -> Vec<usize> {
    let mut counts = vec![0usize; series.alphabet];
    for &s in &series.symbols {
        counts[s as usize] += 1;
    }
    counts
}

/// Empirical symbol frequencies over the whole series, no smoothing.
pub fn estimate_probs(series: &SymbolSeries) -> Result<ProbDist> {
    if series.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = series.len() as f64;
    let probs = symbol_counts(series)
        .into_iter()
        .map(|c| c as f64 / n)
        .collect();
    ProbDist::new(probs)
}
