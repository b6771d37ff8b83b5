//! Ecological time-series pipeline.
//!
//! Tables are read from CSV with one row per day. A header cell has the form
//! `[TAG:]Name[ [unit]]`, where the optional tag is `PC` (physico-chemical),
//! `LN` (limiting nutrients) or `Bio` (biomass), e.g. `PC:PT[°C]`.
//!
//! Each variable is mapped onto `β` classes between a minimum and maximum,
//! taken either from the variable itself or from a shared table of ranges so
//! that several lakes can be compared on one scale.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Read;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discretize::{normalize_to_classes, StateMatrix, SymbolSeries};
use crate::error::{Error, Result};
use crate::measures::{
    autopoiesis, classify, homeostasis_steps, shannon_information, Category, Color, MeanMeasures,
    MeasureSet, ProbDist, Ratio,
};
use crate::rng::{derived, label};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Component {
    #[serde(rename = "PC")]
    PhysicoChemical,
    #[serde(rename = "LN")]
    LimitingNutrients,
    #[serde(rename = "Bio")]
    Biomass,
}

impl Component {
    pub const ALL: [Component; 3] = [
        Component::PhysicoChemical,
        Component::LimitingNutrients,
        Component::Biomass,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Component::PhysicoChemical => "PC",
            Component::LimitingNutrients => "LN",
            Component::Biomass => "Bio",
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Component {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pc" => Ok(Component::PhysicoChemical),
            "ln" => Ok(Component::LimitingNutrients),
            "bio" => Ok(Component::Biomass),
            _ => Err(Error::param(format!(
                "unknown component `{s}` (PC, LN or Bio)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Variable {
    pub name: String,
    pub unit: Option<String>,
    pub component: Option<Component>,
    pub values: Vec<f64>,
    pub min: f64,
    pub max: f64,
}

impl Variable {
    pub fn new(
        name: impl Into<String>,
        unit: Option<String>,
        component: Option<Component>,
        values: Vec<f64>,
    ) -> Result<Self> {
        let name = name.into();
        if values.is_empty() {
            return Err(Error::InsufficientData(format!(
                "variable `{name}` has no values"
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidValue(format!(
                "variable `{name}` has a non-finite value at position {i}"
            )));
        }
        let (min, max) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        Ok(Self {
            name,
            unit,
            component,
            values,
            min,
            max,
        })
    }

    /// Header cell that [`Dataset::from_reader`] parses back into this variable.
    pub fn header(&self) -> String {
        let mut h = String::new();
        if let Some(c) = self.component {
            h.push_str(c.tag());
            h.push(':');
        }
        h.push_str(&self.name);
        if let Some(u) = &self.unit {
            h.push('[');
            h.push_str(u);
            h.push(']');
        }
        h
    }
}

fn parse_header(
    cell: &str,
) -> std::result::Result<(String, Option<String>, Option<Component>), String> {
    let mut rest = cell.trim();
    let mut component = None;
    if let Some((tag, tail)) = rest.split_once(':') {
        if let Ok(c) = tag.trim().parse::<Component>() {
            component = Some(c);
            rest = tail.trim();
        }
    }
    let mut unit = None;
    if let Some(stripped) = rest.strip_suffix(']') {
        let open = stripped
            .rfind('[')
            .ok_or_else(|| format!("unbalanced unit bracket in `{cell}`"))?;
        unit = Some(stripped[open + 1..].trim().to_string());
        rest = stripped[..open].trim();
    }
    if rest.is_empty() {
        return Err(format!("empty variable name in `{cell}`"));
    }
    Ok((rest.to_string(), unit, component))
}

/// Named daily series of equal length.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset {
    variables: Vec<Variable>,
}

/// Per-variable `(min, max)`.
pub type Ranges = BTreeMap<String, (f64, f64)>;

impl Dataset {
    pub fn new(variables: Vec<Variable>) -> Result<Self> {
        let first = variables.first().ok_or(Error::EmptyInput)?;
        let len = first.values.len();
        let mut seen = BTreeMap::new();
        for v in &variables {
            if v.values.len() != len {
                return Err(Error::Dimension(format!(
                    "variable `{}` has {} values, expected {len}",
                    v.name,
                    v.values.len()
                )));
            }
            if seen.insert(v.name.as_str(), ()).is_some() {
                return Err(Error::InvalidValue(format!(
                    "duplicate variable `{}`",
                    v.name
                )));
            }
        }
        Ok(Self { variables })
    }

    /// Parses a rectangular CSV table. Positions in errors are 1-based, with
    /// the header on row 1.
    pub fn from_reader(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut records = rdr.records();
        let csv_err = |e: csv::Error| {
            let row = e.position().map_or(0, |p| p.line() as usize);
            Error::Parse {
                row,
                col: 0,
                msg: e.to_string(),
            }
        };

        let header = match records.next() {
            Some(r) => r.map_err(csv_err)?,
            None => {
                return Err(Error::Parse {
                    row: 1,
                    col: 1,
                    msg: "empty input".into(),
                });
            }
        };
        let mut columns = Vec::with_capacity(header.len());
        let mut names = BTreeMap::new();
        for (j, cell) in header.iter().enumerate() {
            let (name, unit, component) = parse_header(cell).map_err(|msg| Error::Parse {
                row: 1,
                col: j + 1,
                msg,
            })?;
            if let Some(first) = names.insert(name.clone(), j + 1) {
                return Err(Error::Parse {
                    row: 1,
                    col: j + 1,
                    msg: format!("duplicate variable `{name}` (first in column {first})"),
                });
            }
            columns.push((name, unit, component, Vec::new()));
        }

        for (k, record) in records.enumerate() {
            let row = k + 2;
            let record = record.map_err(csv_err)?;
            if record.len() != columns.len() {
                return Err(Error::Parse {
                    row,
                    col: record.len().min(columns.len()) + 1,
                    msg: format!("expected {} fields, found {}", columns.len(), record.len()),
                });
            }
            for (j, cell) in record.iter().enumerate() {
                let value = if cell.is_empty() {
                    Err("missing value".to_string())
                } else {
                    match cell.parse::<f64>() {
                        Ok(v) if v.is_finite() => Ok(v),
                        Ok(_) => Err(format!("non-finite value `{cell}`")),
                        Err(_) => Err(format!("non-numeric value `{cell}`")),
                    }
                };
                let value = value.map_err(|msg| Error::Parse {
                    row,
                    col: j + 1,
                    msg,
                })?;
                columns[j].3.push(value);
            }
        }
        if columns.first().is_none_or(|c| c.3.is_empty()) {
            return Err(Error::Parse {
                row: 2,
                col: 1,
                msg: "no data rows".into(),
            });
        }
        let variables = columns
            .into_iter()
            .map(|(name, unit, component, values)| Variable::new(name, unit, component, values))
            .collect::<Result<Vec<_>>>()?;
        Self::new(variables)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidValue(e.to_string());
        w.write_record(self.variables.iter().map(Variable::header))
            .map_err(io)?;
        for t in 0..self.len() {
            w.write_record(self.variables.iter().map(|v| v.values[t].to_string()))
                .map_err(io)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::InvalidValue(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, name: &str) -> Result<&Variable> {
        self.variables
            .iter()
            .find(|v| v.name == name)
            .ok_or_else(|| Error::param(format!("no variable named `{name}`")))
    }

    /// Number of time steps.
    pub fn len(&self) -> usize {
        self.variables[0].values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn names_in(&self, component: Component) -> Vec<&str> {
        self.variables
            .iter()
            .filter(|v| v.component == Some(component))
            .map(|v| v.name.as_str())
            .collect()
    }

    pub fn ranges(&self) -> Ranges {
        self.variables
            .iter()
            .map(|v| (v.name.clone(), (v.min, v.max)))
            .collect()
    }
}

/// Per-variable ranges spanning every dataset that carries the variable.
pub fn global_ranges(datasets: &[&Dataset]) -> Ranges {
    let mut out = Ranges::new();
    for ds in datasets {
        for v in ds.variables() {
            out.entry(v.name.clone())
                .and_modify(|(lo, hi)| {
                    *lo = lo.min(v.min);
                    *hi = hi.max(v.max);
                })
                .or_insert((v.min, v.max));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// Each variable on its own recorded range.
    #[default]
    PerVariable,
    /// Ranges supplied by the caller, e.g. from [`global_ranges`].
    Fixed(Ranges),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub beta: usize,
    pub normalization: Normalization,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self {
            beta: 10,
            normalization: Normalization::PerVariable,
        }
    }
}

/// Discretized variable. A degenerate range maps every value to class 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Discretized {
    pub series: SymbolSeries,
    pub range: (f64, f64),
    pub degenerate: bool,
}

pub fn discretize_variable(var: &Variable, cfg: &ReportConfig) -> Result<Discretized> {
    let range = match &cfg.normalization {
        Normalization::PerVariable => (var.min, var.max),
        Normalization::Fixed(ranges) => *ranges.get(&var.name).ok_or_else(|| {
            Error::param(format!("no range supplied for variable `{}`", var.name))
        })?,
    };
    match normalize_to_classes(&var.values, cfg.beta, range.0, range.1) {
        Ok(series) => Ok(Discretized {
            series,
            range,
            degenerate: false,
        }),
        Err(Error::DegenerateRange { .. }) => Ok(Discretized {
            series: SymbolSeries::new(vec![0; var.values.len()], cfg.beta)?,
            range,
            degenerate: true,
        }),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariableReport {
    pub name: String,
    pub unit: Option<String>,
    pub range: (f64, f64),
    pub degenerate: bool,
    pub measures: MeasureSet,
}

/// Population standard deviations of per-variable E, S and C.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Dispersion {
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "S")]
    pub s: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentReport {
    pub label: String,
    pub beta: usize,
    pub variables: Vec<VariableReport>,
    /// Means of the member values; `H` is the mean daily similarity.
    pub mean: MeanMeasures,
    pub sd: Dispersion,
    pub category: Category,
    /// Similarity between consecutive days over the member variables.
    pub daily_h: Vec<f64>,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub symbols: StateMatrix,
}

fn mean_sd(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    let var = values.map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Report over an explicit list of variables.
pub fn report_variables(
    ds: &Dataset,
    label: &str,
    names: &[&str],
    cfg: &ReportConfig,
) -> Result<ComponentReport> {
    if names.is_empty() {
        return Err(Error::param(format!("`{label}` selects no variables")));
    }
    let mut variables = Vec::with_capacity(names.len());
    let mut columns = Vec::with_capacity(names.len());
    let mut warnings = Vec::new();
    for name in names {
        let var = ds.variable(name)?;
        let d = discretize_variable(var, cfg)?;
        if d.degenerate {
            warnings.push(format!(
                "variable `{name}` has a degenerate range; reported as E=0"
            ));
        }
        let measures = if d.degenerate {
            MeasureSet::from_emergence(0.0)?
        } else {
            MeasureSet::of_series(&d.series)?
        }
        .categorized();
        variables.push(VariableReport {
            name: var.name.clone(),
            unit: var.unit.clone(),
            range: d.range,
            degenerate: d.degenerate,
            measures,
        });
        columns.push(d.series);
    }
    let symbols = StateMatrix::from_columns(&columns)?;
    let daily_h = if symbols.rows() >= 2 {
        homeostasis_steps(&symbols)?
    } else {
        Vec::new()
    };
    let h = (!daily_h.is_empty()).then(|| daily_h.iter().sum::<f64>() / daily_h.len() as f64);

    let sets: Vec<MeasureSet> = variables.iter().map(|v| v.measures).collect();
    let mean = MeanMeasures {
        h,
        ..MeanMeasures::from_sets(&sets)?
    };
    let sd = Dispersion {
        e: mean_sd(sets.iter().map(MeasureSet::e)).1,
        s: mean_sd(sets.iter().map(MeasureSet::s)).1,
        c: mean_sd(sets.iter().map(MeasureSet::c)).1,
    };
    Ok(ComponentReport {
        label: label.to_string(),
        beta: cfg.beta,
        variables,
        category: classify(mean.c.clamp(0.0, 1.0))?,
        mean,
        sd,
        daily_h,
        warnings,
        symbols,
    })
}

/// Report over every variable tagged with `component`.
pub fn component_report(
    ds: &Dataset,
    component: Component,
    cfg: &ReportConfig,
) -> Result<ComponentReport> {
    let names = ds.names_in(component);
    if names.is_empty() {
        return Err(Error::param(format!(
            "dataset has no {component} variables"
        )));
    }
    report_variables(ds, component.tag(), &names, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AutopoiesisReport {
    pub a: Ratio,
    pub c_system: f64,
    pub c_environment: f64,
    /// Blue when the system is more complex than its environment, red when
    /// less, none at exact parity or for `0/0`.
    pub color: Option<Color>,
}

pub fn component_autopoiesis(
    ds: &Dataset,
    system: &[&str],
    environment: &[&str],
    cfg: &ReportConfig,
) -> Result<AutopoiesisReport> {
    let c_system = report_variables(ds, "system", system, cfg)?.mean.c;
    let c_environment = report_variables(ds, "environment", environment, cfg)?
        .mean
        .c;
    let a = autopoiesis(c_system, c_environment)?;
    let color = match a {
        Ratio::Infinite => Some(Color::Blue),
        Ratio::Finite(v) if v > 1.0 => Some(Color::Blue),
        Ratio::Finite(v) if v < 1.0 => Some(Color::Red),
        _ => None,
    };
    Ok(AutopoiesisReport {
        a,
        c_system,
        c_environment,
        color,
    })
}

/// Variable groupings of the planktonic and benthic zones of a lake.
pub mod zones {
    pub const PLANKTONIC_BIO: [&str; 4] = ["PD", "PCy", "PGA", "PCh"];
    pub const PLANKTONIC_PC: [&str; 4] = ["PL", "PT", "PCd", "PpH"];
    pub const PLANKTONIC_LN: [&str; 4] = ["PS", "PN", "PP", "PCD"];
    pub const BENTHIC_BIO: [&str; 3] = ["BD", "BCy", "BGA"];
    pub const BENTHIC_PC: [&str; 6] = ["BL", "BT", "BCd", "BO2", "SdO2", "BpH"];
    pub const BENTHIC_LN: [&str; 4] = ["BS", "BN", "BP", "BCD"];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OccupancyConfig {
    pub sites: usize,
    pub species: usize,
    pub iterations: usize,
    /// Occupancy `ψ` is drawn uniformly from this interval each iteration.
    pub psi_range: (f64, f64),
    /// Detection probability `p`, drawn the same way.
    pub p_range: (f64, f64),
    /// Sampling occasions per site and iteration.
    pub visits: usize,
    /// Use the number of sites as the number of detection trials.
    pub literal_sites: bool,
    pub series: OccupancySeries,
    pub beta: usize,
    pub seed: u64,
}

impl Default for OccupancyConfig {
    fn default() -> Self {
        Self {
            sites: 10,
            species: 100,
            iterations: 1000,
            psi_range: (0.1, 0.9),
            p_range: (0.1, 0.9),
            visits: 1,
            literal_sites: false,
            series: OccupancySeries::DetectedCounts,
            beta: 10,
            seed: 0,
        }
    }
}

impl OccupancyConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, (lo, hi)) in [("psi", self.psi_range), ("p", self.p_range)] {
            if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
                return Err(Error::param(format!(
                    "{name} range ({lo}, {hi}) must be an interval within [0, 1]"
                )));
            }
        }
        if self.sites == 0 || self.species == 0 || self.iterations == 0 {
            return Err(Error::param(
                "sites, species and iterations must be positive",
            ));
        }
        if self.visits == 0 && !self.literal_sites {
            return Err(Error::param("visits must be positive"));
        }
        if self.beta < 2 {
            return Err(Error::InvalidAlphabet(self.beta));
        }
        Ok(())
    }

    fn trials(&self) -> usize {
        if self.literal_sites {
            self.sites
        } else {
            self.visits
        }
    }
}

/// Which per-site series the occupancy measures are taken on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OccupancySeries {
    /// Number of species detected per iteration, on `β` classes.
    #[default]
    DetectedCounts,
    /// Binary detection record of each species, averaged over species.
    Presence,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SiteMeasures {
    pub site: usize,
    /// The site's series carried no variation.
    pub degenerate: bool,
    pub measures: MeanMeasures,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OccupancyResult {
    pub species: usize,
    /// Detected species per iteration, one row per site.
    #[serde(skip)]
    pub detections: Vec<Vec<u32>>,
    pub sites: Vec<SiteMeasures>,
    pub mean: MeanMeasures,
    pub sd: Dispersion,
}

fn count_measures(counts: &[u32], beta: usize) -> Result<SiteMeasures> {
    let var = Variable::new(
        "site",
        None,
        None,
        counts.iter().map(|&c| c as f64).collect(),
    )?;
    let report = ReportConfig {
        beta,
        normalization: Normalization::PerVariable,
    };
    let d = discretize_variable(&var, &report)?;
    let set = if d.degenerate {
        MeasureSet::from_emergence(0.0)?
    } else {
        MeasureSet::of_series(&d.series)?
    };
    Ok(SiteMeasures {
        site: 0,
        degenerate: d.degenerate,
        measures: MeanMeasures::from_sets(&[set])?,
    })
}

fn presence_measures(hits: &[u32], iterations: usize) -> Result<SiteMeasures> {
    let sets = hits
        .iter()
        .map(|&k| {
            let q = k as f64 / iterations as f64;
            MeasureSet::from_emergence(shannon_information(&ProbDist::new(vec![1.0 - q, q])?)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SiteMeasures {
        site: 0,
        degenerate: hits.iter().all(|&k| k == 0 || k as usize == iterations),
        measures: MeanMeasures::from_sets(&sets)?,
    })
}

/// Simulates occupancy and detection. Every draw is made whether or not it
/// matters, so runs that differ only in `ψ` or `p` stay coupled.
pub fn occupancy_sim(cfg: &OccupancyConfig) -> Result<OccupancyResult> {
    cfg.validate()?;
    let mut rng = derived(cfg.seed, &[label::OCCUPANCY, cfg.species as u64]);
    let trials = cfg.trials();
    let mut detections = vec![vec![0u32; cfg.iterations]; cfg.sites];
    // detections of each species at each site, summed over iterations
    let mut hits = vec![vec![0u32; cfg.species]; cfg.sites];
    for it in 0..cfg.iterations {
        let psi = cfg.psi_range.0 + (cfg.psi_range.1 - cfg.psi_range.0) * rng.gen::<f64>();
        let p = cfg.p_range.0 + (cfg.p_range.1 - cfg.p_range.0) * rng.gen::<f64>();
        for (site, site_hits) in detections.iter_mut().zip(hits.iter_mut()) {
            let mut count = 0;
            for h in site_hits.iter_mut() {
                let occupied = rng.gen::<f64>() < psi;
                let mut detected = false;
                for _ in 0..trials {
                    detected |= occupied & (rng.gen::<f64>() < p);
                }
                count += detected as u32;
                *h += detected as u32;
            }
            site[it] = count;
        }
    }

    let sites = (0..cfg.sites)
        .map(|site| {
            let m = match cfg.series {
                OccupancySeries::DetectedCounts => count_measures(&detections[site], cfg.beta),
                OccupancySeries::Presence => presence_measures(&hits[site], cfg.iterations),
            }?;
            Ok(SiteMeasures { site, ..m })
        })
        .collect::<Result<Vec<_>>>()?;
    let field = |f: fn(&MeanMeasures) -> f64| mean_sd(sites.iter().map(move |s| f(&s.measures)));
    let (e, sd_e) = field(|m| m.e);
    let (s, sd_s) = field(|m| m.s);
    let (c, sd_c) = field(|m| m.c);
    Ok(OccupancyResult {
        species: cfg.species,
        detections,
        mean: MeanMeasures { e, s, c, h: None },
        sd: Dispersion {
            e: sd_e,
            s: sd_s,
            c: sd_c,
        },
        sites,
    })
}

/// Runs [`occupancy_sim`] for each community size in parallel.
pub fn occupancy_curve(cfg: &OccupancyConfig, species: &[usize]) -> Result<Vec<OccupancyResult>> {
    species
        .par_iter()
        .map(|&s| {
            occupancy_sim(&OccupancyConfig {
                species: s,
                ..cfg.clone()
            })
        })
        .collect()
}

fn radicand(expr: &'static str, v: f64) -> Result<f64> {
    if v < 0.0 {
        Err(Error::Domain {
            expr,
            msg: format!("negative radicand {v}"),
        })
    } else {
        Ok(v.sqrt())
    }
}

fn divide(expr: &'static str, num: f64, den: f64) -> Result<f64> {
    if den == 0.0 {
        Err(Error::Domain {
            expr,
            msg: "division by zero".into(),
        })
    } else {
        Ok(num / den)
    }
}

/// Closed-form emergence fitted for each component, evaluated without range
/// checks on the inputs. Only the expression's own singularities are errors.
pub fn evaluate_formula(component: Component, s: f64, a: f64, h: f64) -> Result<f64> {
    match component {
        Component::Biomass => {
            let t1 = divide("H²A(H - S)/S", h * h * a * (h - s), s)?;
            let t2 = a.powi(4) * s * h;
            let t3 = radicand("√(S(S + H))", s * (s + h))?;
            radicand(
                "√(1 - H²A(H - S)/S - A⁴SH - √(S(S + H)))",
                1.0 - t1 - t2 - t3,
            )
        }
        Component::LimitingNutrients => {
            let num = (s * h + divide("A/S", a, s)?) - (s * (a + s) - 1.0);
            let q = divide("((SH + A/S) - (S(A + S) - 1))/(1 - S)", num, 1.0 - s)?;
            radicand("√(((SH + A/S) - (S(A + S) - 1))/(1 - S))", q)
        }
        Component::PhysicoChemical => {
            let ah = divide("A/H", a, h)?;
            let top = radicand("√(A/H + A + 2H)", ah + a + 2.0 * h)?;
            let bottom = radicand("√(A/H)", ah)?;
            let frac = divide("√(A/H + A + 2H)/√(A/H)", top, bottom)?;
            radicand(
                "√((A - H - S - A/H) - S²√(A/H + A + 2H)/√(A/H))",
                (a - h - s - ah) - s * s * frac,
            )
        }
    }
}

/// Estimated emergence from self-organization `S`, autopoiesis `A` and
/// homeostasis `H`, with `S, H ∈ (0, 1]` and `A ≥ 0`.
pub fn analytic_emergence(component: Component, s: f64, a: f64, h: f64) -> Result<f64> {
    for (v, range) in [(s, "S in (0, 1]"), (h, "H in (0, 1]")] {
        if !(v > 0.0 && v <= 1.0) {
            return Err(Error::OutOfRange { value: v, range });
        }
    }
    if !(a >= 0.0 && a.is_finite()) {
        return Err(Error::OutOfRange {
            value: a,
            range: "A in [0, inf)",
        });
    }
    evaluate_formula(component, s, a, h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LakeKind {
    /// Ice-cover seasons: square-wave annual cycle plus noise.
    ArcticLike,
    /// Weak sinusoidal cycle with small noise.
    TropicLike,
}

struct SynthVar {
    name: &'static str,
    unit: &'static str,
    component: Component,
    base: f64,
    amplitude: f64,
}

const fn sv(
    name: &'static str,
    unit: &'static str,
    component: Component,
    base: f64,
    amplitude: f64,
) -> SynthVar {
    SynthVar {
        name,
        unit,
        component,
        base,
        amplitude,
    }
}

const PC: Component = Component::PhysicoChemical;
const LN: Component = Component::LimitingNutrients;
const BIO: Component = Component::Biomass;

const SYNTH_VARS: [SynthVar; 27] = [
    sv("SL", "MJ/m2/day", PC, 8.0, 6.0),
    sv("PL", "MJ/m2/day", PC, 5.0, 4.0),
    sv("BL", "MJ/m2/day", PC, 1.5, 1.2),
    sv("ST", "°C", PC, 6.0, 8.0),
    sv("PT", "°C", PC, 5.0, 6.0),
    sv("BT", "°C", PC, 4.0, 3.0),
    sv("PCd", "uS/cm", PC, 90.0, 20.0),
    sv("BCd", "uS/cm", PC, 110.0, 25.0),
    sv("BO2", "mg/litre", PC, 9.0, -3.0),
    sv("SdO2", "mg/litre", PC, 6.0, -2.5),
    sv("PpH", "pH", PC, 7.2, 0.5),
    sv("BpH", "pH", PC, 7.0, 0.4),
    sv("PS", "mg/litre", LN, 2.0, -0.8),
    sv("BS", "mg/litre", LN, 2.4, -0.6),
    sv("PN", "mg/litre", LN, 0.30, -0.12),
    sv("BN", "mg/litre", LN, 0.36, -0.10),
    sv("PP", "mg/litre", LN, 0.020, -0.008),
    sv("BP", "mg/litre", LN, 0.026, -0.006),
    sv("PCD", "mg/litre", LN, 3.0, -1.0),
    sv("BCD", "mg/litre", LN, 3.6, -0.9),
    sv("PD", "mg/m3", BIO, 40.0, 120.0),
    sv("PCy", "mg/m3", BIO, 10.0, 60.0),
    sv("PGA", "mg/m3", BIO, 15.0, 50.0),
    sv("PCh", "mg/m3", BIO, 8.0, 30.0),
    sv("BD", "mg/m3", BIO, 30.0, 70.0),
    sv("BCy", "mg/m3", BIO, 5.0, 25.0),
    sv("BGA", "mg/m3", BIO, 6.0, 20.0),
];

/// Synthetic stand-in for a simulated lake year, meant only to exercise the
/// pipeline. Arctic-like biomass follows the open-water season closely while
/// nutrients and physico-chemistry carry more day-to-day noise.
pub fn synthetic_lake(kind: LakeKind, days: usize, seed: u64) -> Result<Dataset> {
    if days < 2 {
        return Err(Error::param("a synthetic lake needs at least 2 days"));
    }
    let kind_id = match kind {
        LakeKind::ArcticLike => 0,
        LakeKind::TropicLike => 1,
    };
    let mut variables: Vec<Variable> = SYNTH_VARS
        .iter()
        .enumerate()
        .map(|(k, template)| {
            let mut rng = derived(seed, &[label::SYNTH, kind_id, k as u64]);
            let noise = match (kind, template.component) {
                (LakeKind::ArcticLike, Component::Biomass) => 0.05,
                (LakeKind::ArcticLike, Component::PhysicoChemical) => 0.6,
                (LakeKind::ArcticLike, Component::LimitingNutrients) => 0.9,
                (LakeKind::TropicLike, _) => 0.05,
            };
            let normal = Normal::new(0.0, noise * template.amplitude.abs()).expect("finite scale");
            let values = (0..days)
                .map(|t| {
                    let phase = t as f64 / days as f64;
                    let cycle = match kind {
                        LakeKind::ArcticLike => {
                            if (0.4..0.7).contains(&phase) {
                                1.0
                            } else {
                                0.0
                            }
                        }
                        LakeKind::TropicLike => {
                            0.5 + 0.1 * (2.0 * std::f64::consts::PI * phase).sin()
                        }
                    };
                    template.base + template.amplitude * cycle + normal.sample(&mut rng)
                })
                .collect();
            Variable::new(
                template.name,
                Some(template.unit.into()),
                Some(template.component),
                values,
            )
        })
        .collect::<Result<_>>()?;
    variables.sort_by_key(|v| v.component);
    Dataset::new(variables)
}
