//! Cellular-automaton traffic on a grid of one-way streets.
//!
//! Horizontal streets run left to right and vertical streets top to bottom.
//! Each street is a ring of cells updated like elementary rule 184: a vehicle
//! advances one cell when the cell ahead is empty. Where two streets cross
//! they share a single intersection cell. A vehicle may enter an
//! intersection only while its direction has green; a vehicle already inside
//! leaves whenever the cell ahead is free. On the approach to a red light this
//! is rule 252 behaviour and on the intersection cell itself rule 136.
//!
//! Light phases come from a [`Controller`]: a fixed-period green wave, the
//! six-rule self-organizing scheme, or a fixed phase used for testing.

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discretize::normalize_to_classes;
use crate::error::{Error, Result};
use crate::measures::MeasureSet;
use crate::rng::{derived, label};

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dir {
    H,
    V,
}

impl Dir {
    pub fn other(self) -> Self {
        match self {
            Dir::H => Dir::V,
            Dir::V => Dir::H,
        }
    }

    fn idx(self) -> usize {
        self as usize
    }

    fn code(self) -> u8 {
        self as u8 + 1
    }
}

/// How a vehicle leaving the end of a street re-enters the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    /// Street `k` continues on street `n - 1 - k` of the same orientation.
    #[default]
    NonOrientable,
    /// Street `k` continues on itself.
    Cyclic,
    /// Street `k` continues on street `k + 1 (mod n)`, threading all streets
    /// of one orientation into a single ring.
    Helical,
}

impl Boundary {
    fn successor(self, k: usize, n: usize) -> usize {
        match self {
            Boundary::NonOrientable => n - 1 - k,
            Boundary::Cyclic => k,
            Boundary::Helical => (k + 1) % n,
        }
    }
}

/// Parameters of the self-organizing controller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfOrgParams {
    /// Detection distance for approaching vehicles.
    pub d: usize,
    /// Counter threshold, in vehicle·ticks.
    pub n: u64,
    /// Minimum green time.
    pub u: u64,
    /// Platoon size that may hold a green.
    pub m: usize,
    /// Short distance for the platoon check.
    pub r: usize,
    /// Distance beyond the light checked for stopped vehicles.
    pub e: usize,
}

impl SelfOrgParams {
    pub fn defaults(block_len: usize) -> Self {
        let d = (block_len / 4).max(1);
        Self {
            d,
            n: 4 * d as u64,
            u: 5,
            m: 1,
            r: 1,
            e: 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Controller {
    /// All lights share `period`. The wave runs along the horizontal streets:
    /// column `c` is shifted by `c · block_len` ticks, the free-flow travel
    /// time, and gives green to horizontal traffic in the first half of its
    /// cycle and to vertical traffic in the second.
    GreenWave {
        period: usize,
    },
    SelfOrg(SelfOrgParams),
    /// Lights never change.
    Fixed {
        green: Dir,
    },
}

impl Controller {
    pub fn green_wave(block_len: usize) -> Self {
        Controller::GreenWave {
            period: 2 * block_len,
        }
    }

    pub fn self_org(block_len: usize) -> Self {
        Controller::SelfOrg(SelfOrgParams::defaults(block_len))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Controller::GreenWave { .. } => "green-wave",
            Controller::SelfOrg(_) => "self-org",
            Controller::Fixed { .. } => "fixed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub n_h: usize,
    pub n_v: usize,
    pub block_len: usize,
    pub density: f64,
    pub boundary: Boundary,
    pub controller: Controller,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            n_h: 10,
            n_v: 10,
            block_len: 40,
            density: 0.1,
            boundary: Boundary::NonOrientable,
            controller: Controller::self_org(40),
        }
    }
}

impl GridConfig {
    pub fn total_cells(&self) -> usize {
        self.n_h * self.n_v * (2 * self.block_len - 1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_h == 0 || self.n_v == 0 {
            return Err(Error::Config(
                "the grid needs at least one street each way".into(),
            ));
        }
        if self.block_len < 3 {
            return Err(Error::Config(format!(
                "block_len = {} is below the minimum of 3",
                self.block_len
            )));
        }
        if !(0.0..=1.0).contains(&self.density) {
            return Err(Error::param(format!(
                "density {} is outside [0, 1]",
                self.density
            )));
        }
        match self.controller {
            Controller::GreenWave { period } if period < 2 => Err(Error::Config(format!(
                "green-wave period {period} is below 2"
            ))),
            Controller::SelfOrg(p) => {
                if p.d == 0 || p.d >= self.block_len {
                    return Err(Error::Config(format!(
                        "d = {} must lie in 1..{}",
                        p.d, self.block_len
                    )));
                }
                if p.e == 0 || p.e >= self.block_len {
                    return Err(Error::Config(format!(
                        "e = {} must lie in 1..{}",
                        p.e, self.block_len
                    )));
                }
                if p.r > p.d {
                    return Err(Error::Config(format!("r = {} exceeds d = {}", p.r, p.d)));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Light {
    Green(Dir),
    BothRed,
}

impl Light {
    fn allows(self, d: Dir) -> bool {
        self == Light::Green(d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct SelfOrgState {
    counter: u64,
    green_time: u64,
    /// Direction restored after a both-red episode.
    last_green: Dir,
}

/// Per-intersection geometry.
#[derive(Debug, Clone)]
struct Junction {
    col: usize,
    /// Upstream cells, nearest first, indexed by [`Dir::idx`].
    inbound: [Vec<u32>; 2],
    /// Downstream cells, nearest first.
    outbound: [Vec<u32>; 2],
}

#[derive(Debug, Clone)]
pub struct TrafficGrid {
    cfg: GridConfig,
    /// 0 empty, 1 horizontal vehicle, 2 vertical vehicle.
    occ: Vec<u8>,
    /// Whether the vehicle now in a cell arrived during the last tick.
    arrived: Vec<bool>,
    next: [Vec<u32>; 2],
    junction_of: Vec<u32>,
    junctions: Vec<Junction>,
    lights: Vec<Light>,
    so_state: Vec<SelfOrgState>,
    vehicles: usize,
    tick: u64,
    moves: Vec<(u32, u32, u8)>,
}

/// Outcome of one tick.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TickReport {
    pub moved: usize,
    pub switches: usize,
}

impl TrafficGrid {
    /// Builds the grid and places `round(ρ · cells)` vehicles uniformly on
    /// street cells, using intersection cells only once streets are full.
    pub fn build(cfg: GridConfig, seed: u64) -> Result<Self> {
        let mut rng = derived(seed, &[label::TRAFFIC]);
        Self::build_with(cfg, &mut rng)
    }

    pub fn build_with(cfg: GridConfig, rng: &mut impl Rng) -> Result<Self> {
        cfg.validate()?;
        let total = cfg.total_cells();
        let vehicles = (cfg.density * total as f64).round() as usize;
        if vehicles > total {
            return Err(Error::param(format!(
                "{vehicles} vehicles do not fit in {total} cells"
            )));
        }
        let mut grid = Self::empty(cfg)?;
        let boxes = grid.junctions.len();
        let regular = total - boxes;
        if vehicles <= regular {
            for i in sample(rng, regular, vehicles) {
                grid.place(boxes + i, None);
            }
        } else {
            for i in boxes..total {
                grid.place(i, None);
            }
            for b in sample(rng, boxes, vehicles - regular) {
                let d = if rng.gen() { Dir::H } else { Dir::V };
                grid.place(b, Some(d));
            }
        }
        Ok(grid)
    }

    /// Grid with no vehicles.
    pub fn empty(cfg: GridConfig) -> Result<Self> {
        cfg.validate()?;
        let (n_h, n_v, bl) = (cfg.n_h, cfg.n_v, cfg.block_len);
        let boxes = n_h * n_v;
        let total = cfg.total_cells();
        let len_h = n_v * bl;
        let len_v = n_h * bl;
        let per_h = n_v * (bl - 1);
        let per_v = n_h * (bl - 1);
        let h_base = boxes;
        let v_base = boxes + n_h * per_h;

        let h_cell = |r: usize, p: usize| -> u32 {
            if p.is_multiple_of(bl) {
                (r * n_v + p / bl) as u32
            } else {
                (h_base + r * per_h + (p / bl) * (bl - 1) + p % bl - 1) as u32
            }
        };
        let v_cell = |c: usize, p: usize| -> u32 {
            if p.is_multiple_of(bl) {
                ((p / bl) * n_v + c) as u32
            } else {
                (v_base + c * per_v + (p / bl) * (bl - 1) + p % bl - 1) as u32
            }
        };

        let mut next = [vec![NONE; total], vec![NONE; total]];
        for r in 0..n_h {
            for p in 0..len_h {
                let to = if p + 1 < len_h {
                    h_cell(r, p + 1)
                } else {
                    h_cell(cfg.boundary.successor(r, n_h), 0)
                };
                next[Dir::H.idx()][h_cell(r, p) as usize] = to;
            }
        }
        for c in 0..n_v {
            for p in 0..len_v {
                let to = if p + 1 < len_v {
                    v_cell(c, p + 1)
                } else {
                    v_cell(cfg.boundary.successor(c, n_v), 0)
                };
                next[Dir::V.idx()][v_cell(c, p) as usize] = to;
            }
        }
        let mut prev = [vec![NONE; total], vec![NONE; total]];
        for d in 0..2 {
            for (from, &to) in next[d].iter().enumerate() {
                if to != NONE {
                    prev[d][to as usize] = from as u32;
                }
            }
        }

        let reach = |start: u32, links: &[u32], len: usize| -> Vec<u32> {
            let mut cells = Vec::with_capacity(len);
            let mut at = start;
            for _ in 0..len {
                at = links[at as usize];
                cells.push(at);
            }
            cells
        };
        let (d_in, e_out) = match cfg.controller {
            Controller::SelfOrg(p) => (p.d, p.e),
            _ => (0, 0),
        };
        let junctions: Vec<Junction> = (0..boxes)
            .map(|b| {
                let b32 = b as u32;
                Junction {
                    col: b % n_v,
                    inbound: [reach(b32, &prev[0], d_in), reach(b32, &prev[1], d_in)],
                    outbound: [reach(b32, &next[0], e_out), reach(b32, &next[1], e_out)],
                }
            })
            .collect();
        let mut junction_of = vec![NONE; total];
        for (b, slot) in junction_of.iter_mut().enumerate().take(boxes) {
            *slot = b as u32;
        }

        let mut grid = Self {
            occ: vec![0; total],
            arrived: vec![false; total],
            next,
            junction_of,
            lights: vec![Light::Green(Dir::H); boxes],
            so_state: vec![
                SelfOrgState {
                    counter: 0,
                    green_time: 0,
                    last_green: Dir::H,
                };
                boxes
            ],
            junctions,
            vehicles: 0,
            tick: 0,
            moves: Vec::new(),
            cfg,
        };
        grid.init_lights();
        Ok(grid)
    }

    fn init_lights(&mut self) {
        for b in 0..self.junctions.len() {
            self.lights[b] = match self.cfg.controller {
                Controller::Fixed { green } => Light::Green(green),
                Controller::GreenWave { period } => Light::Green(self.wave_phase(b, 0, period)),
                Controller::SelfOrg(_) => {
                    Light::Green(if (b / self.cfg.n_v + b % self.cfg.n_v).is_multiple_of(2) {
                        Dir::H
                    } else {
                        Dir::V
                    })
                }
            };
            if let Light::Green(d) = self.lights[b] {
                self.so_state[b].last_green = d;
            }
        }
    }

    fn wave_phase(&self, b: usize, t: u64, period: usize) -> Dir {
        let j = &self.junctions[b];
        let shift = (j.col * self.cfg.block_len) as u64;
        let period = period as u64;
        let phase = (t + period - shift % period) % period;
        if phase < period / 2 {
            Dir::H
        } else {
            Dir::V
        }
    }

    /// Direction a vehicle in cell `i` travels in.
    fn cell_dir(&self, i: usize) -> Option<Dir> {
        if self.junction_of[i] != NONE {
            None
        } else if self.next[Dir::H.idx()][i] != NONE {
            Some(Dir::H)
        } else {
            Some(Dir::V)
        }
    }

    /// Puts a vehicle in an empty cell. Intersection cells need a direction.
    fn place(&mut self, i: usize, dir: Option<Dir>) {
        debug_assert_eq!(self.occ[i], 0);
        let d = self
            .cell_dir(i)
            .or(dir)
            .expect("direction for an intersection cell");
        self.occ[i] = d.code();
        self.vehicles += 1;
    }

    /// Places a vehicle on street cell `pos` of street `street`.
    pub fn place_vehicle(&mut self, dir: Dir, street: usize, pos: usize) -> Result<()> {
        let i = self.street_cell(dir, street, pos)?;
        if self.occ[i] != 0 {
            return Err(Error::param(format!(
                "cell {pos} of street {street} is occupied"
            )));
        }
        self.occ[i] = dir.code();
        self.vehicles += 1;
        Ok(())
    }

    fn street_len(&self, dir: Dir) -> usize {
        match dir {
            Dir::H => self.cfg.n_v * self.cfg.block_len,
            Dir::V => self.cfg.n_h * self.cfg.block_len,
        }
    }

    /// Global id of a cell given by street coordinates.
    pub fn street_cell(&self, dir: Dir, street: usize, pos: usize) -> Result<usize> {
        let streets = match dir {
            Dir::H => self.cfg.n_h,
            Dir::V => self.cfg.n_v,
        };
        if street >= streets {
            return Err(Error::Index {
                index: street,
                len: streets,
            });
        }
        let len = self.street_len(dir);
        if pos >= len {
            return Err(Error::Index { index: pos, len });
        }
        let bl = self.cfg.block_len;
        let boxes = self.junctions.len();
        Ok(if pos.is_multiple_of(bl) {
            match dir {
                Dir::H => street * self.cfg.n_v + pos / bl,
                Dir::V => (pos / bl) * self.cfg.n_v + street,
            }
        } else {
            let (base, per) = match dir {
                Dir::H => (boxes, self.cfg.n_v * (bl - 1)),
                Dir::V => (
                    boxes + self.cfg.n_h * self.cfg.n_v * (bl - 1),
                    self.cfg.n_h * (bl - 1),
                ),
            };
            base + street * per + (pos / bl) * (bl - 1) + pos % bl - 1
        })
    }

    /// Occupancy of one street, in position order (intersection cells count
    /// only vehicles travelling along this street).
    pub fn street_occupancy(&self, dir: Dir, street: usize) -> Result<Vec<bool>> {
        (0..self.street_len(dir))
            .map(|p| {
                self.street_cell(dir, street, p)
                    .map(|i| self.occ[i] == dir.code())
            })
            .collect()
    }

    pub fn config(&self) -> &GridConfig {
        &self.cfg
    }

    pub fn vehicles(&self) -> usize {
        self.vehicles
    }

    pub fn cells(&self) -> usize {
        self.occ.len()
    }

    /// Vehicles per cell.
    pub fn density(&self) -> f64 {
        self.vehicles as f64 / self.occ.len() as f64
    }

    pub fn intersections(&self) -> usize {
        self.junctions.len()
    }

    pub fn lights(&self) -> &[Light] {
        &self.lights
    }

    pub fn tick(&self) -> u64 {
        self.tick
    }

    /// Whether the vehicle in cell `i` arrived during the last tick.
    pub fn arrived(&self, i: usize) -> bool {
        self.arrived[i]
    }

    fn count(&self, cells: &[u32], d: Dir) -> usize {
        cells
            .iter()
            .filter(|&&c| self.occ[c as usize] == d.code())
            .count()
    }

    fn stopped_within(&self, cells: &[u32]) -> bool {
        cells
            .iter()
            .any(|&c| self.occ[c as usize] != 0 && !self.arrived[c as usize])
    }

    /// Advances vehicles by one tick, then updates the lights.
    pub fn step(&mut self) -> Result<TickReport> {
        let mut moves = std::mem::take(&mut self.moves);
        moves.clear();
        for (i, &o) in self.occ.iter().enumerate() {
            if o == 0 {
                continue;
            }
            let d = if o == 1 { Dir::H } else { Dir::V };
            let to = self.next[d.idx()][i];
            if self.occ[to as usize] != 0 {
                continue;
            }
            let j = self.junction_of[to as usize];
            if j != NONE && !self.lights[j as usize].allows(d) {
                continue;
            }
            moves.push((i as u32, to, o));
        }
        self.arrived.fill(false);
        for &(from, _, _) in &moves {
            self.occ[from as usize] = 0;
        }
        for &(_, to, o) in &moves {
            self.occ[to as usize] = o;
            self.arrived[to as usize] = true;
        }
        let moved = moves.len();
        self.moves = moves;
        self.tick += 1;

        let found = self.occ.iter().filter(|&&o| o != 0).count();
        if found != self.vehicles {
            return Err(Error::Conservation {
                tick: self.tick,
                expected: self.vehicles,
                found,
            });
        }
        let switches = self.update_lights();
        Ok(TickReport { moved, switches })
    }

    fn update_lights(&mut self) -> usize {
        let mut switches = 0;
        for b in 0..self.junctions.len() {
            let before = self.lights[b];
            let after = match self.cfg.controller {
                Controller::Fixed { green } => Light::Green(green),
                Controller::GreenWave { period } => {
                    Light::Green(self.wave_phase(b, self.tick, period))
                }
                Controller::SelfOrg(p) => self.self_org_rule(b, p),
            };
            if after != before {
                switches += 1;
                self.lights[b] = after;
                let st = &mut self.so_state[b];
                st.counter = 0;
                st.green_time = 0;
                if let Light::Green(d) = after {
                    st.last_green = d;
                }
            }
        }
        switches
    }

    fn self_org_rule(&mut self, b: usize, p: SelfOrgParams) -> Light {
        let j = &self.junctions[b];
        let blocked = [
            self.stopped_within(&j.outbound[0]),
            self.stopped_within(&j.outbound[1]),
        ];
        // (vi) both exits blocked: both red until one clears.
        if blocked[0] && blocked[1] {
            return Light::BothRed;
        }
        let current = self.lights[b];
        let green = match current {
            Light::BothRed => {
                let keep = self.so_state[b].last_green;
                return Light::Green(if !blocked[keep.idx()] {
                    keep
                } else {
                    keep.other()
                });
            }
            Light::Green(g) => g,
        };
        let red = green.other();
        let approaching_green = self.count(&j.inbound[green.idx()], green);
        let approaching_red = self.count(&j.inbound[red.idx()], red);
        let near_green = self.count(&j.inbound[green.idx()][..p.r], green);

        let st = &mut self.so_state[b];
        st.green_time += 1;
        // (i) accumulate red-side demand.
        st.counter += approaching_red as u64;

        // (v) a stopped vehicle just past the green light.
        if blocked[green.idx()] {
            return Light::Green(red);
        }
        // (iv) nothing approaching the green, something waiting at the red.
        if approaching_green == 0 && approaching_red > 0 {
            return Light::Green(red);
        }
        // (ii) minimum green time, (iii) let a short platoon through.
        let platoon = near_green > 0 && near_green <= p.m;
        if st.green_time >= p.u && !platoon && st.counter > p.n {
            return Light::Green(red);
        }
        current
    }

    /// Runs `warmup` ticks unrecorded, then `horizon` recorded ticks.
    pub fn simulate(&mut self, warmup: u64, horizon: u64, probes: &Probes) -> Result<TrafficStats> {
        if horizon == 0 {
            return Err(Error::param("horizon must be at least 1"));
        }
        let boxes = self.junctions.len();
        let mut last_switch: Vec<Option<u64>> = vec![None; boxes];
        let mut light_intervals = Vec::new();
        let mut last_cross: Option<u64> = None;
        let mut intersection_intervals = Vec::new();
        let mut last_pass: Vec<Option<u64>> = vec![None; probes.street_cells.len()];
        let mut street_intervals = Vec::new();
        let mut moved_fraction = 0.0;

        for t in 0..warmup + horizon {
            let before = self.lights.clone();
            let rep = self.step()?;
            let recording = t >= warmup;
            if recording {
                moved_fraction += if self.vehicles == 0 {
                    1.0
                } else {
                    rep.moved as f64 / self.vehicles as f64
                };
            }
            let now = self.tick;
            if rep.switches > 0 {
                for b in 0..boxes {
                    if before[b] != self.lights[b] {
                        if let (true, Some(prev)) = (recording, last_switch[b]) {
                            light_intervals.push(now - prev);
                        }
                        last_switch[b] = Some(now);
                    }
                }
            }
            if self.arrived[probes.intersection] {
                if let (true, Some(prev)) = (recording, last_cross) {
                    intersection_intervals.push(now - prev);
                }
                last_cross = Some(now);
            }
            for (k, &c) in probes.street_cells.iter().enumerate() {
                if self.arrived[c] {
                    if let (true, Some(prev)) = (recording, last_pass[k]) {
                        street_intervals.push(now - prev);
                    }
                    last_pass[k] = Some(now);
                }
            }
        }
        let rho = self.density();
        let v = moved_fraction / horizon as f64;
        Ok(TrafficStats {
            density: rho,
            v,
            j: v * rho,
            light: IntervalMeasures::of(&light_intervals)?,
            intersection: IntervalMeasures::of(&intersection_intervals)?,
            street: IntervalMeasures::of(&street_intervals)?,
            phase: phase_label(rho, v),
            light_intervals,
            intersection_intervals,
            street_intervals,
        })
    }

    /// Picks the measured intersection and street cells.
    pub fn random_probes(&self, street_cells: usize, rng: &mut impl Rng) -> Probes {
        let boxes = self.junctions.len();
        let regular: Vec<usize> = (boxes..self.occ.len()).collect();
        let picked = regular
            .choose_multiple(rng, street_cells.min(regular.len()))
            .copied()
            .collect();
        Probes {
            intersection: rng.gen_range(0..boxes),
            street_cells: picked,
        }
    }
}

/// Cells whose arrivals are timed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Probes {
    pub intersection: usize,
    pub street_cells: Vec<usize>,
}

/// Number of base-10 classes used for interval series.
pub const INTERVAL_CLASSES: usize = 10;

/// E/S/C of an interval series discretized to base 10 over its own range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntervalMeasures {
    pub count: usize,
    pub measures: MeasureSet,
    /// Empty or constant series; reported as `E = 0`.
    pub degenerate: bool,
}

impl IntervalMeasures {
    pub fn of(intervals: &[u64]) -> Result<Self> {
        let min = intervals.iter().copied().min();
        let max = intervals.iter().copied().max();
        match (min, max) {
            (Some(lo), Some(hi)) if hi > lo => {
                let values: Vec<f64> = intervals.iter().map(|&x| x as f64).collect();
                let s = normalize_to_classes(&values, INTERVAL_CLASSES, lo as f64, hi as f64)?;
                Ok(Self {
                    count: intervals.len(),
                    measures: MeasureSet::of_series(&s)?,
                    degenerate: false,
                })
            }
            _ => Ok(Self {
                count: intervals.len(),
                measures: MeasureSet::from_emergence(0.0)?,
                degenerate: true,
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    FreeFlow,
    QuasiFreeFlow,
    Underutilized,
    FullCapacity,
    Overutilized,
    QuasiGridlock,
    Gridlock,
}

/// Flow-optimal reference for an isolated intersection, `min(ρ, 1/4, 1 - ρ)`.
pub fn optimal_flow(rho: f64) -> f64 {
    rho.min(0.25).min(1.0 - rho).max(0.0)
}

/// Velocity matching [`optimal_flow`]; 1 for an empty grid.
pub fn optimal_velocity(rho: f64) -> f64 {
    if rho <= 0.0 {
        1.0
    } else {
        optimal_flow(rho) / rho
    }
}

/// Heuristic phase from velocity and flow relative to the optimum.
pub fn phase_label(rho: f64, v: f64) -> Phase {
    if v >= 1.0 - 1e-9 {
        return Phase::FreeFlow;
    }
    if v <= 1e-9 {
        return Phase::Gridlock;
    }
    if v >= 0.9 {
        return Phase::QuasiFreeFlow;
    }
    if v < 0.05 {
        return Phase::QuasiGridlock;
    }
    let j = v * rho;
    if j >= 0.9 * optimal_flow(rho) {
        Phase::FullCapacity
    } else if rho < 0.5 {
        Phase::Underutilized
    } else {
        Phase::Overutilized
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrafficStats {
    pub density: f64,
    pub v: f64,
    pub j: f64,
    pub light: IntervalMeasures,
    pub intersection: IntervalMeasures,
    pub street: IntervalMeasures,
    pub phase: Phase,
    #[serde(skip)]
    pub light_intervals: Vec<u64>,
    #[serde(skip)]
    pub intersection_intervals: Vec<u64>,
    #[serde(skip)]
    pub street_intervals: Vec<u64>,
}

/// Mean flow of a single rule-184 ring after `warmup` ticks.
pub fn ring_flow(cells: usize, density: f64, warmup: u64, horizon: u64, seed: u64) -> Result<f64> {
    if cells < 3 {
        return Err(Error::param("ring needs at least 3 cells"));
    }
    if horizon == 0 {
        return Err(Error::param("horizon must be at least 1"));
    }
    let vehicles = (density * cells as f64).round() as usize;
    let mut rng = derived(seed, &[label::TRAFFIC, 184]);
    let mut ring = vec![false; cells];
    for i in sample(&mut rng, cells, vehicles.min(cells)) {
        ring[i] = true;
    }
    let mut moved_total = 0usize;
    let mut next = ring.clone();
    for t in 0..warmup + horizon {
        let mut moved = 0;
        for i in 0..cells {
            let ahead = (i + 1) % cells;
            let behind = (i + cells - 1) % cells;
            next[i] = (ring[i] && ring[ahead]) || (!ring[i] && ring[behind]);
            if ring[i] && !ring[ahead] {
                moved += 1;
            }
        }
        std::mem::swap(&mut ring, &mut next);
        if t >= warmup {
            moved_total += moved;
        }
    }
    Ok(moved_total as f64 / (cells as f64 * horizon as f64))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub grid: GridConfig,
    pub densities: Vec<f64>,
    pub warmup: u64,
    pub horizon: u64,
    pub street_probes: usize,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            grid: GridConfig::default(),
            densities: (0..=20).map(|i| i as f64 / 20.0).collect(),
            warmup: 1000,
            horizon: 10_000,
            street_probes: 10,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub controller: &'static str,
    pub target_density: f64,
    pub v_opt: f64,
    pub j_opt: f64,
    pub stats: TrafficStats,
}

/// One simulation per density, in the given order.
pub fn density_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.grid.validate()?;
    if let Some(&bad) = cfg.densities.iter().find(|d| !(0.0..=1.0).contains(*d)) {
        return Err(Error::param(format!("density {bad} is outside [0, 1]")));
    }
    cfg.densities
        .par_iter()
        .enumerate()
        .map(|(k, &rho)| {
            let mut rng = derived(cfg.seed, &[label::TRAFFIC, k as u64]);
            let grid_cfg = GridConfig {
                density: rho,
                ..cfg.grid.clone()
            };
            let mut grid = TrafficGrid::build_with(grid_cfg, &mut rng)?;
            let probes = grid.random_probes(cfg.street_probes, &mut rng);
            let stats = grid.simulate(cfg.warmup, cfg.horizon, &probes)?;
            let actual = stats.density;
            Ok(SweepRow {
                controller: cfg.grid.controller.name(),
                target_density: rho,
                v_opt: optimal_velocity(actual),
                j_opt: optimal_flow(actual),
                stats,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(controller: Controller, density: f64) -> GridConfig {
        GridConfig {
            n_h: 3,
            n_v: 4,
            block_len: 6,
            density,
            boundary: Boundary::NonOrientable,
            controller,
        }
    }

    #[test]
    fn cell_ids_are_a_bijection() {
        let g = TrafficGrid::empty(small(Controller::Fixed { green: Dir::H }, 0.0)).unwrap();
        let mut seen = vec![0u8; g.cells()];
        for r in 0..3 {
            for p in 0..24 {
                seen[g.street_cell(Dir::H, r, p).unwrap()] += 1;
            }
        }
        for c in 0..4 {
            for p in 0..18 {
                seen[g.street_cell(Dir::V, c, p).unwrap()] += 1;
            }
        }
        // intersection cells are shared by two streets
        assert!(seen[..12].iter().all(|&s| s == 2));
        assert!(seen[12..].iter().all(|&s| s == 1));
    }

    #[test]
    fn non_orientable_pairing_reverses_street_index() {
        let g = TrafficGrid::empty(small(Controller::Fixed { green: Dir::H }, 0.0)).unwrap();
        let last = g.street_cell(Dir::H, 0, 23).unwrap();
        assert_eq!(
            g.next[0][last] as usize,
            g.street_cell(Dir::H, 2, 0).unwrap()
        );
        let last_v = g.street_cell(Dir::V, 1, 17).unwrap();
        assert_eq!(
            g.next[1][last_v] as usize,
            g.street_cell(Dir::V, 2, 0).unwrap()
        );
    }

    #[test]
    fn density_extremes() {
        let probes = |g: &TrafficGrid| g.random_probes(3, &mut derived(0, &[]));
        let mut empty = TrafficGrid::build(small(Controller::self_org(6), 0.0), 1).unwrap();
        let p = probes(&empty);
        let s = empty.simulate(5, 20, &p).unwrap();
        assert_eq!((s.v, s.j), (1.0, 0.0));

        let mut full = TrafficGrid::build(small(Controller::self_org(6), 1.0), 1).unwrap();
        assert_eq!(full.vehicles(), full.cells());
        let p = probes(&full);
        let s = full.simulate(5, 20, &p).unwrap();
        assert_eq!((s.v, s.j), (0.0, 0.0));
        assert_eq!(s.phase, Phase::Gridlock);
    }

    #[test]
    fn red_light_holds_the_approach_cell() {
        let mut g = TrafficGrid::empty(small(Controller::Fixed { green: Dir::V }, 0.0)).unwrap();
        // one cell before intersection (0, 1) on horizontal street 0
        g.place_vehicle(Dir::H, 0, 5).unwrap();
        for _ in 0..10 {
            assert_eq!(g.step().unwrap().moved, 0);
        }
        assert!(g.street_occupancy(Dir::H, 0).unwrap()[5]);
    }

    #[test]
    fn vehicle_inside_a_red_intersection_still_leaves() {
        let mut g = TrafficGrid::empty(small(Controller::Fixed { green: Dir::V }, 0.0)).unwrap();
        g.place_vehicle(Dir::H, 0, 6).unwrap();
        assert_eq!(g.step().unwrap().moved, 1);
        assert!(g.street_occupancy(Dir::H, 0).unwrap()[7]);
    }

    #[test]
    fn empty_selforg_grid_never_switches() {
        let mut g = TrafficGrid::empty(small(Controller::self_org(6), 0.0)).unwrap();
        let start = g.lights().to_vec();
        for _ in 0..50 {
            assert_eq!(g.step().unwrap().switches, 0);
        }
        assert_eq!(g.lights(), &start[..]);
    }

    #[test]
    fn lone_vehicle_triggers_demand_switch() {
        let params = SelfOrgParams {
            n: 1000,
            ..SelfOrgParams::defaults(6)
        };
        let mut g = TrafficGrid::empty(small(Controller::SelfOrg(params), 0.0)).unwrap();
        // intersection (0, 1) starts with vertical green: (0 + 1) is odd
        assert_eq!(g.lights()[1], Light::Green(Dir::V));
        g.place_vehicle(Dir::H, 0, 4).unwrap();
        g.step().unwrap();
        assert_eq!(g.lights()[1], Light::Green(Dir::H));
    }

    #[test]
    fn config_errors() {
        let mut p = SelfOrgParams::defaults(6);
        p.e = 6;
        assert!(matches!(
            TrafficGrid::empty(small(Controller::SelfOrg(p), 0.0)),
            Err(Error::Config(_))
        ));
        let mut cfg = small(Controller::self_org(6), 0.0);
        cfg.block_len = 2;
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        let cfg = small(Controller::self_org(6), 1.5);
        assert!(matches!(cfg.validate(), Err(Error::Parameter(_))));
    }

    #[test]
    fn green_wave_offsets_follow_travel_time() {
        let bl = 6;
        let g = TrafficGrid::empty(small(Controller::green_wave(bl), 0.0)).unwrap();
        // A free vehicle reaching intersection (0, 0) at tick t reaches
        // (0, 1) at tick t + bl: both must show the same phase.
        for t in 0..40u64 {
            assert_eq!(
                g.wave_phase(0, t, 2 * bl),
                g.wave_phase(1, t + bl as u64, 2 * bl)
            );
            assert_eq!(
                g.wave_phase(5, t, 2 * bl),
                g.wave_phase(6, t + bl as u64, 2 * bl)
            );
        }
    }

    #[test]
    fn interval_measures_degenerate_cases() {
        let m = IntervalMeasures::of(&[5, 5, 5]).unwrap();
        assert!(m.degenerate);
        assert_eq!(
            (m.measures.e(), m.measures.s(), m.measures.c()),
            (0.0, 1.0, 0.0)
        );
        let m = IntervalMeasures::of(&[1, 10]).unwrap();
        assert!(!m.degenerate);
        // two of ten classes used equally
        assert!((m.measures.e() - 1.0 / 10f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn optimum_reference() {
        assert_eq!(optimal_flow(0.1), 0.1);
        assert_eq!(optimal_flow(0.5), 0.25);
        assert!((optimal_flow(0.9) - 0.1).abs() < 1e-12);
        assert_eq!(optimal_velocity(0.0), 1.0);
    }

    #[test]
    fn ring_flow_peaks_at_half() {
        let j = ring_flow(200, 0.5, 200, 200, 3).unwrap();
        assert!((j - 0.5).abs() < 1e-12);
        let j = ring_flow(200, 0.25, 200, 200, 3).unwrap();
        assert!((j - 0.25).abs() < 1e-12);
    }
}
