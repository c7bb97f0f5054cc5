//! Run configuration, Weyl-chamber scans and the command implementations
//! behind the `so4top` binary.
//!
//! Every command returns its serialized output as a string so that output is
//! byte-for-byte reproducible from a [`RunConfig`].

use std::fmt::Write as _;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{equilibrium_residual, integrate, Drift, Flow, IntegratorConfig, Invariants, Trajectory};
use crate::equilibria::{
    cartan_point, classify_k0_k1, s_curve_sample, weyl_orbits, EquilibriumKind, Family, WeylLabel,
};
use crate::error::{Error, Result};
use crate::lie::{BodyState, InertiaSpectrum, OrbitParams, Regularity};
use crate::spectral::Williamson;
use crate::stability::{
    analyze_s_equilibrium, classify_all_cartan, classify_weyl_point, frontier_slopes, EnergyCasimirReport,
    FrontierSlopes, StabilityReport, Subcase, T1BAParams,
};
use crate::verify::{run_suite, VerifyReport, VerifySpec};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Simulate,
    Equilibria,
    Classify,
    Scan,
    Verify,
}

/// `steps` evenly spaced values from `min` to `max` inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        (0..self.steps)
            .map(|k| self.min + (self.max - self.min) * k as f64 / (self.steps - 1) as f64)
            .collect()
    }

    fn validate(&self, name: &str) -> Result<()> {
        if self.steps == 0 || !self.min.is_finite() || !self.max.is_finite() || self.max < self.min {
            return Err(Error::InvalidConfig(format!("{name} range {self:?} is invalid")));
        }
        Ok(())
    }

    /// Parse `min:max:steps`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::InvalidConfig(format!("range '{s}' is not min:max:steps"));
        if parts.len() != 3 {
            return Err(bad());
        }
        Ok(Self {
            min: parts[0].trim().parse().map_err(|_| bad())?,
            max: parts[1].trim().parse().map_err(|_| bad())?,
            steps: parts[2].trim().parse().map_err(|_| bad())?,
        })
    }
}

/// Grid over `c1` and the slope `c2 / c1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub c1: Range,
    pub slope: Range,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        self.c1.validate("c1")?;
        self.slope.validate("slope")?;
        if self.c1.min <= 0.0 {
            return Err(Error::InvalidConfig("c1 values must be positive".into()));
        }
        if self.slope.min < -1.0 || self.slope.max > 1.0 {
            return Err(Error::InvalidConfig("slope c2/c1 must lie in [-1, 1]".into()));
        }
        Ok(())
    }

    /// Parse `c1min:c1max:n1,smin:smax:n2`.
    pub fn parse(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| Error::InvalidConfig(format!("grid '{s}' is not C1RANGE,SLOPERANGE")))?;
        Ok(Self { c1: Range::parse(a)?, slope: Range::parse(b)? })
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { c1: Range { min: 1.0, max: 1.0, steps: 1 }, slope: Range { min: -1.0, max: 1.0, steps: 201 } }
    }
}

/// Starting point of a simulation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialState {
    State { coords: [f64; 6] },
    /// A Cartan point of the configured orbit, displaced by a seeded random
    /// vector of length `perturbation`.
    Cartan { family: Family, label: WeylLabel, perturbation: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimulateSpec {
    pub flow: Flow,
    pub initial: InitialState,
}

impl Default for SimulateSpec {
    fn default() -> Self {
        Self { flow: Flow::H, initial: InitialState::Cartan { family: Family::T3, label: WeylLabel::Ab, perturbation: 0.0 } }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Relative `H` drift that aborts a simulation.
    pub max_h_drift: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitSpec {
    pub c1: f64,
    pub c2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub lambda: [f64; 4],
    pub orbit: Option<OrbitSpec>,
    pub integrator: IntegratorConfig,
    pub simulate: SimulateSpec,
    pub grid: Option<GridSpec>,
    pub tolerances: Tolerances,
    pub output: OutputSpec,
    pub seed: u64,
    /// Interior samples of each `s±` segment for `equilibria` and `classify`.
    pub s_samples: usize,
    pub verify: VerifySpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            lambda: [4.0, 3.0, 2.0, 1.0],
            orbit: None,
            integrator: IntegratorConfig::default(),
            simulate: SimulateSpec::default(),
            grid: None,
            tolerances: Tolerances::default(),
            output: OutputSpec::default(),
            seed: 1,
            s_samples: 4,
            verify: VerifySpec::default(),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn spectrum(&self) -> Result<InertiaSpectrum> {
        InertiaSpectrum::new(self.lambda)
    }

    fn regular_orbit(&self) -> Result<OrbitParams> {
        let o = self
            .orbit
            .ok_or_else(|| Error::InvalidConfig("this command needs an orbit (c1, c2)".into()))?;
        OrbitParams::regular(o.c1, o.c2)
    }
}

/// Output of a command: serialized text and the process exit code.
#[derive(Clone, Debug, PartialEq)]
pub struct CommandOutput {
    pub text: String,
    pub exit_code: i32,
}

impl CommandOutput {
    fn ok(text: String) -> Self {
        Self { text, exit_code: 0 }
    }
}

pub fn run(cfg: &RunConfig, command: Command) -> Result<CommandOutput> {
    let j = cfg.spectrum()?;
    match command {
        Command::Simulate => cmd_simulate(cfg, &j),
        Command::Equilibria => cmd_equilibria(cfg, &j),
        Command::Classify => cmd_classify(cfg, &j),
        Command::Scan => cmd_scan(cfg, &j),
        Command::Verify => cmd_verify(cfg),
    }
}

/// Float formatting used in every CSV: 17 significant digits.
fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_f(s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::InvalidConfig(format!("'{s}' is not a number")))
}

fn json_pretty<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

/// Metadata line `# {json}` placed before a CSV header.
fn csv_meta<T: Serialize>(meta: &T) -> Result<String> {
    Ok(format!("# {}\n", serde_json::to_string(meta)?))
}

fn split_meta(text: &str) -> Result<(&str, &str)> {
    let rest = text
        .strip_prefix("# ")
        .ok_or_else(|| Error::InvalidConfig("CSV is missing its '# ' metadata line".into()))?;
    Ok(rest.split_once('\n').unwrap_or((rest, "")))
}

// ---------------------------------------------------------------- simulate

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct TrajectoryMeta {
    schema_version: u32,
    flow: Flow,
    initial: Invariants,
}

const TRAJECTORY_HEADER: [&str; 12] = ["t", "x1", "x2", "x3", "y1", "y2", "y3", "dC1", "dC2", "dH", "dI", ""];

impl Trajectory {
    pub fn to_csv(&self) -> Result<String> {
        let mut out = csv_meta(&TrajectoryMeta { schema_version: SCHEMA_VERSION, flow: self.flow, initial: self.initial })?;
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&TRAJECTORY_HEADER[..11])?;
        for ((t, s), d) in self.times.iter().zip(&self.states).zip(&self.drifts) {
            let mut row = vec![fmt_f(*t)];
            row.extend(s.coords().iter().map(|c| fmt_f(*c)));
            row.extend([d.c1, d.c2, d.h, d.i].iter().map(|c| fmt_f(*c)));
            w.write_record(&row)?;
        }
        out.push_str(&String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.into_error()))?).unwrap_or_default());
        Ok(out)
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let (meta, body) = split_meta(text)?;
        let meta: TrajectoryMeta = serde_json::from_str(meta)?;
        let mut r = csv::Reader::from_reader(body.as_bytes());
        let mut traj = Trajectory { flow: meta.flow, initial: meta.initial, times: vec![], states: vec![], drifts: vec![] };
        for rec in r.records() {
            let rec = rec?;
            let v: Vec<f64> = rec.iter().map(parse_f).collect::<Result<_>>()?;
            if v.len() != 11 {
                return Err(Error::InvalidConfig(format!("trajectory row has {} fields", v.len())));
            }
            traj.times.push(v[0]);
            traj.states.push(BodyState::from_coords([v[1], v[2], v[3], v[4], v[5], v[6]]));
            traj.drifts.push(Drift { c1: v[7], c2: v[8], h: v[9], i: v[10] });
        }
        Ok(traj)
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    command: Command,
    lambda: [f64; 4],
    #[serde(flatten)]
    data: &'a T,
}

fn unit_random(rng: &mut ChaCha8Rng) -> [f64; 6] {
    loop {
        let v: [f64; 6] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if n > 0.1 && n <= 1.0 {
            return v.map(|c| c / n);
        }
    }
}

/// Resolve the configured initial state.
pub fn initial_state(cfg: &RunConfig) -> Result<BodyState> {
    match cfg.simulate.initial {
        InitialState::State { coords } => {
            let s = BodyState::from_coords(coords);
            if !s.is_finite() {
                return Err(Error::InvalidConfig("initial state has non-finite coordinates".into()));
            }
            Ok(s)
        }
        InitialState::Cartan { family, label, perturbation } => {
            let orbit = cfg.regular_orbit()?;
            let base = cartan_point(family, label, &orbit)?.state;
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let d = BodyState::from_coords(unit_random(&mut rng));
            Ok(base + d * perturbation)
        }
    }
}

pub fn cmd_simulate(cfg: &RunConfig, j: &InertiaSpectrum) -> Result<CommandOutput> {
    let s0 = initial_state(cfg)?;
    let mut ic = cfg.integrator;
    if cfg.tolerances.max_h_drift.is_some() {
        ic.max_h_drift = cfg.tolerances.max_h_drift;
    }
    let traj = integrate(&s0, j, &ic, cfg.simulate.flow)?;
    let text = match cfg.output.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Csv => traj.to_csv()?,
        OutputFormat::Json => json_pretty(&Envelope {
            schema_version: SCHEMA_VERSION,
            command: Command::Simulate,
            lambda: j.lambda(),
            data: &traj,
        })?,
    };
    Ok(CommandOutput::ok(text))
}

// -------------------------------------------------------------- equilibria

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumRecord {
    pub family: Family,
    pub weyl_label: Option<WeylLabel>,
    pub state: BodyState,
    pub s_params: Option<[f64; 3]>,
    pub residual: f64,
    pub kind: EquilibriumKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquilibriaListing {
    pub orbit: OrbitParams,
    pub cartan_ab: (f64, f64),
    pub equilibria: Vec<EquilibriumRecord>,
}

pub fn list_equilibria(j: &InertiaSpectrum, orbit: &OrbitParams, s_samples: usize) -> Result<EquilibriaListing> {
    let mut all = Vec::new();
    for w in weyl_orbits(orbit)? {
        all.extend(w.points);
    }
    all.extend(s_curve_sample(j, orbit, s_samples));
    let equilibria = all
        .iter()
        .map(|e| {
            Ok(EquilibriumRecord {
                family: e.family,
                weyl_label: e.weyl_label,
                state: e.state,
                s_params: e.s_params,
                residual: equilibrium_residual(&e.state, j),
                kind: classify_k0_k1(e, j)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(EquilibriaListing { orbit: *orbit, cartan_ab: crate::equilibria::cartan_ab(orbit)?, equilibria })
}

pub fn cmd_equilibria(cfg: &RunConfig, j: &InertiaSpectrum) -> Result<CommandOutput> {
    let orbit = cfg.regular_orbit()?;
    let listing = list_equilibria(j, &orbit, cfg.s_samples)?;
    let text = match cfg.output.format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => json_pretty(&Envelope {
            schema_version: SCHEMA_VERSION,
            command: Command::Equilibria,
            lambda: j.lambda(),
            data: &listing,
        })?,
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["family", "weyl_label", "x1", "x2", "x3", "y1", "y2", "y3", "residual", "kind"])?;
            for e in &listing.equilibria {
                let mut row = vec![format!("{:?}", e.family), e.weyl_label.map(|l| format!("{l:?}")).unwrap_or_default()];
                row.extend(e.state.coords().iter().map(|c| fmt_f(*c)));
                row.push(fmt_f(e.residual));
                row.push(format!("{:?}", e.kind));
                w.write_record(&row)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.into_error()))?).unwrap_or_default()
        }
    };
    Ok(CommandOutput::ok(text))
}

// ---------------------------------------------------------------- classify

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub orbit: OrbitParams,
    pub ratio: f64,
    pub frontier: FrontierSlopes,
    pub t1_ba: T1BAParams,
    pub cartan: Vec<StabilityReport>,
    pub s_curve: Vec<EnergyCasimirReport>,
}

pub fn classify_orbit(j: &InertiaSpectrum, orbit: &OrbitParams, s_samples: usize) -> Result<Classification> {
    let cartan = classify_all_cartan(j, orbit)?;
    let ratio = cartan[0].ratio;
    let s_curve = s_curve_sample(j, orbit, s_samples)
        .iter()
        .map(|e| analyze_s_equilibrium(&e.state, j))
        .collect::<Result<_>>()?;
    Ok(Classification {
        orbit: *orbit,
        ratio,
        frontier: frontier_slopes(j),
        t1_ba: T1BAParams::new(j, ratio),
        cartan,
        s_curve,
    })
}

pub fn cmd_classify(cfg: &RunConfig, j: &InertiaSpectrum) -> Result<CommandOutput> {
    let orbit = cfg.regular_orbit()?;
    let c = classify_orbit(j, &orbit, cfg.s_samples)?;
    if cfg.output.format == Some(OutputFormat::Csv) {
        return Err(Error::InvalidConfig("classify writes JSON reports only".into()));
    }
    Ok(CommandOutput::ok(json_pretty(&Envelope {
        schema_version: SCHEMA_VERSION,
        command: Command::Classify,
        lambda: j.lambda(),
        data: &c,
    })?))
}

// -------------------------------------------------------------------- scan

/// Which `s±` family the sign of `c2` allows on the orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SFamily {
    Plus,
    Minus,
    None,
}

impl SFamily {
    pub fn of_c2(c2: f64, c1: f64) -> Self {
        if c2.abs() <= crate::tol::REGULARITY_REL * c1.abs().max(c2.abs()) {
            SFamily::None
        } else if c2 > 0.0 {
            SFamily::Plus
        } else {
            SFamily::Minus
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellTypes {
    pub ratio: f64,
    pub t1_ab: Williamson,
    pub t1_ba: Williamson,
    pub t1_ba_subcase: Subcase,
    pub t2: Williamson,
    pub t3: Williamson,
    /// Numerical linearizations agree with the case analysis in all four columns.
    pub spectral_agrees: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanCell {
    pub i: usize,
    pub j: usize,
    pub c1: f64,
    pub c2: f64,
    pub slope: f64,
    /// `None` outside the open chamber `c1 > |c2|`.
    pub types: Option<CellTypes>,
    pub s_family: SFamily,
    /// Whether a sampled `s±` curve point exists on the orbit.
    pub s_nonempty: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub schema_version: u32,
    pub lambda: [f64; 4],
    pub frontier: FrontierSlopes,
    pub grid: GridSpec,
    pub cells: Vec<ScanCell>,
}

fn classify_cell(j: &InertiaSpectrum, i: usize, k: usize, c1: f64, slope: f64) -> Result<ScanCell> {
    let c2 = c1 * slope;
    let s_family = SFamily::of_c2(c2, c1);
    let mut cell = ScanCell { i, j: k, c1, c2, slope, types: None, s_family, s_nonempty: false };
    let orbit = match OrbitParams::new(c1, c2) {
        Ok(o) if o.regularity() == Regularity::Regular => o,
        _ => return Ok(cell),
    };
    let r = |f, l| classify_weyl_point(j, &orbit, f, l);
    let ab = r(Family::T1, WeylLabel::Ab)?;
    let ba = r(Family::T1, WeylLabel::Ba)?;
    let t2 = r(Family::T2, WeylLabel::Ab)?;
    let t3 = r(Family::T3, WeylLabel::Ab)?;
    cell.types = Some(CellTypes {
        ratio: ab.ratio,
        t1_ab: ab.williamson,
        t1_ba: ba.williamson,
        t1_ba_subcase: ba.subcase.unwrap_or(Subcase::SaddleSaddle),
        t2: t2.williamson,
        t3: t3.williamson,
        spectral_agrees: [&ab, &ba, &t2, &t3].iter().all(|r| r.consistent()),
    });
    cell.s_nonempty = !s_curve_sample(j, &orbit, 1).is_empty();
    Ok(cell)
}

/// Classify every cell of the grid; rows are ordered by `(i, j)`.
pub fn scan_grid(j: &InertiaSpectrum, grid: &GridSpec) -> Result<ScanGrid> {
    grid.validate()?;
    let c1s = grid.c1.values();
    let slopes = grid.slope.values();
    let idx: Vec<(usize, usize)> = (0..c1s.len()).flat_map(|i| (0..slopes.len()).map(move |k| (i, k))).collect();
    let cells = idx
        .par_iter()
        .map(|&(i, k)| classify_cell(j, i, k, c1s[i], slopes[k]))
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanGrid { schema_version: SCHEMA_VERSION, lambda: j.lambda(), frontier: frontier_slopes(j), grid: *grid, cells })
}

const SCAN_HEADER: [&str; 14] = [
    "i", "j", "c1", "c2", "slope", "ratio", "t1_ab", "t1_ba", "t1_ba_subcase", "t2", "t3", "spectral_agrees",
    "s_family", "s_nonempty",
];

fn enum_str<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string(v)?.trim_matches('"').to_string())
}

fn enum_parse<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T> {
    Ok(serde_json::from_str(&format!("\"{s}\""))?)
}

#[derive(Serialize, Deserialize)]
struct ScanMeta {
    schema_version: u32,
    lambda: [f64; 4],
    frontier: FrontierSlopes,
    grid: GridSpec,
}

impl ScanGrid {
    pub fn to_csv(&self) -> Result<String> {
        let mut out = csv_meta(&ScanMeta {
            schema_version: self.schema_version,
            lambda: self.lambda,
            frontier: self.frontier,
            grid: self.grid,
        })?;
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(SCAN_HEADER)?;
        for c in &self.cells {
            let mut row = vec![c.i.to_string(), c.j.to_string(), fmt_f(c.c1), fmt_f(c.c2), fmt_f(c.slope)];
            match &c.types {
                Some(t) => {
                    row.push(fmt_f(t.ratio));
                    for w in [t.t1_ab, t.t1_ba] {
                        row.push(enum_str(&w)?);
                    }
                    row.push(enum_str(&t.t1_ba_subcase)?);
                    row.push(enum_str(&t.t2)?);
                    row.push(enum_str(&t.t3)?);
                    row.push(t.spectral_agrees.to_string());
                }
                None => row.extend(std::iter::repeat_n(String::new(), 7)),
            }
            row.push(enum_str(&c.s_family)?);
            row.push(c.s_nonempty.to_string());
            w.write_record(&row)?;
        }
        out.push_str(&String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.into_error()))?).unwrap_or_default());
        Ok(out)
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let (meta, body) = split_meta(text)?;
        let meta: ScanMeta = serde_json::from_str(meta)?;
        let mut r = csv::Reader::from_reader(body.as_bytes());
        let mut cells = Vec::new();
        let bad = |what: &str| Error::InvalidConfig(format!("bad scan row: {what}"));
        for rec in r.records() {
            let rec = rec?;
            if rec.len() != SCAN_HEADER.len() {
                return Err(bad("field count"));
            }
            let types = if rec[5].is_empty() {
                None
            } else {
                Some(CellTypes {
                    ratio: parse_f(&rec[5])?,
                    t1_ab: enum_parse(&rec[6])?,
                    t1_ba: enum_parse(&rec[7])?,
                    t1_ba_subcase: enum_parse(&rec[8])?,
                    t2: enum_parse(&rec[9])?,
                    t3: enum_parse(&rec[10])?,
                    spectral_agrees: rec[11].parse().map_err(|_| bad("spectral_agrees"))?,
                })
            };
            cells.push(ScanCell {
                i: rec[0].parse().map_err(|_| bad("i"))?,
                j: rec[1].parse().map_err(|_| bad("j"))?,
                c1: parse_f(&rec[2])?,
                c2: parse_f(&rec[3])?,
                slope: parse_f(&rec[4])?,
                types,
                s_family: enum_parse(&rec[12])?,
                s_nonempty: rec[13].parse().map_err(|_| bad("s_nonempty"))?,
            });
        }
        Ok(ScanGrid { schema_version: meta.schema_version, lambda: meta.lambda, frontier: meta.frontier, grid: meta.grid, cells })
    }
}

/// A change of `M1_{b,a}` type between neighbouring slope cells.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Boundary {
    pub i: usize,
    /// Midpoint of `|c2| / c1` between the two cells.
    pub abs_slope: f64,
    pub cell_width: f64,
    pub from: Williamson,
    pub to: Williamson,
}

/// Type changes of the `M1_{b,a}` column along each row with `c2 >= 0`,
/// ignoring isolated degenerate cells.
pub fn t1_ba_boundaries(grid: &ScanGrid) -> Vec<Boundary> {
    let mut out = Vec::new();
    let rows = grid.grid.c1.steps;
    for i in 0..rows {
        let row: Vec<&ScanCell> = grid
            .cells
            .iter()
            .filter(|c| c.i == i && c.c2 >= 0.0)
            .filter(|c| c.types.is_some_and(|t| t.t1_ba != Williamson::Degenerate))
            .collect();
        for w in row.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (ta, tb) = (a.types.map(|t| t.t1_ba), b.types.map(|t| t.t1_ba));
            if let (Some(ta), Some(tb)) = (ta, tb) {
                if ta != tb {
                    out.push(Boundary {
                        i,
                        abs_slope: 0.5 * (a.slope.abs() + b.slope.abs()),
                        cell_width: (b.slope - a.slope).abs(),
                        from: ta,
                        to: tb,
                    });
                }
            }
        }
    }
    out
}

pub fn cmd_scan(cfg: &RunConfig, j: &InertiaSpectrum) -> Result<CommandOutput> {
    let grid = cfg.grid.unwrap_or_default();
    let scan = scan_grid(j, &grid)?;
    let text = match cfg.output.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Csv => scan.to_csv()?,
        OutputFormat::Json => json_pretty(&scan)?,
    };
    Ok(CommandOutput::ok(text))
}

// ------------------------------------------------------------------ verify

pub fn cmd_verify(cfg: &RunConfig) -> Result<CommandOutput> {
    let report: VerifyReport = run_suite(cfg.seed, &cfg.verify);
    let text = match cfg.output.format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => json_pretty(&report)?,
        OutputFormat::Csv => {
            let mut s = String::from("check,passed,worst,tolerance,samples\n");
            for c in &report.checks {
                let _ = writeln!(s, "{},{},{},{},{}", c.name, c.passed, fmt_f(c.worst), fmt_f(c.tolerance), c.samples);
            }
            s
        }
    };
    Ok(CommandOutput { text, exit_code: if report.passed { 0 } else { 2 } })
}
