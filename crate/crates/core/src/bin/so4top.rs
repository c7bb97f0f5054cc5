use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use so4top::dynamics::{Flow, Scheme};
use so4top::equilibria::{Family, WeylLabel};
use so4top::scan::{self, Command, GridSpec, InitialState, OrbitSpec, OutputFormat, RunConfig};
use so4top::Error;

/// Stability of equilibria of the free rigid body on so(4).
#[derive(Parser, Debug)]
#[command(name = "so4top", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Integrate the H or I flow and write the trajectory.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sim: SimArgs,
    },
    /// List the Cartan and sampled s-curve equilibria of an orbit.
    Equilibria {
        #[command(flatten)]
        common: Common,
    },
    /// Stability reports for every equilibrium of an orbit.
    Classify {
        #[command(flatten)]
        common: Common,
    },
    /// Classify a grid over c1 and c2 / c1.
    Scan {
        #[command(flatten)]
        common: Common,
    },
    /// Run the seeded self-check suite.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Random draws per check.
        #[arg(long)]
        draws: Option<usize>,
        /// Also draw spectra with l1^2 + l4^2 = l2^2 + l3^2.
        #[arg(long, alias = "include-caseII")]
        include_case_two: Option<bool>,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Inertia spectrum l1,l2,l3,l4 with l1 > l2 > l3 > l4.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    lambda: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    c1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c2: Option<f64>,
    /// C1MIN:C1MAX:N,SLOPEMIN:SLOPEMAX:N
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = parse_format)]
    format: Option<OutputFormat>,
    #[arg(long)]
    seed: Option<u64>,
    /// Relative H drift that aborts a simulation.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Debug)]
struct SimArgs {
    /// h or i.
    #[arg(long, value_parser = parse_flow)]
    flow: Option<Flow>,
    #[arg(long)]
    step: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// rk4 or midpoint.
    #[arg(long, value_parser = parse_scheme)]
    scheme: Option<Scheme>,
    /// Project back onto the orbit after every step.
    #[arg(long)]
    project: bool,
    #[arg(long)]
    record_every: Option<usize>,
    /// Initial state x1,x2,x3,y1,y2,y3.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "family")]
    state: Option<Vec<f64>>,
    /// Start at a Cartan point: t1, t2 or t3.
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
    /// ab, neg-ab, ba or neg-ba.
    #[arg(long, value_parser = parse_label, default_value = "ab")]
    label: WeylLabel,
    #[arg(long, default_value_t = 0.0)]
    perturbation: f64,
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    match s.to_ascii_lowercase().as_str() {
        "json" => Ok(OutputFormat::Json),
        "csv" => Ok(OutputFormat::Csv),
        _ => Err(format!("unknown format '{s}' (json, csv)")),
    }
}

fn parse_flow(s: &str) -> Result<Flow, String> {
    match s.to_ascii_lowercase().as_str() {
        "h" => Ok(Flow::H),
        "i" => Ok(Flow::I),
        _ => Err(format!("unknown flow '{s}' (h, i)")),
    }
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    match s.to_ascii_lowercase().as_str() {
        "rk4" => Ok(Scheme::Rk4),
        "midpoint" | "implicit-midpoint" => Ok(Scheme::ImplicitMidpoint),
        _ => Err(format!("unknown scheme '{s}' (rk4, midpoint)")),
    }
}

fn parse_family(s: &str) -> Result<Family, String> {
    match s.to_ascii_lowercase().as_str() {
        "t1" => Ok(Family::T1),
        "t2" => Ok(Family::T2),
        "t3" => Ok(Family::T3),
        _ => Err(format!("unknown Cartan family '{s}' (t1, t2, t3)")),
    }
}

fn parse_label(s: &str) -> Result<WeylLabel, String> {
    match s.to_ascii_lowercase().replace('_', "-").as_str() {
        "ab" => Ok(WeylLabel::Ab),
        "neg-ab" => Ok(WeylLabel::NegAb),
        "ba" => Ok(WeylLabel::Ba),
        "neg-ba" => Ok(WeylLabel::NegBa),
        _ => Err(format!("unknown Weyl label '{s}' (ab, neg-ab, ba, neg-ba)")),
    }
}

fn apply_common(cfg: &mut RunConfig, c: &Common) -> Result<(), Error> {
    if let Some(l) = &c.lambda {
        cfg.lambda = l
            .as_slice()
            .try_into()
            .map_err(|_| Error::InvalidConfig(format!("--lambda needs 4 values, got {}", l.len())))?;
    }
    match (c.c1, c.c2, cfg.orbit) {
        (Some(c1), Some(c2), _) => cfg.orbit = Some(OrbitSpec { c1, c2 }),
        (Some(c1), None, Some(o)) => cfg.orbit = Some(OrbitSpec { c1, ..o }),
        (None, Some(c2), Some(o)) => cfg.orbit = Some(OrbitSpec { c2, ..o }),
        (Some(_), None, None) | (None, Some(_), None) => {
            return Err(Error::InvalidConfig("--c1 and --c2 must be given together".into()));
        }
        (None, None, _) => {}
    }
    if let Some(g) = &c.grid {
        cfg.grid = Some(GridSpec::parse(g)?);
    }
    if c.out.is_some() {
        cfg.output.path = c.out.clone();
    }
    if c.format.is_some() {
        cfg.output.format = c.format;
    }
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if c.tol.is_some() {
        cfg.tolerances.max_h_drift = c.tol;
    }
    Ok(())
}

fn apply_sim(cfg: &mut RunConfig, s: &SimArgs) -> Result<(), Error> {
    if let Some(f) = s.flow {
        cfg.simulate.flow = f;
    }
    if let Some(h) = s.step {
        cfg.integrator.step = h;
    }
    if let Some(n) = s.steps {
        cfg.integrator.max_steps = n;
    }
    if let Some(sc) = s.scheme {
        cfg.integrator.scheme = sc;
    }
    if s.project {
        cfg.integrator.projection = true;
    }
    if let Some(r) = s.record_every {
        cfg.integrator.record_every = r;
    }
    if let Some(v) = &s.state {
        let coords = v
            .as_slice()
            .try_into()
            .map_err(|_| Error::InvalidConfig(format!("--state needs 6 values, got {}", v.len())))?;
        cfg.simulate.initial = InitialState::State { coords };
    }
    if let Some(family) = s.family {
        cfg.simulate.initial = InitialState::Cartan { family, label: s.label, perturbation: s.perturbation };
    }
    cfg.integrator.validate()
}

fn load(common: &Common) -> Result<RunConfig, Error> {
    let mut cfg = match &common.config {
        Some(p) => RunConfig::from_json(&std::fs::read_to_string(p)?)?,
        None => RunConfig::default(),
    };
    apply_common(&mut cfg, common)?;
    Ok(cfg)
}

fn execute(cli: Cli) -> Result<i32, Error> {
    let (cfg, command) = match &cli.command {
        Cmd::Simulate { common, sim } => {
            let mut cfg = load(common)?;
            apply_sim(&mut cfg, sim)?;
            (cfg, Command::Simulate)
        }
        Cmd::Equilibria { common } => (load(common)?, Command::Equilibria),
        Cmd::Classify { common } => (load(common)?, Command::Classify),
        Cmd::Scan { common } => (load(common)?, Command::Scan),
        Cmd::Verify { common, draws, include_case_two } => {
            let mut cfg = load(common)?;
            if let Some(d) = draws {
                cfg.verify.draws = *d;
            }
            if let Some(b) = include_case_two {
                cfg.verify.include_case_two = *b;
            }
            (cfg, Command::Verify)
        }
    };
    let out = scan::run(&cfg, command)?;
    match &cfg.output.path {
        Some(p) => std::fs::write(p, &out.text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(out.text.as_bytes()).and_then(|_| stdout.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
                _ => {}
            }
        }
    }
    Ok(out.exit_code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
