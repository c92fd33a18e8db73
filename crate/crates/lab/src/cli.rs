//! Command-line front end.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use borderline_core::analytic::ClosedFormRouting;
use clap::{Args, Parser, Subcommand};

use crate::config::{parse_angle, Command, Mode, Overrides, Params, Spacing};
use crate::error::{LabError, Result};
use crate::experiment;
use crate::output::{write_atomic, Metadata, Table};
use crate::plot;
use crate::validate::{tally, Outcome, Suite};

const PLACEMENT_NOTE: &str =
    "desired transmitter at link_distance from the receiver in a uniformly random \
direction, redrawn while it falls outside the region; the SINR depends only on the distance";

#[derive(Debug, Parser)]
#[command(
    name = "borderline",
    version,
    about = "Border effects on outage, rate and throughput in finite wireless networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Connection probability against link distance.
    Connection(SweepArgs),
    /// Ergodic rate and its variance against link distance.
    Rate(SweepArgs),
    /// Density of successful transmissions against intensity.
    Density(SweepArgs),
    /// Outage map over receiver positions in a rectangle.
    Heatmap(HeatmapArgs),
    /// Check simulation against analysis and closed forms against quadrature.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Output directory.
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// RNG seed; a random one is drawn and recorded if omitted.
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo trials per point.
    #[arg(long)]
    trials: Option<u64>,
    /// JSON file of parameters; run metadata files are accepted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Skip SVG output.
    #[arg(long)]
    no_plot: bool,
    /// Path-loss exponent (>= 2).
    #[arg(long)]
    eta: Option<f64>,
    /// Singularity buffer; repeatable for `density`.
    #[arg(long, value_delimiter = ',')]
    epsilon: Vec<f64>,
    /// Transmitter intensity per unit area.
    #[arg(long)]
    rho_t: Option<f64>,
    /// Sector radius.
    #[arg(long)]
    radius: Option<f64>,
    /// Sector angle, e.g. `pi/2` or `1.3`; repeatable.
    #[arg(long, value_delimiter = ',', value_parser = parse_angle)]
    theta: Vec<f64>,
    /// SINR threshold.
    #[arg(long)]
    q: Option<f64>,
    /// Interference weight in [0, 1].
    #[arg(long)]
    gamma: Option<f64>,
    /// Transmit power.
    #[arg(long)]
    power: Option<f64>,
    /// Noise power.
    #[arg(long)]
    noise: Option<f64>,
    /// Transmitters per trial: fixed floor(rho_t V) or Poisson.
    #[arg(long, value_enum)]
    count_mode: Option<Mode>,
    /// Interferers per trial in fixed mode, replacing floor(rho_t V) - 1.
    #[arg(long)]
    fixed_interferers: Option<u64>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// First sweep value (link distance, or intensity for `density`).
    #[arg(long)]
    sweep_min: Option<f64>,
    /// Last sweep value.
    #[arg(long)]
    sweep_max: Option<f64>,
    /// Number of sweep points.
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, value_enum)]
    spacing: Option<Spacing>,
}

#[derive(Debug, Args)]
struct HeatmapArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    width: Option<f64>,
    #[arg(long)]
    height: Option<f64>,
    /// Grid cells along x.
    #[arg(long)]
    nx: Option<usize>,
    /// Grid cells along y.
    #[arg(long)]
    ny: Option<usize>,
    /// Distance from each receiver to its transmitter.
    #[arg(long)]
    link_distance: Option<f64>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Fewer trials for a fast smoke run.
    #[arg(long)]
    quick: bool,
    /// Swap the closed-form routing so the checks must fail.
    #[arg(long, hide = true)]
    corrupt_eta_routing: bool,
}

impl CommonArgs {
    fn overrides(&self) -> Overrides {
        let list = |v: &Vec<f64>| (!v.is_empty()).then(|| v.clone());
        Overrides {
            seed: self.seed,
            trials: self.trials,
            count_mode: self.count_mode,
            fixed_interferers: self.fixed_interferers,
            eta: self.eta,
            epsilon: list(&self.epsilon),
            rho_t: self.rho_t,
            radius: self.radius,
            theta: list(&self.theta),
            q: self.q,
            gamma: self.gamma,
            power: self.power,
            noise: self.noise,
            ..Default::default()
        }
    }
}

/// Runs the tool and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn resolve(command: Command, common: &CommonArgs, extra: Overrides) -> Result<Params> {
    let mut p = Params::defaults(command);
    let file = common
        .config
        .as_deref()
        .map(Overrides::from_json_file)
        .transpose()?;
    if let Some(f) = &file {
        p.apply(f);
    }
    p.apply(&common.overrides());
    p.apply(&extra);
    if common.seed.is_none() && file.as_ref().and_then(|f| f.seed).is_none() {
        p.seed = rand::random();
    }
    p.validate()?;
    Ok(p)
}

fn dispatch(cmd: Cmd) -> Result<i32> {
    match cmd {
        Cmd::Connection(a) => {
            let p = resolve(Command::Connection, &a.common, sweep_overrides(&a))?;
            run_sweep(&p, &a.common)
        }
        Cmd::Rate(a) => {
            let p = resolve(Command::Rate, &a.common, sweep_overrides(&a))?;
            run_sweep(&p, &a.common)
        }
        Cmd::Density(a) => {
            let p = resolve(Command::Density, &a.common, sweep_overrides(&a))?;
            run_sweep(&p, &a.common)
        }
        Cmd::Heatmap(a) => {
            let extra = Overrides {
                width: a.width,
                height: a.height,
                nx: a.nx,
                ny: a.ny,
                link_distance: a.link_distance,
                ..Default::default()
            };
            let p = resolve(Command::Heatmap, &a.common, extra)?;
            run_heatmap(&p, &a.common)
        }
        Cmd::Validate(a) => run_validate(&a),
    }
}

fn sweep_overrides(a: &SweepArgs) -> Overrides {
    Overrides {
        sweep_min: a.sweep_min,
        sweep_max: a.sweep_max,
        points: a.points,
        spacing: a.spacing,
        ..Default::default()
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))
}

struct Writer<'a> {
    dir: &'a Path,
    written: Vec<String>,
}

impl<'a> Writer<'a> {
    fn new(dir: &'a Path) -> Result<Self> {
        create_dir(dir)?;
        Ok(Self {
            dir,
            written: Vec::new(),
        })
    }

    fn file(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        write_atomic(&self.dir.join(name), bytes)?;
        self.written.push(name.to_string());
        Ok(())
    }

    fn metadata(
        &mut self,
        p: &Params,
        started: Instant,
        placement: Option<&'static str>,
    ) -> Result<()> {
        let name = format!("{}.json", p.command.name());
        let mut outputs = self.written.clone();
        outputs.push(name.clone());
        let meta = Metadata {
            params: p,
            tool_version: env!("CARGO_PKG_VERSION"),
            duration_seconds: started.elapsed().as_secs_f64(),
            outputs,
            desired_transmitter_placement: placement,
        };
        self.file(&name, &meta.to_json()?)?;
        for f in &self.written {
            println!("wrote {}", self.dir.join(f).display());
        }
        Ok(())
    }
}

/// Writes CSV, plots and metadata for a finished table.
fn emit_sweep(p: &Params, table: &Table, common: &CommonArgs, started: Instant) -> Result<()> {
    let mut w = Writer::new(&common.out)?;
    let name = p.command.name();
    let csv = table.to_csv()?;
    w.file(&format!("{name}.csv"), &csv)?;
    if !common.no_plot {
        // Plots are rendered from the encoded CSV, not the in-memory table.
        let t = Table::from_csv(&csv)?;
        match p.command {
            Command::Connection => {
                w.file("connection.svg", plot::connection_svg(&t)?.as_bytes())?
            }
            Command::Rate => {
                let (mean, var) = plot::rate_svgs(&t)?;
                w.file("rate_mean.svg", mean.as_bytes())?;
                w.file("rate_variance.svg", var.as_bytes())?;
            }
            Command::Density => {
                for (eps, svg) in plot::density_svgs(&t)? {
                    w.file(&format!("density_eps_{eps}.svg"), svg.as_bytes())?;
                }
            }
            Command::Heatmap => w.file("heatmap.svg", plot::heatmap_svg(&t)?.as_bytes())?,
            Command::Validate => {}
        }
    }
    let placement = (p.command == Command::Heatmap).then_some(PLACEMENT_NOTE);
    w.metadata(p, started, placement)
}

fn run_sweep(p: &Params, common: &CommonArgs) -> Result<i32> {
    let started = Instant::now();
    let table = match p.command {
        Command::Connection => experiment::connection(p)?,
        Command::Rate => experiment::rate(p)?,
        Command::Density => experiment::density(p)?,
        _ => return Err(LabError::config("not a sweep command")),
    };
    emit_sweep(p, &table, common, started)?;
    Ok(0)
}

fn run_heatmap(p: &Params, common: &CommonArgs) -> Result<i32> {
    let started = Instant::now();
    let (table, _) = experiment::heatmap(p)?;
    emit_sweep(p, &table, common, started)?;
    Ok(0)
}

fn report_csv(outcomes: &[Outcome]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(["criterion", "check", "statistical", "passed", "detail"])?;
    for o in outcomes {
        for c in &o.checks {
            w.write_record([
                o.id.to_string(),
                c.name.clone(),
                c.statistical.to_string(),
                c.passed.to_string(),
                c.detail.clone(),
            ])?;
        }
        if let Some(e) = &o.error {
            w.write_record([
                o.id.to_string(),
                "error".into(),
                "false".into(),
                "false".into(),
                e.clone(),
            ])?;
        }
    }
    w.into_inner()
        .map_err(|e| LabError::Csv(e.into_error().into()))
}

fn run_validate(a: &ValidateArgs) -> Result<i32> {
    let started = Instant::now();
    let p = resolve(Command::Validate, &a.common, Overrides::default())?;
    let mut suite = Suite::new(p.seed);
    suite.base = p.clone();
    if a.quick {
        suite = suite.quick();
    }
    if a.corrupt_eta_routing {
        suite.routing = ClosedFormRouting::Swapped;
    }
    let outcomes = suite.run_all();
    for o in &outcomes {
        println!("{}", o.summary());
        for c in o.failures().take(10) {
            println!("       {}: {}", c.name, c.detail);
        }
    }
    let (ok, total) = tally(&outcomes);
    println!("{ok}/{total} criteria passed (seed {})", p.seed);

    let mut w = Writer::new(&a.common.out)?;
    w.file("validate.csv", &report_csv(&outcomes)?)?;
    for o in &outcomes {
        for (name, bytes) in &o.tables {
            w.file(&format!("validate_{name}.csv"), bytes)?;
        }
    }
    let mut recorded = p;
    recorded.trials = suite.base.trials;
    w.metadata(&recorded, started, None)?;
    Ok(if ok == total { 0 } else { 3 })
}
