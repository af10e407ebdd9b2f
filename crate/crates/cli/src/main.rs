//! `tdq`: observable series, wavefunctions, figure data and the verification suite.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use tdq_core::numerics::linspace;
use tdq_core::observables::{mean_x, observe};
use tdq_core::states::{default_grid, state, DEFAULT_POINTS};
use tdq_core::verify::{quadrature_series, run_suite, DEFAULT_SEED};
use tdq_core::{Case, StateFamily, StateSpec, SuiteConfig, SystemKind, SystemSpec, TimeCoord, Tolerances};

#[derive(Parser)]
#[command(name = "tdq", version, about = "Time-dependent quantum oscillators (TO, TM, TQ)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expectation values and uncertainties over a time range.
    Series(SeriesArgs),
    /// Wavefunction samples on a spatial grid.
    State(StateArgs),
    /// Plot-ready ⟨x⟩ curves for figures 1 to 3.
    Figure(FigureArgs),
    /// Run the verification suite and emit JSON-lines reports.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SystemArg {
    To,
    Tm,
    Tq,
    All,
}

impl SystemArg {
    fn kinds(self) -> Vec<SystemKind> {
        match self {
            SystemArg::To => vec![SystemKind::TO],
            SystemArg::Tm => vec![SystemKind::TM],
            SystemArg::Tq => vec![SystemKind::TQ],
            SystemArg::All => SystemKind::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Number,
    Coherent,
    Squeezed,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct SystemOpts {
    /// to, tm, tq or all
    #[arg(long, value_enum)]
    system: SystemArg,
    #[arg(long, allow_hyphen_values = true)]
    upsilon: f64,
    #[arg(long, allow_hyphen_values = true)]
    omega: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    t0: f64,
}

#[derive(Args)]
struct StateOpts {
    #[arg(long, value_enum, default_value = "coherent")]
    family: FamilyArg,
    /// Number-state index.
    #[arg(long, default_value_t = 0)]
    n: usize,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    x0: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    p0: f64,
    /// Squeeze magnitude, r ≥ 0.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    r: f64,
    /// Squeeze angle in (−π, π].
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    theta: f64,
}

impl StateOpts {
    fn family(&self) -> StateFamily {
        match self.family {
            FamilyArg::Number => StateFamily::Number { n: self.n },
            FamilyArg::Coherent => StateFamily::Coherent { x0: self.x0, p0: self.p0 },
            FamilyArg::Squeezed => StateFamily::Squeezed { x0: self.x0, p0: self.p0, r: self.r, theta: self.theta },
        }
    }
}

#[derive(Args)]
struct OutputOpts {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SeriesArgs {
    #[command(flatten)]
    sys: SystemOpts,
    #[command(flatten)]
    st: StateOpts,
    /// Start of the time-offset range (t − t₀, or t′ − t₀′ for TO).
    #[arg(long, allow_hyphen_values = true)]
    t_min: f64,
    #[arg(long, allow_hyphen_values = true)]
    t_max: f64,
    /// Number of sample times, at least 2.
    #[arg(long, default_value_t = 101)]
    steps: usize,
    /// Add quadrature rows computed from the generated wavefunctions.
    #[arg(long)]
    with_oracle: bool,
    /// Minimum spatial grid size for the quadrature rows.
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    grid_points: usize,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct StateArgs {
    #[command(flatten)]
    sys: SystemOpts,
    #[command(flatten)]
    st: StateOpts,
    /// Time offset.
    #[arg(long, allow_hyphen_values = true)]
    t: f64,
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    grid_points: usize,
    /// Grid bounds; both or neither. Default: ten widths around the center.
    #[arg(long, allow_hyphen_values = true, requires = "x_max")]
    x_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "x_min")]
    x_max: Option<f64>,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct FigureArgs {
    /// Figure 1 (Υ = 5), 2 (Υ = 4) or 3 (Υ = 3), all with ω = 2, x₀ = p₀ = 1.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    id: u8,
    /// Υ of the TO curve continued to negative times; defaults to −Υ of the figure.
    #[arg(long, allow_hyphen_values = true)]
    match_negative_upsilon: Option<f64>,
    /// Samples per curve.
    #[arg(long, default_value_t = 401)]
    steps: usize,
    /// TM/TQ window, overriding the figure default.
    #[arg(long, allow_hyphen_values = true)]
    t_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t_max: Option<f64>,
    /// Upper end of the TO window.
    #[arg(long)]
    to_t_max: Option<f64>,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, env = "TDQ_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Multiplies every tolerance.
    #[arg(long, default_value_t = 1.0)]
    tolerance_scale: f64,
    /// Restrict to one case, e.g. `tm,under,pos`.
    #[arg(long)]
    case: Option<String>,
    /// Random times per case for the moment and EOM checks.
    #[arg(long, default_value_t = 10)]
    times: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Checks(usize),
}

impl From<tdq_core::Error> for Failure {
    fn from(e: tdq_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("i/o error: {e}"))
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Series(a) => cmd_series(&a),
        Command::State(a) => cmd_state(&a),
        Command::Figure(a) => cmd_figure(&a),
        Command::Verify(a) => cmd_verify(&a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks(n)) => {
            eprintln!("{n} check(s) failed");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

fn open_out(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn jnum(v: f64) -> Value {
    serde_json::Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null)
}

/// Writes rows as CSV or JSON lines with the given column names.
struct Table {
    cols: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

enum Cell {
    Text(String),
    Num(f64),
}

impl Table {
    fn new(cols: Vec<&'static str>) -> Self {
        Table { cols, rows: Vec::new() }
    }

    fn write(&self, fmt: Format, w: &mut dyn Write) -> io::Result<()> {
        match fmt {
            Format::Csv => {
                writeln!(w, "{}", self.cols.join(","))?;
                for r in &self.rows {
                    let line: Vec<String> = r
                        .iter()
                        .map(|c| match c {
                            Cell::Text(s) => s.clone(),
                            Cell::Num(v) => num(*v),
                        })
                        .collect();
                    writeln!(w, "{}", line.join(","))?;
                }
            }
            Format::Json => {
                for r in &self.rows {
                    let mut m = Map::new();
                    for (k, c) in self.cols.iter().zip(r) {
                        let v = match c {
                            Cell::Text(s) => Value::String(s.clone()),
                            Cell::Num(v) => jnum(*v),
                        };
                        m.insert((*k).to_string(), v);
                    }
                    writeln!(w, "{}", Value::Object(m))?;
                }
            }
        }
        w.flush()
    }
}

fn build_spec(s: &SystemOpts) -> Result<SystemSpec, Failure> {
    Ok(SystemSpec::new(s.upsilon, s.omega, s.t0)?)
}

fn check_steps(steps: usize) -> CliResult {
    if steps < 2 {
        return Err(Failure::Usage(format!("steps = {steps} is below the minimum 2")));
    }
    Ok(())
}

fn cmd_series(a: &SeriesArgs) -> CliResult {
    check_steps(a.steps)?;
    if !(a.t_min <= a.t_max) {
        return Err(Failure::Usage(format!("t-min = {} exceeds t-max = {}", a.t_min, a.t_max)));
    }
    let spec = build_spec(&a.sys)?;
    let family = a.st.family();
    family.validate()?;
    let offsets = linspace(a.t_min, a.t_max, a.steps);
    let all = a.sys.system == SystemArg::All;
    let mut cols = vec!["t", "x_mean", "p_mean", "x_var", "p_var", "product", "source"];
    if all {
        cols.insert(0, "system");
    }
    let mut table = Table::new(cols);
    for kind in a.sys.system.kinds() {
        for &o in &offsets {
            TimeCoord::new(kind, o).check_physical(&spec)?;
        }
        let closed: Vec<_> = offsets
            .iter()
            .map(|&o| observe(&spec, kind, &family, TimeCoord::new(kind, o)))
            .collect::<tdq_core::Result<_>>()?;
        let quad = if a.with_oracle {
            Some(quadrature_series(&spec, kind, &family, &offsets, a.grid_points)?.points)
        } else {
            None
        };
        for (i, p) in closed.iter().enumerate() {
            let mut rows = vec![(p, "closed_form")];
            if let Some(q) = &quad {
                rows.push((&q[i], "quadrature"));
            }
            for (p, src) in rows {
                let mut r = Vec::new();
                if all {
                    r.push(Cell::Text(kind.to_string()));
                }
                r.extend([p.t.offset, p.x_mean, p.p_mean, p.x_var, p.p_var, p.product].map(Cell::Num));
                r.push(Cell::Text(src.to_string()));
                table.rows.push(r);
            }
        }
    }
    table.write(a.out.format, &mut *open_out(&a.out.out)?)?;
    Ok(())
}

fn cmd_state(a: &StateArgs) -> CliResult {
    if a.sys.system == SystemArg::All {
        return Err(Failure::Usage("state needs a single system".into()));
    }
    let spec = build_spec(&a.sys)?;
    let kind = a.sys.system.kinds()[0];
    let st = StateSpec { kind, family: a.st.family() };
    st.family.validate()?;
    let t = TimeCoord::new(kind, a.t);
    t.check_physical(&spec)?;
    let grid = match (a.x_min, a.x_max) {
        (Some(lo), Some(hi)) => {
            if !(lo < hi) || a.grid_points < 5 {
                return Err(Failure::Usage("grid needs x-min < x-max and at least 5 points".into()));
            }
            linspace(lo, hi, a.grid_points)
        }
        _ => default_grid(&spec, &st, t, a.grid_points)?,
    };
    let w = state(&spec, &st, t, &grid)?;
    if w.derived_case {
        eprintln!("note: {} uses the derived state construction", Case::of(&spec, kind).label());
    }
    let mut table = Table::new(vec!["x", "re_psi", "im_psi", "density"]);
    for (x, p) in w.x.iter().zip(&w.psi) {
        table.rows.push([*x, p.re, p.im, p.norm_sqr()].map(Cell::Num).into());
    }
    table.write(a.out.format, &mut *open_out(&a.out.out)?)?;
    Ok(())
}

/// Figure parameters and default windows (TM/TQ window, TO upper bound).
fn figure_setup(id: u8) -> (f64, (f64, f64), f64) {
    match id {
        1 => (5.0, (-2.0, 1.2), 6.0),
        2 => (4.0, (-2.0, 1.2), 6.0),
        _ => (3.0, (-2.0, 2.5), 6.0),
    }
}

fn cmd_figure(a: &FigureArgs) -> CliResult {
    check_steps(a.steps)?;
    let (u, (lo, hi), to_hi) = figure_setup(a.id);
    let (lo, hi) = (a.t_min.unwrap_or(lo), a.t_max.unwrap_or(hi));
    let to_hi = a.to_t_max.unwrap_or(to_hi);
    if !(lo < hi) || !(to_hi > 0.0) {
        return Err(Failure::Usage("figure windows must be non-empty".into()));
    }
    let m = a.match_negative_upsilon.unwrap_or(-u);
    if !(m < 0.0) {
        return Err(Failure::Usage(format!("match-negative-upsilon = {m} must be negative")));
    }
    let spec = SystemSpec::new(u, 2.0, 0.0)?;
    let neg = SystemSpec::new(m, 2.0, 0.0)?;
    let mut table = Table::new(vec!["system", "t", "x_mean"]);
    let mut push = |name: &str, t: f64, x: f64| table.rows.push(vec![Cell::Text(name.into()), Cell::Num(t), Cell::Num(x)]);

    // The Υ < 0 TO curve lives on [0, 1/|Υ|); it is drawn at negative offsets.
    let s_max = (0.95 / neg.abs_upsilon()).min(to_hi);
    for s in linspace(s_max, 0.0, a.steps) {
        push("to_match", 0.0 - s, mean_x(&neg, SystemKind::TO, 1.0, 1.0, TimeCoord::new(SystemKind::TO, s))?);
    }
    for o in linspace(0.0, to_hi, a.steps) {
        push("to", o, mean_x(&spec, SystemKind::TO, 1.0, 1.0, TimeCoord::new(SystemKind::TO, o))?);
    }
    for kind in [SystemKind::TM, SystemKind::TQ] {
        for o in linspace(lo, hi, a.steps) {
            push(&kind.to_string(), o, mean_x(&spec, kind, 1.0, 1.0, TimeCoord::new(kind, o))?);
        }
    }
    table.write(a.out.format, &mut *open_out(&a.out.out)?)?;
    Ok(())
}

fn cmd_verify(a: &VerifyArgs) -> CliResult {
    if !(a.tolerance_scale > 0.0) || !a.tolerance_scale.is_finite() {
        return Err(Failure::Usage(format!("tolerance-scale = {} must be positive", a.tolerance_scale)));
    }
    if a.times == 0 {
        return Err(Failure::Usage("times must be at least 1".into()));
    }
    let case_filter = match &a.case {
        Some(c) => Some(c.parse::<Case>().map_err(Failure::Usage)?),
        None => None,
    };
    let cfg = SuiteConfig {
        seed: a.seed,
        tolerances: Tolerances::scaled(a.tolerance_scale),
        case_filter,
        times_per_case: a.times,
    };
    let reports = run_suite(&cfg);
    let mut w = open_out(&a.out)?;
    for r in &reports {
        writeln!(w, "{}", r.to_json_line())?;
    }
    w.flush()?;
    let failed = reports.iter().filter(|r| !r.passed).count();
    eprintln!("{}", json!({"checks": reports.len(), "failed": failed, "seed": a.seed}));
    if failed > 0 {
        return Err(Failure::Checks(failed));
    }
    Ok(())
}
