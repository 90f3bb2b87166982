//! The `catforge` command line.
//!
//! Every command builds a [`Table`] and renders it as CSV or JSON. Exit
//! codes: 0 success, 1 validation failure, 2 domain or usage error, 3 I/O error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::cv::{wigner_grid, CoherentSuperposition};
use crate::error::Error;
use crate::exec::Execution;
use crate::params::ProtocolParams;
use crate::protocol::{
    alpha_zero_first_order, ratio_exact, ratio_first_order, ratio_second_order, report, Scheme,
};
use crate::sweep::{find_min_alpha, sweep_ratio, window_tradeoff, GridSpec};
use crate::tolerance::CROSS_REPRESENTATION;
use crate::validate::{cross_validate, DEFAULT_ALPHAS, DEFAULT_PHIS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "catforge", version, about = "Cat-state preparation by interference and homodyne post-selection")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the result here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Output format (default depends on the command).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Disable data parallelism.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Angle {
    /// Separation angle in radians.
    #[arg(long)]
    pub phi: Option<f64>,

    /// Separation angle in degrees.
    #[arg(long, value_name = "DEG")]
    pub phi_degrees: Option<f64>,
}

impl Angle {
    fn radians(&self) -> f64 {
        match (self.phi, self.phi_degrees) {
            (Some(r), _) => r,
            (None, Some(d)) => d.to_radians(),
            (None, None) => unreachable!("clap enforces the angle group"),
        }
    }
}

#[derive(Debug, Args)]
pub struct Point {
    #[arg(long)]
    pub alpha0: f64,

    #[command(flatten)]
    pub angle: Angle,
}

impl Point {
    fn params(&self) -> Result<ProtocolParams, Error> {
        ProtocolParams::new(self.alpha0, self.angle.radians())
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact and approximate coefficient ratios and separations.
    #[command(allow_negative_numbers = true)]
    Ratio(Point),

    /// Conditional state after the outcome x: coefficients, ratio, cat fidelity.
    #[command(allow_negative_numbers = true)]
    Prepare {
        #[command(flatten)]
        point: Point,
        /// Homodyne outcome.
        #[arg(long, default_value_t = 0.0)]
        x: f64,
    },

    /// Ratio map over an alpha0 × phi grid.
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[arg(long, default_value_t = 0.0)]
        alpha0_min: f64,
        #[arg(long, default_value_t = 5.0)]
        alpha0_max: f64,
        #[arg(long, default_value_t = 500)]
        alpha0_steps: usize,
        #[arg(long, default_value_t = 0.0)]
        phi_min: f64,
        #[arg(long, default_value_t = 0.2)]
        phi_max: f64,
        #[arg(long, default_value_t = 500)]
        phi_steps: usize,
        /// Read --phi-min/--phi-max in degrees.
        #[arg(long)]
        degrees: bool,
    },

    /// Optimal alpha0 (zeros of the ratio) for a given angle.
    #[command(allow_negative_numbers = true)]
    Optimize {
        #[command(flatten)]
        angle: Angle,
        /// Zero index: alpha0² sin(phi) = pi/2 + k pi.
        #[arg(long, default_value_t = 0)]
        k: u32,
        /// Skip the bisection cross-check.
        #[arg(long)]
        no_validate: bool,
    },

    /// Probability and fidelity against the half width of the acceptance window.
    #[command(allow_negative_numbers = true)]
    Window {
        #[command(flatten)]
        point: Point,
        /// Ascending half widths.
        #[arg(long, value_delimiter = ',', default_values_t = [1e-4, 1e-2, 0.1, 1.0])]
        eps: Vec<f64>,
    },

    /// Wigner function of the conditional (or ideal cat) state on a square grid.
    #[command(allow_negative_numbers = true)]
    Wigner {
        #[command(flatten)]
        point: Point,
        #[arg(long, default_value_t = 0.0)]
        x: f64,
        /// Grid covers [-extent, extent]² in the amplitude plane.
        #[arg(long, default_value_t = 4.0)]
        extent: f64,
        #[arg(long, default_value_t = 101)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = WignerState::Conditional)]
        state: WignerState,
    },

    /// Compare the closed forms with the Fock-space simulation.
    #[command(allow_negative_numbers = true)]
    Validate {
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_ALPHAS)]
        alphas: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_PHIS)]
        phis: Vec<f64>,
        #[arg(long, default_value_t = CROSS_REPRESENTATION)]
        tolerance: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WignerState {
    Conditional,
    Cat,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Int(u64),
    Text(String),
    Flag(bool),
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Num(v)
    }
}

/// Named columns; a single-row table renders as a JSON object, otherwise as an array.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Field>>,
    pub single: bool,
}

impl Table {
    fn record(fields: Vec<(&'static str, Field)>) -> Self {
        let (columns, row) = fields.into_iter().unzip();
        Table {
            columns,
            rows: vec![row],
            single: true,
        }
    }

    fn check_finite(&self) -> Result<(), Error> {
        for row in &self.rows {
            for (f, name) in row.iter().zip(&self.columns) {
                if let Field::Num(v) = f {
                    if !v.is_finite() {
                        return Err(Error::NonFinite(name));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String, Error> {
        self.check_finite()?;
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let io = |e: csv::Error| Error::Domain(format!("csv: {e}"));
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|f| match f {
                Field::Num(v) => format_g17(*v),
                Field::Int(n) => n.to_string(),
                Field::Text(s) => s.clone(),
                Field::Flag(b) => b.to_string(),
            }))
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Domain(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is built from UTF-8 fields"))
    }

    /// Pretty JSON with keys in column order.
    pub fn to_json(&self) -> Result<String, Error> {
        self.check_finite()?;
        let records: Vec<Record> = self.rows.iter().map(|row| Record(&self.columns, row)).collect();
        let json = if self.single && records.len() == 1 {
            serde_json::to_string_pretty(&records[0])
        } else {
            serde_json::to_string_pretty(&records)
        };
        json.map_err(|e| Error::Domain(format!("json: {e}")))
    }

    pub fn render(&self, format: Format) -> Result<String, Error> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => {
                let mut s = self.to_json()?;
                s.push('\n');
                Ok(s)
            }
        }
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Field::Num(v) => s.serialize_f64(*v),
            Field::Int(n) => n.serialize(s),
            Field::Text(t) => s.serialize_str(t),
            Field::Flag(b) => s.serialize_bool(*b),
        }
    }
}

struct Record<'a>(&'a [&'static str], &'a [Field]);

impl Serialize for Record<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0.iter().zip(self.1) {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// `%.17g`: 17 significant digits, fixed notation for exponents in
/// `[−5, 17)`, trailing zeros removed. Parses back to the same `f64`.
pub fn format_g17(v: f64) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_fraction(format!("{v:.decimals$}"))
    } else {
        format!("{}e{}{:02}", trim_fraction(mantissa.to_string()), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_fraction(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Command result: the table, the default format, and whether validation passed.
struct Outcome {
    table: Table,
    default_format: Format,
    passed: bool,
}

fn execute(cli: &Cli) -> Result<Outcome, Error> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let ok = |table, default_format| Outcome {
        table,
        default_format,
        passed: true,
    };
    match &cli.command {
        Command::Ratio(point) => {
            let p = point.params()?;
            let s = p.separations();
            Ok(ok(
                Table::record(vec![
                    ("alpha0", p.alpha0().into()),
                    ("phi", p.phi().into()),
                    ("ratio_exact", ratio_exact(&p).into()),
                    ("ratio_o1", ratio_first_order(&p).into()),
                    ("ratio_o2", ratio_second_order(&p).into()),
                    ("d0", s.d0.into()),
                    ("d", s.d.into()),
                ]),
                Format::Json,
            ))
        }
        Command::Prepare { point, x } => {
            let r = report(&point.params()?, *x)?;
            Ok(ok(
                Table::record(vec![
                    ("alpha0", r.params.alpha0().into()),
                    ("phi", r.params.phi().into()),
                    ("x", r.x.into()),
                    ("c1_re", r.c1.re.into()),
                    ("c1_im", r.c1.im.into()),
                    ("c2_re", r.c2.re.into()),
                    ("c2_im", r.c2.im.into()),
                    ("ratio", r.ratio.into()),
                    ("fidelity", r.fidelity.into()),
                    ("density_at_x", r.density_at_x.into()),
                    ("d0", r.separations.d0.into()),
                    ("d", r.separations.d.into()),
                ]),
                Format::Json,
            ))
        }
        Command::Sweep {
            alpha0_min,
            alpha0_max,
            alpha0_steps,
            phi_min,
            phi_max,
            phi_steps,
            degrees,
        } => {
            let conv = |v: f64| if *degrees { v.to_radians() } else { v };
            let g = GridSpec::new(
                (*alpha0_min, *alpha0_max, *alpha0_steps),
                (conv(*phi_min), conv(*phi_max), *phi_steps),
            )?;
            let rows = sweep_ratio(&g, exec)?
                .into_iter()
                .map(|r| {
                    vec![
                        r.alpha0.into(),
                        r.phi.into(),
                        r.ratio_exact.into(),
                        r.ratio_o1.into(),
                        r.ratio_o2.into(),
                        r.d.into(),
                    ]
                })
                .collect();
            Ok(ok(
                Table {
                    columns: vec!["alpha0", "phi", "ratio_exact", "ratio_o1", "ratio_o2", "d"],
                    rows,
                    single: false,
                },
                Format::Csv,
            ))
        }
        Command::Optimize {
            angle,
            k,
            no_validate,
        } => {
            let phi = angle.radians();
            let exact = find_min_alpha(phi, *k, !no_validate)?;
            let first = alpha_zero_first_order(phi, *k)?;
            let p = ProtocolParams::new(exact, phi)?;
            Ok(ok(
                Table::record(vec![
                    ("phi", phi.into()),
                    ("k", Field::Int(*k as u64)),
                    ("alpha_min_exact", exact.into()),
                    ("alpha_zero_first_order", first.into()),
                    ("relative_gap", ((exact - first) / exact).into()),
                    ("ratio_exact", ratio_exact(&p).into()),
                    ("d", p.separations().d.into()),
                ]),
                Format::Json,
            ))
        }
        Command::Window { point, eps } => {
            let rows = window_tradeoff(&point.params()?, eps, exec)?
                .into_iter()
                .map(|r| vec![r.epsilon.into(), r.probability.into(), r.fidelity.into()])
                .collect();
            Ok(ok(
                Table {
                    columns: vec!["epsilon", "probability", "fidelity"],
                    rows,
                    single: false,
                },
                Format::Csv,
            ))
        }
        Command::Wigner {
            point,
            x,
            extent,
            steps,
            state,
        } => {
            let p = point.params()?;
            let s: CoherentSuperposition = match state {
                WignerState::Conditional => Scheme::new(&p)?.conditional_state(*x)?,
                WignerState::Cat => crate::protocol::ideal_cat(&p, false)?,
            };
            let limits = crate::tolerance::Limits::from_env();
            if *steps > limits.max_grid_steps {
                return Err(Error::GridTooLarge {
                    steps: *steps,
                    cap: limits.max_grid_steps,
                });
            }
            let rows = wigner_grid(&s, *extent, *steps, exec)?
                .into_iter()
                .map(|(x, y, w)| vec![x.into(), y.into(), w.into()])
                .collect();
            Ok(ok(
                Table {
                    columns: vec!["x", "y", "w"],
                    rows,
                    single: false,
                },
                Format::Csv,
            ))
        }
        Command::Validate {
            alphas,
            phis,
            tolerance,
        } => {
            let s = cross_validate(alphas, phis, *tolerance, exec)?;
            let worst = s.worst.as_ref();
            let table = Table::record(vec![
                ("passed", Field::Flag(s.passed)),
                ("max_deviation", s.max_deviation.into()),
                ("tolerance", s.tolerance.into()),
                ("points", Field::Int(s.points as u64)),
                ("comparisons", Field::Int(s.comparisons as u64)),
                ("worst_alpha0", worst.map_or(f64::NAN, |w| w.alpha0).into()),
                ("worst_phi", worst.map_or(f64::NAN, |w| w.phi).into()),
                (
                    "worst_quantity",
                    Field::Text(worst.map_or(String::new(), |w| w.quantity.to_string())),
                ),
            ]);
            Ok(Outcome {
                table,
                default_format: Format::Json,
                passed: s.passed,
            })
        }
    }
}

fn write_output(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => stdout.write_all(text.as_bytes()),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_DOMAIN } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_DOMAIN;
        }
    };
    let format = cli.format.unwrap_or(outcome.default_format);
    let text = match outcome.table.render(format) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_DOMAIN;
        }
    };
    if let Err(e) = write_output(cli.out.as_deref(), &text, stdout) {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return EXIT_IO;
    }
    if outcome.passed {
        EXIT_OK
    } else {
        let _ = writeln!(stderr, "validation failed");
        EXIT_VALIDATION
    }
}
