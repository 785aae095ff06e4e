mod config;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gaussent::cosmology::{Parameters, Variable};
use gaussent::entanglement::{report_for, EntanglementReport};
use gaussent::figures::{Delimiter, Figure, Table};
use gaussent::inverse::fit_parameters;
use gaussent::validation::{run_suite, Fault, SuiteConfig, SUITES};
use gaussent::Error;

use config::FitConfig;

#[derive(Parser, Debug)]
#[command(name = "gaussent", version, about = "Entanglement of a two-mode squeezed state through a toy cosmic expansion")]
struct Cli {
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Coarser grids for `selftest`.
    #[arg(long, global = true)]
    quick: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Tsv,
}

impl Format {
    fn delimiter(self) -> Delimiter {
        match self {
            Format::Csv => Delimiter::Comma,
            Format::Tsv => Delimiter::Tab,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// All entanglements at a single parameter point.
    #[command(allow_negative_numbers = true)]
    Report(PointArgs),
    /// Sweep behind one figure panel (fig1a, fig1b, fig2a, fig2b, fig3a-fig3f, fig4a, fig4b).
    #[command(allow_negative_numbers = true)]
    Figure {
        name: String,
        /// Comma-separated values for the curve parameter.
        #[arg(long, value_delimiter = ',')]
        curves: Option<Vec<f64>>,
        #[arg(long)]
        points: Option<usize>,
    },
    /// Fit unknown parameters to observed entanglements.
    Fit {
        config: PathBuf,
        /// Override a config entry, e.g. `--set s=0.5` or `--set unknown.m=0.1,10`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Run the invariant suites.
    Selftest {
        #[arg(long, hide = true, value_enum)]
        inject_fault: Option<FaultArg>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FaultArg {
    FlipResidualSign,
}

#[derive(Args, Debug)]
struct PointArgs {
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    #[arg(long = "m", alias = "mass", default_value_t = 1.0)]
    m: f64,
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma_rate: f64,
    #[arg(long, default_value_t = 1.0)]
    s: f64,
}

impl PointArgs {
    fn params(&self) -> Parameters {
        Parameters {
            k: self.k,
            mass: self.m,
            epsilon: self.epsilon,
            sigma_rate: self.sigma_rate,
            s: self.s,
        }
    }
}

enum Failure {
    Usage(String),
    Numeric(String),
    Fit(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Numeric(_) => 2,
            Failure::Fit(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Numeric(m) | Failure::Fit(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. } | Error::InvalidProblem(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::Usage(format!("{}: {e}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| io_failure(path, e)),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Numeric(format!("stdout: {e}")))
        }
    }
}

const REPORT_COLUMNS: [&str; 10] = [
    "e_ab",
    "e_abar_bbar",
    "e_a_bbar",
    "e_abar_b",
    "e_a_abar",
    "e_b_bbar",
    "e_a_rest",
    "e_abar_rest",
    "residual",
    "residual_closed",
];

fn report_values(r: &EntanglementReport) -> [f64; 10] {
    [
        r.e_ab,
        r.e_abar_bbar,
        r.e_a_bbar,
        r.e_abar_b,
        r.e_a_abar,
        r.e_b_bbar,
        r.e_a_rest,
        r.e_abar_rest,
        r.residual,
        r.residual_closed,
    ]
}

fn cmd_report(args: &PointArgs, format: Option<Format>) -> Result<String, Failure> {
    let p = args.params();
    let r = report_for(&p)?;
    let values = report_values(&r);
    let mut s = String::new();
    match format {
        Some(f) => {
            let d = match f.delimiter() {
                Delimiter::Comma => ",",
                Delimiter::Tab => "\t",
            };
            let _ = writeln!(s, "# gaussent {} report", env!("CARGO_PKG_VERSION"));
            let mut header: Vec<&str> = Variable::ALL.iter().map(|v| v.name()).collect();
            header.push("theta");
            header.extend(REPORT_COLUMNS);
            header.push("clamp_active");
            let _ = writeln!(s, "{}", header.join(d));
            let mut row: Vec<String> = Variable::ALL.iter().map(|v| format!("{:?}", v.get(&p))).collect();
            row.push(format!("{:?}", r.theta));
            row.extend(values.iter().map(|v| format!("{v:?}")));
            row.push(r.clamp_active.to_string());
            let _ = writeln!(s, "{}", row.join(d));
        }
        None => {
            let echo: Vec<String> = Variable::ALL.iter().map(|v| format!("{v}={}", v.get(&p))).collect();
            let _ = writeln!(s, "parameters: {}", echo.join(" "));
            let _ = writeln!(s, "{:<16}{:.10e}", "theta", r.theta);
            for (name, v) in REPORT_COLUMNS.iter().zip(values) {
                let _ = writeln!(s, "{name:<16}{v:.10e}");
            }
            if r.clamp_active {
                let _ = writeln!(s, "note: the A-B pair is separable (closed form clamped to 0)");
            }
        }
    }
    Ok(s)
}

fn cmd_figure(
    name: &str,
    curves: Option<Vec<f64>>,
    points: Option<usize>,
    format: Option<Format>,
) -> Result<String, Failure> {
    let fig = Figure::parse(name).ok_or_else(|| {
        let known: Vec<&str> = Figure::ALL.iter().map(|f| f.name()).collect();
        Failure::Usage(format!("unknown figure `{name}` (expected one of {})", known.join(", ")))
    })?;
    let mut sweep = fig.sweep();
    if let Some(values) = curves {
        match &mut sweep.curves {
            Some((_, existing)) => *existing = values,
            None => return Err(Failure::Usage(format!("{fig} has a single curve; --curves does not apply"))),
        }
    }
    if let Some(n) = points {
        sweep.count = n;
    }
    let table: Table = sweep.run()?;
    Ok(table.to_string_with(format.unwrap_or(Format::Csv).delimiter()))
}

struct FitOutput {
    summary: String,
    table: String,
    failure: Option<Failure>,
}

fn cmd_fit(path: &Path, overrides: &[String], format: Option<Format>) -> Result<FitOutput, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    let bad = |e: config::ConfigError| Failure::Usage(format!("{}: {e}", path.display()));
    let mut cfg = FitConfig::parse(&text).map_err(bad)?;
    for o in overrides {
        cfg.set(o).map_err(bad)?;
    }
    let problem = cfg.problem().map_err(bad)?;
    let fit = fit_parameters(&problem, &cfg.settings)?;

    let mut summary = String::new();
    for (var, x) in &fit.estimates {
        let _ = write!(summary, "# estimate {var} = {x:?}");
        match cfg.truth.get(var) {
            Some(t) => {
                let _ = writeln!(summary, " (truth {t:?}, relative error {:.3e})", (x - t).abs() / t.abs());
            }
            None => summary.push('\n'),
        }
    }
    let _ = writeln!(summary, "# rss = {:?}", fit.rss);
    let _ = writeln!(summary, "# converged = {}", fit.converged);
    let _ = writeln!(summary, "# degenerate = {}", fit.degenerate);
    let _ = writeln!(summary, "# evaluations = {}", fit.evaluations);

    let d = match format.unwrap_or(Format::Csv) {
        Format::Csv => ",",
        Format::Tsv => "\t",
    };
    let mut table = String::new();
    let _ = writeln!(table, "{}", ["k", "quantity", "observed", "model", "residual", "weight"].join(d));
    for (o, r) in problem.observations().iter().zip(&fit.residuals) {
        let cells = [
            format!("{:?}", o.k),
            o.quantity.to_string(),
            format!("{:?}", o.value),
            format!("{:?}", o.value + r),
            format!("{r:?}"),
            format!("{:?}", o.weight),
        ];
        let _ = writeln!(table, "{}", cells.join(d));
    }

    let failure = if fit.degenerate {
        Some(Failure::Fit("fit is degenerate: the observations do not determine the unknowns".into()))
    } else if !fit.converged {
        Some(Failure::Fit("fit did not converge".into()))
    } else {
        None
    };
    Ok(FitOutput {
        summary,
        table,
        failure,
    })
}

fn cmd_selftest(quick: bool, fault: Option<FaultArg>) -> (String, bool) {
    let cfg = SuiteConfig {
        quick,
        fault: fault.map(|FaultArg::FlipResidualSign| Fault::FlipResidualSign),
    };
    let mut s = String::new();
    let mut failed = Vec::new();
    for suite in SUITES {
        let o = run_suite(suite, &cfg);
        let status = match (o.passed, o.within_budget()) {
            (true, true) => "PASS",
            (true, false) => "FAIL (over budget)",
            (false, _) => "FAIL",
        };
        if status != "PASS" {
            failed.push(suite.name);
        }
        let line = format!(
            "[{}] {:<28} {:<18} {:>9.3}s  {}\n",
            suite.id,
            suite.name,
            status,
            o.elapsed.as_secs_f64(),
            o.detail
        );
        // progress as it happens; the full summary may also go to --out
        eprint!("{line}");
        s.push_str(&line);
    }
    if failed.is_empty() {
        let _ = writeln!(s, "all {} suites passed", SUITES.len());
    } else {
        let _ = writeln!(s, "failed: {}", failed.join(", "));
    }
    (s, failed.is_empty())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let out = cli.out.as_deref();
    match cli.command {
        Command::Report(args) => emit(out, &cmd_report(&args, cli.format)?),
        Command::Figure { name, curves, points } => emit(out, &cmd_figure(&name, curves, points, cli.format)?),
        Command::Fit { config, overrides } => {
            let r = cmd_fit(&config, &overrides, cli.format)?;
            match out {
                Some(path) => {
                    emit(Some(path), &r.table)?;
                    emit(None, &r.summary)?;
                }
                None => emit(None, &format!("{}{}", r.summary, r.table))?,
            }
            r.failure.map_or(Ok(()), Err)
        }
        Command::Selftest { inject_fault } => {
            let (summary, ok) = cmd_selftest(cli.quick, inject_fault);
            if out.is_some() {
                emit(out, &summary)?;
            }
            if ok {
                Ok(())
            } else {
                Err(Failure::Numeric("self-test failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
