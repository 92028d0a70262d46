use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use ambc_pls_core::model::{PlacementMode, Scenario};
use ambc_pls_core::montecarlo::SimConfig;
use ambc_pls_core::sweep::{
    emit, load_scenario, parse_values, run_sweep, scenario_rows, validate_run, Axis, Evaluation, Format, Metric,
    PointLabel, ResultRow, SweepSpec, ToleranceProfile,
};
use ambc_pls_core::Error;
use clap::{Args, Parser, Subcommand};

const EXIT_USAGE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_VERDICT: u8 = 3;

/// Outage and intercept probabilities for an AmBC-NOMA downlink with random eavesdroppers.
#[derive(Parser)]
#[command(name = "ambc-pls", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form, asymptotic and floor values for one scenario.
    Analytic(Common),
    /// Monte Carlo estimates for one scenario.
    Simulate(Common),
    /// Evaluate metrics over one or two parameter axes.
    Sweep(SweepArgs),
    /// Compare every closed form with its Monte Carlo estimate.
    Validate(Common),
}

#[derive(Args)]
struct Common {
    /// Scenario file (flat JSON object); missing keys take baseline values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: Format,
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Eve placement; overrides the scenario file.
    #[arg(long, value_parser = parse_mode)]
    mode: Option<PlacementMode>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "gamma_db")]
    axis: String,
    /// Comma-separated list or start:stop:step.
    #[arg(long, default_value = "0:40:5")]
    values: String,
    #[arg(long, requires = "values2")]
    axis2: Option<String>,
    #[arg(long, requires = "axis2")]
    values2: Option<String>,
    /// Metric names or groups: all, op, ip, floors, asymptotics, mc.
    #[arg(long, default_value = "all")]
    metrics: String,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_mode(s: &str) -> Result<PlacementMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Core(Error),
    Evaluation(String),
    Verdict(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Common {
    fn scenario(&self) -> Result<Scenario, Error> {
        let mut s = match &self.config {
            Some(path) => load_scenario(path)?,
            None => Scenario::baseline(),
        };
        if let Some(mode) = self.mode {
            s.eves.placement = mode;
        }
        for w in s.warnings() {
            eprintln!("warning: {w}");
        }
        Ok(s)
    }

    fn sim(&self, s: &Scenario) -> Result<SimConfig, Error> {
        let sim = SimConfig::new(self.trials, self.seed).with_placement(s.eves.placement);
        sim.validate()?;
        Ok(sim)
    }

    fn write(&self, rows: &[ResultRow]) -> Result<(), Error> {
        match &self.out {
            Some(path) => {
                ambc_pls_core::sweep::emit_to_path(rows, self.format, path)?;
            }
            None => {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                emit(rows, self.format, &mut lock)?;
                lock.flush()?;
            }
        }
        Ok(())
    }
}

fn single_point(c: &Common, analytic: bool) -> Result<(), Failure> {
    let s = c.scenario()?.validate().map_err(Error::from)?;
    let (metrics, eval) = if analytic {
        let metrics: Vec<Metric> = Metric::PROBABILITIES.into_iter().chain(Metric::FLOORS).collect();
        (
            metrics,
            Evaluation {
                analytic: true,
                asymptotics: true,
                mc: None,
            },
        )
    } else {
        let eval = Evaluation {
            analytic: false,
            asymptotics: false,
            mc: Some(c.sim(&s)?),
        };
        (Metric::PROBABILITIES.to_vec(), eval)
    };
    let rows = scenario_rows(&s, &metrics, &eval, &PointLabel::single("p0000", &s));
    if let Some(e) = rows.iter().find_map(|r| r.error.clone()) {
        return Err(Failure::Evaluation(e));
    }
    c.write(&rows)?;
    Ok(())
}

fn sweep(args: &SweepArgs) -> Result<(), Failure> {
    let c = &args.common;
    let s = c.scenario()?.validate().map_err(Error::from)?;
    let axis: Axis = args.axis.parse()?;
    let secondary = match (&args.axis2, &args.values2) {
        (Some(a), Some(v)) => Some((a.parse()?, parse_values(v)?)),
        _ => None,
    };
    let spec = SweepSpec {
        axis,
        values: parse_values(&args.values)?,
        secondary,
        selection: args.metrics.parse()?,
    };
    let sim = if spec.selection.mc { Some(c.sim(&s)?) } else { None };
    let rows = run_sweep(&s, &spec, sim.as_ref())?;
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    if failed > 0 {
        eprintln!("warning: {failed} rows could not be evaluated");
    }
    c.write(&rows)?;
    Ok(())
}

fn validate(c: &Common) -> Result<(), Failure> {
    let s = c.scenario()?.validate().map_err(Error::from)?;
    let sim = c.sim(&s)?;
    let report = validate_run(&s, &sim, &ToleranceProfile::default())?;
    let label = PointLabel::single("p0000", &s);
    let rows: Vec<ResultRow> = report
        .verdicts
        .iter()
        .map(|v| ResultRow {
            scenario_id: label.scenario_id.clone(),
            axis: label.axis.name().to_string(),
            axis_value: label.axis_value,
            axis2: None,
            axis2_value: None,
            metric: v.metric.name().to_string(),
            analytic: Some(v.analytic),
            asymptotic: None,
            mc: Some(v.mc.p_hat),
            ci_lo: Some(v.mc.ci_lo),
            ci_hi: Some(v.mc.ci_hi),
            trials: Some(v.mc.trials),
            error: None,
        })
        .collect();
    c.write(&rows)?;
    for v in &report.verdicts {
        eprintln!(
            "{} {}: analytic {:.6}, mc {:.6}, deviation {:.3} of allowance {:.2e}",
            if v.pass { "ok  " } else { "FAIL" },
            v.metric,
            v.analytic,
            v.mc.p_hat,
            v.deviation,
            v.allowance
        );
    }
    if report.passed {
        Ok(())
    } else {
        let names: Vec<_> = report.failures().map(|v| v.metric.name()).collect();
        Err(Failure::Verdict(format!("validation failed for {}", names.join(", "))))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Analytic(c) => single_point(c, true),
        Command::Simulate(c) => single_point(c, false),
        Command::Sweep(a) => sweep(a),
        Command::Validate(c) => validate(c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Evaluation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Verdict(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_VERDICT)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::Validation(_) => ExitCode::from(EXIT_INVALID),
                _ => ExitCode::from(EXIT_USAGE),
            }
        }
    }
}
