use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use polymethod_cli::{parse_constants, render_constants, run, Command, Overrides, RunReport, Scenario};

#[derive(Parser)]
#[command(name = "polymethod", version, about = "Run polynomial-method scenarios and write JSON reports")]
struct Cli {
    #[command(subcommand)]
    action: Action,

    /// Overrides the scenario seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Largest degree any Gröbner computation may reach.
    #[arg(long, global = true)]
    budget_degree: Option<u32>,

    /// Wall-clock budget in milliseconds.
    #[arg(long, global = true)]
    budget_time: Option<u64>,

    /// Constants to load; `calibrate` writes here instead.
    #[arg(long, global = true)]
    constants_file: Option<PathBuf>,

    /// Report destination; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Action {
    /// Run the command named in the scenario.
    Run { scenario: PathBuf },
    #[command(flatten)]
    Kind(Kind),
}

#[derive(Subcommand)]
enum Kind {
    Hilbert { scenario: PathBuf },
    Groebner { scenario: PathBuf },
    Profile { scenario: PathBuf },
    Siegel { scenario: PathBuf },
    Partition { scenario: PathBuf },
    Envelope { scenario: PathBuf },
    Fullcover { scenario: PathBuf },
    Incidence { scenario: PathBuf },
    ConstructSharp { scenario: PathBuf },
    ComponentsGrid { scenario: PathBuf },
    Calibrate { scenario: PathBuf },
}

impl Kind {
    fn split(&self) -> (Command, &PathBuf) {
        match self {
            Kind::Hilbert { scenario } => (Command::Hilbert, scenario),
            Kind::Groebner { scenario } => (Command::Groebner, scenario),
            Kind::Profile { scenario } => (Command::Profile, scenario),
            Kind::Siegel { scenario } => (Command::Siegel, scenario),
            Kind::Partition { scenario } => (Command::Partition, scenario),
            Kind::Envelope { scenario } => (Command::Envelope, scenario),
            Kind::Fullcover { scenario } => (Command::Fullcover, scenario),
            Kind::Incidence { scenario } => (Command::Incidence, scenario),
            Kind::ConstructSharp { scenario } => (Command::ConstructSharp, scenario),
            Kind::ComponentsGrid { scenario } => (Command::ComponentsGrid, scenario),
            Kind::Calibrate { scenario } => (Command::Calibrate, scenario),
        }
    }
}

fn emit(report: &RunReport, out: &Option<PathBuf>) -> ExitCode {
    let text = report.to_json();
    match out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &text) {
                eprintln!("cannot write {}: {e}", p.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    if let Some(e) = &report.error {
        eprintln!("{}: {}", e.code, e.message);
    }
    ExitCode::from(report.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, path) = match &cli.action {
        Action::Run { scenario } => (None, scenario),
        Action::Kind(k) => {
            let (c, p) = k.split();
            (Some(c), p)
        }
    };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return emit(&RunReport::input_error("io_error", format!("{}: {e}", path.display())), &cli.out),
    };
    let scenario = match Scenario::parse(&text) {
        Ok(s) => s,
        Err(e) => return emit(&RunReport::input_error("scenario_parse_error", e), &cli.out),
    };
    let calibrating = command.or(scenario.command) == Some(Command::Calibrate);
    let constants = match (&cli.constants_file, calibrating) {
        (Some(p), false) => match std::fs::read_to_string(p).map_err(|e| e.to_string()).and_then(|t| parse_constants(&t)) {
            Ok(c) => Some(c),
            Err(e) => return emit(&RunReport::input_error("constants_error", format!("{}: {e}", p.display())), &cli.out),
        },
        _ => None,
    };
    let ov = Overrides { command, seed: cli.seed, budget_degree: cli.budget_degree, budget_time_ms: cli.budget_time, constants };
    let report = run(scenario, &ov);
    if calibrating && report.status == "ok" {
        if let (Some(p), Some(c)) = (&cli.constants_file, report.result.as_ref().and_then(|r| r.get("constants"))) {
            let c = serde_json::from_value(c.clone()).expect("constants round-trip");
            if let Err(e) = std::fs::write(p, render_constants(&c)) {
                eprintln!("cannot write {}: {e}", p.display());
                return ExitCode::from(1);
            }
        }
    }
    emit(&report, &cli.out)
}
