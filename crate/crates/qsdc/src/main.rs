use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qsdc::config::{RunConfig, Settings};
use qsdc::trials::{run_trials, write_records, TrialRun};
use qsdc::{curves, tables, transcript_io, CliError, Result, EXIT_ALARM};
use qsdc_core::auth::Verdict;

#[derive(Parser)]
#[command(name = "qsdc", version, about = "Authenticated N-user quantum secure direct communication simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Authenticate every user, send a message and run the eavesdropping check
    Run {
        #[command(flatten)]
        settings: Settings,
        /// TOML file with the same keys as the flags; flags win
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Write the two-way attack curves as CSV plus a spot-value summary
    Curves {
        #[arg(long, default_value = "curves")]
        csv_dir: PathBuf,
    },
    /// Generate the decode tables and the conformance report
    Tables {
        #[arg(long, default_value = "tables")]
        out: PathBuf,
    },
}

fn cmd_run(settings: Settings, config: Option<PathBuf>) -> Result<bool> {
    let settings = match config {
        Some(path) => settings.or(Settings::from_file(&path)?),
        None => settings,
    };
    let cfg = RunConfig::from_settings(settings)?;
    let run = run_trials(&cfg)?;
    let out = cfg.out.clone().unwrap_or_else(|| PathBuf::from("transcript.jsonl"));
    transcript_io::save(run.first.transcript(), &out)?;
    if let Some(dir) = &cfg.csv_dir {
        write_records(&dir.join("trials.csv"), &run.records)?;
    }
    print_run(&cfg, &run);
    Ok(!run.summary.alarmed())
}

fn print_run(cfg: &RunConfig, run: &TrialRun) {
    println!(
        "{} users, {} mode, attack {} on u{}, seed {}, {} trial(s)",
        cfg.n_users,
        cfg.mode.name(),
        cfg.attack,
        cfg.target,
        cfg.seed,
        cfg.trials
    );
    let s = &run.summary;
    if cfg.trials == 1 {
        for r in run.first.auth_results() {
            let verdict = match r.verdict {
                Verdict::Authenticated => "authenticated",
                Verdict::Terminated => "terminated",
            };
            println!("auth {}: error rate {:.4} over {} rounds, {verdict}", r.user, r.error_rate, r.rounds.len());
        }
        let rec = &run.records[0];
        println!("status: {}", rec.status);
        println!("decoded: {}", if rec.decoded.is_empty() { "-" } else { &rec.decoded });
        println!("symbol error rate: {} of {} symbols", rec.symbol_errors, rec.symbols);
    } else {
        println!(
            "delivered {}, auth terminated {}, check terminated {}, tampering alarms {}",
            s.delivered, s.auth_terminated, s.check_terminated, s.tampering
        );
        println!("auth rejection rate u{}: {}", cfg.target, s.auth_rejection);
        println!("symbol error rate: {}", s.symbol_error);
    }
    if let Some(g) = &s.guess_accuracy {
        println!("attacker Pauli-guess accuracy: {g}");
    }
}

fn cmd_curves(dir: PathBuf) -> Result<bool> {
    let checks = curves::write_curves(&dir)?;
    for c in &checks {
        println!("{c}");
    }
    println!("wrote fig2a.csv, fig2b.csv, fig2c.csv, fig2de.csv and summary.txt to {}", dir.display());
    Ok(checks.iter().all(|c| c.passed()))
}

fn cmd_tables(dir: PathBuf) -> Result<bool> {
    let report = tables::write_tables(&dir)?;
    print!("{}", report.render());
    println!("wrote decode_tables.csv and conformance.txt to {}", dir.display());
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { settings, config } => cmd_run(settings, config),
        Command::Curves { csv_dir } => cmd_curves(csv_dir),
        Command::Tables { out } => cmd_tables(out),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_ALARM as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(CliError::exit_code(&e) as u8)
        }
    }
}
