mod args;
mod commands;
mod output;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::{Cli, Command, Format};
use hullwalk::harness::ExperimentReport;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.global.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.global.jobs).build_global() {
            eprintln!("error: --jobs: {e}");
            return ExitCode::from(1);
        }
    }
    let start = Instant::now();
    let outcome = commands::run(&cli.command, cli.global.seed);
    let elapsed = start.elapsed().as_secs_f64();

    let failed = outcome.results.is_err() || !outcome.passed;
    let results = match &outcome.results {
        Ok(v) => v.clone(),
        Err(msg) => serde_json::json!({ "error": msg }),
    };
    let mut report = match ExperimentReport::new(outcome.experiment, cli.global.seed, &outcome.parameters, &results) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if cli.global.timing {
        report.wall_time = Some(elapsed);
    }
    let bytes = match (cli.global.format, &outcome.path, &cli.command) {
        (Format::Csv, Some(path), Command::Simulate(_)) => output::path_csv(path).map_err(|e| e.to_string()),
        (Format::Csv, _, _) => output::report_csv(&report).map_err(|e| e.to_string()),
        (Format::Json, _, _) => report.to_json().map(String::into_bytes).map_err(|e| e.to_string()),
    };
    let bytes = match bytes {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = output::write_output(&bytes, cli.global.out.as_deref()) {
        let target = cli.global.out.as_ref().map_or("stdout".to_string(), |p| p.display().to_string());
        eprintln!("error: writing {target}: {e}");
        return ExitCode::from(2);
    }
    if let Err(msg) = &outcome.results {
        eprintln!("error: {msg}");
    }
    if failed {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}
