use std::process::ExitCode;

use clap::Parser;
use polygas_cli::{error_report, execute, model_error_report, render, Cli, RunConfig};

const THREADS_VAR: &str = "POLYGAS_THREADS";

fn fail(code: &str, message: &str) -> ExitCode {
    print!("{}", error_report(code, message, serde_json::Value::Null));
    ExitCode::from(2)
}

fn fail_model(e: &polygas_core::Error) -> ExitCode {
    print!("{}", model_error_report(e));
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("usage", &e.to_string()),
    };
    if let Ok(v) = std::env::var(THREADS_VAR) {
        let Ok(n) = v.parse::<usize>() else {
            return fail("invalid_param", &format!("{THREADS_VAR}={v} is not a thread count"));
        };
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return fail("threads", &e.to_string());
        }
    }
    let cfg = match RunConfig::from_cli(cli) {
        Ok(c) => c,
        Err(e) => return fail_model(&e),
    };
    let out = match execute(&cfg) {
        Ok(o) => o,
        Err(e) => return fail_model(&e),
    };
    let text = match render(&cfg, &out) {
        Ok(t) => t,
        Err(e) => return fail("render", &e),
    };
    match &cfg.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                return fail("io", &e.to_string());
            }
        }
        None => print!("{text}"),
    }
    ExitCode::SUCCESS
}
