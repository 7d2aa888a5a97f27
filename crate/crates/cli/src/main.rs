use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use prym_core::pipeline::{combine_with_known_prym_parity, run_pipeline, CurveInput, PipelineOptions, PlaceSelection};
use prym_core::{CoreError, Overrides};

#[derive(Parser)]
#[command(name = "prym-parity", version, about = "Local formula for the 2-Selmer parity of Jac C x Prym(D/C)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every local term and their product.
    Compute {
        /// JSON file with the coefficients of f and g.
        #[arg(long)]
        input: PathBuf,
        /// JSON file with Tamagawa, deficiency or lambda_2 overrides.
        #[arg(long = "override")]
        overrides: Option<PathBuf>,
        /// "all", or a comma-separated list of "inf", "2" and primes.
        #[arg(long, default_value = "all")]
        places: PlaceSelection,
        /// Also evaluate lambda_p at this many of the smallest good primes.
        #[arg(long, default_value_t = 0)]
        spot_check_good_primes: usize,
        /// Known sign (-1)^(rk2 Prym), to isolate the parity of rk2 Jac C.
        #[arg(long, allow_hyphen_values = true)]
        prym_sign: Option<i32>,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        verbose: bool,
    },
}

fn read(path: &PathBuf) -> Result<String, CoreError> {
    std::fs::read_to_string(path).map_err(|e| CoreError::Invalid(format!("{}: {e}", path.display())))
}

fn compute(cmd: Command) -> Result<i32, CoreError> {
    let Command::Compute { input, overrides, places, spot_check_good_primes, prym_sign, out, verbose: _ } = cmd;
    let input = CurveInput::from_json(&read(&input)?)?;
    let overrides = match overrides {
        Some(p) => Overrides::from_json(&read(&p)?)?,
        None => Overrides::default(),
    };
    let opts = PipelineOptions { overrides, places, spot_check_good_primes };
    let report = run_pipeline(&input, &opts)?;
    let mut value = serde_json::to_value(&report).expect("report serialises");
    if let Some(s) = prym_sign {
        let combined = combine_with_known_prym_parity(&report, s)?;
        value["prym_sign"] = s.into();
        value["jac_c_sign"] = combined.into();
        let parity = if combined == 1 { "even" } else { "odd" };
        value["jac_c_statement"] = format!("(-1)^(rk2 Jac C) = {combined}: rk2 Jac C is {parity}").into();
    }
    let text = serde_json::to_string_pretty(&value).expect("report serialises") + "\n";
    match out {
        Some(p) => std::fs::write(&p, text).map_err(|e| CoreError::Invalid(format!("{}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    // Usage errors exit with 1; status 2 means an override is required.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let Command::Compute { verbose, .. } = &cli.command;
    let level = if *verbose { "info" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match compute(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
