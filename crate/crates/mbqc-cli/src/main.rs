use clap::Parser;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = mbqc_cli::cli::Cli::parse();
    match mbqc_cli::run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            // Contract violations are usage errors, like bad flags.
            let code = match err.downcast_ref::<mbqc_core::Error>() {
                Some(mbqc_core::Error::Usage(_)) => 2,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}
