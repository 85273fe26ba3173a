use clap::Parser;
use qretro_cli::cli::{main_with, Cli};
use qretro_cli::ExitCode;

fn main() -> std::process::ExitCode {
    let code = match Cli::try_parse() {
        Ok(cli) => main_with(cli),
        Err(e) => {
            let _ = e.print();
            // usage errors are validation failures; --help and --version are not
            if e.use_stderr() {
                ExitCode::Validation
            } else {
                ExitCode::Success
            }
        }
    };
    std::process::ExitCode::from(code as u8)
}
