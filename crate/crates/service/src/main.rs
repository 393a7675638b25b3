use std::process::ExitCode;

fn main() -> ExitCode {
    match latentwander_service::run(std::env::args_os()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            err.report();
            ExitCode::from(err.exit_code())
        }
    }
}
