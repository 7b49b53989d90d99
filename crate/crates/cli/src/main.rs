use std::process::ExitCode;

fn main() -> ExitCode {
    match discordlab::run(std::env::args_os()) {
        Err(usage) => usage.exit(),
        Ok(Ok(outcome)) => {
            println!("{}", outcome.summary);
            ExitCode::SUCCESS
        }
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
