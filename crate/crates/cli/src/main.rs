use std::process::ExitCode;

fn main() -> ExitCode {
    match fluxsense_cli::run(std::env::args_os()) {
        Ok(Ok(outcome)) => {
            for path in outcome.outputs.iter().chain(&outcome.manifest) {
                println!("{}", path.display());
            }
            ExitCode::SUCCESS
        }
        Ok(Err(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
