use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = quadkin_cli::run(std::env::args_os());
    if !outcome.message.is_empty() {
        let text = outcome.message.trim_end();
        if outcome.code == quadkin_cli::EXIT_OK {
            println!("{text}");
        } else {
            eprintln!("{text}");
        }
    }
    ExitCode::from(outcome.code as u8)
}
