use clap::Parser;
use posaffine_cli::{dispatch, Cli};

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(cli) {
        Ok(outcome) => {
            println!("{}", serde_json::to_string_pretty(&outcome.summary).expect("summary serializes"));
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
