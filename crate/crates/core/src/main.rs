use clap::Parser;
use dilrig::cli::{run, Cli};

fn main() {
    match run(Cli::parse()) {
        Ok((doc, code)) => {
            println!("{doc}");
            if code != 0 {
                std::process::exit(code);
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
