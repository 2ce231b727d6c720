use clap::{CommandFactory, Parser};
use sclg_cli::commands::{run, Cli};

/// Usage line of the subcommand named in argv, or of the whole tool.
fn usage() -> String {
    let mut cmd = Cli::command();
    let sub = std::env::args().nth(1);
    match sub.as_deref().and_then(|name| cmd.find_subcommand_mut(name)) {
        Some(sub) => sub.render_usage().to_string().replace("Usage: ", "Usage: sclg "),
        None => cmd.render_usage().to_string(),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = e.print();
            if e.use_stderr() && !text.contains("Usage:") {
                eprintln!("\n{}", usage());
            }
            std::process::exit(e.exit_code());
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        if e.exit_code() == 2 {
            eprintln!("\n{}", usage());
        }
        std::process::exit(e.exit_code());
    }
}
