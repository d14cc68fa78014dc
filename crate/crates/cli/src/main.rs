use clap::Parser;
use sl2hat_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok((value, ok)) => {
            println!("{}", serde_json::to_string_pretty(&value).expect("report serializes"));
            std::process::exit(if ok { 0 } else { 1 });
        }
        Err(usage) => {
            eprintln!("error: {usage}");
            std::process::exit(2);
        }
    }
}
