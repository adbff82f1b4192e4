use clap::Parser;

fn main() {
    let cli = pt_trimmer_cli::Cli::parse();
    match pt_trimmer_cli::execute(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(1);
        }
    }
}
