use clap::Parser;

fn main() {
    let cli = conifold_cli::Cli::parse();
    let (out, code) = conifold_cli::run(&cli);
    if code == 2 {
        eprintln!("{out}");
    } else {
        println!("{out}");
    }
    std::process::exit(code);
}
