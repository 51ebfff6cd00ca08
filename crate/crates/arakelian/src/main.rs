use clap::Parser;

use arakelian::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if let Some(path) = &cli.out_json {
                if let Err(e) = std::fs::write(path, &out.json) {
                    eprintln!("error: failed to write {}: {e}", path.display());
                    std::process::exit(1);
                }
            } else {
                print!("{}", out.json);
            }
            if let Some(path) = &cli.out_svg {
                match &out.svg {
                    Some(svg) => {
                        if let Err(e) = std::fs::write(path, svg) {
                            eprintln!("error: failed to write {}: {e}", path.display());
                            std::process::exit(1);
                        }
                    }
                    None => {
                        eprintln!("error: this command produces no SVG output");
                        std::process::exit(2);
                    }
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
