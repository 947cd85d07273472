use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use qcrit::runner::{self, Command};

const USAGE: &str = "usage: qcrit <sweep|blockscan|extrapolate|spin-power|oracle-check|plot> <config-file>";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let [command, config] = args.as_slice() else {
        eprintln!("{USAGE}");
        return ExitCode::from(2);
    };
    let result = command
        .parse::<Command>()
        .and_then(|c| runner::run_file(c, Path::new(config)));
    match result {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            for note in &out.notes {
                let _ = writeln!(stdout, "{note}");
            }
            let _ = writeln!(stdout, "wrote {}", out.out_dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
