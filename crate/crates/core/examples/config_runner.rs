//! Drives the commands from `key=value` text, the same way the `qcrit`
//! binary does, and re-reads the emitted manifest.

use qcrit::runner::{parse_config, parse_manifest, run, Command};

fn main() -> qcrit::Result<()> {
    let dir = std::env::temp_dir().join("qcrit-config-runner");
    let text = format!(
        "# block scan at the critical point\n\
         spin=1/2\nn=12\nlambda=1\nq_list=special,1\ntarget=scan\nout_dir={}\n",
        dir.display()
    );
    let cfg = parse_config(&text)?;
    let art = run(Command::Blockscan, &cfg)?;
    for note in &art.notes {
        println!("{note}");
    }
    let manifest = std::fs::read_to_string(&art.manifest)?;
    assert_eq!(parse_manifest(&manifest)?, cfg);
    println!("manifest round-trips: {}", art.manifest.display());
    println!("as text:\n{}", cfg.to_text());
    Ok(())
}
