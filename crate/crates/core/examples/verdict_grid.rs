//! Scans the default grid of tower data and prints how often each decision
//! rule fired, plus any property failures.

use std::time::Instant;

use gl_distinction::verdict::{scan_grid, GridConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let start = Instant::now();
    let rep = scan_grid(&GridConfig::default())?;
    println!("{} towers, {} data", rep.towers, rep.data);
    for (rule, n) in &rep.by_rule {
        println!("  {rule:<36} {n}");
    }
    println!(
        "n odd checks {}, twist checks {}, flip checks {}",
        rep.n_odd_checked, rep.twist_checked, rep.flip_checked
    );
    for f in rep.failures.iter().take(10) {
        println!("FAIL {f}");
    }
    println!("{} failures in {:.2?}", rep.failures.len(), start.elapsed());
    Ok(())
}
