//! Decides distinction for the tower specs in examples/specs and, for the
//! distinguished ones, looks for an unramified twist that is
//! omega-distinguished.

use gl_distinction::localtower::SpecFile;
use gl_distinction::verdict::{decide, exhaustive_twist_scan, omega_twist_exists, twist, Outcome};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/specs");
    let mut paths: Vec<_> = std::fs::read_dir(dir)?.map(|e| e.map(|e| e.path())).collect::<Result<_, _>>()?;
    paths.sort();
    for path in paths {
        let name = path.file_name().unwrap_or_default().to_string_lossy().into_owned();
        let (s, x, ell) = SpecFile::parse(&std::fs::read_to_string(&path)?)?.parts();
        let v = match decide(&s, &x, ell) {
            Ok(v) => v,
            Err(e) => {
                println!("{name}: rejected ({e})");
                continue;
            }
        };
        print!("{name}: {:?} by {}", v.outcome, v.rule);
        if v.outcome == Outcome::Distinguished && ell != 2 {
            let found = omega_twist_exists(&s, &x, ell)?;
            let scanned = exhaustive_twist_scan(&s, &x, ell, 8 * v.invariants.degrees.f_df as u128)?;
            assert_eq!(found.is_some(), scanned.is_some());
            match found {
                Some(chi) => {
                    let w = decide(&s, &twist(&s, &x, &chi), ell)?;
                    print!("; twist by chi(uniformizer) = {} gives {:?}", chi.chi_at_uniformizer, w.outcome);
                }
                None => print!("; no unramified twist is omega-distinguished"),
            }
        }
        println!();
    }
    Ok(())
}
