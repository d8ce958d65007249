//! Runs the finite-group surveys at their full sizes and prints a summary
//! line for each, with timings.

use std::time::Instant;

use gl_distinction::survey::{
    gow_survey, levi_character_survey, levi_survey, mirabolic_survey, modular_survey, Budgets,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let b = Budgets::default();
    let t = Instant::now();
    let g = gow_survey(3, 2, &b)?;
    println!(
        "GL_3(F_4) over GL_3(F_2): {} supercuspidals, {} sigma-selfdual, max dim {}, {} failures ({:.2?})",
        g.rows.len(),
        g.selfdual_count(),
        g.max_dim_all_irreducibles,
        g.failures.len(),
        t.elapsed()
    );
    let t = Instant::now();
    let l = levi_survey(2, 9, &b)?;
    println!(
        "GL_2(F_9) over GL_1 x GL_1: {} supercuspidals, {} selfdual, {} failures ({:.2?})",
        l.rows.len(),
        l.selfdual_count(),
        l.failures.len(),
        t.elapsed()
    );
    let t = Instant::now();
    let g = gow_survey(2, 3, &b)?;
    println!(
        "GL_2(F_9) over GL_2(F_3): max distinction dim over all irreducibles {} ({:.2?})",
        g.max_dim_all_irreducibles,
        t.elapsed()
    );
    for (n, q) in [(2, 3), (3, 3)] {
        let t = Instant::now();
        let (rows, f) = levi_character_survey(n, q, &b)?;
        println!("GL_{n}(F_{q}) Levi characters r != s: {} sums, {} nonzero ({:.2?})", rows.len(), f.len(), t.elapsed());
        let t = Instant::now();
        let (rows, f) = mirabolic_survey(n, q)?;
        for r in &rows {
            println!("  mirabolic r={} s={} alpha={} beta={}: {}", r.r, r.s, r.alpha, r.beta, r.dim);
        }
        println!("  {} failures ({:.2?})", f.len(), t.elapsed());
    }
    for ell in [3, 5, 7] {
        let t = Instant::now();
        let m = modular_survey(2, 3, ell)?;
        println!(
            "ell = {ell}: modulus {}, {} of {} reductions supercuspidal, lifts {:?}, {} failures ({:.2?})",
            m.modulus,
            m.supercuspidal_reductions,
            m.exponents,
            m.lifts,
            m.failures.len(),
            t.elapsed()
        );
    }
    Ok(())
}
