//! Builds the character table of GL_n(F_q) and prints a summary.
//!
//! cargo run --release --example chartab -- 2 9

use std::time::Instant;

use gl_distinction::chartab::CharTable;
use gl_distinction::glgroup::DEFAULT_GROUP_BUDGET;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let (n, q) = match args.as_slice() {
        [n, q] => (*n as usize, *q),
        _ => (2, 3),
    };
    let start = Instant::now();
    let t = CharTable::build(n, q, DEFAULT_GROUP_BUDGET)?;
    println!("GL_{n}(F_{q}): |G| = {}, {} classes, exponent {}", t.order(), t.len(), t.exponent());
    println!("lifting prime {}", t.lifting_prime());
    let mut dims = t.dims().to_vec();
    dims.sort_unstable();
    println!("degrees {dims:?}");
    println!("cuspidal: {}", t.cuspidal_indices()?.len());
    println!("built and verified in {:.2?}", start.elapsed());
    Ok(())
}
