//! Compares level-zero verdicts with the finite group computation
//! `GL_m(F_{q0^2}) ⊃ GL_m(F_{q0})`.

use gl_distinction::verdict::{cross_check_level_zero, level_zero_data};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (q0, m) in [(2, 1), (3, 1), (2, 3)] {
        println!("q0 = {q0}, m = {m}");
        for (s, x) in level_zero_data(q0, m)? {
            let c = cross_check_level_zero(&s, &x)?;
            println!(
                "  theta {:>3}  xi(t) {:>2}  {:?}  finite dim {}  {}",
                c.theta_exp,
                c.xi_t.to_string(),
                c.outcome,
                c.finite_dim,
                if c.consistent { "consistent" } else { "MISMATCH" }
            );
        }
    }
    Ok(())
}
