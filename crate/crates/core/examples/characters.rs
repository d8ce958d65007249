//! Counts Frobenius orbits of regular characters of F_{q^n}^x, the
//! sigma-selfdual ones among them, and lifts of reductions mod ell.

use gl_distinction::mchar::{
    count_sigma_selfdual_supercuspidals, lift_sigma_selfdual, regular_orbits, MultChar,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (q0, n) in [(2u128, 3u32), (3, 1), (3, 2), (3, 3), (5, 3)] {
        let q = q0 * q0;
        let regular = regular_orbits(q, n)?.len();
        let selfdual = count_sigma_selfdual_supercuspidals(q0, n)?;
        println!("GL_{n}(F_{q}) over GL_{n}(F_{q0}): {regular} supercuspidals, {selfdual} sigma-selfdual");
    }

    let (q0, n, ell) = (2u128, 3u32, 7u128);
    let q = q0 * q0;
    let modulus = MultChar::new(q, n, 0)?.reduce_mod_ell(ell)?.modulus;
    for r in 0..modulus {
        let reduced = MultChar::with_modulus(q, n, modulus, r)?;
        if !reduced.is_regular() || !reduced.is_sigma_selfdual(q0)? {
            continue;
        }
        let lift = lift_sigma_selfdual(r, q0, n, ell)?;
        assert!(lift.is_sigma_selfdual(q0)?);
        assert_eq!(lift.reduce_mod_ell(ell)?, reduced);
        println!("ell = {ell}: {r} mod {modulus} lifts to {} mod {}", lift.exp, lift.modulus);
    }
    Ok(())
}
