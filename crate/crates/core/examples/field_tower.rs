//! Builds F_2 ⊂ F_4 ⊂ F_16 and F_3 ⊂ F_9 ⊂ F_81, then checks that the
//! canonical embeddings commute with norms and Frobenius.

use gl_distinction::ffield::build_field;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (p, ks) in [(2u32, [1u32, 2, 4]), (3, [1, 2, 4])] {
        let fields = ks.iter().map(|&k| build_field(p, k)).collect::<Result<Vec<_>, _>>()?;
        for f in &fields {
            println!("F_{}: defining poly {:?}, generator {}", f.size(), f.defining_poly(), f.generator());
        }
        let (small, mid, big) = (&fields[0], &fields[1], &fields[2]);
        let mut checked = 0;
        for x in small.elements() {
            let via_mid = big.embed_from(mid, mid.embed_from(small, x)?)?;
            assert_eq!(via_mid, big.embed_from(small, x)?);
            checked += 1;
        }
        for y in big.elements().filter(|&y| y != 0) {
            let n = big.norm_to(small, y)?;
            assert_eq!(n, mid.norm_to(small, big.norm_to(mid, y)?)?);
            assert_eq!(big.norm_to(mid, big.frobenius(y))?, mid.frobenius(big.norm_to(mid, y)?));
            checked += 1;
        }
        println!("F_{} ⊂ F_{} ⊂ F_{}: {checked} embedding and norm checks passed", small.size(), mid.size(), big.size());
    }
    Ok(())
}
