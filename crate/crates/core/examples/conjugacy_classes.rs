//! Lists conjugacy classes of GL_n(F_q) by similarity type and compares
//! the class count and sizes with a brute-force orbit enumeration.

use gl_distinction::glgroup::{enumerate_classes_brute, ClassList, GeneralLinear, DEFAULT_GROUP_BUDGET};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let (n, q) = match args[..] {
        [n, q] => (n as usize, q),
        _ => (2, 3),
    };
    let g = GeneralLinear::new(n, q)?;
    let classes = ClassList::build(&g)?;
    println!("GL_{n}(F_{q}): order {}, {} classes", g.order(), classes.len());
    for c in classes.classes() {
        println!("  {:?}  size {}  order {}", c.key, c.size, c.element_order);
    }
    if g.order() <= 200_000 {
        let brute = enumerate_classes_brute(&g, DEFAULT_GROUP_BUDGET)?;
        assert_eq!(brute.len(), classes.len());
        for (key, size) in brute {
            let i = classes.index_of_key(&key)?;
            assert_eq!(classes.classes()[i].size, size);
        }
        println!("brute-force enumeration agrees");
    }
    Ok(())
}
