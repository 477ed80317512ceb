//! Groups from the text format: permutation generators, a Cayley table, and
//! matrices over F_p.

use nilprob::group::{parse_group_file, Caps};
use nilprob::nildegree::dc_k_exact;

const FILES: &[(&str, &str)] = &[
    ("Sym(4) from two generators", "perm 4\n(1,2)\n(1,2,3,4)\nend\n"),
    ("C_3 as a table", "table 3\n0 1 2\n1 2 0\n2 0 1\nend\n"),
    ("UT(3, F_3)", "matfp 3\n1 1 0; 0 1 0; 0 0 1\n1 0 0; 0 1 1; 0 0 1\nend\n"),
];

fn main() -> nilprob::Result<()> {
    for (name, text) in FILES {
        let g = parse_group_file(text, &Caps::default())?;
        g.check_axioms()?;
        println!("{name}: order {}, dc^1 = {}, dc^2 = {}", g.order(), dc_k_exact(&g, 1), dc_k_exact(&g, 2));
    }
    match parse_group_file("perm 4\n(1,2)\n(1,q)\nend\n", &Caps::default()) {
        Err(e) => println!("malformed file: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
