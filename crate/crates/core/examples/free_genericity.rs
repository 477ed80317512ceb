//! Random pairs from balls in F_2: how often they pass the Delzant
//! condition and how often they are free bases (decided by Stallings folding).

use nilprob::genericity::{core_graph, genericity_sweep, FreeWord};

fn main() -> nilprob::Result<()> {
    let words = ["aa", "bb", "abab"].map(|w| FreeWord::parse(2, w).unwrap());
    let core = core_graph(&words);
    println!("core graph of <a^2, b^2, (ab)^2>: {} vertices, {} edges, rank {}", core.vertices, core.edges.len(), core.rank());

    println!("{:>6} {:>12} {:>12}", "radius", "delzant", "free basis");
    for r in genericity_sweep(2, &[1, 2, 3, 5, 10, 15, 20], 10_000, 7)? {
        println!("{:>6} {:>12.4} {:>12.4}", r.radius, r.delzant_frac, r.basis_frac);
    }
    Ok(())
}
