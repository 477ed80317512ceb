//! Satisfaction probabilities of equations with constants, and P^k(G, g)
//! for every value g of the simple commutator.

use nilprob::group::{corpus, parse_word};
use nilprob::nildegree::{dphi_exact, p_k_exact};

fn main() -> nilprob::Result<()> {
    let g = corpus::symmetric(4);
    for text in ["x1 x1", "x1 x2 x1^-1 x2^-1", "x1 x1 x1 c:(1,2,3)^-1", "x1 x2 x1 x2 x1 x2"] {
        let w = parse_word(text, |l| g.find_label(l), |&c| g.inv(c))?;
        println!("P({text} = 1) in Sym(4) = {}", dphi_exact(&g, &w, 100_000_000)?);
    }
    let d = corpus::dihedral(8);
    for x in 0..d.order() {
        let p = p_k_exact(&d, x, 1)?;
        if p > num_rational::BigRational::from_integer(0.into()) {
            println!("P([x, y] = {}) in Dih(8) = {p}", d.label(x));
        }
    }
    Ok(())
}
