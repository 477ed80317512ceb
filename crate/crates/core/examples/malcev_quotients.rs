//! Heisenberg and UT(4, Z) in Mal'cev coordinates: arithmetic, finite
//! quotients G(n), their commuting probabilities, and root densities.

use nilprob::group::{Caps, Group, GroupWord};
use nilprob::malcev::{dphi_quotient_sequence, root_density, IntPolynomial, MalcevGroup};
use num_bigint::BigInt;

fn main() -> nilprob::Result<()> {
    let h = MalcevGroup::heisenberg();
    let x: Vec<BigInt> = [0, 1, 0].map(BigInt::from).to_vec();
    let y: Vec<BigInt> = [0, 0, 1].map(BigInt::from).to_vec();
    println!("Heisenberg, n0 = {}: [e2, e3] = {:?}", h.n0, h.commutator(&x, &y));
    println!("(e2 e3)^5 = {:?}", h.mal_pow(&h.mul(&x, &y), &BigInt::from(5))?);

    let w = GroupWord::simple_commutator_word(&h, 1);
    let seq = dphi_quotient_sequence(&h, &w, &[3, 5, 7, 9], &Caps::default())?;
    for (n, v) in seq.moduli.iter().zip(&seq.values) {
        println!("dc(G({n})) = {v}");
    }
    println!("non-increasing along divisibility: {}", seq.nested_non_increasing);

    let names = ["v1", "v2", "v3", "w1", "w2", "w3"];
    let comm = IntPolynomial::parse("v3*w2 - v2*w3", &names)?;
    for n in [3, 5, 7, 11, 13] {
        println!("density of v3 w2 = v2 w3 mod {n}: {}", root_density(&h, &comm, n, &Caps::default())?);
    }

    let u = MalcevGroup::ut4();
    println!("UT(4, Z): m = {}, n0 = {}, |G(5)| = {}", u.m, u.n0, u.finite_quotient(5, &Caps::default())?.order());
    Ok(())
}
