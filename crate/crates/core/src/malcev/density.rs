use num_rational::BigRational;
use rayon::prelude::*;

use super::group::{MalcevElement, MalcevGroup};
use super::poly::IntPolynomial;
use crate::error::{Error, Result};
use crate::group::{Caps, GroupWord};
use crate::nildegree::{dphi_exact, rational};

/// Fraction of `(Z/n)^{nvars}` on which `p ≡ 0 (mod n)`.
///
/// For a polynomial in the coordinates of `G^k` this is an upper bound for
/// the density of the image of the integer roots in `G/G^{(n)}`.
pub fn root_density(g: &MalcevGroup, p: &IntPolynomial, n: u64, caps: &Caps) -> Result<BigRational> {
    g.check_modulus(n)?;
    if p.nvars() % g.m != 0 {
        return Err(Error::ArityMismatch { expected: g.m, got: p.nvars() });
    }
    vanishing_density(p, n, caps.evals)
}

/// Root density mod `n` of a polynomial on its own variables, with no group
/// attached.
pub fn vanishing_density(p: &IntPolynomial, n: u64, cap_evals: u64) -> Result<BigRational> {
    let compiled = p.compile_mod(n)?;
    let k = p.nvars() as u32;
    let total = n
        .checked_pow(k)
        .filter(|&t| t <= cap_evals)
        .ok_or_else(|| Error::cap("root density evaluations", cap_evals))?;
    if k == 0 {
        return Ok(rational(u64::from(compiled.eval(&[]) == 0), 1u64));
    }
    let rest = total / n;
    let zeros: u64 = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut x = vec![0u64; k as usize];
            let mut count = 0u64;
            x[0] = first;
            for code in 0..rest {
                let mut c = code;
                for slot in x.iter_mut().skip(1) {
                    *slot = c % n;
                    c /= n;
                }
                if compiled.eval(&x) == 0 {
                    count += 1;
                }
            }
            count
        })
        .sum();
    Ok(rational(zeros, total))
}

#[derive(Debug, Clone)]
pub struct QuotientSequence {
    pub moduli: Vec<u64>,
    pub values: Vec<BigRational>,
    /// Whether `values` is non-increasing along every pair `a | b` of moduli.
    pub nested_non_increasing: bool,
}

/// Exact `dφ(G/G^{(n)})` for each modulus.
pub fn dphi_quotient_sequence(
    g: &MalcevGroup,
    w: &GroupWord<MalcevElement>,
    moduli: &[u64],
    caps: &Caps,
) -> Result<QuotientSequence> {
    let mut values = Vec::with_capacity(moduli.len());
    for &n in moduli {
        let q = g.finite_quotient(n, caps)?;
        let word = w.map_consts(|c| g.quotient_index(c, n));
        values.push(dphi_exact(&q, &word, caps.evals)?);
    }
    let mut nested_non_increasing = true;
    for (i, &a) in moduli.iter().enumerate() {
        for (j, &b) in moduli.iter().enumerate() {
            if a != b && b % a == 0 && values[j] > values[i] {
                nested_non_increasing = false;
            }
        }
    }
    Ok(QuotientSequence { moduli: moduli.to_vec(), values, nested_non_increasing })
}

/// Degree bound check for one-variable polynomials: density ≤ deg / n.
pub fn univariate_bound_holds(p: &IntPolynomial, n: u64, density: &BigRational) -> bool {
    *density <= rational(u64::from(p.total_degree()), n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Letter;
    use crate::nildegree::dc_k_exact;

    fn heis_commutation() -> IntPolynomial {
        IntPolynomial::parse("x2*w3 - x3*w2", &["x1", "x2", "x3", "w1", "w2", "w3"]).unwrap()
    }

    #[test]
    fn trivial_densities() {
        let z = MalcevGroup::zn(1);
        let caps = Caps::default();
        let x = IntPolynomial::var(1, 0);
        for n in [3u64, 5, 7] {
            assert_eq!(root_density(&z, &x, n, &caps).unwrap(), rational(1u64, n));
        }
        assert_eq!(root_density(&z, &IntPolynomial::int(1, 4), 5, &caps).unwrap(), rational(0u64, 1u64));
    }

    #[test]
    fn commuting_pairs_mod_three() {
        let h = MalcevGroup::heisenberg();
        let caps = Caps::default();
        let d = root_density(&h, &heis_commutation(), 3, &caps).unwrap();
        assert_eq!(d, rational(11u64, 27u64));
        let q = h.finite_quotient(3, &caps).unwrap();
        assert_eq!(dc_k_exact(&q, 1), d);
        for p in [5u64, 7] {
            let d = root_density(&h, &heis_commutation(), p, &caps).unwrap();
            assert_eq!(d, rational(p * p + p - 1, p * p * p));
        }
        assert!(matches!(
            root_density(&h, &heis_commutation(), 2, &caps),
            Err(Error::NotCoprime { .. })
        ));
    }

    #[test]
    fn densities_shrink_along_primes() {
        let p = IntPolynomial::parse("x^2 - 2", &["x"]).unwrap();
        let z = MalcevGroup::zn(1);
        for n in [3u64, 5, 7, 11, 13] {
            let d = root_density(&z, &p, n, &Caps::default()).unwrap();
            assert!(univariate_bound_holds(&p, n, &d));
        }
    }

    #[test]
    fn commutator_sequence() {
        let h = MalcevGroup::heisenberg();
        let w = GroupWord::simple_commutator_word(&h, 1);
        let seq = dphi_quotient_sequence(&h, &w, &[3, 9], &Caps::default()).unwrap();
        assert_eq!(seq.values[0], rational(11u64, 27u64));
        assert!(seq.nested_non_increasing);
        assert!(seq.values[1] < seq.values[0]);

        let id = GroupWord::new(1, vec![Letter::Var { index: 1, inverse: false }]).unwrap();
        let z = MalcevGroup::zn(2);
        let seq = dphi_quotient_sequence(&z, &id, &[3, 5], &Caps::default()).unwrap();
        assert_eq!(seq.values, vec![rational(1u64, 9u64), rational(1u64, 25u64)]);
    }
}
