//! Exact degrees of k-step nilpotence and related counts.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupWord, Subgroup};

/// `counts[g] = #{(x_1, ..., x_j) : [x_1, ..., x_j] = g}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutatorDistribution {
    pub level: usize,
    pub counts: Vec<BigUint>,
}

impl CommutatorDistribution {
    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }
}

pub fn rational(num: impl Into<BigUint>, den: impl Into<BigUint>) -> BigRational {
    BigRational::new(num.into().into(), den.into().into())
}

/// One DP step: `next[g] = Σ_{[h, y] = g, y ∈ ys} cur[h]`, in `u128`.
/// Returns `None` on overflow.
fn step_u128(g: &FiniteGroup, cur: &[u128], ys: &[usize]) -> Option<Vec<u128>> {
    let n = g.order();
    let partials: Vec<Option<Vec<u128>>> = (0..n)
        .into_par_iter()
        .chunks(64)
        .map(|hs| {
            let mut acc = vec![0u128; n];
            for h in hs {
                let c = cur[h];
                if c == 0 {
                    continue;
                }
                for &y in ys {
                    let t = g.comm(h, y);
                    acc[t] = acc[t].checked_add(c)?;
                }
            }
            Some(acc)
        })
        .collect();
    let mut out = vec![0u128; n];
    for p in partials {
        for (o, v) in out.iter_mut().zip(p?) {
            *o = o.checked_add(v)?;
        }
    }
    Some(out)
}

fn step_big(g: &FiniteGroup, cur: &[BigUint], ys: &[usize]) -> Vec<BigUint> {
    let n = g.order();
    let partials: Vec<Vec<BigUint>> = (0..n)
        .into_par_iter()
        .chunks(64)
        .map(|hs| {
            let mut acc = vec![BigUint::zero(); n];
            for h in hs {
                if cur[h].is_zero() {
                    continue;
                }
                for &y in ys {
                    acc[g.comm(h, y)] += &cur[h];
                }
            }
            acc
        })
        .collect();
    let mut out = vec![BigUint::zero(); n];
    for p in partials {
        for (o, v) in out.iter_mut().zip(p) {
            *o += v;
        }
    }
    out
}

/// Runs the commutator DP with `sets[0]` as the first coordinate and
/// `sets[i]` restricting the `i`-th bracketed coordinate.
fn restricted_counts(g: &FiniteGroup, sets: &[Vec<usize>]) -> Vec<BigUint> {
    let n = g.order();
    let mut small = vec![0u128; n];
    for &x in &sets[0] {
        small[x] += 1;
    }
    let mut level = 1;
    while level < sets.len() {
        match step_u128(g, &small, &sets[level]) {
            Some(next) => small = next,
            None => break,
        }
        level += 1;
    }
    let mut big: Vec<BigUint> = small.into_iter().map(BigUint::from).collect();
    while level < sets.len() {
        big = step_big(g, &big, &sets[level]);
        level += 1;
    }
    big
}

pub fn commutator_distribution(g: &FiniteGroup, j: usize) -> Result<CommutatorDistribution> {
    if j == 0 {
        return Err(Error::PreconditionFailed("distribution level must be at least 1".into()));
    }
    let all: Vec<usize> = (0..g.order()).collect();
    let sets = vec![all; j];
    Ok(CommutatorDistribution { level: j, counts: restricted_counts(g, &sets) })
}

/// `dc^k(G)`; for `k = 0` this is `1/|G|`.
pub fn dc_k_exact(g: &FiniteGroup, k: usize) -> BigRational {
    let n = BigUint::from(g.order());
    if k == 0 {
        return rational(1u32, n);
    }
    let dist = commutator_distribution(g, k + 1).expect("level at least 2");
    rational(dist.counts[0].clone(), n.pow(k as u32 + 1))
}

/// `P^k(G, x)`: probability that a uniform `(k+1)`-tuple has commutator `x`.
pub fn p_k_exact(g: &FiniteGroup, x: usize, k: usize) -> Result<BigRational> {
    if k == 0 {
        return Err(Error::PreconditionFailed("P^k needs k >= 1".into()));
    }
    let dist = commutator_distribution(g, k + 1)?;
    let n = BigUint::from(g.order());
    Ok(rational(dist.counts[x].clone(), n.pow(k as u32 + 1)))
}

/// `f_k(A_1, ..., A_{k+1})`: number of solutions of `[x_1, ..., x_{k+1}] = 1`
/// with `x_i ∈ A_i`.
pub fn f_k_count(g: &FiniteGroup, sets: &[Vec<usize>]) -> Result<BigUint> {
    if sets.is_empty() {
        return Err(Error::PreconditionFailed("f_k needs at least one set".into()));
    }
    Ok(restricted_counts(g, sets).swap_remove(0))
}

/// Solution density of `w = 1` by exhaustive enumeration.
pub fn dphi_exact(g: &FiniteGroup, w: &GroupWord<usize>, cap_evals: u64) -> Result<BigRational> {
    let n = g.order() as u64;
    let k = w.arity() as u32;
    let total = n
        .checked_pow(k)
        .filter(|&t| t <= cap_evals)
        .ok_or_else(|| Error::cap("word evaluations", cap_evals))?;
    let rest = total / n;
    let hits: u64 = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut assign = vec![0usize; k as usize];
            let mut count = 0u64;
            for code in 0..rest {
                assign[0] = first as usize;
                let mut c = code;
                for slot in assign.iter_mut().skip(1) {
                    *slot = (c % n) as usize;
                    c /= n;
                }
                if w.evaluate(g, &assign).expect("arity matches") == 0 {
                    count += 1;
                }
            }
            count
        })
        .sum();
    Ok(rational(hits, total))
}

/// `(2^{k+2} - 3) / 2^{k+2}`.
pub fn gap_bound(k: usize) -> BigRational {
    let d = BigUint::one() << (k + 2);
    rational(&d - 3u32, d)
}

/// `1 / (m^{k+1} d)`.
pub fn converse_bound(m: usize, d: usize, k: usize) -> BigRational {
    rational(1u32, BigUint::from(m).pow(k as u32 + 1) * d)
}

pub fn is_k_step_nilpotent(g: &FiniteGroup, k: usize) -> bool {
    g.is_nilpotent_of_class_at_most(&g.whole(), k)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DescentReport {
    /// `dc^k(G/G_n)`.
    pub lhs: BigRational,
    /// `Π dc^k(G_{i-1}/G_i)`.
    pub product: BigRational,
    /// `γ_k^n`.
    pub bound: BigRational,
    pub factors: Vec<BigRational>,
    pub passed: bool,
}

/// Checks `dc^k(G/G_n) ≤ Π dc^k(G_{i-1}/G_i) ≤ γ_k^n` along a normal chain.
/// `chain` lists `G_1, ..., G_n` (the group itself is implicit).
pub fn descent_bound_check(g: &FiniteGroup, chain: &[Subgroup], k: usize) -> Result<DescentReport> {
    let mut prev = g.whole();
    let mut factors = Vec::new();
    for (i, sub) in chain.iter().enumerate() {
        if !g.is_normal(sub) {
            return Err(Error::ChainInvalid(format!("term {} is not normal in G", i + 1)));
        }
        if !sub.is_subset_of(&prev) {
            return Err(Error::ChainInvalid(format!("term {} is not contained in term {i}", i + 1)));
        }
        let (upper, embed) = g.induced(&prev);
        let lower = g.restrict(&embed, sub, &upper);
        let q = upper.quotient(&lower)?.quotient;
        if is_k_step_nilpotent(&q, k) {
            return Err(Error::ChainInvalid(format!(
                "quotient of term {i} by term {} is {k}-step nilpotent",
                i + 1
            )));
        }
        factors.push(dc_k_exact(&q, k));
        prev = sub.clone();
    }
    let lhs = dc_k_exact(&g.quotient(&prev)?.quotient, k);
    let product = factors.iter().fold(BigRational::one(), |acc, f| acc * f);
    let gamma = gap_bound(k);
    let bound = (0..chain.len()).fold(BigRational::one(), |acc, _| acc * &gamma);
    let passed = lhs <= product && product <= bound;
    Ok(DescentReport { lhs, product, bound, factors, passed })
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::corpus;

    fn q(n: u64, d: u64) -> BigRational {
        rational(n, d)
    }

    /// Independent oracle: nested loops over all tuples.
    fn brute_counts(g: &FiniteGroup, j: usize) -> Vec<u64> {
        let n = g.order();
        let mut counts = vec![0u64; n];
        let mut t = vec![0usize; j];
        for code in 0..n.pow(j as u32) {
            let mut c = code;
            for slot in t.iter_mut() {
                *slot = c % n;
                c /= n;
            }
            let mut acc = t[0];
            for &x in &t[1..] {
                let ab = g.mul(acc, x);
                let ba = g.mul(x, acc);
                acc = g.mul(g.inv(ba), ab);
            }
            counts[acc] += 1;
        }
        counts
    }

    #[test]
    fn dp_matches_enumeration() {
        for name in ["sym3", "dih8", "q8", "alt4", "es27"] {
            let g = corpus::builtin(name).unwrap();
            for j in 1..=3 {
                let dp = commutator_distribution(&g, j).unwrap();
                let brute: Vec<BigUint> = brute_counts(&g, j).into_iter().map(BigUint::from).collect();
                assert_eq!(dp.counts, brute, "{name} level {j}");
                assert_eq!(dp.total(), BigUint::from(g.order()).pow(j as u32));
            }
        }
    }

    #[test]
    fn known_values() {
        assert_eq!(dc_k_exact(&corpus::symmetric(3), 1), q(1, 2));
        assert_eq!(dc_k_exact(&corpus::dihedral(8), 1), q(5, 8));
        assert_eq!(dc_k_exact(&corpus::symmetric(4), 1), q(5, 24));
        assert_eq!(dc_k_exact(&corpus::symmetric(3), 0), q(1, 6));
        assert_eq!(dc_k_exact(&corpus::cyclic(7), 2), q(1, 1));
    }

    #[test]
    fn abelian_level_two() {
        let g = corpus::cyclic(6);
        let d = commutator_distribution(&g, 2).unwrap();
        assert_eq!(d.counts[0], BigUint::from(36u32));
        assert!(d.counts[1..].iter().all(Zero::is_zero));
    }

    #[test]
    fn p_k_of_three_cycle_in_sym3() {
        let g = corpus::symmetric(3);
        let c = g.find_label("(1,2,3)").unwrap();
        let brute = brute_counts(&g, 2)[c];
        assert_eq!(p_k_exact(&g, c, 1).unwrap(), q(brute, 36));
        assert_eq!(p_k_exact(&g, 0, 1).unwrap(), dc_k_exact(&g, 1));
    }

    #[test]
    fn class_number_cross_check() {
        for name in ["sym4", "dih12", "q16", "alt5"] {
            let g = corpus::builtin(name).unwrap();
            let classes = g.conjugacy_classes().len() as u64;
            assert_eq!(dc_k_exact(&g, 1), q(classes, g.order() as u64), "{name}");
        }
    }

    #[test]
    fn f_k_special_cases() {
        let g = corpus::symmetric(4);
        let all: Vec<usize> = (0..24).collect();
        let unrestricted = f_k_count(&g, &[all.clone(), all.clone(), all]).unwrap();
        assert_eq!(unrestricted, commutator_distribution(&g, 3).unwrap().counts[0]);
        let id = vec![0usize];
        assert_eq!(f_k_count(&g, &[id.clone(), id.clone()]).unwrap(), BigUint::one());
    }

    #[test]
    fn coset_inequality_in_sym4() {
        let g = corpus::symmetric(4);
        let v4 = g.normal_subgroups().into_iter().find(|s| s.order() == 4).unwrap();
        let n: Vec<usize> = v4.members().to_vec();
        for x in 0..24 {
            let coset: Vec<usize> = n.iter().map(|&m| g.mul(x, m)).collect();
            for gg in 0..24 {
                for k in 1..=2 {
                    let mut a = vec![coset.clone(), vec![gg]];
                    let mut b = vec![n.clone(), vec![gg]];
                    for _ in 1..k {
                        a.push(n.clone());
                        b.push(n.clone());
                    }
                    assert!(f_k_count(&g, &a).unwrap() <= f_k_count(&g, &b).unwrap());
                }
            }
        }
    }

    #[test]
    fn dphi_cases() {
        let g = corpus::symmetric(3);
        let x1: GroupWord<usize> = GroupWord::var(1, 1).unwrap();
        assert_eq!(dphi_exact(&g, &x1, 1_000_000).unwrap(), q(1, 6));
        let w = GroupWord::simple_commutator_word(&g, 1);
        assert_eq!(dphi_exact(&g, &w, 1_000_000).unwrap(), dc_k_exact(&g, 1));
        let c2 = corpus::cyclic(2);
        let sq = x1.concat(&x1);
        assert_eq!(dphi_exact(&c2, &sq, 10).unwrap(), q(1, 1));
        assert!(matches!(dphi_exact(&g, &w, 10), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn descent_chains() {
        let g = corpus::symmetric(4);
        let normals = g.normal_subgroups();
        let v4 = normals.iter().find(|s| s.order() == 4).unwrap().clone();
        let a4 = normals.iter().find(|s| s.order() == 12).unwrap().clone();
        let empty = descent_bound_check(&g, &[], 1).unwrap();
        assert!(empty.passed);
        assert_eq!(empty.product, q(1, 1));
        let r = descent_bound_check(&g, &[v4.clone()], 1).unwrap();
        assert_eq!(r.lhs, q(1, 2));
        assert!(r.passed);
        let r = descent_bound_check(&g, &[g.trivial_subgroup()], 1).unwrap();
        assert_eq!(r.lhs, q(5, 24));
        assert!(r.passed);
        // Sym(4)/Alt(4) is abelian, so this chain is rejected.
        assert!(matches!(
            descent_bound_check(&g, &[a4, v4], 1),
            Err(Error::ChainInvalid(_))
        ));
        let s = corpus::builtin("s3xs3").unwrap();
        let left = s.normal_subgroups().into_iter().find(|h| {
            h.order() == 6 && !s.is_nilpotent_of_class_at_most(h, 1)
        });
        let left = left.unwrap();
        let r = descent_bound_check(&s, &[left, s.trivial_subgroup()], 1).unwrap();
        assert_eq!(r.factors, vec![q(1, 2), q(1, 2)]);
        assert_eq!(r.lhs, q(1, 4));
        assert!(r.passed);
        let c = corpus::cyclic(4);
        assert!(matches!(
            descent_bound_check(&c, &[c.trivial_subgroup()], 1),
            Err(Error::ChainInvalid(_))
        ));
    }

    #[test]
    fn gap_bound_values() {
        assert_eq!(gap_bound(1), q(5, 8));
        assert_eq!(gap_bound(2), q(13, 16));
    }
}
