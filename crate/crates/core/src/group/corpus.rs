//! Built-in groups used by the tests, the acceptance suite and the CLI.

use std::sync::Arc;

use super::finite::{Caps, FiniteGroup};
use super::law::{AbelianLaw, ElementLaw, PermLaw};
use super::subgroup::Subgroup;
use crate::error::{Error, Result};
use crate::malcev::MalcevGroup;
use crate::pgroups::GkSpec;

fn perm_group(degree: usize, cycles: &[&[Vec<usize>]]) -> FiniteGroup {
    let law = PermLaw::new(degree);
    let gens: Vec<Vec<u32>> = cycles
        .iter()
        .map(|c| law.from_cycles(c).expect("built-in cycles are valid"))
        .collect();
    FiniteGroup::close_generators(&gens, Arc::new(law), &Caps::default())
        .expect("built-in groups are small")
}

fn law_group(law: impl ElementLaw + 'static, gens: Vec<Vec<u32>>) -> FiniteGroup {
    FiniteGroup::close_generators(&gens, Arc::new(law), &Caps::default())
        .expect("built-in groups are small")
}

pub fn cyclic(n: u32) -> FiniteGroup {
    law_group(AbelianLaw { moduli: vec![n] }, vec![vec![1 % n]])
}

pub fn elementary_abelian(p: u32, d: usize) -> FiniteGroup {
    let gens = (0..d)
        .map(|i| (0..d).map(|j| u32::from(i == j)).collect())
        .collect();
    law_group(AbelianLaw { moduli: vec![p; d] }, gens)
}

/// Dihedral group of the given order (at least 6) acting on a polygon.
pub fn dihedral(order: usize) -> FiniteGroup {
    let m = order / 2;
    assert!(m >= 3 && order % 2 == 0, "dihedral order must be even and at least 6");
    let rot: Vec<usize> = (1..=m).collect();
    let refl: Vec<Vec<usize>> = (2..=m).filter(|&i| i < m + 2 - i).map(|i| vec![i, m + 2 - i]).collect();
    perm_group(m, &[&[rot], &refl])
}

pub fn symmetric(n: usize) -> FiniteGroup {
    if n < 2 {
        return perm_group(1, &[]);
    }
    perm_group(n, &[&[vec![1, 2]], &[(1..=n).collect()]])
}

pub fn alternating(n: usize) -> FiniteGroup {
    let gens: Vec<Vec<Vec<usize>>> = (3..=n).map(|i| vec![vec![1, 2, i]]).collect();
    let refs: Vec<&[Vec<usize>]> = gens.iter().map(Vec::as_slice).collect();
    perm_group(n.max(1), &refs)
}

/// Dicyclic group `⟨a, x | a^{2m}, x² = a^m, x⁻¹ax = a⁻¹⟩` of order `4m`;
/// order 8 is the quaternion group.
struct DicyclicLaw {
    m: u32,
}

impl ElementLaw for DicyclicLaw {
    fn identity(&self) -> Vec<u32> {
        vec![0, 0]
    }

    fn mul(&self, a: &[u32], b: &[u32]) -> Result<Vec<u32>> {
        let n = 2 * self.m;
        let (i, j, k, l) = (a[0], a[1], b[0], b[1]);
        if j == 0 {
            return Ok(vec![(i + k) % n, l]);
        }
        // a^i x a^k = a^{i-k} x
        let e = (i + n - k) % n;
        Ok(if l == 0 { vec![e, 1] } else { vec![(e + self.m) % n, 0] })
    }

    fn inv(&self, a: &[u32]) -> Result<Vec<u32>> {
        let n = 2 * self.m;
        Ok(if a[1] == 0 { vec![(n - a[0]) % n, 0] } else { vec![(a[0] + self.m) % n, 1] })
    }

    fn render(&self, a: &[u32]) -> String {
        match (a[0], a[1]) {
            (0, 0) => "1".into(),
            (i, 0) => format!("a^{i}"),
            (0, _) => "x".into(),
            (i, _) => format!("a^{i}x"),
        }
    }
}

pub fn dicyclic(order: u32) -> FiniteGroup {
    assert!(order % 4 == 0 && order >= 8, "dicyclic order must be a multiple of 4, at least 8");
    law_group(DicyclicLaw { m: order / 4 }, vec![vec![1, 0], vec![0, 1]])
}

pub fn quaternion(order: u32) -> FiniteGroup {
    dicyclic(order)
}

/// `Z/p² ⋊ Z/p` with the generator of `Z/p` acting by multiplication by `1 + p`.
struct MetacyclicLaw {
    p: u32,
}

impl MetacyclicLaw {
    fn twist(&self, j: u32) -> u32 {
        let p2 = self.p * self.p;
        (0..j).fold(1, |acc, _| acc * (1 + self.p) % p2)
    }
}

impl ElementLaw for MetacyclicLaw {
    fn identity(&self) -> Vec<u32> {
        vec![0, 0]
    }

    fn mul(&self, a: &[u32], b: &[u32]) -> Result<Vec<u32>> {
        let p2 = self.p * self.p;
        Ok(vec![(a[0] + b[0] * self.twist(a[1])) % p2, (a[1] + b[1]) % self.p])
    }

    fn inv(&self, a: &[u32]) -> Result<Vec<u32>> {
        let p2 = self.p * self.p;
        let j = (self.p - a[1]) % self.p;
        Ok(vec![(p2 - a[0] * self.twist(j) % p2) % p2, j])
    }

    fn render(&self, a: &[u32]) -> String {
        format!("a^{}b^{}", a[0], a[1])
    }
}

/// Extraspecial group of order `p³` for odd `p`: exponent `p` (the
/// Heisenberg group mod `p`) or, with `exponent_p2`, exponent `p²`.
pub fn extraspecial(p: u32, exponent_p2: bool) -> FiniteGroup {
    if exponent_p2 {
        law_group(MetacyclicLaw { p }, vec![vec![1, 0], vec![0, 1]])
    } else {
        let law = super::law::MatFpLaw::new(p, 3);
        let x = vec![1, 1, 0, 0, 1, 0, 0, 0, 1];
        let y = vec![1, 0, 0, 0, 1, 1, 0, 0, 1];
        law_group(law, vec![x, y])
    }
}

/// Resolves a built-in name such as `sym4`, `dih8`, `q8`, `c5`, `es27`,
/// `gk-p3-k1-n2-r1-s1` or `heis-n9`.
pub fn builtin(name: &str) -> Result<FiniteGroup> {
    let unknown = || Error::UnknownGroup(name.to_string());
    let num = |prefix: &str| -> Option<u32> { name.strip_prefix(prefix)?.parse().ok() };
    if name == "trivial" {
        return Ok(cyclic(1));
    }
    if name == "v4" {
        return Ok(elementary_abelian(2, 2));
    }
    if name == "s3xs3" {
        let s = symmetric(3);
        return Ok(s.direct_product(&s));
    }
    if let Some(rest) = name.strip_prefix("gk-") {
        return GkSpec::parse(rest)?.build(&Caps::default());
    }
    if let Some(n) = num("heis-n") {
        return MalcevGroup::heisenberg().finite_quotient(n as u64, &Caps::default());
    }
    if let Some(rest) = name.strip_prefix("es") {
        let (digits, p2) = match rest.strip_suffix('b') {
            Some(d) => (d, true),
            None => (rest, false),
        };
        let order: u32 = digits.parse().map_err(|_| unknown())?;
        let p = (3..order).find(|p| p * p * p == order).ok_or_else(unknown)?;
        if !crate::linalg::is_prime(p as u64) {
            return Err(unknown());
        }
        return Ok(extraspecial(p, p2));
    }
    if let Some(n) = num("sym").filter(|&n| (1..=5).contains(&n)) {
        return Ok(symmetric(n as usize));
    }
    if let Some(n) = num("alt").filter(|&n| (1..=5).contains(&n)) {
        return Ok(alternating(n as usize));
    }
    if let Some(n) = num("dih").filter(|&n| n >= 6 && n % 2 == 0) {
        return Ok(dihedral(n as usize));
    }
    if let Some(n) = num("dic").or_else(|| num("q")).filter(|&n| n >= 8 && n % 4 == 0) {
        return Ok(dicyclic(n));
    }
    if let Some(n) = num("c").filter(|&n| n >= 1) {
        return Ok(cyclic(n));
    }
    Err(unknown())
}

/// Names of the standard corpus, smallest first within each family.
pub fn standard_names() -> Vec<String> {
    let mut names: Vec<String> = (2..=8).map(|n| format!("c{n}")).collect();
    names.extend(
        [
            "v4", "dih6", "dih8", "dih10", "dih12", "dih16", "q8", "q16", "dic12", "sym3", "sym4",
            "sym5", "alt4", "alt5", "es27", "es27b", "es125", "es125b", "s3xs3",
        ]
        .map(String::from),
    );
    for p in [3, 5, 7] {
        names.push(format!("gk-p{p}-k0-n1-r1-s1"));
        names.push(format!("gk-p{p}-k0-n1-r1-s2"));
        names.push(format!("gk-p{p}-k1-n1-r1-s1"));
    }
    names.extend(
        ["gk-p3-k1-n1-r1-s2", "gk-p3-k1-n1-r2-s1", "gk-p3-k1-n2-r1-s1", "gk-p3-k2-n1-r1-s1"]
            .map(String::from),
    );
    names.push("heis-n9".into());
    names
}

/// The standard corpus restricted to groups of order at most `max_order`.
pub fn standard(max_order: usize) -> Vec<(String, FiniteGroup)> {
    standard_names()
        .into_iter()
        .map(|n| {
            let g = builtin(&n).expect("standard corpus names resolve");
            (n, g)
        })
        .filter(|(_, g)| g.order() <= max_order)
        .collect()
}

/// A triple `(G, Γ, H)` with `H ≤ Γ ≤ G` and `Γ/H` of class at most `k`.
#[derive(Debug, Clone)]
pub struct ConverseTriple {
    pub name: String,
    pub group: FiniteGroup,
    pub gamma: Subgroup,
    pub h: Subgroup,
    pub k: usize,
}

/// Corpus metadata for the lower bound `dc^k(G) ≥ 1/(m^{k+1} d)`.
pub fn converse_triples() -> Vec<ConverseTriple> {
    let mut out = Vec::new();
    let mut push = |name: &str, group: FiniteGroup, gamma: Subgroup, h: Subgroup, k: usize| {
        out.push(ConverseTriple { name: name.into(), group, gamma, h, k });
    };

    let s3 = symmetric(3);
    let a3 = s3.subgroup_generated(&[s3.find_label("(1,2,3)").unwrap()]);
    push("sym3 > alt3 > 1", s3.clone(), a3, s3.trivial_subgroup(), 1);

    let s4 = symmetric(4);
    let v4 = s4.subgroup_generated(&[
        s4.find_label("(1,2)(3,4)").unwrap(),
        s4.find_label("(1,3)(2,4)").unwrap(),
    ]);
    let a4 = s4.subgroup_generated(&[
        s4.find_label("(1,2,3)").unwrap(),
        s4.find_label("(1,2,4)").unwrap(),
    ]);
    push("sym4 > v4 > 1", s4.clone(), v4.clone(), s4.trivial_subgroup(), 1);
    push("sym4 > alt4 > v4", s4.clone(), a4.clone(), v4.clone(), 1);
    push("sym4 > alt4 > v4 (k = 2)", s4.clone(), a4, v4, 2);

    let a5 = alternating(5);
    let c5 = a5.subgroup_generated(&[a5.find_label("(1,2,3,4,5)").unwrap()]);
    push("alt5 > c5 > 1", a5.clone(), c5, a5.trivial_subgroup(), 1);

    let q8 = quaternion(8);
    push("q8 > q8 > 1", q8.clone(), q8.whole(), q8.trivial_subgroup(), 2);

    let s33 = builtin("s3xs3").unwrap();
    let rot = s33.subgroup_generated(&[s33.find_label("<(1,2,3);()>").unwrap(), s33.find_label("<();(1,2,3)>").unwrap()]);
    push("s3xs3 > a3xa3 > 1", s33.clone(), rot, s33.trivial_subgroup(), 1);

    let d8 = dihedral(8);
    push("dih8 > dih8 > 1", d8.clone(), d8.whole(), d8.trivial_subgroup(), 2);
    push("dih8 > dih8 > z", d8.clone(), d8.whole(), d8.center(), 1);

    for name in ["gk-p3-k1-n1-r1-s1", "gk-p5-k1-n1-r1-s1", "gk-p3-k1-n2-r1-s1", "gk-p3-k2-n1-r1-s1"] {
        let g = builtin(name).unwrap();
        let k = GkSpec::parse(name.strip_prefix("gk-").unwrap()).unwrap().k;
        let z = g.center();
        push(&format!("{name} > G > Z"), g.clone(), g.whole(), z, k);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        let cases = [
            ("c5", 5),
            ("v4", 4),
            ("dih8", 8),
            ("dih6", 6),
            ("q8", 8),
            ("q16", 16),
            ("dic12", 12),
            ("sym4", 24),
            ("alt5", 60),
            ("es27", 27),
            ("es27b", 27),
            ("es125b", 125),
            ("s3xs3", 36),
            ("trivial", 1),
        ];
        for (name, order) in cases {
            let g = builtin(name).unwrap();
            assert_eq!(g.order(), order, "{name}");
            g.check_axioms().unwrap();
        }
    }

    #[test]
    fn extraspecial_exponents() {
        let a = extraspecial(3, false);
        let b = extraspecial(3, true);
        let exp = |g: &FiniteGroup| (0..g.order()).map(|x| g.element_order(x)).max().unwrap();
        assert_eq!(exp(&a), 3);
        assert_eq!(exp(&b), 9);
        assert_eq!(a.center().order(), 3);
        assert_eq!(b.center().order(), 3);
    }

    #[test]
    fn quaternion_has_one_involution() {
        let q = quaternion(8);
        let involutions = (1..8).filter(|&x| q.element_order(x) == 2).count();
        assert_eq!(involutions, 1);
    }

    #[test]
    fn unknown_names_are_errors() {
        assert!(matches!(builtin("sym9"), Err(Error::UnknownGroup(_))));
        assert!(matches!(builtin("es8"), Err(Error::UnknownGroup(_))));
        assert!(matches!(builtin("foo"), Err(Error::UnknownGroup(_))));
    }

    #[test]
    fn converse_triples_are_well_formed() {
        for t in converse_triples() {
            assert!(t.h.is_subset_of(&t.gamma), "{}", t.name);
            let (gam, embed) = t.group.induced(&t.gamma);
            let h = t.group.restrict(&embed, &t.h, &gam);
            assert!(gam.is_normal(&h), "{}", t.name);
            let q = gam.quotient(&h).unwrap().quotient;
            assert!(q.is_nilpotent_of_class_at_most(&q.whole(), t.k), "{}", t.name);
        }
    }
}
