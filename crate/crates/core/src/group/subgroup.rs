use super::finite::FiniteGroup;
use crate::error::{Error, Result};
use crate::linalg;

/// A subgroup of a [`FiniteGroup`], stored as a sorted member list plus a
/// membership mask over the parent's indices.
#[derive(Debug, Clone)]
pub struct Subgroup {
    members: Vec<usize>,
    mask: Vec<bool>,
    gens: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    fn from_mask(mask: Vec<bool>, gens: Vec<usize>) -> Self {
        let members = mask.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i).collect();
        Subgroup { members, mask, gens }
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.mask[x]
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }
}

/// A quotient `G/N` together with the projection and a coset section.
#[derive(Debug, Clone)]
pub struct QuotientData {
    pub quotient: FiniteGroup,
    /// `projection[x]` is the index of `xN` in the quotient.
    pub projection: Vec<usize>,
    /// `section[c]` is the least element of coset `c`.
    pub section: Vec<usize>,
}

/// Lower and upper central series; `class` is absent when the lower series
/// stabilizes above the trivial subgroup.
#[derive(Debug, Clone)]
pub struct CentralSeries {
    pub lower: Vec<Subgroup>,
    pub upper: Vec<Subgroup>,
    pub class: Option<usize>,
}

impl FiniteGroup {
    pub fn whole(&self) -> Subgroup {
        Subgroup::from_mask(vec![true; self.order()], self.generators().to_vec())
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        let mut mask = vec![false; self.order()];
        mask[0] = true;
        Subgroup::from_mask(mask, Vec::new())
    }

    /// The subgroup generated by `gens`, with a greedily reduced generating set.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Subgroup {
        let mut kept = Vec::new();
        let mut mask = vec![false; self.order()];
        mask[0] = true;
        for &g in gens {
            if !mask[g] {
                kept.push(g);
                mask = self.closure_mask(&kept);
            }
        }
        Subgroup::from_mask(mask, kept)
    }

    /// Accepts an explicit member set, failing unless it is a subgroup.
    pub fn subgroup_from_members(&self, members: &[usize]) -> Result<Subgroup> {
        let h = self.subgroup_generated(members);
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if h.members != sorted {
            return Err(Error::InvalidElement("member set is not closed under multiplication".into()));
        }
        Ok(h)
    }

    /// Smallest subgroup containing `seeds` and normalized by `within`.
    pub fn normal_closure_within(&self, within: &Subgroup, seeds: &[usize]) -> Subgroup {
        let mut n = self.subgroup_generated(seeds);
        loop {
            let mut extra = None;
            'search: for &x in n.generators() {
                for &k in within.generators() {
                    let c = self.conj(x, k);
                    if !n.contains(c) {
                        extra = Some(c);
                        break 'search;
                    }
                }
            }
            match extra {
                Some(c) => {
                    let mut g = n.gens.clone();
                    g.push(c);
                    n = self.subgroup_generated(&g);
                }
                None => return n,
            }
        }
    }

    pub fn normal_closure(&self, seeds: &[usize]) -> Subgroup {
        self.normal_closure_within(&self.whole(), seeds)
    }

    /// `[A, B]`, the subgroup generated by commutators `[a, b]`.
    pub fn commutator_subgroup(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let seeds: Vec<usize> = a
            .generators()
            .iter()
            .flat_map(|&x| b.generators().iter().map(move |&y| (x, y)))
            .map(|(x, y)| self.comm(x, y))
            .collect();
        let mut both = a.gens.clone();
        both.extend_from_slice(&b.gens);
        let ambient = self.subgroup_generated(&both);
        self.normal_closure_within(&ambient, &seeds)
    }

    pub fn is_normal(&self, n: &Subgroup) -> bool {
        self.is_normal_in(n, &self.whole())
    }

    /// True iff `n ⊆ k` and `n` is normalized by `k`.
    pub fn is_normal_in(&self, n: &Subgroup, k: &Subgroup) -> bool {
        n.is_subset_of(k)
            && n.generators()
                .iter()
                .all(|&x| k.generators().iter().all(|&g| n.contains(self.conj(x, g))))
    }

    /// Lower central series of `k` down to (and including) the first repeated term.
    pub fn lower_central_series_of(&self, k: &Subgroup) -> Vec<Subgroup> {
        let mut series = vec![k.clone()];
        loop {
            let last = series.last().expect("nonempty");
            let next = self.commutator_subgroup(last, k);
            if next == *last {
                return series;
            }
            let done = next.is_trivial();
            series.push(next);
            if done {
                return series;
            }
        }
    }

    /// Nilpotency class of `k`, or `None` if `k` is not nilpotent.
    pub fn class_of(&self, k: &Subgroup) -> Option<usize> {
        let lower = self.lower_central_series_of(k);
        lower.last().expect("nonempty").is_trivial().then(|| lower.len() - 1)
    }

    /// Whether `γ_{c+1}(k)` is trivial, stopping as soon as that is decided.
    pub fn is_nilpotent_of_class_at_most(&self, k: &Subgroup, c: usize) -> bool {
        let mut term = k.clone();
        for _ in 0..c {
            if term.is_trivial() {
                return true;
            }
            term = self.commutator_subgroup(&term, k);
        }
        term.is_trivial()
    }

    pub fn upper_central_series(&self) -> Vec<Subgroup> {
        let gens = self.generators();
        let mut series = vec![self.trivial_subgroup()];
        loop {
            let z = series.last().expect("nonempty");
            let mask: Vec<bool> = (0..self.order())
                .map(|x| gens.iter().all(|&g| z.contains(self.comm(x, g))))
                .collect();
            let members: Vec<usize> = (0..self.order()).filter(|&x| mask[x]).collect();
            if members.len() == z.order() {
                return series;
            }
            let next = self.subgroup_generated(&members);
            series.push(next);
        }
    }

    pub fn central_series(&self) -> CentralSeries {
        let lower = self.lower_central_series_of(&self.whole());
        let upper = self.upper_central_series();
        let class = lower.last().expect("nonempty").is_trivial().then(|| lower.len() - 1);
        CentralSeries { lower, upper, class }
    }

    pub fn centralizer(&self, g: usize) -> Subgroup {
        let members: Vec<usize> =
            (0..self.order()).filter(|&x| self.mul(x, g) == self.mul(g, x)).collect();
        self.subgroup_generated(&members)
    }

    pub fn center(&self) -> Subgroup {
        let gens = self.generators();
        let members: Vec<usize> = (0..self.order())
            .filter(|&x| gens.iter().all(|&g| self.mul(x, g) == self.mul(g, x)))
            .collect();
        self.subgroup_generated(&members)
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if seen[x] {
                continue;
            }
            seen[x] = true;
            let mut class = vec![x];
            let mut i = 0;
            while i < class.len() {
                for &g in self.generators() {
                    let y = self.conj(class[i], g);
                    if !seen[y] {
                        seen[y] = true;
                        class.push(y);
                    }
                }
                i += 1;
            }
            class.sort_unstable();
            classes.push(class);
        }
        classes
    }

    /// All normal subgroups, as joins of normal closures of conjugacy classes.
    /// Sorted by order, then by members.
    pub fn normal_subgroups(&self) -> Vec<Subgroup> {
        let atoms: Vec<Subgroup> = self
            .conjugacy_classes()
            .iter()
            .map(|c| self.normal_closure(&[c[0]]))
            .collect();
        let mut found: Vec<Subgroup> = vec![self.trivial_subgroup()];
        let mut queue = 0;
        while queue < found.len() {
            let base = found[queue].clone();
            queue += 1;
            for a in &atoms {
                if a.is_subset_of(&base) {
                    continue;
                }
                let mut seeds = base.gens.clone();
                seeds.extend_from_slice(&a.gens);
                let join = self.subgroup_generated(&seeds);
                if !found.contains(&join) {
                    found.push(join);
                }
            }
        }
        found.sort_by(|a, b| (a.order(), &a.members).cmp(&(b.order(), &b.members)));
        found
    }

    /// `G/N` with left cosets `xN`, numbered by least representative.
    pub fn quotient(&self, n: &Subgroup) -> Result<QuotientData> {
        if !self.is_normal(n) {
            return Err(Error::NotNormal(format!("subgroup of order {}", n.order())));
        }
        let size = self.order();
        let mut projection = vec![usize::MAX; size];
        let mut section = Vec::new();
        for x in 0..size {
            if projection[x] != usize::MAX {
                continue;
            }
            let c = section.len();
            section.push(x);
            for &m in n.members() {
                projection[self.mul(x, m)] = c;
            }
        }
        let q = section.len();
        let mut table = vec![0u32; q * q];
        for a in 0..q {
            for b in 0..q {
                table[a * q + b] = projection[self.mul(section[a], section[b])] as u32;
            }
        }
        let labels = section.iter().map(|&x| format!("{}N", self.label(x))).collect();
        let gens: Vec<usize> = self.generators().iter().map(|&g| projection[g]).collect();
        Ok(QuotientData {
            quotient: FiniteGroup::from_raw(q, table, labels, &gens),
            projection,
            section,
        })
    }

    /// `k` as a group in its own right; `embed[i]` is the parent index of element `i`.
    pub fn induced(&self, k: &Subgroup) -> (FiniteGroup, Vec<usize>) {
        let embed = k.members().to_vec();
        let mut back = vec![usize::MAX; self.order()];
        for (i, &x) in embed.iter().enumerate() {
            back[x] = i;
        }
        let m = embed.len();
        let mut table = vec![0u32; m * m];
        for a in 0..m {
            for b in 0..m {
                table[a * m + b] = back[self.mul(embed[a], embed[b])] as u32;
            }
        }
        let labels = embed.iter().map(|&x| self.label(x).to_string()).collect();
        let gens: Vec<usize> = k.generators().iter().map(|&g| back[g]).collect();
        (FiniteGroup::from_raw(m, table, labels, &gens), embed)
    }

    /// Pulls a parent subgroup contained in `k` into the group returned by [`induced`](Self::induced).
    pub fn restrict(&self, embed: &[usize], h: &Subgroup, into: &FiniteGroup) -> Subgroup {
        let idx: Vec<usize> = embed
            .iter()
            .enumerate()
            .filter(|(_, &x)| h.contains(x))
            .map(|(i, _)| i)
            .collect();
        into.subgroup_generated(&idx)
    }

    /// If the order is a power of `p`, its exponent.
    pub fn p_power_exponent(&self, p: u64) -> Option<u32> {
        let mut n = self.order() as u64;
        let mut e = 0;
        while n > 1 {
            if n % p != 0 {
                return None;
            }
            n /= p;
            e += 1;
        }
        Some(e)
    }

    /// Frattini subgroup `[G,G]G^p` of a `p`-group.
    pub fn frattini_pgroup(&self, p: u64) -> Result<Subgroup> {
        if !linalg::is_prime(p) || self.p_power_exponent(p).is_none() {
            return Err(Error::NotPGroup { order: self.order(), p });
        }
        let mut seeds: Vec<usize> = (0..self.order()).map(|x| self.power(x, p as i64)).collect();
        for &a in self.generators() {
            for &b in self.generators() {
                seeds.push(self.comm(a, b));
            }
        }
        Ok(self.normal_closure(&seeds))
    }

    /// All maximal subgroups of a `p`-group, as preimages of the hyperplanes
    /// of the Frattini quotient.
    pub fn maximal_subgroups_pgroup(&self, p: u64) -> Result<Vec<Subgroup>> {
        let phi = self.frattini_pgroup(p)?;
        let qd = self.quotient(&phi)?;
        let q = &qd.quotient;
        // Basis of the elementary abelian quotient and coordinates of each element.
        let mut basis = Vec::new();
        let mut span = q.trivial_subgroup();
        for x in 0..q.order() {
            if !span.contains(x) {
                basis.push(x);
                span = q.subgroup_generated(&basis);
            }
        }
        let d = basis.len();
        let mut coords = vec![Vec::new(); q.order()];
        let total = (p as usize).pow(d as u32);
        for code in 0..total {
            let mut c = code;
            let mut v = Vec::with_capacity(d);
            let mut elem = 0;
            for &b in &basis {
                let a = (c % p as usize) as u64;
                c /= p as usize;
                v.push(a);
                elem = q.mul(elem, q.power(b, a as i64));
            }
            coords[elem] = v;
        }
        let mut out = Vec::new();
        for f in linalg::projective_points(d, p) {
            let members: Vec<usize> = (0..self.order())
                .filter(|&x| {
                    let v = &coords[qd.projection[x]];
                    v.iter().zip(&f).map(|(a, b)| a * b).sum::<u64>() % p == 0
                })
                .collect();
            out.push(self.subgroup_generated(&members));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::corpus;

    #[test]
    fn dihedral_eight_series() {
        let g = corpus::dihedral(8);
        let cs = g.central_series();
        let sizes: Vec<usize> = cs.lower.iter().map(Subgroup::order).collect();
        assert_eq!(sizes, vec![8, 2, 1]);
        assert_eq!(cs.class, Some(2));
        let up: Vec<usize> = cs.upper.iter().map(Subgroup::order).collect();
        assert_eq!(up, vec![1, 2, 8]);
    }

    #[test]
    fn sym3_series_stalls() {
        let g = corpus::symmetric(3);
        let cs = g.central_series();
        assert_eq!(cs.lower.last().unwrap().order(), 3);
        assert_eq!(cs.class, None);
        assert_eq!(g.center().order(), 1);
    }

    #[test]
    fn abelian_class_one_and_trivial_class_zero() {
        let g = corpus::cyclic(6);
        let cs = g.central_series();
        assert_eq!(cs.lower.len(), 2);
        assert_eq!(cs.class, Some(1));
        assert_eq!(corpus::cyclic(1).central_series().class, Some(0));
    }

    #[test]
    fn quaternion_centre() {
        assert_eq!(corpus::quaternion(8).center().order(), 2);
    }

    #[test]
    fn quotients() {
        let g = corpus::symmetric(3);
        let a3 = g.normal_closure(&[g.find_label("(1,2,3)").unwrap()]);
        assert_eq!(a3.order(), 3);
        let q = g.quotient(&a3).unwrap();
        assert_eq!(q.quotient.order(), 2);
        assert_eq!(g.quotient(&g.whole()).unwrap().quotient.order(), 1);
        let same = g.quotient(&g.trivial_subgroup()).unwrap();
        assert_eq!(same.quotient.order(), 6);
        let t = g.subgroup_generated(&[g.find_label("(1,2)").unwrap()]);
        assert!(matches!(g.quotient(&t), Err(Error::NotNormal(_))));
    }

    #[test]
    fn normal_subgroups_of_sym4() {
        let g = corpus::symmetric(4);
        let orders: Vec<usize> = g.normal_subgroups().iter().map(Subgroup::order).collect();
        assert_eq!(orders, vec![1, 4, 12, 24]);
    }

    #[test]
    fn maximal_subgroup_counts() {
        assert_eq!(corpus::cyclic(5).maximal_subgroups_pgroup(5).unwrap().len(), 1);
        let e9 = corpus::elementary_abelian(3, 2);
        assert_eq!(e9.maximal_subgroups_pgroup(3).unwrap().len(), 4);
        let x27 = corpus::extraspecial(3, false);
        let ms = x27.maximal_subgroups_pgroup(3).unwrap();
        assert_eq!(ms.len(), 4);
        assert!(ms.iter().all(|m| m.order() == 9));
        assert!(matches!(
            corpus::symmetric(3).maximal_subgroups_pgroup(3),
            Err(Error::NotPGroup { .. })
        ));
    }

    #[test]
    fn centralizer_of_identity_is_everything() {
        let g = corpus::symmetric(4);
        assert_eq!(g.centralizer(0).order(), 24);
    }
}
