use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::law::{ElementLaw, TableLaw};
use super::traits::Group;
use crate::error::{Error, Result};

/// Resource limits shared by the exact algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest group a generator closure may produce.
    pub order: usize,
    /// Largest group whose Cayley table is materialized.
    pub table: usize,
    /// Largest number of word evaluations in an exhaustive count.
    pub evals: u64,
    /// Largest vertex set of a Γ graph.
    pub vertices: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { order: 200_000, table: 20_000, evals: 100_000_000, vertices: 1_000_000 }
    }
}

/// Multiplication kept as a law plus a memo for groups too large to tabulate.
struct LazyMul {
    law: Arc<dyn ElementLaw>,
    elems: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, u32>,
    memo: RwLock<HashMap<(u32, u32), u32>>,
}

impl LazyMul {
    fn mul(&self, a: usize, b: usize) -> usize {
        let key = (a as u32, b as u32);
        if let Some(&c) = self.memo.read().expect("memo lock").get(&key) {
            return c as usize;
        }
        let prod = self
            .law
            .mul(&self.elems[a], &self.elems[b])
            .expect("law was validated during closure");
        let c = self.index[&prod];
        self.memo.write().expect("memo lock").insert(key, c);
        c as usize
    }
}

#[derive(Clone)]
enum Backend {
    Table(Arc<Vec<u32>>),
    Lazy(Arc<LazyMul>),
}

/// A finite group on the element indices `0..order`, identity at index 0.
///
/// Immutable after construction; cloning is cheap.
#[derive(Clone)]
pub struct FiniteGroup {
    order: usize,
    backend: Backend,
    inverse: Arc<Vec<u32>>,
    labels: Arc<Vec<String>>,
    gens: Vec<usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("tabulated", &self.is_tabulated())
            .field("gens", &self.gens)
            .finish()
    }
}

impl FiniteGroup {
    /// Closes `gens` under `law`. Elements are indexed breadth first from the
    /// identity, exploring right multiplication by generators in the given
    /// order, so the indexing is reproducible.
    pub fn close_generators(
        gens: &[Vec<u32>],
        law: Arc<dyn ElementLaw>,
        caps: &Caps,
    ) -> Result<FiniteGroup> {
        let id = law.identity();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<u32>, u32> = HashMap::from([(id, 0)]);
        let mut parent: Vec<(u32, u32)> = vec![(0, 0)];
        let mut right: Vec<u32> = Vec::new();
        let ng = gens.len();
        let mut i = 0;
        while i < elems.len() {
            for (c, g) in gens.iter().enumerate() {
                let prod = law.mul(&elems[i], g)?;
                let j = match index.get(&prod) {
                    Some(&j) => j,
                    None => {
                        if elems.len() >= caps.order {
                            return Err(Error::cap("generator closure", caps.order as u64));
                        }
                        let j = elems.len() as u32;
                        index.insert(prod.clone(), j);
                        elems.push(prod);
                        parent.push((i as u32, c as u32));
                        j
                    }
                };
                right.push(j);
            }
            i += 1;
        }
        let n = elems.len();
        let mut inverse = Vec::with_capacity(n);
        for e in &elems {
            let ie = law.inv(e)?;
            let j = *index
                .get(&ie)
                .ok_or_else(|| Error::InvalidElement("inverse left the closure".into()))?;
            inverse.push(j);
        }
        let labels: Vec<String> = elems.iter().map(|e| law.render(e)).collect();
        let gen_idx: Vec<usize> = gens.iter().map(|g| index[g] as usize).collect();

        let backend = if n <= caps.table {
            let mut table = vec![0u32; n * n];
            for a in 0..n {
                table[a * n] = a as u32;
            }
            for b in 1..n {
                let (pb, c) = parent[b];
                for a in 0..n {
                    let t = table[a * n + pb as usize] as usize;
                    table[a * n + b] = right[t * ng + c as usize];
                }
            }
            Backend::Table(Arc::new(table))
        } else {
            Backend::Lazy(Arc::new(LazyMul {
                law,
                elems,
                index,
                memo: RwLock::new(HashMap::new()),
            }))
        };
        let mut g = FiniteGroup {
            order: n,
            backend,
            inverse: Arc::new(inverse),
            labels: Arc::new(labels),
            gens: Vec::new(),
        };
        g.gens = g.reduce_generators(&gen_idx);
        Ok(g)
    }

    /// Builds a group from an explicit multiplication table on `0..n`.
    pub fn from_table(table: Vec<Vec<u32>>, caps: &Caps) -> Result<FiniteGroup> {
        let law = TableLaw::new(table)?;
        let gens: Vec<Vec<u32>> = (0..law.len() as u32).map(|i| vec![i]).collect();
        FiniteGroup::close_generators(&gens, Arc::new(law), caps)
    }

    /// Closes `gens` and then re-indexes the result so that element `i` is
    /// `elems[i]`. `elems` must list the closure exactly once, identity first.
    pub fn from_elements(
        elems: &[Vec<u32>],
        gens: &[Vec<u32>],
        law: Arc<dyn ElementLaw>,
        caps: &Caps,
    ) -> Result<FiniteGroup> {
        if elems.first() != Some(&law.identity()) {
            return Err(Error::InvalidElement("element list must start with the identity".into()));
        }
        // Recover the BFS element order by replaying the closure index.
        let renders: HashMap<String, usize> =
            elems.iter().enumerate().map(|(i, e)| (law.render(e), i)).collect();
        if renders.len() != elems.len() {
            return Err(Error::InvalidElement("element list has duplicates".into()));
        }
        let bfs = FiniteGroup::close_generators(gens, law, caps)?;
        if bfs.order != elems.len() {
            return Err(Error::InvalidElement(format!(
                "generators close to {} elements, expected {}",
                bfs.order,
                elems.len()
            )));
        }
        let mut perm = vec![0usize; bfs.order];
        for (i, slot) in perm.iter_mut().enumerate() {
            *slot = *renders
                .get(&bfs.labels[i])
                .ok_or_else(|| Error::InvalidElement(format!("{} not listed", bfs.labels[i])))?;
        }
        Ok(bfs.relabel(&perm))
    }

    /// Internal constructor from a raw row-major table with identity 0.
    pub(crate) fn from_raw(n: usize, table: Vec<u32>, labels: Vec<String>, gens: &[usize]) -> Self {
        debug_assert_eq!(table.len(), n * n);
        let mut inverse = vec![0u32; n];
        for a in 0..n {
            let row = &table[a * n..(a + 1) * n];
            inverse[a] = row.iter().position(|&x| x == 0).expect("group table row has identity") as u32;
        }
        let mut g = FiniteGroup {
            order: n,
            backend: Backend::Table(Arc::new(table)),
            inverse: Arc::new(inverse),
            labels: Arc::new(labels),
            gens: Vec::new(),
        };
        g.gens = g.reduce_generators(gens);
        g
    }

    /// Applies the index permutation `old -> perm[old]`.
    fn relabel(&self, perm: &[usize]) -> FiniteGroup {
        let n = self.order;
        let mut inv_perm = vec![0usize; n];
        for (old, &new) in perm.iter().enumerate() {
            inv_perm[new] = old;
        }
        let mut labels = vec![String::new(); n];
        for old in 0..n {
            labels[perm[old]] = self.labels[old].clone();
        }
        let gens: Vec<usize> = self.gens.iter().map(|&g| perm[g]).collect();
        let inverse: Vec<u32> = (0..n).map(|new| perm[self.inv(inv_perm[new])] as u32).collect();
        let backend = match &self.backend {
            Backend::Table(t) => {
                let mut table = vec![0u32; n * n];
                for a in 0..n {
                    let oa = inv_perm[a];
                    for b in 0..n {
                        table[a * n + b] = perm[t[oa * n + inv_perm[b]] as usize] as u32;
                    }
                }
                Backend::Table(Arc::new(table))
            }
            Backend::Lazy(l) => {
                let elems: Vec<Vec<u32>> = (0..n).map(|new| l.elems[inv_perm[new]].clone()).collect();
                let index = elems.iter().enumerate().map(|(i, e)| (e.clone(), i as u32)).collect();
                Backend::Lazy(Arc::new(LazyMul {
                    law: l.law.clone(),
                    elems,
                    index,
                    memo: RwLock::new(HashMap::new()),
                }))
            }
        };
        FiniteGroup { order: n, backend, inverse: Arc::new(inverse), labels: Arc::new(labels), gens }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_tabulated(&self) -> bool {
        matches!(self.backend, Backend::Table(_))
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.backend {
            Backend::Table(t) => t[a * self.order + b] as usize,
            Backend::Lazy(l) => l.mul(a, b),
        }
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    #[inline]
    pub fn comm(&self, a: usize, b: usize) -> usize {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(self.inv(ba), ab)
    }

    /// `a^by = by⁻¹ a by`.
    #[inline]
    pub fn conj(&self, a: usize, by: usize) -> usize {
        self.mul(self.mul(self.inv(by), a), by)
    }

    pub fn power(&self, a: usize, n: i64) -> usize {
        Group::pow(self, &a, n)
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut o = 1;
        while x != 0 {
            x = self.mul(x, a);
            o += 1;
        }
        o
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn find_label(&self, s: &str) -> Option<usize> {
        let want: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        self.labels.iter().position(|l| *l == want)
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    pub fn is_abelian(&self) -> bool {
        self.gens
            .iter()
            .all(|&a| self.gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Full multiplication table (row-major), materializing it if needed.
    pub fn table(&self) -> Vec<u32> {
        match &self.backend {
            Backend::Table(t) => t.as_ref().clone(),
            Backend::Lazy(_) => {
                let n = self.order;
                let mut t = vec![0u32; n * n];
                for a in 0..n {
                    for b in 0..n {
                        t[a * n + b] = self.mul(a, b) as u32;
                    }
                }
                t
            }
        }
    }

    /// Verifies the group axioms: exhaustively up to order 512, on a
    /// deterministic sample of triples above that.
    pub fn check_axioms(&self) -> Result<()> {
        let n = self.order;
        for x in 0..n {
            if self.mul(0, x) != x || self.mul(x, 0) != x {
                return Err(Error::InvalidElement(format!("0 is not an identity at {x}")));
            }
            let xi = self.inv(x);
            if self.mul(x, xi) != 0 || self.mul(xi, x) != 0 || self.inv(xi) != x {
                return Err(Error::InvalidElement(format!("bad inverse at {x}")));
            }
        }
        let assoc = |a: usize, b: usize, c: usize| -> Result<()> {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return Err(Error::InvalidElement(format!("not associative at ({a}, {b}, {c})")));
            }
            Ok(())
        };
        if n <= 512 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        assoc(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..200_000 {
                assoc(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }

    /// Greedy generating subset of `candidates`.
    pub(crate) fn reduce_generators(&self, candidates: &[usize]) -> Vec<usize> {
        let mut kept: Vec<usize> = Vec::new();
        let mut mask = vec![false; self.order];
        mask[0] = true;
        for &g in candidates {
            if mask[g] {
                continue;
            }
            kept.push(g);
            mask = self.closure_mask(&kept);
        }
        kept
    }

    /// Membership mask of the subgroup generated by `gens`.
    pub(crate) fn closure_mask(&self, gens: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.order];
        mask[0] = true;
        let mut queue = vec![0usize];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !mask[y] {
                    mask[y] = true;
                    queue.push(y);
                }
            }
            i += 1;
        }
        mask
    }

    /// Direct product with element `(a, b)` at index `a * |other| + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (n, m) = (self.order, other.order);
        let nm = n * m;
        let mut table = vec![0u32; nm * nm];
        for a1 in 0..n {
            for b1 in 0..m {
                let row = (a1 * m + b1) * nm;
                for a2 in 0..n {
                    let a = self.mul(a1, a2) * m;
                    for b2 in 0..m {
                        table[row + a2 * m + b2] = (a + other.mul(b1, b2)) as u32;
                    }
                }
            }
        }
        let labels = (0..n)
            .flat_map(|a| (0..m).map(move |b| (a, b)))
            .map(|(a, b)| format!("<{};{}>", self.label(a), other.label(b)))
            .collect();
        let gens: Vec<usize> = self
            .gens
            .iter()
            .map(|&a| a * m)
            .chain(other.gens.iter().copied())
            .collect();
        FiniteGroup::from_raw(nm, table, labels, &gens)
    }
}

impl Group for FiniteGroup {
    type Elem = usize;

    fn identity(&self) -> usize {
        0
    }

    fn mul(&self, a: &usize, b: &usize) -> usize {
        FiniteGroup::mul(self, *a, *b)
    }

    fn inv(&self, a: &usize) -> usize {
        FiniteGroup::inv(self, *a)
    }

    fn commutator(&self, a: &usize, b: &usize) -> usize {
        self.comm(*a, *b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::law::{AbelianLaw, PermLaw};

    fn sym3() -> FiniteGroup {
        let law = PermLaw::new(3);
        let gens = vec![
            law.from_cycles(&[vec![1, 2]]).unwrap(),
            law.from_cycles(&[vec![1, 2, 3]]).unwrap(),
        ];
        FiniteGroup::close_generators(&gens, Arc::new(law), &Caps::default()).unwrap()
    }

    #[test]
    fn empty_generators_give_trivial_group() {
        let g = FiniteGroup::close_generators(&[], Arc::new(PermLaw::new(4)), &Caps::default()).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.check_axioms().is_ok());
    }

    #[test]
    fn transposition_and_three_cycle_generate_sym3() {
        let g = sym3();
        assert_eq!(g.order(), 6);
        g.check_axioms().unwrap();
        assert_eq!(g.label(0), "()");
        // BFS order: identity, then (1 2), then (1 2 3).
        assert_eq!(g.label(1), "(1,2)");
        assert_eq!(g.label(2), "(1,2,3)");
    }

    #[test]
    fn cyclic_mod_five() {
        let law = AbelianLaw { moduli: vec![5] };
        let g = FiniteGroup::close_generators(&[vec![1]], Arc::new(law), &Caps::default()).unwrap();
        assert_eq!(g.order(), 5);
        assert!(g.is_abelian());
    }

    #[test]
    fn closure_cap_is_enforced() {
        let law = AbelianLaw { moduli: vec![100] };
        let caps = Caps { order: 10, ..Caps::default() };
        let err = FiniteGroup::close_generators(&[vec![1]], Arc::new(law), &caps).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
    }

    #[test]
    fn partial_rule_is_invalid_element() {
        let law = PermLaw::new(3);
        let err = FiniteGroup::close_generators(&[vec![0, 1]], Arc::new(law), &Caps::default())
            .unwrap_err();
        assert!(matches!(err, Error::InvalidElement(_)));
    }

    #[test]
    fn lazy_backend_agrees_with_table() {
        let law = PermLaw::new(4);
        let gens = vec![
            law.from_cycles(&[vec![1, 2]]).unwrap(),
            law.from_cycles(&[vec![1, 2, 3, 4]]).unwrap(),
        ];
        let law: Arc<dyn ElementLaw> = Arc::new(law);
        let t = FiniteGroup::close_generators(&gens, law.clone(), &Caps::default()).unwrap();
        let caps = Caps { table: 4, ..Caps::default() };
        let l = FiniteGroup::close_generators(&gens, law, &caps).unwrap();
        assert!(t.is_tabulated() && !l.is_tabulated());
        for a in 0..24 {
            for b in 0..24 {
                assert_eq!(t.mul(a, b), l.mul(a, b));
            }
        }
        l.check_axioms().unwrap();
    }

    #[test]
    fn from_table_relabels_identity_first() {
        // Z/3 with identity stored at index 2.
        let table = vec![vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 2]];
        let g = FiniteGroup::from_table(table, &Caps::default()).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.label(0), "t2");
        g.check_axioms().unwrap();
    }

    #[test]
    fn direct_product_order_and_axioms() {
        let s = sym3();
        let p = s.direct_product(&s);
        assert_eq!(p.order(), 36);
        p.check_axioms().unwrap();
        assert!(!p.is_abelian());
    }
}
