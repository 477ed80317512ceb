//! The block unitriangular groups `G_k(n, r, s)` over `F_p`.
//!
//! Block rows and columns are numbered `0..=k+1` with sizes `r, n, ..., n, s`.
//! Every block above the diagonal is free: block `(0, j)` is `A_{j-1}` for
//! `j ≤ k`, block `(0, k+1)` is `C`, block `(i, j)` is `D_{i, j-1}` and block
//! `(i, k+1)` is `B_i`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::law::{ElementLaw, MatFpLaw};
use crate::group::{Caps, FiniteGroup, Subgroup};
use crate::linalg;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GkSpec {
    pub p: u64,
    pub k: usize,
    pub n: usize,
    pub r: usize,
    pub s: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockInfo {
    pub row: usize,
    pub col: usize,
    pub rows: usize,
    pub cols: usize,
    /// Position of the block's first entry in the coordinate vector.
    pub offset: usize,
}

impl BlockInfo {
    /// `j - i - 1`: the central-series depth at which the block dies.
    pub fn depth(&self) -> usize {
        self.col - self.row - 1
    }

    pub fn name(&self, k: usize) -> String {
        match (self.row, self.col) {
            (0, c) if c == k + 1 => "C".into(),
            (0, c) => format!("A{}", c - 1),
            (i, c) if c == k + 1 => format!("B{i}"),
            (i, c) => format!("D{},{}", i, c - 1),
        }
    }
}

impl GkSpec {
    pub fn new(p: u64, k: usize, n: usize, r: usize, s: usize) -> Result<Self> {
        if p % 2 == 0 || !linalg::is_prime(p) {
            return Err(Error::PreconditionFailed(format!("p = {p} must be an odd prime")));
        }
        if n == 0 || r == 0 || s == 0 {
            return Err(Error::PreconditionFailed("n, r, s must be positive".into()));
        }
        Ok(GkSpec { p, k, n, r, s })
    }

    /// Parses `p3-k1-n2-r1-s1`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::UnknownGroup(format!("gk-{s}"));
        let mut vals = [None::<u64>; 5];
        for part in s.split('-') {
            let (key, v) = part.split_at(1.min(part.len()));
            let v: u64 = v.parse().map_err(|_| bad())?;
            let slot = "pknrs".find(key).ok_or_else(bad)?;
            vals[slot] = Some(v);
        }
        let [Some(p), Some(k), Some(n), Some(r), Some(s)] = vals else {
            return Err(bad());
        };
        GkSpec::new(p, k as usize, n as usize, r as usize, s as usize)
    }

    pub fn label(&self) -> String {
        format!("gk-p{}-k{}-n{}-r{}-s{}", self.p, self.k, self.n, self.r, self.s)
    }

    pub fn dim(&self) -> usize {
        self.r + self.k * self.n + self.s
    }

    /// `log_p |G| = krn + kns + rs + n²k(k-1)/2`.
    pub fn exponent(&self) -> usize {
        let (k, n, r, s) = (self.k, self.n, self.r, self.s);
        k * r * n + k * n * s + r * s + n * n * k * k.saturating_sub(1) / 2
    }

    fn block_size(&self, b: usize) -> usize {
        if b == 0 {
            self.r
        } else if b == self.k + 1 {
            self.s
        } else {
            self.n
        }
    }

    fn block_start(&self, b: usize) -> usize {
        if b == 0 {
            0
        } else {
            self.r + (b - 1) * self.n
        }
    }

    /// All free blocks in coordinate order: `A_0..A_{k-1}`, the `D` blocks
    /// row by row, `B_1..B_k`, then `C`.
    pub fn blocks(&self) -> Vec<BlockInfo> {
        let k = self.k;
        let mut pairs: Vec<(usize, usize)> = (1..=k).map(|c| (0, c)).collect();
        for i in 1..k {
            for c in i + 1..=k {
                pairs.push((i, c));
            }
        }
        pairs.extend((1..=k).map(|i| (i, k + 1)));
        pairs.push((0, k + 1));
        let mut offset = 0;
        pairs
            .into_iter()
            .map(|(row, col)| {
                let b = BlockInfo {
                    row,
                    col,
                    rows: self.block_size(row),
                    cols: self.block_size(col),
                    offset,
                };
                offset += b.rows * b.cols;
                b
            })
            .collect()
    }

    pub fn block(&self, row: usize, col: usize) -> BlockInfo {
        self.blocks()
            .into_iter()
            .find(|b| b.row == row && b.col == col)
            .expect("block above the diagonal")
    }

    /// Blocks of the abelianization map: `A_0, D_{1,1}, ..., D_{k-1,k-1}, B_k`
    /// (just `C` when `k = 0`).
    pub fn rho_blocks(&self) -> Vec<BlockInfo> {
        self.blocks().into_iter().filter(|b| b.depth() == 0).collect()
    }

    pub fn to_matrix(&self, coords: &[u32]) -> Vec<u32> {
        let d = self.dim();
        let mut m = vec![0u32; d * d];
        for i in 0..d {
            m[i * d + i] = 1;
        }
        for b in self.blocks() {
            let (r0, c0) = (self.block_start(b.row), self.block_start(b.col));
            for a in 0..b.rows {
                for c in 0..b.cols {
                    m[(r0 + a) * d + c0 + c] = coords[b.offset + a * b.cols + c];
                }
            }
        }
        m
    }

    /// Inverse of [`to_matrix`](Self::to_matrix); fails unless the matrix has
    /// identity diagonal blocks and zeros below them.
    pub fn from_matrix(&self, m: &[u32]) -> Result<Vec<u32>> {
        let d = self.dim();
        let blocks = self.blocks();
        let block_of = |x: usize| (0..=self.k + 1).rev().find(|&b| self.block_start(b) <= x).unwrap();
        for i in 0..d {
            for j in 0..d {
                let (bi, bj) = (block_of(i), block_of(j));
                if bi >= bj && m[i * d + j] != u32::from(i == j) {
                    return Err(Error::InvalidElement("matrix is not block unitriangular".into()));
                }
            }
        }
        let mut coords = vec![0u32; self.exponent()];
        for b in blocks {
            let (r0, c0) = (self.block_start(b.row), self.block_start(b.col));
            for a in 0..b.rows {
                for c in 0..b.cols {
                    coords[b.offset + a * b.cols + c] = m[(r0 + a) * d + c0 + c];
                }
            }
        }
        Ok(coords)
    }

    pub fn law(&self) -> GkLaw {
        GkLaw { spec: *self, blocks: self.blocks() }
    }

    /// Builds the group with elements indexed in lexicographic order of their
    /// coordinate vectors (first coordinate most significant).
    pub fn build(&self, caps: &Caps) -> Result<FiniteGroup> {
        let e = self.exponent() as u32;
        let order = self
            .p
            .checked_pow(e)
            .filter(|&o| o <= caps.order as u64)
            .ok_or_else(|| Error::cap("G_k(n,r,s) order", caps.order as u64))?;
        let law = self.law();
        let elems: Vec<Vec<u32>> = (0..order).map(|i| self.coords(i as usize)).collect();
        let gens: Vec<Vec<u32>> = self
            .rho_blocks()
            .iter()
            .flat_map(|b| (0..b.rows * b.cols).map(move |t| b.offset + t))
            .map(|pos| {
                let mut v = vec![0u32; e as usize];
                v[pos] = 1;
                v
            })
            .collect();
        FiniteGroup::from_elements(&elems, &gens, Arc::new(law), caps)
    }

    /// Coordinates of the element with lexicographic index `idx`.
    pub fn coords(&self, mut idx: usize) -> Vec<u32> {
        let e = self.exponent();
        let p = self.p as usize;
        let mut v = vec![0u32; e];
        for slot in v.iter_mut().rev() {
            *slot = (idx % p) as u32;
            idx /= p;
        }
        v
    }

    pub fn index(&self, coords: &[u32]) -> usize {
        coords.iter().fold(0, |acc, &c| acc * self.p as usize + c as usize)
    }
}

/// Block-formula multiplication on coordinate vectors:
/// `(XY)_{ij} = X_{ij} + Y_{ij} + Σ_{i<l<j} X_{il} Y_{lj}`.
#[derive(Debug, Clone)]
pub struct GkLaw {
    spec: GkSpec,
    blocks: Vec<BlockInfo>,
}

impl GkLaw {
    fn find(&self, row: usize, col: usize) -> &BlockInfo {
        self.blocks.iter().find(|b| b.row == row && b.col == col).expect("free block")
    }
}

impl ElementLaw for GkLaw {
    fn identity(&self) -> Vec<u32> {
        vec![0; self.spec.exponent()]
    }

    fn mul(&self, x: &[u32], y: &[u32]) -> Result<Vec<u32>> {
        let e = self.spec.exponent();
        let p = self.spec.p;
        if x.len() != e || y.len() != e {
            return Err(Error::InvalidElement("coordinate length mismatch".into()));
        }
        let mut out = vec![0u32; e];
        for b in &self.blocks {
            for a in 0..b.rows {
                for c in 0..b.cols {
                    let pos = b.offset + a * b.cols + c;
                    let mut acc = x[pos] as u64 + y[pos] as u64;
                    for l in b.row + 1..b.col {
                        let xl = self.find(b.row, l);
                        let yl = self.find(l, b.col);
                        for t in 0..xl.cols {
                            acc += x[xl.offset + a * xl.cols + t] as u64
                                * y[yl.offset + t * yl.cols + c] as u64;
                        }
                    }
                    out[pos] = (acc % p) as u32;
                }
            }
        }
        Ok(out)
    }

    fn inv(&self, x: &[u32]) -> Result<Vec<u32>> {
        // Inverted through the full matrix.
        let mat = MatFpLaw::new(self.spec.p as u32, self.spec.dim());
        let m = mat.inv(&self.spec.to_matrix(x))?;
        self.spec.from_matrix(&m)
    }

    fn render(&self, x: &[u32]) -> String {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let body: Vec<String> =
                    x[b.offset..b.offset + b.rows * b.cols].iter().map(u32::to_string).collect();
                format!("{}={}", b.name(self.spec.k), body.join(""))
            })
            .collect();
        parts.join(" ")
    }
}

/// A built `G_k(n, r, s)` together with its spec.
#[derive(Debug, Clone)]
pub struct GkGroup {
    pub spec: GkSpec,
    pub group: FiniteGroup,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesReport {
    pub ok: bool,
    pub class: Option<usize>,
    pub centre_order: usize,
    pub lower_orders: Vec<usize>,
    pub upper_orders: Vec<usize>,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoSmallReport {
    pub ok: bool,
    pub maximal_subgroups: usize,
    pub witness: Option<String>,
}

impl GkGroup {
    pub fn new(spec: GkSpec, caps: &Caps) -> Result<Self> {
        Ok(GkGroup { spec, group: spec.build(caps)? })
    }

    pub fn coords(&self, x: usize) -> Vec<u32> {
        self.spec.coords(x)
    }

    fn block_entries(&self, x: usize, b: &BlockInfo) -> Vec<u32> {
        self.coords(x)[b.offset..b.offset + b.rows * b.cols].to_vec()
    }

    /// `{X : every block of depth < ℓ vanishes}`.
    pub fn block_vanishing_set(&self, ell: usize) -> Vec<usize> {
        let dead: Vec<BlockInfo> = self.spec.blocks().into_iter().filter(|b| b.depth() < ell).collect();
        (0..self.group.order())
            .filter(|&x| dead.iter().all(|b| self.block_entries(x, b).iter().all(|&v| v == 0)))
            .collect()
    }

    /// Compares both central series with the block-vanishing description.
    pub fn verify_series(&self) -> SeriesReport {
        let g = &self.group;
        let cs = g.central_series();
        let k = self.spec.k;
        let centre_order = g.center().order();
        let mut witness = None;
        for ell in 0..=k {
            let predicted = self.block_vanishing_set(ell);
            let lower = cs.lower.get(ell).map(|s| s.members().to_vec());
            let upper = cs.upper.get(k + 1 - ell).map(|s| s.members().to_vec());
            if lower.as_deref() != Some(&predicted[..]) {
                witness = Some(format!("γ_{} differs from the block description", ell + 1));
                break;
            }
            if upper.as_deref() != Some(&predicted[..]) {
                witness = Some(format!("Z_{} differs from the block description", k + 1 - ell));
                break;
            }
        }
        let expected_class = if k == 0 { 1 } else { k + 1 };
        if witness.is_none() && cs.class != Some(expected_class) {
            witness = Some(format!("class {:?}, expected {expected_class}", cs.class));
        }
        let expected_centre = (self.spec.p as usize).pow((self.spec.r * self.spec.s) as u32);
        if witness.is_none() && k >= 1 && centre_order != expected_centre {
            witness = Some(format!("centre order {centre_order}, expected {expected_centre}"));
        }
        SeriesReport {
            ok: witness.is_none(),
            class: cs.class,
            centre_order,
            lower_orders: cs.lower.iter().map(Subgroup::order).collect(),
            upper_orders: cs.upper.iter().map(Subgroup::order).collect(),
            witness,
        }
    }

    /// `{X ∈ G_k(n,1,1) : A_0(X) = 0}`.
    pub fn sharp_subgroup(&self) -> Result<Subgroup> {
        if self.spec.r != 1 || self.spec.s != 1 {
            return Err(Error::PreconditionFailed("sharp subgroup needs r = s = 1".into()));
        }
        if self.spec.k == 0 {
            return Err(Error::PreconditionFailed("sharp subgroup needs k >= 1".into()));
        }
        let a0 = self.spec.block(0, 1);
        let members: Vec<usize> = (0..self.group.order())
            .filter(|&x| self.block_entries(x, &a0).iter().all(|&v| v == 0))
            .collect();
        self.group.subgroup_from_members(&members)
    }

    /// Checks that `G` and (for `n = 2`) every maximal subgroup have class
    /// greater than `k`: no subgroup of index `< p^n` is `k`-step nilpotent.
    pub fn no_small_nilpotent_subgroups(&self) -> Result<NoSmallReport> {
        let (k, n) = (self.spec.k, self.spec.n);
        if n > 2 {
            return Err(Error::PreconditionFailed(
                "only n <= 2 is checked (index < p^n reduces to maximal subgroups)".into(),
            ));
        }
        let g = &self.group;
        let mut candidates = vec![("G".to_string(), g.whole())];
        let mut maximal = 0;
        if n == 2 {
            let ms = g.maximal_subgroups_pgroup(self.spec.p)?;
            maximal = ms.len();
            candidates.extend(ms.into_iter().enumerate().map(|(i, m)| (format!("M{i}"), m)));
        }
        let mut witness = None;
        for (name, sub) in &candidates {
            if g.is_nilpotent_of_class_at_most(sub, k) {
                witness = Some(format!("{name} (order {}) has class <= {k}", sub.order()));
                break;
            }
        }
        Ok(NoSmallReport {
            ok: witness.is_none(),
            maximal_subgroups: maximal,
            witness,
        })
    }

    /// `ρ(x)` as a vector over `F_p`.
    pub fn rho(&self, x: usize) -> Vec<u64> {
        self.spec
            .rho_blocks()
            .iter()
            .flat_map(|b| self.block_entries(x, b))
            .map(u64::from)
            .collect()
    }

    pub fn abelianization_dim(&self) -> usize {
        self.spec.rho_blocks().iter().map(|b| b.rows * b.cols).sum()
    }

    /// Codimension of `ρ(K)` in `G^{ab}`.
    pub fn quasi_corank(&self, k_sub: &Subgroup) -> usize {
        let rows: Vec<Vec<u64>> = k_sub.generators().iter().map(|&x| self.rho(x)).collect();
        let rank = if rows.is_empty() { 0 } else { linalg::rank(&rows, self.spec.p) };
        self.abelianization_dim() - rank
    }

    /// `[G : Kγ_2(G)]`.
    pub fn index_mod_derived(&self, k_sub: &Subgroup) -> usize {
        let g = &self.group;
        let lower = g.lower_central_series_of(&g.whole());
        let mut seeds = k_sub.generators().to_vec();
        if let Some(g2) = lower.get(1) {
            seeds.extend_from_slice(g2.generators());
        }
        g.order() / g.subgroup_generated(&seeds).order()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nildegree::{dc_k_exact, rational};

    fn gk(p: u64, k: usize, n: usize, r: usize, s: usize) -> GkGroup {
        GkGroup::new(GkSpec::new(p, k, n, r, s).unwrap(), &Caps::default()).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(gk(3, 0, 1, 2, 2).group.order(), 81);
        assert!(gk(3, 0, 1, 2, 2).group.is_abelian());
        assert_eq!(gk(3, 1, 1, 1, 1).group.order(), 27);
        assert_eq!(gk(3, 1, 2, 1, 1).group.order(), 243);
        assert_eq!(GkSpec::new(3, 2, 1, 1, 1).unwrap().exponent(), 6);
        assert!(GkSpec::new(2, 1, 1, 1, 1).is_err());
        assert!(GkSpec::new(9, 1, 1, 1, 1).is_err());
    }

    #[test]
    fn extraspecial_of_exponent_p() {
        let g = gk(3, 1, 1, 1, 1);
        let exp = (0..27).map(|x| g.group.element_order(x)).max().unwrap();
        assert_eq!(exp, 3);
        assert_eq!(g.group.central_series().class, Some(2));
    }

    #[test]
    fn block_formula_matches_matrix_product() {
        for spec in [
            GkSpec::new(3, 2, 1, 1, 1).unwrap(),
            GkSpec::new(3, 1, 2, 1, 1).unwrap(),
            GkSpec::new(5, 2, 1, 2, 1).unwrap(),
        ] {
            let law = spec.law();
            let mat = MatFpLaw::new(spec.p as u32, spec.dim());
            let order = spec.p.pow(spec.exponent() as u32) as usize;
            let step = (order / 97).max(1);
            for i in (0..order).step_by(step) {
                let x = spec.coords(i);
                assert_eq!(spec.from_matrix(&spec.to_matrix(&x)).unwrap(), x);
                for j in (3..order).step_by(step + 2) {
                    let y = spec.coords(j);
                    let block = law.mul(&x, &y).unwrap();
                    let full = mat.mul(&spec.to_matrix(&x), &spec.to_matrix(&y)).unwrap();
                    assert_eq!(spec.to_matrix(&block), full);
                }
            }
        }
    }

    #[test]
    fn lexicographic_indexing() {
        let g = gk(3, 1, 1, 1, 1);
        for x in 0..27 {
            assert_eq!(g.spec.index(&g.coords(x)), x);
            assert_eq!(g.group.label(x), g.spec.law().render(&g.coords(x)));
        }
    }

    #[test]
    fn series_match_block_description() {
        for (p, k, n) in [(3, 0, 1), (3, 1, 1), (5, 1, 1), (3, 2, 1), (3, 1, 2)] {
            let g = gk(p, k, n, 1, 1);
            let rep = g.verify_series();
            assert!(rep.ok, "{:?}: {:?}", g.spec, rep.witness);
        }
        assert_eq!(gk(5, 1, 1, 1, 1).verify_series().centre_order, 5);
        assert_eq!(gk(3, 2, 1, 1, 1).verify_series().class, Some(3));
    }

    #[test]
    fn sharp_subgroups() {
        let g = gk(3, 1, 1, 1, 1);
        let h = g.sharp_subgroup().unwrap();
        assert_eq!(27 / h.order(), 3);
        assert!(g.group.is_nilpotent_of_class_at_most(&h, 1));
        let g = gk(3, 1, 2, 1, 1);
        let h = g.sharp_subgroup().unwrap();
        assert_eq!(h.order(), 27);
        assert!(g.group.is_nilpotent_of_class_at_most(&h, 1));
        assert_eq!(g.quasi_corank(&h), 2);
        let g = gk(3, 2, 1, 1, 1);
        let h = g.sharp_subgroup().unwrap();
        assert_eq!(729 / h.order(), 3);
        assert!(g.group.is_nilpotent_of_class_at_most(&h, 2));
        assert!(gk(3, 1, 1, 2, 1).sharp_subgroup().is_err());
    }

    #[test]
    fn maximal_subgroups_not_abelian() {
        let g = gk(3, 1, 2, 1, 1);
        let rep = g.no_small_nilpotent_subgroups().unwrap();
        assert_eq!(rep.maximal_subgroups, 40);
        assert!(rep.ok, "{:?}", rep.witness);
        assert!(gk(3, 1, 1, 1, 1).no_small_nilpotent_subgroups().unwrap().ok);
    }

    #[test]
    fn quasi_corank_cases() {
        let g = gk(3, 1, 1, 1, 1);
        assert_eq!(g.quasi_corank(&g.group.whole()), 0);
        assert_eq!(g.quasi_corank(&g.group.trivial_subgroup()), 2);
        assert_eq!(g.index_mod_derived(&g.group.trivial_subgroup()), 9);
    }

    #[test]
    fn dc_at_least_one_over_p() {
        for (p, k, n) in [(3, 1, 1), (5, 1, 1), (3, 1, 2), (3, 2, 1)] {
            let g = gk(p, k, n, 1, 1);
            assert!(dc_k_exact(&g.group, k) >= rational(1u32, p));
        }
    }
}
