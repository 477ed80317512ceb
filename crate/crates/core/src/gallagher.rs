//! The multigraph Γ on `N^{k-1}` behind submultiplicativity of `dc^k`, with
//! periods, levels and the counting identities they imply.

use std::collections::{HashSet, VecDeque};

use num_integer::Integer;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::group::{Caps, FiniteGroup, Subgroup};
use crate::nildegree::{dc_k_exact, f_k_count};

fn simple_comm(g: &FiniteGroup, xs: &[usize]) -> usize {
    xs[1..].iter().fold(xs[0], |acc, &x| g.comm(acc, x))
}

/// `(α_3, ..., α_{k+2})` for `ns = (n_3, ..., n_{k+1})`:
/// `α_3 = y` and `α_{i+1} = α_i [y, g, n_3, ..., n_{i-1}]`.
pub fn alpha_sequence(g: &FiniteGroup, y: usize, h: usize, ns: &[usize]) -> Vec<usize> {
    let mut out = vec![y];
    let mut alpha = y;
    let mut c = g.comm(y, h);
    for i in 0..ns.len() {
        if i > 0 {
            c = g.comm(c, ns[i - 1]);
        }
        alpha = g.mul(alpha, c);
        out.push(alpha);
    }
    out
}

/// `[z y, g, n_3, ...] = [z, g, n_3^{α_3⁻¹}, ...]^{α_{k+2}} [y, g, n_3, ...]`.
pub fn check_main_identity(g: &FiniteGroup, z: usize, y: usize, h: usize, ns: &[usize]) -> bool {
    let alphas = alpha_sequence(g, y, h, ns);
    let mut lhs_args = vec![g.mul(z, y), h];
    lhs_args.extend_from_slice(ns);
    let lhs = simple_comm(g, &lhs_args);
    let mut left = vec![z, h];
    left.extend(ns.iter().zip(&alphas).map(|(&n, &a)| g.conj(n, g.inv(a))));
    let mut right = vec![y, h];
    right.extend_from_slice(ns);
    let rhs = g.mul(g.conj(simple_comm(g, &left), alphas[ns.len()]), simple_comm(g, &right));
    lhs == rhs
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub label: usize,
}

#[derive(Debug, Clone)]
pub struct Component {
    pub vertices: Vec<usize>,
    pub base: usize,
    pub period: usize,
}

/// `r_j = |L⁻¹(j)|` and `h_j` for one component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelHistogram {
    pub component: usize,
    pub r: Vec<u64>,
    pub h: Vec<u64>,
}

#[derive(Debug, Clone)]
pub struct GammaGraph {
    pub k: usize,
    pub g: usize,
    pub x: usize,
    /// Order of `xN` in `G/N`.
    pub o: usize,
    /// Sorted members of `N`; vertex tuples index into this list.
    pub n_members: Vec<usize>,
    pub vertex_count: usize,
    pub edges: Vec<Edge>,
    pub components: Vec<Component>,
    pub component_of: Vec<usize>,
    pub level: Vec<usize>,
    /// Levels recomputed from a depth-first spanning forest.
    pub level_dfs: Vec<usize>,
}

impl GammaGraph {
    /// Decodes a vertex index into its tuple of group elements.
    pub fn tuple(&self, mut v: usize) -> Vec<usize> {
        let n = self.n_members.len();
        let mut out = vec![0; self.k - 1];
        for slot in out.iter_mut().rev() {
            *slot = self.n_members[v % n];
            v /= n;
        }
        out
    }

    fn encode(&self, pos: &[usize], t: &[usize]) -> usize {
        t.iter().fold(0, |acc, &e| acc * self.n_members.len() + pos[e])
    }

    pub fn levels_agree(&self) -> bool {
        self.level == self.level_dfs
    }
}

fn coset_members(g: &FiniteGroup, x: usize, n: &Subgroup) -> Vec<usize> {
    let mut m: Vec<usize> = n.members().iter().map(|&a| g.mul(x, a)).collect();
    m.sort_unstable();
    m
}

fn coset_order(g: &FiniteGroup, x: usize, n: &Subgroup) -> usize {
    let mut p = x;
    let mut o = 1;
    while !n.contains(p) {
        p = g.mul(p, x);
        o += 1;
    }
    o
}

/// Builds Γ for `g`, the coset `xN` and `k ≥ 1`.
pub fn build_gamma(g: &FiniteGroup, n: &Subgroup, h: usize, x: usize, k: usize, caps: &Caps) -> Result<GammaGraph> {
    if k == 0 {
        return Err(Error::PreconditionFailed("k must be at least 1".into()));
    }
    if !g.is_normal(n) {
        return Err(Error::NotNormal(format!("subgroup of order {}", n.order())));
    }
    let nn = n.order();
    let vertices = (nn as u64).checked_pow((k - 1) as u32).unwrap_or(u64::MAX);
    if vertices > caps.vertices {
        return Err(Error::SizeCap { vertices, cap: caps.vertices });
    }
    let vertex_count = vertices as usize;
    let n_members = n.members().to_vec();
    let mut pos = vec![usize::MAX; g.order()];
    for (i, &m) in n_members.iter().enumerate() {
        pos[m] = i;
    }
    let mut gamma = GammaGraph {
        k,
        g: h,
        x,
        o: coset_order(g, x, n),
        n_members,
        vertex_count,
        edges: Vec::new(),
        components: Vec::new(),
        component_of: vec![usize::MAX; vertex_count],
        level: vec![0; vertex_count],
        level_dfs: vec![0; vertex_count],
    };
    let labels = coset_members(g, x, n);
    for v in 0..vertex_count {
        let ns = gamma.tuple(v);
        for &y in &labels {
            let mut args = vec![y, h];
            args.extend_from_slice(&ns);
            if simple_comm(g, &args) == 0 {
                let alphas = alpha_sequence(g, y, h, &ns);
                let w: Vec<usize> = ns.iter().zip(&alphas).map(|(&m, &a)| g.conj(m, g.inv(a))).collect();
                let target = gamma.encode(&pos, &w);
                gamma.edges.push(Edge { source: v, target, label: y });
            }
        }
    }
    gamma.analyse();
    Ok(gamma)
}

impl GammaGraph {
    fn adjacency(&self) -> Vec<Vec<(usize, i64)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for e in &self.edges {
            adj[e.source].push((e.target, 1));
            adj[e.target].push((e.source, -1));
        }
        adj
    }

    /// Components, periods and levels (BFS forest), then levels again from a
    /// DFS forest.
    fn analyse(&mut self) {
        let adj = self.adjacency();
        let mut pot = vec![0i64; self.vertex_count];
        for start in 0..self.vertex_count {
            if self.component_of[start] != usize::MAX {
                continue;
            }
            let cid = self.components.len();
            let mut verts = vec![start];
            self.component_of[start] = cid;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &(w, s) in &adj[v] {
                    if self.component_of[w] == usize::MAX {
                        self.component_of[w] = cid;
                        pot[w] = pot[v] + s;
                        verts.push(w);
                        queue.push_back(w);
                    }
                }
            }
            verts.sort_unstable();
            self.components.push(Component { base: verts[0], vertices: verts, period: self.o });
        }
        let mut period = vec![self.o as i64; self.components.len()];
        for e in &self.edges {
            let c = self.component_of[e.source];
            period[c] = period[c].gcd(&(pot[e.source] + 1 - pot[e.target]));
        }
        for (c, comp) in self.components.iter_mut().enumerate() {
            comp.period = period[c] as usize;
        }
        for v in 0..self.vertex_count {
            let d = period[self.component_of[v]];
            self.level[v] = (pot[v] - pot[self.components[self.component_of[v]].base]).rem_euclid(d) as usize;
        }
        let mut seen = vec![false; self.vertex_count];
        let mut dfs_pot = vec![0i64; self.vertex_count];
        for comp in &self.components {
            let mut stack = vec![comp.base];
            seen[comp.base] = true;
            while let Some(v) = stack.pop() {
                for &(w, s) in adj[v].iter().rev() {
                    if !seen[w] {
                        seen[w] = true;
                        dfs_pot[w] = dfs_pot[v] + s;
                        stack.push(w);
                    }
                }
            }
            for &v in &comp.vertices {
                self.level_dfs[v] = dfs_pot[v].rem_euclid(comp.period as i64) as usize;
            }
        }
    }

    /// `F[i][v] = f_k(x^i N, g, v)` for `i < o`.
    pub fn coset_counts(&self, g: &FiniteGroup) -> Vec<Vec<u64>> {
        let nset = {
            let mut s = self.n_members.clone();
            s.sort_unstable();
            s
        };
        let mut xi = 0usize;
        let mut out = Vec::with_capacity(self.o);
        for _ in 0..self.o {
            let coset: Vec<usize> = nset.iter().map(|&a| g.mul(xi, a)).collect();
            let row = (0..self.vertex_count)
                .map(|v| {
                    let ns = self.tuple(v);
                    coset
                        .iter()
                        .filter(|&&y| {
                            let mut args = vec![y, self.g];
                            args.extend_from_slice(&ns);
                            simple_comm(g, &args) == 0
                        })
                        .count() as u64
                })
                .collect();
            out.push(row);
            xi = g.mul(xi, self.x);
        }
        out
    }

    /// Checks that `f_k(x^i N, g, v)` depends only on `L(v) + i mod d`, and
    /// returns the histograms `r_j, h_j` per component.
    pub fn check_period_property(&self, counts: &[Vec<u64>]) -> std::result::Result<Vec<LevelHistogram>, String> {
        let mut out = Vec::with_capacity(self.components.len());
        for (cid, comp) in self.components.iter().enumerate() {
            let d = comp.period;
            let mut h: Vec<Option<u64>> = vec![None; d];
            let mut r = vec![0u64; d];
            for &v in &comp.vertices {
                r[self.level[v]] += 1;
                for (i, row) in counts.iter().enumerate() {
                    let j = (self.level[v] + i) % d;
                    match h[j] {
                        None => h[j] = Some(row[v]),
                        Some(prev) if prev != row[v] => {
                            return Err(format!(
                                "component {cid}: vertex {:?} at i = {i} gives {} but level class {j} has {prev}",
                                self.tuple(v),
                                row[v]
                            ))
                        }
                        Some(_) => {}
                    }
                }
            }
            let h = h.into_iter().map(|x| x.unwrap_or(0)).collect();
            out.push(LevelHistogram { component: cid, r, h });
        }
        Ok(out)
    }

    /// Edges re-verified: the commutator vanishes and the target is the
    /// α-conjugated tuple.
    pub fn check_edges(&self, g: &FiniteGroup) -> bool {
        self.edges.iter().all(|e| {
            let ns = self.tuple(e.source);
            let mut args = vec![e.label, self.g];
            args.extend_from_slice(&ns);
            let alphas = alpha_sequence(g, e.label, self.g, &ns);
            let w: Vec<usize> = ns.iter().zip(&alphas).map(|(&m, &a)| g.conj(m, g.inv(a))).collect();
            simple_comm(g, &args) == 0 && self.tuple(e.target) == w
        })
    }

    /// `θ(y, v) = (y⁻¹, α-conjugated v)` is a bijection
    /// `xN × N^{k-1} → x⁻¹N × N^{k-1}` that preserves solutions and sends a
    /// solution at level `j` to one at level `j + 1`.
    pub fn check_theta(&self, g: &FiniteGroup) -> bool {
        let nn = self.n_members.len();
        let mut pos = vec![usize::MAX; g.order()];
        for (i, &m) in self.n_members.iter().enumerate() {
            pos[m] = i;
        }
        let labels: Vec<usize> = {
            let mut s: Vec<usize> = self.n_members.iter().map(|&a| g.mul(self.x, a)).collect();
            s.sort_unstable();
            s
        };
        let mut images = HashSet::with_capacity(labels.len() * self.vertex_count);
        for &y in &labels {
            let yi = g.inv(y);
            for v in 0..self.vertex_count {
                let ns = self.tuple(v);
                let alphas = alpha_sequence(g, y, self.g, &ns);
                let w: Vec<usize> = ns.iter().zip(&alphas).map(|(&m, &a)| g.conj(m, g.inv(a))).collect();
                let target = self.encode(&pos, &w);
                if !images.insert((yi, target)) {
                    return false;
                }
                let mut a = vec![y, self.g];
                a.extend_from_slice(&ns);
                let mut b = vec![yi, self.g];
                b.extend_from_slice(&w);
                let solves = simple_comm(g, &a) == 0;
                if solves != (simple_comm(g, &b) == 0) {
                    return false;
                }
                if solves {
                    let c = self.component_of[v];
                    let d = self.components[c].period;
                    if self.component_of[target] != c || self.level[target] != (self.level[v] + 1) % d {
                        return false;
                    }
                }
            }
        }
        images.len() == nn * self.vertex_count
    }
}

/// `r_j h_{j+1} = r_{j+1} h_j` for all `j` (indices cyclic).
pub fn check_adjacent_property(hist: &LevelHistogram) -> bool {
    let d = hist.r.len();
    (0..d).all(|j| hist.r[j] * hist.h[(j + 1) % d] == hist.r[(j + 1) % d] * hist.h[j])
}

/// `Σ r_j h_{j+1} ≤ Σ r_j h_j` under the proportionality hypothesis.
pub fn check_rearrangement_lemma(r: &[u64], h: &[u64]) -> Result<bool> {
    let d = r.len();
    if d == 0 || h.len() != d {
        return Err(Error::PreconditionFailed("r and h need equal non-zero length".into()));
    }
    let prop = (0..d).all(|j| {
        r[j] as u128 * h[(j + 1) % d] as u128 == r[(j + 1) % d] as u128 * h[j] as u128
    });
    if !prop {
        return Err(Error::PreconditionFailed("r and h are not cyclically proportional".into()));
    }
    let shifted: u128 = (0..d).map(|j| r[j] as u128 * h[(j + 1) % d] as u128).sum();
    let aligned: u128 = (0..d).map(|j| r[j] as u128 * h[j] as u128).sum();
    Ok(shifted <= aligned)
}

#[derive(Debug, Clone)]
pub struct Submultiplicativity {
    pub lhs: BigRational,
    pub dc_n: BigRational,
    pub dc_quotient: BigRational,
    pub rhs: BigRational,
    pub ok: bool,
}

/// `dc^k(G) ≤ dc^k(N) · dc^k(G/N)`.
pub fn verify_submultiplicativity(g: &FiniteGroup, n: &Subgroup, k: usize) -> Result<Submultiplicativity> {
    let q = g.quotient(n)?;
    let (sub, _) = g.induced(n);
    let lhs = dc_k_exact(g, k);
    let dc_n = dc_k_exact(&sub, k);
    let dc_quotient = dc_k_exact(&q.quotient, k);
    let rhs = &dc_n * &dc_quotient;
    let ok = lhs <= rhs;
    Ok(Submultiplicativity { lhs, dc_n, dc_quotient, rhs, ok })
}

#[derive(Debug, Clone)]
pub struct CosetBound {
    pub bound: u64,
    pub max: u64,
    pub ok: bool,
    pub witness: Option<Vec<usize>>,
}

/// `f_k(x_1N, ..., x_{k+1}N) ≤ f_k(N, ..., N)` over all coset tuples.
pub fn check_coset_bound(g: &FiniteGroup, n: &Subgroup, k: usize, caps: &Caps) -> Result<CosetBound> {
    let q = g.quotient(n)?;
    let reps: Vec<usize> = (0..q.quotient.order()).map(|c| q.section[c]).collect();
    let tuples = (reps.len() as u64)
        .checked_pow(k as u32 + 1)
        .filter(|&t| t.saturating_mul(g.order() as u64) <= caps.evals)
        .ok_or_else(|| Error::cap("coset tuple evaluations", caps.evals))?;
    let cosets: Vec<Vec<usize>> = reps.iter().map(|&x| coset_members(g, x, n)).collect();
    let base = vec![n.members().to_vec(); k + 1];
    let bound = to_u64(&f_k_count(g, &base)?);
    let mut max = 0;
    let mut witness = None;
    for code in 0..tuples {
        let mut c = code as usize;
        let mut idx = vec![0; k + 1];
        for slot in idx.iter_mut().rev() {
            *slot = c % reps.len();
            c /= reps.len();
        }
        let sets: Vec<Vec<usize>> = idx.iter().map(|&i| cosets[i].clone()).collect();
        let f = to_u64(&f_k_count(g, &sets)?);
        if f > max {
            max = f;
        }
        if f > bound && witness.is_none() {
            witness = Some(idx.iter().map(|&i| reps[i]).collect());
        }
    }
    Ok(CosetBound { bound, max, ok: witness.is_none(), witness })
}

fn to_u64(x: &num_bigint::BigUint) -> u64 {
    u64::try_from(x).expect("desk-scale counts fit in u64")
}

/// Outcome of all Γ checks for one `(g, xN)`.
#[derive(Debug, Clone)]
pub struct GammaAudit {
    pub g: usize,
    pub x: usize,
    pub o: usize,
    pub vertices: usize,
    pub edges: usize,
    pub periods: Vec<usize>,
    pub histograms: Vec<LevelHistogram>,
    pub edges_ok: bool,
    pub levels_agree: bool,
    pub period_ok: bool,
    pub adjacent_ok: bool,
    pub rearrangement_ok: bool,
    pub theta_ok: bool,
    /// `f_k(xN, g, N, ..., N) ≤ f_k(N, g, N, ..., N)`.
    pub prop_ok: bool,
    pub failure: Option<String>,
}

impl GammaAudit {
    pub fn ok(&self) -> bool {
        self.edges_ok
            && self.levels_agree
            && self.period_ok
            && self.adjacent_ok
            && self.rearrangement_ok
            && self.theta_ok
            && self.prop_ok
    }
}

pub fn audit_gamma(g: &FiniteGroup, n: &Subgroup, h: usize, x: usize, k: usize, caps: &Caps) -> Result<GammaAudit> {
    let gamma = build_gamma(g, n, h, x, k, caps)?;
    let counts = gamma.coset_counts(g);
    let (histograms, period_ok, failure) = match gamma.check_period_property(&counts) {
        Ok(hs) => (hs, true, None),
        Err(msg) => (Vec::new(), false, Some(msg)),
    };
    let adjacent_ok = period_ok && histograms.iter().all(check_adjacent_property);
    let rearrangement_ok = adjacent_ok
        && histograms.iter().all(|hh| check_rearrangement_lemma(&hh.r, &hh.h).unwrap_or(false));
    let base: u64 = counts[0].iter().sum();
    let shifted: u64 = counts.get(1 % gamma.o).map(|row| row.iter().sum()).unwrap_or(base);
    Ok(GammaAudit {
        g: h,
        x,
        o: gamma.o,
        vertices: gamma.vertex_count,
        edges: gamma.edges.len(),
        periods: gamma.components.iter().map(|c| c.period).collect(),
        histograms,
        edges_ok: gamma.check_edges(g),
        levels_agree: gamma.levels_agree(),
        period_ok,
        adjacent_ok,
        rearrangement_ok,
        theta_ok: gamma.check_theta(g),
        prop_ok: shifted <= base,
        failure,
    })
}

/// Everything checked for a pair `(G, N)` and a fixed `k`.
#[derive(Debug, Clone)]
pub struct GallagherReport {
    pub k: usize,
    pub submultiplicativity: Submultiplicativity,
    pub coset_bound: CosetBound,
    pub audits: Vec<GammaAudit>,
}

impl GallagherReport {
    pub fn ok(&self) -> bool {
        self.submultiplicativity.ok && self.coset_bound.ok && self.audits.iter().all(GammaAudit::ok)
    }
}

/// Runs every check over all `g ∈ G` and all cosets `xN`.
pub fn gallagher_report(g: &FiniteGroup, n: &Subgroup, k: usize, caps: &Caps) -> Result<GallagherReport> {
    let submultiplicativity = verify_submultiplicativity(g, n, k)?;
    let coset_bound = check_coset_bound(g, n, k, caps)?;
    let q = g.quotient(n)?;
    let mut audits = Vec::new();
    for h in 0..g.order() {
        for c in 0..q.quotient.order() {
            audits.push(audit_gamma(g, n, h, q.section[c], k, caps)?);
        }
    }
    Ok(GallagherReport { k, submultiplicativity, coset_bound, audits })
}
