use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::hash::{Hash, Hasher};

use rand::seq::SliceRandom;
use rand::Rng;

use super::word::FreeWord;

/// A folded, core, labelled graph with canonical vertex numbering (base is 0,
/// the rest in breadth-first order by signed label).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoreGraph {
    pub vertices: usize,
    /// `(source, label, target)` with `label ≥ 1`, sorted.
    pub edges: Vec<(usize, u32, usize)>,
}

impl CoreGraph {
    /// Rank of the subgroup: `E - V + 1`.
    pub fn rank(&self) -> usize {
        self.edges.len() + 1 - self.vertices
    }

    pub fn canonical_hash(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.hash(&mut h);
        h.finish()
    }

    /// No two edges with the same label leave, or enter, the same vertex.
    pub fn is_folded(&self) -> bool {
        let mut out = BTreeSet::new();
        let mut inn = BTreeSet::new();
        self.edges.iter().all(|&(s, l, t)| out.insert((s, l)) && inn.insert((t, l)))
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.0[hi] = lo;
        true
    }
}

/// Wedge of one loop per word at a common base vertex 0.
fn wedge(words: &[FreeWord]) -> (usize, Vec<(usize, u32, usize)>) {
    let mut n = 1;
    let mut edges = Vec::new();
    for w in words {
        let len = w.len();
        let mut prev = 0;
        for (i, &l) in w.letters().iter().enumerate() {
            let next = if i + 1 == len {
                0
            } else {
                n += 1;
                n - 1
            };
            if l > 0 {
                edges.push((prev, l as u32, next));
            } else {
                edges.push((next, (-l) as u32, prev));
            }
            prev = next;
        }
    }
    (n, edges)
}

fn fold_edges(n: usize, edges: &[(usize, u32, usize)]) -> (UnionFind, Vec<(usize, u32, usize)>) {
    let mut uf = UnionFind((0..n).collect());
    loop {
        let mut changed = false;
        let mut out: HashMap<(usize, u32), usize> = HashMap::new();
        let mut inn: HashMap<(usize, u32), usize> = HashMap::new();
        for &(s, l, t) in edges {
            let (s, t) = (uf.find(s), uf.find(t));
            match out.get(&(s, l)) {
                Some(&t2) => changed |= uf.union(t2, t),
                None => {
                    out.insert((s, l), t);
                }
            }
            let t = uf.find(t);
            match inn.get(&(t, l)) {
                Some(&s2) => changed |= uf.union(s2, s),
                None => {
                    inn.insert((t, l), s);
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut folded: Vec<(usize, u32, usize)> = edges
        .iter()
        .map(|&(s, l, t)| (uf.find(s), l, uf.find(t)))
        .collect();
    folded.sort_unstable();
    folded.dedup();
    (uf, folded)
}

/// Removes non-base vertices of degree one until none remain.
fn prune(mut edges: Vec<(usize, u32, usize)>) -> Vec<(usize, u32, usize)> {
    loop {
        let mut degree: HashMap<usize, usize> = HashMap::new();
        for &(s, _, t) in &edges {
            *degree.entry(s).or_default() += 1;
            *degree.entry(t).or_default() += 1;
        }
        let before = edges.len();
        edges.retain(|&(s, _, t)| {
            let leaf = |v: usize| v != 0 && degree[&v] == 1;
            !(leaf(s) || leaf(t))
        });
        if edges.len() == before {
            return edges;
        }
    }
}

fn canonicalize(base: usize, edges: &[(usize, u32, usize)]) -> CoreGraph {
    let mut adj: HashMap<usize, Vec<(i64, usize)>> = HashMap::new();
    for &(s, l, t) in edges {
        adj.entry(s).or_default().push((l as i64, t));
        adj.entry(t).or_default().push((-(l as i64), s));
    }
    for list in adj.values_mut() {
        list.sort_unstable();
    }
    let mut number: HashMap<usize, usize> = HashMap::from([(base, 0)]);
    let mut queue = VecDeque::from([base]);
    while let Some(v) = queue.pop_front() {
        for &(_, w) in adj.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
            if !number.contains_key(&w) {
                number.insert(w, number.len());
                queue.push_back(w);
            }
        }
    }
    let mut canon: Vec<(usize, u32, usize)> = edges.iter().map(|&(s, l, t)| (number[&s], l, number[&t])).collect();
    canon.sort_unstable();
    CoreGraph { vertices: number.len(), edges: canon }
}

/// The Stallings core graph of `⟨words⟩`.
pub fn core_graph(words: &[FreeWord]) -> CoreGraph {
    let (n, edges) = wedge(words);
    finish(n, &edges)
}

/// As [`core_graph`], but folds the wedge edges in a random order.
pub fn core_graph_shuffled<R: Rng>(words: &[FreeWord], rng: &mut R) -> CoreGraph {
    let (n, mut edges) = wedge(words);
    edges.shuffle(rng);
    finish(n, &edges)
}

fn finish(n: usize, edges: &[(usize, u32, usize)]) -> CoreGraph {
    let (mut uf, folded) = fold_edges(n, edges);
    let base = uf.find(0);
    canonicalize(base, &prune(folded))
}

/// Rank of the subgroup generated by `words`.
pub fn stallings_rank(words: &[FreeWord]) -> usize {
    core_graph(words).rank()
}

/// Whether `words` is a free basis of the subgroup it generates.
pub fn is_free_basis(words: &[FreeWord]) -> bool {
    stallings_rank(words) == words.len()
}
