//! Random walks, Følner boxes and free-group balls, with Monte Carlo
//! estimators of `dc^k`, `P^k` and `dφ` under them.

use std::collections::HashMap;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::genericity::{ball_size, sphere_size, FreeGroup, FreeWord};
use crate::group::{FiniteGroup, Group, GroupWord};
use crate::malcev::{MalcevElement, MalcevGroup};

/// The RNG for one trial: `seed` selects the key, `trial` the stream, so a
/// trial's draws do not depend on how trials are scheduled.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// A finitely supported, symmetric step law with positive identity weight.
#[derive(Debug, Clone)]
pub struct StepDistribution<E> {
    support: Vec<(E, f64)>,
    cumulative: Vec<f64>,
}

impl<E: Clone + PartialEq + std::fmt::Debug> StepDistribution<E> {
    pub fn new<G: Group<Elem = E>>(group: &G, support: Vec<(E, f64)>) -> Result<Self> {
        if support.iter().any(|(_, w)| !(*w > 0.0)) {
            return Err(Error::PreconditionFailed("step weights must be positive".into()));
        }
        let total: f64 = support.iter().map(|(_, w)| w).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::PreconditionFailed(format!("step weights sum to {total}, not 1")));
        }
        let weight_of = |x: &E| -> f64 { support.iter().filter(|(y, _)| y == x).map(|(_, w)| w).sum() };
        if weight_of(&group.identity()) <= 0.0 {
            return Err(Error::PreconditionFailed("identity needs positive weight".into()));
        }
        for (x, _) in &support {
            if (weight_of(x) - weight_of(&group.inv(x))).abs() > 1e-12 {
                return Err(Error::PreconditionFailed(format!("step law is not symmetric at {x:?}")));
            }
        }
        let mut acc = 0.0;
        let cumulative = support
            .iter()
            .map(|(_, w)| {
                acc += w;
                acc / total
            })
            .collect();
        Ok(StepDistribution { support, cumulative })
    }

    /// Identity plus each generator and its inverse, all with weight
    /// `1/(s + 1)` where `s` is the number of distinct non-identity steps.
    pub fn lazy<G: Group<Elem = E>>(group: &G, gens: &[E]) -> Result<Self> {
        let id = group.identity();
        let mut steps: Vec<E> = Vec::new();
        for g in gens {
            for x in [g.clone(), group.inv(g)] {
                if x != id && !steps.contains(&x) {
                    steps.push(x);
                }
            }
        }
        let w = 1.0 / (steps.len() + 1) as f64;
        let support = std::iter::once((id, w)).chain(steps.into_iter().map(|x| (x, w))).collect();
        StepDistribution::new(group, support)
    }

    pub fn support(&self) -> &[(E, f64)] {
        &self.support
    }

    pub fn draw<R: Rng>(&self, rng: &mut R) -> &E {
        let u: f64 = rng.gen();
        let i = self.cumulative.partition_point(|&c| c <= u).min(self.support.len() - 1);
        &self.support[i].0
    }
}

/// A source of random group elements.
pub trait Sampler: Sync {
    type G: Group + Sync;
    fn group(&self) -> &Self::G;
    fn sample(&self, rng: &mut ChaCha8Rng) -> <Self::G as Group>::Elem;
}

/// `n` independent steps of a [`StepDistribution`], multiplied in order.
pub struct RandomWalk<'a, G: Group> {
    pub group: &'a G,
    pub step: StepDistribution<G::Elem>,
    pub steps: usize,
}

impl<G> Sampler for RandomWalk<'_, G>
where
    G: Group + Sync,
    G::Elem: Send + Sync,
{
    type G = G;

    fn group(&self) -> &G {
        self.group
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> G::Elem {
        (0..self.steps).fold(self.group.identity(), |acc, _| self.group.mul(&acc, self.step.draw(rng)))
    }
}

/// Uniform coordinates with `|v_i| ≤ side^{w_i}` in a Mal'cev group.
pub struct FolnerBox {
    pub group: MalcevGroup,
    pub side: u64,
    pub weights: Vec<u32>,
}

impl FolnerBox {
    pub fn new(group: MalcevGroup, side: u64, weights: Vec<u32>) -> Result<Self> {
        if weights.len() != group.m {
            return Err(Error::ArityMismatch { expected: group.m, got: weights.len() });
        }
        if weights.iter().any(|&w| side.checked_pow(w).map_or(true, |b| b > i64::MAX as u64)) {
            return Err(Error::cap("Følner box side", i64::MAX as u64));
        }
        Ok(FolnerBox { group, side, weights })
    }

    /// Weights `(2, 1, 1)` for the Heisenberg group, centre first.
    pub fn heisenberg(side: u64) -> Self {
        FolnerBox::new(MalcevGroup::heisenberg(), side, vec![2, 1, 1]).expect("valid box")
    }

    pub fn bounds(&self) -> Vec<i64> {
        self.weights.iter().map(|&w| self.side.pow(w) as i64).collect()
    }
}

impl Sampler for FolnerBox {
    type G = MalcevGroup;

    fn group(&self) -> &MalcevGroup {
        &self.group
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> MalcevElement {
        self.bounds().into_iter().map(|b| BigInt::from(rng.gen_range(-b..=b))).collect()
    }
}

/// Uniform on the ball `B(n)` of `F_r`: a length is drawn with probability
/// `|S(ℓ)| / |B(n)|`, then a uniform reduced word of that length.
pub struct FreeBall {
    pub group: FreeGroup,
    pub radius: usize,
    cumulative: Vec<u128>,
}

impl FreeBall {
    pub fn new(rank: usize, radius: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::PreconditionFailed("rank must be positive".into()));
        }
        ball_size(rank, radius).ok_or_else(|| Error::cap("free ball size", u128::MAX as u64))?;
        let mut acc = 0u128;
        let cumulative = (0..=radius)
            .map(|l| {
                acc += sphere_size(rank, l).expect("bounded by the ball");
                acc
            })
            .collect();
        Ok(FreeBall { group: FreeGroup { rank }, radius, cumulative })
    }

    pub fn size(&self) -> u128 {
        *self.cumulative.last().expect("radius ≥ 0")
    }
}

impl Sampler for FreeBall {
    type G = FreeGroup;

    fn group(&self) -> &FreeGroup {
        &self.group
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> FreeWord {
        let u = rng.gen_range(0..self.size());
        let len = self.cumulative.partition_point(|&c| c <= u);
        let r = self.group.rank as i32;
        let alphabet: Vec<i32> = (1..=r).flat_map(|g| [g, -g]).collect();
        let mut letters: Vec<i32> = Vec::with_capacity(len);
        for i in 0..len {
            let l = if i == 0 {
                alphabet[rng.gen_range(0..alphabet.len())]
            } else {
                let forbidden = -letters[i - 1];
                let c = rng.gen_range(0..alphabet.len() - 1);
                let pos = alphabet.iter().position(|&x| x == forbidden).expect("in alphabet");
                alphabet[if c >= pos { c + 1 } else { c }]
            };
            letters.push(l);
        }
        FreeWord::from_reduced(letters)
    }
}

/// A Monte Carlo frequency with its 95% Wilson interval.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct EstimateResult {
    pub point: f64,
    pub successes: u64,
    pub trials: u64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

const Z95: f64 = 1.959963984540054;

pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n);
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Runs `trials` independent Bernoulli trials, trial `t` seeded by
/// [`trial_rng`]`(seed, t)`.
pub fn estimate_with(trials: u64, seed: u64, test: impl Fn(&mut ChaCha8Rng) -> bool + Sync) -> Result<EstimateResult> {
    if trials == 0 {
        return Err(Error::PreconditionFailed("at least one trial is required".into()));
    }
    let successes: u64 = (0..trials)
        .into_par_iter()
        .map(|t| u64::from(test(&mut trial_rng(seed, t))))
        .sum();
    let (ci_low, ci_high) = wilson_interval(successes, trials);
    Ok(EstimateResult {
        point: successes as f64 / trials as f64,
        successes,
        trials,
        ci_low,
        ci_high,
        seed,
    })
}

/// Frequency of `[x_1, ..., x_{k+1}] = 1` over independent samples.
pub fn estimate_dc_k<S: Sampler>(s: &S, k: usize, trials: u64, seed: u64) -> Result<EstimateResult>
where
    <S::G as Group>::Elem: Sync,
{
    let id = s.group().identity();
    estimate_p_k(s, &id, k, trials, seed)
}

/// Frequency of `[x_1, ..., x_{k+1}] = g`.
pub fn estimate_p_k<S: Sampler>(
    s: &S,
    g: &<S::G as Group>::Elem,
    k: usize,
    trials: u64,
    seed: u64,
) -> Result<EstimateResult>
where
    <S::G as Group>::Elem: Sync,
{
    let group = s.group();
    estimate_with(trials, seed, |rng| {
        let xs: Vec<_> = (0..=k).map(|_| s.sample(rng)).collect();
        group.simple_commutator(&xs) == *g
    })
}

/// Frequency of `w(x_1, ..., x_a) = 1`.
pub fn estimate_dphi<S: Sampler>(
    s: &S,
    w: &GroupWord<<S::G as Group>::Elem>,
    trials: u64,
    seed: u64,
) -> Result<EstimateResult>
where
    <S::G as Group>::Elem: Sync + Send,
{
    let group = s.group();
    let id = group.identity();
    estimate_with(trials, seed, |rng| {
        let xs: Vec<_> = (0..w.arity()).map(|_| s.sample(rng)).collect();
        w.evaluate(group, &xs).expect("assignment has the word's arity") == id
    })
}

/// The exact law of an `n`-step walk on a finite group.
pub fn walk_distribution(g: &FiniteGroup, step: &StepDistribution<usize>, steps: usize) -> Vec<f64> {
    let mut dist = vec![0.0; g.order()];
    dist[0] = 1.0;
    for _ in 0..steps {
        let mut next = vec![0.0; g.order()];
        for (x, &p) in dist.iter().enumerate() {
            if p > 0.0 {
                for (s, w) in step.support() {
                    next[g.mul(x, *s)] += p * w;
                }
            }
        }
        dist = next;
    }
    dist
}

/// `dc^1` of the lazy Heisenberg walk after `steps` steps, computed exactly
/// (in floating point) from the law of its image in `Z²`: two elements commute
/// iff their images are parallel.
pub fn heisenberg_walk_dc(steps: usize) -> f64 {
    let n = steps as i64;
    let side = (2 * n + 1) as usize;
    let idx = |a: i64, b: i64| ((a + n) as usize) * side + (b + n) as usize;
    let mut dist = vec![0.0f64; side * side];
    dist[idx(0, 0)] = 1.0;
    for t in 0..n {
        let mut next = vec![0.0f64; side * side];
        for a in -t..=t {
            for b in -(t - a.abs())..=(t - a.abs()) {
                let p = dist[idx(a, b)];
                if p == 0.0 {
                    continue;
                }
                let q = p / 5.0;
                for (da, db) in [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)] {
                    next[idx(a + da, b + db)] += q;
                }
            }
        }
        dist = next;
    }
    let p0 = dist[idx(0, 0)];
    let mut line_mass: HashMap<(i64, i64), f64> = HashMap::new();
    for a in -n..=n {
        for b in -n..=n {
            if (a, b) == (0, 0) {
                continue;
            }
            let p = dist[idx(a, b)];
            if p == 0.0 {
                continue;
            }
            let g = num_integer::gcd(a, b);
            let (mut da, mut db) = (a / g, b / g);
            if da < 0 || (da == 0 && db < 0) {
                da = -da;
                db = -db;
            }
            *line_mass.entry((da, db)).or_default() += p;
        }
    }
    let mut lines: Vec<f64> = line_mass.into_values().collect();
    lines.sort_by(f64::total_cmp);
    // For u ≠ 0 on a line of off-origin mass m, the partner lies on that line
    // (including the origin) with probability m + p0.
    p0 + lines.iter().map(|&m| m * (m + p0)).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{corpus, Caps};
    use crate::malcev::FastMalcev;
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    #[test]
    fn zero_steps_give_identity() {
        let h = MalcevGroup::heisenberg();
        let walk = RandomWalk { group: &h, step: StepDistribution::lazy(&h, &h.top_generators()).unwrap(), steps: 0 };
        let mut rng = trial_rng(1, 0);
        for _ in 0..10 {
            assert_eq!(walk.sample(&mut rng), h.identity());
        }
    }

    #[test]
    fn step_law_validation() {
        let g = corpus::cyclic(5);
        assert!(StepDistribution::new(&g, vec![(0, 0.5), (1, 0.5)]).is_err());
        assert!(StepDistribution::new(&g, vec![(1, 0.5), (4, 0.5)]).is_err());
        let lazy = StepDistribution::lazy(&g, &[1]).unwrap();
        assert_eq!(lazy.support().len(), 3);
        assert!(lazy.support().iter().all(|(_, w)| (w - 1.0 / 3.0).abs() < 1e-15));
    }

    #[test]
    fn radius_one_ball_is_uniform_on_five() {
        let ball = FreeBall::new(2, 1).unwrap();
        assert_eq!(ball.size(), 5);
        let mut counts: HashMap<FreeWord, u64> = HashMap::new();
        let mut rng = trial_rng(2, 0);
        for _ in 0..50_000 {
            *counts.entry(ball.sample(&mut rng)).or_default() += 1;
        }
        assert_eq!(counts.len(), 5);
        assert!(counts.values().all(|&c| (c as f64 - 10_000.0).abs() < 400.0));
    }

    #[test]
    fn ball_samples_are_uniform_on_small_ball() {
        let ball = FreeBall::new(2, 3).unwrap();
        assert_eq!(ball.size(), 53);
        let mut counts: HashMap<FreeWord, u64> = HashMap::new();
        let mut rng = trial_rng(3, 0);
        let draws = 106_000u64;
        for _ in 0..draws {
            let w = ball.sample(&mut rng);
            assert!(w.len() <= 3);
            *counts.entry(w).or_default() += 1;
        }
        assert_eq!(counts.len(), 53);
        let expected = draws as f64 / 53.0;
        let chi2: f64 = counts.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        let p = 1.0 - ChiSquared::new(52.0).unwrap().cdf(chi2);
        assert!(p > 0.01, "chi-square p = {p}");
    }

    #[test]
    fn folner_box_marginals() {
        let b = FolnerBox::heisenberg(4);
        assert_eq!(b.bounds(), vec![16, 4, 4]);
        let mut rng = trial_rng(4, 0);
        let draws = 40_000;
        let mut hist: Vec<Vec<u64>> = b.bounds().iter().map(|&m| vec![0; (2 * m + 1) as usize]).collect();
        for _ in 0..draws {
            let v = b.sample(&mut rng);
            for (i, c) in v.iter().enumerate() {
                let c: i64 = c.try_into().unwrap();
                let m = b.bounds()[i];
                assert!(c.abs() <= m);
                hist[i][(c + m) as usize] += 1;
            }
        }
        for h in hist {
            let cells = h.len() as f64;
            let expected = draws as f64 / cells;
            let chi2: f64 = h.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
            let p = 1.0 - ChiSquared::new(cells - 1.0).unwrap().cdf(chi2);
            assert!(p > 0.01, "chi-square p = {p}");
        }
    }

    #[test]
    fn abelian_and_identity_targets() {
        let z = MalcevGroup::zn(2);
        let walk = RandomWalk { group: &z, step: StepDistribution::lazy(&z, &z.top_generators()).unwrap(), steps: 20 };
        let r = estimate_dc_k(&walk, 1, 500, 9).unwrap();
        assert_eq!(r.point, 1.0);

        let h = MalcevGroup::heisenberg();
        let walk = RandomWalk { group: &h, step: StepDistribution::lazy(&h, &h.top_generators()).unwrap(), steps: 10 };
        let a = estimate_dc_k(&walk, 1, 2000, 5).unwrap();
        let b = estimate_p_k(&walk, &h.identity(), 1, 2000, 5).unwrap();
        assert_eq!(a, b);
        let w = GroupWord::simple_commutator_word(&h, 1);
        assert_eq!(estimate_dphi(&walk, &w, 2000, 5).unwrap(), a);

        let centre: MalcevElement = vec![1.into(), 0.into(), 0.into()];
        let c = estimate_p_k(&walk, &centre, 1, 2000, 5).unwrap();
        assert!(c.point <= a.ci_high);
        let far: MalcevElement = vec![10_000.into(), 0.into(), 0.into()];
        assert_eq!(estimate_p_k(&walk, &far, 1, 500, 5).unwrap().successes, 0);
    }

    #[test]
    fn estimates_are_schedule_independent() {
        let ball = FreeBall::new(2, 6).unwrap();
        let a = estimate_dc_k(&ball, 1, 3000, 17).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| estimate_dc_k(&ball, 1, 3000, 17).unwrap());
        assert_eq!(a, b);
        assert!(a.ci_low <= a.point && a.point <= a.ci_high);
    }

    #[test]
    fn wilson_coverage() {
        let q = 0.3;
        let mut covered = 0;
        for rep in 0..1000u64 {
            let mut rng = trial_rng(77, rep);
            let n = 200;
            let s = (0..n).filter(|_| rng.gen::<f64>() < q).count() as u64;
            let (lo, hi) = wilson_interval(s, n);
            if lo <= q && q <= hi {
                covered += 1;
            }
        }
        assert!(covered >= 930, "coverage {covered}/1000");
        let (a, b) = wilson_interval(30, 100);
        let (c, d) = wilson_interval(300, 1000);
        assert!(d - c < b - a);
    }

    #[test]
    fn step_composition_on_quotient() {
        let h = MalcevGroup::heisenberg();
        let q = h.finite_quotient(3, &Caps::default()).unwrap();
        let gens: Vec<usize> = h.top_generators().iter().map(|v| h.quotient_index(v, 3)).collect();
        let step = StepDistribution::lazy(&q, &gens).unwrap();
        let (n, m) = (3, 4);
        let mu_n = walk_distribution(&q, &step, n);
        let mu_m = walk_distribution(&q, &step, m);
        let mut conv = vec![0.0; q.order()];
        for (x, &a) in mu_n.iter().enumerate() {
            for (y, &b) in mu_m.iter().enumerate() {
                conv[q.mul(x, y)] += a * b;
            }
        }
        let exact = walk_distribution(&q, &step, n + m);
        assert!(exact.iter().zip(&conv).all(|(a, b)| (a - b).abs() < 1e-12));
        let walk = RandomWalk { group: &q, step, steps: n + m };
        let draws = 20_000;
        let mut emp = vec![0.0; q.order()];
        let mut rng = trial_rng(8, 0);
        for _ in 0..draws {
            emp[walk.sample(&mut rng)] += 1.0 / draws as f64;
        }
        let tv: f64 = emp.iter().zip(&conv).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0;
        assert!(tv < 0.05, "total variation {tv}");
    }

    #[test]
    fn walk_measures_index_uniformly_on_g9() {
        let h = MalcevGroup::heisenberg();
        let q = h.finite_quotient(9, &Caps::default()).unwrap();
        let gens: Vec<usize> = h.top_generators().iter().map(|v| h.quotient_index(v, 9)).collect();
        let step = StepDistribution::lazy(&q, &gens).unwrap();
        let mu = walk_distribution(&q, &step, 500);
        let mut subgroups = q.normal_subgroups();
        subgroups.extend((1..q.order()).step_by(37).map(|x| q.subgroup_generated(&[x])));
        for sub in subgroups {
            let qd = q.quotient(&sub).ok();
            let index = q.order() / sub.order();
            let mut mass: HashMap<Vec<usize>, f64> = HashMap::new();
            for (x, &p) in mu.iter().enumerate() {
                let mut coset: Vec<usize> = sub.members().iter().map(|&s| q.mul(x, s)).collect();
                coset.sort_unstable();
                *mass.entry(coset).or_default() += p;
            }
            assert_eq!(mass.len(), index);
            for m in mass.values() {
                assert!((m - 1.0 / index as f64).abs() < 0.02, "index {index}: {m}");
            }
            let _ = qd;
        }
    }

    #[test]
    fn heisenberg_oracle_matches_sampling() {
        let exact = heisenberg_walk_dc(30);
        let h = MalcevGroup::heisenberg();
        let fast = h.fast().unwrap();
        let gens: Vec<Vec<i128>> = h.top_generators().iter().map(|v| v.iter().map(|c| i128::try_from(c).unwrap()).collect()).collect();
        let walk = RandomWalk { group: &fast, step: StepDistribution::lazy(&fast, &gens).unwrap(), steps: 30 };
        let r = estimate_dc_k(&walk, 1, 20_000, 42).unwrap();
        assert!(r.ci_low <= exact && exact <= r.ci_high, "{exact} vs {r:?}");
        assert_eq!(FastMalcev::to_big(&[1, -2]), vec![BigInt::from(1), BigInt::from(-2)]);
    }
}
