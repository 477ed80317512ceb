//! The acceptance suite: ten criteria with fixed seeds and pinned tolerances.
//! Each criterion reports pass or fail with a one-line detail.

use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gallagher::{check_main_identity, gallagher_report};
use crate::genericity::genericity_sweep;
use crate::group::{corpus, Caps, FiniteGroup, Subgroup};
use crate::malcev::{root_density, IntPolynomial, MalcevGroup};
use crate::nildegree::{converse_bound, dc_k_exact, gap_bound, is_k_step_nilpotent, rational, to_f64};
use crate::pgroups::{GkGroup, GkSpec};
use crate::sampling::{estimate_dc_k, heisenberg_walk_dc, trial_rng, RandomWalk, StepDistribution};

const ROOT_DENSITY_GOLDEN: &str = include_str!("../golden/root_density.json");
const CONVERGENCE_GOLDEN: &str = include_str!("../golden/convergence_pilot.json");
const GENERICITY_GOLDEN: &str = include_str!("../golden/genericity_threshold.json");

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
    #[serde(skip)]
    pub budget: Duration,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "{} {:>2} {:<28} {:>8.2}s/{:<4}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs(),
            self.detail
        )
    }
}

struct Criterion {
    id: u32,
    name: &'static str,
    key: &'static str,
    budget_secs: u64,
    run: fn() -> Result<(bool, String)>,
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, name: "exact dc values", key: "dc", budget_secs: 1, run: exact_dc },
    Criterion { id: 2, name: "gap theorem", key: "gap", budget_secs: 120, run: gap },
    Criterion { id: 3, name: "submultiplicativity", key: "submult", budget_secs: 300, run: submultiplicativity },
    Criterion { id: 4, name: "gamma machinery", key: "gallagher", budget_secs: 300, run: gamma_machinery },
    Criterion { id: 5, name: "p-group constructions", key: "pgroup", budget_secs: 300, run: pgroup_constructions },
    Criterion { id: 6, name: "malcev quotients", key: "malcev", budget_secs: 60, run: malcev_quotients },
    Criterion { id: 7, name: "root density", key: "rootdensity", budget_secs: 120, run: root_densities },
    Criterion { id: 8, name: "walk convergence", key: "convergence", budget_secs: 180, run: convergence },
    Criterion { id: 9, name: "free genericity", key: "generic", budget_secs: 120, run: genericity },
    Criterion { id: 10, name: "converse bound", key: "converse", budget_secs: 60, run: converse },
];

/// Names accepted by [`run`]'s filter, in criterion order.
pub fn criterion_keys() -> Vec<&'static str> {
    CRITERIA.iter().map(|c| c.key).collect()
}

/// Runs the criteria selected by `only` (ids or keys; all when empty). A
/// criterion that errors or exceeds its time budget fails.
pub fn run(only: &[String]) -> Result<Vec<CriterionResult>> {
    for sel in only {
        if !CRITERIA.iter().any(|c| c.key == sel || c.id.to_string() == *sel) {
            return Err(Error::PreconditionFailed(format!(
                "unknown criterion `{sel}`; expected one of {}",
                criterion_keys().join(", ")
            )));
        }
    }
    Ok(CRITERIA
        .iter()
        .filter(|c| only.is_empty() || only.iter().any(|s| c.key == s || c.id.to_string() == *s))
        .map(|c| run_one(c, |_| {}))
        .collect())
}

/// As [`run`] for every criterion, calling `report` as each one finishes.
pub fn run_all_with(mut report: impl FnMut(&CriterionResult)) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|c| run_one(c, &mut report)).collect()
}

fn run_one(c: &Criterion, mut report: impl FnMut(&CriterionResult)) -> CriterionResult {
    let start = Instant::now();
    let outcome = (c.run)();
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(c.budget_secs);
    let (mut passed, mut detail) = match outcome {
        Ok(pair) => pair,
        Err(e) => (false, format!("error: {e}")),
    };
    if elapsed > budget {
        passed = false;
        detail = format!("over time budget; {detail}");
    }
    let r = CriterionResult { id: c.id, name: c.name, passed, detail, elapsed, budget };
    report(&r);
    r
}

fn show(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `dc^k` by enumerating every `(k+1)`-tuple, independent of the DP.
pub fn brute_force_dc(g: &FiniteGroup, k: usize) -> BigRational {
    let n = g.order();
    let total = (n as u64).pow(k as u32 + 1);
    let mut hits = 0u64;
    let mut xs = vec![0usize; k + 1];
    for code in 0..total {
        let mut c = code;
        for x in xs.iter_mut() {
            *x = (c % n as u64) as usize;
            c /= n as u64;
        }
        if xs[1..].iter().fold(xs[0], |acc, &y| g.comm(acc, y)) == 0 {
            hits += 1;
        }
    }
    rational(hits, total)
}

fn exact_dc() -> Result<(bool, String)> {
    let d8 = corpus::dihedral(8);
    let cases = [
        ("sym3", corpus::symmetric(3), rational(1u32, 2u32)),
        ("dih8", d8.clone(), rational(5u32, 8u32)),
        ("dih8xdih8", d8.direct_product(&d8), rational(25u32, 64u32)),
        ("sym4", corpus::symmetric(4), rational(5u32, 24u32)),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, g, expected) in cases {
        let dp = dc_k_exact(&g, 1);
        let bf = brute_force_dc(&g, 1);
        ok &= dp == expected && bf == expected;
        parts.push(format!("{name}={}", show(&dp)));
    }
    Ok((ok, parts.join(" ")))
}

fn gap() -> Result<(bool, String)> {
    let mut checked = 0;
    for (name, g) in corpus::standard(729) {
        for k in 1..=3 {
            if is_k_step_nilpotent(&g, k) {
                continue;
            }
            let dc = dc_k_exact(&g, k);
            if dc > gap_bound(k) {
                return Ok((false, format!("{name}, k = {k}: {} > {}", show(&dc), show(&gap_bound(k)))));
            }
            checked += 1;
        }
    }
    Ok((checked > 0, format!("{checked} (group, k) pairs below (2^(k+2)-3)/2^(k+2)")))
}

fn submultiplicativity() -> Result<(bool, String)> {
    let mut checked = 0;
    for (name, g) in corpus::standard(243) {
        for n in g.normal_subgroups() {
            for k in 1..=2 {
                let s = crate::gallagher::verify_submultiplicativity(&g, &n, k)?;
                if !s.ok {
                    return Ok((
                        false,
                        format!("{name}, |N| = {}, k = {k}: {} > {}", n.order(), show(&s.lhs), show(&s.rhs)),
                    ));
                }
                checked += 1;
            }
        }
    }
    Ok((true, format!("{checked} (G, N, k) triples")))
}

fn gamma_machinery() -> Result<(bool, String)> {
    let s4 = corpus::symmetric(4);
    let v4 = s4.normal_subgroups().into_iter().find(|s| s.order() == 4).expect("V4 is normal in S4");
    let d8 = corpus::dihedral(8);
    let z = d8.center();
    let caps = Caps::default();
    let mut audits = 0;
    for (name, g, n) in [("sym4/v4", &s4, &v4), ("dih8/z", &d8, &z)] {
        let mut rng = trial_rng(4, 0);
        let order = g.order();
        for _ in 0..1000 {
            use rand::Rng;
            let (a, y, h, n3) = (rng.gen_range(0..order), rng.gen_range(0..order), rng.gen_range(0..order), rng.gen_range(0..order));
            if !check_main_identity(g, a, y, h, &[n3]) {
                return Ok((false, format!("{name}: main identity fails at z={a}, y={y}, g={h}, n3={n3}")));
            }
        }
        let report = gallagher_report(g, n, 2, &caps)?;
        if !report.ok() {
            let bad = report.audits.iter().find(|a| !a.ok());
            return Ok((false, format!("{name}: {:?}", bad.map(|a| (a.g, a.x, &a.failure)))));
        }
        audits += report.audits.len();
    }
    Ok((true, format!("{audits} (g, xN) audits, 2000 identity samples")))
}

fn pgroup_constructions() -> Result<(bool, String)> {
    let caps = Caps::default();
    let mut parts = Vec::new();
    for (p, k, n) in [(3u64, 1usize, 1usize), (5, 1, 1), (3, 1, 2), (3, 2, 1)] {
        let g = GkGroup::new(GkSpec::new(p, k, n, 1, 1)?, &caps)?;
        let label = format!("G_{k}({n}) p={p}");
        let series = g.verify_series();
        if !series.ok || series.centre_order != p as usize || series.class != Some(k + 1) {
            return Ok((false, format!("{label}: {:?}", series.witness)));
        }
        let sharp = g.sharp_subgroup()?;
        let index = g.group.order() / sharp.order();
        if index != (p as usize).pow(n as u32) || !g.group.is_nilpotent_of_class_at_most(&sharp, k) {
            return Ok((false, format!("{label}: sharp subgroup of index {index}")));
        }
        if n == 2 {
            let rep = g.no_small_nilpotent_subgroups()?;
            if !rep.ok {
                return Ok((false, format!("{label}: {:?}", rep.witness)));
            }
        }
        parts.push(format!("{label} |G|={}", g.group.order()));
    }
    Ok((true, parts.join(", ")))
}

fn malcev_quotients() -> Result<(bool, String)> {
    let h = MalcevGroup::heisenberg();
    if h.n0 != 2 {
        return Ok((false, format!("n0 = {}", h.n0)));
    }
    if !matches!(h.finite_quotient(2, &Caps::default()), Err(Error::NotCoprime { .. })) {
        return Ok((false, "finite_quotient(2) did not raise NotCoprime".into()));
    }
    for n in [3u64, 5, 7] {
        let q = h.finite_quotient(n, &Caps::default())?;
        let n = n as usize;
        if q.order() != n.pow(3) {
            return Ok((false, format!("|G({n})| = {}", q.order())));
        }
        // 1 < γ_2 = Z < G with G/Z ≅ C_n² and Z ≅ C_n: all chief factors are C_n.
        let cs = q.central_series();
        let lower: Vec<usize> = cs.lower.iter().map(Subgroup::order).collect();
        let z = q.center();
        let exponent_n = (0..q.order()).all(|x| n % q.element_order(x) == 0);
        let z_cyclic = z.members().iter().any(|&x| q.element_order(x) == n);
        if lower != [n.pow(3), n, 1] || z.order() != n || !exponent_n || !z_cyclic {
            return Ok((false, format!("G({n}) lower central orders {lower:?}, |Z| = {}", z.order())));
        }
    }
    let g3 = h.finite_quotient(3, &Caps::default())?;
    let dp = dc_k_exact(&g3, 1);
    let bf = brute_force_dc(&g3, 1);
    let ok = dp == rational(11u32, 27u32) && bf == dp;
    Ok((ok, format!("n0 = 2, |G(n)| = n^3, dc(G(3)) = {}", show(&dp))))
}

#[derive(Deserialize)]
struct GoldenFraction {
    n: u64,
    num: String,
    den: String,
}

impl GoldenFraction {
    fn value(&self) -> BigRational {
        BigRational::new(self.num.parse().expect("golden numerator"), self.den.parse().expect("golden denominator"))
    }
}

#[derive(Deserialize)]
struct RootGolden {
    polynomial: String,
    densities: Vec<GoldenFraction>,
}

fn root_densities() -> Result<(bool, String)> {
    let golden: RootGolden = serde_json::from_str(ROOT_DENSITY_GOLDEN).expect("root density golden file");
    let h = MalcevGroup::heisenberg();
    let caps = Caps::default();
    let names = ["v1", "v2", "v3", "w1", "w2", "w3"];
    let x1 = IntPolynomial::var(6, 0);
    let comm = IntPolynomial::parse(&golden.polynomial, &names)?;
    let mut prev: Option<BigRational> = None;
    let mut last = BigRational::zero();
    for entry in &golden.densities {
        let n = entry.n;
        if root_density(&h, &x1, n, &caps)? != rational(1u32, n) {
            return Ok((false, format!("density of v1 mod {n} is not 1/{n}")));
        }
        let d = root_density(&h, &comm, n, &caps)?;
        if d != entry.value() {
            return Ok((false, format!("mod {n}: {} but golden {}/{}", show(&d), entry.num, entry.den)));
        }
        if prev.as_ref().is_some_and(|p| d >= *p) {
            return Ok((false, format!("not strictly decreasing at {n}")));
        }
        prev = Some(d.clone());
        last = d;
    }
    let ok = last < rational(1u32, 2u32);
    Ok((ok, format!("x1 -> 1/n; commutation density at 13 = {}", show(&last))))
}

#[derive(Deserialize)]
struct ConvergenceGolden {
    steps: usize,
    walk_dc1: f64,
    walk_dc1_tolerance: f64,
    quotient_dc1: Vec<GoldenFraction>,
}

fn convergence() -> Result<(bool, String)> {
    let golden: ConvergenceGolden = serde_json::from_str(CONVERGENCE_GOLDEN).expect("convergence golden file");
    let exact = heisenberg_walk_dc(golden.steps);
    if (exact - golden.walk_dc1).abs() > golden.walk_dc1_tolerance {
        return Ok((false, format!("walk oracle {exact} differs from golden {}", golden.walk_dc1)));
    }
    let h = MalcevGroup::heisenberg();
    let fast = h.fast().expect("Heisenberg fits in i128 arithmetic");
    let gens: Vec<Vec<i128>> = h
        .top_generators()
        .iter()
        .map(|v| v.iter().map(|c| i128::try_from(c).expect("unit vector")).collect())
        .collect();
    let walk = RandomWalk { group: &fast, step: StepDistribution::lazy(&fast, &gens)?, steps: golden.steps };
    let est = estimate_dc_k(&walk, 1, 100_000, 42)?;
    if !(est.ci_low <= exact && exact <= est.ci_high) {
        return Ok((false, format!("estimate {:.5} [{:.5}, {:.5}] misses exact {exact:.5}", est.point, est.ci_low, est.ci_high)));
    }
    // Finite quotients bound the limit from above and decrease along 3 | 9.
    let mut bounds = Vec::new();
    for q in &golden.quotient_dc1 {
        let value = dc_k_exact(&h.finite_quotient(q.n, &Caps::default())?, 1);
        if value != q.value() {
            return Ok((false, format!("dc(G({})) = {}", q.n, show(&value))));
        }
        bounds.push(value);
    }
    let decreasing = bounds.windows(2).all(|w| w[1] < w[0]);
    let below = bounds.last().is_some_and(|b| est.ci_high < to_f64(b));
    Ok((
        decreasing && below,
        format!(
            "estimate {:.5} [{:.5}, {:.5}] contains exact {exact:.5}; below dc(G(9)) = {:.5}",
            est.point,
            est.ci_low,
            est.ci_high,
            bounds.last().map(to_f64).unwrap_or(f64::NAN)
        ),
    ))
}

#[derive(Deserialize)]
struct GenericityGolden {
    rank: usize,
    radii: Vec<usize>,
    trials: u64,
    seed: u64,
    threshold: f64,
}

fn genericity() -> Result<(bool, String)> {
    let golden: GenericityGolden = serde_json::from_str(GENERICITY_GOLDEN).expect("genericity golden file");
    let sweep = genericity_sweep(golden.rank, &golden.radii, golden.trials, golden.seed)?;
    if let Some(r) = sweep.iter().find(|r| r.delzant_count > r.basis_count) {
        return Ok((false, format!("radius {}: delzant {} > basis {}", r.radius, r.delzant_count, r.basis_count)));
    }
    let monotone = sweep.windows(2).all(|w| w[1].basis_count >= w[0].basis_count);
    let last = sweep.last().map(|r| r.basis_frac).unwrap_or(0.0);
    let fracs: Vec<String> = sweep.iter().map(|r| format!("{}:{:.4}", r.radius, r.basis_frac)).collect();
    Ok((
        monotone && last >= golden.threshold,
        format!("basis fractions {} (threshold {})", fracs.join(" "), golden.threshold),
    ))
}

fn converse() -> Result<(bool, String)> {
    let triples = corpus::converse_triples();
    for t in &triples {
        let m = t.group.order() / t.gamma.order();
        let d = t.h.order();
        let dc = dc_k_exact(&t.group, t.k);
        let bound = converse_bound(m, d, t.k);
        if dc < bound {
            return Ok((false, format!("{}: {} < {}", t.name, show(&dc), show(&bound))));
        }
    }
    Ok((true, format!("{} corpus triples", triples.len())))
}
