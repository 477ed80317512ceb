use rayon::prelude::*;
use serde::Serialize;

use super::{delzant_condition, stallings_rank, FreeWord};
use crate::error::Result;
use crate::sampling::{trial_rng, wilson_interval, FreeBall, Sampler};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenericityResult {
    pub rank: usize,
    pub radius: usize,
    pub trials: u64,
    pub seed: u64,
    pub delzant_count: u64,
    pub basis_count: u64,
    pub delzant_frac: f64,
    pub basis_frac: f64,
    pub basis_ci: (f64, f64),
}

/// Samples `trials` tuples from `B(n)^r` and counts those passing the Delzant
/// condition with `D0 = 1` and those that are free bases.
pub fn genericity_experiment(rank: usize, radius: usize, trials: u64, seed: u64) -> Result<GenericityResult> {
    let ball = FreeBall::new(rank, radius)?;
    let (delzant_count, basis_count) = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let tuple: Vec<FreeWord> = (0..rank).map(|_| ball.sample(&mut rng)).collect();
            let basis = stallings_rank(&tuple) == rank;
            let delzant = delzant_condition(&tuple, 1);
            assert!(!delzant || basis, "Delzant condition passed on a non-basis {tuple:?}");
            (u64::from(delzant), u64::from(basis))
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let n = trials.max(1) as f64;
    Ok(GenericityResult {
        rank,
        radius,
        trials,
        seed,
        delzant_count,
        basis_count,
        delzant_frac: delzant_count as f64 / n,
        basis_frac: basis_count as f64 / n,
        basis_ci: if trials > 0 { wilson_interval(basis_count, trials) } else { (0.0, 1.0) },
    })
}

/// One experiment per radius, all with the same seed.
pub fn genericity_sweep(rank: usize, radii: &[usize], trials: u64, seed: u64) -> Result<Vec<GenericityResult>> {
    radii.iter().map(|&n| genericity_experiment(rank, n, trials, seed)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_radius_one() {
        // B(1) in F_1 is {1, a, A}.
        let r = genericity_experiment(1, 1, 20_000, 1).unwrap();
        assert!((r.basis_frac - 2.0 / 3.0).abs() < 0.015, "{r:?}");
        assert_eq!(r.delzant_count, r.basis_count);
    }

    #[test]
    fn duplicates_are_not_bases() {
        let g = FreeWord::parse(2, "abA").unwrap();
        assert_eq!(stallings_rank(&[g.clone(), g.clone()]), 1);
        assert!(!delzant_condition(&[g.clone(), g], 1));
    }

    #[test]
    fn small_sweep_is_sound() {
        let rs = genericity_sweep(2, &[2, 4, 8], 2000, 3).unwrap();
        for r in &rs {
            assert!(r.delzant_count <= r.basis_count);
        }
        assert!(rs[2].basis_frac > rs[0].basis_frac);
    }
}
