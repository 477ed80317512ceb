//! dc^1 of the lazy random walk on the Heisenberg group: exact values from
//! the walk's image in Z^2 against Monte Carlo estimates, with the finite
//! quotient values as upper bounds.

use nilprob::group::Caps;
use nilprob::malcev::MalcevGroup;
use nilprob::nildegree::{dc_k_exact, to_f64};
use nilprob::sampling::{estimate_dc_k, heisenberg_walk_dc, FolnerBox, RandomWalk, StepDistribution};

fn main() -> nilprob::Result<()> {
    let h = MalcevGroup::heisenberg();
    let fast = h.fast().expect("i128 arithmetic");
    let gens: Vec<Vec<i128>> = h
        .top_generators()
        .iter()
        .map(|v| v.iter().map(|c| i128::try_from(c).unwrap()).collect())
        .collect();
    println!("{:>6} {:>10} {:>10}  {:>21}", "steps", "exact", "estimate", "95% interval");
    for steps in [10, 25, 50, 100, 200] {
        let walk = RandomWalk { group: &fast, step: StepDistribution::lazy(&fast, &gens)?, steps };
        let est = estimate_dc_k(&walk, 1, 50_000, 42)?;
        println!(
            "{steps:>6} {:>10.5} {:>10.5}  [{:.5}, {:.5}]",
            heisenberg_walk_dc(steps), est.point, est.ci_low, est.ci_high
        );
    }
    for n in [3, 9, 27] {
        let q = h.finite_quotient(n, &Caps::default())?;
        println!("dc(G({n})) = {:.5}", to_f64(&dc_k_exact(&q, 1)));
    }
    for side in [4, 16, 64] {
        let est = estimate_dc_k(&FolnerBox::heisenberg(side), 1, 50_000, 42)?;
        println!("Følner box side {side:>3}: {:.5} [{:.5}, {:.5}]", est.point, est.ci_low, est.ci_high);
    }
    Ok(())
}
