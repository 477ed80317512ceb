//! The p-groups G_k(n): class k + 1, centre of order p, and no k-step
//! nilpotent subgroup of index below p^n.

use nilprob::group::Caps;
use nilprob::nildegree::dc_k_exact;
use nilprob::pgroups::{GkGroup, GkSpec};

fn main() -> nilprob::Result<()> {
    for (p, k, n) in [(3, 1, 1), (5, 1, 1), (3, 1, 2), (3, 2, 1)] {
        let g = GkGroup::new(GkSpec::new(p, k, n, 1, 1)?, &Caps::default())?;
        let series = g.verify_series();
        let sharp = g.sharp_subgroup()?;
        println!(
            "G_{k}({n}) over F_{p}: |G| = {}, class {:?}, |Z| = {}, lower central {:?}",
            g.group.order(), series.class, series.centre_order, series.lower_orders
        );
        println!(
            "  sharp subgroup index {}, quasi-corank {}, dc^{k} = {}",
            g.group.order() / sharp.order(),
            g.quasi_corank(&sharp),
            dc_k_exact(&g.group, k)
        );
        if n == 2 {
            let rep = g.no_small_nilpotent_subgroups()?;
            println!("  {} maximal subgroups, none {k}-step nilpotent: {}", rep.maximal_subgroups, rep.ok);
        }
    }
    Ok(())
}
