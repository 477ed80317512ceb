//! Exact degrees of k-step nilpotence over the built-in corpus, next to the
//! gap bound every non-k-step-nilpotent group must respect.

use nilprob::group::corpus;
use nilprob::nildegree::{dc_k_exact, gap_bound, is_k_step_nilpotent, to_f64};

fn main() {
    println!("{:<22} {:>6}  {:>12} {:>12} {:>12}", "group", "order", "dc^1", "dc^2", "dc^3");
    for (name, g) in corpus::standard(243) {
        let cells: Vec<String> = (1..=3)
            .map(|k| {
                let dc = dc_k_exact(&g, k);
                let mark = if is_k_step_nilpotent(&g, k) { "" } else { "*" };
                format!("{}/{}{mark}", dc.numer(), dc.denom())
            })
            .collect();
        println!("{name:<22} {:>6}  {:>12} {:>12} {:>12}", g.order(), cells[0], cells[1], cells[2]);
    }
    println!();
    for k in 1..=3 {
        let b = gap_bound(k);
        println!("gap bound k = {k}: {}/{} = {:.4} (applies to entries marked *)", b.numer(), b.denom(), to_f64(&b));
    }
}
