//! Γ-graph audit for Sym(4) over its Klein four subgroup: periods, level
//! histograms and every check, for each g and each coset xN.

use nilprob::gallagher::gallagher_report;
use nilprob::group::{corpus, Caps};

fn main() -> nilprob::Result<()> {
    let g = corpus::symmetric(4);
    let n = g.normal_subgroups().into_iter().find(|s| s.order() == 4).expect("V4");
    for k in 1..=2 {
        let rep = gallagher_report(&g, &n, k, &Caps::default())?;
        let s = &rep.submultiplicativity;
        println!(
            "k = {k}: dc(G) = {} <= dc(N) dc(G/N) = {} * {} = {}  [{}]",
            s.lhs, s.dc_n, s.dc_quotient, s.rhs,
            if s.ok { "ok" } else { "FAILS" }
        );
        println!("  coset bound: max f_k over coset tuples {} <= f_k(N,...,N) = {}", rep.coset_bound.max, rep.coset_bound.bound);
        for a in rep.audits.iter().filter(|a| a.g != 0 && a.edges > 0).take(4) {
            println!(
                "  g = {:<10} x = {:<10} o = {} |V| = {:<3} |E| = {:<3} periods {:?}",
                g.label(a.g), g.label(a.x), a.o, a.vertices, a.edges, a.periods
            );
            for h in a.histograms.iter().take(1) {
                println!("    level histogram r = {:?}, h = {:?}", h.r, h.h);
            }
        }
        println!("  {} audits, all passed: {}", rep.audits.len(), rep.ok());
    }
    Ok(())
}
