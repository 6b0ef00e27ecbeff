//! Tau-cost descent: contract blocks until every remaining trace entry is
//! stable, strictly shrinking the cost at every step.
//!
//!     cargo run --example cost_descent

use purepair::frac::frac;
use purepair::graph::Graph;
use purepair::pipeline::{block_partition, cost_descent, tau_cost, PhaseBudgets};

fn main() {
    let host = Graph::gnp(24, 0.45, 5);
    let b = block_partition(&host, 6).unwrap();
    let (kappa, tau) = (frac(1, 2), 3);

    let before = tau_cost(&host, &b, tau).unwrap();
    println!("start: length {}, width {}, tau-cost {}", b.length(), b.width(), before);

    let out = cost_descent(&host, &b, kappa, tau, &PhaseBudgets::default(), 0).unwrap();
    for (i, s) in out.steps.iter().enumerate() {
        println!(
            "step {}: killed {:?} on {:?}, cost {} -> {}, width {} -> {}",
            i + 1,
            s.tree.canonical_code(),
            s.support,
            s.cost_before,
            s.cost_after,
            s.width_before,
            s.width_after
        );
    }
    println!(
        "done: cost {} -> {}, width {}, invariance {:?}",
        out.initial_cost,
        out.final_cost,
        out.blockade.width(),
        out.verified
    );

    // costs never go up, widths shrink by at most the kappa factor per step
    assert!(out.final_cost <= out.initial_cost);
    for s in &out.steps {
        assert!(s.cost_after < s.cost_before);
    }
}
