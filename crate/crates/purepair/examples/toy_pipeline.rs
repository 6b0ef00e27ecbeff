//! The full staged run at desk-scale constants: fallback search, minor
//! extraction, concavity production, anchored escalation. Every phase
//! appends a record; the outcome is an embedding or a named diagnostic.
//!
//!     cargo run --example toy_pipeline

use purepair::frac::frac;
use purepair::graph::Graph;
use purepair::pipeline::{block_partition, rainbow_pipeline, PipelineParams};
use purepair::trees::build_t;

fn main() {
    let host = Graph::gnp(36, 0.5, 2);
    let b = block_partition(&host, 9).unwrap();
    let target = build_t(2, 1).unwrap();

    let params = PipelineParams::toy(2, 1, frac(1, 36), 2)
        .unwrap()
        .with_lambda(frac(1, 2))
        .with_kappa(frac(1, 4))
        .with_tau(3)
        .with_r_group(1)
        .with_k_final(9);

    let report = rainbow_pipeline(&host, &b, &target, &params);
    print!("{}", report.to_json_lines());

    if report.succeeded() {
        println!("-> embedded");
    } else {
        println!("-> stopped with a diagnostic, phase log above");
    }
}
