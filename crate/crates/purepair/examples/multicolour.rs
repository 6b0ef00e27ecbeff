//! Multicolour satisfaction: split the edges of K_n into colour classes at
//! random and check whether some class holds an induced pattern copy or an
//! anticomplete pair at the eps threshold.
//!
//!     cargo run --example multicolour

use purepair::frac::frac;
use purepair::harness::{multicolour_experiment, pattern_graph};

fn main() {
    let h = pattern_graph("P4").unwrap();
    let grid = [frac(1, 12), frac(1, 6), frac(1, 3)];

    // k = 1 puts all of K_12 in one class: complete, so no induced P4 and
    // no anticomplete pair, rate 0. Splitting creates both.
    for k in [1, 2, 3] {
        let records = multicolour_experiment(k, &h, 12, &grid, 20, 7).unwrap();
        for r in &records {
            println!("k = {}  eps = {:4}  satisfied {}", k, r.eps, r.aggregate);
        }
    }

    // an edge, by contrast, is induced in any clique
    let one = multicolour_experiment(1, &pattern_graph("edge").unwrap(), 12, &[frac(1, 12)], 10, 0)
        .unwrap();
    assert_eq!(one[0].aggregate, "1");
}
