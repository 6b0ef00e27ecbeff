//! Induced forest search with independent re-verification.
//!
//!     cargo run --example find_patterns

use purepair::certify::{find_induced_forest, verify_induced_embedding};
use purepair::graph::Graph;
use purepair::trees::build_t;

fn main() {
    let g = Graph::gnp(16, 0.3, 3);

    for (name, f) in [
        ("P4", Graph::path(4)),
        ("claw", Graph::star(3)),
        ("chair", Graph::chair()),
        ("T(2,2)", build_t(2, 2).unwrap().to_graph()),
    ] {
        match find_induced_forest(&g, &f).unwrap() {
            Some(image) => {
                verify_induced_embedding(&g, &f, &image).unwrap();
                println!("{:7} found at {:?}", name, image);
            }
            None => println!("{:7} no induced copy", name),
        }
    }

    // a clique contains no induced path on 3 or more vertices
    let k6 = Graph::complete(6);
    assert!(find_induced_forest(&k6, &Graph::path(3)).unwrap().is_none());
    println!("K6 has no induced P3, as it must");
}
