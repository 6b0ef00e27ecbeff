//! Graph models and the two text encodings.
//!
//!     cargo run --example generate_and_encode

use purepair::graph::Graph;
use purepair::io::{from_edge_list, from_graph6, to_edge_list, to_graph6};

fn main() {
    let g = Graph::gnp(12, 0.35, 7);
    println!("G(12, 0.35) seed 7: {} edges, graph6 {}", g.edge_count(), to_graph6(&g));

    // both encodings round-trip bit-exactly
    let back = from_graph6(&to_graph6(&g)).unwrap();
    assert_eq!(back, g);
    let back = from_edge_list(&to_edge_list(&g)).unwrap();
    assert_eq!(back, g);

    let (v, d) = g.max_degree().unwrap();
    println!("max degree {} at vertex {}", d, v);
    println!("complement has {} edges", g.complement().edge_count());

    for (name, h) in [
        ("path", Graph::path(6)),
        ("cycle", Graph::cycle(6)),
        ("star", Graph::star(5)),
        ("complete", Graph::complete(6)),
    ] {
        println!("{:9} on 6 vertices: {}", name, to_graph6(&h));
    }

    // the same seed always gives the same graph
    assert_eq!(to_graph6(&Graph::gnp(12, 0.35, 7)), to_graph6(&g));
}
