//! Blockades: indexed disjoint blocks with trace, uniformity and
//! invariance checks over small ordered trees.
//!
//!     cargo run --example blockade_calculus

use purepair::bits::VertexSet;
use purepair::blockade::Blockade;
use purepair::graph::Graph;
use purepair::io::blockade_to_json;
use purepair::rainbow::{
    is_support_invariant, is_support_uniform, trace, InvarianceMode, InvarianceVerdict,
    UniformityVerdict,
};
use purepair::trees::OrderedTree;

fn main() {
    // complete multipartite on 6 blocks of 3: every cross pair is an edge,
    // so every trace is complete and every check passes
    let (host, b) = multipartite_blockade(6, 3);
    println!("blockade: length {}, width {}", b.length(), b.width());

    let p2 = OrderedTree::path(2);
    let tr = trace(&host, &b, &p2);
    println!("edge trace has {} supports (all {} pairs)", tr.len(), 6 * 5 / 2);

    match is_support_uniform(&host, &b, 3).unwrap() {
        UniformityVerdict::Uniform => println!("support-uniform up to tau = 3"),
        UniformityVerdict::Witness(w) => {
            println!("not uniform: {:?} present, {:?} absent", w.present, w.absent)
        }
    }

    let kappa = purepair::frac::frac(1, 2);
    let mode = InvarianceMode::Exhaustive { max_combos: 1 << 16 };
    match is_support_invariant(&host, &b, kappa, 3, &mode).unwrap() {
        InvarianceVerdict::Invariant => println!("support-invariant at kappa = 1/2"),
        other => println!("invariance: {:?}", other),
    }

    // structural ops reindex from 1 and keep blocks disjoint
    let sub = b.sub_blockade(&[1, 3, 5]).unwrap();
    println!("sub-blockade [1,3,5] -> indices {:?}", sub.indices());
    let grouped = b.interval_group(2).unwrap();
    println!("grouping by 2 -> length {}, width {}", grouped.length(), grouped.width());
    let rev = b.reverse();
    println!("reverse keeps width {}", rev.width());

    println!("--- file form ---\n{}", blockade_to_json(&host, &sub));
}

fn multipartite_blockade(k: usize, size: usize) -> (Graph, Blockade) {
    let n = k * size;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if u / size != v / size {
                edges.push((u, v));
            }
        }
    }
    let host = Graph::from_edges(n, &edges).unwrap();
    let blocks = (0..k)
        .map(|i| VertexSet::from_iter(n, (i * size)..((i + 1) * size)))
        .collect();
    let b = Blockade::new(&host, blocks).unwrap();
    (host, b)
}
