//! Rainbow tree copies: one vertex per block, strictly increasing indices,
//! induced adjacency, optional side and support constraints.
//!
//!     cargo run --example rainbow_copies

use purepair::bits::VertexSet;
use purepair::blockade::Blockade;
use purepair::graph::Graph;
use purepair::rainbow::{
    find_directed_rainbow, find_rainbow_copy, find_rainbow_unordered, verify_rooted,
    verify_unordered, DirectedOpts, Side,
};
use purepair::trees::{build_t, OrderedTree};

fn main() {
    let host = Graph::gnp(24, 0.4, 11);
    let blocks: Vec<VertexSet> =
        (0..6).map(|i| VertexSet::from_iter(24, (4 * i)..(4 * i + 4))).collect();
    let b = Blockade::new(&host, blocks).unwrap();

    let t = build_t(2, 1).unwrap();
    let pattern = t.to_graph();
    match find_rainbow_unordered(&host, &b, &pattern) {
        Some(emb) => {
            verify_unordered(&host, &b, &pattern, &emb).unwrap();
            println!("T(2,1) at vertices {:?} in blocks {:?}", emb.vertices, emb.blocks);
        }
        None => println!("no rainbow T(2,1) here"),
    }

    // ordered search pinned to a support: exactly these blocks, label k in
    // the k-th smallest
    let p3 = OrderedTree::path(3);
    for support in [vec![1, 2, 3], vec![2, 4, 6], vec![1, 3, 6]] {
        let hit = find_rainbow_copy(&host, &b, &p3, Some(&support));
        println!("P3 on support {:?}: {}", support, if hit.is_some() { "yes" } else { "no" });
    }

    // directed search: root forced into the lowest (Left) or highest
    // (Right) block the copy uses
    for side in [Side::Left, Side::Right] {
        if let Some(emb) = find_directed_rainbow(&host, &b, &t, side, &DirectedOpts::default()) {
            verify_rooted(&host, &b, &t, Some(side), &emb).unwrap();
            println!(
                "{:?}-rainbow T(2,1): root {} in block {}",
                side, emb.vertices[0], emb.blocks[0]
            );
        } else {
            println!("{:?}-rainbow T(2,1): none", side);
        }
    }
}
