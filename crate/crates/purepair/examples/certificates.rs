//! The trichotomy certifier: every (graph, forest, eps) yields an induced
//! copy, a high-degree vertex, or a big anticomplete pair, and each
//! certificate re-verifies against the graph it came from.
//!
//!     cargo run --example certificates

use purepair::certify::{
    certify_trichotomy, is_epsilon_coherent, CoherenceConfig, CoherenceVerdict, TrichotomyConfig,
};
use purepair::frac::frac;
use purepair::graph::Graph;

fn main() {
    let f = Graph::path(4);
    let eps = frac(1, 5);
    let cfg = TrichotomyConfig::default();

    let hosts = [
        ("dense gnp", Graph::gnp(18, 0.7, 1)),
        ("star", Graph::star(17)),
        ("long cycle", Graph::cycle(18)),
        ("6 triangles", triangles(6)),
    ];
    for (name, g) in &hosts {
        let cert = certify_trichotomy(g, &f, eps, &cfg).unwrap();
        cert.verify(g, &f, eps).unwrap();
        println!("{:11} -> {} (exit {})", name, cert.kind(), cert.exit_code());
    }

    // coherence is the "none of the above" regime: small degrees and no
    // big anticomplete pair force n > 1/eps
    let verdict = is_epsilon_coherent(&Graph::cycle(12), frac(1, 4), &CoherenceConfig::default());
    println!("C12 at eps 1/4: {}", describe(&verdict));
    let verdict =
        is_epsilon_coherent(&two_cliques(6), frac(1, 4), &CoherenceConfig::default());
    println!("2xK6 at eps 1/4: {}", describe(&verdict));
}

fn triangles(count: usize) -> Graph {
    let mut edges = Vec::new();
    for t in 0..count {
        let b = 3 * t;
        edges.extend([(b, b + 1), (b, b + 2), (b + 1, b + 2)]);
    }
    Graph::from_edges(3 * count, &edges).unwrap()
}

fn two_cliques(half: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..half {
        for v in (u + 1)..half {
            edges.push((u, v));
            edges.push((half + u, half + v));
        }
    }
    Graph::from_edges(2 * half, &edges).unwrap()
}

fn describe(v: &CoherenceVerdict) -> String {
    match v {
        CoherenceVerdict::Coherent => "coherent".into(),
        CoherenceVerdict::TooSmall => "too small".into(),
        CoherenceVerdict::HighDegree { vertex, degree } => {
            format!("refuted, vertex {} has degree {}", vertex, degree)
        }
        CoherenceVerdict::BigAnticompletePair { a, b } => {
            format!("refuted, anticomplete {:?} / {:?}", a.to_vec(), b.to_vec())
        }
        CoherenceVerdict::Unverified => "unverified (over the exact bound)".into(),
    }
}
