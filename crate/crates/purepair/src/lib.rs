//! Search and certification toolkit for pure pairs in dense graphs.
//!
//! The library is organised around a small number of exact combinatorial
//! primitives: bit-parallel graphs ([`graph::Graph`]), rooted and ordered
//! trees ([`trees`]), blockades and rainbow copies ([`blockade`], [`rainbow`]),
//! certificate search ([`certify`]), the staged rainbow pipeline
//! ([`pipeline`]), and an experiment harness ([`harness`]).
//!
//! Every searcher that emits an embedding or a certificate re-verifies it with
//! an independent checker before returning. Randomised code takes explicit
//! seeds and never touches a global generator, so equal inputs give
//! byte-identical outputs at any thread count.
//!
//! The `examples/` directory is the front door: one runnable example per
//! capability. A thin `purepair` binary exposes the same operations as
//! subcommands for scripting.

pub mod bits;
pub mod blockade;
pub mod certify;
pub mod frac;
pub mod graph;
pub mod harness;
pub mod io;
pub mod pipeline;
pub mod rainbow;
pub mod rng;
pub mod trees;

pub use bits::VertexSet;
pub use graph::Graph;
