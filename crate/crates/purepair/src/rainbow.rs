//! Rainbow copies of tree patterns inside a blockade.
//!
//! A copy is rainbow when it is an induced copy of the pattern using at most
//! one vertex per block. For ordered patterns the label order must agree
//! with the block-index order; for rooted patterns a left-rainbow copy puts
//! the root in the lowest used block and a right-rainbow copy in the
//! highest. The support of a copy is the set of block indices it touches.
//!
//! All searchers are exact backtrackers; a returned None is authoritative.
//! [`verify_ordered`], [`verify_rooted`] and [`verify_unordered`] re-check
//! embeddings independently of how they were found.

use crate::bits::VertexSet;
use crate::blockade::Blockade;
use crate::frac::{ceil_mul, frac, Frac};
use crate::graph::Graph;
use crate::rng::rng_from_seed;
use crate::trees::{enumerate_ordered_trees, OrderedTree, RootedTree, TreeError};
use itertools::Itertools;
use rand::seq::SliceRandom;
use std::collections::HashMap;

/// Sorted block indices touched by a copy.
pub type Support = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RainbowEmbedding {
    /// Pattern label -> host vertex.
    pub vertices: Vec<usize>,
    /// Pattern label -> block index.
    pub blocks: Vec<usize>,
}

impl RainbowEmbedding {
    pub fn support(&self) -> Support {
        let mut s = self.blocks.clone();
        s.sort();
        s
    }

    pub fn vertex_set(&self, n: usize) -> VertexSet {
        VertexSet::from_iter(n, self.vertices.iter().copied())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

// ============================================================
// Independent verification
// ============================================================

fn verify_core(
    host: &Graph,
    b: &Blockade,
    m: usize,
    adj: &dyn Fn(usize, usize) -> bool,
    emb: &RainbowEmbedding,
) -> Result<(), String> {
    if emb.vertices.len() != m || emb.blocks.len() != m {
        return Err(format!("embedding covers {} labels, pattern has {}", emb.vertices.len(), m));
    }
    for i in 0..m {
        let block = b
            .block(emb.blocks[i])
            .ok_or_else(|| format!("label {} claims unknown block {}", i, emb.blocks[i]))?;
        if !block.contains(emb.vertices[i]) {
            return Err(format!(
                "label {}: vertex {} not in block {}",
                i, emb.vertices[i], emb.blocks[i]
            ));
        }
    }
    for i in 0..m {
        for j in (i + 1)..m {
            if emb.vertices[i] == emb.vertices[j] {
                return Err(format!("labels {} and {} share vertex {}", i, j, emb.vertices[i]));
            }
            if emb.blocks[i] == emb.blocks[j] {
                return Err(format!("labels {} and {} share block {}", i, j, emb.blocks[i]));
            }
            let have = host.has_edge(emb.vertices[i], emb.vertices[j]);
            if have != adj(i, j) {
                return Err(format!(
                    "labels {}-{}: host edge {} but pattern edge {}",
                    i,
                    j,
                    have,
                    adj(i, j)
                ));
            }
        }
    }
    Ok(())
}

pub fn verify_ordered(
    host: &Graph,
    b: &Blockade,
    j: &OrderedTree,
    emb: &RainbowEmbedding,
) -> Result<(), String> {
    verify_core(host, b, j.len(), &|x, y| j.has_edge(x, y), emb)?;
    for i in 1..j.len() {
        if emb.blocks[i - 1] >= emb.blocks[i] {
            return Err(format!(
                "label order broken: blocks {} then {}",
                emb.blocks[i - 1],
                emb.blocks[i]
            ));
        }
    }
    Ok(())
}

pub fn verify_rooted(
    host: &Graph,
    b: &Blockade,
    t: &RootedTree,
    side: Option<Side>,
    emb: &RainbowEmbedding,
) -> Result<(), String> {
    let adj = |x: usize, y: usize| t.parent(x) == Some(y) || t.parent(y) == Some(x);
    verify_core(host, b, t.len(), &adj, emb)?;
    if let Some(side) = side {
        let root_block = emb.blocks[RootedTree::ROOT];
        for (l, &blk) in emb.blocks.iter().enumerate() {
            if l == RootedTree::ROOT {
                continue;
            }
            let ok = match side {
                Side::Left => blk > root_block,
                Side::Right => blk < root_block,
            };
            if !ok {
                return Err(format!(
                    "{:?}-rainbow broken: root in block {}, label {} in block {}",
                    side, root_block, l, blk
                ));
            }
        }
    }
    Ok(())
}

pub fn verify_unordered(
    host: &Graph,
    b: &Blockade,
    pattern: &Graph,
    emb: &RainbowEmbedding,
) -> Result<(), String> {
    verify_core(host, b, pattern.len(), &|x, y| pattern.has_edge(x, y), emb)
}

// ============================================================
// Searchers
// ============================================================

/// Exact backtracking search for a rainbow copy of the ordered tree `j`.
/// With `support` given (sorted, one index per label) the copy must touch
/// exactly those blocks; otherwise any strictly increasing block choice is
/// allowed. None is authoritative either way.
pub fn find_rainbow_copy(
    host: &Graph,
    b: &Blockade,
    j: &OrderedTree,
    support: Option<&[usize]>,
) -> Option<RainbowEmbedding> {
    let m = j.len();
    if let Some(s) = support {
        if s.len() != m || s.windows(2).any(|w| w[0] >= w[1]) {
            return None;
        }
        let blocks: Option<Vec<&VertexSet>> = s.iter().map(|&i| b.block(i)).collect();
        let blocks = blocks?;
        let mut verts = vec![0usize; m];
        if place_fixed(host, j, &blocks, 0, &mut verts) {
            let emb = RainbowEmbedding { vertices: verts, blocks: s.to_vec() };
            debug_assert!(verify_ordered(host, b, j, &emb).is_ok());
            return Some(emb);
        }
        return None;
    }
    let k = b.length();
    if m > k {
        return None;
    }
    let mut verts = vec![0usize; m];
    let mut pos = vec![0usize; m];
    if place_free(host, b, j, 0, 0, &mut verts, &mut pos) {
        let blocks = pos.iter().map(|&p| b.index_at(p)).collect();
        let emb = RainbowEmbedding { vertices: verts, blocks };
        debug_assert!(verify_ordered(host, b, j, &emb).is_ok());
        return Some(emb);
    }
    None
}

fn adjacency_ok(
    host: &Graph,
    j: &OrderedTree,
    verts: &[usize],
    label: usize,
    v: usize,
) -> bool {
    (0..label).all(|l| host.has_edge(verts[l], v) == j.has_edge(l, label))
}

fn place_fixed(
    host: &Graph,
    j: &OrderedTree,
    blocks: &[&VertexSet],
    label: usize,
    verts: &mut [usize],
) -> bool {
    if label == j.len() {
        return true;
    }
    for v in blocks[label].iter() {
        if adjacency_ok(host, j, verts, label, v) {
            verts[label] = v;
            if place_fixed(host, j, blocks, label + 1, verts) {
                return true;
            }
        }
    }
    false
}

fn place_free(
    host: &Graph,
    b: &Blockade,
    j: &OrderedTree,
    label: usize,
    min_pos: usize,
    verts: &mut [usize],
    pos: &mut [usize],
) -> bool {
    let m = j.len();
    if label == m {
        return true;
    }
    // keep enough blocks for the remaining labels
    for p in min_pos..=(b.length() - (m - label)) {
        for v in b.block_at(p).iter() {
            if adjacency_ok(host, j, verts, label, v) {
                verts[label] = v;
                pos[label] = p;
                if place_free(host, b, j, label + 1, p + 1, verts, pos) {
                    return true;
                }
            }
        }
    }
    false
}

#[derive(Clone, Debug, Default)]
pub struct DirectedOpts {
    /// Only these host vertices may be used.
    pub allowed: Option<VertexSet>,
    /// Force the root onto this host vertex.
    pub root: Option<usize>,
    /// Only blocks with index in this inclusive range may be used.
    pub index_range: Option<(usize, usize)>,
}

/// Exact search for a left- or right-rainbow copy of the rooted tree `t`:
/// rainbow, induced, root in the lowest (Left) or highest (Right) used
/// block. None is authoritative.
pub fn find_directed_rainbow(
    host: &Graph,
    b: &Blockade,
    t: &RootedTree,
    side: Side,
    opts: &DirectedOpts,
) -> Option<RainbowEmbedding> {
    // BFS order places every parent before its children.
    let m = t.len();
    let mut order = Vec::with_capacity(m);
    let mut queue = std::collections::VecDeque::from([RootedTree::ROOT]);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        queue.extend(t.children(v).iter().copied());
    }
    let mut slot_of = vec![0usize; m];
    for (s, &l) in order.iter().enumerate() {
        slot_of[l] = s;
    }

    let positions: Vec<usize> = (0..b.length())
        .filter(|&p| match opts.index_range {
            Some((lo, hi)) => (lo..=hi).contains(&b.index_at(p)),
            None => true,
        })
        .collect();
    if positions.len() < m {
        return None;
    }

    let adj = |x: usize, y: usize| t.parent(x) == Some(y) || t.parent(y) == Some(x);
    let mut verts = vec![0usize; m]; // by slot
    let mut pos = vec![0usize; m];
    let mut used_pos: Vec<usize> = Vec::with_capacity(m);

    fn rec(
        host: &Graph,
        b: &Blockade,
        order: &[usize],
        adj: &dyn Fn(usize, usize) -> bool,
        side: Side,
        opts: &DirectedOpts,
        positions: &[usize],
        slot: usize,
        verts: &mut [usize],
        pos: &mut [usize],
        used_pos: &mut Vec<usize>,
    ) -> bool {
        if slot == order.len() {
            return true;
        }
        let label = order[slot];
        for &p in positions {
            if slot == 0 {
                if let Some(rv) = opts.root {
                    if !b.block_at(p).contains(rv) {
                        continue;
                    }
                }
            } else {
                let root_p = pos[0];
                let ok = match side {
                    Side::Left => p > root_p,
                    Side::Right => p < root_p,
                };
                if !ok || used_pos.contains(&p) {
                    continue;
                }
            }
            for v in b.block_at(p).iter() {
                if let Some(rv) = opts.root {
                    if slot == 0 && v != rv {
                        continue;
                    }
                }
                if let Some(allowed) = &opts.allowed {
                    if !allowed.contains(v) {
                        continue;
                    }
                }
                let consistent = (0..slot).all(|s| {
                    host.has_edge(verts[s], v) == adj(order[s], label)
                });
                if !consistent {
                    continue;
                }
                verts[slot] = v;
                pos[slot] = p;
                used_pos.push(p);
                if rec(host, b, order, adj, side, opts, positions, slot + 1, verts, pos, used_pos)
                {
                    return true;
                }
                used_pos.pop();
            }
        }
        false
    }

    if rec(host, b, &order, &adj, side, opts, &positions, 0, &mut verts, &mut pos, &mut used_pos)
    {
        // convert slot order back to label order
        let mut vertices = vec![0usize; m];
        let mut blocks = vec![0usize; m];
        for (s, &l) in order.iter().enumerate() {
            vertices[l] = verts[s];
            blocks[l] = b.index_at(pos[s]);
        }
        let emb = RainbowEmbedding { vertices, blocks };
        debug_assert!(verify_rooted(host, b, t, Some(side), &emb).is_ok());
        Some(emb)
    } else {
        None
    }
}

/// Rainbow induced copy of an arbitrary tree pattern given as a graph, with
/// no order or side constraint. Used as the direct fallback before the
/// staged pipeline machinery.
pub fn find_rainbow_unordered(
    host: &Graph,
    b: &Blockade,
    pattern: &Graph,
) -> Option<RainbowEmbedding> {
    let m = pattern.len();
    if m == 0 || m > b.length() {
        return None;
    }
    // order pattern vertices so each connects to an earlier one when possible
    let mut order: Vec<usize> = Vec::with_capacity(m);
    let mut seen = vec![false; m];
    for start in 0..m {
        if seen[start] {
            continue;
        }
        let mut queue = std::collections::VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for u in pattern.neighbors(v).iter() {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }

    let mut verts = vec![0usize; m];
    let mut pos = vec![usize::MAX; m];
    fn rec(
        host: &Graph,
        b: &Blockade,
        pattern: &Graph,
        order: &[usize],
        slot: usize,
        verts: &mut [usize],
        pos: &mut [usize],
    ) -> bool {
        if slot == order.len() {
            return true;
        }
        let label = order[slot];
        for p in 0..b.length() {
            if pos[..slot].contains(&p) {
                continue;
            }
            for v in b.block_at(p).iter() {
                let consistent = (0..slot)
                    .all(|s| host.has_edge(verts[s], v) == pattern.has_edge(order[s], label));
                if !consistent {
                    continue;
                }
                verts[slot] = v;
                pos[slot] = p;
                if rec(host, b, pattern, order, slot + 1, verts, pos) {
                    return true;
                }
            }
        }
        pos[slot] = usize::MAX;
        false
    }
    if rec(host, b, pattern, &order, 0, &mut verts, &mut pos) {
        let mut vertices = vec![0usize; m];
        let mut blocks = vec![0usize; m];
        for (s, &l) in order.iter().enumerate() {
            vertices[l] = verts[s];
            blocks[l] = b.index_at(pos[s]);
        }
        let emb = RainbowEmbedding { vertices, blocks };
        debug_assert!(verify_unordered(host, b, pattern, &emb).is_ok());
        Some(emb)
    } else {
        None
    }
}

// ============================================================
// Traces
// ============================================================

/// Memo for traces, keyed by (blockade fingerprint, tree size, tree code).
#[derive(Default)]
pub struct TraceMemo {
    map: HashMap<(u64, usize, Vec<(usize, usize)>), Vec<Support>>,
    pub hits: u64,
    pub misses: u64,
}

impl TraceMemo {
    pub fn new() -> Self {
        Self::default()
    }
}

/// All supports of rainbow copies of `j`: every |J|-subset of the index set
/// that carries a copy, in lexicographic order.
pub fn trace(host: &Graph, b: &Blockade, j: &OrderedTree) -> Vec<Support> {
    let m = j.len();
    if m > b.length() {
        return Vec::new();
    }
    b.indices()
        .into_iter()
        .combinations(m)
        .filter(|s| find_rainbow_copy(host, b, j, Some(s)).is_some())
        .collect()
}

pub fn trace_with_memo(
    host: &Graph,
    b: &Blockade,
    j: &OrderedTree,
    memo: &mut TraceMemo,
) -> Vec<Support> {
    let key = (b.fingerprint(host), j.len(), j.canonical_code().to_vec());
    if let Some(t) = memo.map.get(&key) {
        memo.hits += 1;
        return t.clone();
    }
    memo.misses += 1;
    let t = trace(host, b, j);
    memo.map.insert(key, t.clone());
    t
}

/// Number of |J|-subsets of the index set: the size of a complete trace.
pub fn complete_trace_len(b: &Blockade, m: usize) -> usize {
    let k = b.length();
    if m > k {
        return 0;
    }
    // C(k, m), small arguments only
    let mut num = 1usize;
    for i in 0..m {
        num = num * (k - i) / (i + 1);
    }
    num
}

#[derive(Clone, Debug)]
pub struct UniformityWitness {
    pub tree: OrderedTree,
    pub present: Support,
    pub absent: Support,
}

#[derive(Clone, Debug)]
pub enum UniformityVerdict {
    Uniform,
    Witness(UniformityWitness),
}

impl UniformityVerdict {
    pub fn is_uniform(&self) -> bool {
        matches!(self, UniformityVerdict::Uniform)
    }
}

/// Support-uniformity up to trees of `tau` vertices: every such trace is
/// empty or complete. Exhaustive over the enumeration budget.
pub fn is_support_uniform(
    host: &Graph,
    b: &Blockade,
    tau: usize,
) -> Result<UniformityVerdict, TreeError> {
    let mut memo = TraceMemo::new();
    is_support_uniform_with_memo(host, b, tau, &mut memo)
}

pub fn is_support_uniform_with_memo(
    host: &Graph,
    b: &Blockade,
    tau: usize,
    memo: &mut TraceMemo,
) -> Result<UniformityVerdict, TreeError> {
    for m in 1..=tau.min(b.length()) {
        for j in enumerate_ordered_trees(m)? {
            let tr = trace_with_memo(host, b, &j, memo);
            let total = complete_trace_len(b, m);
            if tr.is_empty() || tr.len() == total {
                continue;
            }
            let present = tr[0].clone();
            let absent = b
                .indices()
                .into_iter()
                .combinations(m)
                .find(|s| tr.binary_search(s).is_err())
                .expect("incomplete trace must miss some support");
            return Ok(UniformityVerdict::Witness(UniformityWitness { tree: j, present, absent }));
        }
    }
    Ok(UniformityVerdict::Uniform)
}

// ============================================================
// Support invariance
// ============================================================

#[derive(Clone, Debug)]
pub struct InvarianceWitness {
    pub tree: OrderedTree,
    pub support: Support,
    /// Contraction of width >= ceil(kappa * width) whose trace lost `support`.
    pub contraction: Blockade,
}

#[derive(Clone, Debug)]
pub enum InvarianceVerdict {
    /// Exhaustively verified over all contractions of admissible width.
    Invariant,
    Refuted(Box<InvarianceWitness>),
    /// Search was cut short by budget; no witness found.
    Unverified { checked_targets: usize, skipped_targets: usize },
}

impl InvarianceVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, InvarianceVerdict::Invariant)
    }
}

#[derive(Clone, Debug)]
pub enum InvarianceMode {
    /// Complete decision. Traces only shrink under contraction, and whether
    /// a support S survives depends only on how the blocks of S are shrunk,
    /// with minimal shrinks the worst case; so the enumeration runs per
    /// (tree, support) over all choices of ceil(kappa*w)-subsets of the
    /// support's blocks. `max_combos` caps that per-target product.
    Exhaustive { max_combos: u64 },
    /// Random whole-blockade contractions; refutations are exact, a quiet
    /// run is only "unverified".
    Sampled { samples: u64, seed: u64 },
}

pub fn is_support_invariant(
    host: &Graph,
    b: &Blockade,
    kappa: Frac,
    tau: usize,
    mode: &InvarianceMode,
) -> Result<InvarianceVerdict, TreeError> {
    let mut memo = TraceMemo::new();
    is_support_invariant_with_memo(host, b, kappa, tau, mode, &mut memo)
}

pub fn is_support_invariant_with_memo(
    host: &Graph,
    b: &Blockade,
    kappa: Frac,
    tau: usize,
    mode: &InvarianceMode,
    memo: &mut TraceMemo,
) -> Result<InvarianceVerdict, TreeError> {
    assert!(kappa > frac(0, 1) && kappa <= frac(1, 1), "kappa must lie in (0, 1]");
    let shrink_to = ceil_mul(kappa, b.width()).max(1);

    match mode {
        InvarianceMode::Exhaustive { max_combos } => {
            let mut checked = 0usize;
            let mut skipped = 0usize;
            for m in 1..=tau.min(b.length()) {
                for j in enumerate_ordered_trees(m)? {
                    let tr = trace_with_memo(host, b, &j, memo);
                    for s in tr {
                        let combos: u64 = s
                            .iter()
                            .map(|&i| n_choose_k(b.block(i).unwrap().len(), shrink_to))
                            .product();
                        if combos > *max_combos {
                            skipped += 1;
                            continue;
                        }
                        checked += 1;
                        if let Some(shrunk) =
                            losing_shrink(host, b, &j, &s, shrink_to)
                        {
                            let contraction = b.contract_blocks(&shrunk).unwrap();
                            return Ok(InvarianceVerdict::Refuted(Box::new(InvarianceWitness {
                                tree: j,
                                support: s,
                                contraction,
                            })));
                        }
                    }
                }
            }
            if skipped > 0 {
                Ok(InvarianceVerdict::Unverified { checked_targets: checked, skipped_targets: skipped })
            } else {
                Ok(InvarianceVerdict::Invariant)
            }
        }
        InvarianceMode::Sampled { samples, seed } => {
            let mut rng = rng_from_seed(*seed);
            let mut targets: Vec<(OrderedTree, Support)> = Vec::new();
            for m in 1..=tau.min(b.length()) {
                for j in enumerate_ordered_trees(m)? {
                    for s in trace_with_memo(host, b, &j, memo) {
                        targets.push((j.clone(), s));
                    }
                }
            }
            for _ in 0..*samples {
                let shrunk: Vec<(usize, VertexSet)> = b
                    .entries()
                    .iter()
                    .map(|(i, block)| {
                        let mut vs = block.to_vec();
                        vs.shuffle(&mut rng);
                        vs.truncate(shrink_to);
                        (*i, VertexSet::from_iter(b.host_len(), vs))
                    })
                    .collect();
                let contracted = b.contraction(&shrunk).unwrap();
                for (j, s) in &targets {
                    if find_rainbow_copy(host, &contracted, j, Some(s)).is_none() {
                        return Ok(InvarianceVerdict::Refuted(Box::new(InvarianceWitness {
                            tree: j.clone(),
                            support: s.clone(),
                            contraction: contracted,
                        })));
                    }
                }
            }
            Ok(InvarianceVerdict::Unverified { checked_targets: targets.len(), skipped_targets: 0 })
        }
    }
}

/// Finds shrink-to-`size` subsets of the support's blocks under which no
/// rainbow copy of `j` with support `s` survives; None means every minimal
/// shrink keeps a copy, which settles the (j, s) target completely.
fn losing_shrink(
    host: &Graph,
    b: &Blockade,
    j: &OrderedTree,
    s: &Support,
    size: usize,
) -> Option<Vec<(usize, VertexSet)>> {
    let block_lists: Vec<Vec<usize>> = s.iter().map(|&i| b.block(i).unwrap().to_vec()).collect();
    let mut choice: Vec<Vec<usize>> = Vec::with_capacity(s.len());
    losing_shrink_rec(host, b, j, s, size, &block_lists, &mut choice)
}

fn losing_shrink_rec(
    host: &Graph,
    b: &Blockade,
    j: &OrderedTree,
    s: &Support,
    size: usize,
    block_lists: &[Vec<usize>],
    choice: &mut Vec<Vec<usize>>,
) -> Option<Vec<(usize, VertexSet)>> {
    if choice.len() == s.len() {
        let shrunk: Vec<(usize, VertexSet)> = s
            .iter()
            .zip(choice.iter())
            .map(|(&i, vs)| (i, VertexSet::from_iter(b.host_len(), vs.iter().copied())))
            .collect();
        let small = Blockade::with_indices(host, shrunk.clone()).unwrap();
        if find_rainbow_copy(host, &small, j, Some(s)).is_none() {
            return Some(shrunk);
        }
        return None;
    }
    let depth = choice.len();
    for subset in block_lists[depth].iter().copied().combinations(size) {
        choice.push(subset);
        if let Some(hit) = losing_shrink_rec(host, b, j, s, size, block_lists, choice) {
            choice.pop();
            return Some(hit);
        }
        choice.pop();
    }
    None
}

fn n_choose_k(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut out: u64 = 1;
    for i in 0..k.min(n - k) {
        out = out.saturating_mul((n - i) as u64) / (i as u64 + 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::build_t;

    fn singleton_blockade(g: &Graph) -> Blockade {
        let n = g.len();
        Blockade::new(g, (0..n).map(|v| VertexSet::from_iter(n, [v])).collect()).unwrap()
    }

    #[test]
    fn single_vertex_copy_always_exists() {
        let g = Graph::empty(1);
        let b = singleton_blockade(&g);
        let emb = find_rainbow_copy(&g, &b, &OrderedTree::single(), None).unwrap();
        assert_eq!(emb.vertices, vec![0]);
        assert_eq!(emb.support(), vec![1]);
    }

    #[test]
    fn ordered_path_respects_block_order() {
        // Host path 0-1-2 over singleton blocks: the ordered path 0-1-2 fits,
        // and the ordered tree with edges (0,2),(1,2) does not (it would need
        // ends adjacent to the top label but not to each other, in order).
        let g = Graph::path(3);
        let b = singleton_blockade(&g);
        let p3 = OrderedTree::path(3);
        let emb = find_rainbow_copy(&g, &b, &p3, None).unwrap();
        assert_eq!(emb.vertices, vec![0, 1, 2]);
        verify_ordered(&g, &b, &p3, &emb).unwrap();
        let cherry = OrderedTree::from_edges(3, &[(0, 2), (1, 2)]).unwrap();
        assert!(find_rainbow_copy(&g, &b, &cherry, None).is_none());
    }

    #[test]
    fn support_constraint_pins_blocks() {
        let g = Graph::from_edges(4, &[(0, 2), (0, 3)]).unwrap();
        let b = singleton_blockade(&g);
        let edge = OrderedTree::from_edges(2, &[(0, 1)]).unwrap();
        assert!(find_rainbow_copy(&g, &b, &edge, Some(&[1, 3])).is_some());
        assert!(find_rainbow_copy(&g, &b, &edge, Some(&[1, 4])).is_some());
        assert!(find_rainbow_copy(&g, &b, &edge, Some(&[2, 3])).is_none());
        // malformed supports are just "no copy"
        assert!(find_rainbow_copy(&g, &b, &edge, Some(&[3, 1])).is_none());
        assert!(find_rainbow_copy(&g, &b, &edge, Some(&[1])).is_none());
    }

    #[test]
    fn edge_copy_absent_on_edgeless_host() {
        let g = Graph::empty(4);
        let b = singleton_blockade(&g);
        let edge = OrderedTree::from_edges(2, &[(0, 1)]).unwrap();
        assert!(find_rainbow_copy(&g, &b, &edge, None).is_none());
    }

    #[test]
    fn directed_star_needs_nonadjacent_leaves() {
        // Root in block 1 adjacent to two non-adjacent vertices in blocks 2, 3.
        let g = Graph::from_edges(3, &[(0, 1), (0, 2)]).unwrap();
        let b = singleton_blockade(&g);
        let star = build_t(2, 1).unwrap();
        let emb = find_directed_rainbow(&g, &b, &star, Side::Left, &DirectedOpts::default())
            .expect("left-rainbow star");
        assert_eq!(emb.blocks[RootedTree::ROOT], 1);
        verify_rooted(&g, &b, &star, Some(Side::Left), &emb).unwrap();
        // no right-rainbow copy: the root would need the highest block
        assert!(
            find_directed_rainbow(&g, &b, &star, Side::Right, &DirectedOpts::default()).is_none()
        );
        // adding the leaf edge kills the induced copy
        let mut g2 = g.clone();
        g2.add_edge(1, 2);
        assert!(
            find_directed_rainbow(&g2, &b, &star, Side::Left, &DirectedOpts::default()).is_none()
        );
    }

    #[test]
    fn directed_opts_restrict_the_search() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let b = singleton_blockade(&g);
        let star = build_t(2, 1).unwrap();
        // root forced onto vertex 0
        let emb = find_directed_rainbow(
            &g,
            &b,
            &star,
            Side::Left,
            &DirectedOpts { root: Some(0), ..Default::default() },
        )
        .unwrap();
        assert_eq!(emb.vertices[RootedTree::ROOT], 0);
        // allowed set without vertex 3
        let allowed = VertexSet::from_iter(4, [0, 1, 2]);
        let emb2 = find_directed_rainbow(
            &g,
            &b,
            &star,
            Side::Left,
            &DirectedOpts { allowed: Some(allowed), ..Default::default() },
        )
        .unwrap();
        assert!(!emb2.vertices.contains(&3));
        // index range excluding block 2 leaves only one leaf candidate
        assert!(find_directed_rainbow(
            &g,
            &b,
            &star,
            Side::Left,
            &DirectedOpts { index_range: Some((2, 4)), ..Default::default() },
        )
        .is_none());
    }

    #[test]
    fn unordered_search_ignores_order() {
        let g = Graph::path(3);
        let b = singleton_blockade(&g);
        // cherry rooted anywhere: as an unordered pattern it is just P3
        let cherry = Graph::from_edges(3, &[(0, 2), (1, 2)]).unwrap();
        let emb = find_rainbow_unordered(&g, &b, &cherry).unwrap();
        verify_unordered(&g, &b, &cherry, &emb).unwrap();
    }

    #[test]
    fn trace_on_edgeless_and_complete_hosts() {
        let edge = OrderedTree::from_edges(2, &[(0, 1)]).unwrap();
        let single = OrderedTree::single();

        let g = Graph::empty(3);
        let b = singleton_blockade(&g);
        assert!(trace(&g, &b, &edge).is_empty());
        assert_eq!(trace(&g, &b, &single), vec![vec![1], vec![2], vec![3]]);

        let k = Graph::complete(3);
        let bk = singleton_blockade(&k);
        assert_eq!(trace(&k, &bk, &edge), vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        // induced P3 needs a non-edge, so its trace on a complete host is empty
        assert!(trace(&k, &bk, &OrderedTree::path(3)).is_empty());
    }

    #[test]
    fn trace_memo_caches() {
        let g = Graph::gnp(9, 0.5, 4);
        let b = Blockade::new(
            &g,
            vec![
                VertexSet::from_iter(9, 0..3),
                VertexSet::from_iter(9, 3..6),
                VertexSet::from_iter(9, 6..9),
            ],
        )
        .unwrap();
        let edge = OrderedTree::from_edges(2, &[(0, 1)]).unwrap();
        let mut memo = TraceMemo::new();
        let t1 = trace_with_memo(&g, &b, &edge, &mut memo);
        let t2 = trace_with_memo(&g, &b, &edge, &mut memo);
        assert_eq!(t1, t2);
        assert_eq!(memo.hits, 1);
        assert_eq!(memo.misses, 1);
    }

    #[test]
    fn uniformity_verdicts() {
        // Edgeless host: singleton tree complete, everything else empty.
        let g = Graph::empty(4);
        let b = singleton_blockade(&g);
        assert!(is_support_uniform(&g, &b, 3).unwrap().is_uniform());

        // One edge among singleton blocks: the edge trace is a proper subset.
        let g2 = Graph::from_edges(4, &[(0, 1)]).unwrap();
        let b2 = singleton_blockade(&g2);
        match is_support_uniform(&g2, &b2, 2).unwrap() {
            UniformityVerdict::Witness(w) => {
                assert_eq!(w.tree.len(), 2);
                assert_eq!(w.present, vec![1, 2]);
                assert_eq!(w.absent, vec![1, 3]);
            }
            UniformityVerdict::Uniform => panic!("expected a witness"),
        }
    }

    #[test]
    fn invariance_trivial_at_width_one() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let b = singleton_blockade(&g);
        let v = is_support_invariant(
            &g,
            &b,
            frac(1, 2),
            2,
            &InvarianceMode::Exhaustive { max_combos: 1 << 20 },
        )
        .unwrap();
        assert!(v.holds());
    }

    #[test]
    fn invariance_refuted_when_one_vertex_carries_the_trace() {
        // Block 1 = {0, 1}, block 2 = {2, 3}; only 0-2 is an edge. Shrinking
        // block 1 to {1} (or block 2 to {3}) loses the edge support {1,2}.
        let g = Graph::from_edges(4, &[(0, 2)]).unwrap();
        let b = Blockade::new(
            &g,
            vec![VertexSet::from_iter(4, [0, 1]), VertexSet::from_iter(4, [2, 3])],
        )
        .unwrap();
        let v = is_support_invariant(
            &g,
            &b,
            frac(1, 2),
            2,
            &InvarianceMode::Exhaustive { max_combos: 1 << 20 },
        )
        .unwrap();
        match v {
            InvarianceVerdict::Refuted(w) => {
                assert_eq!(w.support, vec![1, 2]);
                assert_eq!(w.contraction.width(), 1);
                // the witness contraction really lost the copy
                assert!(find_rainbow_copy(&g, &w.contraction, &w.tree, Some(&w.support)).is_none());
            }
            other => panic!("expected refutation, got {:?}", other),
        }
        // sampled mode finds it too (every sample shrinks to width 1)
        let vs = is_support_invariant(
            &g,
            &b,
            frac(1, 2),
            2,
            &InvarianceMode::Sampled { samples: 64, seed: 9 },
        )
        .unwrap();
        assert!(matches!(vs, InvarianceVerdict::Refuted(_)));
    }

    #[test]
    fn invariance_holds_when_every_pair_is_an_edge() {
        // Complete bipartite between the two blocks: any shrink keeps a copy.
        let g = Graph::from_edges(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let b = Blockade::new(
            &g,
            vec![VertexSet::from_iter(4, [0, 1]), VertexSet::from_iter(4, [2, 3])],
        )
        .unwrap();
        let v = is_support_invariant(
            &g,
            &b,
            frac(1, 2),
            2,
            &InvarianceMode::Exhaustive { max_combos: 1 << 20 },
        )
        .unwrap();
        assert!(v.holds());
    }

    #[test]
    fn invariance_budget_yields_unverified() {
        let g = Graph::from_edges(4, &[(0, 2)]).unwrap();
        let b = Blockade::new(
            &g,
            vec![VertexSet::from_iter(4, [0, 1]), VertexSet::from_iter(4, [2, 3])],
        )
        .unwrap();
        let v = is_support_invariant(
            &g,
            &b,
            frac(1, 2),
            2,
            &InvarianceMode::Exhaustive { max_combos: 1 },
        )
        .unwrap();
        assert!(matches!(v, InvarianceVerdict::Unverified { .. }));
    }

    #[test]
    fn trace_monotone_under_contraction() {
        for seed in 0..40 {
            let g = Graph::gnp(12, 0.5, seed);
            let b = Blockade::new(
                &g,
                vec![
                    VertexSet::from_iter(12, 0..3),
                    VertexSet::from_iter(12, 3..6),
                    VertexSet::from_iter(12, 6..9),
                    VertexSet::from_iter(12, 9..12),
                ],
            )
            .unwrap();
            let contracted = b.equicardinalize(Some(2)).unwrap();
            for m in 1..=3 {
                for j in enumerate_ordered_trees(m).unwrap() {
                    let big = trace(&g, &b, &j);
                    for s in trace(&g, &contracted, &j) {
                        assert!(big.binary_search(&s).is_ok(), "support gained under contraction");
                    }
                }
            }
        }
    }
}
