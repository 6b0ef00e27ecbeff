//! Rooted and ordered tree patterns.
//!
//! T(delta, eta) is the rooted tree in which the root has delta children,
//! every other internal vertex has delta children as well, and every leaf
//! sits at depth exactly eta. The derived families Q, R, S attach copies of
//! T(delta, alpha) and T(delta, beta) under a fresh or shared root; they are
//! the intermediate shapes the escalation phase trades in.
//!
//! Ordered trees carry labels 0..m-1 whose natural order is part of the
//! structure, so two ordered trees are isomorphic iff their edge lists are
//! equal; the sorted edge list is the canonical code.

use std::collections::HashMap;
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("delta must be at least 2, got {0}")]
    DeltaTooSmall(usize),
    #[error("gamma {gamma} out of range 0..={max}")]
    GammaOutOfRange { gamma: usize, max: usize },
    #[error("alpha {alpha} must not exceed beta {beta}")]
    AlphaAboveBeta { alpha: usize, beta: usize },
    #[error("ordered-tree size {m} exceeds enumeration budget {budget}")]
    BudgetExceeded { m: usize, budget: usize },
    #[error("ordered tree needs at least one vertex")]
    EmptyTree,
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("bad pattern string: {0}")]
    BadPattern(String),
}

// ============================================================
// Rooted trees
// ============================================================

#[derive(Clone, Debug)]
pub struct RootedTree {
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
}

impl RootedTree {
    /// Single vertex, which is the root.
    pub fn single() -> Self {
        RootedTree { parent: vec![None], children: vec![Vec::new()] }
    }

    pub const ROOT: usize = 0;

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a rooted tree always has its root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    /// Copies `sub` below vertex `at`; returns the index the copy's root got.
    pub fn graft(&mut self, at: usize, sub: &RootedTree) -> usize {
        let offset = self.len();
        for v in 0..sub.len() {
            let p = match sub.parent[v] {
                None => at,
                Some(p) => p + offset,
            };
            self.parent.push(Some(p));
            self.children.push(Vec::new());
        }
        for v in 0..sub.len() {
            let nv = v + offset;
            let p = self.parent[nv].unwrap();
            self.children[p].push(nv);
        }
        offset
    }

    pub fn depth(&self, v: usize) -> usize {
        let mut d = 0;
        let mut v = v;
        while let Some(p) = self.parent[v] {
            v = p;
            d += 1;
        }
        d
    }

    pub fn height(&self) -> usize {
        (0..self.len()).map(|v| self.depth(v)).max().unwrap()
    }

    /// Undirected degree (parent edge plus child edges).
    pub fn degree(&self, v: usize) -> usize {
        self.children[v].len() + self.parent[v].is_some() as usize
    }

    /// Vertices per depth level, root level first.
    pub fn level_sizes(&self) -> Vec<usize> {
        let mut levels = vec![0usize; self.height() + 1];
        for v in 0..self.len() {
            levels[self.depth(v)] += 1;
        }
        levels
    }

    /// AHU code: "(" + children codes in sorted order + ")". Equal codes iff
    /// rooted-isomorphic.
    pub fn canonical_code(&self) -> String {
        self.code_at(Self::ROOT)
    }

    fn code_at(&self, v: usize) -> String {
        let mut codes: Vec<String> = self.children[v].iter().map(|&c| self.code_at(c)).collect();
        codes.sort();
        let mut out = String::from("(");
        for c in codes {
            out.push_str(&c);
        }
        out.push(')');
        out
    }

    /// Underlying graph, same vertex labels.
    pub fn to_graph(&self) -> Graph {
        let edges: Vec<(usize, usize)> =
            (0..self.len()).filter_map(|v| self.parent[v].map(|p| (p, v))).collect();
        Graph::from_edges(self.len(), &edges).unwrap()
    }

    /// Parses a nested-parens shape: "()" is a single vertex, "(AB...)" a
    /// root whose children are the shapes A, B, ...
    pub fn parse_paren(s: &str) -> Result<RootedTree, TreeError> {
        let bytes = s.trim().as_bytes();
        let (tree, used) = Self::parse_at(bytes, 0)?;
        if used != bytes.len() {
            return Err(TreeError::BadPattern(format!("trailing input after position {}", used)));
        }
        Ok(tree)
    }

    fn parse_at(bytes: &[u8], pos: usize) -> Result<(RootedTree, usize), TreeError> {
        if bytes.get(pos) != Some(&b'(') {
            return Err(TreeError::BadPattern(format!("expected '(' at position {}", pos)));
        }
        let mut tree = RootedTree::single();
        let mut pos = pos + 1;
        while bytes.get(pos) == Some(&b'(') {
            let (sub, next) = Self::parse_at(bytes, pos)?;
            tree.graft(Self::ROOT, &sub);
            pos = next;
        }
        if bytes.get(pos) != Some(&b')') {
            return Err(TreeError::BadPattern(format!("expected ')' at position {}", pos)));
        }
        Ok((tree, pos + 1))
    }
}

/// T(delta, eta). Requires delta >= 2. Size (delta^(eta+1) - 1)/(delta - 1).
pub fn build_t(delta: usize, eta: usize) -> Result<RootedTree, TreeError> {
    if delta < 2 {
        return Err(TreeError::DeltaTooSmall(delta));
    }
    Ok(build_t_unchecked(delta, eta))
}

fn build_t_unchecked(delta: usize, eta: usize) -> RootedTree {
    let mut t = RootedTree::single();
    if eta > 0 {
        let sub = build_t_unchecked(delta, eta - 1);
        for _ in 0..delta {
            t.graft(RootedTree::ROOT, &sub);
        }
    }
    t
}

pub fn t_size(delta: usize, eta: usize) -> usize {
    (delta.pow(eta as u32 + 1) - 1) / (delta - 1)
}

/// Q(gamma): fresh root over gamma copies of T(delta, alpha). 0 <= gamma <= delta.
pub fn build_q(gamma: usize, delta: usize, alpha: usize) -> Result<RootedTree, TreeError> {
    if delta < 2 {
        return Err(TreeError::DeltaTooSmall(delta));
    }
    if gamma > delta {
        return Err(TreeError::GammaOutOfRange { gamma, max: delta });
    }
    let mut t = RootedTree::single();
    let sub = build_t_unchecked(delta, alpha);
    for _ in 0..gamma {
        t.graft(RootedTree::ROOT, &sub);
    }
    Ok(t)
}

/// R(gamma) = Q(gamma) for gamma <= delta; R(delta + i) is a fresh root over
/// delta - i copies of T(delta, alpha) and i copies of T(delta, beta).
/// 0 <= gamma <= 2*delta and alpha <= beta.
pub fn build_r(gamma: usize, delta: usize, alpha: usize, beta: usize) -> Result<RootedTree, TreeError> {
    if delta < 2 {
        return Err(TreeError::DeltaTooSmall(delta));
    }
    if gamma > 2 * delta {
        return Err(TreeError::GammaOutOfRange { gamma, max: 2 * delta });
    }
    if alpha > beta {
        return Err(TreeError::AlphaAboveBeta { alpha, beta });
    }
    if gamma <= delta {
        return build_q(gamma, delta, alpha);
    }
    let i = gamma - delta;
    let mut t = RootedTree::single();
    let sub_a = build_t_unchecked(delta, alpha);
    let sub_b = build_t_unchecked(delta, beta);
    for _ in 0..(delta - i) {
        t.graft(RootedTree::ROOT, &sub_a);
    }
    for _ in 0..i {
        t.graft(RootedTree::ROOT, &sub_b);
    }
    Ok(t)
}

/// S(gamma): gamma + 1 copies of T(delta, alpha); the root of the first copy
/// becomes the root and is joined to the roots of the other gamma copies.
/// 0 <= gamma <= delta.
pub fn build_s(gamma: usize, delta: usize, alpha: usize) -> Result<RootedTree, TreeError> {
    if delta < 2 {
        return Err(TreeError::DeltaTooSmall(delta));
    }
    if gamma > delta {
        return Err(TreeError::GammaOutOfRange { gamma, max: delta });
    }
    let sub = build_t_unchecked(delta, alpha);
    let mut t = sub.clone();
    for _ in 0..gamma {
        t.graft(RootedTree::ROOT, &sub);
    }
    Ok(t)
}

/// Does `host` contain `pat` as a rooted subtree (root to root, edges to
/// edges, injective)? Exact backtracking over child assignments, memoised on
/// (pat vertex, host vertex).
pub fn rooted_contains(host: &RootedTree, pat: &RootedTree) -> bool {
    let mut memo: HashMap<(usize, usize), bool> = HashMap::new();
    embeds(host, pat, RootedTree::ROOT, RootedTree::ROOT, &mut memo)
}

fn embeds(
    host: &RootedTree,
    pat: &RootedTree,
    pv: usize,
    hv: usize,
    memo: &mut HashMap<(usize, usize), bool>,
) -> bool {
    if let Some(&r) = memo.get(&(pv, hv)) {
        return r;
    }
    let pcs = pat.children(pv);
    let hcs = host.children(hv);
    let ok = if pcs.is_empty() {
        true
    } else if pcs.len() > hcs.len() {
        false
    } else {
        let mut used = vec![false; hcs.len()];
        assign(host, pat, pcs, hcs, 0, &mut used, memo)
    };
    memo.insert((pv, hv), ok);
    ok
}

fn assign(
    host: &RootedTree,
    pat: &RootedTree,
    pcs: &[usize],
    hcs: &[usize],
    i: usize,
    used: &mut [bool],
    memo: &mut HashMap<(usize, usize), bool>,
) -> bool {
    if i == pcs.len() {
        return true;
    }
    for (j, &hc) in hcs.iter().enumerate() {
        if used[j] || !embeds(host, pat, pcs[i], hc, memo) {
            continue;
        }
        used[j] = true;
        if assign(host, pat, pcs, hcs, i + 1, used, memo) {
            used[j] = false;
            return true;
        }
        used[j] = false;
    }
    false
}

// ============================================================
// Ordered trees
// ============================================================

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedTree {
    m: usize,
    /// Sorted (u, v) with u < v; labels 0..m-1. This is the canonical code.
    edges: Vec<(usize, usize)>,
}

impl OrderedTree {
    pub fn single() -> Self {
        OrderedTree { m: 1, edges: Vec::new() }
    }

    pub fn from_edges(m: usize, edges: &[(usize, usize)]) -> Result<Self, TreeError> {
        if m == 0 {
            return Err(TreeError::EmptyTree);
        }
        if edges.len() + 1 != m {
            return Err(TreeError::NotATree(format!("{} vertices, {} edges", m, edges.len())));
        }
        let mut norm: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u == v || u >= m || v >= m {
                return Err(TreeError::NotATree(format!("bad edge ({}, {})", u, v)));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort();
        norm.dedup();
        if norm.len() + 1 != m {
            return Err(TreeError::NotATree("duplicate edge".into()));
        }
        let g = Graph::from_edges(m, &norm).map_err(|e| TreeError::NotATree(e.to_string()))?;
        if !g.is_forest() {
            return Err(TreeError::NotATree("contains a cycle".into()));
        }
        // m-1 edges + acyclic => connected.
        Ok(OrderedTree { m, edges: norm })
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let e = (u.min(v), u.max(v));
        self.edges.binary_search(&e).is_ok()
    }

    /// Label-ordered edge list; canonical because the label order is fixed.
    pub fn canonical_code(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn to_graph(&self) -> Graph {
        Graph::from_edges(self.m, &self.edges).unwrap()
    }

    /// Path 0-1-...-m-1.
    pub fn path(m: usize) -> Self {
        let edges: Vec<(usize, usize)> = (1..m).map(|v| (v - 1, v)).collect();
        OrderedTree::from_edges(m, &edges).unwrap()
    }
}

pub const ORDERED_TREE_BUDGET: usize = 7;

/// All ordered trees on m labelled vertices (m^(m-2) of them for m >= 2),
/// sorted by canonical code. Enumerated by decoding every Prufer sequence,
/// which hits each labelled tree exactly once.
pub fn enumerate_ordered_trees(m: usize) -> Result<Vec<OrderedTree>, TreeError> {
    enumerate_ordered_trees_with_budget(m, ORDERED_TREE_BUDGET)
}

pub fn enumerate_ordered_trees_with_budget(
    m: usize,
    budget: usize,
) -> Result<Vec<OrderedTree>, TreeError> {
    if m == 0 {
        return Err(TreeError::EmptyTree);
    }
    if m > budget {
        return Err(TreeError::BudgetExceeded { m, budget });
    }
    if m == 1 {
        return Ok(vec![OrderedTree::single()]);
    }
    if m == 2 {
        return Ok(vec![OrderedTree::from_edges(2, &[(0, 1)]).unwrap()]);
    }
    let mut out = Vec::with_capacity(m.pow(m as u32 - 2));
    let mut seq = vec![0usize; m - 2];
    loop {
        out.push(prufer_decode(&seq, m));
        // next sequence in base m
        let mut i = 0;
        loop {
            if i == seq.len() {
                out.sort();
                debug_assert!(out.windows(2).all(|w| w[0] != w[1]), "duplicate tree");
                return Ok(out);
            }
            seq[i] += 1;
            if seq[i] < m {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
    }
}

fn prufer_decode(seq: &[usize], m: usize) -> OrderedTree {
    let mut deg = vec![1usize; m];
    for &a in seq {
        deg[a] += 1;
    }
    let mut edges = Vec::with_capacity(m - 1);
    for &a in seq {
        let leaf = (0..m).find(|&v| deg[v] == 1).unwrap();
        edges.push((leaf.min(a), leaf.max(a)));
        deg[leaf] = 0;
        deg[a] -= 1;
    }
    let rest: Vec<usize> = (0..m).filter(|&v| deg[v] == 1).collect();
    debug_assert_eq!(rest.len(), 2);
    edges.push((rest[0], rest[1]));
    OrderedTree::from_edges(m, &edges).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_sizes_match_closed_form() {
        for delta in 2..=4 {
            for eta in 0..=4 {
                let t = build_t(delta, eta).unwrap();
                assert_eq!(t.len(), t_size(delta, eta), "delta={} eta={}", delta, eta);
            }
        }
        assert_eq!(build_t(2, 3).unwrap().len(), 15);
        assert_eq!(build_t(3, 2).unwrap().len(), 13);
        assert_eq!(build_t(2, 0).unwrap().len(), 1);
        assert_eq!(build_t(2, 0).unwrap().height(), 0);
        assert!(build_t(1, 2).is_err());
    }

    #[test]
    fn t_level_sizes_are_powers() {
        let t = build_t(3, 3).unwrap();
        assert_eq!(t.level_sizes(), vec![1, 3, 9, 27]);
    }

    #[test]
    fn t_degree_profile() {
        // Root degree delta; internal vertices delta + 1; leaves at depth eta.
        let (delta, eta) = (3, 2);
        let t = build_t(delta, eta).unwrap();
        for v in 0..t.len() {
            let d = t.depth(v);
            if v == RootedTree::ROOT {
                assert_eq!(t.degree(v), delta);
            } else if d < eta {
                assert_eq!(t.degree(v), delta + 1);
            } else {
                assert_eq!(t.degree(v), 1);
                assert_eq!(d, eta);
            }
        }
    }

    #[test]
    fn q_r_s_sizes() {
        // Q(2) over delta=2, alpha=1: 1 + 2*3 = 7.
        assert_eq!(build_q(2, 2, 1).unwrap().len(), 7);
        // R(3) over delta=2, alpha=0, beta=1: 1 + 1*1 + 1*3 = 5.
        assert_eq!(build_r(3, 2, 0, 1).unwrap().len(), 5);
        // S(1) over delta=2, alpha=1: two T(2,1) copies joined at the roots.
        assert_eq!(build_s(1, 2, 1).unwrap().len(), 6);
        assert_eq!(build_q(0, 2, 1).unwrap().len(), 1);
        assert_eq!(build_s(0, 2, 1).unwrap().canonical_code(), build_t(2, 1).unwrap().canonical_code());
    }

    #[test]
    fn q_r_s_argument_validation() {
        assert!(build_q(3, 2, 1).is_err());
        assert!(build_r(5, 2, 0, 1).is_err());
        assert!(build_r(2, 2, 1, 0).is_err());
        assert!(build_s(3, 2, 0).is_err());
    }

    #[test]
    fn q_full_fanout_is_next_t() {
        // Q(delta) over alpha is T(delta, alpha + 1), exactly.
        for (delta, alpha) in [(2, 0), (2, 1), (2, 2), (3, 0), (3, 1)] {
            assert_eq!(
                build_q(delta, delta, alpha).unwrap().canonical_code(),
                build_t(delta, alpha + 1).unwrap().canonical_code()
            );
        }
    }

    #[test]
    fn r_full_fanout_is_next_t_over_beta() {
        // R(2*delta) is T(delta, beta + 1), exactly.
        for (delta, alpha, beta) in [(2, 0, 0), (2, 0, 1), (2, 1, 2), (3, 1, 1), (3, 0, 2)] {
            assert_eq!(
                build_r(2 * delta, delta, alpha, beta).unwrap().canonical_code(),
                build_t(delta, beta + 1).unwrap().canonical_code()
            );
        }
    }

    #[test]
    fn r_agrees_with_q_below_delta() {
        for (delta, alpha, beta) in [(2, 0, 1), (2, 1, 2), (3, 1, 2)] {
            for gamma in 0..=delta {
                assert_eq!(
                    build_r(gamma, delta, alpha, beta).unwrap().canonical_code(),
                    build_q(gamma, delta, alpha).unwrap().canonical_code()
                );
            }
        }
    }

    #[test]
    fn s_full_fanout_contains_next_t() {
        for (delta, alpha) in [(2, 0), (2, 1), (2, 2), (3, 0), (3, 1)] {
            let s = build_s(delta, delta, alpha).unwrap();
            let t = build_t(delta, alpha + 1).unwrap();
            assert!(rooted_contains(&s, &t), "delta={} alpha={}", delta, alpha);
        }
    }

    #[test]
    fn rooted_contains_basics() {
        let t21 = build_t(2, 1).unwrap();
        let t22 = build_t(2, 2).unwrap();
        assert!(rooted_contains(&t22, &t21));
        assert!(!rooted_contains(&t21, &t22));
        assert!(rooted_contains(&t21, &RootedTree::single()));
        // A path of height 2 does not contain the 2-fanout star rooted.
        let path2 = RootedTree::parse_paren("((()))").unwrap();
        assert!(!rooted_contains(&path2, &t21));
        assert!(rooted_contains(&t22, &path2));
    }

    #[test]
    fn rooted_contains_needs_room_at_every_level() {
        // Root with two chains has the right size and height for T(2,2) at
        // the top but fanout 1 below, so containment must fail.
        let mut host = RootedTree::single();
        let chain = RootedTree::parse_paren("((()))").unwrap();
        host.graft(RootedTree::ROOT, &chain);
        host.graft(RootedTree::ROOT, &chain);
        assert!(!rooted_contains(&host, &build_t(2, 2).unwrap()));
        assert!(rooted_contains(&host, &build_t(2, 1).unwrap()));
    }

    #[test]
    fn parse_paren_shapes() {
        assert_eq!(RootedTree::parse_paren("()").unwrap().len(), 1);
        let star = RootedTree::parse_paren("(()())").unwrap();
        assert_eq!(star.canonical_code(), build_t(2, 1).unwrap().canonical_code());
        assert!(RootedTree::parse_paren("(()").is_err());
        assert!(RootedTree::parse_paren("()()").is_err());
        assert!(RootedTree::parse_paren("").is_err());
    }

    #[test]
    fn ordered_tree_counts() {
        // m^(m-2) labelled trees: 1, 1, 3, 16, 125, 1296.
        let expect = [1usize, 1, 3, 16, 125, 1296];
        for (m, &count) in (1..=6).zip(&expect) {
            let trees = enumerate_ordered_trees(m).unwrap();
            assert_eq!(trees.len(), count, "m={}", m);
            // no duplicate canonical codes
            let mut codes: Vec<_> = trees.iter().map(|t| t.canonical_code().to_vec()).collect();
            codes.sort();
            codes.dedup();
            assert_eq!(codes.len(), count);
        }
    }

    #[test]
    fn ordered_tree_budget() {
        assert!(enumerate_ordered_trees(8).is_err());
        assert!(enumerate_ordered_trees_with_budget(8, 8).is_ok());
        assert!(enumerate_ordered_trees(0).is_err());
    }

    #[test]
    fn ordered_tree_validation() {
        assert!(OrderedTree::from_edges(3, &[(0, 1)]).is_err()); // too few edges
        assert!(OrderedTree::from_edges(3, &[(0, 1), (0, 1)]).is_err()); // duplicate
        assert!(OrderedTree::from_edges(4, &[(0, 1), (2, 3), (1, 0)]).is_err());
        assert!(OrderedTree::from_edges(3, &[(0, 1), (1, 2)]).is_ok());
    }

    #[test]
    fn ordered_tree_codes_are_edge_lists() {
        let t = OrderedTree::from_edges(4, &[(2, 0), (1, 3), (1, 2)]).unwrap();
        assert_eq!(t.canonical_code(), &[(0, 2), (1, 2), (1, 3)]);
        assert!(t.has_edge(3, 1));
        assert!(!t.has_edge(0, 3));
    }
}
