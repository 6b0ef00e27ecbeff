//! Trichotomy certificates and the coherence decision.
//!
//! Every graph on two or more vertices either contains an induced copy of a
//! given forest, has a vertex of degree at least eps*n, or has an
//! anticomplete pair with both sides at least eps*n (the last two refute
//! eps-coherence). [`certify_trichotomy`] searches for a certificate in cost
//! order and every certificate carries enough data for [`Certificate::verify`]
//! to re-check it from scratch.
//!
//! The module also exports brute-force reference oracles
//! ([`subset_closure_value`], [`induced_copy_by_enumeration`]) that decide the
//! same questions by exhaustive enumeration; the test suites pit the fast
//! searchers against them.

use crate::bits::VertexSet;
use crate::frac::{ceil_mul, format_frac, Frac};
use crate::graph::Graph;
use crate::rng::rng_from_seed;
use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CertifyError {
    #[error("pattern on {m} vertices exceeds the search budget {budget}")]
    PatternBudget { m: usize, budget: usize },
    #[error("pattern is not a forest")]
    NotAForest,
    #[error("exact pair search capped at {bound} vertices, graph has {n}")]
    ExactBound { n: usize, bound: usize },
}

pub const FOREST_PATTERN_BUDGET: usize = 10;
pub const EXACT_PAIR_BOUND: usize = 24;

// ============================================================
// Induced forest copies
// ============================================================

/// Exact search for an induced copy of the forest `f` in `g`: an injective
/// map preserving edges and non-edges. Returns the map pattern label ->
/// host vertex; None is authoritative.
pub fn find_induced_forest(g: &Graph, f: &Graph) -> Result<Option<Vec<usize>>, CertifyError> {
    find_induced_forest_with_budget(g, f, FOREST_PATTERN_BUDGET)
}

pub fn find_induced_forest_with_budget(
    g: &Graph,
    f: &Graph,
    budget: usize,
) -> Result<Option<Vec<usize>>, CertifyError> {
    if !f.is_forest() {
        return Err(CertifyError::NotAForest);
    }
    if f.len() > budget {
        return Err(CertifyError::PatternBudget { m: f.len(), budget });
    }
    let m = f.len();
    if m == 0 {
        return Ok(Some(Vec::new()));
    }
    if m > g.len() {
        return Ok(None);
    }
    // BFS order per component: each non-root label has a placed neighbour,
    // so its candidates shrink to that image's host neighbourhood.
    let mut order: Vec<(usize, Option<usize>)> = Vec::with_capacity(m);
    let mut seen = vec![false; m];
    for start in 0..m {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = std::collections::VecDeque::from([(start, None)]);
        while let Some((v, parent)) = queue.pop_front() {
            order.push((v, parent));
            for u in f.neighbors(v).iter() {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back((u, Some(v)));
                }
            }
        }
    }

    let mut image = vec![usize::MAX; m];
    let mut used = vec![false; g.len()];
    if embed_slot(g, f, &order, 0, &mut image, &mut used) {
        debug_assert!(verify_induced_embedding(g, f, &image).is_ok());
        Ok(Some(image))
    } else {
        Ok(None)
    }
}

fn embed_slot(
    g: &Graph,
    f: &Graph,
    order: &[(usize, Option<usize>)],
    slot: usize,
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    if slot == order.len() {
        return true;
    }
    let (label, parent) = order[slot];
    let try_vertex = |v: usize, image: &mut [usize], used: &mut [bool]| -> bool {
        if used[v] || g.degree(v) < f.degree(label) {
            return false;
        }
        let consistent = order[..slot]
            .iter()
            .all(|&(q, _)| g.has_edge(image[q], v) == f.has_edge(q, label));
        if !consistent {
            return false;
        }
        image[label] = v;
        used[v] = true;
        if embed_slot(g, f, order, slot + 1, image, used) {
            return true;
        }
        image[label] = usize::MAX;
        used[v] = false;
        false
    };
    match parent {
        Some(p) => {
            let anchor = image[p];
            for v in g.neighbors(anchor).iter() {
                if try_vertex(v, image, used) {
                    return true;
                }
            }
        }
        None => {
            for v in 0..g.len() {
                if try_vertex(v, image, used) {
                    return true;
                }
            }
        }
    }
    false
}

/// Re-checks an induced embedding independently of the search: injective,
/// in range, edges and non-edges both preserved.
pub fn verify_induced_embedding(g: &Graph, f: &Graph, image: &[usize]) -> Result<(), String> {
    if image.len() != f.len() {
        return Err(format!("image covers {} labels, pattern has {}", image.len(), f.len()));
    }
    for (l, &v) in image.iter().enumerate() {
        if v >= g.len() {
            return Err(format!("label {} mapped to out-of-range vertex {}", l, v));
        }
    }
    for a in 0..image.len() {
        for b in (a + 1)..image.len() {
            if image[a] == image[b] {
                return Err(format!("labels {} and {} share vertex {}", a, b, image[a]));
            }
            if g.has_edge(image[a], image[b]) != f.has_edge(a, b) {
                return Err(format!(
                    "labels {}-{}: host edge {}, pattern edge {}",
                    a,
                    b,
                    g.has_edge(image[a], image[b]),
                    f.has_edge(a, b)
                ));
            }
        }
    }
    Ok(())
}

/// Reference oracle: does `g` contain an induced copy of `f`? Tries every
/// injective placement via plain permutation enumeration, no pruning, no
/// shared code with the searcher. Desk scale only.
pub fn induced_copy_by_enumeration(g: &Graph, f: &Graph) -> bool {
    let m = f.len();
    if m == 0 {
        return true;
    }
    if m > g.len() {
        return false;
    }
    (0..g.len()).permutations(m).any(|image| {
        (0..m).tuple_combinations().all(|(a, b)| g.has_edge(image[a], image[b]) == f.has_edge(a, b))
    })
}

// ============================================================
// Anticomplete pairs
// ============================================================

#[derive(Clone, Debug)]
pub enum PairMode {
    /// Lexicographic branch-and-bound; both Found and Absent are
    /// authoritative.
    Exact,
    /// Randomized growth with restarts: vertices move from the separator
    /// into the two sides while no cross edge appears. Found is
    /// authoritative, a miss is only Unknown.
    Heuristic { restarts: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairOutcome {
    Found(VertexSet, VertexSet),
    /// No pair exists (exact search, or 2k > n).
    Absent,
    /// Heuristic budget exhausted without a witness.
    Unknown,
}

impl PairOutcome {
    pub fn found(&self) -> Option<(&VertexSet, &VertexSet)> {
        match self {
            PairOutcome::Found(a, b) => Some((a, b)),
            _ => None,
        }
    }
}

/// Disjoint A, B with |A| = |B| = k and no edge between them. The best
/// partner of a fixed A is exactly V minus A and its neighbourhood, so the
/// search branches on A alone; the partner only shrinks as A grows, which
/// gives the bound. Exact mode returns the lexicographically first pair.
pub fn find_anticomplete_pair(g: &Graph, k: usize, mode: &PairMode) -> PairOutcome {
    assert!(k >= 1, "pair size must be positive");
    if 2 * k > g.len() {
        return PairOutcome::Absent;
    }
    match mode {
        PairMode::Exact => {
            let mut a = Vec::with_capacity(k);
            match pair_branch(g, k, 0, &mut a, &VertexSet::new(g.len())) {
                Some((a, b)) => PairOutcome::Found(a, b),
                None => PairOutcome::Absent,
            }
        }
        PairMode::Heuristic { restarts, seed } => match grow_pair(g, k, *restarts, *seed) {
            Some((a, b)) => PairOutcome::Found(a, b),
            None => PairOutcome::Unknown,
        },
    }
}

fn pair_branch(
    g: &Graph,
    k: usize,
    start: usize,
    a: &mut Vec<usize>,
    blocked: &VertexSet, // A together with its neighbourhood
) -> Option<(VertexSet, VertexSet)> {
    let n = g.len();
    let partner = blocked.complement();
    if partner.len() < k {
        return None; // partner only shrinks below here
    }
    if a.len() == k {
        let b = VertexSet::from_iter(n, partner.iter().take(k));
        return Some((VertexSet::from_iter(n, a.iter().copied()), b));
    }
    for v in start..n {
        if n - v < k - a.len() {
            break;
        }
        let mut blocked2 = blocked.clone();
        blocked2.insert(v);
        blocked2.union_with(g.neighbors(v));
        a.push(v);
        let hit = pair_branch(g, k, v + 1, a, &blocked2);
        a.pop();
        if hit.is_some() {
            return hit;
        }
    }
    None
}

fn grow_pair(g: &Graph, k: usize, restarts: u64, seed: u64) -> Option<(VertexSet, VertexSet)> {
    let n = g.len();
    let mut rng = rng_from_seed(seed);
    for _ in 0..restarts.max(1) {
        let u = rng.gen_range(0..n);
        let mut far = g.neighbors(u).complement();
        far.remove(u);
        if far.is_empty() {
            continue;
        }
        let far_vec = far.to_vec();
        let w = far_vec[rng.gen_range(0..far_vec.len())];
        let mut a = VertexSet::from_iter(n, [u]);
        let mut b = VertexSet::from_iter(n, [w]);
        let mut na = g.neighbors(u).clone();
        let mut nb = g.neighbors(w).clone();
        let mut pool: Vec<usize> = (0..n).filter(|&v| v != u && v != w).collect();
        pool.shuffle(&mut rng);
        // one pass is enough: a vertex rejected now stays rejected, since
        // the neighbourhood unions only grow
        for v in pool {
            if a.len() < b.len() || (a.len() == b.len() && rng.gen_bool(0.5)) {
                // prefer the smaller side
                if !nb.contains(v) && !b.contains(v) {
                    a.insert(v);
                    na.union_with(g.neighbors(v));
                    continue;
                }
            }
            if !na.contains(v) && !a.contains(v) {
                b.insert(v);
                nb.union_with(g.neighbors(v));
            } else if !nb.contains(v) && !b.contains(v) {
                a.insert(v);
                na.union_with(g.neighbors(v));
            }
        }
        if a.len() >= k && b.len() >= k {
            let a = VertexSet::from_iter(n, a.iter().take(k));
            let b = VertexSet::from_iter(n, b.iter().take(k));
            debug_assert!(g.are_anticomplete(&a, &b).unwrap());
            return Some((a, b));
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairValue {
    pub value: usize,
    pub witness: Option<(VertexSet, VertexSet)>,
    /// Whether `value` is proven maximal (exact mode) or just a lower bound.
    pub exact: bool,
}

#[derive(Clone, Debug)]
pub enum ValueMode {
    /// Errors when the graph exceeds `bound` vertices.
    Exact { bound: usize },
    Heuristic { restarts: u64, seed: u64 },
}

impl Default for ValueMode {
    fn default() -> Self {
        ValueMode::Exact { bound: EXACT_PAIR_BOUND }
    }
}

/// a(G): the largest k admitting an anticomplete pair with both sides of
/// size k, with a witness; 0 when none exists (complete graphs).
pub fn max_anticomplete_value(g: &Graph, mode: &ValueMode) -> Result<PairValue, CertifyError> {
    let n = g.len();
    let (probe, exact): (Box<dyn Fn(usize) -> PairOutcome>, bool) = match mode {
        ValueMode::Exact { bound } => {
            if n > *bound {
                return Err(CertifyError::ExactBound { n, bound: *bound });
            }
            (Box::new(|k| find_anticomplete_pair(g, k, &PairMode::Exact)), true)
        }
        ValueMode::Heuristic { restarts, seed } => {
            let (r, s) = (*restarts, *seed);
            (
                Box::new(move |k| {
                    find_anticomplete_pair(g, k, &PairMode::Heuristic { restarts: r, seed: s })
                }),
                false,
            )
        }
    };
    let mut best = PairValue { value: 0, witness: None, exact };
    for k in 1..=n / 2 {
        match probe(k) {
            PairOutcome::Found(a, b) => best = PairValue { value: k, witness: Some((a, b)), exact },
            _ => break, // monotone in k
        }
    }
    Ok(best)
}

/// Reference oracle for a(G): full 2^n sweep. For every subset A the best
/// partner is V minus A and N(A); N(A) comes from a one-word-per-mask DP, so
/// the whole sweep is O(2^n) word operations. Desk scale only (n <= 22,
/// which also caps the DP table at 16MB).
pub fn subset_closure_value(g: &Graph) -> usize {
    let n = g.len();
    assert!(n <= 22, "subset oracle is exponential; {} vertices is too many", n);
    if n < 2 {
        return 0;
    }
    let rows: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, u| m | 1 << u))
        .collect();
    let full: u32 = (1 << n) - 1;
    let mut nbhd = vec![0u32; 1 << n];
    let mut best = 0usize;
    for mask in 1u32..=full {
        let low = mask.trailing_zeros() as usize;
        nbhd[mask as usize] = nbhd[(mask & (mask - 1)) as usize] | rows[low];
        let partner = full & !(mask | nbhd[mask as usize]);
        let value = (mask.count_ones() as usize).min(partner.count_ones() as usize);
        best = best.max(value);
    }
    best
}

// ============================================================
// Coherence
// ============================================================

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoherenceVerdict {
    Coherent,
    /// A graph on at most one vertex is never coherent.
    TooSmall,
    /// Some vertex has degree >= eps * n (coherence needs strictly less).
    HighDegree { vertex: usize, degree: usize },
    /// An anticomplete pair with both sides >= eps * n.
    BigAnticompletePair { a: VertexSet, b: VertexSet },
    /// No refutation found, but the graph is too large for the exact pair
    /// search that a positive verdict requires.
    Unverified,
}

impl CoherenceVerdict {
    pub fn is_coherent(&self) -> bool {
        matches!(self, CoherenceVerdict::Coherent)
    }
}

#[derive(Clone, Debug)]
pub struct CoherenceConfig {
    pub exact_bound: usize,
    pub heuristic_restarts: u64,
    pub seed: u64,
}

impl Default for CoherenceConfig {
    fn default() -> Self {
        CoherenceConfig { exact_bound: EXACT_PAIR_BOUND, heuristic_restarts: 64, seed: 0 }
    }
}

/// Is `g` eps-coherent: more than one vertex, every degree strictly below
/// eps*n, and no anticomplete pair with both sides at least eps*n? Strict
/// and non-strict thresholds are exact rational comparisons. A Coherent
/// verdict needs the exact pair search; past the bound only refutations can
/// be trusted, so a quiet search is Unverified.
pub fn is_epsilon_coherent(g: &Graph, eps: Frac, cfg: &CoherenceConfig) -> CoherenceVerdict {
    assert!(eps > crate::frac::frac(0, 1), "eps must be positive");
    let n = g.len();
    if n <= 1 {
        return CoherenceVerdict::TooSmall;
    }
    let (vertex, degree) = g.max_degree().unwrap();
    if !crate::frac::below_frac(degree, eps, n) {
        return CoherenceVerdict::HighDegree { vertex, degree };
    }
    let k = ceil_mul(eps, n).max(1);
    if n <= cfg.exact_bound {
        match find_anticomplete_pair(g, k, &PairMode::Exact) {
            PairOutcome::Found(a, b) => CoherenceVerdict::BigAnticompletePair { a, b },
            _ => CoherenceVerdict::Coherent,
        }
    } else {
        let mode = PairMode::Heuristic { restarts: cfg.heuristic_restarts, seed: cfg.seed };
        match find_anticomplete_pair(g, k, &mode) {
            PairOutcome::Found(a, b) => CoherenceVerdict::BigAnticompletePair { a, b },
            PairOutcome::Absent => CoherenceVerdict::Coherent, // 2k > n, no search needed
            PairOutcome::Unknown => CoherenceVerdict::Unverified,
        }
    }
}

// ============================================================
// The trichotomy
// ============================================================

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchLog {
    pub threshold: usize,
    pub max_degree: usize,
    pub pattern_size: usize,
    /// "exact" or "heuristic": which pair search ran.
    pub pair_mode: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    InducedCopy { image: Vec<usize> },
    HighDegreeVertex { vertex: usize, degree: usize },
    AnticompletePair { a: VertexSet, b: VertexSet },
    /// All three searches came up empty. With an exact pair mode this is an
    /// extremal example worth keeping, not an error.
    NotFound { log: SearchLog },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::InducedCopy { .. } => "induced-copy",
            Certificate::HighDegreeVertex { .. } => "high-degree",
            Certificate::AnticompletePair { .. } => "anticomplete-pair",
            Certificate::NotFound { .. } => "not-found",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Certificate::InducedCopy { .. } => 0,
            Certificate::HighDegreeVertex { .. } => 1,
            Certificate::AnticompletePair { .. } => 2,
            Certificate::NotFound { .. } => 3,
        }
    }

    /// Independent re-check against the instance. NotFound asserts nothing
    /// and verifies vacuously.
    pub fn verify(&self, g: &Graph, f: &Graph, eps: Frac) -> Result<(), String> {
        let threshold = ceil_mul(eps, g.len()).max(1);
        match self {
            Certificate::InducedCopy { image } => verify_induced_embedding(g, f, image),
            Certificate::HighDegreeVertex { vertex, degree } => {
                if *vertex >= g.len() {
                    return Err(format!("vertex {} out of range", vertex));
                }
                if g.degree(*vertex) != *degree {
                    return Err(format!(
                        "vertex {} has degree {}, certificate says {}",
                        vertex,
                        g.degree(*vertex),
                        degree
                    ));
                }
                if *degree < threshold {
                    return Err(format!("degree {} below threshold {}", degree, threshold));
                }
                Ok(())
            }
            Certificate::AnticompletePair { a, b } => {
                if a.len() < threshold || b.len() < threshold {
                    return Err(format!(
                        "sides {} and {} below threshold {}",
                        a.len(),
                        b.len(),
                        threshold
                    ));
                }
                match g.are_anticomplete(a, b) {
                    Ok(true) => Ok(()),
                    Ok(false) => Err("sets are not anticomplete".into()),
                    Err(e) => Err(e.to_string()),
                }
            }
            Certificate::NotFound { .. } => Ok(()),
        }
    }

    pub fn to_json(&self, eps: Frac) -> serde_json::Value {
        let base = serde_json::json!({
            "kind": self.kind(),
            "exit_code": self.exit_code(),
            "eps": format_frac(eps),
        });
        let mut obj = base.as_object().unwrap().clone();
        match self {
            Certificate::InducedCopy { image } => {
                obj.insert("image".into(), serde_json::json!(image));
            }
            Certificate::HighDegreeVertex { vertex, degree } => {
                obj.insert("vertex".into(), serde_json::json!(vertex));
                obj.insert("degree".into(), serde_json::json!(degree));
            }
            Certificate::AnticompletePair { a, b } => {
                obj.insert("a".into(), serde_json::json!(a.to_vec()));
                obj.insert("b".into(), serde_json::json!(b.to_vec()));
            }
            Certificate::NotFound { log } => {
                obj.insert(
                    "log".into(),
                    serde_json::json!({
                        "threshold": log.threshold,
                        "max_degree": log.max_degree,
                        "pattern_size": log.pattern_size,
                        "pair_mode": log.pair_mode,
                    }),
                );
            }
        }
        serde_json::Value::Object(obj)
    }
}

#[derive(Clone, Debug)]
pub struct TrichotomyConfig {
    pub pattern_budget: usize,
    pub exact_pair_bound: usize,
    pub heuristic_restarts: u64,
    pub seed: u64,
}

impl Default for TrichotomyConfig {
    fn default() -> Self {
        TrichotomyConfig {
            pattern_budget: FOREST_PATTERN_BUDGET,
            exact_pair_bound: EXACT_PAIR_BOUND,
            heuristic_restarts: 64,
            seed: 0,
        }
    }
}

/// Finds a trichotomy certificate for (g, f, eps), checking in cost order:
/// high degree (linear scan), induced copy (backtracking), anticomplete
/// pair (exact within the bound, heuristic past it). Requires eps > 0 and
/// at least two vertices.
pub fn certify_trichotomy(
    g: &Graph,
    f: &Graph,
    eps: Frac,
    cfg: &TrichotomyConfig,
) -> Result<Certificate, CertifyError> {
    assert!(eps > crate::frac::frac(0, 1), "eps must be positive");
    assert!(g.len() >= 2, "trichotomy needs at least two vertices");
    let n = g.len();
    let threshold = ceil_mul(eps, n).max(1);

    let (vertex, degree) = g.max_degree().unwrap();
    if degree >= threshold {
        return Ok(Certificate::HighDegreeVertex { vertex, degree });
    }
    if let Some(image) = find_induced_forest_with_budget(g, f, cfg.pattern_budget)? {
        return Ok(Certificate::InducedCopy { image });
    }
    let (mode, mode_name) = if n <= cfg.exact_pair_bound {
        (PairMode::Exact, "exact")
    } else {
        (PairMode::Heuristic { restarts: cfg.heuristic_restarts, seed: cfg.seed }, "heuristic")
    };
    match find_anticomplete_pair(g, threshold, &mode) {
        PairOutcome::Found(a, b) => Ok(Certificate::AnticompletePair { a, b }),
        _ => Ok(Certificate::NotFound {
            log: SearchLog {
                threshold,
                max_degree: degree,
                pattern_size: f.len(),
                pair_mode: mode_name,
            },
        }),
    }
}

// ============================================================
// Pure pairs
// ============================================================

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarity {
    Complete,
    Anticomplete,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PurePairOutcome {
    Found { a: VertexSet, b: VertexSet, polarity: Polarity },
    Absent,
    Unknown,
}

/// Pure pair of size k: disjoint A, B, each of size k, with either every
/// cross pair an edge or none. Anticomplete is searched on g first, then on
/// the complement (where an anticomplete pair is a complete pair of g).
pub fn pure_pair(g: &Graph, k: usize, mode: &PairMode) -> PurePairOutcome {
    match find_anticomplete_pair(g, k, mode) {
        PairOutcome::Found(a, b) => {
            return PurePairOutcome::Found { a, b, polarity: Polarity::Anticomplete }
        }
        PairOutcome::Absent => match find_anticomplete_pair(&g.complement(), k, mode) {
            PairOutcome::Found(a, b) => {
                PurePairOutcome::Found { a, b, polarity: Polarity::Complete }
            }
            PairOutcome::Absent => PurePairOutcome::Absent,
            PairOutcome::Unknown => PurePairOutcome::Unknown,
        },
        PairOutcome::Unknown => match find_anticomplete_pair(&g.complement(), k, mode) {
            PairOutcome::Found(a, b) => {
                PurePairOutcome::Found { a, b, polarity: Polarity::Complete }
            }
            _ => PurePairOutcome::Unknown,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frac::frac;

    #[test]
    fn single_vertex_pattern_embeds_anywhere() {
        let g = Graph::path(3);
        let f = Graph::empty(1);
        assert_eq!(find_induced_forest(&g, &f).unwrap(), Some(vec![0]));
        assert_eq!(find_induced_forest(&Graph::empty(0), &f).unwrap(), None);
    }

    #[test]
    fn no_induced_path_in_a_clique() {
        let p4 = Graph::path(4);
        assert_eq!(find_induced_forest(&Graph::complete(4), &p4).unwrap(), None);
        assert_eq!(find_induced_forest(&Graph::complete(7), &p4).unwrap(), None);
        // non-induced subgraph copies exist, so this is really testing
        // the non-edge constraints
        assert!(induced_copy_by_enumeration(&Graph::complete(4), &Graph::path(2)));
        assert!(!induced_copy_by_enumeration(&Graph::complete(4), &p4));
    }

    #[test]
    fn forest_components_need_mutual_nonadjacency() {
        let two_edges = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        // C4: any two disjoint edges have a cross edge
        assert_eq!(find_induced_forest(&Graph::cycle(4), &two_edges).unwrap(), None);
        // P5: the two end edges work
        let hit = find_induced_forest(&Graph::path(5), &two_edges).unwrap().unwrap();
        verify_induced_embedding(&Graph::path(5), &two_edges, &hit).unwrap();
    }

    #[test]
    fn chair_in_itself_and_not_in_star() {
        let chair = Graph::chair();
        let hit = find_induced_forest(&chair, &chair).unwrap().unwrap();
        verify_induced_embedding(&chair, &chair, &hit).unwrap();
        assert_eq!(find_induced_forest(&Graph::star(6), &chair).unwrap(), None);
    }

    #[test]
    fn pattern_validation() {
        let g = Graph::complete(5);
        assert_eq!(
            find_induced_forest(&g, &Graph::cycle(3)),
            Err(CertifyError::NotAForest)
        );
        assert_eq!(
            find_induced_forest(&g, &Graph::path(11)),
            Err(CertifyError::PatternBudget { m: 11, budget: 10 })
        );
        assert!(find_induced_forest_with_budget(&Graph::path(11), &Graph::path(11), 11).is_ok());
    }

    #[test]
    fn embedding_verifier_rejects_corruption() {
        let g = Graph::path(4);
        let f = Graph::path(3);
        let good = find_induced_forest(&g, &f).unwrap().unwrap();
        assert!(verify_induced_embedding(&g, &f, &good).is_ok());
        assert!(verify_induced_embedding(&g, &f, &[0, 0, 1]).is_err()); // repeat
        assert!(verify_induced_embedding(&g, &f, &[0, 1]).is_err()); // short
        assert!(verify_induced_embedding(&g, &f, &[0, 2, 1]).is_err()); // wrong adjacency
        assert!(verify_induced_embedding(&g, &f, &[0, 1, 9]).is_err()); // out of range
    }

    #[test]
    fn searcher_agrees_with_enumeration_oracle() {
        let patterns = [
            Graph::empty(2),
            Graph::path(3),
            Graph::path(4),
            Graph::star(3),
            Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap(),
        ];
        for seed in 0..60 {
            let g = Graph::gnp(8, 0.35, seed);
            for f in &patterns {
                let fast = find_induced_forest(&g, f).unwrap();
                let slow = induced_copy_by_enumeration(&g, f);
                assert_eq!(fast.is_some(), slow, "seed {} pattern {:?}", seed, f);
                if let Some(image) = fast {
                    verify_induced_embedding(&g, f, &image).unwrap();
                }
            }
        }
    }

    #[test]
    fn pair_on_path_is_lex_first() {
        let g = Graph::path(4);
        match find_anticomplete_pair(&g, 1, &PairMode::Exact) {
            PairOutcome::Found(a, b) => {
                assert_eq!(a.to_vec(), vec![0]);
                assert_eq!(b.to_vec(), vec![2]);
            }
            other => panic!("expected a pair, got {:?}", other),
        }
    }

    #[test]
    fn complete_graph_has_no_pair() {
        assert_eq!(
            find_anticomplete_pair(&Graph::complete(6), 1, &PairMode::Exact),
            PairOutcome::Absent
        );
    }

    #[test]
    fn five_cycle_pair_values() {
        let c5 = Graph::cycle(5);
        assert!(matches!(
            find_anticomplete_pair(&c5, 1, &PairMode::Exact),
            PairOutcome::Found(_, _)
        ));
        assert_eq!(find_anticomplete_pair(&c5, 2, &PairMode::Exact), PairOutcome::Absent);
        let v = max_anticomplete_value(&c5, &ValueMode::default()).unwrap();
        assert_eq!(v.value, 1);
        assert!(v.exact);
        assert_eq!(subset_closure_value(&c5), 1);
    }

    #[test]
    fn value_extremes() {
        assert_eq!(max_anticomplete_value(&Graph::complete(6), &ValueMode::default()).unwrap().value, 0);
        let v = max_anticomplete_value(&Graph::empty(8), &ValueMode::default()).unwrap();
        assert_eq!(v.value, 4);
        let (a, b) = v.witness.unwrap();
        assert!(Graph::empty(8).are_anticomplete(&a, &b).unwrap());
        assert_eq!(max_anticomplete_value(&Graph::empty(7), &ValueMode::default()).unwrap().value, 3);
        assert_eq!(max_anticomplete_value(&Graph::empty(1), &ValueMode::default()).unwrap().value, 0);
        assert_eq!(subset_closure_value(&Graph::empty(8)), 4);
        assert_eq!(subset_closure_value(&Graph::complete(6)), 0);
    }

    #[test]
    fn value_bound_is_enforced() {
        let g = Graph::empty(25);
        assert_eq!(
            max_anticomplete_value(&g, &ValueMode::Exact { bound: 24 }),
            Err(CertifyError::ExactBound { n: 25, bound: 24 })
        );
        let v = max_anticomplete_value(&g, &ValueMode::Heuristic { restarts: 16, seed: 1 }).unwrap();
        assert!(!v.exact);
        assert!(v.value >= 1, "edgeless graph has easy pairs");
    }

    #[test]
    fn exact_value_matches_subset_oracle() {
        for seed in 0..120 {
            let g = Graph::gnp(8, 0.3 + (seed % 5) as f64 * 0.1, seed);
            let fast = max_anticomplete_value(&g, &ValueMode::default()).unwrap();
            assert_eq!(fast.value, subset_closure_value(&g), "seed {}", seed);
            if let Some((a, b)) = &fast.witness {
                assert!(g.are_anticomplete(a, b).unwrap());
                assert_eq!(a.len(), fast.value);
                assert_eq!(b.len(), fast.value);
            }
        }
    }

    #[test]
    fn pair_monotone_in_k() {
        for seed in 0..40 {
            let g = Graph::gnp(14, 0.25, seed);
            let found: Vec<bool> = (1..=7)
                .map(|k| {
                    matches!(find_anticomplete_pair(&g, k, &PairMode::Exact), PairOutcome::Found(..))
                })
                .collect();
            for w in found.windows(2) {
                assert!(w[0] || !w[1], "found at k+1 but not k, seed {}", seed);
            }
        }
    }

    #[test]
    fn heuristic_finds_obvious_split() {
        // two 15-cliques with no cross edges
        let mut edges = Vec::new();
        for u in 0..15 {
            for v in (u + 1)..15 {
                edges.push((u, v));
                edges.push((u + 15, v + 15));
            }
        }
        let g = Graph::from_edges(30, &edges).unwrap();
        match find_anticomplete_pair(&g, 10, &PairMode::Heuristic { restarts: 32, seed: 7 }) {
            PairOutcome::Found(a, b) => {
                assert!(g.are_anticomplete(&a, &b).unwrap());
                assert!(a.len() >= 10 && b.len() >= 10);
            }
            other => panic!("expected a pair, got {:?}", other),
        }
        // on a clique the heuristic can only say Unknown
        assert_eq!(
            find_anticomplete_pair(&Graph::complete(30), 1, &PairMode::Heuristic {
                restarts: 8,
                seed: 3
            }),
            PairOutcome::Unknown
        );
    }

    #[test]
    fn coherence_small_graphs() {
        let cfg = CoherenceConfig::default();
        assert_eq!(is_epsilon_coherent(&Graph::empty(1), frac(1, 2), &cfg), CoherenceVerdict::TooSmall);
        assert_eq!(is_epsilon_coherent(&Graph::empty(0), frac(1, 2), &cfg), CoherenceVerdict::TooSmall);
        // two isolated vertices: a singleton anticomplete pair at eps <= 1/n
        match is_epsilon_coherent(&Graph::empty(4), frac(1, 4), &cfg) {
            CoherenceVerdict::BigAnticompletePair { a, b } => {
                assert_eq!(a.len(), 1);
                assert_eq!(b.len(), 1);
            }
            other => panic!("expected pair refutation, got {:?}", other),
        }
    }

    #[test]
    fn coherence_degree_bound_is_strict() {
        // C5 at eps=2/5: every degree is exactly 2 = eps*n, which violates
        // the strict bound. At eps=1/2 the degree passes and no pair of
        // sides >= 3 fits in 5 vertices.
        let c5 = Graph::cycle(5);
        let cfg = CoherenceConfig::default();
        match is_epsilon_coherent(&c5, frac(2, 5), &cfg) {
            CoherenceVerdict::HighDegree { degree, .. } => assert_eq!(degree, 2),
            other => panic!("expected degree refutation, got {:?}", other),
        }
        assert_eq!(is_epsilon_coherent(&c5, frac(1, 2), &cfg), CoherenceVerdict::Coherent);
    }

    #[test]
    fn coherent_graphs_exceed_inverse_eps() {
        let cfg = CoherenceConfig::default();
        for seed in 0..60 {
            let g = Graph::gnp(12, 0.5, seed);
            for eps in [frac(1, 3), frac(2, 5), frac(1, 2)] {
                if is_epsilon_coherent(&g, eps, &cfg).is_coherent() {
                    let inv = frac(1, 1) / eps;
                    assert!(
                        crate::frac::Frac::from_integer(g.len() as i128) > inv,
                        "coherent at {:?} but n = {}",
                        eps,
                        g.len()
                    );
                }
            }
        }
    }

    #[test]
    fn coherence_monotone_in_eps() {
        let cfg = CoherenceConfig::default();
        for seed in 0..40 {
            let g = Graph::gnp(10, 0.5, seed);
            if is_epsilon_coherent(&g, frac(2, 5), &cfg).is_coherent() {
                for eps in [frac(1, 2), frac(3, 5), frac(7, 10)] {
                    assert!(
                        is_epsilon_coherent(&g, eps, &cfg).is_coherent(),
                        "coherence lost going up to {:?}, seed {}",
                        eps,
                        seed
                    );
                }
            }
        }
    }

    #[test]
    fn coherence_above_bound_gives_unverified_or_witness() {
        let cfg = CoherenceConfig { exact_bound: 10, ..Default::default() };
        // clique on 12: degree check refutes before the bound matters
        assert!(matches!(
            is_epsilon_coherent(&Graph::complete(12), frac(1, 2), &cfg),
            CoherenceVerdict::HighDegree { .. }
        ));
        // sparse graph past the bound: heuristic either refutes or abstains
        let g = Graph::gnp(12, 0.1, 5);
        match is_epsilon_coherent(&g, frac(1, 3), &cfg) {
            CoherenceVerdict::BigAnticompletePair { a, b } => {
                assert!(g.are_anticomplete(&a, &b).unwrap());
            }
            CoherenceVerdict::HighDegree { .. } | CoherenceVerdict::Unverified => {}
            other => panic!("positive verdict past the exact bound: {:?}", other),
        }
    }

    #[test]
    fn trichotomy_star_is_high_degree() {
        let g = Graph::star(9);
        let cert = certify_trichotomy(&g, &Graph::path(4), frac(1, 2), &Default::default()).unwrap();
        match &cert {
            Certificate::HighDegreeVertex { vertex, degree } => {
                assert_eq!(*vertex, 0);
                assert_eq!(*degree, 9);
            }
            other => panic!("expected high degree, got {:?}", other),
        }
        cert.verify(&g, &Graph::path(4), frac(1, 2)).unwrap();
        assert_eq!(cert.exit_code(), 1);
    }

    #[test]
    fn trichotomy_finds_copy_when_degree_passes() {
        // P4 in P4 at eps = 3/4: threshold 3 beats every degree, so the
        // copy search runs and succeeds. (At eps <= 1/2 the degree branch
        // fires first; the checks are ordered by cost, not preference.)
        let p4 = Graph::path(4);
        let cert = certify_trichotomy(&p4, &p4, frac(3, 4), &Default::default()).unwrap();
        match &cert {
            Certificate::InducedCopy { image } => {
                verify_induced_embedding(&p4, &p4, image).unwrap();
            }
            other => panic!("expected copy, got {:?}", other),
        }
        assert_eq!(cert.exit_code(), 0);
        let low = certify_trichotomy(&p4, &p4, frac(1, 4), &Default::default()).unwrap();
        assert!(matches!(low, Certificate::HighDegreeVertex { .. }));
    }

    #[test]
    fn trichotomy_pair_on_sparse_copy_free_host() {
        // edgeless host, pattern with an edge: degree 0, no copy, pair found
        let g = Graph::empty(8);
        let f = Graph::path(2);
        let cert = certify_trichotomy(&g, &f, frac(1, 4), &Default::default()).unwrap();
        match &cert {
            Certificate::AnticompletePair { a, b } => {
                assert!(a.len() >= 2 && b.len() >= 2);
            }
            other => panic!("expected pair, got {:?}", other),
        }
        cert.verify(&g, &f, frac(1, 4)).unwrap();
        assert_eq!(cert.exit_code(), 2);
    }

    #[test]
    fn trichotomy_not_found_is_logged() {
        // complete graph, induced P3 impossible, eps = 1 puts both
        // thresholds at n
        let g = Graph::complete(6);
        let cert = certify_trichotomy(&g, &Graph::path(3), frac(1, 1), &Default::default()).unwrap();
        match &cert {
            Certificate::NotFound { log } => {
                assert_eq!(log.threshold, 6);
                assert_eq!(log.max_degree, 5);
                assert_eq!(log.pair_mode, "exact");
            }
            other => panic!("expected not-found, got {:?}", other),
        }
        assert_eq!(cert.exit_code(), 3);
        cert.verify(&g, &Graph::path(3), frac(1, 1)).unwrap();
    }

    #[test]
    fn certificates_verify_on_random_instances() {
        let cfg = TrichotomyConfig::default();
        for seed in 0..50 {
            let g = Graph::gnp(12, 0.3, seed);
            let f = Graph::path(4);
            let cert = certify_trichotomy(&g, &f, frac(1, 6), &cfg).unwrap();
            cert.verify(&g, &f, frac(1, 6)).unwrap();
        }
    }

    #[test]
    fn certificate_json_shape() {
        let cert = Certificate::AnticompletePair {
            a: VertexSet::from_iter(6, [0, 1]),
            b: VertexSet::from_iter(6, [3, 4]),
        };
        let v = cert.to_json(frac(1, 3));
        assert_eq!(v["kind"], "anticomplete-pair");
        assert_eq!(v["exit_code"], 2);
        assert_eq!(v["eps"], "1/3");
        assert_eq!(v["a"][0], 0);
    }

    #[test]
    fn pure_pair_prefers_anticomplete() {
        // self-complementary P4: the anticomplete search hits first
        match pure_pair(&Graph::path(4), 1, &PairMode::Exact) {
            PurePairOutcome::Found { polarity, .. } => {
                assert_eq!(polarity, Polarity::Anticomplete)
            }
            other => panic!("expected a pure pair, got {:?}", other),
        }
    }

    #[test]
    fn pure_pair_on_extreme_hosts() {
        // complete graph: halves are a complete pair
        match pure_pair(&Graph::complete(4), 2, &PairMode::Exact) {
            PurePairOutcome::Found { a, b, polarity } => {
                assert_eq!(polarity, Polarity::Complete);
                assert_eq!(a.to_vec(), vec![0, 1]);
                assert_eq!(b.to_vec(), vec![2, 3]);
            }
            other => panic!("expected complete pair, got {:?}", other),
        }
        // edgeless: anticomplete immediately
        match pure_pair(&Graph::empty(6), 3, &PairMode::Exact) {
            PurePairOutcome::Found { polarity, .. } => {
                assert_eq!(polarity, Polarity::Anticomplete)
            }
            other => panic!("expected anticomplete pair, got {:?}", other),
        }
    }

    #[test]
    fn pure_pair_transfers_to_complement() {
        for seed in 0..30 {
            let g = Graph::gnp(10, 0.5, seed);
            let gc = g.complement();
            match pure_pair(&g, 2, &PairMode::Exact) {
                PurePairOutcome::Found { a, b, polarity } => {
                    // the witness flips polarity in the complement: an
                    // anticomplete pair of g is a complete pair of gc
                    let anti_in_gc = gc.are_anticomplete(&a, &b).unwrap();
                    match polarity {
                        Polarity::Anticomplete => assert!(!anti_in_gc),
                        Polarity::Complete => assert!(anti_in_gc),
                    }
                    // existence transfers both ways
                    assert!(matches!(
                        pure_pair(&gc, 2, &PairMode::Exact),
                        PurePairOutcome::Found { .. }
                    ));
                }
                PurePairOutcome::Absent => {
                    assert_eq!(pure_pair(&gc, 2, &PairMode::Exact), PurePairOutcome::Absent);
                }
                PurePairOutcome::Unknown => unreachable!("exact mode"),
            }
        }
    }
}
