//! The staged rainbow pipeline.
//!
//! Starting from an arbitrary blockade, the stages are: cost descent to a
//! support-invariant contraction, Ramsey extraction of a support-uniform
//! sub-blockade, interval grouping with a concavity verdict, and finally
//! the anchored escalation that either embeds the target tree or names the
//! hypothesis that failed. Every stage re-verifies its own contract and the
//! whole run is logged as one JSON record per phase.
//!
//! Paper-scale constants make these stages astronomically expensive, so the
//! parameter set has a toy mode; every toy override is recorded in the run
//! output rather than applied silently.

pub mod concave;
pub mod escalate;

pub use concave::{build_concave, find_leaf_extension, leaf_extended_pattern, ConcaveOutcome};
pub use escalate::{
    anchored_escalation, is_anchored, left_right_radius, AnchorVerdict, AnchoredMinor,
    EscalationOutcome, EscalationReport,
};

use crate::blockade::{Blockade, BlockadeError};
use crate::frac::{ceil_mul, format_frac, frac, Frac};
use crate::graph::Graph;
use crate::rainbow::{
    find_rainbow_copy, find_rainbow_unordered, is_support_invariant_with_memo,
    is_support_uniform_with_memo, trace_with_memo, verify_unordered, InvarianceMode,
    InvarianceVerdict, RainbowEmbedding, Support, TraceMemo, UniformityVerdict,
};
use crate::trees::{enumerate_ordered_trees, t_size, OrderedTree, TreeError};
use num::rational::Ratio;
use rand::seq::SliceRandom;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Blockade(#[from] BlockadeError),
    #[error("need {needed} surviving blocks, have {have}")]
    InsufficientLength { needed: usize, have: usize },
    #[error("cannot split {n} vertices into {k} nonempty blocks")]
    BadPartition { n: usize, k: usize },
    #[error("{0}")]
    BadParams(String),
}

// ============================================================
// Parameters
// ============================================================

/// Per-phase work caps. Exceeding one never aborts a run; the affected
/// verdict is reported as unverified instead.
#[derive(Clone, Debug)]
pub struct PhaseBudgets {
    /// Exhaustive subset-product cap per (tree, support) target in cost
    /// descent and invariance checking.
    pub invariance_combos: u64,
    /// Random joint shrink choices tried per over-budget descent target.
    pub descent_heuristic_samples: u64,
    /// Exhaustive X-subset cap per triple in concavity checking.
    pub concavity_subsets: u64,
    /// Sampled concavity candidates when the exhaustive cap is exceeded.
    pub concavity_samples: u64,
    /// Linear orders sampled when hunting for a happy-vertex order.
    pub order_samples: u64,
    /// Hard cap on escalation rounds (the gamma bound is the real limit).
    pub escalation_rounds: u64,
}

impl Default for PhaseBudgets {
    fn default() -> Self {
        PhaseBudgets {
            invariance_combos: 1 << 20,
            descent_heuristic_samples: 64,
            concavity_subsets: 1 << 20,
            concavity_samples: 10_000,
            order_samples: 10_000,
            escalation_rounds: 64,
        }
    }
}

/// Run parameters for the staged pipeline.
///
/// `paper` computes the published constants from (delta, eta); `toy` starts
/// from those and lets callers override individual values, recording each
/// override by name so run outputs cannot pass a toy run off as a paper one.
#[derive(Clone, Debug)]
pub struct PipelineParams {
    pub delta: usize,
    pub eta: usize,
    pub lambda: Frac,
    pub kappa: Frac,
    pub tau: usize,
    pub epsilon: Frac,
    /// Grouping arity: the uniform minor is cut into runs of this many
    /// blocks before the concavity stage.
    pub r_group: usize,
    /// Target length of the grouped blockade.
    pub k_final: usize,
    pub seed: u64,
    pub budgets: PhaseBudgets,
    /// Names of fields overridden away from the paper-mode values.
    pub overrides: Vec<String>,
}

impl PipelineParams {
    /// Published constants: lambda = 2^(-9 delta) * delta^(-1-eta),
    /// kappa = lambda / 2, tau = delta^(eta+1), r = ceil((|T|-1)/kappa),
    /// k = 6 delta^(eta+2).
    pub fn paper(
        delta: usize,
        eta: usize,
        epsilon: Frac,
        seed: u64,
    ) -> Result<Self, PipelineError> {
        if delta < 2 {
            return Err(PipelineError::BadParams(format!("delta must be >= 2, got {}", delta)));
        }
        let shift = 9 * delta as u32;
        let pow2 = if shift < 127 { 1i128 << shift } else { 0 };
        let powd = (delta as i128).checked_pow(eta as u32 + 1);
        let den = powd.and_then(|p| pow2.checked_mul(p)).filter(|&d| d > 0).ok_or_else(
            || PipelineError::BadParams("paper constants overflow; use toy overrides".into()),
        )?;
        let lambda: Frac = Ratio::new(1, den);
        let kappa = lambda / Frac::from_integer(2);
        let tau = delta.pow(eta as u32 + 1);
        let t_sz = t_size(delta, eta);
        let r_group = ceil_mul(kappa.recip(), t_sz - 1).max(1);
        let k_final = 6 * delta.pow(eta as u32 + 2);
        Ok(PipelineParams {
            delta,
            eta,
            lambda,
            kappa,
            tau,
            epsilon,
            r_group,
            k_final,
            seed,
            budgets: PhaseBudgets::default(),
            overrides: Vec::new(),
        })
    }

    /// Paper constants as the starting point for explicit overrides.
    pub fn toy(delta: usize, eta: usize, epsilon: Frac, seed: u64) -> Result<Self, PipelineError> {
        Self::paper(delta, eta, epsilon, seed)
    }

    pub fn with_lambda(mut self, lambda: Frac) -> Self {
        self.lambda = lambda;
        self.note_override("lambda");
        self
    }

    pub fn with_kappa(mut self, kappa: Frac) -> Self {
        self.kappa = kappa;
        self.note_override("kappa");
        self
    }

    pub fn with_tau(mut self, tau: usize) -> Self {
        self.tau = tau;
        self.note_override("tau");
        self
    }

    pub fn with_r_group(mut self, r: usize) -> Self {
        self.r_group = r;
        self.note_override("r_group");
        self
    }

    pub fn with_k_final(mut self, k: usize) -> Self {
        self.k_final = k;
        self.note_override("k_final");
        self
    }

    pub fn with_budgets(mut self, budgets: PhaseBudgets) -> Self {
        self.budgets = budgets;
        self
    }

    fn note_override(&mut self, name: &str) {
        if !self.overrides.iter().any(|o| o == name) {
            self.overrides.push(name.to_string());
        }
    }

    /// Length the uniform minor must reach before grouping.
    pub fn minor_length(&self) -> usize {
        self.r_group * self.k_final
    }

    pub fn to_json(&self) -> Value {
        json!({
            "delta": self.delta,
            "eta": self.eta,
            "lambda": format_frac(self.lambda),
            "kappa": format_frac(self.kappa),
            "tau": self.tau,
            "epsilon": format_frac(self.epsilon),
            "r_group": self.r_group,
            "k_final": self.k_final,
            "seed": self.seed,
            "overrides": self.overrides,
        })
    }
}

// ============================================================
// tau-cost
// ============================================================

/// Sum of trace cardinalities over all nonisomorphic ordered trees with at
/// most `tau` vertices. Bounded by 2^K * tau^tau.
pub fn tau_cost(host: &Graph, b: &Blockade, tau: usize) -> Result<usize, TreeError> {
    let mut memo = TraceMemo::new();
    tau_cost_with_memo(host, b, tau, &mut memo)
}

pub fn tau_cost_with_memo(
    host: &Graph,
    b: &Blockade,
    tau: usize,
    memo: &mut TraceMemo,
) -> Result<usize, TreeError> {
    let mut total = 0;
    // trees larger than the length have empty traces
    for m in 1..=tau.min(b.length()) {
        for j in enumerate_ordered_trees(m)? {
            total += trace_with_memo(host, b, &j, memo).len();
        }
    }
    Ok(total)
}

// ============================================================
// Cost descent
// ============================================================

#[derive(Clone, Debug)]
pub struct DescentStep {
    /// Canonical edge list of the ordered tree whose trace lost an entry.
    pub tree: OrderedTree,
    pub support: Support,
    pub cost_before: usize,
    pub cost_after: usize,
    pub width_before: usize,
    pub width_after: usize,
}

#[derive(Clone, Debug)]
pub struct DescentOutcome {
    /// Equicardinal contraction of the input.
    pub blockade: Blockade,
    pub steps: Vec<DescentStep>,
    pub initial_cost: usize,
    pub final_cost: usize,
    /// Invariance of the output, re-checked from scratch in the budgeted
    /// exhaustive mode.
    pub verified: InvarianceVerdict,
}

enum TargetSearch {
    Found { tree: OrderedTree, support: Support, shrunk: Vec<(usize, crate::bits::VertexSet)> },
    NoneKillable,
}

/// Repeatedly find a (tree, support) trace entry that a width-respecting
/// contraction can delete, apply the deletion, and stop when no entry is
/// deletable. Each step strictly decreases the tau-cost and multiplies the
/// width by at least kappa; the step count is bounded by the initial cost.
pub fn cost_descent(
    host: &Graph,
    b: &Blockade,
    kappa: Frac,
    tau: usize,
    budgets: &PhaseBudgets,
    seed: u64,
) -> Result<DescentOutcome, PipelineError> {
    assert!(kappa > frac(0, 1) && kappa <= frac(1, 1), "kappa must lie in (0, 1]");
    let mut memo = TraceMemo::new();
    let mut current = b.clone();
    let initial_cost = tau_cost_with_memo(host, &current, tau, &mut memo)?;
    let mut cost = initial_cost;
    let mut steps = Vec::new();

    while steps.len() <= initial_cost {
        match killable_target(host, &current, kappa, tau, budgets, seed, &mut memo)? {
            TargetSearch::Found { tree, support, shrunk } => {
                let width_before = current.width();
                let next = current.contract_blocks(&shrunk)?;
                let next_cost = tau_cost_with_memo(host, &next, tau, &mut memo)?;
                debug_assert!(next_cost < cost, "descent step must lower the cost");
                steps.push(DescentStep {
                    tree,
                    support,
                    cost_before: cost,
                    cost_after: next_cost,
                    width_before,
                    width_after: next.width(),
                });
                cost = next_cost;
                current = next;
            }
            TargetSearch::NoneKillable => break,
        }
    }

    let blockade = current.equicardinalize(None)?;
    let verified = is_support_invariant_with_memo(
        host,
        &blockade,
        kappa,
        tau,
        &InvarianceMode::Exhaustive { max_combos: budgets.invariance_combos },
        &mut memo,
    )?;
    let final_cost = tau_cost_with_memo(host, &blockade, tau, &mut memo)?;
    Ok(DescentOutcome { blockade, steps, initial_cost, final_cost, verified })
}

/// First trace entry, in canonical order, that some admissible shrink of its
/// own support blocks deletes. Killing all copies of J with support S only
/// requires shrinking the blocks S touches, so the candidate search runs
/// over joint ceil(kappa*w)-subsets of those blocks.
fn killable_target(
    host: &Graph,
    b: &Blockade,
    kappa: Frac,
    tau: usize,
    budgets: &PhaseBudgets,
    seed: u64,
    memo: &mut TraceMemo,
) -> Result<TargetSearch, PipelineError> {
    let shrink_to = ceil_mul(kappa, b.width()).max(1);
    for m in 1..=tau.min(b.length()) {
        for j in enumerate_ordered_trees(m)? {
            for s in trace_with_memo(host, b, &j, memo) {
                let combos: u64 = s
                    .iter()
                    .map(|&i| binomial(b.block(i).unwrap().len(), shrink_to))
                    .try_fold(1u64, |acc, c| acc.checked_mul(c))
                    .unwrap_or(u64::MAX);
                let found = if combos <= budgets.invariance_combos {
                    exhaustive_kill(host, b, &j, &s, shrink_to)
                } else {
                    heuristic_kill(host, b, &j, &s, shrink_to, budgets, seed)
                };
                if let Some(shrunk) = found {
                    return Ok(TargetSearch::Found { tree: j, support: s, shrunk });
                }
            }
        }
    }
    Ok(TargetSearch::NoneKillable)
}

fn kills(
    host: &Graph,
    j: &OrderedTree,
    s: &[usize],
    choice: &[(usize, crate::bits::VertexSet)],
) -> bool {
    // copies with support s live entirely inside s's blocks
    let restricted = Blockade::with_indices(host, choice.to_vec()).expect("nonempty shrink");
    find_rainbow_copy(host, &restricted, j, Some(s)).is_none()
}

fn exhaustive_kill(
    host: &Graph,
    b: &Blockade,
    j: &OrderedTree,
    s: &[usize],
    shrink_to: usize,
) -> Option<Vec<(usize, crate::bits::VertexSet)>> {
    let verts: Vec<Vec<usize>> = s.iter().map(|&i| b.block(i).unwrap().to_vec()).collect();
    let mut choice: Vec<(usize, crate::bits::VertexSet)> = Vec::with_capacity(s.len());
    exhaustive_kill_rec(host, b, j, s, shrink_to, &verts, 0, &mut choice)
}

fn exhaustive_kill_rec(
    host: &Graph,
    b: &Blockade,
    j: &OrderedTree,
    s: &[usize],
    shrink_to: usize,
    verts: &[Vec<usize>],
    depth: usize,
    choice: &mut Vec<(usize, crate::bits::VertexSet)>,
) -> Option<Vec<(usize, crate::bits::VertexSet)>> {
    if depth == s.len() {
        return kills(host, j, s, choice).then(|| choice.clone());
    }
    let pool = &verts[depth];
    let take = shrink_to.min(pool.len());
    for combo in subset_indices(pool.len(), take) {
        let set = crate::bits::VertexSet::from_iter(
            b.host_len(),
            combo.iter().map(|&ix| pool[ix]),
        );
        choice.push((s[depth], set));
        if let Some(hit) =
            exhaustive_kill_rec(host, b, j, s, shrink_to, verts, depth + 1, choice)
        {
            return Some(hit);
        }
        choice.pop();
    }
    None
}

fn heuristic_kill(
    host: &Graph,
    b: &Blockade,
    j: &OrderedTree,
    s: &[usize],
    shrink_to: usize,
    budgets: &PhaseBudgets,
    seed: u64,
) -> Option<Vec<(usize, crate::bits::VertexSet)>> {
    let verts: Vec<Vec<usize>> = s.iter().map(|&i| b.block(i).unwrap().to_vec()).collect();
    let n = b.host_len();
    let build = |pick: &dyn Fn(&[usize]) -> Vec<usize>| -> Vec<(usize, crate::bits::VertexSet)> {
        s.iter()
            .zip(&verts)
            .map(|(&i, pool)| {
                (i, crate::bits::VertexSet::from_iter(n, pick(pool).into_iter()))
            })
            .collect()
    };
    let lowest = build(&|pool| pool.iter().copied().take(shrink_to).collect());
    if kills(host, j, s, &lowest) {
        return Some(lowest);
    }
    let highest = build(&|pool| pool.iter().rev().copied().take(shrink_to).collect());
    if kills(host, j, s, &highest) {
        return Some(highest);
    }
    let mut rng = crate::rng::rng_from_seed(crate::rng::derive_seed(seed, 0x6465_7363));
    for _ in 0..budgets.descent_heuristic_samples {
        let choice: Vec<(usize, crate::bits::VertexSet)> = s
            .iter()
            .zip(&verts)
            .map(|(&i, pool)| {
                let mut shuffled = pool.clone();
                shuffled.shuffle(&mut rng);
                shuffled.truncate(shrink_to.min(pool.len()));
                (i, crate::bits::VertexSet::from_iter(n, shuffled.into_iter()))
            })
            .collect();
        if kills(host, j, s, &choice) {
            return Some(choice);
        }
    }
    None
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc = 1u64;
    for i in 0..k.min(n - k) {
        acc = acc.saturating_mul((n - i) as u64) / (i as u64 + 1);
    }
    acc
}

/// Ascending k-subsets of 0..n as index vectors.
fn subset_indices(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = (0..k).collect::<Vec<_>>();
    if k == 0 {
        return vec![vec![]];
    }
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        // odometer
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] + (k - i) < n {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

// ============================================================
// Ramsey extraction of support-uniformity
// ============================================================

/// Greedy Ramsey extraction of a length-`k` sub-blockade whose every trace
/// (trees up to `tau` vertices) is empty or complete. Processes trees in
/// canonical order, 2-coloring the |J|-subsets of the surviving indices by
/// trace membership and keeping a monochromatic subset each time.
pub fn extract_support_uniform(
    host: &Graph,
    b: &Blockade,
    k: usize,
    tau: usize,
) -> Result<Blockade, PipelineError> {
    if k == 0 {
        return Err(PipelineError::BadParams("cannot extract a length-0 sub-blockade".into()));
    }
    let mut surviving = b.indices();
    for m in 1..=tau {
        if surviving.len() < m {
            break; // larger traces are empty on any shorter sub-blockade
        }
        for j in enumerate_ordered_trees(m)? {
            // membership of a pinned support never depends on the other blocks
            let color = |s: &[usize]| find_rainbow_copy(host, b, &j, Some(s)).is_some();
            surviving = mono_subset(&surviving, m, &color);
            if surviving.len() < k {
                return Err(PipelineError::InsufficientLength {
                    needed: k,
                    have: surviving.len(),
                });
            }
        }
    }
    Ok(b.sub_blockade(&surviving[..k])?)
}

/// Subset of `v` (ascending) whose every m-subset gets the same color.
///
/// The greedy chain argument: pop the minimum a, recursively make the rest
/// monochromatic for the (m-1)-ary coloring S -> color({a} u S); then every
/// m-subset within the chain is colored by its minimum element, and the
/// majority color class is monochromatic. Elements left with fewer than m-1
/// successors can never lead an m-subset and are kept unconditionally.
fn mono_subset(v: &[usize], m: usize, color: &dyn Fn(&[usize]) -> bool) -> Vec<usize> {
    if m == 0 || v.len() <= m {
        return v.to_vec();
    }
    if m == 1 {
        let mut yes = Vec::new();
        let mut no = Vec::new();
        for &i in v {
            if color(&[i]) {
                yes.push(i);
            } else {
                no.push(i);
            }
        }
        return if yes.len() >= no.len() { yes } else { no };
    }
    let mut avail = v.to_vec();
    let mut keep_true = Vec::new();
    let mut keep_false = Vec::new();
    let mut tail = Vec::new();
    while !avail.is_empty() {
        let a = avail.remove(0);
        if avail.len() < m - 1 {
            tail.push(a);
            tail.extend(avail);
            break;
        }
        let sub = mono_subset(&avail, m - 1, &|s: &[usize]| {
            let mut t = Vec::with_capacity(m);
            t.push(a);
            t.extend_from_slice(s);
            color(&t)
        });
        if sub.len() < m - 1 {
            // a has too few chain successors to lead an m-subset
            tail.push(a);
            avail = sub;
            continue;
        }
        let c = {
            let mut t = Vec::with_capacity(m);
            t.push(a);
            t.extend_from_slice(&sub[..m - 1]);
            color(&t)
        };
        if c {
            keep_true.push(a);
        } else {
            keep_false.push(a);
        }
        avail = sub;
    }
    let mut chosen = if keep_true.len() >= keep_false.len() { keep_true } else { keep_false };
    chosen.extend(tail);
    chosen.sort();
    chosen
}

// ============================================================
// Minor = descent + uniformize
// ============================================================

#[derive(Clone, Debug)]
pub struct MinorOutcome {
    pub blockade: Blockade,
    pub descent_steps: usize,
    pub initial_cost: usize,
    pub final_cost: usize,
    pub uniform: UniformityVerdict,
    pub invariant: InvarianceVerdict,
}

/// Cost descent, then uniform extraction, in that order; invariance is
/// inherited by sub-blockades, and both contracts are re-checked on the
/// output.
pub fn get_minor(
    host: &Graph,
    b: &Blockade,
    k: usize,
    kappa: Frac,
    tau: usize,
    budgets: &PhaseBudgets,
    seed: u64,
) -> Result<MinorOutcome, PipelineError> {
    let descent = cost_descent(host, b, kappa, tau, budgets, seed)?;
    let sub = extract_support_uniform(host, &descent.blockade, k, tau)?;
    let mut memo = TraceMemo::new();
    let uniform = is_support_uniform_with_memo(host, &sub, tau, &mut memo)?;
    let invariant = is_support_invariant_with_memo(
        host,
        &sub,
        kappa,
        tau,
        &InvarianceMode::Exhaustive { max_combos: budgets.invariance_combos },
        &mut memo,
    )?;
    Ok(MinorOutcome {
        blockade: sub,
        descent_steps: descent.steps.len(),
        initial_cost: descent.initial_cost,
        final_cost: descent.final_cost,
        uniform,
        invariant,
    })
}

// ============================================================
// Block partition
// ============================================================

/// Splits the vertex range into `k` consecutive runs and equicardinalizes
/// them down to floor(n/k).
pub fn block_partition(g: &Graph, k: usize) -> Result<Blockade, PipelineError> {
    let n = g.len();
    if k == 0 || n < k {
        return Err(PipelineError::BadPartition { n, k });
    }
    let base = n / k;
    let extra = n % k;
    let mut blocks = Vec::with_capacity(k);
    let mut at = 0;
    for i in 0..k {
        let size = base + usize::from(i < extra);
        blocks.push(crate::bits::VertexSet::from_iter(n, at..at + size));
        at += size;
    }
    let b = Blockade::new(g, blocks)?;
    Ok(b.equicardinalize(Some(base))?)
}

// ============================================================
// Full pipeline
// ============================================================

#[derive(Clone, Debug)]
pub struct PhaseRecord {
    pub phase: &'static str,
    pub fingerprint: u64,
    pub length: usize,
    pub width: usize,
    pub steps: usize,
    pub verdicts: BTreeMap<String, String>,
}

impl PhaseRecord {
    pub fn to_json(&self) -> Value {
        json!({
            "phase": self.phase,
            "fingerprint": format!("{:016x}", self.fingerprint),
            "length": self.length,
            "width": self.width,
            "steps": self.steps,
            "verdicts": self.verdicts,
        })
    }
}

#[derive(Clone, Debug)]
pub enum PipelineOutcome {
    /// A verified rainbow copy of `pattern` (the requested tree, or the
    /// enclosing T(delta, eta) when the escalation found the supertree).
    Embedded { phase: &'static str, pattern: Graph, embedding: RainbowEmbedding },
    Stopped { phase: &'static str, reason: String },
}

#[derive(Clone, Debug)]
pub struct PipelineReport {
    pub params_json: Value,
    pub phases: Vec<PhaseRecord>,
    pub outcome: PipelineOutcome,
}

impl PipelineReport {
    pub fn succeeded(&self) -> bool {
        matches!(self.outcome, PipelineOutcome::Embedded { .. })
    }

    /// One JSON object per line: params, then each phase, then the outcome.
    pub fn to_json_lines(&self) -> String {
        let mut lines = Vec::new();
        lines.push(json!({ "params": self.params_json }).to_string());
        for p in &self.phases {
            lines.push(p.to_json().to_string());
        }
        let outcome = match &self.outcome {
            PipelineOutcome::Embedded { phase, pattern, embedding } => json!({
                "outcome": "embedded",
                "phase": phase,
                "pattern_order": pattern.len(),
                "vertices": embedding.vertices,
                "blocks": embedding.blocks,
            }),
            PipelineOutcome::Stopped { phase, reason } => json!({
                "outcome": "stopped",
                "phase": phase,
                "reason": reason,
            }),
        };
        lines.push(outcome.to_string());
        lines.join("\n") + "\n"
    }
}

fn record(
    phase: &'static str,
    host: &Graph,
    b: &Blockade,
    steps: usize,
    verdicts: BTreeMap<String, String>,
) -> PhaseRecord {
    PhaseRecord {
        phase,
        fingerprint: b.fingerprint(host),
        length: b.length(),
        width: b.width(),
        steps,
        verdicts,
    }
}

/// The full staged run: direct backtracking fallback, then minor
/// extraction, concavity production, and anchored escalation. Never
/// panics on instance structure; a phase that cannot proceed stops the run
/// with its reason in the report.
pub fn rainbow_pipeline(
    host: &Graph,
    b: &Blockade,
    target: &crate::trees::RootedTree,
    params: &PipelineParams,
) -> PipelineReport {
    let mut phases = Vec::new();
    let pattern = target.to_graph();

    // Phase 0: the plain backtracker. At desk scale this usually wins; the
    // staged machinery exists to exercise and validate the contracts.
    let mut v = BTreeMap::new();
    let fallback = find_rainbow_unordered(host, b, &pattern);
    v.insert("found".into(), fallback.is_some().to_string());
    phases.push(record("fallback", host, b, 0, v));
    if let Some(embedding) = fallback {
        debug_assert!(verify_unordered(host, b, &pattern, &embedding).is_ok());
        return PipelineReport {
            params_json: params.to_json(),
            phases,
            outcome: PipelineOutcome::Embedded { phase: "fallback", pattern, embedding },
        };
    }

    // Phase 1: support-invariant, support-uniform minor.
    let minor = match get_minor(
        host,
        b,
        params.minor_length(),
        params.kappa,
        params.tau,
        &params.budgets,
        params.seed,
    ) {
        Ok(m) => m,
        Err(e) => {
            return PipelineReport {
                params_json: params.to_json(),
                phases,
                outcome: PipelineOutcome::Stopped { phase: "minor", reason: e.to_string() },
            }
        }
    };
    let mut v = BTreeMap::new();
    v.insert("initial_cost".into(), minor.initial_cost.to_string());
    v.insert("final_cost".into(), minor.final_cost.to_string());
    v.insert("uniform".into(), uniformity_label(&minor.uniform));
    v.insert("invariant".into(), invariance_label(&minor.invariant));
    phases.push(record("minor", host, &minor.blockade, minor.descent_steps, v));

    // Phase 2: leaf extension or grouped concave blockade.
    let concave = match build_concave(host, &minor.blockade, target, params) {
        Ok(c) => c,
        Err(e) => {
            return PipelineReport {
                params_json: params.to_json(),
                phases,
                outcome: PipelineOutcome::Stopped { phase: "concave", reason: e.to_string() },
            }
        }
    };
    let grouped = match concave {
        ConcaveOutcome::Rainbow { pattern, embedding } => {
            let mut v = BTreeMap::new();
            v.insert("result".into(), "leaf-extension".into());
            phases.push(record("concave", host, &minor.blockade, 0, v));
            debug_assert!(verify_unordered(host, &minor.blockade, &pattern, &embedding).is_ok());
            return PipelineReport {
                params_json: params.to_json(),
                phases,
                outcome: PipelineOutcome::Embedded { phase: "concave", pattern, embedding },
            };
        }
        ConcaveOutcome::Concave { blockade, verdict } => {
            let mut v = BTreeMap::new();
            v.insert("result".into(), "grouped".into());
            v.insert("concavity".into(), concavity_label(&verdict));
            phases.push(record("concave", host, &blockade, 0, v));
            blockade
        }
    };

    // Phase 3: anchored escalation.
    let esc = match anchored_escalation(host, &grouped, params) {
        Ok(r) => r,
        Err(e) => {
            return PipelineReport {
                params_json: params.to_json(),
                phases,
                outcome: PipelineOutcome::Stopped { phase: "escalate", reason: e.to_string() },
            }
        }
    };
    let mut v = BTreeMap::new();
    v.insert("alpha".into(), esc.alpha.to_string());
    v.insert("beta".into(), esc.beta.to_string());
    v.insert("reversed".into(), esc.reversed.to_string());
    v.insert("gamma0".into(), esc.gamma0.to_string());
    match &esc.outcome {
        EscalationOutcome::Embedded { .. } => {
            v.insert("outcome".into(), "embedded".into());
        }
        EscalationOutcome::Diagnostic { phase, finding } => {
            v.insert("outcome".into(), format!("diagnostic at {}: {}", phase, finding));
        }
    }
    phases.push(record("escalate", host, &grouped, esc.rounds.len(), v));

    let outcome = match esc.outcome {
        EscalationOutcome::Embedded { pattern, embedding } => {
            PipelineOutcome::Embedded { phase: "escalate", pattern, embedding }
        }
        EscalationOutcome::Diagnostic { phase: p, finding } => PipelineOutcome::Stopped {
            phase: "escalate",
            reason: format!("{}: {}", p, finding),
        },
    };
    PipelineReport { params_json: params.to_json(), phases, outcome }
}

pub(crate) fn uniformity_label(v: &UniformityVerdict) -> String {
    match v {
        UniformityVerdict::Uniform => "uniform".into(),
        UniformityVerdict::Witness(w) => {
            format!("witness: tree {:?} present {:?} absent {:?}", w.tree, w.present, w.absent)
        }
    }
}

pub(crate) fn invariance_label(v: &InvarianceVerdict) -> String {
    match v {
        InvarianceVerdict::Invariant => "invariant".into(),
        InvarianceVerdict::Refuted(w) => {
            format!("refuted: tree {:?} support {:?}", w.tree, w.support)
        }
        InvarianceVerdict::Unverified { checked_targets, skipped_targets } => {
            format!("unverified: checked {} skipped {}", checked_targets, skipped_targets)
        }
    }
}

pub(crate) fn concavity_label(v: &crate::blockade::ConcavityVerdict) -> String {
    use crate::blockade::ConcavityVerdict::*;
    match v {
        Concave => "concave".into(),
        Refuted(w) => format!("refuted: ({}, {}, {}) x {:?}", w.h1, w.h2, w.h3, w.x.to_vec()),
        Unrefuted { samples } => format!("unrefuted after {} samples", samples),
    }
}
