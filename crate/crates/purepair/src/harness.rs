//! Experiment harness: seeded samplers, empirical profiles, and plot files.
//!
//! Everything here is replay-exact: per-sample seeds are split off the config
//! seed, samples run as independent tasks, and records are emitted in sample
//! order no matter how the scheduler interleaves them.  Payloads carry no
//! timestamps, so identical configs produce byte-identical JSON lines, CSV
//! and SVG at any thread count.  Exact and heuristic pair statistics live in
//! separate columns and are never merged.

use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::bits::VertexSet;
use crate::certify::{
    certify_trichotomy, find_anticomplete_pair, find_induced_forest, max_anticomplete_value,
    CertifyError, PairMode, TrichotomyConfig, ValueMode, EXACT_PAIR_BOUND,
};
use crate::frac::{ceil_mul, format_frac, frac, frac_to_f64, parse_frac, Frac};
use crate::graph::{Graph, GraphError};
use crate::rng::{derive_seed, rng_from_seed};

/// Attempt cap for rejection sampling; dense targets hit it fast.
pub const REJECT_BUDGET: u64 = 512;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad config: {0}")]
    BadConfig(String),
    #[error("sampling budget exhausted after {attempts} attempts")]
    SampleBudget { attempts: u64 },
    #[error("no records to plot")]
    EmptyRecords,
    #[error("sample {index}: {source}")]
    Sample { index: u64, source: Box<HarnessError> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Resample G(n,p) until a pattern-free draw appears.
    Reject,
    /// Delete a uniformly random vertex of each found copy until none
    /// remains; keeps density near the target at a slight cost in size.
    Excise,
}

impl Strategy {
    pub fn parse(s: &str) -> Result<Strategy, HarnessError> {
        match s {
            "reject" => Ok(Strategy::Reject),
            "excise" => Ok(Strategy::Excise),
            other => Err(HarnessError::BadConfig(format!("unknown strategy {:?}", other))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Reject => "reject",
            Strategy::Excise => "excise",
        }
    }
}

/// Small named forests for experiment configs.
pub fn pattern_graph(name: &str) -> Result<Graph, HarnessError> {
    let path = |m: usize| {
        let edges: Vec<(usize, usize)> = (1..m).map(|i| (i - 1, i)).collect();
        Graph::from_edges(m, &edges)
    };
    let star = |leaves: usize| {
        let edges: Vec<(usize, usize)> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::from_edges(leaves + 1, &edges)
    };
    let g = match name {
        "edge" | "P2" => path(2),
        "P3" => path(3),
        "P4" => path(4),
        "P5" => path(5),
        "P6" => path(6),
        "P7" => path(7),
        "K1,2" => star(2),
        "K1,3" | "claw" => star(3),
        "K1,4" => star(4),
        // A path on four vertices with one extra leaf at its second vertex.
        "chair" => Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (1, 4)]),
        other => {
            return Err(HarnessError::BadConfig(format!("unknown pattern {:?}", other)));
        }
    };
    Ok(g.expect("fixed pattern edge lists are valid"))
}

fn default_pattern() -> String {
    "P4".into()
}
fn default_n_lo() -> usize {
    12
}
fn default_n_hi() -> usize {
    12
}
fn default_p() -> f64 {
    0.5
}
fn default_eps() -> Vec<String> {
    vec!["1/20".into()]
}
fn default_samples() -> u64 {
    20
}
fn default_strategy() -> String {
    "excise".into()
}
fn default_colors() -> usize {
    2
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// "epsilon-profile" or "multicolour".
    pub kind: String,
    #[serde(default = "default_pattern")]
    pub pattern: String,
    #[serde(default = "default_n_lo")]
    pub n_lo: usize,
    #[serde(default = "default_n_hi")]
    pub n_hi: usize,
    #[serde(default = "default_p")]
    pub p: f64,
    /// Epsilon grid as exact fractions in (0, 1/2].
    #[serde(default = "default_eps")]
    pub eps: Vec<String>,
    #[serde(default = "default_samples")]
    pub samples: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_strategy")]
    pub strategy: String,
    /// Colour classes for the multicolour experiment.
    #[serde(default = "default_colors")]
    pub colors: usize,
    #[serde(default)]
    pub output: Option<String>,
}

struct ValidatedConfig {
    pattern: Graph,
    eps: Vec<Frac>,
    strategy: Strategy,
}

impl ExperimentConfig {
    fn validated(&self) -> Result<ValidatedConfig, HarnessError> {
        if self.samples == 0 {
            return Err(HarnessError::BadConfig("sample count must be at least 1".into()));
        }
        if self.n_lo < 2 || self.n_lo > self.n_hi {
            return Err(HarnessError::BadConfig(format!(
                "need 2 <= n_lo <= n_hi, got {}..{}",
                self.n_lo, self.n_hi
            )));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(HarnessError::BadConfig(format!("p = {} outside [0, 1]", self.p)));
        }
        if self.colors == 0 {
            return Err(HarnessError::BadConfig("need at least one colour class".into()));
        }
        if self.eps.is_empty() {
            return Err(HarnessError::BadConfig("epsilon grid is empty".into()));
        }
        let mut eps = Vec::with_capacity(self.eps.len());
        for s in &self.eps {
            let f = parse_frac(s).map_err(HarnessError::BadConfig)?;
            if f <= frac(0, 1) || f > frac(1, 2) {
                return Err(HarnessError::BadConfig(format!(
                    "epsilon {} outside (0, 1/2]",
                    format_frac(f)
                )));
            }
            eps.push(f);
        }
        Ok(ValidatedConfig {
            pattern: pattern_graph(&self.pattern)?,
            eps,
            strategy: Strategy::parse(&self.strategy)?,
        })
    }

    /// Stable 64-bit digest of the canonical config serialization.
    pub fn fingerprint(&self) -> String {
        let canon = serde_json::to_string(self).expect("config serializes");
        format!("{:016x}", fnv1a64(canon.as_bytes()))
    }
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    h
}

#[derive(Clone, Debug)]
pub struct SampleStat {
    pub index: u64,
    /// Vertex count of the sampled graph (excision can shrink it).
    pub n: usize,
    pub delta_over_n: String,
    pub a_exact_over_n: Option<String>,
    pub a_heuristic_over_n: Option<String>,
    pub certificate: String,
}

#[derive(Clone, Debug)]
pub struct ResultRecord {
    pub fingerprint: String,
    pub kind: String,
    pub seed: u64,
    pub mode: String,
    pub n: usize,
    pub eps: String,
    pub samples: Vec<SampleStat>,
    pub aggregate_kind: String,
    pub aggregate: String,
}

impl ResultRecord {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "fingerprint": self.fingerprint,
            "kind": self.kind,
            "seed": self.seed,
            "mode": self.mode,
            "n": self.n,
            "eps": self.eps,
            "samples": self.samples.iter().map(|s| json!({
                "index": s.index,
                "n": s.n,
                "delta_over_n": s.delta_over_n,
                "a_exact_over_n": s.a_exact_over_n,
                "a_heuristic_over_n": s.a_heuristic_over_n,
                "certificate": s.certificate,
            })).collect::<Vec<_>>(),
            "aggregate_kind": self.aggregate_kind,
            "aggregate": self.aggregate,
        })
    }

    /// Re-derives the aggregate from the per-sample rows; must equal the
    /// stored value.
    pub fn recompute_aggregate(&self) -> Result<String, HarnessError> {
        match self.aggregate_kind.as_str() {
            "min-max-envelope" => {
                let mut best: Option<Frac> = None;
                for s in &self.samples {
                    let d = parse_frac(&s.delta_over_n).map_err(HarnessError::BadConfig)?;
                    let a_str = s
                        .a_exact_over_n
                        .as_deref()
                        .or(s.a_heuristic_over_n.as_deref())
                        .ok_or_else(|| {
                            HarnessError::BadConfig("sample carries no pair statistic".into())
                        })?;
                    let a = parse_frac(a_str).map_err(HarnessError::BadConfig)?;
                    let m = d.max(a);
                    best = Some(match best {
                        None => m,
                        Some(b) => b.min(m),
                    });
                }
                let b = best
                    .ok_or_else(|| HarnessError::BadConfig("record has no samples".into()))?;
                Ok(format_frac(b))
            }
            "satisfaction-rate" => {
                let sat = self.samples.iter().filter(|s| s.certificate != "none").count();
                Ok(format_frac(frac(sat as i128, self.samples.len() as i128)))
            }
            other => Err(HarnessError::BadConfig(format!("unknown aggregate kind {:?}", other))),
        }
    }
}

/// One JSON object per line, trailing newline included.
pub fn records_jsonl(records: &[ResultRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&r.to_json().to_string());
        out.push('\n');
    }
    out
}

// ============================================================
// Samplers
// ============================================================

/// Draws an `f`-free graph near G(n, p).  Reject resamples whole graphs;
/// excise deletes a uniformly random vertex of each found copy (at most n
/// deletions, so the loop is self-bounding).  The final failed search is
/// itself the freeness verification.
pub fn sample_forest_free(
    f: &Graph,
    n: usize,
    p: f64,
    seed: u64,
    strategy: Strategy,
) -> Result<Graph, HarnessError> {
    match strategy {
        Strategy::Reject => {
            for attempt in 0..REJECT_BUDGET {
                let g = Graph::gnp(n, p, derive_seed(seed, attempt));
                if find_induced_forest(&g, f)?.is_none() {
                    return Ok(g);
                }
            }
            Err(HarnessError::SampleBudget { attempts: REJECT_BUDGET })
        }
        Strategy::Excise => {
            let mut g = Graph::gnp(n, p, derive_seed(seed, 0));
            let mut rng = rng_from_seed(derive_seed(seed, 1));
            for _ in 0..=n {
                match find_induced_forest(&g, f)? {
                    None => return Ok(g),
                    Some(image) => {
                        let victim = image[rng.gen_range(0..image.len())];
                        let mut keep = VertexSet::full(g.len());
                        keep.remove(victim);
                        let (sub, _) = g.induced_subgraph(&keep)?;
                        g = sub;
                    }
                }
            }
            Err(HarnessError::SampleBudget { attempts: n as u64 + 1 })
        }
    }
}

// ============================================================
// Epsilon profile
// ============================================================

struct SampleCore {
    g: Graph,
    delta: Frac,
    a_val: Frac,
    a_exact: bool,
}

fn core_stats(g: Graph, sample_seed: u64) -> Result<SampleCore, HarnessError> {
    let n = g.len().max(1);
    let delta_num = g.max_degree().map(|(_, d)| d).unwrap_or(0);
    let delta = frac(delta_num as i128, n as i128);
    let mode = if g.len() <= EXACT_PAIR_BOUND {
        ValueMode::Exact { bound: EXACT_PAIR_BOUND }
    } else {
        ValueMode::Heuristic { restarts: 64, seed: derive_seed(sample_seed, 2) }
    };
    let pv = max_anticomplete_value(&g, &mode)?;
    Ok(SampleCore { g, delta, a_val: frac(pv.value as i128, n as i128), a_exact: pv.exact })
}

fn profile_sample(
    v: &ValidatedConfig,
    config: &ExperimentConfig,
    n: usize,
    s: u64,
) -> Result<SampleCore, HarnessError> {
    let sample_seed = derive_seed(config.seed, ((n as u64) << 24) ^ s);
    let g = sample_forest_free(&v.pattern, n, config.p, sample_seed, v.strategy)?;
    core_stats(g, sample_seed)
}

fn envelope(cores: &[SampleCore]) -> Frac {
    cores
        .iter()
        .map(|c| c.delta.max(c.a_val))
        .min()
        .expect("at least one sample")
}

/// Samples pattern-free graphs for each n in the configured range and
/// records the degree and anticomplete statistics, then one record per
/// (n, epsilon) with the trichotomy certificate kind at that epsilon.  The
/// aggregate is the empirical lower envelope min over samples of
/// max(delta/n, a/n).
pub fn epsilon_profile(config: &ExperimentConfig) -> Result<Vec<ResultRecord>, HarnessError> {
    let v = config.validated()?;
    if config.kind != "epsilon-profile" {
        return Err(HarnessError::BadConfig(format!(
            "epsilon_profile invoked on kind {:?}",
            config.kind
        )));
    }
    let fp = config.fingerprint();
    let mut records = Vec::new();
    for n in config.n_lo..=config.n_hi {
        let cores: Vec<SampleCore> = (0..config.samples)
            .into_par_iter()
            .map(|s| {
                profile_sample(&v, config, n, s)
                    .map_err(|e| HarnessError::Sample { index: s, source: Box::new(e) })
            })
            .collect::<Result<_, _>>()?;
        let agg = format_frac(envelope(&cores));
        let all_exact = cores.iter().all(|c| c.a_exact);
        let mode = format!(
            "strategy={} pair={}",
            v.strategy.name(),
            if all_exact { "exact" } else { "heuristic" }
        );
        for &eps in &v.eps {
            let stats: Vec<SampleStat> = cores
                .par_iter()
                .enumerate()
                .map(|(s, core)| {
                    let cert = if core.g.len() >= 2 {
                        let cfg = TrichotomyConfig {
                            seed: derive_seed(config.seed, 0x6365_7274 ^ s as u64),
                            ..TrichotomyConfig::default()
                        };
                        certify_trichotomy(&core.g, &v.pattern, eps, &cfg)
                            .map_err(|e| HarnessError::Sample {
                                index: s as u64,
                                source: Box::new(e.into()),
                            })?
                            .kind()
                            .to_string()
                    } else {
                        "degenerate".into()
                    };
                    Ok(SampleStat {
                        index: s as u64,
                        n: core.g.len(),
                        delta_over_n: format_frac(core.delta),
                        a_exact_over_n: core.a_exact.then(|| format_frac(core.a_val)),
                        a_heuristic_over_n: (!core.a_exact).then(|| format_frac(core.a_val)),
                        certificate: cert,
                    })
                })
                .collect::<Result<_, HarnessError>>()?;
            records.push(ResultRecord {
                fingerprint: fp.clone(),
                kind: "epsilon-profile".into(),
                seed: config.seed,
                mode: mode.clone(),
                n,
                eps: format_frac(eps),
                samples: stats,
                aggregate_kind: "min-max-envelope".into(),
                aggregate: agg.clone(),
            });
        }
    }
    Ok(records)
}

// ============================================================
// Multicolour experiment
// ============================================================

/// Randomly splits the edges of K_n into k colour classes and asks, per
/// sample and per epsilon, whether some class contains the pattern as an
/// induced subgraph or an anticomplete pair at the epsilon threshold.  The
/// aggregate is the satisfaction rate.
pub fn multicolour_experiment(
    k: usize,
    h: &Graph,
    n: usize,
    eps_grid: &[Frac],
    samples: u64,
    seed: u64,
) -> Result<Vec<ResultRecord>, HarnessError> {
    if k == 0 {
        return Err(HarnessError::BadConfig("need at least one colour class".into()));
    }
    if n < 2 {
        return Err(HarnessError::BadConfig("need at least two vertices".into()));
    }
    if samples == 0 {
        return Err(HarnessError::BadConfig("sample count must be at least 1".into()));
    }
    if eps_grid.is_empty() {
        return Err(HarnessError::BadConfig("epsilon grid is empty".into()));
    }
    let fp = {
        let desc = format!("multicolour k={} n={} samples={} seed={} h={:?}", k, n, samples, seed, h);
        format!("{:016x}", fnv1a64(desc.as_bytes()))
    };
    let classes_per_sample: Vec<Vec<Graph>> = (0..samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = rng_from_seed(derive_seed(seed, s));
            let mut class_edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); k];
            for u in 0..n {
                for w in (u + 1)..n {
                    class_edges[rng.gen_range(0..k)].push((u, w));
                }
            }
            class_edges
                .into_iter()
                .map(|es| Graph::from_edges(n, &es).expect("K_n edge splits are valid"))
                .collect()
        })
        .collect();

    let mut records = Vec::new();
    for &eps in eps_grid {
        let threshold = ceil_mul(eps, n).max(1);
        let stats: Vec<SampleStat> = classes_per_sample
            .par_iter()
            .enumerate()
            .map(|(s, classes)| -> Result<SampleStat, HarnessError> {
                let mut label = "none".to_string();
                let mut witness = 0usize;
                for (i, gi) in classes.iter().enumerate() {
                    if find_induced_forest(gi, h)?.is_some() {
                        label = format!("copy@{}", i + 1);
                        witness = i;
                        break;
                    }
                    let mode = if n <= EXACT_PAIR_BOUND {
                        PairMode::Exact
                    } else {
                        PairMode::Heuristic {
                            restarts: 64,
                            seed: derive_seed(seed, 0x7061_6972 ^ s as u64),
                        }
                    };
                    if find_anticomplete_pair(gi, threshold, &mode).found().is_some() {
                        label = format!("pair@{}", i + 1);
                        witness = i;
                        break;
                    }
                }
                let core = core_stats(classes[witness].clone(), derive_seed(seed, s as u64))?;
                Ok(SampleStat {
                    index: s as u64,
                    n,
                    delta_over_n: format_frac(core.delta),
                    a_exact_over_n: core.a_exact.then(|| format_frac(core.a_val)),
                    a_heuristic_over_n: (!core.a_exact).then(|| format_frac(core.a_val)),
                    certificate: label,
                })
            })
            .map(|r| r.map_err(|e| HarnessError::Sample { index: 0, source: Box::new(e) }))
            .collect::<Result<_, _>>()?;
        let sat = stats.iter().filter(|st| st.certificate != "none").count();
        records.push(ResultRecord {
            fingerprint: fp.clone(),
            kind: "multicolour".into(),
            seed,
            mode: format!(
                "k={} pair={}",
                k,
                if n <= EXACT_PAIR_BOUND { "exact" } else { "heuristic" }
            ),
            n,
            eps: format_frac(eps),
            samples: stats,
            aggregate_kind: "satisfaction-rate".into(),
            aggregate: format_frac(frac(sat as i128, samples as i128)),
        });
    }
    Ok(records)
}

// ============================================================
// Persistence and plots
// ============================================================

/// Documented CSV schema; one row per sample.
pub const CSV_HEADER: &str =
    "fingerprint,kind,n,eps,sample,delta_over_n,a_exact_over_n,a_heuristic_over_n,certificate";

pub fn records_csv(records: &[ResultRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        for s in &r.samples {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                r.fingerprint,
                r.kind,
                s.n,
                r.eps,
                s.index,
                s.delta_over_n,
                s.a_exact_over_n.as_deref().unwrap_or(""),
                s.a_heuristic_over_n.as_deref().unwrap_or(""),
                s.certificate
            ));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotKind {
    Scatter,
    Line,
}

impl PlotKind {
    pub fn parse(s: &str) -> Result<PlotKind, HarnessError> {
        match s {
            "scatter" => Ok(PlotKind::Scatter),
            "line" => Ok(PlotKind::Line),
            other => Err(HarnessError::BadConfig(format!("unknown plot kind {:?}", other))),
        }
    }
}

/// Standalone SVG of the aggregate statistic: x is n for profiles, epsilon
/// for multicolour streams.  Same input, same bytes.
pub fn records_svg(records: &[ResultRecord], kind: PlotKind) -> Result<String, HarnessError> {
    if records.is_empty() {
        return Err(HarnessError::EmptyRecords);
    }
    let profile = records[0].kind == "epsilon-profile";
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(records.len());
    for r in records {
        let x = if profile {
            r.n as f64
        } else {
            frac_to_f64(parse_frac(&r.eps).map_err(HarnessError::BadConfig)?)
        };
        let y = frac_to_f64(parse_frac(&r.aggregate).map_err(HarnessError::BadConfig)?);
        pts.push((x, y));
    }
    let (w, h, ml, mb) = (640.0f64, 400.0f64, 60.0f64, 40.0f64);
    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x1 - x0 < 1e-12 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if y1 - y0 < 1e-12 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let px = |x: f64| ml + (x - x0) / (x1 - x0) * (w - ml - 20.0);
    let py = |y: f64| (h - mb) - (y - y0) / (y1 - y0) * (h - mb - 20.0);
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" \
         viewBox=\"0 0 {w} {h}\">\n",
        w = w,
        h = h
    ));
    svg.push_str("<rect width=\"640\" height=\"400\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<line x1=\"{ml}\" y1=\"20\" x2=\"{ml}\" y2=\"{yb}\" stroke=\"black\"/>\n",
        ml = ml,
        yb = h - mb
    ));
    svg.push_str(&format!(
        "<line x1=\"{ml}\" y1=\"{yb}\" x2=\"{xr}\" y2=\"{yb}\" stroke=\"black\"/>\n",
        ml = ml,
        yb = h - mb,
        xr = w - 20.0
    ));
    let axis = if profile { "n" } else { "eps" };
    svg.push_str(&format!(
        "<text x=\"{x}\" y=\"{y}\" font-size=\"12\" text-anchor=\"middle\">{axis}</text>\n",
        x = (ml + w - 20.0) / 2.0,
        y = h - 8.0,
        axis = axis
    ));
    svg.push_str(&format!(
        "<text x=\"{x}\" y=\"{y}\" font-size=\"12\" text-anchor=\"end\">{v:.4}</text>\n",
        x = ml - 4.0,
        y = py(y0) + 4.0,
        v = y0
    ));
    svg.push_str(&format!(
        "<text x=\"{x}\" y=\"{y}\" font-size=\"12\" text-anchor=\"end\">{v:.4}</text>\n",
        x = ml - 4.0,
        y = py(y1) + 4.0,
        v = y1
    ));
    svg.push_str(&format!(
        "<text x=\"{x}\" y=\"{y}\" font-size=\"12\" text-anchor=\"middle\">{v:.4}</text>\n",
        x = px(x0),
        y = h - mb + 16.0,
        v = x0
    ));
    svg.push_str(&format!(
        "<text x=\"{x}\" y=\"{y}\" font-size=\"12\" text-anchor=\"middle\">{v:.4}</text>\n",
        x = px(x1),
        y = h - mb + 16.0,
        v = x1
    ));
    match kind {
        PlotKind::Line => {
            let mut sorted = pts.clone();
            sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite points"));
            let path: Vec<String> =
                sorted.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
            svg.push_str(&format!(
                "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" \
                 points=\"{}\"/>\n",
                path.join(" ")
            ));
        }
        PlotKind::Scatter => {}
    }
    for &(x, y) in &pts {
        svg.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"steelblue\"/>\n",
            px(x),
            py(y)
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Writes `<base>.csv` and `<base>.svg` next to each other and returns the
/// paths.  JSON lines are the caller's concern (they usually go to stdout or
/// the --output file).
pub fn emit_plots(
    records: &[ResultRecord],
    kind: PlotKind,
    base: &Path,
) -> Result<Vec<PathBuf>, HarnessError> {
    if records.is_empty() {
        return Err(HarnessError::EmptyRecords);
    }
    let csv_path = base.with_extension("csv");
    let svg_path = base.with_extension("svg");
    fs::write(&csv_path, records_csv(records))?;
    fs::write(&svg_path, records_svg(records, kind)?)?;
    Ok(vec![csv_path, svg_path])
}

/// Provenance sidecar: config and crate version only, so the result payloads
/// can stay timestamp-free.
pub fn sidecar_json(config: &ExperimentConfig) -> serde_json::Value {
    json!({
        "tool": "purepair",
        "version": env!("CARGO_PKG_VERSION"),
        "fingerprint": config.fingerprint(),
        "config": serde_json::to_value(config).expect("config serializes"),
    })
}
