//! Thin command-line front end; all real work lives in the library.
//!
//! Exit codes: `certify` uses 0/1/2/3 for induced copy / high degree /
//! anticomplete pair / not found, and the other search commands use 0 for a
//! positive answer, 1 for a definite negative, 2 for "unverified".  Any
//! operational error prints to stderr and exits 64.

use std::env;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;

use purepair::blockade::{is_concave, Blockade, ConcavityMode, ConcavityVerdict};
use purepair::certify::{
    certify_trichotomy, find_anticomplete_pair, find_induced_forest, is_epsilon_coherent,
    CoherenceConfig, CoherenceVerdict, PairMode, PairOutcome, TrichotomyConfig, EXACT_PAIR_BOUND,
};
use purepair::frac::{format_frac, parse_frac, Frac};
use purepair::graph::Graph;
use purepair::harness::{
    self, emit_plots, pattern_graph, records_jsonl, sidecar_json, ExperimentConfig, PlotKind,
};
use purepair::io::{blockade_from_json, blockade_to_json, decode, encode};
use purepair::pipeline::{
    block_partition, rainbow_pipeline, PhaseBudgets, PipelineParams, PipelineReport,
};
use purepair::rainbow::{
    is_support_invariant, is_support_uniform, trace, InvarianceMode, InvarianceVerdict,
    UniformityVerdict,
};
use purepair::trees::{build_t, enumerate_ordered_trees, RootedTree};

#[derive(Parser)]
#[command(name = "purepair", version, about = "Pure pairs, rainbow trees, and blockades")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Seed for randomised searches (experiment configs carry their own).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; PUREPAIR_THREADS is the fallback, then all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Graph text encoding: graph6 or edgelist.
    #[arg(long, global = true, default_value = "graph6")]
    format: String,
    /// Write results here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a graph from a named model.
    Gen {
        /// gnp, complete, empty, path, cycle, star, or multipartite.
        #[arg(long, default_value = "gnp")]
        model: String,
        #[arg(short, long)]
        n: usize,
        /// Edge probability for gnp.
        #[arg(short, long, default_value_t = 0.5)]
        p: f64,
        /// Part count for multipartite (complete between parts, n must split evenly).
        #[arg(long, default_value_t = 2)]
        parts: usize,
    },
    /// Search a graph for an induced copy of a forest pattern.
    Embed {
        #[arg(long)]
        graph: PathBuf,
        /// Named forest (edge, P3..P7, K1,2..K1,4, chair), "T:delta,eta",
        /// or a parenthesized rooted tree like "((())())".
        #[arg(long)]
        pattern: String,
    },
    /// Hunt for two anticomplete sets of size k each.
    Anticomplete {
        #[arg(long)]
        graph: PathBuf,
        #[arg(short, long)]
        k: usize,
        /// auto, exact, or heuristic.
        #[arg(long, default_value = "auto")]
        pair_mode: String,
        #[arg(long, default_value_t = 64)]
        restarts: u64,
    },
    /// Decide whether a graph is eps-coherent.
    Coherent {
        #[arg(long)]
        graph: PathBuf,
        /// Threshold as an exact fraction, e.g. 1/10.
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 64)]
        restarts: u64,
    },
    /// Produce a trichotomy certificate for (graph, pattern, eps).
    Certify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 10)]
        pattern_budget: usize,
        #[arg(long, default_value_t = 64)]
        restarts: u64,
    },
    /// Inspect or transform a blockade file (JSON: graph6 + blocks).
    Blockade {
        #[arg(long)]
        file: PathBuf,
        /// show, reverse, equicardinalize, group, sub, trace, uniform,
        /// invariant, or concave.
        #[arg(long)]
        op: String,
        /// exhaustive or sampled (invariant and concave only).
        #[arg(long, default_value = "exhaustive")]
        mode: String,
        /// Comma-separated block indices for sub.
        #[arg(long)]
        keep: Option<String>,
        /// Consecutive-group size for group.
        #[arg(short, long, default_value_t = 2)]
        r: usize,
        /// Target block size for equicardinalize (defaults to the width).
        #[arg(long)]
        target: Option<usize>,
        /// Ordered-tree size for trace.
        #[arg(long, default_value_t = 2)]
        tree_size: usize,
        #[arg(long, default_value_t = 3)]
        tau: usize,
        #[arg(long, default_value = "1/2")]
        lambda: String,
        #[arg(long, default_value = "1/2")]
        kappa: String,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
    },
    /// Run the staged rainbow pipeline against a blockade or a partition.
    Pipeline {
        /// Blockade JSON input; alternative to --graph + --blocks.
        #[arg(long)]
        blockade: Option<PathBuf>,
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Partition a plain graph into this many equal blocks.
        #[arg(long, default_value_t = 4)]
        blocks: usize,
        #[arg(long, default_value = "toy")]
        mode: String,
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        eta: usize,
        #[arg(long, default_value = "1/100")]
        eps: String,
        /// Concavity threshold override (toy mode only).
        #[arg(long)]
        lambda: Option<String>,
        /// Invariance threshold override (toy mode only).
        #[arg(long)]
        kappa: Option<String>,
        /// Support-uniformity tree-size override (toy mode only).
        #[arg(long)]
        tau: Option<usize>,
        /// Grouping factor override (toy mode only).
        #[arg(long)]
        r_group: Option<usize>,
        /// Required surviving length override (toy mode only).
        #[arg(long)]
        k_final: Option<usize>,
        /// Cap on sampled search effort per phase.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Run an experiment described by a JSON config file.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// scatter or line.
        #[arg(long, default_value = "line")]
        plot: String,
    },
}

fn main() -> ExitCode {
    // clap's own exit code for bad arguments is 2, which several
    // subcommands use as a real verdict; remap parse failures to 64
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(64);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    init_threads(cli.threads);
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(64)
        }
    }
}

fn init_threads(flag: Option<usize>) {
    let n = flag.or_else(|| {
        env::var("PUREPAIR_THREADS").ok().and_then(|s| s.parse().ok())
    });
    if let Some(n) = n.filter(|&n| n > 0) {
        // Ignore the error: the global pool can only be built once.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn read_graph(path: &Path, format: &str) -> Result<Graph> {
    let text = read_input(path)?;
    Ok(decode(text.trim(), format)?)
}

fn write_out(output: &Option<PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{}", text),
    }
    Ok(())
}

fn parse_eps(s: &str) -> Result<Frac> {
    let f = parse_frac(s).map_err(|e| anyhow!("bad fraction {:?}: {}", s, e))?;
    if f <= parse_frac("0/1").unwrap() {
        bail!("eps must be positive, got {}", s);
    }
    Ok(f)
}

/// Named forests, "T:delta,eta" shorthand, or parenthesized rooted trees.
fn parse_pattern(s: &str) -> Result<Graph> {
    if let Some(rest) = s.strip_prefix("T:") {
        let (d, e) = rest
            .split_once(',')
            .ok_or_else(|| anyhow!("T:delta,eta needs two comma-separated numbers"))?;
        let delta: usize = d.trim().parse().context("delta")?;
        let eta: usize = e.trim().parse().context("eta")?;
        return Ok(build_t(delta, eta)?.to_graph());
    }
    if s.starts_with('(') {
        return Ok(RootedTree::parse_paren(s)?.to_graph());
    }
    Ok(pattern_graph(s)?)
}

fn complete_multipartite(n: usize, parts: usize) -> Result<Graph> {
    if parts == 0 || n % parts != 0 {
        bail!("n = {} does not split into {} equal parts", n, parts);
    }
    let size = n / parts;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if u / size != v / size {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::from_edges(n, &edges)?)
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.cmd {
        Cmd::Gen { model, n, p, parts } => {
            let g = match model.as_str() {
                "gnp" => Graph::gnp(*n, *p, cli.seed),
                "complete" => Graph::complete(*n),
                "empty" => Graph::empty(*n),
                "path" => Graph::path(*n),
                "cycle" => Graph::cycle(*n),
                "star" => {
                    if *n == 0 {
                        bail!("star needs at least one vertex");
                    }
                    Graph::star(*n - 1)
                }
                "multipartite" => complete_multipartite(*n, *parts)?,
                other => bail!("unknown model {:?}", other),
            };
            write_out(&cli.output, &(encode(&g, &cli.format)? + "\n"))?;
            Ok(0)
        }

        Cmd::Embed { graph, pattern } => {
            let g = read_graph(graph, &cli.format)?;
            let f = parse_pattern(pattern)?;
            let found = find_induced_forest(&g, &f)?;
            let out = json!({
                "pattern_order": f.len(),
                "found": found.is_some(),
                "image": found,
            });
            write_out(&cli.output, &(out.to_string() + "\n"))?;
            Ok(if out["found"].as_bool().unwrap() { 0 } else { 1 })
        }

        Cmd::Anticomplete { graph, k, pair_mode, restarts } => {
            let g = read_graph(graph, &cli.format)?;
            let mode = match pair_mode.as_str() {
                "exact" => PairMode::Exact,
                "heuristic" => PairMode::Heuristic { restarts: *restarts, seed: cli.seed },
                "auto" => {
                    if g.len() <= EXACT_PAIR_BOUND {
                        PairMode::Exact
                    } else {
                        PairMode::Heuristic { restarts: *restarts, seed: cli.seed }
                    }
                }
                other => bail!("unknown pair mode {:?}", other),
            };
            let (out, code) = match find_anticomplete_pair(&g, *k, &mode) {
                PairOutcome::Found(a, b) => (
                    json!({"outcome": "found", "k": k, "a": a.to_vec(), "b": b.to_vec()}),
                    0,
                ),
                PairOutcome::Absent => (json!({"outcome": "absent", "k": k}), 1),
                PairOutcome::Unknown => (json!({"outcome": "unknown", "k": k}), 2),
            };
            write_out(&cli.output, &(out.to_string() + "\n"))?;
            Ok(code)
        }

        Cmd::Coherent { graph, eps, restarts } => {
            let g = read_graph(graph, &cli.format)?;
            let eps = parse_eps(eps)?;
            let cfg = CoherenceConfig {
                heuristic_restarts: *restarts,
                seed: cli.seed,
                ..CoherenceConfig::default()
            };
            let verdict = is_epsilon_coherent(&g, eps, &cfg);
            let (out, code) = match &verdict {
                CoherenceVerdict::Coherent => (json!({"verdict": "coherent"}), 0),
                CoherenceVerdict::TooSmall => (json!({"verdict": "too-small"}), 1),
                CoherenceVerdict::HighDegree { vertex, degree } => (
                    json!({"verdict": "high-degree", "vertex": vertex, "degree": degree}),
                    1,
                ),
                CoherenceVerdict::BigAnticompletePair { a, b } => (
                    json!({"verdict": "anticomplete-pair", "a": a.to_vec(), "b": b.to_vec()}),
                    1,
                ),
                CoherenceVerdict::Unverified => (json!({"verdict": "unverified"}), 2),
            };
            let mut out = out;
            out["eps"] = json!(format_frac(eps));
            write_out(&cli.output, &(out.to_string() + "\n"))?;
            Ok(code)
        }

        Cmd::Certify { graph, pattern, eps, pattern_budget, restarts } => {
            let g = read_graph(graph, &cli.format)?;
            let f = parse_pattern(pattern)?;
            let eps = parse_eps(eps)?;
            let cfg = TrichotomyConfig {
                pattern_budget: *pattern_budget,
                heuristic_restarts: *restarts,
                seed: cli.seed,
                ..TrichotomyConfig::default()
            };
            let cert = certify_trichotomy(&g, &f, eps, &cfg)?;
            cert.verify(&g, &f, eps).map_err(|e| anyhow!("certificate failed re-check: {}", e))?;
            write_out(&cli.output, &(cert.to_json(eps).to_string() + "\n"))?;
            Ok(cert.exit_code() as u8)
        }

        Cmd::Blockade {
            file,
            op,
            mode,
            keep,
            r,
            target,
            tree_size,
            tau,
            lambda,
            kappa,
            samples,
        } => {
            let (g, b) = blockade_from_json(&read_input(file)?)?;
            run_blockade_op(
                cli, &g, &b, op, mode, keep.as_deref(), *r, *target, *tree_size, *tau, lambda,
                kappa, *samples,
            )
        }

        Cmd::Pipeline {
            blockade,
            graph,
            blocks,
            mode,
            delta,
            eta,
            eps,
            lambda,
            kappa,
            tau,
            r_group,
            k_final,
            budget,
        } => {
            let (g, b) = match (blockade, graph) {
                (Some(path), _) => blockade_from_json(&read_input(path)?)?,
                (None, Some(path)) => {
                    let g = read_graph(path, &cli.format)?;
                    let b = block_partition(&g, *blocks)?;
                    (g, b)
                }
                (None, None) => bail!("pipeline needs --blockade or --graph"),
            };
            let eps = parse_eps(eps)?;
            let mut params = match mode.as_str() {
                "paper" => {
                    let overridden = lambda.is_some()
                        || kappa.is_some()
                        || tau.is_some()
                        || r_group.is_some()
                        || k_final.is_some();
                    if overridden {
                        bail!("constant overrides require --mode toy");
                    }
                    PipelineParams::paper(*delta, *eta, eps, cli.seed)?
                }
                "toy" => PipelineParams::toy(*delta, *eta, eps, cli.seed)?,
                other => bail!("unknown mode {:?}", other),
            };
            if let Some(l) = lambda {
                params = params.with_lambda(parse_eps(l)?);
            }
            if let Some(k) = kappa {
                params = params.with_kappa(parse_eps(k)?);
            }
            if let Some(t) = tau {
                params = params.with_tau(*t);
            }
            if let Some(r) = r_group {
                params = params.with_r_group(*r);
            }
            if let Some(k) = k_final {
                params = params.with_k_final(*k);
            }
            if let Some(n) = budget {
                params = params.with_budgets(PhaseBudgets {
                    descent_heuristic_samples: *n,
                    concavity_samples: *n,
                    order_samples: *n,
                    escalation_rounds: *n,
                    ..PhaseBudgets::default()
                });
            }
            let target = build_t(*delta, *eta)?;
            let report: PipelineReport = rainbow_pipeline(&g, &b, &target, &params);
            write_out(&cli.output, &report.to_json_lines())?;
            Ok(if report.succeeded() { 0 } else { 1 })
        }

        Cmd::Experiment { config, plot } => {
            let text = read_input(config)?;
            let config: ExperimentConfig =
                serde_json::from_str(&text).context("parsing experiment config")?;
            let records = match config.kind.as_str() {
                "epsilon-profile" => harness::epsilon_profile(&config)?,
                "multicolour" => {
                    let h = pattern_graph(&config.pattern)?;
                    let eps: Vec<Frac> = config
                        .eps
                        .iter()
                        .map(|s| parse_eps(s))
                        .collect::<Result<_>>()?;
                    let mut all = Vec::new();
                    for n in config.n_lo..=config.n_hi {
                        all.extend(harness::multicolour_experiment(
                            config.colors,
                            &h,
                            n,
                            &eps,
                            config.samples,
                            config.seed,
                        )?);
                    }
                    all
                }
                other => bail!("unknown experiment kind {:?}", other),
            };
            let jsonl = records_jsonl(&records);
            let plot_kind = PlotKind::parse(plot)?;
            let base = cli
                .output
                .clone()
                .or_else(|| config.output.as_ref().map(PathBuf::from));
            match base {
                Some(base) => {
                    if let Some(dir) = base.parent().filter(|d| !d.as_os_str().is_empty()) {
                        fs::create_dir_all(dir)?;
                    }
                    let jsonl_path = base.with_extension("jsonl");
                    fs::write(&jsonl_path, &jsonl)?;
                    let mut paths = vec![jsonl_path];
                    paths.extend(emit_plots(&records, plot_kind, &base)?);
                    let meta_path = base.with_extension("meta.json");
                    fs::write(&meta_path, sidecar_json(&config).to_string() + "\n")?;
                    paths.push(meta_path);
                    for p in &paths {
                        println!("{}", p.display());
                    }
                }
                None => print!("{}", jsonl),
            }
            Ok(0)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn run_blockade_op(
    cli: &Cli,
    g: &Graph,
    b: &Blockade,
    op: &str,
    mode: &str,
    keep: Option<&str>,
    r: usize,
    target: Option<usize>,
    tree_size: usize,
    tau: usize,
    lambda: &str,
    kappa: &str,
    samples: u64,
) -> Result<u8> {
    let emit_blockade = |b2: &Blockade| -> Result<u8> {
        write_out(&cli.output, &(blockade_to_json(g, b2) + "\n"))?;
        Ok(0)
    };
    match op {
        "show" => {
            let out = json!({
                "length": b.length(),
                "width": b.width(),
                "equicardinal": b.is_equicardinal(),
                "indices": b.indices(),
                "block_sizes": b.entries().iter().map(|(_, s)| s.len()).collect::<Vec<_>>(),
            });
            write_out(&cli.output, &(out.to_string() + "\n"))?;
            Ok(0)
        }
        "reverse" => emit_blockade(&b.reverse()),
        "equicardinalize" => emit_blockade(&b.equicardinalize(target)?),
        "group" => emit_blockade(&b.interval_group(r)?),
        "sub" => {
            let keep = keep.ok_or_else(|| anyhow!("sub needs --keep 1,2,..."))?;
            let idx: Vec<usize> = keep
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| anyhow!("bad index {:?}", s)))
                .collect::<Result<_>>()?;
            emit_blockade(&b.sub_blockade(&idx)?)
        }
        "trace" => {
            let mut lines = String::new();
            for j in enumerate_ordered_trees(tree_size)? {
                let tr = trace(g, b, &j);
                lines.push_str(
                    &json!({
                        "tree": format!("{:?}", j.canonical_code()),
                        "supports": tr.len(),
                        "first": tr.first(),
                    })
                    .to_string(),
                );
                lines.push('\n');
            }
            write_out(&cli.output, &lines)?;
            Ok(0)
        }
        "uniform" => {
            let (out, code) = match is_support_uniform(g, b, tau)? {
                UniformityVerdict::Uniform => (json!({"verdict": "uniform", "tau": tau}), 0),
                UniformityVerdict::Witness(w) => (
                    json!({
                        "verdict": "witness",
                        "tree": format!("{:?}", w.tree.canonical_code()),
                        "present": w.present,
                        "absent": w.absent,
                    }),
                    1,
                ),
            };
            write_out(&cli.output, &(out.to_string() + "\n"))?;
            Ok(code)
        }
        "invariant" => {
            let kappa = parse_eps(kappa)?;
            let m = match mode {
                "exhaustive" => InvarianceMode::Exhaustive { max_combos: 1 << 20 },
                "sampled" => InvarianceMode::Sampled { samples, seed: cli.seed },
                other => bail!("unknown mode {:?}", other),
            };
            let (out, code) = match is_support_invariant(g, b, kappa, tau, &m)? {
                InvarianceVerdict::Invariant => (json!({"verdict": "invariant"}), 0),
                InvarianceVerdict::Refuted(w) => (
                    json!({
                        "verdict": "refuted",
                        "tree": format!("{:?}", w.tree.canonical_code()),
                        "support": w.support,
                    }),
                    1,
                ),
                InvarianceVerdict::Unverified { checked_targets, skipped_targets } => (
                    json!({
                        "verdict": "unverified",
                        "checked": checked_targets,
                        "skipped": skipped_targets,
                    }),
                    2,
                ),
            };
            write_out(&cli.output, &(out.to_string() + "\n"))?;
            Ok(code)
        }
        "concave" => {
            let lambda = parse_eps(lambda)?;
            let m = match mode {
                "exhaustive" => ConcavityMode::Exhaustive { max_subsets: 1 << 20 },
                "sampled" => ConcavityMode::Sampled { samples, seed: cli.seed },
                other => bail!("unknown mode {:?}", other),
            };
            let (out, code) = match is_concave(g, b, lambda, &m)? {
                ConcavityVerdict::Concave => (json!({"verdict": "concave"}), 0),
                ConcavityVerdict::Refuted(w) => (
                    json!({
                        "verdict": "refuted",
                        "blocks": [w.h1, w.h2, w.h3],
                        "x": w.x.to_vec(),
                    }),
                    1,
                ),
                ConcavityVerdict::Unrefuted { samples } => {
                    (json!({"verdict": "unrefuted", "samples": samples}), 2)
                }
            };
            write_out(&cli.output, &(out.to_string() + "\n"))?;
            Ok(code)
        }
        other => bail!("unknown blockade op {:?}", other),
    }
}
