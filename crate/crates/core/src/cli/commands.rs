//! Subcommand implementations.

use std::path::PathBuf;

use serde::Serialize;

use super::config::ExperimentConfig;
use super::report::write_report;
use super::{Cli, Command, Format};
use crate::cognition::graph::{graph_encode, GraphOptions};
use crate::cognition::hdff::{CombineOp, HdffDescriptor};
use crate::cognition::navigation::{grid_config, grid_demos, grid_program};
use crate::datasets::{erdos_renyi, gaussian_blobs, layer_features, train_test_split};
use crate::encoders::{FeatureEncoder, ProjectionEncoder, Quantizer};
use crate::error::{Error, Result};
use crate::hv::io::save_container;
use crate::hv::rng::split_seed;
use crate::hv::{random_hv, HyperVector, Metric, Repr};
use crate::imc::{
    benchmark_configs, estimate, footprint_bounds, memory_sweep, node_sweep, run_workload, Architecture, Category,
    MemoryConfig, TechNode, TechTable, Workload, WorkloadDescriptor,
};
use crate::io::{load_csv_dataset, load_edge_list, Dataset};
use crate::learning::metrics::{adjusted_rand_index, auc};
use crate::learning::{cluster, retrain_iterative, train_single_pass, ClassifierModel};
use crate::reasoning::resonator::{factorize, random_problem, Schedule};

struct Ctx {
    cfg: ExperimentConfig,
    out: PathBuf,
    format: Format,
    jobs: usize,
}

impl Ctx {
    fn write(&self, name: &str, body: &impl Serialize) -> Result<PathBuf> {
        write_report(&self.out, name, self.format, body)
    }

    fn dataset(&self, input: &Option<PathBuf>) -> Result<Dataset> {
        let d = &self.cfg.data;
        match input.as_ref().or(d.input.as_ref()) {
            Some(p) => {
                if !p.is_file() {
                    return Err(Error::Config(format!("file not found: {}", p.display())));
                }
                let label = match &d.label_column {
                    Some(l) => l.clone(),
                    None => last_header(p)?,
                };
                load_csv_dataset(p, Some(&label))
            }
            None => Ok(gaussian_blobs(
                d.blob_classes,
                d.blob_features,
                d.blob_samples_per_class,
                3.0,
                1.0,
                self.cfg.seed,
            )),
        }
    }

    fn encoder(&self, features: usize) -> Result<ProjectionEncoder> {
        ProjectionEncoder::new(
            features,
            self.cfg.encoder.dim,
            split_seed(self.cfg.seed, "cli-encoder", 0),
            Quantizer::Sign,
        )
    }
}

fn last_header(path: &std::path::Path) -> Result<String> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    r.headers()?
        .iter()
        .next_back()
        .map(str::to_string)
        .ok_or_else(|| Error::InvalidInput(format!("{}: empty header", path.display())))
}

fn resolve(cli: &Cli) -> Result<Ctx> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if cli.dim.is_some() {
        cfg.dim = cli.dim;
    }
    let jobs = cli
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if jobs == 0 {
        return Err(Error::Config("--jobs must be >= 1".into()));
    }
    Ok(Ctx {
        cfg: cfg.resolve()?,
        out: cli.out.clone(),
        format: cli.format,
        jobs,
    })
}

fn parse_schedule(s: &str) -> Result<Schedule> {
    match s.to_ascii_lowercase().as_str() {
        "parallel" => Ok(Schedule::Parallel),
        "sequential" => Ok(Schedule::Sequential),
        _ => Err(Error::Config(format!("unknown schedule {s:?}"))),
    }
}

/// Runs a parsed command line; returns the files written.
pub fn run(cli: &Cli) -> Result<Vec<PathBuf>> {
    let mut ctx = resolve(cli)?;
    match &cli.command {
        Command::Encode { input } => encode(&ctx, input),
        Command::Train { input, epochs } => {
            if let Some(e) = epochs {
                ctx.cfg.learning.epochs = *e;
            }
            train(&ctx, input)
        }
        Command::Infer { input, model } => infer(&ctx, input, model),
        Command::Cluster { input, k } => {
            if let Some(k) = k {
                ctx.cfg.learning.k = *k;
            }
            cluster_cmd(&ctx, input)
        }
        Command::Factorize { trials, schedule } => {
            if let Some(t) = trials {
                ctx.cfg.reasoning.trials = *t;
            }
            if let Some(s) = schedule {
                ctx.cfg.reasoning.schedule = parse_schedule(s)?;
            }
            factorize_cmd(&ctx)
        }
        Command::Navigate => navigate(&ctx),
        Command::Graph { edges } => {
            if let Some(e) = edges {
                if !e.is_file() {
                    return Err(Error::Config(format!("file not found: {}", e.display())));
                }
                ctx.cfg.graph.edges = Some(e.clone());
            }
            graph(&ctx)
        }
        Command::Ood => ood(&ctx),
        Command::Cost { workload, memory, node } => {
            let c = &mut ctx.cfg.cost;
            if let Some(w) = workload {
                c.workload = w.clone();
            }
            if let Some(m) = memory {
                c.memory = m.clone();
            }
            if let Some(n) = node {
                c.node = n.clone();
            }
            cost(&ctx)
        }
        Command::Sweep => sweep(&ctx),
        Command::Bounds => bounds(&ctx),
    }
}

#[derive(Serialize)]
struct EncodeReport {
    samples: usize,
    features: usize,
    dim: usize,
    container: String,
}

fn encode(ctx: &Ctx, input: &Option<PathBuf>) -> Result<Vec<PathBuf>> {
    let ds = ctx.dataset(input)?;
    let enc = ctx.encoder(ds.feature_names.len())?;
    let hvs = ds.features.iter().map(|x| enc.encode(x)).collect::<Result<Vec<HyperVector>>>()?;
    let path = ctx.out.join("encoded.hvc");
    save_container(&path, &hvs, enc.seed())?;
    let report = EncodeReport {
        samples: hvs.len(),
        features: ds.feature_names.len(),
        dim: ctx.cfg.encoder.dim,
        container: "encoded.hvc".into(),
    };
    Ok(vec![path, ctx.write("encode", &report)?])
}

#[derive(Serialize)]
struct TrainReport {
    classes: Vec<String>,
    train_samples: usize,
    test_samples: usize,
    single_pass_train_accuracy: f64,
    single_pass_test_accuracy: f64,
    epochs: usize,
    eta: f64,
    updates: Vec<usize>,
    retrained_train_accuracy: f64,
    retrained_test_accuracy: f64,
    model: String,
}

fn train(ctx: &Ctx, input: &Option<PathBuf>) -> Result<Vec<PathBuf>> {
    let ds = ctx.dataset(input)?;
    let (tr, te) = train_test_split(&ds, ctx.cfg.data.test_fraction, ctx.cfg.seed);
    let enc = ctx.encoder(ds.feature_names.len())?;
    let mut model = train_single_pass(&tr, Some(&ds.classes()), enc, Metric::Cosine, ctx.cfg.seed)?;
    let acc = |m: &ClassifierModel, d: &Dataset| if d.is_empty() { Ok(f64::NAN) } else { m.accuracy(d) };
    let (sp_train, sp_test) = (acc(&model, &tr)?, acc(&model, &te)?);
    let l = &ctx.cfg.learning;
    let rr = if l.epochs > 0 {
        retrain_iterative(&mut model, &tr, l.eta, l.epochs)?
    } else {
        Default::default()
    };
    let stem = ctx.out.join("model");
    model.save(&stem)?;
    let report = TrainReport {
        classes: model.classes().to_vec(),
        train_samples: tr.len(),
        test_samples: te.len(),
        single_pass_train_accuracy: sp_train,
        single_pass_test_accuracy: sp_test,
        epochs: l.epochs,
        eta: l.eta,
        updates: rr.updates,
        retrained_train_accuracy: acc(&model, &tr)?,
        retrained_test_accuracy: acc(&model, &te)?,
        model: "model".into(),
    };
    Ok(vec![
        stem.with_extension("json"),
        stem.with_extension("hvc"),
        ctx.write("train", &report)?,
    ])
}

#[derive(Serialize)]
struct Prediction {
    index: usize,
    predicted: String,
    label: String,
}

#[derive(Serialize)]
struct InferReport {
    samples: usize,
    accuracy: f64,
    rows: Vec<Prediction>,
}

fn infer(ctx: &Ctx, input: &Option<PathBuf>, model: &Option<PathBuf>) -> Result<Vec<PathBuf>> {
    let stem = model
        .clone()
        .or_else(|| ctx.cfg.data.model.clone())
        .unwrap_or_else(|| ctx.out.join("model"));
    let m = ClassifierModel::load(&stem)?;
    let ds = ctx.dataset(input)?;
    let rows = ds
        .features
        .iter()
        .zip(&ds.labels)
        .enumerate()
        .map(|(index, (x, y))| {
            Ok(Prediction {
                index,
                predicted: m.predict(x)?,
                label: y.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let correct = rows.iter().filter(|r| r.predicted == r.label).count();
    let report = InferReport {
        samples: rows.len(),
        accuracy: correct as f64 / rows.len().max(1) as f64,
        rows,
    };
    Ok(vec![ctx.write("infer", &report)?])
}

#[derive(Serialize)]
struct Assignment {
    index: usize,
    cluster: usize,
    label: String,
}

#[derive(Serialize)]
struct ClusterReport {
    k: usize,
    iterations: usize,
    converged: bool,
    ari: f64,
    rows: Vec<Assignment>,
}

fn cluster_cmd(ctx: &Ctx, input: &Option<PathBuf>) -> Result<Vec<PathBuf>> {
    let ds = ctx.dataset(input)?;
    let enc = ctx.encoder(ds.feature_names.len())?;
    let hvs = ds.features.iter().map(|x| enc.encode(x)).collect::<Result<Vec<_>>>()?;
    let l = &ctx.cfg.learning;
    let model = cluster(&hvs, l.k, l.max_iters, ctx.cfg.seed)?;
    let report = ClusterReport {
        k: l.k,
        iterations: model.iterations,
        converged: model.converged,
        ari: adjusted_rand_index(&model.assignments, &ds.labels),
        rows: model
            .assignments
            .iter()
            .zip(&ds.labels)
            .enumerate()
            .map(|(index, (&cluster, label))| Assignment {
                index,
                cluster,
                label: label.clone(),
            })
            .collect(),
    };
    Ok(vec![ctx.write("cluster", &report)?])
}

#[derive(Serialize)]
struct Trial {
    trial: usize,
    correct: bool,
    converged: bool,
    limit_cycle: bool,
    iterations: usize,
}

#[derive(Serialize)]
struct FactorizeReport {
    factors: usize,
    items: usize,
    dim: usize,
    schedule: Schedule,
    trials: usize,
    accuracy: f64,
    convergence_rate: f64,
    mean_iterations: f64,
    rows: Vec<Trial>,
}

fn factorize_cmd(ctx: &Ctx) -> Result<Vec<PathBuf>> {
    let r = &ctx.cfg.reasoning;
    let rows = (0..r.trials)
        .map(|t| {
            let s = split_seed(ctx.cfg.seed, "cli-factorize", t as u64);
            let p = random_problem(r.factors, r.items, r.dim, s)?;
            let out = factorize(&p.composite, &p.codebooks, r.max_iters, r.schedule, r.noise_p, s)?;
            Ok(Trial {
                trial: t,
                correct: out.indices == p.truth,
                converged: out.converged,
                limit_cycle: out.limit_cycle,
                iterations: out.iterations,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let n = rows.len().max(1) as f64;
    let report = FactorizeReport {
        factors: r.factors,
        items: r.items,
        dim: r.dim,
        schedule: r.schedule,
        trials: r.trials,
        accuracy: rows.iter().filter(|t| t.correct).count() as f64 / n,
        convergence_rate: rows.iter().filter(|t| t.converged).count() as f64 / n,
        mean_iterations: rows.iter().map(|t| t.iterations as f64).sum::<f64>() / n,
        rows,
    };
    Ok(vec![ctx.write("factorize", &report)?])
}

#[derive(Serialize)]
struct NavigateReport {
    dim: usize,
    grid: usize,
    demos: usize,
    recalled: usize,
    min_score: f64,
    probe_score: f64,
    probe_rejected: bool,
}

fn navigate(ctx: &Ctx) -> Result<Vec<PathBuf>> {
    let n = &ctx.cfg.navigation;
    let demos = grid_demos(n.grid, n.demos, ctx.cfg.seed)?;
    let mut prog = grid_program(&grid_config(n.dim), ctx.cfg.seed)?;
    prog.train(&demos)?;
    let mut recalled = 0;
    let mut min_score = f64::INFINITY;
    for d in &demos {
        for r in prog.recall(&d.sensors)? {
            min_score = min_score.min(r.score);
            recalled += (r.accepted && d.actuators.get(&r.actuator) == Some(&r.value)) as usize;
        }
    }
    let probe = random_hv("probe", "situation", ctx.cfg.seed, n.dim, Repr::Bipolar)?;
    let p = prog.recall_encoded(&probe)?;
    let report = NavigateReport {
        dim: n.dim,
        grid: n.grid,
        demos: demos.len(),
        recalled,
        min_score,
        probe_score: p[0].score,
        probe_rejected: !p[0].accepted,
    };
    Ok(vec![ctx.write("navigate", &report)?])
}

#[derive(Serialize)]
struct GraphReport {
    dim: usize,
    vertices: usize,
    edges: usize,
    auc: f64,
}

fn graph(ctx: &Ctx) -> Result<Vec<PathBuf>> {
    let g = &ctx.cfg.graph;
    let (edges, extra) = match &g.edges {
        Some(p) => (load_edge_list(p)?, Vec::new()),
        None => (
            erdos_renyi(g.vertices, g.edge_probability, ctx.cfg.seed),
            (0..g.vertices).map(|i| i.to_string()).collect(),
        ),
    };
    let opts = GraphOptions {
        dim: g.dim,
        dedupe: true,
        ..Default::default()
    };
    let gm = graph_encode(&edges, &extra, ctx.cfg.seed, opts)?;
    let names: Vec<String> = gm.nodes().symbols().to_vec();
    let is_edge = |a: &str, b: &str| edges.iter().any(|(u, v)| (u == a && v == b) || (u == b && v == a));
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for i in 0..names.len() {
        for j in (i + 1)..names.len() {
            let s = gm.edge_score(&names[i], &names[j])?;
            if is_edge(&names[i], &names[j]) {
                pos.push(s);
            } else {
                neg.push(s);
            }
        }
    }
    let report = GraphReport {
        dim: g.dim,
        vertices: names.len(),
        edges: gm.edge_count(),
        auc: auc(&pos, &neg),
    };
    Ok(vec![ctx.write("graph", &report)?])
}

#[derive(Serialize)]
struct OodReport {
    dim: usize,
    layer_dims: Vec<usize>,
    threshold: f64,
    auc: f64,
    in_flagged: f64,
    out_flagged: f64,
}

fn ood(ctx: &Ctx) -> Result<Vec<PathBuf>> {
    let o = &ctx.cfg.ood;
    let set = layer_features(&o.layer_dims, o.classes, o.train_per_class, o.eval, o.noise_std, ctx.cfg.seed);
    let mut d = HdffDescriptor::new(&set.layer_dims, o.dim, ctx.cfg.seed, CombineOp::Bundle)?;
    d.fit(&set.train)?;
    let ins = set.in_dist.iter().map(|x| d.score(x)).collect::<Result<Vec<_>>>()?;
    let outs = set.out_dist.iter().map(|x| d.score(x)).collect::<Result<Vec<_>>>()?;
    let frac = |v: &[crate::cognition::HdffScore]| v.iter().filter(|s| s.ood).count() as f64 / v.len().max(1) as f64;
    let scores = |v: &[crate::cognition::HdffScore]| v.iter().map(|s| s.score).collect::<Vec<_>>();
    let report = OodReport {
        dim: o.dim,
        layer_dims: o.layer_dims.clone(),
        threshold: d.threshold,
        auc: auc(&scores(&ins), &scores(&outs)),
        in_flagged: frac(&ins),
        out_flagged: frac(&outs),
    };
    Ok(vec![ctx.write("ood", &report)?])
}

fn tech_table(ctx: &Ctx) -> Result<TechTable> {
    match &ctx.cfg.cost.tech_table {
        Some(p) => TechTable::load(p),
        None => Ok(TechTable::builtin()),
    }
}

fn workload(name: &str, dim: usize) -> Result<Workload> {
    Ok(Workload::by_name(name)?.with_dim(dim))
}

fn cost(ctx: &Ctx) -> Result<Vec<PathBuf>> {
    let c = &ctx.cfg.cost;
    let node: TechNode = c.node.parse()?;
    let techs = tech_table(ctx)?.at_node(node)?;
    let arch = match &c.architecture {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
            serde_json::from_str::<Architecture>(&text).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?
        }
        None => Architecture::template(MemoryConfig::parse(&c.memory)?),
    };
    arch.validate()?;
    let run = run_workload(&workload(&c.workload, c.dim)?, ctx.cfg.seed)?;
    let report = estimate(&run, &arch, &techs)?;
    Ok(vec![ctx.write("cost", &report)?])
}

fn sweep(ctx: &Ctx) -> Result<Vec<PathBuf>> {
    let s = &ctx.cfg.sweep;
    let techs = tech_table(ctx)?;
    let workloads = s.workloads.iter().map(|w| workload(w, s.dim)).collect::<Result<Vec<_>>>()?;
    let memories = if s.memories.is_empty() {
        benchmark_configs()
    } else {
        s.memories.iter().map(|m| MemoryConfig::parse(m)).collect::<Result<_>>()?
    };
    let node_memories = s.node_memories.iter().map(|m| MemoryConfig::parse(m)).collect::<Result<Vec<_>>>()?;
    let nodes = s.nodes.iter().map(|n| n.parse()).collect::<Result<Vec<TechNode>>>()?;
    eprintln!(
        "sweeping {} workloads x {} memories, then {} memories x {} nodes ({} jobs)",
        workloads.len(),
        memories.len(),
        node_memories.len(),
        nodes.len(),
        ctx.jobs
    );
    let mem = memory_sweep(&workloads, &memories, &techs, ctx.cfg.seed, ctx.jobs)?;
    let node = node_sweep(&workload(&s.node_workload, s.dim)?, &node_memories, &nodes, &techs, ctx.cfg.seed, ctx.jobs)?;
    Ok(vec![ctx.write("memory_sweep", &mem)?, ctx.write("node_sweep", &node)?])
}

#[derive(Serialize)]
struct BoundRow {
    category: Category,
    lower_bytes: u64,
    upper_bytes: u64,
}

#[derive(Serialize)]
struct BoundsReport {
    dim: usize,
    rows: Vec<BoundRow>,
}

fn bounds(ctx: &Ctx) -> Result<Vec<PathBuf>> {
    let dim = ctx.cfg.bounds.dim;
    let rows = Category::ALL
        .iter()
        .map(|&c| {
            let (lower_bytes, upper_bytes) = footprint_bounds(&WorkloadDescriptor::reference(c, dim))?;
            Ok(BoundRow {
                category: c,
                lower_bytes,
                upper_bytes,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(vec![ctx.write("bounds", &BoundsReport { dim, rows })?])
}
