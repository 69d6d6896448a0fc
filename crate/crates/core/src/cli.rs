//! Command-line front end. Every run writes its outputs together with the
//! resolved `config.json` and a `manifest.json` of input hashes.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::dataset::{self, compute_stats, Dataset, DatasetError};
use crate::eval::{self, report, BenchConfig, BenchSubject, EvalError};
use crate::ged::{
    distance_matrix, distance_matrix_between, ArrangementDeletion, CostModel, ExactOptions, GedError, Method,
};
use crate::nn::{self, checkpoint, AugmentBounds, NetConfig, NetError, TrainConfig};

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "wedgekit",
    version,
    about = "Wedge-graph edit distances and spline CNNs for cuneiform sign classification"
)]
struct Cli {
    /// Worker threads [default: all cores, 1 for training]
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
enum Command {
    /// Parse and validate a dataset, write it as JSON
    Ingest(Common),
    /// Per-class graph counts, sizes and extents
    Stats(Common),
    /// All-pairs distance matrix
    Dist(DistArgs),
    /// Rank the dataset against reference signs, write ROC curves
    Rank(RankArgs),
    /// k-NN cross-validation with an edit distance
    Knn(KnnArgs),
    /// Train a network, optionally cross-validated
    Train(TrainArgs),
    /// Classify graphs with a trained network
    Predict(PredictArgs),
    /// Runtime study over growing training sets
    Bench(BenchArgs),
}

#[derive(Debug, Args, Serialize)]
struct Common {
    /// Dataset: a benchmark directory or a JSON file
    #[arg(long, env = "WEDGEKIT_DATA")]
    data: PathBuf,
    /// Output directory
    #[arg(long, default_value = "wedgekit-out")]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
enum ArrDel {
    /// each lost arrangement edge costs D
    #[value(name = "D")]
    PerEdge,
    /// lost arrangement edges are free
    #[value(name = "0")]
    Free,
}

#[derive(Debug, Args, Serialize)]
struct CostArgs {
    /// Weight of the arrangement-edge cosine distance
    #[arg(long, default_value_t = 1000.0)]
    alpha: f64,
    /// Deletion/insertion cost per vertex or edge
    #[arg(long = "del-cost", visible_alias = "D", default_value_t = 1000.0)]
    del_cost: f64,
    /// Cost of arrangement edges lost with a deleted or inserted wedge
    #[arg(long, value_enum, default_value = "D")]
    arr_del_cost: ArrDel,
    /// Largest combined wedge count accepted by the exact method
    #[arg(long, default_value_t = crate::ged::DEFAULT_MAX_WEDGES)]
    max_wedges: usize,
}

impl CostArgs {
    fn model(&self) -> CostModel {
        CostModel {
            alpha: self.alpha,
            del_cost: self.del_cost,
            arrangement_deletion: match self.arr_del_cost {
                ArrDel::PerEdge => ArrangementDeletion::PerEdge,
                ArrDel::Free => ArrangementDeletion::Free,
            },
        }
    }

    fn exact(&self) -> ExactOptions {
        ExactOptions { max_wedges: self.max_wedges }
    }
}

#[derive(Debug, Args, Serialize)]
struct DistArgs {
    #[command(flatten)]
    common: Common,
    /// apx1, apx2 or exact
    #[arg(long, default_value = "apx2")]
    #[serde(serialize_with = "ser_display")]
    method: Method,
    #[command(flatten)]
    cost: CostArgs,
}

#[derive(Debug, Args, Serialize)]
struct RankArgs {
    #[command(flatten)]
    common: Common,
    /// Methods to rank with, comma separated
    #[arg(long, value_delimiter = ',', default_value = "apx1,apx2,exact")]
    #[serde(serialize_with = "ser_methods")]
    methods: Vec<Method>,
    /// Reference graph ids [default: lowest id of each class]
    #[arg(long, value_delimiter = ',')]
    reference_ids: Vec<String>,
    #[command(flatten)]
    cost: CostArgs,
}

#[derive(Debug, Args, Serialize)]
struct KnnArgs {
    #[command(flatten)]
    common: Common,
    /// Methods to evaluate, comma separated
    #[arg(long, value_delimiter = ',', default_value = "apx1,apx2")]
    #[serde(serialize_with = "ser_methods")]
    methods: Vec<Method>,
    /// Neighbours
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 10)]
    folds: usize,
    /// Seed for the fold split
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    cost: CostArgs,
}

#[derive(Debug, Args, Serialize)]
struct NetArgs {
    #[arg(long, default_value_t = 300)]
    epochs: usize,
    #[arg(long, default_value_t = 32)]
    batch: usize,
    /// Initial learning rate
    #[arg(long, default_value_t = 0.01)]
    lr: f64,
    /// First epoch trained with the decayed learning rate
    #[arg(long, default_value_t = 200)]
    lr_decay_epoch: usize,
    #[arg(long, default_value_t = 0.001)]
    lr_decayed: f64,
    /// Dropout on the pooled features
    #[arg(long, default_value_t = 0.5)]
    dropout: f64,
    /// Hidden convolution widths
    #[arg(long, value_delimiter = ',', default_value = "32,64,64")]
    widths: Vec<usize>,
    /// Fresh random augmentation of every training graph each epoch
    #[arg(long)]
    augment: bool,
    /// Train on clean and augmented copies together
    #[arg(long)]
    mix_clean: bool,
    /// Per-vertex translation bound
    #[arg(long = "aug-translate", default_value_t = 0.1)]
    translate: f64,
    /// Anisotropic scale bound (>= 1)
    #[arg(long = "aug-scale", default_value_t = 1.4)]
    scale: f64,
    /// Rotation bound in radians
    #[arg(long = "aug-rotate", default_value_t = 0.6)]
    rotate: f64,
    /// Include every vertex in its own neighbourhood
    #[arg(long)]
    self_loops: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl NetArgs {
    fn config(&self, classes: usize) -> TrainConfig {
        let mut widths = vec![nn::input::FEATURES];
        widths.extend(&self.widths);
        TrainConfig {
            net: NetConfig { widths, classes, dropout: self.dropout, self_loops: self.self_loops },
            epochs: self.epochs,
            batch: self.batch,
            lr: self.lr,
            decay_epoch: self.lr_decay_epoch,
            lr_decayed: self.lr_decayed,
            augment: self.augment,
            bounds: AugmentBounds { translation: self.translate, scale: self.scale, rotation: self.rotate },
            mix_clean: self.mix_clean,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct TrainArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    net: NetArgs,
    /// Cross-validate with this many folds instead of fitting one model
    #[arg(long)]
    cv_folds: Option<usize>,
    /// Training seeds per fold when cross-validating
    #[arg(long, default_value_t = 1)]
    cv_seeds: usize,
    /// Seed for the fold split
    #[arg(long, default_value_t = 0)]
    split_seed: u64,
}

#[derive(Debug, Args, Serialize)]
struct PredictArgs {
    #[command(flatten)]
    common: Common,
    /// Checkpoint written by `train`
    #[arg(long)]
    model: PathBuf,
}

#[derive(Debug, Args, Serialize)]
struct BenchArgs {
    #[command(flatten)]
    common: Common,
    /// apx1, apx2, exact and/or cnn
    #[arg(long, value_delimiter = ',', default_value = "apx1,apx2")]
    methods: Vec<String>,
    /// Training-set sizes in percent of the non-test half
    #[arg(long, value_delimiter = ',', default_value = "25,50,75,100")]
    fractions: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    repeats: usize,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[command(flatten)]
    cost: CostArgs,
    #[command(flatten)]
    net: NetArgs,
}

fn ser_display<S: serde::Serializer, T: std::fmt::Display>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn ser_methods<S: serde::Serializer>(v: &[Method], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|m| m.name()))
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Ged(#[from] GedError),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Dataset(_) => "dataset",
            CliError::Ged(e) => ged_kind(e),
            CliError::Net(_) => "network",
            CliError::Eval(EvalError::Ged(e)) => ged_kind(e),
            CliError::Eval(_) => "evaluation",
            CliError::Io(_) => "io",
            CliError::Invalid(_) => "invalid_argument",
        }
    }
}

fn ged_kind(e: &GedError) -> &'static str {
    match e {
        GedError::Pair { source, .. } => ged_kind(source),
        GedError::SizeBoundExceeded { .. } => "size_bound_exceeded",
        GedError::InvalidCostModel => "invalid_cost_model",
        GedError::Assignment(_) => "assignment",
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

struct Run {
    out: PathBuf,
    inputs: Vec<PathBuf>,
    seed: Option<u64>,
}

impl Run {
    fn new(out: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(out).map_err(|e| io_err(out, e))?;
        Ok(Run { out: out.to_path_buf(), inputs: Vec::new(), seed: None })
    }

    fn write(&self, name: &str, contents: impl AsRef<[u8]>) -> Result<(), CliError> {
        let p = self.out.join(name);
        fs::write(&p, contents).map_err(|e| io_err(&p, e))
    }

    fn write_json(&self, name: &str, v: &impl Serialize) -> Result<(), CliError> {
        let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Io(e.to_string()))?;
        s.push('\n');
        self.write(name, s)
    }

    fn load(&mut self, path: &Path) -> Result<Dataset, CliError> {
        self.inputs.push(path.to_path_buf());
        Ok(Dataset::load(path)?)
    }

    fn finish(&self, cli: &Cli) -> Result<(), CliError> {
        self.write_json("config.json", cli)?;
        let mut inputs = Vec::new();
        for p in &self.inputs {
            for f in input_files(p)? {
                let bytes = fs::read(&f).map_err(|e| io_err(&f, e))?;
                inputs.push(json!({
                    "path": f.display().to_string(),
                    "sha256": hex::encode(Sha256::digest(&bytes)),
                }));
            }
        }
        self.write_json(
            "manifest.json",
            &json!({
                "tool": "wedgekit",
                "version": env!("CARGO_PKG_VERSION"),
                "seed": self.seed,
                "inputs": inputs,
            }),
        )
    }
}

fn input_files(p: &Path) -> Result<Vec<PathBuf>, CliError> {
    if !p.is_dir() {
        return Ok(vec![p.to_path_buf()]);
    }
    let mut files: Vec<PathBuf> = fs::read_dir(p)
        .map_err(|e| io_err(p, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    Ok(files)
}

fn file_safe(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

fn check_cost(c: &CostArgs) -> Result<CostModel, CliError> {
    let m = c.model();
    if !m.is_valid() {
        return Err(GedError::InvalidCostModel.into());
    }
    Ok(m)
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Ingest(a) => {
            let mut run = Run::new(&a.out)?;
            let d = run.load(&a.data)?;
            run.write("dataset.json", dataset::to_json_string(&d))?;
            run.write_json("summary.json", &json!({ "graphs": d.len(), "classes": d.class_names.len() }))?;
            run.finish(cli)
        }
        Command::Stats(a) => {
            let mut run = Run::new(&a.out)?;
            let s = compute_stats(&run.load(&a.data)?)?;
            run.write("stats.csv", s.to_csv())?;
            run.write_json("stats.json", &s)?;
            run.finish(cli)
        }
        Command::Dist(a) => {
            let mut run = Run::new(&a.common.out)?;
            let d = run.load(&a.common.data)?;
            let cm = check_cost(&a.cost)?;
            let dm = distance_matrix(&d.graphs, a.method, &cm, &a.cost.exact())?;
            let mut buf = Vec::new();
            dm.write_csv(&mut buf).map_err(|e| CliError::Io(e.to_string()))?;
            run.write(&format!("distances_{}.csv", a.method.name().to_lowercase()), buf)?;
            run.finish(cli)
        }
        Command::Rank(a) => {
            let mut run = Run::new(&a.common.out)?;
            let d = run.load(&a.common.data)?;
            let cm = check_cost(&a.cost)?;
            let refs = if a.reference_ids.is_empty() { eval::default_references(&d) } else { a.reference_ids.clone() };
            let mut ref_graphs = Vec::new();
            for r in &refs {
                let i = d.index_of(r).ok_or_else(|| EvalError::UnknownReference(r.clone()))?;
                ref_graphs.push(d.graphs[i].clone());
            }
            let mut summary = serde_json::Map::new();
            for &m in &a.methods {
                let dm = distance_matrix_between(&ref_graphs, &d.graphs, m, &cm, &a.cost.exact())?;
                let curves = eval::rank_and_roc(&d, &refs, &dm)?;
                let tag = m.name().to_lowercase();
                for c in &curves {
                    run.write(&format!("roc_{}_{}.csv", tag, file_safe(&c.class)), report::roc_csv(c))?;
                }
                run.write(&format!("auc_{tag}.csv"), report::auc_csv(&curves))?;
                let perfect = curves.iter().filter(|c| c.auc == 1.0).count();
                summary.insert(m.name().into(), json!({ "perfect_auc": perfect, "curves": curves }));
            }
            run.write_json("summary.json", &summary)?;
            run.finish(cli)
        }
        Command::Knn(a) => {
            let mut run = Run::new(&a.common.out)?;
            run.seed = Some(a.seed);
            let d = run.load(&a.common.data)?;
            let cm = check_cost(&a.cost)?;
            let mut reports = Vec::new();
            for &m in &a.methods {
                reports.push(eval::cross_validate(&d, m, &cm, &a.cost.exact(), a.k, a.folds, a.seed)?);
            }
            run.write("cv_results.csv", report::cv_csv(&reports))?;
            run.write_json("summary.json", &reports)?;
            run.finish(cli)
        }
        Command::Train(a) => {
            let mut run = Run::new(&a.common.out)?;
            run.seed = Some(a.net.seed);
            let d = run.load(&a.common.data)?;
            let cfg = a.net.config(d.class_names.len());
            match a.cv_folds {
                Some(folds) => {
                    let r = eval::cross_validate_net(&d, &cfg, folds, a.cv_seeds, a.split_seed)?;
                    run.write("cv_results.csv", report::cv_csv(std::slice::from_ref(&r)))?;
                    run.write_json("summary.json", &r)?;
                }
                None => {
                    let (net, trace) = nn::train(&d.graphs, &cfg)?;
                    run.write("model.bin", checkpoint::to_bytes(&net))?;
                    let mut csv = String::from("epoch,lr,loss,accuracy\n");
                    for t in &trace {
                        csv.push_str(&format!("{},{},{},{}\n", t.epoch, t.lr, t.loss, t.accuracy));
                    }
                    run.write("trace.csv", csv)?;
                    run.write_json("summary.json", &json!({ "classes": d.class_names, "trace": trace }))?;
                }
            }
            run.finish(cli)
        }
        Command::Predict(a) => {
            let mut run = Run::new(&a.common.out)?;
            let d = run.load(&a.common.data)?;
            run.inputs.push(a.model.clone());
            let net = checkpoint::load(&a.model)?;
            let preds = net.predict(&d.graphs)?;
            let mut csv = String::from("id,label,predicted,confidence\n");
            for (g, p) in d.graphs.iter().zip(&preds) {
                let name = |i: usize| d.class_names.get(i).cloned().unwrap_or_else(|| i.to_string());
                csv.push_str(&format!("{},{},{},{}\n", g.id, name(g.label), name(p.class), p.probabilities[p.class]));
            }
            run.write("predictions.csv", csv)?;
            let acc =
                preds.iter().zip(&d.graphs).filter(|(p, g)| p.class == g.label).count() as f64 / d.len().max(1) as f64;
            run.write_json("summary.json", &json!({ "graphs": d.len(), "accuracy": acc }))?;
            run.finish(cli)
        }
        Command::Bench(a) => {
            let mut run = Run::new(&a.common.out)?;
            run.seed = Some(a.net.seed);
            let d = run.load(&a.common.data)?;
            let subjects = a
                .methods
                .iter()
                .map(|m| match m.to_ascii_lowercase().as_str() {
                    "cnn" => Ok(BenchSubject::Network),
                    other => other.parse().map(BenchSubject::Ged).map_err(CliError::Invalid),
                })
                .collect::<Result<Vec<_>, _>>()?;
            let cfg = BenchConfig {
                fractions: a.fractions.clone(),
                repeats: a.repeats,
                seed: a.net.seed,
                k: a.k,
                cost_model: check_cost(&a.cost)?,
                max_wedges: a.cost.max_wedges,
                train: a.net.config(d.class_names.len()),
            };
            let records = eval::bench(&d, &subjects, &cfg)?;
            run.write("bench.csv", report::bench_csv(&records))?;
            run.write_json("summary.json", &records)?;
            run.finish(cli)
        }
    }
}

fn default_jobs(cmd: &Command) -> usize {
    match cmd {
        Command::Train(_) => 1,
        _ => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
    }
}

fn emit_error(kind: &str, message: &str) {
    eprintln!("{}", json!({ "error": kind, "message": message }));
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code: 0 on success, 1 when the operation fails, 2 on usage
/// errors. Failures are reported as one JSON line on stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return 0;
        }
        Err(e) => {
            let msg = e.to_string();
            emit_error("usage", msg.lines().next().unwrap_or("").trim_start_matches("error: "));
            return 2;
        }
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    let jobs = cli.jobs.unwrap_or_else(|| default_jobs(&cli.command));
    if jobs == 0 {
        emit_error("usage", "--jobs must be at least 1");
        return 2;
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(p) => p,
        Err(e) => {
            emit_error("internal", &e.to_string());
            return 1;
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok(()) => 0,
        Err(e) => {
            emit_error(e.kind(), &e.to_string());
            1
        }
    }
}
