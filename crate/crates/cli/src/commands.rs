use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use ofs_core::data::{generate_synthetic, write_libsvm, Dataset, SyntheticSpec};
use ofs_core::pipeline::{
    benchmark_sweep, cross_validate, evaluate, permute, predictions, write_csv, write_table, CvGrid,
    LoaderMode, SweepConfig, DEFAULT_CHANNEL_CAPACITY, DEFAULT_MEMORY_BUDGET,
};
use ofs_core::{Algorithm, Hyperparams, Model, OnlineLearner};

pub const TRUTH_FILE: &str = "informative.txt";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(ofs_core::Error),
}

impl From<ofs_core::Error> for CliError {
    fn from(e: ofs_core::Error) -> Self {
        CliError::Data(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Data(e.into())
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Parser)]
#[command(
    name = "ofs",
    version,
    about = "Online feature selection for sparse binary classification"
)]
pub struct Cli {
    /// Seed for every randomized step (generation, shuffling).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Capacity of the loader channel between the reader and learner threads.
    #[arg(long, global = true, default_value_t = DEFAULT_CHANNEL_CAPACITY)]
    capacity: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic train/test pair and its informative feature list.
    Generate(GenerateArgs),
    /// Train a model on a libsvm file in a single pass.
    Train(TrainArgs),
    /// Print one predicted label per example.
    Predict(PredictArgs),
    /// Report the accuracy of a saved model.
    Eval(EvalArgs),
    /// Train and evaluate algorithms over a grid of budgets and repeats.
    Sweep(SweepArgs),
    /// Choose hyperparameters by k-fold cross-validation.
    Cv(CvArgs),
}

#[derive(Debug, Args)]
struct SyntheticArgs {
    /// Total number of features.
    #[arg(long, default_value_t = 2000)]
    dim: usize,
    /// Informative dimensions, shared by all examples.
    #[arg(long, default_value_t = 100)]
    idim: usize,
    /// Noise dimensions per example.
    #[arg(long, default_value_t = 200)]
    ndim: usize,
    /// Number of training examples.
    #[arg(long = "train", default_value_t = 10_000)]
    n_train: usize,
    /// Number of test examples.
    #[arg(long = "test", default_value_t = 1_000)]
    n_test: usize,
}

impl SyntheticArgs {
    fn spec(&self, seed: u64) -> CliResult<SyntheticSpec> {
        let spec = SyntheticSpec {
            n_train: self.n_train,
            n_test: self.n_test,
            dim: self.dim,
            idim: self.idim,
            ndim: self.ndim,
            seed,
        };
        spec.validate().map_err(|e| usage(e.to_string()))?;
        Ok(spec)
    }
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[command(flatten)]
    synthetic: SyntheticArgs,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Write gzip-compressed files.
    #[arg(long)]
    gzip: bool,
}

#[derive(Debug, Args)]
struct HyperArgs {
    /// Feature budget (required for sofs, pet and fofs).
    #[arg(long = "B")]
    budget: Option<usize>,
    /// Confidence regularization for sofs and arow.
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Learning rate for pet, fofs and ogd.
    #[arg(long, default_value_t = 0.2)]
    eta: f64,
    /// Regularization for fofs.
    #[arg(long, default_value_t = 0.01)]
    lambda: f64,
}

impl HyperArgs {
    fn hyperparams(&self) -> Hyperparams {
        Hyperparams {
            gamma: self.gamma,
            eta: self.eta,
            lambda: self.lambda,
            budget: self.budget,
        }
    }
}

#[derive(Debug, Args)]
struct TrainArgs {
    #[arg(long, value_parser = parse_algo)]
    algo: Algorithm,
    #[command(flatten)]
    hyper: HyperArgs,
    /// Training data (libsvm, optionally .gz).
    #[arg(long)]
    data: PathBuf,
    /// Where to write the model.
    #[arg(long)]
    model: PathBuf,
    /// Shuffle the training data with --seed before the pass.
    #[arg(long)]
    shuffle: bool,
}

#[derive(Debug, Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    /// Write labels here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    /// Informative-feature file from `generate`; also report
    /// |selected ∩ informative| / |informative|.
    #[arg(long)]
    recovery: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Comma-separated algorithms.
    #[arg(long, value_delimiter = ',', value_parser = parse_algo, default_value = "sofs,pet,fofs")]
    algos: Vec<Algorithm>,
    /// Comma-separated budgets.
    #[arg(long = "B", value_delimiter = ',', default_value = "50,100,200,400")]
    budgets: Vec<usize>,
    /// Repeats per (algorithm, budget), each on its own permutation of the
    /// training data.
    #[arg(long, default_value_t = 10)]
    repeats: usize,
    /// Confidence regularization for sofs and arow.
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Learning rate for pet, fofs and ogd.
    #[arg(long, default_value_t = 0.2)]
    eta: f64,
    /// Regularization for fofs.
    #[arg(long, default_value_t = 0.01)]
    lambda: f64,
    /// Training data; a synthetic dataset is generated when absent.
    #[arg(long, requires = "test_data")]
    data: Option<PathBuf>,
    /// Test data, used together with --data.
    #[arg(long, requires = "data")]
    test_data: Option<PathBuf>,
    #[command(flatten)]
    synthetic: SyntheticArgs,
    /// Write reports as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Training sets estimated larger than this many bytes are shuffled on disk.
    #[arg(long, default_value_t = DEFAULT_MEMORY_BUDGET)]
    memory_budget: usize,
}

#[derive(Debug, Args)]
struct CvArgs {
    #[arg(long, value_parser = parse_algo)]
    algo: Algorithm,
    #[arg(long)]
    data: PathBuf,
    /// Feature budget (required for sofs, pet and fofs).
    #[arg(long = "B")]
    budget: Option<usize>,
    /// Candidate values, tried only by algorithms that use them.
    #[arg(long, value_delimiter = ',', default_value = "0.25,1,4")]
    gammas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.05,0.2,0.8")]
    etas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.001,0.01,0.1")]
    lambdas: Vec<f64>,
    /// Number of contiguous folds.
    #[arg(long, default_value_t = 5)]
    folds: usize,
}

fn parse_algo(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: ofs_core::Error| e.to_string())
}

fn require_file(path: &Path) -> CliResult {
    if path.is_file() {
        Ok(())
    } else {
        Err(usage(format!("no such file: {}", path.display())))
    }
}

fn validate(algo: Algorithm, hp: &Hyperparams) -> CliResult {
    hp.validate(algo).map_err(|e| usage(e.to_string()))
}

pub fn run(cli: Cli) -> CliResult {
    let loader = LoaderMode::from_env(cli.capacity);
    match cli.command {
        Command::Generate(args) => generate(args, cli.seed),
        Command::Train(args) => train(args, cli.seed, loader),
        Command::Predict(args) => predict(args),
        Command::Eval(args) => eval(args),
        Command::Sweep(args) => sweep(args, cli.seed, loader),
        Command::Cv(args) => cv(args),
    }
}

fn generate(args: GenerateArgs, seed: u64) -> CliResult {
    let spec = args.synthetic.spec(seed)?;
    let syn = generate_synthetic(spec)?;
    fs::create_dir_all(&args.out).map_err(|e| {
        CliError::Data(ofs_core::Error::File {
            path: args.out.clone(),
            source: e,
        })
    })?;
    let ext = if args.gzip { "svm.gz" } else { "svm" };
    let train_path = args.out.join(format!("train.{ext}"));
    let test_path = args.out.join(format!("test.{ext}"));
    let n_train = write_libsvm(&train_path, syn.train.open()?.map_while(Result::ok))?;
    let n_test = write_libsvm(&test_path, syn.test.open()?.map_while(Result::ok))?;

    let truth_path = args.out.join(TRUTH_FILE);
    let mut truth = BufWriter::new(File::create(&truth_path)?);
    writeln!(truth, "# informative feature indices, 0-based")?;
    for i in &syn.ground_truth {
        writeln!(truth, "{i}")?;
    }
    truth.flush()?;
    println!(
        "wrote {n_train} training and {n_test} test examples to {}; informative indices in {}",
        args.out.display(),
        truth_path.display()
    );
    Ok(())
}

fn train(args: TrainArgs, seed: u64, loader: LoaderMode) -> CliResult {
    let hp = args.hyper.hyperparams();
    validate(args.algo, &hp)?;
    require_file(&args.data)?;
    let data = Dataset::libsvm(&args.data);
    let permuted;
    let source = if args.shuffle {
        permuted = permute(&data, seed, DEFAULT_MEMORY_BUDGET)?;
        &permuted.dataset
    } else {
        &data
    };

    let mut model = Model::new(args.algo, &hp).map_err(|e| usage(e.to_string()))?;
    let outcome = ofs_core::pipeline::train_dataset(&mut model, source, loader)?;
    model.save_to_path(&args.model)?;
    let dim = outcome.dim.max(model.weights().len());
    println!(
        "algo={} examples={} mistakes={} nnz={} sparsity_pct={:.4} train_s={:.3} total_s={:.3}",
        args.algo,
        outcome.examples,
        outcome.mistakes,
        model.nnz(),
        ofs_core::pipeline::sparsity_pct(model.nnz(), dim),
        outcome.train_seconds,
        outcome.total_seconds
    );
    Ok(())
}

fn load_model(path: &Path) -> CliResult<Model> {
    require_file(path)?;
    Ok(Model::load_from_path(path)?)
}

fn predict(args: PredictArgs) -> CliResult {
    let model = load_model(&args.model)?;
    require_file(&args.data)?;
    let labels = predictions(&model, Dataset::libsvm(&args.data).open()?)?;
    let mut out: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    for label in labels {
        writeln!(out, "{label}")?;
    }
    out.flush()?;
    Ok(())
}

fn read_truth(path: &Path) -> CliResult<Vec<usize>> {
    let text = fs::read_to_string(path)?;
    let mut truth = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let idx = line.parse().map_err(|_| {
            CliError::Data(ofs_core::Error::Parse {
                line: n as u64 + 1,
                token: 1,
                message: format!("bad feature index {line:?}"),
            })
        })?;
        truth.push(idx);
    }
    truth.sort_unstable();
    truth.dedup();
    Ok(truth)
}

fn eval(args: EvalArgs) -> CliResult {
    let model = load_model(&args.model)?;
    require_file(&args.data)?;
    if let Some(path) = &args.recovery {
        require_file(path)?;
    }
    let accuracy = evaluate(&model, Dataset::libsvm(&args.data).open()?)?;
    println!("accuracy {accuracy:.6}");
    if let Some(path) = &args.recovery {
        let truth = read_truth(path)?;
        let selected = model.selected();
        let hits = truth.iter().filter(|t| selected.binary_search(t).is_ok()).count();
        let recovery = if truth.is_empty() {
            0.0
        } else {
            hits as f64 / truth.len() as f64
        };
        println!(
            "recovery {recovery:.6} ({hits}/{} informative, {} selected)",
            truth.len(),
            selected.len()
        );
    }
    Ok(())
}

fn sweep(args: SweepArgs, seed: u64, loader: LoaderMode) -> CliResult {
    if args.algos.is_empty() {
        return Err(usage("--algos is empty"));
    }
    if args.repeats == 0 {
        return Err(usage("--repeats must be at least 1"));
    }
    let hyper = Hyperparams {
        gamma: args.gamma,
        eta: args.eta,
        lambda: args.lambda,
        budget: None,
    };
    for &algo in &args.algos {
        if algo.selects_features() {
            for &b in &args.budgets {
                validate(algo, &hyper.with_budget(b))?;
            }
            if args.budgets.is_empty() {
                return Err(usage(format!("{algo} needs at least one --B value")));
            }
        } else {
            validate(algo, &hyper)?;
        }
    }

    let (train, test) = match (&args.data, &args.test_data) {
        (Some(train), Some(test)) => {
            require_file(train)?;
            require_file(test)?;
            (Dataset::libsvm(train), Dataset::libsvm(test))
        }
        _ => {
            let syn = generate_synthetic(args.synthetic.spec(seed)?)?;
            (syn.train, syn.test)
        }
    };

    let cfg = SweepConfig {
        algos: args.algos,
        budgets: args.budgets,
        repeats: args.repeats,
        seed,
        hyper,
        loader,
        memory_budget: args.memory_budget,
    };
    let reports = benchmark_sweep(&cfg, &train, &test)?;
    write_table(io::stdout().lock(), &reports)?;
    if let Some(path) = &args.csv {
        let file = File::create(path)?;
        write_csv(BufWriter::new(file), &reports)?;
    }
    Ok(())
}

fn cv(args: CvArgs) -> CliResult {
    let base = Hyperparams {
        budget: args.budget,
        ..Hyperparams::default()
    };
    let grid = CvGrid {
        gammas: args.gammas,
        etas: args.etas,
        lambdas: args.lambdas,
        folds: args.folds,
    };
    grid.validate().map_err(|e| usage(e.to_string()))?;
    for hp in grid.points(args.algo, &base) {
        validate(args.algo, &hp)?;
    }
    require_file(&args.data)?;
    let examples = Dataset::libsvm(&args.data).materialize()?;
    let outcome = cross_validate(args.algo, &grid, &base, &examples)?;
    for (hp, acc) in &outcome.scores {
        println!("{} accuracy {acc:.6}", describe(args.algo, hp));
    }
    println!(
        "best {} accuracy {:.6}",
        describe(args.algo, &outcome.best),
        outcome.best_accuracy
    );
    Ok(())
}

fn describe(algo: Algorithm, hp: &Hyperparams) -> String {
    let mut parts = Vec::new();
    if algo.uses_gamma() {
        parts.push(format!("gamma={}", hp.gamma));
    }
    if algo.uses_eta() {
        parts.push(format!("eta={}", hp.eta));
    }
    if algo.uses_lambda() {
        parts.push(format!("lambda={}", hp.lambda));
    }
    parts.join(" ")
}
