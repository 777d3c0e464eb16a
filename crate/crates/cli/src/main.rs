use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use cmine_core::cluster::{align_clusters, clusters_from_tsv, misplaced, pairwise_accuracy, CLUSTERS_FILE};
use cmine_core::fixtures;
use cmine_core::pipeline::{self, stage_timings, PipelineConfig, Stage, CLUSTERS_DIR};

const EXIT_USAGE: u8 = 1;
const EXIT_STAGE: u8 = 2;
const EXIT_TRUNCATED: u8 = 3;

/// Frequent structure discovery in conceptual models.
#[derive(Parser, Debug)]
#[command(name = "cmine", version)]
struct Cli {
    #[command(flatten)]
    settings: Settings,
    /// Log progress to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

/// Settings shared by every stage. Flags override the config file.
#[derive(Args, Debug)]
struct Settings {
    /// Flat `key=value` pipeline config.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Directory of model documents.
    #[arg(long, global = true, value_name = "DIR")]
    input: Option<PathBuf>,
    #[arg(long, global = true, value_parser = ["generic", "ontouml", "archimate"])]
    language: Option<String>,
    #[arg(long, global = true, value_name = "N")]
    min_support: Option<usize>,
    #[arg(long, global = true, value_name = "N")]
    min_nodes: Option<usize>,
    /// Directory of known patterns (`.lpg`) to leave out of the results.
    #[arg(long, global = true, value_name = "DIR")]
    known: Option<PathBuf>,
    #[arg(long, global = true, value_name = "X")]
    gamma: Option<f64>,
    /// Output directory holding every stage artifact.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Mining timeout in seconds.
    #[arg(long, global = true, value_name = "S")]
    timeout: Option<f64>,
    /// Any other config key, e.g. `--set filter.remove=gen`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Read model documents into the graph store.
    Import,
    /// Build the filtered mining copy of the store.
    Filter,
    /// Mine frequent patterns from the filtered copy.
    Mine,
    /// Enumerate pattern occurrences in the unfiltered store.
    Deepen,
    /// Group mined patterns by similarity.
    Cluster,
    /// Write diagram text for patterns and sample occurrences.
    Viz,
    /// Run the stages listed in the config (all by default).
    Run,
    /// Compare a clustering with hand labels.
    EvalClustering {
        /// Labelled clusters, `cluster_id<TAB>members` per line.
        #[arg(long, value_name = "PATH")]
        truth: PathBuf,
        /// Predicted clusters; defaults to the cluster stage output.
        #[arg(long, value_name = "PATH")]
        predicted: Option<PathBuf>,
    },
    /// Write a reconstructed evaluation corpus as model documents.
    Fixture {
        #[arg(value_enum)]
        corpus: Corpus,
        /// Target directory.
        dir: PathBuf,
        /// Models in the performance corpus.
        #[arg(long, default_value_t = 50)]
        models: usize,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Corpus {
    Ontouml,
    Archimate,
    Performance,
}

enum Failure {
    Usage(anyhow::Error),
    Stage(anyhow::Error),
}

fn load_config(s: &Settings) -> anyhow::Result<PipelineConfig> {
    let mut cfg = match &s.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    let mut set = |key: &str, value: String| cfg.set(key, &value).with_context(|| format!("flag for {key}"));
    if let Some(v) = &s.input {
        set("input", v.display().to_string())?;
    }
    if let Some(v) = &s.language {
        set("language", v.clone())?;
    }
    if let Some(v) = s.min_support {
        set("mining.minSupport", v.to_string())?;
    }
    if let Some(v) = s.min_nodes {
        set("mining.minNodes", v.to_string())?;
    }
    if let Some(v) = &s.known {
        set("mining.known", v.display().to_string())?;
    }
    if let Some(v) = s.gamma {
        set("clustering.gamma", v.to_string())?;
    }
    if let Some(v) = &s.out {
        set("out", v.display().to_string())?;
    }
    if let Some(v) = s.timeout {
        set("mining.timeout", v.to_string())?;
    }
    for o in &s.overrides {
        let (k, v) = o
            .split_once('=')
            .with_context(|| format!("--set expects KEY=VALUE, got {o:?}"))?;
        set(k, v.to_string())?;
    }
    Ok(cfg)
}

fn run_stages(settings: &Settings, stage: Option<Stage>) -> Result<bool, Failure> {
    let mut cfg = load_config(settings).map_err(Failure::Usage)?;
    if let Some(stage) = stage {
        cfg.stages = [stage].into_iter().collect();
    }
    cfg.validate().map_err(|e| Failure::Usage(e.into()))?;
    let summary = pipeline::run(&cfg).map_err(|e| Failure::Stage(e.into()))?;
    for r in &summary.stages {
        let note = match r.status {
            pipeline::StageStatus::Ran => "",
            pipeline::StageStatus::UpToDate => " (up to date)",
        };
        println!("{}: {:.3}s{note}", r.stage, r.seconds);
    }
    for (k, v) in [("models", summary.models), ("patterns", summary.patterns), ("clusters", summary.clusters)] {
        if let Some(v) = v {
            println!("{k}: {v}");
        }
    }
    print!("{}", stage_timings(&summary));
    if summary.truncated {
        eprintln!("warning: mining stopped at the timeout; results are incomplete");
    }
    Ok(summary.truncated)
}

fn read_clusters(path: &Path) -> anyhow::Result<Vec<cmine_core::cluster::Cluster>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    clusters_from_tsv(&text).with_context(|| format!("parsing {}", path.display()))
}

fn eval_clustering(settings: &Settings, truth: &Path, predicted: Option<&Path>) -> Result<(), Failure> {
    let predicted = match predicted {
        Some(p) => p.to_path_buf(),
        None => {
            let cfg = load_config(settings).map_err(Failure::Usage)?;
            cfg.output_dir.join(CLUSTERS_DIR).join(CLUSTERS_FILE)
        }
    };
    let pred = read_clusters(&predicted).map_err(Failure::Stage)?;
    let truth = read_clusters(truth).map_err(Failure::Usage)?;
    let stage = |e: cmine_core::Error| Failure::Stage(e.into());
    let accuracy = pairwise_accuracy(&pred, &truth).map_err(stage)?;
    let alignment = align_clusters(&pred, &truth).map_err(stage)?;
    let wrong = misplaced(&pred, &truth, &alignment).map_err(stage)?;
    println!("pairwise_accuracy\t{accuracy:.4}");
    println!("predicted_clusters\t{}", pred.len());
    println!("truth_clusters\t{}", truth.len());
    println!("misplaced\t{wrong}");
    for (p, t) in &alignment {
        println!("aligned\t{p}\t{t}");
    }
    Ok(())
}

fn write_fixture(corpus: Corpus, dir: &Path, models: usize, seed: u64) -> Result<(), Failure> {
    let docs = match corpus {
        Corpus::Ontouml => fixtures::ontouml::documents(),
        Corpus::Archimate => fixtures::archimate::documents(),
        Corpus::Performance => fixtures::performance_documents(models, 30, 80, seed),
    };
    fixtures::write_documents(&docs, dir).map_err(|e| Failure::Stage(e.into()))?;
    println!("wrote {} documents to {}", docs.len(), dir.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let level = if cli.verbose { "info" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let s = &cli.settings;
    let outcome = match &cli.command {
        Command::Import => run_stages(s, Some(Stage::Import)),
        Command::Filter => run_stages(s, Some(Stage::Filter)),
        Command::Mine => run_stages(s, Some(Stage::Mine)),
        Command::Deepen => run_stages(s, Some(Stage::Deepen)),
        Command::Cluster => run_stages(s, Some(Stage::Cluster)),
        Command::Viz => run_stages(s, Some(Stage::Viz)),
        Command::Run => run_stages(s, None),
        Command::EvalClustering { truth, predicted } => eval_clustering(s, truth, predicted.as_deref()).map(|_| false),
        Command::Fixture { corpus, dir, models, seed } => write_fixture(*corpus, dir, *models, *seed).map(|_| false),
    };
    match outcome {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(EXIT_TRUNCATED),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Stage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_STAGE)
        }
    }
}
