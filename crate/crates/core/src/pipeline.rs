//! Staged workflow: import, filter, mine, deepen, cluster, viz.
//!
//! Every stage reads its inputs from and writes its outputs to the output
//! directory, so stages can be run one at a time:
//!
//! ```text
//! out/
//!   store/            unfiltered graph store, import_report.tsv
//!   filtered/         filtered graph store, filter_report.tsv
//!   patterns/         pattern_<k>.lpg, index.tsv, status.tsv
//!   occurrences/      pattern_<k>/<model_id>.tsv, frequency.tsv
//!   clusters/         clusters.tsv
//!   viz/              pattern_<k>.puml, pattern_<k>_occ_<m>.puml
//!   summary.tsv
//!   .stamps/<stage>   input fingerprint of the last completed run
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use sha2::{Digest, Sha256};

use crate::cluster::{cluster, clusters_to_tsv, ClusteringConfig, FeatureScaling, CLUSTERS_FILE};
use crate::error::{Error, Result};
use crate::filter::{apply_filter, filter_report, FilterSpec};
use crate::graph::{EdgeLabel, Label};
use crate::import::{load_directory, Language};
use crate::matcher::{deepen, MatchSemantics, Occurrences};
use crate::mining::{mine, read_patterns, write_patterns, MiningConfig, PATTERN_INDEX};
use crate::render::{bind_occurrence, dereify, emit_archimate_diagram, emit_class_diagram};
use crate::store::{encode, read_graph, read_store, write_store, GRAPH_EXT, MANIFEST};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Import,
    Filter,
    Mine,
    Deepen,
    Cluster,
    Viz,
}

impl Stage {
    pub const ALL: [Stage; 6] = [
        Stage::Import,
        Stage::Filter,
        Stage::Mine,
        Stage::Deepen,
        Stage::Cluster,
        Stage::Viz,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Import => "import",
            Stage::Filter => "filter",
            Stage::Mine => "mine",
            Stage::Deepen => "deepen",
            Stage::Cluster => "cluster",
            Stage::Viz => "viz",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Stage::ALL
            .into_iter()
            .find(|st| st.as_str() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown stage {s:?}")))
    }
}

pub const STORE_DIR: &str = "store";
pub const FILTERED_DIR: &str = "filtered";
pub const PATTERNS_DIR: &str = "patterns";
pub const OCCURRENCES_DIR: &str = "occurrences";
pub const CLUSTERS_DIR: &str = "clusters";
pub const VIZ_DIR: &str = "viz";
pub const SUMMARY_FILE: &str = "summary.tsv";
const STAMPS_DIR: &str = ".stamps";
const STATUS_FILE: &str = "status.tsv";

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub input_dir: Option<PathBuf>,
    pub language: Language,
    pub filter: FilterSpec,
    pub mining: MiningConfig,
    /// Directory of `.lpg` known patterns, loaded when mining starts.
    pub known_dir: Option<PathBuf>,
    pub clustering: ClusteringConfig,
    pub semantics: MatchSemantics,
    /// Occurrence diagrams rendered per pattern.
    pub viz_occurrences: usize,
    pub output_dir: PathBuf,
    pub stages: BTreeSet<Stage>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            input_dir: None,
            language: Language::Generic,
            filter: FilterSpec::default(),
            mining: MiningConfig::default(),
            known_dir: None,
            clustering: ClusteringConfig::new(0.6),
            semantics: MatchSemantics::Subset,
            viz_occurrences: 1,
            output_dir: PathBuf::from("out"),
            stages: Stage::ALL.into_iter().collect(),
        }
    }
}

fn list(value: &str) -> Vec<&str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn number<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {value:?}")))
}

impl PipelineConfig {
    /// Applies one dotted `key=value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim() {
            "input" => self.input_dir = Some(PathBuf::from(value)),
            "language" => self.language = value.parse()?,
            "out" => self.output_dir = PathBuf::from(value),
            "stages" => {
                self.stages = list(value).into_iter().map(Stage::from_str).collect::<Result<_>>()?;
            }
            "filter.select" => {
                let select = if value.is_empty() {
                    None
                } else {
                    Some(list(value).into_iter().map(Label::new).collect::<Result<_>>()?)
                };
                self.filter = FilterSpec::new(select, self.filter.remove().clone(), self.filter.remove_edges().clone())?;
            }
            "filter.remove" => {
                let remove = list(value).into_iter().map(Label::new).collect::<Result<_>>()?;
                self.filter = FilterSpec::new(self.filter.select().cloned(), remove, self.filter.remove_edges().clone())?;
            }
            "filter.removeEdges" => {
                let edges = list(value)
                    .into_iter()
                    .map(EdgeLabel::from_str)
                    .collect::<Result<_>>()?;
                self.filter = FilterSpec::new(self.filter.select().cloned(), self.filter.remove().clone(), edges)?;
            }
            "filter.dropProperties" => self.filter.drop_properties = number(key, value)?,
            "mining.minSupport" => self.mining.min_support = number(key, value)?,
            "mining.minNodes" => self.mining.min_nodes = number(key, value)?,
            "mining.maxEdges" => {
                self.mining.max_edges = if value.is_empty() { None } else { Some(number(key, value)?) }
            }
            "mining.known" => self.known_dir = (!value.is_empty()).then(|| PathBuf::from(value)),
            "mining.timeout" => {
                self.mining.timeout = if value.is_empty() {
                    None
                } else {
                    let secs: f64 = number(key, value)?;
                    if secs.is_nan() || secs <= 0.0 {
                        return Err(Error::Config(format!("{key}: must be positive")));
                    }
                    Some(Duration::from_secs_f64(secs))
                }
            }
            "mining.threads" => {
                self.mining.threads = if value.is_empty() { None } else { Some(number(key, value)?) }
            }
            "clustering.gamma" => self.clustering.gamma = number(key, value)?,
            "clustering.scaling" => self.clustering.scaling = value.parse::<FeatureScaling>()?,
            "deepen.semantics" => self.semantics = value.parse()?,
            "viz.occurrences" => self.viz_occurrences = number(key, value)?,
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Parses flat `key=value` text. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = PipelineConfig::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", i + 1)))?;
            self.set(k, v)
                .map_err(|e| Error::Config(format!("line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        PipelineConfig::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.clustering.validate()?;
        if self.mining.min_support == 0 || self.mining.min_nodes == 0 {
            return Err(Error::InvalidMiningConfig(
                "minSupport and minNodes must be positive".into(),
            ));
        }
        if self.stages.contains(&Stage::Import) && self.input_dir.is_none() {
            return Err(Error::Config("the import stage needs an input directory".into()));
        }
        Ok(())
    }

    fn dir(&self, name: &str) -> PathBuf {
        self.output_dir.join(name)
    }

    /// Settings a stage depends on, as stable text for fingerprinting.
    fn stage_settings(&self, stage: Stage) -> String {
        match stage {
            Stage::Import => format!("language={}", self.language),
            Stage::Filter => format!("{:?}", self.filter),
            Stage::Mine => format!(
                "{} {} {:?} {:?}",
                self.mining.min_support, self.mining.min_nodes, self.mining.max_edges, self.mining.timeout
            ),
            Stage::Deepen => format!("{}", self.semantics),
            Stage::Cluster => format!("{} {}", self.clustering.gamma, self.clustering.scaling),
            Stage::Viz => format!("{} {} {}", self.language, self.semantics, self.viz_occurrences),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageStatus {
    Ran,
    /// Inputs and settings unchanged since the last run.
    UpToDate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageRecord {
    pub stage: Stage,
    pub seconds: f64,
    pub status: StageStatus,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunSummary {
    pub stages: Vec<StageRecord>,
    pub models: Option<usize>,
    pub patterns: Option<usize>,
    pub clusters: Option<usize>,
    pub truncated: bool,
}

impl RunSummary {
    pub fn seconds(&self, stage: Stage) -> Option<f64> {
        self.stages.iter().find(|r| r.stage == stage).map(|r| r.seconds)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("key\tvalue\n");
        for r in &self.stages {
            let status = match r.status {
                StageStatus::Ran => "ran",
                StageStatus::UpToDate => "up-to-date",
            };
            writeln!(out, "{}.seconds\t{:.3}", r.stage, r.seconds).unwrap();
            writeln!(out, "{}.status\t{status}", r.stage).unwrap();
        }
        for (k, v) in [("models", self.models), ("patterns", self.patterns), ("clusters", self.clusters)] {
            if let Some(v) = v {
                writeln!(out, "{k}\t{v}").unwrap();
            }
        }
        writeln!(out, "truncated\t{}", self.truncated).unwrap();
        out
    }
}

/// Four-column timing table (import, mining, clustering, viz). Import
/// covers import and filtering; viz covers deepening and rendering. Columns
/// whose stages did not run show `-`.
pub fn stage_timings(summary: &RunSummary) -> String {
    let column = |stages: &[Stage]| {
        let times: Vec<f64> = stages.iter().filter_map(|s| summary.seconds(*s)).collect();
        if times.is_empty() {
            "-".to_string()
        } else {
            format!("{:.3}", times.iter().sum::<f64>())
        }
    };
    format!(
        "import (s)\tmining (s)\tclustering (s)\tviz (s)\n{}\t{}\t{}\t{}\n",
        column(&[Stage::Import, Stage::Filter]),
        column(&[Stage::Mine]),
        column(&[Stage::Cluster]),
        column(&[Stage::Deepen, Stage::Viz]),
    )
}

fn hash_path(hasher: &mut Sha256, root: &Path, path: &Path) -> Result<()> {
    if path.is_dir() {
        let mut entries: Vec<PathBuf> = fs::read_dir(path)
            .map_err(|e| Error::io(path, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .collect();
        entries.sort();
        for e in entries {
            hash_path(hasher, root, &e)?;
        }
    } else if path.is_file() {
        let rel = path.strip_prefix(root).unwrap_or(path);
        hasher.update(rel.to_string_lossy().as_bytes());
        hasher.update([0]);
        hasher.update(fs::read(path).map_err(|e| Error::io(path, e))?);
        hasher.update([0]);
    }
    Ok(())
}

fn fingerprint(parts: &[&str], paths: &[&Path]) -> Result<String> {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0xff]);
    }
    for p in paths {
        hash_path(&mut h, p, p)?;
        h.update([0xfe]);
    }
    Ok(h.finalize().iter().map(|b| format!("{b:02x}")).collect())
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn fresh_dir(path: &Path) -> Result<()> {
    if path.exists() {
        fs::remove_dir_all(path).map_err(|e| Error::io(path, e))?;
    }
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

fn require(stage: Stage, artifact: PathBuf) -> Result<PathBuf> {
    if artifact.exists() {
        Ok(artifact)
    } else {
        Err(Error::MissingArtifact {
            stage: stage.to_string(),
            artifact,
        })
    }
}

struct Runner<'a> {
    cfg: &'a PipelineConfig,
    summary: RunSummary,
}

impl Runner<'_> {
    fn stamp_path(&self, stage: Stage) -> PathBuf {
        self.cfg.dir(STAMPS_DIR).join(stage.as_str())
    }

    fn inputs(&self, stage: Stage) -> Result<Vec<PathBuf>> {
        let cfg = self.cfg;
        Ok(match stage {
            Stage::Import => {
                let input = cfg
                    .input_dir
                    .clone()
                    .ok_or_else(|| Error::Config("the import stage needs an input directory".into()))?;
                vec![require(stage, input)?]
            }
            Stage::Filter => {
                require(stage, cfg.dir(STORE_DIR).join(MANIFEST))?;
                vec![cfg.dir(STORE_DIR)]
            }
            Stage::Mine => {
                require(stage, cfg.dir(FILTERED_DIR).join(MANIFEST))?;
                let mut v = vec![cfg.dir(FILTERED_DIR)];
                if let Some(k) = &cfg.known_dir {
                    v.push(require(stage, k.clone())?);
                }
                v
            }
            Stage::Deepen | Stage::Viz => {
                require(stage, cfg.dir(PATTERNS_DIR).join(PATTERN_INDEX))?;
                require(stage, cfg.dir(STORE_DIR).join(MANIFEST))?;
                require(stage, cfg.dir(FILTERED_DIR).join(MANIFEST))?;
                vec![cfg.dir(PATTERNS_DIR), cfg.dir(STORE_DIR), cfg.dir(FILTERED_DIR)]
            }
            Stage::Cluster => {
                require(stage, cfg.dir(PATTERNS_DIR).join(PATTERN_INDEX))?;
                require(stage, cfg.dir(FILTERED_DIR).join(MANIFEST))?;
                vec![cfg.dir(PATTERNS_DIR), cfg.dir(FILTERED_DIR)]
            }
        })
    }

    fn output(&self, stage: Stage) -> PathBuf {
        self.cfg.dir(match stage {
            Stage::Import => STORE_DIR,
            Stage::Filter => FILTERED_DIR,
            Stage::Mine => PATTERNS_DIR,
            Stage::Deepen => OCCURRENCES_DIR,
            Stage::Cluster => CLUSTERS_DIR,
            Stage::Viz => VIZ_DIR,
        })
    }

    fn run_stage(&mut self, stage: Stage) -> Result<()> {
        let inputs = self.inputs(stage)?;
        let input_refs: Vec<&Path> = inputs.iter().map(PathBuf::as_path).collect();
        let settings = self.cfg.stage_settings(stage);
        let print = fingerprint(&[stage.as_str(), &settings], &input_refs)?;
        let stamp = self.stamp_path(stage);
        let started = Instant::now();
        let up_to_date = self.output(stage).exists()
            && fs::read_to_string(&stamp).map(|s| s == print).unwrap_or(false);
        if up_to_date {
            log::info!("{stage}: up to date");
            self.record_counts(stage)?;
        } else {
            log::info!("{stage}: running");
            let complete = self.execute(stage)?;
            if complete {
                write(&stamp, &print)?;
            } else if stamp.exists() {
                fs::remove_file(&stamp).map_err(|e| Error::io(&stamp, e))?;
            }
        }
        self.summary.stages.push(StageRecord {
            stage,
            seconds: started.elapsed().as_secs_f64(),
            status: if up_to_date { StageStatus::UpToDate } else { StageStatus::Ran },
        });
        Ok(())
    }

    /// Refreshes summary counts from artifacts of a skipped stage.
    fn record_counts(&mut self, stage: Stage) -> Result<()> {
        let count_lines = |path: PathBuf| -> Result<usize> {
            let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            Ok(text.lines().filter(|l| !l.is_empty()).count())
        };
        match stage {
            Stage::Import => self.summary.models = Some(count_lines(self.cfg.dir(STORE_DIR).join(MANIFEST))?),
            Stage::Mine => {
                self.summary.patterns = Some(count_lines(self.cfg.dir(PATTERNS_DIR).join(PATTERN_INDEX))? - 1);
            }
            Stage::Cluster => {
                self.summary.clusters = Some(count_lines(self.cfg.dir(CLUSTERS_DIR).join(CLUSTERS_FILE))? - 1);
            }
            _ => {}
        }
        Ok(())
    }

    /// Runs a stage; returns false when its output is incomplete
    /// (a truncated mining run).
    fn execute(&mut self, stage: Stage) -> Result<bool> {
        let cfg = self.cfg;
        match stage {
            Stage::Import => {
                let input = cfg.input_dir.as_ref().expect("checked in inputs");
                let (dataset, reports) = load_directory(input, cfg.language)?;
                let out = cfg.dir(STORE_DIR);
                fresh_dir(&out)?;
                write_store(&dataset, &out)?;
                let mut report = String::from("document\tmapped\tskipped\tdetails\n");
                for r in &reports {
                    let details: Vec<String> = r
                        .skipped
                        .iter()
                        .map(|s| format!("{} {}: {}", s.kind, s.id, s.reason))
                        .chain(r.notes.iter().cloned())
                        .collect();
                    writeln!(
                        report,
                        "{}\t{}\t{}\t{}",
                        r.document,
                        r.mapped_total(),
                        r.skipped.len(),
                        encode(&details.join("; "))
                    )
                    .unwrap();
                }
                write(&out.join("import_report.tsv"), &report)?;
                self.summary.models = Some(dataset.len());
            }
            Stage::Filter => {
                let store = read_store(&cfg.dir(STORE_DIR))?;
                let filtered = apply_filter(&store, &cfg.filter);
                let out = cfg.dir(FILTERED_DIR);
                fresh_dir(&out)?;
                write_store(&filtered, &out)?;
                write(&out.join("filter_report.tsv"), &filter_report(&store, &filtered)?)?;
            }
            Stage::Mine => {
                let filtered = read_store(&cfg.dir(FILTERED_DIR))?;
                let mut mining = cfg.mining.clone();
                if let Some(dir) = &cfg.known_dir {
                    mining.known_patterns = load_known(dir)?;
                }
                let outcome = mine(&filtered, &mining)?;
                let out = cfg.dir(PATTERNS_DIR);
                fresh_dir(&out)?;
                write_patterns(&outcome.patterns, &filtered, &out)?;
                write(
                    &out.join(STATUS_FILE),
                    &format!("truncated\t{}\nexplored\t{}\n", outcome.truncated, outcome.explored),
                )?;
                self.summary.patterns = Some(outcome.patterns.len());
                self.summary.truncated |= outcome.truncated;
                return Ok(!outcome.truncated);
            }
            Stage::Deepen => {
                let (store, patterns) = self.patterns_and_store()?;
                let out = cfg.dir(OCCURRENCES_DIR);
                fresh_dir(&out)?;
                let mut freq = String::from("pattern_index\tmodel_frequency\ttotal_frequency\tper_model_counts\n");
                for p in &patterns {
                    let (per_model, report) = deepen(p, &store, cfg.semantics);
                    let dir = out.join(format!("pattern_{}", p.pattern_index));
                    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
                    for (g, occ) in store.graphs().iter().zip(&per_model) {
                        if !occ.list.is_empty() {
                            write(&dir.join(format!("{}.tsv", g.model_id)), &occurrences_tsv(occ))?;
                        }
                    }
                    let counts: Vec<String> = report
                        .per_model_counts
                        .iter()
                        .filter(|(_, &c)| c > 0)
                        .map(|(m, c)| format!("{m}:{c}"))
                        .collect();
                    writeln!(
                        freq,
                        "{}\t{}\t{}\t{}",
                        p.pattern_index,
                        report.model_frequency,
                        report.total_frequency,
                        counts.join(",")
                    )
                    .unwrap();
                }
                write(&out.join("frequency.tsv"), &freq)?;
            }
            Stage::Cluster => {
                let filtered = read_store(&cfg.dir(FILTERED_DIR))?;
                let patterns = read_patterns(&cfg.dir(PATTERNS_DIR), &filtered)?;
                let out = cfg.dir(CLUSTERS_DIR);
                fresh_dir(&out)?;
                let clusters = if patterns.is_empty() {
                    Vec::new()
                } else {
                    cluster(&patterns, &cfg.clustering)?
                };
                write(&out.join(CLUSTERS_FILE), &clusters_to_tsv(&clusters))?;
                self.summary.clusters = Some(clusters.len());
            }
            Stage::Viz => {
                let (store, patterns) = self.patterns_and_store()?;
                let out = cfg.dir(VIZ_DIR);
                fresh_dir(&out)?;
                let emit = |d: &crate::render::DiagramModel| match cfg.language {
                    Language::Archimate => emit_archimate_diagram(d),
                    _ => emit_class_diagram(d),
                };
                for p in &patterns {
                    let k = p.pattern_index;
                    write(&out.join(format!("pattern_{k}.puml")), &emit(&dereify(&p.graph)?))?;
                    if cfg.viz_occurrences == 0 {
                        continue;
                    }
                    let (per_model, _) = deepen(p, &store, cfg.semantics);
                    let occs = per_model.iter().flat_map(|o| o.list.iter()).take(cfg.viz_occurrences);
                    for (m, occ) in occs.enumerate() {
                        let bound = bind_occurrence(&p.graph, occ);
                        write(&out.join(format!("pattern_{k}_occ_{m}.puml")), &emit(&dereify(&bound)?))?;
                    }
                }
            }
        }
        Ok(true)
    }

    fn patterns_and_store(&self) -> Result<(crate::graph::GraphDataset, Vec<crate::mining::Pattern>)> {
        let store = read_store(&self.cfg.dir(STORE_DIR))?;
        let filtered = read_store(&self.cfg.dir(FILTERED_DIR))?;
        let patterns = read_patterns(&self.cfg.dir(PATTERNS_DIR), &filtered)?;
        Ok((store, patterns))
    }
}

/// One row per occurrence: `p:m` bindings and the bound names.
pub fn occurrences_tsv(occ: &Occurrences) -> String {
    let mut out = String::from("binding\tnames\n");
    for o in &occ.list {
        let binding: Vec<String> = o.binding.iter().enumerate().map(|(p, m)| format!("{p}:{m}")).collect();
        let names: Vec<String> = o
            .bound_properties
            .iter()
            .filter_map(|(p, props)| props.get("name").map(|n| format!("{p}={}", encode(n))))
            .collect();
        writeln!(out, "{}\t{}", binding.join(","), names.join(",")).unwrap();
    }
    out
}

/// Every `.lpg` file of a directory, in file name order.
pub fn load_known(dir: &Path) -> Result<Vec<crate::graph::ModelGraph>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().and_then(|e| e.to_str()) == Some(GRAPH_EXT))
        .collect();
    files.sort();
    files.iter().map(|p| read_graph(p)).collect()
}

/// Runs the configured stages in workflow order and writes `summary.tsv`.
pub fn run(config: &PipelineConfig) -> Result<RunSummary> {
    config.validate()?;
    fs::create_dir_all(&config.output_dir).map_err(|e| Error::io(&config.output_dir, e))?;
    let mut runner = Runner {
        cfg: config,
        summary: RunSummary::default(),
    };
    for stage in Stage::ALL {
        if config.stages.contains(&stage) {
            runner.run_stage(stage)?;
        }
    }
    let status = config.dir(PATTERNS_DIR).join(STATUS_FILE);
    if config.stages.contains(&Stage::Mine) {
        if let Ok(text) = fs::read_to_string(&status) {
            runner.summary.truncated |= text.contains("truncated\ttrue");
        }
    }
    write(&config.dir(SUMMARY_FILE), &runner.summary.to_tsv())?;
    Ok(runner.summary)
}

/// Parses `frequency.tsv` into `pattern_index -> (model_frequency, total)`.
pub fn read_frequencies(out_dir: &Path) -> Result<BTreeMap<usize, (usize, usize)>> {
    let path = out_dir.join(OCCURRENCES_DIR).join("frequency.tsv");
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    text.lines()
        .enumerate()
        .skip(1)
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| {
            let cols: Vec<&str> = l.split('\t').collect();
            let n = |c: usize| -> Result<usize> {
                cols.get(c)
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| Error::parse(&path, i + 1, "malformed frequency row"))
            };
            Ok((n(0)?, (n(1)?, n(2)?)))
        })
        .collect()
}
