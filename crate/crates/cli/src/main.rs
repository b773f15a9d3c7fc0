//! Batch pipeline driver: build co-occurrence graphs, inspect their
//! statistics, induce query senses, cluster search results and score the
//! cluster counts against a gold standard.

mod config;
mod dot;

use std::collections::{BTreeSet, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

use sensegraph::corpus::{load_corpus, load_stopwords, Corpus, FilterConfig, Lemma};
use sensegraph::querygraph::{build_query_graph, QueryGraph, Serp};
use sensegraph::wsi::{
    curvature_induce, hyperlex_induce, maximum_spanning_tree, select_hubs, SenseCluster,
    SenseInventory, WsiAlgorithm,
};
use sensegraph::{
    assign_senses, build_cooccurrence_graph, deviation_pct, evaluate, graph_stats, load_graph,
    local_clustering_coefficient, save_graph, small_world_check, ClusteredSerp, CoGraph,
    CountMode, EvalReport, GoldSenseCounts, GraphStats, LemmaPair, PathSampling,
    SmallWorldParams,
};

use config::{Algorithm, PipelineConfig, ThresholdArgs};

#[derive(Parser)]
#[command(
    name = "sensegraph",
    version,
    about = "Co-occurrence graphs, word sense induction and search result clustering"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a Dice-weighted co-occurrence graph from corpora.
    Build(BuildArgs),
    /// Print statistics and the small-world check for a graph file.
    Stats(StatsArgs),
    /// Induce the sense inventory of a query from a SERP file.
    Induce(InduceArgs),
    /// Induce senses and assign every search result to one.
    Cluster(ClusterArgs),
    /// Compare produced cluster counts against gold sense counts.
    Eval(EvalArgs),
}

#[derive(clap::Args)]
struct BuildArgs {
    /// Corpus file (one sentence per line, `lemma` or `lemma/POS` tokens);
    /// repeatable, frequencies are summed.
    #[arg(long = "corpus", value_name = "FILE")]
    corpus: Vec<PathBuf>,
    /// Stopword file, one lemma per line.
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// POS tags to keep (comma separated). Defaults to noun tags.
    #[arg(long, value_delimiter = ',', conflicts_with = "keep_all_pos")]
    keep_pos: Vec<String>,
    /// Keep every token regardless of its tag.
    #[arg(long)]
    keep_all_pos: bool,
    /// Drop sentences that contain no Cyrillic characters.
    #[arg(long)]
    require_cyrillic: bool,
    /// Output graph file.
    #[arg(long, short)]
    out: PathBuf,
    #[command(flatten)]
    sampling: SamplingArgs,
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(clap::Args)]
struct StatsArgs {
    /// Graph file written by `build`.
    #[arg(long)]
    graph: PathBuf,
    #[command(flatten)]
    sampling: SamplingArgs,
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SamplingArgs {
    /// BFS sources for the average path length estimate.
    #[arg(long)]
    path_sample: Option<usize>,
    /// Compute the exact all-pairs path length regardless of graph size.
    #[arg(long, conflicts_with = "path_sample")]
    exact_paths: bool,
    /// Seed for path-length source sampling.
    #[arg(long)]
    seed: Option<u64>,
}

impl SamplingArgs {
    fn sampling(&self, cfg: &PipelineConfig) -> Option<PathSampling> {
        if self.exact_paths {
            return None;
        }
        Some(PathSampling {
            sources: self.path_sample.unwrap_or(cfg.path_sample),
            seed: self.seed.unwrap_or(cfg.seed),
        })
    }
}

#[derive(clap::Args)]
struct InduceArgs {
    /// Graph file written by `build`.
    #[arg(long)]
    graph: PathBuf,
    /// SERP JSON file with query and documents[rank, title, snippet, lemmas].
    #[arg(long)]
    serp: PathBuf,
    /// Sense induction algorithm.
    #[arg(long, value_enum)]
    algorithm: Option<Algorithm>,
    /// Inventory output file (stdout when absent).
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Write PREFIX.pre.dot and PREFIX.post.dot Graphviz files.
    #[arg(long, value_name = "PREFIX")]
    dot: Option<PathBuf>,
    /// Drop single-lemma clusters from the inventory.
    #[arg(long)]
    drop_singletons: bool,
    #[command(flatten)]
    thresholds: ThresholdArgs,
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(clap::Args)]
struct ClusterArgs {
    #[command(flatten)]
    induce: InduceArgs,
    /// Assign zero-overlap documents to the first sense instead of
    /// leaving them unassigned.
    #[arg(long)]
    force_assign: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum CountModeArg {
    Inventory,
    Populated,
}

#[derive(clap::Args)]
struct EvalArgs {
    /// Clustered SERP files produced by `cluster`.
    #[arg(value_name = "CLUSTERED", required_unless_present = "pct_only")]
    clustered: Vec<PathBuf>,
    /// Gold TSV file: `query<TAB>sense_count` lines.
    #[arg(long, required_unless_present = "pct_only")]
    gold: Option<PathBuf>,
    /// Which cluster count to compare.
    #[arg(long, value_enum, default_value_t = CountModeArg::Populated)]
    count_mode: CountModeArg,
    /// Machine-readable report output file.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Recompute percentages for a TSV of `label<TAB>mean_deviation`
    /// instead of evaluating clustered files.
    #[arg(long, value_name = "FILE", requires = "average_senses", conflicts_with_all = ["clustered", "gold"])]
    pct_only: Option<PathBuf>,
    /// Average gold sense count used with --pct-only.
    #[arg(long, requires = "pct_only")]
    average_senses: Option<f64>,
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Build(args) => cmd_build(args),
        Command::Stats(args) => cmd_stats(args),
        Command::Induce(args) => cmd_induce(args),
        Command::Cluster(args) => cmd_cluster(args),
        Command::Eval(args) => cmd_eval(args),
    }
}

// ---------------------------------------------------------------------
// build / stats
// ---------------------------------------------------------------------

fn cmd_build(args: BuildArgs) -> anyhow::Result<()> {
    let cfg = PipelineConfig::load(args.config.as_deref())?;
    let paths = if args.corpus.is_empty() {
        cfg.corpus.clone()
    } else {
        args.corpus.clone()
    };
    if paths.is_empty() {
        bail!("no corpus files: pass --corpus or set `corpus` in the config");
    }

    let stopwords = match args.stopwords.as_ref().or(cfg.stopwords.as_ref()) {
        Some(path) => {
            let file = File::open(path)
                .with_context(|| format!("opening stopword file {}", path.display()))?;
            load_stopwords(BufReader::new(file))
                .with_context(|| format!("reading stopword file {}", path.display()))?
        }
        None => HashSet::new(),
    };
    let keep_pos = if args.keep_all_pos {
        None
    } else if args.keep_pos.is_empty() {
        FilterConfig::default().keep_pos
    } else {
        Some(args.keep_pos.iter().cloned().collect())
    };
    let filter = FilterConfig {
        stopwords,
        keep_pos,
        require_cyrillic: args.require_cyrillic,
    };

    let mut merged: Option<Corpus> = None;
    for path in &paths {
        let file =
            File::open(path).with_context(|| format!("opening corpus {}", path.display()))?;
        let corpus = load_corpus(BufReader::new(file), &filter)
            .with_context(|| format!("loading corpus {}", path.display()))?;
        match merged.as_mut() {
            Some(all) => all.merge(corpus),
            None => merged = Some(corpus),
        }
    }
    let corpus = merged.expect("at least one corpus path");
    println!(
        "corpus: {} sentences, {} tokens, {} distinct lemmas",
        corpus.sentence_count(),
        corpus.token_count(),
        corpus.vocabulary_size()
    );

    let graph = build_cooccurrence_graph(&corpus)?;
    let stats = graph_stats(&graph, args.sampling.sampling(&cfg))?;
    print_stats(&stats);

    let mut buf = Vec::new();
    save_graph(&graph, &mut buf)?;
    write_atomic(&args.out, &buf)?;
    println!("wrote graph to {}", args.out.display());
    Ok(())
}

fn cmd_stats(args: StatsArgs) -> anyhow::Result<()> {
    let cfg = PipelineConfig::load(args.config.as_deref())?;
    let graph = read_graph(&args.graph)?;
    let stats = graph_stats(&graph, args.sampling.sampling(&cfg))?;
    print_stats(&stats);
    Ok(())
}

fn print_stats(stats: &GraphStats) {
    println!("vertices: {}", stats.n_vertices);
    println!("edges: {}", stats.n_edges);
    println!("average degree: {:.4}", stats.avg_degree);
    match stats.path_sampling {
        None => println!("average path length: {:.4} (exact)", stats.avg_path_length),
        Some(s) => println!(
            "average path length: {:.4} (sampled from {} sources, seed {})",
            stats.avg_path_length, s.sources, s.seed
        ),
    }
    println!("clustering coefficient: {:.4}", stats.clustering_coefficient);
    match small_world_check(stats, &SmallWorldParams::default()) {
        Ok(report) => {
            println!(
                "random baseline: path length {:.4}, clustering {:.6}",
                report.expected_path_length_random, report.expected_clustering_random
            );
            println!(
                "small world: {}",
                if report.is_small_world { "yes" } else { "no" }
            );
        }
        Err(err) => println!("small world: undefined ({err})"),
    }
}

// ---------------------------------------------------------------------
// induce / cluster
// ---------------------------------------------------------------------

/// Everything a sense induction run produces, kept around for the DOT
/// export and for clustering.
struct Induction {
    serp: Serp,
    gq: QueryGraph,
    inventory: SenseInventory,
    params_echo: serde_json::Value,
    /// Edges of the partitioned graph (surviving graph edges for
    /// Curvature, the pruned spanning forest for Hyperlex).
    post_edges: Vec<(LemmaPair, f64)>,
    /// Vertices Curvature scheduled for deletion.
    marked: BTreeSet<Lemma>,
    /// Hubs selected by Hyperlex.
    hubs: Vec<Lemma>,
}

fn run_induction(args: &InduceArgs) -> anyhow::Result<Induction> {
    let cfg = PipelineConfig::load(args.config.as_deref())?;
    let algorithm = args
        .algorithm
        .or(cfg.algorithm)
        .context("no algorithm: pass --algorithm or set `algorithm` in the config")?;
    let graph = read_graph(&args.graph)?;
    let serp_file = File::open(&args.serp)
        .with_context(|| format!("opening SERP file {}", args.serp.display()))?;
    let serp = Serp::from_json_reader(BufReader::new(serp_file))
        .with_context(|| format!("parsing SERP file {}", args.serp.display()))?;

    let strong = args.thresholds.strong_params(&cfg);
    let gq = build_query_graph(&graph, &serp, &strong)?;

    let mut induction = match algorithm {
        Algorithm::Curvature => {
            let params = args.thresholds.curvature_params(&cfg);
            let inventory = curvature_induce(&gq, &params)?;
            let survivors: BTreeSet<&Lemma> = inventory
                .clusters
                .iter()
                .flat_map(|c| c.lemmas.iter())
                .collect();
            let marked = gq
                .vertices_with_info()
                .map(|(v, _)| v)
                .filter(|v| {
                    let c = local_clustering_coefficient(&gq, v).expect("vertex exists");
                    c > 0.0 && c < params.min_coefficient
                })
                .cloned()
                .collect();
            let post_edges = gq
                .edges()
                .filter(|(p, _)| survivors.contains(p.first()) && survivors.contains(p.second()))
                .map(|(p, w)| (p.clone(), w))
                .collect();
            Induction {
                serp,
                inventory,
                params_echo: serde_json::json!({ "strong": strong, "curvature": params }),
                post_edges,
                marked,
                hubs: Vec::new(),
                gq,
            }
        }
        Algorithm::Hyperlex => {
            let params = args.thresholds.hyperlex_params(&cfg);
            let hubs = select_hubs(&gq, &params);
            let inventory = hyperlex_induce(&gq, &serp.query, &params)?;
            let survivors: BTreeSet<&Lemma> = inventory
                .clusters
                .iter()
                .flat_map(|c| c.lemmas.iter())
                .collect();
            // Rebuild the augmented spanning forest for the export.
            let sentinel = gq.max_dice() + 1.0;
            let mut augmented: Vec<(LemmaPair, f64)> =
                gq.edges().map(|(p, w)| (p.clone(), w)).collect();
            for hub in &hubs {
                let pair = LemmaPair::new(serp.query.clone(), hub.clone())
                    .expect("query is not a vertex");
                augmented.push((pair, sentinel));
            }
            let post_edges = maximum_spanning_tree(augmented)
                .into_iter()
                .filter(|(p, _)| {
                    !p.contains(&serp.query)
                        && survivors.contains(p.first())
                        && survivors.contains(p.second())
                })
                .collect();
            Induction {
                serp,
                inventory,
                params_echo: serde_json::json!({ "strong": strong, "hyperlex": params }),
                post_edges,
                marked: BTreeSet::new(),
                hubs,
                gq,
            }
        }
    };
    if args.drop_singletons {
        induction.inventory = induction.inventory.clone().drop_singletons();
    }
    Ok(induction)
}

#[derive(serde::Serialize)]
struct InventoryDocument<'a> {
    query: &'a Lemma,
    algorithm: WsiAlgorithm,
    params: &'a serde_json::Value,
    clusters: &'a [SenseCluster],
}

fn inventory_json(induction: &Induction) -> anyhow::Result<String> {
    let doc = InventoryDocument {
        query: &induction.inventory.query,
        algorithm: induction.inventory.algorithm,
        params: &induction.params_echo,
        clusters: &induction.inventory.clusters,
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

fn write_dot_files(prefix: &Path, induction: &Induction) -> anyhow::Result<()> {
    let pre = match induction.inventory.algorithm {
        WsiAlgorithm::Curvature => dot::query_graph_dot(&induction.gq, &induction.marked),
        WsiAlgorithm::Hyperlex => {
            dot::augmented_graph_dot(&induction.gq, &induction.serp.query, &induction.hubs)
        }
    };
    let post = dot::inventory_dot(&induction.gq, &induction.inventory, &induction.post_edges);
    write_atomic(&path_with_suffix(prefix, ".pre.dot"), pre.as_bytes())?;
    write_atomic(&path_with_suffix(prefix, ".post.dot"), post.as_bytes())?;
    Ok(())
}

fn print_inventory(induction: &Induction) {
    println!("query: {}", induction.inventory.query);
    println!("algorithm: {}", induction.inventory.algorithm);
    println!(
        "query graph: {} vertices, {} edges",
        induction.gq.vertex_count(),
        induction.gq.edge_count()
    );
    println!("clusters: {}", induction.inventory.clusters.len());
    for cluster in &induction.inventory.clusters {
        let lemmas: Vec<&str> = cluster.lemmas.iter().map(|l| l.as_str()).collect();
        match &cluster.hub {
            Some(hub) => println!("  {} [hub: {}] {}", cluster.id, hub, lemmas.join(" ")),
            None => println!("  {} {}", cluster.id, lemmas.join(" ")),
        }
    }
}

fn cmd_induce(args: InduceArgs) -> anyhow::Result<()> {
    let induction = run_induction(&args)?;
    let json = inventory_json(&induction)?;
    if let Some(prefix) = &args.dot {
        write_dot_files(prefix, &induction)?;
    }
    match &args.out {
        Some(path) => {
            print_inventory(&induction);
            write_atomic(path, json.as_bytes())?;
            println!("wrote inventory to {}", path.display());
        }
        None => println!("{json}"),
    }
    Ok(())
}

fn cmd_cluster(args: ClusterArgs) -> anyhow::Result<()> {
    let induction = run_induction(&args.induce)?;
    let clustered = assign_senses(&induction.serp, &induction.inventory, args.force_assign)?;
    if let Some(prefix) = &args.induce.dot {
        write_dot_files(prefix, &induction)?;
    }
    let json = serde_json::to_string_pretty(&clustered)?;
    match &args.induce.out {
        Some(path) => {
            print_inventory(&induction);
            println!("assignments:");
            for assignment in &clustered.assignments {
                match assignment.sense_id {
                    Some(id) => println!(
                        "  rank {} -> sense {} (score {:.3})",
                        assignment.rank, id, assignment.score
                    ),
                    None => println!("  rank {} -> unassigned", assignment.rank),
                }
            }
            println!("populated clusters: {}", clustered.n_populated_clusters);
            write_atomic(path, json.as_bytes())?;
            println!("wrote clustered SERP to {}", path.display());
        }
        None => println!("{json}"),
    }
    Ok(())
}

// ---------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------

fn cmd_eval(args: EvalArgs) -> anyhow::Result<()> {
    if let Some(path) = &args.pct_only {
        let average = args
            .average_senses
            .expect("clap enforces --average-senses with --pct-only");
        return pct_only(path, average);
    }
    let gold_path = args.gold.as_ref().expect("clap enforces --gold");
    let gold_file = File::open(gold_path)
        .with_context(|| format!("opening gold file {}", gold_path.display()))?;
    let gold = GoldSenseCounts::from_tsv_reader(BufReader::new(gold_file))
        .with_context(|| format!("parsing gold file {}", gold_path.display()))?;

    let mut list: Vec<ClusteredSerp> = Vec::with_capacity(args.clustered.len());
    for path in &args.clustered {
        let file = File::open(path)
            .with_context(|| format!("opening clustered file {}", path.display()))?;
        let clustered: ClusteredSerp = serde_json::from_reader(BufReader::new(file))
            .with_context(|| format!("parsing clustered file {}", path.display()))?;
        list.push(clustered);
    }
    let mode = match args.count_mode {
        CountModeArg::Inventory => CountMode::Inventory,
        CountModeArg::Populated => CountMode::Populated,
    };
    let report = evaluate(&list, &gold, mode)?;
    print_report(&report, &gold);
    if let Some(path) = &args.out {
        let json = serde_json::to_string_pretty(&report)?;
        write_atomic(path, json.as_bytes())?;
        println!("wrote report to {}", path.display());
    }
    Ok(())
}

fn print_report(report: &EvalReport, gold: &GoldSenseCounts) {
    let width = report
        .per_query
        .iter()
        .map(|q| q.query.as_str().chars().count())
        .chain(["query".len()])
        .max()
        .unwrap_or(5);
    println!("{:<width$}  produced  gold  deviation", "query");
    for entry in &report.per_query {
        let padding = width - entry.query.as_str().chars().count();
        println!(
            "{}{:padding$}  {:>8}  {:>4}  {:>9}",
            entry.query, "", entry.produced, entry.gold, entry.deviation
        );
    }
    println!(
        "mean deviation: {:.3} ({:.1}% of {:.2} average senses)",
        report.mean_deviation,
        report.mean_deviation_pct,
        gold.average_senses()
    );
}

fn pct_only(path: &Path, average_senses: f64) -> anyhow::Result<()> {
    let file =
        File::open(path).with_context(|| format!("opening deviations file {}", path.display()))?;
    println!("label\tdeviation\tpct");
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let (label, value) = line
            .split_once('\t')
            .with_context(|| format!("line {}: expected `label<TAB>deviation`", idx + 1))?;
        let deviation: f64 = value
            .trim()
            .parse()
            .with_context(|| format!("line {}: bad deviation {value:?}", idx + 1))?;
        println!(
            "{label}\t{deviation:.3}\t{:.1}%",
            deviation_pct(deviation, average_senses)
        );
    }
    Ok(())
}

// ---------------------------------------------------------------------
// shared plumbing
// ---------------------------------------------------------------------

fn read_graph(path: &Path) -> anyhow::Result<CoGraph> {
    let file = File::open(path).with_context(|| format!("opening graph {}", path.display()))?;
    load_graph(BufReader::new(file)).with_context(|| format!("loading graph {}", path.display()))
}

/// Writes through a temp file in the target directory and renames, so
/// readers never observe a partial file.
fn write_atomic(path: &Path, contents: &[u8]) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(parent) if !parent.as_os_str().is_empty() => parent,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating temp file in {}", dir.display()))?;
    tmp.write_all(contents)?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn path_with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut os = prefix.as_os_str().to_owned();
    os.push(suffix);
    PathBuf::from(os)
}
