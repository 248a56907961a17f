use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use lcmeval_core::deptree::{
    align_tokens_with, compute_add, compute_uas, parse_conllu, AddConvention, AlignOptions, DependencyTree,
};
use lcmeval_core::harness::{
    build_report, corpus_stats, load_corpus, read_records, run_evaluation, sample_corpus, synthetic, write_run,
    EssayManifest, HarnessConfig, RunOptions, Templates,
};
use lcmeval_core::llmclient::{Client, CompletionCache, HttpTransport, Registry, RetryPolicy};
use lcmeval_core::modelio::parse_dependency_response;
use lcmeval_core::textmetrics::{compute_lix_with, LixOptions};

#[derive(Parser)]
#[command(name = "lcmeval", version, about = "Score LLM readability and dependency-parsing output")]
struct Cli {
    /// Seed for sampling and synthetic replies.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// ADD root convention; overrides the config file.
    #[arg(long, global = true)]
    convention: Option<AddConvention>,
    /// Completion cache directory; overrides the config file.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Model registry; overrides the config file.
    #[arg(long, global = true)]
    registry: Option<PathBuf>,
    /// Answer from the cache only, never touch the network.
    #[arg(long, global = true)]
    offline: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// LIX of a text file.
    Lix { file: PathBuf },
    /// ADD of every tree in a CoNLL-U file.
    Add { conllu: PathBuf },
    /// Align a model's dependency reply with a gold tree and score it.
    Align {
        gold: PathBuf,
        reply: PathBuf,
        /// `sent_id` of the gold tree; defaults to the first one.
        #[arg(long)]
        sentence: Option<String>,
    },
    /// Evaluate every model in the registry on a corpus.
    Run {
        config: PathBuf,
        /// Output directory; overrides the config file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rebuild reports from a directory holding `records.jsonl`.
    Report {
        records_dir: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw one paragraph and one sentence per essay; prints JSON lines.
    Sample { essays: PathBuf },
    /// Token statistics of a corpus manifest.
    CorpusStats { corpus: PathBuf },
    /// Fill the cache with deterministic synthetic replies for a config.
    Synth { config: PathBuf },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_config(cli: &Cli, path: &Path) -> Result<HarnessConfig> {
    let mut cfg = HarnessConfig::load(path)?;
    if let Some(c) = cli.convention {
        cfg.convention = c;
    }
    if let Some(d) = &cli.cache_dir {
        cfg.cache_dir = d.clone();
    }
    if let Some(r) = &cli.registry {
        cfg.registry = r.clone();
    }
    cfg.offline |= cli.offline;
    Ok(cfg)
}

fn execute(cli: Cli) -> Result<()> {
    let convention = cli.convention.unwrap_or_default();
    match &cli.command {
        Command::Lix { file } => {
            let text = read(file)?;
            let b = compute_lix_with(&text, &LixOptions::default())?;
            println!("words\t{}", b.words);
            println!("sentences\t{}", b.sentences);
            println!("long_words\t{}", b.long_words);
            println!("lix\t{:.2}", b.score);
            println!("band\t{}", b.band());
        }
        Command::Add { conllu } => {
            let trees = parse_conllu(&read(conllu)?)?;
            for t in &trees {
                let a = compute_add(t, convention).expect("gold trees are non-empty");
                println!("{}\t{}/{}\t{:.4}", t.sentence_id(), a.sum_distance, a.word_count, a.add());
            }
        }
        Command::Align { gold, reply, sentence } => {
            let trees = parse_conllu(&read(gold)?)?;
            let g = match sentence {
                Some(id) => trees.iter().find(|t| t.sentence_id() == id).with_context(|| format!("no tree `{id}`"))?,
                None => trees.first().context("no trees in gold file")?,
            };
            let parsed = parse_dependency_response(&read(reply)?, Some(g.len()))?;
            for w in &parsed.parse_warnings {
                eprintln!("warning: line {}: {:?}", w.line, w.defect);
            }
            let map = align_tokens_with(&g.forms(), &parsed.tree.forms(), AlignOptions::default())?;
            for p in &map.pairs {
                println!("{}\t{}\t{:?}", p.gold, p.pred, p.kind);
            }
            for g in &map.unmatched_gold {
                println!("{g}\t-\tunmatched");
            }
            let uas = compute_uas(g, &parsed.tree, &map);
            println!("uas\t{}/{}", uas.correct, uas.total);
            if let Some(a) = compute_add(&parsed.tree, convention) {
                println!("model_tree_add\t{:.4}", a.add());
            }
            if let Some(r) = parsed.reported_add {
                println!("reported_add\t{r}");
            }
        }
        Command::Run { config, out } => {
            let cfg = load_config(&cli, config)?;
            let corpus = load_corpus(&cfg.corpus, &cfg.lix)?;
            let registry = Registry::load(&cfg.registry)?;
            let templates = Templates::load(&cfg.templates)?;
            let cache = CompletionCache::new(&cfg.cache_dir);
            let client = if cfg.offline {
                Client::offline(cache)
            } else {
                let transport = HttpTransport::new(Duration::from_secs(cfg.timeout_secs))?;
                Client::new(Arc::new(transport), Some(cache)).with_retry(RetryPolicy {
                    max_attempts: cfg.max_attempts,
                    base_delay: Duration::from_millis(cfg.base_delay_ms),
                    ..RetryPolicy::default()
                })
            };
            let options =
                RunOptions { convention: cfg.convention, align: AlignOptions { edit_budget: cfg.edit_budget } };
            let output = run_evaluation(&corpus, &registry, &client, &templates, &options);
            let dir = out.clone().unwrap_or(cfg.output_dir);
            write_run(&dir, &output, &registry)?;
            let warned = output.records.iter().filter(|r| !r.warnings.is_empty()).count();
            println!("{} records ({} with warnings) written to {}", output.records.len(), warned, dir.display());
        }
        Command::Report { records_dir, out } => {
            let records = read_records(&records_dir.join("records.jsonl"))?;
            let registry_path = cli.registry.clone().unwrap_or_else(|| records_dir.join("registry.toml"));
            let registry = Registry::load(&registry_path)?;
            if records.is_empty() {
                bail!("no records in {}", records_dir.display());
            }
            let report = build_report(&records, &registry);
            report.write(out.as_deref().unwrap_or(records_dir))?;
            print!("{}", report.to_markdown());
        }
        Command::Sample { essays } => {
            for item in sample_corpus(&EssayManifest::load(essays)?, cli.seed)? {
                println!("{}", serde_json::to_string(&item)?);
            }
        }
        Command::CorpusStats { corpus } => {
            let items = load_corpus(corpus, &LixOptions::default())?;
            let s = corpus_stats(items.iter().map(|i| (i.paragraph.as_str(), i.sentence.as_str())))?;
            println!("items\t{}", s.items);
            println!("paragraph_tokens\t{:.1} ± {:.1}", s.paragraph_tokens.mean, s.paragraph_tokens.sd);
            println!("sentence_tokens\t{:.1} ± {:.1}", s.sentence_tokens.mean, s.sentence_tokens.sd);
        }
        Command::Synth { config } => {
            let cfg = load_config(&cli, config)?;
            let corpus = load_corpus(&cfg.corpus, &cfg.lix)?;
            let registry = Registry::load(&cfg.registry)?;
            let templates = Templates::load(&cfg.templates)?;
            let cache = CompletionCache::new(&cfg.cache_dir);
            let n = synthetic::populate_cache(&cache, &registry, &corpus, &templates, cli.seed)?;
            println!("{n} synthetic replies written to {}", cfg.cache_dir.display());
        }
    }
    Ok(())
}
