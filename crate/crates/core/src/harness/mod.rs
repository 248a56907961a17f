//! Corpus handling, evaluation runs and report generation.

mod config;
mod corpus;
mod record;
mod report;
mod run;
mod sampling;
pub mod synthetic;

pub use config::{HarnessConfig, TemplatePaths};
pub use corpus::{
    corpus_stats, load_corpus, CorpusItem, CorpusManifest, CorpusStats, ManifestItem, MeanSd, SourceLevel,
};
pub use record::{read_records, reply_hash, write_records, EvalRecord, RawReplyRefs};
pub use report::{build_report, CorrelationRow, ModelRow, Report, REPORT_FILES};
pub use run::{run_evaluation, score_item, write_run, RunOptions, RunOutput, Templates};
pub use sampling::{sample_corpus, uniform_index, Essay, EssayManifest, SampledItem};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("corpus item `{item}`: {message}")]
    Corpus { item: String, message: String },
    #[error("essay `{0}` has no paragraph or no sentence")]
    EmptyEssay(String),
    #[error("need at least 2 items, got {0}")]
    InsufficientItems(usize),
    #[error(transparent)]
    Registry(#[from] crate::llmclient::RegistryError),
    #[error(transparent)]
    Template(#[from] crate::modelio::TemplateError),
}

pub(crate) fn read_file(path: &std::path::Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path).map_err(|source| HarnessError::Io { path: path.display().to_string(), source })
}

pub(crate) fn write_file(path: &std::path::Path, contents: &str) -> Result<(), HarnessError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|source| HarnessError::Io { path: dir.display().to_string(), source })?;
    }
    std::fs::write(path, contents).map_err(|source| HarnessError::Io { path: path.display().to_string(), source })
}
