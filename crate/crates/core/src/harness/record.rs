use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{read_file, write_file, HarnessError};
use crate::deptree::{AddConvention, UasResult};
use crate::llmclient::RequestParams;
use crate::modelio::ExtractionMethod;

/// Hex SHA-256 of a reply; also its file name under `replies/`.
pub fn reply_hash(reply: &str) -> String {
    hex::encode(Sha256::digest(reply.as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RawReplyRefs {
    pub lix: Option<String>,
    pub add: Option<String>,
}

/// Outcome of one model on one corpus item. Every `None` has a matching
/// entry in `warnings`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub item_id: String,
    pub model_id: String,
    pub true_lix: f64,
    pub reported_lix: Option<f64>,
    pub lix_extraction: ExtractionMethod,
    pub gold_add: f64,
    pub model_tree_add: Option<f64>,
    pub reported_add: Option<f64>,
    pub convention: AddConvention,
    pub uas: UasResult,
    pub raw_reply_refs: RawReplyRefs,
    /// Sampling settings the replies were requested with.
    pub request_params: RequestParams,
    pub warnings: Vec<String>,
}

/// One JSON object per line.
pub fn write_records(path: &Path, records: &[EvalRecord]) -> Result<(), HarnessError> {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("record serializes"));
        out.push('\n');
    }
    write_file(path, &out)
}

pub fn read_records(path: &Path) -> Result<Vec<EvalRecord>, HarnessError> {
    read_file(path)?
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| HarnessError::Parse {
                path: format!("{}:{}", path.display(), i + 1),
                message: e.to_string(),
            })
        })
        .collect()
}
