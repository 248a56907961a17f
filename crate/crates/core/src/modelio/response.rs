use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::last_standalone_number;
use crate::deptree::{DepNode, PredictedTree};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RowDefect {
    /// The row's own distance disagrees with `|index - head|`.
    DistanceMismatch {
        index: usize,
        stated: usize,
        computed: usize,
    },
    EmptyWord {
        index: usize,
    },
    /// Starts like a row but does not have four fields.
    MalformedRow,
    TokenCountMismatch {
        expected: usize,
        found: usize,
    },
}

/// `line` is 1-based in the raw reply; 0 for whole-reply warnings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseWarning {
    pub line: usize,
    pub defect: RowDefect,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedDepResponse {
    pub tree: PredictedTree,
    /// Distances as the model printed them, one per node.
    pub stated_distances: Vec<usize>,
    /// The last number after the final row, taken as the model's average.
    pub reported_add: Option<f64>,
    pub parse_warnings: Vec<ParseWarning>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("no dependency rows found in reply")]
pub struct NoRowsFound;

fn row_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^\s*(?:[-*]\s+)?(\d+)\s*,\s*(.*)\s*,\s*(\d+)\s*,\s*(\d+)\s*$").unwrap())
}

fn row_start_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^\s*(?:[-*]\s+)?\d+\s*,").unwrap())
}

/// Extracts `index, word, head, distance` rows from a free-form reply.
///
/// Code fences are ignored and rows may sit anywhere in the text. The word
/// field is everything between the first and the third-from-last comma, so
/// a comma token (`5, ,, 4, 1`) survives. Stated distances are checked
/// against the indices but never replace them.
pub fn parse_dependency_response(raw: &str, expected_tokens: Option<usize>) -> Result<ParsedDepResponse, NoRowsFound> {
    let mut nodes = Vec::new();
    let mut stated = Vec::new();
    let mut warnings = Vec::new();
    let mut last_row_line = None;

    for (i, line) in raw.lines().enumerate() {
        let line_no = i + 1;
        if line.trim_start().starts_with("```") {
            continue;
        }
        let Some(caps) = row_re().captures(line) else {
            if row_start_re().is_match(line) {
                warnings.push(ParseWarning { line: line_no, defect: RowDefect::MalformedRow });
            }
            continue;
        };
        let (Ok(index), Ok(head), Ok(distance)) =
            (caps[1].parse::<usize>(), caps[3].parse::<usize>(), caps[4].parse::<usize>())
        else {
            warnings.push(ParseWarning { line: line_no, defect: RowDefect::MalformedRow });
            continue;
        };
        let form = caps[2].trim().to_owned();
        if form.is_empty() {
            warnings.push(ParseWarning { line: line_no, defect: RowDefect::EmptyWord { index } });
        }
        let computed = if head == 0 { 0 } else { index.abs_diff(head) };
        if computed != distance {
            warnings.push(ParseWarning {
                line: line_no,
                defect: RowDefect::DistanceMismatch { index, stated: distance, computed },
            });
        }
        nodes.push(DepNode::new(index, form, head));
        stated.push(distance);
        last_row_line = Some(i);
    }

    let last_row_line = last_row_line.ok_or(NoRowsFound)?;
    let trailing: Vec<&str> =
        raw.lines().skip(last_row_line + 1).filter(|l| !l.trim_start().starts_with("```")).collect();
    let reported_add = last_standalone_number(&trailing.join("\n"));

    if let Some(expected) = expected_tokens {
        if expected != nodes.len() {
            warnings
                .push(ParseWarning { line: 0, defect: RowDefect::TokenCountMismatch { expected, found: nodes.len() } });
        }
    }

    Ok(ParsedDepResponse {
        tree: PredictedTree::from_nodes(nodes),
        stated_distances: stated,
        reported_add,
        parse_warnings: warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtractionMethod {
    /// Taken from the last `LIX=` (spaces around `=` allowed).
    Marker,
    FallbackLastNumber,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParsedLixResponse {
    pub reported_lix: Option<f64>,
    pub extraction_method: ExtractionMethod,
}

fn lix_marker_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?i)\bLIX\s*=\s*[*_`]*\s*(-?\d+(?:[.,]\d+)?)").unwrap())
}

/// Reads the model's final LIX score, falling back to the last number.
pub fn parse_lix_response(raw: &str) -> ParsedLixResponse {
    let marked = lix_marker_re().captures_iter(raw).last().and_then(|c| c[1].replace(',', ".").parse::<f64>().ok());
    if let Some(v) = marked {
        return ParsedLixResponse { reported_lix: Some(v), extraction_method: ExtractionMethod::Marker };
    }
    match last_standalone_number(raw) {
        Some(v) => ParsedLixResponse { reported_lix: Some(v), extraction_method: ExtractionMethod::FallbackLastNumber },
        None => ParsedLixResponse { reported_lix: None, extraction_method: ExtractionMethod::None },
    }
}
