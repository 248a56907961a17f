use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use super::{write_file, EvalRecord, HarnessError};
use crate::deptree::{aggregate_uas, UasSummary, Upos};
use crate::llmclient::{ReferenceCorrelation, Registry};
use crate::stats::{aggregate_model_metrics, pearson, CorrelationResult, MetricSummary, ModelSummary};

/// Files written by [`Report::write`].
pub const REPORT_FILES: [&str; 5] = ["report.md", "lix_error.csv", "add_diff.csv", "pos_uas.csv", "correlations.csv"];

/// Metrics correlated against MMLU, in report order.
const METRICS: [&str; 4] = ["lix_error", "add_diff_1", "add_diff_2", "uas_micro"];

#[derive(Debug, Clone, PartialEq)]
pub struct ModelRow {
    pub model_id: String,
    pub display_name: String,
    /// `None` for models with records but no registry entry.
    pub mmlu: Option<f64>,
    pub summary: ModelSummary,
    pub uas: Option<UasSummary>,
}

impl ModelRow {
    fn metric(&self, name: &str) -> Option<f64> {
        match name {
            "lix_error" => self.summary.lix_error.value,
            "add_diff_1" => self.summary.add_diff_1.value,
            "add_diff_2" => self.summary.add_diff_2.value,
            "uas_micro" => self.uas.as_ref().map(|u| u.micro),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationRow {
    pub metric: String,
    /// Models with both an MMLU score and a value for the metric.
    pub n: usize,
    pub result: Option<CorrelationResult>,
    pub reference: Option<ReferenceCorrelation>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub models: Vec<ModelRow>,
    pub correlations: Vec<CorrelationRow>,
}

/// Groups records by model and summarises them. Registry models without
/// records are left out; models without a registry entry get no MMLU.
pub fn build_report(records: &[EvalRecord], registry: &Registry) -> Report {
    let mut by_model: BTreeMap<&str, Vec<EvalRecord>> = BTreeMap::new();
    for r in records {
        by_model.entry(r.model_id.as_str()).or_default().push(r.clone());
    }
    let mut order: Vec<&str> =
        registry.models.iter().map(|m| m.model_id.as_str()).filter(|id| by_model.contains_key(id)).collect();
    order.extend(by_model.keys().filter(|id| registry.get(id).is_none()));

    let models: Vec<ModelRow> = order
        .into_iter()
        .map(|id| {
            let recs = &by_model[id];
            let entry = registry.get(id);
            ModelRow {
                model_id: id.to_owned(),
                display_name: entry.map_or_else(|| id.to_owned(), |m| m.display_name.clone()),
                mmlu: entry.map(|m| m.mmlu_score),
                summary: aggregate_model_metrics(id, recs),
                uas: aggregate_uas(recs.iter().map(|r| &r.uas)),
            }
        })
        .collect();

    let correlations = METRICS
        .iter()
        .map(|&metric| {
            let (xs, ys): (Vec<f64>, Vec<f64>) =
                models.iter().filter_map(|m| Some((m.mmlu?, m.metric(metric)?))).unzip();
            let result = match pearson(&xs, &ys) {
                Ok(c) => Some(c),
                Err(e) => {
                    log::warn!("correlation MMLU vs {metric}: {e}");
                    None
                }
            };
            CorrelationRow {
                metric: metric.to_owned(),
                n: xs.len(),
                result,
                reference: registry.reference_correlations.iter().find(|c| c.metric == metric).cloned(),
            }
        })
        .collect();

    Report { models, correlations }
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_owned(), |v| format!("{v:.2}"))
}

fn stat(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_owned(), |v| format!("{v:.3}"))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

fn csv(rows: &[Vec<String>]) -> String {
    rows.iter().map(|r| r.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(",") + "\n").collect()
}

fn markdown_table(out: &mut String, rows: &[Vec<String>]) {
    for (i, r) in rows.iter().enumerate() {
        let _ = writeln!(out, "| {} |", r.join(" | "));
        if i == 0 {
            let _ = writeln!(out, "|{}", "---|".repeat(r.len()));
        }
    }
}

impl Report {
    fn observed_tags(&self) -> Vec<Upos> {
        let mut tags: Vec<Upos> =
            self.models.iter().filter_map(|m| m.uas.as_ref()).flat_map(|u| u.per_pos.keys().copied()).collect();
        tags.sort();
        tags.dedup();
        tags
    }

    pub fn lix_rows(&self) -> Vec<Vec<String>> {
        let mut rows = vec![vec!["Model".into(), "MMLU".into(), "LIX error".into(), "n".into(), "excluded".into()]];
        for m in &self.models {
            let s: &MetricSummary = &m.summary.lix_error;
            rows.push(vec![
                m.display_name.clone(),
                cell(m.mmlu),
                cell(s.value),
                s.n.to_string(),
                s.excluded.to_string(),
            ]);
        }
        rows
    }

    pub fn add_rows(&self) -> Vec<Vec<String>> {
        let mut rows = vec![vec![
            "Model".into(),
            "ADD diff 1".into(),
            "n".into(),
            "excluded".into(),
            "ADD diff 2".into(),
            "n".into(),
            "excluded".into(),
        ]];
        for m in &self.models {
            let (a, b) = (&m.summary.add_diff_1, &m.summary.add_diff_2);
            rows.push(vec![
                m.display_name.clone(),
                cell(a.value),
                a.n.to_string(),
                a.excluded.to_string(),
                cell(b.value),
                b.n.to_string(),
                b.excluded.to_string(),
            ]);
        }
        rows
    }

    pub fn pos_rows(&self) -> Vec<Vec<String>> {
        let mut header = vec!["POS".to_owned()];
        header.extend(self.models.iter().map(|m| m.display_name.clone()));
        let mut rows = vec![header];
        for tag in self.observed_tags() {
            let mut row = vec![tag.as_str().to_owned()];
            row.extend(
                self.models
                    .iter()
                    .map(|m| cell(m.uas.as_ref().and_then(|u| u.per_pos.get(&tag)).and_then(|t| t.rate()))),
            );
            rows.push(row);
        }
        let mut micro = vec!["Micro-average (UAS)".to_owned()];
        micro.extend(self.models.iter().map(|m| cell(m.uas.as_ref().map(|u| u.micro))));
        let mut macro_ = vec!["Macro-average (UAS)".to_owned()];
        macro_.extend(self.models.iter().map(|m| cell(m.uas.as_ref().map(|u| u.macro_avg))));
        rows.push(micro);
        rows.push(macro_);
        rows
    }

    pub fn correlation_rows(&self) -> Vec<Vec<String>> {
        let mut rows = vec![vec!["Metric".into(), "r".into(), "p".into(), "n".into()]];
        for c in &self.correlations {
            rows.push(vec![
                c.metric.clone(),
                stat(c.result.map(|r| r.r)),
                stat(c.result.map(|r| r.p_two_tailed)),
                c.n.to_string(),
            ]);
        }
        rows
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::from("# Evaluation report\n\n## LIX error\n\n");
        markdown_table(&mut out, &self.lix_rows());
        out.push_str("\n## ADD differences\n\n");
        markdown_table(&mut out, &self.add_rows());
        out.push_str("\n## UAS by part of speech\n\n");
        markdown_table(&mut out, &self.pos_rows());
        let untagged: usize = self.models.iter().filter_map(|m| m.uas.as_ref()).map(|u| u.untagged.total).sum();
        if untagged > 0 {
            let _ = writeln!(out, "\n{untagged} gold words had no tag and only count toward the micro-average.");
        }
        out.push_str("\n## Correlation with MMLU\n\nTwo-tailed Pearson correlation over models.\n\n");
        markdown_table(&mut out, &self.correlation_rows());
        let refs: Vec<&CorrelationRow> = self.correlations.iter().filter(|c| c.reference.is_some()).collect();
        if !refs.is_empty() {
            out.push_str("\nPublished figures for comparison:\n\n");
            for c in refs {
                let r = c.reference.as_ref().expect("filtered");
                let _ = write!(out, "- {}: r = {:.3}", c.metric, r.r);
                if let Some(p) = r.p {
                    let _ = write!(out, ", p = {p:.3}");
                }
                if !r.note.is_empty() {
                    let _ = write!(out, " ({})", r.note);
                }
                out.push_str(".\n");
            }
        }
        let excl: Vec<String> =
            self.models.iter().filter(|m| m.mmlu.is_none()).map(|m| m.display_name.clone()).collect();
        if !excl.is_empty() {
            let _ = writeln!(out, "\nNo MMLU score, left out of correlations: {}.", excl.join(", "));
        }
        out
    }

    /// Writes every file in [`REPORT_FILES`] into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(), HarnessError> {
        write_file(&dir.join("report.md"), &self.to_markdown())?;
        write_file(&dir.join("lix_error.csv"), &csv(&self.lix_rows()))?;
        write_file(&dir.join("add_diff.csv"), &csv(&self.add_rows()))?;
        write_file(&dir.join("pos_uas.csv"), &csv(&self.pos_rows()))?;
        write_file(&dir.join("correlations.csv"), &csv(&self.correlation_rows()))
    }
}
