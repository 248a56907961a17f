use std::collections::BTreeMap;
use std::path::Path;

use super::{reply_hash, write_file, write_records, CorpusItem, EvalRecord, HarnessError, RawReplyRefs, TemplatePaths};
use crate::deptree::{
    align_tokens_with, compute_add, compute_uas, AddConvention, AlignOptions, DependencyTree, UasResult,
};
use crate::llmclient::{Client, Registry, RequestParams};
use crate::modelio::{parse_dependency_response, parse_lix_response, ExtractionMethod, PromptTemplate, Task};

#[derive(Debug, Clone, PartialEq)]
pub struct Templates {
    pub lix: PromptTemplate,
    pub add: PromptTemplate,
}

impl Templates {
    /// Built-in templates, replaced by any file named in `paths`.
    pub fn load(paths: &TemplatePaths) -> Result<Self, HarnessError> {
        let load = |task, path: &Option<std::path::PathBuf>| match path {
            Some(p) => PromptTemplate::load(task, p),
            None => Ok(PromptTemplate::default_for(task)),
        };
        Ok(Self { lix: load(Task::Lix, &paths.lix)?, add: load(Task::Add, &paths.add)? })
    }
}

impl Default for Templates {
    fn default() -> Self {
        Self { lix: PromptTemplate::default_for(Task::Lix), add: PromptTemplate::default_for(Task::Add) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunOptions {
    pub convention: AddConvention,
    pub align: AlignOptions,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunOutput {
    pub records: Vec<EvalRecord>,
    /// Raw replies by content hash.
    pub replies: BTreeMap<String, String>,
}

/// Scores one item from the two raw replies (or the reasons they are
/// missing). Pure: the same inputs always give the same record.
pub fn score_item(
    item: &CorpusItem,
    model_id: &str,
    request_params: RequestParams,
    lix_reply: Result<&str, String>,
    add_reply: Result<&str, String>,
    options: &RunOptions,
) -> EvalRecord {
    let gold = &item.gold_tree;
    let mut warnings = Vec::new();
    let mut refs = RawReplyRefs::default();

    let (reported_lix, lix_extraction) = match lix_reply {
        Ok(raw) => {
            refs.lix = Some(reply_hash(raw));
            let parsed = parse_lix_response(raw);
            match parsed.extraction_method {
                ExtractionMethod::None => warnings.push("lix: no number in reply".to_owned()),
                ExtractionMethod::FallbackLastNumber => {
                    warnings.push("lix: no LIX= marker, used the last number".to_owned())
                }
                ExtractionMethod::Marker => {}
            }
            (parsed.reported_lix, parsed.extraction_method)
        }
        Err(e) => {
            warnings.push(format!("lix: no reply: {e}"));
            (None, ExtractionMethod::None)
        }
    };

    let gold_add = compute_add(gold, options.convention).expect("gold trees are non-empty").add();
    let mut model_tree_add = None;
    let mut reported_add = None;
    let mut uas = None;
    match add_reply {
        Ok(raw) => {
            refs.add = Some(reply_hash(raw));
            match parse_dependency_response(raw, Some(gold.len())) {
                Ok(parsed) => {
                    for w in &parsed.parse_warnings {
                        warnings.push(format!("add: line {}: {:?}", w.line, w.defect));
                    }
                    for v in parsed.tree.violations() {
                        warnings.push(format!("add: tree: {v:?}"));
                    }
                    model_tree_add = compute_add(&parsed.tree, options.convention).map(|a| a.add());
                    reported_add = parsed.reported_add;
                    if reported_add.is_none() {
                        warnings.push("add: no reported average after the rows".to_owned());
                    }
                    match align_tokens_with(&gold.forms(), &parsed.tree.forms(), options.align) {
                        Ok(map) => uas = Some(compute_uas(gold, &parsed.tree, &map)),
                        Err(e) => warnings.push(format!("add: alignment failed: {e}")),
                    }
                }
                Err(e) => warnings.push(format!("add: {e}; tree ADD and reported ADD unavailable")),
            }
        }
        Err(e) => warnings.push(format!("add: no reply: {e}; tree ADD and reported ADD unavailable")),
    }

    EvalRecord {
        item_id: item.item_id.clone(),
        model_id: model_id.to_owned(),
        true_lix: item.true_lix.score,
        reported_lix,
        lix_extraction,
        gold_add,
        model_tree_add,
        reported_add,
        convention: options.convention,
        uas: uas.unwrap_or_else(|| UasResult::all_incorrect(gold)),
        raw_reply_refs: refs,
        request_params,
        warnings,
    }
}

/// Prompts every model with both tasks for every item and scores the
/// replies. Per-item failures end up in record warnings, never as errors.
pub fn run_evaluation(
    corpus: &[CorpusItem],
    registry: &Registry,
    client: &Client,
    templates: &Templates,
    options: &RunOptions,
) -> RunOutput {
    let mut out = RunOutput::default();
    for model in &registry.models {
        let mut prompts = Vec::with_capacity(corpus.len() * 2);
        let mut render_errors = BTreeMap::new();
        for (i, item) in corpus.iter().enumerate() {
            for (slot, (template, stimulus)) in
                [(&templates.lix, &item.paragraph), (&templates.add, &item.sentence)].into_iter().enumerate()
            {
                match template.render(stimulus) {
                    Ok(p) => prompts.push(p),
                    Err(e) => {
                        render_errors.insert(2 * i + slot, e.to_string());
                        prompts.push(String::new());
                    }
                }
            }
        }
        log::info!("{}: {} prompts", model.model_id, prompts.len());
        let mut replies =
            client.complete_batch(model, &prompts).into_iter().enumerate().map(|(k, r)| match render_errors.get(&k) {
                Some(e) => Err(e.clone()),
                None => r.map_err(|e| e.to_string()),
            });

        for item in corpus {
            let lix = replies.next().expect("one reply per prompt");
            let add = replies.next().expect("one reply per prompt");
            for reply in [&lix, &add].into_iter().flatten() {
                out.replies.insert(reply_hash(reply), reply.clone());
            }
            out.records.push(score_item(
                item,
                &model.model_id,
                model.request_params,
                lix.as_deref().map_err(Clone::clone),
                add.as_deref().map_err(Clone::clone),
                options,
            ));
        }
    }
    out
}

/// Writes `records.jsonl`, `replies/<hash>.txt`, a registry snapshot and
/// the reports into `dir`.
pub fn write_run(dir: &Path, output: &RunOutput, registry: &Registry) -> Result<(), HarnessError> {
    write_records(&dir.join("records.jsonl"), &output.records)?;
    for (hash, reply) in &output.replies {
        write_file(&dir.join("replies").join(format!("{hash}.txt")), reply)?;
    }
    write_file(&dir.join("registry.toml"), &registry.to_toml())?;
    super::build_report(&output.records, registry).write(dir)
}
