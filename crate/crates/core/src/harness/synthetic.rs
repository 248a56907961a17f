//! Deterministic stand-in replies for offline runs and tests.
//!
//! Replies imitate the failure modes seen in real model output: misplaced
//! heads, dropped punctuation, merged tokens, arithmetic slips in the stated
//! average and answers without the `LIX =` marker. Higher MMLU scores get
//! fewer errors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use super::{CorpusItem, Templates};
use crate::deptree::{DependencyTree, GoldTree};
use crate::llmclient::{cache_key, CacheEntry, CompletionCache, ModelRecord, Registry};
use crate::modelio::Task;

fn rng_for(seed: u64, model_id: &str, item_id: &str, task: Task) -> ChaCha8Rng {
    let digest = Sha256::digest(format!("{seed}\0{model_id}\0{item_id}\0{task}").as_bytes());
    let mut bytes = [0u8; 32];
    bytes.copy_from_slice(&digest);
    ChaCha8Rng::from_seed(bytes)
}

/// 0 at MMLU 80 or below, 1 at 95 or above.
fn skill(model: &ModelRecord) -> f64 {
    ((model.mmlu_score - 80.0) / 15.0).clamp(0.0, 1.0)
}

pub fn lix_reply(seed: u64, model: &ModelRecord, item: &CorpusItem) -> String {
    let mut rng = rng_for(seed, &model.model_id, &item.item_id, Task::Lix);
    let s = skill(model);
    let spread = 30.0 - 25.0 * s;
    let offset = rng.gen_range(0.0..spread) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let value = ((item.true_lix.score + offset).max(5.0) * 10.0).round() / 10.0;
    let words = item.true_lix.words + rng.gen_range(0..5);
    let sentences = item.true_lix.sentences.max(1);
    let mut out = format!(
        "1. Number of words: {words}, number of sentences: {sentences}, average sentence length = {:.1}\n\
         2. Long words: about {}\n\
         3. Adding these together.\n\n",
        words as f64 / sentences as f64,
        item.true_lix.long_words,
    );
    if rng.gen_bool(0.85) {
        out.push_str(&format!("LIX = {value}\n"));
    } else {
        out.push_str(&format!("The readability score comes out at roughly {value}.\n"));
    }
    out
}

pub fn add_reply(seed: u64, model: &ModelRecord, item: &CorpusItem) -> String {
    let mut rng = rng_for(seed, &model.model_id, &item.item_id, Task::Add);
    let s = skill(model);
    let gold: &GoldTree = &item.gold_tree;
    let nodes = gold.nodes();
    let n = nodes.len();

    // group[i] = output row of gold word i, or None if dropped.
    let mut group: Vec<Option<usize>> = Vec::with_capacity(n);
    let mut forms: Vec<String> = Vec::new();
    let mut owner: Vec<usize> = Vec::new();
    let drop_punct = rng.gen_bool(0.4 - 0.3 * s);
    let merge_at = if n > 3 && rng.gen_bool(0.25) { Some(rng.gen_range(0..n - 1)) } else { None };
    for (i, node) in nodes.iter().enumerate() {
        let punct = node.form.chars().all(|c| c.is_ascii_punctuation());
        if drop_punct && punct && i == n - 1 {
            group.push(None);
        } else if merge_at.is_some_and(|m| m + 1 == i) && group[i - 1].is_some() {
            let row = group[i - 1].expect("checked");
            forms[row].push_str(&node.form);
            group.push(Some(row));
        } else {
            group.push(Some(forms.len()));
            forms.push(node.form.clone());
            owner.push(i);
        }
    }

    // Map a gold head to an output row, following dropped words upward.
    let resolve = |mut h: usize| -> usize {
        for _ in 0..=n {
            if h == 0 {
                return 0;
            }
            match group[h - 1] {
                Some(row) => return row + 1,
                None => h = nodes[h - 1].head,
            }
        }
        0
    };
    let m = forms.len();
    let flip = 0.75 - 0.45 * s;
    let mut heads: Vec<usize> = owner
        .iter()
        .enumerate()
        .map(|(row, &g)| {
            let mut h = resolve(nodes[g].head);
            if h == row + 1 {
                h = 0;
            }
            if h != 0 && m > 2 && rng.gen_bool(flip) {
                // near misses: another word within three places of the head
                let shift = rng.gen_range(1..=3) as isize * if rng.gen_bool(0.5) { 1 } else { -1 };
                let alt = (h as isize + shift).clamp(1, m as isize) as usize;
                if alt != row + 1 && alt != h {
                    h = alt;
                }
            }
            h
        })
        .collect();
    if !heads.contains(&0) {
        heads[0] = 0;
    }

    let fenced = rng.gen_bool(0.2);
    let mut out = String::from("Here is the dependency parse:\n\n");
    if fenced {
        out.push_str("```\n");
    }
    let mut sum = 0usize;
    for (row, (form, &h)) in forms.iter().zip(&heads).enumerate() {
        let idx = row + 1;
        let mut dist = if h == 0 { 0 } else { idx.abs_diff(h) };
        sum += dist;
        if rng.gen_bool(0.05) {
            dist += 1;
        }
        out.push_str(&format!("{idx}, {form}, {h}, {dist}\n"));
    }
    if fenced {
        out.push_str("```\n");
    }
    if rng.gen_bool(0.95) {
        let noise = if rng.gen_bool(0.6 - 0.4 * s) { rng.gen_range(-0.8..0.8) * (1.2 - s) } else { 0.0 };
        let avg = (sum as f64 / m as f64 + noise).max(0.0);
        out.push_str(&format!("\nThe average dependency distance is {avg:.2}.\n"));
    } else {
        out.push_str("\nThe distances are listed above.\n");
    }
    out
}

/// Stores a synthetic reply for every (model, item, task) prompt, so an
/// offline run finds each one in the cache. Returns the number of entries.
pub fn populate_cache(
    cache: &CompletionCache,
    registry: &Registry,
    corpus: &[CorpusItem],
    templates: &Templates,
    seed: u64,
) -> Result<usize, super::HarnessError> {
    let mut written = 0;
    for model in &registry.models {
        for item in corpus {
            for (template, stimulus, reply) in [
                (&templates.lix, &item.paragraph, lix_reply(seed, model, item)),
                (&templates.add, &item.sentence, add_reply(seed, model, item)),
            ] {
                let prompt = template.render(stimulus)?;
                let key = cache_key(model, &prompt);
                let entry = CacheEntry {
                    key,
                    model_id: model.model_id.clone(),
                    raw_reply: reply,
                    timestamp: 0,
                    provider_metadata: "synthetic".to_owned(),
                };
                cache
                    .put(&entry)
                    .map_err(|source| super::HarnessError::Io { path: cache.root().display().to_string(), source })?;
                written += 1;
            }
        }
    }
    Ok(written)
}
