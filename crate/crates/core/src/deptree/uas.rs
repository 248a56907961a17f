use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{AlignmentMap, DependencyTree, GoldTree, PredictedTree, Upos};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PosTally {
    pub correct: usize,
    pub total: usize,
}

impl PosTally {
    fn record(&mut self, correct: bool) {
        self.total += 1;
        self.correct += usize::from(correct);
    }

    fn merge(&mut self, other: PosTally) {
        self.correct += other.correct;
        self.total += other.total;
    }

    pub fn rate(&self) -> Option<f64> {
        (self.total > 0).then(|| self.correct as f64 / self.total as f64)
    }
}

/// Attachment tallies for one sentence, bucketed by the gold word's UPOS.
/// Gold words without a tag go to `untagged`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct UasResult {
    pub correct: usize,
    pub total: usize,
    pub per_pos: BTreeMap<Upos, PosTally>,
    pub untagged: PosTally,
}

impl UasResult {
    pub fn score(&self) -> Option<f64> {
        (self.total > 0).then(|| self.correct as f64 / self.total as f64)
    }

    /// Every gold word counted as wrong, used when no usable tree exists.
    pub fn all_incorrect(gold: &GoldTree) -> Self {
        let mut out = Self::default();
        for node in gold.nodes() {
            out.record(node.pos, false);
        }
        out
    }

    fn record(&mut self, pos: Option<Upos>, correct: bool) {
        self.total += 1;
        self.correct += usize::from(correct);
        match pos {
            Some(p) => self.per_pos.entry(p).or_default().record(correct),
            None => self.untagged.record(correct),
        }
    }
}

/// Scores a predicted tree against gold through an alignment.
///
/// A gold word aligned to a predicted word is correct when both are roots,
/// or when the predicted head is the predicted word aligned to the gold
/// head. Unaligned gold words and predicted heads outside the tree are
/// wrong. The denominator is always the number of gold words.
pub fn compute_uas(gold: &GoldTree, pred: &PredictedTree, map: &AlignmentMap) -> UasResult {
    let pred_nodes = pred.nodes();
    let mut out = UasResult::default();
    for node in gold.nodes() {
        let correct = map.pred_for_gold(node.index).is_some_and(|p| {
            let predicted = &pred_nodes[p - 1];
            if !pred.head_in_range(predicted.head) {
                return false;
            }
            if node.head == 0 {
                return predicted.head == 0;
            }
            predicted.head != 0
                && map.pred_for_gold(node.head).is_some_and(|ph| ph != p && predicted.head == pred_nodes[ph - 1].index)
        });
        out.record(node.pos, correct);
    }
    out
}

/// Corpus-level attachment scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UasSummary {
    pub correct: usize,
    pub total: usize,
    /// Correct attachments over all words.
    pub micro: f64,
    /// Unweighted mean of per-tag rates over tags seen at least once.
    /// Equal to `micro` when no word carried a tag.
    pub macro_avg: f64,
    pub per_pos: BTreeMap<Upos, PosTally>,
    pub untagged: PosTally,
}

/// Pools sentence tallies. `None` when there are no words at all.
pub fn aggregate_uas<'a, I>(results: I) -> Option<UasSummary>
where
    I: IntoIterator<Item = &'a UasResult>,
{
    let mut pooled = UasResult::default();
    for r in results {
        pooled.correct += r.correct;
        pooled.total += r.total;
        pooled.untagged.merge(r.untagged);
        for (&pos, &tally) in &r.per_pos {
            pooled.per_pos.entry(pos).or_default().merge(tally);
        }
    }
    let micro = pooled.score()?;
    let rates: Vec<f64> = pooled.per_pos.values().filter_map(PosTally::rate).collect();
    let macro_avg = if rates.is_empty() { micro } else { rates.iter().sum::<f64>() / rates.len() as f64 };
    Some(UasSummary {
        correct: pooled.correct,
        total: pooled.total,
        micro,
        macro_avg,
        per_pos: pooled.per_pos,
        untagged: pooled.untagged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deptree::{align_tokens, DepNode};

    const PIE: [(&str, usize, Upos); 7] = [
        ("John", 2, Upos::PROPN),
        ("made", 0, Upos::VERB),
        ("the", 4, Upos::DET),
        ("pie", 2, Upos::NOUN),
        ("in", 7, Upos::ADP),
        ("the", 7, Upos::DET),
        ("fridge", 4, Upos::NOUN),
    ];

    fn gold() -> GoldTree {
        let nodes = PIE.iter().enumerate().map(|(i, &(w, h, p))| DepNode::new(i + 1, w, h).with_pos(p)).collect();
        GoldTree::new("pie", nodes).unwrap()
    }

    fn pred(heads: &[usize]) -> PredictedTree {
        PredictedTree::from_nodes(
            PIE.iter().zip(heads).enumerate().map(|(i, (&(w, _, _), &h))| DepNode::new(i + 1, w, h)).collect(),
        )
    }

    fn score(p: &PredictedTree) -> UasResult {
        let g = gold();
        let map = align_tokens(&g.forms(), &p.forms()).unwrap();
        compute_uas(&g, p, &map)
    }

    #[test]
    fn identical_trees_score_one() {
        let r = score(&pred(&[2, 0, 4, 2, 7, 7, 4]));
        assert_eq!((r.correct, r.total), (7, 7));
    }

    #[test]
    fn fridge_attached_to_made() {
        let r = score(&pred(&[2, 0, 4, 2, 7, 7, 2]));
        assert_eq!((r.correct, r.total), (6, 7));
        assert_eq!(r.per_pos[&Upos::NOUN], PosTally { correct: 1, total: 2 });
    }

    #[test]
    fn two_wrong_heads() {
        // "John" -> "pie" and "in" -> "the" are wrong.
        let r = score(&pred(&[4, 0, 4, 2, 6, 7, 4]));
        assert_eq!((r.correct, r.total), (5, 7));
    }

    #[test]
    fn out_of_range_head_is_wrong() {
        let r = score(&pred(&[2, 0, 4, 2, 7, 7, 12]));
        assert_eq!(r.correct, 6);
    }

    #[test]
    fn unaligned_gold_words_count_against() {
        let g = GoldTree::new(
            "s",
            vec![
                DepNode::new(1, "Hundarna", 2).with_pos(Upos::PRON),
                DepNode::new(2, "sover", 0).with_pos(Upos::VERB),
                DepNode::new(3, ".", 2).with_pos(Upos::PUNCT),
            ],
        )
        .unwrap();
        let p = PredictedTree::from_nodes(vec![DepNode::new(1, "Hundarna", 2), DepNode::new(2, "sover", 0)]);
        let map = align_tokens(&g.forms(), &p.forms()).unwrap();
        let r = compute_uas(&g, &p, &map);
        assert_eq!((r.correct, r.total), (2, 3));
        assert_eq!(r.per_pos[&Upos::PUNCT], PosTally { correct: 0, total: 1 });
    }

    #[test]
    fn micro_and_macro() {
        let mut a = UasResult::default();
        a.record(Some(Upos::NOUN), true);
        a.record(Some(Upos::NOUN), false);
        let mut b = UasResult::default();
        b.record(Some(Upos::VERB), true);
        let s = aggregate_uas([&a, &b]).unwrap();
        assert!((s.micro - 2.0 / 3.0).abs() < 1e-12);
        assert!((s.macro_avg - 0.75).abs() < 1e-12);

        let s = aggregate_uas([&score(&pred(&[2, 0, 4, 2, 7, 7, 2]))]).unwrap();
        assert!((s.micro - 6.0 / 7.0).abs() < 1e-12);
        assert!(aggregate_uas(std::iter::empty()).is_none());
    }
}
