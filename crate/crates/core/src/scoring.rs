//! Sentence weights from adjective/adverb tags and verb categories, and
//! selection of the strongest sentences per aspect group.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::grouping::AspectGroup;
use crate::lexicons::{TagWeightTable, VerbCategoryLexicon};
use crate::patterns::AspectOpinionPair;
use crate::tagger::{SentenceId, TaggedSentence};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SentenceScore {
    pub sentence: SentenceId,
    pub adjective_adverb_points: u32,
    pub verb_points: i32,
    pub total: i32,
}

pub type ScoreMap = BTreeMap<SentenceId, SentenceScore>;

pub fn weight_sentence(
    sentence: &TaggedSentence,
    tw: &TagWeightTable,
    vc: &VerbCategoryLexicon,
) -> SentenceScore {
    let adjective_adverb_points: u32 = sentence.tokens.iter().map(|t| tw.weight(t.tag)).sum();
    let verb_points: i32 = sentence
        .tokens
        .iter()
        .filter(|t| t.tag.is_verb())
        .filter_map(|t| verb_base_form(&t.surface, vc).and_then(|b| vc.orientation(&b)))
        .map(|o| o.sign())
        .sum();
    SentenceScore {
        sentence: sentence.source,
        adjective_adverb_points,
        verb_points,
        total: adjective_adverb_points as i32 + verb_points,
    }
}

/// Strips inflection (`-s`, `-es`, `-ies`, `-ed`, `-ing`, undoing consonant
/// doubling and a dropped final `e`) until a form known to the lexicon
/// appears.
pub fn verb_base_form(word: &str, vc: &VerbCategoryLexicon) -> Option<String> {
    let w = word.to_lowercase();
    let mut candidates = vec![w.clone()];
    if let Some(stem) = w.strip_suffix("ies") {
        candidates.push(format!("{stem}y"));
    }
    if let Some(stem) = w.strip_suffix("es") {
        candidates.push(stem.to_string());
    }
    if let Some(stem) = w.strip_suffix('s') {
        candidates.push(stem.to_string());
    }
    for suffix in ["ed", "ing"] {
        if let Some(stem) = w.strip_suffix(suffix) {
            candidates.push(stem.to_string());
            candidates.push(format!("{stem}e"));
            let b = stem.as_bytes();
            if b.len() >= 2 && b[b.len() - 1] == b[b.len() - 2] {
                candidates.push(stem[..stem.len() - 1].to_string());
            }
            if suffix == "ed" {
                if let Some(s) = stem.strip_suffix('i') {
                    candidates.push(format!("{s}y"));
                }
            }
        }
    }
    candidates
        .into_iter()
        .find(|c| !c.is_empty() && vc.contains(c))
}

pub fn score_sentences<'a>(
    sentences: impl IntoIterator<Item = &'a TaggedSentence>,
    tw: &TagWeightTable,
    vc: &VerbCategoryLexicon,
) -> ScoreMap {
    sentences
        .into_iter()
        .map(|s| (s.source, weight_sentence(s, tw, vc)))
        .collect()
}

/// The `k` highest-weighted sentences among `candidates`; ties go to the
/// earlier sentence.
pub fn rank_sentences(
    candidates: &BTreeSet<SentenceId>,
    scores: &ScoreMap,
    k: usize,
) -> Result<Vec<SentenceId>> {
    if k < 1 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let total = |id: &SentenceId| scores.get(id).map_or(0, |s| s.total);
    let mut ranked: Vec<SentenceId> = candidates.iter().copied().collect();
    ranked.sort_by(|a, b| total(b).cmp(&total(a)).then(a.cmp(b)));
    ranked.truncate(k);
    Ok(ranked)
}

pub fn select_top_sentences(
    group: &AspectGroup,
    pairs: &[AspectOpinionPair],
    scores: &ScoreMap,
    k: usize,
) -> Result<Vec<SentenceId>> {
    let candidates: BTreeSet<SentenceId> = group.pairs.iter().map(|&i| pairs[i].sentence).collect();
    rank_sentences(&candidates, scores, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tagger::parse_pretagged;

    fn score(line: &str, vc: &VerbCategoryLexicon) -> SentenceScore {
        weight_sentence(
            &parse_pretagged(line).unwrap(),
            &TagWeightTable::default(),
            vc,
        )
    }

    #[test]
    fn weight_examples() {
        let vc = VerbCategoryLexicon::bundled();
        let s = score("earpiece/NN is/VBZ very/RB comfortable/JJ", &vc);
        assert_eq!(
            (s.adjective_adverb_points, s.verb_points, s.total),
            (2, 0, 2)
        );

        let empty = VerbCategoryLexicon::default();
        assert_eq!(score("camera/NN works/VBZ", &empty).total, 0);

        let s = score("they/PRP warn/VBP about/IN the/DT awful/JJ battery/NN", &vc);
        assert_eq!(
            (s.adjective_adverb_points, s.verb_points, s.total),
            (1, -1, 0)
        );
    }

    #[test]
    fn superlatives_and_comparatives() {
        let vc = VerbCategoryLexicon::default();
        assert_eq!(
            score("best/JJS better/JJR more/RBR most/RBS", &vc).total,
            10
        );
    }

    #[test]
    fn inflected_verbs() {
        let vc = VerbCategoryLexicon::bundled();
        for (w, base) in [
            ("warns", "warn"),
            ("warned", "warn"),
            ("warning", "warn"),
            ("cautioned", "caution"),
            ("argued", "argue"),
            ("arguing", "argue"),
            ("argues", "argue"),
            ("chatted", "chat"),
            ("chattering", "chatter"),
            ("Tells", "tell"),
            ("advising", "advise"),
        ] {
            if base == "chat" {
                assert_eq!(verb_base_form(w, &vc), None, "{w}");
            } else {
                assert_eq!(verb_base_form(w, &vc).as_deref(), Some(base), "{w}");
            }
        }
        let s = score("the/DT manual/NN tells/VBZ you/PRP everything/NN", &vc);
        assert_eq!(s.verb_points, 1);
        // only verb-tagged tokens count
        let s = score("a/DT warning/NN label/NN", &vc);
        assert_eq!(s.total, 0);
    }

    #[test]
    fn ranking() {
        let mk = |i: usize, total: i32| {
            (
                SentenceId(i),
                SentenceScore {
                    sentence: SentenceId(i),
                    adjective_adverb_points: total.max(0) as u32,
                    verb_points: 0,
                    total,
                },
            )
        };
        let scores: ScoreMap = [mk(1, 3), mk(2, 1), mk(3, 3)].into_iter().collect();
        let all: BTreeSet<SentenceId> = scores.keys().copied().collect();
        assert_eq!(
            rank_sentences(&all, &scores, 2).unwrap(),
            vec![SentenceId(1), SentenceId(3)]
        );
        assert_eq!(rank_sentences(&all, &scores, 10).unwrap().len(), 3);
        assert!(rank_sentences(&all, &scores, 0).is_err());

        let flat: ScoreMap = [mk(5, 1), mk(2, 1), mk(9, 1)].into_iter().collect();
        let all: BTreeSet<SentenceId> = flat.keys().copied().collect();
        assert_eq!(
            rank_sentences(&all, &flat, 2).unwrap(),
            vec![SentenceId(2), SentenceId(5)]
        );
    }
}
