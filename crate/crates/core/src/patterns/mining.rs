use std::collections::{BTreeMap, HashMap, HashSet};

use super::{MAX_PATTERN_LEN, MIN_PATTERN_LEN};
use crate::error::{Error, Result};
use crate::tagger::TaggedSentence;
use crate::tagset::PennTag;

/// A contiguous tag sequence and the number of sentences containing it.
#[derive(Debug, Clone, PartialEq)]
pub struct MinedPattern {
    pub tags: Vec<PennTag>,
    pub support: usize,
    pub support_ratio: f64,
}

pub fn mine_frequent_tag_sets(
    corpus: &[TaggedSentence],
    min_support: usize,
    max_len: usize,
) -> Result<Vec<MinedPattern>> {
    let sequences: Vec<Vec<PennTag>> = corpus.iter().map(TaggedSentence::tags).collect();
    mine_sequences(&sequences, min_support, max_len)
}

/// Levelwise mining of contiguous tag n-grams (2 ≤ n ≤ `max_len`) by
/// sentence-level support. Length n+1 candidates are joined from frequent
/// length-n sequences overlapping on n−1 tags; both of a candidate's
/// length-n contiguous subsequences are then frequent by construction.
pub fn mine_sequences(
    sequences: &[Vec<PennTag>],
    min_support: usize,
    max_len: usize,
) -> Result<Vec<MinedPattern>> {
    if min_support < 1 {
        return Err(Error::InvalidArgument(
            "min_support must be at least 1".into(),
        ));
    }
    if !(MIN_PATTERN_LEN..=MAX_PATTERN_LEN).contains(&max_len) {
        return Err(Error::InvalidArgument(format!(
            "max_len must be in {MIN_PATTERN_LEN}..={MAX_PATTERN_LEN}, got {max_len}"
        )));
    }

    let total = sequences.len();
    let mut out = Vec::new();
    let mut candidates: Option<HashSet<Vec<PennTag>>> = None;

    for n in MIN_PATTERN_LEN..=max_len {
        let counts = count_support(sequences, n, candidates.as_ref());
        let frequent: Vec<Vec<PennTag>> = counts
            .into_iter()
            .filter(|(_, support)| *support >= min_support)
            .map(|(tags, support)| {
                out.push(MinedPattern {
                    tags: tags.clone(),
                    support,
                    support_ratio: support as f64 / total as f64,
                });
                tags
            })
            .collect();
        if frequent.is_empty() {
            break;
        }
        candidates = Some(join_candidates(&frequent));
    }

    out.sort_by(|a, b| {
        b.support
            .cmp(&a.support)
            .then(b.tags.len().cmp(&a.tags.len()))
            .then_with(|| labels(&a.tags).cmp(&labels(&b.tags)))
    });
    Ok(out)
}

fn labels(tags: &[PennTag]) -> Vec<&'static str> {
    tags.iter().map(|t| t.as_str()).collect()
}

fn count_support(
    sequences: &[Vec<PennTag>],
    n: usize,
    candidates: Option<&HashSet<Vec<PennTag>>>,
) -> HashMap<Vec<PennTag>, usize> {
    let mut counts: HashMap<Vec<PennTag>, usize> = HashMap::new();
    for seq in sequences {
        let mut in_sentence: HashSet<&[PennTag]> = HashSet::new();
        for window in seq.windows(n) {
            if candidates.is_none_or(|c| c.contains(window)) {
                in_sentence.insert(window);
            }
        }
        for window in in_sentence {
            *counts.entry(window.to_vec()).or_default() += 1;
        }
    }
    counts
}

fn join_candidates(frequent: &[Vec<PennTag>]) -> HashSet<Vec<PennTag>> {
    let mut by_prefix: BTreeMap<&[PennTag], Vec<PennTag>> = BTreeMap::new();
    for seq in frequent {
        by_prefix
            .entry(&seq[..seq.len() - 1])
            .or_default()
            .push(seq[seq.len() - 1]);
    }
    let mut out = HashSet::new();
    for seq in frequent {
        if let Some(nexts) = by_prefix.get(&seq[1..]) {
            for &next in nexts {
                let mut c = seq.clone();
                c.push(next);
                out.insert(c);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use PennTag::*;

    fn find<'a>(mined: &'a [MinedPattern], tags: &[PennTag]) -> Option<&'a MinedPattern> {
        mined.iter().find(|m| m.tags == tags)
    }

    #[test]
    fn three_sentence_example() {
        let corpus = vec![
            vec![NN, VBZ, JJ],
            vec![NN, VBZ, RB, JJ],
            vec![DT, NN, VBZ, JJ],
        ];
        let mined = mine_sequences(&corpus, 2, 4).unwrap();
        assert_eq!(find(&mined, &[NN, VBZ]).unwrap().support, 3);
        assert_eq!(find(&mined, &[VBZ, JJ]).unwrap().support, 2);
        assert_eq!(find(&mined, &[NN, VBZ, JJ]).unwrap().support, 2);
        assert_eq!(mined.len(), 3);
        // ordering: support desc, then length desc
        assert_eq!(mined[0].tags, vec![NN, VBZ]);
        assert_eq!(mined[1].tags, vec![NN, VBZ, JJ]);
        assert_eq!(mined[2].tags, vec![VBZ, JJ]);
        assert!((mined[0].support_ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn support_counts_sentences_not_occurrences() {
        let corpus = vec![vec![NN, NN, NN, NN]];
        let mined = mine_sequences(&corpus, 1, 3).unwrap();
        assert_eq!(find(&mined, &[NN, NN]).unwrap().support, 1);
        assert_eq!(find(&mined, &[NN, NN, NN]).unwrap().support, 1);
    }

    #[test]
    fn min_support_above_corpus_size() {
        let corpus = vec![vec![NN, VBZ, JJ]; 3];
        assert!(mine_sequences(&corpus, 4, 4).unwrap().is_empty());
    }

    #[test]
    fn argument_checks() {
        assert!(mine_sequences(&[], 0, 3).is_err());
        assert!(mine_sequences(&[], 1, 1).is_err());
        assert!(mine_sequences(&[], 1, 7).is_err());
        assert!(mine_sequences(&[], 1, 6).unwrap().is_empty());
    }
}
