//! End-to-end composition: load resources, tag a corpus, extract pairs,
//! group, score and summarize.

use std::path::{Path, PathBuf};

use crate::corpus::{join_hyphen_compounds, tokenize, Corpus};
use crate::error::{Error, Result};
use crate::grouping::group_aspects;
use crate::lexicons::{AspectDictionary, OpinionLexicon, TagWeightTable, VerbCategoryLexicon};
use crate::patterns::{AspectOpinionPair, ExtractOptions, Extractor, PatternSet};
use crate::scoring::score_sentences;
use crate::summary::{generate_summary, Summary};
use crate::tagger::{
    parse_pretagged, BaselineTagger, PosTagger, SentenceId, TagLexicon, TaggedSentence,
};

/// Overrides the directory bundled resources are read from.
pub const DATA_DIR_ENV: &str = "ASPECTMINER_DATA";

/// `$ASPECTMINER_DATA` if set, else the `data/` directory of this crate.
pub fn data_dir() -> PathBuf {
    match std::env::var_os(DATA_DIR_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir),
        _ => PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data")),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResourcePaths {
    pub tag_lexicon: PathBuf,
    pub positive: PathBuf,
    pub negative: PathBuf,
    pub aspects: PathBuf,
    pub synonyms: Option<PathBuf>,
    pub verbs: PathBuf,
    pub patterns: PathBuf,
}

impl ResourcePaths {
    /// The standard file names inside `dir`.
    pub fn in_dir(dir: &Path) -> Self {
        ResourcePaths {
            tag_lexicon: dir.join("tag_lexicon.tsv"),
            positive: dir.join("positive-words.txt"),
            negative: dir.join("negative-words.txt"),
            aspects: dir.join("aspects.txt"),
            synonyms: Some(dir.join("synonyms.txt")),
            verbs: dir.join("verbs.tsv"),
            patterns: dir.join("patterns.txt"),
        }
    }

    pub fn all(&self) -> Vec<&Path> {
        let mut v = vec![
            self.tag_lexicon.as_path(),
            &self.positive,
            &self.negative,
            &self.aspects,
            &self.verbs,
            &self.patterns,
        ];
        v.extend(self.synonyms.as_deref());
        v
    }
}

impl Default for ResourcePaths {
    fn default() -> Self {
        Self::in_dir(&data_dir())
    }
}

#[derive(Debug, Clone)]
pub struct Resources {
    pub tagger: BaselineTagger,
    pub lexicon: OpinionLexicon,
    pub dict: AspectDictionary,
    pub verbs: VerbCategoryLexicon,
    pub patterns: PatternSet,
    pub weights: TagWeightTable,
}

impl Resources {
    pub fn load(paths: &ResourcePaths) -> Result<Self> {
        Ok(Resources {
            tagger: BaselineTagger::new(TagLexicon::load(&paths.tag_lexicon)?),
            lexicon: OpinionLexicon::load(&paths.positive, &paths.negative)?,
            dict: AspectDictionary::load(&paths.aspects, paths.synonyms.as_deref())?,
            verbs: VerbCategoryLexicon::load(&paths.verbs)?,
            patterns: PatternSet::load(&paths.patterns)?,
            weights: TagWeightTable::default(),
        })
    }
}

/// One tagged sentence per corpus sentence, with `source` set to its index.
/// Blank sentences become empty tagged sentences.
pub fn tag_corpus(
    corpus: &Corpus,
    tagger: &dyn PosTagger,
    pretagged: bool,
) -> Result<Vec<TaggedSentence>> {
    corpus
        .sentences
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let in_sentence = |e: Error| Error::InSentence {
                index: i,
                source: Box::new(e),
            };
            let mut tagged = if pretagged {
                parse_pretagged(&s.raw_text).map_err(in_sentence)?
            } else {
                let words = join_hyphen_compounds(&s.raw_text, &tokenize(&s.raw_text));
                if words.is_empty() {
                    TaggedSentence::default()
                } else {
                    tagger.tag_sentence(&words).map_err(in_sentence)?
                }
            };
            tagged.source = SentenceId(i);
            Ok(tagged)
        })
        .collect()
}

/// A corpus after tagging and extraction.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub corpus: Corpus,
    pub tagged: Vec<TaggedSentence>,
    /// Pairs from non-title sentences, in sentence order.
    pub pairs: Vec<AspectOpinionPair>,
    /// Display text per sentence: the raw text, or the words of a pretagged line.
    pub texts: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PipelineOptions {
    pub pretagged: bool,
    pub extract: ExtractOptions,
}

pub fn analyze(corpus: Corpus, res: &Resources, opts: PipelineOptions) -> Result<Analysis> {
    let tagged = tag_corpus(&corpus, &res.tagger, opts.pretagged)?;
    let extractor =
        Extractor::new(&res.dict, &res.lexicon, &res.patterns).with_options(opts.extract);
    let pairs = extract_corpus(&corpus, &tagged, &extractor);
    let texts = if opts.pretagged {
        tagged.iter().map(TaggedSentence::text).collect()
    } else {
        corpus
            .sentences
            .iter()
            .map(|s| s.raw_text.clone())
            .collect()
    };
    Ok(Analysis {
        corpus,
        tagged,
        pairs,
        texts,
    })
}

/// Titles are skipped.
pub fn extract_corpus(
    corpus: &Corpus,
    tagged: &[TaggedSentence],
    extractor: &Extractor<'_>,
) -> Vec<AspectOpinionPair> {
    corpus
        .sentences
        .iter()
        .zip(tagged)
        .filter(|(s, _)| !s.is_title)
        .flat_map(|(_, t)| extractor.extract(t))
        .collect()
}

impl Analysis {
    /// Non-title tagged sentences.
    pub fn body(&self) -> impl Iterator<Item = &TaggedSentence> {
        self.corpus
            .sentences
            .iter()
            .zip(&self.tagged)
            .filter(|(s, _)| !s.is_title)
            .map(|(_, t)| t)
    }

    pub fn summarize(&self, res: &Resources, top_k: usize) -> Result<Summary> {
        let groups = group_aspects(&self.pairs, &res.dict);
        let scores = score_sentences(self.body(), &res.weights, &res.verbs);
        generate_summary(
            &self.corpus.product_name,
            &groups,
            &self.pairs,
            &scores,
            &self.texts,
            top_k,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_corpus_file;

    fn resources() -> Resources {
        Resources::load(&ResourcePaths::in_dir(Path::new(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/data"
        ))))
        .unwrap()
    }

    #[test]
    fn raw_text_pipeline() {
        let corpus = parse_corpus_file("[t]nice\nsound[+2]##The sound is wonderful.\n##\n", "p");
        let a = analyze(corpus, &resources(), PipelineOptions::default()).unwrap();
        assert_eq!(a.tagged.len(), 3);
        assert!(a.tagged[2].is_empty());
        assert_eq!(a.tagged[1].source, SentenceId(1));
        assert_eq!(a.pairs.len(), 1);
        assert_eq!(a.pairs[0].aspect_surface, "sound");
        assert_eq!(a.texts[1], "The sound is wonderful.");
    }

    #[test]
    fn pretagged_errors_name_the_sentence() {
        let corpus = parse_corpus_file("##good/JJ\n##bad/XX\n", "p");
        let opts = PipelineOptions {
            pretagged: true,
            ..Default::default()
        };
        let err = analyze(corpus, &resources(), opts).unwrap_err();
        assert!(matches!(err, Error::InSentence { index: 1, .. }));
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn missing_resource() {
        let mut paths =
            ResourcePaths::in_dir(Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/data")));
        paths.verbs = PathBuf::from("/nonexistent/verbs.tsv");
        let err = Resources::load(&paths).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("/nonexistent/verbs.tsv"));
    }

    #[test]
    fn summary_pairs_are_extract_pairs() {
        let content = include_str!("../data/sample_corpus.txt");
        let corpus = parse_corpus_file(content, "mp3");
        let opts = PipelineOptions {
            pretagged: true,
            ..Default::default()
        };
        let res = resources();
        let a = analyze(corpus, &res, opts).unwrap();
        let s = a.summarize(&res, 3).unwrap();
        let pos = a.pairs.iter().filter(|p| p.orientation.sign() > 0).count();
        assert_eq!(s.overall.positive_count, pos);
        assert_eq!(
            s.overall.positive_count + s.overall.negative_count,
            a.pairs.len()
        );
        let grouped: usize = s.groups.iter().map(|g| g.total()).sum();
        assert_eq!(grouped, a.pairs.len());
    }
}
