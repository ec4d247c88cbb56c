use std::collections::HashSet;

use super::{match_tags, AspectRole, PatternSet};
use crate::lexicons::{AspectDictionary, OpinionLexicon, Orientation};
use crate::tagger::{SentenceId, TaggedSentence};

/// Pattern name recorded for pairs found by the nearest-aspect fallback.
pub const NEAREST_PATTERN: &str = "nearest-aspect";

/// One extracted aspect/opinion pair anchored to a sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AspectOpinionPair {
    /// Dictionary canonical term when the span is a known aspect, else the raw span.
    pub aspect_surface: String,
    /// The lowercase words of the aspect span as written.
    pub aspect_text: String,
    pub opinion_surface: String,
    pub orientation: Orientation,
    pub sentence: SentenceId,
    /// Last token of the aspect span.
    pub aspect_index: usize,
    /// Half-open token range of the aspect span.
    pub aspect_span: (usize, usize),
    pub opinion_index: usize,
    pub pattern_name: String,
}

/// A resolved aspect: a dictionary term or a run of nouns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AspectSpan {
    pub start: usize,
    pub end: usize,
    pub text: String,
    pub canonical: Option<String>,
}

impl AspectSpan {
    pub fn surface(&self) -> &str {
        self.canonical.as_deref().unwrap_or(&self.text)
    }

    pub fn last(&self) -> usize {
        self.end - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtractOptions {
    /// Pair opinion words with their nearest aspect when no pattern fires.
    pub fallback_search: bool,
    /// Share an opinion across `noun CC noun`.
    pub conjunction_expand: bool,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            fallback_search: true,
            conjunction_expand: true,
        }
    }
}

/// Lowercased words plus the dictionary terms found in a sentence.
struct SentenceView<'s> {
    sentence: &'s TaggedSentence,
    lower: Vec<String>,
    dict_cover: Vec<Option<(usize, usize, String)>>,
}

impl<'s> SentenceView<'s> {
    fn new(sentence: &'s TaggedSentence, dict: &AspectDictionary) -> Self {
        let lower: Vec<String> = sentence
            .tokens
            .iter()
            .map(|t| t.surface.to_lowercase())
            .collect();
        let mut dict_cover = vec![None; lower.len()];
        let mut i = 0;
        while i < lower.len() {
            match dict.longest_match(&lower, i) {
                Some((len, canonical)) => {
                    for slot in &mut dict_cover[i..i + len] {
                        *slot = Some((i, i + len, canonical.to_string()));
                    }
                    i += len;
                }
                None => i += 1,
            }
        }
        SentenceView {
            sentence,
            lower,
            dict_cover,
        }
    }

    fn len(&self) -> usize {
        self.lower.len()
    }

    fn is_noun(&self, i: usize) -> bool {
        self.sentence.tokens[i].tag.is_noun()
    }

    fn is_candidate(&self, i: usize) -> bool {
        self.dict_cover[i].is_some() || self.is_noun(i)
    }

    /// The aspect span containing token `i`, never extending over `exclude`.
    fn resolve(&self, i: usize, exclude: usize) -> Option<AspectSpan> {
        if let Some((start, end, canonical)) = &self.dict_cover[i] {
            if !(*start..*end).contains(&exclude) {
                return Some(self.span(*start, *end, Some(canonical.clone())));
            }
        }
        if !self.is_noun(i) || i == exclude {
            return None;
        }
        let mut start = i;
        while start > 0 && start - 1 != exclude && self.is_noun(start - 1) {
            start -= 1;
        }
        let mut end = i + 1;
        while end < self.len() && end != exclude && self.is_noun(end) {
            end += 1;
        }
        Some(self.span(start, end, None))
    }

    fn span(&self, start: usize, end: usize, canonical: Option<String>) -> AspectSpan {
        AspectSpan {
            start,
            end,
            text: self.lower[start..end].join(" "),
            canonical,
        }
    }

    fn nearest(&self, opinion_index: usize) -> Option<AspectSpan> {
        let backward = (0..opinion_index).rev();
        let forward = opinion_index + 1..self.len();
        backward
            .chain(forward)
            .find(|&j| self.is_candidate(j))
            .and_then(|j| self.resolve(j, opinion_index))
    }

    fn pair(
        &self,
        aspect: &AspectSpan,
        opinion_index: usize,
        orientation: Orientation,
        pattern_name: &str,
    ) -> AspectOpinionPair {
        AspectOpinionPair {
            aspect_surface: aspect.surface().to_string(),
            aspect_text: aspect.text.clone(),
            opinion_surface: self.lower[opinion_index].clone(),
            orientation,
            sentence: self.sentence.source,
            aspect_index: aspect.last(),
            aspect_span: (aspect.start, aspect.end),
            opinion_index,
            pattern_name: pattern_name.to_string(),
        }
    }

    fn conjunction_expand(&self, pair: &AspectOpinionPair) -> Option<AspectOpinionPair> {
        let after = pair.aspect_span.1;
        if after + 1 >= self.len() || self.sentence.tokens[after].tag != crate::tagset::PennTag::CC
        {
            return None;
        }
        let next = after + 1;
        if !self.is_noun(next) {
            return None;
        }
        let span = self.resolve(next, pair.opinion_index)?;
        if span.start != next {
            return None;
        }
        let name = format!("{}+conj", pair.pattern_name);
        Some(self.pair(&span, pair.opinion_index, pair.orientation, &name))
    }
}

/// Scans backwards from the opinion word for the closest dictionary term or
/// noun, then forwards.
pub fn nearest_aspect_search(
    sentence: &TaggedSentence,
    opinion_index: usize,
    dict: &AspectDictionary,
) -> Option<AspectSpan> {
    if opinion_index >= sentence.len() {
        return None;
    }
    SentenceView::new(sentence, dict).nearest(opinion_index)
}

/// Adds a pair for the second noun of `aspect CC noun`, once.
pub fn conjunction_expand(
    pair: &AspectOpinionPair,
    sentence: &TaggedSentence,
    dict: &AspectDictionary,
) -> Vec<AspectOpinionPair> {
    let view = SentenceView::new(sentence, dict);
    let mut out = vec![pair.clone()];
    out.extend(view.conjunction_expand(pair));
    out
}

/// Pattern-driven extraction over one tagged sentence.
#[derive(Debug, Clone, Copy)]
pub struct Extractor<'a> {
    pub dict: &'a AspectDictionary,
    pub lexicon: &'a OpinionLexicon,
    pub patterns: &'a PatternSet,
    pub options: ExtractOptions,
}

impl<'a> Extractor<'a> {
    pub fn new(
        dict: &'a AspectDictionary,
        lexicon: &'a OpinionLexicon,
        patterns: &'a PatternSet,
    ) -> Self {
        Extractor {
            dict,
            lexicon,
            patterns,
            options: ExtractOptions::default(),
        }
    }

    pub fn with_options(mut self, options: ExtractOptions) -> Self {
        self.options = options;
        self
    }

    /// Pairs ordered by `(aspect_index, opinion_index)`. When several patterns
    /// produce the same pair the earliest pattern in the set names it.
    pub fn extract(&self, sentence: &TaggedSentence) -> Vec<AspectOpinionPair> {
        let view = SentenceView::new(sentence, self.dict);
        let tags = sentence.tags();
        let mut seen = HashSet::new();
        let mut pairs = Vec::new();
        let mut push = |pair: AspectOpinionPair, pairs: &mut Vec<AspectOpinionPair>| {
            if seen.insert((pair.aspect_index, pair.opinion_index)) {
                pairs.push(pair);
            }
        };

        for pattern in self.patterns.patterns() {
            for start in match_tags(&tags, &pattern.tags) {
                let o = start + pattern.opinion_offset;
                let Some(orientation) = self.lexicon.polarity(&view.lower[o]) else {
                    continue;
                };
                let aspect = match pattern.aspect {
                    AspectRole::Offset(a) => view.resolve(start + a, o),
                    AspectRole::Nearest => view.nearest(o),
                };
                if let Some(aspect) = aspect {
                    push(
                        view.pair(&aspect, o, orientation, &pattern.name),
                        &mut pairs,
                    );
                }
            }
        }

        if pairs.is_empty() && self.options.fallback_search {
            for (o, token) in sentence.tokens.iter().enumerate() {
                if !token.tag.is_opinion_role() {
                    continue;
                }
                let Some(orientation) = self.lexicon.polarity(&view.lower[o]) else {
                    continue;
                };
                if let Some(aspect) = view.nearest(o) {
                    push(
                        view.pair(&aspect, o, orientation, NEAREST_PATTERN),
                        &mut pairs,
                    );
                }
            }
        }

        if self.options.conjunction_expand {
            let base = pairs.clone();
            for pair in &base {
                if let Some(extra) = view.conjunction_expand(pair) {
                    push(extra, &mut pairs);
                }
            }
        }

        pairs.sort_by_key(|p| (p.aspect_index, p.opinion_index));
        pairs
    }
}

/// [`Extractor::extract`] with default options.
pub fn extract_pairs(
    sentence: &TaggedSentence,
    dict: &AspectDictionary,
    lex: &OpinionLexicon,
    ps: &PatternSet,
) -> Vec<AspectOpinionPair> {
    Extractor::new(dict, lex, ps).extract(sentence)
}
