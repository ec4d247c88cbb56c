//! Tag patterns, the windowed matcher, aspect/opinion pairing and
//! frequent tag-sequence mining.

mod extract;
mod mining;

pub use extract::{
    conjunction_expand, extract_pairs, nearest_aspect_search, AspectOpinionPair, AspectSpan,
    ExtractOptions, Extractor, NEAREST_PATTERN,
};
pub use mining::{mine_frequent_tag_sets, mine_sequences, MinedPattern};

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use crate::error::{read_resource, Error, Result};
use crate::tagger::TaggedSentence;
use crate::tagset::PennTag;

/// Where a pattern finds its aspect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AspectRole {
    /// The token at this offset into the pattern.
    Offset(usize),
    /// The closest aspect to the opinion word, searching backwards first.
    Nearest,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagPattern {
    pub tags: Vec<PennTag>,
    pub aspect: AspectRole,
    pub opinion_offset: usize,
    pub name: String,
}

pub const MIN_PATTERN_LEN: usize = 2;
pub const MAX_PATTERN_LEN: usize = 6;

impl TagPattern {
    pub fn new(
        tags: Vec<PennTag>,
        aspect: AspectRole,
        opinion_offset: usize,
        name: impl Into<String>,
    ) -> Result<Self> {
        let name = name.into();
        let len = tags.len();
        if !(MIN_PATTERN_LEN..=MAX_PATTERN_LEN).contains(&len) {
            return Err(Error::Pattern(format!(
                "{name}: length {len} outside {MIN_PATTERN_LEN}..={MAX_PATTERN_LEN}"
            )));
        }
        if opinion_offset >= len {
            return Err(Error::Pattern(format!(
                "{name}: opinion offset out of range"
            )));
        }
        if !tags[opinion_offset].is_opinion_role() {
            return Err(Error::Pattern(format!(
                "{name}: opinion tag {} is not adjectival, adverbial or participial",
                tags[opinion_offset]
            )));
        }
        if let AspectRole::Offset(a) = aspect {
            if a >= len || a == opinion_offset {
                return Err(Error::Pattern(format!("{name}: bad aspect offset {a}")));
            }
            if !tags[a].is_noun() {
                return Err(Error::Pattern(format!(
                    "{name}: aspect tag {} is not a noun",
                    tags[a]
                )));
            }
        }
        Ok(TagPattern {
            tags,
            aspect,
            opinion_offset,
            name,
        })
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    /// Parses `NN:A VBZ RB JJ:O  # name=label`.
    pub fn parse_line(line: &str) -> Result<Self> {
        let (body, meta) = match line.split_once('#') {
            Some((b, m)) => (b, m),
            None => (line, ""),
        };
        let name = meta
            .split_whitespace()
            .find_map(|kv| kv.strip_prefix("name="))
            .map(str::to_string)
            .unwrap_or_else(|| body.split_whitespace().collect::<Vec<_>>().join("-"));

        let mut tags = Vec::new();
        let mut aspect = None;
        let mut opinion = None;
        for (i, item) in body.split_whitespace().enumerate() {
            let (tag, role) = match item.rsplit_once(':') {
                Some((t, r)) if r == "A" || r == "O" => (t, Some(r)),
                _ => (item, None),
            };
            let tag: PennTag = tag
                .parse()
                .map_err(|e: crate::tagset::UnknownTag| Error::Pattern(format!("{name}: {e}")))?;
            tags.push(tag);
            let slot = match role {
                Some("A") => &mut aspect,
                Some(_) => &mut opinion,
                None => continue,
            };
            if slot.replace(i).is_some() {
                return Err(Error::Pattern(format!("{name}: role marked twice")));
            }
        }
        let opinion = opinion.ok_or_else(|| Error::Pattern(format!("{name}: no :O role")))?;
        let aspect = aspect.map_or(AspectRole::Nearest, AspectRole::Offset);
        TagPattern::new(tags, aspect, opinion, name)
    }
}

impl fmt::Display for TagPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, tag) in self.tags.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{tag}")?;
            if self.aspect == AspectRole::Offset(i) {
                f.write_str(":A")?;
            }
            if self.opinion_offset == i {
                f.write_str(":O")?;
            }
        }
        write!(f, "  # name={}", self.name)
    }
}

/// Patterns in precedence order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PatternSet {
    patterns: Vec<TagPattern>,
}

impl PatternSet {
    pub fn new(patterns: Vec<TagPattern>) -> Result<Self> {
        let mut seen = HashSet::new();
        for p in &patterns {
            if !seen.insert((p.tags.clone(), p.aspect, p.opinion_offset)) {
                return Err(Error::Pattern(format!("duplicate pattern {p}")));
            }
        }
        Ok(PatternSet { patterns })
    }

    pub fn parse(content: &str) -> Result<Self> {
        let mut patterns = Vec::new();
        for (lineno, line) in content.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let p = TagPattern::parse_line(trimmed).map_err(|e| Error::Resource {
                resource: "pattern file",
                line: lineno + 1,
                message: e.to_string(),
            })?;
            patterns.push(p);
        }
        Self::new(patterns)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read_resource(path)?)
    }

    /// The frequent review shapes: copulas with adjectives and adverbs,
    /// adjective-first noun phrases, and participle-noun pairs.
    pub fn bundled() -> Self {
        Self::parse(include_str!("../../data/patterns.txt")).expect("bundled patterns are valid")
    }

    pub fn patterns(&self) -> &[TagPattern] {
        &self.patterns
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }
}

/// Every start index where the pattern's tags occur contiguously, ascending,
/// overlaps included.
pub fn match_pattern(sentence: &TaggedSentence, pattern: &TagPattern) -> Vec<usize> {
    match_tags(&sentence.tags(), &pattern.tags)
}

pub(crate) fn match_tags(tags: &[PennTag], pattern: &[PennTag]) -> Vec<usize> {
    if pattern.is_empty() || pattern.len() > tags.len() {
        return Vec::new();
    }
    tags.windows(pattern.len())
        .enumerate()
        .filter(|(_, w)| *w == pattern)
        .map(|(i, _)| i)
        .collect()
}
