//! Knowledge resources: opinion seed lists, the aspect dictionary, verb
//! categories and the adjective/adverb tag weights.
//!
//! All matching is done on lowercase text.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::path::Path;

use crate::error::{read_resource, Error, Result};
use crate::tagset::PennTag;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::Positive => "positive",
            Orientation::Negative => "negative",
        }
    }

    pub fn sign(self) -> i32 {
        match self {
            Orientation::Positive => 1,
            Orientation::Negative => -1,
        }
    }
}

impl std::str::FromStr for Orientation {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "positive" => Ok(Orientation::Positive),
            "negative" => Ok(Orientation::Negative),
            other => Err(format!(
                "orientation must be positive or negative, got {other:?}"
            )),
        }
    }
}

fn content_lines(content: &str) -> impl Iterator<Item = (usize, &str)> {
    content.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with(';') || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line))
        }
    })
}

fn normalize_term(term: &str) -> String {
    let words: Vec<&str> = term.split_whitespace().collect();
    words.join(" ").to_lowercase()
}

/// Positive and negative seed lists. The two sets are disjoint.
#[derive(Debug, Clone, Default)]
pub struct OpinionLexicon {
    positive: HashSet<String>,
    negative: HashSet<String>,
}

impl OpinionLexicon {
    pub fn parse(positive: &str, negative: &str) -> Result<Self> {
        let read = |content: &str| -> HashSet<String> {
            content_lines(content)
                .map(|(_, w)| w.to_lowercase())
                .collect()
        };
        let positive = read(positive);
        let negative = read(negative);
        let mut overlap: Vec<String> = positive.intersection(&negative).cloned().collect();
        if !overlap.is_empty() {
            overlap.sort();
            return Err(Error::LexiconOverlap(overlap));
        }
        Ok(OpinionLexicon { positive, negative })
    }

    pub fn load(positive: &Path, negative: &Path) -> Result<Self> {
        Self::parse(&read_resource(positive)?, &read_resource(negative)?)
    }

    pub fn bundled() -> Self {
        Self::parse(
            include_str!("../data/positive-words.txt"),
            include_str!("../data/negative-words.txt"),
        )
        .expect("bundled opinion lexicon is valid")
    }

    pub fn polarity(&self, word: &str) -> Option<Orientation> {
        let w = word.to_lowercase();
        if self.positive.contains(&w) {
            Some(Orientation::Positive)
        } else if self.negative.contains(&w) {
            Some(Orientation::Negative)
        } else {
            None
        }
    }

    pub fn positive_len(&self) -> usize {
        self.positive.len()
    }

    pub fn negative_len(&self) -> usize {
        self.negative.len()
    }
}

/// Lookup of an opinion word, `None` when the word is in neither list.
pub fn polarity(word: &str, lex: &OpinionLexicon) -> Option<Orientation> {
    lex.polarity(word)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Specification,
    Synonym,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct DictEntry {
    canonical: String,
    provenance: Provenance,
}

/// Product-specification aspects plus their synonyms, each mapped to a
/// canonical term. Terms may span several words.
#[derive(Debug, Clone, Default)]
pub struct AspectDictionary {
    entries: HashMap<String, DictEntry>,
    max_words: usize,
}

impl AspectDictionary {
    /// `aspects` holds one canonical term per line; `synonyms` holds
    /// `canonical: syn1, syn2, ...` lines.
    pub fn parse(aspects: &str, synonyms: &str) -> Result<Self> {
        let mut dict = AspectDictionary::default();
        for (_, line) in content_lines(aspects) {
            let term = normalize_term(line);
            dict.insert(term.clone(), term, Provenance::Specification);
        }

        for (lineno, line) in content_lines(synonyms) {
            let err = |message: String| Error::Resource {
                resource: "synonym file",
                line: lineno,
                message,
            };
            let (canonical, syns) = line
                .split_once(':')
                .ok_or_else(|| err("expected `canonical: synonym, ...`".into()))?;
            let canonical = normalize_term(canonical);
            match dict.entries.get(&canonical) {
                Some(e) if e.provenance == Provenance::Specification => {}
                _ => return Err(err(format!("unknown canonical term {canonical:?}"))),
            }
            for syn in syns
                .split(',')
                .map(normalize_term)
                .filter(|s| !s.is_empty())
            {
                if let Some(existing) = dict.entries.get(&syn) {
                    if existing.canonical != canonical {
                        return Err(err(format!(
                            "{syn:?} maps to both {:?} and {canonical:?}",
                            existing.canonical
                        )));
                    }
                    continue;
                }
                dict.insert(syn, canonical.clone(), Provenance::Synonym);
            }
        }
        Ok(dict)
    }

    pub fn load(aspects: &Path, synonyms: Option<&Path>) -> Result<Self> {
        let syn = match synonyms {
            Some(p) => read_resource(p)?,
            None => String::new(),
        };
        Self::parse(&read_resource(aspects)?, &syn)
    }

    fn insert(&mut self, term: String, canonical: String, provenance: Provenance) {
        self.max_words = self.max_words.max(term.split(' ').count());
        self.entries.insert(
            term,
            DictEntry {
                canonical,
                provenance,
            },
        );
    }

    pub fn lookup(&self, term: &str) -> Option<&str> {
        self.entries
            .get(&normalize_term(term))
            .map(|e| e.canonical.as_str())
    }

    pub fn provenance(&self, term: &str) -> Option<Provenance> {
        self.entries
            .get(&normalize_term(term))
            .map(|e| e.provenance)
    }

    pub fn contains(&self, term: &str) -> bool {
        self.lookup(term).is_some()
    }

    /// Longest dictionary term starting at `start` in a lowercase word
    /// sequence, as `(word count, canonical)`.
    pub fn longest_match(&self, words: &[String], start: usize) -> Option<(usize, &str)> {
        let available = words.len().saturating_sub(start);
        for len in (1..=self.max_words.min(available)).rev() {
            let candidate = words[start..start + len].join(" ");
            if let Some(e) = self.entries.get(&candidate) {
                return Some((len, e.canonical.as_str()));
            }
        }
        None
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerbCategory {
    pub name: String,
    pub orientation: Orientation,
    pub verbs: BTreeSet<String>,
}

/// Verb categories that reinforce (`positive`) or weaken (`negative`) an
/// opinion. A verb belongs to at most one orientation.
#[derive(Debug, Clone, Default)]
pub struct VerbCategoryLexicon {
    pub categories: Vec<VerbCategory>,
    index: HashMap<String, Orientation>,
}

impl VerbCategoryLexicon {
    /// Parses `category<TAB>orientation<TAB>verb,verb,...` lines.
    pub fn parse(content: &str) -> Result<Self> {
        let mut lex = VerbCategoryLexicon::default();
        for (lineno, line) in content_lines(content) {
            let err = |message: String| Error::Resource {
                resource: "verb categories",
                line: lineno,
                message,
            };
            let fields: Vec<&str> = line.split('\t').collect();
            let [name, orientation, verbs] = fields[..] else {
                return Err(err("expected category<TAB>orientation<TAB>verbs".into()));
            };
            let orientation: Orientation = orientation.trim().parse().map_err(err)?;
            let verbs: BTreeSet<String> = verbs
                .split(',')
                .map(|v| v.trim().to_lowercase())
                .filter(|v| !v.is_empty())
                .collect();
            for v in &verbs {
                match lex.index.get(v) {
                    Some(&o) if o != orientation => {
                        return Err(err(format!("verb {v:?} is both positive and negative")));
                    }
                    _ => {
                        lex.index.insert(v.clone(), orientation);
                    }
                }
            }
            lex.categories.push(VerbCategory {
                name: name.trim().to_string(),
                orientation,
                verbs,
            });
        }
        Ok(lex)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read_resource(path)?)
    }

    pub fn bundled() -> Self {
        Self::parse(include_str!("../data/verbs.tsv")).expect("bundled verb categories are valid")
    }

    /// Orientation of a base-form verb.
    pub fn orientation(&self, base_form: &str) -> Option<Orientation> {
        self.index.get(base_form).copied()
    }

    pub fn contains(&self, base_form: &str) -> bool {
        self.index.contains_key(base_form)
    }
}

/// Points each tag contributes to a sentence weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagWeightTable {
    weights: BTreeMap<PennTag, u32>,
}

impl Default for TagWeightTable {
    fn default() -> Self {
        let weights = [
            (PennTag::JJ, 1),
            (PennTag::JJR, 2),
            (PennTag::JJS, 3),
            (PennTag::RB, 1),
            (PennTag::RBR, 2),
            (PennTag::RBS, 3),
        ]
        .into_iter()
        .collect();
        TagWeightTable { weights }
    }
}

impl TagWeightTable {
    pub fn weight(&self, tag: PennTag) -> u32 {
        self.weights.get(&tag).copied().unwrap_or(0)
    }

    pub fn set(&mut self, tag: PennTag, weight: u32) {
        self.weights.insert(tag, weight);
    }
}
