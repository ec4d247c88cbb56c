//! POS tagging: a lexicon-plus-rules baseline tagger and the `word/TAG`
//! pretagged ingestion path.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{read_resource, Error, Result};
use crate::tagset::PennTag;

/// Index of a sentence within its corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SentenceId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub tag: PennTag,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TaggedSentence {
    pub tokens: Vec<Token>,
    pub source: SentenceId,
}

impl TaggedSentence {
    pub fn new(pairs: impl IntoIterator<Item = (String, PennTag)>, source: SentenceId) -> Self {
        let tokens = pairs
            .into_iter()
            .enumerate()
            .map(|(index, (surface, tag))| Token {
                surface,
                tag,
                index,
            })
            .collect();
        TaggedSentence { tokens, source }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tags(&self) -> Vec<PennTag> {
        self.tokens.iter().map(|t| t.tag).collect()
    }

    /// `surface/TAG` items joined by single spaces.
    pub fn render(&self) -> String {
        let items: Vec<String> = self
            .tokens
            .iter()
            .map(|t| format!("{}/{}", t.surface, t.tag))
            .collect();
        items.join(" ")
    }

    /// Surfaces joined by single spaces, for display.
    pub fn text(&self) -> String {
        let words: Vec<&str> = self.tokens.iter().map(|t| t.surface.as_str()).collect();
        words.join(" ")
    }
}

/// Parses one line of whitespace-separated `word/TAG` items. The last slash of
/// each item is the delimiter, so `PRP$` tags and words containing `/` survive.
pub fn parse_pretagged(line: &str) -> Result<TaggedSentence> {
    let mut pairs = Vec::new();
    for (position, item) in line.split_whitespace().enumerate() {
        let err = |reason: String| Error::Pretagged {
            position,
            item: item.to_string(),
            reason,
        };
        let (word, tag) = item
            .rsplit_once('/')
            .ok_or_else(|| err("missing '/' delimiter".into()))?;
        if word.is_empty() {
            return Err(err("empty word".into()));
        }
        let tag: PennTag = tag
            .parse()
            .map_err(|e: crate::tagset::UnknownTag| err(e.to_string()))?;
        pairs.push((word.to_string(), tag));
    }
    Ok(TaggedSentence::new(pairs, SentenceId::default()))
}

/// Anything that assigns one Penn tag per word can drive the pipeline.
pub trait PosTagger {
    fn tag_sentence(&self, words: &[String]) -> Result<TaggedSentence>;
}

/// Word form to most frequent tag. Lookups are case-sensitive.
#[derive(Debug, Clone, Default)]
pub struct TagLexicon {
    entries: HashMap<String, PennTag>,
}

impl TagLexicon {
    /// Parses `word<TAB>TAG` lines; `#` starts a comment line.
    pub fn parse(content: &str) -> Result<Self> {
        let mut entries = HashMap::new();
        for (lineno, line) in content.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Resource {
                resource: "tag lexicon",
                line: lineno + 1,
                message,
            };
            let (word, tag) = line
                .split_once('\t')
                .ok_or_else(|| err("expected word<TAB>tag".into()))?;
            let tag: PennTag = tag
                .trim()
                .parse()
                .map_err(|e: crate::tagset::UnknownTag| err(e.to_string()))?;
            entries.insert(word.to_string(), tag);
        }
        Ok(TagLexicon { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read_resource(path)?)
    }

    pub fn bundled() -> Self {
        Self::parse(include_str!("../data/tag_lexicon.tsv")).expect("bundled tag lexicon is valid")
    }

    pub fn get(&self, word: &str) -> Option<PennTag> {
        self.entries.get(word).copied()
    }

    pub fn insert(&mut self, word: impl Into<String>, tag: PennTag) {
        self.entries.insert(word.into(), tag);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Lexicon lookup, then suffix rules, hyphen compounds, capitalization, and
/// finally `NN`. Accuracy is that of a most-frequent-tag baseline; feed
/// pretagged text from an external tagger when it matters.
#[derive(Debug, Clone, Default)]
pub struct BaselineTagger {
    lexicon: TagLexicon,
}

const BE_HAVE: &[&str] = &[
    "is", "was", "were", "are", "be", "been", "being", "am", "has", "have", "had", "'s", "'ve",
];

impl BaselineTagger {
    pub fn new(lexicon: TagLexicon) -> Self {
        BaselineTagger { lexicon }
    }

    pub fn bundled() -> Self {
        Self::new(TagLexicon::bundled())
    }

    pub fn lexicon(&self) -> &TagLexicon {
        &self.lexicon
    }

    fn tag_word(&self, word: &str, index: usize, prev: Option<&str>) -> PennTag {
        if let Some(tag) = self.lexicon_tag(word, index) {
            return tag;
        }
        if word
            .chars()
            .all(|c| c.is_ascii_digit() || c == '.' || c == ',')
            && word.chars().any(|c| c.is_ascii_digit())
        {
            return PennTag::CD;
        }
        if let Some(tag) = self.suffix_tag(word, prev) {
            return tag;
        }
        if let Some((_, last)) = word.rsplit_once('-') {
            if !last.is_empty() {
                let lower = last.to_lowercase();
                let adjectival = self.lexicon.get(&lower).is_some_and(PennTag::is_adjective)
                    || self
                        .suffix_tag(&lower, None)
                        .is_some_and(PennTag::is_adjective);
                if adjectival {
                    return PennTag::JJ;
                }
            }
        }
        if index > 0 && word.chars().next().is_some_and(char::is_uppercase) {
            return PennTag::NNP;
        }
        PennTag::NN
    }

    fn lexicon_tag(&self, word: &str, index: usize) -> Option<PennTag> {
        self.lexicon.get(word).or_else(|| {
            // Sentence-initial capitalization is not lexical.
            if index == 0 {
                self.lexicon.get(&word.to_lowercase())
            } else {
                None
            }
        })
    }

    fn is_adjective_stem(&self, stem: &str) -> bool {
        self.lexicon.get(stem) == Some(PennTag::JJ)
    }

    fn is_verb_stem(&self, stem: &str) -> bool {
        matches!(self.lexicon.get(stem), Some(PennTag::VB | PennTag::VBP))
    }

    fn suffix_tag(&self, word: &str, prev: Option<&str>) -> Option<PennTag> {
        let lower = word.to_lowercase();
        let w = lower.as_str();
        let n = w.chars().count();
        if !w.chars().next().is_some_and(char::is_alphabetic) {
            return None;
        }

        if n > 4 && w.ends_with("ly") {
            return Some(PennTag::RB);
        }
        if n > 5 && w.ends_with("est") {
            return Some(PennTag::JJS);
        }
        if n > 4
            && w.ends_with("er")
            && comparative_stems(w)
                .iter()
                .any(|s| self.is_adjective_stem(s))
        {
            return Some(PennTag::JJR);
        }
        if n > 5 && w.ends_with("ing") {
            return Some(PennTag::VBG);
        }
        if n > 4 && w.ends_with("ed") {
            let after_aux = prev.is_some_and(|p| BE_HAVE.contains(&p.to_lowercase().as_str()));
            return Some(if after_aux {
                PennTag::VBN
            } else {
                PennTag::VBD
            });
        }
        if n > 3 && w.ends_with('s') && !w.ends_with("ss") {
            let stem_s = &w[..w.len() - 1];
            let stem_es = w.strip_suffix("es");
            let verb = self.is_verb_stem(stem_s) || stem_es.is_some_and(|s| self.is_verb_stem(s));
            return Some(if verb { PennTag::VBZ } else { PennTag::NNS });
        }
        None
    }
}

/// Candidate positive-degree stems for an `-er` form: `nicer`→`nice`,
/// `bigger`→`big`, `happier`→`happy`, `louder`→`loud`.
fn comparative_stems(w: &str) -> Vec<String> {
    let base = &w[..w.len() - 2];
    let mut stems = vec![base.to_string(), format!("{base}e")];
    let b = base.as_bytes();
    if b.len() >= 2 && b[b.len() - 1] == b[b.len() - 2] {
        stems.push(base[..base.len() - 1].to_string());
    }
    if let Some(s) = base.strip_suffix('i') {
        stems.push(format!("{s}y"));
    }
    stems
}

impl PosTagger for BaselineTagger {
    fn tag_sentence(&self, words: &[String]) -> Result<TaggedSentence> {
        if words.is_empty() {
            return Err(Error::EmptySentence);
        }
        let pairs = words.iter().enumerate().map(|(i, w)| {
            let prev = if i > 0 {
                Some(words[i - 1].as_str())
            } else {
                None
            };
            (w.clone(), self.tag_word(w, i, prev))
        });
        Ok(TaggedSentence::new(pairs, SentenceId::default()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use PennTag::*;

    fn words(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    fn tags(tagger: &BaselineTagger, s: &str) -> Vec<PennTag> {
        tagger.tag_sentence(&words(s)).unwrap().tags()
    }

    #[test]
    fn pretagged_examples() {
        let ts = parse_pretagged("software/NN is/VBZ absolutely/RB terrible/JJ").unwrap();
        assert_eq!(ts.tags(), vec![NN, VBZ, RB, JJ]);
        assert_eq!(ts.tokens[3].surface, "terrible");
        assert_eq!(ts.tokens[3].index, 3);

        assert!(parse_pretagged("").unwrap().is_empty());
        assert_eq!(
            parse_pretagged("my/PRP$ camera/NN").unwrap().tags(),
            vec![PRPS, NN]
        );
        let ts = parse_pretagged("and/or/CC 1/2/CD").unwrap();
        assert_eq!(ts.tokens[0].surface, "and/or");
        assert_eq!(ts.tokens[1].surface, "1/2");
    }

    #[test]
    fn pretagged_errors_name_the_item() {
        match parse_pretagged("good/JJ camera/XX").unwrap_err() {
            Error::Pretagged { position, item, .. } => {
                assert_eq!(position, 1);
                assert_eq!(item, "camera/XX");
            }
            e => panic!("unexpected {e}"),
        }
        assert!(matches!(
            parse_pretagged("camera").unwrap_err(),
            Error::Pretagged { position: 0, .. }
        ));
        assert!(parse_pretagged("/NN").is_err());
    }

    #[test]
    fn baseline_examples() {
        let t = BaselineTagger::bundled();
        assert_eq!(tags(&t, "sound is wonderful"), vec![NN, VBZ, JJ]);
        assert_eq!(tags(&t, "absolutely"), vec![RB]);
        assert_eq!(tags(&t, "xyzzy"), vec![NN]);
        assert!(matches!(t.tag_sentence(&[]), Err(Error::EmptySentence)));
    }

    #[test]
    fn decision_order() {
        let mut lex = TagLexicon::default();
        lex.insert("nice", JJ);
        lex.insert("sharp", JJ);
        lex.insert("zap", VB);
        lex.insert("The", DT);
        let t = BaselineTagger::new(lex);
        // lexicon beats suffixes
        assert_eq!(tags(&t, "nice"), vec![JJ]);
        assert_eq!(tags(&t, "quirkly"), vec![RB]);
        assert_eq!(tags(&t, "quirkiest"), vec![JJS]);
        assert_eq!(tags(&t, "nicer"), vec![JJR]);
        assert_eq!(tags(&t, "blorper"), vec![NN]);
        assert_eq!(tags(&t, "blorping"), vec![VBG]);
        assert_eq!(tags(&t, "it blorped"), vec![NN, VBD]);
        assert_eq!(tags(&t, "is blorped"), vec![NN, VBN]);
        assert_eq!(tags(&t, "zaps"), vec![VBZ]);
        assert_eq!(tags(&t, "blorps"), vec![NNS]);
        assert_eq!(tags(&t, "razor-sharp"), vec![JJ]);
        assert_eq!(tags(&t, "my Zune"), vec![NN, NNP]);
        assert_eq!(tags(&t, "Zune"), vec![NN]);
        assert_eq!(tags(&t, "the 250"), vec![NN, CD]);
        assert_eq!(tags(&t, "The"), vec![DT]);
    }

    #[test]
    fn numeral_letter_tokens_fall_through_to_default() {
        // "5s" is neither a number nor long enough for the plural rule.
        let t = BaselineTagger::bundled();
        assert_eq!(tags(&t, "the 5s"), vec![DT, NN]);
    }

    #[test]
    fn lexicon_file_format() {
        let lex = TagLexicon::parse("# comment\ngreat\tJJ\nPRP$x\tPRP$\n").unwrap();
        assert_eq!(lex.len(), 2);
        assert_eq!(lex.get("great"), Some(JJ));
        assert_eq!(lex.get("Great"), None);
        assert!(TagLexicon::parse("great JJ\n").is_err());
        assert!(TagLexicon::parse("great\tADJ\n").is_err());
        assert!(TagLexicon::bundled().len() > 5000);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn tag() -> impl Strategy<Value = PennTag> {
            proptest::sample::select(PennTag::ALL)
        }

        proptest! {
            #[test]
            fn render_round_trips(items in proptest::collection::vec(("[A-Za-z0-9'/.$-]{1,8}", tag()), 0..12)) {
                let ts = TaggedSentence::new(items, SentenceId::default());
                prop_assert_eq!(parse_pretagged(&ts.render()).unwrap(), ts);
            }

            #[test]
            fn tagging_is_total(ws in proptest::collection::vec("[A-Za-z'-]{1,10}|[0-9]{1,3}|[.,!?]", 1..15)) {
                let t = BaselineTagger::bundled();
                let ts = t.tag_sentence(&ws).unwrap();
                prop_assert_eq!(ts.len(), ws.len());
                for (i, tok) in ts.tokens.iter().enumerate() {
                    prop_assert_eq!(tok.index, i);
                    prop_assert!(PennTag::ALL.contains(&tok.tag));
                }
            }
        }
    }
}
