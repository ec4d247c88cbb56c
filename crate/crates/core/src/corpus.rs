//! Review corpora in the annotated customer-review format.
//!
//! Each line of a corpus file is one of:
//!
//! ```text
//! [t]<title>
//! <annot>{,<annot>}##<sentence>
//! ##<sentence>
//! ```
//!
//! where `<annot>` is `term[+d]` or `term[-d]` (`d` in 1..=3) optionally
//! followed by bracketed qualifier flags such as `[u]` or `[cs]`. Blank lines
//! and lines matching none of the forms (file headers) are skipped.

use std::collections::BTreeSet;
use std::fmt;

/// Qualifier flags attached to a gold annotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AnnotationFlag {
    /// `[u]`: the aspect is not named in the sentence.
    NotInSentence,
    /// `[p]`: the aspect is referenced through a pronoun.
    Pronoun,
    /// `[s]`: the sentence is a suggestion.
    Suggestion,
    /// `[cc]`: comparison with a competing product.
    CompetitorComparison,
    /// `[cs]`: comparison with another model of the same product.
    SameProductComparison,
}

impl AnnotationFlag {
    pub fn from_code(code: &str) -> Option<Self> {
        match code {
            "u" => Some(AnnotationFlag::NotInSentence),
            "p" => Some(AnnotationFlag::Pronoun),
            "s" => Some(AnnotationFlag::Suggestion),
            "cc" => Some(AnnotationFlag::CompetitorComparison),
            "cs" => Some(AnnotationFlag::SameProductComparison),
            _ => None,
        }
    }

    pub fn code(self) -> &'static str {
        match self {
            AnnotationFlag::NotInSentence => "u",
            AnnotationFlag::Pronoun => "p",
            AnnotationFlag::Suggestion => "s",
            AnnotationFlag::CompetitorComparison => "cc",
            AnnotationFlag::SameProductComparison => "cs",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldAnnotation {
    pub aspect_term: String,
    /// Signed opinion strength in `-3..=3`, never zero.
    pub strength: i8,
    pub flags: BTreeSet<AnnotationFlag>,
}

impl fmt::Display for GoldAnnotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{:+}]", self.aspect_term, self.strength)?;
        for flag in &self.flags {
            write!(f, "[{}]", flag.code())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReviewSentence {
    pub review_id: usize,
    pub sentence_index: usize,
    pub raw_text: String,
    pub gold: Vec<GoldAnnotation>,
    pub is_title: bool,
}

impl ReviewSentence {
    /// Renders the sentence back into corpus-line form with `text` as its body.
    pub fn render_line(&self, text: &str) -> String {
        if self.is_title {
            return format!("[t]{text}");
        }
        let annots: Vec<String> = self.gold.iter().map(ToString::to_string).collect();
        format!("{}##{}", annots.join(","), text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub product_name: String,
    pub sentences: Vec<ReviewSentence>,
}

impl Corpus {
    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }
}

/// A recoverable problem found while parsing a corpus file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWarning {
    /// 1-based line number.
    pub line: usize,
    pub message: String,
}

/// Parses a corpus file, logging recoverable problems at `warn` level.
pub fn parse_corpus_file(content: &str, product_name: &str) -> Corpus {
    let (corpus, warnings) = parse_corpus_with_warnings(content, product_name);
    for w in &warnings {
        log::warn!("{product_name} line {}: {}", w.line, w.message);
    }
    corpus
}

pub fn parse_corpus_with_warnings(
    content: &str,
    product_name: &str,
) -> (Corpus, Vec<ParseWarning>) {
    let mut sentences = Vec::new();
    let mut warnings = Vec::new();
    let mut review_id = 0usize;
    let mut next_index = 0usize;

    for (lineno, line) in content.lines().enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() {
            continue;
        }

        if let Some(title) = line.strip_prefix("[t]") {
            if next_index > 0 {
                review_id += 1;
                next_index = 0;
            }
            sentences.push(ReviewSentence {
                review_id,
                sentence_index: next_index,
                raw_text: title.trim().to_string(),
                gold: Vec::new(),
                is_title: true,
            });
            next_index += 1;
            continue;
        }

        let Some((annots, text)) = line.split_once("##") else {
            log::debug!("skipping non-sentence line {}", lineno + 1);
            continue;
        };

        let gold = match parse_annotations(annots) {
            Ok(gold) => gold,
            Err(message) => {
                warnings.push(ParseWarning {
                    line: lineno + 1,
                    message,
                });
                Vec::new()
            }
        };
        sentences.push(ReviewSentence {
            review_id,
            sentence_index: next_index,
            raw_text: text.trim().to_string(),
            gold,
            is_title: false,
        });
        next_index += 1;
    }

    (
        Corpus {
            product_name: product_name.to_string(),
            sentences,
        },
        warnings,
    )
}

fn parse_annotations(segment: &str) -> Result<Vec<GoldAnnotation>, String> {
    if segment.trim().is_empty() {
        return Ok(Vec::new());
    }
    segment.split(',').map(parse_annotation).collect()
}

fn parse_annotation(item: &str) -> Result<GoldAnnotation, String> {
    let item = item.trim();
    let open = item
        .find('[')
        .ok_or_else(|| format!("annotation {item:?} has no [strength] bracket"))?;
    let term = item[..open].trim();
    if term.is_empty() {
        return Err(format!("annotation {item:?} has an empty aspect term"));
    }

    let mut strength = None;
    let mut flags = BTreeSet::new();
    let mut rest = &item[open..];
    while !rest.is_empty() {
        let body_end = rest
            .find(']')
            .ok_or_else(|| format!("unclosed bracket in {item:?}"))?;
        if !rest.starts_with('[') {
            return Err(format!("unexpected text {rest:?} in {item:?}"));
        }
        let body = &rest[1..body_end];
        rest = rest[body_end + 1..].trim_start();

        if body.starts_with('+') || body.starts_with('-') {
            let value: i8 = body
                .parse()
                .map_err(|_| format!("bad strength [{body}] in {item:?}"))?;
            if value == 0 || !(-3..=3).contains(&value) {
                return Err(format!("strength [{body}] out of range in {item:?}"));
            }
            if strength.replace(value).is_some() {
                return Err(format!("two strengths in {item:?}"));
            }
        } else if let Some(flag) = AnnotationFlag::from_code(body) {
            flags.insert(flag);
        } else {
            log::debug!("ignoring unknown annotation flag [{body}]");
        }
    }

    let strength = strength.ok_or_else(|| format!("annotation {item:?} has no strength"))?;
    Ok(GoldAnnotation {
        aspect_term: term.to_string(),
        strength,
        flags,
    })
}

/// A word token with its byte offset into the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordToken<'a> {
    pub text: &'a str,
    pub offset: usize,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '\''
}

/// Splits text into maximal runs of letters, digits and apostrophes; every
/// other non-whitespace character becomes a token of its own. Case is kept.
pub fn tokenize(raw_text: &str) -> Vec<WordToken<'_>> {
    let mut tokens = Vec::new();
    let mut word_start: Option<usize> = None;

    for (i, c) in raw_text.char_indices() {
        if is_word_char(c) {
            word_start.get_or_insert(i);
            continue;
        }
        if let Some(start) = word_start.take() {
            tokens.push(WordToken {
                text: &raw_text[start..i],
                offset: start,
            });
        }
        if !c.is_whitespace() {
            tokens.push(WordToken {
                text: &raw_text[i..i + c.len_utf8()],
                offset: i,
            });
        }
    }
    if let Some(start) = word_start {
        tokens.push(WordToken {
            text: &raw_text[start..],
            offset: start,
        });
    }
    tokens
}

/// Rejoins `word - word` sequences written without spaces ("razor-sharp")
/// into one compound, so the tagger can apply its hyphen-compound rule.
pub fn join_hyphen_compounds(raw_text: &str, tokens: &[WordToken<'_>]) -> Vec<String> {
    let mut out: Vec<String> = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        let mut end = i;
        while end + 2 < tokens.len()
            && tokens[end + 1].text == "-"
            && adjacent(&tokens[end], &tokens[end + 1])
            && adjacent(&tokens[end + 1], &tokens[end + 2])
            && tokens[end].text.chars().all(is_word_char)
            && tokens[end + 2].text.chars().all(is_word_char)
        {
            end += 2;
        }
        let start = tokens[i].offset;
        let stop = tokens[end].offset + tokens[end].text.len();
        out.push(raw_text[start..stop].to_string());
        i = end + 1;
    }
    out
}

fn adjacent(a: &WordToken<'_>, b: &WordToken<'_>) -> bool {
    a.offset + a.text.len() == b.offset
}
