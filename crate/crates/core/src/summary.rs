//! Pros/cons summaries and their text, histogram and machine renderings.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grouping::AspectGroup;
use crate::lexicons::Orientation;
use crate::patterns::AspectOpinionPair;
use crate::scoring::{rank_sentences, ScoreMap};
use crate::tagger::SentenceId;

/// Width of a 100% histogram bar.
pub const BAR_COLUMNS: usize = 50;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummarySentence {
    pub sentence: SentenceId,
    pub weight: i32,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSummary {
    pub label: String,
    pub pros: Vec<SummarySentence>,
    pub cons: Vec<SummarySentence>,
    pub positive_count: usize,
    pub negative_count: usize,
}

impl GroupSummary {
    pub fn total(&self) -> usize {
        self.positive_count + self.negative_count
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Overall {
    pub positive_count: usize,
    pub negative_count: usize,
    pub positive_pct: u32,
    pub negative_pct: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summary {
    pub product_name: String,
    pub groups: Vec<GroupSummary>,
    pub overall: Overall,
}

/// Integer percentages that sum to 100: the positive share is rounded half
/// up and the negative share is its complement. Both are 0 with no pairs.
pub fn percentages(positive: usize, negative: usize) -> (u32, u32) {
    let total = positive + negative;
    if total == 0 {
        return (0, 0);
    }
    // round(100 * p / t) half up, in integers
    let pos = ((200 * positive + total) / (2 * total)) as u32;
    (pos, 100 - pos)
}

/// Bar length for a percentage: `round(pct / 2)`, half up.
pub fn bar_length(pct: u32) -> usize {
    (pct.min(100) as usize).div_ceil(2)
}

/// Builds the summary. `texts` is indexed by sentence id.
pub fn generate_summary(
    product_name: &str,
    groups: &[AspectGroup],
    pairs: &[AspectOpinionPair],
    scores: &ScoreMap,
    texts: &[String],
    k: usize,
) -> Result<Summary> {
    let mut out = Vec::with_capacity(groups.len());
    let (mut all_pos, mut all_neg) = (0, 0);

    for group in groups {
        let mut pos_sentences = BTreeSet::new();
        let mut neg_sentences = BTreeSet::new();
        let (mut pos, mut neg) = (0, 0);
        for &i in &group.pairs {
            let p = &pairs[i];
            match p.orientation {
                Orientation::Positive => {
                    pos += 1;
                    pos_sentences.insert(p.sentence);
                }
                Orientation::Negative => {
                    neg += 1;
                    neg_sentences.insert(p.sentence);
                }
            }
        }
        all_pos += pos;
        all_neg += neg;

        let pick = |set: &BTreeSet<SentenceId>| -> Result<Vec<SummarySentence>> {
            Ok(rank_sentences(set, scores, k)?
                .into_iter()
                .map(|id| SummarySentence {
                    sentence: id,
                    weight: scores.get(&id).map_or(0, |s| s.total),
                    text: texts.get(id.0).cloned().unwrap_or_default(),
                })
                .collect())
        };
        out.push(GroupSummary {
            label: group.canonical_label.clone(),
            pros: pick(&pos_sentences)?,
            cons: pick(&neg_sentences)?,
            positive_count: pos,
            negative_count: neg,
        });
    }

    out.sort_by(|a, b| {
        b.total()
            .cmp(&a.total())
            .then_with(|| a.label.cmp(&b.label))
    });
    let (positive_pct, negative_pct) = percentages(all_pos, all_neg);
    Ok(Summary {
        product_name: product_name.to_string(),
        groups: out,
        overall: Overall {
            positive_count: all_pos,
            negative_count: all_neg,
            positive_pct,
            negative_pct,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Machine,
    Histogram,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "machine" => Ok(Format::Machine),
            "histogram" => Ok(Format::Histogram),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

pub fn render(summary: &Summary, format: Format) -> String {
    let mut out = match format {
        Format::Text => render_text(summary),
        Format::Machine => render_machine(summary),
        Format::Histogram => render_histogram(summary),
    };
    while out.ends_with('\n') {
        out.pop();
    }
    out.push('\n');
    out
}

fn one_line(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn render_text(s: &Summary) -> String {
    let mut out = String::new();
    let o = &s.overall;
    writeln!(out, "Summary: {}", s.product_name).unwrap();
    writeln!(
        out,
        "Overall: {}% positive, {}% negative ({} positive, {} negative opinions)",
        o.positive_pct, o.negative_pct, o.positive_count, o.negative_count
    )
    .unwrap();
    for g in &s.groups {
        writeln!(out).unwrap();
        writeln!(
            out,
            "== {} ({} positive, {} negative) ==",
            g.label, g.positive_count, g.negative_count
        )
        .unwrap();
        for (heading, list) in [("Pros", &g.pros), ("Cons", &g.cons)] {
            if list.is_empty() {
                continue;
            }
            writeln!(out, "{heading}:").unwrap();
            for item in list {
                writeln!(out, "  [{}] {}", item.weight, one_line(&item.text)).unwrap();
            }
        }
    }
    out
}

fn bar_lines(out: &mut String, positive_pct: u32, negative_pct: u32) {
    for (sign, pct) in [('+', positive_pct), ('-', negative_pct)] {
        let bar: String = std::iter::repeat_n(sign, bar_length(pct)).collect();
        writeln!(
            out,
            "  {sign} [{bar:<width$}] {pct:>3}%",
            width = BAR_COLUMNS
        )
        .unwrap();
    }
}

fn render_histogram(s: &Summary) -> String {
    let mut out = String::new();
    writeln!(out, "overall").unwrap();
    bar_lines(&mut out, s.overall.positive_pct, s.overall.negative_pct);
    for g in &s.groups {
        let (p, n) = percentages(g.positive_count, g.negative_count);
        writeln!(out, "{}", g.label).unwrap();
        bar_lines(&mut out, p, n);
    }
    out
}

fn render_machine(s: &Summary) -> String {
    let mut out = String::new();
    let o = &s.overall;
    writeln!(
        out,
        "product\t{}\t{}\t{}",
        one_line(&s.product_name),
        o.positive_pct,
        o.negative_pct
    )
    .unwrap();
    for g in &s.groups {
        writeln!(
            out,
            "group\t{}\t{}\t{}",
            g.label, g.positive_count, g.negative_count
        )
        .unwrap();
        for (polarity, list) in [("positive", &g.pros), ("negative", &g.cons)] {
            for item in list {
                writeln!(
                    out,
                    "sentence\t{}\t{}\t{}\t{}",
                    g.label,
                    polarity,
                    item.weight,
                    one_line(&item.text)
                )
                .unwrap();
            }
        }
    }
    out
}
