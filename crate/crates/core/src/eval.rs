//! Precision, recall and F-measure of extracted pairs against gold
//! annotations, per-product reports, and paired comparison with a baseline.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::patterns::AspectOpinionPair;
use crate::stats::{paired_t_test, TTestResult};

/// Published figures are rounded to two decimals.
pub const F_TOLERANCE: f64 = 0.005;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatchMode {
    /// Equal surfaces, or the tokens of one are a subset of the other's.
    #[default]
    Subset,
    /// Equal lowercase surfaces only.
    Exact,
}

impl MatchMode {
    pub fn aspects_match(self, predicted: &str, gold: &str) -> bool {
        if predicted == gold {
            return true;
        }
        if self == MatchMode::Exact {
            return false;
        }
        let p: BTreeSet<&str> = predicted.split_whitespace().collect();
        let g: BTreeSet<&str> = gold.split_whitespace().collect();
        !p.is_empty() && !g.is_empty() && (p.is_subset(&g) || g.is_subset(&p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MatchCounts {
    pub matched_predicted: usize,
    pub predicted: usize,
    pub matched_gold: usize,
    pub gold: usize,
}

impl MatchCounts {
    /// Zero when nothing was predicted.
    pub fn precision(&self) -> f64 {
        ratio(self.matched_predicted, self.predicted)
    }

    /// Zero when there is no gold.
    pub fn recall(&self) -> f64 {
        ratio(self.matched_gold, self.gold)
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ExtractionScores {
    pub aspect: MatchCounts,
    pub opinion: MatchCounts,
}

impl ExtractionScores {
    pub fn aspect_p(&self) -> f64 {
        self.aspect.precision()
    }

    pub fn aspect_r(&self) -> f64 {
        self.aspect.recall()
    }

    pub fn opinion_p(&self) -> f64 {
        self.opinion.precision()
    }

    pub fn opinion_r(&self) -> f64 {
        self.opinion.recall()
    }
}

/// Scores `predicted` against the gold annotations of non-title sentences.
/// Pairs are identified by sentence index into `gold.sentences`; aspects are
/// compared on the raw lowercase text and opinions additionally on sign.
pub fn evaluate_extraction(
    predicted: &[AspectOpinionPair],
    gold: &Corpus,
    mode: MatchMode,
) -> Result<ExtractionScores> {
    let n = gold.sentences.len();
    let mut pred_aspects: BTreeMap<usize, BTreeSet<String>> = BTreeMap::new();
    let mut pred_opinions: BTreeMap<usize, BTreeSet<(String, i32)>> = BTreeMap::new();
    for pair in predicted {
        let s = pair.sentence.0;
        if s >= n {
            return Err(Error::UnknownSentence(s));
        }
        let aspect = pair.aspect_text.to_lowercase();
        pred_opinions
            .entry(s)
            .or_default()
            .insert((aspect.clone(), pair.orientation.sign()));
        pred_aspects.entry(s).or_default().insert(aspect);
    }

    let mut scores = ExtractionScores::default();
    let empty_a = BTreeSet::new();
    let empty_o = BTreeSet::new();
    for (s, sentence) in gold.sentences.iter().enumerate() {
        let pa = pred_aspects.get(&s).unwrap_or(&empty_a);
        let po = pred_opinions.get(&s).unwrap_or(&empty_o);
        let (ga, go): (BTreeSet<String>, BTreeSet<(String, i32)>) = if sentence.is_title {
            (BTreeSet::new(), BTreeSet::new())
        } else {
            let ga = sentence
                .gold
                .iter()
                .map(|g| g.aspect_term.to_lowercase())
                .collect();
            let go = sentence
                .gold
                .iter()
                .map(|g| (g.aspect_term.to_lowercase(), i32::from(g.strength.signum())))
                .collect();
            (ga, go)
        };

        let am = |p: &String, g: &String| mode.aspects_match(p, g);
        let om =
            |p: &(String, i32), g: &(String, i32)| p.1 == g.1 && mode.aspects_match(&p.0, &g.0);
        tally(&mut scores.aspect, pa, &ga, am);
        tally(&mut scores.opinion, po, &go, om);
    }
    Ok(scores)
}

fn tally<T>(
    counts: &mut MatchCounts,
    pred: &BTreeSet<T>,
    gold: &BTreeSet<T>,
    m: impl Fn(&T, &T) -> bool,
) {
    counts.predicted += pred.len();
    counts.gold += gold.len();
    counts.matched_predicted += pred.iter().filter(|p| gold.iter().any(|g| m(p, g))).count();
    counts.matched_gold += gold.iter().filter(|g| pred.iter().any(|p| m(p, g))).count();
}

/// Harmonic mean of precision and recall; 0 when both are 0.
pub fn f_measure(p: f64, r: f64) -> Result<f64> {
    for (name, v) in [("precision", p), ("recall", r)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidArgument(format!(
                "{name} {v} is outside [0, 1]"
            )));
        }
    }
    if p + r == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * p * r / (p + r))
}

/// A supplied F value that disagrees with the one recomputed from its
/// precision and recall by more than [`F_TOLERANCE`].
#[derive(Debug, Clone, PartialEq)]
pub struct FMismatch {
    pub label: String,
    pub precision: f64,
    pub recall: f64,
    pub supplied: f64,
    pub computed: f64,
}

impl std::fmt::Display for FMismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: supplied f = {:.3} but f({:.3}, {:.3}) = {:.3}",
            self.label, self.supplied, self.precision, self.recall, self.computed
        )
    }
}

pub fn check_f_measure(label: &str, p: f64, r: f64, supplied: f64) -> Result<Option<FMismatch>> {
    let computed = f_measure(p, r)?;
    if (computed - supplied).abs() > F_TOLERANCE {
        Ok(Some(FMismatch {
            label: label.to_string(),
            precision: p,
            recall: r,
            supplied,
            computed,
        }))
    } else {
        Ok(None)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductScores {
    pub product: String,
    pub aspect_p: f64,
    pub aspect_r: f64,
    pub aspect_f: f64,
    pub opinion_p: f64,
    pub opinion_r: f64,
    pub opinion_f: f64,
}

impl ProductScores {
    /// F values are always derived from `p` and `r`.
    pub fn new(
        product: &str,
        aspect_p: f64,
        aspect_r: f64,
        opinion_p: f64,
        opinion_r: f64,
    ) -> Result<Self> {
        Ok(ProductScores {
            product: product.to_string(),
            aspect_p,
            aspect_r,
            aspect_f: f_measure(aspect_p, aspect_r)?,
            opinion_p,
            opinion_r,
            opinion_f: f_measure(opinion_p, opinion_r)?,
        })
    }

    pub fn from_scores(product: &str, s: &ExtractionScores) -> Self {
        // fractions of counts are always in range
        Self::new(
            product,
            s.aspect_p(),
            s.aspect_r(),
            s.opinion_p(),
            s.opinion_r(),
        )
        .expect("count ratios lie in [0, 1]")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    /// Sorted by product name.
    pub per_product: Vec<ProductScores>,
    /// Mean precision and recall over products; F from the mean values.
    pub averages: ProductScores,
}

pub const AVERAGE_LABEL: &str = "average";
const MACHINE_HEADER: &str =
    "#product\taspect_p\taspect_r\taspect_f\topinion_p\topinion_r\topinion_f";

impl EvalReport {
    pub fn new(mut per_product: Vec<ProductScores>) -> Result<Self> {
        if per_product.is_empty() {
            return Err(Error::InvalidArgument(
                "report needs at least one product".into(),
            ));
        }
        per_product.sort_by(|a, b| a.product.cmp(&b.product));
        if let Some(w) = per_product
            .windows(2)
            .find(|w| w[0].product == w[1].product)
        {
            return Err(Error::InvalidArgument(format!(
                "duplicate product {:?}",
                w[0].product
            )));
        }
        let n = per_product.len() as f64;
        let mean = |f: fn(&ProductScores) -> f64| per_product.iter().map(f).sum::<f64>() / n;
        let averages = ProductScores::new(
            AVERAGE_LABEL,
            mean(|s| s.aspect_p),
            mean(|s| s.aspect_r),
            mean(|s| s.opinion_p),
            mean(|s| s.opinion_r),
        )?;
        Ok(EvalReport {
            per_product,
            averages,
        })
    }

    pub fn products(&self) -> Vec<&str> {
        self.per_product
            .iter()
            .map(|s| s.product.as_str())
            .collect()
    }

    /// Tab-separated rows, one per product, followed by the average row.
    /// Values use the shortest representation that parses back exactly.
    pub fn render_machine(&self) -> String {
        let mut out = String::from(MACHINE_HEADER);
        out.push('\n');
        for s in self
            .per_product
            .iter()
            .chain(std::iter::once(&self.averages))
        {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                s.product,
                s.aspect_p,
                s.aspect_r,
                s.aspect_f,
                s.opinion_p,
                s.opinion_r,
                s.opinion_f
            );
        }
        out
    }

    /// Three blocks (precision, recall, F-measure), one row per system.
    pub fn render_table(&self) -> String {
        render_blocks(&[("This system", &self.averages)])
    }
}

/// Parses the machine format. Lines starting with `#` and blank lines are
/// ignored, as is an `average` row. F columns may be `-`; supplied F values
/// are checked against the recomputed ones and returned as mismatches, while
/// the report keeps the recomputed values.
pub fn parse_report(content: &str) -> Result<(EvalReport, Vec<FMismatch>)> {
    let mut rows = Vec::new();
    let mut mismatches = Vec::new();
    for (i, line) in content.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 7 {
            return Err(Error::Report {
                line: line_no,
                message: format!("expected 7 tab-separated fields, found {}", fields.len()),
            });
        }
        if fields[0] == AVERAGE_LABEL {
            continue;
        }
        let num = |idx: usize| -> Result<Option<f64>> {
            let raw = fields[idx].trim();
            if raw == "-" {
                return Ok(None);
            }
            let v: f64 = raw.parse().map_err(|_| Error::Report {
                line: line_no,
                message: format!("not a number: {raw:?}"),
            })?;
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Report {
                    line: line_no,
                    message: format!("{v} is outside [0, 1]"),
                });
            }
            Ok(Some(v))
        };
        let required = |idx: usize| -> Result<f64> {
            num(idx)?.ok_or_else(|| Error::Report {
                line: line_no,
                message: "precision and recall cannot be omitted".into(),
            })
        };
        let product = fields[0].trim();
        let (ap, ar, op, or) = (required(1)?, required(2)?, required(4)?, required(5)?);
        if let Some(f) = num(3)? {
            mismatches.extend(check_f_measure(&format!("{product} aspect"), ap, ar, f)?);
        }
        if let Some(f) = num(6)? {
            mismatches.extend(check_f_measure(&format!("{product} opinion"), op, or, f)?);
        }
        rows.push(ProductScores::new(product, ap, ar, op, or)?);
    }
    Ok((EvalReport::new(rows)?, mismatches))
}

fn render_blocks(rows: &[(&str, &ProductScores)]) -> String {
    let width = rows.iter().map(|(n, _)| n.len()).max().unwrap_or(0).max(12);
    let mut out = String::new();
    type Column = fn(&ProductScores) -> (f64, f64);
    let blocks: [(&str, Column); 3] = [
        ("Average Precision", |s| (s.aspect_p, s.opinion_p)),
        ("Average Recall", |s| (s.aspect_r, s.opinion_r)),
        ("F-measure", |s| (s.aspect_f, s.opinion_f)),
    ];
    for (title, get) in blocks {
        let _ = writeln!(out, "{title}");
        let _ = writeln!(
            out,
            "{:width$}  {:>17}  {:>18}",
            "", "Aspect extraction", "Opinion extraction"
        );
        for (name, s) in rows {
            let (a, o) = get(s);
            let _ = writeln!(out, "{name:width$}  {a:>17.3}  {o:>18.3}");
        }
    }
    out
}

/// Which per-product vector a t-test compares.
pub const T_TEST_METRICS: [&str; 4] = [
    "aspect precision",
    "aspect recall",
    "opinion precision",
    "opinion recall",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub table: String,
    /// Two-tailed paired t-tests, system minus baseline, in
    /// [`T_TEST_METRICS`] order. Empty when fewer than two products.
    pub t_tests: Vec<(String, TTestResult)>,
}

impl Comparison {
    pub fn render(&self) -> String {
        let mut out = self.table.clone();
        if self.t_tests.is_empty() {
            out.push_str("\nPaired t-tests need at least two products.\n");
            return out;
        }
        out.push_str("\nPaired t-tests (this system minus baseline, two-tailed)\n");
        for (metric, t) in &self.t_tests {
            let note = if t.degenerate {
                "  (zero variance)"
            } else {
                ""
            };
            let _ = writeln!(
                out,
                "{metric:<18}  t = {:>9.4}  df = {}  p = {:.4}{note}",
                t.t_statistic, t.degrees_of_freedom, t.p_value
            );
        }
        out
    }
}

pub fn compare_to_baseline(report: &EvalReport, baseline: &EvalReport) -> Result<Comparison> {
    if report.products() != baseline.products() {
        return Err(Error::ReportMismatch(format!(
            "products differ: [{}] vs baseline [{}]",
            report.products().join(", "),
            baseline.products().join(", ")
        )));
    }
    let table = render_blocks(&[
        ("Baseline", &baseline.averages),
        ("This system", &report.averages),
    ]);
    let mut t_tests = Vec::new();
    if report.per_product.len() >= 2 {
        let getters: [fn(&ProductScores) -> f64; 4] = [
            |s| s.aspect_p,
            |s| s.aspect_r,
            |s| s.opinion_p,
            |s| s.opinion_r,
        ];
        for (metric, get) in T_TEST_METRICS.iter().zip(getters) {
            let a: Vec<f64> = report.per_product.iter().map(get).collect();
            let b: Vec<f64> = baseline.per_product.iter().map(get).collect();
            t_tests.push((metric.to_string(), paired_t_test(&a, &b, true)?));
        }
    }
    Ok(Comparison { table, t_tests })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_corpus_file;
    use crate::lexicons::Orientation;
    use crate::tagger::SentenceId;

    fn pair(sentence: usize, aspect: &str, orientation: Orientation) -> AspectOpinionPair {
        AspectOpinionPair {
            aspect_surface: aspect.to_string(),
            aspect_text: aspect.to_string(),
            opinion_surface: "x".into(),
            orientation,
            sentence: SentenceId(sentence),
            aspect_index: 0,
            aspect_span: (0, 1),
            opinion_index: 1,
            pattern_name: "t".into(),
        }
    }

    use Orientation::{Negative as Neg, Positive as Pos};

    #[test]
    fn exact_agreement() {
        let gold = parse_corpus_file("screen[+2],sound[-1]##s\n", "p");
        let pred = vec![pair(0, "screen", Pos), pair(0, "sound", Neg)];
        let s = evaluate_extraction(&pred, &gold, MatchMode::Subset).unwrap();
        assert_eq!(
            (s.aspect_p(), s.aspect_r(), s.opinion_p(), s.opinion_r()),
            (1.0, 1.0, 1.0, 1.0)
        );
    }

    #[test]
    fn set_arithmetic() {
        let gold = parse_corpus_file("b[+1],c[+1],d[+1]##s\n", "p");
        let pred = vec![pair(0, "a", Pos), pair(0, "b", Pos), pair(0, "c", Pos)];
        let s = evaluate_extraction(&pred, &gold, MatchMode::Exact).unwrap();
        assert_eq!(
            s.aspect,
            MatchCounts {
                matched_predicted: 2,
                predicted: 3,
                matched_gold: 2,
                gold: 3
            }
        );
        assert!((s.aspect_p() - 2.0 / 3.0).abs() < 1e-15);
        assert!((s.aspect_r() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn token_subset_and_sign() {
        let gold = parse_corpus_file("battery life[+2]##s\n", "p");
        let pred = vec![pair(0, "battery", Neg)];
        let s = evaluate_extraction(&pred, &gold, MatchMode::Subset).unwrap();
        assert_eq!((s.aspect_p(), s.aspect_r()), (1.0, 1.0));
        assert_eq!((s.opinion_p(), s.opinion_r()), (0.0, 0.0));
        let s = evaluate_extraction(&pred, &gold, MatchMode::Exact).unwrap();
        assert_eq!(s.aspect_p(), 0.0);
    }

    #[test]
    fn duplicates_collapse() {
        let gold = parse_corpus_file("screen[+2]##s\n", "p");
        let pred = vec![pair(0, "screen", Pos), pair(0, "Screen", Pos)];
        let s = evaluate_extraction(&pred, &gold, MatchMode::Subset).unwrap();
        assert_eq!(s.aspect.predicted, 1);
        assert_eq!(s.opinion.predicted, 1);
    }

    #[test]
    fn unknown_sentence() {
        let gold = parse_corpus_file("screen[+2]##s\n", "p");
        let err =
            evaluate_extraction(&[pair(3, "screen", Pos)], &gold, MatchMode::Subset).unwrap_err();
        assert!(matches!(err, Error::UnknownSentence(3)));
    }

    #[test]
    fn titles_carry_no_gold() {
        let gold = parse_corpus_file("[t]great screen\nscreen[+2]##s\n", "p");
        let s = evaluate_extraction(&[], &gold, MatchMode::Subset).unwrap();
        assert_eq!(s.aspect.gold, 1);
        assert_eq!((s.aspect_p(), s.aspect_r()), (0.0, 0.0));
    }

    #[test]
    fn f_measure_values() {
        assert!((f_measure(0.70, 0.79).unwrap() - 0.742).abs() < 0.001);
        assert!((f_measure(0.99, 0.64).unwrap() - 0.777).abs() < 0.001);
        assert_eq!(f_measure(0.0, 0.0).unwrap(), 0.0);
        assert!(f_measure(1.2, 0.5).is_err());
        assert!(f_measure(0.5, -0.1).is_err());
        assert!(f_measure(f64::NAN, 0.5).is_err());
    }

    #[test]
    fn mismatch_detector() {
        let m = check_f_measure("opinion", 0.56, 0.61, 0.60)
            .unwrap()
            .unwrap();
        assert!((m.computed - 0.584).abs() < 0.001);
        assert!(check_f_measure("aspect", 0.70, 0.79, 0.74)
            .unwrap()
            .is_none());
        // 0.7774 sits 0.0074 from a two-decimal 0.77
        let m = check_f_measure("aspect", 0.99, 0.64, 0.77)
            .unwrap()
            .unwrap();
        assert!((m.computed - 0.7774).abs() < 1e-4);
    }

    fn report(rows: &[(&str, f64, f64, f64, f64)]) -> EvalReport {
        EvalReport::new(
            rows.iter()
                .map(|&(n, a, b, c, d)| ProductScores::new(n, a, b, c, d).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn report_round_trip() {
        let r = report(&[
            ("nokia", 0.9, 0.6, 0.5, 0.55),
            ("canon", 0.8, 0.7, 0.6, 0.65),
        ]);
        assert_eq!(r.products(), vec!["canon", "nokia"]);
        assert!((r.averages.aspect_p - 0.85).abs() < 1e-12);
        let (parsed, mismatches) = parse_report(&r.render_machine()).unwrap();
        assert!(mismatches.is_empty());
        assert_eq!(parsed.products(), r.products());
        assert_eq!(parsed, r);
    }

    #[test]
    fn parse_flags_inconsistent_f() {
        let text = "#published\nall\t0.56\t0.61\t0.60\t0.99\t0.64\t-\n";
        let (r, mismatches) = parse_report(text).unwrap();
        assert_eq!(mismatches.len(), 1);
        assert!((r.per_product[0].aspect_f - 0.584).abs() < 0.001);
        assert!(parse_report("x\t1\t2\n").is_err());
        assert!(parse_report("x\t1.5\t0\t-\t0\t0\t-\n").is_err());
        assert!(parse_report("x\t-\t0\t-\t0\t0\t-\n").is_err());
    }

    #[test]
    fn table_layout() {
        let table = report(&[("all", 0.99, 0.64, 0.56, 0.61)]).render_table();
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 9);
        assert_eq!(lines[0], "Average Precision");
        assert!(
            lines[2].starts_with("This system") && lines[2].ends_with("0.990               0.560")
        );
        assert_eq!(lines[6], "F-measure");
    }

    #[test]
    fn comparison() {
        let base = report(&[
            ("a", 0.7, 0.8, 0.6, 0.7),
            ("b", 0.6, 0.7, 0.5, 0.6),
            ("c", 0.8, 0.9, 0.7, 0.8),
        ]);
        let same = compare_to_baseline(&base, &base).unwrap();
        assert_eq!(same.t_tests.len(), 4);
        assert!(same
            .t_tests
            .iter()
            .all(|(_, t)| t.degenerate && t.p_value == 1.0));
        assert!(same.render().contains("Baseline"));

        let other = report(&[("a", 0.7, 0.8, 0.6, 0.7)]);
        assert!(matches!(
            compare_to_baseline(&other, &base),
            Err(Error::ReportMismatch(_))
        ));

        let single = compare_to_baseline(&other, &other).unwrap();
        assert!(single.t_tests.is_empty());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn f_symmetric_and_bounded(p in 0.0f64..=1.0, r in 0.0f64..=1.0) {
                let f = f_measure(p, r).unwrap();
                prop_assert_eq!(f, f_measure(r, p).unwrap());
                prop_assert!(f <= p.max(r) + 1e-15 && f >= p.min(r) - 1e-15 || p + r == 0.0);
                prop_assert!((f_measure(p, p).unwrap() - p).abs() < 1e-15);
            }

            #[test]
            fn adding_predictions(extra_correct in any::<bool>(), n_gold in 1usize..5) {
                let names = ["screen", "sound", "menu", "price", "size"];
                let line: Vec<String> = names[..n_gold].iter().map(|n| format!("{n}[+1]")).collect();
                let gold = parse_corpus_file(&format!("{}##s\n", line.join(",")), "p");
                let base = vec![pair(0, names[0], Pos)];
                let before = evaluate_extraction(&base, &gold, MatchMode::Subset).unwrap();
                let mut more = base.clone();
                if extra_correct {
                    more.push(pair(0, names[n_gold - 1], Pos));
                } else {
                    more.push(pair(0, "warranty", Pos));
                }
                let after = evaluate_extraction(&more, &gold, MatchMode::Subset).unwrap();
                prop_assert!(after.aspect_r() >= before.aspect_r());
                if !extra_correct {
                    prop_assert!(after.aspect_p() <= before.aspect_p());
                }
            }
        }
    }
}
