//! Command-line surface: argument parsing, optional TOML config, validation
//! and dispatch of the five subcommands.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::corpus::{parse_corpus_file, Corpus};
use crate::error::{read_resource, Error, Result};
use crate::eval::{
    compare_to_baseline, evaluate_extraction, parse_report, EvalReport, MatchMode, ProductScores,
};
use crate::patterns::{mine_frequent_tag_sets, ExtractOptions, MAX_PATTERN_LEN};
use crate::pipeline::{analyze, data_dir, Analysis, PipelineOptions, ResourcePaths, Resources};
use crate::summary::{render, Format};

#[derive(Debug, Parser)]
#[command(
    name = "aspectminer",
    version,
    about = "Aspect-based opinion extraction and summarization"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Print each sentence as `word/TAG` items.
    Tag {
        /// Keep titles and gold annotations, producing a pretagged corpus file.
        #[arg(long)]
        annotated: bool,
    },
    /// Print frequent contiguous tag sequences: `tags<TAB>support<TAB>ratio`.
    Mine,
    /// Print pairs: `sentence_id<TAB>aspect<TAB>opinion<TAB>polarity<TAB>pattern`.
    Extract,
    /// Group, weight and summarize the extracted opinions.
    Summarize,
    /// Score extraction against gold annotations, one corpus per product.
    Evaluate,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Corpus file in the annotated review format. Repeatable for `evaluate`.
    #[arg(long, global = true)]
    pub corpus: Vec<PathBuf>,
    /// Product name per corpus; defaults to the file stem.
    #[arg(long, global = true)]
    pub product: Vec<String>,
    /// Sentences are `word/TAG` items rather than raw text.
    #[arg(long, global = true)]
    pub pretagged: bool,
    /// Separate gold file for `evaluate` (single corpus only).
    #[arg(long, global = true)]
    pub gold: Option<PathBuf>,
    /// Baseline report in the machine format, for `evaluate`.
    #[arg(long, global = true)]
    pub baseline: Option<PathBuf>,
    #[arg(long, global = true)]
    pub patterns: Option<PathBuf>,
    #[arg(long = "pos-lex", global = true)]
    pub pos_lex: Option<PathBuf>,
    #[arg(long = "neg-lex", global = true)]
    pub neg_lex: Option<PathBuf>,
    #[arg(long, global = true)]
    pub aspects: Option<PathBuf>,
    #[arg(long, global = true)]
    pub synonyms: Option<PathBuf>,
    #[arg(long, global = true)]
    pub verbs: Option<PathBuf>,
    #[arg(long = "tag-lexicon", global = true)]
    pub tag_lexicon: Option<PathBuf>,
    /// Sentences shown per polarity per group [default: 5].
    #[arg(long = "top-k", global = true)]
    pub top_k: Option<usize>,
    /// Minimum sentence support for `mine` [default: 2].
    #[arg(long = "min-support", global = true)]
    pub min_support: Option<usize>,
    /// Longest tag sequence for `mine` [default: 4].
    #[arg(long = "max-len", global = true)]
    pub max_len: Option<usize>,
    /// text, machine or histogram [default: text].
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Output file; `stdout` or absent writes to standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// TOML file supplying any of the options above; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Disable nearest-aspect search for sentences no pattern matched.
    #[arg(long = "no-fallback", global = true)]
    pub no_fallback: bool,
    /// Disable pair expansion across a coordinating conjunction.
    #[arg(long = "no-conjunction", global = true)]
    pub no_conjunction: bool,
}

/// Config file keys. Relative paths resolve against the file's directory.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub corpus: Option<Vec<PathBuf>>,
    pub product: Option<Vec<String>>,
    pub pretagged: Option<bool>,
    pub gold: Option<PathBuf>,
    pub baseline: Option<PathBuf>,
    pub data_dir: Option<PathBuf>,
    pub patterns: Option<PathBuf>,
    pub pos_lex: Option<PathBuf>,
    pub neg_lex: Option<PathBuf>,
    pub aspects: Option<PathBuf>,
    pub synonyms: Option<PathBuf>,
    pub verbs: Option<PathBuf>,
    pub tag_lexicon: Option<PathBuf>,
    pub top_k: Option<usize>,
    pub min_support: Option<usize>,
    pub max_len: Option<usize>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub fallback_search: Option<bool>,
    pub conjunction_expand: Option<bool>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = read_resource(path)?;
        let mut cfg: ConfigFile = toml::from_str(&text).map_err(|e| Error::Resource {
            resource: "config",
            line: 0,
            message: e.to_string(),
        })?;
        if let Some(base) = path.parent() {
            cfg.resolve_relative(base);
        }
        Ok(cfg)
    }

    fn resolve_relative(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for p in self.corpus.iter_mut().flatten() {
            fix(p);
        }
        for p in [
            &mut self.gold,
            &mut self.baseline,
            &mut self.data_dir,
            &mut self.patterns,
            &mut self.pos_lex,
            &mut self.neg_lex,
            &mut self.aspects,
            &mut self.synonyms,
            &mut self.verbs,
            &mut self.tag_lexicon,
            &mut self.out,
        ]
        .into_iter()
        .flatten()
        {
            fix(p);
        }
    }
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub corpus: Vec<PathBuf>,
    pub products: Vec<String>,
    pub gold: Option<PathBuf>,
    pub baseline: Option<PathBuf>,
    pub resources: ResourcePaths,
    pub top_k: usize,
    pub min_support: usize,
    pub max_len: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub use_pretagged: bool,
    pub enable_fallback_search: bool,
    pub enable_conjunction_expand: bool,
}

impl RunConfig {
    pub fn from_options(opts: &Options) -> Result<Self> {
        let cfg = match &opts.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let dir = cfg.data_dir.clone().unwrap_or_else(data_dir);
        let mut resources = ResourcePaths::in_dir(&dir);
        let pick = |flag: &Option<PathBuf>, file: &Option<PathBuf>, slot: &mut PathBuf| {
            if let Some(p) = flag.as_ref().or(file.as_ref()) {
                *slot = p.clone();
            }
        };
        pick(&opts.patterns, &cfg.patterns, &mut resources.patterns);
        pick(&opts.pos_lex, &cfg.pos_lex, &mut resources.positive);
        pick(&opts.neg_lex, &cfg.neg_lex, &mut resources.negative);
        pick(&opts.aspects, &cfg.aspects, &mut resources.aspects);
        pick(&opts.verbs, &cfg.verbs, &mut resources.verbs);
        pick(
            &opts.tag_lexicon,
            &cfg.tag_lexicon,
            &mut resources.tag_lexicon,
        );
        if let Some(p) = opts.synonyms.as_ref().or(cfg.synonyms.as_ref()) {
            resources.synonyms = Some(p.clone());
        }

        let corpus = if opts.corpus.is_empty() {
            cfg.corpus.unwrap_or_default()
        } else {
            opts.corpus.clone()
        };
        let products = if opts.product.is_empty() {
            cfg.product.unwrap_or_default()
        } else {
            opts.product.clone()
        };
        let format = match opts.format.as_ref().or(cfg.format.as_ref()) {
            Some(f) => f.parse()?,
            None => Format::Text,
        };
        let out = opts
            .out
            .clone()
            .or(cfg.out)
            .filter(|p| p.as_os_str() != "stdout" && p.as_os_str() != "-");

        let config = RunConfig {
            corpus,
            products,
            gold: opts.gold.clone().or(cfg.gold),
            baseline: opts.baseline.clone().or(cfg.baseline),
            resources,
            top_k: opts.top_k.or(cfg.top_k).unwrap_or(5),
            min_support: opts.min_support.or(cfg.min_support).unwrap_or(2),
            max_len: opts.max_len.or(cfg.max_len).unwrap_or(4),
            format,
            out,
            use_pretagged: opts.pretagged || cfg.pretagged.unwrap_or(false),
            enable_fallback_search: !opts.no_fallback && cfg.fallback_search.unwrap_or(true),
            enable_conjunction_expand: !opts.no_conjunction
                && cfg.conjunction_expand.unwrap_or(true),
        };
        config.validate()?;
        Ok(config)
    }

    /// Every referenced input exists; numeric settings are in range.
    pub fn validate(&self) -> Result<()> {
        if self.top_k < 1 {
            return Err(Error::InvalidArgument("--top-k must be at least 1".into()));
        }
        if self.min_support < 1 {
            return Err(Error::InvalidArgument(
                "--min-support must be at least 1".into(),
            ));
        }
        if !(2..=MAX_PATTERN_LEN).contains(&self.max_len) {
            return Err(Error::InvalidArgument(format!(
                "--max-len must be in 2..={MAX_PATTERN_LEN}"
            )));
        }
        if self.corpus.is_empty() {
            return Err(Error::InvalidArgument("--corpus is required".into()));
        }
        if !self.products.is_empty() && self.products.len() != self.corpus.len() {
            return Err(Error::InvalidArgument(format!(
                "{} --product names for {} corpora",
                self.products.len(),
                self.corpus.len()
            )));
        }
        let inputs = self
            .corpus
            .iter()
            .map(PathBuf::as_path)
            .chain(self.gold.as_deref())
            .chain(self.baseline.as_deref())
            .chain(self.resources.all());
        for path in inputs {
            if !path.exists() {
                return Err(Error::MissingResource(path.to_path_buf()));
            }
        }
        Ok(())
    }

    fn pipeline_options(&self) -> PipelineOptions {
        PipelineOptions {
            pretagged: self.use_pretagged,
            extract: ExtractOptions {
                fallback_search: self.enable_fallback_search,
                conjunction_expand: self.enable_conjunction_expand,
            },
        }
    }

    fn product_name(&self, i: usize) -> String {
        if let Some(name) = self.products.get(i) {
            return name.clone();
        }
        self.corpus[i]
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| format!("product{}", i + 1))
    }

    fn load_corpus(&self, i: usize) -> Result<Corpus> {
        Ok(parse_corpus_file(
            &read_resource(&self.corpus[i])?,
            &self.product_name(i),
        ))
    }

    fn single_corpus(&self, command: &str) -> Result<Corpus> {
        if self.corpus.len() != 1 {
            return Err(Error::InvalidArgument(format!(
                "{command} takes exactly one --corpus"
            )));
        }
        self.load_corpus(0)
    }
}

/// Parses arguments, runs the subcommand and writes its output to `--out`
/// or `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let config = RunConfig::from_options(&cli.options)?;
    let output = execute(cli.command, &config)?;
    match &config.out {
        Some(path) => fs::write(path, output).map_err(|e| Error::io(path, e)),
        None => stdout
            .write_all(output.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

/// The complete output of `command`.
pub fn execute(command: Command, config: &RunConfig) -> Result<String> {
    let res = Resources::load(&config.resources)?;
    let opts = config.pipeline_options();
    match command {
        Command::Tag { annotated } => {
            let a = analyze(config.single_corpus("tag")?, &res, opts)?;
            let mut out = String::new();
            for (sentence, tagged) in a.corpus.sentences.iter().zip(&a.tagged) {
                let line = if annotated {
                    sentence.render_line(&tagged.render())
                } else {
                    tagged.render()
                };
                out.push_str(&line);
                out.push('\n');
            }
            Ok(out)
        }
        Command::Mine => {
            let a = analyze(config.single_corpus("mine")?, &res, opts)?;
            let body: Vec<_> = a.body().cloned().collect();
            let mined = mine_frequent_tag_sets(&body, config.min_support, config.max_len)?;
            let mut out = String::new();
            for m in mined {
                let tags: Vec<&str> = m.tags.iter().map(|t| t.as_str()).collect();
                let _ = writeln!(
                    out,
                    "{}\t{}\t{:.6}",
                    tags.join(" "),
                    m.support,
                    m.support_ratio
                );
            }
            Ok(out)
        }
        Command::Extract => {
            let a = analyze(config.single_corpus("extract")?, &res, opts)?;
            Ok(render_pairs(&a))
        }
        Command::Summarize => {
            let a = analyze(config.single_corpus("summarize")?, &res, opts)?;
            Ok(render(&a.summarize(&res, config.top_k)?, config.format))
        }
        Command::Evaluate => evaluate(config, &res, opts),
    }
}

pub fn render_pairs(a: &Analysis) -> String {
    let mut out = String::new();
    for p in &a.pairs {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            p.sentence.0,
            p.aspect_surface,
            p.opinion_surface,
            p.orientation.as_str(),
            p.pattern_name
        );
    }
    out
}

fn evaluate(config: &RunConfig, res: &Resources, opts: PipelineOptions) -> Result<String> {
    if config.format == Format::Histogram {
        return Err(Error::InvalidArgument(
            "evaluate supports text and machine formats".into(),
        ));
    }
    if config.gold.is_some() && config.corpus.len() != 1 {
        return Err(Error::InvalidArgument(
            "--gold requires exactly one --corpus".into(),
        ));
    }
    let mut subset = Vec::new();
    let mut exact = Vec::new();
    for i in 0..config.corpus.len() {
        let corpus = config.load_corpus(i)?;
        let gold = match &config.gold {
            Some(path) => {
                let gold = parse_corpus_file(&read_resource(path)?, &corpus.product_name);
                check_alignment(&corpus, &gold)?;
                gold
            }
            None => corpus.clone(),
        };
        let a = analyze(corpus, res, opts)?;
        let name = &a.corpus.product_name;
        subset.push(ProductScores::from_scores(
            name,
            &evaluate_extraction(&a.pairs, &gold, MatchMode::Subset)?,
        ));
        exact.push(ProductScores::from_scores(
            name,
            &evaluate_extraction(&a.pairs, &gold, MatchMode::Exact)?,
        ));
    }
    let report = EvalReport::new(subset)?;
    let exact = EvalReport::new(exact)?;

    if config.format == Format::Machine {
        return Ok(report.render_machine());
    }

    let mut out = String::new();
    let _ = writeln!(out, "Products: {}", report.products().join(", "));
    let _ = writeln!(out, "\nToken-subset aspect matching\n");
    match &config.baseline {
        Some(path) => {
            let (baseline, mismatches) = parse_report(&read_resource(path)?)?;
            out.push_str(&compare_to_baseline(&report, &baseline)?.render());
            if !mismatches.is_empty() {
                let _ = writeln!(
                    out,
                    "\nBaseline F values inconsistent with its precision and recall:"
                );
                for m in mismatches {
                    let _ = writeln!(out, "  {m}");
                }
            }
        }
        None => out.push_str(&report.render_table()),
    }
    let _ = writeln!(out, "\nExact aspect matching\n");
    out.push_str(&exact.render_table());
    let _ = writeln!(out, "\nPer product (token-subset)\n");
    out.push_str(&report.render_machine());
    Ok(out)
}

/// A separate gold file must describe the same sentences as the corpus.
fn check_alignment(corpus: &Corpus, gold: &Corpus) -> Result<()> {
    if corpus.len() != gold.len() {
        return Err(Error::GoldMismatch(format!(
            "corpus has {} sentences, gold has {}",
            corpus.len(),
            gold.len()
        )));
    }
    if let Some(i) =
        (0..corpus.len()).find(|&i| corpus.sentences[i].is_title != gold.sentences[i].is_title)
    {
        return Err(Error::GoldMismatch(format!(
            "sentence {i} is a title in only one file"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("aspectminer").chain(args.iter().copied())).unwrap()
    }

    fn sample() -> String {
        format!("{}/data/sample_corpus.txt", env!("CARGO_MANIFEST_DIR"))
    }

    #[test]
    fn flags_after_subcommand() {
        let c = cli(&[
            "summarize",
            "--corpus",
            "x.txt",
            "--top-k",
            "3",
            "--pretagged",
        ]);
        assert_eq!(c.command, Command::Summarize);
        assert_eq!(c.options.top_k, Some(3));
        assert!(c.options.pretagged);
    }

    #[test]
    fn validation() {
        let err = RunConfig::from_options(&cli(&["extract"]).options).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        let err = RunConfig::from_options(&cli(&["extract", "--corpus", "/nope.txt"]).options)
            .unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let s = sample();
        let err =
            RunConfig::from_options(&cli(&["extract", "--corpus", &s, "--top-k", "0"]).options)
                .unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
        let err = RunConfig::from_options(
            &cli(&["extract", "--corpus", &s, "--min-support", "0"]).options,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
        let err =
            RunConfig::from_options(&cli(&["extract", "--corpus", &s, "--format", "xml"]).options)
                .unwrap_err();
        assert!(matches!(err, Error::UnknownFormat(_)));
        let cfg =
            RunConfig::from_options(&cli(&["extract", "--corpus", &s, "--out", "stdout"]).options)
                .unwrap();
        assert_eq!(cfg.out, None);
        assert_eq!(cfg.product_name(0), "sample_corpus");
    }

    #[test]
    fn config_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        fs::write(
            &path,
            format!(
                "corpus = [{:?}]\npretagged = true\ntop_k = 2\nfallback_search = false\n",
                sample()
            ),
        )
        .unwrap();
        let p = path.to_string_lossy().into_owned();
        let cfg =
            RunConfig::from_options(&cli(&["summarize", "--config", &p, "--top-k", "4"]).options)
                .unwrap();
        assert!(cfg.use_pretagged);
        assert_eq!(cfg.top_k, 4);
        assert!(!cfg.enable_fallback_search);

        fs::write(&path, "bogus = 1\n").unwrap();
        let err =
            RunConfig::from_options(&cli(&["summarize", "--config", &p]).options).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn extract_and_mine_output_shape() {
        let s = sample();
        let cfg =
            RunConfig::from_options(&cli(&["extract", "--corpus", &s, "--pretagged"]).options)
                .unwrap();
        let out = execute(Command::Extract, &cfg).unwrap();
        assert!(!out.is_empty());
        assert!(out.lines().all(|l| l.split('\t').count() == 5));

        let out = execute(Command::Mine, &cfg).unwrap();
        assert!(out.lines().all(|l| l.split('\t').count() == 3));
        assert!(out.lines().any(|l| l.starts_with("NN VBZ\t")));
    }
}
