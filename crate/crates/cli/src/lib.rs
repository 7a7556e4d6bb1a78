//! The `cnr` command line, callable in-process through [`run`].
//!
//! Exit codes: 0 success, 1 usage error, 2 nothing could be extracted,
//! 3 input, fetch or output failure.

mod input;

use std::collections::HashMap;
use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use cnr_core::blocks::{link_stats, MenuConfig};
use cnr_core::dom::parse_str;
use cnr_core::extract::{plain_text, NodeReport};
use cnr_core::{
    annotate, detect_menus, enumerate_blocks, expand, extract_main, render, run_corpus, shrink, AnnotatedTree,
    ClassifierConfig, DomTree, Error, NodeId, RenderFormat, SelectionConfig,
};

pub use input::{decode, Source};

/// Environment variable naming a non-content tag list file.
pub const NONCONTENT_TAGS_ENV: &str = "CNR_NONCONTENT_TAGS";

#[derive(Parser, Debug)]
#[command(name = "cnr", version, about = "Extract the main content of HTML pages by text density")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the main content block.
    Extract {
        #[command(flatten)]
        doc: DocArgs,
        /// Output format: text, html or json.
        #[arg(long, default_value = "text", value_parser = parse_format)]
        format: RenderFormat,
        /// Widen the result to its N-th ancestor.
        #[arg(long, default_value_t = 0, value_name = "N")]
        expand: usize,
        /// Narrow the result N times to its densest child.
        #[arg(long, default_value_t = 0, value_name = "N")]
        shrink: usize,
    },
    /// Print weight, text length and CNR of every node, in document order.
    Annotate {
        #[command(flatten)]
        doc: DocArgs,
    },
    /// List the top K disjoint content blocks, best first.
    Blocks {
        #[command(flatten)]
        doc: DocArgs,
        #[arg(long, default_value_t = 3, value_name = "N", value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        /// Output format: json, text or html.
        #[arg(long, default_value = "json", value_parser = parse_format)]
        format: RenderFormat,
    },
    /// Score extraction over a corpus directory holding gold.json.
    Eval {
        dir: PathBuf,
        #[command(flatten)]
        tuning: Tuning,
        /// Emit a CSV table instead of JSON lines.
        #[arg(long)]
        csv: bool,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Experimental: list link-dense regions such as menus.
    Menus {
        #[command(flatten)]
        doc: DocArgs,
    },
}

#[derive(Args, Debug)]
struct DocArgs {
    /// File path, http(s) URL, or `-` for standard input.
    input: String,
    #[command(flatten)]
    tuning: Tuning,
    /// Fetch timeout for URL inputs.
    #[arg(long, default_value_t = 30, value_name = "SECS")]
    timeout: u64,
    /// Write output to FILE instead of standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Tuning {
    /// Fraction of candidate nodes ranked below the selection threshold.
    #[arg(long, default_value_t = SelectionConfig::default().quantile)]
    quantile: f64,
    /// Minimum number of seed nodes.
    #[arg(long, default_value_t = SelectionConfig::default().min_candidates, value_name = "N")]
    min_candidates: usize,
    /// File listing non-content tags, one per line.
    #[arg(long, value_name = "FILE")]
    noncontent_tags: Option<PathBuf>,
}

fn parse_format(s: &str) -> Result<RenderFormat, String> {
    s.parse()
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Extraction(String),
    Io(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Extraction(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Extraction(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::InvalidConfig(_) | Error::InvalidPath { .. } => Failure::Usage(msg),
            Error::Io { .. } | Error::Manifest(_) | Error::Json(_) => Failure::Io(msg),
            _ => Failure::Extraction(msg),
        }
    }
}

impl Tuning {
    fn selection(&self) -> Result<SelectionConfig, Failure> {
        let config = SelectionConfig { quantile: self.quantile, min_candidates: self.min_candidates };
        config.validate()?;
        Ok(config)
    }

    /// `--noncontent-tags` first, then the environment, then the defaults.
    fn classifier(&self, env: &HashMap<String, String>) -> Result<ClassifierConfig, Failure> {
        let path = self.noncontent_tags.clone().or_else(|| env.get(NONCONTENT_TAGS_ENV).map(PathBuf::from));
        match path {
            None => Ok(ClassifierConfig::default()),
            Some(path) => {
                let text = std::fs::read_to_string(&path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                Ok(ClassifierConfig::from_tag_list(&text)?)
            }
        }
    }
}

struct Loaded {
    tree: DomTree,
    classifier: ClassifierConfig,
    selection: SelectionConfig,
}

impl DocArgs {
    fn load(&self, env: &HashMap<String, String>, stdin: &mut dyn Read) -> Result<Loaded, Failure> {
        let selection = self.tuning.selection()?;
        let classifier = self.tuning.classifier(env)?;
        let text = input::load(&Source::parse(&self.input), stdin, Duration::from_secs(self.timeout))?;
        Ok(Loaded { tree: parse_str(&text)?, classifier, selection })
    }
}

#[derive(serde::Serialize)]
struct RankedBlock {
    rank: usize,
    #[serde(flatten)]
    node: NodeReport,
    text: String,
}

#[derive(serde::Serialize)]
#[serde(rename_all = "camelCase")]
struct MenuReport {
    node_id: NodeId,
    path: String,
    tag: String,
    weight: u64,
    links: u64,
    lnr: f64,
    chars_per_link: f64,
    text: String,
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value).map_err(|e| Failure::Io(e.to_string()))
}

fn extract(at: &AnnotatedTree, selection: &SelectionConfig, up: usize, down: usize) -> Result<NodeId, Failure> {
    if up > 0 && down > 0 {
        return Err(Failure::Usage("--expand and --shrink cannot both be positive".into()));
    }
    let mut node = extract_main(at, selection)?;
    for _ in 0..up {
        node = expand(at.tree(), node)?;
    }
    for _ in 0..down {
        node = shrink(at, node)?;
    }
    Ok(node)
}

fn list_blocks(at: &AnnotatedTree, blocks: &[NodeId], format: RenderFormat) -> Result<String, Failure> {
    match format {
        RenderFormat::JsonReport => {
            let ranked = blocks
                .iter()
                .enumerate()
                .map(|(i, &b)| {
                    Ok(RankedBlock { rank: i + 1, node: NodeReport::new(at, b)?, text: plain_text(at, b, false)? })
                })
                .collect::<Result<Vec<_>, Error>>()?;
            to_json(&ranked)
        }
        _ => {
            let parts = blocks
                .iter()
                .enumerate()
                .map(|(i, &b)| Ok(format!("[{}] {}\n{}", i + 1, at.tree().path(b)?, render(at, b, format)?)))
                .collect::<Result<Vec<_>, Error>>()?;
            Ok(parts.join("\n\n"))
        }
    }
}

fn menus(tree: &DomTree) -> Result<String, Failure> {
    let config = MenuConfig::default();
    let stats = link_stats(tree, &config);
    let at = annotate(tree, &config.classifier);
    let reports = detect_menus(tree, &config)?
        .iter()
        .map(|n| {
            let s = stats[n.index()];
            Ok(MenuReport {
                node_id: n,
                path: tree.path(n)?,
                tag: tree.tag(n).unwrap_or("#text").to_string(),
                weight: s.weight,
                links: s.links,
                lnr: s.lnr(),
                chars_per_link: s.chars_per_link(),
                text: plain_text(&at, n, false)?,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    to_json(&reports)
}

/// Run one command; returns the output text and where it should go.
fn execute(
    command: Command,
    env: &HashMap<String, String>,
    stdin: &mut dyn Read,
) -> Result<(String, Option<PathBuf>), Failure> {
    match command {
        Command::Extract { doc, format, expand, shrink } => {
            let l = doc.load(env, stdin)?;
            let at = annotate(&l.tree, &l.classifier);
            let node = extract(&at, &l.selection, expand, shrink)?;
            Ok((render(&at, node, format)?, doc.out))
        }
        Command::Annotate { doc } => {
            let l = doc.load(env, stdin)?;
            let at = annotate(&l.tree, &l.classifier);
            let reports = l.tree.ids().map(|n| NodeReport::new(&at, n)).collect::<Result<Vec<_>, Error>>()?;
            Ok((to_json(&reports)?, doc.out))
        }
        Command::Blocks { doc, k, format } => {
            let l = doc.load(env, stdin)?;
            let at = annotate(&l.tree, &l.classifier);
            let blocks = enumerate_blocks(&at, &l.selection, k as usize)?;
            Ok((list_blocks(&at, &blocks, format)?, doc.out))
        }
        Command::Eval { dir, tuning, csv, out } => {
            let report = run_corpus(&dir, &tuning.classifier(env)?, &tuning.selection()?)?;
            let mut buf = Vec::new();
            let written = if csv { report.write_csv(&mut buf) } else { report.write_jsonl(&mut buf) };
            written.map_err(|e| Failure::Io(e.to_string()))?;
            let text = String::from_utf8(buf).expect("reports are UTF-8");
            Ok((text.trim_end().to_string(), out))
        }
        Command::Menus { doc } => {
            let l = doc.load(env, stdin)?;
            Ok((menus(&l.tree)?, doc.out))
        }
    }
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), Failure> {
    let mut body = text.to_string();
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match out {
        Some(path) => std::fs::write(path, body).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => stdout.write_all(body.as_bytes()).map_err(|e| Failure::Io(format!("writing output: {e}"))),
    }
}

/// Parse `args` (program name first), run the command and return the exit
/// code. Nothing is printed outside `stdout` and `stderr`.
pub fn run<I, T>(
    args: I,
    env: &HashMap<String, String>,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            // --help and --version are not errors
            if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                return 1;
            }
            let _ = stdout.write_all(text.as_bytes());
            return 0;
        }
    };
    let result = execute(cli.command, env, stdin).and_then(|(text, out)| emit(&text, out.as_deref(), stdout));
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(stderr, "cnr: {}", f.message());
            f.code()
        }
    }
}
