//! Node-level recall, precision and F1 against gold annotations.
//!
//! A corpus is a directory of `*.html` documents plus a `gold.json` manifest
//! mapping each document id (file stem) to the node path of its main block.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::blocks::{extract_main, SelectionConfig};
use crate::cnr::annotate;
use crate::dom::{parse_html, ClassifierConfig, DomTree, NodeId};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EvalReport {
    pub document_id: String,
    pub dom_nodes: usize,
    pub main_block_nodes: usize,
    pub recall: f64,
    pub precision: f64,
    pub f1: f64,
}

/// Harmonic mean of precision and recall; zero when both are zero.
pub fn f1(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

/// Compare the subtree at `retrieved` against the subtree at `gold`.
pub fn score(tree: &DomTree, retrieved: NodeId, gold: NodeId) -> Result<EvalReport> {
    let r = tree.subtree_range(retrieved)?;
    let g = tree.subtree_range(gold)?;
    let common = r.end.min(g.end).saturating_sub(r.start.max(g.start));
    let recall = common as f64 / g.len() as f64;
    let precision = common as f64 / r.len() as f64;
    Ok(EvalReport {
        document_id: String::new(),
        dom_nodes: tree.len(),
        main_block_nodes: r.len(),
        recall,
        precision,
        f1: f1(precision, recall),
    })
}

pub const GOLD_MANIFEST: &str = "gold.json";

/// Document id to gold node path.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Deserialize, serde::Serialize)]
#[serde(transparent)]
pub struct GoldManifest(pub BTreeMap<String, String>);

impl GoldManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        serde_json::from_str(&text).map_err(|e| Error::Manifest(format!("{}: {e}", path.display())))
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DocumentFailure {
    pub document_id: String,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Aggregate {
    pub documents: usize,
    pub failures: usize,
    pub recall: f64,
    pub precision: f64,
    pub f1: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusReport {
    pub reports: Vec<EvalReport>,
    pub failures: Vec<DocumentFailure>,
}

impl CorpusReport {
    pub fn aggregate(&self) -> Aggregate {
        let n = self.reports.len();
        let mean = |f: fn(&EvalReport) -> f64| {
            if n == 0 {
                0.0
            } else {
                self.reports.iter().map(f).sum::<f64>() / n as f64
            }
        };
        Aggregate {
            documents: n,
            failures: self.failures.len(),
            recall: mean(|r| r.recall),
            precision: mean(|r| r.precision),
            f1: mean(|r| r.f1),
        }
    }

    /// One JSON object per line: reports, then failures, then the aggregate.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for r in &self.reports {
            writeln!(w, "{}", serde_json::to_string(r)?)?;
        }
        for f in &self.failures {
            writeln!(w, "{}", serde_json::json!({ "failure": f }))?;
        }
        writeln!(w, "{}", serde_json::json!({ "aggregate": self.aggregate() }))
    }

    pub fn write_csv<W: Write>(&self, w: W) -> std::io::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["Benchmark", "DOM nodes", "Main block", "Recall", "Precision", "F1"])?;
        let pct = |x: f64| format!("{:.2}", x * 100.0);
        for r in &self.reports {
            out.write_record([
                r.document_id.clone(),
                r.dom_nodes.to_string(),
                r.main_block_nodes.to_string(),
                pct(r.recall),
                pct(r.precision),
                pct(r.f1),
            ])?;
        }
        let agg = self.aggregate();
        out.write_record(["average".to_string(), String::new(), String::new(), pct(agg.recall), pct(agg.precision), pct(agg.f1)])?;
        out.flush()
    }
}

/// Extract and score one document.
pub fn evaluate_document(
    document_id: &str,
    html: &[u8],
    gold_path: &str,
    classifier: &ClassifierConfig,
    selection: &SelectionConfig,
) -> Result<EvalReport> {
    let tree = parse_html(html)?;
    let gold = tree.resolve_path(gold_path).map_err(|e| Error::Manifest(e.to_string()))?;
    let at = annotate(&tree, classifier);
    let retrieved = extract_main(&at, selection)?;
    let mut report = score(&tree, retrieved, gold)?;
    report.document_id = document_id.to_string();
    Ok(report)
}

/// Score every document of a corpus directory, in document-id order.
///
/// Per-document problems (missing file, unresolvable gold path, no text) are
/// collected as failures; only an unreadable directory or manifest aborts.
pub fn run_corpus(dir: &Path, classifier: &ClassifierConfig, selection: &SelectionConfig) -> Result<CorpusReport> {
    let manifest = GoldManifest::load(&dir.join(GOLD_MANIFEST))?;
    let io_err = |path: PathBuf| move |source| Error::Io { path, source };

    let mut documents: BTreeMap<String, Option<PathBuf>> =
        manifest.0.keys().map(|k| (k.clone(), None)).collect();
    for entry in std::fs::read_dir(dir).map_err(io_err(dir.to_path_buf()))? {
        let path = entry.map_err(io_err(dir.to_path_buf()))?.path();
        if path.extension().and_then(|e| e.to_str()) != Some("html") {
            continue;
        }
        if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
            documents.insert(stem.to_string(), Some(path));
        }
    }

    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for (id, path) in documents {
        let outcome = match (path, manifest.0.get(&id)) {
            (None, _) => Err(Error::Manifest(format!("no document file for `{id}`"))),
            (Some(_), None) => Err(Error::Manifest(format!("no gold annotation for `{id}`"))),
            (Some(path), Some(gold)) => std::fs::read(&path)
                .map_err(io_err(path.clone()))
                .and_then(|bytes| evaluate_document(&id, &bytes, gold, classifier, selection)),
        };
        match outcome {
            Ok(r) => reports.push(r),
            Err(e) => failures.push(DocumentFailure { document_id: id, error: e.to_string() }),
        }
    }
    Ok(CorpusReport { reports, failures })
}
