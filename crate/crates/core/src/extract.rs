//! Rendering a selected subtree as HTML, plain text, or a JSON report.

use crate::cnr::AnnotatedTree;
use crate::dom::{DomTree, NodeClass, NodeId, NodeKind};
use crate::error::Result;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderFormat {
    HtmlFragment,
    PlainText,
    JsonReport,
}

impl std::str::FromStr for RenderFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "html" => Ok(RenderFormat::HtmlFragment),
            "text" => Ok(RenderFormat::PlainText),
            "json" => Ok(RenderFormat::JsonReport),
            other => Err(format!("unknown format `{other}` (expected html, text or json)")),
        }
    }
}

const VOID: &[&str] = &[
    "area", "base", "br", "col", "embed", "hr", "img", "input", "link", "meta", "param", "source", "track", "wbr",
];

const RAW_TEXT: &[&str] = &["script", "style", "xmp", "iframe", "noembed", "noframes", "plaintext", "noscript"];

/// Elements whose text never shows up in plain-text output.
const INVISIBLE: &[&str] = &[
    "script", "style", "noscript", "template", "head", "title", "meta", "link", "base", "iframe", "object",
    "embed", "svg", "canvas", "video", "audio", "map", "select", "textarea",
];

const BLOCK_LEVEL: &[&str] = &[
    "address", "article", "aside", "blockquote", "body", "br", "caption", "center", "dd", "details", "dialog",
    "dir", "div", "dl", "dt", "fieldset", "figcaption", "figure", "footer", "form", "frameset", "h1", "h2", "h3",
    "h4", "h5", "h6", "header", "hgroup", "hr", "html", "legend", "li", "main", "menu", "nav", "ol", "p", "pre",
    "section", "summary", "table", "tbody", "td", "tfoot", "th", "thead", "tr", "ul",
];

/// Serialize the subtree at `n` as HTML, non-content elements included.
pub fn html_fragment(tree: &DomTree, n: NodeId) -> Result<String> {
    tree.check(n)?;
    let mut out = String::new();
    write_html(tree, n, false, &mut out);
    Ok(out)
}

fn write_html(tree: &DomTree, n: NodeId, raw: bool, out: &mut String) {
    match tree.kind(n).expect("checked") {
        NodeKind::Text(t) if raw => out.push_str(t),
        NodeKind::Text(t) => escape_into(t, false, out),
        NodeKind::Element(e) => {
            out.push('<');
            out.push_str(&e.tag);
            for (k, v) in &e.attrs {
                out.push(' ');
                out.push_str(k);
                out.push_str("=\"");
                escape_into(v, true, out);
                out.push('"');
            }
            out.push('>');
            if VOID.contains(&e.tag.as_str()) {
                return;
            }
            let raw = RAW_TEXT.contains(&e.tag.as_str());
            for &c in tree.children(n).expect("checked") {
                write_html(tree, c, raw, out);
            }
            out.push_str("</");
            out.push_str(&e.tag);
            out.push('>');
        }
    }
}

fn escape_into(s: &str, attr: bool, out: &mut String) {
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '\u{a0}' => out.push_str("&nbsp;"),
            '"' if attr => out.push_str("&quot;"),
            '<' if !attr => out.push_str("&lt;"),
            '>' if !attr => out.push_str("&gt;"),
            c => out.push(c),
        }
    }
}

/// Plain text of the subtree at `n`.
///
/// Whitespace inside text nodes collapses to single spaces, block-level
/// boundaries become single newlines, and text of invisible elements
/// (scripts, styles, media) is skipped. With `content_only`, text under any
/// non-content element is skipped as well, which makes the output's
/// non-whitespace length match the node's annotated text length.
pub fn plain_text<S: Scalar>(atree: &AnnotatedTree<'_, S>, n: NodeId, content_only: bool) -> Result<String> {
    let tree = atree.tree();
    tree.check(n)?;
    let mut lines: Vec<String> = Vec::new();
    let mut line = String::new();
    let flush = |line: &mut String, lines: &mut Vec<String>| {
        let trimmed = line.trim();
        if !trimmed.is_empty() {
            lines.push(trimmed.to_string());
        }
        line.clear();
    };

    // (node, is_exit) in document order
    let mut stack = vec![(n, false)];
    while let Some((id, exit)) = stack.pop() {
        let kind = tree.kind(id).expect("in range");
        match kind {
            NodeKind::Text(t) => {
                let mut last_space = line.ends_with(' ') || line.is_empty();
                for c in t.chars() {
                    if c.is_whitespace() {
                        if !last_space {
                            line.push(' ');
                            last_space = true;
                        }
                    } else {
                        line.push(c);
                        last_space = false;
                    }
                }
            }
            NodeKind::Element(e) => {
                let block = BLOCK_LEVEL.contains(&e.tag.as_str());
                if block {
                    flush(&mut line, &mut lines);
                }
                if exit {
                    continue;
                }
                let skip = INVISIBLE.contains(&e.tag.as_str())
                    || (content_only && atree.class(id)? == NodeClass::NonContentNode);
                if skip {
                    continue;
                }
                if block {
                    stack.push((id, true));
                }
                for &c in tree.children(id).expect("in range").iter().rev() {
                    stack.push((c, false));
                }
            }
        }
    }
    flush(&mut line, &mut lines);
    Ok(lines.join("\n"))
}

#[derive(Debug, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NodeReport {
    pub node_id: NodeId,
    pub path: String,
    pub tag: String,
    pub weight: u64,
    pub text_length: u64,
    pub cnr: f64,
}

impl NodeReport {
    pub fn new<S: Scalar>(atree: &AnnotatedTree<'_, S>, n: NodeId) -> Result<Self> {
        let tree = atree.tree();
        let a = atree.annotation(n)?;
        Ok(NodeReport {
            node_id: n,
            path: tree.path(n)?,
            tag: tree.tag(n).unwrap_or("#text").to_string(),
            weight: a.weight,
            text_length: a.text_length,
            cnr: a.cnr.as_f64(),
        })
    }
}

#[derive(Debug, serde::Serialize)]
pub struct BlockReport {
    #[serde(flatten)]
    pub node: NodeReport,
    pub html: String,
    pub text: String,
}

pub fn render<S: Scalar>(atree: &AnnotatedTree<'_, S>, n: NodeId, format: RenderFormat) -> Result<String> {
    match format {
        RenderFormat::HtmlFragment => html_fragment(atree.tree(), n),
        RenderFormat::PlainText => plain_text(atree, n, false),
        RenderFormat::JsonReport => {
            let report = BlockReport {
                node: NodeReport::new(atree, n)?,
                html: html_fragment(atree.tree(), n)?,
                text: plain_text(atree, n, false)?,
            };
            Ok(serde_json::to_string_pretty(&report)?)
        }
    }
}
