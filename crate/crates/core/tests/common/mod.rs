//! Helpers shared by the integration tests and the acceptance runner.
#![allow(dead_code)]

use std::path::PathBuf;

use cnr_core::{DomTree, Element, NodeId, NodeKind, TreeBuilder};
use rand::seq::IndexedRandom;
use rand::Rng;

pub const CONTENT_TAGS: &[&str] = &["div", "p", "span", "section", "ul", "li", "td", "b", "h2", "article"];
pub const NON_CONTENT_TAGS: &[&str] = &["script", "img", "a", "nav", "br", "iframe", "style", "button"];
const WORDS: &[&str] = &["lorem", "ipsum", "dolor", "a", "información", "日本語", "x", "  ", "\n", "wörter", "z\u{a0}z"];

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn fixture(name: &str) -> Vec<u8> {
    std::fs::read(manifest_dir().join("tests/fixtures").join(name)).expect("fixture exists")
}

pub fn corpus_dir() -> PathBuf {
    manifest_dir().join("tests/corpus")
}

/// Corpus document ids in sorted order.
pub fn corpus_pages() -> Vec<String> {
    let mut ids: Vec<String> = std::fs::read_dir(corpus_dir())
        .expect("corpus dir")
        .filter_map(|e| {
            let p = e.ok()?.path();
            (p.extension()? == "html").then(|| p.file_stem().unwrap().to_string_lossy().into_owned())
        })
        .collect();
    ids.sort();
    ids
}

pub fn corpus_page(id: &str) -> Vec<u8> {
    std::fs::read(corpus_dir().join(format!("{id}.html"))).expect("corpus page")
}

fn random_text<R: Rng>(rng: &mut R) -> String {
    let n = rng.random_range(1..6);
    (0..n).map(|_| *WORDS.choose(rng).unwrap()).collect::<Vec<_>>().join(" ")
}

/// A random tree of at most `max_nodes` nodes, mixing content and
/// non-content elements with text of varying length.
pub fn random_tree<R: Rng>(rng: &mut R, max_nodes: usize) -> DomTree {
    random_tree_from(rng, max_nodes, NON_CONTENT_TAGS)
}

/// Like [`random_tree`], limited to non-content tags that HTML lets hold
/// child elements, so the tree survives serialization.
pub fn random_markup_tree<R: Rng>(rng: &mut R, max_nodes: usize) -> DomTree {
    random_tree_from(rng, max_nodes, &["a", "nav", "button", "form"])
}

fn random_tree_from<R: Rng>(rng: &mut R, max_nodes: usize, non_content: &[&str]) -> DomTree {
    let mut b = TreeBuilder::new(Element::new("body"));
    let mut open = vec![b.root()];
    let target = rng.random_range(1..max_nodes.max(2));
    let mut count = 1;
    while count < target {
        let parent = *open.choose(rng).unwrap();
        if rng.random_bool(0.35) {
            b.text(parent, &random_text(rng));
        } else {
            let tags = if rng.random_bool(0.2) { non_content } else { CONTENT_TAGS };
            let h = b.element(parent, Element::new(tags.choose(rng).unwrap()));
            open.push(h);
        }
        count += 1;
    }
    b.build()
}

/// Straightforward recursive reading of the annotation rules, kept apart
/// from the library code: returns (weight, text length) of `n`.
pub fn naive_annotation(tree: &DomTree, n: NodeId) -> (u64, u64) {
    let mut up = tree.parent(n).unwrap();
    while let Some(p) = up {
        if is_non_content(tree, p) {
            return (1, 0);
        }
        up = tree.parent(p).unwrap();
    }
    naive_rec(tree, n)
}

fn is_non_content(tree: &DomTree, n: NodeId) -> bool {
    tree.tag(n).is_some_and(|t| cnr_core::dom::DEFAULT_NON_CONTENT_TAGS.contains(&t))
}

fn naive_rec(tree: &DomTree, n: NodeId) -> (u64, u64) {
    match tree.kind(n).unwrap() {
        NodeKind::Text(t) => (1, t.chars().filter(|c| !c.is_whitespace()).count() as u64),
        NodeKind::Element(_) if is_non_content(tree, n) => (1, 0),
        NodeKind::Element(_) => tree.children(n).unwrap().iter().fold((1, 0), |(w, l), &c| {
            let (cw, cl) = naive_rec(tree, c);
            (w + cw, l + cl)
        }),
    }
}

/// Insert newlines and indentation into every whitespace-only gap between
/// two tags, leaving raw-text and preformatted elements untouched.
pub fn pretty_print(html: &str) -> String {
    const KEEP: &[&str] = &["script", "style", "pre", "textarea"];
    let bytes = html.as_bytes();
    let lower = html.to_ascii_lowercase();
    let mut out = String::with_capacity(html.len() * 2);
    let mut i = 0;
    let mut inside: Option<&str> = None;
    while i < bytes.len() {
        if let Some(tag) = inside {
            let close = format!("</{tag}");
            let end = lower[i..].find(&close).map_or(bytes.len(), |k| i + k);
            out.push_str(&html[i..end]);
            i = end;
            inside = None;
            continue;
        }
        if bytes[i] == b'<' {
            let end = html[i..].find('>').map_or(bytes.len(), |k| i + k + 1);
            let tag = &lower[i..end];
            out.push_str(&html[i..end]);
            inside = KEEP.iter().copied().find(|t| {
                tag.strip_prefix('<').and_then(|r| r.strip_prefix(t)).is_some_and(|r| r.starts_with(['>', ' ', '\t', '\n']))
            });
            i = end;
            if inside.is_none() {
                let gap_end = html[i..].find(|c: char| !c.is_ascii_whitespace()).map_or(bytes.len(), |k| i + k);
                if gap_end < bytes.len() && bytes[gap_end] == b'<' {
                    out.push_str("\n    ");
                    i = gap_end;
                }
            }
        } else {
            let end = html[i..].find('<').map_or(bytes.len(), |k| i + k);
            out.push_str(&html[i..end]);
            i = end;
        }
    }
    out
}

/// Serialized tree shape (tags and text, no ids) for comparing parses.
pub fn shape(tree: &DomTree) -> Vec<String> {
    tree.ids()
        .map(|n| {
            let depth = tree.depth(n).unwrap();
            match tree.kind(n).unwrap() {
                NodeKind::Text(t) => format!("{depth} #{t}"),
                NodeKind::Element(e) => format!("{depth} {}{:?}", e.tag, e.attrs),
            }
        })
        .collect()
}
