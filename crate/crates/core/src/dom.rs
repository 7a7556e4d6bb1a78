//! Simplified document tree: tag nodes and text nodes only.
//!
//! Node ids are assigned in document-order preorder, so the subtree rooted at
//! `n` is exactly the id range `n..n + size(n)`. Ancestor tests, subtree
//! enumeration and subtree intersection are all interval arithmetic.

use std::collections::HashSet;
use std::fmt;
use std::ops::Range;
use std::rc::Rc;

use html5ever::tendril::TendrilSink;
use markup5ever_rcdom::{Handle, NodeData, RcDom};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(transparent)]
pub struct NodeId(u32);

impl NodeId {
    pub fn new(index: usize) -> Self {
        NodeId(u32::try_from(index).expect("tree larger than u32::MAX nodes"))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub tag: String,
    /// Attributes in source order.
    pub attrs: Vec<(String, String)>,
}

impl Element {
    pub fn new(tag: &str) -> Self {
        Element { tag: tag.to_ascii_lowercase(), attrs: Vec::new() }
    }

    pub fn with_attr(mut self, name: &str, value: &str) -> Self {
        self.attrs.push((name.to_ascii_lowercase(), value.to_string()));
        self
    }

    pub fn attr(&self, name: &str) -> Option<&str> {
        self.attrs.iter().find(|(k, _)| k == name).map(|(_, v)| v.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Text(String),
    Element(Element),
}

impl NodeKind {
    pub fn tag(&self) -> Option<&str> {
        match self {
            NodeKind::Element(e) => Some(&e.tag),
            NodeKind::Text(_) => None,
        }
    }

    pub fn as_element(&self) -> Option<&Element> {
        match self {
            NodeKind::Element(e) => Some(e),
            NodeKind::Text(_) => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            NodeKind::Text(t) => Some(t),
            NodeKind::Element(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Node {
    kind: NodeKind,
    parent: Option<NodeId>,
    children: Vec<NodeId>,
    depth: u32,
    /// One past the last preorder id in this node's subtree.
    end: u32,
}

/// Immutable DOM tree. The root is always id 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomTree {
    nodes: Vec<Node>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum NodeClass {
    TextNode,
    NonContentNode,
    ContentElement,
}

/// Which element tags are treated as non-content.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassifierConfig {
    non_content: HashSet<String>,
}

pub const DEFAULT_NON_CONTENT_TAGS: &[&str] = &[
    "script", "style", "noscript", "template", "iframe", "object", "embed", "svg", "video", "audio",
    "canvas", "img", "picture", "source", "track", "map", "area", "br", "hr", "nav", "a", "button",
    "input", "select", "textarea", "form", "link", "meta", "head", "title", "base",
];

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self::from_tags(DEFAULT_NON_CONTENT_TAGS.iter().copied())
    }
}

impl ClassifierConfig {
    pub fn from_tags<'a>(tags: impl IntoIterator<Item = &'a str>) -> Self {
        ClassifierConfig { non_content: tags.into_iter().map(|t| t.trim().to_ascii_lowercase()).collect() }
    }

    /// One tag name per line; blank lines and `#` comments are ignored.
    pub fn from_tag_list(text: &str) -> Result<Self> {
        let mut tags = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if line.contains(char::is_whitespace) || line.contains(['<', '>', '/']) {
                return Err(Error::InvalidConfig(format!("line {}: `{line}` is not a tag name", lineno + 1)));
            }
            tags.push(line);
        }
        Ok(Self::from_tags(tags))
    }

    pub fn is_non_content(&self, tag: &str) -> bool {
        self.non_content.contains(tag)
    }

    pub fn without<'a>(mut self, tags: impl IntoIterator<Item = &'a str>) -> Self {
        for t in tags {
            self.non_content.remove(t);
        }
        self
    }

    pub fn with<'a>(mut self, tags: impl IntoIterator<Item = &'a str>) -> Self {
        self.non_content.extend(tags.into_iter().map(str::to_ascii_lowercase));
        self
    }

    pub fn tags(&self) -> impl Iterator<Item = &str> {
        self.non_content.iter().map(String::as_str)
    }

    pub fn classify_kind(&self, kind: &NodeKind) -> NodeClass {
        match kind {
            NodeKind::Text(_) => NodeClass::TextNode,
            NodeKind::Element(e) if self.is_non_content(&e.tag) => NodeClass::NonContentNode,
            NodeKind::Element(_) => NodeClass::ContentElement,
        }
    }
}

/// Handle into a [`TreeBuilder`] arena.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildHandle(usize);

/// Incremental construction of a [`DomTree`].
///
/// Adjacent text pushes are coalesced, whitespace-only text is dropped when
/// the tree is built, and ids are renumbered in preorder.
#[derive(Debug)]
pub struct TreeBuilder {
    kinds: Vec<NodeKind>,
    children: Vec<Vec<usize>>,
}

impl TreeBuilder {
    pub fn new(root: Element) -> Self {
        TreeBuilder { kinds: vec![NodeKind::Element(root)], children: vec![Vec::new()] }
    }

    pub fn root(&self) -> BuildHandle {
        BuildHandle(0)
    }

    pub fn element(&mut self, parent: BuildHandle, element: Element) -> BuildHandle {
        self.push(parent, NodeKind::Element(element))
    }

    pub fn text(&mut self, parent: BuildHandle, text: &str) {
        if let Some(&last) = self.children[parent.0].last() {
            if let NodeKind::Text(existing) = &mut self.kinds[last] {
                existing.push_str(text);
                return;
            }
        }
        self.push(parent, NodeKind::Text(text.to_string()));
    }

    fn push(&mut self, parent: BuildHandle, kind: NodeKind) -> BuildHandle {
        assert!(
            matches!(self.kinds[parent.0], NodeKind::Element(_)),
            "text nodes cannot have children"
        );
        let h = self.kinds.len();
        self.kinds.push(kind);
        self.children.push(Vec::new());
        self.children[parent.0].push(h);
        BuildHandle(h)
    }

    pub fn build(mut self) -> DomTree {
        let keep = |k: &NodeKind| match k {
            NodeKind::Text(t) => !t.chars().all(char::is_whitespace),
            NodeKind::Element(_) => true,
        };
        let mut nodes: Vec<Node> = Vec::with_capacity(self.kinds.len());
        // (arena index, parent id, depth); pushing children reversed keeps preorder
        let mut stack = vec![(0usize, None::<NodeId>, 0u32)];
        let mut kinds: Vec<Option<NodeKind>> = self.kinds.drain(..).map(Some).collect();
        while let Some((h, parent, depth)) = stack.pop() {
            let kind = kinds[h].take().expect("arena node visited once");
            let id = NodeId::new(nodes.len());
            nodes.push(Node { kind, parent, children: Vec::new(), depth, end: 0 });
            if let Some(p) = parent {
                nodes[p.index()].children.push(id);
            }
            for &c in self.children[h].iter().rev() {
                if kinds[c].as_ref().is_some_and(keep) {
                    stack.push((c, Some(id), depth + 1));
                }
            }
        }
        // subtree ends, children before parents in reverse preorder
        for i in (0..nodes.len()).rev() {
            let end = nodes[i].children.last().map_or(i as u32 + 1, |c| nodes[c.index()].end);
            nodes[i].end = end;
        }
        DomTree { nodes }
    }
}

/// Parse an HTML document with standard HTML5 error recovery.
///
/// Comments, doctypes and processing instructions are dropped, as is
/// whitespace-only text. The root of the returned tree is the `html` element.
pub fn parse_html(input: &[u8]) -> Result<DomTree> {
    let text = String::from_utf8_lossy(input);
    parse_str(&text)
}

pub fn parse_str(input: &str) -> Result<DomTree> {
    let dom = html5ever::parse_document(RcDom::default(), Default::default()).one(input);
    let html = dom
        .document
        .children
        .borrow()
        .iter()
        .find(|c| matches!(c.data, NodeData::Element { .. }))
        .cloned()
        .ok_or(Error::InputNotDecodable)?;
    let mut builder = TreeBuilder::new(element_of(&html).expect("html is an element"));
    let root = builder.root();
    let mut stack: Vec<(Handle, BuildHandle)> = vec![(html, root)];
    while let Some((node, at)) = stack.pop() {
        // children are appended in order; nested elements are queued and
        // expanded later, which is fine since each handle owns its slot
        let children = node.children.borrow();
        for child in children.iter() {
            match &child.data {
                NodeData::Text { contents } => builder.text(at, &contents.borrow()),
                NodeData::Element { .. } => {
                    let h = builder.element(at, element_of(child).expect("element"));
                    stack.push((Rc::clone(child), h));
                }
                NodeData::Comment { .. }
                | NodeData::Doctype { .. }
                | NodeData::ProcessingInstruction { .. }
                | NodeData::Document => {}
            }
        }
    }
    Ok(builder.build())
}

fn element_of(handle: &Handle) -> Option<Element> {
    match &handle.data {
        NodeData::Element { name, attrs, .. } => Some(Element {
            tag: name.local.to_ascii_lowercase().to_string(),
            attrs: attrs
                .borrow()
                .iter()
                .map(|a| (a.name.local.to_ascii_lowercase().to_string(), a.value.to_string()))
                .collect(),
        }),
        _ => None,
    }
}

impl DomTree {
    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, n: NodeId) -> bool {
        n.index() < self.nodes.len()
    }

    fn node(&self, n: NodeId) -> Result<&Node> {
        self.nodes.get(n.index()).ok_or(Error::UnknownNode(n))
    }

    pub fn check(&self, n: NodeId) -> Result<()> {
        self.node(n).map(|_| ())
    }

    pub fn ids(&self) -> impl DoubleEndedIterator<Item = NodeId> + ExactSizeIterator {
        (0..self.nodes.len()).map(NodeId::new)
    }

    pub fn kind(&self, n: NodeId) -> Result<&NodeKind> {
        self.node(n).map(|x| &x.kind)
    }

    pub fn tag(&self, n: NodeId) -> Option<&str> {
        self.nodes.get(n.index()).and_then(|x| x.kind.tag())
    }

    pub fn parent(&self, n: NodeId) -> Result<Option<NodeId>> {
        self.node(n).map(|x| x.parent)
    }

    pub fn children(&self, n: NodeId) -> Result<&[NodeId]> {
        self.node(n).map(|x| x.children.as_slice())
    }

    pub fn depth(&self, n: NodeId) -> Result<u32> {
        self.node(n).map(|x| x.depth)
    }

    /// Number of nodes in the subtree rooted at `n`, `n` included.
    pub fn subtree_size(&self, n: NodeId) -> Result<usize> {
        self.subtree_range(n).map(|r| r.len())
    }

    pub fn subtree_range(&self, n: NodeId) -> Result<Range<usize>> {
        self.node(n).map(|x| n.index()..x.end as usize)
    }

    /// All nodes reachable from `n` (reflexive), in document order.
    pub fn subtree_nodes(&self, n: NodeId) -> Result<Vec<NodeId>> {
        self.subtree_range(n).map(|r| r.map(NodeId::new).collect())
    }

    /// Reflexive-transitive ancestor test: `a == b` or `a` is a proper ancestor of `b`.
    pub fn is_ancestor(&self, a: NodeId, b: NodeId) -> Result<bool> {
        self.check(b)?;
        let r = self.subtree_range(a)?;
        Ok(r.contains(&b.index()))
    }

    pub fn classify(&self, n: NodeId, config: &ClassifierConfig) -> Result<NodeClass> {
        self.kind(n).map(|k| config.classify_kind(k))
    }

    /// Deep copy of the subtree rooted at `n`. Node `n + i` of `self` becomes node
    /// `i` of the copy.
    pub fn subtree(&self, n: NodeId) -> Result<DomTree> {
        let range = self.subtree_range(n)?;
        let base = n.index() as u32;
        let depth0 = self.nodes[n.index()].depth;
        let nodes = self.nodes[range]
            .iter()
            .enumerate()
            .map(|(i, node)| Node {
                kind: node.kind.clone(),
                parent: if i == 0 { None } else { node.parent.map(|p| NodeId(p.0 - base)) },
                children: node.children.iter().map(|c| NodeId(c.0 - base)).collect(),
                depth: node.depth - depth0,
                end: node.end - base,
            })
            .collect();
        Ok(DomTree { nodes })
    }

    /// Slash-separated child-index path from the root; the root itself is `/`.
    pub fn path(&self, n: NodeId) -> Result<String> {
        let mut segments = Vec::new();
        let mut cur = n;
        while let Some(p) = self.node(cur)?.parent {
            let pos = self.nodes[p.index()].children.iter().position(|&c| c == cur).expect("child of parent");
            segments.push(pos.to_string());
            cur = p;
        }
        if segments.is_empty() {
            return Ok("/".to_string());
        }
        segments.reverse();
        Ok(format!("/{}", segments.join("/")))
    }

    /// Resolve a node path.
    ///
    /// Numeric segments select a child by index. A `tag#id` segment selects
    /// the first descendant (document order) of the current node with that
    /// tag and `id` attribute; `*#id` matches any tag.
    pub fn resolve_path(&self, path: &str) -> Result<NodeId> {
        let invalid = |reason: String| Error::InvalidPath { path: path.to_string(), reason };
        let rest = path.strip_prefix('/').ok_or_else(|| invalid("must start with `/`".into()))?;
        let mut cur = self.root();
        for seg in rest.split('/').filter(|s| !s.is_empty()) {
            if let Ok(i) = seg.parse::<usize>() {
                cur = *self.nodes[cur.index()]
                    .children
                    .get(i)
                    .ok_or_else(|| invalid(format!("node {} has no child {i}", cur)))?;
            } else if let Some((tag, id)) = seg.split_once('#') {
                let tag = tag.to_ascii_lowercase();
                let range = self.subtree_range(cur)?;
                cur = range
                    .skip(1)
                    .map(NodeId::new)
                    .find(|&d| {
                        self.nodes[d.index()].kind.as_element().is_some_and(|e| {
                            (tag == "*" || e.tag == tag) && e.attr("id") == Some(id)
                        })
                    })
                    .ok_or_else(|| invalid(format!("no descendant matches `{seg}`")))?;
            } else {
                return Err(invalid(format!("bad segment `{seg}`")));
            }
        }
        Ok(cur)
    }

    /// Concatenated text of all text nodes under `n`, in document order.
    pub fn text_content(&self, n: NodeId) -> Result<String> {
        let mut out = String::new();
        for i in self.subtree_range(n)? {
            if let NodeKind::Text(t) = &self.nodes[i].kind {
                out.push_str(t);
            }
        }
        Ok(out)
    }

    /// Document-order position of `id` among elements with that `id` attribute.
    pub fn find_by_id(&self, id: &str) -> Option<NodeId> {
        self.ids().find(|&n| self.nodes[n.index()].kind.as_element().and_then(|e| e.attr("id")) == Some(id))
    }
}
