//! Chars-nodes ratio annotation.
//!
//! Every node gets a weight (nodes counted in its subtree), a text length
//! (non-whitespace characters) and their ratio. Non-content elements are
//! opaque: weight 1, no text, and nothing below them is counted.

use crate::dom::{ClassifierConfig, DomTree, NodeClass, NodeId, NodeKind};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct NodeAnnotation<S = f64> {
    pub weight: u64,
    pub text_length: u64,
    pub cnr: S,
}

/// A tree together with one annotation per node.
#[derive(Clone, Debug)]
pub struct AnnotatedTree<'t, S = f64> {
    tree: &'t DomTree,
    classifier: &'t ClassifierConfig,
    classes: Vec<NodeClass>,
    annotations: Vec<NodeAnnotation<S>>,
    visits: usize,
}

/// Number of characters in `s` that are not Unicode whitespace.
pub fn text_length(s: &str) -> u64 {
    s.chars().filter(|c| !c.is_whitespace()).count() as u64
}

/// Annotate `tree` bottom-up in a single pass.
///
/// Ids are preorder, so walking them in reverse sees every child before its
/// parent. Nodes under a non-content element are annotated `(1, 0, 0)` but
/// never feed into an ancestor's totals.
pub fn compute_cnr<'t, S: Scalar>(tree: &'t DomTree, classifier: &'t ClassifierConfig) -> AnnotatedTree<'t, S> {
    compute_cnr_excluding(tree, classifier, &[])
}

/// Like [`compute_cnr`], but as if every node flagged in `removed` (whole
/// subtrees) were absent. Removed nodes get `(1, 0, 0)`.
pub(crate) fn compute_cnr_excluding<'t, S: Scalar>(
    tree: &'t DomTree,
    classifier: &'t ClassifierConfig,
    removed: &[bool],
) -> AnnotatedTree<'t, S> {
    let n = tree.len();
    let gone = |i: usize| removed.get(i).copied().unwrap_or(false);
    let classes: Vec<NodeClass> = tree
        .ids()
        .map(|id| classifier.classify_kind(tree.kind(id).expect("id in range")))
        .collect();

    // opaque[i]: some proper ancestor of i is non-content
    let mut opaque = vec![false; n];
    for id in tree.ids().skip(1) {
        let p = tree.parent(id).expect("id in range").expect("non-root has parent").index();
        opaque[id.index()] = opaque[p] || classes[p] == NodeClass::NonContentNode;
    }

    let empty = NodeAnnotation { weight: 1, text_length: 0, cnr: S::zero() };
    let mut annotations = vec![empty; n];
    let mut visits = 0;
    for id in tree.ids().rev() {
        visits += 1;
        let i = id.index();
        if opaque[i] || gone(i) {
            continue;
        }
        annotations[i] = match classes[i] {
            NodeClass::NonContentNode => empty,
            NodeClass::TextNode => {
                let len = match tree.kind(id).expect("id in range") {
                    NodeKind::Text(t) => text_length(t),
                    NodeKind::Element(_) => unreachable!("text class implies text kind"),
                };
                NodeAnnotation { weight: 1, text_length: len, cnr: S::ratio(len, 1) }
            }
            NodeClass::ContentElement => {
                let mut weight = 1;
                let mut chars = 0;
                for c in tree.children(id).expect("id in range").iter().filter(|c| !gone(c.index())) {
                    let a = &annotations[c.index()];
                    weight += a.weight;
                    chars += a.text_length;
                }
                NodeAnnotation { weight, text_length: chars, cnr: S::ratio(chars, weight) }
            }
        };
    }
    AnnotatedTree { tree, classifier, classes, annotations, visits }
}

/// [`compute_cnr`] in `f64`.
pub fn annotate<'t>(tree: &'t DomTree, classifier: &'t ClassifierConfig) -> AnnotatedTree<'t> {
    compute_cnr(tree, classifier)
}

impl<'t, S: Scalar> AnnotatedTree<'t, S> {
    pub fn tree(&self) -> &'t DomTree {
        self.tree
    }

    pub fn classifier(&self) -> &'t ClassifierConfig {
        self.classifier
    }

    pub fn annotation(&self, n: NodeId) -> Result<&NodeAnnotation<S>> {
        self.annotations.get(n.index()).ok_or(Error::UnknownNode(n))
    }

    pub fn annotations(&self) -> &[NodeAnnotation<S>] {
        &self.annotations
    }

    pub fn cnr_of(&self, n: NodeId) -> Result<S> {
        self.annotation(n).map(|a| a.cnr)
    }

    pub fn class(&self, n: NodeId) -> Result<NodeClass> {
        self.classes.get(n.index()).copied().ok_or(Error::UnknownNode(n))
    }

    /// Nodes the annotation pass touched; equals the node count.
    pub fn visit_count(&self) -> usize {
        self.visits
    }
}
