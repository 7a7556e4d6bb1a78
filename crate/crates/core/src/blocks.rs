//! Block detection on an annotated tree.
//!
//! The pipeline is: pick the densest nodes ([`select_top_nodes`]), lift them
//! to the containers that group them ([`identify_blocks`]), then keep the
//! container holding the most text ([`select_main_block`]).

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeSet, BinaryHeap};

use crate::cnr::{compute_cnr_excluding, text_length, AnnotatedTree};
use crate::dom::{ClassifierConfig, DomTree, NodeClass, NodeId, NodeKind};
use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// A set of nodes of one tree, iterated in document order.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
#[serde(transparent)]
pub struct BlockSet {
    members: BTreeSet<NodeId>,
}

impl BlockSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, n: NodeId) -> bool {
        self.members.contains(&n)
    }

    pub fn insert(&mut self, n: NodeId) -> bool {
        self.members.insert(n)
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = NodeId> + '_ {
        self.members.iter().copied()
    }

    pub fn to_vec(&self) -> Vec<NodeId> {
        self.iter().collect()
    }
}

impl FromIterator<NodeId> for BlockSet {
    fn from_iter<I: IntoIterator<Item = NodeId>>(iter: I) -> Self {
        BlockSet { members: iter.into_iter().collect() }
    }
}

impl<'a> IntoIterator for &'a BlockSet {
    type Item = NodeId;
    type IntoIter = std::iter::Copied<std::collections::btree_set::Iter<'a, NodeId>>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter().copied()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelectionConfig {
    /// Nodes at or above this quantile of the positive CNRs are selected.
    pub quantile: f64,
    /// Lower bound on how many nodes are selected.
    pub min_candidates: usize,
}

impl Default for SelectionConfig {
    fn default() -> Self {
        SelectionConfig { quantile: 0.70, min_candidates: 3 }
    }
}

impl SelectionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.quantile > 0.0 && self.quantile <= 1.0) {
            return Err(Error::InvalidConfig(format!("quantile {} not in (0, 1]", self.quantile)));
        }
        if self.min_candidates == 0 {
            return Err(Error::InvalidConfig("min-candidates must be positive".into()));
        }
        Ok(())
    }
}

/// Linearly interpolated `q`-quantile of an ascending slice.
fn quantile<S: Scalar>(sorted: &[S], q: f64) -> S {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = S::from_f64(h - lo as f64).unwrap_or_else(S::zero);
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Descending CNR, then ascending id.
fn by_density<'a, S: Scalar>(at: &'a AnnotatedTree<'_, S>) -> impl Fn(&NodeId, &NodeId) -> Ordering + 'a {
    move |a, b| {
        let (ca, cb) = (at.annotations()[a.index()].cnr, at.annotations()[b.index()].cnr);
        scalar::cmp(&cb, &ca).then(a.cmp(b))
    }
}

/// Pick the nodes with the highest CNR.
pub fn select_top_nodes<S: Scalar>(atree: &AnnotatedTree<'_, S>, config: &SelectionConfig) -> Result<BlockSet> {
    config.validate()?;
    let zero = S::zero();
    let pool: Vec<(NodeId, S)> = atree
        .tree()
        .ids()
        .map(|n| (n, atree.annotations()[n.index()].cnr))
        .filter(|&(n, cnr)| {
            cnr > zero && matches!(atree.class(n), Ok(NodeClass::TextNode | NodeClass::ContentElement))
        })
        .collect();
    top_of_pool(pool, config)
}

fn top_of_pool<S: Scalar>(mut pool: Vec<(NodeId, S)>, config: &SelectionConfig) -> Result<BlockSet> {
    if pool.is_empty() {
        return Err(Error::EmptyDocument);
    }
    pool.sort_by(|(a, ca), (b, cb)| scalar::cmp(cb, ca).then(a.cmp(b)));
    let ascending: Vec<S> = pool.iter().rev().map(|&(_, c)| c).collect();
    let threshold = quantile(&ascending, config.quantile);
    let above = pool.iter().take_while(|&&(_, c)| c >= threshold).count();
    let take = above.max(config.min_candidates.min(pool.len()));
    Ok(pool[..take].iter().map(|&(n, _)| n).collect())
}

/// Lift a seed set to the containers that group it.
///
/// Members that descend from another member are dropped; then, while two
/// members share a parent, all members under that parent are replaced by the
/// parent. Parents are merged deepest first (ties: smaller id), and
/// descendants of a freshly inserted parent are pruned after each merge.
pub fn identify_blocks(tree: &DomTree, seeds: &BlockSet) -> Result<BlockSet> {
    for n in seeds {
        tree.check(n)?;
    }
    let end = |n: NodeId| tree.subtree_range(n).expect("checked").end;
    let parent = |n: NodeId| tree.parent(n).expect("checked");

    let mut members = BTreeSet::new();
    let mut covered = 0;
    for n in seeds {
        if n.index() >= covered {
            members.insert(n);
            covered = end(n);
        }
    }

    let mut member_children = vec![0u32; tree.len()];
    let mut heap = BinaryHeap::new();
    let bump = |p: NodeId, counts: &mut [u32], heap: &mut BinaryHeap<(u32, Reverse<NodeId>)>| {
        counts[p.index()] += 1;
        if counts[p.index()] == 2 {
            heap.push((tree.depth(p).expect("checked"), Reverse(p)));
        }
    };
    for &m in &members {
        if let Some(p) = parent(m) {
            bump(p, &mut member_children, &mut heap);
        }
    }

    while let Some((_, Reverse(p))) = heap.pop() {
        if member_children[p.index()] < 2 || members.contains(&p) {
            continue;
        }
        let below: Vec<NodeId> = members.range(NodeId::new(p.index() + 1)..NodeId::new(end(p))).copied().collect();
        for x in below {
            members.remove(&x);
            if let Some(xp) = parent(x) {
                member_children[xp.index()] -= 1;
            }
        }
        members.insert(p);
        if let Some(pp) = parent(p) {
            bump(pp, &mut member_children, &mut heap);
        }
    }
    Ok(BlockSet { members })
}

/// The block with the most text; ties go to the smaller id.
pub fn select_main_block<S: Scalar>(atree: &AnnotatedTree<'_, S>, blocks: &BlockSet) -> Result<NodeId> {
    let mut best: Option<(u64, NodeId)> = None;
    for n in blocks {
        let len = atree.annotation(n)?.text_length;
        if best.is_none_or(|(b, _)| len > b) {
            best = Some((len, n));
        }
    }
    best.map(|(_, n)| n).ok_or(Error::EmptyBlockSet)
}

/// Top nodes, merged into blocks, reduced to the main block.
pub fn extract_main<S: Scalar>(atree: &AnnotatedTree<'_, S>, config: &SelectionConfig) -> Result<NodeId> {
    let seeds = select_top_nodes(atree, config)?;
    let blocks = identify_blocks(atree.tree(), &seeds)?;
    select_main_block(atree, &blocks)
}

/// Widen the selection to the parent container.
pub fn expand(tree: &DomTree, current: NodeId) -> Result<NodeId> {
    tree.parent(current)?.ok_or(Error::AtRoot)
}

/// Narrow the selection to the densest child; ties go to the smaller id.
pub fn shrink<S: Scalar>(atree: &AnnotatedTree<'_, S>, current: NodeId) -> Result<NodeId> {
    let children = atree.tree().children(current)?;
    children.iter().copied().min_by(by_density(atree)).ok_or(Error::NoChildren(current))
}

/// Ranked, pairwise-disjoint blocks: extract the main block, drop its
/// subtree, re-annotate what remains and repeat.
///
/// A later winner may be an ancestor of an earlier block (its container
/// still holds other text). Such a block is replaced by its largest pieces
/// that avoid earlier blocks, and the piece with the most text is taken.
/// Stops after `k` blocks or when no text is left.
pub fn enumerate_blocks<S: Scalar>(
    atree: &AnnotatedTree<'_, S>,
    config: &SelectionConfig,
    k: usize,
) -> Result<Vec<NodeId>> {
    if k == 0 {
        return Err(Error::InvalidConfig("k must be at least 1".into()));
    }
    let tree = atree.tree();
    let mut removed = vec![false; tree.len()];
    // proper ancestors of blocks found so far
    let mut chain = vec![false; tree.len()];
    let mut found = Vec::new();
    while found.len() < k {
        let rest: AnnotatedTree<'_, S> = compute_cnr_excluding(tree, atree.classifier(), &removed);
        let seeds = match select_top_nodes(&rest, config) {
            Ok(s) => s,
            Err(Error::EmptyDocument) => break,
            Err(e) => return Err(e),
        };
        let mut candidates = BlockSet::new();
        for b in &identify_blocks(tree, &seeds)? {
            if !chain[b.index()] {
                candidates.insert(b);
                continue;
            }
            for x in tree.subtree_range(b)?.skip(1) {
                let p = tree.parent(NodeId::new(x))?.expect("below b");
                if chain[p.index()] && !chain[x] && !removed[x] {
                    candidates.insert(NodeId::new(x));
                }
            }
        }
        let block = select_main_block(&rest, &candidates)?;
        if rest.annotation(block)?.text_length == 0 {
            break;
        }
        found.push(block);
        for j in tree.subtree_range(block)? {
            removed[j] = true;
        }
        let mut up = tree.parent(block)?;
        while let Some(p) = up {
            chain[p.index()] = true;
            up = tree.parent(p)?;
        }
    }
    if found.is_empty() {
        return Err(Error::EmptyDocument);
    }
    Ok(found)
}

/// Settings for the experimental link-concentration detector.
#[derive(Clone, Debug)]
pub struct MenuConfig {
    /// Minimum links per node.
    pub lnr_threshold: f64,
    /// Maximum mean non-whitespace characters per link.
    pub max_chars_per_link: f64,
    pub link_tag: String,
    /// Classifier for the link pass; must not treat `link_tag` as non-content.
    pub classifier: ClassifierConfig,
}

impl Default for MenuConfig {
    fn default() -> Self {
        MenuConfig {
            lnr_threshold: 0.5,
            max_chars_per_link: 25.0,
            link_tag: "a".to_string(),
            classifier: ClassifierConfig::default().without(["a", "nav"]),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, serde::Serialize)]
pub struct LinkStats {
    /// Nodes in the subtree, each link collapsed to a single node.
    pub weight: u64,
    pub links: u64,
    /// Non-whitespace characters inside links.
    pub link_chars: u64,
}

impl LinkStats {
    pub fn lnr(&self) -> f64 {
        self.links as f64 / self.weight as f64
    }

    pub fn chars_per_link(&self) -> f64 {
        if self.links == 0 {
            0.0
        } else {
            self.link_chars as f64 / self.links as f64
        }
    }
}

/// Per-node link statistics. Link elements count as one node each, their
/// contents only add to `link_chars`. Non-content subtrees count as one node.
pub fn link_stats(tree: &DomTree, config: &MenuConfig) -> Vec<LinkStats> {
    let n = tree.len();
    let mut stats = vec![LinkStats { weight: 1, ..Default::default() }; n];
    let mut hidden = vec![false; n];
    for id in tree.ids().skip(1) {
        let p = tree.parent(id).expect("in range").expect("non-root").index();
        let pk = tree.kind(NodeId::new(p)).expect("in range");
        hidden[id.index()] = hidden[p]
            || config.classifier.classify_kind(pk) == NodeClass::NonContentNode
            || pk.tag() == Some(config.link_tag.as_str());
    }
    for id in tree.ids().rev() {
        if hidden[id.index()] {
            continue;
        }
        let kind = tree.kind(id).expect("in range");
        stats[id.index()] = match kind {
            NodeKind::Text(_) => LinkStats { weight: 1, links: 0, link_chars: 0 },
            NodeKind::Element(e) if e.tag == config.link_tag => LinkStats {
                weight: 1,
                links: 1,
                link_chars: text_length(&tree.text_content(id).expect("in range")),
            },
            NodeKind::Element(e) if config.classifier.is_non_content(&e.tag) => LinkStats { weight: 1, ..Default::default() },
            NodeKind::Element(_) => {
                let mut acc = LinkStats { weight: 1, ..Default::default() };
                for c in tree.children(id).expect("in range") {
                    let s = stats[c.index()];
                    acc.weight += s.weight;
                    acc.links += s.links;
                    acc.link_chars += s.link_chars;
                }
                acc
            }
        };
    }
    for (s, h) in stats.iter_mut().zip(hidden) {
        if h {
            *s = LinkStats { weight: 1, ..Default::default() };
        }
    }
    stats
}

/// Experimental: find concentrations of short links (menus).
pub fn detect_menus(tree: &DomTree, config: &MenuConfig) -> Result<BlockSet> {
    let stats = link_stats(tree, config);
    let seeds: BlockSet = tree
        .ids()
        .filter(|&n| {
            let s = &stats[n.index()];
            let e = match tree.kind(n).expect("in range") {
                NodeKind::Element(e) => e,
                NodeKind::Text(_) => return false,
            };
            e.tag != config.link_tag
                && !config.classifier.is_non_content(&e.tag)
                && s.links > 0
                && s.link_chars > 0
                && s.lnr() >= config.lnr_threshold
                && s.chars_per_link() <= config.max_chars_per_link
        })
        .collect();
    identify_blocks(tree, &seeds)
}
