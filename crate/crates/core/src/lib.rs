//! Main-content extraction over the DOM tree.
//!
//! Each node is annotated with its chars-nodes ratio (non-whitespace text
//! characters in the subtree divided by the number of nodes in it). The
//! densest nodes are lifted to the containers that group them, and the
//! container holding the most text is the main content block.
//!
//! ```
//! use cnr_core::{annotate, extract_main, parse_html, render, ClassifierConfig, RenderFormat, SelectionConfig};
//!
//! let page = b"<nav><a href='/'>Home</a> <a href='/news'>News</a></nav>\
//!     <div><h1>Title</h1><p>Some article text.</p><p>More of it here.</p><p>And a closing line.</p></div>\
//!     <footer>(c) 2024</footer>";
//! let tree = parse_html(page)?;
//! let classifier = ClassifierConfig::default();
//! let annotated = annotate(&tree, &classifier);
//! let main = extract_main(&annotated, &SelectionConfig::default())?;
//! assert_eq!(render(&annotated, main, RenderFormat::PlainText)?, "Title\nSome article text.\nMore of it here.\nAnd a closing line.");
//! # Ok::<(), cnr_core::Error>(())
//! ```
//!
//! Ratios are computed in any [`Scalar`]: `f64` by default, `f32`, or the
//! exact [`Rational`].

pub mod blocks;
pub mod cnr;
pub mod dom;
mod error;
pub mod eval;
pub mod extract;
mod scalar;

pub use blocks::{
    detect_menus, enumerate_blocks, expand, extract_main, identify_blocks, select_main_block, select_top_nodes,
    shrink, BlockSet, MenuConfig, SelectionConfig,
};
pub use cnr::{annotate, compute_cnr, text_length, AnnotatedTree, NodeAnnotation};
pub use dom::{parse_html, ClassifierConfig, DomTree, Element, NodeClass, NodeId, NodeKind, TreeBuilder};
pub use error::{Error, Result};
pub use eval::{f1, run_corpus, score, CorpusReport, EvalReport, GoldManifest};
pub use extract::{render, RenderFormat};
pub use scalar::{Rational, Scalar};

pub type AnnotatedTreeF32<'t> = AnnotatedTree<'t, f32>;
pub type AnnotatedTreeF64<'t> = AnnotatedTree<'t, f64>;
pub type ExactAnnotatedTree<'t> = AnnotatedTree<'t, Rational>;
pub type ExactNodeAnnotation = NodeAnnotation<Rational>;
