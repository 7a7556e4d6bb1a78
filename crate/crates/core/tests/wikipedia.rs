mod common;

use cnr_core::*;
use common::fixture;

fn by_id(tree: &DomTree, id: &str) -> NodeId {
    tree.find_by_id(id).unwrap_or_else(|| panic!("no element #{id}"))
}

#[test]
fn snippet_body_shape() {
    let tree = parse_html(&fixture("wikipedia_snippet.html")).unwrap();
    let body = tree.resolve_path("/1").unwrap();
    let children: Vec<String> = tree
        .children(body)
        .unwrap()
        .iter()
        .map(|&c| {
            let e = tree.kind(c).unwrap().as_element().unwrap();
            format!("{}#{}", e.tag, e.attr("id").unwrap_or(""))
        })
        .collect();
    assert_eq!(children, ["h1#firstHeading", "div#content", "div#p-lang", "div#footer"]);
}

#[test]
fn snippet_extracts_content_div() {
    let tree = parse_html(&fixture("wikipedia_snippet.html")).unwrap();
    let classifier = ClassifierConfig::default();
    let at = annotate(&tree, &classifier);
    let main = extract_main(&at, &SelectionConfig::default()).unwrap();
    assert_eq!(main, by_id(&tree, "content"));
    let text = render(&at, main, RenderFormat::PlainText).unwrap();
    assert!(text.starts_with("Information retrieval"), "{text}");
}

#[test]
fn snippet_granularity() {
    let tree = parse_html(&fixture("wikipedia_snippet.html")).unwrap();
    let classifier = ClassifierConfig::default();
    let at = annotate(&tree, &classifier);
    let content = by_id(&tree, "content");
    let body = tree.resolve_path("/1").unwrap();
    assert_eq!(expand(&tree, content).unwrap(), body);
    assert_eq!(shrink(&at, body).unwrap(), content);
}

#[test]
fn snippet_enumeration() {
    let tree = parse_html(&fixture("wikipedia_snippet.html")).unwrap();
    let classifier = ClassifierConfig::default();
    let at = annotate(&tree, &classifier);
    let blocks = enumerate_blocks(&at, &SelectionConfig::default(), 2).unwrap();
    assert_eq!(blocks, [by_id(&tree, "content"), by_id(&tree, "footer")]);
}

/// Seeds at the heading, the three paragraphs and the footer collapse to the
/// content div and the footer; the content div carries more text.
#[test]
fn monobook_seed_merge() {
    let tree = parse_html(&fixture("wikipedia_monobook.html")).unwrap();
    let classifier = ClassifierConfig::default();
    let at = annotate(&tree, &classifier);
    let body_content = by_id(&tree, "bodyContent");
    let overview = by_id(&tree, "overview");
    let p5 = tree.children(body_content).unwrap()[0];
    let (p7, p8) = (tree.children(overview).unwrap()[0], tree.children(overview).unwrap()[1]);
    assert_eq!([p5, p7, p8].map(|p| tree.tag(p)), [Some("p"); 3]);

    let seeds: BlockSet = [by_id(&tree, "firstHeading"), p5, p7, p8, by_id(&tree, "footer")].into_iter().collect();
    let blocks = identify_blocks(&tree, &seeds).unwrap();
    assert_eq!(blocks.to_vec(), vec![by_id(&tree, "content"), by_id(&tree, "footer")]);
    assert_eq!(select_main_block(&at, &blocks).unwrap(), by_id(&tree, "content"));
}

#[test]
fn monobook_enumeration_is_disjoint() {
    let tree = parse_html(&fixture("wikipedia_monobook.html")).unwrap();
    let classifier = ClassifierConfig::default();
    let at = annotate(&tree, &classifier);
    let sel = SelectionConfig::default();
    let blocks = enumerate_blocks(&at, &sel, 3).unwrap();
    assert_eq!(blocks.len(), 3);
    assert_eq!(blocks[0], extract_main(&at, &sel).unwrap());
    for (i, &a) in blocks.iter().enumerate() {
        for &b in &blocks[i + 1..] {
            assert!(!tree.is_ancestor(a, b).unwrap() && !tree.is_ancestor(b, a).unwrap());
        }
    }
}

#[test]
fn exact_and_float_annotations_agree() {
    let tree = parse_html(&fixture("wikipedia_monobook.html")).unwrap();
    let classifier = ClassifierConfig::default();
    let exact: ExactAnnotatedTree = compute_cnr(&tree, &classifier);
    let single: AnnotatedTreeF32 = compute_cnr(&tree, &classifier);
    let double = annotate(&tree, &classifier);
    for n in tree.ids() {
        let e = exact.annotation(n).unwrap();
        let d = double.annotation(n).unwrap();
        assert_eq!((e.weight, e.text_length), (d.weight, d.text_length));
        assert_eq!(*e.cnr.numer() as f64 / *e.cnr.denom() as f64, d.cnr);
        assert!((single.cnr_of(n).unwrap() as f64 - d.cnr).abs() <= 1e-5 * d.cnr.max(1.0));
    }
    let sel = SelectionConfig::default();
    assert_eq!(extract_main(&exact, &sel).unwrap(), extract_main(&double, &sel).unwrap());
}
