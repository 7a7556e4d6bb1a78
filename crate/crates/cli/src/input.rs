//! Loading a document from a file, standard input, or a URL.

use std::io::Read;
use std::path::PathBuf;
use std::time::Duration;

use encoding_rs::Encoding;

use crate::Failure;

const MAX_REDIRECTS: usize = 5;
const PRESCAN_BYTES: usize = 1024;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Stdin,
    File(PathBuf),
    Url(String),
}

impl Source {
    pub fn parse(arg: &str) -> Source {
        let lower = arg.to_ascii_lowercase();
        if arg == "-" {
            Source::Stdin
        } else if lower.starts_with("http://") || lower.starts_with("https://") {
            Source::Url(arg.to_string())
        } else {
            Source::File(PathBuf::from(arg))
        }
    }
}

/// Read the document behind `source` and decode it to text.
pub fn load(source: &Source, stdin: &mut dyn Read, timeout: Duration) -> Result<String, Failure> {
    match source {
        Source::Stdin => {
            let mut bytes = Vec::new();
            stdin.read_to_end(&mut bytes).map_err(|e| Failure::Io(format!("reading standard input: {e}")))?;
            Ok(decode(&bytes, None))
        }
        Source::File(path) => {
            let bytes = std::fs::read(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            Ok(decode(&bytes, None))
        }
        Source::Url(url) => {
            let (bytes, charset) = fetch(url, timeout)?;
            Ok(decode(&bytes, charset.as_deref()))
        }
    }
}

fn fetch(url: &str, timeout: Duration) -> Result<(Vec<u8>, Option<String>), Failure> {
    let fail = |e: reqwest::Error| Failure::Io(format!("fetching {url}: {e}"));
    let client = reqwest::blocking::Client::builder()
        .timeout(timeout)
        .redirect(reqwest::redirect::Policy::limited(MAX_REDIRECTS))
        .user_agent(concat!("cnr/", env!("CARGO_PKG_VERSION")))
        .build()
        .map_err(fail)?;
    let response = client.get(url).send().and_then(|r| r.error_for_status()).map_err(fail)?;
    let charset = response
        .headers()
        .get(reqwest::header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .and_then(charset_param)
        .map(str::to_string);
    let bytes = response.bytes().map_err(fail)?;
    Ok((bytes.to_vec(), charset))
}

/// The `charset` parameter of a Content-Type value.
fn charset_param(content_type: &str) -> Option<&str> {
    content_type.split(';').skip(1).find_map(|param| {
        let (name, value) = param.split_once('=')?;
        name.trim().eq_ignore_ascii_case("charset").then(|| value.trim().trim_matches(['"', '\'']))
    })
}

/// Decode with, in order of preference: a byte-order mark, the declared
/// charset, a `<meta>` charset near the start of the document, UTF-8.
/// Undecodable bytes become U+FFFD.
pub fn decode(bytes: &[u8], declared: Option<&str>) -> String {
    if let Some((encoding, bom)) = Encoding::for_bom(bytes) {
        return encoding.decode_without_bom_handling(&bytes[bom..]).0.into_owned();
    }
    let label = declared.map(str::to_string).or_else(|| meta_charset(bytes));
    let encoding = label
        .and_then(|l| Encoding::for_label(l.as_bytes()))
        // a page that claims UTF-16 in ASCII-compatible bytes is not UTF-16
        .map(|e| if e == encoding_rs::UTF_16LE || e == encoding_rs::UTF_16BE { encoding_rs::UTF_8 } else { e })
        .unwrap_or(encoding_rs::UTF_8);
    encoding.decode_without_bom_handling(bytes).0.into_owned()
}

/// Charset named by a `<meta charset>` or `<meta http-equiv>` tag in the
/// first kilobyte.
fn meta_charset(bytes: &[u8]) -> Option<String> {
    let head = &bytes[..bytes.len().min(PRESCAN_BYTES)];
    let lower: Vec<u8> = head.to_ascii_lowercase();
    let mut from = 0;
    while let Some(at) = find(&lower[from..], b"<meta").map(|i| i + from) {
        let end = lower[at..].iter().position(|&b| b == b'>').map_or(lower.len(), |i| at + i);
        let tag = &lower[at..end];
        if let Some(i) = find(tag, b"charset") {
            let rest = tag[i + 7..].iter().skip_while(|b| b.is_ascii_whitespace());
            let rest: Vec<u8> = rest.copied().collect();
            if let Some(value) = rest.strip_prefix(b"=") {
                let value: Vec<u8> = value
                    .iter()
                    .copied()
                    .skip_while(|b| b.is_ascii_whitespace() || *b == b'"' || *b == b'\'')
                    .take_while(|b| b.is_ascii_alphanumeric() || b"-_:.".contains(b))
                    .collect();
                if !value.is_empty() {
                    return String::from_utf8(value).ok();
                }
            }
        }
        from = end;
    }
    None
}

fn find(hay: &[u8], needle: &[u8]) -> Option<usize> {
    hay.windows(needle.len()).position(|w| w == needle)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sources() {
        assert_eq!(Source::parse("-"), Source::Stdin);
        assert_eq!(Source::parse("HTTPS://example.org/"), Source::Url("HTTPS://example.org/".into()));
        assert_eq!(Source::parse("page.html"), Source::File("page.html".into()));
    }

    #[test]
    fn content_type_charset() {
        assert_eq!(charset_param("text/html; charset=ISO-8859-1"), Some("ISO-8859-1"));
        assert_eq!(charset_param("text/html;Charset=\"utf-8\""), Some("utf-8"));
        assert_eq!(charset_param("text/html"), None);
    }

    #[test]
    fn meta_declarations() {
        assert_eq!(meta_charset(b"<html><head><meta charset=\"windows-1252\">").as_deref(), Some("windows-1252"));
        let equiv = b"<meta http-equiv=\"Content-Type\" content=\"text/html; charset=iso-8859-15\" />";
        assert_eq!(meta_charset(equiv).as_deref(), Some("iso-8859-15"));
        assert_eq!(meta_charset(b"<meta name=\"x\"><p>charset=koi8-r</p>"), None);
    }

    #[test]
    fn decoding_order() {
        let latin1 = b"<meta charset=latin1><p>Espa\xf1a</p>";
        assert!(decode(latin1, None).contains("España"));
        assert!(decode(b"<p>Espa\xc3\xb1a</p>", None).contains("España"));
        // declared charset beats the meta tag
        assert!(decode(b"<meta charset=utf-8><p>\xe9</p>", Some("windows-1252")).contains('é'));
        assert!(decode(b"\xef\xbb\xbf<p>x</p>", Some("windows-1252")).starts_with("<p>"));
        assert!(decode(b"<p>\xff</p>", None).contains('\u{fffd}'));
        assert!(decode(b"<meta charset=utf-16><p>\xc3\xa9</p>", None).contains('é'));
    }
}
