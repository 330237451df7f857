//! Reader for the Reuters-21578 SGML distribution format (reut2-0NN.sgm).
//!
//! Each `<REUTERS>` element becomes one document: the `<TITLE>` text is
//! prepended to the `<BODY>` text. A document is positive when the requested
//! topic appears in its `<TOPICS>` list (case-insensitive exact token);
//! everything else is negative. Elements without body text are skipped and
//! counted.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::LabeledCorpus;

/// Ingestion counters reported next to the corpus.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReutersStats {
    /// Elements accepted as documents.
    pub accepted: usize,
    /// Elements skipped because they have no body text (BRIEF/UNPROC types).
    pub skipped_empty_body: usize,
}

/// Parses the given files in order and assembles the labeled corpus.
pub fn load_reuters_sgml(
    paths: &[PathBuf],
    positive_topic: &str,
) -> Result<(LabeledCorpus, ReutersStats)> {
    let mut documents = Vec::new();
    let mut labels = Vec::new();
    let mut stats = ReutersStats::default();
    let want = positive_topic.to_lowercase();
    for path in paths {
        let data = fs::read(path).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
        parse_file(&data, path, &want, &mut documents, &mut labels, &mut stats)?;
    }
    Ok((LabeledCorpus::new(documents, labels)?, stats))
}

fn parse_file(
    data: &[u8],
    path: &Path,
    positive_topic: &str,
    documents: &mut Vec<String>,
    labels: &mut Vec<bool>,
    stats: &mut ReutersStats,
) -> Result<()> {
    let err = |offset: usize, reason: &str| Error::ParseError {
        path: path.to_path_buf(),
        offset,
        reason: reason.to_string(),
    };
    let mut pos = 0usize;
    while let Some(start) = find(data, pos, b"<REUTERS") {
        let open_end = find(data, start, b">")
            .ok_or_else(|| err(start, "unterminated <REUTERS> opening tag"))?;
        let close = find(data, open_end, b"</REUTERS>")
            .ok_or_else(|| err(start, "missing </REUTERS>"))?;
        let element = &data[open_end + 1..close];
        let base = open_end + 1;

        let topics = match section(element, b"<TOPICS>", b"</TOPICS>") {
            Some((a, b)) => parse_topic_list(&element[a..b], base + a, path)?,
            None => Vec::new(),
        };
        let title = section(element, b"<TITLE>", b"</TITLE>")
            .map(|(a, b)| decode_entities(&element[a..b]))
            .unwrap_or_default();
        let body = section(element, b"<BODY>", b"</BODY>")
            .map(|(a, b)| decode_entities(&element[a..b]))
            .unwrap_or_default();

        if body.trim().is_empty() {
            stats.skipped_empty_body += 1;
        } else {
            let text = if title.trim().is_empty() {
                body.trim().to_string()
            } else {
                format!("{}\n{}", title.trim(), body.trim())
            };
            let positive = topics.iter().any(|t| t == positive_topic);
            documents.push(text);
            labels.push(positive);
            stats.accepted += 1;
        }
        pos = close + b"</REUTERS>".len();
    }
    Ok(())
}

fn parse_topic_list(slice: &[u8], base: usize, path: &Path) -> Result<Vec<String>> {
    let mut topics = Vec::new();
    let mut pos = 0usize;
    while let Some(open) = find(slice, pos, b"<D>") {
        let start = open + 3;
        let end = find(slice, start, b"</D>").ok_or_else(|| Error::ParseError {
            path: path.to_path_buf(),
            offset: base + open,
            reason: "unterminated <D> in <TOPICS>".to_string(),
        })?;
        topics.push(decode_entities(&slice[start..end]).trim().to_lowercase());
        pos = end + 4;
    }
    Ok(topics)
}

fn find(data: &[u8], from: usize, needle: &[u8]) -> Option<usize> {
    if from >= data.len() {
        return None;
    }
    data[from..]
        .windows(needle.len())
        .position(|w| w == needle)
        .map(|p| p + from)
}

fn section(data: &[u8], open: &[u8], close: &[u8]) -> Option<(usize, usize)> {
    let a = find(data, 0, open)? + open.len();
    let b = find(data, a, close)?;
    Some((a, b))
}

/// Decodes the entity forms used by the distribution: the five XML named
/// entities and numeric character references. Control-character references
/// (the `&#2;`/`&#3;` record separators) are dropped; unrecognized named
/// entities are skipped.
fn decode_entities(raw: &[u8]) -> String {
    let text = String::from_utf8_lossy(raw);
    let mut out = String::with_capacity(text.len());
    let mut chars = text.char_indices().peekable();
    while let Some((i, ch)) = chars.next() {
        if ch != '&' {
            out.push(ch);
            continue;
        }
        let rest = &text[i + 1..];
        match rest.find(';') {
            Some(semi) if semi <= 8 => {
                let name = &rest[..semi];
                for _ in 0..=semi {
                    chars.next();
                }
                match name {
                    "lt" => out.push('<'),
                    "gt" => out.push('>'),
                    "amp" => out.push('&'),
                    "quot" => out.push('"'),
                    "apos" => out.push('\''),
                    _ => {
                        if let Some(num) = name.strip_prefix('#') {
                            if let Ok(code) = num.parse::<u32>() {
                                if code >= 32 {
                                    if let Some(c) = char::from_u32(code) {
                                        out.push(c);
                                    }
                                }
                            }
                        }
                        // Unknown named entities are dropped.
                    }
                }
            }
            _ => out.push('&'),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn element(topics: &[&str], title: &str, body: &str) -> String {
        let ds: String = topics.iter().map(|t| format!("<D>{t}</D>")).collect();
        format!(
            "<REUTERS TOPICS=\"YES\" NEWID=\"1\">\n<DATE>26-FEB-1987</DATE>\n\
             <TOPICS>{ds}</TOPICS>\n<TEXT>\n<TITLE>{title}</TITLE>\n\
             <BODY>{body}</BODY>\n</TEXT>\n</REUTERS>\n"
        )
    }

    fn write_sgml(parts: &[String]) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        write!(f, "<!DOCTYPE lewis SYSTEM \"lewis.dtd\">\n").unwrap();
        for p in parts {
            write!(f, "{p}").unwrap();
        }
        f
    }

    #[test]
    fn topic_membership_decides_the_label() {
        let f = write_sgml(&[
            element(&["grain", "wheat"], "GRAIN UP", "Wheat exports rose."),
            element(&["wheat"], "WHEAT ONLY", "Only the wheat topic here."),
            element(&[], "NO TOPICS", "Body without topics."),
        ]);
        let (c, stats) =
            load_reuters_sgml(&[f.path().to_path_buf()], "grain").unwrap();
        assert_eq!(stats.accepted, 3);
        assert_eq!(c.labels(), &[true, false, false]);
        // Title is prepended to the body.
        assert!(c.documents()[0].starts_with("GRAIN UP\n"));
    }

    #[test]
    fn empty_body_skipped_with_counter() {
        let brief = "<REUTERS NEWID=\"9\"><TOPICS></TOPICS>\
                     <TEXT TYPE=\"BRIEF\"><TITLE>FLASH</TITLE></TEXT></REUTERS>"
            .to_string();
        let f = write_sgml(&[
            element(&["grain"], "A", "Some body."),
            brief,
            element(&[], "B", "Another body."),
        ]);
        let (c, stats) = load_reuters_sgml(&[f.path().to_path_buf()], "grain").unwrap();
        assert_eq!(stats.skipped_empty_body, 1);
        assert_eq!(stats.accepted, 2);
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn truncated_element_is_a_parse_error() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        write!(
            f,
            "<REUTERS NEWID=\"1\"><TOPICS><D>grain</D></TOPICS><TEXT><BODY>cut off"
        )
        .unwrap();
        let err = load_reuters_sgml(&[f.path().to_path_buf()], "grain").unwrap_err();
        assert!(matches!(err, Error::ParseError { .. }));
    }

    #[test]
    fn entities_are_decoded() {
        let f = write_sgml(&[
            element(&["grain"], "T", "Price &lt;up&gt; 5 pct &amp; rising&#3;"),
            element(&[], "U", "flat"),
        ]);
        let (c, _) = load_reuters_sgml(&[f.path().to_path_buf()], "grain").unwrap();
        assert!(c.documents()[0].contains("<up> 5 pct & rising"));
    }

    #[test]
    fn topic_match_is_exact_token_case_insensitive() {
        let f = write_sgml(&[
            element(&["GRAIN"], "T", "Uppercase topic."),
            element(&["grainy"], "U", "Near-miss topic."),
        ]);
        let (c, _) = load_reuters_sgml(&[f.path().to_path_buf()], "grain").unwrap();
        assert_eq!(c.labels(), &[true, false]);
    }
}
