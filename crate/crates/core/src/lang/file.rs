use alloc::string::String;
use alloc::vec::Vec;

use super::ast::Tst;
use super::parse::{parse_tst, ParseError};

/// A term in a `.tst` file, named when written as `NAME = term`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definition {
    pub name: Option<String>,
    pub term: Tst,
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(keep, _)| keep)
}

/// `NAME = ` prefix of a line, if it is a definition.
fn definition_head(line: &str) -> Option<(&str, &str)> {
    let (name, rest) = line.split_once('=')?;
    let name = name.trim();
    let valid = !name.is_empty()
        && name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name != "rec";
    valid.then_some((name, rest))
}

/// Parses a `.tst` file: either one `NAME = term` definition per line, or a
/// single bare term (which may span lines). `#` starts a comment.
pub fn parse_tst_file(text: &str) -> Result<Vec<Definition>, ParseError> {
    let lines: Vec<&str> = text.lines().map(strip_comment).collect();
    if !lines.iter().any(|l| definition_head(l).is_some()) {
        let body: Vec<&str> = lines.clone();
        let term = parse_tst(&body.join("\n"))?;
        return Ok(alloc::vec![Definition { name: None, term }]);
    }
    let mut out = Vec::new();
    for (n, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let Some((name, rest)) = definition_head(line) else {
            return Err(parse_tst(line).err().map_or_else(
                || ParseError {
                    line: n + 1,
                    column: 1,
                    kind: super::parse::ParseErrorKind::Unexpected {
                        found: "a bare term".into(),
                        expected: "`NAME = term`",
                    },
                },
                |mut e| {
                    e.line += n;
                    e
                },
            ));
        };
        let offset = line.len() - rest.len();
        let term = parse_tst(rest).map_err(|mut e| {
            if e.line == 1 {
                e.column += offset;
            }
            e.line += n;
            e
        })?;
        out.push(Definition { name: Some(name.into()), term });
    }
    Ok(out)
}
