//! Reader for the line-oriented `.mdpx` model format.
//!
//! ```text
//! states: s0 s1 s2
//! props: init a            # optional
//! labels: s0: init; s1: a;
//! action s0 alpha: s0 1/2, s1 1/2
//! ```

use std::path::Path;

use super::{validate_mdp, Mdp, ModelError, RawAction, RawLabel, RawModel};
use crate::rational::parse_rational;

pub fn parse_mdpx(text: &str) -> Result<Mdp, ModelError> {
    validate_mdp(&parse_raw(text)?)
}

pub fn read_mdpx(path: impl AsRef<Path>) -> Result<Mdp, ModelError> {
    let text = std::fs::read_to_string(path.as_ref()).map_err(|e| ModelError::Syntax {
        line: 0,
        message: format!("cannot read {}: {}", path.as_ref().display(), e),
    })?;
    parse_mdpx(&text)
}

fn syntax(line: usize, message: impl Into<String>) -> ModelError {
    ModelError::Syntax {
        line,
        message: message.into(),
    }
}

fn is_identifier(word: &str) -> bool {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

fn identifier(word: &str, line: usize) -> Result<String, ModelError> {
    if is_identifier(word) {
        Ok(word.to_string())
    } else {
        Err(syntax(line, format!("invalid identifier '{}'", word)))
    }
}

pub(crate) fn parse_raw(text: &str) -> Result<RawModel, ModelError> {
    let mut raw = RawModel::default();
    for (idx, full_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = full_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("states:") {
            for word in rest.split_whitespace() {
                raw.states.push((identifier(word, line)?, line));
            }
        } else if let Some(rest) = content.strip_prefix("props:") {
            let props = raw.props.get_or_insert_with(Vec::new);
            for word in rest.split_whitespace() {
                props.push((identifier(word, line)?, line));
            }
        } else if let Some(rest) = content.strip_prefix("labels:") {
            for item in rest.split(';') {
                let item = item.trim();
                if item.is_empty() {
                    continue;
                }
                let (state, props) = item
                    .split_once(':')
                    .ok_or_else(|| syntax(line, format!("expected 'state: props' in '{}'", item)))?;
                let props = props
                    .split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|w| !w.is_empty())
                    .map(|w| identifier(w, line))
                    .collect::<Result<Vec<_>, _>>()?;
                raw.labels.push(RawLabel {
                    state: identifier(state.trim(), line)?,
                    props,
                    line,
                });
            }
        } else if let Some(rest) = content.strip_prefix("action ") {
            let (head, body) = rest
                .split_once(':')
                .ok_or_else(|| syntax(line, "expected 'action <state> <action>: ...'"))?;
            let words: Vec<&str> = head.split_whitespace().collect();
            if words.len() != 2 {
                return Err(syntax(line, "expected 'action <state> <action>: ...'"));
            }
            let mut entries = Vec::new();
            for entry in body.split(',') {
                let entry = entry.trim();
                if entry.is_empty() {
                    continue;
                }
                let parts: Vec<&str> = entry.split_whitespace().collect();
                if parts.len() != 2 {
                    return Err(syntax(line, format!("expected '<state> <prob>' in '{}'", entry)));
                }
                let p = parse_rational(parts[1])
                    .ok_or_else(|| syntax(line, format!("invalid probability '{}'", parts[1])))?;
                entries.push((identifier(parts[0], line)?, p));
            }
            raw.actions.push(RawAction {
                state: identifier(words[0], line)?,
                action: identifier(words[1], line)?,
                entries,
                line,
            });
        } else {
            return Err(syntax(line, format!("unrecognised line '{}'", content)));
        }
    }
    Ok(raw)
}
