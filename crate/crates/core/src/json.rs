//! Canonical JSON file formats.
//!
//! Instance files:
//! `{ "n": <int>, "simple_mode": <bool>, "classes": [ { "colour": <int>,
//! "cliques": [[<int>,...],...] }, ... ] }` with colours `0..n-1` each
//! appearing exactly once, in order.
//!
//! Matching files: `{ "edges": [ { "colour": <int>, "u": <int>, "v": <int> },
//! ... ] }` with `u < v`.
//!
//! Serialization is canonical: parsing a file produced by the writers here
//! and serializing it again is byte-identical.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::instance::{ColourClass, Instance};
use crate::matching::{Edge, Matching};

/// A parse failure, with the byte offset where the input became invalid
/// (offsets for semantic rule violations point at the start of the document).
#[derive(Debug, Clone)]
pub struct ParseError {
    pub byte_offset: usize,
    pub line: usize,
    pub column: usize,
    pub rule: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "byte {} (line {}, column {}): {}",
            self.byte_offset, self.line, self.column, self.rule
        )
    }
}

impl std::error::Error for ParseError {}

fn offset_of(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let mut offset = 0;
    for (i, l) in text.split('\n').enumerate() {
        if i + 1 == line {
            return offset + column.saturating_sub(1).min(l.len());
        }
        offset += l.len() + 1;
    }
    text.len()
}

fn syntax_error(text: &str, err: serde_json::Error) -> ParseError {
    let (line, column) = (err.line(), err.column());
    ParseError {
        byte_offset: offset_of(text, line, column),
        line,
        column,
        rule: err.to_string(),
    }
}

fn rule_error(rule: impl Into<String>) -> ParseError {
    ParseError {
        byte_offset: 0,
        line: 1,
        column: 1,
        rule: rule.into(),
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    n: usize,
    simple_mode: bool,
    classes: Vec<ClassFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassFile {
    colour: usize,
    cliques: Vec<Vec<u32>>,
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| syntax_error(text, e))?;
    if file.classes.len() != file.n {
        return Err(rule_error(format!(
            "\"n\" is {} but {} classes are listed",
            file.n,
            file.classes.len()
        )));
    }
    for (i, class) in file.classes.iter().enumerate() {
        if class.colour != i {
            return Err(rule_error(format!(
                "classes must list colours 0..n-1 in order; position {} has colour {}",
                i, class.colour
            )));
        }
    }
    let classes = file
        .classes
        .into_iter()
        .map(|c| ColourClass::new(c.cliques))
        .collect();
    Ok(Instance::new(classes, file.simple_mode))
}

pub fn serialize_instance(instance: &Instance) -> String {
    let file = InstanceFile {
        n: instance.n(),
        simple_mode: instance.simple_mode(),
        classes: instance
            .classes()
            .iter()
            .enumerate()
            .map(|(colour, class)| ClassFile {
                colour,
                cliques: class.cliques().to_vec(),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("instance serialization");
    out.push('\n');
    out
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatchingFile {
    edges: Vec<EdgeFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeFile {
    colour: usize,
    u: u32,
    v: u32,
}

pub fn parse_matching(text: &str) -> Result<Matching, ParseError> {
    let file: MatchingFile = serde_json::from_str(text).map_err(|e| syntax_error(text, e))?;
    let mut edges = Vec::with_capacity(file.edges.len());
    for e in file.edges {
        if e.u >= e.v {
            return Err(rule_error(format!(
                "edge endpoints must satisfy u < v, got u={} v={}",
                e.u, e.v
            )));
        }
        edges.push(Edge::new(e.colour, e.u, e.v));
    }
    Ok(Matching::new(edges))
}

pub fn serialize_matching(matching: &Matching) -> String {
    let file = MatchingFile {
        edges: matching
            .edges()
            .iter()
            .map(|e| EdgeFile {
                colour: e.colour,
                u: e.u,
                v: e.v,
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("matching serialization");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Instance;

    #[test]
    fn instance_round_trip_is_byte_identical() {
        let inst = Instance::from_cliques(
            vec![vec![vec![0, 1], vec![2, 3, 4]], vec![vec![0, 2]]],
            false,
        );
        let text = serialize_instance(&inst);
        let parsed = parse_instance(&text).unwrap();
        assert_eq!(parsed, inst);
        assert_eq!(serialize_instance(&parsed), text);
    }

    #[test]
    fn matching_round_trip_is_byte_identical() {
        let m = Matching::new(vec![Edge::new(0, 0, 1), Edge::new(1, 2, 4)]);
        let text = serialize_matching(&m);
        let parsed = parse_matching(&text).unwrap();
        assert_eq!(parsed, m);
        assert_eq!(serialize_matching(&parsed), text);
    }

    #[test]
    fn colour_order_is_enforced() {
        let text = r#"{"n":2,"simple_mode":false,"classes":[
            {"colour":1,"cliques":[[0,1]]},{"colour":0,"cliques":[[2,3]]}]}"#;
        let err = parse_instance(text).unwrap_err();
        assert!(err.rule.contains("in order"));
    }

    #[test]
    fn syntax_errors_carry_byte_offsets() {
        let text = "{\"n\": 1,\n  \"simple_mode\": oops}";
        let err = parse_instance(text).unwrap_err();
        assert!(err.byte_offset > 0);
        assert_eq!(err.line, 2);
    }

    #[test]
    fn matching_rejects_unordered_endpoints() {
        let err = parse_matching(r#"{"edges":[{"colour":0,"u":5,"v":2}]}"#).unwrap_err();
        assert!(err.rule.contains("u < v"));
    }
}
