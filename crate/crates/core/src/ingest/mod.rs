//! Reading surfaces: the canonical JSON format, taut veering triangulations
//! and (with the `census` feature) census signature strings.

#[cfg(feature = "census")]
pub mod isosig;
pub mod triangulation;

use std::collections::BTreeSet;

use serde_json::Value;

use crate::vbs::RawVbs;

#[cfg(feature = "census")]
pub use isosig::{decode_taut_signature, encode_taut_signature, SignatureError};
pub use triangulation::{
    vbs_from_triangulation, DualError, Gluing, TautVeeringTriangulation, TriangulationError,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    SyntaxError {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate id {id} in section {section}")]
    DuplicateId { section: String, id: u64 },
    #[error("missing section {section}")]
    MissingSection { section: String },
    #[error("unknown key {key:?} in {context}")]
    UnknownKey { context: String, key: String },
    #[error("invalid value: {message}")]
    InvalidValue { message: String },
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Reject unknown keys instead of reporting them as warnings.
    pub strict: bool,
}

/// A parsed surface file with any non-fatal findings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedVbs {
    pub raw: RawVbs,
    pub warnings: Vec<String>,
}

pub const SECTIONS: [&str; 4] = ["triple_points", "edges", "smooth_pairing", "sectors"];

const ITEM_KEYS: [(&str, &[&str]); 4] = [
    ("triple_points", &["id", "color"]),
    ("edges", &["id", "src", "dst"]),
    ("smooth_pairing", &["vertex", "pairs"]),
    ("sectors", &["id", "path_a", "path_b"]),
];

/// Structural parse with default (lenient) options.
pub fn parse_vbs_file(text: &str) -> Result<RawVbs, ParseError> {
    parse_vbs_file_with(text, ParseOptions::default()).map(|p| p.raw)
}

/// Structural parse of the canonical JSON format. Combinatorial validation is
/// left to [`crate::vbs::validate`].
pub fn parse_vbs_file_with(text: &str, opts: ParseOptions) -> Result<ParsedVbs, ParseError> {
    let value: Value = serde_json::from_str(text).map_err(|e| ParseError::SyntaxError {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let Value::Object(top) = &value else {
        return Err(ParseError::InvalidValue {
            message: "top level must be an object".into(),
        });
    };
    let mut warnings = Vec::new();
    let mut unknown = |context: &str, key: &str| -> Result<(), ParseError> {
        if opts.strict {
            Err(ParseError::UnknownKey {
                context: context.into(),
                key: key.into(),
            })
        } else {
            warnings.push(format!("ignoring unknown key {key:?} in {context}"));
            Ok(())
        }
    };
    for key in top.keys() {
        if key != "name" && !SECTIONS.contains(&key.as_str()) {
            unknown("the top level", key)?;
        }
    }
    for (section, keys) in ITEM_KEYS {
        let items = top.get(section).ok_or_else(|| ParseError::MissingSection {
            section: section.into(),
        })?;
        let Value::Array(items) = items else {
            return Err(ParseError::InvalidValue {
                message: format!("section {section} must be an array"),
            });
        };
        let id_key = keys[0];
        let mut seen = BTreeSet::new();
        for item in items {
            let Value::Object(obj) = item else {
                return Err(ParseError::InvalidValue {
                    message: format!("entries of {section} must be objects"),
                });
            };
            for key in obj.keys() {
                if !keys.contains(&key.as_str()) {
                    unknown(section, key)?;
                }
            }
            if let Some(id) = obj.get(id_key).and_then(Value::as_u64) {
                if !seen.insert(id) {
                    return Err(ParseError::DuplicateId {
                        section: section.into(),
                        id,
                    });
                }
            }
        }
    }
    let mut cleaned = value.clone();
    if let Value::Object(top) = &mut cleaned {
        top.retain(|k, _| k == "name" || SECTIONS.contains(&k.as_str()));
        for (section, keys) in ITEM_KEYS {
            if let Some(Value::Array(items)) = top.get_mut(section) {
                for item in items {
                    if let Value::Object(obj) = item {
                        obj.retain(|k, _| keys.contains(&k.as_str()));
                    }
                }
            }
        }
    }
    let raw: RawVbs = serde_json::from_value(cleaned).map_err(|e| ParseError::InvalidValue {
        message: e.to_string(),
    })?;
    Ok(ParsedVbs { raw, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;

    const F8: &str = include_str!("../../../../fixtures/f8.json");

    #[test]
    fn parses_f8() {
        let raw = parse_vbs_file(F8).unwrap();
        assert_eq!(raw.triple_points.len(), 2);
        assert_eq!(raw.sectors.len(), 2);
    }

    #[test]
    fn empty_file_is_a_syntax_error() {
        assert!(matches!(
            parse_vbs_file(""),
            Err(ParseError::SyntaxError { line: 1, .. })
        ));
    }

    #[test]
    fn syntax_error_position() {
        let err = parse_vbs_file("{\n  \"edges\": [,]\n}").unwrap_err();
        assert!(
            matches!(err, ParseError::SyntaxError { line: 2, .. }),
            "{err:?}"
        );
    }

    #[test]
    fn duplicate_sector_id() {
        let mut v: Value = serde_json::from_str(F8).unwrap();
        v["sectors"][1]["id"] = Value::from(0);
        let err = parse_vbs_file(&v.to_string()).unwrap_err();
        assert_eq!(
            err,
            ParseError::DuplicateId {
                section: "sectors".into(),
                id: 0
            }
        );
    }

    #[test]
    fn missing_section() {
        let mut v: Value = serde_json::from_str(F8).unwrap();
        v.as_object_mut().unwrap().remove("smooth_pairing");
        assert!(matches!(
            parse_vbs_file(&v.to_string()),
            Err(ParseError::MissingSection { .. })
        ));
    }

    #[test]
    fn unknown_keys_warn_or_fail() {
        let mut v: Value = serde_json::from_str(F8).unwrap();
        v["extra"] = Value::from(1);
        v["edges"][0]["weight"] = Value::from(2);
        let text = v.to_string();
        let lenient = parse_vbs_file_with(&text, ParseOptions { strict: false }).unwrap();
        assert_eq!(lenient.warnings.len(), 2);
        assert_eq!(lenient.raw, parse_vbs_file(F8).unwrap());
        assert!(matches!(
            parse_vbs_file_with(&text, ParseOptions { strict: true }),
            Err(ParseError::UnknownKey { .. })
        ));
    }
}
