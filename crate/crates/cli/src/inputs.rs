//! Turning `--input` paths into surfaces.

use std::path::{Path, PathBuf};

use floerveer::ingest::{
    decode_taut_signature, parse_vbs_file_with, vbs_from_triangulation, ParseOptions,
};
use floerveer::vbs::{validate, RawVbs, Vbs};
use serde::Serialize;

/// Why an input could not be turned into a validated surface.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind")]
pub enum InputError {
    IoError {
        message: String,
    },
    SyntaxError {
        line: usize,
        column: usize,
        message: String,
    },
    DuplicateId {
        message: String,
    },
    MissingSection {
        message: String,
    },
    UnknownKey {
        message: String,
    },
    InvalidValue {
        message: String,
    },
    MalformedSignature {
        message: String,
    },
    UnsupportedVersion {
        message: String,
    },
    InvalidTriangulation {
        message: String,
    },
    NonVeeringInput {
        message: String,
    },
    ValidationError {
        violations: serde_json::Value,
    },
}

impl From<floerveer::ingest::ParseError> for InputError {
    fn from(e: floerveer::ingest::ParseError) -> Self {
        use floerveer::ingest::ParseError as P;
        let message = e.to_string();
        match e {
            P::SyntaxError { line, column, .. } => InputError::SyntaxError {
                line,
                column,
                message,
            },
            P::DuplicateId { .. } => InputError::DuplicateId { message },
            P::MissingSection { .. } => InputError::MissingSection { message },
            P::UnknownKey { .. } => InputError::UnknownKey { message },
            P::InvalidValue { .. } => InputError::InvalidValue { message },
        }
    }
}

/// One surface to process, before validation.
#[derive(Clone, Debug)]
pub enum Source {
    File(PathBuf),
    Signature {
        file: PathBuf,
        line: usize,
        signature: String,
    },
}

impl Source {
    pub fn label(&self) -> String {
        match self {
            Source::File(p) => p.display().to_string(),
            Source::Signature {
                file,
                line,
                signature,
            } => format!("{}:{line}:{signature}", file.display()),
        }
    }
}

pub struct Loaded {
    pub vbs: Vbs,
    pub warnings: Vec<String>,
}

fn is_json(p: &Path) -> bool {
    p.extension().is_some_and(|e| e == "json")
}

/// Expand paths: directories contribute their `.json` files (and, with
/// `census`, their `.txt` files) in sorted order; census files contribute
/// one source per nonempty line.
pub fn expand(paths: &[PathBuf], census: bool) -> Vec<Result<Source, (String, InputError)>> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut entries: Vec<PathBuf> = match std::fs::read_dir(p) {
                Ok(rd) => rd.filter_map(|e| e.ok().map(|e| e.path())).collect(),
                Err(e) => {
                    out.push(Err((
                        p.display().to_string(),
                        InputError::IoError {
                            message: e.to_string(),
                        },
                    )));
                    continue;
                }
            };
            entries.sort();
            let files: Vec<PathBuf> = entries
                .into_iter()
                .filter(|f| {
                    f.is_file()
                        && (is_json(f) || (census && f.extension().is_some_and(|e| e == "txt")))
                })
                .collect();
            out.extend(expand(&files, census));
        } else if is_json(p) || !census {
            out.push(Ok(Source::File(p.clone())));
        } else {
            match std::fs::read_to_string(p) {
                Ok(text) => {
                    for (i, line) in text.lines().enumerate() {
                        if let Some(sig) = line.split_whitespace().next() {
                            out.push(Ok(Source::Signature {
                                file: p.clone(),
                                line: i + 1,
                                signature: sig.to_string(),
                            }));
                        }
                    }
                }
                Err(e) => out.push(Err((
                    p.display().to_string(),
                    InputError::IoError {
                        message: e.to_string(),
                    },
                ))),
            }
        }
    }
    out
}

fn validated(raw: RawVbs, warnings: Vec<String>) -> Result<Loaded, InputError> {
    match validate(&raw) {
        Ok(vbs) => Ok(Loaded { vbs, warnings }),
        Err(e) => Err(InputError::ValidationError {
            violations: serde_json::to_value(&e.violations).expect("violations serialize"),
        }),
    }
}

pub fn load(src: &Source, strict: bool) -> Result<Loaded, InputError> {
    match src {
        Source::File(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| InputError::IoError {
                message: e.to_string(),
            })?;
            let parsed = parse_vbs_file_with(&text, ParseOptions { strict })?;
            for w in &parsed.warnings {
                log::warn!("{}: {w}", p.display());
            }
            validated(parsed.raw, parsed.warnings)
        }
        Source::Signature { signature, .. } => {
            use floerveer::ingest::SignatureError as S;
            let tri = decode_taut_signature(signature).map_err(|e| {
                let message = e.to_string();
                match e {
                    S::MalformedSignature(_) => InputError::MalformedSignature { message },
                    S::UnsupportedVersion(_) => InputError::UnsupportedVersion { message },
                    S::Invalid(_) => InputError::InvalidTriangulation { message },
                }
            })?;
            let mut raw =
                vbs_from_triangulation(&tri).map_err(|e| InputError::NonVeeringInput {
                    message: e.to_string(),
                })?;
            raw.name = Some(signature.clone());
            validated(raw, Vec::new())
        }
    }
}
