//! Line-oriented instance files.
//!
//! ```text
//! CSG1
//! n 4
//! dist U
//! seed 42
//! 1 0.37454011884736254
//! ...
//! 15 0.59865848419703658
//! ```
//!
//! `dist` is one of `U US N NS ND custom`, `seed` an unsigned integer or
//! `none`. One `<index> <value>` line follows for every index `1..2^n`.

use std::io::{BufRead, Write};

use thiserror::Error;

use crate::coalition::MAX_AGENTS;
use crate::instance::{Instance, InstanceMeta};

use super::Distribution;

const MAGIC: &str = "CSG1";

#[derive(Debug, Error)]
#[error("line {line}: {kind}")]
pub struct FormatError {
    pub line: usize,
    pub kind: FormatErrorKind,
}

#[derive(Debug, Error)]
pub enum FormatErrorKind {
    #[error("malformed header: {0}")]
    Header(String),
    #[error("wrong value count: expected {expected}, found {found}")]
    WrongValueCount { expected: usize, found: usize },
    #[error("expected index {expected}, found {found}")]
    IndexOrder { expected: usize, found: String },
    #[error("negative or non-finite value {0}")]
    NegativeValue(f64),
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Formats `v` in plain decimal notation with 17 significant digits.
pub(crate) fn format_value(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (16 - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}

pub fn write_instance<W: Write>(inst: &Instance, mut sink: W) -> std::io::Result<()> {
    let meta = inst.meta();
    writeln!(sink, "{MAGIC}")?;
    writeln!(sink, "n {}", inst.n())?;
    match meta.dist {
        Some(d) => writeln!(sink, "dist {d}")?,
        None => writeln!(sink, "dist custom")?,
    }
    match meta.seed {
        Some(s) => writeln!(sink, "seed {s}")?,
        None => writeln!(sink, "seed none")?,
    }
    for (i, &v) in inst.values().iter().enumerate() {
        writeln!(sink, "{} {}", i + 1, format_value(v))?;
    }
    sink.flush()
}

pub fn read_instance<R: BufRead>(source: R) -> Result<Instance, FormatError> {
    let mut lines = source.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut header = |what: &str| -> Result<(usize, String), FormatError> {
        match lines.next() {
            Some((line, Ok(text))) => Ok((line, text)),
            Some((line, Err(e))) => Err(FormatError {
                line,
                kind: FormatErrorKind::Io(e),
            }),
            None => Err(FormatError {
                line: 0,
                kind: FormatErrorKind::Header(format!("missing {what} line")),
            }),
        }
    };
    let bad_header = |line: usize, msg: String| FormatError {
        line,
        kind: FormatErrorKind::Header(msg),
    };

    let (line, magic) = header("magic")?;
    if magic.trim() != MAGIC {
        return Err(bad_header(
            line,
            format!("expected {MAGIC:?}, found {magic:?}"),
        ));
    }

    let (line, text) = header("n")?;
    let n = keyed(&text, "n")
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|n| (1..=MAX_AGENTS).contains(n))
        .ok_or_else(|| {
            bad_header(
                line,
                format!("expected `n <1..={MAX_AGENTS}>`, found {text:?}"),
            )
        })?;

    let (line, text) = header("dist")?;
    let dist = match keyed(&text, "dist") {
        Some("custom") => None,
        Some(tag) => Some(
            tag.parse::<Distribution>()
                .map_err(|e| bad_header(line, e.to_string()))?,
        ),
        None => {
            return Err(bad_header(
                line,
                format!("expected `dist <tag>`, found {text:?}"),
            ))
        }
    };

    let (line, text) = header("seed")?;
    let seed = match keyed(&text, "seed") {
        Some("none") => None,
        Some(s) => Some(
            s.parse::<u64>()
                .map_err(|_| bad_header(line, format!("bad seed {s:?}")))?,
        ),
        None => {
            return Err(bad_header(
                line,
                format!("expected `seed <u64|none>`, found {text:?}"),
            ))
        }
    };

    let expected = (1usize << n) - 1;
    let mut values = Vec::with_capacity(expected);
    let mut last_line = 4;
    for (line, text) in lines {
        let text = text.map_err(|e| FormatError {
            line,
            kind: FormatErrorKind::Io(e),
        })?;
        last_line = line;
        let text = text.trim();
        if text.is_empty() {
            continue;
        }
        let err = |kind| FormatError { line, kind };
        if values.len() == expected {
            return Err(err(FormatErrorKind::WrongValueCount {
                expected,
                found: expected + 1,
            }));
        }
        let mut parts = text.split_whitespace();
        let (idx, val) = match (parts.next(), parts.next(), parts.next()) {
            (Some(i), Some(v), None) => (i, v),
            _ => return Err(err(FormatErrorKind::Parse(text.to_string()))),
        };
        let want = values.len() + 1;
        if idx.parse::<usize>().ok() != Some(want) {
            return Err(err(FormatErrorKind::IndexOrder {
                expected: want,
                found: idx.to_string(),
            }));
        }
        let v: f64 = val
            .parse()
            .map_err(|_| err(FormatErrorKind::Parse(val.to_string())))?;
        if !v.is_finite() || v < 0.0 {
            return Err(err(FormatErrorKind::NegativeValue(v)));
        }
        values.push(v);
    }
    if values.len() != expected {
        return Err(FormatError {
            line: last_line,
            kind: FormatErrorKind::WrongValueCount {
                expected,
                found: values.len(),
            },
        });
    }
    Instance::new(n, values, InstanceMeta { dist, seed }).map_err(|e| FormatError {
        line: last_line,
        kind: FormatErrorKind::Parse(e.to_string()),
    })
}

fn keyed<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    let mut parts = line.split_whitespace();
    match (parts.next(), parts.next(), parts.next()) {
        (Some(k), Some(v), None) if k == key => Some(v),
        _ => None,
    }
}
