//! Versioned plain-text model files.
//!
//! Floats are written in shortest round-trip form, so a model loads back to
//! bit-identical predictions on any build.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::svm::{KernelSvmModel, SupportVector};

const MAGIC: &str = "seminar-svm v1";

pub fn save(model: &KernelSvmModel, mut writer: impl Write) -> Result<()> {
    writeln!(writer, "{MAGIC}")?;
    writeln!(writer, "kernel rbf")?;
    writeln!(writer, "gamma {}", model.gamma)?;
    writeln!(writer, "c {}", model.c)?;
    writeln!(writer, "bias {}", model.bias)?;
    writeln!(writer, "converged {}", model.converged)?;
    writeln!(writer, "features {}", model.feature_order.join(" "))?;
    for sv in &model.support {
        write!(writer, "sv {} {}", if sv.label > 0.0 { "+1" } else { "-1" }, sv.alpha)?;
        for v in &sv.features {
            write!(writer, " {v}")?;
        }
        writeln!(writer)?;
    }
    writeln!(writer, "end")?;
    Ok(())
}

fn malformed(line: usize, message: impl Into<String>) -> Error {
    Error::MalformedFile {
        what: "model",
        line,
        message: message.into(),
    }
}

pub fn load(reader: impl BufRead) -> Result<KernelSvmModel> {
    let mut gamma = None;
    let mut c = None;
    let mut bias = None;
    let mut converged = None;
    let mut feature_order: Option<Vec<String>> = None;
    let mut support = Vec::new();
    let mut saw_magic = false;
    let mut saw_end = false;

    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        if lineno == 1 {
            if line != MAGIC {
                return Err(malformed(lineno, format!("expected {MAGIC:?}")));
            }
            saw_magic = true;
            continue;
        }
        let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
        match key {
            "kernel" => {
                if rest != "rbf" {
                    return Err(malformed(lineno, format!("unsupported kernel {rest:?}")));
                }
            }
            "gamma" => gamma = Some(parse_f64(rest, lineno)?),
            "c" => c = Some(parse_f64(rest, lineno)?),
            "bias" => bias = Some(parse_f64(rest, lineno)?),
            "converged" => {
                converged = Some(rest.parse::<bool>().map_err(|_| {
                    malformed(lineno, format!("bad converged flag {rest:?}"))
                })?)
            }
            "features" => {
                feature_order = Some(rest.split_whitespace().map(|s| s.to_string()).collect())
            }
            "sv" => {
                let mut parts = rest.split_whitespace();
                let label = match parts.next() {
                    Some("+1") => 1.0,
                    Some("-1") => -1.0,
                    other => return Err(malformed(lineno, format!("bad sv label {other:?}"))),
                };
                let alpha = parse_f64(
                    parts.next().ok_or_else(|| malformed(lineno, "sv missing alpha"))?,
                    lineno,
                )?;
                let features: Vec<f64> = parts
                    .map(|p| parse_f64(p, lineno))
                    .collect::<Result<_>>()?;
                support.push(SupportVector {
                    alpha,
                    label,
                    features,
                });
            }
            "end" => {
                saw_end = true;
                break;
            }
            other => return Err(malformed(lineno, format!("unknown key {other:?}"))),
        }
    }

    if !saw_magic {
        return Err(malformed(1, "empty model file"));
    }
    if !saw_end {
        return Err(malformed(0, "truncated model file: no end marker"));
    }
    let feature_order =
        feature_order.ok_or_else(|| malformed(0, "model missing features line"))?;
    let model = KernelSvmModel {
        gamma: gamma.ok_or_else(|| malformed(0, "model missing gamma"))?,
        c: c.ok_or_else(|| malformed(0, "model missing c"))?,
        bias: bias.ok_or_else(|| malformed(0, "model missing bias"))?,
        converged: converged.unwrap_or(true),
        support,
        feature_order,
    };
    for sv in &model.support {
        if sv.features.len() != model.feature_order.len() {
            return Err(malformed(0, "support vector dimension mismatch"));
        }
    }
    Ok(model)
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| malformed(line, format!("bad float {s:?}")))
}
