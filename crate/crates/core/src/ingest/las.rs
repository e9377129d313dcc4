//! Reader for the unwrapped LAS 2.0 subset: `~V`, `~W`, `~C`, optional `~P`
//! and `~O`, then `~A` last.

use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use super::{validate_row, Curve, ParseReport, RowVerdict, WellLog};
use crate::error::{Error, Result};

/// Accepted mnemonics for each required curve, matched case-insensitively.
const ALIASES: [(Curve, &[&str]); 5] = [
    (Curve::Depth, &["DEPT", "DEPTH"]),
    (Curve::Rhob, &["RHOB", "RHOZ", "DEN"]),
    (Curve::Dt, &["DT", "DTC", "DTCO", "AC"]),
    (Curve::Gr, &["GR", "GRC"]),
    (Curve::Nphi, &["NPHI", "TNPH", "NPOR"]),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Version,
    Well,
    Curve,
    Other,
    Ascii,
}

struct HeaderLine<'a> {
    mnemonic: &'a str,
    data: &'a str,
}

/// `MNEM.UNIT  DATA : DESCRIPTION`. The unit runs from the first period to the
/// next whitespace; data runs to the last colon.
fn split_header_line(line: &str) -> Option<HeaderLine<'_>> {
    let dot = line.find('.')?;
    let mnemonic = line[..dot].trim();
    let rest = &line[dot + 1..];
    let unit_end = rest
        .find(|c: char| c.is_whitespace() || c == ':')
        .unwrap_or(rest.len());
    let after_unit = &rest[unit_end..];
    let data = match after_unit.rfind(':') {
        Some(colon) => &after_unit[..colon],
        None => after_unit,
    };
    Some(HeaderLine {
        mnemonic,
        data: data.trim(),
    })
}

/// Parses one LAS file into a well. `null_value` is the default sentinel; a
/// `NULL` entry in the `~W` section overrides it.
pub fn parse_las<R: Read>(source: R, null_value: f64) -> Result<(WellLog, ParseReport)> {
    let reader = BufReader::new(source);
    let mut section = Section::None;
    let mut saw_ascii = false;
    let mut null = null_value;
    let mut well_id: Option<String> = None;
    let mut latitude = 0.0;
    let mut longitude = 0.0;
    let mut curves: Vec<String> = Vec::new();
    let mut columns: Option<[usize; 5]> = None;
    let mut report = ParseReport::default();
    let mut records = Vec::new();
    let mut any_line = false;

    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<las source>", e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        any_line = true;
        if let Some(tag) = trimmed.strip_prefix('~') {
            section = match tag.chars().next().map(|c| c.to_ascii_uppercase()) {
                Some('V') => Section::Version,
                Some('W') => Section::Well,
                Some('C') => Section::Curve,
                Some('P') | Some('O') => Section::Other,
                Some('A') => {
                    saw_ascii = true;
                    columns = Some(resolve_columns(&curves)?);
                    Section::Ascii
                }
                _ => return Err(Error::LasFormat(format!("unknown section `{trimmed}`"))),
            };
            continue;
        }
        match section {
            Section::None => {
                return Err(Error::LasFormat(format!(
                    "line {}: data before the first section",
                    lineno + 1
                )))
            }
            Section::Version => {
                let Some(h) = split_header_line(trimmed) else { continue };
                match h.mnemonic.to_ascii_uppercase().as_str() {
                    "VERS" => {
                        let v: f64 = h.data.parse().map_err(|_| {
                            Error::LasFormat(format!("bad VERS value `{}`", h.data))
                        })?;
                        if v != 2.0 {
                            return Err(Error::Unsupported(format!("LAS version {}", h.data)));
                        }
                    }
                    "WRAP" if !h.data.eq_ignore_ascii_case("NO") => {
                        return Err(Error::Unsupported(format!("WRAP={}", h.data)));
                    }
                    _ => {}
                }
            }
            Section::Well => {
                let Some(h) = split_header_line(trimmed) else { continue };
                let number = || {
                    h.data
                        .parse::<f64>()
                        .map_err(|_| Error::LasFormat(format!("bad {} value `{}`", h.mnemonic, h.data)))
                };
                match h.mnemonic.to_ascii_uppercase().as_str() {
                    "WELL" => well_id = Some(h.data.to_string()),
                    "NULL" => null = number()?,
                    "LATI" | "LAT" => latitude = number()?,
                    "LONG" | "LON" => longitude = number()?,
                    _ => {}
                }
            }
            Section::Curve => {
                if let Some(h) = split_header_line(trimmed) {
                    curves.push(h.mnemonic.to_ascii_uppercase());
                }
            }
            Section::Other => {}
            Section::Ascii => {
                let cols = columns.expect("resolved on entering ~A");
                let values = trimmed
                    .split_whitespace()
                    .map(|t| {
                        t.parse::<f64>().map_err(|_| {
                            Error::LasFormat(format!("line {}: bad number `{t}`", lineno + 1))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                if values.len() != curves.len() {
                    return Err(Error::LasFormat(format!(
                        "line {}: expected {} values, found {}",
                        lineno + 1,
                        curves.len(),
                        values.len()
                    )));
                }
                let row = [
                    Some(values[cols[0]]),
                    Some(values[cols[1]]),
                    Some(values[cols[2]]),
                    Some(values[cols[3]]),
                    Some(values[cols[4]]),
                    Some(latitude),
                    Some(longitude),
                ];
                match validate_row(row, null) {
                    RowVerdict::Accept(r) => {
                        report.accepted += 1;
                        records.push(r);
                    }
                    RowVerdict::Sentinel => {
                        report.dropped += 1;
                        report.dropped_sentinel += 1;
                    }
                    RowVerdict::Invalid => {
                        report.dropped += 1;
                        report.dropped_invalid += 1;
                    }
                }
            }
        }
    }

    if !any_line {
        return Err(Error::EmptyInput);
    }
    if !saw_ascii {
        return Err(Error::LasFormat("missing ~A section".into()));
    }
    let well_id = well_id
        .filter(|w| !w.is_empty())
        .ok_or_else(|| Error::LasFormat("~W section has no WELL entry".into()))?;
    Ok((WellLog::new(well_id, records)?, report))
}

fn resolve_columns(curves: &[String]) -> Result<[usize; 5]> {
    let mut out = [0usize; 5];
    for (slot, (curve, aliases)) in out.iter_mut().zip(ALIASES) {
        *slot = curves
            .iter()
            .position(|m| aliases.contains(&m.as_str()))
            .ok_or_else(|| Error::MissingCurve(curve.column().to_string()))?;
    }
    Ok(out)
}

pub fn read_las_file(path: &Path, null_value: f64) -> Result<(WellLog, ParseReport)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_las(file, null_value)
}
