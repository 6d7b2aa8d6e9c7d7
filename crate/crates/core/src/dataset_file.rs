//! Text dataset files: one series per line, the first token an integer class
//! label (absent in unlabeled files), tokens separated by whitespace or commas.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::series::{Label, LabeledDataset, TimeSeries};

fn tokens(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
}

fn parse_label(token: &str) -> Option<Label> {
    if let Ok(v) = token.parse::<Label>() {
        return Some(v);
    }
    // UCR files often write labels as floats, e.g. "1.0000000e+00"
    let v: f64 = token.parse().ok()?;
    (v.fract() == 0.0 && v.abs() < 2f64.powi(53)).then_some(v as Label)
}

/// Numeric rows of a file with their 1-based line numbers; blank lines skipped.
fn rows<'a>(text: &'a str, path: &Path) -> Result<Vec<(usize, Vec<&'a str>)>> {
    let rows: Vec<(usize, Vec<&'a str>)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, tokens(l).collect::<Vec<_>>()))
        .filter(|(_, t)| !t.is_empty())
        .collect();
    if let Some((first_line, first)) = rows.first() {
        if let Some((line, row)) = rows.iter().find(|(_, r)| r.len() != first.len()) {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: *line,
                message: format!(
                    "row has {} fields, line {first_line} has {}",
                    row.len(),
                    first.len()
                ),
            });
        }
    }
    Ok(rows)
}

fn parse_values(fields: &[&str], path: &Path, line: usize) -> Result<TimeSeries> {
    let values = fields
        .iter()
        .map(|t| {
            t.parse::<f64>().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("not a number: {t:?}"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    TimeSeries::new(values).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line,
        message: e.to_string(),
    })
}

fn parse_labeled_row(fields: &[&str], path: &Path, line: usize) -> Result<(TimeSeries, Label)> {
    let label = parse_label(fields[0]).ok_or_else(|| Error::Parse {
        path: path.to_path_buf(),
        line,
        message: format!("class label {:?} is not an integer", fields[0]),
    })?;
    Ok((parse_values(&fields[1..], path, line)?, label))
}

pub fn parse_labeled(text: &str, path: &Path) -> Result<LabeledDataset> {
    let rows = rows(text, path)?;
    if rows.is_empty() {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: "no series in file".into(),
        });
    }
    let items = rows
        .iter()
        .map(|(line, fields)| parse_labeled_row(fields, path, *line))
        .collect::<Result<Vec<_>>>()?;
    LabeledDataset::new(items)
}

/// Series to classify. Rows carrying one field more than `series_length`
/// are taken as labeled, and their labels are returned alongside.
pub fn parse_queries(
    text: &str,
    path: &Path,
    series_length: usize,
) -> Result<(Vec<TimeSeries>, Option<Vec<Label>>)> {
    let rows = rows(text, path)?;
    let Some((line, first)) = rows.first() else {
        return Ok((Vec::new(), None));
    };
    if first.len() == series_length + 1 {
        let (series, labels) = rows
            .iter()
            .map(|(line, fields)| parse_labeled_row(fields, path, *line))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .unzip();
        Ok((series, Some(labels)))
    } else if first.len() == series_length {
        let series = rows
            .iter()
            .map(|(line, fields)| parse_values(fields, path, *line))
            .collect::<Result<Vec<_>>>()?;
        Ok((series, None))
    } else {
        Err(Error::Parse {
            path: path.to_path_buf(),
            line: *line,
            message: format!(
                "row has {} fields, expected {series_length} samples with an optional label",
                first.len()
            ),
        })
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_labeled(path: &Path) -> Result<LabeledDataset> {
    parse_labeled(&read_text(path)?, path)
}

/// Formats a dataset in the same layout it is parsed from.
pub fn format_labeled(data: &LabeledDataset) -> String {
    let mut out = String::new();
    for (series, label) in data.items() {
        out.push_str(&label.to_string());
        for v in series.iter() {
            out.push(' ');
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    out
}
