//! Numeric CSV tables with an optional label column.
//!
//! The first row is taken as a header when none of its feature cells parse
//! as numbers. Label cells that are all integers are kept as given; any other
//! labels are numbered in order of first appearance.

use std::collections::HashMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use fcagraph_core::Dataset;

use crate::error::{io_error, Error, Result};

/// Which column holds the class labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    Index(usize),
    Name(String),
}

impl FromStr for LabelColumn {
    type Err = std::convert::Infallible;

    /// Digits select a column index, anything else a header name.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.parse() {
            Ok(i) => LabelColumn::Index(i),
            Err(_) => LabelColumn::Name(s.to_string()),
        })
    }
}

pub fn load_csv(path: impl AsRef<Path>, label: Option<&LabelColumn>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(io_error(path))?;
    read_csv(file, label)
}

pub fn read_csv<R: Read>(reader: R, label: Option<&LabelColumn>) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let records = rdr.records().collect::<std::result::Result<Vec<_>, _>>()?;
    let Some(first) = records.first() else {
        return Err(Error::EmptyFile);
    };
    let width = first.len();

    let label_idx = match label {
        None => None,
        Some(LabelColumn::Index(i)) if *i < width => Some(*i),
        Some(LabelColumn::Index(i)) => return Err(Error::LabelColumn(i.to_string())),
        Some(LabelColumn::Name(name)) => match first.iter().position(|c| c == name) {
            Some(i) => Some(i),
            None => return Err(Error::LabelColumn(name.clone())),
        },
    };
    let has_header = matches!(label, Some(LabelColumn::Name(_)))
        || first
            .iter()
            .enumerate()
            .filter(|&(c, _)| Some(c) != label_idx)
            .all(|(_, cell)| cell.parse::<f64>().is_err());

    let skip = usize::from(has_header);
    if records.len() <= skip {
        return Err(Error::EmptyFile);
    }
    let n = records.len() - skip;
    let m = width - usize::from(label_idx.is_some());
    let mut values = Vec::with_capacity(n * m);
    let mut raw_labels = Vec::with_capacity(if label_idx.is_some() { n } else { 0 });
    for (row, record) in records.iter().enumerate().skip(skip) {
        if record.len() != width {
            return Err(Error::RaggedRow {
                row,
                found: record.len(),
                expected: width,
            });
        }
        for (column, cell) in record.iter().enumerate() {
            if Some(column) == label_idx {
                raw_labels.push(cell.to_string());
                continue;
            }
            let v: f64 = cell.parse().map_err(|_| Error::NonNumeric {
                row,
                column,
                cell: cell.to_string(),
            })?;
            if !v.is_finite() {
                return Err(Error::NonFinite { row, column });
            }
            values.push(v);
        }
    }
    let labels = label_idx.map(|_| encode_labels(&raw_labels));
    Ok(Dataset::from_flat(values, n, m, labels)?)
}

fn encode_labels(raw: &[String]) -> Vec<i64> {
    if let Ok(ints) = raw.iter().map(|s| s.parse::<i64>()).collect() {
        return ints;
    }
    let mut ids: HashMap<&str, i64> = HashMap::new();
    raw.iter()
        .map(|s| {
            let next = ids.len() as i64;
            *ids.entry(s.as_str()).or_insert(next)
        })
        .collect()
}

/// Writes a header `f0,f1,...` (plus `label` when the dataset has labels)
/// followed by one row per point.
pub fn write_csv<W: Write>(data: &Dataset, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<String> = (0..data.dim()).map(|j| format!("f{j}")).collect();
    if data.labels().is_some() {
        header.push("label".into());
    }
    w.write_record(&header)?;
    let mut row = Vec::with_capacity(header.len());
    for (i, point) in data.points().enumerate() {
        row.clear();
        row.extend(point.iter().map(f64::to_string));
        if let Some(labels) = data.labels() {
            row.push(labels[i].to_string());
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn save_csv(data: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(io_error(path))?;
    write_csv(data, std::io::BufWriter::new(file))
}
