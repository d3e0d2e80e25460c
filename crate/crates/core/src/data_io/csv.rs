//! Headerless numeric CSV, optionally with an integer label in the last column.

use std::io::Read;
use std::path::Path;

use ndarray::Array2;

use super::write_atomic;
use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub features: Array2<f64>,
    pub labels: Option<Vec<usize>>,
}

impl CsvTable {
    pub fn rows(&self) -> usize {
        self.features.nrows()
    }

    pub fn cols(&self) -> usize {
        self.features.ncols()
    }
}

fn parse_label(cell: &str) -> Option<usize> {
    if let Ok(v) = cell.parse::<usize>() {
        return Some(v);
    }
    // tolerate "1.0"-style integral floats
    let v: f64 = cell.parse().ok()?;
    (v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64).then_some(v as usize)
}

/// Parse CSV from a reader; `name` only labels errors. Rows and columns in
/// errors are 1-based.
pub fn parse_csv<R: Read>(reader: R, name: &str, has_labels: bool) -> Result<CsvTable> {
    let mut rdr = ::csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(::csv::Trim::All)
        .from_reader(reader);
    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut width = None;
    let mut rows = 0;
    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::CsvParse {
            path: name.to_string(),
            row,
            col: 0,
            reason: e.to_string(),
        })?;
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::CsvRagged {
                path: name.to_string(),
                row,
                expected,
                found: record.len(),
            });
        }
        if has_labels && expected < 2 {
            return Err(Error::CsvParse {
                path: name.to_string(),
                row,
                col: expected,
                reason: "need at least one feature column before the label".into(),
            });
        }
        let n_feat = if has_labels { expected - 1 } else { expected };
        for (j, cell) in record.iter().enumerate() {
            let bad = |reason: &str| Error::CsvParse {
                path: name.to_string(),
                row,
                col: j + 1,
                reason: format!("{reason} {cell:?}"),
            };
            if j < n_feat {
                let v: f64 = cell.parse().map_err(|_| bad("non-numeric cell"))?;
                values.push(v);
            } else {
                labels.push(parse_label(cell).ok_or_else(|| bad("invalid label"))?);
            }
        }
        rows += 1;
    }
    let Some(width) = width else {
        return Err(Error::CsvEmpty(name.to_string()));
    };
    let cols = if has_labels { width - 1 } else { width };
    let features = Array2::from_shape_vec((rows, cols), values).expect("row widths checked");
    Ok(CsvTable {
        features,
        labels: has_labels.then_some(labels),
    })
}

pub fn load_csv(path: &Path, has_labels: bool) -> Result<CsvTable> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let table = parse_csv(file, &path.display().to_string(), has_labels)?;
    log::info!("read {} x {} from {}", table.rows(), table.cols(), path.display());
    Ok(table)
}

pub fn load_csv_matrix(path: &Path) -> Result<Array2<f64>> {
    Ok(load_csv(path, false)?.features)
}

/// Labeled CSV with `num_classes = max(label) + 1`.
pub fn load_csv_dataset(path: &Path) -> Result<LabeledDataset<f64>> {
    let t = load_csv(path, true)?;
    LabeledDataset::from_labels(t.features, t.labels.expect("labels requested"))
}

/// Write a matrix as headerless CSV using shortest round-trip formatting.
pub fn save_csv(path: &Path, m: &Array2<f64>) -> Result<()> {
    use std::io::Write;
    write_atomic(path, |w| {
        for row in m.outer_iter() {
            let line: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    })
}
