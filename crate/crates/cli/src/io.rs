use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use steinkit::discrepancy::SampleSet;

use crate::CliError;

/// Reads a headerless CSV with one point per row.
///
/// Rows are numbered from 1 in error messages.
pub fn read_samples(path: &Path) -> Result<SampleSet, CliError> {
    let file = File::open(path).map_err(|e| CliError::Input(format!("cannot open {}: {e}", path.display())))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(file);
    let mut points = Vec::new();
    let mut dim = None;
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| CliError::Input(format!("{}: row {row}: {e}", path.display())))?;
        if dim.is_some_and(|d| d != record.len()) {
            return Err(CliError::Input(format!("{}: row {row} has {} columns, expected {}", path.display(), record.len(), dim.unwrap())));
        }
        dim = Some(record.len());
        for (j, field) in record.iter().enumerate() {
            let v: f64 = field
                .parse()
                .map_err(|_| CliError::Input(format!("{}: row {row} column {}: cannot parse {field:?}", path.display(), j + 1)))?;
            if !v.is_finite() {
                return Err(CliError::Input(format!("{}: row {row} column {}: non-finite value {field}", path.display(), j + 1)));
            }
            points.push(v);
        }
    }
    let dim = dim.ok_or_else(|| CliError::Input(format!("{}: no samples", path.display())))?;
    SampleSet::new(points, dim).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Destination for command output: a file or standard output.
pub fn sink(output: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    match output {
        Some(p) => {
            let f = File::create(p).map_err(|e| CliError::Input(format!("cannot create {}: {e}", p.display())))?;
            Ok(Box::new(io::BufWriter::new(f)))
        }
        None => Ok(Box::new(io::stdout().lock())),
    }
}

pub fn write_json<T: Serialize>(output: Option<&Path>, value: &T) -> Result<(), CliError> {
    let mut w = sink(output)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| CliError::Io(e.to_string()))
}

/// Writes rows with a header taken from the field names of `T`.
pub fn write_csv<T: Serialize>(output: Option<&Path>, rows: &[T]) -> Result<(), CliError> {
    let w = sink(output)?;
    let mut writer = csv::Writer::from_writer(w);
    for r in rows {
        writer.serialize(r).map_err(|e| CliError::Io(e.to_string()))?;
    }
    writer.flush().map_err(|e| CliError::Io(e.to_string()))
}

/// Writes a header and rows of numbers.
pub fn write_table(output: Option<&Path>, header: &[String], rows: &[Vec<f64>]) -> Result<(), CliError> {
    let w = sink(output)?;
    let mut writer = csv::Writer::from_writer(w);
    writer.write_record(header).map_err(|e| CliError::Io(e.to_string()))?;
    for r in rows {
        writer.write_record(r.iter().map(|v| v.to_string())).map_err(|e| CliError::Io(e.to_string()))?;
    }
    writer.flush().map_err(|e| CliError::Io(e.to_string()))
}
