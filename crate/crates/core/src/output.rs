//! CSV output for trajectories and grids.

use crate::error::{Error, Result};

/// Shortest fixed format that round-trips an `f64`: 17 significant digits.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Header line followed by one line per row, LF terminated; fields are quoted when needed.
pub fn emit_csv<S: AsRef<str>>(header: &[S], rows: &[Vec<String>]) -> Result<String> {
    for (i, row) in rows.iter().enumerate() {
        if row.len() != header.len() {
            return Err(Error::RaggedRow {
                row: i,
                expected: header.len(),
                found: row.len(),
            });
        }
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = |e: csv::Error| Error::Invalid(format!("csv: {e}"));
    w.write_record(header.iter().map(AsRef::as_ref)).map_err(io)?;
    for row in rows {
        w.write_record(row).map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Invalid(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Invalid(format!("csv: {e}")))
}

/// [`emit_csv`] for purely numeric rows.
pub fn emit_float_csv<S: AsRef<str>>(header: &[S], rows: &[Vec<f64>]) -> Result<String> {
    let text: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.iter().copied().map(format_float).collect())
        .collect();
    emit_csv(header, &text)
}
