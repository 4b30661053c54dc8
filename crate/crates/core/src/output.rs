//! CSV and JSON emission. CSV uses `,`, `.` radix and LF line endings.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};

/// Writes `rows` as CSV with a header taken from the row type's fields.
pub fn write_csv<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: "<csv output>".into(),
        source,
    })
}

/// Pretty JSON followed by a newline.
pub fn to_json_line<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
