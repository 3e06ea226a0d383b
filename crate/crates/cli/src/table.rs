//! CSV tables with a lossless number format, plus gnuplot companions.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::CliError;

/// `{:.16e}`: 17 significant digits, enough to round-trip any `f64`.
/// Negative zero is written as zero.
pub fn format_real(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

/// A header and rows of already formatted cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(
            row.len(),
            self.header.len(),
            "row width differs from header"
        );
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), CliError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush().map_err(|e| CliError::io("writing csv", e))
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("cells are utf-8")
    }
}

/// Writes a gnuplot script next to `csv_path` plotting every column listed in
/// `columns` (1-based) against the first. Returns the script path.
pub fn write_gnuplot(
    csv_path: &Path,
    table: &Table,
    columns: &[usize],
    logscale_y: bool,
) -> Result<std::path::PathBuf, CliError> {
    let script = csv_path.with_extension("gp");
    let name = csv_path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set key outside right\n");
    s.push_str(&format!("set xlabel '{}'\n", table.header()[0]));
    if logscale_y {
        s.push_str("set logscale y\n");
    }
    let plots: Vec<String> = columns
        .iter()
        .map(|&c| {
            format!(
                "'{name}' using 1:{c} every ::1 with linespoints title '{}'",
                table.header()[c - 1]
            )
        })
        .collect();
    s.push_str(&format!("plot {}\n", plots.join(", \\\n     ")));
    s.push_str("pause mouse close\n");
    fs::write(&script, s).map_err(|e| CliError::io(format!("writing {}", script.display()), e))?;
    Ok(script)
}
