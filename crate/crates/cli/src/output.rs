use std::fs;
use std::path::{Path, PathBuf};

use decoherence_core::wigner::PhaseSpaceField;
use decoherence_core::TimeSeries;

use crate::error::{CliError, CliResult};

pub fn format_number(v: f64) -> String {
    format!("{v:.11e}")
}

/// Files of one run. Everything written is removed again by [`OutputSink::discard`].
#[derive(Debug)]
pub struct OutputSink {
    dir: PathBuf,
    written: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

impl OutputSink {
    pub fn create(dir: &Path) -> CliResult<Self> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
            warnings: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    /// Numeric table with a single header line; an empty table still gets its header.
    pub fn write_table<I>(&mut self, name: &str, header: &[&str], rows: I) -> CliResult<PathBuf>
    where
        I: IntoIterator<Item = Vec<f64>>,
    {
        let path = self.dir.join(name);
        self.written.push(path.clone());
        let mut w = csv::Writer::from_path(&path).map_err(|e| csv_error(&path, e))?;
        w.write_record(header).map_err(|e| csv_error(&path, e))?;
        let mut count = 0usize;
        for row in rows {
            if row.len() != header.len() {
                return Err(CliError::Validation(format!(
                    "{name}: row of {} values under {} columns",
                    row.len(),
                    header.len()
                )));
            }
            w.write_record(row.iter().map(|v| format_number(*v)))
                .map_err(|e| csv_error(&path, e))?;
            count += 1;
        }
        w.flush().map_err(|e| CliError::io(&path, e))?;
        if count == 0 {
            self.warnings.push(format!("{name}: no rows, wrote header only"));
        }
        Ok(path)
    }

    pub fn write_series(&mut self, name: &str, time_col: &str, value_col: &str, s: &TimeSeries) -> CliResult<PathBuf> {
        let rows = s.times.iter().zip(&s.values).map(|(t, v)| vec![*t, *v]);
        self.write_table(name, &[time_col, value_col], rows)
    }

    /// Long format: one `(R, u, W)` row per grid point.
    pub fn write_field(&mut self, name: &str, field: &PhaseSpaceField) -> CliResult<PathBuf> {
        let rs = field.centre_grid.points();
        let us = field.u_grid.points();
        let rows = rs
            .iter()
            .enumerate()
            .flat_map(|(i, &r)| us.iter().enumerate().map(move |(j, &u)| (i, j, r, u)))
            .map(|(i, j, r, u)| vec![r, u, field.values[(i, j)]]);
        self.write_table(name, &["R [length]", "u [momentum]", "W [1/(length*momentum)]"], rows)
    }

    /// Flat `key = value` lines.
    pub fn write_metadata(&mut self, name: &str, entries: &[(String, String)]) -> CliResult<PathBuf> {
        let path = self.dir.join(name);
        self.written.push(path.clone());
        let mut text = String::new();
        for (k, v) in entries {
            text.push_str(k);
            text.push_str(" = ");
            text.push_str(&v.replace('\n', " "));
            text.push('\n');
        }
        fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }

    /// Removes every file this sink has written.
    pub fn discard(self) {
        for p in &self.written {
            let _ = fs::remove_file(p);
        }
    }

    pub fn finish(self) -> (Vec<PathBuf>, Vec<String>) {
        (self.written, self.warnings)
    }
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    let kind = match e.kind() {
        csv::ErrorKind::Io(io) => io.kind(),
        _ => std::io::ErrorKind::Other,
    };
    CliError::io(path, std::io::Error::new(kind, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rows_and_empty_header() {
        let dir = tempfile::tempdir().unwrap();
        let mut sink = OutputSink::create(dir.path()).unwrap();
        let s = TimeSeries::new("x", vec![0.0, 0.5, 1.0], vec![1.0, 0.25, -3.0]).unwrap();
        let p = sink.write_series("a.csv", "t", "P", &s).unwrap();
        let text = fs::read_to_string(p).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "t,P");
        assert_eq!(lines[2], "5.00000000000e-1,2.50000000000e-1");

        let empty = TimeSeries::new("x", vec![], vec![]).unwrap();
        let p = sink.write_series("b.csv", "t", "P", &empty).unwrap();
        assert_eq!(fs::read_to_string(p).unwrap(), "t,P\n");
        assert_eq!(sink.warnings.len(), 1);
    }

    #[test]
    fn discard_removes_written_files() {
        let dir = tempfile::tempdir().unwrap();
        let mut sink = OutputSink::create(dir.path()).unwrap();
        let p = sink.write_metadata("run.meta", &[("a".into(), "1".into())]).unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "a = 1\n");
        sink.discard();
        assert!(!p.exists());
    }

    #[test]
    fn mismatched_row_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let mut sink = OutputSink::create(dir.path()).unwrap();
        assert!(sink.write_table("c.csv", &["a", "b"], vec![vec![1.0]]).is_err());
    }
}
