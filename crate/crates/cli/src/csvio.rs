//! CSV emission helpers. Every file gets a header row; floating-point
//! values are serialized with 17 significant digits so that re-runs can be
//! compared byte for byte.

use std::io::Write;
use std::path::Path;

use onn_core::{Error, Result};

/// 17 significant digits, scientific notation.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct CsvFile {
    writer: std::io::BufWriter<std::fs::File>,
    path: std::path::PathBuf,
}

impl CsvFile {
    pub fn create(path: &Path, header: &[&str]) -> Result<CsvFile> {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)
                    .map_err(|e| Error::io(parent.display().to_string(), e))?;
            }
        }
        let file = std::fs::File::create(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        let mut csv = CsvFile {
            writer: std::io::BufWriter::new(file),
            path: path.to_path_buf(),
        };
        csv.raw_row(header)?;
        Ok(csv)
    }

    pub fn raw_row(&mut self, fields: &[&str]) -> Result<()> {
        writeln!(self.writer, "{}", fields.join(","))
            .map_err(|e| Error::io(self.path.display().to_string(), e))
    }

    pub fn row(&mut self, fields: &[CsvValue]) -> Result<()> {
        let rendered: Vec<String> = fields.iter().map(|f| f.render()).collect();
        let refs: Vec<&str> = rendered.iter().map(String::as_str).collect();
        self.raw_row(&refs)
    }

    pub fn finish(mut self) -> Result<std::path::PathBuf> {
        self.writer
            .flush()
            .map_err(|e| Error::io(self.path.display().to_string(), e))?;
        Ok(self.path)
    }
}

/// One CSV cell.
pub enum CsvValue {
    Float(f64),
    Int(u64),
    Text(String),
}

impl CsvValue {
    fn render(&self) -> String {
        match self {
            CsvValue::Float(x) => fmt_f64(*x),
            CsvValue::Int(n) => n.to_string(),
            CsvValue::Text(s) => s.clone(),
        }
    }
}
