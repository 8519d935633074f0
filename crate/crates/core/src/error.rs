//! Error type shared by all library modules.

use thiserror::Error;

/// Errors produced by the library.
///
/// Variants are grouped by the failure class they report: configuration
/// mistakes, shape mismatches, file parsing, and numeric breakdowns. The
/// CLI maps these classes onto distinct process exit codes.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration (bad parameter value, inconsistent spec).
    #[error("config error: {0}")]
    Config(String),

    /// Dimension mismatch in a linear-algebra operation.
    #[error("shape error in {context}: expected {expected}, got {got}")]
    Shape {
        context: String,
        expected: String,
        got: String,
    },

    /// IDX file carries the wrong magic number.
    #[error("{path}: wrong magic in {field}: expected {expected:#010x}, got {got:#010x}")]
    IdxMagic {
        path: String,
        field: &'static str,
        expected: u32,
        got: u32,
    },

    /// IDX file ended before the declared payload.
    #[error("{path}: truncated file while reading {field}: need {needed} bytes, have {available}")]
    IdxTruncated {
        path: String,
        field: &'static str,
        needed: usize,
        available: usize,
    },

    /// Image and label files disagree on the sample count.
    #[error("dataset count mismatch: {images} images vs {labels} labels")]
    CountMismatch { images: usize, labels: usize },

    /// Model file does not start with the expected magic string.
    #[error("model file: bad magic {got:?}, expected \"ONNM\"")]
    ModelMagic { got: [u8; 4] },

    /// Model file format version is not supported.
    #[error("model file: unsupported version {found} (supported: {supported})")]
    ModelVersion { found: u32, supported: u32 },

    /// Model file ended mid-record.
    #[error("model file: unexpected end of file at offset {offset}")]
    ModelEof { offset: u64 },

    /// Model file payload is inconsistent (bad tag, trailing bytes, ...).
    #[error("model file: {0}")]
    ModelFormat(String),

    /// A non-finite value appeared during computation.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// Underlying I/O failure.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn shape(
        context: impl Into<String>,
        expected: impl Into<String>,
        got: impl Into<String>,
    ) -> Self {
        Error::Shape {
            context: context.into(),
            expected: expected.into(),
            got: got.into(),
        }
    }

    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
