//! Deterministic output plumbing: fixed float formatting and writer setup.

use anyhow::Context;
use std::io::Write;
use std::path::Path;

/// Fixed 17-significant-digit scientific notation so identical configs give
/// byte-identical files on every platform.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// File writer for `Some(path)`, stdout otherwise.
pub fn open_output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    match path {
        Some(path) => {
            let file = std::fs::File::create(path)
                .with_context(|| format!("creating output file {}", path.display()))?;
            Ok(Box::new(std::io::BufWriter::new(file)))
        }
        None => Ok(Box::new(std::io::stdout().lock())),
    }
}
