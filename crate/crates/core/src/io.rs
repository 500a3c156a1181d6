//! Number formatting and atomic file output shared by the CLI and library writers.

use std::io::Write;
use std::path::Path;

use crate::error::Result;

/// Rounds to `precision` significant digits and prints the shortest decimal
/// that round-trips the rounded value (`2` prints as `2.0`).
pub fn fmt_float(x: f64, precision: usize) -> String {
    if !x.is_finite() || x == 0.0 {
        return format!("{:?}", x);
    }
    let p = precision.clamp(1, 17);
    let rounded: f64 = format!("{:.*e}", p - 1, x).parse().unwrap_or(x);
    format!("{:?}", rounded)
}

/// Writes through a temporary file in the target directory, then renames it
/// into place, so readers never observe a partial file.
pub fn write_atomic(path: &Path, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    {
        let mut w = std::io::BufWriter::new(tmp.as_file_mut());
        f(&mut w)?;
        w.flush()?;
    }
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
