//! Dataset ingestion, the `OPRFMAT1` matrix container, experiment manifests
//! and small persistence helpers.

pub mod container;
pub mod csv;
#[cfg(feature = "fetch")]
pub mod fetch;
pub mod manifest;
pub mod synthetic;

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};

pub use container::{load_matrix, load_matrix_any, load_matrix_u8, read_header, save_matrix, save_matrix_u8, Dtype, MatrixData};
pub use self::csv::{load_csv, load_csv_dataset, load_csv_matrix, parse_csv, save_csv, CsvTable};
pub use manifest::ExperimentManifest;
pub use synthetic::{synthetic_blobs, BlobsConfig};

/// Environment variable naming the download cache directory.
pub const CACHE_DIR_ENV: &str = "OPTRF_CACHE_DIR";

/// `$OPTRF_CACHE_DIR`, else `$HOME/.cache/optrf`, else `.optrf-cache`.
pub fn default_cache_dir() -> PathBuf {
    if let Some(dir) = std::env::var_os(CACHE_DIR_ENV) {
        return PathBuf::from(dir);
    }
    match std::env::var_os("HOME") {
        Some(home) => PathBuf::from(home).join(".cache").join("optrf"),
        None => PathBuf::from(".optrf-cache"),
    }
}

fn partial_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".partial");
    path.with_file_name(name)
}

/// Write through a sibling `.partial` file and rename it into place, so
/// readers never observe a half-written file.
pub fn write_atomic(path: &Path, write: impl FnOnce(&mut BufWriter<fs::File>) -> std::io::Result<()>) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let tmp = partial_path(path);
    let file = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    let mut w = BufWriter::new(file);
    let done = write(&mut w).and_then(|_| w.flush());
    drop(w);
    if let Err(e) = done {
        let _ = fs::remove_file(&tmp);
        return Err(Error::io(path, e));
    }
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    write_atomic(path, |w| {
        w.write_all(text.as_bytes())?;
        w.write_all(b"\n")
    })
}
