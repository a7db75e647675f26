//! Files: sketches, decision tables, traces, plots and synthetic data.

pub mod ingest;
pub mod sketch_file;
pub mod svg;
pub mod synthetic;
pub mod trace;

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::Result;

pub use ingest::{ingest, IngestFormat, IngestReport, LabelMap};
pub use sketch_file::{load_sketch, save_sketch, sketch_from_json, sketch_to_json};
pub use svg::render_traces;
pub use synthetic::{generate_synthetic, GeneratorParams};
pub use trace::{load_trace_json, trace_to_csv, trace_to_json};

/// Replaces `path` with `contents` in one step: the data goes to a sibling
/// temporary file which is then renamed over the target.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn atomic_write_unwritable() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("missing").join("x.txt");
        assert!(write_atomic(&p, b"x").is_err());
    }
}
