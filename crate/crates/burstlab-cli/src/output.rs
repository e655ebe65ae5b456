//! CSV/metadata writers shared by the subcommands.
//!
//! Every result file starts with `#`-prefixed metadata lines (`key = value`)
//! followed by comma-separated numeric rows in a fixed column order. Sidecar
//! `.meta` files carry the full parameter provenance of trajectory runs.

use burstlab::{Error, Result};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::{Path, PathBuf};

pub type Meta = Vec<(String, String)>;

pub fn kv(key: &str, value: impl ToString) -> (String, String) {
    (key.to_string(), value.to_string())
}

pub const VERSION_KEY: &str = "burstlab_version";

pub fn version_entry() -> (String, String) {
    kv(VERSION_KEY, env!("CARGO_PKG_VERSION"))
}

pub fn file_sha256(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path)?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    let digest = hasher.finalize();
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

/// Write a sidecar of flat key=value lines next to a trajectory.
pub fn write_sidecar(path: &Path, meta: &Meta) -> Result<()> {
    let mut out = String::new();
    for (k, v) in meta {
        out.push_str(&format!("{k} = {v}\n"));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Write a CSV table: `# title`, metadata lines, a `# columns = ...` line,
/// then the rows.
pub fn write_table_to(
    w: &mut (impl Write + ?Sized),
    title: &str,
    meta: &Meta,
    columns: &[&str],
    rows: impl Iterator<Item = Vec<f64>>,
) -> Result<()> {
    writeln!(w, "# {title}")?;
    for (k, v) in meta {
        writeln!(w, "# {k} = {v}")?;
    }
    writeln!(w, "# columns = {}", columns.join(","))?;
    for row in rows {
        let line = row
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",");
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// [`write_table_to`] targeting a file.
pub fn write_table(
    path: &Path,
    title: &str,
    meta: &Meta,
    columns: &[&str],
    rows: impl Iterator<Item = Vec<f64>>,
) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    write_table_to(&mut w, title, meta, columns, rows)
}

/// Read a table written by [`write_table`]: title line, metadata, rows.
pub fn read_table(path: &Path) -> Result<(String, Meta, Vec<Vec<f64>>)> {
    let text = std::fs::read_to_string(path)?;
    let mut title = String::new();
    let mut meta = Vec::new();
    let mut rows = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.split_once('=') {
                meta.push((k.trim().to_string(), v.trim().to_string()));
            } else if title.is_empty() {
                title = rest.trim().to_string();
            }
            continue;
        }
        let row = line
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Format(format!("bad numeric cell '{c}'")))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok((title, meta, rows))
}

pub fn meta_value<'m>(meta: &'m Meta, key: &str) -> Option<&'m str> {
    meta.iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
}

/// Ensure a directory exists and return the joined file path.
pub fn in_dir(dir: &Path, name: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    Ok(dir.join(name))
}
