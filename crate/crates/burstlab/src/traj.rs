//! Trajectory file formats.
//!
//! Text form: `#`-prefixed header lines (`key = value`, always including
//! `t0`, `dt` and `n_samples`) followed by one value per line. Binary form:
//! an 8-byte magic, `t0`, `dt`, the length and the raw little-endian values.
//! [`load`] sniffs the format from the magic.

use crate::error::{Error, Result};
use crate::timeseries::TimeSeries;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

const MAGIC: &[u8; 8] = b"BLTRAJ1\n";

/// On-disk trajectory encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajFormat {
    Csv,
    Binary,
}

impl std::str::FromStr for TrajFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(TrajFormat::Csv),
            "binary" | "bin" => Ok(TrajFormat::Binary),
            other => Err(Error::invalid(format!(
                "unknown trajectory format '{other}' (expected csv or binary)"
            ))),
        }
    }
}

/// Write the text form. `extra_meta` lines are emitted after the mandatory
/// grid keys, in the given order.
pub fn write_csv<W: Write>(
    w: &mut W,
    series: &TimeSeries,
    extra_meta: &[(String, String)],
) -> Result<()> {
    writeln!(w, "# burstlab trajectory v1")?;
    writeln!(w, "# t0 = {}", series.t0())?;
    writeln!(w, "# dt = {}", series.dt())?;
    writeln!(w, "# n_samples = {}", series.len())?;
    for (k, v) in extra_meta {
        writeln!(w, "# {k} = {v}")?;
    }
    for v in series.values() {
        writeln!(w, "{v}")?;
    }
    Ok(())
}

/// Read the text form, returning the series and all header key/value pairs.
pub fn read_csv<R: BufRead>(r: R) -> Result<(TimeSeries, Vec<(String, String)>)> {
    let mut meta = Vec::new();
    let mut values = Vec::new();
    for line in r.lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.split_once('=') {
                meta.push((k.trim().to_string(), v.trim().to_string()));
            }
            continue;
        }
        // tolerate trailing comma-separated columns; the value is column one
        let first = line.split(',').next().unwrap();
        values.push(first.trim().parse::<f64>().map_err(|_| {
            Error::Format(format!("bad sample line: '{line}'"))
        })?);
    }
    let lookup = |key: &str| -> Result<f64> {
        meta.iter()
            .find(|(k, _)| k == key)
            .ok_or_else(|| Error::Format(format!("missing header key '{key}'")))?
            .1
            .parse::<f64>()
            .map_err(|_| Error::Format(format!("bad header value for '{key}'")))
    };
    let t0 = lookup("t0")?;
    let dt = lookup("dt")?;
    let n = lookup("n_samples")? as usize;
    if n != values.len() {
        return Err(Error::Format(format!(
            "header says {n} samples, file holds {}",
            values.len()
        )));
    }
    Ok((TimeSeries::new(t0, dt, values)?, meta))
}

/// Write the binary form.
pub fn write_binary<W: Write>(w: &mut W, series: &TimeSeries) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&series.t0().to_le_bytes())?;
    w.write_all(&series.dt().to_le_bytes())?;
    w.write_all(&(series.len() as u64).to_le_bytes())?;
    for v in series.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

/// Read the binary form.
pub fn read_binary<R: Read>(r: &mut R) -> Result<TimeSeries> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format("bad trajectory magic".to_string()));
    }
    let mut buf8 = [0u8; 8];
    r.read_exact(&mut buf8)?;
    let t0 = f64::from_le_bytes(buf8);
    r.read_exact(&mut buf8)?;
    let dt = f64::from_le_bytes(buf8);
    r.read_exact(&mut buf8)?;
    let n = u64::from_le_bytes(buf8) as usize;
    let mut raw = Vec::new();
    r.read_to_end(&mut raw)?;
    if raw.len() != n * 8 {
        return Err(Error::Format(format!(
            "expected {n} samples, payload holds {}",
            raw.len() / 8
        )));
    }
    let values = raw
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    TimeSeries::new(t0, dt, values)
}

/// Save in the requested format; CSV carries the metadata inline.
pub fn save(
    path: &Path,
    series: &TimeSeries,
    format: TrajFormat,
    extra_meta: &[(String, String)],
) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    match format {
        TrajFormat::Csv => write_csv(&mut f, series, extra_meta)?,
        TrajFormat::Binary => write_binary(&mut f, series)?,
    }
    Ok(())
}

/// Load either format, sniffing the binary magic.
pub fn load(path: &Path) -> Result<(TimeSeries, Vec<(String, String)>)> {
    let mut f = std::fs::File::open(path)?;
    let mut magic = [0u8; 8];
    let got = f.read(&mut magic)?;
    if got == 8 && &magic == MAGIC {
        let mut f = std::fs::File::open(path)?;
        Ok((read_binary(&mut f)?, Vec::new()))
    } else {
        let f = std::fs::File::open(path)?;
        read_csv(BufReader::new(f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn csv_roundtrip_with_meta() {
        let s = TimeSeries::new(0.5, 0.125, vec![1.0, -2.25, 3.5e-7]).unwrap();
        let meta = vec![("seed".to_string(), "42".to_string())];
        let mut buf = Vec::new();
        write_csv(&mut buf, &s, &meta).unwrap();
        let (back, m) = read_csv(&buf[..]).unwrap();
        assert_eq!(back, s);
        assert!(m.iter().any(|(k, v)| k == "seed" && v == "42"));
    }

    #[test]
    fn rejects_malformed_csv() {
        assert!(read_csv("# t0 = 0\n# dt = 1\n# n_samples = 2\n1.0\n".as_bytes()).is_err());
        assert!(read_csv("# dt = 1\n# n_samples = 1\n1.0\n".as_bytes()).is_err());
        assert!(read_csv("# t0 = 0\n# dt = 1\n# n_samples = 1\nnope\n".as_bytes()).is_err());
    }

    #[test]
    fn binary_magic_checked() {
        let mut bogus: &[u8] = b"NOTMAGIC00000000";
        assert!(read_binary(&mut bogus).is_err());
    }

    proptest! {
        #[test]
        fn roundtrip_both_formats(
            values in proptest::collection::vec(-1e12f64..1e12, 1..200),
            t0 in -1e6f64..1e6,
            dt in 1e-9f64..1e3,
        ) {
            let s = TimeSeries::new(t0, dt, values).unwrap();
            let mut csv = Vec::new();
            write_csv(&mut csv, &s, &[]).unwrap();
            let (from_csv, _) = read_csv(&csv[..]).unwrap();
            prop_assert_eq!(&from_csv, &s);

            let mut bin = Vec::new();
            write_binary(&mut bin, &s).unwrap();
            let from_bin = read_binary(&mut &bin[..]).unwrap();
            prop_assert_eq!(&from_bin, &s);
        }
    }
}
