//! Signal file formats.
//!
//! Binary signals are raw little-endian f64 payloads with a JSON sidecar
//! `<path>.json` describing the grid and provenance. CSV signals carry
//! `x,value` rows and are self-describing; a sidecar is still written so the
//! provenance survives.

use crate::error::{HolderError, Result};
use crate::signal::{Extension, SampledSignal};
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::{Path, PathBuf};

/// Generator provenance recorded in the sidecar. Deterministic: parameters
/// only, no timestamps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    pub params: serde_json::Value,
}

/// Sidecar header; `length` must equal the payload length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalHeader {
    pub length: usize,
    pub x0: f64,
    pub dx: f64,
    pub extension: Extension,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_os_string();
    s.push(".json");
    PathBuf::from(s)
}

/// Write a signal with its sidecar. `.csv` paths get `x,value` text rows;
/// anything else gets the raw f64 payload.
pub fn write_signal(
    path: &Path,
    signal: &SampledSignal,
    provenance: Option<Provenance>,
) -> Result<()> {
    let header = SignalHeader {
        length: signal.len(),
        x0: signal.x0,
        dx: signal.dx,
        extension: signal.extension,
        provenance,
    };
    if path.extension().is_some_and(|e| e == "csv") {
        let mut text = String::from("x,value\n");
        for (i, v) in signal.values.iter().enumerate() {
            text.push_str(&format!("{},{}\n", signal.x(i), v));
        }
        fs::write(path, text)?;
    } else {
        let mut bytes = Vec::with_capacity(signal.len() * 8);
        for v in &signal.values {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
        fs::write(path, bytes)?;
    }
    let sidecar = serde_json::to_string_pretty(&header)
        .map_err(|e| HolderError::Parse(format!("header serialization: {e}")))?;
    fs::write(sidecar_path(path), sidecar)?;
    Ok(())
}

fn read_csv(path: &Path) -> Result<SampledSignal> {
    let text = fs::read_to_string(path)?;
    let mut xs = Vec::new();
    let mut vs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line.starts_with(|c: char| c.is_alphabetic())) {
            continue;
        }
        let mut parts = line.split(',');
        let (x, v) = match (parts.next(), parts.next()) {
            (Some(x), Some(v)) => (x.trim(), v.trim()),
            _ => {
                return Err(HolderError::Parse(format!(
                    "{}: line {} is not x,value",
                    path.display(),
                    lineno + 1
                )))
            }
        };
        xs.push(x.parse::<f64>().map_err(|e| {
            HolderError::Parse(format!("{}: line {}: {e}", path.display(), lineno + 1))
        })?);
        vs.push(v.parse::<f64>().map_err(|e| {
            HolderError::Parse(format!("{}: line {}: {e}", path.display(), lineno + 1))
        })?);
    }
    if xs.len() < 2 {
        return Err(HolderError::Parse(format!(
            "{}: needs at least 2 rows",
            path.display()
        )));
    }
    let dx = xs[1] - xs[0];
    for w in xs.windows(2) {
        if ((w[1] - w[0]) - dx).abs() > 1e-9 * dx.abs().max(1e-12) {
            return Err(HolderError::Parse(format!(
                "{}: grid is not uniform ({} then {})",
                path.display(),
                dx,
                w[1] - w[0]
            )));
        }
    }
    SampledSignal::new(vs, xs[0], dx, Extension::Periodic)
}

/// Read a signal and its header. CSV inputs may omit the sidecar (grid comes
/// from the x column, extension defaults to periodic).
pub fn read_signal(path: &Path) -> Result<(SampledSignal, Option<Provenance>)> {
    let sidecar = sidecar_path(path);
    let header: Option<SignalHeader> = match fs::read_to_string(&sidecar) {
        Ok(text) => Some(
            serde_json::from_str(&text)
                .map_err(|e| HolderError::Parse(format!("{}: {e}", sidecar.display())))?,
        ),
        Err(_) => None,
    };

    if path.extension().is_some_and(|e| e == "csv") {
        let mut signal = read_csv(path)?;
        if let Some(h) = &header {
            if h.length != signal.len() {
                return Err(HolderError::Parse(format!(
                    "header length {} does not match {} rows",
                    h.length,
                    signal.len()
                )));
            }
            signal.extension = h.extension;
        }
        return Ok((signal, header.and_then(|h| h.provenance)));
    }

    let header = header.ok_or_else(|| {
        HolderError::Parse(format!(
            "binary signal {} needs a sidecar {}",
            path.display(),
            sidecar.display()
        ))
    })?;
    let bytes = fs::read(path)?;
    if bytes.len() % 8 != 0 {
        return Err(HolderError::Parse(format!(
            "{}: payload length {} is not a multiple of 8",
            path.display(),
            bytes.len()
        )));
    }
    let values: Vec<f64> = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    if values.len() != header.length {
        return Err(HolderError::Parse(format!(
            "header length {} does not match payload length {}",
            header.length,
            values.len()
        )));
    }
    let signal = SampledSignal::new(values, header.x0, header.dx, header.extension)?;
    Ok((signal, header.provenance))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmpdir() -> PathBuf {
        let dir = std::env::temp_dir().join(format!("holder-io-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn binary_round_trip_is_bit_exact() {
        let dir = tmpdir();
        let path = dir.join("sig.f64");
        let s = SampledSignal::new(
            vec![1.5, -2.25, 1e-300, 0.1 + 0.2],
            0.25,
            0.125,
            Extension::Clamp,
        )
        .unwrap();
        let prov = Provenance {
            generator: "weierstrass".into(),
            params: serde_json::json!({"a": 0.5, "b": 2}),
        };
        write_signal(&path, &s, Some(prov.clone())).unwrap();
        let (t, p) = read_signal(&path).unwrap();
        assert_eq!(s, t);
        assert_eq!(p, Some(prov));
    }

    #[test]
    fn csv_round_trip_preserves_grid() {
        let dir = tmpdir();
        let path = dir.join("sig.csv");
        let s = SampledSignal::from_fn(|x| x * x, 64, -1.0, 0.05, Extension::Periodic).unwrap();
        write_signal(&path, &s, None).unwrap();
        let (t, _) = read_signal(&path).unwrap();
        assert_eq!(s.len(), t.len());
        assert!((s.x0 - t.x0).abs() < 1e-12);
        assert!((s.dx - t.dx).abs() < 1e-12);
        for (a, b) in s.values.iter().zip(&t.values) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn missing_sidecar_for_binary_is_an_error() {
        let dir = tmpdir();
        let path = dir.join("naked.f64");
        fs::write(&path, [0u8; 16]).unwrap();
        let _ = fs::remove_file(sidecar_path(&path));
        assert!(matches!(read_signal(&path), Err(HolderError::Parse(_))));
    }

    #[test]
    fn length_mismatch_is_detected() {
        let dir = tmpdir();
        let path = dir.join("short.f64");
        let s = SampledSignal::new(vec![1.0, 2.0, 3.0], 0.0, 1.0, Extension::Periodic).unwrap();
        write_signal(&path, &s, None).unwrap();
        fs::write(&path, [0u8; 16]).unwrap(); // truncate payload to 2 values
        assert!(matches!(read_signal(&path), Err(HolderError::Parse(_))));
    }
}
