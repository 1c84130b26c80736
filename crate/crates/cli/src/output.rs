//! Deterministic file output: CSV, legacy VTK structured points, JSON, and
//! the sidecar metadata (tool version plus config hash, no timestamps, so
//! identical configs give byte-identical files).

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde_json::json;

use crate::config::GridConfig;

/// 17 significant digits: round-trips f64 exactly.
pub fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// FNV-1a 64-bit over the canonical (key-sorted) JSON encoding.
pub fn config_hash(value: &serde_json::Value) -> String {
    let canonical = value.to_string();
    let mut h: u64 = 0xcbf29ce484222325;
    for byte in canonical.as_bytes() {
        h ^= u64::from(*byte);
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}

pub fn write_metadata(
    out: &Path,
    command: &str,
    config: &serde_json::Value,
    extra: serde_json::Value,
) -> std::io::Result<()> {
    let meta = json!({
        "tool": "gasdyn",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config_hash": config_hash(config),
        "details": extra,
    });
    let path = out.with_extension(format!(
        "{}meta.json",
        out.extension()
            .map(|e| format!("{}.", e.to_string_lossy()))
            .unwrap_or_default()
    ));
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{}", serde_json::to_string_pretty(&meta)?)?;
    Ok(())
}

pub const SAMPLE_COLUMNS: [&str; 8] = ["x", "y", "z", "u", "v", "w", "rho", "p"];

/// One output row per grid point: padded coordinates plus the flow state.
pub type SampleRow = [f64; 8];

pub fn write_sample_csv(path: &Path, rows: &[SampleRow]) -> std::io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{}", SAMPLE_COLUMNS.join(","))?;
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| fmt(*v)).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn write_sample_json(path: &Path, rows: &[SampleRow]) -> std::io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let body = json!({
        "columns": SAMPLE_COLUMNS,
        "rows": rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(),
    });
    writeln!(w, "{}", serde_json::to_string(&body)?)?;
    Ok(())
}

/// Legacy VTK structured points, ASCII. Rows must be in grid order with the
/// first axis fastest; for the axisymmetric families the VTK x-axis is the
/// radial coordinate and the y-axis the axial one.
pub fn write_sample_vtk(path: &Path, grid: &GridConfig, rows: &[SampleRow]) -> std::io::Result<()> {
    let dims = grid.shape.len();
    let (nx, ny, nz) = match dims {
        2 => (grid.shape[1], grid.shape[0], 1),
        _ => (grid.shape[0], grid.shape[1], grid.shape[2]),
    };
    let (origin, spacing) = match dims {
        2 => (
            [grid.min[1], grid.min[0], 0.0],
            [
                (grid.max[1] - grid.min[1]) / (grid.shape[1] - 1) as f64,
                (grid.max[0] - grid.min[0]) / (grid.shape[0] - 1) as f64,
                1.0,
            ],
        ),
        _ => (
            [grid.min[0], grid.min[1], grid.min[2]],
            [
                (grid.max[0] - grid.min[0]) / (grid.shape[0] - 1) as f64,
                (grid.max[1] - grid.min[1]) / (grid.shape[1] - 1) as f64,
                (grid.max[2] - grid.min[2]) / (grid.shape[2] - 1) as f64,
            ],
        ),
    };

    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "gasdyn sampled field")?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET STRUCTURED_POINTS")?;
    writeln!(w, "DIMENSIONS {nx} {ny} {nz}")?;
    writeln!(
        w,
        "ORIGIN {} {} {}",
        fmt(origin[0]),
        fmt(origin[1]),
        fmt(origin[2])
    )?;
    writeln!(
        w,
        "SPACING {} {} {}",
        fmt(spacing[0]),
        fmt(spacing[1]),
        fmt(spacing[2])
    )?;
    writeln!(w, "POINT_DATA {}", rows.len())?;

    writeln!(w, "SCALARS density double")?;
    writeln!(w, "LOOKUP_TABLE default")?;
    for row in rows {
        writeln!(w, "{}", fmt(row[6]))?;
    }
    writeln!(w, "SCALARS pressure double")?;
    writeln!(w, "LOOKUP_TABLE default")?;
    for row in rows {
        writeln!(w, "{}", fmt(row[7]))?;
    }
    writeln!(w, "VECTORS velocity double")?;
    for row in rows {
        writeln!(w, "{} {} {}", fmt(row[3]), fmt(row[4]), fmt(row[5]))?;
    }
    Ok(())
}
