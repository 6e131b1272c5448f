//! File formats: phase codes (text and JSON), design traces (CSV), and
//! range-Doppler maps (dB CSV and 8-bit PGM heatmap).

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sim::RangeDopplerMap;
use crate::waveform::PhaseCode;

const CODE_HEADER: &str = "# pmcw-code K=";

/// Header line `# pmcw-code K=<K>`, then one phase per line in radians,
/// written with 17 significant digits so it reads back bit-exactly.
pub fn code_to_text<T: Real>(code: &PhaseCode<T>) -> String {
    let mut out = format!("{CODE_HEADER}{}\n", code.len());
    for p in code.phases() {
        writeln!(out, "{:.16e}", p.to_f64_lossy()).expect("write to string");
    }
    out
}

pub fn code_from_text<T: Real>(text: &str) -> Result<PhaseCode<T>> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty code file".into()))?;
    let declared: usize = header
        .strip_prefix(CODE_HEADER)
        .ok_or_else(|| Error::Parse(format!("expected header `{CODE_HEADER}<K>`, found `{header}`")))?
        .trim()
        .parse()
        .map_err(|e| Error::Parse(format!("bad K in header: {e}")))?;
    let mut phases = Vec::with_capacity(declared);
    for (i, line) in lines.filter(|l| !l.starts_with('#')).enumerate() {
        let v: f64 = line
            .parse()
            .map_err(|e| Error::Parse(format!("chip {i}: `{line}`: {e}")))?;
        phases.push(T::lit(v));
    }
    if phases.len() != declared {
        return Err(Error::Parse(format!(
            "header declares K={declared} but file holds {} phases",
            phases.len()
        )));
    }
    PhaseCode::from_phases(phases)
}

/// JSON array of phases in radians.
pub fn code_to_json<T: Real>(code: &PhaseCode<T>) -> String {
    let phases: Vec<f64> = code.phases().iter().map(|p| p.to_f64_lossy()).collect();
    serde_json::to_string(&phases).expect("finite phases serialise")
}

pub fn code_from_json<T: Real>(text: &str) -> Result<PhaseCode<T>> {
    let phases: Vec<f64> = serde_json::from_str(text)?;
    PhaseCode::from_phases(phases.into_iter().map(T::lit).collect())
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

/// Reads a code file; `.json` selects the JSON format, anything else text.
pub fn read_code<T: Real>(path: &Path) -> Result<PhaseCode<T>> {
    let text = std::fs::read_to_string(path)?;
    if is_json(path) {
        code_from_json(&text)
    } else {
        code_from_text(&text)
    }
}

pub fn write_code<T: Real>(path: &Path, code: &PhaseCode<T>) -> Result<()> {
    let text = if is_json(path) {
        code_to_json(code)
    } else {
        code_to_text(code)
    };
    std::fs::write(path, text)?;
    Ok(())
}

fn fmt_db(v: f64) -> String {
    if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{v:.6}")
    }
}

/// Magnitudes in dB. Row per range bin with the range in metres in column 0;
/// Doppler bins in centred order with their velocity (m/s) in the header.
pub fn rd_map_to_csv<T: Real>(map: &RangeDopplerMap<T>) -> String {
    let order = map.display_order();
    let mut out = String::from("range_m");
    for &p in &order {
        write!(out, ",{:.6}", map.velocity_mps(p).to_f64_lossy()).expect("write to string");
    }
    out.push('\n');
    for m in 0..map.range_bins() {
        write!(out, "{:.6}", map.range_m(m).to_f64_lossy()).expect("write to string");
        for &p in &order {
            write!(out, ",{}", fmt_db(map.magnitude_db(m, p).to_f64_lossy())).expect("write to string");
        }
        out.push('\n');
    }
    out
}

/// Finite `(min, max)` of the dB values across all maps, if any cell is nonzero.
fn db_range<T: Real>(maps: &[&RangeDopplerMap<T>]) -> Option<(f64, f64)> {
    let mut range: Option<(f64, f64)> = None;
    for map in maps {
        for z in map.data.iter() {
            let db = 20.0 * z.norm().to_f64_lossy().log10();
            if db.is_finite() {
                range = Some(match range {
                    None => (db, db),
                    Some((lo, hi)) => (lo.min(db), hi.max(db)),
                });
            }
        }
    }
    range
}

fn gray(db: f64, range: Option<(f64, f64)>) -> u8 {
    match range {
        Some((lo, hi)) if hi > lo && db.is_finite() => (((db - lo) / (hi - lo)).clamp(0.0, 1.0) * 255.0).round() as u8,
        Some((lo, _)) if db.is_finite() && db >= lo => 255,
        _ => 0,
    }
}

/// Binary 8-bit PGM (P5) of one or more maps side by side, sharing one
/// min/max dB normalisation. Rows are range bins, columns centred Doppler
/// bins; a one-pixel black column separates adjacent maps. The comment line
/// records the dB span mapped onto 0..255.
pub fn rd_maps_to_pgm<T: Real>(maps: &[&RangeDopplerMap<T>]) -> Vec<u8> {
    let rows = maps.iter().map(|m| m.range_bins()).max().unwrap_or(0);
    let width = maps.iter().map(|m| m.doppler_bins()).sum::<usize>() + maps.len().saturating_sub(1);
    let range = db_range(maps);
    let comment = match range {
        Some((lo, hi)) => format!("# dB range: {lo:.6} {hi:.6}"),
        None => "# dB range: -inf -inf".to_string(),
    };
    let mut out = format!("P5\n{comment}\n{width} {rows}\n255\n").into_bytes();
    let orders: Vec<Vec<usize>> = maps.iter().map(|m| m.display_order()).collect();
    for r in 0..rows {
        for (i, (map, order)) in maps.iter().zip(&orders).enumerate() {
            if i > 0 {
                out.push(0);
            }
            for &p in order {
                let db = if r < map.range_bins() {
                    map.magnitude_db(r, p).to_f64_lossy()
                } else {
                    f64::NEG_INFINITY
                };
                out.push(gray(db, range));
            }
        }
    }
    out
}

pub fn rd_map_to_pgm<T: Real>(map: &RangeDopplerMap<T>) -> Vec<u8> {
    rd_maps_to_pgm(&[map])
}
