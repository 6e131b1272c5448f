//! Interference power and fixed-threshold detection.
//!
//! Detection uses a threshold relative to the map peak rather than CFAR: a
//! cell is reported when it is a local maximum of `|RD|` on its 8-neighbourhood
//! (wrapping in Doppler, clamped in range) and lies within `threshold_db` of
//! the global peak.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sim::RangeDopplerMap;
use crate::waveform::{interference_objective, DesignGrid, PhaseCode};

/// `10·log10(J / ((2L+1)(2P+1)·K))`.
///
/// With this normalisation `x = y` on the single zero-lag point reads
/// `10·log10(K)`. A vanishing objective returns `−∞`.
pub fn interference_power_db<T: Real>(x: &PhaseCode<T>, y: &PhaseCode<T>, grid: &DesignGrid<T>) -> Result<T> {
    let j = interference_objective(x, y, grid)?;
    if j == T::zero() {
        return Ok(T::neg_infinity());
    }
    let norm = T::lit((grid.point_count() * x.len()) as f64);
    Ok(T::lit(10.0) * (j / norm).log10())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    pub range_bin: usize,
    /// Raw DFT bin in `[0, N)`.
    pub doppler_bin: usize,
    /// Same bin on the centred axis.
    pub doppler_index: isize,
    /// Relative to the map peak, so always `<= 0`.
    pub magnitude_db: f64,
    pub range_m: f64,
    pub velocity_mps: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub detections: Vec<Detection>,
    pub threshold_db: f64,
    /// `(range bin, raw Doppler bin)` of the true target, when known.
    pub ground_truth: Option<(usize, usize)>,
}

impl DetectionReport {
    pub fn with_ground_truth(mut self, bins: (usize, usize)) -> Self {
        self.ground_truth = Some(bins);
        self
    }

    /// `(range bin, raw Doppler bin)` of every detection, in report order.
    pub fn bins(&self) -> Vec<(usize, usize)> {
        self.detections.iter().map(|d| (d.range_bin, d.doppler_bin)).collect()
    }

    /// Detections away from the ground-truth bin; all of them when there is no
    /// ground truth.
    pub fn false_alarms(&self) -> Vec<&Detection> {
        self.detections
            .iter()
            .filter(|d| Some((d.range_bin, d.doppler_bin)) != self.ground_truth)
            .collect()
    }

    pub fn target_detected(&self) -> bool {
        self.ground_truth
            .is_some_and(|g| self.detections.iter().any(|d| (d.range_bin, d.doppler_bin) == g))
    }

    pub fn summary_line(&self) -> String {
        let truth = match self.ground_truth {
            Some((m, p)) => format!(
                "target ({m}, {p}) {}",
                if self.target_detected() { "detected" } else { "missed" }
            ),
            None => "no ground truth".to_string(),
        };
        format!(
            "detections: {} at {} dB, false alarms: {}, {}",
            self.detections.len(),
            self.threshold_db,
            self.false_alarms().len(),
            truth
        )
    }
}

/// Local maxima within `threshold_db` (< 0) of the map peak, strongest first;
/// equal magnitudes are ordered by `(range_bin, doppler_bin)`.
pub fn threshold_detect<T: Real>(map: &RangeDopplerMap<T>, threshold_db: f64) -> Result<DetectionReport> {
    if threshold_db.is_nan() || threshold_db >= 0.0 {
        return Err(Error::InvalidConfig {
            field: "threshold_db",
            reason: format!("must be negative (relative to peak), got {threshold_db}"),
        });
    }
    let (rows, cols) = map.data.dim();
    if rows == 0 || cols == 0 {
        return Err(Error::EmptyMap);
    }
    let mags = map.data.mapv(|z| z.norm().to_f64_lossy());
    let peak = mags.iter().copied().fold(0.0, f64::max);
    let mut report = DetectionReport {
        detections: Vec::new(),
        threshold_db,
        ground_truth: None,
    };
    if peak == 0.0 {
        return Ok(report);
    }
    let floor = peak * 10f64.powf(threshold_db / 20.0);

    let mut found = Vec::new();
    for m in 0..rows {
        for p in 0..cols {
            let v = mags[[m, p]];
            if v < floor || v == 0.0 {
                continue;
            }
            let mut is_max = true;
            'nbr: for dm in -1isize..=1 {
                let r = m as isize + dm;
                if r < 0 || r >= rows as isize {
                    continue;
                }
                for dp in -1isize..=1 {
                    let q = (p as isize + dp).rem_euclid(cols as isize) as usize;
                    if (r as usize, q) == (m, p) {
                        continue;
                    }
                    if mags[[r as usize, q]] > v {
                        is_max = false;
                        break 'nbr;
                    }
                }
            }
            if is_max {
                found.push((m, p, v));
            }
        }
    }
    found.sort_by(|a, b| b.2.total_cmp(&a.2).then((a.0, a.1).cmp(&(b.0, b.1))));
    report.detections = found
        .into_iter()
        .map(|(m, p, v)| Detection {
            range_bin: m,
            doppler_bin: p,
            doppler_index: map.centered_index(p),
            magnitude_db: 20.0 * (v / peak).log10(),
            range_m: map.range_m(m).to_f64_lossy(),
            velocity_mps: map.velocity_mps(p).to_f64_lossy(),
        })
        .collect();
    Ok(report)
}
