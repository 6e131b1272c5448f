use ndarray::{Array2, Axis};
use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;

use super::{Scenario, WaveformTiming};
use crate::error::{Error, Result};
use crate::scalar::{Real, SPEED_OF_LIGHT};
use crate::waveform::PhaseCode;

/// `D_n(x) = sin(nπx) / (πx)`, with `D_n(0) = n`.
pub fn dirichlet<T: Real>(n: usize, x: T) -> T {
    let n = T::lit(n as f64);
    if x == T::zero() {
        return n;
    }
    let px = T::PI() * x;
    (n * px).sin() / px
}

/// Fast-time × slow-time samples of one delayed, Doppler-shifted copy of
/// `code`: entry `(m, n)` is `a · e^{j2π(f̂ m + f̃ n)} · code[(m − d) mod K]`.
///
/// `doppler_per_chip` is `f_d · T_c`, `doppler_per_burst` is `f_d · T`.
pub fn sample_echo<T: Real>(
    code: &PhaseCode<T>,
    delay_bins: usize,
    doppler_per_chip: T,
    doppler_per_burst: T,
    amplitude: Complex<T>,
    timing: &WaveformTiming<T>,
) -> Result<Array2<Complex<T>>> {
    let k = timing.chips;
    if code.len() != k {
        return Err(Error::DimensionMismatch {
            expected: format!("code of length {k}"),
            found: format!("length {}", code.len()),
        });
    }
    if delay_bins >= k {
        return Err(Error::DelayOutOfRange {
            delay: delay_bins,
            len: k,
        });
    }
    let e = code.entries();
    Ok(Array2::from_shape_fn((k, timing.bursts), |(m, n)| {
        let phase = T::TAU() * (doppler_per_chip * T::lit(m as f64) + doppler_per_burst * T::lit(n as f64));
        amplitude * Complex::from_polar(T::one(), phase) * e[(m + k - delay_bins) % k]
    }))
}

/// Adds circularly symmetric complex Gaussian noise of variance `sigma2` per
/// sample.
///
/// Column `n` draws from ChaCha stream `n` of `seed`, so the result does not
/// depend on evaluation order.
pub fn add_noise<T: Real>(samples: &Array2<Complex<T>>, sigma2: T, seed: u64) -> Array2<Complex<T>> {
    let mut out = samples.clone();
    if sigma2 == T::zero() {
        return out;
    }
    let std = (sigma2 / T::lit(2.0)).sqrt();
    for (n, mut column) in out.axis_iter_mut(Axis(1)).enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(n as u64);
        for z in column.iter_mut() {
            let re = T::sample_normal(&mut rng);
            let im = T::sample_normal(&mut rng);
            *z = *z + Complex::new(re, im) * std;
        }
    }
    out
}

/// Circular matched filter per burst:
/// `out[m, n] = Σ_k conj(x_k) · received[(k + m) mod K, n]`.
pub fn correlate_range<T: Real>(received: &Array2<Complex<T>>, x: &PhaseCode<T>) -> Result<Array2<Complex<T>>> {
    let (k, bursts) = received.dim();
    if x.len() != k {
        return Err(Error::DimensionMismatch {
            expected: format!("{} fast-time rows", x.len()),
            found: format!("{k} rows"),
        });
    }
    let xc: Vec<Complex<T>> = x.entries().iter().map(|z| z.conj()).collect();
    let mut out = Array2::from_elem((k, bursts), Complex::new(T::zero(), T::zero()));
    for n in 0..bursts {
        let column = received.column(n);
        for m in 0..k {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (i, c) in xc.iter().enumerate() {
                acc = acc + c * column[(i + m) % k];
            }
            out[[m, n]] = acc;
        }
    }
    Ok(out)
}

/// Range-Doppler map: complex `K × N` data indexed `[m, p]` with raw DFT bins
/// `p ∈ [0, N)`, plus the physical size of one bin on each axis.
#[derive(Clone, Debug, PartialEq)]
pub struct RangeDopplerMap<T> {
    pub data: Array2<Complex<T>>,
    pub range_bin_m: T,
    pub doppler_bin_hz: T,
    pub carrier_hz: T,
}

impl<T: Real> RangeDopplerMap<T> {
    pub fn range_bins(&self) -> usize {
        self.data.nrows()
    }

    pub fn doppler_bins(&self) -> usize {
        self.data.ncols()
    }

    /// Signed index of raw bin `p` in `[−⌊N/2⌋, ⌈N/2⌉)`.
    pub fn centered_index(&self, p: usize) -> isize {
        let n = self.doppler_bins();
        if p >= n.div_ceil(2) {
            p as isize - n as isize
        } else {
            p as isize
        }
    }

    /// Raw bin indices in increasing centred order (an FFT shift).
    pub fn display_order(&self) -> Vec<usize> {
        let n = self.doppler_bins();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&p| self.centered_index(p));
        order
    }

    pub fn range_m(&self, m: usize) -> T {
        T::lit(m as f64) * self.range_bin_m
    }

    pub fn doppler_hz(&self, p: usize) -> T {
        T::lit(self.centered_index(p) as f64) * self.doppler_bin_hz
    }

    /// Two-way radial velocity of Doppler bin `p`: `f · c / (2 f_c)`.
    pub fn velocity_mps(&self, p: usize) -> T {
        self.doppler_hz(p) * T::lit(SPEED_OF_LIGHT) / (T::lit(2.0) * self.carrier_hz)
    }

    pub fn magnitude(&self, m: usize, p: usize) -> T {
        self.data[[m, p]].norm()
    }

    pub fn energy(&self) -> T {
        self.data.iter().fold(T::zero(), |a, z| a + z.norm_sqr())
    }

    /// `(m, p, |RD|)` of the largest cell.
    pub fn peak(&self) -> Option<(usize, usize, T)> {
        let mut best: Option<(usize, usize, T)> = None;
        for ((m, p), z) in self.data.indexed_iter() {
            let mag = z.norm();
            if best.is_none_or(|(_, _, b)| mag > b) {
                best = Some((m, p, mag));
            }
        }
        best
    }

    /// `20·log10|RD[m, p]|`; zero cells map to `−∞`.
    pub fn magnitude_db(&self, m: usize, p: usize) -> T {
        T::lit(20.0) * self.magnitude(m, p).log10()
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self {
            data: self.data.mapv(|z| z * factor),
            ..self.clone()
        }
    }
}

/// Length-`N` DFT across slow time for every range row:
/// `RD[m, p] = Σ_n profiles[m, n] · e^{−j2πnp/N}`.
pub fn range_doppler<T: Real>(profiles: &Array2<Complex<T>>, timing: &WaveformTiming<T>) -> Result<RangeDopplerMap<T>> {
    let (rows, bursts) = profiles.dim();
    if bursts == 0 || bursts != timing.bursts {
        return Err(Error::DimensionMismatch {
            expected: format!("{} slow-time columns", timing.bursts),
            found: format!("{bursts}"),
        });
    }
    let fft = FftPlanner::<T>::new().plan_fft_forward(bursts);
    let mut data = Array2::from_elem((rows, bursts), Complex::new(T::zero(), T::zero()));
    let mut buf = vec![Complex::new(T::zero(), T::zero()); bursts];
    for (m, row) in profiles.axis_iter(Axis(0)).enumerate() {
        buf.iter_mut().zip(row.iter()).for_each(|(b, z)| *b = *z);
        fft.process(&mut buf);
        data.row_mut(m).iter_mut().zip(&buf).for_each(|(d, b)| *d = *b);
    }
    Ok(RangeDopplerMap {
        data,
        range_bin_m: timing.range_bin_m(),
        doppler_bin_hz: timing.doppler_bin_hz(),
        carrier_hz: timing.carrier_hz,
    })
}

/// Received samples of the scenario before any processing: target echoes of
/// `x`, interference carrying `y`, and noise. Delays longer than one burst
/// wrap modulo `K` because the code repeats every burst.
pub(crate) fn received_samples<T: Real>(
    x: &PhaseCode<T>,
    y: &PhaseCode<T>,
    scenario: &Scenario<T>,
) -> Result<Array2<Complex<T>>> {
    scenario.validate()?;
    let timing = &scenario.timing;
    let k = timing.chips;
    for code in [x, y] {
        if code.len() != k {
            return Err(Error::DimensionMismatch {
                expected: format!("codes of length K = {k}"),
                found: format!("length {}", code.len()),
            });
        }
    }
    let mut received = Array2::from_elem((k, timing.bursts), Complex::new(T::zero(), T::zero()));
    for t in &scenario.targets {
        let fd = t.doppler_hz(timing);
        let d = timing.delay_bins(t.delay_s()) % k;
        received = received + sample_echo(x, d, fd * timing.chip_s, fd * timing.pri_s, t.amplitude, timing)?;
    }
    if let Some(i) = &scenario.interferer {
        let fd = i.doppler_hz(timing);
        let d = timing.delay_bins(i.delay_s()) % k;
        received = received + sample_echo(y, d, fd * timing.chip_s, fd * timing.pri_s, i.amplitude, timing)?;
    }
    Ok(add_noise(&received, scenario.noise_variance, scenario.noise_seed))
}

/// Full chain: echoes + interference + noise, circular correlation with `x`,
/// then slow-time DFT.
pub fn simulate<T: Real>(x: &PhaseCode<T>, y: &PhaseCode<T>, scenario: &Scenario<T>) -> Result<RangeDopplerMap<T>> {
    let received = received_samples(x, y, scenario)?;
    let profiles = correlate_range(&received, x)?;
    range_doppler(&profiles, &scenario.timing)
}
