//! Sampled space-time functions on uniform grids, with spectral and
//! finite-difference utilities shared by the solvers, the operator layers and
//! the physics residuals.

use crate::fft;
use ndarray::{Array3, ArrayView3};
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Error, Debug)]
pub enum GridError {
    #[error("axis {0:?} is not present on this function")]
    AxisMissing(GridAxis),
    #[error("{requested} modes exceed the {representable} representable on {points} points")]
    ModesExceedRepresentable {
        requested: usize,
        representable: usize,
        points: usize,
    },
    #[error("target resolution {target} is below the {min} needed for {modes} retained modes")]
    TargetResolutionTooSmall {
        target: usize,
        min: usize,
        modes: usize,
    },
    #[error("axis {0:?} is not periodic; spectral derivatives need a periodic axis")]
    NonPeriodicAxis(GridAxis),
    #[error("time axis has {0} points; at least 3 are required for finite differences")]
    TooFewTimePoints(usize),
    #[error("derivative order {0} is not supported (expected 1, 2 or 4)")]
    UnsupportedOrder(usize),
    #[error("non-finite value encountered in grid function")]
    NonFinite,
    #[error("channel count {values} does not match {names} channel names")]
    ChannelMismatch { values: usize, names: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

/// Axis selector for grid operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GridAxis {
    Space,
    Time,
}

/// Uniform sampling of one axis: samples sit at `start + i * step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisDomain {
    pub start: f64,
    pub step: f64,
    /// Whether the axis is treated as periodic (spatial axis of the KS
    /// system). The period is `step * points`, one step past the last sample.
    pub periodic: bool,
}

impl AxisDomain {
    pub fn new(start: f64, step: f64, periodic: bool) -> Self {
        assert!(step > 0.0, "axis step must be positive");
        AxisDomain {
            start,
            step,
            periodic,
        }
    }

    pub fn sample(&self, i: usize) -> f64 {
        self.start + self.step * i as f64
    }

    /// Closed-interval bounds over the actual samples.
    pub fn bounds(&self, points: usize) -> (f64, f64) {
        (self.start, self.sample(points.saturating_sub(1)))
    }

    /// Period length for periodic axes: one spacing beyond the last sample.
    pub fn period(&self, points: usize) -> f64 {
        self.step * points as f64
    }
}

/// A real-valued function sampled on a uniform grid, stored as
/// `[channel, x, t]`. Functions without a spatial axis keep `nx == 1` and
/// `space == None`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    values: Array3<f64>,
    space: Option<AxisDomain>,
    time: AxisDomain,
    channel_names: Vec<String>,
}

impl GridFunction {
    pub fn new(
        values: Array3<f64>,
        space: Option<AxisDomain>,
        time: AxisDomain,
        channel_names: Vec<String>,
    ) -> Result<Self, GridError> {
        if values.dim().0 != channel_names.len() {
            return Err(GridError::ChannelMismatch {
                values: values.dim().0,
                names: channel_names.len(),
            });
        }
        if space.is_none() && values.dim().1 != 1 {
            return Err(GridError::ShapeMismatch(format!(
                "nx = {} but no space axis is declared",
                values.dim().1
            )));
        }
        Ok(GridFunction {
            values,
            space,
            time,
            channel_names,
        })
    }

    /// A purely temporal function: channels x time.
    pub fn from_time_series(
        values: ndarray::Array2<f64>,
        time: AxisDomain,
        channel_names: Vec<String>,
    ) -> Result<Self, GridError> {
        let (nc, nt) = values.dim();
        let v3 = values.into_shape_with_order((nc, 1, nt)).expect("reshape");
        GridFunction::new(v3, None, time, channel_names)
    }

    pub fn values(&self) -> ArrayView3<'_, f64> {
        self.values.view()
    }

    pub fn values_mut(&mut self) -> &mut Array3<f64> {
        &mut self.values
    }

    pub fn into_values(self) -> Array3<f64> {
        self.values
    }

    pub fn channels(&self) -> usize {
        self.values.dim().0
    }

    pub fn nx(&self) -> usize {
        self.values.dim().1
    }

    pub fn nt(&self) -> usize {
        self.values.dim().2
    }

    pub fn space(&self) -> Option<&AxisDomain> {
        self.space.as_ref()
    }

    pub fn time(&self) -> &AxisDomain {
        &self.time
    }

    pub fn channel_names(&self) -> &[String] {
        &self.channel_names
    }

    pub fn has_space(&self) -> bool {
        self.space.is_some()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Density-weighted discrete L2 norm: sqrt of the mean of squares over
    /// every channel and grid point. Invariant under grid refinement of the
    /// same underlying function.
    pub fn rms_norm(&self) -> f64 {
        let n = self.values.len() as f64;
        (self.values.iter().map(|v| v * v).sum::<f64>() / n).sqrt()
    }

    /// Restrict to a contiguous time-index range `[i0, i1)`.
    pub fn time_slice(&self, i0: usize, i1: usize) -> GridFunction {
        let values = self
            .values
            .slice(ndarray::s![.., .., i0..i1])
            .to_owned();
        GridFunction {
            values,
            space: self.space,
            time: AxisDomain::new(self.time.sample(i0), self.time.step, false),
            channel_names: self.channel_names.clone(),
        }
    }

    /// Concatenate along the time axis; the pieces must abut on the same grid.
    pub fn concat_time(parts: &[GridFunction]) -> Result<GridFunction, GridError> {
        assert!(!parts.is_empty());
        let first = &parts[0];
        let (nc, nx) = (first.channels(), first.nx());
        let dt = first.time.step;
        let total: usize = parts.iter().map(|p| p.nt()).sum();
        let mut values = Array3::<f64>::zeros((nc, nx, total));
        let mut offset = 0usize;
        for p in parts {
            if p.channels() != nc || p.nx() != nx {
                return Err(GridError::ShapeMismatch(
                    "concat_time pieces disagree in shape".into(),
                ));
            }
            values
                .slice_mut(ndarray::s![.., .., offset..offset + p.nt()])
                .assign(&p.values);
            offset += p.nt();
        }
        Ok(GridFunction {
            values,
            space: first.space,
            time: AxisDomain::new(first.time.start, dt, false),
            channel_names: first.channel_names.clone(),
        })
    }
}

/// How one axis is represented inside [`SpectralCoeffs`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeSpec {
    /// Axis left in physical (sample) space.
    Physical,
    /// Axis transformed, keeping the `k` lowest-frequency modes.
    Transformed { k: usize },
}

/// Truncated Fourier representation of a [`GridFunction`].
///
/// The time axis of real input is stored as the non-negative half spectrum
/// (bins `0..k`); the spatial axis keeps the full signed set of lowest
/// frequencies (`0, ±1, .., ±(k-1)`), in FFT layout order. Coefficients are
/// unscaled forward-transform values; the inverse divides by the origin
/// resolution, which makes reconstruction independent of the target grid.
#[derive(Debug, Clone)]
pub struct SpectralCoeffs {
    coeffs: Array3<Complex64>,
    mode_x: ModeSpec,
    mode_t: ModeSpec,
    origin_nx: usize,
    origin_nt: usize,
    space: Option<AxisDomain>,
    time: AxisDomain,
    channel_names: Vec<String>,
}

impl SpectralCoeffs {
    pub fn coeffs(&self) -> &Array3<Complex64> {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut Array3<Complex64> {
        &mut self.coeffs
    }

    pub fn mode_x(&self) -> ModeSpec {
        self.mode_x
    }

    pub fn mode_t(&self) -> ModeSpec {
        self.mode_t
    }

    pub fn origin_resolution(&self) -> (usize, usize) {
        (self.origin_nx, self.origin_nt)
    }
}

/// Signed frequencies stored for a spatial axis of `n` points truncated to
/// `k` lowest modes, in FFT layout order.
pub fn space_mode_freqs(n: usize, k: usize) -> Vec<i64> {
    let mut freqs = Vec::new();
    for i in 0..n {
        let m = if i <= (n - 1) / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        };
        if m.unsigned_abs() as usize <= k - 1 {
            freqs.push(m);
        }
    }
    freqs
}

fn max_modes(n: usize) -> usize {
    n / 2 + 1
}

/// Lowest-k-modes forward DFT of `f` over the requested axes.
///
/// `k_x`/`k_t` give the per-axis retained mode counts and must be
/// representable on the grid (`k <= n/2 + 1`).
pub fn forward_transform(
    f: &GridFunction,
    axes: &[GridAxis],
    k_x: Option<usize>,
    k_t: Option<usize>,
) -> Result<SpectralCoeffs, GridError> {
    let transform_x = axes.contains(&GridAxis::Space);
    let transform_t = axes.contains(&GridAxis::Time);
    if transform_x && !f.has_space() {
        return Err(GridError::AxisMissing(GridAxis::Space));
    }
    let (nc, nx, nt) = f.values.dim();
    let kx = if transform_x {
        let k = k_x.unwrap_or(max_modes(nx));
        if k == 0 || k > max_modes(nx) {
            return Err(GridError::ModesExceedRepresentable {
                requested: k,
                representable: max_modes(nx),
                points: nx,
            });
        }
        if nx < 2 * k {
            log::warn!("spatial axis has {nx} points for {k} modes; 2k points recommended");
        }
        Some(k)
    } else {
        None
    };
    let kt = if transform_t {
        let k = k_t.unwrap_or(max_modes(nt));
        if k == 0 || k > max_modes(nt) {
            return Err(GridError::ModesExceedRepresentable {
                requested: k,
                representable: max_modes(nt),
                points: nt,
            });
        }
        if nt < 2 * k {
            log::warn!("time axis has {nt} points for {k} modes; 2k points recommended");
        }
        Some(k)
    } else {
        None
    };

    // Full-resolution complex spectrum along the transformed axes.
    let mut work: Array3<Complex64> = Array3::zeros((nc, nx, nt));
    for ((c, ix, it), v) in f.values.indexed_iter() {
        work[[c, ix, it]] = Complex64::new(*v, 0.0);
    }
    if transform_t {
        let mut row = vec![Complex64::new(0.0, 0.0); nt];
        for c in 0..nc {
            for ix in 0..nx {
                for it in 0..nt {
                    row[it] = work[[c, ix, it]];
                }
                fft::fft_inplace(&mut row, false);
                for it in 0..nt {
                    work[[c, ix, it]] = row[it];
                }
            }
        }
    }
    if transform_x {
        let mut col = vec![Complex64::new(0.0, 0.0); nx];
        for c in 0..nc {
            for it in 0..nt {
                for ix in 0..nx {
                    col[ix] = work[[c, ix, it]];
                }
                fft::fft_inplace(&mut col, false);
                for ix in 0..nx {
                    work[[c, ix, it]] = col[ix];
                }
            }
        }
    }

    // Truncate: signed lowest modes along x, half spectrum along t.
    let x_rows: Vec<usize> = match kx {
        Some(k) => {
            let freqs = space_mode_freqs(nx, k);
            freqs
                .iter()
                .map(|&m| if m >= 0 { m as usize } else { (nx as i64 + m) as usize })
                .collect()
        }
        None => (0..nx).collect(),
    };
    let t_cols: Vec<usize> = match kt {
        Some(k) => (0..k).collect(),
        None => (0..nt).collect(),
    };
    let mut coeffs = Array3::<Complex64>::zeros((nc, x_rows.len(), t_cols.len()));
    for c in 0..nc {
        for (i, &ix) in x_rows.iter().enumerate() {
            for (j, &it) in t_cols.iter().enumerate() {
                coeffs[[c, i, j]] = work[[c, ix, it]];
            }
        }
    }
    Ok(SpectralCoeffs {
        coeffs,
        mode_x: match kx {
            Some(k) => ModeSpec::Transformed { k },
            None => ModeSpec::Physical,
        },
        mode_t: match kt {
            Some(k) => ModeSpec::Transformed { k },
            None => ModeSpec::Physical,
        },
        origin_nx: nx,
        origin_nt: nt,
        space: f.space,
        time: f.time,
        channel_names: f.channel_names.clone(),
    })
}

/// Evaluate a truncated spectrum on a (possibly different) uniform grid.
///
/// Unrepresented modes are zero-padded, which makes this the
/// discretization-invariance mechanism: the same coefficients evaluate at any
/// resolution at least `2k - 1` points per transformed axis.
pub fn inverse_transform(
    c: &SpectralCoeffs,
    target_nx: Option<usize>,
    target_nt: Option<usize>,
) -> Result<GridFunction, GridError> {
    let (nc, snx, snt) = c.coeffs.dim();
    let out_nx = match c.mode_x {
        ModeSpec::Transformed { k } => {
            let nx = target_nx.unwrap_or(c.origin_nx);
            // Every stored signed frequency must be representable on the
            // target grid: +m needs ceil(n/2) > m, -m needs floor(n/2) >= m.
            let freqs = space_mode_freqs(c.origin_nx, k);
            let max_pos = freqs.iter().copied().max().unwrap_or(0).max(0) as usize;
            let max_neg = (-freqs.iter().copied().min().unwrap_or(0)).max(0) as usize;
            let min_n = (2 * max_pos + 1).max(2 * max_neg);
            if nx < min_n {
                return Err(GridError::TargetResolutionTooSmall {
                    target: nx,
                    min: min_n,
                    modes: k,
                });
            }
            nx
        }
        ModeSpec::Physical => snx,
    };
    let out_nt = match c.mode_t {
        ModeSpec::Transformed { k } => {
            let nt = target_nt.unwrap_or(c.origin_nt);
            let min_n = if k > 1 { 2 * (k - 1) } else { 1 };
            if nt < min_n {
                return Err(GridError::TargetResolutionTooSmall {
                    target: nt,
                    min: min_n,
                    modes: k,
                });
            }
            nt
        }
        ModeSpec::Physical => snt,
    };

    // Scatter into a full [c, out_nx, out_nt/2+1] half spectrum.
    let nf = out_nt / 2 + 1;
    let mut full = Array3::<Complex64>::zeros((nc, out_nx, nf));
    let x_targets: Vec<usize> = match c.mode_x {
        ModeSpec::Transformed { k } => space_mode_freqs(c.origin_nx, k)
            .iter()
            .map(|&m| {
                if m >= 0 {
                    m as usize
                } else {
                    (out_nx as i64 + m) as usize
                }
            })
            .collect(),
        ModeSpec::Physical => (0..snx).collect(),
    };
    match (c.mode_t, c.mode_x) {
        (ModeSpec::Transformed { k: kt }, _) => {
            for ch in 0..nc {
                for (i, &xi) in x_targets.iter().enumerate() {
                    for j in 0..kt.min(nf) {
                        full[[ch, xi, j]] = c.coeffs[[ch, i, j]];
                    }
                }
            }
        }
        (ModeSpec::Physical, _) => {
            // Time stays physical: handle by inverse along x only.
            let mut out = Array3::<f64>::zeros((nc, out_nx, snt));
            let mut col = vec![Complex64::new(0.0, 0.0); out_nx];
            for ch in 0..nc {
                for it in 0..snt {
                    for z in col.iter_mut() {
                        *z = Complex64::new(0.0, 0.0);
                    }
                    for (i, &xi) in x_targets.iter().enumerate() {
                        col[xi] = c.coeffs[[ch, i, it]];
                    }
                    fft::fft_inplace(&mut col, true);
                    for ix in 0..out_nx {
                        out[[ch, ix, it]] = col[ix].re / c.origin_nx as f64;
                    }
                }
            }
            let space = c.space.map(|s| {
                AxisDomain::new(s.start, s.period(c.origin_nx) / out_nx as f64, s.periodic)
            });
            return GridFunction::new(out, space, c.time, c.channel_names.clone());
        }
    }

    // Inverse along x (if transformed) then along t, scaling by the origin
    // resolution so coefficients represent the function, not the grid.
    let x_transformed = matches!(c.mode_x, ModeSpec::Transformed { .. });
    let mut work = full;
    if x_transformed && out_nx > 1 {
        let mut col = vec![Complex64::new(0.0, 0.0); out_nx];
        for ch in 0..nc {
            for j in 0..nf {
                for ix in 0..out_nx {
                    col[ix] = work[[ch, ix, j]];
                }
                fft::fft_inplace(&mut col, true);
                for ix in 0..out_nx {
                    work[[ch, ix, j]] = col[ix] / c.origin_nx as f64;
                }
            }
        }
    }
    let mut out = Array3::<f64>::zeros((nc, out_nx, out_nt));
    for ch in 0..nc {
        for ix in 0..out_nx {
            let half: Vec<Complex64> = (0..nf).map(|j| work[[ch, ix, j]]).collect();
            let mut row = fft::irfft(&half, out_nt);
            // irfft scales by the target length; rescale to the origin count.
            let fix = out_nt as f64 / c.origin_nt as f64;
            for v in row.iter_mut() {
                *v *= fix;
            }
            for (it, v) in row.into_iter().enumerate() {
                out[[ch, ix, it]] = v;
            }
        }
    }
    let space = c
        .space
        .map(|s| AxisDomain::new(s.start, s.period(c.origin_nx) / out_nx as f64, s.periodic));
    let time = AxisDomain::new(
        c.time.start,
        c.time.step * c.origin_nt as f64 / out_nt as f64,
        false,
    );
    GridFunction::new(out, space, time, c.channel_names.clone())
}

/// Spectral derivative along a periodic axis: mode `m` is multiplied by
/// `(i m 2 pi / L)^order`. Odd orders zero the Nyquist bin as usual.
pub fn spectral_derivative(
    f: &GridFunction,
    axis: GridAxis,
    order: usize,
) -> Result<GridFunction, GridError> {
    if axis == GridAxis::Time {
        return Err(GridError::NonPeriodicAxis(GridAxis::Time));
    }
    let space = f.space.ok_or(GridError::AxisMissing(GridAxis::Space))?;
    if !space.periodic {
        return Err(GridError::NonPeriodicAxis(GridAxis::Space));
    }
    if !matches!(order, 1 | 2 | 4) {
        return Err(GridError::UnsupportedOrder(order));
    }
    let (nc, nx, nt) = f.values.dim();
    let period = space.period(nx);
    let scale = 2.0 * PI / period;
    let mut col = vec![Complex64::new(0.0, 0.0); nx];
    let mut out = Array3::<f64>::zeros((nc, nx, nt));
    for c in 0..nc {
        for it in 0..nt {
            for ix in 0..nx {
                col[ix] = Complex64::new(f.values[[c, ix, it]], 0.0);
            }
            fft::fft_inplace(&mut col, false);
            for (ix, z) in col.iter_mut().enumerate() {
                let m = if ix <= (nx - 1) / 2 {
                    ix as i64
                } else {
                    ix as i64 - nx as i64
                };
                if nx % 2 == 0 && ix == nx / 2 && order % 2 == 1 {
                    *z = Complex64::new(0.0, 0.0);
                    continue;
                }
                let factor = (Complex64::new(0.0, m as f64 * scale)).powu(order as u32);
                *z *= factor;
            }
            fft::fft_inplace(&mut col, true);
            for ix in 0..nx {
                out[[c, ix, it]] = col[ix].re / nx as f64;
            }
        }
    }
    GridFunction::new(out, f.space, f.time, f.channel_names.clone())
}

/// First time derivative by second-order finite differences: central stencils
/// in the interior, one-sided second-order stencils at both endpoints.
pub fn finite_difference_time(f: &GridFunction) -> Result<GridFunction, GridError> {
    let (nc, nx, nt) = f.values.dim();
    if nt < 3 {
        return Err(GridError::TooFewTimePoints(nt));
    }
    let dt = f.time.step;
    let mut out = Array3::<f64>::zeros((nc, nx, nt));
    for c in 0..nc {
        for ix in 0..nx {
            let v = |it: usize| f.values[[c, ix, it]];
            out[[c, ix, 0]] = (-3.0 * v(0) + 4.0 * v(1) - v(2)) / (2.0 * dt);
            for it in 1..nt - 1 {
                out[[c, ix, it]] = (v(it + 1) - v(it - 1)) / (2.0 * dt);
            }
            out[[c, ix, nt - 1]] = (3.0 * v(nt - 1) - 4.0 * v(nt - 2) + v(nt - 3)) / (2.0 * dt);
        }
    }
    GridFunction::new(out, f.space, f.time, f.channel_names.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{Array2, Array3};
    use proptest::prelude::*;

    fn space_fn(values: Vec<f64>) -> GridFunction {
        let n = values.len();
        let arr = Array3::from_shape_vec((1, n, 1), values).unwrap();
        GridFunction::new(
            arr,
            Some(AxisDomain::new(0.0, 2.0 * PI / n as f64, true)),
            AxisDomain::new(0.0, 1.0, false),
            vec!["u".into()],
        )
        .unwrap()
    }

    fn time_fn(values: Vec<f64>, dt: f64) -> GridFunction {
        let n = values.len();
        GridFunction::from_time_series(
            Array2::from_shape_vec((1, n), values).unwrap(),
            AxisDomain::new(0.0, dt, false),
            vec!["u".into()],
        )
        .unwrap()
    }

    /// O(n^2) reference DFT used as the independent oracle for truncation.
    fn dft_oracle_bandlimit(values: &[f64], k: usize) -> Vec<f64> {
        let n = values.len();
        let mut out = vec![0.0; n];
        for m in 0..n {
            let fm = if m <= (n - 1) / 2 {
                m as i64
            } else {
                m as i64 - n as i64
            };
            if fm.unsigned_abs() as usize > k - 1 {
                continue;
            }
            let mut c = Complex64::new(0.0, 0.0);
            for (j, &v) in values.iter().enumerate() {
                let ang = -2.0 * PI * (m * j) as f64 / n as f64;
                c += Complex64::new(ang.cos(), ang.sin()) * v;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let ang = 2.0 * PI * (m * j) as f64 / n as f64;
                *o += (c * Complex64::new(ang.cos(), ang.sin())).re / n as f64;
            }
        }
        out
    }

    #[test]
    fn constant_maps_to_dc_mode() {
        let f = space_fn(vec![3.5; 16]);
        let c = forward_transform(&f, &[GridAxis::Space], Some(1), None).unwrap();
        assert_eq!(c.coeffs().dim(), (1, 1, 1));
        // Forward is unscaled: DC bin is c * n.
        assert!((c.coeffs()[[0, 0, 0]].re - 3.5 * 16.0).abs() < 1e-10);
        assert!(c.coeffs()[[0, 0, 0]].im.abs() < 1e-10);
    }

    #[test]
    fn sine_concentrates_in_mode_one() {
        let n = 64;
        let vals: Vec<f64> = (0..n).map(|i| (2.0 * PI * i as f64 / n as f64).sin()).collect();
        let f = space_fn(vals);
        let c = forward_transform(&f, &[GridAxis::Space], Some(3), None).unwrap();
        // layout: [0, 1, 2, -2, -1]
        let mag = |i: usize| c.coeffs()[[0, i, 0]].norm();
        let m1 = mag(1);
        assert!(m1 > 1.0);
        assert!(mag(0) <= 1e-10 * m1);
        assert!(mag(2) <= 1e-10 * m1);
    }

    #[test]
    fn full_roundtrip_is_identity() {
        let vals: Vec<f64> = (0..16).map(|i| ((i * i) as f64 * 0.17).sin()).collect();
        let f = space_fn(vals.clone());
        let c = forward_transform(&f, &[GridAxis::Space], Some(9), None).unwrap();
        let back = inverse_transform(&c, None, None).unwrap();
        let norm: f64 = vals.iter().map(|v| v * v).sum::<f64>().sqrt();
        for (a, b) in f.values().iter().zip(back.values().iter()) {
            assert!((a - b).abs() <= 1e-10 * norm.max(1.0));
        }
    }

    #[test]
    fn modes_exceeding_representable_error() {
        let f = space_fn(vec![0.0; 16]);
        assert!(matches!(
            forward_transform(&f, &[GridAxis::Space], Some(10), None),
            Err(GridError::ModesExceedRepresentable { .. })
        ));
    }

    #[test]
    fn missing_axis_errors() {
        let f = time_fn(vec![0.0; 8], 0.1);
        assert!(matches!(
            forward_transform(&f, &[GridAxis::Space], Some(2), None),
            Err(GridError::AxisMissing(GridAxis::Space))
        ));
    }

    #[test]
    fn dc_coefficient_reconstructs_constant_anywhere() {
        let f = space_fn(vec![2.25; 8]);
        let c = forward_transform(&f, &[GridAxis::Space], Some(1), None).unwrap();
        for target in [8usize, 16, 33] {
            let g = inverse_transform(&c, Some(target), None).unwrap();
            assert_eq!(g.nx(), target);
            for v in g.values().iter() {
                assert!((v - 2.25).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sine_upsamples_to_analytic_values() {
        let n = 64;
        let vals: Vec<f64> = (0..n).map(|i| (2.0 * PI * i as f64 / n as f64).sin()).collect();
        let f = space_fn(vals);
        let c = forward_transform(&f, &[GridAxis::Space], Some(3), None).unwrap();
        let g = inverse_transform(&c, Some(128), None).unwrap();
        for i in 0..128 {
            let x = 2.0 * PI * i as f64 / 128.0;
            assert!((g.values()[[0, i, 0]] - x.sin()).abs() < 1e-8);
        }
    }

    #[test]
    fn truncation_matches_dft_oracle() {
        let vals: Vec<f64> = (0..32)
            .map(|i| {
                let x = 2.0 * PI * i as f64 / 32.0;
                (x).sin() + 0.5 * (3.0 * x).cos() + 0.25 * (7.0 * x).sin() - 0.8 * (6.0 * x).cos()
            })
            .collect();
        let f = space_fn(vals.clone());
        let c = forward_transform(&f, &[GridAxis::Space], Some(4), None).unwrap();
        let g = inverse_transform(&c, None, None).unwrap();
        let oracle = dft_oracle_bandlimit(&vals, 4);
        for (i, &o) in oracle.iter().enumerate() {
            assert!(
                (g.values()[[0, i, 0]] - o).abs() < 1e-10,
                "mismatch at {i}: {} vs {}",
                g.values()[[0, i, 0]],
                o
            );
        }
    }

    #[test]
    fn target_resolution_too_small_errors() {
        let f = space_fn(vec![1.0; 16]);
        let c = forward_transform(&f, &[GridAxis::Space], Some(5), None).unwrap();
        assert!(matches!(
            inverse_transform(&c, Some(8), None),
            Err(GridError::TargetResolutionTooSmall { .. })
        ));
    }

    #[test]
    fn spectral_derivative_eigenfunctions() {
        let n = 64;
        let xs: Vec<f64> = (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect();
        let f = space_fn(xs.iter().map(|x| x.sin()).collect());
        let d2 = spectral_derivative(&f, GridAxis::Space, 2).unwrap();
        for (i, &x) in xs.iter().enumerate() {
            assert!((d2.values()[[0, i, 0]] + x.sin()).abs() < 1e-8);
        }
        let f2 = space_fn(xs.iter().map(|x| (2.0 * x).sin()).collect());
        let d4 = spectral_derivative(&f2, GridAxis::Space, 4).unwrap();
        for (i, &x) in xs.iter().enumerate() {
            assert!((d4.values()[[0, i, 0]] - 16.0 * (2.0 * x).sin()).abs() < 1e-8);
        }
    }

    #[test]
    fn spectral_derivative_matches_finite_difference() {
        // Random band-limited signal on 256 points; 6th-order central FD oracle.
        let n = 256;
        let mut vals = vec![0.0; n];
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut rand01 = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let amps: Vec<(f64, f64)> = (1..=8).map(|_| (rand01() - 0.5, rand01() * PI)).collect();
        for (i, v) in vals.iter_mut().enumerate() {
            let x = 2.0 * PI * i as f64 / n as f64;
            for (m, &(a, ph)) in amps.iter().enumerate() {
                *v += a * ((m as f64 + 1.0) * x + ph).sin();
            }
        }
        let f = space_fn(vals.clone());
        let d1 = spectral_derivative(&f, GridAxis::Space, 1).unwrap();
        let h = 2.0 * PI / n as f64;
        let mut max_rel: f64 = 0.0;
        let scale = d1.rms_norm();
        for i in 0..n {
            let g = |o: i64| vals[((i as i64 + o).rem_euclid(n as i64)) as usize];
            let fd = (-g(-3) + 9.0 * g(-2) - 45.0 * g(-1) + 45.0 * g(1) - 9.0 * g(2) + g(3))
                / (60.0 * h);
            max_rel = max_rel.max((d1.values()[[0, i, 0]] - fd).abs() / scale);
        }
        assert!(max_rel < 1e-4, "max rel err {max_rel}");
    }

    #[test]
    fn derivative_on_time_axis_rejected() {
        let f = time_fn(vec![1.0, 2.0, 3.0, 4.0], 0.1);
        assert!(matches!(
            spectral_derivative(&f, GridAxis::Time, 1),
            Err(GridError::NonPeriodicAxis(GridAxis::Time))
        ));
    }

    #[test]
    fn fd_time_exact_on_linear_and_quadratic() {
        let n = 11;
        let dt = 0.1;
        let lin = time_fn((0..n).map(|i| i as f64 * dt).collect(), dt);
        let d = finite_difference_time(&lin).unwrap();
        for v in d.values().iter() {
            assert!((v - 1.0).abs() < 1e-10);
        }
        let quad = time_fn((0..n).map(|i| (i as f64 * dt).powi(2)).collect(), dt);
        let d = finite_difference_time(&quad).unwrap();
        for (i, v) in d.values().iter().enumerate() {
            assert!((v - 2.0 * (i as f64 * dt)).abs() < 1e-10);
        }
    }

    #[test]
    fn fd_time_sine_second_order() {
        let n = 101;
        let dt = 2.0 * PI / (n as f64 - 1.0);
        let f = time_fn((0..n).map(|i| (i as f64 * dt).sin()).collect(), dt);
        let d = finite_difference_time(&f).unwrap();
        let mut max_err: f64 = 0.0;
        for (i, v) in d.values().iter().enumerate() {
            max_err = max_err.max((v - (i as f64 * dt).cos()).abs());
        }
        assert!(max_err <= 5e-3, "max err {max_err}");
    }

    #[test]
    fn fd_time_needs_three_points() {
        let f = time_fn(vec![1.0, 2.0], 0.1);
        assert!(matches!(
            finite_difference_time(&f),
            Err(GridError::TooFewTimePoints(2))
        ));
    }

    #[test]
    fn parseval_under_convention() {
        // sum v^2 / n == sum over stored bins of w_m |c_m|^2 / n^2 with
        // w_m = 2 for bins with an implicit conjugate partner.
        let n = 32;
        let vals: Vec<f64> = (0..n).map(|i| ((i as f64) * 0.61).sin() + 0.2).collect();
        let f = time_fn(vals.clone(), 0.1);
        let c = forward_transform(&f, &[GridAxis::Time], None, Some(n / 2 + 1)).unwrap();
        let lhs: f64 = vals.iter().map(|v| v * v).sum::<f64>() / n as f64;
        let mut rhs = 0.0;
        for (j, z) in c.coeffs().iter().enumerate() {
            let w = if j == 0 || (n % 2 == 0 && j == n / 2) {
                1.0
            } else {
                2.0
            };
            rhs += w * z.norm_sqr() / (n * n) as f64;
        }
        assert!((lhs - rhs).abs() < 1e-10 * lhs.max(1.0));
    }

    proptest! {
        #[test]
        fn roundtrip_property(vals in proptest::collection::vec(-100.0f64..100.0, 16..=16)) {
            let f = space_fn(vals.clone());
            let c = forward_transform(&f, &[GridAxis::Space], Some(9), None).unwrap();
            let back = inverse_transform(&c, None, None).unwrap();
            let norm: f64 = vals.iter().map(|v| v*v).sum::<f64>().sqrt();
            for (a, b) in f.values().iter().zip(back.values().iter()) {
                prop_assert!((a - b).abs() <= 1e-10 * norm.max(1.0));
            }
        }

        #[test]
        fn derivative_linearity(
            a in proptest::collection::vec(-10.0f64..10.0, 32..=32),
            b in proptest::collection::vec(-10.0f64..10.0, 32..=32),
            alpha in -3.0f64..3.0,
            beta in -3.0f64..3.0,
        ) {
            let fa = space_fn(a.clone());
            let fb = space_fn(b.clone());
            let combo = space_fn(a.iter().zip(&b).map(|(x, y)| alpha*x + beta*y).collect());
            let da = spectral_derivative(&fa, GridAxis::Space, 1).unwrap();
            let db = spectral_derivative(&fb, GridAxis::Space, 1).unwrap();
            let dc = spectral_derivative(&combo, GridAxis::Space, 1).unwrap();
            let scale = 1.0 + da.rms_norm().max(db.rms_norm());
            for i in 0..32 {
                let want = alpha*da.values()[[0,i,0]] + beta*db.values()[[0,i,0]];
                prop_assert!((dc.values()[[0,i,0]] - want).abs() <= 1e-9 * scale);
            }
        }

        #[test]
        fn discretization_invariance(seed in 0u64..1000) {
            // Band-limited f: inverse at r and 2r then subsampling agree.
            let n = 32;
            let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
            let mut rand01 = move || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 11) as f64 / (1u64 << 53) as f64
            };
            let vals: Vec<f64> = {
                let amps: Vec<(f64,f64)> = (0..4).map(|_| (rand01()-0.5, rand01()*PI)).collect();
                (0..n).map(|i| {
                    let x = 2.0*PI*i as f64/n as f64;
                    amps.iter().enumerate().map(|(m,&(a,ph))| a*((m as f64+1.0)*x+ph).sin()).sum()
                }).collect()
            };
            let f = space_fn(vals);
            let c = forward_transform(&f, &[GridAxis::Space], Some(6), None).unwrap();
            let g1 = inverse_transform(&c, Some(32), None).unwrap();
            let g2 = inverse_transform(&c, Some(64), None).unwrap();
            for i in 0..32 {
                prop_assert!((g1.values()[[0,i,0]] - g2.values()[[0,2*i,0]]).abs() < 1e-10);
            }
        }
    }
}
